#pragma once

#include "hylab/arith.hpp"
#include "hylab/config.hpp"
#include "hylab/engine.hpp"
#include "hylab/kernel.hpp"
#include "hylab/metrics.hpp"
#include "hylab/output.hpp"
#include "hylab/parallel.hpp"
#include "hylab/primes.hpp"
#include "hylab/quadrature.hpp"
#include "hylab/random_model.hpp"
#include "hylab/scanner.hpp"
#include "hylab/spec_io.hpp"
#include "hylab/stats.hpp"
