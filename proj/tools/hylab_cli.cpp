// hylab command-line harness. Exit codes: 0 ok, 1 usage, 2 validation, 3 runtime.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hylab/hylab.hpp"

using namespace hylab;
using nlohmann::json;

namespace {

constexpr int kUsage = 1;
constexpr int kValidation = 2;
constexpr int kRuntime = 3;

using Override = std::function<void(ExperimentConfig&)>;

struct Session {
  std::string config_path;
  std::vector<Override> overrides;
  ExperimentConfig config;
  std::string hash;

  void resolve() {
    config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    for (const auto& o : overrides) o(config);
    // re-parse so flag values meet the same key-path validation as file values
    config = config_from_json(to_json(config));
    if (config.threads > 0) set_thread_count(config.threads);
    hash = config_hash(config);
  }

  void emit(const std::string& text) const {
    if (config.output.empty()) {
      std::cout << text << std::flush;
    } else {
      write_atomic(config.output, text);
    }
  }

  CsvWriter csv(const std::string& header) const { return CsvWriter(kVersion, hash, header); }
};

// Registers a flag whose value is written into the config after loading.
template <class T, class Set>
CLI::Option* flag(CLI::App* app, Session& s, const std::string& name, Set set, const std::string& help) {
  return app->add_option_function<T>(
      name, [&s, set](const T& v) { s.overrides.push_back([set, v](ExperimentConfig& c) { set(c, v); }); }, help);
}

void add_specs(CLI::App* app, Session& s) {
  flag<std::vector<std::string>>(app, s, "--spec", [](ExperimentConfig& c, const auto& v) { c.specs = v; },
                                 "spec reference: zeta, chi:q:index, divisor:m or file:path (repeatable)");
}

SmoothingKernel kernel_of(const ExperimentConfig& c) { return SmoothingKernel(c.kernel.support); }

CoefficientTable table_for(const ExperimentConfig& c, std::size_t i, double x) {
  const auto k = kernel_of(c);
  return coefficients_from_euler(resolve_spec(c.specs.at(i)), required_terms(k, x));
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

cd complex_from(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(path, "expected a number or [re, im]");
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(path + "." + key, "missing");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

// Target file: {"epsilon": e, "functions": [{"spec", "rectangle": {"sigma": [a, b], "height", "center",
// "resolution"}, "polynomial": [c0, c1, ...]}], "phases": [[p, theta], ...]}
struct LoadedTarget {
  HybridTarget target;
  std::vector<std::vector<cd>> polynomials;
};

LoadedTarget load_target(const std::string& path, double epsilon) {
  std::ifstream in(path);
  if (!in) throw ConfigError("target", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("target", std::string("malformed JSON: ") + e.what());
  }
  detail::reject_unknown(j, {"epsilon", "functions", "phases"}, "target");
  LoadedTarget out;
  HybridTarget& t = out.target;
  t.epsilon = epsilon;
  if (j.contains("epsilon")) {
    t.epsilon = number(j["epsilon"], "target.epsilon");
    if (!(t.epsilon > 0.0 && t.epsilon < 0.5)) {
      throw ConfigError("target.epsilon", "must satisfy 0 < epsilon < 1/2 (phase windows degenerate otherwise)");
    }
  }
  if (j.contains("functions")) {
    const auto& fs = j["functions"];
    if (!fs.is_array()) throw ConfigError("target.functions", "expected an array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string p = "target.functions[" + std::to_string(i) + "]";
      detail::reject_unknown(fs[i], {"spec", "rectangle", "polynomial"}, p);
      const auto& specref = need(fs[i], "spec", p);
      if (!specref.is_string()) throw ConfigError(p + ".spec", "expected a string");
      EulerProductSpec spec = [&] {
        try {
          return resolve_spec(specref.get<std::string>());
        } catch (const SpecParseError& e) {
          throw ConfigError(p + ".spec", e.what());
        }
      }();
      const auto& r = need(fs[i], "rectangle", p);
      detail::reject_unknown(r, {"sigma", "height", "center", "resolution"}, p + ".rectangle");
      const auto& sig = need(r, "sigma", p + ".rectangle");
      if (!sig.is_array() || sig.size() != 2) throw ConfigError(p + ".rectangle.sigma", "expected [left, right]");
      CompactRectangle k;
      k.sigma_left = number(sig[0], p + ".rectangle.sigma[0]");
      k.sigma_right = number(sig[1], p + ".rectangle.sigma[1]");
      k.half_height = number(need(r, "height", p + ".rectangle"), p + ".rectangle.height");
      if (r.contains("center")) k.t_center = number(r["center"], p + ".rectangle.center");
      if (r.contains("resolution")) {
        if (!r["resolution"].is_number_integer()) throw ConfigError(p + ".rectangle.resolution", "expected an integer");
        k.resolution = r["resolution"].get<int>();
      }
      try {
        k.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(p + ".rectangle", e.what());
      }
      if (!k.inside(StripDomain(spec.sigma_phi()))) throw ConfigError(p + ".rectangle", "not inside the strip of its spec");
      const auto& poly = need(fs[i], "polynomial", p);
      if (!poly.is_array() || poly.empty()) throw ConfigError(p + ".polynomial", "expected a nonempty array");
      std::vector<cd> coeffs;
      for (std::size_t c = 0; c < poly.size(); ++c) coeffs.push_back(complex_from(poly[c], p + ".polynomial[" + std::to_string(c) + "]"));
      t.functions.push_back(TargetFunction::from_polynomial(std::move(spec), k, coeffs));
      out.polynomials.push_back(std::move(coeffs));
    }
  }
  if (j.contains("phases")) {
    const auto& ps = j["phases"];
    if (!ps.is_array()) throw ConfigError("target.phases", "expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string p = "target.phases[" + std::to_string(i) + "]";
      if (!ps[i].is_array() || ps[i].size() != 2 || !ps[i][0].is_number_unsigned()) {
        throw ConfigError(p, "expected [prime, theta]");
      }
      const auto prime = ps[i][0].get<std::uint64_t>();
      if (!is_prime(prime)) throw ConfigError(p, std::to_string(prime) + " is not prime");
      t.phases.push_back({prime, number(ps[i][1], p)});
    }
  }
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("target", e.what());
  }
  return out;
}

json report_json(const ScanReport& r, const Session& s) {
  json j;
  j["hylab"] = kVersion;
  j["config"] = s.hash;
  j["status"] = r.status == ScanReport::Status::scanned ? "scanned" : "empty_phase_intersection";
  j["begin"] = r.begin;
  j["T"] = r.horizon;
  j["tau_step"] = r.tau_step;
  j["X"] = r.truncation;
  j["epsilon"] = r.epsilon;
  j["phases"] = json::array();
  for (const auto& p : r.phases) j["phases"].push_back({p.prime, p.theta});
  j["phase_intervals"] = json::array();
  for (const auto& i : r.phase_intervals) j["phase_intervals"].push_back({i.lo, i.hi});
  j["phase_density"] = r.phase_density;
  j["candidates"] = r.candidates.size();
  j["qualifying"] = r.qualifying;
  j["qualifying_intervals"] = json::array();
  for (const auto& i : r.qualifying_intervals) j["qualifying_intervals"].push_back({i.lo, i.hi});
  j["grid_gap_bounds"] = r.grid_gap_bounds;
  j["step_bounds"] = r.step_bounds;
  j["density"] = r.density;
  j["note"] = "density is a grid estimate, not a certified measure";
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hylab: numerical laboratory for hybrid joint universality", "hylab"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Session s;
  app.add_option("--config", s.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  flag<std::uint64_t>(&app, s, "--seed", [](ExperimentConfig& c, auto v) { c.seed = v; }, "master seed");
  flag<unsigned>(&app, s, "--threads", [](ExperimentConfig& c, auto v) { c.threads = v; },
                 "worker threads (0: HYLAB_THREADS or hardware)");
  flag<std::string>(&app, s, "--out", [](ExperimentConfig& c, const auto& v) { c.output = v; },
                    "output file (default stdout)");
  flag<double>(&app, s, "--C", [](ExperimentConfig& c, auto v) { c.kernel.support = v; }, "kernel support bound");

  std::function<void()> action;

  // kernel probe
  auto* kernel = app.add_subcommand("kernel", "smoothing kernel tools");
  kernel->require_subcommand(1);
  auto* probe = kernel->add_subcommand("probe", "emit lambda-hat(s) as CSV");
  std::vector<double> probe_s;
  std::vector<double> sweep;
  probe->add_option("--s", probe_s, "point re im")->expected(2);
  probe->add_option("--sweep", sweep, "im_lo im_hi count: sweep Im(s) at Re(s) from --s")->expected(3);
  probe->callback([&] {
    action = [&] {
      if (probe_s.size() != 2) throw ConfigError("--s", "expected re im");
      const MellinTransform m(kernel_of(s.config), s.config.kernel.quad_tolerance);
      auto w = s.csv("re,im,lhat_re,lhat_im,abs");
      std::vector<cd> pts;
      if (sweep.empty()) {
        pts.push_back({probe_s[0], probe_s[1]});
      } else {
        const auto n = static_cast<std::size_t>(sweep[2]);
        if (n < 1 || sweep[2] != static_cast<double>(n)) throw ConfigError("--sweep", "count must be a positive integer");
        for (std::size_t i = 0; i < n; ++i) {
          const double t = n == 1 ? sweep[0] : sweep[0] + (sweep[1] - sweep[0]) * static_cast<double>(i) / static_cast<double>(n - 1);
          pts.push_back({probe_s[0], t});
        }
      }
      for (cd z : pts) {
        const cd v = m(z);
        w.row(z.real(), z.imag(), v.real(), v.imag(), std::abs(v));
      }
      s.emit(w.str());
    };
  });

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "Dirichlet coefficients a(n) as CSV");
  add_specs(coeffs, s);
  flag<std::uint64_t>(coeffs, s, "--N", [](ExperimentConfig& c, auto v) { c.engine.count = v; }, "largest n");
  coeffs->callback([&] {
    action = [&] {
      const auto t = coefficients_from_euler(resolve_spec(s.config.specs[0]), s.config.engine.count);
      auto w = s.csv("n,re,im");
      for (std::uint64_t n = 1; n <= t.limit(); ++n) w.row(n, t[n].real(), t[n].imag());
      s.emit(w.str());
    };
  });

  // eval
  auto* eval = app.add_subcommand("eval", "phi_X along a vertical shift grid");
  add_specs(eval, s);
  flag<double>(eval, s, "--sigma", [](ExperimentConfig& c, auto v) { c.engine.sigma = v; }, "real part");
  flag<double>(eval, s, "--tau-start", [](ExperimentConfig& c, auto v) { c.engine.tau_start = v; }, "first tau");
  flag<double>(eval, s, "--dtau", [](ExperimentConfig& c, auto v) { c.engine.tau_step = v; }, "tau step");
  flag<std::uint64_t>(eval, s, "--count", [](ExperimentConfig& c, auto v) { c.engine.count = v; }, "grid size");
  flag<double>(eval, s, "--X", [](ExperimentConfig& c, auto v) { c.engine.truncation = v; }, "truncation X");
  eval->callback([&] {
    action = [&] {
      const auto& e = s.config.engine;
      const SmoothedSeries series(table_for(s.config, 0, e.truncation), kernel_of(s.config), e.truncation);
      const ShiftGrid grid{e.sigma, e.tau_start, e.tau_step, e.count, e.truncation};
      const auto vals = shifted_grid_values(series, grid);
      auto w = s.csv("tau,re,im,abs");
      for (std::size_t k = 0; k < vals.size(); ++k) w.row(grid.tau(k), vals[k].real(), vals[k].imag(), std::abs(vals[k]));
      s.emit(w.str());
    };
  });

  // scan
  auto* scan = app.add_subcommand("scan", "hybrid condition scan; JSON report plus distance CSV");
  std::string csv_path;
  flag<std::string>(scan, s, "--target", [](ExperimentConfig& c, const auto& v) { c.scanner.target = v; },
                    "target JSON file");
  flag<double>(scan, s, "--T", [](ExperimentConfig& c, auto v) { c.scanner.horizon = v; }, "horizon T");
  flag<double>(scan, s, "--dtau", [](ExperimentConfig& c, auto v) { c.scanner.tau_step = v; }, "tau step");
  flag<double>(scan, s, "--X", [](ExperimentConfig& c, auto v) { c.scanner.truncation = v; }, "truncation X");
  flag<double>(scan, s, "--epsilon", [](ExperimentConfig& c, auto v) { c.scanner.epsilon = v; }, "tolerance");
  scan->add_option("--csv", csv_path, "write (tau, distance_j...) rows here");
  scan->callback([&] {
    action = [&] {
      const auto& sc = s.config.scanner;
      if (sc.target.empty()) throw ConfigError("scanner.target", "a target file is required");
      const auto target = load_target(sc.target, sc.epsilon).target;
      const auto rep = hybrid_scan(target, sc.horizon, sc.tau_step, sc.truncation, kernel_of(s.config));
      s.emit(report_json(rep, s).dump(2) + "\n");
      if (!csv_path.empty()) {
        std::string header = "tau";
        for (std::size_t j = 0; j < target.functions.size(); ++j) header += ",distance_" + std::to_string(j + 1);
        header += ",qualifies";
        auto w = s.csv(header);
        for (const auto& c : rep.candidates) {
          std::string line = format_double(c.tau);
          for (double d : c.distances) line += "," + format_double(d);
          w.row(line, std::size_t{c.qualifies ? 1u : 0u});
        }
        write_atomic(csv_path, w.str());
      }
    };
  });

  // meansquare
  auto* ms = app.add_subcommand("meansquare", "mean square of phi_X over [-T, T] against the diagonal sum");
  add_specs(ms, s);
  flag<double>(ms, s, "--sigma", [](ExperimentConfig& c, auto v) { c.stats.sigma = v; }, "real part");
  flag<double>(ms, s, "--T", [](ExperimentConfig& c, auto v) { c.stats.horizon = v; }, "horizon T");
  flag<double>(ms, s, "--dt", [](ExperimentConfig& c, auto v) { c.stats.dt = v; }, "midpoint step");
  flag<double>(ms, s, "--X", [](ExperimentConfig& c, auto v) { c.stats.truncation = v; }, "truncation X");
  ms->callback([&] {
    action = [&] {
      const auto& st = s.config.stats;
      const auto r = mean_square_ratio(table_for(s.config, 0, st.truncation), kernel_of(s.config), st.sigma,
                                       st.horizon, st.dt, st.truncation);
      auto w = s.csv("spec,sigma,T,dt,X,samples,mean_square,diagonal,ratio,off_diagonal_scale");
      w.row(s.config.specs[0], st.sigma, st.horizon, r.step, st.truncation, r.samples, r.mean_square, r.diagonal,
            r.ratio, r.off_diagonal_scale);
      s.emit(w.str());
    };
  });

  // weyl
  auto* weyl = app.add_subcommand("weyl", "Weyl averages (1/T) int_0^T p^{i tau} d tau");
  std::vector<double> horizons{1e2, 1e4, 1e6};
  flag<std::vector<std::uint64_t>>(weyl, s, "--primes", [](ExperimentConfig& c, const auto& v) { c.stats.primes = v; },
                                   "primes")
      ->delimiter(',');
  weyl->add_option("--T", horizons, "horizons")->delimiter(',');
  weyl->callback([&] {
    action = [&] {
      for (double t : horizons) {
        if (!(t > 0.0)) throw ConfigError("--T", "horizons must be positive");
      }
      auto w = s.csv("p,T,closed_re,closed_im,quad_re,quad_im,bound");
      for (auto p : s.config.stats.primes) {
        for (double t : horizons) {
          const auto a = weyl_average(p, t);
          w.row(p, t, a.closed_form.real(), a.closed_form.imag(), a.quadrature.real(), a.quadrature.imag(), a.bound);
        }
      }
      s.emit(w.str());
    };
  });

  // distcompare
  auto* dc = app.add_subcommand("distcompare", "KS comparison of |phi_X(s0 + i tau)| against the random model");
  add_specs(dc, s);
  std::string dump_path;
  std::vector<double> s0;
  flag<double>(dc, s, "--T", [](ExperimentConfig& c, auto v) { c.stats.horizon = v; }, "horizon T");
  flag<std::uint64_t>(dc, s, "--M", [](ExperimentConfig& c, auto v) { c.stats.samples = v; }, "sample count");
  flag<double>(dc, s, "--X", [](ExperimentConfig& c, auto v) { c.stats.truncation = v; }, "truncation X");
  dc->add_option("--s0", s0, "re im")->expected(2);
  dc->add_option("--dump", dump_path, "JSONL dump of both samples");
  dc->callback([&] {
    if (s0.size() == 2) {
      s.overrides.push_back([a = s0[0], b = s0[1]](ExperimentConfig& c) {
        c.stats.s0_re = a;
        c.stats.s0_im = b;
      });
    }
    action = [&] {
      const auto& st = s.config.stats;
      const cd z{st.s0_re, st.s0_im};
      const auto r = empirical_vs_model(table_for(s.config, 0, st.truncation), kernel_of(s.config), z, st.horizon,
                                        st.samples, st.truncation, s.config.seed);
      auto w = s.csv("spec,s0_re,s0_im,T,M,X,seed,ks,ks_critical_1pct,shift_mean,shift_se,model_mean,model_se");
      w.row(s.config.specs[0], z.real(), z.imag(), st.horizon, st.samples, st.truncation, s.config.seed, r.ks,
            r.ks_critical_1pct, r.shift.mean, r.shift.mean_se, r.model.mean, r.model.mean_se);
      s.emit(w.str());
      if (!dump_path.empty()) {
        std::string out = json{{"hylab", kVersion}, {"config", s.hash}}.dump() + "\n";
        for (std::size_t i = 0; i < r.shift_values.size(); ++i) {
          out += json{{"source", "shift"}, {"index", i}, {"value", r.shift_values[i]}}.dump() + "\n";
        }
        for (std::size_t i = 0; i < r.model_values.size(); ++i) {
          out += json{{"source", "model"}, {"stream", i}, {"value", r.model_values[i]}}.dump() + "\n";
        }
        write_atomic(dump_path, out);
      }
    };
  });

  // supporthit
  auto* sh = app.add_subcommand("supporthit", "fraction of model draws within delta of a target point");
  add_specs(sh, s);
  std::string hit_target;
  flag<double>(sh, s, "--delta", [](ExperimentConfig& c, auto v) { c.stats.delta = v; }, "radius");
  flag<std::uint64_t>(sh, s, "--M", [](ExperimentConfig& c, auto v) { c.stats.samples = v; }, "draws");
  flag<double>(sh, s, "--X", [](ExperimentConfig& c, auto v) { c.stats.truncation = v; }, "truncation X");
  flag<int>(sh, s, "--levels", [](ExperimentConfig& c, auto v) { c.stats.levels = v; }, "exhaustion levels");
  flag<int>(sh, s, "--resolution", [](ExperimentConfig& c, auto v) { c.stats.resolution = v; }, "grid resolution");
  flag<std::vector<std::uint64_t>>(sh, s, "--primes", [](ExperimentConfig& c, const auto& v) { c.stats.primes = v; },
                                   "torus primes")
      ->delimiter(',');
  sh->add_option("--target", hit_target,
                 "target JSON (polynomials on the exhaustion, torus from phases); default: a recorded model draw");
  sh->callback([&] {
    action = [&] {
      const auto& st = s.config.stats;
      std::vector<CoefficientTable> tables;
      for (std::size_t i = 0; i < s.config.specs.size(); ++i) tables.push_back(table_for(s.config, i, st.truncation));
      std::vector<std::uint64_t> primes = st.primes;
      LoadedTarget loaded;
      if (!hit_target.empty()) {
        loaded = load_target(hit_target, 0.1);
        if (loaded.polynomials.size() != tables.size()) {
          throw ConfigError("target.functions", "needs one entry per spec");
        }
        primes.clear();
        for (const auto& p : loaded.target.phases) primes.push_back(p.prime);
      }
      const HybridSampler sampler(tables, kernel_of(s.config), st.truncation, primes,
                                  {st.levels, st.resolution, 2});
      HybridPoint point;
      std::string source;
      if (hit_target.empty()) {
        point = sampler.model_point(sampler.draw(s.config.seed, st.samples));
        source = "model draw " + std::to_string(st.samples);
      } else {
        // polynomials are re-sampled on the sampler's exhaustion levels; their own rectangles are ignored here
        for (std::size_t i = 0; i < loaded.polynomials.size(); ++i) {
          const auto& coeffs = loaded.polynomials[i];
          point.functions.push_back(sample_levels(sampler.families()[i], st.levels, [&](cd z) {
            cd v{0.0, 0.0};
            for (std::size_t k = coeffs.size(); k-- > 0;) v = v * z + coeffs[k];
            return v;
          }));
        }
        for (const auto& p : loaded.target.phases) point.torus.push_back(std::polar(1.0, 2.0 * std::numbers::pi * p.theta));
        source = hit_target;
      }
      const auto r = support_hit_rate(point, sampler, st.delta, st.samples, s.config.seed);
      auto w = s.csv("target,delta,M,X,levels,seed,hits,rate,zero_is_inconclusive");
      w.row(source, st.delta, st.samples, st.truncation, st.levels, s.config.seed, r.hits, r.rate,
            std::size_t{r.zero_is_inconclusive ? 1u : 0u});
      s.emit(w.str());
    };
  });

  // model sample
  auto* model = app.add_subcommand("model", "random model tools");
  model->require_subcommand(1);
  auto* sample = model->add_subcommand("sample", "JSONL rows {stream, s, value} of phi_X(s, omega)");
  add_specs(sample, s);
  std::vector<double> model_s;
  std::uint64_t first_stream = 0;
  flag<std::uint64_t>(sample, s, "--M", [](ExperimentConfig& c, auto v) { c.stats.samples = v; }, "draws");
  flag<double>(sample, s, "--X", [](ExperimentConfig& c, auto v) { c.stats.truncation = v; }, "truncation X");
  sample->add_option("--s", model_s, "re im")->expected(2);
  sample->add_option("--first-stream", first_stream, "first stream index");
  sample->callback([&] {
    if (model_s.size() == 2) {
      s.overrides.push_back([a = model_s[0], b = model_s[1]](ExperimentConfig& c) {
        c.stats.s0_re = a;
        c.stats.s0_im = b;
      });
    }
    action = [&] {
      const auto& st = s.config.stats;
      const cd z{st.s0_re, st.s0_im};
      const SmoothedSeries series(table_for(s.config, 0, st.truncation), kernel_of(s.config), st.truncation);
      const auto primes = model_primes(series.terms());
      const PrimeSieve sieve(std::max<std::uint64_t>(series.terms(), 2));
      std::vector<cd> vals(st.samples);
      constexpr std::size_t kBlock = 64;
      parallel_for((vals.size() + kBlock - 1) / kBlock, [&](std::size_t b) {
        for (std::size_t i = b * kBlock; i < std::min(vals.size(), (b + 1) * kBlock); ++i) {
          const auto omega = OmegaSample::sample(primes, s.config.seed, first_stream + i);
          vals[i] = series.twisted(z, omega_table(omega, series.terms(), sieve));
        }
      });
      std::string out = json{{"hylab", kVersion}, {"config", s.hash}, {"seed", s.config.seed}}.dump() + "\n";
      for (std::size_t i = 0; i < vals.size(); ++i) {
        out += json{{"stream", first_stream + i}, {"s", complex_json(z)}, {"value", complex_json(vals[i])}}.dump() + "\n";
      }
      s.emit(out);
    };
  });

  if (argc <= 1) {
    std::cout << app.help();
    return kUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (!action) {
    std::cout << app.help();
    return kUsage;
  }
  try {
    s.resolve();
    action();
  } catch (const ConfigError& e) {
    std::cerr << "hylab: invalid configuration: " << e.what() << '\n';
    return kValidation;
  } catch (const SpecParseError& e) {
    std::cerr << "hylab: invalid spec: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hylab: invalid argument: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "hylab: " << e.what() << '\n';
    return kRuntime;
  }
  return 0;
}
