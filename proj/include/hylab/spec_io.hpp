#pragma once

// Spec references ("zeta", "chi:q:index", "divisor:m", "file:path") and the
// line-oriented Euler spec file format:
//
//   # comment
//   character <q> <index>            (alone: a Dirichlet character)
//
//   name <identifier>                (general Euler product)
//   degree <m>
//   sigma_phi <value in [1/2, 1)>
//   pole_order <f>
//   root <p> <re_1> <im_1> ... <re_m> <im_m>
//
// Primes without a root row are missing data; coefficient expansion past
// them fails with the prime named.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hylab/arith.hpp"

namespace hylab {

struct SpecParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline EulerProductSpec divisor_spec(unsigned m) {
  return EulerProductSpec::from_function(
      m, [m](std::uint64_t) { return std::vector<cd>(m, cd{1.0, 0.0}); }, 0.5, m, "divisor_" + std::to_string(m));
}

inline EulerProductSpec parse_spec_text(std::istream& in, const std::string& source = "<spec>") {
  std::string line;
  int lineno = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> character;
  unsigned degree = 0;
  double sigma_phi = 0.5;
  unsigned pole_order = 0;
  std::string name = "euler";
  std::map<std::uint64_t, std::vector<cd>> rows;
  auto fail = [&](const std::string& msg) -> SpecParseError {
    return SpecParseError(source + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "character") {
      std::uint64_t q = 0, idx = 0;
      if (!(ls >> q >> idx)) throw fail("expected 'character <q> <index>'");
      character = {q, idx};
    } else if (key == "degree") {
      if (!(ls >> degree) || degree == 0) throw fail("degree must be a positive integer");
    } else if (key == "sigma_phi") {
      if (!(ls >> sigma_phi)) throw fail("sigma_phi must be a number");
    } else if (key == "pole_order") {
      if (!(ls >> pole_order)) throw fail("pole_order must be a nonnegative integer");
    } else if (key == "name") {
      if (!(ls >> name)) throw fail("name needs a value");
    } else if (key == "root") {
      if (degree == 0) throw fail("'degree' must precede root rows");
      std::uint64_t p = 0;
      if (!(ls >> p)) throw fail("root row needs a prime");
      std::vector<cd> alphas;
      for (unsigned j = 0; j < degree; ++j) {
        double re = 0.0, im = 0.0;
        if (!(ls >> re >> im)) throw fail("root row for p = " + std::to_string(p) + " needs " +
                                          std::to_string(2 * degree) + " numbers");
        alphas.emplace_back(re, im);
      }
      if (!rows.emplace(p, std::move(alphas)).second) throw fail("duplicate root row for p = " + std::to_string(p));
    } else {
      throw fail("unknown key '" + key + "'");
    }
    std::string extra;
    if (ls >> extra) throw fail("trailing token '" + extra + "'");
  }
  if (character) {
    if (!rows.empty() || degree != 0) throw SpecParseError(source + ": 'character' cannot be mixed with root rows");
    return EulerProductSpec::from_character(character_from_index(character->first, character->second));
  }
  if (degree == 0) throw SpecParseError(source + ": missing 'degree'");
  try {
    return EulerProductSpec::from_rows(degree, std::move(rows), sigma_phi, pole_order, name);
  } catch (const std::invalid_argument& e) {
    throw SpecParseError(source + ": " + e.what());
  }
}

inline EulerProductSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecParseError("cannot open spec file " + path);
  return parse_spec_text(in, path);
}

/// Resolves "zeta", "chi:q:index", "divisor:m" and "file:path".
inline EulerProductSpec resolve_spec(const std::string& ref) {
  if (ref == "zeta") return EulerProductSpec::zeta();
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
      if (c == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    return parts;
  };
  if (ref.rfind("file:", 0) == 0) return load_spec_file(ref.substr(5));
  const auto parts = split(ref);
  try {
    if (parts.size() == 3 && parts[0] == "chi") {
      return EulerProductSpec::from_character(character_from_index(std::stoull(parts[1]), std::stoull(parts[2])));
    }
    if (parts.size() == 2 && parts[0] == "divisor") return divisor_spec(static_cast<unsigned>(std::stoul(parts[1])));
  } catch (const std::logic_error& e) {
    throw SpecParseError("bad spec reference '" + ref + "': " + e.what());
  }
  throw SpecParseError("unknown spec reference '" + ref + "' (expected zeta, chi:q:index, divisor:m or file:path)");
}

/// Shipped presets: zeta, the character mod 4 and the four characters mod 5.
inline std::vector<std::string> preset_spec_refs() {
  return {"zeta", "chi:4:1", "chi:5:0", "chi:5:1", "chi:5:2", "chi:5:3"};
}

}  // namespace hylab
