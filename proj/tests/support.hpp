#pragma once

// Helpers shared by the test programs: vectors from text, the bundled data
// directory and an exact-arithmetic distance oracle.

#include <boost/rational.hpp>

#include <string>
#include <vector>

#include "flare/kb_io.hpp"
#include "flare/model.hpp"

namespace flare::test {

inline std::string data_path(const std::string& rel) { return std::string(FLARE_DATA) + "/" + rel; }

/// A vector written in rule-line form; `?_T` targets are allowed.
inline Vector vec(const Schema& s, const std::string& text) {
  return parse_rule_line(s, text, 0, true).vector;
}

inline Schema nominal_schema(const std::vector<std::size_t>& sizes) {
  std::vector<AttributeDef> defs;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::vector<std::string> values;
    for (std::size_t k = 0; k < sizes[i]; ++k) values.push_back(std::to_string(k));
    defs.push_back(AttributeDef::nominal("a" + std::to_string(i), values));
  }
  return Schema(defs);
}

/// The vectors of the running media-selection example, in order.
inline std::vector<Vector> mediadv_vectors() {
  const auto kb = load_kb(data_path("kb/mediadv.kb"));
  std::vector<Vector> out;
  for (const auto& r : kb.rules()) out.push_back(r.vector);
  return out;
}

inline Schema mediadv_schema() { return load_kb(data_path("kb/mediadv.kb")).schema(); }

using Q = boost::rational<long long>;

/// D(x, y) over nominal vectors, computed exactly from the case table.
inline Q exact_distance(const Vector& x, const Vector& y) {
  Q sum = 0;
  long long n = 0;
  for (AttrIndex i = 0; i < x.size(); ++i) {
    if (i == x.target) continue;
    const Cell& a = x[i];
    const Cell& b = y[i];
    if (a.is_dont_care()) continue;
    ++n;
    if (a.is_dont_know() || !b.asserted()) {
      sum += Q(1, 2);
    } else {
      sum += a.index() == b.index() ? 0 : 1;
    }
  }
  return sum / n;
}

inline double to_double(Q q) { return boost::rational_cast<double>(q); }

}  // namespace flare::test
