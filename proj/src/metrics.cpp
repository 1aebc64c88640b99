#include "flare/metrics.hpp"

#include <cmath>

#include "flare/error.hpp"

namespace flare {

namespace {

constexpr double kDeltaSlack = 1e-12;

void require_same_shape(const Schema& schema, const Vector& x, const Vector& y) {
  if (x.size() != schema.arity() || y.size() != schema.arity())
    throw SchemaMismatch("vector arity does not match schema");
}

}  // namespace

bool values_equal(const Cell& x, const Cell& y, const AttributeDef& attr) {
  if (attr.is_nominal()) return x.index() == y.index();
  return std::abs(x.value() - y.value()) <= attr.delta() + kDeltaSlack;
}

double attr_distance(const Cell& x, const Cell& y, const AttributeDef& attr) {
  if (x.is_dont_care()) return 0.0;
  if (x.is_dont_know()) return 0.5;
  if (!y.asserted()) return 0.5;
  if (attr.is_nominal()) return x.index() == y.index() ? 0.0 : 1.0;
  const double d = std::abs(x.value() - y.value()) / attr.range();
  return d > 1.0 ? 1.0 : d;
}

int num_asserted(const Vector& x) {
  int n = 0;
  for (AttrIndex i = 0; i < x.size(); ++i)
    if (i != x.target && !x[i].is_dont_care()) ++n;
  return n;
}

double distance(const Schema& schema, const Vector& x, const Vector& y) {
  require_same_shape(schema, x, y);
  if (x.target != y.target)
    throw MismatchedTarget("distance between vectors with different target attributes");
  const int n = num_asserted(x);
  if (n == 0) throw UndefinedDistance("distance from a vector without asserted premise cells");
  double sum = 0.0;
  for (AttrIndex i = 0; i < x.size(); ++i) {
    if (i == x.target) continue;
    sum += attr_distance(x[i], y[i], schema[i]);
  }
  return sum / n;
}

bool covers(const Schema& schema, const Vector& x, const Vector& y) {
  require_same_shape(schema, x, y);
  if (x.target != y.target) return false;
  for (AttrIndex i = 0; i < x.size(); ++i) {
    if (i == x.target) continue;
    const Cell& a = x[i];
    const Cell& b = y[i];
    if (a.is_dont_care()) continue;
    if (a.is_dont_know()) {
      if (!b.is_dont_know()) return false;
      continue;
    }
    if (!b.asserted() || !values_equal(a, b, schema[i])) return false;
  }
  return true;
}

bool concordant(const Vector& x, const Vector& y) {
  if (!x.target_cell().asserted() || !y.target_cell().asserted())
    throw TargetUnasserted("concordance needs asserted targets");
  return x.target == y.target && x.target_cell().index() == y.target_cell().index();
}

bool overlaps(const Schema& schema, const Vector& r, const Vector& s) {
  require_same_shape(schema, r, s);
  if (r.target != s.target) return false;
  for (AttrIndex i = 0; i < r.size(); ++i) {
    if (i == r.target) continue;
    const Cell& a = r[i];
    const Cell& b = s[i];
    if (!a.asserted() || !b.asserted()) continue;
    if (!values_equal(a, b, schema[i])) return false;
  }
  return true;
}

}  // namespace flare
