#pragma once

// Distance, cover and ordering relations between vectors.
//
// The distance is non-symmetric: the first argument is the stored rule, the
// second the vector being reasoned about. Only non-⋆ cells of the rule count
// toward the normalizer, so a general rule that matches is at distance zero.

#include "flare/model.hpp"

namespace flare {

/// Tolerance used whenever two floating point distances are compared.
inline constexpr double kTieTolerance = 1e-9;

/// Per-attribute distance d(x, y) in [0, 1].
double attr_distance(const Cell& x, const Cell& y, const AttributeDef& attr);

/// Equality of two asserted values: exact for nominal, within δ for linear.
bool values_equal(const Cell& x, const Cell& y, const AttributeDef& attr);

/// Non-⋆ premise cells of x (? counts).
int num_asserted(const Vector& x);
inline int specificity(const Vector& x) { return num_asserted(x); }

/// D(x, y). Throws MismatchedTarget when the targets differ and
/// UndefinedDistance when x has no non-⋆ premise cell.
double distance(const Schema& schema, const Vector& x, const Vector& y);

/// True when y satisfies every non-⋆ premise cell of x. A ? cell in x only
/// matches a ? cell in y.
bool covers(const Schema& schema, const Vector& x, const Vector& y);

/// Same target attribute and same target value. Throws TargetUnasserted.
bool concordant(const Vector& x, const Vector& y);

/// True when some vector is covered by both r and s.
bool overlaps(const Schema& schema, const Vector& r, const Vector& s);

}  // namespace flare
