#pragma once

#include "surfelastic/differential.hpp"

namespace surfelastic {

/// Square root normal function q = sqrt(A) n with A the local area factor
/// and n the outward unit normal, both computed from the frame columns of
/// df so that A = sqrt(det(alpha^T alpha)) matches the metric's
/// discretization. |q|^2 equals A pointwise.
Field3 srnf(const SphericalGrid& grid, const Field3& f);

/// SRNF of an already-computed differential.
Field3 srnf_of_form(const SphericalGrid& grid, const OneForm& alpha);

/// sqrt( int |q1 - q2|^2 ). A lower bound on the geodesic distance for
/// the (0, 1/2, 1, 0) metric.
double srnf_l2_distance(const SphericalGrid& grid, const Field3& q1,
                        const Field3& q2);

/// Surface area int sqrt(det(alpha^T alpha)).
double surface_area(const SphericalGrid& grid, const Field3& f);

}  // namespace surfelastic
