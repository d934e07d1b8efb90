#pragma once

#include <spstorm/core.hpp>

namespace spstorm {

// Weighted non-overlapping group-l1 norm r(x) = sum_i lambda_i ||[x]_{g_i}||.

double reg_value(const GroupPartition& partition, const Vector& x);

/// prox_{alpha r}(z): blockwise soft thresholding. A block is set to exact
/// zero whenever ||[z]_g|| <= alpha * lambda_g (no division on that branch).
void prox(const GroupPartition& partition, const Vector& z, double alpha, Vector& out);
Vector prox(const GroupPartition& partition, const Vector& z, double alpha);

/// r_*(w) = max_i ||[w]_{g_i}|| / lambda_i.
double dual_norm(const GroupPartition& partition, const Vector& w);

/// sqrt(sum_i lambda_i^2): bounds every element of the subdifferential of r.
double subgradient_bound(const GroupPartition& partition);

/// Solution of the dual of the prox subproblem at z* = x* - alpha * grad:
/// [w*]_g = -min{1/alpha, lambda_g / ||[z*]_g||} [z*]_g.
/// At an optimal x*, w* equals grad f(x*) and x* = alpha w* + z*.
Vector dual_point(const GroupPartition& partition, const Vector& x_star, const Vector& grad_at_star, double alpha);

}  // namespace spstorm
