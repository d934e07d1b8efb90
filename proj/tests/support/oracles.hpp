#pragma once

// Independent reference computations used by the unit tests, the acceptance
// suite and the `selftest` command. Nothing here calls the library's prox,
// gradient or solver code paths.

#include <spstorm/core.hpp>
#include <spstorm/solvers.hpp>

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace spstorm::oracle {

using Matrix = Eigen::MatrixXd;

/// Dense copy of the sample matrix (N x n).
Matrix dense_rows(const SparseDataset& data);

/// f(x) and grad f(x) straight from the dense matrix.
double dense_value(const Matrix& D, const Vector& labels, double l2, const Vector& x);
Vector dense_gradient(const Matrix& D, const Vector& labels, double l2, const Vector& x);
/// Average of per-sample gradients over `rows` (with repetition).
Vector dense_batch_gradient(const Matrix& D, const Vector& labels, double l2, const Vector& x,
                            const std::vector<std::size_t>& rows);
Vector labels_of(const SparseDataset& data);

/// Central differences with step h.
Vector finite_difference_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h);

/// argmin_x <a, x> + (c / 2) ||x||^2 + sum_g w_g ||x_g|| by Newton's method on
/// the smoothed norms sqrt(||x_g||^2 + eps^2) with eps driven to 1e-13.
Vector minimize_group_quadratic(const Vector& a, double c, const GroupPartition& partition);

/// Per-block minimizer of 1/2 ||x - z||^2 + t ||x|| found by golden-section
/// search for the length along z (the minimizer lies on the ray through z).
Vector block_prox_golden(const Vector& z, double t);

/// SAGA with a dense N x n table of stored per-sample logistic gradients and
/// the table mean recomputed every iteration. Returns x_1, x_2, ..., x_{K+1}.
std::vector<Vector> naive_saga(const ProblemInstance& instance, std::size_t batch, std::uint64_t seed,
                               std::size_t iterations, double step);

/// Largest violation of the group-lasso optimality conditions at x:
/// active groups ||grad_g + w_g x_g / ||x_g|| ||, inactive max(0, ||grad_g|| - w_g).
double kkt_violation(const ProblemInstance& instance, const Vector& x);

}  // namespace spstorm::oracle
