#pragma once

#include <spstorm/core.hpp>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace spstorm {

/// Sample indices drawn i.i.d. uniformly with replacement.
struct BatchSample {
    std::vector<std::size_t> indices;

    std::size_t size() const { return indices.size(); }
};

/// Batch of size m for iteration k; depends only on (seed, k, N, m).
BatchSample draw_batch(std::uint64_t seed, std::uint64_t k, std::size_t num_samples, std::size_t m);

/// Logistic sigmoid 1 / (1 + exp(-t)) without overflow for any t.
double sigmoid(double t);

/// log(1 + exp(-t)) without overflow for any t.
double logistic_loss(double t);

/// <x, d> accumulated in extended precision.
double sparse_dot(const SparseRow& row, const Vector& x);

// f(x) = (1/N) sum_j log(1 + exp(-y_j <x, d_j>)) + c2 ||x||^2

double smooth_value(const SparseDataset& data, double l2_coefficient, const Vector& x);
double smooth_value(const ProblemInstance& instance, const Vector& x);

Vector full_gradient(const SparseDataset& data, double l2_coefficient, const Vector& x);
Vector full_gradient(const ProblemInstance& instance, const Vector& x);
void full_gradient(const ProblemInstance& instance, const Vector& x, Vector& out);

/// a_j = -y_j * sigmoid(-y_j <x, d_j>); the logistic part of grad l_j(x) is a_j d_j.
double per_sample_logistic_scalar(const ProblemInstance& instance, std::size_t j, const Vector& x);

/// (1/m) sum_{j in batch} grad l_j(x); each l_j carries the c2 ||x||^2 term,
/// so the result is an unbiased estimate of grad f(x).
void minibatch_gradient(const ProblemInstance& instance, std::span<const std::size_t> batch, const Vector& x,
                        Vector& out);
Vector minibatch_gradient(const ProblemInstance& instance, const BatchSample& batch, const Vector& x);

/// Minibatch gradients at two points over the same samples. The two sums
/// are formed with identical operation order, so equal points give bitwise
/// equal results.
void minibatch_gradient_pair(const ProblemInstance& instance, std::span<const std::size_t> batch,
                             const Vector& x_cur, const Vector& x_prev, Vector& v, Vector& u);
std::pair<Vector, Vector> minibatch_gradient_pair(const ProblemInstance& instance, const BatchSample& batch,
                                                  const Vector& x_cur, const Vector& x_prev);

}  // namespace spstorm
