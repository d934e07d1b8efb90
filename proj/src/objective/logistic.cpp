#include <spstorm/objective.hpp>
#include <spstorm/rng.hpp>

#include <cmath>

namespace spstorm {

namespace {

void check_length(const Vector& x, std::size_t n, const char* where)
{
    if (static_cast<std::size_t>(x.size()) != n) {
        throw DimensionError(std::string(where) + ": vector length " + std::to_string(x.size()) +
                             " does not match feature count " + std::to_string(n));
    }
}

inline double logistic_scalar(double label, double margin)
{
    return -label * sigmoid(-label * margin);
}

inline void axpy_row(double a, const SparseRow& row, Vector& out)
{
    for (std::size_t p = 0; p < row.nnz(); ++p) out[row.indices[p]] += a * row.values[p];
}

}  // namespace

BatchSample draw_batch(std::uint64_t seed, std::uint64_t k, std::size_t num_samples, std::size_t m)
{
    if (num_samples == 0) throw DataError("draw_batch: dataset is empty");
    if (m == 0) throw ConfigError("draw_batch: batch size must be positive");
    CounterRng rng(seed, kBatchStream, k);
    BatchSample batch;
    batch.indices.resize(m);
    for (auto& j : batch.indices) j = static_cast<std::size_t>(rng.below(num_samples));
    return batch;
}

double sigmoid(double t)
{
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double logistic_loss(double t)
{
    if (t >= 0.0) return std::log1p(std::exp(-t));
    return -t + std::log1p(std::exp(t));
}

double sparse_dot(const SparseRow& row, const Vector& x)
{
    long double acc = 0.0L;
    for (std::size_t p = 0; p < row.nnz(); ++p) {
        acc += static_cast<long double>(row.values[p]) * static_cast<long double>(x[row.indices[p]]);
    }
    return static_cast<double>(acc);
}

double smooth_value(const SparseDataset& data, double l2_coefficient, const Vector& x)
{
    check_length(x, data.num_features(), "smooth_value");
    long double acc = 0.0L;
    for (std::size_t j = 0; j < data.num_samples(); ++j) {
        acc += logistic_loss(data.label(j) * sparse_dot(data.row(j), x));
    }
    const double mean = data.num_samples() == 0 ? 0.0 : static_cast<double>(acc / data.num_samples());
    return mean + l2_coefficient * x.squaredNorm();
}

double smooth_value(const ProblemInstance& instance, const Vector& x)
{
    return smooth_value(instance.dataset, instance.l2_coefficient, x);
}

Vector full_gradient(const SparseDataset& data, double l2_coefficient, const Vector& x)
{
    check_length(x, data.num_features(), "full_gradient");
    Vector out = Vector::Zero(x.size());
    for (std::size_t j = 0; j < data.num_samples(); ++j) {
        const auto row = data.row(j);
        axpy_row(logistic_scalar(data.label(j), sparse_dot(row, x)), row, out);
    }
    if (data.num_samples() > 0) out /= static_cast<double>(data.num_samples());
    out += (2.0 * l2_coefficient) * x;
    return out;
}

Vector full_gradient(const ProblemInstance& instance, const Vector& x)
{
    return full_gradient(instance.dataset, instance.l2_coefficient, x);
}

void full_gradient(const ProblemInstance& instance, const Vector& x, Vector& out)
{
    out = full_gradient(instance.dataset, instance.l2_coefficient, x);
}

double per_sample_logistic_scalar(const ProblemInstance& instance, std::size_t j, const Vector& x)
{
    const auto& data = instance.dataset;
    if (j >= data.num_samples()) throw DimensionError("per_sample_logistic_scalar: sample index out of range");
    check_length(x, data.num_features(), "per_sample_logistic_scalar");
    return logistic_scalar(data.label(j), sparse_dot(data.row(j), x));
}

void minibatch_gradient(const ProblemInstance& instance, std::span<const std::size_t> batch, const Vector& x,
                        Vector& out)
{
    const auto& data = instance.dataset;
    check_length(x, data.num_features(), "minibatch_gradient");
    if (batch.empty()) throw ConfigError("minibatch_gradient: empty batch");
    out.setZero(x.size());
    for (auto j : batch) {
        if (j >= data.num_samples()) throw DimensionError("minibatch_gradient: sample index out of range");
        const auto row = data.row(j);
        axpy_row(logistic_scalar(data.label(j), sparse_dot(row, x)), row, out);
    }
    out /= static_cast<double>(batch.size());
    out += (2.0 * instance.l2_coefficient) * x;
}

Vector minibatch_gradient(const ProblemInstance& instance, const BatchSample& batch, const Vector& x)
{
    Vector out;
    minibatch_gradient(instance, batch.indices, x, out);
    return out;
}

void minibatch_gradient_pair(const ProblemInstance& instance, std::span<const std::size_t> batch,
                             const Vector& x_cur, const Vector& x_prev, Vector& v, Vector& u)
{
    const auto& data = instance.dataset;
    check_length(x_cur, data.num_features(), "minibatch_gradient_pair");
    check_length(x_prev, data.num_features(), "minibatch_gradient_pair");
    if (batch.empty()) throw ConfigError("minibatch_gradient_pair: empty batch");
    v.setZero(x_cur.size());
    u.setZero(x_cur.size());
    for (auto j : batch) {
        if (j >= data.num_samples()) throw DimensionError("minibatch_gradient_pair: sample index out of range");
        const auto row = data.row(j);
        const double y = data.label(j);
        const double a_cur = logistic_scalar(y, sparse_dot(row, x_cur));
        const double a_prev = logistic_scalar(y, sparse_dot(row, x_prev));
        for (std::size_t p = 0; p < row.nnz(); ++p) {
            v[row.indices[p]] += a_cur * row.values[p];
            u[row.indices[p]] += a_prev * row.values[p];
        }
    }
    const double m = static_cast<double>(batch.size());
    v /= m;
    u /= m;
    v += (2.0 * instance.l2_coefficient) * x_cur;
    u += (2.0 * instance.l2_coefficient) * x_prev;
}

std::pair<Vector, Vector> minibatch_gradient_pair(const ProblemInstance& instance, const BatchSample& batch,
                                                  const Vector& x_cur, const Vector& x_prev)
{
    Vector v, u;
    minibatch_gradient_pair(instance, batch.indices, x_cur, x_prev, v, u);
    return {std::move(v), std::move(u)};
}

}  // namespace spstorm
