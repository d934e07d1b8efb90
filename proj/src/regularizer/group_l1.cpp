#include <spstorm/regularizer.hpp>

#include <algorithm>
#include <cmath>

namespace spstorm {

namespace {

void check_length(const GroupPartition& partition, const Vector& x, const char* where)
{
    if (static_cast<std::size_t>(x.size()) != partition.num_features()) {
        throw DimensionError(std::string(where) + ": vector length does not match partition");
    }
}

void check_alpha(double alpha, const char* where)
{
    if (!(alpha > 0.0)) throw ConfigError(std::string(where) + ": alpha must be positive");
}

template <class Fn>
void for_each_member(const GroupPartition& partition, std::size_t i, Fn&& fn)
{
    for (auto m : partition.members(i)) fn(static_cast<Eigen::Index>(m));
}

}  // namespace

double reg_value(const GroupPartition& partition, const Vector& x)
{
    check_length(partition, x, "reg_value");
    double total = 0.0;
    for (std::size_t i = 0; i < partition.num_groups(); ++i) total += partition.weight(i) * partition.block_norm(x, i);
    return total;
}

void prox(const GroupPartition& partition, const Vector& z, double alpha, Vector& out)
{
    check_length(partition, z, "prox");
    check_alpha(alpha, "prox");
    out.resize(z.size());
    for (std::size_t i = 0; i < partition.num_groups(); ++i) {
        const double norm = partition.block_norm(z, i);
        const double threshold = alpha * partition.weight(i);
        if (norm <= threshold) {
            for_each_member(partition, i, [&](Eigen::Index k) { out[k] = 0.0; });
        } else {
            const double scale = 1.0 - threshold / norm;
            for_each_member(partition, i, [&](Eigen::Index k) { out[k] = scale * z[k]; });
        }
    }
}

Vector prox(const GroupPartition& partition, const Vector& z, double alpha)
{
    Vector out;
    prox(partition, z, alpha, out);
    return out;
}

double dual_norm(const GroupPartition& partition, const Vector& w)
{
    check_length(partition, w, "dual_norm");
    double best = 0.0;
    for (std::size_t i = 0; i < partition.num_groups(); ++i) {
        best = std::max(best, partition.block_norm(w, i) / partition.weight(i));
    }
    return best;
}

double subgradient_bound(const GroupPartition& partition)
{
    double s = 0.0;
    for (double w : partition.weights()) s += w * w;
    return std::sqrt(s);
}

Vector dual_point(const GroupPartition& partition, const Vector& x_star, const Vector& grad_at_star, double alpha)
{
    check_length(partition, x_star, "dual_point");
    check_length(partition, grad_at_star, "dual_point");
    check_alpha(alpha, "dual_point");
    const Vector z = x_star - alpha * grad_at_star;
    Vector w(z.size());
    for (std::size_t i = 0; i < partition.num_groups(); ++i) {
        const double norm = partition.block_norm(z, i);
        const double factor = norm > 0.0 ? std::min(1.0 / alpha, partition.weight(i) / norm) : 1.0 / alpha;
        for_each_member(partition, i, [&](Eigen::Index k) { w[k] = -factor * z[k]; });
    }
    return w;
}

}  // namespace spstorm
