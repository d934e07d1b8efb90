#include <spstorm/analysis.hpp>
#include <spstorm/regularizer.hpp>

#include <algorithm>
#include <limits>

namespace spstorm {

NondegeneracyConstants nondegeneracy_constants(const GroupPartition& partition, const Vector& x_star,
                                               const Vector& grad_at_star)
{
    const auto n = static_cast<Eigen::Index>(partition.num_features());
    if (x_star.size() != n || grad_at_star.size() != n) {
        throw DimensionError("nondegeneracy_constants: vector length does not match partition");
    }
    NondegeneracyConstants c;
    const SupportSet support = support_of(x_star, partition);
    if (!support.empty()) {
        c.Delta = std::numeric_limits<double>::infinity();
        for (auto i : support.indices()) c.Delta = std::min(c.Delta, partition.block_norm(x_star, i));
    }
    if (support.size() < partition.num_groups()) {
        c.delta_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < partition.num_groups(); ++i) {
            if (support.contains(i)) continue;
            c.delta_min = std::min(c.delta_min, partition.weight(i) - partition.block_norm(grad_at_star, i));
        }
    }
    c.Delta_star = std::min(1.0, c.Delta);
    c.delta_star = std::min(c.delta_min, 1.0);
    return c;
}

SufficientConditionReport sufficient_condition_check(const GroupPartition& partition, const Vector& z, double alpha,
                                                     const Vector& x_star, const Vector& grad_at_star,
                                                     double delta_star, double Delta_star)
{
    if (!(alpha > 0.0)) throw ConfigError("sufficient_condition_check: alpha must be positive");
    const auto n = static_cast<Eigen::Index>(partition.num_features());
    if (z.size() != n || x_star.size() != n || grad_at_star.size() != n) {
        throw DimensionError("sufficient_condition_check: vector length does not match partition");
    }
    SufficientConditionReport r;
    r.support_star = support_of(x_star, partition);
    const Vector y = prox(partition, z, alpha);
    r.support_y = support_of(y, partition);

    const Vector w = (z - x_star) / alpha + grad_at_star;
    for (std::size_t i = 0; i < partition.num_groups(); ++i) {
        if (r.support_star.contains(i)) continue;
        r.hypothesis1_max = std::max(r.hypothesis1_max, partition.block_norm(w, i));
    }
    r.hypothesis1 = r.hypothesis1_max < delta_star;
    r.distance = (y - x_star).norm();
    r.hypothesis2 = r.distance < Delta_star;

    r.support_within_star = r.support_y.is_subset_of(r.support_star);
    r.star_within_support = r.support_star.is_subset_of(r.support_y);
    r.implications_hold = (!r.hypothesis1 || r.support_within_star) && (!r.hypothesis2 || r.star_within_support);
    return r;
}

}  // namespace spstorm
