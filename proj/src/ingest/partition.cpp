#include <spstorm/ingest.hpp>
#include <spstorm/objective.hpp>

#include <cmath>

namespace spstorm {

GroupPartition sequential_partition(std::size_t n, std::size_t num_groups)
{
    if (num_groups < 1 || num_groups > n) {
        throw ConfigError("sequential_partition: number of groups must lie in [1, n]");
    }
    const std::size_t base = n / num_groups;
    std::vector<std::size_t> sizes(num_groups, base);
    sizes.back() += n - base * num_groups;
    return GroupPartition::from_sizes(sizes);
}

double lambda_min(const SparseDataset& data, const GroupPartition& partition, double l2_coefficient)
{
    if (data.num_samples() == 0) throw DataError("lambda_min: dataset is empty");
    if (partition.num_features() != data.num_features()) throw DimensionError("lambda_min: partition mismatch");
    // The l2 term has zero gradient at the origin, so only the logistic part matters.
    const Vector g0 = full_gradient(data, l2_coefficient, Vector::Zero(static_cast<Eigen::Index>(data.num_features())));
    double best = 0.0;
    for (std::size_t i = 0; i < partition.num_groups(); ++i) {
        best = std::max(best, partition.block_norm(g0, i) / std::sqrt(static_cast<double>(partition.size(i))));
    }
    return best;
}

GroupPartition calibrate_weights(const GroupPartition& partition, double scale)
{
    if (!(scale > 0.0)) throw ConfigError("calibrate_weights: scale must be positive");
    std::vector<double> w(partition.num_groups());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = scale * std::sqrt(static_cast<double>(partition.size(i)));
    return partition.with_weights(std::move(w));
}

}  // namespace spstorm
