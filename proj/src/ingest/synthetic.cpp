#include <spstorm/ingest.hpp>

#include <cmath>
#include <random>

namespace spstorm {

SparseDataset make_synthetic(const SyntheticSpec& spec)
{
    if (spec.num_features == 0 || spec.num_samples == 0) throw ConfigError("make_synthetic: empty shape");
    if (spec.active_groups > spec.num_groups) throw ConfigError("make_synthetic: more active groups than groups");
    const auto groups = sequential_partition(spec.num_features, spec.num_groups);
    const std::size_t active_end =
        spec.active_groups == 0 ? 0 : groups.begin(spec.active_groups - 1) + groups.size(spec.active_groups - 1);

    std::mt19937_64 gen(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    const auto n = static_cast<Eigen::Index>(spec.num_features);
    Vector planted = Vector::Zero(n);
    for (std::size_t k = 0; k < active_end; ++k) planted[static_cast<Eigen::Index>(k)] = normal(gen);
    if (planted.norm() > 0.0) planted *= spec.signal / planted.norm();

    SparseDatasetBuilder builder(spec.num_features);
    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    Vector row(n);
    for (std::size_t j = 0; j < spec.num_samples; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            row[k] = normal(gen) * (static_cast<std::size_t>(k) < active_end ? 1.0 : spec.inactive_scale);
        }
        const double norm = row.norm();
        if (norm > 0.0) row /= norm;
        const double p = 1.0 / (1.0 + std::exp(-planted.dot(row)));
        const double label = uniform(gen) < p ? 1.0 : -1.0;
        idx.clear();
        val.clear();
        for (Eigen::Index k = 0; k < n; ++k) {
            if (row[k] != 0.0) {
                idx.push_back(static_cast<std::uint32_t>(k));
                val.push_back(row[k]);
            }
        }
        builder.add_row(idx, val, label);
    }
    return std::move(builder).build();
}

}  // namespace spstorm
