#include <spstorm/core.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spstorm {

double SparseRow::squared_norm() const
{
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
}

SparseDataset::SparseDataset(std::size_t num_features,
                             std::vector<std::size_t> row_ptr,
                             std::vector<std::uint32_t> indices,
                             std::vector<double> values,
                             std::vector<double> labels)
    : num_features_(num_features),
      row_ptr_(std::move(row_ptr)),
      indices_(std::move(indices)),
      values_(std::move(values)),
      labels_(std::move(labels))
{
    if (row_ptr_.size() != labels_.size() + 1) {
        throw DimensionError("SparseDataset: row count does not match label count");
    }
    if (row_ptr_.front() != 0 || row_ptr_.back() != values_.size() || indices_.size() != values_.size()) {
        throw DimensionError("SparseDataset: inconsistent CSR arrays");
    }
    for (std::size_t j = 0; j < labels_.size(); ++j) {
        if (labels_[j] != 1.0 && labels_[j] != -1.0) {
            throw DataError("SparseDataset: label of row " + std::to_string(j) + " is not +-1");
        }
        if (row_ptr_[j + 1] < row_ptr_[j]) {
            throw DimensionError("SparseDataset: row pointers must be non-decreasing");
        }
        for (auto p = row_ptr_[j]; p < row_ptr_[j + 1]; ++p) {
            if (indices_[p] >= num_features_) {
                throw DimensionError("SparseDataset: feature index out of range in row " + std::to_string(j));
            }
            if (p > row_ptr_[j] && indices_[p] <= indices_[p - 1]) {
                throw DataError("SparseDataset: indices not strictly increasing in row " + std::to_string(j));
            }
        }
    }
}

double SparseDataset::max_row_squared_norm() const
{
    double best = 0.0;
    for (std::size_t j = 0; j < num_samples(); ++j) best = std::max(best, row(j).squared_norm());
    return best;
}

void SparseDatasetBuilder::add_row(std::span<const std::uint32_t> indices, std::span<const double> values,
                                   double label)
{
    if (indices.size() != values.size()) throw DimensionError("add_row: index/value length mismatch");
    indices_.insert(indices_.end(), indices.begin(), indices.end());
    values_.insert(values_.end(), values.begin(), values.end());
    row_ptr_.push_back(values_.size());
    labels_.push_back(label);
}

SparseDataset SparseDatasetBuilder::build() &&
{
    return SparseDataset(num_features_, std::move(row_ptr_), std::move(indices_), std::move(values_),
                         std::move(labels_));
}

GroupPartition::GroupPartition(std::size_t num_features,
                               std::vector<std::vector<std::size_t>> groups,
                               std::vector<double> weights)
    : num_features_(num_features), weights_(std::move(weights))
{
    if (weights_.empty()) weights_.assign(groups.size(), 1.0);
    for (const auto& g : groups) {
        members_.insert(members_.end(), g.begin(), g.end());
        group_ptr_.push_back(members_.size());
    }
    validate();
    contiguous_ = true;
    for (std::size_t k = 0; k < members_.size(); ++k) {
        if (members_[k] != k) {
            contiguous_ = false;
            break;
        }
    }
}

GroupPartition GroupPartition::from_sizes(std::span<const std::size_t> sizes, std::vector<double> weights)
{
    GroupPartition p;
    std::size_t n = 0;
    for (auto s : sizes) {
        if (s == 0) throw ConfigError("GroupPartition: empty group");
        n += s;
        p.group_ptr_.push_back(n);
    }
    p.num_features_ = n;
    p.members_.resize(n);
    for (std::size_t k = 0; k < n; ++k) p.members_[k] = k;
    p.weights_ = weights.empty() ? std::vector<double>(sizes.size(), 1.0) : std::move(weights);
    p.contiguous_ = true;
    p.validate();
    return p;
}

GroupPartition GroupPartition::with_weights(std::vector<double> weights) const
{
    GroupPartition p = *this;
    p.weights_ = std::move(weights);
    p.validate();
    return p;
}

void GroupPartition::validate() const
{
    if (weights_.size() != num_groups()) {
        throw ConfigError("GroupPartition: weights length must equal the number of groups");
    }
    for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("GroupPartition: weights must be positive");
    }
    if (members_.size() != num_features_) {
        throw ConfigError("GroupPartition: groups must cover every feature exactly once");
    }
    std::vector<char> seen(num_features_, 0);
    for (std::size_t i = 0; i < num_groups(); ++i) {
        if (size(i) == 0) throw ConfigError("GroupPartition: empty group");
    }
    for (auto m : members_) {
        if (m >= num_features_) throw ConfigError("GroupPartition: member index out of range");
        if (seen[m]) throw ConfigError("GroupPartition: groups overlap");
        seen[m] = 1;
    }
}

double GroupPartition::block_norm(const Vector& x, std::size_t i) const
{
    if (contiguous_) {
        return x.segment(static_cast<Eigen::Index>(begin(i)), static_cast<Eigen::Index>(size(i))).norm();
    }
    double s = 0.0;
    for (auto m : members(i)) s += x[static_cast<Eigen::Index>(m)] * x[static_cast<Eigen::Index>(m)];
    return std::sqrt(s);
}

ProblemInstance::ProblemInstance(SparseDataset data, GroupPartition groups, double l2, double scale)
    : dataset(std::move(data)), partition(std::move(groups)), l2_coefficient(l2), lambda_scale(scale)
{
    if (partition.num_features() != dataset.num_features()) {
        throw DimensionError("ProblemInstance: partition and dataset feature counts differ");
    }
    if (!(l2_coefficient >= 0.0)) throw ConfigError("ProblemInstance: l2 coefficient must be nonnegative");
    if (!(lambda_scale > 0.0)) throw ConfigError("ProblemInstance: lambda scale must be positive");
}

double ProblemInstance::lipschitz() const
{
    return 0.25 * dataset.max_row_squared_norm() + 2.0 * l2_coefficient;
}

void TheoryConstants::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("TheoryConstants: ") + what);
    };
    require(sigma >= 0.0, "sigma must be nonnegative");
    require(lipschitz > 0.0, "lipschitz must be positive");
    require(subgrad_bound >= 0.0, "subgrad_bound must be nonnegative");
    require(direction_bound >= 0.0, "direction_bound must be nonnegative");
    require(zeta > 0.0, "zeta must be positive");
    require(alpha_bar > 0.0, "alpha_bar must be positive");
    require(c > 1.0, "c must exceed 1");
    require(mu_f > 0.0, "mu_f must be positive");
    require(eta0 > 0.0 && eta0 < 6.0 / (std::numbers::pi * std::numbers::pi), "eta0 must lie in (0, 6/pi^2)");
    require(theta >= 2.0, "theta must be at least 2");
}

std::size_t TheoryConstants::k_underline() const
{
    return static_cast<std::size_t>(std::ceil(2.0 * c - 1.0));
}

TheoryConstants TheoryConstants::from_instance(const ProblemInstance& instance)
{
    TheoryConstants t;
    t.mu_f = 2.0 * instance.l2_coefficient;
    t.lipschitz = 0.25 + 2.0 * instance.l2_coefficient;
    return t;
}

SupportSet::SupportSet(std::vector<std::size_t> indices) : indices_(std::move(indices))
{
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

bool SupportSet::contains(std::size_t i) const
{
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool SupportSet::is_subset_of(const SupportSet& other) const
{
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

std::size_t SupportSet::symmetric_difference_size(const SupportSet& other) const
{
    std::vector<std::size_t> diff;
    std::set_symmetric_difference(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                                  std::back_inserter(diff));
    return diff.size();
}

std::uint64_t SupportSet::hash() const
{
    std::uint64_t h = 14695981039346656037ull;
    for (auto i : indices_) {
        const auto v = static_cast<std::uint64_t>(i);
        unsigned char bytes[8];
        for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(v >> (8 * b));
        h = fnv1a(bytes, h);
    }
    return h;
}

SupportSet support_of(const Vector& x, const GroupPartition& partition, double zero_tol)
{
    if (static_cast<std::size_t>(x.size()) != partition.num_features()) {
        throw DimensionError("support_of: vector length does not match partition");
    }
    if (zero_tol < 0.0) throw ConfigError("support_of: zero_tol must be nonnegative");
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < partition.num_groups(); ++i) {
        bool nonzero = false;
        if (zero_tol == 0.0) {
            // Exact test; squaring tiny entries could underflow to a zero norm.
            for (auto m : partition.members(i)) {
                if (x[static_cast<Eigen::Index>(m)] != 0.0) {
                    nonzero = true;
                    break;
                }
            }
        } else {
            nonzero = partition.block_norm(x, i) > zero_tol;
        }
        if (nonzero) active.push_back(i);
    }
    return SupportSet(std::move(active));
}

std::uint64_t fnv1a(std::span<const unsigned char> bytes, std::uint64_t seed)
{
    std::uint64_t h = seed;
    for (auto b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a(const std::string& s)
{
    return fnv1a({reinterpret_cast<const unsigned char*>(s.data()), s.size()});
}

}  // namespace spstorm
