#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spstorm {

using Vector = Eigen::VectorXd;

// Error types. Everything the library throws derives from one of these.

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One row of a sparse sample matrix.
struct SparseRow {
    std::span<const std::uint32_t> indices;
    std::span<const double> values;

    std::size_t nnz() const { return indices.size(); }
    double squared_norm() const;
};

/// Row-sparse sample matrix with +-1 labels, stored in CSR form.
///
/// Construction validates that every row has strictly increasing feature
/// indices in [0, num_features) and that every label is -1 or +1.
class SparseDataset {
public:
    SparseDataset() : row_ptr_{0} {}
    SparseDataset(std::size_t num_features,
                  std::vector<std::size_t> row_ptr,
                  std::vector<std::uint32_t> indices,
                  std::vector<double> values,
                  std::vector<double> labels);

    std::size_t num_samples() const { return labels_.size(); }
    std::size_t num_features() const { return num_features_; }
    std::size_t nnz() const { return values_.size(); }

    SparseRow row(std::size_t j) const {
        const auto b = row_ptr_[j];
        const auto e = row_ptr_[j + 1];
        return {{indices_.data() + b, e - b}, {values_.data() + b, e - b}};
    }
    double label(std::size_t j) const { return labels_[j]; }

    std::span<const std::size_t> row_ptr() const { return row_ptr_; }
    std::span<const std::uint32_t> indices() const { return indices_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> labels() const { return labels_; }

    /// Largest squared row norm; 0 for an empty dataset.
    double max_row_squared_norm() const;

    bool operator==(const SparseDataset&) const = default;

private:
    std::size_t num_features_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> indices_;
    std::vector<double> values_;
    std::vector<double> labels_;
};

/// Incrementally assembles a SparseDataset row by row.
class SparseDatasetBuilder {
public:
    explicit SparseDatasetBuilder(std::size_t num_features = 0) : num_features_(num_features) {}

    void add_row(std::span<const std::uint32_t> indices, std::span<const double> values, double label);
    void set_num_features(std::size_t n) { num_features_ = n; }
    SparseDataset build() &&;

private:
    std::size_t num_features_;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::uint32_t> indices_;
    std::vector<double> values_;
    std::vector<double> labels_;
};

/// Non-overlapping partition of [0, n) into groups with positive weights.
///
/// Group members are stored flattened (CSR style). When the partition is
/// contiguous and ordered, `is_contiguous()` is true and group i occupies
/// the index range [begin(i), begin(i) + size(i)).
class GroupPartition {
public:
    GroupPartition() = default;

    /// General partition; throws ConfigError unless the groups are disjoint,
    /// cover [0, num_features) exactly, and the weights are positive.
    GroupPartition(std::size_t num_features,
                   std::vector<std::vector<std::size_t>> groups,
                   std::vector<double> weights);

    /// Contiguous partition from group sizes (in order). Weights default to 1.
    static GroupPartition from_sizes(std::span<const std::size_t> sizes, std::vector<double> weights = {});

    std::size_t num_features() const { return num_features_; }
    std::size_t num_groups() const { return group_ptr_.empty() ? 0 : group_ptr_.size() - 1; }
    std::size_t size(std::size_t i) const { return group_ptr_[i + 1] - group_ptr_[i]; }
    std::size_t begin(std::size_t i) const { return group_ptr_[i]; }
    bool is_contiguous() const { return contiguous_; }

    std::span<const std::size_t> members(std::size_t i) const {
        return {members_.data() + group_ptr_[i], size(i)};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const { return weights_; }

    /// Copy with replaced weights (validated).
    GroupPartition with_weights(std::vector<double> weights) const;

    /// Euclidean norm of the block of x belonging to group i.
    double block_norm(const Vector& x, std::size_t i) const;

private:
    void validate() const;

    std::size_t num_features_ = 0;
    std::vector<std::size_t> group_ptr_{0};
    std::vector<std::size_t> members_;
    std::vector<double> weights_;
    bool contiguous_ = true;
};

/// Dataset, group structure and regularization constants defining
/// F(x) = f(x) + r(x) with f the l2-regularized logistic loss.
struct ProblemInstance {
    SparseDataset dataset;
    GroupPartition partition;
    double l2_coefficient = 1e-5;
    double lambda_scale = 1.0;

    ProblemInstance() = default;
    ProblemInstance(SparseDataset data, GroupPartition groups, double l2, double scale);

    std::size_t num_samples() const { return dataset.num_samples(); }
    std::size_t num_features() const { return dataset.num_features(); }

    /// Lipschitz constant of every per-sample gradient:
    /// max_j ||d_j||^2 / 4 + 2 * l2_coefficient (1/4 + 2 c2 on normalized data).
    double lipschitz() const;
};

/// Constants appearing in the convergence theory. Only their combinations
/// in the rate envelopes are computable; see analysis/envelopes.
struct TheoryConstants {
    double sigma = 0.0;
    double lipschitz = 0.25;
    double subgrad_bound = 0.0;
    double direction_bound = 0.0;
    double zeta = 1.0;
    double alpha_bar = 0.4;
    double c = 2.0;
    double mu_f = 2e-5;
    double eta0 = 0.1;
    double theta = 2.0;

    /// Throws ConfigError if any constant is outside its admissible range.
    void validate() const;

    /// ceil(2c - 1).
    std::size_t k_underline() const;

    /// mu_f = 2 c2 and L_g from the instance; other fields keep defaults.
    static TheoryConstants from_instance(const ProblemInstance& instance);
};

/// Sorted set of group indices.
class SupportSet {
public:
    SupportSet() = default;
    explicit SupportSet(std::vector<std::size_t> indices);

    std::span<const std::size_t> indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    bool contains(std::size_t i) const;
    bool is_subset_of(const SupportSet& other) const;
    std::size_t symmetric_difference_size(const SupportSet& other) const;

    /// FNV-1a over the sorted index list; stable across platforms.
    std::uint64_t hash() const;

    bool operator==(const SupportSet&) const = default;

private:
    std::vector<std::size_t> indices_;
};

/// Groups whose block norm exceeds zero_tol (exact nonzero test by default).
SupportSet support_of(const Vector& x, const GroupPartition& partition, double zero_tol = 0.0);

/// FNV-1a 64-bit hash of a byte range.
std::uint64_t fnv1a(std::span<const unsigned char> bytes, std::uint64_t seed = 14695981039346656037ull);
std::uint64_t fnv1a(const std::string& s);

}  // namespace spstorm
