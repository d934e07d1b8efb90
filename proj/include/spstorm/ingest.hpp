#pragma once

#include <spstorm/core.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace spstorm {

/// Thrown for malformed LIBSVM input; carries the 1-based line number.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Parses LIBSVM text (`<label> <idx>:<val> ...`, 1-based indices).
///
/// Labels map to +-1: 1 -> +1, and -1, 0, 2 -> -1 (covers the {0,1} and
/// {1,2} conventions). Anything after '#' on a line is ignored. With
/// `declared_features`, n is fixed and larger indices are an error;
/// otherwise n = 1 + max observed (0-based) index.
SparseDataset parse_libsvm(std::istream& in, std::optional<std::size_t> declared_features = std::nullopt);
SparseDataset load_libsvm(const std::filesystem::path& path,
                          std::optional<std::size_t> declared_features = std::nullopt);

/// Writes LIBSVM text that parse_libsvm reads back to an identical dataset.
void write_libsvm(std::ostream& out, const SparseDataset& data);

/// Scales every nonzero row to unit Euclidean norm. Zero rows are kept.
SparseDataset normalize_rows(const SparseDataset& data);

/// Splits [0, n) into `num_groups` contiguous groups of floor(n / num_groups)
/// indices each; the last group takes the remainder.
GroupPartition sequential_partition(std::size_t n, std::size_t num_groups);

/// Smallest Lambda for which x = 0 solves the problem when the weights are
/// lambda_i = Lambda * sqrt(|g_i|):  max_i ||[grad f(0)]_{g_i}|| / sqrt(|g_i|).
double lambda_min(const SparseDataset& data, const GroupPartition& partition, double l2_coefficient);

/// weights[i] = scale * sqrt(|g_i|).
GroupPartition calibrate_weights(const GroupPartition& partition, double scale);

/// Key=value text file. Lines starting with '#' and blank lines are skipped.
class Manifest {
public:
    static Manifest read(const std::filesystem::path& path);
    void write(const std::filesystem::path& path) const;

    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    void set(const std::string& key, double value);
    void set(const std::string& key, std::size_t value);
    bool contains(const std::string& key) const { return entries_.count(key) > 0; }
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::size_t get_size(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

/// Checks a dataset against a manifest's `expected_samples` /
/// `expected_features` keys (when present). Throws DataError on mismatch.
void verify_against_manifest(const SparseDataset& data, const Manifest& manifest);

/// FNV-1a checksum of a file's bytes.
std::uint64_t file_checksum(const std::filesystem::path& path);

/// Seeded synthetic logistic data.
///
/// Rows are Gaussian with the features of the first `active_groups` groups
/// at unit scale and the rest scaled by `inactive_scale`, then normalized.
/// The planted coefficient vector is supported on the active groups with
/// norm `signal`; labels are drawn from the logistic model.
struct SyntheticSpec {
    std::size_t num_samples = 200;
    std::size_t num_features = 20;
    std::size_t num_groups = 4;
    std::size_t active_groups = 2;
    double signal = 5.0;
    double inactive_scale = 1.0;
    std::uint64_t seed = 1;
};

SparseDataset make_synthetic(const SyntheticSpec& spec);

}  // namespace spstorm
