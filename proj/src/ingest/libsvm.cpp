#include <spstorm/ingest.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

namespace spstorm {

ParseError::ParseError(std::size_t line, const std::string& what)
    : DataError("line " + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view tok, std::size_t line, const char* what)
{
    double v = 0.0;
    // from_chars rejects a leading '+', which LIBSVM labels commonly carry.
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw ParseError(line, std::string("non-numeric ") + what + " '" + std::string(tok) + "'");
    }
    return v;
}

double map_label(double raw, std::size_t line)
{
    if (raw == 1.0) return 1.0;
    if (raw == -1.0 || raw == 0.0 || raw == 2.0) return -1.0;
    throw ParseError(line, "unmappable label " + std::to_string(raw));
}

}  // namespace

SparseDataset parse_libsvm(std::istream& in, std::optional<std::size_t> declared_features)
{
    SparseDatasetBuilder builder;
    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    std::size_t max_index_plus_one = 0;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        std::string_view rest(line);
        if (const auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
        rest = trim(rest);
        if (rest.empty()) continue;

        idx.clear();
        val.clear();
        bool first = true;
        double label = 0.0;
        while (!rest.empty()) {
            const auto end = rest.find_first_of(" \t");
            const auto tok = rest.substr(0, end);
            rest = end == std::string_view::npos ? std::string_view{} : trim(rest.substr(end));
            if (first) {
                label = map_label(parse_double(tok, lineno, "label"), lineno);
                first = false;
                continue;
            }
            const auto colon = tok.find(':');
            if (colon == std::string_view::npos) throw ParseError(lineno, "expected index:value, got '" + std::string(tok) + "'");
            const auto itok = tok.substr(0, colon);
            std::uint64_t one_based = 0;
            const auto [ptr, ec] = std::from_chars(itok.data(), itok.data() + itok.size(), one_based);
            if (ec != std::errc() || ptr != itok.data() + itok.size() || one_based == 0) {
                throw ParseError(lineno, "invalid feature index '" + std::string(itok) + "'");
            }
            if (one_based > std::numeric_limits<std::uint32_t>::max()) throw ParseError(lineno, "feature index too large");
            const auto zero_based = static_cast<std::uint32_t>(one_based - 1);
            if (!idx.empty() && zero_based <= idx.back()) throw ParseError(lineno, "feature indices not strictly increasing");
            if (declared_features && zero_based >= *declared_features) {
                throw ParseError(lineno, "feature index " + std::to_string(one_based) + " exceeds declared feature count");
            }
            idx.push_back(zero_based);
            val.push_back(parse_double(tok.substr(colon + 1), lineno, "feature value"));
        }
        if (!idx.empty()) max_index_plus_one = std::max<std::size_t>(max_index_plus_one, idx.back() + 1);
        builder.add_row(idx, val, label);
    }
    builder.set_num_features(declared_features.value_or(max_index_plus_one));
    return std::move(builder).build();
}

SparseDataset load_libsvm(const std::filesystem::path& path, std::optional<std::size_t> declared_features)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file " + path.string());
    return parse_libsvm(in, declared_features);
}

void write_libsvm(std::ostream& out, const SparseDataset& data)
{
    char buf[64];
    for (std::size_t j = 0; j < data.num_samples(); ++j) {
        out << (data.label(j) > 0 ? "+1" : "-1");
        const auto row = data.row(j);
        for (std::size_t p = 0; p < row.nnz(); ++p) {
            // Shortest representation that round-trips exactly.
            const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), row.values[p]);
            out << ' ' << (row.indices[p] + 1) << ':' << std::string_view(buf, static_cast<std::size_t>(end - buf));
        }
        out << '\n';
    }
}

SparseDataset normalize_rows(const SparseDataset& data)
{
    std::vector<double> values(data.values().begin(), data.values().end());
    for (std::size_t j = 0; j < data.num_samples(); ++j) {
        const auto row = data.row(j);
        const double sq = row.squared_norm();
        // Rows already unit up to rounding are left untouched so that
        // normalization is exactly idempotent.
        if (sq == 0.0 || std::abs(sq - 1.0) <= 8 * std::numeric_limits<double>::epsilon()) continue;
        const double norm = std::sqrt(sq);
        const auto b = data.row_ptr()[j];
        for (std::size_t p = 0; p < row.nnz(); ++p) values[b + p] = row.values[p] / norm;
    }
    return SparseDataset(data.num_features(),
                         {data.row_ptr().begin(), data.row_ptr().end()},
                         {data.indices().begin(), data.indices().end()},
                         std::move(values),
                         {data.labels().begin(), data.labels().end()});
}

}  // namespace spstorm
