#include <spstorm/ingest.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace spstorm {

Manifest Manifest::read(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest " + path.string());
    Manifest m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "manifest line without '='");
        auto strip = [](std::string s) {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string::npos) return std::string{};
            return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
        };
        m.entries_[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return m;
}

void Manifest::write(const std::filesystem::path& path) const
{
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest " + path.string());
    for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
}

void Manifest::set(const std::string& key, double value)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    entries_[key] = std::string(buf, end);
}

void Manifest::set(const std::string& key, std::size_t value)
{
    entries_[key] = std::to_string(value);
}

const std::string& Manifest::get(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw DataError("manifest is missing key '" + key + "'");
    return it->second;
}

double Manifest::get_double(const std::string& key) const
{
    const auto& s = get(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError("manifest key '" + key + "' is not a number");
    return v;
}

std::size_t Manifest::get_size(const std::string& key) const
{
    const auto& s = get(key);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError("manifest key '" + key + "' is not a count");
    return v;
}

void verify_against_manifest(const SparseDataset& data, const Manifest& manifest)
{
    if (manifest.contains("expected_samples") && manifest.get_size("expected_samples") != data.num_samples()) {
        throw DataError("dataset has " + std::to_string(data.num_samples()) + " samples, manifest expects " +
                        manifest.get("expected_samples"));
    }
    if (manifest.contains("expected_features") && manifest.get_size("expected_features") != data.num_features()) {
        throw DataError("dataset has " + std::to_string(data.num_features()) + " features, manifest expects " +
                        manifest.get("expected_features"));
    }
}

std::uint64_t file_checksum(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::uint64_t h = 14695981039346656037ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const auto got = static_cast<std::size_t>(in.gcount());
        h = fnv1a({reinterpret_cast<const unsigned char*>(buf), got}, h);
    }
    return h;
}

}  // namespace spstorm
