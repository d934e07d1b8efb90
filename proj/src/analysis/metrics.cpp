#include <spstorm/analysis.hpp>
#include <spstorm/objective.hpp>
#include <spstorm/regularizer.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace spstorm {

double gradient_mapping_norm(const ProblemInstance& instance, const Vector& x, double alpha)
{
    if (!(alpha > 0.0)) throw ConfigError("gradient_mapping_norm: alpha must be positive");
    const Vector g = full_gradient(instance, x);
    return (prox(instance.partition, x - alpha * g, alpha) - x).norm() / alpha;
}

SupportMetricsReport support_metrics(const std::vector<bool>& matches, std::size_t last_symmetric_difference,
                                     std::size_t star_size)
{
    if (matches.empty()) throw DataError("support_metrics: empty trace");
    SupportMetricsReport r;
    r.epochs = matches.size();
    for (std::size_t e = 0; e < matches.size(); ++e) {
        if (!matches[e]) continue;
        ++r.total_identifications;
        if (!r.first_identification) r.first_identification = e + 1;
    }
    std::size_t e = matches.size();
    while (e > 0 && matches[e - 1]) --e;
    if (e < matches.size()) r.first_consistent_identification = e + 1;
    if (star_size == 0) {
        r.last_iterate_recovery = last_symmetric_difference == 0 ? 1.0 : 0.0;
    } else {
        r.last_iterate_recovery =
            1.0 - static_cast<double>(last_symmetric_difference) / static_cast<double>(star_size);
    }
    return r;
}

SupportMetricsReport support_metrics(std::span<const SupportSet> supports, const SupportSet& s_star)
{
    if (supports.empty()) throw DataError("support_metrics: empty trace");
    std::vector<bool> matches(supports.size());
    for (std::size_t e = 0; e < supports.size(); ++e) matches[e] = supports[e] == s_star;
    return support_metrics(matches, supports.back().symmetric_difference_size(s_star), s_star.size());
}

ScoreResult score_algorithms(const std::vector<ScoreEntry>& entries, Better better)
{
    ScoreResult out;
    out.raw.assign(entries.size(), 0.0);
    out.normalized.assign(entries.size(), 0.0);
    std::vector<double> distinct;
    for (const auto& e : entries)
        if (!e.failed) distinct.push_back(e.value);
    if (distinct.empty()) {
        out.all_failed = true;
        return out;
    }
    if (better == Better::LOWER) std::sort(distinct.begin(), distinct.end());
    else std::sort(distinct.begin(), distinct.end(), std::greater<>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    const double top = static_cast<double>(entries.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].failed) continue;
        const auto pos = std::find(distinct.begin(), distinct.end(), entries[i].value) - distinct.begin();
        out.raw[i] = top - static_cast<double>(pos);
        sum += out.raw[i];
    }
    for (std::size_t i = 0; i < entries.size(); ++i) out.normalized[i] = out.raw[i] / sum;
    return out;
}

std::map<std::string, double> objective_gap(const std::map<std::string, std::optional<double>>& best,
                                            std::optional<double> f_star_hint)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    double f_star = inf;
    for (const auto& [name, value] : best)
        if (value && std::isfinite(*value)) f_star = std::min(f_star, *value);
    if (!std::isfinite(f_star)) throw DataError("objective_gap: no finite objective values");
    if (f_star_hint && std::isfinite(*f_star_hint)) f_star = std::min(f_star, *f_star_hint);
    const double denom = std::max(1.0, f_star);
    std::map<std::string, double> gaps;
    for (const auto& [name, value] : best) {
        gaps[name] = (value && std::isfinite(*value)) ? (*value - f_star) / denom : inf;
    }
    return gaps;
}

RateFit rate_fit(std::span<const double> ks, std::span<const double> values)
{
    if (ks.size() != values.size()) throw DimensionError("rate_fit: series lengths differ");
    if (ks.size() < 3) throw ConfigError("rate_fit: need at least 3 points");
    const double n = static_cast<double>(ks.size());
    double sx = 0, sy = 0;
    std::vector<double> lx(ks.size()), ly(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (!(ks[i] > 0.0) || !(values[i] > 0.0)) throw DataError("rate_fit: values must be positive");
        lx[i] = std::log(ks[i]);
        ly[i] = std::log(values[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw DataError("rate_fit: all k values are equal");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

}  // namespace spstorm
