#include <spstorm/analysis.hpp>

#include <algorithm>
#include <cmath>

namespace spstorm {

std::vector<EnvelopePoint> theory_envelopes(const TheoryConstants& constants, std::span<const std::size_t> ks,
                                            const EnvelopeScales& scales)
{
    constants.validate();
    const auto& t = constants;
    const std::size_t k_low = t.k_underline();
    const double spread = t.sigma + t.lipschitz * (t.subgrad_bound + t.direction_bound) * t.zeta * t.alpha_bar;
    const double L = t.lipschitz, mu = t.mu_f;
    const double structural =
        t.zeta * (mu * mu / std::pow(L, 4) + (2.0 / (L * L)) * std::pow(1.0 + mu / L, 2)) * spread * spread;
    const double c1_bar = std::pow(static_cast<double>(k_low) + 2.0, t.theta);
    const double c2_bar = scales.iterate_constant * structural;

    std::vector<EnvelopePoint> out;
    out.reserve(ks.size());
    for (auto k : ks) {
        if (k < k_low) throw ConfigError("theory_envelopes: k below k_underline");
        const double kk = static_cast<double>(k);
        const double eta_k = t.eta0 / (kk * kk);
        const double branch = std::max(std::pow((static_cast<double>(k_low) + 1.0) / (kk + 2.0), t.c),
                                       t.c / std::sqrt(kk + 2.0));
        EnvelopePoint p;
        p.k = k;
        p.U = scales.u_constant * spread * branch * std::sqrt(std::log(2.0 / eta_k));
        p.iterate_bound = c1_bar * scales.initial_distance_sq / std::pow(kk, t.theta) +
                          c2_bar * std::log(2.0 * kk / t.eta0) / kk;
        out.push_back(p);
    }
    return out;
}

}  // namespace spstorm
