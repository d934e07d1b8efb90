#include <spstorm/solvers.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace spstorm {

namespace {

template <class E>
struct NamedEnum {
    E value;
    const char* name;
};

constexpr NamedEnum<Method> kMethods[] = {
    {Method::SPSTORM, "spstorm"}, {Method::PSTORM, "pstorm"}, {Method::PROXSVRG, "proxsvrg"},
    {Method::SAGA, "saga"},       {Method::RDA, "rda"},       {Method::REFERENCE, "reference"},
};

constexpr NamedEnum<Termination> kTerminations[] = {
    {Termination::EPOCHS, "epochs"},       {Termination::TIME, "time"},
    {Termination::MEMORY, "memory"},       {Termination::NONFINITE, "nonfinite"},
    {Termination::CONVERGED, "converged"},
};

std::string fmt(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string to_string(Method m)
{
    for (const auto& e : kMethods)
        if (e.value == m) return e.name;
    return "unknown";
}

std::string to_string(BetaRule r)
{
    switch (r) {
    case BetaRule::SIMPLE: return "simple";
    case BetaRule::THEORY: return "theory";
    case BetaRule::UNIT: return "unit";
    }
    return "unknown";
}

std::string to_string(ZetaMode z)
{
    return z == ZetaMode::FIXED ? "fixed" : "adaptive";
}

std::string to_string(SnapshotRule s)
{
    return s == SnapshotRule::LAST ? "last" : "random";
}

std::string to_string(Termination t)
{
    for (const auto& e : kTerminations)
        if (e.value == t) return e.name;
    return "unknown";
}

Method parse_method(const std::string& s)
{
    std::string lower = s;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto& e : kMethods)
        if (lower == e.name) return e.value;
    throw ConfigError("unknown method '" + s + "'");
}

Termination parse_termination(const std::string& s)
{
    for (const auto& e : kTerminations)
        if (s == e.name) return e.value;
    throw ConfigError("unknown termination reason '" + s + "'");
}

void SolverConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("SolverConfig: ") + what);
    };
    require(batch_size >= 1, "batch_size must be at least 1");
    require(max_epochs >= 1, "max_epochs must be at least 1");
    require(step_scale > 0.0, "step_scale must be positive");
    require(rda_gamma > 0.0, "rda_gamma must be positive");
    require(beta_rule != BetaRule::THEORY || theory_c > 1.0, "theory schedule needs c > 1");
    require(zeta_mode != ZetaMode::FIXED || zeta > 0.0, "fixed zeta must be positive");
    require(zeta_mode != ZetaMode::ADAPTIVE || zeta_cap >= 1, "zeta cap must be at least 1");
    require(svrg_inner_epochs >= 1, "svrg_inner_epochs must be at least 1");
    require(time_limit_seconds >= 0.0, "time limit must be nonnegative");
}

std::size_t iterations_per_epoch(std::size_t num_samples, std::size_t batch_size)
{
    if (batch_size == 0) throw ConfigError("batch size must be positive");
    return std::max<std::size_t>(1, (num_samples + batch_size - 1) / batch_size);
}

double beta_value(const SolverConfig& config, std::size_t k)
{
    if (config.beta_schedule) return config.beta_schedule(k);
    const double kk = static_cast<double>(k);
    switch (config.beta_rule) {
    case BetaRule::SIMPLE: return 1.0 / (kk + 1.0);
    case BetaRule::THEORY: return std::min(0.5, config.theory_c / (kk + 1.0));
    case BetaRule::UNIT: return 1.0;
    }
    return 1.0;
}

double zeta_value(const SolverConfig& config, std::size_t k)
{
    if (config.zeta_mode == ZetaMode::FIXED) return config.zeta;
    return static_cast<double>(std::min(k, config.zeta_cap));
}

double pstorm_alpha(std::size_t k, double lipschitz)
{
    return (std::cbrt(4.0) / (8.0 * lipschitz)) / std::cbrt(static_cast<double>(k) + 4.0);
}

double pstorm_beta(std::size_t k, double lipschitz)
{
    const double a = pstorm_alpha(k, lipschitz);
    const double a_next = pstorm_alpha(k + 1, lipschitz);
    const double aL2 = a * a * lipschitz * lipschitz;
    return (1.0 + 24.0 * aL2 - a_next / a) / (1.0 + 4.0 * aL2);
}

namespace {

void common_fields(std::ostringstream& s, const SolverConfig& c)
{
    s << "batch=" << c.batch_size << ";epochs=" << c.max_epochs << ";step_scale=" << fmt(c.step_scale)
      << ";rda_gamma=" << fmt(c.rda_gamma) << ";beta=" << to_string(c.beta_rule) << ";c=" << fmt(c.theory_c)
      << ";zeta_mode=" << to_string(c.zeta_mode) << ";zeta=" << fmt(c.zeta) << ";zeta_cap=" << c.zeta_cap
      << ";stabilize=" << c.stabilize << ";alpha_override=" << static_cast<bool>(c.alpha_schedule)
      << ";beta_override=" << static_cast<bool>(c.beta_schedule) << ";svrg_inner=" << c.svrg_inner_epochs
      << ";snapshot=" << to_string(c.snapshot) << ";memory_budget=" << c.memory_budget_bytes
      << ";record_period=" << c.record_period << ";diag_period=" << c.diagnostics_period << ";diag_at=";
    for (std::size_t i = 0; i < c.diagnostics_at.size(); ++i) s << (i ? "," : "") << c.diagnostics_at[i];
    s << ";time_limit=" << fmt(c.time_limit_seconds) << ";";
}

}  // namespace

std::string canonical_string(const SolverConfig& config)
{
    std::ostringstream s;
    s << "method=" << to_string(config.method) << ";seed=" << config.seed << ";";
    common_fields(s, config);
    return s.str();
}

std::uint64_t config_hash(const SolverConfig& config)
{
    return fnv1a(canonical_string(config));
}

std::uint64_t experiment_hash(const SolverConfig& config, const std::string& instance_tag)
{
    std::ostringstream s;
    s << "instance=" << instance_tag << ";";
    common_fields(s, config);
    return fnv1a(s.str());
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    constexpr char digits[] = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[v & 0xF];
        v >>= 4;
    }
    buf[16] = '\0';
    return buf;
}

std::vector<SupportSet> SolverTrace::supports() const
{
    std::vector<SupportSet> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.support);
    return out;
}

}  // namespace spstorm
