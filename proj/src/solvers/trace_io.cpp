#include <spstorm/solvers.hpp>

#include <json.hpp>

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace spstorm {

namespace {

constexpr const char* kHeader = "epoch,obj,support_size,support_hash,dist_to_xstar,eps_norm,wall_ms";

std::string num(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string opt(const std::optional<double>& v)
{
    return v ? num(*v) : std::string();
}

double parse_double(const std::string& s, std::size_t line)
{
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw DataError("trace csv line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

void write_trace_csv(std::ostream& out, const SolverTrace& trace, const TraceMeta& meta,
                     const TraceWriteOptions& options)
{
    out << "# config_hash=" << meta.config_hash << " experiment_hash=" << meta.experiment_hash
        << " instance=" << meta.instance << " seed=" << meta.seed << " method=" << to_string(trace.method)
        << " termination=" << to_string(trace.termination) << "\n";
    out << kHeader << "\n";
    for (const auto& r : trace.records) {
        out << num(r.epoch) << ',' << num(r.objective) << ',' << r.support.size() << ',' << hex64(r.support.hash())
            << ',' << opt(r.dist_to_xstar) << ',' << opt(r.eps_norm) << ',';
        if (options.include_timing) out << num(r.wall_ms);
        out << '\n';
    }
}

void write_trace_sidecar(std::ostream& out, const SolverTrace& trace, const SolverConfig& config,
                         const TraceMeta& meta)
{
    using nlohmann::json;
    json j;
    j["schema_version"] = 1;
    j["method"] = to_string(trace.method);
    j["seed"] = meta.seed;
    j["config_hash"] = meta.config_hash;
    j["experiment_hash"] = meta.experiment_hash;
    j["instance"] = meta.instance;
    j["config"] = {
        {"batch_size", config.batch_size},
        {"max_epochs", config.max_epochs},
        {"step_scale", config.step_scale},
        {"rda_gamma", config.rda_gamma},
        {"beta_rule", to_string(config.beta_rule)},
        {"theory_c", config.theory_c},
        {"zeta_mode", to_string(config.zeta_mode)},
        {"zeta", config.zeta},
        {"zeta_cap", config.zeta_cap},
        {"stabilize", config.stabilize},
        {"svrg_inner_epochs", config.svrg_inner_epochs},
        {"snapshot", to_string(config.snapshot)},
        {"memory_budget_bytes", config.memory_budget_bytes},
        {"record_period", config.record_period},
        {"diagnostics_period", config.diagnostics_period},
        {"time_limit_seconds", config.time_limit_seconds},
    };
    j["termination"] = to_string(trace.termination);
    j["failed"] = trace.failed();
    j["note"] = trace.note;
    j["iterations"] = trace.iterations;
    j["full_gradient_evals"] = trace.full_gradient_evals;
    j["records"] = trace.records.size();
    std::vector<std::size_t> final_support;
    if (!trace.records.empty()) {
        auto idx = trace.records.back().support.indices();
        final_support.assign(idx.begin(), idx.end());
    }
    j["final_support"] = final_support;
    json diag = json::array();
    for (const auto& p : trace.diagnostics) {
        json e = {{"k", p.k}, {"eps_norm", p.eps_norm}};
        if (p.dist_x) e["dist_x"] = *p.dist_x;
        if (p.dist_y) e["dist_y"] = *p.dist_y;
        diag.push_back(std::move(e));
    }
    j["diagnostics"] = std::move(diag);
    out << j.dump(2) << "\n";
}

std::vector<CsvRow> read_trace_csv(std::istream& in, TraceMeta& meta)
{
    std::string line;
    std::size_t lineno = 0;
    std::vector<CsvRow> rows;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream s(line.substr(1));
            std::string tok;
            while (s >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
                if (key == "config_hash") meta.config_hash = value;
                else if (key == "experiment_hash") meta.experiment_hash = value;
                else if (key == "instance") meta.instance = value;
                else if (key == "seed") meta.seed = std::stoull(value);
            }
            continue;
        }
        if (!header_seen) {
            if (line != kHeader) throw DataError("trace csv: unexpected header '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 7) throw DataError("trace csv line " + std::to_string(lineno) + ": expected 7 fields");
        CsvRow r;
        r.epoch = parse_double(f[0], lineno);
        r.objective = parse_double(f[1], lineno);
        r.support_size = static_cast<std::size_t>(parse_double(f[2], lineno));
        r.support_hash = std::stoull(f[3], nullptr, 16);
        if (!f[4].empty()) r.dist = parse_double(f[4], lineno);
        if (!f[5].empty()) r.eps = parse_double(f[5], lineno);
        rows.push_back(r);
    }
    if (!header_seen) throw DataError("trace csv: missing header");
    return rows;
}

}  // namespace spstorm
