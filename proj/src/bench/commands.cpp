#include <spstorm/analysis.hpp>
#include <spstorm/bench.hpp>
#include <spstorm/objective.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace spstorm::bench {

using nlohmann::json;

namespace {

constexpr const char* kManifestName = "instance.manifest";
constexpr const char* kDataName = "data.svm";
constexpr const char* kReferenceName = "reference.json";

std::string num(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed for " + path.string());
}

json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

fs::path traces_of(const fs::path& bundle, const fs::path& explicit_dir)
{
    return explicit_dir.empty() ? bundle / "traces" : explicit_dir;
}

}  // namespace

std::string trace_stem(Method method, std::uint64_t seed)
{
    return to_string(method) + "_seed" + std::to_string(seed);
}

void cmd_prepare(const PrepareOptions& o)
{
    if (!o.ratio_free && std::find(std::begin(kRatioMenu), std::end(kRatioMenu), o.ratio) == std::end(kRatioMenu)) {
        throw ConfigError("group ratio must be one of 0.25, 0.5, 0.75, 1.0 (use --ratio-free to override)");
    }
    if (!(o.ratio > 0.0 && o.ratio <= 1.0)) throw ConfigError("group ratio must lie in (0, 1]");
    if (!(o.lambda_factor > 0.0)) throw ConfigError("lambda factor must be positive");

    const SparseDataset data = normalize_rows(load_libsvm(o.dataset, o.declared_features));
    const std::size_t n = data.num_features();
    if (n == 0 || data.num_samples() == 0) throw DataError("dataset is empty");
    const auto groups = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(o.ratio * static_cast<double>(n))));
    const GroupPartition partition = sequential_partition(n, groups);
    const double lmin = lambda_min(data, partition, o.l2_coefficient);
    if (!(lmin > 0.0)) throw DataError("lambda_min is zero: the zero vector is optimal for every weight");
    const double lambda = o.lambda_factor * lmin;

    fs::create_directories(o.out_dir);
    {
        std::ofstream out(o.out_dir / kDataName, std::ios::binary);
        if (!out) throw DataError("cannot write " + (o.out_dir / kDataName).string());
        write_libsvm(out, data);
    }
    const std::uint64_t data_sum = file_checksum(o.out_dir / kDataName);

    Manifest m;
    m.set("source", fs::absolute(o.dataset).string());
    m.set("source_checksum", hex64(file_checksum(o.dataset)));
    m.set("data_file", std::string(kDataName));
    m.set("data_checksum", hex64(data_sum));
    m.set("num_samples", data.num_samples());
    m.set("num_features", n);
    m.set("num_groups", groups);
    m.set("group_ratio", o.ratio);
    m.set("lambda_factor", o.lambda_factor);
    m.set("lambda_min", lmin);
    m.set("lambda", lambda);
    m.set("l2_coefficient", o.l2_coefficient);
    m.set("instance_id", hex64(fnv1a(hex64(data_sum) + ";groups=" + std::to_string(groups) + ";lambda=" + num(lambda) +
                                     ";l2=" + num(o.l2_coefficient))));
    m.write(o.out_dir / kManifestName);
}

Bundle load_bundle(const fs::path& dir)
{
    if (!fs::exists(dir / kManifestName)) throw DataError("no instance manifest in " + dir.string());
    Bundle b;
    b.dir = dir;
    b.manifest = Manifest::read(dir / kManifestName);
    const fs::path data_path = dir / b.manifest.get("data_file");
    if (hex64(file_checksum(data_path)) != b.manifest.get("data_checksum")) {
        throw DataError("checksum mismatch for " + data_path.string());
    }
    SparseDataset data = load_libsvm(data_path, b.manifest.get_size("num_features"));
    if (data.num_samples() != b.manifest.get_size("num_samples")) throw DataError("sample count mismatch in bundle");
    const double lambda = b.manifest.get_double("lambda");
    GroupPartition partition =
        calibrate_weights(sequential_partition(data.num_features(), b.manifest.get_size("num_groups")), lambda);
    b.instance = ProblemInstance(std::move(data), std::move(partition), b.manifest.get_double("l2_coefficient"), lambda);
    b.instance_id = b.manifest.get("instance_id");
    return b;
}

ReferenceArtifact cmd_reference(const fs::path& bundle_dir, double tol, std::size_t max_iterations)
{
    const Bundle b = load_bundle(bundle_dir);
    const auto result = reference_solve(b.instance, tol, 0.0, max_iterations);
    const Vector grad = full_gradient(b.instance, result.x);
    const auto nd = nondegeneracy_constants(b.instance.partition, result.x, grad);
    const auto support = support_of(result.x, b.instance.partition);

    ReferenceArtifact a;
    a.x_star = result.x;
    a.objective = result.objective;
    a.chi = result.chi;
    a.iterations = result.iterations;
    a.converged = result.converged;
    a.support.assign(support.indices().begin(), support.indices().end());
    a.Delta = nd.Delta;
    a.Delta_star = nd.Delta_star;
    a.delta_min = nd.delta_min;
    a.delta_star = nd.delta_star;

    json j;
    j["schema_version"] = 1;
    j["instance_id"] = b.instance_id;
    j["tol"] = tol;
    j["converged"] = a.converged;
    j["iterations"] = a.iterations;
    j["chi"] = a.chi;
    j["F_star"] = a.objective;
    j["support"] = a.support;
    j["Delta"] = a.Delta;
    j["Delta_star"] = a.Delta_star;
    j["delta_min"] = a.delta_min;
    j["delta_star"] = a.delta_star;
    j["x_star"] = std::vector<double>(a.x_star.data(), a.x_star.data() + a.x_star.size());
    write_text(bundle_dir / kReferenceName, j.dump(2) + "\n");
    if (!a.converged) {
        throw BudgetError("reference solver stopped at the iteration cap with chi = " + num(a.chi));
    }
    return a;
}

std::optional<ReferenceArtifact> load_reference(const fs::path& bundle_dir)
{
    const fs::path path = bundle_dir / kReferenceName;
    if (!fs::exists(path)) return std::nullopt;
    const json j = read_json(path);
    if (fs::exists(bundle_dir / kManifestName)) {
        const auto m = Manifest::read(bundle_dir / kManifestName);
        if (j.value("instance_id", std::string()) != m.get("instance_id")) {
            throw DataError("reference artifact belongs to a different instance");
        }
    }
    ReferenceArtifact a;
    const auto xs = j.at("x_star").get<std::vector<double>>();
    a.x_star = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    a.objective = j.at("F_star").get<double>();
    a.chi = j.at("chi").get<double>();
    a.iterations = j.at("iterations").get<std::size_t>();
    a.converged = j.at("converged").get<bool>();
    a.support = j.at("support").get<std::vector<std::size_t>>();
    a.Delta = j.at("Delta").get<double>();
    a.Delta_star = j.at("Delta_star").get<double>();
    a.delta_min = j.at("delta_min").get<double>();
    a.delta_star = j.at("delta_star").get<double>();
    return a;
}

std::size_t cmd_run(const GridOptions& o)
{
    const Bundle b = load_bundle(o.bundle_dir);
    const auto ref = load_reference(o.bundle_dir);
    if (!ref) std::cerr << "warning: no reference artifact; distance columns stay empty\n";
    const fs::path dir = traces_of(o.bundle_dir, o.trace_dir);
    fs::create_directories(dir);

    std::vector<SolverConfig> configs;
    for (auto m : o.methods) {
        for (auto s : o.seeds) {
            SolverConfig c = o.base;
            c.method = m;
            c.seed = s;
            configs.push_back(std::move(c));
        }
    }
    std::optional<Vector> x_star;
    if (ref) x_star = ref->x_star;
    const auto traces = run_experiment(b.instance, configs, x_star, o.threads);

    std::size_t anomalies = 0;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& c = configs[i];
        const auto& t = traces[i];
        TraceMeta meta;
        meta.config_hash = hex64(config_hash(c));
        meta.experiment_hash = hex64(experiment_hash(c, b.instance_id));
        meta.instance = b.instance_id;
        meta.seed = c.seed;
        const std::string stem = trace_stem(c.method, c.seed);
        std::ostringstream csv, side;
        write_trace_csv(csv, t, meta, TraceWriteOptions{o.timing});
        write_trace_sidecar(side, t, c, meta);
        write_text(dir / (stem + ".csv"), csv.str());
        write_text(dir / (stem + ".json"), side.str());
        if (t.termination == Termination::TIME || t.failed()) {
            ++anomalies;
            std::cerr << stem << ": " << to_string(t.termination) << (t.note.empty() ? "" : " (" + t.note + ")")
                      << "\n";
        }
    }
    return anomalies;
}

namespace {

struct RunData {
    Method method;
    std::uint64_t seed;
    bool failed;
    std::vector<CsvRow> rows;
    std::vector<std::size_t> final_support;
};

double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// One plot file: epoch, one seed-averaged column per method, reference envelope.
std::string plot_csv(const std::vector<Method>& methods, const std::map<Method, std::vector<const RunData*>>& runs,
                     const std::function<std::optional<double>(const CsvRow&)>& field)
{
    std::set<double> epochs;
    for (const auto& [m, list] : runs)
        for (const auto* r : list)
            for (const auto& row : r->rows) epochs.insert(row.epoch);
    std::ostringstream out;
    out << "epoch";
    for (auto m : methods) out << ',' << to_string(m);
    out << ",sqrt_log_k_over_k\n";
    for (double e : epochs) {
        out << num(e);
        for (auto m : methods) {
            std::vector<double> vals;
            bool complete = true;
            for (const auto* r : runs.at(m)) {
                auto it = std::find_if(r->rows.begin(), r->rows.end(), [&](const CsvRow& row) { return row.epoch == e; });
                std::optional<double> v;
                if (it != r->rows.end()) v = field(*it);
                if (!v) {
                    complete = false;
                    break;
                }
                vals.push_back(*v);
            }
            out << ',';
            if (complete && !vals.empty()) out << num(mean(vals));
        }
        out << ',' << num(std::sqrt(std::log(e) / e)) << '\n';
    }
    return out.str();
}

}  // namespace

void cmd_report(const ReportOptions& o)
{
    const fs::path dir = traces_of(o.bundle_dir, o.trace_dir);
    const fs::path out_dir = o.out_dir.empty() ? dir : o.out_dir;
    if (!fs::is_directory(dir)) throw DataError("trace directory " + dir.string() + " does not exist");

    std::vector<fs::path> csvs;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".csv" && entry.path().filename().string().rfind("plot_", 0) != 0)
            csvs.push_back(entry.path());
    std::sort(csvs.begin(), csvs.end());
    if (csvs.empty()) throw DataError("no trace files in " + dir.string());

    std::vector<RunData> runs;
    std::string experiment, instance;
    for (const auto& path : csvs) {
        std::ifstream in(path);
        TraceMeta meta;
        RunData r;
        r.rows = read_trace_csv(in, meta);
        fs::path side_path = path;
        side_path.replace_extension(".json");
        const json side = read_json(side_path);
        if (experiment.empty()) {
            experiment = meta.experiment_hash;
            instance = meta.instance;
        } else if (meta.experiment_hash != experiment) {
            throw DataError("mixed experiment configurations in " + dir.string() + " (" + experiment + " vs " +
                            meta.experiment_hash + ")");
        }
        if (side.at("config_hash").get<std::string>() != meta.config_hash) {
            throw DataError("sidecar does not match " + path.filename().string());
        }
        r.method = parse_method(side.at("method").get<std::string>());
        r.seed = meta.seed;
        r.failed = side.at("failed").get<bool>() || r.rows.empty();
        r.final_support = side.at("final_support").get<std::vector<std::size_t>>();
        runs.push_back(std::move(r));
    }

    std::vector<std::string> notes;
    const auto ref = load_reference(o.bundle_dir);
    if (!ref) {
        notes.push_back("no reference artifact: support metrics, scores and distance plots omitted");
        std::cerr << "warning: " << notes.back() << "\n";
    }

    std::vector<Method> methods;
    std::map<Method, std::vector<const RunData*>> by_method;
    for (const auto& r : runs) {
        if (!by_method.count(r.method)) methods.push_back(r.method);
        by_method[r.method].push_back(&r);
    }
    std::sort(methods.begin(), methods.end());

    json report;
    report["schema_version"] = 1;
    report["instance"] = instance;
    report["experiment_hash"] = experiment;
    json per_method = json::object();

    std::map<std::string, std::optional<double>> best;
    for (auto m : methods) {
        std::vector<double> bests;
        bool any_failed = false;
        for (const auto* r : by_method[m]) {
            if (r->failed) {
                any_failed = true;
                continue;
            }
            double lo = std::numeric_limits<double>::infinity();
            for (const auto& row : r->rows) lo = std::min(lo, row.objective);
            bests.push_back(lo);
        }
        best[to_string(m)] = any_failed ? std::nullopt : std::optional<double>(mean(bests));
    }
    std::map<std::string, double> gaps;
    bool have_finite = std::any_of(best.begin(), best.end(), [](const auto& kv) { return kv.second.has_value(); });
    if (have_finite) gaps = objective_gap(best, ref ? std::optional<double>(ref->objective) : std::nullopt);
    else notes.push_back("every algorithm failed: objective gaps undefined");

    // Per-method seed averages; a metric counts as failed if any seed lacks it.
    struct Agg {
        double total = 0, first = 0, consistent = 0, recovery = 0;
        bool total_failed = false, first_failed = false, consistent_failed = false, recovery_failed = false;
    };
    std::map<Method, Agg> agg;
    if (ref) {
        const SupportSet s_star(ref->support);
        for (auto m : methods) {
            Agg a;
            std::vector<double> tot, fst, con, rec;
            for (const auto* r : by_method[m]) {
                if (r->failed) {
                    a.total_failed = a.first_failed = a.consistent_failed = a.recovery_failed = true;
                    continue;
                }
                std::vector<bool> matches;
                for (const auto& row : r->rows)
                    matches.push_back(row.support_size == s_star.size() && row.support_hash == s_star.hash());
                const auto sm = support_metrics(matches, SupportSet(r->final_support).symmetric_difference_size(s_star),
                                                s_star.size());
                tot.push_back(static_cast<double>(sm.total_identifications));
                if (sm.total_identifications == 0) a.total_failed = true;
                if (sm.first_identification) fst.push_back(static_cast<double>(*sm.first_identification));
                else a.first_failed = true;
                if (sm.first_consistent_identification)
                    con.push_back(static_cast<double>(*sm.first_consistent_identification));
                else a.consistent_failed = true;
                rec.push_back(sm.last_iterate_recovery);
            }
            a.total = mean(tot);
            a.first = mean(fst);
            a.consistent = mean(con);
            a.recovery = mean(rec);
            agg[m] = a;
        }
    }

    for (auto m : methods) {
        const std::string name = to_string(m);
        json e;
        e["runs"] = by_method[m].size();
        e["failed_runs"] = std::count_if(by_method[m].begin(), by_method[m].end(), [](auto* r) { return r->failed; });
        e["objective_best"] = best[name] ? json(*best[name]) : json(nullptr);
        e["objective_gap"] = (gaps.count(name) && std::isfinite(gaps[name])) ? json(gaps[name]) : json(nullptr);
        if (ref) {
            const Agg& a = agg[m];
            e["total_identifications"] = a.total;
            e["first_identification"] = a.first_failed ? json(nullptr) : json(a.first);
            e["first_consistent_identification"] = a.consistent_failed ? json(nullptr) : json(a.consistent);
            e["last_iterate_recovery"] = a.recovery_failed ? json(nullptr) : json(a.recovery);
        }
        per_method[name] = std::move(e);
    }
    report["methods"] = std::move(per_method);

    if (ref) {
        json scores = json::object();
        auto score = [&](const char* key, Better better, auto value, auto failed) {
            std::vector<ScoreEntry> entries;
            for (auto m : methods) entries.push_back({to_string(m), value(agg[m]), failed(agg[m])});
            const auto s = score_algorithms(entries, better);
            json raw = json::object(), norm = json::object();
            for (std::size_t i = 0; i < entries.size(); ++i) {
                raw[entries[i].name] = s.raw[i];
                norm[entries[i].name] = s.normalized[i];
            }
            scores[key] = {{"raw", raw}, {"normalized", norm}, {"all_failed", s.all_failed}};
        };
        score("total_identifications", Better::HIGHER, [](const Agg& a) { return a.total; },
              [](const Agg& a) { return a.total_failed; });
        score("first_identification", Better::LOWER, [](const Agg& a) { return a.first; },
              [](const Agg& a) { return a.first_failed; });
        score("first_consistent_identification", Better::LOWER, [](const Agg& a) { return a.consistent; },
              [](const Agg& a) { return a.consistent_failed; });
        score("last_iterate_recovery", Better::HIGHER, [](const Agg& a) { return a.recovery; },
              [](const Agg& a) { return a.recovery_failed; });
        report["scores"] = std::move(scores);
        report["s_star"] = ref->support;
        notes.push_back("failed runs score 0 on every metric, including last-iterate recovery");
    }
    report["notes"] = notes;

    // Everything is rendered before anything is written.
    std::map<std::string, std::string> files;
    files["metrics.json"] = report.dump(2) + "\n";
    if (ref) files["plot_dist.csv"] = plot_csv(methods, by_method, [](const CsvRow& r) { return r.dist; });
    files["plot_eps.csv"] = plot_csv(methods, by_method, [](const CsvRow& r) { return r.eps; });
    files["plot_support.csv"] = plot_csv(methods, by_method, [](const CsvRow& r) {
        return std::optional<double>(static_cast<double>(r.support_size));
    });
    fs::create_directories(out_dir);
    for (const auto& [name, text] : files) write_text(out_dir / name, text);
}

}  // namespace spstorm::bench
