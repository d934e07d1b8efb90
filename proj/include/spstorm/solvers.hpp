#pragma once

#include <spstorm/core.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spstorm {

enum class Method { SPSTORM, PSTORM, PROXSVRG, SAGA, RDA, REFERENCE };
enum class BetaRule { SIMPLE, THEORY, UNIT };
enum class ZetaMode { FIXED, ADAPTIVE };
enum class SnapshotRule { LAST, RANDOM };
enum class Termination { EPOCHS, TIME, MEMORY, NONFINITE, CONVERGED };

std::string to_string(Method m);
std::string to_string(BetaRule r);
std::string to_string(ZetaMode z);
std::string to_string(SnapshotRule s);
std::string to_string(Termination t);
Method parse_method(const std::string& s);
Termination parse_termination(const std::string& s);

struct SolverConfig {
    Method method = Method::SPSTORM;
    std::size_t batch_size = 256;
    std::size_t max_epochs = 1000;
    std::uint64_t seed = 1;

    double step_scale = 0.1;  // constant step alpha = step_scale / L_g
    double rda_gamma = 1e-2;  // RDA: alpha_k = sqrt(k) / gamma

    // S-PStorm
    BetaRule beta_rule = BetaRule::SIMPLE;
    double theory_c = 2.0;
    ZetaMode zeta_mode = ZetaMode::ADAPTIVE;
    double zeta = 1.0;        // FIXED value
    std::size_t zeta_cap = 100;
    bool stabilize = true;    // false: x_{k+1} = y_k
    // Optional overrides of alpha_k and beta_k (k >= 1) for S-PStorm.
    std::function<double(std::size_t)> alpha_schedule;
    std::function<double(std::size_t)> beta_schedule;

    // ProxSVRG: inner loop length in data-pass equivalents (ceil(N/m) steps each).
    std::size_t svrg_inner_epochs = 1;
    SnapshotRule snapshot = SnapshotRule::LAST;

    // SAGA scalar table budget.
    std::uint64_t memory_budget_bytes = 2ull << 30;

    std::size_t record_period = 0;             // iterations; 0 means ceil(N/m)
    std::size_t diagnostics_period = 0;        // 0 disables periodic sampling
    std::vector<std::size_t> diagnostics_at;   // extra iterations to sample
    double time_limit_seconds = 0.0;           // 0 means unlimited

    void validate() const;
    bool diagnostics_enabled() const { return diagnostics_period > 0 || !diagnostics_at.empty(); }
};

/// ceil(N / m): iterations per data-pass equivalent.
std::size_t iterations_per_epoch(std::size_t num_samples, std::size_t batch_size);

double beta_value(const SolverConfig& config, std::size_t k);
double zeta_value(const SolverConfig& config, std::size_t k);

// PStorm schedules.
double pstorm_alpha(std::size_t k, double lipschitz);
double pstorm_beta(std::size_t k, double lipschitz);

/// Canonical "key=value;" rendering of every field that affects a run.
/// Schedule overrides are rendered only as present/absent.
std::string canonical_string(const SolverConfig& config);
std::uint64_t config_hash(const SolverConfig& config);
/// Hash of the settings shared by every run of one experiment grid: the
/// config without method and seed, combined with an instance tag.
std::uint64_t experiment_hash(const SolverConfig& config, const std::string& instance_tag);
std::string hex64(std::uint64_t v);

struct TraceRecord {
    std::size_t iteration = 0;
    double epoch = 0.0;
    SupportSet support;
    double objective = 0.0;
    std::optional<double> dist_to_xstar;
    std::optional<double> eps_norm;
    double wall_ms = 0.0;
};

/// Sampled estimator quality at iteration k, measured before the update.
struct DiagnosticPoint {
    std::size_t k = 0;
    double eps_norm = 0.0;                  // ||d_k - grad f(x_k)||
    std::optional<double> dist_x;           // ||x_k - x*||
    std::optional<double> dist_y;           // ||y_k - x*||
};

struct SolverTrace {
    Method method = Method::SPSTORM;
    std::uint64_t seed = 0;
    std::vector<TraceRecord> records;
    std::vector<DiagnosticPoint> diagnostics;
    Vector final_x;  // solver state x after the last step
    Vector final_y;  // last prox output, the iterate whose support is recorded
    Termination termination = Termination::EPOCHS;
    std::size_t iterations = 0;
    std::size_t full_gradient_evals = 0;
    double wall_seconds = 0.0;
    std::string note;

    bool failed() const { return termination == Termination::MEMORY || termination == Termination::NONFINITE; }
    std::vector<SupportSet> supports() const;
};

/// Read-only view of one iteration, valid only during the observer call.
/// z is the prox input, y = prox(z, alpha).
struct IterationView {
    std::size_t k;
    const Vector& x;
    const Vector& d;
    const Vector& v;
    const Vector& y;
    const Vector& z;
    double alpha;
};

struct RunOptions {
    std::optional<Vector> x_star;
    std::function<void(const IterationView&)> observer;
};

SolverTrace spstorm_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options = {});
SolverTrace pstorm_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options = {});
SolverTrace proxsvrg_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options = {});
SolverTrace saga_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options = {});
SolverTrace rda_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options = {});
/// Full-gradient accelerated method as a traced run; one iteration is one epoch.
SolverTrace reference_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options = {});

SolverTrace run_solver(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options = {});

struct ReferenceResult {
    Vector x;
    double objective = 0.0;
    double chi = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Accelerated proximal gradient with function-value restart, step 1/L_g,
/// stopped once chi(x; alpha) <= tol. alpha <= 0 selects 1/L_g.
ReferenceResult reference_solve(const ProblemInstance& instance, double tol = 1e-8, double alpha = 0.0,
                                std::size_t max_iterations = 100000);

/// Runs every config; distinct runs go to a pool of `threads` workers
/// (0 means hardware concurrency). Output order follows `configs`.
std::vector<SolverTrace> run_experiment(const ProblemInstance& instance, const std::vector<SolverConfig>& configs,
                                        const std::optional<Vector>& x_star = std::nullopt, unsigned threads = 0);

// Trace files: CSV with a leading "# key=value ..." comment line and a JSON sidecar.
struct TraceMeta {
    std::string config_hash;
    std::string experiment_hash;
    std::string instance;
    std::uint64_t seed = 0;
};

struct TraceWriteOptions {
    bool include_timing = false;  // wall_ms is left empty otherwise so files are reproducible
};

void write_trace_csv(std::ostream& out, const SolverTrace& trace, const TraceMeta& meta,
                     const TraceWriteOptions& options = {});
void write_trace_sidecar(std::ostream& out, const SolverTrace& trace, const SolverConfig& config,
                         const TraceMeta& meta);

/// Rows of a trace CSV. Support index lists live in the sidecar; the CSV
/// carries only size and hash.
struct CsvRow {
    double epoch;
    double objective;
    std::size_t support_size;
    std::uint64_t support_hash;
    std::optional<double> dist;
    std::optional<double> eps;
};
std::vector<CsvRow> read_trace_csv(std::istream& in, TraceMeta& meta);

}  // namespace spstorm
