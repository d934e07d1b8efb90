#pragma once

#include <spstorm/core.hpp>
#include <spstorm/ingest.hpp>
#include <spstorm/solvers.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace spstorm::bench {

namespace fs = std::filesystem;

// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitBudget = 3;

/// A run ended for a budget reason (time, memory, iteration cap).
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kRatioMenu[] = {0.25, 0.5, 0.75, 1.0};

struct PrepareOptions {
    fs::path dataset;
    fs::path out_dir;
    double ratio = 0.25;
    bool ratio_free = false;
    double lambda_factor = 0.1;
    double l2_coefficient = 1e-5;
    std::optional<std::size_t> declared_features;
};

/// Bundle layout: instance.manifest, data.svm (normalized rows),
/// reference.json, traces/.
struct Bundle {
    fs::path dir;
    Manifest manifest;
    ProblemInstance instance;
    std::string instance_id;
};

void cmd_prepare(const PrepareOptions& options);
Bundle load_bundle(const fs::path& dir);

struct ReferenceArtifact {
    Vector x_star;
    double objective = 0.0;
    double chi = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<std::size_t> support;
    double Delta = 1.0, Delta_star = 1.0, delta_min = 1.0, delta_star = 1.0;
};

/// Throws BudgetError after writing the artifact when the tolerance is missed.
ReferenceArtifact cmd_reference(const fs::path& bundle_dir, double tol, std::size_t max_iterations = 100000);
std::optional<ReferenceArtifact> load_reference(const fs::path& bundle_dir);

struct GridOptions {
    fs::path bundle_dir;
    fs::path trace_dir;  // empty: <bundle>/traces
    std::vector<Method> methods{Method::SPSTORM, Method::PSTORM, Method::PROXSVRG, Method::SAGA, Method::RDA};
    std::vector<std::uint64_t> seeds{1, 2, 3};
    SolverConfig base;
    unsigned threads = 0;
    bool timing = false;
};

/// Returns the number of runs that ended for a budget reason; every run
/// still gets its CSV and sidecar.
std::size_t cmd_run(const GridOptions& options);

struct ReportOptions {
    fs::path bundle_dir;
    fs::path trace_dir;  // empty: <bundle>/traces
    fs::path out_dir;    // empty: trace dir
};

void cmd_report(const ReportOptions& options);

/// Trace file stem for one run.
std::string trace_stem(Method method, std::uint64_t seed);

}  // namespace spstorm::bench
