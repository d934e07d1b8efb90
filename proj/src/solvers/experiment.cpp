#include "driver.hpp"

#include <spstorm/objective.hpp>
#include <spstorm/regularizer.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace spstorm::detail {

SolverTrace drive(const ProblemInstance& instance, const SolverConfig& config, StepRule& rule,
                  const RunOptions& options)
{
    using clock = std::chrono::steady_clock;
    config.validate();
    const auto t0 = clock::now();
    auto elapsed_ms = [&] { return std::chrono::duration<double, std::milli>(clock::now() - t0).count(); };

    const std::size_t n = instance.num_features();
    if (options.x_star && static_cast<std::size_t>(options.x_star->size()) != n) {
        throw DimensionError("x_star length does not match the instance");
    }

    SolverTrace trace;
    trace.method = config.method;
    trace.seed = config.seed;

    const std::size_t b = iterations_per_epoch(instance.num_samples(), config.batch_size);
    const std::size_t period = config.record_period ? config.record_period : b;
    const std::size_t total = config.max_epochs * b;
    std::vector<std::size_t> sample_at = config.diagnostics_at;
    std::sort(sample_at.begin(), sample_at.end());
    const bool diagnostics = config.diagnostics_enabled();

    if (!rule.start()) {
        trace.termination = Termination::MEMORY;
        trace.note = rule.note;
        trace.final_x = rule.x;
        trace.final_y = rule.y;
        trace.full_gradient_evals = rule.full_gradient_evals;
        trace.wall_seconds = elapsed_ms() / 1000.0;
        return trace;
    }

    Vector grad(n);
    std::size_t k = 1;
    for (; k <= total; ++k) {
        rule.compute(k);
        if (options.observer) options.observer(IterationView{k, rule.x, rule.d, rule.v, rule.y, rule.z, rule.alpha});

        if (!rule.y.allFinite() || !rule.d.allFinite()) {
            trace.termination = Termination::NONFINITE;
            trace.note = "non-finite iterate at iteration " + std::to_string(k);
            break;
        }

        const bool record = k % period == 0 || k == total;
        const bool sampled = (config.diagnostics_period > 0 && k % config.diagnostics_period == 0) ||
                             std::binary_search(sample_at.begin(), sample_at.end(), k);
        std::optional<double> eps;
        if (sampled || (record && diagnostics)) {
            full_gradient(instance, rule.x, grad);
            eps = (rule.d - grad).norm();
        }
        if (sampled) {
            DiagnosticPoint p;
            p.k = k;
            p.eps_norm = *eps;
            if (options.x_star) {
                p.dist_x = (rule.x - *options.x_star).norm();
                p.dist_y = (rule.y - *options.x_star).norm();
            }
            trace.diagnostics.push_back(p);
        }

        rule.advance(k);

        if (record) {
            TraceRecord r;
            r.iteration = k;
            r.epoch = static_cast<double>(k) / static_cast<double>(b);
            r.support = support_of(rule.y, instance.partition);
            r.objective = smooth_value(instance, rule.y) + reg_value(instance.partition, rule.y);
            if (options.x_star) r.dist_to_xstar = (rule.y - *options.x_star).norm();
            r.eps_norm = eps;
            r.wall_ms = elapsed_ms();
            trace.records.push_back(std::move(r));
            if (config.time_limit_seconds > 0.0 && trace.records.back().wall_ms > 1000.0 * config.time_limit_seconds &&
                k < total) {
                trace.termination = Termination::TIME;
                trace.note = "time limit reached after iteration " + std::to_string(k);
                ++k;
                break;
            }
        }
    }
    trace.iterations = k - 1;
    trace.final_x = rule.x;
    trace.final_y = rule.y;
    trace.full_gradient_evals = rule.full_gradient_evals;
    trace.wall_seconds = elapsed_ms() / 1000.0;
    return trace;
}

}  // namespace spstorm::detail

namespace spstorm {

SolverTrace run_solver(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options)
{
    switch (config.method) {
    case Method::SPSTORM: return spstorm_run(instance, config, options);
    case Method::PSTORM: return pstorm_run(instance, config, options);
    case Method::PROXSVRG: return proxsvrg_run(instance, config, options);
    case Method::SAGA: return saga_run(instance, config, options);
    case Method::RDA: return rda_run(instance, config, options);
    case Method::REFERENCE: {
        // one full-gradient step per epoch
        SolverConfig c = config;
        c.batch_size = std::max<std::size_t>(1, instance.num_samples());
        return reference_run(instance, c, options);
    }
    }
    throw ConfigError("run_solver: unknown method");
}

std::vector<SolverTrace> run_experiment(const ProblemInstance& instance, const std::vector<SolverConfig>& configs,
                                        const std::optional<Vector>& x_star, unsigned threads)
{
    for (const auto& c : configs) c.validate();
    std::vector<SolverTrace> out(configs.size());
    if (configs.empty()) return out;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));

    RunOptions options;
    options.x_star = x_star;
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                out[i] = run_solver(instance, configs[i], options);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace spstorm
