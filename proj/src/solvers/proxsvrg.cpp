#include "driver.hpp"

#include <spstorm/objective.hpp>
#include <spstorm/regularizer.hpp>
#include <spstorm/rng.hpp>

namespace spstorm {

namespace {

// Outer loop s starts at iterations k = s*P*b + 1. Each outer loop takes one
// exact gradient at the snapshot; inner steps use
// d = grad_B(x) - grad_B(snapshot) + mu on a shared batch B.
class SvrgRule final : public detail::StepRule {
public:
    SvrgRule(const ProblemInstance& inst, const SolverConfig& cfg)
        : StepRule(inst),
          cfg_(cfg),
          inner_(cfg.svrg_inner_epochs * iterations_per_epoch(inst.num_samples(), cfg.batch_size)),
          alpha_(cfg.step_scale / inst.lipschitz()),
          snapshot_(x),
          mu_(x),
          u_(x),
          pending_(x)
    {
    }

    void compute(std::size_t k) override
    {
        const std::size_t pos = (k - 1) % inner_;
        if (pos == 0) begin_outer(k);
        if (cfg_.snapshot == SnapshotRule::RANDOM && pos == pick_) pending_ = x;
        const auto batch = draw_batch(cfg_.seed, k, instance.num_samples(), cfg_.batch_size);
        minibatch_gradient_pair(instance, batch.indices, x, snapshot_, v, u_);
        d = v - u_ + mu_;
        alpha = alpha_;
        z = x - alpha * d;
        prox(instance.partition, z, alpha, y);
    }

    void advance(std::size_t) override { x = y; }

private:
    void begin_outer(std::size_t k)
    {
        const std::size_t s = (k - 1) / inner_;
        if (s > 0) snapshot_ = (cfg_.snapshot == SnapshotRule::LAST || pick_ == inner_) ? x : pending_;
        full_gradient(instance, snapshot_, mu_);
        ++full_gradient_evals;
        if (cfg_.snapshot == SnapshotRule::RANDOM) {
            // Inner iterate (after 1..inner steps) that becomes the next snapshot.
            CounterRng rng(cfg_.seed, kSnapshotStream, s);
            pick_ = 1 + static_cast<std::size_t>(rng.below(inner_));
        }
    }

    const SolverConfig& cfg_;
    std::size_t inner_;
    double alpha_;
    Vector snapshot_, mu_, u_, pending_;
    std::size_t pick_ = 0;
};

}  // namespace

SolverTrace proxsvrg_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options)
{
    SvrgRule rule(instance, config);
    return detail::drive(instance, config, rule, options);
}

}  // namespace spstorm
