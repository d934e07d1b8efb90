#include "driver.hpp"

#include <spstorm/objective.hpp>
#include <spstorm/regularizer.hpp>

namespace spstorm {

namespace {

// Storm estimator with optional stabilization. PStorm is the same recursion
// with its decaying schedules and x_{k+1} = y_k.
class StormRule final : public detail::StepRule {
public:
    StormRule(const ProblemInstance& inst, const SolverConfig& cfg, bool pstorm)
        : StepRule(inst), cfg_(cfg), pstorm_(pstorm), lipschitz_(inst.lipschitz()), x_prev_(x), u_(x)
    {
    }

    void compute(std::size_t k) override
    {
        const auto batch = draw_batch(cfg_.seed, k, instance.num_samples(), cfg_.batch_size);
        if (k == 1) {
            minibatch_gradient(instance, batch.indices, x, v);
            d = v;
        } else {
            minibatch_gradient_pair(instance, batch.indices, x, x_prev_, v, u_);
            const double beta = beta_at(k);
            d = v + (1.0 - beta) * (d - u_);
        }
        alpha = alpha_at(k);
        z = x - alpha * d;
        prox(instance.partition, z, alpha, y);
    }

    void advance(std::size_t k) override
    {
        x_prev_ = x;
        if (pstorm_ || !cfg_.stabilize) {
            x = y;
        } else {
            const double step = zeta_value(cfg_, k) * beta_at(k);
            x += step * (y - x);
        }
    }

private:
    double alpha_at(std::size_t k) const
    {
        if (pstorm_) return pstorm_alpha(k, lipschitz_);
        if (cfg_.alpha_schedule) return cfg_.alpha_schedule(k);
        return cfg_.step_scale / lipschitz_;
    }

    double beta_at(std::size_t k) const
    {
        if (pstorm_) return pstorm_beta(k, lipschitz_);
        return beta_value(cfg_, k);
    }

    const SolverConfig& cfg_;
    bool pstorm_;
    double lipschitz_;
    Vector x_prev_, u_;
};

}  // namespace

SolverTrace spstorm_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options)
{
    StormRule rule(instance, config, false);
    return detail::drive(instance, config, rule, options);
}

SolverTrace pstorm_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options)
{
    StormRule rule(instance, config, true);
    return detail::drive(instance, config, rule, options);
}

}  // namespace spstorm
