#include "driver.hpp"

#include <spstorm/objective.hpp>
#include <spstorm/regularizer.hpp>

#include <cmath>

namespace spstorm {

namespace {

// Regularized dual averaging with h = ||x||^2 / 2:
//   x_{k+1} = argmin <d_k, x> + r(x) + (gamma / sqrt(k)) h(x) = prox_{a r}(-a d_k), a = sqrt(k) / gamma.
class RdaRule final : public detail::StepRule {
public:
    RdaRule(const ProblemInstance& inst, const SolverConfig& cfg) : StepRule(inst), cfg_(cfg) {}

    void compute(std::size_t k) override
    {
        const auto batch = draw_batch(cfg_.seed, k, instance.num_samples(), cfg_.batch_size);
        minibatch_gradient(instance, batch.indices, x, v);
        const double kk = static_cast<double>(k);
        d = ((kk - 1.0) / kk) * d + v / kk;
        alpha = std::sqrt(kk) / cfg_.rda_gamma;
        z = -alpha * d;
        prox(instance.partition, z, alpha, y);
    }

    void advance(std::size_t) override { x = y; }

private:
    const SolverConfig& cfg_;
};

}  // namespace

SolverTrace rda_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options)
{
    RdaRule rule(instance, config);
    return detail::drive(instance, config, rule, options);
}

}  // namespace spstorm
