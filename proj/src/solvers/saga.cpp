#include "driver.hpp"

#include <spstorm/objective.hpp>
#include <spstorm/regularizer.hpp>

namespace spstorm {

namespace {

// For logistic loss grad l_j(x) = a_j(x) d_j + 2 c2 x, so the gradient table
// reduces to one scalar per sample plus the running mean of a_j d_j. Every
// occurrence in a batch is measured against the table as it stood before the
// step; the table and mean are updated once per distinct sample afterwards.
class SagaRule final : public detail::StepRule {
public:
    SagaRule(const ProblemInstance& inst, const SolverConfig& cfg)
        : StepRule(inst), cfg_(cfg), alpha_(cfg.step_scale / inst.lipschitz())
    {
    }

    bool start() override
    {
        const std::uint64_t n_samples = instance.num_samples();
        const std::uint64_t bytes = n_samples * (sizeof(double) + sizeof(std::size_t)) +
                                    instance.num_features() * sizeof(double);
        if (bytes > cfg_.memory_budget_bytes) {
            note = "gradient table needs " + std::to_string(bytes) + " bytes, budget is " +
                   std::to_string(cfg_.memory_budget_bytes);
            return false;
        }
        table_.resize(n_samples);
        stamp_.assign(n_samples, 0);
        fresh_.resize(cfg_.batch_size);
        mean_ = Vector::Zero(instance.num_features());
        const auto& data = instance.dataset;
        for (std::size_t j = 0; j < n_samples; ++j) {
            table_[j] = per_sample_logistic_scalar(instance, j, x);
            const auto row = data.row(j);
            for (std::size_t p = 0; p < row.nnz(); ++p) mean_[row.indices[p]] += table_[j] * row.values[p];
        }
        if (n_samples > 0) mean_ /= static_cast<double>(n_samples);
        ++full_gradient_evals;
        return true;
    }

    void compute(std::size_t k) override
    {
        const auto& data = instance.dataset;
        batch_ = draw_batch(cfg_.seed, k, instance.num_samples(), cfg_.batch_size);
        v.setZero();
        for (std::size_t i = 0; i < batch_.size(); ++i) {
            const std::size_t j = batch_.indices[i];
            fresh_[i] = per_sample_logistic_scalar(instance, j, x);
            const double delta = fresh_[i] - table_[j];
            const auto row = data.row(j);
            for (std::size_t p = 0; p < row.nnz(); ++p) v[row.indices[p]] += delta * row.values[p];
        }
        v /= static_cast<double>(batch_.size());
        d = v + mean_ + (2.0 * instance.l2_coefficient) * x;
        alpha = alpha_;
        z = x - alpha * d;
        prox(instance.partition, z, alpha, y);
    }

    void advance(std::size_t k) override
    {
        const auto& data = instance.dataset;
        const double inv_n = 1.0 / static_cast<double>(instance.num_samples());
        for (std::size_t i = 0; i < batch_.size(); ++i) {
            const std::size_t j = batch_.indices[i];
            if (stamp_[j] == k) continue;
            stamp_[j] = k;
            const double delta = (fresh_[i] - table_[j]) * inv_n;
            const auto row = data.row(j);
            for (std::size_t p = 0; p < row.nnz(); ++p) mean_[row.indices[p]] += delta * row.values[p];
            table_[j] = fresh_[i];
        }
        x = y;
    }

private:
    const SolverConfig& cfg_;
    double alpha_;
    std::vector<double> table_;
    std::vector<std::size_t> stamp_;
    std::vector<double> fresh_;
    Vector mean_;
    BatchSample batch_;
};

}  // namespace

SolverTrace saga_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options)
{
    SagaRule rule(instance, config);
    return detail::drive(instance, config, rule, options);
}

}  // namespace spstorm
