#pragma once

#include <spstorm/solvers.hpp>

namespace spstorm::detail {

// One method's per-iteration rule. compute(k) forms d_k, z_k = prox input,
// alpha_k and y_k from the current x = x_k without touching x; advance(k)
// then moves x to x_{k+1}. The split lets the driver measure quantities at
// x_k after d_k is known.
class StepRule {
public:
    explicit StepRule(const ProblemInstance& instance)
        : instance(instance),
          x(Vector::Zero(instance.num_features())),
          d(Vector::Zero(instance.num_features())),
          v(Vector::Zero(instance.num_features())),
          y(Vector::Zero(instance.num_features())),
          z(Vector::Zero(instance.num_features()))
    {
    }
    virtual ~StepRule() = default;

    /// Called once before iteration 1. Returns false if the run is infeasible;
    /// `note` then says why.
    virtual bool start() { return true; }
    virtual void compute(std::size_t k) = 0;
    virtual void advance(std::size_t k) = 0;

    const ProblemInstance& instance;
    Vector x, d, v, y, z;
    double alpha = 0.0;
    std::size_t full_gradient_evals = 0;
    std::string note;
};

SolverTrace drive(const ProblemInstance& instance, const SolverConfig& config, StepRule& rule,
                  const RunOptions& options);

}  // namespace spstorm::detail
