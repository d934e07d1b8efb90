#include "driver.hpp"

#include <spstorm/analysis.hpp>
#include <spstorm/objective.hpp>
#include <spstorm/regularizer.hpp>

#include <cmath>

namespace spstorm {

namespace {

double objective(const ProblemInstance& inst, const Vector& x)
{
    return smooth_value(inst, x) + reg_value(inst.partition, x);
}

// Accelerated proximal gradient with function-value restart. A candidate
// that raises F resets the momentum and is retried as a plain proximal
// gradient step from the last accepted point; a plain step is always
// accepted so rounding noise near the optimum cannot stall the method.
class Fista {
public:
    Fista(const ProblemInstance& inst, double step)
        : inst_(inst), step_(step), x(Vector::Zero(inst.num_features())), w(x), grad(x), cand(x),
          fx(objective(inst, x))
    {
    }

    // Returns false when the step was rejected by the restart test.
    bool step()
    {
        full_gradient(inst_, w, grad);
        prox(inst_.partition, w - step_ * grad, step_, cand);
        const double fc = objective(inst_, cand);
        if (fc > fx && !plain_) {
            t_ = 1.0;
            w = x;
            plain_ = true;
            return false;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_ * t_));
        w = cand + ((t_ - 1.0) / t_next) * (cand - x);
        x = cand;
        fx = fc;
        t_ = t_next;
        plain_ = false;
        return true;
    }

private:
    const ProblemInstance& inst_;
    double step_;
    double t_ = 1.0;
    bool plain_ = true;

public:
    Vector x, w, grad, cand;
    double fx;
};

// Traced form: the gradient is taken at the extrapolated point, which the
// driver sees as x, so the recorded estimator error is zero.
class ReferenceRule final : public detail::StepRule {
public:
    ReferenceRule(const ProblemInstance& inst) : StepRule(inst), fista_(inst, 1.0 / inst.lipschitz()) {}

    void compute(std::size_t) override
    {
        x = fista_.w;
        fista_.step();
        d = fista_.grad;
        v = d;
        alpha = 1.0 / instance.lipschitz();
        z = x - alpha * d;
        y = fista_.cand;
        ++full_gradient_evals;
    }

    void advance(std::size_t) override { x = fista_.w; }

private:
    Fista fista_;
};

}  // namespace

ReferenceResult reference_solve(const ProblemInstance& instance, double tol, double alpha, std::size_t max_iterations)
{
    if (!(tol > 0.0)) throw ConfigError("reference_solve: tol must be positive");
    const double step = 1.0 / instance.lipschitz();
    if (!(alpha > 0.0)) alpha = step;
    Fista fista(instance, step);
    ReferenceResult out;
    out.chi = gradient_mapping_norm(instance, fista.x, alpha);
    while (out.chi > tol && out.iterations < max_iterations) {
        ++out.iterations;
        if (fista.step()) out.chi = gradient_mapping_norm(instance, fista.x, alpha);
    }
    out.converged = out.chi <= tol;
    out.x = fista.x;
    out.objective = fista.fx;
    return out;
}

SolverTrace reference_run(const ProblemInstance& instance, const SolverConfig& config, const RunOptions& options)
{
    ReferenceRule rule(instance);
    return detail::drive(instance, config, rule, options);
}

}  // namespace spstorm
