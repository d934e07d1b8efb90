#include <doctest.h>

#include "checks.hpp"
#include "oracles.hpp"

#include <spstorm/objective.hpp>
#include <spstorm/regularizer.hpp>
#include <spstorm/solvers.hpp>

#include <cmath>
#include <random>

using namespace spstorm;

namespace {

Vector vec(std::initializer_list<double> v)
{
    Vector x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v) x[i++] = e;
    return x;
}

}  // namespace

TEST_CASE("reg_value sums weighted block norms")
{
    const GroupPartition p(4, {{0, 1}, {2, 3}}, {2.0, 0.5});
    CHECK(reg_value(p, vec({3, 4, 0, 0})) == doctest::Approx(10.0));
    CHECK(reg_value(p, vec({0, 0, 0, -2})) == doctest::Approx(1.0));
    CHECK(reg_value(p, Vector::Zero(4)) == 0.0);
    CHECK_THROWS_AS(reg_value(p, Vector::Zero(3)), DimensionError);
}

TEST_CASE("prox shrinks blocks and zeroes them at the threshold")
{
    const GroupPartition p(4, {{0, 1}, {2, 3}}, {1.0, 1.0});
    const Vector y = prox(p, vec({3, 4, 0.3, 0.4}), 1.0);
    CHECK(y[0] == doctest::Approx(2.4));
    CHECK(y[1] == doctest::Approx(3.2));
    CHECK(y[2] == 0.0);
    CHECK(y[3] == 0.0);

    // ||z_g|| == alpha * lambda exactly: zero block, no division
    const GroupPartition single(1, {{0}}, {0.5});
    CHECK(prox(single, vec({1.0}), 2.0)[0] == 0.0);
    CHECK(prox(single, vec({-1.5}), 2.0)[0] == doctest::Approx(-0.5));
    CHECK_THROWS_AS(prox(p, Vector::Zero(4), 0.0), ConfigError);
    CHECK_THROWS_AS(prox(p, Vector::Zero(4), -1.0), ConfigError);
}

TEST_CASE("prox output blocks are exactly zero or strictly nonzero")
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    const GroupPartition p(9, {{0, 4, 8}, {1, 2}, {3}, {5, 6, 7}}, {0.3, 1.0, 0.7, 2.0});
    for (int t = 0; t < 200; ++t) {
        Vector z(9);
        for (auto& v : z) v = normal(rng);
        const Vector y = prox(p, z, 0.8);
        for (std::size_t g = 0; g < p.num_groups(); ++g) {
            const double zn = p.block_norm(z, g), yn = p.block_norm(y, g);
            if (zn <= 0.8 * p.weight(g)) CHECK(yn == 0.0);
            else CHECK(yn == doctest::Approx(zn - 0.8 * p.weight(g)));
        }
    }
}

TEST_CASE("prox agrees with the smoothed Newton minimizer")
{
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal;
    const GroupPartition p(6, {{0, 1, 2}, {3}, {4, 5}}, {0.5, 1.0, 0.2});
    for (int t = 0; t < 20; ++t) {
        Vector z(6);
        for (auto& v : z) v = 2.0 * normal(rng);
        // 1/2 ||x - z||^2 + alpha r(x)  ==  <-z, x> + 1/2 ||x||^2 + r_alpha(x)
        const double alpha = 0.7;
        std::vector<double> w;
        for (double x : p.weights()) w.push_back(alpha * x);
        const Vector want = oracle::minimize_group_quadratic(-z, 1.0, p.with_weights(w));
        CHECK((prox(p, z, alpha) - want).cwiseAbs().maxCoeff() <= 1e-6);  // smoothing limits the oracle accuracy
    }
}

TEST_CASE("prox oracle check on random partitions")
{
    const auto r = oracle::check_prox(300, 42);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("dual_norm and subgradient_bound")
{
    const GroupPartition p(3, {{0, 1}, {2}}, {2.0, 0.5});
    CHECK(dual_norm(p, vec({3, 4, 1})) == doctest::Approx(2.5));
    CHECK(dual_norm(p, vec({0, 0, 1})) == doctest::Approx(2.0));
    CHECK(subgradient_bound(p) == doctest::Approx(std::sqrt(4.25)));
    // every subgradient u of r has ||u|| <= sqrt(sum lambda^2): check the extreme one
    const Vector u = vec({2.0 * 0.6, 2.0 * 0.8, 0.5});
    CHECK(u.norm() <= subgradient_bound(p) + 1e-15);
}

TEST_CASE("dual_point equals the gradient at the optimum")
{
    SyntheticSpec spec;
    spec.num_samples = 150;
    spec.num_features = 12;
    spec.num_groups = 4;
    spec.active_groups = 2;
    spec.seed = 9;
    const auto inst = oracle::synthetic_instance(spec, 0.2);
    const auto ref = reference_solve(inst, 1e-10);
    REQUIRE(ref.converged);
    const Vector g = full_gradient(inst, ref.x);
    for (double alpha : {0.5, 4.0 / (1 + 8e-5), 10.0}) {
        const Vector w = dual_point(inst.partition, ref.x, g, alpha);
        CHECK((w - g).norm() <= 1e-8);
        const Vector z = ref.x - alpha * g;
        CHECK((alpha * w + z - ref.x).norm() <= 1e-8);
    }
}

TEST_CASE("dual_point on a hand example")
{
    const GroupPartition p(3, {{0}, {1, 2}}, {1.0, 1.0});
    const Vector x = vec({0.5, 0, 0});
    const Vector g = vec({-1.0, 0.3, 0.4});
    // z = x - g = (1.5, -0.3, -0.4); block 0: min(1, 1/1.5) = 2/3; block 1: min(1, 1/0.5) = 1
    const Vector w = dual_point(p, x, g, 1.0);
    CHECK(w[0] == doctest::Approx(-1.0));
    CHECK(w[1] == doctest::Approx(0.3));
    CHECK(w[2] == doctest::Approx(0.4));
    CHECK_THROWS_AS(dual_point(p, x, g, 0.0), ConfigError);
}
