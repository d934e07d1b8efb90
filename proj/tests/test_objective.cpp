#include <doctest.h>

#include "checks.hpp"
#include "oracles.hpp"

#include <spstorm/objective.hpp>

#include <cmath>
#include <random>

using namespace spstorm;

namespace {

ProblemInstance small_instance(std::uint64_t seed = 1)
{
    SyntheticSpec spec;
    spec.num_samples = 60;
    spec.num_features = 8;
    spec.num_groups = 4;
    spec.seed = seed;
    return oracle::synthetic_instance(spec, 0.2);
}

Vector random_vector(Eigen::Index n, std::uint64_t seed, double scale = 1.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    Vector x(n);
    for (auto& v : x) v = normal(rng);
    return x;
}

}  // namespace

TEST_CASE("sigmoid and logistic loss stay finite at extreme margins")
{
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(800.0) == 1.0);
    CHECK(sigmoid(-800.0) == 0.0);
    CHECK(sigmoid(3.0) + sigmoid(-3.0) == doctest::Approx(1.0));
    CHECK(logistic_loss(0.0) == doctest::Approx(std::log(2.0)));
    CHECK(logistic_loss(-800.0) == doctest::Approx(800.0));
    CHECK(logistic_loss(800.0) >= 0.0);
    CHECK(std::isfinite(logistic_loss(-1e300)));
}

TEST_CASE("smooth_value and full_gradient agree with the dense oracle")
{
    const auto inst = small_instance();
    const auto D = oracle::dense_rows(inst.dataset);
    const auto y = oracle::labels_of(inst.dataset);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Vector x = random_vector(8, s, 2.0);
        CHECK(smooth_value(inst, x) == doctest::Approx(oracle::dense_value(D, y, inst.l2_coefficient, x)).epsilon(1e-13));
        CHECK((full_gradient(inst, x) - oracle::dense_gradient(D, y, inst.l2_coefficient, x)).norm() <= 1e-14);
    }
}

TEST_CASE("full_gradient matches central differences")
{
    const auto inst = small_instance(3);
    const Vector x = random_vector(8, 9);
    const Vector fd =
        oracle::finite_difference_gradient([&](const Vector& p) { return smooth_value(inst, p); }, x, 1e-6);
    CHECK((full_gradient(inst, x) - fd).norm() / fd.norm() <= 1e-7);
}

TEST_CASE("draw_batch depends only on seed, iteration and sizes")
{
    const auto a = draw_batch(7, 12, 1000, 64);
    const auto b = draw_batch(7, 12, 1000, 64);
    CHECK(a.indices == b.indices);
    CHECK(draw_batch(7, 13, 1000, 64).indices != a.indices);
    CHECK(draw_batch(8, 12, 1000, 64).indices != a.indices);
    for (auto j : a.indices) CHECK(j < 1000);
    CHECK_THROWS_AS(draw_batch(1, 1, 0, 4), DataError);
    CHECK_THROWS_AS(draw_batch(1, 1, 4, 0), ConfigError);
}

TEST_CASE("draw_batch is close to uniform")
{
    std::vector<int> counts(10, 0);
    for (std::uint64_t k = 1; k <= 2000; ++k)
        for (auto j : draw_batch(3, k, 10, 5).indices) ++counts[j];
    for (int c : counts) CHECK(std::abs(c - 1000) < 150);  // about 5 standard deviations
}

TEST_CASE("minibatch gradients average per-sample gradients with repetition")
{
    const auto inst = small_instance();
    const auto D = oracle::dense_rows(inst.dataset);
    const auto y = oracle::labels_of(inst.dataset);
    const Vector x = random_vector(8, 4);
    const std::vector<std::size_t> batch{3, 3, 17, 59};
    Vector g;
    minibatch_gradient(inst, batch, x, g);
    CHECK((g - oracle::dense_batch_gradient(D, y, inst.l2_coefficient, x, batch)).norm() <= 1e-14);
    CHECK_THROWS_AS(minibatch_gradient(inst, std::vector<std::size_t>{60}, x, g), DimensionError);
    CHECK_THROWS_AS(minibatch_gradient(inst, std::vector<std::size_t>{}, x, g), ConfigError);
}

TEST_CASE("minibatch_gradient_pair evaluates both points on the same samples")
{
    const auto inst = small_instance();
    const Vector x = random_vector(8, 1), z = random_vector(8, 2);
    const auto batch = draw_batch(5, 1, inst.num_samples(), 16);
    const auto [v, u] = minibatch_gradient_pair(inst, batch, x, z);
    CHECK((v - minibatch_gradient(inst, batch, x)).norm() == 0.0);
    CHECK((u - minibatch_gradient(inst, batch, z)).norm() == 0.0);
    const auto [v2, u2] = minibatch_gradient_pair(inst, batch, x, x);
    CHECK(v2 == u2);
}

TEST_CASE("per_sample_logistic_scalar")
{
    const auto inst = small_instance();
    const Vector x = Vector::Zero(8);
    // at x = 0 the scalar is -y / 2
    CHECK(per_sample_logistic_scalar(inst, 0, x) == -0.5 * inst.dataset.label(0));
    CHECK_THROWS_AS(per_sample_logistic_scalar(inst, 60, x), DimensionError);
    CHECK_THROWS_AS(per_sample_logistic_scalar(inst, 0, Vector::Zero(3)), DimensionError);
}

TEST_CASE("gradient Lipschitz ratio stays below 1/4 + 2 c2 on normalized data")
{
    const auto inst = small_instance(11);
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Vector a = random_vector(8, 100 + s, 3.0), b = random_vector(8, 200 + s, 3.0);
        worst = std::max(worst, (full_gradient(inst, a) - full_gradient(inst, b)).norm() / (a - b).norm());
    }
    CHECK(worst <= inst.lipschitz() + 1e-12);
}
