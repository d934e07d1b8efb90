#include <doctest.h>

#include <spstorm/core.hpp>

#include <array>

using namespace spstorm;

namespace {

GroupPartition two_pairs()
{
    return GroupPartition(4, {{0, 1}, {2, 3}}, {});
}

Vector vec(std::initializer_list<double> v)
{
    Vector x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v) x[i++] = e;
    return x;
}

}  // namespace

TEST_CASE("support_of enumerates nonzero blocks")
{
    CHECK(support_of(Vector::Zero(3), GroupPartition(3, {{0, 1}, {2}}, {})).empty());
    CHECK(support_of(vec({1, 0, 0, 2}), two_pairs()) == SupportSet({0, 1}));
    CHECK(support_of(vec({0, 0, 5}), GroupPartition(3, {{0, 1}, {2}}, {})) == SupportSet({1}));
}

TEST_CASE("support_of exact test sees denormal entries")
{
    const Vector x = vec({0, 1e-310, 0, 0});
    CHECK(support_of(x, two_pairs()) == SupportSet({0}));
    CHECK(support_of(x, two_pairs(), 1e-300).empty());
}

TEST_CASE("support_of is scale invariant and depends only on the zero pattern")
{
    const GroupPartition p(6, {{0, 3}, {1, 4}, {2, 5}}, {});
    const Vector x = vec({0, 2, 0, 0, -1, 0});
    const Vector y = vec({0, -7, 0, 0, 0, 0});
    CHECK(support_of(x, p) == support_of(3.5 * x, p));
    CHECK(support_of(x, p) == support_of(y, p));
}

TEST_CASE("support_of rejects bad input")
{
    CHECK_THROWS_AS(support_of(Vector::Zero(3), two_pairs()), DimensionError);
    CHECK_THROWS_AS(support_of(Vector::Zero(4), two_pairs(), -1.0), ConfigError);
}

TEST_CASE("SupportSet set operations")
{
    const SupportSet a({3, 1, 1, 2});
    CHECK(a.size() == 3);
    CHECK(a.contains(2));
    CHECK_FALSE(a.contains(0));
    CHECK(SupportSet({1, 3}).is_subset_of(a));
    CHECK_FALSE(a.is_subset_of(SupportSet({1, 3})));
    CHECK(a.symmetric_difference_size(SupportSet({2, 5})) == 3);
    CHECK(SupportSet().symmetric_difference_size(a) == 3);
    CHECK(a.hash() == SupportSet({1, 2, 3}).hash());
    CHECK(a.hash() != SupportSet({1, 2}).hash());
    CHECK(SupportSet().hash() != SupportSet({0}).hash());
}

TEST_CASE("GroupPartition validates coverage, disjointness and weights")
{
    CHECK_THROWS_AS(GroupPartition(3, {{0, 1}}, {}), ConfigError);
    CHECK_THROWS_AS(GroupPartition(3, {{0, 1}, {1, 2}}, {}), ConfigError);
    CHECK_THROWS_AS(GroupPartition(3, {{0, 1}, {2}}, {1.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(GroupPartition(3, {{0, 1}, {2}}, {1.0}), ConfigError);
    CHECK_THROWS_AS(GroupPartition(3, {{0, 1}, {}, {2}}, {}), ConfigError);

    const GroupPartition p(5, {{4, 0}, {1, 2, 3}}, {2.0, 3.0});
    CHECK_FALSE(p.is_contiguous());
    CHECK(p.num_groups() == 2);
    CHECK(p.size(1) == 3);
    CHECK(p.weight(0) == 2.0);
    CHECK(p.block_norm(vec({3, 0, 0, 0, 4}), 0) == doctest::Approx(5.0));

    const std::array<std::size_t, 3> sizes{2, 2, 1};
    const GroupPartition q = GroupPartition::from_sizes(sizes);
    CHECK(q.is_contiguous());
    CHECK(q.begin(2) == 4);
    CHECK(q.weights()[1] == 1.0);
    CHECK(q.with_weights({1, 2, 3}).weight(2) == 3.0);
}

TEST_CASE("SparseDataset enforces its invariants")
{
    SparseDatasetBuilder b(4);
    const std::array<std::uint32_t, 2> idx{0, 3};
    const std::array<double, 2> val{1.0, -2.0};
    b.add_row(idx, val, 1.0);
    b.add_row({}, {}, -1.0);
    const SparseDataset d = std::move(b).build();
    CHECK(d.num_samples() == 2);
    CHECK(d.nnz() == 2);
    CHECK(d.row(0).squared_norm() == doctest::Approx(5.0));
    CHECK(d.row(1).nnz() == 0);
    CHECK(d.max_row_squared_norm() == doctest::Approx(5.0));

    CHECK_THROWS_AS(SparseDataset(2, {0, 1}, {2}, {1.0}, {1.0}), DimensionError);
    CHECK_THROWS_AS(SparseDataset(4, {0, 2}, {2, 1}, {1.0, 1.0}, {1.0}), DataError);
    CHECK_THROWS_AS(SparseDataset(4, {0, 1}, {1}, {1.0}, {0.5}), DataError);
    CHECK_THROWS_AS(SparseDataset(4, {0, 1}, {1}, {1.0}, {1.0, 1.0}), DimensionError);
}

TEST_CASE("ProblemInstance checks consistency")
{
    SparseDatasetBuilder b(3);
    const std::array<std::uint32_t, 1> idx{1};
    const std::array<double, 1> val{1.0};
    b.add_row(idx, val, 1.0);
    const SparseDataset d = std::move(b).build();
    CHECK_THROWS_AS(ProblemInstance(d, two_pairs(), 1e-5, 1.0), DimensionError);
    CHECK_THROWS_AS(ProblemInstance(d, GroupPartition(3, {{0}, {1, 2}}, {}), -1.0, 1.0), ConfigError);
    const ProblemInstance inst(d, GroupPartition(3, {{0}, {1, 2}}, {}), 1e-5, 1.0);
    CHECK(inst.lipschitz() == doctest::Approx(0.25 + 2e-5));
}

TEST_CASE("TheoryConstants ranges and k_underline")
{
    TheoryConstants t;
    CHECK_NOTHROW(t.validate());
    t.c = 2.0;
    CHECK(t.k_underline() == 3);
    t.c = 1.2;
    CHECK(t.k_underline() == 2);
    t.c = 1.0;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.c = 2.0;
    t.eta0 = 0.7;  // above 6 / pi^2
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.eta0 = 0.1;
    t.theta = 1.5;
    CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("fnv1a matches the published test vectors")
{
    CHECK(fnv1a(std::string()) == 0xcbf29ce484222325ull);
    CHECK(fnv1a(std::string("a")) == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a(std::string("foobar")) == 0x85944171f73967e8ull);
}
