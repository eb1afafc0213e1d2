#include "gbpkit/wco.hpp"
#include "gbpkit/repro.hpp"

#include "support.hpp"
#include "wco_support.hpp"

#include <doctest.h>

using namespace gbpkit;
using namespace gbpkit::testing;

namespace {

WcoSpec homogeneous_spec(std::vector<Index> phi, std::vector<Operator> weights, const NormSpec& norm)
{
    WcoSpec s;
    const Index d = weights.front().rows();
    s.fiber_dims.assign(phi.size(), d);
    s.phi = std::move(phi);
    s.weights = std::move(weights);
    s.fiber_norms.assign(s.phi.size(), norm);
    return s;
}

Operator diag2(Scalar a, Scalar b)
{
    Operator m = Operator::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

// ||T^2 - (lambda + 1) T + lambda I||_max computed here from scratch
double residual_oracle(const Operator& t, Scalar lambda)
{
    const Operator r = t * t - (lambda + 1.0) * t + lambda * Operator::Identity(t.rows(), t.cols());
    return r.cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("assemble")
{
    SUBCASE("swap with identity weights")
    {
        const auto s = homogeneous_spec({1, 0}, {identity(2), identity(2)}, NormSpec::sup());
        Operator expected = Operator::Zero(4, 4);
        expected.block(0, 2, 2, 2) = identity(2);
        expected.block(2, 0, 2, 2) = identity(2);
        CHECK(assemble(s) == expected);
    }
    SUBCASE("identity phi is block diagonal")
    {
        const Operator u = diag2(1, -1);
        const auto s = homogeneous_spec({0, 1}, {u, u}, NormSpec::lp(2.0));
        Operator expected = Operator::Zero(4, 4);
        expected.block(0, 0, 2, 2) = u;
        expected.block(2, 2, 2, 2) = u;
        CHECK(assemble(s) == expected);
    }
    SUBCASE("one point")
    {
        const Operator t = pencil(repro::example_three_average(), UnimodularScalar::from_angle(1, 3));
        CHECK(assemble(homogeneous_spec({0}, {t}, NormSpec::sup())) == t);
    }
    SUBCASE("heterogeneous fibers")
    {
        WcoSpec s;
        s.fiber_dims = {1, 2};
        s.phi = {0, 1};
        s.weights = {Operator::Identity(1, 1), diag2(1, -1)};
        s.fiber_norms = {NormSpec::sup(), NormSpec::sup()};
        const Operator t = assemble(s);
        CHECK(t.rows() == 3);
        CHECK(t(2, 2) == Scalar(-1.0));
        Vector f(3);
        f << 0.5, Scalar(0, 2), -1.0;
        CHECK(ambient_norm(s, f) == doctest::Approx(2.0));
    }
    SUBCASE("malformed specs")
    {
        CHECK_THROWS_AS(assemble(homogeneous_spec({0, 0}, {identity(2), identity(2)}, NormSpec::sup())),
                        DimensionError);
        CHECK_THROWS_AS(assemble(homogeneous_spec({1, 2}, {identity(2), identity(2)}, NormSpec::sup())),
                        DimensionError);
        auto s = homogeneous_spec({0, 1}, {identity(2), identity(3)}, NormSpec::sup());
        CHECK_THROWS_AS(assemble(s), DimensionError);
        CHECK_THROWS_AS(assemble(WcoSpec{}), DimensionError);
    }
}

TEST_CASE("quadratic residual of composition operators")
{
    const auto swap = homogeneous_spec({1, 0}, {identity(1), identity(1)}, NormSpec::sup());
    const Operator t = assemble(swap);
    // T^2 = I, so the residual is (1 + lambda)(I - T): |1 + i| off the diagonal
    CHECK(quadratic_residual(t, Scalar(0, 1)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(quadratic_residual(t, Scalar(-1.0)) <= 1e-15);
    const Operator p = pencil(repro::example_three_average(), root(1, 3));
    CHECK(quadratic_residual(p, root(1, 3)) <= 1e-12);
}

TEST_CASE("classify on the basic cases")
{
    const auto minus_one = UnimodularScalar::from_angle(1, 2);
    SUBCASE("swap with lambda = -1 averages the two points")
    {
        const auto s = homogeneous_spec({1, 0}, {identity(2), identity(2)}, NormSpec::sup());
        const auto c = classify(s, minus_one);
        REQUIRE(c.kind == WcoCase::ReflectionAverage);
        REQUIRE(c.reflection);
        CHECK(c.involution_pairs == std::vector<std::pair<Index, Index>>{{0, 1}});
        CHECK(c.fixed_points.empty());
        Vector f(4);
        f << 1, 2, 3, 4;
        Vector expected(4);
        expected << 2, 3, 2, 3;
        CHECK(approx_equal(Vector(c.projection * f), expected, Tolerance(1e-15)));
    }
    SUBCASE("identity phi with diag(1,-1) fibers")
    {
        const auto s = homogeneous_spec({0, 1}, {diag2(1, -1), diag2(1, -1)}, NormSpec::lp(2.0));
        const auto c = classify(s, minus_one);
        REQUIRE(c.kind == WcoCase::PointwiseGbp);
        REQUIRE(c.pointwise_projections.size() == 2);
        CHECK(approx_equal(c.pointwise_projections[0], diag2(1, 0), Tolerance(1e-15)));
        CHECK_FALSE(c.reflection);
    }
    SUBCASE("swap with lambda = i")
    {
        const auto s = homogeneous_spec({1, 0}, {identity(2), identity(2)}, NormSpec::sup());
        const auto c = classify(s, UnimodularScalar::from_angle(1, 4));
        REQUIRE(c.kind == WcoCase::NotAGbp);
        REQUIRE(c.failure);
        CHECK(c.failure->reason == WcoFailure::QuadraticRelation);
        CHECK(c.failure->residual == doctest::Approx(std::sqrt(2.0)));
    }
    SUBCASE("preconditions")
    {
        const auto s = homogeneous_spec({1, 0}, {identity(2), identity(2)}, NormSpec::sup());
        CHECK_THROWS_AS(classify(s, UnimodularScalar::from_angle(0, 1)), PreconditionError);
        const auto bad = homogeneous_spec({0, 1}, {identity(2), Operator(2.0 * identity(2))}, NormSpec::sup());
        CHECK_THROWS_AS(classify(bad, minus_one), PreconditionError);
        WcoSpec mixed = homogeneous_spec({0, 1}, {identity(2), identity(2)}, NormSpec::sup());
        mixed.fiber_norms[1] = NormSpec::lp(2.0);
        CHECK_THROWS_AS(classify(mixed, minus_one), PreconditionError);
    }
}

TEST_CASE("classify_direct_sum")
{
    const auto minus_one = UnimodularScalar::from_angle(1, 2);
    SUBCASE("C^1 and C^2 fibers with identity phi")
    {
        WcoSpec s;
        s.fiber_dims = {1, 2};
        s.phi = {0, 1};
        s.weights = {Operator::Identity(1, 1), diag2(1, -1)};
        s.fiber_norms = {NormSpec::sup(), NormSpec::sup()};
        const auto c = classify_direct_sum(s, minus_one);
        REQUIRE(c.kind == WcoCase::PointwiseGbp);
        CHECK(c.pointwise_projections[0](0, 0) == Scalar(1.0));
        CHECK(approx_equal(c.pointwise_projections[1], diag2(1, 0), Tolerance(1e-15)));
        CHECK_THROWS_AS(classify(s, minus_one), PreconditionError);
    }
    SUBCASE("two C^2 blocks swapped")
    {
        const auto s = homogeneous_spec({1, 0}, {identity(2), identity(2)}, NormSpec::sup());
        CHECK(classify_direct_sum(s, minus_one).kind == WcoCase::ReflectionAverage);
    }
    SUBCASE("swapping C^1 with C^2 is a dimension error")
    {
        WcoSpec s;
        s.fiber_dims = {1, 2};
        s.phi = {1, 0};
        s.weights = {Operator::Identity(1, 2), Operator::Identity(2, 1)};
        s.fiber_norms = {NormSpec::sup(), NormSpec::sup()};
        CHECK_THROWS_AS(classify_direct_sum(s, minus_one), DimensionError);
    }
}

TEST_CASE("ambient isometry verdict")
{
    Operator flip = Operator::Zero(2, 2);
    flip(0, 1) = 1.0;
    flip(1, 0) = Scalar(0, 1);
    const auto s = homogeneous_spec({1, 0}, {flip, identity(2)}, NormSpec::sup());
    const Operator t = assemble(s);
    const auto v = ambient_isometry_verdict(s, t);
    CHECK(v.certified());
    CHECK(v.method == VerdictMethod::FiberwiseComposition);
    const Operator scaled = 1.5 * t;
    const auto w = ambient_isometry_verdict(s, scaled);
    REQUIRE(w.falsified());
    CHECK(std::abs(ambient_norm(s, Vector(scaled * *w.witness)) - ambient_norm(s, *w.witness)) > 0.1);
}

TEST_CASE("dichotomy on random instances")
{
    Rng rng(67);
    int seen[3] = {0, 0, 0};
    for (int trial = 0; trial < 120; ++trial) {
        const auto inst = random_wco_instance(trial, rng);
        CAPTURE(inst.label);
        const auto c = classify(inst.spec, inst.lambda);
        CHECK(c.kind == inst.expected);
        ++seen[int(c.kind)];

        const Operator t = assemble(inst.spec);
        const Scalar lam = inst.lambda.value();
        const double res = residual_oracle(t, lam);
        CHECK((c.kind == WcoCase::NotAGbp) == (res > 1e-10));

        switch (c.kind) {
        case WcoCase::ReflectionAverage: {
            REQUIRE(c.reflection);
            CHECK(lam == Scalar(-1.0));
            CHECK(max_abs(Operator(*c.reflection * *c.reflection - identity(t.rows()))) <= 1e-10);
            CHECK(ambient_isometry_verdict(inst.spec, *c.reflection).certified());
            CHECK(idempotency_defect(c.projection) <= 1e-10);
            CHECK(max_abs(Operator(pencil(c.projection, lam) - t)) <= 1e-10);
            for (std::size_t w = 0; w < inst.spec.points(); ++w) {
                const auto v = std::size_t(inst.spec.phi[w]);
                CHECK(std::size_t(inst.spec.phi[v]) == w);
                CHECK(max_abs(Operator(inst.spec.weights[w] * inst.spec.weights[v]
                                       - identity(inst.spec.fiber_dims[w])))
                      <= 1e-10);
            }
            CHECK(c.pointwise_projections.empty());
            CHECK_FALSE(c.failure);
            break;
        }
        case WcoCase::PointwiseGbp: {
            CHECK(inst.spec.phi_is_identity());
            CHECK(idempotency_defect(c.projection) <= 1e-10);
            CHECK(max_abs(Operator(pencil(c.projection, lam) - t)) <= 1e-10);
            REQUIRE(c.pointwise_projections.size() == inst.spec.points());
            for (std::size_t w = 0; w < inst.spec.points(); ++w) {
                const Operator& pw = c.pointwise_projections[w];
                const Index d = pw.rows();
                CHECK(max_abs(Operator(pw + lam * (identity(d) - pw) - inst.spec.weights[w])) <= 1e-10);
                CHECK(isometry_verdict(inst.spec.weights[w], inst.spec.fiber_norms[w]).certified());
            }
            CHECK_FALSE(c.reflection);
            CHECK_FALSE(c.failure);
            break;
        }
        case WcoCase::NotAGbp: {
            REQUIRE(c.failure);
            CHECK(c.failure->reason == WcoFailure::QuadraticRelation);
            CHECK(std::abs(c.failure->residual - res) <= 1e-12);
            break;
        }
        }
    }
    CHECK(seen[0] > 10);
    CHECK(seen[1] > 10);
    CHECK(seen[2] > 10);
}

TEST_CASE("a moved point forces lambda = -1")
{
    Rng rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        auto inst = random_wco_instance(1, rng);
        REQUIRE_FALSE(inst.spec.phi_is_identity());
        const Operator t = assemble(inst.spec);
        // the only unimodular lambda != 1 with a vanishing residual is -1
        for (long long q = 2; q <= 12; ++q) {
            for (long long p = 1; p < q; ++p) {
                const Scalar lam = root(p, q);
                const bool pencil_like = residual_oracle(t, lam) <= 1e-10;
                CHECK(pencil_like == (2 * p == q));
            }
        }
        CHECK(classify(inst.spec, UnimodularScalar::from_angle(1, 2)).kind == WcoCase::ReflectionAverage);
    }
}
