// Generalized bi-circular projections: the pencil P + lambda (I - P), the
// reflection it determines, the range/kernel norm criterion and the group of
// admissible lambdas.

#pragma once

#include "gbpkit/core.hpp"
#include "gbpkit/norms.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gbpkit {

/// Rational angle p/q in lowest terms with 0 <= p < q.
struct RationalAngle {
    long long p = 0;
    long long q = 1;
};

/// A point on the unit circle. When built from a rational angle the value is
/// exp(2 pi i p/q) and the exact order q is retained.
class UnimodularScalar {
public:
    static UnimodularScalar from_angle(long long p, long long q);
    static UnimodularScalar from_value(Scalar value, Tolerance tol = {});

    Scalar value() const { return value_; }
    const std::optional<RationalAngle>& angle() const { return angle_; }

    /// Multiplicative order when the angle is rational.
    std::optional<long long> order() const;

    /// Argument in [0, 2 pi).
    double arg() const;

    std::string describe() const;

private:
    UnimodularScalar(Scalar value, std::optional<RationalAngle> angle) : value_(value), angle_(angle) {}
    Scalar value_;
    std::optional<RationalAngle> angle_;
};

/// P + lambda (I - P).
Operator pencil(const Operator& p, Scalar lambda, Tolerance tol = {});
inline Operator pencil(const Operator& p, const UnimodularScalar& lambda, Tolerance tol = {})
{
    return pencil(p, lambda.value(), tol);
}

/// ||T^2 - (lambda + 1) T + lambda I||_max. Vanishes exactly when
/// (T - lambda I) / (1 - lambda) is idempotent. Throws for lambda = 1.
double quadratic_residual(const Operator& t, Scalar lambda, Tolerance tol = {});

/// (T - lambda I) / (1 - lambda), the projection whose pencil is T.
Operator projection_from_pencil(const Operator& t, Scalar lambda, Tolerance tol = {});

/// Reflection R in the algebra generated by T with P = (I + R)/2, for a
/// rational lambda of order q >= 2. Even q: R = T^(q/2). Odd q = 2k+1:
/// R = ((1 - 2k) I + 2T + ... + 2T^(2k)) / (2k + 1).
Operator build_reflection(const Operator& t, const UnimodularScalar& lambda, Tolerance tol = {});

/// (I + T + ... + T^(n-1)) / n, requiring T^n = I.
Operator n_circular(const Operator& t, unsigned n, Tolerance tol = {});

struct PairwiseVerdict {
    VerdictStatus status = VerdictStatus::Unknown;
    std::optional<std::pair<Vector, Vector>> witness;  // (x in Range P, y in Ker P)
    std::size_t pairs_tested = 0;
};

/// Searches x in Range(P), y in Ker(P) with ||x - y|| != ||x - lambda y||.
/// Basis pairs are tried first, then random combinations. Certified only when
/// Range(P) or Ker(P) is trivial; otherwise Falsified or Unknown.
PairwiseVerdict pairwise_condition(const Operator& p, const UnimodularScalar& lambda, const NormSpec& spec,
                                   const SamplingBudget& budget = {}, Tolerance tol = {});

struct GbpReport {
    UnimodularScalar lambda;
    IsometryVerdict verdict;
    PairwiseVerdict pairwise;
    std::optional<Operator> reflection;
    std::optional<IsometryVerdict> reflection_isometric;
};

GbpReport analyze_gbp(const Operator& p, const UnimodularScalar& lambda, const NormSpec& spec,
                      const SamplingBudget& budget = {}, Tolerance tol = {});

enum class LambdaGroupClass { FiniteCyclic, LikelyFullCircle, Inconclusive };
const char* to_string(LambdaGroupClass c);

struct LambdaGroupReport {
    std::vector<UnimodularScalar> members;  // roots of unity that passed, sorted by angle
    LambdaGroupClass classification = LambdaGroupClass::Inconclusive;
    std::optional<unsigned> order;          // set for FiniteCyclic
    std::string candidate_policy;
    std::size_t roots_tested = 0;
    std::size_t roots_unknown = 0;
    std::size_t random_tested = 0;
    std::size_t random_certified = 0;
    std::size_t random_falsified = 0;
    std::size_t random_unknown = 0;
    bool closed = true;  // member set closed under conjugation and products within the candidates
};

struct LambdaSearch {
    unsigned max_order = 24;
    std::size_t random_lambdas = 1000;
    std::uint64_t seed = 0;
    SamplingBudget budget{};
};

/// Finite proxy for Lambda_P = { lambda : P + lambda (I - P) is an isometry }.
/// Every root of unity of order <= max_order is tested, then random points
/// of the circle.
LambdaGroupReport lambda_group(const Operator& p, const NormSpec& spec, const LambdaSearch& search = {},
                               Tolerance tol = {});

/// For an even-order group: -1 belongs to it and P - (I - P) is a certified
/// isometric involution.
bool even_order_reflection_check(const LambdaGroupReport& report, const Operator& p, const NormSpec& spec,
                                 const SamplingBudget& budget = {}, Tolerance tol = {});

} // namespace gbpkit
