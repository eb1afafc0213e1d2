// Weighted composition operators on a finite discrete model of C_0(Omega, X).
//
// A function f on Omega = {0, ..., m-1} with values in fibers X_w is stored as
// the concatenation of its fiber values. The operator
//     (T f)(w) = u_w f(phi(w))
// is the block matrix with u_w at block (w, phi(w)). The ambient norm is the
// maximum of the fiber norms, the finite stand-in for the sup norm.

#pragma once

#include "gbpkit/core.hpp"
#include "gbpkit/norms.hpp"
#include "gbpkit/projection.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gbpkit {

struct WcoSpec {
    std::vector<Index> fiber_dims;
    std::vector<Index> phi;          // permutation of the points
    std::vector<Operator> weights;   // u_w : X_phi(w) -> X_w
    std::vector<NormSpec> fiber_norms;

    std::size_t points() const { return fiber_dims.size(); }
    Index total_dim() const;
    std::vector<Index> offsets() const;

    bool phi_is_identity() const;
    bool homogeneous() const;  // one fiber dimension and one fiber norm

    /// Throws DimensionError on a malformed spec (phi not a bijection, weight
    /// shapes inconsistent with phi, norm dimensions wrong).
    void validate() const;
};

Operator assemble(const WcoSpec& spec);

double ambient_norm(const WcoSpec& spec, const Vector& f);

/// Isometry test for `t` under the ambient norm of `spec`. When `t` is the
/// assembled operator of `spec` and every u_w is a certified isometry
/// X_phi(w) -> X_w, the answer is Certified (FiberwiseComposition); otherwise
/// the ambient norm is sampled.
IsometryVerdict ambient_isometry_verdict(const WcoSpec& spec, const Operator& t, const SamplingBudget& budget = {},
                                         Tolerance tol = {});

enum class WcoCase { ReflectionAverage, PointwiseGbp, NotAGbp };
const char* to_string(WcoCase c);

enum class WcoFailure {
    QuadraticRelation,       // T^2 - (lambda + 1) T + lambda I != 0
    LambdaNotMinusOne,       // phi moves a point but lambda != -1
    PhiNotInvolution,        // phi^2(w) != w
    WeightsNotInverse,       // u_w u_phi(w) != I
    PointwiseNotIdempotent,  // (u_w - lambda I)/(1 - lambda) not a projection
};
const char* to_string(WcoFailure f);

struct WcoWitness {
    WcoFailure reason;
    std::optional<Index> point;
    double residual = 0.0;
};

struct GbpClassification {
    WcoCase kind = WcoCase::NotAGbp;
    UnimodularScalar lambda = UnimodularScalar::from_angle(1, 2);
    Operator projection;  // whole P, empty for NotAGbp

    // ReflectionAverage
    std::optional<Operator> reflection;
    std::vector<std::pair<Index, Index>> involution_pairs;
    std::vector<Index> fixed_points;

    // PointwiseGbp
    std::vector<Operator> pointwise_projections;

    // NotAGbp
    std::optional<WcoWitness> failure;
};

/// Dichotomy for a homogeneous spec (every fiber the same space).
GbpClassification classify(const WcoSpec& spec, const UnimodularScalar& lambda, const SamplingBudget& budget = {},
                           Tolerance tol = {});

/// Same dichotomy on a finite direct sum with fibers of differing dimension.
GbpClassification classify_direct_sum(const WcoSpec& spec, const UnimodularScalar& lambda,
                                      const SamplingBudget& budget = {}, Tolerance tol = {});

} // namespace gbpkit
