#include "gbpkit/wco.hpp"

#include <random>
#include <string>

namespace gbpkit {

namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

std::string point_name(std::size_t w) { return "point " + std::to_string(w); }

// The fiber isometry certificate stands in for "u takes values in the
// isometry group of X". Source and target fibers must carry the same norm.
void require_fiber_isometries(const WcoSpec& spec, const SamplingBudget& budget, Tolerance tol)
{
    for (std::size_t w = 0; w < spec.points(); ++w) {
        const auto src = at(spec.phi[w]);
        if (!(spec.fiber_norms[w] == spec.fiber_norms[src])) {
            throw PreconditionError(point_name(w) + ": weight maps between fibers with different norms");
        }
        if (!isometry_verdict(spec.weights[w], spec.fiber_norms[w], budget, tol).certified()) {
            throw PreconditionError(point_name(w) + ": weight is not a certified fiber isometry");
        }
    }
}

GbpClassification not_a_gbp(const UnimodularScalar& lambda, WcoFailure reason, std::optional<Index> point,
                             double residual)
{
    GbpClassification out;
    out.kind = WcoCase::NotAGbp;
    out.lambda = lambda;
    out.failure = WcoWitness{reason, point, residual};
    return out;
}

GbpClassification classify_impl(const WcoSpec& spec, const UnimodularScalar& lambda, const SamplingBudget& budget,
                                Tolerance tol)
{
    spec.validate();
    const Scalar lam = lambda.value();
    if (std::abs(lam - Scalar(1.0)) <= tol.eps()) {
        throw PreconditionError("classify: lambda must differ from 1");
    }
    if (std::abs(std::abs(lam) - 1.0) > tol.eps()) {
        throw PreconditionError("classify: lambda must have modulus 1");
    }
    require_fiber_isometries(spec, budget, tol);

    const Operator t = assemble(spec);
    const double residual = quadratic_residual(t, lam, tol);
    if (residual > tol.eps()) {
        return not_a_gbp(lambda, WcoFailure::QuadraticRelation, std::nullopt, residual);
    }

    const auto offsets = spec.offsets();
    const std::size_t m = spec.points();

    if (!spec.phi_is_identity()) {
        // Some point moves, which forces lambda = -1, phi^2 = id and
        // u_w u_phi(w) = I at every point, fixed points included.
        const double miss = std::abs(lam + 1.0);
        if (miss > tol.eps()) {
            return not_a_gbp(lambda, WcoFailure::LambdaNotMinusOne, std::nullopt, miss);
        }
        GbpClassification out;
        for (std::size_t w = 0; w < m; ++w) {
            const auto image = at(spec.phi[w]);
            if (at(spec.phi[image]) != w) {
                return not_a_gbp(lambda, WcoFailure::PhiNotInvolution, static_cast<Index>(w), 1.0);
            }
            const Operator product = spec.weights[w] * spec.weights[image];
            const double dev = max_abs(product - identity(product.rows()));
            if (dev > tol.eps()) {
                return not_a_gbp(lambda, WcoFailure::WeightsNotInverse, static_cast<Index>(w), dev);
            }
            if (image == w) {
                out.fixed_points.push_back(static_cast<Index>(w));
            } else if (w < image) {
                out.involution_pairs.emplace_back(static_cast<Index>(w), static_cast<Index>(image));
            }
        }
        out.kind = WcoCase::ReflectionAverage;
        out.lambda = lambda;
        out.reflection = t;
        out.projection = (identity(t.rows()) + t) / 2.0;
        return out;
    }

    GbpClassification out;
    out.projection = Operator::Zero(t.rows(), t.cols());
    for (std::size_t w = 0; w < m; ++w) {
        const Operator& u = spec.weights[w];
        const Operator pw = (u - lam * identity(u.rows())) / (1.0 - lam);
        const double dev = max_abs(pw * pw - pw);
        if (dev > tol.eps()) {
            return not_a_gbp(lambda, WcoFailure::PointwiseNotIdempotent, static_cast<Index>(w), dev);
        }
        out.projection.block(offsets[w], offsets[w], u.rows(), u.cols()) = pw;
        out.pointwise_projections.push_back(pw);
    }
    out.kind = WcoCase::PointwiseGbp;
    out.lambda = lambda;
    return out;
}

} // namespace

Index WcoSpec::total_dim() const
{
    Index n = 0;
    for (Index d : fiber_dims) {
        n += d;
    }
    return n;
}

std::vector<Index> WcoSpec::offsets() const
{
    std::vector<Index> out;
    out.reserve(fiber_dims.size());
    Index acc = 0;
    for (Index d : fiber_dims) {
        out.push_back(acc);
        acc += d;
    }
    return out;
}

bool WcoSpec::phi_is_identity() const
{
    for (std::size_t w = 0; w < phi.size(); ++w) {
        if (at(phi[w]) != w) {
            return false;
        }
    }
    return true;
}

bool WcoSpec::homogeneous() const
{
    for (std::size_t w = 1; w < points(); ++w) {
        if (fiber_dims[w] != fiber_dims[0] || !(fiber_norms[w] == fiber_norms[0])) {
            return false;
        }
    }
    return true;
}

void WcoSpec::validate() const
{
    const std::size_t m = points();
    if (m == 0) {
        throw DimensionError("wco: at least one point is required");
    }
    if (phi.size() != m || weights.size() != m || fiber_norms.size() != m) {
        throw DimensionError("wco: phi, weights and fiber norms must have one entry per point");
    }
    std::vector<bool> hit(m, false);
    for (std::size_t w = 0; w < m; ++w) {
        if (fiber_dims[w] < 1) {
            throw DimensionError(point_name(w) + ": fiber dimension must be >= 1");
        }
        if (phi[w] < 0 || at(phi[w]) >= m || hit[at(phi[w])]) {
            throw DimensionError("wco: phi is not a bijection of the points");
        }
        hit[at(phi[w])] = true;
    }
    for (std::size_t w = 0; w < m; ++w) {
        const Index rows = fiber_dims[w];
        const Index cols = fiber_dims[at(phi[w])];
        if (weights[w].rows() != rows || weights[w].cols() != cols) {
            throw DimensionError(point_name(w) + ": weight must be " + std::to_string(rows) + "x"
                                 + std::to_string(cols) + " to map fiber " + std::to_string(phi[w]) + " into fiber "
                                 + std::to_string(w));
        }
        if (const auto d = fiber_norms[w].required_dim(); d && *d != rows) {
            throw DimensionError(point_name(w) + ": fiber norm acts on a different dimension");
        }
    }
}

Operator assemble(const WcoSpec& spec)
{
    spec.validate();
    const auto offsets = spec.offsets();
    const Index n = spec.total_dim();
    Operator t = Operator::Zero(n, n);
    for (std::size_t w = 0; w < spec.points(); ++w) {
        const Operator& u = spec.weights[w];
        t.block(offsets[w], offsets[at(spec.phi[w])], u.rows(), u.cols()) = u;
    }
    return t;
}

double ambient_norm(const WcoSpec& spec, const Vector& f)
{
    if (f.size() != spec.total_dim()) {
        throw DimensionError("ambient_norm: vector length does not match the fibers");
    }
    const auto offsets = spec.offsets();
    double best = 0.0;
    for (std::size_t w = 0; w < spec.points(); ++w) {
        best = std::max(best, eval_norm(spec.fiber_norms[w], Vector(f.segment(offsets[w], spec.fiber_dims[w]))));
    }
    return best;
}

IsometryVerdict ambient_isometry_verdict(const WcoSpec& spec, const Operator& t, const SamplingBudget& budget,
                                         Tolerance tol)
{
    spec.validate();
    const Index n = spec.total_dim();
    if (t.rows() != n || t.cols() != n) {
        throw DimensionError("ambient_isometry_verdict: operator does not act on the fiber sum");
    }
    IsometryVerdict v;
    if (approx_equal(t, assemble(spec), tol)) {
        bool all = true;
        for (std::size_t w = 0; w < spec.points() && all; ++w) {
            all = spec.fiber_norms[w] == spec.fiber_norms[at(spec.phi[w])]
                  && isometry_verdict(spec.weights[w], spec.fiber_norms[w], budget, tol).certified();
        }
        if (all) {
            v.status = VerdictStatus::Certified;
            v.method = VerdictMethod::FiberwiseComposition;
            return v;
        }
    }

    v.method = VerdictMethod::Sampling;
    std::mt19937_64 rng(budget.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t count = std::max<std::size_t>(budget.samples, static_cast<std::size_t>(n));
    for (std::size_t s = 0; s < count; ++s) {
        Vector x;
        if (s < static_cast<std::size_t>(n)) {
            x = basis_vector(n, static_cast<Index>(s));
        } else {
            x.resize(n);
            for (Index i = 0; i < n; ++i) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                x(i) = Scalar(re, im);
            }
        }
        x /= ambient_norm(spec, x);
        ++v.samples_used;
        if (std::abs(ambient_norm(spec, Vector(t * x)) - 1.0) > tol.eps()) {
            v.status = VerdictStatus::Falsified;
            v.witness = x;
            return v;
        }
    }
    v.status = VerdictStatus::Unknown;
    return v;
}

const char* to_string(WcoCase c)
{
    switch (c) {
    case WcoCase::ReflectionAverage: return "ReflectionAverage";
    case WcoCase::PointwiseGbp: return "PointwiseGbp";
    case WcoCase::NotAGbp: return "NotAGbp";
    }
    return "?";
}

const char* to_string(WcoFailure f)
{
    switch (f) {
    case WcoFailure::QuadraticRelation: return "QuadraticRelation";
    case WcoFailure::LambdaNotMinusOne: return "LambdaNotMinusOne";
    case WcoFailure::PhiNotInvolution: return "PhiNotInvolution";
    case WcoFailure::WeightsNotInverse: return "WeightsNotInverse";
    case WcoFailure::PointwiseNotIdempotent: return "PointwiseNotIdempotent";
    }
    return "?";
}

GbpClassification classify(const WcoSpec& spec, const UnimodularScalar& lambda, const SamplingBudget& budget,
                           Tolerance tol)
{
    spec.validate();
    if (!spec.homogeneous()) {
        throw PreconditionError("classify: fibers differ; use classify_direct_sum");
    }
    return classify_impl(spec, lambda, budget, tol);
}

GbpClassification classify_direct_sum(const WcoSpec& spec, const UnimodularScalar& lambda,
                                      const SamplingBudget& budget, Tolerance tol)
{
    if (spec.fiber_dims.size() == spec.phi.size()) {
        for (std::size_t w = 0; w < spec.points(); ++w) {
            const Index image = spec.phi[w];
            if (image >= 0 && at(image) < spec.points() && spec.fiber_dims[at(image)] != spec.fiber_dims[w]) {
                throw DimensionError("classify_direct_sum: phi sends " + point_name(w) + " to a fiber of different dimension");
            }
        }
    }
    return classify_impl(spec, lambda, budget, tol);
}

} // namespace gbpkit
