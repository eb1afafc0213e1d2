#include "gbpkit/norms.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace gbpkit {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

bool same_operator(const Operator& a, const Operator& b)
{
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

void check_dim(const NormSpec& spec, Index dim, const char* what)
{
    if (const auto d = spec.required_dim(); d && *d != dim) {
        throw DimensionError(std::string(what) + ": norm acts on dimension " + std::to_string(*d)
                             + ", input has dimension " + std::to_string(dim));
    }
}

} // namespace

NormSpec NormSpec::lp(double p)
{
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InvalidNorm("lp norm requires finite p >= 1");
    }
    return NormSpec(Lp{p});
}

NormSpec NormSpec::sup() { return NormSpec(Sup{}); }

NormSpec NormSpec::orbit_max(NormSpec base, Operator generator, unsigned order, Tolerance tol)
{
    require_square(generator, "orbit_max generator");
    if (order < 1) {
        throw InvalidNorm("orbit_max: order must be >= 1");
    }
    if (base.depth() + 1 > kMaxDepth) {
        throw InvalidNorm("orbit_max: nesting depth exceeds " + std::to_string(kMaxDepth));
    }
    if (const auto d = base.required_dim(); d && *d != generator.rows()) {
        throw InvalidNorm("orbit_max: base norm and generator dimensions differ");
    }
    const auto cert = detect_order(generator, order, tol);
    if (!cert.order || *cert.order != order) {
        throw InvalidNorm("orbit_max: generator does not have order " + std::to_string(order));
    }
    return NormSpec(OrbitMax{std::make_shared<const NormSpec>(std::move(base)), std::move(generator), order});
}

NormSpec NormSpec::sum_renorm(NormSpec base, Operator reflector, Tolerance tol)
{
    require_square(reflector, "sum_renorm reflector");
    if (base.depth() + 1 > kMaxDepth) {
        throw InvalidNorm("sum_renorm: nesting depth exceeds " + std::to_string(kMaxDepth));
    }
    if (const auto d = base.required_dim(); d && *d != reflector.rows()) {
        throw InvalidNorm("sum_renorm: base norm and reflector dimensions differ");
    }
    if (!is_involution(reflector, tol)) {
        throw InvalidNorm("sum_renorm: reflector is not an involution");
    }
    return NormSpec(SumRenorm{std::make_shared<const NormSpec>(std::move(base)), std::move(reflector)});
}

int NormSpec::depth() const
{
    return std::visit(overloaded{[](const Lp&) { return 0; }, [](const Sup&) { return 0; },
                                 [](const OrbitMax& o) { return 1 + o.base->depth(); },
                                 [](const SumRenorm& s) { return 1 + s.base->depth(); }},
                      kind_);
}

std::optional<Index> NormSpec::required_dim() const
{
    return std::visit(overloaded{[](const Lp&) -> std::optional<Index> { return std::nullopt; },
                                 [](const Sup&) -> std::optional<Index> { return std::nullopt; },
                                 [](const OrbitMax& o) -> std::optional<Index> { return o.generator.rows(); },
                                 [](const SumRenorm& s) -> std::optional<Index> { return s.reflector.rows(); }},
                      kind_);
}

std::string NormSpec::describe() const
{
    return std::visit(overloaded{[](const Lp& l) {
                                     std::ostringstream os;
                                     os << "lp(p=" << l.p << ")";
                                     return os.str();
                                 },
                                 [](const Sup&) { return std::string("sup"); },
                                 [](const OrbitMax& o) {
                                     return "orbit_max(base=" + o.base->describe()
                                            + ", order=" + std::to_string(o.order) + ")";
                                 },
                                 [](const SumRenorm& s) { return "sum_renorm(base=" + s.base->describe() + ")"; }},
                      kind_);
}

bool NormSpec::is_lp(double p) const
{
    const auto* l = std::get_if<Lp>(&kind_);
    return l != nullptr && l->p == p;
}

bool operator==(const NormSpec& a, const NormSpec& b)
{
    if (a.kind_.index() != b.kind_.index()) {
        return false;
    }
    return std::visit(
        overloaded{[&](const NormSpec::Lp& l) { return l.p == std::get<NormSpec::Lp>(b.kind_).p; },
                   [](const NormSpec::Sup&) { return true; },
                   [&](const NormSpec::OrbitMax& o) {
                       const auto& other = std::get<NormSpec::OrbitMax>(b.kind_);
                       return o.order == other.order && same_operator(o.generator, other.generator)
                              && *o.base == *other.base;
                   },
                   [&](const NormSpec::SumRenorm& s) {
                       const auto& other = std::get<NormSpec::SumRenorm>(b.kind_);
                       return same_operator(s.reflector, other.reflector) && *s.base == *other.base;
                   }},
        a.kind_);
}

double eval_norm(const NormSpec& spec, const Vector& x)
{
    check_dim(spec, x.size(), "eval_norm");
    return std::visit(overloaded{[&](const NormSpec::Lp& l) {
                                     if (l.p == 1.0) {
                                         return x.cwiseAbs().sum();
                                     }
                                     if (l.p == 2.0) {
                                         return x.norm();
                                     }
                                     return std::pow(x.cwiseAbs().array().pow(l.p).sum(), 1.0 / l.p);
                                 },
                                 [&](const NormSpec::Sup&) { return max_abs(x); },
                                 [&](const NormSpec::OrbitMax& o) {
                                     double best = eval_norm(*o.base, x);
                                     Vector y = x;
                                     for (unsigned j = 1; j < o.order; ++j) {
                                         y = o.generator * y;
                                         best = std::max(best, eval_norm(*o.base, y));
                                     }
                                     return best;
                                 },
                                 [&](const NormSpec::SumRenorm& s) {
                                     return eval_norm(*s.base, x) + eval_norm(*s.base, Vector(s.reflector * x));
                                 }},
                      spec.kind());
}

const char* to_string(VerdictStatus s)
{
    switch (s) {
    case VerdictStatus::Certified: return "Certified";
    case VerdictStatus::Falsified: return "Falsified";
    case VerdictStatus::Unknown: return "Unknown";
    }
    return "?";
}

const char* to_string(VerdictMethod m)
{
    switch (m) {
    case VerdictMethod::Unitary: return "Unitary";
    case VerdictMethod::PermDiag: return "PermDiag";
    case VerdictMethod::OrbitStructural: return "OrbitStructural";
    case VerdictMethod::FiberwiseComposition: return "FiberwiseComposition";
    case VerdictMethod::Sampling: return "Sampling";
    }
    return "?";
}

std::optional<PermDiagIsometry> decompose_perm_diag(const Operator& t, Tolerance tol)
{
    require_square(t, "decompose_perm_diag");
    const Index n = t.rows();
    PermDiagIsometry out;
    out.tau.assign(static_cast<std::size_t>(n), -1);
    out.phases.assign(static_cast<std::size_t>(n), Scalar(0.0));
    std::vector<int> column_hits(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const double m = std::abs(t(i, j));
            if (m <= tol.eps()) {
                continue;
            }
            if (std::abs(m - 1.0) > tol.eps() || out.tau[static_cast<std::size_t>(i)] >= 0) {
                return std::nullopt;
            }
            out.tau[static_cast<std::size_t>(i)] = j;
            out.phases[static_cast<std::size_t>(i)] = t(i, j);
            ++column_hits[static_cast<std::size_t>(j)];
        }
        if (out.tau[static_cast<std::size_t>(i)] < 0) {
            return std::nullopt;
        }
    }
    for (int hits : column_hits) {
        if (hits != 1) {
            return std::nullopt;
        }
    }
    return out;
}

Operator to_operator(const PermDiagIsometry& s)
{
    const auto n = static_cast<Index>(s.tau.size());
    Operator t = Operator::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        t(i, s.tau[static_cast<std::size_t>(i)]) = s.phases[static_cast<std::size_t>(i)];
    }
    return t;
}

std::vector<Vector> sample_unit_sphere(const NormSpec& spec, Index dim, std::uint64_t seed, std::size_t count)
{
    if (dim < 1) {
        throw DimensionError("sample_unit_sphere: dim must be >= 1");
    }
    check_dim(spec, dim, "sample_unit_sphere");
    std::vector<Vector> out;
    out.reserve(count);
    for (Index i = 0; i < dim && out.size() < count; ++i) {
        for (double sign : {1.0, -1.0}) {
            if (out.size() == count) {
                break;
            }
            Vector e = sign * basis_vector(dim, i);
            out.push_back(e / eval_norm(spec, e));
        }
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (out.size() < count) {
        Vector v(dim);
        for (Index i = 0; i < dim; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            v(i) = Scalar(re, im);
        }
        const double n = eval_norm(spec, v);
        if (n > 0.0) {
            out.push_back(v / n);
        }
    }
    return out;
}

double isometry_defect(const Operator& t, const NormSpec& spec, const Vector& x)
{
    return std::abs(eval_norm(spec, mat_apply(t, x)) - eval_norm(spec, x));
}

namespace {

// Unit vectors along e_i + c e_j for c in {1, -1, i, -i}. Together with the
// basis vectors these detect every non-unitary operator in l2 (polarization)
// and the usual sup-norm counterexamples.
std::vector<Vector> pair_probes(const NormSpec& spec, Index dim)
{
    std::vector<Vector> out;
    const Scalar coeffs[] = {Scalar(1, 0), Scalar(-1, 0), Scalar(0, 1), Scalar(0, -1)};
    for (Index i = 0; i < dim; ++i) {
        for (Index j = i + 1; j < dim; ++j) {
            for (Scalar c : coeffs) {
                Vector v = basis_vector(dim, i);
                v(j) = c;
                out.push_back(v / eval_norm(spec, v));
            }
        }
    }
    return out;
}

// Walks the probes in the order of sample_unit_sphere (with the pair probes
// inserted after the basis vectors) and stops at the first violation. The
// Gaussian draws are generated on demand.
IsometryVerdict search_witness(const Operator& t, const NormSpec& spec, const SamplingBudget& budget, Tolerance tol,
                               VerdictMethod method, bool with_pairs)
{
    IsometryVerdict v;
    v.method = method;
    const Index dim = t.rows();
    auto violates = [&](const Vector& x) {
        ++v.samples_used;
        if (isometry_defect(t, spec, x) > tol.eps()) {
            v.status = VerdictStatus::Falsified;
            v.witness = x;
            return true;
        }
        return false;
    };

    for (const auto& x : sample_unit_sphere(spec, dim, budget.seed, static_cast<std::size_t>(2 * dim))) {
        if (violates(x)) {
            return v;
        }
    }
    if (with_pairs) {
        for (const auto& x : pair_probes(spec, dim)) {
            if (violates(x)) {
                return v;
            }
        }
    }
    std::mt19937_64 rng(budget.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t drawn = static_cast<std::size_t>(2 * dim); drawn < budget.samples;) {
        Vector x(dim);
        for (Index i = 0; i < dim; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            x(i) = Scalar(re, im);
        }
        const double n = eval_norm(spec, x);
        if (n <= 0.0) {
            continue;
        }
        ++drawn;
        if (violates(Vector(x / n))) {
            return v;
        }
    }
    v.status = VerdictStatus::Unknown;
    return v;
}

IsometryVerdict certified(VerdictMethod method)
{
    IsometryVerdict v;
    v.status = VerdictStatus::Certified;
    v.method = method;
    return v;
}

} // namespace

IsometryVerdict isometry_verdict(const Operator& t, const NormSpec& spec, const SamplingBudget& budget, Tolerance tol)
{
    require_square(t, "isometry_verdict");
    check_dim(spec, t.rows(), "isometry_verdict");

    if (spec.is_lp(2.0)) {
        if (approx_equal(t.adjoint() * t, identity(t.rows()), tol)) {
            return certified(VerdictMethod::Unitary);
        }
        return search_witness(t, spec, budget, tol, VerdictMethod::Unitary, true);
    }

    if (spec.is_sup() || std::holds_alternative<NormSpec::Lp>(spec.kind())) {
        if (decompose_perm_diag(t, tol)) {
            return certified(VerdictMethod::PermDiag);
        }
        return search_witness(t, spec, budget, tol, VerdictMethod::PermDiag, true);
    }

    // T in the cyclic group generated by the stored operator: the wrapped
    // norm aggregates over that group's orbit and is invariant under it.
    if (const auto* o = std::get_if<NormSpec::OrbitMax>(&spec.kind())) {
        Operator power = identity(t.rows());
        for (unsigned j = 0; j < o->order; ++j) {
            if (approx_equal(t, power, tol)) {
                return certified(VerdictMethod::OrbitStructural);
            }
            power = power * o->generator;
        }
    }
    if (const auto* s = std::get_if<NormSpec::SumRenorm>(&spec.kind())) {
        if (approx_equal(t, identity(t.rows()), tol) || approx_equal(t, s->reflector, tol)) {
            return certified(VerdictMethod::OrbitStructural);
        }
    }

    return search_witness(t, spec, budget, tol, VerdictMethod::Sampling, false);
}

} // namespace gbpkit
