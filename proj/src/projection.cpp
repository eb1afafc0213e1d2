#include "gbpkit/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace gbpkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Scalar root_value(long long p, long long q)
{
    // Exact values on the axes keep products like lambda^(q/2) = -1 clean.
    if (p == 0) {
        return {1.0, 0.0};
    }
    if (2 * p == q) {
        return {-1.0, 0.0};
    }
    if (4 * p == q) {
        return {0.0, 1.0};
    }
    if (4 * p == 3 * q) {
        return {0.0, -1.0};
    }
    return std::polar(1.0, kTwoPi * static_cast<double>(p) / static_cast<double>(q));
}

void require_idempotent(const Operator& p, Tolerance tol, const char* what)
{
    require_square(p, what);
    if (!is_idempotent(p, tol)) {
        throw PreconditionError(std::string(what) + ": operator is not idempotent");
    }
}

void require_not_one(Scalar lambda, Tolerance tol, const char* what)
{
    if (std::abs(lambda - Scalar(1.0)) <= tol.eps()) {
        throw PreconditionError(std::string(what) + ": lambda must differ from 1");
    }
}

} // namespace

// ---------------------------------------------------------------------------
// UnimodularScalar

UnimodularScalar UnimodularScalar::from_angle(long long p, long long q)
{
    if (q < 1) {
        throw std::invalid_argument("rational angle needs a positive denominator");
    }
    p %= q;
    if (p < 0) {
        p += q;
    }
    const long long g = std::gcd(p, q);
    p /= g;
    q /= g;
    return UnimodularScalar(root_value(p, q), RationalAngle{p, q});
}

UnimodularScalar UnimodularScalar::from_value(Scalar value, Tolerance tol)
{
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) || std::abs(std::abs(value) - 1.0) > tol.eps()) {
        throw std::invalid_argument("lambda must have modulus 1");
    }
    return UnimodularScalar(value, std::nullopt);
}

std::optional<long long> UnimodularScalar::order() const
{
    if (!angle_) {
        return std::nullopt;
    }
    return angle_->q;
}

double UnimodularScalar::arg() const
{
    if (angle_) {
        return kTwoPi * static_cast<double>(angle_->p) / static_cast<double>(angle_->q);
    }
    double a = std::arg(value_);
    if (a < 0.0) {
        a += kTwoPi;
    }
    return a;
}

std::string UnimodularScalar::describe() const
{
    std::ostringstream os;
    os.precision(17);
    if (angle_) {
        os << "exp(2pi i " << angle_->p << "/" << angle_->q << ")";
    } else {
        os << "(" << value_.real() << "," << value_.imag() << ")";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// pencil algebra

Operator pencil(const Operator& p, Scalar lambda, Tolerance tol)
{
    require_idempotent(p, tol, "pencil");
    const Operator id = identity(p.rows());
    return p + lambda * (id - p);
}

double quadratic_residual(const Operator& t, Scalar lambda, Tolerance tol)
{
    require_square(t, "quadratic_residual");
    require_not_one(lambda, tol, "quadratic_residual");
    const Operator id = identity(t.rows());
    return max_abs(t * t - (lambda + 1.0) * t + lambda * id);
}

Operator projection_from_pencil(const Operator& t, Scalar lambda, Tolerance tol)
{
    require_square(t, "projection_from_pencil");
    require_not_one(lambda, tol, "projection_from_pencil");
    return (t - lambda * identity(t.rows())) / (1.0 - lambda);
}

Operator build_reflection(const Operator& t, const UnimodularScalar& lambda, Tolerance tol)
{
    require_square(t, "build_reflection");
    const auto q = lambda.order();
    if (!q) {
        throw PreconditionError("build_reflection: lambda has no rational angle; no finite construction exists");
    }
    if (*q < 2) {
        throw PreconditionError("build_reflection: lambda must have order >= 2");
    }
    const double residual = quadratic_residual(t, lambda.value(), tol);
    if (residual > tol.eps()) {
        throw PreconditionError("build_reflection: T is not a pencil P + lambda(I - P) (quadratic residual "
                                + std::to_string(residual) + ")");
    }
    if (*q % 2 == 0) {
        return mat_pow(t, static_cast<unsigned>(*q / 2));
    }
    const long long k = (*q - 1) / 2;
    const Index n = t.rows();
    Operator sum = Operator::Zero(n, n);
    Operator power = identity(n);
    for (long long j = 1; j <= 2 * k; ++j) {
        power = power * t;
        sum += power;
    }
    return (static_cast<double>(1 - 2 * k) * identity(n) + 2.0 * sum) / static_cast<double>(2 * k + 1);
}

Operator n_circular(const Operator& t, unsigned n, Tolerance tol)
{
    require_square(t, "n_circular");
    if (n < 1) {
        throw std::invalid_argument("n_circular: n must be >= 1");
    }
    const Index dim = t.rows();
    Operator sum = Operator::Zero(dim, dim);
    Operator power = identity(dim);
    for (unsigned j = 0; j < n; ++j) {
        sum += power;
        power = power * t;
    }
    if (!approx_equal(power, identity(dim), tol)) {
        throw PreconditionError("n_circular: T^" + std::to_string(n) + " differs from I");
    }
    return sum / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// pairwise criterion

PairwiseVerdict pairwise_condition(const Operator& p, const UnimodularScalar& lambda, const NormSpec& spec,
                                   const SamplingBudget& budget, Tolerance tol)
{
    require_idempotent(p, tol, "pairwise_condition");
    const auto xs = range_basis(p, tol);
    const auto ys = kernel_basis(p, tol);
    const Scalar lam = lambda.value();

    PairwiseVerdict out;
    if (xs.empty() || ys.empty()) {
        // one side is {0}; the identity ||x - y|| = ||x - lambda y|| is trivial
        out.status = VerdictStatus::Certified;
        return out;
    }

    auto test = [&](const Vector& x, const Vector& y) {
        ++out.pairs_tested;
        const double scale = eval_norm(spec, x) + eval_norm(spec, y);
        if (scale == 0.0) {
            return false;
        }
        const Vector xn = x / scale;
        const Vector yn = y / scale;
        const double lhs = eval_norm(spec, Vector(xn - yn));
        const double rhs = eval_norm(spec, Vector(xn - lam * yn));
        if (std::abs(lhs - rhs) > tol.eps()) {
            out.status = VerdictStatus::Falsified;
            out.witness = std::make_pair(xn, yn);
            return true;
        }
        return false;
    };

    for (const auto& x : xs) {
        for (const auto& y : ys) {
            if (test(x, y)) {
                return out;
            }
        }
    }

    std::mt19937_64 rng(budget.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto combo = [&](const std::vector<Vector>& basis) {
        Vector v = Vector::Zero(basis.front().size());
        for (const auto& b : basis) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            v += Scalar(re, im) * b;
        }
        return v;
    };
    while (out.pairs_tested < budget.samples) {
        const Vector x = combo(xs);
        const Vector y = combo(ys);
        if (test(x, y)) {
            return out;
        }
    }
    out.status = VerdictStatus::Unknown;
    return out;
}

GbpReport analyze_gbp(const Operator& p, const UnimodularScalar& lambda, const NormSpec& spec,
                      const SamplingBudget& budget, Tolerance tol)
{
    const Operator t = pencil(p, lambda, tol);
    GbpReport report{lambda, isometry_verdict(t, spec, budget, tol), pairwise_condition(p, lambda, spec, budget, tol),
                     std::nullopt, std::nullopt};
    if (const auto q = lambda.order(); q && *q >= 2) {
        report.reflection = build_reflection(t, lambda, tol);
        report.reflection_isometric = isometry_verdict(*report.reflection, spec, budget, tol);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Lambda_P

const char* to_string(LambdaGroupClass c)
{
    switch (c) {
    case LambdaGroupClass::FiniteCyclic: return "FiniteCyclic";
    case LambdaGroupClass::LikelyFullCircle: return "LikelyFullCircle";
    case LambdaGroupClass::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

bool has_member(const std::vector<UnimodularScalar>& members, long long p, long long q)
{
    const auto target = UnimodularScalar::from_angle(p, q).angle();
    return std::any_of(members.begin(), members.end(), [&](const UnimodularScalar& m) {
        return m.angle()->p == target->p && m.angle()->q == target->q;
    });
}

bool closed_within(const std::vector<UnimodularScalar>& members, unsigned max_order)
{
    for (const auto& a : members) {
        const auto& x = *a.angle();
        if (!has_member(members, -x.p, x.q)) {
            return false;
        }
        for (const auto& b : members) {
            const auto& y = *b.angle();
            const auto prod = UnimodularScalar::from_angle(x.p * y.q + y.p * x.q, x.q * y.q);
            if (*prod.order() <= static_cast<long long>(max_order) && !has_member(members, prod.angle()->p, prod.angle()->q)) {
                return false;
            }
        }
    }
    return true;
}

bool is_full_root_group(const std::vector<UnimodularScalar>& members)
{
    const auto m = static_cast<long long>(members.size());
    for (long long j = 0; j < m; ++j) {
        if (!has_member(members, j, m)) {
            return false;
        }
    }
    return true;
}

} // namespace

LambdaGroupReport lambda_group(const Operator& p, const NormSpec& spec, const LambdaSearch& search, Tolerance tol)
{
    require_idempotent(p, tol, "lambda_group");
    if (search.max_order < 1) {
        throw std::invalid_argument("lambda_group: max_order must be >= 1");
    }
    LambdaGroupReport report;
    report.members.push_back(UnimodularScalar::from_angle(0, 1));

    for (long long q = 2; q <= static_cast<long long>(search.max_order); ++q) {
        for (long long num = 1; num < q; ++num) {
            if (std::gcd(num, q) != 1) {
                continue;
            }
            const auto lambda = UnimodularScalar::from_angle(num, q);
            ++report.roots_tested;
            const auto v = isometry_verdict(pencil(p, lambda, tol), spec, search.budget, tol);
            if (v.certified()) {
                report.members.push_back(lambda);
            } else if (v.status == VerdictStatus::Unknown) {
                ++report.roots_unknown;
            }
        }
    }
    std::sort(report.members.begin(), report.members.end(),
              [](const UnimodularScalar& a, const UnimodularScalar& b) { return a.arg() < b.arg(); });

    std::mt19937_64 rng(search.seed);
    std::uniform_real_distribution<double> turn(0.0, 1.0);
    for (std::size_t i = 0; i < search.random_lambdas; ++i) {
        const double theta = turn(rng);
        const Scalar lambda = std::polar(1.0, kTwoPi * theta);
        if (std::abs(lambda - Scalar(1.0)) <= tol.eps()) {
            continue;
        }
        ++report.random_tested;
        const auto v = isometry_verdict(pencil(p, lambda, tol), spec, search.budget, tol);
        switch (v.status) {
        case VerdictStatus::Certified: ++report.random_certified; break;
        case VerdictStatus::Falsified: ++report.random_falsified; break;
        case VerdictStatus::Unknown: ++report.random_unknown; break;
        }
    }

    std::ostringstream policy;
    policy << "roots of unity of order <= " << search.max_order << " (" << report.roots_tested + 1
           << " candidates incl. 1); " << search.random_lambdas << " uniform random lambdas (seed " << search.seed
           << ")";
    report.candidate_policy = policy.str();

    report.closed = closed_within(report.members, search.max_order);
    if (report.random_tested > 0 && report.random_certified == report.random_tested) {
        report.classification = LambdaGroupClass::LikelyFullCircle;
    } else if (report.closed && report.roots_unknown == 0 && report.random_certified == 0
               && report.random_unknown == 0 && is_full_root_group(report.members)) {
        report.classification = LambdaGroupClass::FiniteCyclic;
        report.order = static_cast<unsigned>(report.members.size());
    } else {
        report.classification = LambdaGroupClass::Inconclusive;
    }
    return report;
}

bool even_order_reflection_check(const LambdaGroupReport& report, const Operator& p, const NormSpec& spec,
                                 const SamplingBudget& budget, Tolerance tol)
{
    if (report.classification != LambdaGroupClass::FiniteCyclic || !report.order || *report.order % 2 != 0) {
        throw PreconditionError("even_order_reflection_check: requires a FiniteCyclic group of even order");
    }
    if (!has_member(report.members, 1, 2)) {
        return false;
    }
    const Operator r = pencil(p, Scalar(-1.0), tol);
    return is_involution(r, tol) && isometry_verdict(r, spec, budget, tol).certified();
}

} // namespace gbpkit
