#include "gbpkit/repro.hpp"

#include "gbpkit/io.hpp"
#include "gbpkit/norms.hpp"
#include "gbpkit/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace gbpkit::repro {

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kSqrt7 = std::sqrt(7.0);
constexpr Scalar kI{0.0, 1.0};

Vector vec(std::initializer_list<Scalar> xs)
{
    Vector v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (Scalar x : xs) {
        v(i++) = x;
    }
    return v;
}

class Table {
public:
    explicit Table(double tol) : tol_(tol) {}

    void value(std::string quantity, double expected, double actual)
    {
        const double dev = std::abs(expected - actual);
        rows_.push_back({std::move(quantity), io::format_scalar(expected), io::format_scalar(actual), dev, dev <= tol_});
    }

    void vector(std::string quantity, const Vector& expected, const Vector& actual)
    {
        const double dev = expected.size() == actual.size() ? max_abs(expected - actual) : INFINITY;
        rows_.push_back(
            {std::move(quantity), io::format_vector(expected), io::format_vector(actual), dev, dev <= tol_});
    }

    void label(std::string quantity, const std::string& expected, const std::string& actual)
    {
        const bool ok = expected == actual;
        rows_.push_back({std::move(quantity), expected, actual, ok ? 0.0 : 1.0, ok});
    }

    std::vector<Row> take() { return std::move(rows_); }

private:
    double tol_;
    std::vector<Row> rows_;
};

std::string member_list(const LambdaGroupReport& report)
{
    std::string out = "{";
    for (std::size_t i = 0; i < report.members.size(); ++i) {
        out += (i ? ", " : "") + report.members[i].describe();
    }
    return out + "}";
}

std::string classification(const LambdaGroupReport& report)
{
    std::string out = to_string(report.classification);
    if (report.order) {
        out += "(" + std::to_string(*report.order) + ")";
    }
    return out;
}

Report remark_cycle(double tol)
{
    Report rep{"2.2", "3-cycle on the first three coordinates of C^4 (fourth coordinate fixed), sup norm", {}};
    Table t(tol);
    const Operator cycle = example_three_cycle_tail();
    const NormSpec sup = NormSpec::sup();

    t.label("cycle is a sup-norm isometry", "Certified", to_string(isometry_verdict(cycle, sup).status));
    const Operator p = n_circular(cycle, 3);
    const auto omega = UnimodularScalar::from_angle(1, 3);
    const Operator r = build_reflection(pencil(p, omega), omega);
    t.vector("R(0,1,1,0)", vec({4.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0}), r * vec({0.0, 1.0, 1.0, 0.0}));
    t.value("||R(0,1,1,0)||_sup", 4.0 / 3.0, eval_norm(sup, r * vec({0.0, 1.0, 1.0, 0.0})));
    t.label("R is a sup-norm isometry", "Falsified", to_string(isometry_verdict(r, sup).status));

    // 64 sampled lambdas: every pencil must fail at e_1 with the closed-form image
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> turn(0.0, 1.0);
    const Vector e1 = basis_vector(4, 0);
    std::size_t falsified_at_e1 = 0;
    double worst_image = 0.0;
    for (int s = 0; s < 64; ++s) {
        Scalar lambda;
        do {
            lambda = std::polar(1.0, 2.0 * std::numbers::pi * turn(rng));
        } while (std::abs(lambda - 1.0) < 1e-6);
        const Operator pen = pencil(p, lambda);
        const auto v = isometry_verdict(pen, sup);
        if (v.falsified() && v.witness && max_abs(*v.witness - e1) <= tol) {
            ++falsified_at_e1;
        }
        const Vector expected = vec({1.0 / 3.0 + 2.0 / 3.0 * lambda, 1.0 / 3.0 - lambda / 3.0,
                                     1.0 / 3.0 - lambda / 3.0, 0.0});
        worst_image = std::max(worst_image, max_abs(Vector(pen * e1) - expected));
    }
    t.label("pencils Falsified with witness (1,0,0,0)", "64/64", std::to_string(falsified_at_e1) + "/64");
    t.value("max |S(1,0,0,0) - (1/3+2l/3, 1/3-l/3, 1/3-l/3, 0)|", 0.0, worst_image);
    rep.rows = t.take();
    return rep;
}

Report example_orbit_renorm(double tol)
{
    Report rep{"2.6", "all-1/3 projection on C^3, lambda = exp(2 pi i/3), orbit-max renorm of sup", {}};
    Table t(tol);
    const Scalar a = kI * kSqrt3 / 3.0;
    const Scalar b = 0.5 - kI * kSqrt3 / 6.0;
    const Operator p = example_three_average();
    const auto lambda = UnimodularScalar::from_angle(1, 3);
    const Operator tt = pencil(p, lambda);
    const NormSpec sup = NormSpec::sup();
    const NormSpec star = NormSpec::orbit_max(sup, tt, 3);
    const Vector e3 = basis_vector(3, 2);

    t.vector("T(0,0,1)", vec({b, b, a}), tt * e3);
    t.value("||T(0,0,1)||_sup", kSqrt3 / 3.0, eval_norm(sup, tt * e3));
    t.vector("T^2(0,0,1)", vec({std::conj(b), std::conj(b), std::conj(a)}), mat_pow(tt, 2) * e3);
    const auto order = detect_order(tt, 24);
    t.label("order of T", "3", order.order ? std::to_string(*order.order) : "none");
    t.label("T under sup", "Falsified", to_string(isometry_verdict(tt, sup).status));
    t.label("T under ||.||_*", "Certified", to_string(isometry_verdict(tt, star).status));

    const Operator r = build_reflection(tt, lambda);
    const Vector re3 = r * e3;
    t.vector("R(0,0,1)", vec({2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0}), re3);
    t.vector("(TR)(0,0,1)", vec({(0.5 + kI * kSqrt3 / 2.0) / 3.0, (0.5 + kI * kSqrt3 / 2.0) / 3.0, (2.0 - kI * kSqrt3) / 3.0}),
             tt * re3);
    t.vector("(T^2R)(0,0,1)",
             vec({(0.5 - kI * kSqrt3 / 2.0) / 3.0, (0.5 - kI * kSqrt3 / 2.0) / 3.0, (2.0 + kI * kSqrt3) / 3.0}),
             mat_pow(tt, 2) * re3);
    t.value("||R(0,0,1)||_sup", 2.0 / 3.0, eval_norm(sup, re3));
    t.value("||R(0,0,1)||_*", kSqrt7 / 3.0, eval_norm(star, re3));
    t.value("||(0,0,1)||_*", 1.0, eval_norm(star, e3));
    t.label("R under ||.||_*", "Falsified", to_string(isometry_verdict(r, star).status));

    const Vector x = vec({1.0, 1.0, 1.0});
    const Vector y = vec({1.0, 1.0, -2.0});
    t.vector("P x for x = (1,1,1)", x, p * x);
    t.vector("P y for y = (1,1,-2)", Vector::Zero(3), p * y);
    t.value("||x+y||_*", kSqrt7, eval_norm(star, x + y));
    t.value("||x-y||_*", 3.0, eval_norm(star, x - y));
    rep.rows = t.take();
    return rep;
}

Report group_pair_average(double tol)
{
    Report rep{"3.1.1", "average of the first two coordinates on C^3, sup norm", {}};
    Table t(tol);
    const Operator p = example_pair_average();
    const NormSpec sup = NormSpec::sup();
    const auto report = lambda_group(p, sup);
    t.label("Lambda_P members", "{exp(2pi i 0/1), exp(2pi i 1/2)}", member_list(report));
    t.label("classification", "FiniteCyclic(2)", classification(report));
    t.label("random lambdas Falsified", std::to_string(report.random_tested) + "/" + std::to_string(report.random_tested),
            std::to_string(report.random_falsified) + "/" + std::to_string(report.random_tested));
    t.label("P = (I + R)/2 with R an isometric reflection", "true",
            even_order_reflection_check(report, p, sup) ? "true" : "false");
    rep.rows = t.take();
    return rep;
}

Report group_orbit_renorm(double tol)
{
    Report rep{"3.1.2", "all-1/3 projection on C^3 under the orbit-max norm", {}};
    Table t(tol);
    const Operator p = example_three_average();
    const Operator tt = pencil(p, UnimodularScalar::from_angle(1, 3));
    const NormSpec star = NormSpec::orbit_max(NormSpec::sup(), tt, 3);
    const auto report = lambda_group(p, star);
    t.label("Lambda_P members", "{exp(2pi i 0/1), exp(2pi i 1/3), exp(2pi i 2/3)}", member_list(report));
    t.label("classification", "FiniteCyclic(3)", classification(report));

    // lambda_0 outside the group: ||S(0,0,1)||_* < 1 = ||(0,0,1)||_*
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> turn(0.0, 1.0);
    const Vector e3 = basis_vector(3, 2);
    std::size_t shrunk = 0;
    for (int s = 0; s < 64; ++s) {
        const Scalar lambda0 = std::polar(1.0, 2.0 * std::numbers::pi * turn(rng));
        if (eval_norm(star, pencil(p, lambda0) * e3) < 1.0 - tol) {
            ++shrunk;
        }
    }
    t.label("sampled lambda_0 with ||S(0,0,1)||_* < 1", "64/64", std::to_string(shrunk) + "/64");
    rep.rows = t.take();
    return rep;
}

} // namespace

bool Report::all_pass() const
{
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
}

std::vector<std::string> fixture_ids() { return {"2.2", "2.6", "3.1.1", "3.1.2"}; }

Report run_repro(const std::string& id, double tolerance)
{
    if (id == "2.2") {
        return remark_cycle(tolerance);
    }
    if (id == "2.6") {
        return example_orbit_renorm(tolerance);
    }
    if (id == "3.1.1") {
        return group_pair_average(tolerance);
    }
    if (id == "3.1.2") {
        return group_orbit_renorm(tolerance);
    }
    throw std::invalid_argument("unknown repro id \"" + id + "\" (known: 2.2, 2.6, 3.1.1, 3.1.2)");
}

Operator example_three_average() { return Operator::Constant(3, 3, Scalar(1.0 / 3.0)); }

Operator example_three_cycle_tail()
{
    Operator t = Operator::Zero(4, 4);
    t(0, 1) = 1.0;
    t(1, 2) = 1.0;
    t(2, 0) = 1.0;
    t(3, 3) = 1.0;
    return t;
}

Operator example_pair_average()
{
    Operator p = Operator::Zero(3, 3);
    p(0, 0) = p(0, 1) = p(1, 0) = p(1, 1) = 0.5;
    p(2, 2) = 1.0;
    return p;
}

} // namespace gbpkit::repro
