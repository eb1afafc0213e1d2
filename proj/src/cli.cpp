#include "gbpkit/cli.hpp"

#include "gbpkit/fourier.hpp"
#include "gbpkit/io.hpp"
#include "gbpkit/norms.hpp"
#include "gbpkit/projection.hpp"
#include "gbpkit/repro.hpp"
#include "gbpkit/wco.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

namespace gbpkit::cli {

namespace {

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    double tol = Tolerance::kDefault;
    std::uint64_t seed = 0;
    std::size_t samples = 10000;
    unsigned max_order = 24;
    std::string norm = "sup";
    std::string lambda;
    std::string file;
    std::string out_file;
    std::size_t random_lambdas = 1000;
    unsigned order = 0;
    std::string subset;
    std::string coeffs;
    std::vector<std::string> values;
    std::string repro_id;
};

class Report {
public:
    explicit Report(std::ostream& out) : out_(out) {}

    template <typename T>
    Report& kv(const std::string& key, const T& value)
    {
        out_ << key << " = " << value << '\n';
        return *this;
    }
    Report& kv(const std::string& key, bool value) { return kv(key, std::string(value ? "true" : "false")); }
    Report& kv(const std::string& key, double value)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.15g", value);
        return kv(key, std::string(buf));
    }

    void operator_rows(const std::string& key, const Operator& op)
    {
        for (Index i = 0; i < op.rows(); ++i) {
            kv(key + ".row" + std::to_string(i), io::format_vector(op.row(i).transpose()));
        }
    }

private:
    std::ostream& out_;
};

double default_tolerance()
{
    if (const char* env = std::getenv("GBPKIT_TOL")) {
        try {
            return std::stod(env);
        } catch (const std::exception&) {
            throw InputError(std::string("GBPKIT_TOL is not a number: ") + env);
        }
    }
    return Tolerance::kDefault;
}

double parse_real_token(const std::string& s)
{
    try {
        std::size_t pos = 0;
        if (const auto slash = s.find('/'); slash != std::string::npos) {
            const double num = std::stod(s.substr(0, slash), &pos);
            if (pos != slash) {
                throw InputError("");
            }
            const std::string den_text = s.substr(slash + 1);
            const double den = std::stod(den_text, &pos);
            if (pos != den_text.size() || den == 0.0) {
                throw InputError("");
            }
            return num / den;
        }
        const double v = std::stod(s, &pos);
        if (pos != s.size()) {
            throw InputError("");
        }
        return v;
    } catch (const std::exception&) {
        throw InputError("not a real number: \"" + s + "\"");
    }
}

// "re" or "re:im", each part a decimal or a fraction a/b
Scalar parse_complex_token(const std::string& s)
{
    const auto colon = s.find(':');
    if (colon == std::string::npos) {
        return {parse_real_token(s), 0.0};
    }
    return {parse_real_token(s.substr(0, colon)), parse_real_token(s.substr(colon + 1))};
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

UnimodularScalar parse_lambda(const std::string& text, Tolerance tol)
{
    if (text.empty()) {
        throw InputError("--lambda is required (p/q or re,im)");
    }
    if (const auto slash = text.find('/'); slash != std::string::npos && text.find(',') == std::string::npos) {
        try {
            std::size_t pos_p = 0;
            std::size_t pos_q = 0;
            const std::string ps = text.substr(0, slash);
            const std::string qs = text.substr(slash + 1);
            const long long p = std::stoll(ps, &pos_p);
            const long long q = std::stoll(qs, &pos_q);
            if (pos_p != ps.size() || pos_q != qs.size() || q < 1) {
                throw InputError("");
            }
            return UnimodularScalar::from_angle(p, q);
        } catch (const std::exception&) {
            throw InputError("--lambda: expected an angle p/q with integers p and q >= 1, got \"" + text + "\"");
        }
    }
    const auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw InputError("--lambda: expected p/q or re,im, got \"" + text + "\"");
    }
    return UnimodularScalar::from_value({parse_real_token(parts[0]), parse_real_token(parts[1])}, tol);
}

NormSpec load_norm(const std::string& arg, Tolerance tol)
{
    if (arg == "sup") {
        return NormSpec::sup();
    }
    if (arg == "l1") {
        return NormSpec::lp(1.0);
    }
    if (arg == "l2") {
        return NormSpec::lp(2.0);
    }
    if (arg.rfind("lp:", 0) == 0) {
        return NormSpec::lp(parse_real_token(arg.substr(3)));
    }
    return io::parse_norm(io::read_file(arg), tol);
}

Operator load_operator(const std::string& path)
{
    if (path.empty()) {
        throw InputError("an operator file is required");
    }
    return io::parse_operator(io::read_file(path));
}

void echo_common(Report& r, const std::string& command, const Options& o)
{
    r.kv("command", command).kv("tol", o.tol).kv("seed", o.seed).kv("samples", o.samples);
}

void print_verdict(Report& r, const std::string& prefix, const IsometryVerdict& v)
{
    r.kv(prefix + ".status", to_string(v.status)).kv(prefix + ".method", to_string(v.method));
    r.kv(prefix + ".samples_used", v.samples_used);
    if (v.witness) {
        r.kv(prefix + ".witness", io::format_vector(*v.witness));
    }
}

void print_pairwise(Report& r, const PairwiseVerdict& v)
{
    r.kv("pairwise.status", to_string(v.status)).kv("pairwise.pairs_tested", v.pairs_tested);
    if (v.witness) {
        r.kv("pairwise.witness_x", io::format_vector(v.witness->first));
        r.kv("pairwise.witness_y", io::format_vector(v.witness->second));
    }
}

std::string subset_text(const Subset& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? "," : "") + std::to_string(s[i]);
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_check_projection(const Options& o, Report& r)
{
    const Tolerance tol(o.tol);
    const Operator p = load_operator(o.file);
    echo_common(r, "check-projection", o);
    r.kv("dim", p.rows());
    const bool idem = is_idempotent(p, tol);
    r.kv("idempotent", idem).kv("idempotent.residual", max_abs(p * p - p));
    if (!idem) {
        return kNegative;
    }
    const auto range = range_basis(p, tol);
    const auto kernel = kernel_basis(p, tol);
    r.kv("rank", range.size()).kv("kernel_rank", kernel.size());
    for (std::size_t i = 0; i < range.size(); ++i) {
        r.kv("range[" + std::to_string(i) + "]", io::format_vector(range[i]));
    }
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        r.kv("kernel[" + std::to_string(i) + "]", io::format_vector(kernel[i]));
    }
    if (o.lambda.empty()) {
        return kOk;
    }
    const NormSpec norm = load_norm(o.norm, tol);
    const auto lambda = parse_lambda(o.lambda, tol);
    const SamplingBudget budget{o.samples, o.seed};
    const auto report = analyze_gbp(p, lambda, norm, budget, tol);
    r.kv("norm", norm.describe()).kv("lambda", lambda.describe());
    print_verdict(r, "pencil", report.verdict);
    print_pairwise(r, report.pairwise);
    if (report.reflection) {
        r.kv("reflection.involution", is_involution(*report.reflection, tol));
        print_verdict(r, "reflection", *report.reflection_isometric);
    }
    return report.verdict.falsified() ? kNegative : kOk;
}

int cmd_reflect(const Options& o, Report& r)
{
    const Tolerance tol(o.tol);
    const Operator t = load_operator(o.file);
    const auto lambda = parse_lambda(o.lambda, tol);
    echo_common(r, "reflect", o);
    r.kv("lambda", lambda.describe());
    const Operator refl = build_reflection(t, lambda, tol);
    const Operator p = projection_from_pencil(t, lambda.value(), tol);
    r.kv("reflection.involution", is_involution(refl, tol));
    r.kv("projection_is_average", approx_equal(p, (identity(t.rows()) + refl) / 2.0, tol));
    for (Index j = 0; j < refl.cols(); ++j) {
        r.kv("R(e" + std::to_string(j + 1) + ")", io::format_vector(refl.col(j)));
    }
    if (!o.out_file.empty()) {
        io::write_file(o.out_file, io::emit_operator(refl));
        r.kv("written", o.out_file);
    }
    return kOk;
}

int cmd_isometry(const Options& o, Report& r)
{
    const Tolerance tol(o.tol);
    const Operator t = load_operator(o.file);
    const NormSpec norm = load_norm(o.norm, tol);
    echo_common(r, "isometry", o);
    r.kv("norm", norm.describe());
    const auto v = isometry_verdict(t, norm, {o.samples, o.seed}, tol);
    print_verdict(r, "isometry", v);
    return v.falsified() ? kNegative : kOk;
}

int cmd_pairwise(const Options& o, Report& r)
{
    const Tolerance tol(o.tol);
    const Operator p = load_operator(o.file);
    const NormSpec norm = load_norm(o.norm, tol);
    const auto lambda = parse_lambda(o.lambda, tol);
    echo_common(r, "pairwise", o);
    r.kv("norm", norm.describe()).kv("lambda", lambda.describe());
    const SamplingBudget budget{o.samples, o.seed};
    const auto v = pairwise_condition(p, lambda, norm, budget, tol);
    print_pairwise(r, v);
    print_verdict(r, "pencil", isometry_verdict(pencil(p, lambda, tol), norm, budget, tol));
    return v.status == VerdictStatus::Falsified ? kNegative : kOk;
}

int cmd_lambda_group(const Options& o, Report& r)
{
    const Tolerance tol(o.tol);
    const Operator p = load_operator(o.file);
    const NormSpec norm = load_norm(o.norm, tol);
    echo_common(r, "lambda-group", o);
    r.kv("norm", norm.describe()).kv("max_order", o.max_order).kv("random_lambdas", o.random_lambdas);
    LambdaSearch search;
    search.max_order = o.max_order;
    search.random_lambdas = o.random_lambdas;
    search.seed = o.seed;
    search.budget = {o.samples, o.seed};
    const auto report = lambda_group(p, norm, search, tol);
    std::string members = "{";
    for (std::size_t i = 0; i < report.members.size(); ++i) {
        members += (i ? ", " : "") + report.members[i].describe();
    }
    r.kv("members", members + "}").kv("classification", to_string(report.classification));
    if (report.order) {
        r.kv("order", *report.order);
    }
    r.kv("candidate_policy", report.candidate_policy).kv("closed", report.closed);
    r.kv("roots_tested", report.roots_tested).kv("roots_unknown", report.roots_unknown);
    r.kv("random_tested", report.random_tested)
        .kv("random_certified", report.random_certified)
        .kv("random_falsified", report.random_falsified)
        .kv("random_unknown", report.random_unknown);
    if (report.order && *report.order % 2 == 0) {
        r.kv("average_with_isometric_reflection",
             even_order_reflection_check(report, p, norm, search.budget, tol));
    }
    return kOk;
}

Vector collect_coefficients(const Options& o)
{
    std::vector<std::string> tokens = o.values;
    for (const auto& t : split(o.coeffs, ',')) {
        tokens.push_back(t);
    }
    if (!o.file.empty()) {
        if (!tokens.empty()) {
            throw InputError("give coefficients either inline or with --file, not both");
        }
        return io::parse_vector(io::read_file(o.file));
    }
    if (tokens.empty()) {
        throw InputError("no coefficients given");
    }
    Vector z(static_cast<Index>(tokens.size()));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        z(static_cast<Index>(i)) = parse_complex_token(tokens[i]);
    }
    return z;
}

int cmd_dft_decide(const Options& o, Report& r)
{
    const Tolerance tol(o.tol);
    const Vector z = collect_coefficients(o);
    r.kv("command", "dft-decide").kv("tol", o.tol).kv("k", z.size());
    r.kv("z", io::format_vector(z)).kv("alpha", io::format_vector(dft(z)));
    const auto s = decide_projection_coeffs(z, tol);
    if (!s) {
        r.kv("result", "NotAProjection");
        return kNegative;
    }
    r.kv("result", "Projection").kv("S", subset_text(*s));
    return kOk;
}

Subset parse_subset(const std::string& text)
{
    Subset s;
    for (const auto& item : split(text, ',')) {
        try {
            std::size_t pos = 0;
            const long v = std::stol(item, &pos);
            if (pos != item.size() || v < 0) {
                throw InputError("");
            }
            s.push_back(static_cast<unsigned>(v));
        } catch (const std::exception&) {
            throw InputError("--subset: bad index \"" + item + "\"");
        }
    }
    return s;
}

int cmd_dft_synthesize(const Options& o, Report& r)
{
    const Tolerance tol(o.tol);
    const Operator t = load_operator(o.file);
    if (o.order < 1) {
        throw InputError("--order is required");
    }
    const Subset s = parse_subset(o.subset);
    r.kv("command", "dft-synthesize").kv("tol", o.tol).kv("order", o.order).kv("S", subset_text(s));
    const auto syn = synthesize_projection(t, o.order, s, tol);
    r.kv("z", io::format_vector(syn.coefficients));
    r.kv("idempotent", is_idempotent(syn.projection, tol));
    r.kv("coefficient_sum_matches", approx_equal(coefficient_sum(t, syn.coefficients), syn.projection, tol));
    r.operator_rows("P", syn.projection);
    if (!o.out_file.empty()) {
        io::write_file(o.out_file, io::emit_operator(syn.projection));
        r.kv("written", o.out_file);
    }
    return kOk;
}

int cmd_spectral(const Options& o, Report& r)
{
    const Tolerance tol(o.tol);
    const Operator t = load_operator(o.file);
    if (o.order < 1) {
        throw InputError("--order is required");
    }
    r.kv("command", "spectral").kv("tol", o.tol).kv("order", o.order);
    const auto dec = spectral_projections(t, o.order, tol);
    for (unsigned j = 0; j < dec.k; ++j) {
        const std::string key = "Q" + std::to_string(j);
        r.kv(key + ".eigenvalue", io::format_scalar(root_of_unity_power(dec.k, j)));
        r.kv(key + ".rank", detail::column_basis(dec.parts[j], tol).size());
        r.operator_rows(key, dec.parts[j]);
    }
    return kOk;
}

int cmd_wco_classify(const Options& o, Report& r)
{
    const Tolerance tol(o.tol);
    if (o.file.empty()) {
        throw InputError("a wco file is required");
    }
    const WcoSpec spec = io::parse_wco(io::read_file(o.file), tol);
    const auto lambda = parse_lambda(o.lambda, tol);
    echo_common(r, "wco-classify", o);
    r.kv("points", spec.points()).kv("lambda", lambda.describe());
    const SamplingBudget budget{o.samples, o.seed};
    const bool homogeneous = spec.homogeneous();
    r.kv("mode", homogeneous ? "function-space" : "direct-sum");
    const auto c = homogeneous ? classify(spec, lambda, budget, tol) : classify_direct_sum(spec, lambda, budget, tol);
    r.kv("case", to_string(c.kind));
    switch (c.kind) {
    case WcoCase::ReflectionAverage: {
        std::string pairs;
        for (const auto& [a, b] : c.involution_pairs) {
            pairs += (pairs.empty() ? "" : " ") + std::to_string(a) + "<->" + std::to_string(b);
        }
        r.kv("involution_pairs", pairs.empty() ? "-" : pairs);
        r.kv("fixed_points", c.fixed_points.size());
        print_verdict(r, "reflection", ambient_isometry_verdict(spec, *c.reflection, budget, tol));
        return kOk;
    }
    case WcoCase::PointwiseGbp:
        for (std::size_t w = 0; w < c.pointwise_projections.size(); ++w) {
            r.operator_rows("P" + std::to_string(w), c.pointwise_projections[w]);
        }
        return kOk;
    case WcoCase::NotAGbp:
        r.kv("failure", to_string(c.failure->reason)).kv("failure.residual", c.failure->residual);
        if (c.failure->point) {
            r.kv("failure.point", *c.failure->point);
        }
        return kNegative;
    }
    return kOk;
}

int cmd_repro(const Options& o, Report& r)
{
    std::vector<std::string> ids;
    if (o.repro_id == "all") {
        ids = repro::fixture_ids();
    } else {
        ids.push_back(o.repro_id);
    }
    bool all = true;
    r.kv("command", "repro").kv("tolerance", repro::kFixtureTolerance);
    for (const auto& id : ids) {
        repro::Report rep;
        try {
            rep = repro::run_repro(id);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
        r.kv("fixture", rep.id + " : " + rep.description);
        for (const auto& row : rep.rows) {
            std::ostringstream line;
            line << (row.pass ? "PASS" : "FAIL") << " | " << row.quantity << " | expected " << row.expected
                 << " | actual " << row.actual << " | dev " << row.deviation;
            r.kv("row", line.str());
        }
        r.kv("fixture." + rep.id + ".pass", rep.all_pass());
        all = all && rep.all_pass();
    }
    r.kv("all_pass", all);
    return all ? kOk : kNegative;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    try {
        o.tol = default_tolerance();
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    CLI::App app{"gbpkit: generalized bi-circular projection workbench", "gbpkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--tol", o.tol, "absolute entrywise tolerance (env GBPKIT_TOL overrides the default)")
        ->capture_default_str();
    app.add_option("--seed", o.seed, "sampling seed")->capture_default_str();
    app.add_option("--samples", o.samples, "sampling budget per verdict")->capture_default_str();
    app.add_option("--max-order", o.max_order, "largest root-of-unity order tried by lambda-group")
        ->capture_default_str();
    app.add_option("--norm", o.norm, "norm file, or one of sup, l1, l2, lp:P")->capture_default_str();
    app.add_option("--lambda", o.lambda, "unimodular lambda as an angle p/q (exp(2 pi i p/q)) or re,im");

    int (*handler)(const Options&, Report&) = nullptr;
    auto add = [&](const char* name, const char* help, int (*fn)(const Options&, Report&)) {
        auto* sub = app.add_subcommand(name, help);
        sub->callback([&handler, fn] { handler = fn; });
        return sub;
    };

    auto* cp = add("check-projection", "idempotency, range/kernel and (with --lambda) the GBP report", cmd_check_projection);
    cp->add_option("operator", o.file, "operator file")->required();
    auto* rf = add("reflect", "reflection in the algebra generated by a pencil T", cmd_reflect);
    rf->add_option("operator", o.file, "pencil operator file")->required();
    rf->add_option("--out", o.out_file, "write R to this operator file");
    add("isometry", "three-valued isometry verdict", cmd_isometry)->add_option("operator", o.file)->required();
    add("pairwise", "range/kernel norm criterion", cmd_pairwise)->add_option("projection", o.file)->required();
    auto* lg = add("lambda-group", "finite search for the group of admissible lambdas", cmd_lambda_group);
    lg->add_option("projection", o.file)->required();
    lg->add_option("--random-lambdas", o.random_lambdas, "random unimodular candidates")->capture_default_str();
    auto* dd = add("dft-decide", "is sum z_i T^i a projection for every T of order k", cmd_dft_decide);
    dd->add_option("values", o.values, "coefficients: re, re:im, fractions allowed");
    dd->add_option("--coeffs", o.coeffs, "comma-separated coefficients");
    dd->add_option("--file", o.file, "vector file with the coefficients");
    auto* ds = add("dft-synthesize", "projection from a subset of spectral parts", cmd_dft_synthesize);
    ds->add_option("operator", o.file)->required();
    ds->add_option("--order", o.order)->required();
    ds->add_option("--subset", o.subset, "comma-separated indices (empty for the zero projection)");
    ds->add_option("--out", o.out_file, "write P to this operator file");
    auto* sp = add("spectral", "spectral projections of a finite-order operator", cmd_spectral);
    sp->add_option("operator", o.file)->required();
    sp->add_option("--order", o.order)->required();
    add("wco-classify", "classify a weighted composition pencil", cmd_wco_classify)
        ->add_option("spec", o.file, "wco file")
        ->required();
    add("repro", "reproduce a worked example (2.2, 2.6, 3.1.1, 3.1.2, all)", cmd_repro)
        ->add_option("id", o.repro_id)
        ->required();

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("gbpkit");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) {
        argv.push_back(s.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    Report report(out);
    try {
        return handler(o, report);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const io::ParseError& e) {
        err << "parse error: " << e.what() << '\n';
    } catch (const PreconditionError& e) {
        err << "precondition: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kInputError;
}

} // namespace gbpkit::cli
