#include "gbpkit/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gbpkit::io {

using nlohmann::json;

namespace {

json parse_json(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ParseError(path + ": " + msg); }

const json& field(const json& j, const char* key, const std::string& path)
{
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    const auto it = j.find(key);
    if (it == j.end()) {
        fail(path, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

double real_value(const json& j, const std::string& path)
{
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    return j.get<double>();
}

long long integer_value(const json& j, const std::string& path)
{
    if (!j.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return j.get<long long>();
}

Scalar complex_value(const json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 2) {
        fail(path, "expected a [re, im] pair");
    }
    return {real_value(j[0], path + "[0]"), real_value(j[1], path + "[1]")};
}

Index dim_value(const json& j, const std::string& path)
{
    const long long d = integer_value(j, path);
    if (d < 1) {
        fail(path, "dimension must be >= 1");
    }
    return static_cast<Index>(d);
}

Operator operator_from(const json& j, const std::string& path)
{
    const Index n = dim_value(field(j, "dim", path), path + ".dim");
    const json& rows = field(j, "entries", path);
    const std::string epath = path + ".entries";
    if (!rows.is_array() || static_cast<Index>(rows.size()) != n) {
        fail(epath, "expected " + std::to_string(n) + " rows for dim " + std::to_string(n) + ", found "
                        + (rows.is_array() ? std::to_string(rows.size()) : std::string("a non-array")));
    }
    Operator op(n, n);
    for (Index i = 0; i < n; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        const std::string rpath = epath + "[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<Index>(row.size()) != n) {
            fail(rpath, "expected " + std::to_string(n) + " entries");
        }
        for (Index k = 0; k < n; ++k) {
            op(i, k) = complex_value(row[static_cast<std::size_t>(k)], rpath + "[" + std::to_string(k) + "]");
        }
    }
    return op;
}

Vector vector_from(const json& j, const std::string& path)
{
    const Index n = dim_value(field(j, "dim", path), path + ".dim");
    const json& entries = field(j, "entries", path);
    const std::string epath = path + ".entries";
    if (!entries.is_array() || static_cast<Index>(entries.size()) != n) {
        fail(epath, "expected " + std::to_string(n) + " entries");
    }
    Vector v(n);
    for (Index i = 0; i < n; ++i) {
        v(i) = complex_value(entries[static_cast<std::size_t>(i)], epath + "[" + std::to_string(i) + "]");
    }
    return v;
}

NormSpec norm_from(const json& j, const std::string& path, Tolerance tol)
{
    const json& kind = field(j, "kind", path);
    if (!kind.is_string()) {
        fail(path + ".kind", "expected a string");
    }
    const auto k = kind.get<std::string>();
    try {
        if (k == "sup") {
            return NormSpec::sup();
        }
        if (k == "lp") {
            return NormSpec::lp(real_value(field(j, "p", path), path + ".p"));
        }
        if (k == "orbit_max") {
            const long long order = integer_value(field(j, "order", path), path + ".order");
            if (order < 1) {
                fail(path + ".order", "must be >= 1");
            }
            return NormSpec::orbit_max(norm_from(field(j, "base", path), path + ".base", tol),
                                       operator_from(field(j, "generator", path), path + ".generator"),
                                       static_cast<unsigned>(order), tol);
        }
        if (k == "sum_renorm") {
            return NormSpec::sum_renorm(norm_from(field(j, "base", path), path + ".base", tol),
                                        operator_from(field(j, "reflector", path), path + ".reflector"), tol);
        }
    } catch (const InvalidNorm& e) {
        fail(path, e.what());
    } catch (const DimensionError& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown norm kind \"" + k + "\"");
}

void put_complex(std::ostringstream& os, Scalar z)
{
    os << '[' << format_real(z.real()) << ',' << format_real(z.imag()) << ']';
}

void put_operator(std::ostringstream& os, const Operator& op, const std::string& indent)
{
    os << "{\"dim\":" << op.rows() << ",\"entries\":[\n";
    for (Index i = 0; i < op.rows(); ++i) {
        os << indent << "  [";
        for (Index k = 0; k < op.cols(); ++k) {
            if (k > 0) {
                os << ',';
            }
            put_complex(os, op(i, k));
        }
        os << ']' << (i + 1 < op.rows() ? "," : "") << '\n';
    }
    os << indent << "]}";
}

void put_norm(std::ostringstream& os, const NormSpec& spec, const std::string& indent)
{
    if (spec.is_sup()) {
        os << "{\"kind\":\"sup\"}";
    } else if (const auto* l = std::get_if<NormSpec::Lp>(&spec.kind())) {
        os << "{\"kind\":\"lp\",\"p\":" << format_real(l->p) << '}';
    } else if (const auto* o = std::get_if<NormSpec::OrbitMax>(&spec.kind())) {
        os << "{\"kind\":\"orbit_max\",\"order\":" << o->order << ",\"base\":";
        put_norm(os, *o->base, indent + "  ");
        os << ",\"generator\":";
        put_operator(os, o->generator, indent);
        os << '}';
    } else if (const auto* s = std::get_if<NormSpec::SumRenorm>(&spec.kind())) {
        os << "{\"kind\":\"sum_renorm\",\"base\":";
        put_norm(os, *s->base, indent + "  ");
        os << ",\"reflector\":";
        put_operator(os, s->reflector, indent);
        os << '}';
    }
}

} // namespace

std::string format_real(double x)
{
    if (x == 0.0 && std::signbit(x)) {
        return "-0.0";  // "-0" would be read back as the integer 0
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_scalar(Scalar z)
{
    auto shortest = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.15g", x == 0.0 ? 0.0 : x);
        return std::string(buf);
    };
    // rounding residue below display precision is shown as zero
    const double scale = std::max(1.0, std::abs(z));
    if (std::abs(z.real()) < 1e-14 * scale) {
        z.real(0.0);
    }
    if (std::abs(z.imag()) < 1e-14 * scale) {
        z.imag(0.0);
    }
    if (z.imag() == 0.0) {
        return shortest(z.real());
    }
    if (z.real() == 0.0) {
        return shortest(z.imag()) + "i";
    }
    const std::string im = shortest(z.imag());
    return shortest(z.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

std::string format_vector(const Vector& v)
{
    std::string out = "(";
    for (Index i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += format_scalar(v(i));
    }
    return out + ")";
}

Operator parse_operator(std::string_view text) { return operator_from(parse_json(text), "operator"); }

std::string emit_operator(const Operator& op)
{
    std::ostringstream os;
    put_operator(os, op, "");
    os << '\n';
    return os.str();
}

Vector parse_vector(std::string_view text) { return vector_from(parse_json(text), "vector"); }

std::string emit_vector(const Vector& v)
{
    std::ostringstream os;
    os << "{\"dim\":" << v.size() << ",\"entries\":[";
    for (Index i = 0; i < v.size(); ++i) {
        if (i > 0) {
            os << ',';
        }
        put_complex(os, v(i));
    }
    os << "]}\n";
    return os.str();
}

NormSpec parse_norm(std::string_view text, Tolerance tol) { return norm_from(parse_json(text), "norm", tol); }

std::string emit_norm(const NormSpec& spec)
{
    std::ostringstream os;
    put_norm(os, spec, "");
    os << '\n';
    return os.str();
}

WcoSpec parse_wco(std::string_view text, Tolerance tol)
{
    const json j = parse_json(text);
    const json& points = field(j, "points", "wco");
    if (!points.is_array() || points.empty()) {
        fail("wco.points", "expected a non-empty array");
    }
    WcoSpec spec;
    for (std::size_t w = 0; w < points.size(); ++w) {
        const std::string path = "wco.points[" + std::to_string(w) + "]";
        const json& pt = points[w];
        spec.fiber_dims.push_back(dim_value(field(pt, "dim", path), path + ".dim"));
        spec.phi.push_back(static_cast<Index>(integer_value(field(pt, "phi", path), path + ".phi")));
        spec.fiber_norms.push_back(norm_from(field(pt, "norm", path), path + ".norm", tol));
        const json& weight = field(pt, "weight", path);
        // weights may be rectangular in principle; the file format only carries square fibers
        spec.weights.push_back(operator_from(weight, path + ".weight"));
    }
    try {
        spec.validate();
    } catch (const DimensionError& e) {
        throw ParseError(std::string("wco: ") + e.what());
    }
    return spec;
}

std::string emit_wco(const WcoSpec& spec)
{
    std::ostringstream os;
    os << "{\"points\":[\n";
    for (std::size_t w = 0; w < spec.points(); ++w) {
        os << "  {\"dim\":" << spec.fiber_dims[w] << ",\"phi\":" << spec.phi[w] << ",\"norm\":";
        put_norm(os, spec.fiber_norms[w], "  ");
        os << ",\"weight\":";
        put_operator(os, spec.weights[w], "  ");
        os << '}' << (w + 1 < spec.points() ? "," : "") << '\n';
    }
    os << "]}\n";
    return os.str();
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string() + ": cannot open file");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(path.string() + ": cannot open file for writing");
    }
    out << text;
}

} // namespace gbpkit::io
