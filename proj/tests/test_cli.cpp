#include "gbpkit/cli.hpp"
#include "gbpkit/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include <unistd.h>

using namespace gbpkit;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;

    bool has(const std::string& line) const { return out.find(line + "\n") != std::string::npos; }
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(GBPKIT_TEST_DATA) + "/" + name; }

std::filesystem::path scratch(const char* name)
{
    return std::filesystem::temp_directory_path() / ("gbpkit_cli_test_" + std::to_string(::getpid()) + "_" + name);
}

} // namespace

TEST_CASE("reflect prints the reflection columns")
{
    const auto r = run({"reflect", "--lambda", "1/3", data("pencil_c3.json")});
    CHECK(r.code == cli::kOk);
    CHECK(r.has("R(e3) = (0.666666666666667, 0.666666666666667, -0.333333333333333)"));
    CHECK(r.has("reflection.involution = true"));
    CHECK(r.has("lambda = exp(2pi i 1/3)"));

    const auto out = scratch("reflection.json");
    const auto w = run({"reflect", "--lambda", "1/3", "--out", out.string(), data("pencil_c3.json")});
    CHECK(w.code == cli::kOk);
    const Operator refl = io::parse_operator(io::read_file(out));
    CHECK(std::abs(refl(2, 2) - Scalar(-1.0 / 3.0)) <= 1e-15);
    std::filesystem::remove(out);

    // the raw 3-cycle is not a pencil
    CHECK(run({"reflect", "--lambda", "1/3", data("three_cycle_tail.json")}).code == cli::kInputError);
}

TEST_CASE("dft-decide")
{
    const auto r = run({"dft-decide", "1/3", "1/3", "1/3"});
    CHECK(r.code == cli::kOk);
    CHECK(r.has("S = {0}"));
    CHECK(r.has("alpha = (1, 0, 0)"));

    const auto no = run({"dft-decide", "--coeffs", "-1/3,2/3,2/3"});
    CHECK(no.code == cli::kNegative);
    CHECK(no.has("result = NotAProjection"));

    // idft of the indicator of {1} for k = 4 is (1, i, -1, -i)/4
    const auto cplx = run({"dft-decide", "1/4", "0:1/4", "-1/4", "0:-1/4"});
    CHECK(cplx.code == cli::kOk);
    CHECK(cplx.has("S = {1}"));
    CHECK(run({"dft-decide"}).code == cli::kInputError);
    CHECK(run({"dft-decide", "1/0"}).code == cli::kInputError);
    CHECK(run({"dft-decide", "abc"}).code == cli::kInputError);
}

TEST_CASE("isometry")
{
    const auto sup = run({"isometry", data("pencil_c3.json")});
    CHECK(sup.code == cli::kNegative);
    CHECK(sup.has("isometry.status = Falsified"));
    CHECK(sup.has("isometry.witness = (1, 0, 0)"));

    const auto star = run({"isometry", "--norm", data("star_norm.json"), data("pencil_c3.json")});
    CHECK(star.code == cli::kOk);
    CHECK(star.has("isometry.status = Certified"));

    CHECK(run({"isometry", "--norm", "l2", data("three_cycle_tail.json")}).code == cli::kOk);
    CHECK(run({"isometry", "--norm", "lp:0.3", data("three_cycle_tail.json")}).code == cli::kInputError);
    CHECK(run({"isometry", data("bad_dim.json")}).code == cli::kInputError);
    CHECK(run({"isometry", "/nonexistent.json"}).code == cli::kInputError);
}

TEST_CASE("projection commands")
{
    const auto p = run({"check-projection", data("three_average.json")});
    CHECK(p.code == cli::kOk);
    CHECK(p.has("idempotent = true"));
    CHECK(p.has("rank = 1"));
    CHECK(run({"check-projection", data("pencil_c3.json")}).code == cli::kNegative);

    const auto pw = run({"pairwise", "--lambda", "1/2", "--norm", data("star_norm.json"), data("three_average.json")});
    CHECK(pw.code == cli::kNegative);
    CHECK(pw.has("pairwise.status = Falsified"));

    const auto g = run({"lambda-group", "--random-lambdas", "50", data("pair_average.json")});
    CHECK(g.code == cli::kOk);
    CHECK(g.has("classification = FiniteCyclic"));
    CHECK(g.has("order = 2"));
    CHECK(g.has("random_falsified = 50"));
}

TEST_CASE("spectral and synthesis commands")
{
    const auto s = run({"spectral", "--order", "3", data("three_cycle_tail.json")});
    CHECK(s.code == cli::kOk);
    const auto y = run({"dft-synthesize", "--order", "3", "--subset", "0", data("three_cycle_tail.json")});
    CHECK(y.code == cli::kOk);
    CHECK(y.has("z = (0.333333333333333, 0.333333333333333, 0.333333333333333)"));
    CHECK(y.has("idempotent = true"));
    CHECK(run({"spectral", "--order", "2", data("three_cycle_tail.json")}).code == cli::kInputError);
}

TEST_CASE("wco-classify")
{
    const auto a = run({"wco-classify", "--lambda", "1/2", data("swap_wco.json")});
    CHECK(a.code == cli::kOk);
    CHECK(a.has("case = ReflectionAverage"));
    const auto b = run({"wco-classify", "--lambda", "1/4", data("swap_wco.json")});
    CHECK(b.code == cli::kNegative);
    CHECK(b.has("case = NotAGbp"));
    CHECK(b.has("failure.residual = 1.4142135623731"));
}

TEST_CASE("repro")
{
    const auto r = run({"repro", "2.6"});
    CHECK(r.code == cli::kOk);
    CHECK(r.has("all_pass = true"));
    CHECK(r.out.find("= FAIL") == std::string::npos);
    CHECK(run({"repro", "9.9"}).code == cli::kInputError);
}

TEST_CASE("reports echo seed and tolerance")
{
    const auto r = run({"--seed", "42", "--tol", "1e-9", "--samples", "77", "isometry", data("pencil_c3.json")});
    CHECK(r.has("seed = 42"));
    CHECK(r.has("tol = 1e-09"));
    CHECK(r.has("samples = 77"));
    CHECK(run({"--tol", "2", "isometry", data("pencil_c3.json")}).code == cli::kInputError);
}

TEST_CASE("usage errors")
{
    CHECK(run({}).code == cli::kInputError);
    CHECK(run({"frobnicate"}).code == cli::kInputError);
    CHECK(run({"reflect", data("pencil_c3.json")}).code == cli::kInputError);
    CHECK(run({"--help"}).code == cli::kOk);
}
