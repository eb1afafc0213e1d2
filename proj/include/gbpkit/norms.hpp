// Norms on C^n and a three-valued isometry decision procedure.

#pragma once

#include "gbpkit/core.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gbpkit {

class InvalidNorm : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Description of a norm. Wrapper norms own their base through a shared
/// pointer so specs stay cheap to copy and immutable once built.
///
/// OrbitMax   ||x|| = max_{0<=j<order} base(G^j x)   for a generator G of order `order`
/// SumRenorm  ||x|| = base(x) + base(R x)            for an involution R
class NormSpec {
public:
    struct Lp {
        double p;
    };
    struct Sup {};
    struct OrbitMax {
        std::shared_ptr<const NormSpec> base;
        Operator generator;
        unsigned order;
    };
    struct SumRenorm {
        std::shared_ptr<const NormSpec> base;
        Operator reflector;
    };
    using Kind = std::variant<Lp, Sup, OrbitMax, SumRenorm>;

    static constexpr int kMaxDepth = 2;

    static NormSpec lp(double p);
    static NormSpec sup();
    static NormSpec orbit_max(NormSpec base, Operator generator, unsigned order, Tolerance tol = {});
    static NormSpec sum_renorm(NormSpec base, Operator reflector, Tolerance tol = {});

    const Kind& kind() const { return kind_; }

    /// Number of wrapper layers (0 for lp/sup).
    int depth() const;

    /// Dimension imposed by an embedded operator, if any.
    std::optional<Index> required_dim() const;

    std::string describe() const;

    bool is_lp(double p) const;
    bool is_sup() const { return std::holds_alternative<Sup>(kind_); }

    friend bool operator==(const NormSpec& a, const NormSpec& b);

private:
    explicit NormSpec(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

double eval_norm(const NormSpec& spec, const Vector& x);

enum class VerdictStatus { Certified, Falsified, Unknown };
enum class VerdictMethod { Unitary, PermDiag, OrbitStructural, FiberwiseComposition, Sampling };

const char* to_string(VerdictStatus s);
const char* to_string(VerdictMethod m);

struct IsometryVerdict {
    VerdictStatus status = VerdictStatus::Unknown;
    std::optional<Vector> witness;  // present iff Falsified
    VerdictMethod method = VerdictMethod::Sampling;
    std::size_t samples_used = 0;

    bool certified() const { return status == VerdictStatus::Certified; }
    bool falsified() const { return status == VerdictStatus::Falsified; }
};

/// Sampling parameters for the non-structural branch of the isometry test.
struct SamplingBudget {
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
};

/// (S x)_i = phases[i] * x_{tau[i]}
struct PermDiagIsometry {
    std::vector<Index> tau;
    std::vector<Scalar> phases;
};

std::optional<PermDiagIsometry> decompose_perm_diag(const Operator& t, Tolerance tol = {});

Operator to_operator(const PermDiagIsometry& s);

/// Deterministic points on the unit sphere of `spec`: the signed basis
/// vectors +-e_1, +-e_2, ... first, then normalized complex Gaussian draws.
std::vector<Vector> sample_unit_sphere(const NormSpec& spec, Index dim, std::uint64_t seed, std::size_t count);

IsometryVerdict isometry_verdict(const Operator& t, const NormSpec& spec, const SamplingBudget& budget = {},
                                 Tolerance tol = {});

/// |‖T x‖ - ‖x‖| for one point; used to audit falsification witnesses.
double isometry_defect(const Operator& t, const NormSpec& spec, const Vector& x);

} // namespace gbpkit
