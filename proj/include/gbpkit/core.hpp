// Dense complex linear algebra shared by every gbpkit module.
//
// Operators are plain Eigen matrices. The free functions below are templated
// on the Eigen expression type so they accept blocks, products and maps
// without forcing a temporary.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbpkit {

using Scalar = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

template <typename Real>
using OperatorOf = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorOf = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is called on input that violates its documented
/// precondition (a non-idempotent P, an operator without the required order).
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Absolute entrywise tolerance. All comparisons in the library use the max
/// norm of the difference against `eps`.
class Tolerance {
public:
    static constexpr double kDefault = 1e-10;

    constexpr Tolerance() = default;
    explicit Tolerance(double eps) : eps_(eps)
    {
        if (!(eps > 0.0 && eps < 1.0)) {
            throw std::invalid_argument("tolerance must lie in (0, 1), got " + std::to_string(eps));
        }
    }

    constexpr double eps() const { return eps_; }

private:
    double eps_ = kDefault;
};

// ---------------------------------------------------------------------------
// basic helpers

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m)
{
    if (m.size() == 0) {
        return 0.0;
    }
    return m.cwiseAbs().maxCoeff();
}

template <typename DerivedA, typename DerivedB>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b, Tolerance tol)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    return max_abs(a - b) <= tol.eps();
}

inline bool approx_equal(Scalar a, Scalar b, Tolerance tol) { return std::abs(a - b) <= tol.eps(); }

inline Operator identity(Index dim) { return Operator::Identity(dim, dim); }

inline Vector basis_vector(Index dim, Index i)
{
    Vector e = Vector::Zero(dim);
    e(i) = 1.0;
    return e;
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what)
{
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw DimensionError(std::string(what) + ": operator must be square with dim >= 1, got "
                             + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

// ---------------------------------------------------------------------------
// products and powers

template <typename DerivedA, typename DerivedX>
Vector mat_apply(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedX>& x)
{
    if (a.cols() != x.rows() || x.cols() != 1) {
        throw DimensionError("mat_apply: operator has " + std::to_string(a.cols()) + " columns, vector has "
                             + std::to_string(x.rows()) + " entries");
    }
    return a * x;
}

template <typename DerivedA, typename DerivedB>
Operator mat_mul(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    if (a.cols() != b.rows()) {
        throw DimensionError("mat_mul: inner dimensions differ (" + std::to_string(a.cols()) + " vs "
                             + std::to_string(b.rows()) + ")");
    }
    return a * b;
}

/// A^n by binary exponentiation; A^0 = I.
template <typename Derived>
Operator mat_pow(const Eigen::MatrixBase<Derived>& a, unsigned n)
{
    require_square(a, "mat_pow");
    Operator result = identity(a.rows());
    Operator base = a;
    while (n > 0) {
        if (n & 1u) {
            result = result * base;
        }
        n >>= 1u;
        if (n > 0) {
            base = base * base;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// structural predicates

template <typename Derived>
bool is_idempotent(const Eigen::MatrixBase<Derived>& p, Tolerance tol = {})
{
    if (p.rows() != p.cols()) {
        return false;
    }
    const Operator pp = p;
    return max_abs(pp * pp - pp) <= tol.eps();
}

template <typename Derived>
bool is_involution(const Eigen::MatrixBase<Derived>& r, Tolerance tol = {})
{
    if (r.rows() != r.cols()) {
        return false;
    }
    const Operator rr = r;
    return max_abs(rr * rr - identity(rr.rows())) <= tol.eps();
}

/// Outcome of a finite-order search. `residuals[i-1]` is ||T^i - I||_max.
struct OrderCertificate {
    std::optional<unsigned> order;
    unsigned max_order = 0;
    std::vector<double> residuals;

    bool found() const { return order.has_value(); }
};

template <typename Derived>
OrderCertificate detect_order(const Eigen::MatrixBase<Derived>& t, unsigned max_order, Tolerance tol = {})
{
    require_square(t, "detect_order");
    if (max_order < 1) {
        throw std::invalid_argument("detect_order: max_order must be >= 1");
    }
    OrderCertificate cert;
    cert.max_order = max_order;
    const Operator id = identity(t.rows());
    Operator power = t;
    for (unsigned i = 1; i <= max_order; ++i) {
        const double r = max_abs(power - id);
        cert.residuals.push_back(r);
        if (r <= tol.eps()) {
            cert.order = i;
            break;
        }
        power = power * t;
    }
    return cert;
}

// ---------------------------------------------------------------------------
// range / kernel extraction

namespace detail {

// Greedy column selection with pivoting on the largest residual norm after
// projecting out the columns already chosen (modified Gram-Schmidt). Returns
// indices of the selected columns in selection order.
template <typename Derived>
std::vector<Index> independent_columns(const Eigen::MatrixBase<Derived>& m, double threshold)
{
    Operator work = m;
    std::vector<Index> chosen;
    std::vector<bool> used(static_cast<std::size_t>(work.cols()), false);
    const Index limit = std::min(work.rows(), work.cols());
    while (static_cast<Index>(chosen.size()) < limit) {
        Index best = -1;
        double best_norm = threshold;
        for (Index j = 0; j < work.cols(); ++j) {
            if (used[static_cast<std::size_t>(j)]) {
                continue;
            }
            const double n = work.col(j).norm();
            if (n > best_norm) {
                best_norm = n;
                best = j;
            }
        }
        if (best < 0) {
            break;
        }
        used[static_cast<std::size_t>(best)] = true;
        chosen.push_back(best);
        const Vector q = work.col(best) / best_norm;
        for (Index j = 0; j < work.cols(); ++j) {
            if (!used[static_cast<std::size_t>(j)]) {
                work.col(j) -= q * q.dot(work.col(j));
            }
        }
    }
    return chosen;
}

template <typename Derived>
std::vector<Vector> column_basis(const Eigen::MatrixBase<Derived>& m, Tolerance tol)
{
    const double threshold = tol.eps() * static_cast<double>(m.rows());
    std::vector<Vector> basis;
    for (Index j : independent_columns(m, threshold)) {
        basis.emplace_back(m.col(j));
    }
    return basis;
}

} // namespace detail

/// Basis of Range(P) made of columns of P. Throws PreconditionError unless P
/// is idempotent within `tol`.
template <typename Derived>
std::vector<Vector> range_basis(const Eigen::MatrixBase<Derived>& p, Tolerance tol = {})
{
    require_square(p, "range_basis");
    if (!is_idempotent(p, tol)) {
        throw PreconditionError("range_basis: operator is not idempotent");
    }
    return detail::column_basis(p, tol);
}

/// Basis of Ker(P) made of columns of I - P.
template <typename Derived>
std::vector<Vector> kernel_basis(const Eigen::MatrixBase<Derived>& p, Tolerance tol = {})
{
    require_square(p, "kernel_basis");
    if (!is_idempotent(p, tol)) {
        throw PreconditionError("kernel_basis: operator is not idempotent");
    }
    const Operator complement = identity(p.rows()) - p;
    return detail::column_basis(complement, tol);
}

} // namespace gbpkit
