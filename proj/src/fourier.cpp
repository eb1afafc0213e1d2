#include "gbpkit/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gbpkit {

namespace {

void require_length(Index n, const char* what)
{
    if (n < 1) {
        throw DimensionError(std::string(what) + ": empty coefficient vector");
    }
}

void require_order(const Operator& t, unsigned k, Tolerance tol, const char* what)
{
    require_square(t, what);
    if (k < 1) {
        throw std::invalid_argument(std::string(what) + ": order must be >= 1");
    }
    if (!approx_equal(mat_pow(t, k), identity(t.rows()), tol)) {
        throw PreconditionError(std::string(what) + ": T^" + std::to_string(k) + " differs from I");
    }
}

} // namespace

Scalar root_of_unity_power(unsigned k, long long m)
{
    const auto kk = static_cast<long long>(k);
    long long r = m % kk;
    if (r < 0) {
        r += kk;
    }
    if (r == 0) {
        return {1.0, 0.0};
    }
    if (2 * r == kk) {
        return {-1.0, 0.0};
    }
    if (4 * r == kk) {
        return {0.0, -1.0};
    }
    if (4 * r == 3 * kk) {
        return {0.0, 1.0};
    }
    return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(kk));
}

Operator dft_matrix(unsigned k)
{
    require_length(k, "dft_matrix");
    Operator w(k, k);
    for (unsigned i = 0; i < k; ++i) {
        for (unsigned j = 0; j < k; ++j) {
            w(i, j) = root_of_unity_power(k, static_cast<long long>(i) * j);
        }
    }
    return w;
}

Operator idft_matrix(unsigned k)
{
    require_length(k, "idft_matrix");
    Operator w(k, k);
    for (unsigned i = 0; i < k; ++i) {
        for (unsigned j = 0; j < k; ++j) {
            w(i, j) = std::conj(root_of_unity_power(k, static_cast<long long>(i) * j)) / static_cast<double>(k);
        }
    }
    return w;
}

Vector dft(const Vector& z)
{
    require_length(z.size(), "dft");
    const auto k = static_cast<unsigned>(z.size());
    Vector out = Vector::Zero(k);
    for (unsigned m = 0; m < k; ++m) {
        for (unsigned n = 0; n < k; ++n) {
            out(m) += z(n) * root_of_unity_power(k, static_cast<long long>(m) * n);
        }
    }
    return out;
}

Vector idft(const Vector& alpha)
{
    require_length(alpha.size(), "idft");
    const auto k = static_cast<unsigned>(alpha.size());
    Vector out = Vector::Zero(k);
    for (unsigned n = 0; n < k; ++n) {
        for (unsigned m = 0; m < k; ++m) {
            out(n) += alpha(m) * std::conj(root_of_unity_power(k, static_cast<long long>(m) * n));
        }
    }
    return out / static_cast<double>(k);
}

Vector indicator(unsigned k, const Subset& s)
{
    Vector d = Vector::Zero(k);
    for (unsigned i : s) {
        if (i >= k) {
            throw std::invalid_argument("indicator: index " + std::to_string(i) + " outside {0.." + std::to_string(k - 1)
                                        + "}");
        }
        d(i) = 1.0;
    }
    return d;
}

std::optional<Subset> decide_projection_coeffs(const Vector& z, Tolerance tol)
{
    const Vector alpha = dft(z);
    Subset s;
    for (Index i = 0; i < alpha.size(); ++i) {
        if (std::abs(alpha(i) - Scalar(1.0)) <= tol.eps()) {
            s.push_back(static_cast<unsigned>(i));
        } else if (std::abs(alpha(i)) > tol.eps()) {
            return std::nullopt;
        }
    }
    return s;
}

Operator coefficient_sum(const Operator& t, const Vector& z)
{
    require_square(t, "coefficient_sum");
    Operator sum = Operator::Zero(t.rows(), t.cols());
    Operator power = identity(t.rows());
    for (Index i = 0; i < z.size(); ++i) {
        sum += z(i) * power;
        power = power * t;
    }
    return sum;
}

Operator SpectralDecomposition::recombine(const Vector& weights) const
{
    if (weights.size() != static_cast<Index>(parts.size()) || parts.empty()) {
        throw DimensionError("recombine: expected " + std::to_string(parts.size()) + " weights");
    }
    Operator sum = Operator::Zero(parts.front().rows(), parts.front().cols());
    for (std::size_t j = 0; j < parts.size(); ++j) {
        sum += weights(static_cast<Index>(j)) * parts[j];
    }
    return sum;
}

SpectralDecomposition spectral_projections(const Operator& t, unsigned k, Tolerance tol)
{
    require_order(t, k, tol, "spectral_projections");
    const Index n = t.rows();
    std::vector<Operator> powers;
    powers.reserve(k);
    powers.push_back(identity(n));
    for (unsigned m = 1; m < k; ++m) {
        powers.push_back(powers.back() * t);
    }
    SpectralDecomposition out;
    out.k = k;
    for (unsigned j = 0; j < k; ++j) {
        Operator q = Operator::Zero(n, n);
        for (unsigned m = 0; m < k; ++m) {
            q += root_of_unity_power(k, -static_cast<long long>(j) * m) * powers[m];
        }
        out.parts.push_back(q / static_cast<double>(k));
    }
    return out;
}

SynthesizedProjection synthesize_projection(const Operator& t, unsigned k, const Subset& s, Tolerance tol)
{
    Subset sorted = s;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("synthesize_projection: subset has repeated indices");
    }
    const auto spectral = spectral_projections(t, k, tol);
    const Vector delta = indicator(k, sorted);
    return {spectral.recombine(delta), idft(delta)};
}

} // namespace gbpkit
