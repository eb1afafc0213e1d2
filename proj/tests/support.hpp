// Test-only generators and brute-force oracles. Nothing here calls the
// library routine it is used to check.

#pragma once

#include "gbpkit/core.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

namespace gbpkit::testing {

using Rng = std::mt19937_64;

inline Scalar unit_phase(Rng& rng)
{
    std::uniform_real_distribution<double> turn(0.0, 1.0);
    return std::polar(1.0, 2.0 * std::numbers::pi * turn(rng));
}

inline Scalar root(long long p, long long q) { return std::polar(1.0, 2.0 * std::numbers::pi * double(p) / double(q)); }

inline Operator random_matrix(Index n, Rng& rng, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Operator m(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const double re = g(rng);
            const double im = g(rng);
            m(i, j) = scale * Scalar(re, im);
        }
    }
    return m;
}

inline Vector random_vector(Index n, Rng& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) {
        const double re = g(rng);
        const double im = g(rng);
        v(i) = Scalar(re, im);
    }
    return v;
}

/// Oblique (generally non-orthogonal) idempotent S D S^-1 of the given rank,
/// with S a moderate perturbation of I so the entries stay O(1).
inline Operator random_idempotent(Index n, Index rank, Rng& rng)
{
    const Operator s = identity(n) + random_matrix(n, rng, 0.35 / std::sqrt(double(n)));
    Operator d = Operator::Zero(n, n);
    for (Index i = 0; i < rank; ++i) {
        d(i, i) = 1.0;
    }
    return s * d * s.inverse();
}

/// Orthogonal projection onto a random subspace of the given rank.
inline Operator random_orthogonal_projection(Index n, Index rank, Rng& rng)
{
    Eigen::HouseholderQR<Operator> qr(random_matrix(n, rng));
    const Operator q = qr.householderQ() * Operator::Identity(n, n);
    const Operator u = q.leftCols(rank);
    return u * u.adjoint();
}

inline std::vector<Index> random_permutation(Index n, Rng& rng)
{
    std::vector<Index> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), Index{0});
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

/// Matrix of x -> (x_{tau(0)}, x_{tau(1)}, ...).
inline Operator permutation_matrix(const std::vector<Index>& tau)
{
    const auto n = static_cast<Index>(tau.size());
    Operator m = Operator::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        m(i, tau[static_cast<std::size_t>(i)]) = 1.0;
    }
    return m;
}

/// lcm of the cycle lengths, by walking each cycle.
inline long long cycle_lcm(const std::vector<Index>& tau)
{
    std::vector<bool> seen(tau.size(), false);
    long long l = 1;
    for (std::size_t start = 0; start < tau.size(); ++start) {
        if (seen[start]) {
            continue;
        }
        long long len = 0;
        for (std::size_t i = start; !seen[i]; i = static_cast<std::size_t>(tau[i])) {
            seen[i] = true;
            ++len;
        }
        l = std::lcm(l, len);
    }
    return l;
}

/// Permutation-times-phase operator with T^k = I and exact order k.
/// With `full_spectrum` it contains a k-cycle whose phases multiply to 1, so
/// every k-th root of unity is an eigenvalue; the rest of the space is filled
/// with random cycles of length dividing k. Requires dim >= k when
/// full_spectrum is set.
inline Operator random_finite_order(Index dim, unsigned k, bool full_spectrum, Rng& rng)
{
    std::vector<unsigned> divisors;
    for (unsigned d = 1; d <= k; ++d) {
        if (k % d == 0 && Index(d) <= dim) {
            divisors.push_back(d);
        }
    }
    for (;;) {
        std::vector<unsigned> lengths;
        Index used = 0;
        if (full_spectrum) {
            lengths.push_back(k);
            used = k;
        }
        while (used < dim) {
            std::vector<unsigned> fit;
            for (unsigned d : divisors) {
                if (used + Index(d) <= dim) {
                    fit.push_back(d);
                }
            }
            const unsigned len = fit[std::uniform_int_distribution<std::size_t>(0, fit.size() - 1)(rng)];
            lengths.push_back(len);
            used += len;
        }
        // cycle c of length L carries phases with product mu, mu^(k/L) = 1
        Operator t = Operator::Zero(dim, dim);
        Index offset = 0;
        bool first = true;
        for (unsigned len : lengths) {
            const unsigned m = k / len;
            Scalar mu = 1.0;
            if (!(full_spectrum && first)) {
                mu = root(std::uniform_int_distribution<unsigned>(0, m - 1)(rng), m);
            }
            first = false;
            Scalar product = 1.0;
            for (unsigned i = 0; i < len; ++i) {
                Scalar phase = (i + 1 < len) ? unit_phase(rng) : mu / product;
                product *= phase;
                t(offset + i, offset + (i + 1) % len) = phase;
            }
            offset += len;
        }
        const Operator relabel = permutation_matrix(random_permutation(dim, rng));
        const Operator out = relabel * t * relabel.transpose();
        // exact order check by brute force
        Operator power = out;
        unsigned order = 1;
        while (order < k && (power - identity(dim)).cwiseAbs().maxCoeff() > 1e-9) {
            power = power * out;
            ++order;
        }
        if (order == k && (power - identity(dim)).cwiseAbs().maxCoeff() <= 1e-9) {
            return out;
        }
    }
}

/// sum_i z_i T^i by explicit accumulation.
inline Operator brute_force_sum(const Operator& t, const Vector& z)
{
    Operator acc = Operator::Zero(t.rows(), t.cols());
    Operator power = identity(t.rows());
    for (Index i = 0; i < z.size(); ++i) {
        acc += z(i) * power;
        power = t * power;
    }
    return acc;
}

inline double idempotency_defect(const Operator& p) { return (p * p - p).cwiseAbs().maxCoeff(); }

} // namespace gbpkit::testing
