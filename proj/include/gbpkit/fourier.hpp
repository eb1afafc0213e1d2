// Discrete Fourier machinery over Z/k and the coefficient-level test for
// when sum_i z_i T^i is a projection, T of order k.
//
// Conventions: rho = exp(-2 pi i / k), W_k(i, j) = rho^(i j) with zero-based
// indices, DFT unnormalized, IDFT carries the 1/k.

#pragma once

#include "gbpkit/core.hpp"

#include <optional>
#include <vector>

namespace gbpkit {

/// rho^m = exp(-2 pi i m / k), with m reduced mod k before evaluation.
Scalar root_of_unity_power(unsigned k, long long m);

Operator dft_matrix(unsigned k);
Operator idft_matrix(unsigned k);

Vector dft(const Vector& z);
Vector idft(const Vector& alpha);

/// Sorted subset of {0, ..., k-1}.
using Subset = std::vector<unsigned>;

Vector indicator(unsigned k, const Subset& s);

/// S with dft(z) = delta_S, or nullopt when some DFT entry is neither 0 nor 1.
std::optional<Subset> decide_projection_coeffs(const Vector& z, Tolerance tol = {});

/// sum_i z_i T^i.
Operator coefficient_sum(const Operator& t, const Vector& z);

/// Q_0..Q_{k-1} with T = sum_j rho^j Q_j, Q_j = (1/k) sum_m rho^(-j m) T^m.
struct SpectralDecomposition {
    unsigned k = 0;
    std::vector<Operator> parts;

    Operator recombine(const Vector& weights) const;
};

SpectralDecomposition spectral_projections(const Operator& t, unsigned k, Tolerance tol = {});

struct SynthesizedProjection {
    Operator projection;
    Vector coefficients;
};

/// P = sum_{j in S} Q_j together with z = idft(delta_S).
SynthesizedProjection synthesize_projection(const Operator& t, unsigned k, const Subset& s, Tolerance tol = {});

} // namespace gbpkit
