#pragma once

#include <array>
#include <cstddef>

#include "qtomo/cmatrix.hpp"

namespace qtomo {

inline constexpr std::size_t kNumSingles = 6;
inline constexpr std::size_t kNumPairs = 36;

/// Single-qubit basis labels in measurement order.
inline constexpr std::array<char, kNumSingles> kBasisLabels{'H', 'V', 'A', 'D', 'L', 'R'};

/// 4x4 Hermitian PSD trace-one matrix in the fixed product basis
/// {|HH>, |HV>, |VH>, |VV>} (first ket = signal arm, second = idler).
struct DensityMatrix {
    CMatrix mat;

    /// Checks Hermiticity (1e-9), unit trace (1e-9) and positivity
    /// (eigenvalues >= -1e-8); throws ValidationError subtypes otherwise.
    static DensityMatrix validated(CMatrix m);
};

/// The 16 real parameters w1..w16 of the left-triangular factor W.
struct CholeskyParams {
    std::array<double, 16> w{};
};

struct ProjectorSet {
    std::array<CMatrix, kNumSingles> singles; // (H, V, A, D, L, R), 2x2
    std::array<CMatrix, kNumPairs> pairs;     // pairs[pair_index(i,j)] = singles[i-1] (x) singles[j-1]
};

/// Maps a 1-based (signal, idler) projector pair to the 0-based index of
/// the flattened 36-element layout: 6*(i-1) + (j-1).
constexpr std::size_t pair_index(int i, int j) {
    return static_cast<std::size_t>(6 * (i - 1) + (j - 1));
}

/// Six polarization projectors: |H>=(1,0), |V>=(0,1), |D>=(|H>+|V>)/sqrt2,
/// |A>=(|H>-|V>)/sqrt2, |L>=(|H>+i|V>)/sqrt2, |R>=(|H>-i|V>)/sqrt2.
std::array<CMatrix, kNumSingles> single_projectors();

/// The 36 product operators, one per (signal, idler) projector pair.
std::array<CMatrix, kNumPairs> two_qubit_operators();

/// Singles and pairs computed once; safe to share read-only across threads.
const ProjectorSet& projector_set();

/// Left-triangular W from the 16 parameters:
///   diagonal (w1, w2, w3, w4), first subdiagonal (w5+iw6, w7+iw8, w9+iw10),
///   second subdiagonal (w11+iw12, w13+iw14), corner (w15+iw16).
CMatrix cholesky_factor(const CholeskyParams& p);

/// rho = W'W / Tr(W'W); physical for any parameters with Tr(W'W) > 1e-12.
/// Throws DegenerateParamsError below that.
DensityMatrix density_from_cholesky(const CholeskyParams& p);

/// Projector of (|HV> + |VH>)/sqrt2.
DensityMatrix bell_state();

/// I4 / 4.
DensityMatrix maximally_mixed();

} // namespace qtomo
