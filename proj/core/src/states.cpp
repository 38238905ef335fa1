#include "qtomo/states.hpp"

#include <cmath>

#include "qtomo/errors.hpp"

namespace qtomo {

namespace {

constexpr double kHermTol = 1e-9;
constexpr double kTraceTol = 1e-9;
constexpr double kPsdTol = 1e-8;
constexpr double kNormFloor = 1e-12; // minimal Tr(W'W) accepted as normalizable

CMatrix ket_projector(Complex a, Complex b) {
    // |psi><psi| for |psi> = (a, b)^T
    return CMatrix(2, 2,
                   {a * std::conj(a), a * std::conj(b), b * std::conj(a), b * std::conj(b)});
}

} // namespace

DensityMatrix DensityMatrix::validated(CMatrix m) {
    if (m.rows() != 4 || m.cols() != 4)
        throw NonSquareError("DensityMatrix: expected a 4x4 matrix");
    if (!is_hermitian(m, kHermTol))
        throw NotHermitianError("DensityMatrix: matrix is not Hermitian within 1e-9");
    if (std::abs(mat_trace(m).real() - 1.0) > kTraceTol)
        throw ValidationError("DensityMatrix: trace differs from one by more than 1e-9");
    HermitianEig eig = hermitian_eig(m);
    for (double lambda : eig.eigenvalues)
        if (lambda < -kPsdTol)
            throw NotPsdError("DensityMatrix: eigenvalue below -1e-8");
    return DensityMatrix{std::move(m)};
}

std::array<CMatrix, kNumSingles> single_projectors() {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i{0.0, 1.0};
    return {
        ket_projector(1.0, 0.0),    // H
        ket_projector(0.0, 1.0),    // V
        ket_projector(s, -s),       // A
        ket_projector(s, s),        // D
        ket_projector(s, i * s),    // L
        ket_projector(s, -i * s),   // R
    };
}

std::array<CMatrix, kNumPairs> two_qubit_operators() {
    const auto singles = single_projectors();
    std::array<CMatrix, kNumPairs> pairs;
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j)
            pairs[pair_index(i, j)] = kron(singles[i - 1], singles[j - 1]);
    return pairs;
}

const ProjectorSet& projector_set() {
    static const ProjectorSet set{single_projectors(), two_qubit_operators()};
    return set;
}

CMatrix cholesky_factor(const CholeskyParams& p) {
    const auto& w = p.w;
    CMatrix m(4, 4);
    m(0, 0) = w[0];
    m(1, 1) = w[1];
    m(2, 2) = w[2];
    m(3, 3) = w[3];
    m(1, 0) = {w[4], w[5]};
    m(2, 1) = {w[6], w[7]};
    m(3, 2) = {w[8], w[9]};
    m(2, 0) = {w[10], w[11]};
    m(3, 1) = {w[12], w[13]};
    m(3, 0) = {w[14], w[15]};
    return m;
}

DensityMatrix density_from_cholesky(const CholeskyParams& p) {
    const CMatrix w = cholesky_factor(p);
    CMatrix g = w.adjoint() * w; // Hermitian PSD by construction
    double norm = mat_trace(g).real();
    if (!(norm > kNormFloor))
        throw DegenerateParamsError("density_from_cholesky: Tr(W'W) below 1e-12");
    g *= Complex{1.0 / norm, 0.0};
    return DensityMatrix{std::move(g)};
}

DensityMatrix bell_state() {
    CMatrix m(4, 4);
    m(1, 1) = 0.5;
    m(1, 2) = 0.5;
    m(2, 1) = 0.5;
    m(2, 2) = 0.5;
    return DensityMatrix{std::move(m)};
}

DensityMatrix maximally_mixed() {
    CMatrix m = CMatrix::identity(4);
    m *= Complex{0.25, 0.0};
    return DensityMatrix{std::move(m)};
}

} // namespace qtomo
