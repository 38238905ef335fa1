#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qtomo {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. Everything in this project is 2x2 or
/// 4x4; the class stays generic for correctness, not for performance.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<Complex> entries);

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return entries_.empty(); }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Complex>& entries() const { return entries_; }

    CMatrix adjoint() const;
    CMatrix conjugate() const;

    CMatrix& operator+=(const CMatrix& other);
    CMatrix& operator-=(const CMatrix& other);
    CMatrix& operator*=(Complex scalar);

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
    friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

/// Kronecker product. Entry [(i*b.rows+p),(j*b.cols+q)] = a(i,j)*b(p,q).
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Sum of diagonal entries. Throws NonSquareError.
Complex mat_trace(const CMatrix& a);

struct HermitianEig {
    std::vector<double> eigenvalues; // sorted descending
    CMatrix eigenvectors;            // columns, same order as eigenvalues
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Input must be Hermitian within 1e-9 entrywise; converges when
/// the off-diagonal Frobenius norm drops below 1e-12 (at most 100 sweeps).
/// Throws NotHermitianError or ConvergenceError.
HermitianEig hermitian_eig(const CMatrix& a);

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-1e-8, 0) are clamped to zero; anything below -1e-8 throws NotPsdError.
CMatrix sqrt_psd(const CMatrix& a);

bool is_hermitian(const CMatrix& a, double tol);

/// max_ij |a(i,j) - b(i,j)|
double max_abs_diff(const CMatrix& a, const CMatrix& b);

bool all_finite(const CMatrix& a);

} // namespace qtomo
