#include "qtomo/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qtomo/errors.hpp"

namespace qtomo {

namespace {

constexpr double kHermTol = 1e-9;     // max entrywise |a - a'| accepted as Hermitian
constexpr double kOffDiagTol = 1e-12; // Jacobi stop: off-diagonal Frobenius norm
constexpr int kMaxSweeps = 100;
constexpr double kPsdTol = 1e-8;      // eigenvalues in [-kPsdTol, 0) are clamped

void require_square(const CMatrix& a, const char* what) {
    if (a.rows() != a.cols())
        throw NonSquareError(std::string(what) + ": matrix is not square");
}

} // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<Complex> entries)
    : rows_(rows), cols_(cols), entries_(entries) {
    if (entries_.size() != rows * cols)
        throw ValidationError("CMatrix: entry count does not match dimensions");
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            out(c, r) = std::conj((*this)(r, c));
    return out;
}

CMatrix CMatrix::conjugate() const {
    CMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = std::conj(entries_[i]);
    return out;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw ValidationError("CMatrix: dimension mismatch in addition");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw ValidationError("CMatrix: dimension mismatch in subtraction");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(Complex scalar) {
    for (auto& e : entries_) e *= scalar;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw ValidationError("CMatrix: dimension mismatch in product");
    CMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{}) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += ark * b(k, c);
        }
    }
    return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    if (a.empty() || b.empty()) throw ValidationError("kron: empty operand");
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return out;
}

Complex mat_trace(const CMatrix& a) {
    require_square(a, "mat_trace");
    Complex sum{};
    for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, i);
    return sum;
}

bool is_hermitian(const CMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = r; c < a.cols(); ++c)
            if (std::abs(a(r, c) - std::conj(a(c, r))) > tol) return false;
    return true;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

bool all_finite(const CMatrix& a) {
    return std::all_of(a.entries().begin(), a.entries().end(), [](const Complex& e) {
        return std::isfinite(e.real()) && std::isfinite(e.imag());
    });
}

namespace {

double off_diagonal_norm(const CMatrix& a) {
    double sum = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (r != c) sum += std::norm(a(r, c));
    return std::sqrt(sum);
}

/* One complex Jacobi rotation zeroing a(p,q). With a(p,q) = |c| e^{i phi}
 * the plane rotation
 *     U(p,p) = cos t,  U(p,q) = -e^{i phi} sin t,
 *     U(q,p) = e^{-i phi} sin t,  U(q,q) = cos t
 * applied as U' A U kills the off-diagonal pair when
 * tan 2t = 2|c| / (a_pp - a_qq); the angle is folded into [-pi/4, pi/4]. */
void jacobi_rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double ac = std::abs(apq);
    if (ac == 0.0) return;

    const double phi = std::arg(apq);
    double theta = 0.5 * std::atan2(2.0 * ac, a(p, p).real() - a(q, q).real());
    if (theta > std::numbers::pi / 4.0) theta -= std::numbers::pi / 2.0;
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    const Complex e = std::polar(1.0, phi);
    const std::size_t n = a.rows();

    // columns p, q of A (right multiplication by U)
    for (std::size_t r = 0; r < n; ++r) {
        const Complex ap = a(r, p);
        const Complex aq = a(r, q);
        a(r, p) = cs * ap + std::conj(e) * sn * aq;
        a(r, q) = -e * sn * ap + cs * aq;
    }
    // rows p, q of A (left multiplication by U')
    for (std::size_t c = 0; c < n; ++c) {
        const Complex bp = a(p, c);
        const Complex bq = a(q, c);
        a(p, c) = cs * bp + e * sn * bq;
        a(q, c) = -std::conj(e) * sn * bp + cs * bq;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t r = 0; r < n; ++r) {
        const Complex vp = v(r, p);
        const Complex vq = v(r, q);
        v(r, p) = cs * vp + std::conj(e) * sn * vq;
        v(r, q) = -e * sn * vp + cs * vq;
    }
}

} // namespace

HermitianEig hermitian_eig(const CMatrix& input) {
    require_square(input, "hermitian_eig");
    const std::size_t n = input.rows();
    if (!is_hermitian(input, kHermTol))
        throw NotHermitianError("hermitian_eig: input is not Hermitian within 1e-9");

    // Work on an exactly Hermitian copy so rounding in the caller cannot bias
    // the rotations.
    CMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            a(r, c) = 0.5 * (input(r, c) + std::conj(input(c, r)));

    CMatrix v = CMatrix::identity(n);
    bool converged = off_diagonal_norm(a) < kOffDiagTol;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
        converged = off_diagonal_norm(a) < kOffDiagTol;
    }
    if (!converged)
        throw ConvergenceError("hermitian_eig: Jacobi sweeps did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    HermitianEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        out.eigenvalues[c] = a(order[c], order[c]).real();
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = v(r, order[c]);
    }
    return out;
}

CMatrix sqrt_psd(const CMatrix& a) {
    HermitianEig eig = hermitian_eig(a);
    const std::size_t n = a.rows();
    std::vector<double> roots(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lambda = eig.eigenvalues[i];
        if (lambda < -kPsdTol)
            throw NotPsdError("sqrt_psd: eigenvalue below -1e-8");
        roots[i] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    }
    const CMatrix& v = eig.eigenvectors;
    CMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            Complex sum{};
            for (std::size_t k = 0; k < n; ++k) sum += v(r, k) * roots[k] * std::conj(v(c, k));
            out(r, c) = sum;
        }
    return out;
}

} // namespace qtomo
