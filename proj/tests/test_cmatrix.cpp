#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <qtomo/cmatrix.hpp>
#include <qtomo/errors.hpp>

#include "support/generators.hpp"

using namespace qtomo;
using qtest::random_hermitian;
using qtest::random_matrix;
using qtest::random_psd;

namespace {

const Complex kI{0.0, 1.0};

CMatrix pauli_y() {
    return CMatrix(2, 2, {0.0, -kI, kI, 0.0});
}

CMatrix diag4(double a, double b, double c, double d) {
    CMatrix m(4, 4);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

// Projector of (|HV> + |VH>)/sqrt2, written out by hand.
CMatrix bell_projector() {
    CMatrix m(4, 4);
    m(1, 1) = m(1, 2) = m(2, 1) = m(2, 2) = 0.5;
    return m;
}

void check_close(const CMatrix& a, const CMatrix& b, double tol) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    CHECK(max_abs_diff(a, b) <= tol);
}

} // namespace

TEST_CASE("kron identity case") {
    check_close(kron(CMatrix::identity(2), CMatrix::identity(2)), CMatrix::identity(4), 0.0);
}

TEST_CASE("kron of H and V projectors follows the basis ordering") {
    CMatrix ph(2, 2, {1.0, 0.0, 0.0, 0.0});
    CMatrix pv(2, 2, {0.0, 0.0, 0.0, 1.0});
    check_close(kron(ph, pv), diag4(0, 1, 0, 0), 0.0);
}

TEST_CASE("kron of sigma_y with itself") {
    // Expanded by hand: nonzero entries sit on the anti-diagonal.
    CMatrix expected(4, 4);
    expected(0, 3) = -1.0;
    expected(1, 2) = 1.0;
    expected(2, 1) = 1.0;
    expected(3, 0) = -1.0;
    check_close(kron(pauli_y(), pauli_y()), expected, 1e-15);
}

TEST_CASE("kron entry formula on rectangular inputs") {
    std::mt19937_64 gen(11);
    CMatrix a = random_matrix(gen, 2, 3);
    CMatrix b = random_matrix(gen, 3, 2);
    CMatrix k = kron(a, b);
    REQUIRE(k.rows() == 6);
    REQUIRE(k.cols() == 6);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t p = 0; p < 3; ++p)
                for (std::size_t q = 0; q < 2; ++q)
                    CHECK(std::abs(k(i * 3 + p, j * 2 + q) - a(i, j) * b(p, q)) == 0.0);
}

TEST_CASE("kron is bilinear") {
    std::mt19937_64 gen(12);
    for (int rep = 0; rep < 50; ++rep) {
        CMatrix a = random_matrix(gen, 2, 2);
        CMatrix b = random_matrix(gen, 2, 2);
        Complex alpha(qtest::uniform(gen, -2.0, 2.0), qtest::uniform(gen, -2.0, 2.0));
        check_close(kron(a * alpha, b), kron(a, b) * alpha, 1e-12);
        check_close(kron(a, b * alpha), kron(a, b) * alpha, 1e-12);
    }
}

TEST_CASE("trace is multiplicative over kron") {
    std::mt19937_64 gen(13);
    for (int rep = 0; rep < 100; ++rep) {
        CMatrix a = random_matrix(gen, 2, 2);
        CMatrix b = random_matrix(gen, 3, 3);
        Complex lhs = mat_trace(kron(a, b));
        Complex rhs = mat_trace(a) * mat_trace(b);
        CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
}

TEST_CASE("mat_trace basics") {
    CHECK(mat_trace(CMatrix::identity(4)) == Complex(4.0));
    CHECK(std::abs(mat_trace(diag4(0.25, 0.25, 0.25, 0.25)) - Complex(1.0)) == 0.0);
    CHECK_THROWS_AS(mat_trace(CMatrix(2, 3)), NonSquareError);
}

TEST_CASE("hermitian_eig on a diagonal matrix sorts descending") {
    auto eig = hermitian_eig(diag4(3, 1, 2, 0));
    REQUIRE(eig.eigenvalues.size() == 4);
    CHECK(eig.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[3] == doctest::Approx(0.0).epsilon(1e-12));
    // Columns of a diagonal input are basis vectors up to permutation.
    for (std::size_t c = 0; c < 4; ++c) {
        double colmax = 0.0;
        for (std::size_t r = 0; r < 4; ++r) colmax = std::max(colmax, std::abs(eig.eigenvectors(r, c)));
        CHECK(colmax == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("hermitian_eig on the identity") {
    auto eig = hermitian_eig(CMatrix::identity(4));
    for (double v : eig.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig on a rank-one projector") {
    auto eig = hermitian_eig(bell_projector());
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(eig.eigenvalues[i]) <= 1e-10);
    // Top eigenvector proportional to (0, 1, 1, 0)/sqrt2.
    Complex overlap = (eig.eigenvectors(1, 0) + eig.eigenvectors(2, 0)) / std::sqrt(2.0);
    CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    CMatrix m(2, 2, {0.0, 1.0, 0.0, 0.0});
    CHECK_THROWS_AS(hermitian_eig(m), NotHermitianError);
    CHECK_THROWS_AS(hermitian_eig(CMatrix(2, 3)), NonSquareError);
}

TEST_CASE("hermitian_eig reconstruction and unitarity on random input") {
    std::mt19937_64 gen(14);
    for (int rep = 0; rep < 200; ++rep) {
        CMatrix h = random_hermitian(gen, 4);
        auto eig = hermitian_eig(h);
        const CMatrix& v = eig.eigenvectors;
        check_close(v.adjoint() * v, CMatrix::identity(4), 1e-8);
        CMatrix lambda(4, 4);
        for (std::size_t i = 0; i < 4; ++i) lambda(i, i) = eig.eigenvalues[i];
        check_close(v * lambda * v.adjoint(), h, 1e-8);
        for (std::size_t i = 1; i < 4; ++i) CHECK(eig.eigenvalues[i - 1] >= eig.eigenvalues[i]);
    }
}

TEST_CASE("sqrt_psd on diagonal matrices") {
    check_close(sqrt_psd(diag4(4, 1, 0, 9)), diag4(2, 1, 0, 3), 1e-12);
    check_close(sqrt_psd(CMatrix::identity(4) * Complex(0.25)),
                CMatrix::identity(4) * Complex(0.5), 1e-12);
}

TEST_CASE("sqrt_psd squares back to the input") {
    // Includes the evenly mixed Bell combination as a spot check.
    CMatrix werner = bell_projector() * Complex(0.5) + CMatrix::identity(4) * Complex(0.125);
    CMatrix root = sqrt_psd(werner);
    check_close(root * root, werner, 1e-7);

    std::mt19937_64 gen(15);
    for (int rep = 0; rep < 1000; ++rep) {
        CMatrix a = random_psd(gen, 4);
        CMatrix r = sqrt_psd(a);
        check_close(r * r, a, 1e-7);
        CHECK(is_hermitian(r, 1e-9));
    }
}

TEST_CASE("sqrt_psd clamps jitter-scale negative eigenvalues") {
    CMatrix nearly = diag4(1.0, -5e-9, 0.0, 0.5);
    CMatrix root = sqrt_psd(nearly);
    CHECK(std::abs(root(1, 1)) == 0.0);
    CHECK(root(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("sqrt_psd rejects indefinite matrices") {
    CHECK_THROWS_AS(sqrt_psd(diag4(1, -1, 1, 1)), NotPsdError);
}
