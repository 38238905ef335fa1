#include "qtomo/metrics.hpp"

#include <cmath>
#include <numbers>

#include "qtomo/errors.hpp"

namespace qtomo {

namespace {

const CMatrix& spin_flip_operator() {
    // sigma_y (x) sigma_y; anti-diagonal (-1, 1, 1, -1)
    static const CMatrix op = [] {
        const CMatrix sy(2, 2, {0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0});
        return kron(sy, sy);
    }();
    return op;
}

} // namespace

CMatrix spin_flip(const DensityMatrix& rho) {
    const CMatrix& yy = spin_flip_operator();
    return yy * rho.mat.conjugate() * yy;
}

double concurrence(const DensityMatrix& rho) {
    const CMatrix root = sqrt_psd(rho.mat);
    const CMatrix r = sqrt_psd(root * spin_flip(rho) * root);
    HermitianEig eig = hermitian_eig(r);
    double c = 0.0;
    for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
        const double a = std::max(eig.eigenvalues[i], 0.0);
        c += i == 0 ? a : -a;
    }
    return std::max(c, 0.0);
}

double purity(const DensityMatrix& rho) {
    return mat_trace(rho.mat * rho.mat).real();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const CMatrix root = sqrt_psd(rho.mat);
    const CMatrix inner = sqrt_psd(root * sigma.mat * root);
    return mat_trace(inner).real();
}

double fidelity_bell(const DensityMatrix& rho) {
    // <psi| rho |psi> for |psi> = (0, 1, 1, 0)/sqrt2
    const auto& m = rho.mat;
    return 0.5 * (m(1, 1) + m(1, 2) + m(2, 1) + m(2, 2)).real();
}

CoincidenceCurve coincidence_curve(const DensityMatrix& rho, double n_pairs,
                                   std::size_t grid_size) {
    if (!(n_pairs > 0.0) || !std::isfinite(n_pairs))
        throw OutOfRangeError("coincidence_curve: n_pairs must be finite and positive");
    if (grid_size < 2) throw OutOfRangeError("coincidence_curve: grid_size must be >= 2");

    const CMatrix pv(2, 2, {0.0, 0.0, 0.0, 1.0});
    CoincidenceCurve curve;
    curve.n_pairs = n_pairs;
    curve.thetas.reserve(grid_size);
    curve.values.reserve(grid_size);
    for (std::size_t g = 0; g < grid_size; ++g) {
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(grid_size);
        // |theta> = (sin theta, cos theta)^T, so theta = 0 is V, pi/2 is H
        const Complex a{std::sin(theta), 0.0};
        const Complex b{std::cos(theta), 0.0};
        const CMatrix ptheta(2, 2, {a * a, a * b, b * a, b * b});
        const double value = n_pairs * mat_trace(kron(pv, ptheta) * rho.mat).real();
        curve.thetas.push_back(theta);
        curve.values.push_back(value);
    }
    return curve;
}

MeritReport merit_report(const TrialEnsemble& ensemble,
                         const std::optional<DensityMatrix>& reference) {
    if (ensemble.trials.empty()) throw EmptyEnsembleError("merit_report: empty ensemble");
    MeritReport report;
    report.concurrence = summarize(ensemble, [](const DensityMatrix& r) { return concurrence(r); });
    report.purity = summarize(ensemble, [](const DensityMatrix& r) { return purity(r); });
    report.fidelity_bell =
        summarize(ensemble, [](const DensityMatrix& r) { return fidelity_bell(r); });
    if (reference) {
        report.fidelity_reference = summarize(
            ensemble, [&](const DensityMatrix& r) { return fidelity(r, *reference); });
    }
    return report;
}

} // namespace qtomo
