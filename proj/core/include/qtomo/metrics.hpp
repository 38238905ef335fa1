#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qtomo/estimation.hpp"
#include "qtomo/states.hpp"

namespace qtomo {

/// Spin-flipped state (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y).
CMatrix spin_flip(const DensityMatrix& rho);

/// Wootters concurrence: eigenvalues a1 >= a2 >= a3 >= a4 of
/// R = sqrt(sqrt(rho) rho_flipped sqrt(rho)), C = max(0, a1 - a2 - a3 - a4).
double concurrence(const DensityMatrix& rho);

/// Tr rho^2, in [0.25, 1] for two-qubit states.
double purity(const DensityMatrix& rho);

/// Square-root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)); symmetric, 1 iff equal.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Plain overlap <psi_bell| rho |psi_bell> (no square root).
double fidelity_bell(const DensityMatrix& rho);

/// Coincidence counts with the signal analyzer fixed at V and the idler
/// analyzer at |theta> = (sin theta, cos theta)^T, so theta = 0 selects V and
/// theta = pi/2 selects H.
struct CoincidenceCurve {
    std::vector<double> thetas; // radians, uniform over [0, 2*pi)
    std::vector<double> values; // n(theta) = N * Tr(P_V (x) P_theta rho)
    double n_pairs = 0.0;
};

CoincidenceCurve coincidence_curve(const DensityMatrix& rho, double n_pairs, std::size_t grid_size);

/// Ensemble mean +- sample SD per figure of merit. fidelity_reference is
/// filled only when a reference state is supplied.
struct MeritReport {
    Summary concurrence;
    Summary purity;
    Summary fidelity_bell;
    std::optional<Summary> fidelity_reference;
};

MeritReport merit_report(const TrialEnsemble& ensemble,
                         const std::optional<DensityMatrix>& reference = std::nullopt);

} // namespace qtomo
