#pragma once

#include <utility>
#include <vector>

#include "modisperse/path.hpp"

namespace modisperse {

/// (s,t) pairs scanned when estimating the occupation-measure seminorm:
/// dyadic intervals at every scale 2^-j T, j = 0..depth, with at most
/// max_per_scale evenly spread offsets per scale (so the per-scale maximum
/// carries a scale-independent extreme-value bias).
struct PairGrid {
    std::vector<std::pair<double, double>> pairs;
    int depth = 0;
};

PairGrid dyadic_pairs(double horizon, int depth, int max_per_scale = 64);

/// Geometric frequency grid, points_per_decade per decade over [a_min, a_max].
std::vector<double> geometric_grid(double a_min, double a_max, int points_per_decade);

struct IrregularityEstimate {
    double gamma = 0.0;
    double rho_hat = 0.0;    // exponent used (seminorm) or fitted (estimate_rho)
    double seminorm = 0.0;   // grid max of <a>^rho |Phi_{s,t}(a)| / (t-s)^gamma
    std::vector<double> a_grid;
    PairGrid pair_grid;
    // arg-max of the scanned seminorm, for diagnostics
    double argmax_a = 0.0;
    double argmax_s = 0.0;
    double argmax_t = 0.0;
};

/// Grid lower bound for the irregularity seminorm
/// sup <a>^rho |Phi_{s,t}(a)| / (t-s)^gamma with <a> = sqrt(1+a^2). Scans are
/// parallel over the a-grid with a deterministic max reduction.
IrregularityEstimate irregularity_seminorm(const ModulationPath& path, double rho, double gamma,
                                           const std::vector<double>& a_grid,
                                           const PairGrid& pairs, int threads = 1);

/// Empirical decay exponent: fit -log M(a) vs log<a> over the upper half of
/// the a-grid, where M(a) = max over scales of the per-scale median of
/// |Phi_{s,t}(a)| divided by (t-s)^gamma. The per-scale median suppresses the
/// extreme-value bias a growing pair count would add to a plain supremum, so
/// the fitted slope tracks the scaling exponent rather than the grid size.
/// Throws NumericalError if M underflows across the fit window.
IrregularityEstimate estimate_rho(const ModulationPath& path, double gamma,
                                  const std::vector<double>& a_grid, const PairGrid& pairs,
                                  int threads = 1);

}  // namespace modisperse
