#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "modisperse/util.hpp"

namespace modisperse {

enum class PathKind { fbm, brownian, linear, constant, custom };

std::string to_string(PathKind k);
PathKind path_kind_from_string(const std::string& s);

/// A continuous scalar modulation on [0, T]: uniform grid samples with
/// piecewise-linear interpolation. Immutable after construction, so instances
/// can be shared freely across threads. All phase integrals downstream are
/// closed-form per segment, hence exact for the interpolant.
class ModulationPath {
  public:
    ModulationPath(double horizon, std::vector<double> samples, PathKind kind,
                   double kind_param = 0.0);

    static ModulationPath constant(double level, int n, double horizon);
    static ModulationPath linear(double slope, int n, double horizon);
    static ModulationPath custom(std::vector<double> samples, double horizon);

    double horizon() const { return horizon_; }
    int segments() const { return static_cast<int>(samples_.size()) - 1; }
    const std::vector<double>& samples() const { return samples_; }
    PathKind kind() const { return kind_; }
    double kind_param() const { return kind_param_; }

    /// w(t) by linear interpolation between bracketing grid values.
    double value(double t) const;

    /// Phi^w_{s,t}(a) = int_s^t exp(i a w_r) dr, exact for the interpolant.
    /// Per segment with phase increment z = a*m*dr below the series threshold
    /// the Taylor expansion of (e^{iz}-1)/(iz) is used to avoid cancellation.
    complexd phi(double s, double t, double a) const;

    void write_csv(std::ostream& os) const;
    static ModulationPath read_csv(std::istream& is, PathKind kind = PathKind::custom,
                                   double kind_param = 0.0);

  private:
    double horizon_;
    std::vector<double> samples_;
    PathKind kind_;
    double kind_param_;
};

/// Exact-law fractional Brownian motion on the grid: Davies-Harte circulant
/// embedding when the grid size is a power of two and the circulant spectrum
/// is nonnegative, Hosking (Durbin-Levinson) recursion otherwise. w(0) = 0.
ModulationPath sample_fbm(double hurst, int n, double horizon, std::uint64_t seed);

/// Brownian path = fBm with Hurst 1/2 (independent increments).
ModulationPath sample_brownian(int n, double horizon, std::uint64_t seed);

}  // namespace modisperse
