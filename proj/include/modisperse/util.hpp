#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace modisperse {

using complexd = std::complex<double>;

/// Thrown when an iteration fails to converge (non-contraction, divergent
/// sewing certificate, degenerate regression). Exit code 1 territory.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Deterministic Gaussian source: mt19937_64 plus explicit Box-Muller, so the
/// draw sequence does not depend on the standard library's normal_distribution.
class GaussianSource {
  public:
    explicit GaussianSource(std::uint64_t seed) : eng_(seed) {}

    double uniform() {
        // top 53 bits -> (0,1)
        const std::uint64_t r = eng_();
        return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Serialize a double with 17 significant digits (round-trip exact).
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Resolve a thread count: explicit value wins, 0 means auto, and the
/// MODISPERSE_THREADS environment variable is consulted when nothing is given.
int resolve_threads(int requested);

/// Deterministic parallel map over [0, n): each index writes its own slot, so
/// results are independent of the thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Least-squares slope/intercept of y against x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace modisperse
