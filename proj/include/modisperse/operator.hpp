#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "modisperse/field.hpp"
#include "modisperse/path.hpp"

namespace modisperse {

enum class Equation { kdv, mkdv };

std::string to_string(Equation e);
Equation equation_from_string(const std::string& s);

/// Memoized phase integrals Phi^w_{s,t}(phase_scale * key), keyed by interned
/// time indices and the exact integer resonance product. Values are pure
/// functions of the key, so duplicated computation under concurrency is
/// benign; inserts are serialized.
class PhaseIntegralCache {
  public:
    complexd get(const ModulationPath& path, double phase_scale, double s, double t,
                 long long key);
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }
    void clear();

  private:
    struct Key {
        int s_idx;
        int t_idx;
        long long product;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t h = std::hash<long long>()(k.product);
            h ^= std::hash<int>()(k.s_idx) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= std::hash<int>()(k.t_idx) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        }
    };
    int intern(double t);

    std::map<double, int> times_;
    std::unordered_map<Key, complexd, KeyHash> values_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
    mutable std::mutex mutex_;
};

/// The modulated resonance operator X_{st} in Fourier variables. For KdV the
/// bilinear map
///   h^(j) = i c_j (1/lambda) sum_{j1+j2=j, j j1 j2 != 0}
///           Phi^w_{s,t}(3 (2 pi / lambda)^3 j j1 j2) psi1^(j1) psi2^(j2)
/// with c_j = 2 pi j / lambda; for mKdV the trilinear star-restricted sum with
/// phase 3 (2 pi / lambda)^3 (j-j1)(j-j2)(j-j3). The resonance products are
/// exact integer arithmetic on mode indices; the (2 pi)^3 / lambda^3 factor
/// lives in phase_scale.
class ModulatedOperator {
  public:
    ModulatedOperator(Equation eq, std::shared_ptr<const ModulationPath> path, double lambda,
                      int K, double kappa = 3.0);

    Equation equation() const { return eq_; }
    int cutoff() const { return K_; }
    double lambda() const { return lambda_; }
    double phase_scale() const { return phase_scale_; }
    const ModulationPath& path() const { return *path_; }
    std::shared_ptr<const ModulationPath> path_handle() const { return path_; }

    /// Widest output band the nonlinearity can populate (2K resp. 3K).
    int natural_out_band() const { return eq_ == Equation::kdv ? 2 * K_ : 3 * K_; }

    TorusField x_kdv(double s, double t, const TorusField& psi1, const TorusField& psi2,
                     int out_band = -1) const;
    TorusField x_mkdv(double s, double t, const TorusField& psi1, const TorusField& psi2,
                      const TorusField& psi3, int out_band = -1) const;

    /// X_{st}(g,g) resp. X_{st}(g,g,g) depending on the configured equation.
    TorusField x_quadratic(double s, double t, const TorusField& g, int out_band = -1) const;

    /// Galerkin truncation: Pi_L X_{st}(Pi_L g, ...) with frequency cutoff L.
    TorusField x_truncated(double L, double s, double t, const TorusField& g,
                           int out_band = -1) const;

    complexd phi_cached(double s, double t, long long key) const;

    const PhaseIntegralCache& cache() const { return cache_; }
    void clear_cache() { cache_.clear(); }

  private:
    void check_input(const TorusField& f) const;

    Equation eq_;
    std::shared_ptr<const ModulationPath> path_;
    double lambda_;
    int K_;
    double phase_scale_;
    mutable PhaseIntegralCache cache_;
};

struct ProbeRow {
    int K;
    double alpha, beta, s, t;
    double ratio_max, ratio_median;
};

/// Smoothing probe: ratios ||X_{st}(phi,phi)||_{H^beta} / (||phi||_{H^alpha}^2
/// (t-s)^gamma) over an ensemble of H^alpha-normalized random fields. One row
/// per (s,t) pair.
std::vector<ProbeRow> operator_norm_probe(const ModulatedOperator& op, double alpha, double beta,
                                          double gamma, int n_samples,
                                          const std::vector<std::pair<double, double>>& pairs,
                                          std::uint64_t seed, int threads = 1);

}  // namespace modisperse
