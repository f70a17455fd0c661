#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "modisperse/util.hpp"

namespace modisperse {

/// Mean-zero field on the torus [0, lambda), stored as Fourier coefficients
/// indexed by the integer mode j in [-K, K] \ {0}; the physical frequency is
/// k = j/lambda and the basis is e^{2 i pi k x}. Values are immutable in
/// spirit: operations return new fields.
class TorusField {
  public:
    TorusField(double lambda, int K, bool real_flag = false);

    double lambda() const { return lambda_; }
    int cutoff() const { return K_; }
    bool real_flag() const { return real_; }
    void set_real_flag(bool v) { real_ = v; }

    complexd coeff(int j) const { return c_[j + K_]; }
    void set_coeff(int j, complexd v);

    bool same_torus(const TorusField& o) const { return lambda_ == o.lambda_ && K_ == o.K_; }

    /// max |j| with a nonzero coefficient (0 for the zero field).
    int top_mode() const;

    TorusField& operator+=(const TorusField& o);
    TorusField& operator-=(const TorusField& o);
    TorusField& operator*=(double s);
    friend TorusField operator+(TorusField a, const TorusField& b) { return a += b; }
    friend TorusField operator-(TorusField a, const TorusField& b) { return a -= b; }
    friend TorusField operator*(double s, TorusField a) { return a *= s; }

    void write_csv(std::ostream& os) const;
    static TorusField read_csv(std::istream& is);

  private:
    double lambda_;
    int K_;
    bool real_;
    std::vector<complexd> c_;  // slot j + K; the j = 0 slot stays zero
};

/// sqrt( (1/lambda) sum |k|^{2 alpha} |f^(k)|^2 ), k = j/lambda (homogeneous
/// weight; the zero mode is absent by construction).
double sobolev_norm(const TorusField& f, double alpha);

inline double l2_norm(const TorusField& f) { return sobolev_norm(f, 0.0); }

/// L^2(0,lambda) pairing (1/lambda) sum conj(f^) g^.
complexd inner_product(const TorusField& f, const TorusField& g);

/// ||f - g||_{L^2} without forming the difference field.
double l2_distance(const TorusField& f, const TorusField& g);

/// Copy of f re-banded to cutoff K_new (modes beyond the new cutoff dropped).
TorusField with_cutoff(const TorusField& f, int K_new);

/// Frequency cutoff: zero every coefficient with |j/lambda| > N. Idempotent.
TorusField project(const TorusField& f, double N);

/// Pointwise synthesis f(x) = (1/lambda) sum f^(k) e^{2 i pi k x}.
std::vector<complexd> evaluate(const TorusField& f, std::span<const double> x_grid);

/// Random field with |f^(j)| proportional to |j/lambda|^{-alpha-1/2} and
/// uniform phases, normalized to sobolev_norm(f, alpha) = 1. Hermitian pairs
/// when real_flag is set.
TorusField random_field(double lambda, int K, double alpha, std::uint64_t seed,
                        bool real_flag = true);

}  // namespace modisperse
