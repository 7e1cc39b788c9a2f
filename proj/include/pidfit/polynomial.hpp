#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace pidfit {

/// Real polynomial, coefficients stored highest degree first.
/// Leading coefficients with magnitude below 1e-12 relative to the largest
/// coefficient are trimmed on construction; the zero polynomial is {0}.
class Polynomial {
  public:
    Polynomial() : coeffs_{0.0} {}
    Polynomial(std::initializer_list<double> coeffs);
    explicit Polynomial(std::vector<double> coeffs);

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const;

    double operator()(double s) const;
    std::complex<double> operator()(std::complex<double> s) const;

    Polynomial scaled(double k) const;

  private:
    std::vector<double> coeffs_;
};

Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial poly_add(const Polynomial& a, const Polynomial& b);

/// All deg(p) roots via the companion-matrix eigenvalue method.
/// Throws ConfigError for the zero polynomial or degree < 1.
std::vector<std::complex<double>> poly_roots(const Polynomial& p);

}  // namespace pidfit
