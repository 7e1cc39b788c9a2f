#include "pidfit/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "pidfit/errors.hpp"

namespace pidfit {

namespace {

std::vector<double> trim_leading(std::vector<double> c) {
    if (c.empty()) return {0.0};
    double mx = 0.0;
    for (double v : c) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) return {0.0};
    std::size_t i = 0;
    while (i + 1 < c.size() && std::abs(c[i]) <= 1e-12 * mx) ++i;
    return {c.begin() + static_cast<long>(i), c.end()};
}

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : coeffs_(trim_leading(std::vector<double>(coeffs))) {}

Polynomial::Polynomial(std::vector<double> coeffs)
    : coeffs_(trim_leading(std::move(coeffs))) {}

bool Polynomial::is_zero() const {
    return coeffs_.size() == 1 && coeffs_[0] == 0.0;
}

double Polynomial::operator()(double s) const {
    double acc = 0.0;
    for (double c : coeffs_) acc = acc * s + c;
    return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
    std::complex<double> acc = 0.0;
    for (double c : coeffs_) acc = acc * s + c;
    return acc;
}

Polynomial Polynomial::scaled(double k) const {
    std::vector<double> c = coeffs_;
    for (double& v : c) v *= k;
    return Polynomial(std::move(c));
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial{};
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    std::vector<double> out(ca.size() + cb.size() - 1, 0.0);
    for (std::size_t i = 0; i < ca.size(); ++i)
        for (std::size_t j = 0; j < cb.size(); ++j) out[i + j] += ca[i] * cb[j];
    return Polynomial(std::move(out));
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    std::size_t n = std::max(ca.size(), cb.size());
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < ca.size(); ++i) out[n - ca.size() + i] += ca[i];
    for (std::size_t i = 0; i < cb.size(); ++i) out[n - cb.size() + i] += cb[i];
    return Polynomial(std::move(out));
}

std::vector<std::complex<double>> poly_roots(const Polynomial& p) {
    if (p.is_zero()) throw ConfigError("poly_roots: zero polynomial has no roots");
    const int n = p.degree();
    if (n < 1) throw ConfigError("poly_roots: degree must be >= 1");

    const auto& c = p.coeffs();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) companion(0, i) = -c[i + 1] / c[0];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

}  // namespace pidfit
