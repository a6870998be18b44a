#pragma once

#include <cstddef>
#include <vector>

namespace ncbesq::specfun {

// Modified Bessel function of the first kind I_nu(x).
// nu >= 0, or a negative integer (I_{-n} = I_n).
double besseli(double nu, double x);

// e^{-x} I_nu(x), usable for large x.
double besseli_scaled(double nu, double x);

// log I_nu(x); -inf at x = 0 when nu > 0.
double log_besseli(double nu, double x);

// log of z^{-nu} I_nu(z), finite and continuous at z = 0.
double log_besseli_reduced(double nu, double z);

// phi_lambda^{(nu)}(x) = (2 lambda x)^{-nu/2} I_nu(sqrt(2 lambda x)).
double phi(double nu, double lambda, double x);
double log_phi(double nu, double lambda, double x);

// d/dx log phi_lambda^{(nu)}(x) = lambda phi^{(nu+1)} / phi^{(nu)}.
double phi_log_deriv(double nu, double lambda, double x);

// I_{nu+1}(z) / I_nu(z), in [0, 1).
double bessel_ratio(double nu, double z);

double log_gamma(double x);

}  // namespace ncbesq::specfun

namespace ncbesq::specfun {

// Tabulated I_{nu+1}(z) / I_nu(z) for hot loops: cubic Hermite on [0, 32] using the
// Riccati equation r' = 1 - (2 nu + 1) r / z - r^2 for slopes, asymptotic series beyond.
class BesselRatioTable {
public:
    explicit BesselRatioTable(double nu);
    double operator()(double z) const {
        if (z < kZmax) {
            const double s = z * kInvH;
            const std::size_t k = static_cast<std::size_t>(s);
            const double t = s - double(k);
            const double r0 = r_[k], r1 = r_[k + 1];
            const double d0 = d_[k] * kH, d1 = d_[k + 1] * kH;
            const double t2 = t * t, t3 = t2 * t;
            return (2 * t3 - 3 * t2 + 1) * r0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * r1 + (t3 - t2) * d1;
        }
        return asymptotic(z);
    }
    double nu() const { return nu_; }
    double asymptotic(double z) const;

    static constexpr double kZmax = 32.0;
    static constexpr double kH = 1.0 / 64.0;
    static constexpr double kInvH = 64.0;

private:
    double nu_;
    std::vector<double> r_, d_, a_;
};

// Shared table for order nu; built once per order.
const BesselRatioTable& ratio_table(double nu);

}  // namespace ncbesq::specfun
