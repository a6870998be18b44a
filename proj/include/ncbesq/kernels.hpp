#pragma once

#include "ncbesq/diffspec.hpp"
#include "ncbesq/linalg.hpp"

#include <array>
#include <functional>
#include <vector>

namespace ncbesq {

using ChamberPoint = std::vector<double>;

// Generalized drift parameters mu (eigenvalues of M*M); lambda_i = mu_i / 2.
struct DriftSpectrum {
    std::vector<double> mu;
    bool degenerate_zero = false;

    static DriftSpectrum of(std::vector<double> mu);
    static DriftSpectrum zero(std::size_t n);
    std::size_t size() const { return mu.size(); }
    std::vector<double> lambdas() const;
    void validate() const;
};

// Throws std::domain_error unless 0 <= x_1 < ... < x_N (strict_positive requires x_1 > 0).
void validate_chamber(const ChamberPoint& x, bool strict_positive = false);

namespace kernels {

double log_besq_density(double nu, double t, double x, double y);
double besq_density(const BesselParams& params, double t, double x, double y);

// k-th x-derivative of q_t^{(nu)}(x, y) from the shifted-order recursion.
double besq_density_xderiv(const BesselParams& params, int k, double t, double x, double y);

double conditioned_density(const BesselParams& params, const DriftSpectrum& mu, double t,
                           const ChamberPoint& x, const ChamberPoint& y);

double laguerre_density(const BesselParams& params, double t, const ChamberPoint& x, const ChamberPoint& y);

double noncollision_prob(const DiffusionSpec& spec, const std::vector<double>& lambdas, const ChamberPoint& x);

using TransitionFn = std::function<double(double t, double x, double y)>;

double conditioned_density_generic(const DiffusionSpec& spec, const TransitionFn& p_t,
                                   const std::vector<double>& lambdas, double t,
                                   const ChamberPoint& x, const ChamberPoint& y);

// Density at time t of the process started from the origin.
double entrance_density(const BesselParams& params, const DriftSpectrum& mu, double t, const ChamberPoint& y);

// Density on the two-point chamber 0 < y1 < y2 of the form C det(A_i(y_j)) det(B_i(y_j)).
// Tabulates antiderivatives so that marginals and exact sequential sampling are cheap.
class Chamber2Density {
public:
    using Fn = std::function<double(double)>;

    Chamber2Density(std::array<Fn, 2> A, std::array<Fn, 2> B, double C, double y_max = 0.0, int panels = 600);

    double density(double y1, double y2) const;
    double marginal_pdf(int coord, double y) const;  // coord 0 -> y1, 1 -> y2
    double marginal_cdf(int coord, double y) const;
    double total_mass() const { return mass_; }
    double y_max() const { return ymax_; }

    // Inverse-CDF sampling from two independent uniforms.
    std::array<double, 2> sample(double u_top, double u_low) const;

private:
    using Vec4 = std::array<double, 4>;
    Vec4 f4(double y) const;        // A_a(y) B_b(y) for ab = 11, 12, 21, 22
    Vec4 F4(double y) const;        // antiderivatives from 0
    double pdf_raw(int coord, double y) const;
    double cdf_raw(int coord, double y) const;
    std::size_t panel_of(double y) const;
    double invert(const std::function<double(std::size_t)>& knot_cdf, const std::function<double(double)>& cdf,
                  const std::function<double(double)>& pdf, double target, double hi) const;

    std::array<Fn, 2> A_, B_;
    double C_;
    double ymax_;
    std::vector<double> knots_;
    std::vector<Vec4> cum4_;
    std::array<std::vector<double>, 2> cum_marg_;
    double mass_ = 0.0;
};

Chamber2Density conditioned_chamber2(const BesselParams& params, const DriftSpectrum& mu, double t,
                                     const ChamberPoint& x);
Chamber2Density entrance_chamber2(const BesselParams& params, const DriftSpectrum& mu, double t);

}  // namespace kernels
}  // namespace ncbesq
