#pragma once

#include "ncbesq/diffspec.hpp"
#include "ncbesq/halfarray.hpp"
#include "ncbesq/kernels.hpp"
#include "ncbesq/linalg.hpp"
#include "ncbesq/rng.hpp"

#include <functional>
#include <vector>

namespace ncbesq::gibbs {

enum class LevelPair { Even, Odd };  // Even: (2n, 2n-1); Odd: (2n+1, 2n)

// Eigenfunction determinants and constants attached to lambda_1 < ... < lambda_N.
// Indices n are 1-based as in the level numbering.
class PsiBundle {
public:
    PsiBundle(DiffusionSpec spec, std::vector<double> lambdas);
    static PsiBundle besq(const BesselParams& params, const DriftSpectrum& mu, double ref_point = 1.0);

    std::size_t N() const { return lam_.size(); }
    const DiffusionSpec& spec() const { return spec_; }
    const std::vector<double>& lambdas() const { return lam_; }

    // Psi^{(n)} = det(psi_i(x_j)) / prod psi_{n+1}(x_i); n <= N-1.
    linalg::LogDet log_psi(std::size_t n, const std::vector<double>& x) const;
    // Psi-bar^{(n)} = det(psi_i(x_j)) / prod psi_n(x_i); n <= N.
    linalg::LogDet log_psi_bar(std::size_t n, const std::vector<double>& x) const;
    // Psi-tilde^{(n)} = (-1)^n det(D_{m-hat^{psi_{n+1}}}(psi_i / psi_{n+1})(x_j)); n <= N-1.
    linalg::LogDet log_psi_tilde(std::size_t n, const std::vector<double>& x) const;
    double psi_tilde(std::size_t n, const std::vector<double>& x) const { return log_psi_tilde(n, x).value(); }

    // log |D_{m-hat^{psi_j}}(psi_i / psi_j)(x)| and its sign.
    double log_d_entry(std::size_t i, std::size_t j, double x, int& sign) const;

    // c_n = prod_{i<=n} 1 / ((lambda_{n+1} - lambda_i) a(c)).
    double c_const(std::size_t n) const;

    // m^{psi_j} and m-hat^{psi_j} (1-based j).
    double speed_doob(std::size_t j, double x) const;
    double speed_dual_doob(std::size_t j, double x) const;

    // Normalized density of the Markov kernel L_{2n,2n-1}(y, .) or L_{2n+1,2n}(y, .).
    double lambda_kernel_density(LevelPair pair, const std::vector<double>& y, const std::vector<double>& x) const;

    // Sample level 2n (Odd pair) or 2n-1 (Even pair) given the level above.
    std::vector<double> sample_level(LevelPair pair, const std::vector<double>& y, Stream& stream) const;

    // Closed-form antiderivative of the Even-pair entry psi_i psi_{n+1} m / psi_{n+1}(c)^2 from 0,
    // with a quadrature fallback when the closed form loses precision.
    double even_entry_antiderivative(std::size_t i, std::size_t n, double y) const;

private:
    double log_psi_at(std::size_t i, double x) const { return spec_.log_psi(lam_[i - 1], x); }
    double ell(std::size_t i, double x) const { return spec_.psi_log_deriv(lam_[i - 1], x); }

    DiffusionSpec spec_;
    std::vector<double> lam_;
    double ac_;
};

HalfArray sample_gibbs(const PsiBundle& bundle, const std::vector<double>& top, Stream& stream);

using TopDensity = std::function<double(const std::vector<double>&)>;

// Explicit product formula for the Gibbs density of a half array.
double log_gibbs_density(const PsiBundle& bundle, const HalfArray& array, const TopDensity& top_density);
double gibbs_density(const PsiBundle& bundle, const HalfArray& array, const TopDensity& top_density);

// Same density as the product of the conditional kernels times the top density.
double gibbs_density_telescoped(const PsiBundle& bundle, const HalfArray& array, const TopDensity& top_density);

// Kernels for the all-zero drift spectrum of BESQ, where h^{(n)} and h-hat^{(n)}
// are Vandermonde-type determinants of monomials.
class DegenerateKernels {
public:
    DegenerateKernels(const BesselParams& params, std::size_t n_max, double ref_point = 1.0);

    double h(std::size_t n, const std::vector<double>& x) const;
    double h_hat(std::size_t n, const std::vector<double>& x) const;
    const std::vector<double>& h_exponents(std::size_t n) const { return h_exp_.at(n - 1); }
    const std::vector<double>& h_hat_exponents(std::size_t n) const { return hh_exp_.at(n - 1); }
    double lambda_kernel_density(LevelPair pair, const std::vector<double>& y, const std::vector<double>& x) const;

private:
    double eval(double log_coef, const std::vector<double>& exps, const std::vector<double>& x) const;
    double speed(double x) const;
    double speed_dual(double x) const;

    BesselParams params_;
    double c_;
    std::vector<std::vector<double>> h_exp_, hh_exp_;
    std::vector<double> h_logc_, hh_logc_;
};

}  // namespace ncbesq::gibbs
