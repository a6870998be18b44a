#pragma once

#include <functional>

namespace ncbesq {

struct BesselParams {
    double delta = 2.0;
    double nu = 0.0;

    static BesselParams from_delta(double delta);
    static BesselParams from_nu(double nu);
    void validate() const;
};

// One-dimensional diffusion with generator a(x) f'' + b(x) f'.
// Dual specs carry no eigenfunctions (psi members are empty).
struct DiffusionSpec {
    using Fn = std::function<double(double)>;
    using Fn2 = std::function<double(double, double)>;

    Fn a, a_prime, b;
    Fn2 psi, log_psi, psi_log_deriv;  // (lambda, x)
    Fn speed_density, scale_density;
    double ref_point = 1.0;

    bool has_eigenfunctions() const { return static_cast<bool>(psi); }
};

DiffusionSpec besq_spec(const BesselParams& params, double ref_point = 1.0);
DiffusionSpec doob_of(const DiffusionSpec& spec, double lambda);
DiffusionSpec dual_of(const DiffusionSpec& spec);

// Drift of BESQ_lambda: 2(nu+1) + 2 z I_{nu+1}(z)/I_nu(z), z = sqrt(2 lambda x).
double besq_lambda_drift(double nu, double lambda, double x);
// Drift of the dual of BESQ_lambda: -2 nu - 2 z I_{nu+1}(z)/I_nu(z).
double besq_dual_drift(double nu, double lambda, double x);

}  // namespace ncbesq
