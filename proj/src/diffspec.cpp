#include "ncbesq/diffspec.hpp"

#include "ncbesq/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace ncbesq {

BesselParams BesselParams::from_delta(double delta) {
    BesselParams p{delta, delta / 2.0 - 1.0};
    p.validate();
    return p;
}

BesselParams BesselParams::from_nu(double nu) { return from_delta(2.0 * nu + 2.0); }

void BesselParams::validate() const {
    if (!(delta >= 2.0) || !std::isfinite(delta)) throw std::domain_error("BesselParams: delta must be >= 2");
    if (std::fabs(nu - (delta / 2.0 - 1.0)) > 1e-12) throw std::domain_error("BesselParams: nu != delta/2 - 1");
}

DiffusionSpec besq_spec(const BesselParams& params, double c) {
    params.validate();
    if (!(c > 0.0)) throw std::domain_error("besq_spec: ref_point must be > 0");
    const double nu = params.nu, delta = params.delta;
    DiffusionSpec s;
    s.ref_point = c;
    s.a = [](double x) { return 2.0 * x; };
    s.a_prime = [](double) { return 2.0; };
    s.b = [delta](double) { return delta; };
    s.psi = [nu](double l, double x) { return specfun::phi(nu, l, x); };
    s.log_psi = [nu](double l, double x) { return specfun::log_phi(nu, l, x); };
    s.psi_log_deriv = [nu](double l, double x) { return specfun::phi_log_deriv(nu, l, x); };
    s.scale_density = [c, delta](double x) { return std::pow(c / x, delta / 2.0); };
    s.speed_density = [c, delta](double x) { return std::pow(x, delta / 2.0 - 1.0) / (2.0 * std::pow(c, delta / 2.0)); };
    return s;
}

DiffusionSpec doob_of(const DiffusionSpec& spec, double lambda) {
    if (!(lambda >= 0.0)) throw std::domain_error("doob_of: lambda must be >= 0");
    if (!spec.has_eigenfunctions()) throw std::invalid_argument("doob_of: spec has no eigenfunctions");
    if (lambda == 0.0) return spec;
    DiffusionSpec d = spec;
    const double c = spec.ref_point;
    const double psi_c = spec.psi(lambda, c);
    d.b = [s = spec, lambda](double x) { return s.b(x) + 2.0 * s.a(x) * s.psi_log_deriv(lambda, x); };
    d.psi = [s = spec, lambda](double m, double x) { return s.psi(lambda + m, x) / s.psi(lambda, x); };
    d.log_psi = [s = spec, lambda](double m, double x) { return s.log_psi(lambda + m, x) - s.log_psi(lambda, x); };
    d.psi_log_deriv = [s = spec, lambda](double m, double x) {
        return s.psi_log_deriv(lambda + m, x) - s.psi_log_deriv(lambda, x);
    };
    d.speed_density = [s = spec, lambda, psi_c](double x) {
        const double r = s.psi(lambda, x) / psi_c;
        return r * r * s.speed_density(x);
    };
    d.scale_density = [s = spec, lambda, psi_c](double x) {
        const double r = psi_c / s.psi(lambda, x);
        return r * r * s.scale_density(x);
    };
    return d;
}

DiffusionSpec dual_of(const DiffusionSpec& spec) {
    if (!spec.a_prime) throw std::invalid_argument("dual_of: derivative of a required");
    DiffusionSpec d;
    d.ref_point = spec.ref_point;
    d.a = spec.a;
    d.a_prime = spec.a_prime;
    d.b = [s = spec](double x) { return s.a_prime(x) - s.b(x); };
    const double ac = spec.a(spec.ref_point);
    d.scale_density = [s = spec, ac](double x) { return ac * s.speed_density(x); };
    d.speed_density = [s = spec, ac](double x) { return s.scale_density(x) / ac; };
    return d;
}

double besq_lambda_drift(double nu, double lambda, double x) {
    const double z = std::sqrt(2.0 * lambda * std::max(x, 0.0));
    return 2.0 * (nu + 1.0) + 2.0 * z * specfun::bessel_ratio(nu, z);
}

double besq_dual_drift(double nu, double lambda, double x) {
    const double z = std::sqrt(2.0 * lambda * std::max(x, 0.0));
    return -2.0 * nu - 2.0 * z * specfun::bessel_ratio(nu, z);
}

}  // namespace ncbesq
