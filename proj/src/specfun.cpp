#include "ncbesq/specfun.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ncbesq::specfun {

namespace {

constexpr double kSwitch = 25.0;

double check_order(double nu) {
    if (!std::isfinite(nu)) throw std::domain_error("besseli: non-finite order");
    if (nu >= 0.0) return nu;
    if (nu == std::floor(nu)) return -nu;
    throw std::domain_error("besseli: negative non-integer order " + std::to_string(nu));
}

void check_arg(double x, const char* who) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(who) + ": argument must be finite and >= 0");
}

bool use_asymptotic(double nu, double x) { return x > kSwitch && nu * nu < x; }

// log sum_m q^m / (m! Gamma(m+nu+1)); all terms positive, rescaled to avoid overflow.
double log_reduced_series(double nu, double q) {
    double sum = 1.0, term = 1.0, offset = 0.0;
    for (int m = 1; m < 100000; ++m) {
        term *= q / (m * (m + nu));
        sum += term;
        if (term < 1e-17 * sum && m > q / 2.0) break;
        if (sum > 1e280) {
            offset += std::log(sum);
            term /= sum;
            sum = 1.0;
        }
    }
    return offset + std::log(sum) - std::lgamma(nu + 1.0);
}

// log of the asymptotic sum sum_k (-1)^k a_k(nu) / x^k, valid for x > 25, nu^2 < x.
double log_asymptotic_sum(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0, prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (k * 8.0 * x);
        if (std::fabs(term) > std::fabs(prev) && k > 2) break;
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
        prev = term;
    }
    return std::log(sum);
}

}  // namespace

double log_besseli(double nu, double x) {
    nu = check_order(nu);
    check_arg(x, "besseli");
    if (x == 0.0) return nu == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (use_asymptotic(nu, x))
        return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + log_asymptotic_sum(nu, x);
    return nu * std::log(0.5 * x) + log_reduced_series(nu, 0.25 * x * x);
}

double besseli(double nu, double x) { return std::exp(log_besseli(nu, x)); }

double besseli_scaled(double nu, double x) {
    nu = check_order(nu);
    check_arg(x, "besseli_scaled");
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    return std::exp(log_besseli(nu, x) - x);
}

double log_besseli_reduced(double nu, double z) {
    nu = check_order(nu);
    check_arg(z, "log_besseli_reduced");
    if (use_asymptotic(nu, z)) return log_besseli(nu, z) - nu * std::log(z);
    return -nu * std::numbers::ln2 + log_reduced_series(nu, 0.25 * z * z);
}

double log_phi(double nu, double lambda, double x) {
    if (nu < 0.0) throw std::domain_error("phi: nu must be >= 0");
    check_arg(lambda, "phi");
    check_arg(x, "phi");
    return log_besseli_reduced(nu, std::sqrt(2.0 * lambda * x));
}

double phi(double nu, double lambda, double x) { return std::exp(log_phi(nu, lambda, x)); }

double phi_log_deriv(double nu, double lambda, double x) {
    if (lambda == 0.0) {
        check_arg(x, "phi_log_deriv");
        return 0.0;
    }
    return lambda * std::exp(log_phi(nu + 1.0, lambda, x) - log_phi(nu, lambda, x));
}

double bessel_ratio(double nu, double z) {
    if (nu < 0.0) throw std::domain_error("bessel_ratio: nu must be >= 0");
    check_arg(z, "bessel_ratio");
    if (z == 0.0) return 0.0;
    if (z < 2.0) {
        // backward recurrence r_k = z / (2(k+1) + z r_{k+1}) from a deep tail
        double r = 0.0;
        for (int k = 40; k >= 0; --k) r = z / (2.0 * (nu + k + 1.0) + z * r);
        return r;
    }
    return std::exp(log_besseli(nu + 1.0, z) - log_besseli(nu, z));
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be > 0");
    return std::lgamma(x);
}


BesselRatioTable::BesselRatioTable(double nu) : nu_(nu) {
    if (!(nu >= 0.0)) throw std::domain_error("BesselRatioTable: nu must be >= 0");
    const std::size_t n = static_cast<std::size_t>(kZmax * kInvH) + 2;
    r_.resize(n);
    d_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double z = double(k) * kH;
        const double r = bessel_ratio(nu, z);
        r_[k] = r;
        d_[k] = k == 0 ? 1.0 / (2.0 * (nu + 1.0)) : 1.0 - (2.0 * nu + 1.0) * r / z - r * r;
    }
    // r(z) ~ 1 + sum_k a_k z^{-k}
    const double q = 2.0 * nu + 1.0;
    a_ = {1.0, -0.5 * q};
    for (std::size_t k = 1; k < 12; ++k) {
        double conv = 0.0;
        for (std::size_t i = 1; i <= k; ++i) conv += a_[i] * a_[k + 1 - i];
        a_.push_back(((double(k) - q) * a_[k] - conv) / 2.0);
    }
}

double BesselRatioTable::asymptotic(double z) const {
    const double w = 1.0 / z;
    double s = 0.0;
    for (std::size_t k = a_.size(); k-- > 0;) s = s * w + a_[k];
    return s;
}

const BesselRatioTable& ratio_table(double nu) {
    static std::mutex mu;
    static std::map<double, std::unique_ptr<BesselRatioTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[nu];
    if (!slot) slot = std::make_unique<BesselRatioTable>(nu);
    return *slot;
}

}  // namespace ncbesq::specfun
