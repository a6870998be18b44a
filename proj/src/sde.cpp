#include "ncbesq/sde.hpp"

#include "ncbesq/linalg.hpp"
#include "ncbesq/parallel.hpp"
#include "ncbesq/simd_kernels.hpp"
#include "ncbesq/specfun.hpp"
#include "ncbesq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncbesq::sde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Drift of BESQ_lambda (sign = +1) or of its dual (sign = -1), using the tabulated ratio.
struct LevelDrift {
    const specfun::BesselRatioTable* table;
    double nu, lambda;
    bool dual;

    double operator()(double x) const {
        const double w = std::sqrt(2.0 * lambda * (x > 0.0 ? x : 0.0));
        const double pull = 2.0 * w * (*table)(w);
        return dual ? -2.0 * nu - pull : 2.0 * (nu + 1.0) + pull;
    }
};

LevelDrift make_drift(const BesselParams& params, double lambda, bool dual) {
    if (!(lambda >= 0.0)) throw std::domain_error("drift: lambda must be >= 0");
    return {&specfun::ratio_table(params.nu), params.nu, lambda, dual};
}

class Recorder {
public:
    Recorder(const SimConfig& cfg, std::uint64_t trial, double t0) : every_(cfg.record_every), t0_(t0), dt_(0.0) {
        grid_.dt = cfg.dt;
        grid_.seed = cfg.seed;
        grid_.trial = trial;
        steps_ = cfg.steps();
        dt_ = cfg.horizon / double(steps_);
    }
    double dt() const { return dt_; }
    std::size_t steps() const { return steps_; }
    void record(std::size_t k, const std::vector<double>& state, const std::vector<double>* up = nullptr,
                const std::vector<double>* down = nullptr) {
        const bool last = k == steps_;
        if (k == 0 || last || (every_ > 0 && k % every_ == 0)) {
            grid_.times.push_back(last ? t0_ + double(steps_) * dt_ : t0_ + double(k) * dt_);
            grid_.states.push_back(state);
            if (up && down) {
                std::vector<double> p(*up);
                p.insert(p.end(), down->begin(), down->end());
                grid_.push_trace.push_back(std::move(p));
            }
        }
    }
    PathGrid& grid() { return grid_; }

private:
    std::size_t every_;
    double t0_, dt_;
    std::size_t steps_ = 0;
    PathGrid grid_;
};

std::vector<Stream> coordinate_streams(const SimConfig& cfg, std::uint64_t trial, std::size_t n) {
    const Stream root(cfg.seed, trial);
    std::vector<Stream> s;
    s.reserve(n);
    for (std::size_t c = 0; c < n; ++c) s.push_back(root.split(c));
    return s;
}

std::size_t row_offset(std::size_t k) {  // flattened index of level k's first entry
    std::size_t off = 0;
    for (std::size_t l = 1; l < k; ++l) off += (l + 1) / 2;
    return off;
}

struct HalfArrayStepper {
    const std::vector<LevelDrift>& drift;
    const SimConfig& cfg;
    std::vector<Stream>& streams;
    std::vector<char> frozen;
    std::vector<double> push_up, push_down;
    std::size_t collisions = 0, refinements = 0;

    // One Euler-projection sweep, bottom level first; returns the number of same-level ties.
    std::size_t sweep(HalfArray& a, double h, const std::vector<double>& xi, std::vector<double>& pu,
                      std::vector<double>& pd, std::vector<char>& fr) const {
        const double sqh = std::sqrt(h);
        std::size_t ties = 0;
        std::vector<double> b, lo, hi;
        for (std::size_t k = 1; k <= a.levels(); ++k) {
            auto& row = a.rows[k - 1];
            const std::size_t n = row.size(), off = row_offset(k);
            b.resize(n);
            lo.resize(n);
            hi.resize(n);
            for (std::size_t i = 0; i < n; ++i) b[i] = drift[k - 1](row[i]);
            simd::euler_sqrt_step(row.data(), b.data(), xi.data() + off, n, h, sqh);
            if (!cfg.pushes) {
                if (k % 2 == 0)
                    for (std::size_t i = 0; i < n; ++i) {
                        if (fr[off + i]) row[i] = 0.0;
                        else if (row[i] <= 0.0) fr[off + i] = 1;
                    }
                continue;
            }
            if (k == 1) continue;
            const auto& below = a.rows[k - 2];
            for (std::size_t i = 0; i < n; ++i) {
                if (k % 2 == 1) {
                    lo[i] = i == 0 ? 0.0 : below[i - 1];
                    hi[i] = i < below.size() ? below[i] : kInf;
                } else {
                    lo[i] = below[i];
                    hi[i] = i + 1 < below.size() ? below[i + 1] : kInf;
                }
                if (lo[i] > hi[i]) throw std::runtime_error("simulate_half_array: barriers crossed");
            }
            if (cfg.barrier == BarrierScheme::Reflect)
                simd::reflect_interval(row.data(), lo.data(), hi.data(), pu.data() + off, pd.data() + off, n);
            else
                simd::project_interval(row.data(), lo.data(), hi.data(), pu.data() + off, pd.data() + off, n);
            for (std::size_t i = 1; i < n; ++i)
                if (row[i] <= row[i - 1]) ++ties;
        }
        return ties;
    }

    // Advance over a step of length h with standardized increments xi; a step that makes two
    // coordinates of one level meet is redone as two Brownian-bridge half steps.
    void advance(HalfArray& a, double h, const std::vector<double>& xi, int depth) {
        HalfArray trial = a;
        auto pu = push_up, pd = push_down;
        auto fr = frozen;
        const std::size_t ties = sweep(trial, h, xi, pu, pd, fr);
        if (ties > 0 && depth < cfg.tie_halvings) {
            ++refinements;
            const std::size_t n = xi.size();
            const double sh = std::sqrt(0.5 * h);
            std::vector<double> x1(n), x2(n);
            for (std::size_t c = 0; c < n; ++c) {
                // W(h) = xi sqrt(h); W(h/2) given W(h) is normal with mean W(h)/2 and variance h/4
                const double w = xi[c] * std::sqrt(h);
                const double w1 = 0.5 * w + 0.5 * std::sqrt(h) * streams[c].normal();
                x1[c] = w1 / sh;
                x2[c] = (w - w1) / sh;
            }
            advance(a, 0.5 * h, x1, depth + 1);
            advance(a, 0.5 * h, x2, depth + 1);
            return;
        }
        collisions += ties;
        a = std::move(trial);
        push_up = std::move(pu);
        push_down = std::move(pd);
        frozen = std::move(fr);
    }
};

PathGrid simulate_scalar(const BesselParams& params, double lambda, double x0, const SimConfig& cfg,
                         std::uint64_t trial, bool dual) {
    params.validate();
    cfg.validate();
    if (!(x0 >= 0.0) || !std::isfinite(x0)) throw std::domain_error("simulate: x0 must be finite and >= 0");
    if (dual && !(x0 > 0.0)) throw std::domain_error("simulate_dual: x0 must be > 0");
    const LevelDrift drift = make_drift(params, lambda, dual);
    Recorder rec(cfg, trial, 0.0);
    const double dt = rec.dt(), sqdt = std::sqrt(dt);
    Stream s = Stream(cfg.seed, trial).split(0);
    std::vector<double> x{x0};
    bool absorbed = false;
    rec.record(0, x);
    for (std::size_t k = 1; k <= rec.steps(); ++k) {
        const double xi = s.normal();
        if (!absorbed) {
            const double b = drift(x[0]);
            simd::euler_sqrt_step(x.data(), &b, &xi, 1, dt, sqdt);
            if (dual && x[0] <= 0.0) {
                x[0] = 0.0;
                absorbed = true;
            }
        }
        rec.record(k, x);
    }
    rec.grid().absorbed = absorbed;
    return std::move(rec.grid());
}

void check_mu(const DriftSpectrum& mu, std::size_t N) {
    mu.validate();
    if (mu.size() != N) throw std::invalid_argument("simulate: mu size does not match the state");
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("SimConfig: dt must be > 0");
    if (!(horizon >= dt)) throw std::invalid_argument("SimConfig: dt must not exceed the horizon");
    if (!(boundary_guard >= 0.0)) throw std::invalid_argument("SimConfig: boundary_guard must be >= 0");
    if (trials == 0) throw std::invalid_argument("SimConfig: trials must be >= 1");
    if (!(gap_factor >= 0.0)) throw std::invalid_argument("SimConfig: gap_factor must be >= 0");
    if (max_halvings < 0 || max_halvings > 30) throw std::invalid_argument("SimConfig: max_halvings out of range");
    if (tie_halvings < 0 || tie_halvings > 40) throw std::invalid_argument("SimConfig: tie_halvings out of range");
}

std::size_t SimConfig::steps() const {
    const double r = horizon / dt;
    const double n = std::ceil(r - 1e-9 * r);
    return static_cast<std::size_t>(std::max(1.0, n));
}

PathGrid simulate_besq_lambda(const BesselParams& params, double lambda, double x0, const SimConfig& cfg,
                              std::uint64_t trial) {
    return simulate_scalar(params, lambda, x0, cfg, trial, false);
}

PathGrid simulate_dual(const BesselParams& params, double lambda, double x0, const SimConfig& cfg, std::uint64_t trial) {
    return simulate_scalar(params, lambda, x0, cfg, trial, true);
}

PathGrid simulate_half_array(const BesselParams& params, const DriftSpectrum& mu, const HalfArray& init,
                             const SimConfig& cfg, std::uint64_t trial) {
    params.validate();
    cfg.validate();
    const std::size_t N = init.N();
    if (N == 0 || init.levels() != 2 * N - 1) throw std::invalid_argument("simulate_half_array: malformed array");
    check_mu(mu, N);
    if (!init.valid(false)) throw std::domain_error("simulate_half_array: initial array does not interlace");
    for (const auto& row : init.rows)
        for (std::size_t i = 1; i < row.size(); ++i)
            if (!(row[i] - row[i - 1] > cfg.boundary_guard))
                throw std::domain_error("simulate_half_array: initial row not strictly ordered beyond the guard");

    const auto lam = mu.lambdas();
    const std::size_t L = init.levels();
    std::vector<LevelDrift> drift;
    for (std::size_t k = 1; k <= L; ++k) {
        const std::size_t n = (k + 1) / 2;
        drift.push_back(k % 2 == 1 ? make_drift(params, lam[n - 1], false) : make_drift(params, lam[n], true));
    }
    std::vector<Stream> streams = coordinate_streams(cfg, trial, init.size());
    HalfArray a = init;
    std::vector<double> push_up(init.size(), 0.0), push_down(init.size(), 0.0);
    std::vector<char> frozen(init.size(), 0);  // dual coordinates absorbed at 0 when pushes are off
    HalfArrayStepper st{drift, cfg, streams, std::move(frozen), std::move(push_up), std::move(push_down)};
    Recorder rec(cfg, trial, 0.0);
    const double dt = rec.dt();
    std::vector<double> xi(init.size());
    rec.record(0, a.flatten(), &st.push_up, &st.push_down);
    for (std::size_t step = 1; step <= rec.steps(); ++step) {
        for (std::size_t c = 0; c < xi.size(); ++c) xi[c] = streams[c].normal();
        st.advance(a, dt, xi, 0);
        rec.record(step, a.flatten(), &st.push_up, &st.push_down);
    }
    PathGrid g = std::move(rec.grid());
    g.push_up = std::move(st.push_up);
    g.push_down = std::move(st.push_down);
    g.collisions = st.collisions;
    g.refinements = st.refinements;
    return g;
}

std::uint64_t edge_noise_tag(std::size_t k) { return row_offset(k) + (k + 1) / 2 - 1; }

PathGrid simulate_edge(const BesselParams& params, const DriftSpectrum& mu, const std::vector<double>& x0,
                       const SimConfig& cfg, std::uint64_t trial) {
    params.validate();
    cfg.validate();
    if (x0.empty() || x0.size() % 2 == 0) throw std::invalid_argument("simulate_edge: need 2N-1 coordinates");
    const std::size_t L = x0.size(), N = (L + 1) / 2;
    check_mu(mu, N);
    for (std::size_t i = 0; i < L; ++i) {
        if (!(x0[i] >= 0.0)) throw std::domain_error("simulate_edge: negative coordinate");
        if (i > 0 && x0[i] < x0[i - 1]) throw std::domain_error("simulate_edge: x0 must be weakly increasing");
    }
    const auto lam = mu.lambdas();
    std::vector<LevelDrift> drift;
    std::vector<Stream> streams;
    const Stream root(cfg.seed, trial);
    for (std::size_t k = 1; k <= L; ++k) {
        const std::size_t n = (k + 1) / 2;
        drift.push_back(k % 2 == 1 ? make_drift(params, lam[n - 1], false) : make_drift(params, lam[n], true));
        streams.push_back(root.split(edge_noise_tag(k)));
    }
    std::vector<double> x = x0, push(L, 0.0), unused(L, 0.0);
    Recorder rec(cfg, trial, 0.0);
    const double dt = rec.dt(), sqdt = std::sqrt(dt);
    rec.record(0, x, &push, &unused);
    for (std::size_t step = 1; step <= rec.steps(); ++step) {
        for (std::size_t k = 0; k < L; ++k) {
            const double b = drift[k](x[k]);
            const double xi = streams[k].normal();
            simd::euler_sqrt_step(&x[k], &b, &xi, 1, dt, sqdt);
            if (k > 0) {
                const double hi = kInf;
                if (cfg.barrier == BarrierScheme::Reflect)
                    simd::reflect_interval(&x[k], &x[k - 1], &hi, &push[k], &unused[k], 1);
                else
                    simd::project_interval(&x[k], &x[k - 1], &hi, &push[k], &unused[k], 1);
            }
        }
        rec.record(step, x, &push, &unused);
    }
    PathGrid g = std::move(rec.grid());
    g.push_up = std::move(push);
    g.push_down = std::move(unused);
    return g;
}

std::vector<double> conditioned_drift(const BesselParams& params, const DriftSpectrum& mu, const std::vector<double>& z) {
    const std::size_t N = z.size();
    const double delta = params.delta;
    std::vector<double> out(N);
    if (mu.degenerate_zero) {
        for (std::size_t i = 0; i < N; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < N; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            out[i] = delta + 4.0 * z[i] * s;
        }
        return out;
    }
    const auto lam = mu.lambdas();
    linalg::Matrix m(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double ref = specfun::log_phi(params.nu, lam[N - 1], z[j]);
        for (std::size_t k = 0; k < N; ++k) m(k, j) = specfun::log_phi(params.nu, lam[k], z[j]) - ref;
    }
    for (std::size_t k = 0; k < N; ++k) {
        double mx = -kInf;
        for (std::size_t j = 0; j < N; ++j) mx = std::max(mx, m(k, j));
        for (std::size_t j = 0; j < N; ++j) m(k, j) = std::exp(m(k, j) - mx);
    }
    const linalg::LU lu(m);
    if (lu.singular()) throw std::runtime_error("conditioned_drift: singular eigenfunction matrix");
    std::vector<double> d(N);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t k = 0; k < N; ++k) d[k] = specfun::phi_log_deriv(params.nu, lam[k], z[i]) * m(k, i);
        out[i] = delta + 4.0 * z[i] * lu.solve(d)[i];
    }
    return out;
}

namespace {

struct ConditionedStepper {
    const BesselParams& params;
    const DriftSpectrum& mu;
    const SimConfig& cfg;
    std::vector<Stream>& streams;
    std::size_t refinements = 0;

    bool in_chamber(const std::vector<double>& z) const {
        if (!(z[0] >= 0.0) || !std::isfinite(z[0])) return false;
        for (std::size_t i = 1; i < z.size(); ++i)
            if (!(z[i] > z[i - 1]) || !std::isfinite(z[i])) return false;
        return true;
    }

    bool crowded(const std::vector<double>& z, double h) const {
        for (std::size_t i = 1; i < z.size(); ++i) {
            const double a = 2.0 * z[i];
            if (z[i] - z[i - 1] < cfg.gap_factor * std::sqrt(2.0 * a * h)) return true;
        }
        return false;
    }

    // Advance z over a step of length h driven by Brownian increments dw; refine by Brownian bridge.
    void advance(std::vector<double>& z, double h, const std::vector<double>& dw, int depth, double t) {
        const std::size_t N = z.size();
        if (depth < cfg.max_halvings && N > 1 && crowded(z, h)) {
            split(z, h, dw, depth, t);
            return;
        }
        const auto b = conditioned_drift(params, mu, z);
        std::vector<double> y(N);
        for (std::size_t i = 0; i < N; ++i) {
            const double zp = z[i] > 0.0 ? z[i] : 0.0;
            const double v = (z[i] + b[i] * h) + 2.0 * std::sqrt(zp) * dw[i];
            y[i] = v > 0.0 ? v : 0.0;
        }
        if (!in_chamber(y)) {
            if (depth < cfg.max_halvings) {
                split(z, h, dw, depth, t);
                return;
            }
            throw StepUnderflow("simulate_conditioned: step underflow, path leaves the chamber", t, z);
        }
        z = std::move(y);
    }

    void split(std::vector<double>& z, double h, const std::vector<double>& dw, int depth, double t) {
        const std::size_t N = z.size();
        std::vector<double> first(N), second(N);
        const double s = std::sqrt(0.25 * h);
        for (std::size_t i = 0; i < N; ++i) {
            first[i] = 0.5 * dw[i] + s * streams[i].normal();
            second[i] = dw[i] - first[i];
        }
        ++refinements;
        advance(z, 0.5 * h, first, depth + 1, t);
        advance(z, 0.5 * h, second, depth + 1, t + 0.5 * h);
    }
};

PathGrid run_conditioned(const BesselParams& params, const DriftSpectrum& mu, std::vector<double> z,
                         const SimConfig& cfg, std::uint64_t trial, double t0, double horizon) {
    SimConfig c = cfg;
    c.horizon = horizon;
    c.validate();
    std::vector<Stream> streams = coordinate_streams(c, trial, z.size());
    ConditionedStepper st{params, mu, c, streams};
    Recorder rec(c, trial, t0);
    const double dt = rec.dt(), sqdt = std::sqrt(dt);
    std::vector<double> dw(z.size());
    rec.record(0, z);
    for (std::size_t step = 1; step <= rec.steps(); ++step) {
        for (std::size_t i = 0; i < z.size(); ++i) dw[i] = sqdt * streams[i].normal();
        st.advance(z, dt, dw, 0, t0 + double(step - 1) * dt);
        rec.record(step, z);
    }
    PathGrid g = std::move(rec.grid());
    g.refinements = st.refinements;
    return g;
}

}  // namespace

PathGrid simulate_conditioned(const BesselParams& params, const DriftSpectrum& mu, const ChamberPoint& x0,
                              const SimConfig& cfg, std::uint64_t trial) {
    params.validate();
    cfg.validate();
    check_mu(mu, x0.size());
    validate_chamber(x0);
    for (std::size_t i = 1; i < x0.size(); ++i)
        if (!(x0[i] - x0[i - 1] > cfg.boundary_guard))
            throw std::domain_error("simulate_conditioned: initial gap below the guard");
    return run_conditioned(params, mu, x0, cfg, trial, 0.0, cfg.horizon);
}

PathGrid simulate_conditioned_from_origin(const BesselParams& params, const DriftSpectrum& mu,
                                          const kernels::Chamber2Density& entrance_at_t0, double t0,
                                          const SimConfig& cfg, std::uint64_t trial) {
    params.validate();
    cfg.validate();
    check_mu(mu, 2);
    if (!(t0 > 0.0 && t0 < cfg.horizon)) throw std::invalid_argument("simulate_conditioned_from_origin: need 0 < t0 < T");
    Stream init = Stream(cfg.seed, trial).split(2000);
    const double u1 = init.uniform(), u2 = init.uniform();
    const auto y = entrance_at_t0.sample(u1, u2);
    PathGrid g = run_conditioned(params, mu, {y[0], y[1]}, cfg, trial, t0, cfg.horizon - t0);
    g.times.insert(g.times.begin(), 0.0);
    g.states.insert(g.states.begin(), std::vector<double>{0.0, 0.0});
    return g;
}

NoncollisionEstimate estimate_noncollision(const BesselParams& params, const std::vector<double>& lambdas,
                                           const std::vector<double>& x0, const SimConfig& cfg,
                                           const NoncollisionOptions& opts) {
    params.validate();
    cfg.validate();
    const std::size_t N = lambdas.size();
    if (N < 2 || x0.size() != N) throw std::invalid_argument("estimate_noncollision: need N >= 2 and matching x0");
    for (std::size_t i = 1; i < N; ++i)
        if (!(lambdas[i] > lambdas[i - 1])) throw std::domain_error("estimate_noncollision: lambdas must be strictly increasing");
    validate_chamber(x0);
    if (!(lambdas[0] >= 0.0)) throw std::domain_error("estimate_noncollision: lambdas must be >= 0");

    std::vector<LevelDrift> drift;
    std::vector<double> root_speed;
    for (double l : lambdas) {
        drift.push_back(make_drift(params, l, false));
        root_speed.push_back(std::sqrt(2.0 * l));
    }
    const std::size_t steps = cfg.steps();
    const double dt = cfg.horizon / double(steps), sqdt = std::sqrt(dt);

    // sqrt of each coordinate moves like a Brownian motion with drift sqrt(2 lambda_i) far from 0,
    // so the chance that two separated paths ever meet again is about exp(-(m_j - m_i)(sqrt x_j - sqrt x_i)).
    auto tail = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 1; i < N; ++i)
            s += std::exp(-(root_speed[i] - root_speed[i - 1]) * (std::sqrt(x[i]) - std::sqrt(x[i - 1])));
        return std::min(1.0, s);
    };

    struct Outcome {
        char survived = 0, early = 0;
        double bound = 0.0;
    };
    const auto outcomes = parallel::map_trials<Outcome>(cfg.trials, cfg.jobs, [&](std::size_t trial) {
        std::vector<Stream> noise = coordinate_streams(cfg, trial, N);
        const Stream root(cfg.seed, trial);
        std::vector<Stream> kill;
        for (std::size_t i = 1; i < N; ++i) kill.push_back(root.split(1000 + i));
        std::vector<double> x = x0, prev(N);
        Outcome out;
        for (std::size_t k = 1; k <= steps; ++k) {
            prev = x;
            for (std::size_t i = 0; i < N; ++i) {
                const double b = drift[i](x[i]);
                const double xi = noise[i].normal();
                simd::euler_sqrt_step(&x[i], &b, &xi, 1, dt, sqdt);
            }
            for (std::size_t i = 1; i < N; ++i) {
                const double d1 = x[i] - x[i - 1];
                if (!(d1 > 0.0)) return out;
                if (opts.bridge_correction) {
                    const double d0 = prev[i] - prev[i - 1];
                    const double var = 4.0 * (prev[i] + prev[i - 1]);
                    const double p = var > 0.0 ? std::exp(-2.0 * d0 * d1 / (var * dt)) : 0.0;
                    if (p > 1e-16 && kill[i - 1].uniform() < p) return out;
                }
            }
            if (k % 64 == 0) {
                const double bnd = tail(x);
                if (bnd < opts.tail_eps) {
                    out.survived = 1;
                    out.early = 1;
                    out.bound = bnd;
                    return out;
                }
            }
        }
        out.survived = 1;
        out.bound = tail(x);
        return out;
    });

    std::size_t surv = 0, early = 0;
    double bound = 0.0;
    for (const auto& o : outcomes) {
        surv += std::size_t(o.survived);
        early += std::size_t(o.early);
        bound += o.bound;
    }
    const double n = double(cfg.trials);
    const double p = double(surv) / n;
    const auto [lo, hi] = stats::wilson_interval(long(surv), long(cfg.trials));
    return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / n), lo, hi, bound / n, cfg.trials, surv, early};
}

}  // namespace ncbesq::sde
