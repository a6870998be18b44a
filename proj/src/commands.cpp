#include "ncbesq/commands.hpp"

#include "ncbesq/gibbs.hpp"
#include "ncbesq/kernels.hpp"
#include "ncbesq/matproc.hpp"
#include "ncbesq/parallel.hpp"
#include "ncbesq/sde.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

namespace ncbesq::commands {

using nlohmann::json;

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw UsageError("unknown format '" + s + "' (expected csv or json)");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_json(const json& j, std::ostream& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out << ',';
                first = false;
                out << json(it.key()).dump() << ':';
                write_json(it.value(), out);
            }
            out << '}';
            break;
        }
        case json::value_t::array: {
            out << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out << ',';
                write_json(j[i], out);
            }
            out << ']';
            break;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            out << (std::isfinite(v) ? format_double(v) : "null");
            break;
        }
        default:
            out << j.dump();
    }
}

namespace {

// Schema helpers: every config key must be known, numeric constraints are checked on read.
void allow_keys(const json& cfg, std::initializer_list<const char*> keys) {
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
        if (!ok.count(it.key())) throw UsageError("unknown config key '" + it.key() + "'");
}

double get_num(const json& cfg, const char* key, double def, bool required = false) {
    if (!cfg.contains(key)) {
        if (required) throw UsageError(std::string("missing config key '") + key + "'");
        return def;
    }
    if (!cfg[key].is_number()) throw UsageError(std::string("config key '") + key + "' must be a number");
    return cfg[key].get<double>();
}

std::uint64_t get_u64(const json& cfg, const char* key, std::uint64_t def) {
    if (!cfg.contains(key)) return def;
    if (!cfg[key].is_number_unsigned() && !(cfg[key].is_number_integer() && cfg[key].get<long long>() >= 0))
        throw UsageError(std::string("config key '") + key + "' must be a non-negative integer");
    return cfg[key].get<std::uint64_t>();
}

std::vector<double> get_vec(const json& cfg, const char* key, bool required = true) {
    if (!cfg.contains(key)) {
        if (required) throw UsageError(std::string("missing config key '") + key + "'");
        return {};
    }
    const json& v = cfg[key];
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) throw UsageError(std::string("config key '") + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw UsageError(std::string("config key '") + key + "' must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

BesselParams get_params(const json& cfg) {
    if (cfg.contains("nu") && cfg.contains("delta")) throw UsageError("give either nu or delta, not both");
    BesselParams p = cfg.contains("nu") ? BesselParams::from_nu(get_num(cfg, "nu", 0.0))
                                        : BesselParams::from_delta(get_num(cfg, "delta", 2.0));
    try {
        p.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return p;
}

DriftSpectrum get_mu(const json& cfg) {
    const auto mu = get_vec(cfg, "mu");
    bool all_zero = true;
    for (double m : mu) all_zero = all_zero && m == 0.0;
    try {
        return all_zero ? DriftSpectrum::zero(mu.size()) : DriftSpectrum::of(mu);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

template <class F>
auto usage_guard(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void emit(const Table& t, Format fmt, std::ostream& out, const json& meta) {
    if (fmt == Format::Csv) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
        out << '\n';
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
            out << '\n';
        }
        return;
    }
    json j = meta;
    j["format_version"] = 1;
    j["columns"] = t.columns;
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    j["rows"] = rows;
    write_json(j, out);
    out << '\n';
}

std::vector<std::vector<double>> grid_points(const json& cfg, std::size_t N) {
    std::vector<std::vector<double>> pts;
    if (cfg.contains("points")) {
        for (const auto& p : cfg["points"]) {
            std::vector<double> v;
            if (p.is_number()) v.push_back(p.get<double>());
            else
                for (const auto& e : p) v.push_back(e.get<double>());
            if (v.size() != N) throw UsageError("grid point dimension does not match");
            pts.push_back(v);
        }
        return pts;
    }
    if (!cfg.contains("grid")) throw UsageError("kernel-eval needs 'grid' or 'points'");
    const json& g = cfg["grid"];
    allow_keys(g, {"lo", "hi", "n"});
    const double lo = get_num(g, "lo", 0.0), hi = get_num(g, "hi", 0.0, true);
    const auto n = static_cast<std::size_t>(get_num(g, "n", 0.0, true));
    if (!(hi > lo) || lo < 0.0 || n < 2) throw UsageError("grid needs 0 <= lo < hi and n >= 2");
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i) axis[i] = lo + (hi - lo) * double(i) / double(n - 1);
    if (N == 1) {
        for (double y : axis) pts.push_back({y});
    } else if (N == 2) {
        for (double y1 : axis)
            for (double y2 : axis)
                if (y2 > y1) pts.push_back({y1, y2});
    } else {
        throw UsageError("grid tabulation supports N <= 2; pass explicit 'points' otherwise");
    }
    return pts;
}

}  // namespace

bool kernel_eval(const json& cfg, Format fmt, std::ostream& out, std::ostream& log) {
    allow_keys(cfg, {"kernel", "nu", "delta", "mu", "t", "x", "grid", "points", "check_symmetry"});
    if (!cfg.contains("kernel") || !cfg["kernel"].is_string()) throw UsageError("missing config key 'kernel'");
    const std::string kernel = cfg["kernel"];
    const BesselParams params = get_params(cfg);
    const bool check_sym = cfg.value("check_symmetry", false);
    Table tab;
    json meta{{"kernel", kernel}};
    bool ok = true;

    if (kernel == "noncollision") {
        const DriftSpectrum mu = get_mu(cfg);
        const auto spec = besq_spec(params);
        const auto pts = grid_points(cfg, mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) tab.columns.push_back("x" + std::to_string(i + 1));
        tab.columns.push_back("value");
        for (const auto& x : pts) {
            if (x.size() > 1 && !(x[0] >= 0.0)) continue;
            auto row = x;
            row.push_back(usage_guard([&] { return kernels::noncollision_prob(spec, mu.lambdas(), x); }));
            tab.rows.push_back(row);
        }
        emit(tab, fmt, out, meta);
        return true;
    }

    const double t = get_num(cfg, "t", 0.0, true);
    if (!(t > 0.0)) throw UsageError("t must be > 0");
    std::size_t N = 1;
    std::vector<double> x;
    DriftSpectrum mu;
    if (kernel == "besq") {
        x = get_vec(cfg, "x");
        if (x.size() != 1) throw UsageError("besq kernel takes a scalar x");
    } else if (kernel == "conditioned" || kernel == "laguerre" || kernel == "entrance") {
        if (kernel != "laguerre") mu = get_mu(cfg);
        if (kernel != "entrance") x = get_vec(cfg, "x");
        N = kernel == "laguerre" ? x.size() : mu.size();
        if (kernel == "conditioned" && x.size() != N) throw UsageError("x and mu sizes differ");
    } else {
        throw UsageError("unknown kernel '" + kernel + "'");
    }
    if (check_sym && (kernel != "conditioned" || t != 1.0)) throw UsageError("check_symmetry needs kernel=conditioned and t=1");

    for (std::size_t i = 0; i < N; ++i) tab.columns.push_back("y" + std::to_string(i + 1));
    tab.columns.push_back("density");
    if (check_sym) {
        tab.columns.push_back("swapped");
        tab.columns.push_back("rel_err");
    }
    const auto pts = grid_points(cfg, N);
    double max_rel = 0.0;
    for (const auto& y : pts) {
        if (!(y[0] > 0.0)) continue;
        auto row = y;
        const double v = usage_guard([&] {
            if (kernel == "besq") return kernels::besq_density(params, t, x[0], y[0]);
            if (kernel == "conditioned") return kernels::conditioned_density(params, mu, t, x, y);
            if (kernel == "laguerre") return kernels::laguerre_density(params, t, x, y);
            return kernels::entrance_density(params, mu, t, y);
        });
        row.push_back(v);
        if (check_sym) {
            const double w = usage_guard(
                [&] { return kernels::conditioned_density(params, DriftSpectrum::of(x), 1.0, mu.mu, y); });
            const double rel = std::fabs(v - w) / std::max(std::fabs(v), 1e-300);
            max_rel = std::max(max_rel, rel);
            row.push_back(w);
            row.push_back(rel);
        }
        tab.rows.push_back(row);
    }
    // grid total by the trapezoid rule (N = 1) or cell sums (N = 2); compare with unit mass
    if (cfg.contains("grid") && N <= 2 && !tab.rows.empty()) {
        const json& g = cfg["grid"];
        const double h = (g["hi"].get<double>() - get_num(g, "lo", 0.0)) / (g["n"].get<double>() - 1.0);
        double total = 0.0;
        for (const auto& r : tab.rows) total += r[N];
        total *= N == 1 ? h : h * h;
        meta["grid_total"] = total;
        log << "grid total " << format_double(total) << '\n';
    }
    if (check_sym) {
        meta["symmetry_max_rel_err"] = max_rel;
        ok = max_rel <= 1e-10;
        log << "symmetry max relative error " << format_double(max_rel) << (ok ? " ok" : " FAILED") << '\n';
    }
    emit(tab, fmt, out, meta);
    return ok;
}

void simulate(const json& cfg, Format fmt, std::size_t jobs, std::ostream& out) {
    allow_keys(cfg, {"target", "nu", "delta", "mu", "lambda", "x0", "top", "init", "K", "seed", "trials", "dt",
                     "horizon", "record_every", "pushes", "barrier", "t0"});
    if (!cfg.contains("target") || !cfg["target"].is_string()) throw UsageError("missing config key 'target'");
    const std::string target = cfg["target"];
    const BesselParams params = get_params(cfg);
    sde::SimConfig sc;
    sc.seed = get_u64(cfg, "seed", 0);
    sc.trials = get_u64(cfg, "trials", 1);
    sc.dt = get_num(cfg, "dt", 1e-3);
    sc.horizon = get_num(cfg, "horizon", 1.0);
    sc.record_every = get_u64(cfg, "record_every", 0);
    sc.pushes = cfg.value("pushes", true);
    sc.jobs = jobs;
    if (cfg.contains("barrier")) {
        const std::string b = cfg["barrier"];
        if (b == "reflect") sc.barrier = sde::BarrierScheme::Reflect;
        else if (b == "project") sc.barrier = sde::BarrierScheme::Project;
        else throw UsageError("barrier must be reflect or project");
    }
    usage_guard([&] {
        sc.validate();
        return 0;
    });

    Table tab;
    json meta{{"target", target}, {"seed", sc.seed}, {"trials", sc.trials}};
    using Rows = std::vector<std::vector<double>>;
    std::function<Rows(std::size_t)> trial_rows;

    auto grid_rows = [](std::size_t trial, const sde::PathGrid& g, bool with_push) {
        Rows rows;
        for (std::size_t k = 0; k < g.times.size(); ++k) {
            std::vector<double> r{double(trial), g.times[k]};
            r.insert(r.end(), g.states[k].begin(), g.states[k].end());
            if (with_push) r.insert(r.end(), g.push_trace[k].begin(), g.push_trace[k].end());
            rows.push_back(std::move(r));
        }
        return rows;
    };
    auto state_columns = [&](std::size_t n, const std::string& prefix) {
        for (std::size_t i = 0; i < n; ++i) tab.columns.push_back(prefix + std::to_string(i + 1));
    };
    tab.columns = {"trial", "time"};

    if (target == "besq" || target == "dual") {
        const double lambda = get_num(cfg, "lambda", 0.0);
        const double x0 = get_num(cfg, "x0", 0.0, true);
        state_columns(1, "x");
        trial_rows = [=, &grid_rows](std::size_t t) {
            return grid_rows(t, target == "besq" ? sde::simulate_besq_lambda(params, lambda, x0, sc, t)
                                                 : sde::simulate_dual(params, lambda, x0, sc, t),
                             false);
        };
    } else if (target == "matrix") {
        const DriftSpectrum mu = get_mu(cfg);
        const auto K = static_cast<std::size_t>(get_num(cfg, "K", 0.0, true));
        if (K < mu.size()) throw UsageError("matrix target needs K >= N");
        const auto M = matproc::drift_matrix(K, mu.mu);
        const double T = sc.horizon;
        meta["K"] = K;
        state_columns(mu.size(), "eig");
        trial_rows = [=](std::size_t t) {
            Stream s(sc.seed, t);
            std::vector<double> r{double(t), T};
            const auto e = matproc::eval_matrix_process(M, T, s);
            r.insert(r.end(), e.begin(), e.end());
            return Rows{r};
        };
    } else if (target == "conditioned-sde") {
        const DriftSpectrum mu = get_mu(cfg);
        if (cfg.contains("t0")) {
            const double t0 = get_num(cfg, "t0", 1e-2);
            if (mu.size() != 2 || cfg.contains("x0")) throw UsageError("start from the origin (t0) supports N = 2 without x0");
            auto law = std::make_shared<kernels::Chamber2Density>(
                usage_guard([&] { return kernels::entrance_chamber2(params, mu, t0); }));
            state_columns(2, "z");
            trial_rows = [=, &grid_rows](std::size_t t) {
                return grid_rows(t, sde::simulate_conditioned_from_origin(params, mu, *law, t0, sc, t), false);
            };
        } else {
            const auto x0 = get_vec(cfg, "x0");
            usage_guard([&] {
                validate_chamber(x0);
                return 0;
            });
            if (x0.size() != mu.size()) throw UsageError("x0 and mu sizes differ");
            state_columns(x0.size(), "z");
            trial_rows = [=, &grid_rows](std::size_t t) {
                return grid_rows(t, sde::simulate_conditioned(params, mu, x0, sc, t), false);
            };
        }
    } else if (target == "half-array" || target == "edge") {
        const DriftSpectrum mu = get_mu(cfg);
        const std::size_t N = mu.size();
        if (mu.degenerate_zero) throw UsageError("half-array and edge targets need a nonzero drift spectrum");
        std::function<HalfArray(std::size_t)> init;
        if (cfg.contains("top") == cfg.contains("init")) throw UsageError("give exactly one of 'top' (Gibbs start) or 'init'");
        if (cfg.contains("top")) {
            const auto top = get_vec(cfg, "top");
            if (top.size() != N) throw UsageError("top size must equal mu size");
            usage_guard([&] {
                validate_chamber(top, true);
                return 0;
            });
            auto bundle = std::make_shared<gibbs::PsiBundle>(gibbs::PsiBundle::besq(params, mu));
            init = [=](std::size_t t) {
                Stream s = Stream(sc.seed, t).split(1000);
                return gibbs::sample_gibbs(*bundle, top, s);
            };
        } else {
            HalfArray a;
            for (const auto& row : cfg["init"]) a.rows.push_back(row.get<std::vector<double>>());
            if (a.N() != N || a.levels() != 2 * N - 1 || !a.valid(false)) throw UsageError("init is not a half array for this mu");
            init = [=](std::size_t) { return a; };
        }
        if (target == "half-array") {
            std::vector<std::string> names;
            for (std::size_t k = 1; k <= 2 * N - 1; ++k)
                for (std::size_t i = 1; i <= (k + 1) / 2; ++i) names.push_back(std::to_string(k) + "_" + std::to_string(i));
            for (const auto& n : names) tab.columns.push_back("x" + n);
            for (const auto& n : names) tab.columns.push_back("push_up" + n);
            for (const auto& n : names) tab.columns.push_back("push_down" + n);
            trial_rows = [=, &grid_rows](std::size_t t) {
                return grid_rows(t, sde::simulate_half_array(params, mu, init(t), sc, t), true);
            };
        } else {
            const std::size_t L = 2 * N - 1;
            state_columns(L, "x");
            state_columns(L, "push");
            trial_rows = [=, &grid_rows](std::size_t t) {
                const HalfArray a = init(t);
                std::vector<double> x0;
                for (std::size_t k = 1; k <= L; ++k) x0.push_back(a.rows[k - 1].back());
                auto g = sde::simulate_edge(params, mu, x0, sc, t);
                for (auto& p : g.push_trace) p.resize(L);  // one-sided: only upward pushes
                return grid_rows(t, g, true);
            };
        }
    } else {
        throw UsageError("unknown target '" + target + "'");
    }

    const auto per_trial = usage_guard([&] { return parallel::map_trials<Rows>(sc.trials, jobs, trial_rows); });
    for (const auto& rows : per_trial)
        for (const auto& r : rows) tab.rows.push_back(r);
    emit(tab, fmt, out, meta);
}

}  // namespace ncbesq::commands
