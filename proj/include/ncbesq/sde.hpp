#pragma once

#include "ncbesq/diffspec.hpp"
#include "ncbesq/halfarray.hpp"
#include "ncbesq/kernels.hpp"
#include "ncbesq/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncbesq::sde {

// How a coordinate that crossed a barrier during an Euler step is put back.
enum class BarrierScheme { Reflect, Project };

struct SimConfig {
    double dt = 1e-3;
    double horizon = 1.0;
    double boundary_guard = 0.0;  // required minimal initial gap
    std::uint64_t seed = 0;
    std::size_t trials = 1;
    std::size_t record_every = 0;  // 0 records only the initial and final states
    bool pushes = true;            // half array: disable to get independent diffusions
    BarrierScheme barrier = BarrierScheme::Reflect;
    double gap_factor = 10.0;      // conditioned SDE: refine while gap < gap_factor sqrt(2 a dt)
    int max_halvings = 24;         // conditioned SDE: smallest step dt / 2^max_halvings
    int tie_halvings = 20;         // half array: bridge refinements allowed to resolve same-level ties
    std::size_t jobs = 0;  // worker threads for multi-trial estimators, 0 = default

    void validate() const;
    std::size_t steps() const;  // number of Euler steps covering the horizon
};

struct PathGrid {
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // flattened state per recorded time
    std::vector<double> push_up, push_down;   // cumulative barrier displacement per coordinate at the end
    std::vector<std::vector<double>> push_trace;  // per recorded time: push_up then push_down (arrays only)
    bool absorbed = false;
    std::size_t collisions = 0;  // same-level coincidences seen at step ends
    std::size_t refinements = 0;  // conditioned SDE: substeps taken beyond the base grid
    double dt = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;

    const std::vector<double>& final_state() const { return states.back(); }
};

// Raised when a conditioned path cannot be kept in the chamber at the smallest step.
class StepUnderflow : public std::runtime_error {
public:
    StepUnderflow(const std::string& what, double time, std::vector<double> state)
        : std::runtime_error(what), time(time), state(std::move(state)) {}
    double time;
    std::vector<double> state;
};

// Every simulator draws the noise of coordinate c from Stream(seed, trial).split(c).

PathGrid simulate_besq_lambda(const BesselParams& params, double lambda, double x0, const SimConfig& cfg,
                              std::uint64_t trial = 0);

// Dual diffusion of BESQ_lambda, frozen at 0 once it gets there.
PathGrid simulate_dual(const BesselParams& params, double lambda, double x0, const SimConfig& cfg,
                       std::uint64_t trial = 0);

// Reflected interlacing dynamics on the half array; states are flattened rows.
PathGrid simulate_half_array(const BesselParams& params, const DriftSpectrum& mu, const HalfArray& init,
                             const SimConfig& cfg, std::uint64_t trial = 0);

// Rightmost-coordinate system with one-sided pushes; x0 has 2N-1 entries.
PathGrid simulate_edge(const BesselParams& params, const DriftSpectrum& mu, const std::vector<double>& x0,
                       const SimConfig& cfg, std::uint64_t trial = 0);

// Noise tag of the rightmost coordinate of level k (1-based) in the flattened half array.
std::uint64_t edge_noise_tag(std::size_t k);

PathGrid simulate_conditioned(const BesselParams& params, const DriftSpectrum& mu, const ChamberPoint& x0,
                              const SimConfig& cfg, std::uint64_t trial = 0);

// Start from the origin: exact draw from the entrance law at time t0, then SDE continuation to the horizon.
PathGrid simulate_conditioned_from_origin(const BesselParams& params, const DriftSpectrum& mu,
                                          const kernels::Chamber2Density& entrance_at_t0, double t0,
                                          const SimConfig& cfg, std::uint64_t trial = 0);

struct NoncollisionOptions {
    double tail_eps = 1e-3;  // stop a path once the separation tail bound drops below this
    bool bridge_correction = true;
};

struct NoncollisionEstimate {
    double probability;
    double std_err;
    double wilson_lo, wilson_hi;
    double tail_bound;  // mean residual collision bound over surviving paths
    std::size_t paths, survivors, early_stops;
};

// Monte Carlo probability that independent BESQ_{lambda_i} paths from x0 never swap order.
NoncollisionEstimate estimate_noncollision(const BesselParams& params, const std::vector<double>& lambdas,
                                           const std::vector<double>& x0, const SimConfig& cfg,
                                           const NoncollisionOptions& opts = {});

// Drift of the conditioned SDE at z (chamber point).
std::vector<double> conditioned_drift(const BesselParams& params, const DriftSpectrum& mu, const std::vector<double>& z);

}  // namespace ncbesq::sde
