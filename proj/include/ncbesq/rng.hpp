#pragma once

#include <boost/random/normal_distribution.hpp>

#include <cstdint>
#include <random>

namespace ncbesq {

// SplitMix64 finalizer applied to (seed, index); a counter-based stream key.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Per-trial random stream. Identical (seed, index) give identical draws.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t index);

    double normal() { return normal_(engine_); }
    double uniform();  // in (0, 1)
    std::uint64_t key() const { return key_; }
    // Independent child stream, e.g. for an initialization phase.
    Stream split(std::uint64_t tag) const { return Stream(key_, tag); }

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
};

}  // namespace ncbesq
