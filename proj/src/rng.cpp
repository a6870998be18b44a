#include "ncbesq/rng.hpp"

namespace ncbesq {

namespace {
std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix(splitmix(seed) ^ splitmix(index + 0x632be59bd9b4e019ULL));
}

Stream::Stream(std::uint64_t seed, std::uint64_t index) : key_(derive_seed(seed, index)), engine_(key_) {}

double Stream::uniform() { return (double(engine_() >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace ncbesq
