#pragma once

#include <cstdint>
#include <random>

namespace vqr {

/// Portable random source used by every seeded component.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so all
/// derived variates are computed here with explicit formulas:
///
///   uniform01   (engine() >> 11) * 2^-53, in [0, 1)
///   uniform_index(n)   Lemire multiply-shift with rejection, unbiased
///   normal      Box-Muller (cosine branch only, one engine pair per draw)
///
/// Independent streams (per bootstrap batch, per cost evaluation, ...) are
/// seeded with derive_seed(master, index), a SplitMix64 mix of both values.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t uniform_index(std::uint64_t n);

    double normal();

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

} // namespace vqr
