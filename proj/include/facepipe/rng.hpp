#pragma once

#include <cstdint>
#include <random>

#include "facepipe/types.hpp"

namespace facepipe {

/// Deterministic random source. One instance per (seed, frame, stage)
/// stream, so results do not depend on thread interleaving. All samplers
/// are implemented here rather than via std:: distributions, whose output
/// is not pinned down by the standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Stream for a pipeline stage working on one frame.
    static Rng stream(std::uint64_t scenario_seed, std::uint64_t frame_id, Stage stage);

    std::uint64_t next_u64();

    /// Uniform in [0,1).
    double uniform01();
    /// Uniform in [lo,hi).
    double uniform(double lo, double hi);
    /// Box-Muller; two engine draws per sample.
    double normal(double mean, double sigma);
    bool bernoulli(double p);
    /// Knuth multiplication method; fine for the small means used here.
    int poisson(double mean);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used to derive well-separated stream seeds.
std::uint64_t mix64(std::uint64_t z);

} // namespace facepipe
