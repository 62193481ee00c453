#include "facepipe/rng.hpp"

#include <cmath>

#include "facepipe/error.hpp"

namespace facepipe {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng Rng::stream(std::uint64_t scenario_seed, std::uint64_t frame_id, Stage stage) {
    std::uint64_t s = mix64(scenario_seed);
    s = mix64(s ^ frame_id);
    s = mix64(s ^ (static_cast<std::uint64_t>(stage) + 1));
    return Rng(s);
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double Rng::normal(double mean, double sigma) {
    // Draws both uniforms even when sigma == 0, keeping stream
    // consumption independent of model parameters.
    const double u1 = 1.0 - uniform01(); // (0,1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(2.0 * M_PI * u2);
}

bool Rng::bernoulli(double p) {
    if (p < 0.0 || p > 1.0)
        throw InvalidInput("bernoulli probability out of [0,1]");
    return uniform01() < p;
}

int Rng::poisson(double mean) {
    if (mean < 0.0)
        throw InvalidInput("poisson mean must be >= 0");
    if (mean == 0.0)
        return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = uniform01();
    while (prod > limit) {
        ++k;
        prod *= uniform01();
    }
    return k;
}

} // namespace facepipe
