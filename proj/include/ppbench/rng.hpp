#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ppbench {

// splitmix64 finalizer; the building block for seed derivation.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Deterministic sub-stream seed: chain splitmix64 over (base, words...).
// Every random decision in a run draws from a stream derived this way, so
// samples are independent of execution order and safe to resume.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words);

// mt19937_64 with an unbiased bounded draw. The standard pins the raw
// mt19937_64 output sequence, and the rejection sampling below avoids the
// implementation-defined std::uniform_int_distribution, so streams are
// reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform draw in [0, n).
    std::uint64_t bounded(std::uint64_t n);

    // Uniform double in [0, 1).
    double unit();

private:
    std::mt19937_64 gen_;
};

// n distinct indices drawn without replacement from [0, population), in
// draw order (partial Fisher-Yates). Throws std::invalid_argument when
// n > population.
std::vector<std::size_t> sample_indices(Rng& rng, std::size_t population, std::size_t n);

} // namespace ppbench
