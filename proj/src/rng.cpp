#include "ppbench/rng.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace ppbench {

std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words) {
    std::uint64_t state = base;
    std::uint64_t acc = splitmix64_next(state);
    for (std::uint64_t w : words) {
        state = acc ^ w;
        acc = splitmix64_next(state);
    }
    return acc;
}

std::uint64_t Rng::bounded(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::bounded: n must be positive");
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return x % n;
}

double Rng::unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> sample_indices(Rng& rng, std::size_t population, std::size_t n) {
    if (n > population) {
        throw std::invalid_argument("sample_indices: sample size exceeds population");
    }
    std::vector<std::size_t> idx(population);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(population - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    return idx;
}

} // namespace ppbench
