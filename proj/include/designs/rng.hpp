#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace designs {

// Deterministic splitmix64 generator.  Self-contained so that frozen test
// values and seeded pipeline runs reproduce across platforms and standard
// library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n); n > 0.  Rejection sampling keeps it unbiased.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (-n) % n;
        while (true) {
            std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

    // Independent substream for a named stage of a seeded run.
    Rng substream(const std::string& tag) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (char c : tag) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        return Rng(state_ ^ h);
    }

private:
    std::uint64_t state_;
};

}  // namespace designs
