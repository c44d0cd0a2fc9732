#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace wfren {

// splitmix64 finalizer; used both as a PRNG seeder and as a key mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return mix64(h);
}

// xoshiro256++ with hand-rolled distributions. All sampling in the toolkit
// goes through this class so that runs are bit-reproducible across
// compilers and standard libraries.
class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t key) {
        std::uint64_t z = key;
        for (auto& w : s_) {
            z = mix64(z);
            w = z;
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ull; }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on the open interval (0,1)
    double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, r2;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            r2 = u * u + v * v;
        } while (r2 >= 1.0 || r2 == 0.0);
        const double f = std::sqrt(-2.0 * std::log(r2) / r2);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

    double exponential(double mean) { return -mean * std::log(uniform()); }

    // Gamma(shape, 1), Marsaglia-Tsang, with the u^(1/a) boost for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Beta(a,b). Shape parameters below `kShapeFloor` are treated as point
    // mass at the corresponding endpoint; a simultaneous underflow of both
    // gamma draws falls back to the two-point limit law.
    double beta(double a, double b) {
        static constexpr double kShapeFloor = 1e-12;
        if (a < kShapeFloor && b < kShapeFloor) return uniform() < a / (a + b) ? 1.0 : 0.0;
        if (a < kShapeFloor) return 0.0;
        if (b < kShapeFloor) return 1.0;
        const double g1 = gamma(a);
        const double g2 = gamma(b);
        if (g1 + g2 <= 0.0) return uniform() < a / (a + b) ? 1.0 : 0.0;
        return g1 / (g1 + g2);
    }

    long long poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        long long n = 0;
        while (mean > 256.0) {  // chunk large means through the exact sampler
            n += poisson_knuth(256.0);
            mean -= 256.0;
        }
        return n + poisson_knuth(mean);
    }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    long long poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        long long n = -1;
        double prod = 1.0;
        do {
            ++n;
            prod *= uniform();
        } while (prod > limit);
        return n;
    }

    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

// Value-semantic key into the stream-splitting tree. All randomness flows
// from one root seed; every (label, index...) path yields an independent
// stream, so adding replicas or reordering parallel work never perturbs
// existing draws.
struct StreamKey {
    std::uint64_t state;

    static StreamKey root(std::uint64_t seed) { return StreamKey{mix64(seed ^ 0x5851f42d4c957f2dull)}; }

    StreamKey sub(std::string_view label) const { return StreamKey{mix64(state ^ hash_label(label))}; }

    StreamKey sub(std::uint64_t index) const {
        return StreamKey{mix64(state ^ mix64(index ^ 0x9e3779b97f4a7c15ull))};
    }

    Rng rng() const { return Rng(state); }
};

}  // namespace wfren
