/******************************************************************/
// rng.hpp
//
// Counter-based random number generation (Philox4x32-10) plus the
// distributions used throughout the project.
//
// A counter-based generator produces bit-identical streams on every
// platform and offers cheap independent substreams keyed by
// (seed, stream id). Samplers that fan out across intervals or
// replicates derive one substream per unit of work, which keeps
// results reproducible regardless of scheduling.
//
// Distributions are implemented here rather than taken from <random>
// because the standard library does not pin down the algorithms, so
// std::*_distribution output differs across toolchains.
/******************************************************************/
#ifndef EPINET_RNG_HPP
#define EPINET_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace epinet {

class Rng {
public:
    // One generator = one logical stream. Streams with the same seed but
    // different stream ids are independent.
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{static_cast<std::uint32_t>(seed & 0xffffffffu),
               static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0u, 0u,
               static_cast<std::uint32_t>(stream & 0xffffffffu),
               static_cast<std::uint32_t>(stream >> 32)},
          pos_(4) {}

    // Generator positioned at an explicit 128-bit counter; used by
    // known-answer tests of the block function.
    static Rng with_counter(std::uint64_t seed, std::uint64_t ctr_lo, std::uint64_t ctr_hi) {
        Rng rng(seed);
        rng.ctr_ = {static_cast<std::uint32_t>(ctr_lo & 0xffffffffu),
                    static_cast<std::uint32_t>(ctr_lo >> 32),
                    static_cast<std::uint32_t>(ctr_hi & 0xffffffffu),
                    static_cast<std::uint32_t>(ctr_hi >> 32)};
        return rng;
    }

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[static_cast<std::size_t>(pos_++)];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        return (hi << 32) | lo;
    }

    // uniform on [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform on the open interval (0, 1); safe to pass to log()
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // unbiased integer draw from {0, 1, ..., n-1}
    std::uint32_t uniform_int(std::uint32_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
        const std::uint32_t bound = static_cast<std::uint32_t>(-n) % n; // 2^32 mod n
        std::uint32_t x;
        do {
            x = next_u32();
        } while (x < bound);
        return x % n;
    }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    // standard normal via Box-Muller (the sine mate is discarded to keep
    // the generator stateless between calls)
    double normal() {
        const double u = uniform_pos();
        const double v = uniform_pos();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
    }

    // Gamma(shape, rate) via Marsaglia-Tsang squeeze; shape < 1 handled by
    // the usual boosting identity Gamma(a) = Gamma(a+1) * U^(1/a).
    double gamma(double shape, double rate) {
        if (shape <= 0.0 || rate <= 0.0)
            throw std::invalid_argument("gamma: shape and rate must be positive");
        if (shape < 1.0) {
            const double boost = std::pow(uniform_pos(), 1.0 / shape);
            return gamma(shape + 1.0, rate) * boost;
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
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    // index draw with probability proportional to w[i]; total = sum(w)
    std::size_t pick_weighted(const double* w, std::size_t n, double total) {
        double target = uniform() * total;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (w[i] <= 0.0) continue;
            last_positive = i;
            if (target < w[i]) return i;
            target -= w[i];
        }
        // float rounding can push target past the last bin; return it
        return last_positive;
    }

private:
    void refill() {
        std::array<std::uint32_t, 4> c = ctr_;
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = 0xD2511F53ull * c[0];
            const std::uint64_t p1 = 0xCD9E8D57ull * c[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        buf_ = c;
        pos_ = 0;
        // bump the 64-bit block position (low two counter words)
        if (++ctr_[0] == 0) ++ctr_[1];
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> buf_;
    int pos_;
};

} // namespace epinet

#endif
