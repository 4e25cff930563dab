#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ruinwerk::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Streams are keyed by (seed, path_index, stream_id); the 128-bit counter
// advances per block, so any path/component substream can be regenerated
// independently of execution order. This is what makes multi-threaded
// simulations bitwise reproducible.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t seed, std::uint64_t path_index, std::uint32_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path_index)),
          path_hi_xor_stream_(static_cast<std::uint32_t>(path_index >> 32) ^ (stream_id * 0x9E3779B9u)) {}

    // One block of four 32-bit outputs for an explicit counter value.
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

    std::uint64_t next_u64() {
        if (buffered_) {
            buffered_ = false;
            return buffer_;
        }
        const auto out = block({static_cast<std::uint32_t>(draw_),
                                static_cast<std::uint32_t>(draw_ >> 32),
                                path_lo_, path_hi_xor_stream_},
                               key_);
        ++draw_;
        buffer_ = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
        buffered_ = true;
        return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    }

    // Uniform on the open interval (0,1); safe under log().
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_xor_stream_;
    std::uint64_t draw_ = 0;
    std::uint64_t buffer_ = 0;
    bool buffered_ = false;
};

// Standard normal via Box-Muller (fixed draw count, no rejection).
class GaussianSampler {
public:
    double operator()(Philox4x32& gen) {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = gen.uniform();
        const double u2 = gen.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline double exponential(Philox4x32& gen, double rate) {
    return -std::log(gen.uniform()) / rate;
}

// Gamma(shape, scale) by Marsaglia-Tsang, with the shape<1 boost.
double gamma(Philox4x32& gen, GaussianSampler& gauss, double shape, double scale);

// Spectrally negative alpha-stable increment by Chambers-Mallows-Stuck,
// skewness -1, scaled so that E[exp(beta * X)] = exp(scale_q * beta^alpha * dt).
double stable_increment(Philox4x32& gen, double alpha, double scale_q, double dt);

// Maximum over [0, len] of a Brownian motion with arbitrary drift, conditioned
// on start 0 and end `delta`, volatility `sigma` (per sqrt time). Standard
// Brownian-bridge inverse-CDF formula; exact in law.
inline double bridge_max(Philox4x32& gen, double delta, double sigma, double len) {
    const double u = gen.uniform();
    return 0.5 * (delta + std::sqrt(delta * delta - 2.0 * sigma * sigma * len * std::log(u)));
}

inline double bridge_min(Philox4x32& gen, double delta, double sigma, double len) {
    const double u = gen.uniform();
    return 0.5 * (delta - std::sqrt(delta * delta - 2.0 * sigma * sigma * len * std::log(u)));
}

} // namespace ruinwerk::rng
