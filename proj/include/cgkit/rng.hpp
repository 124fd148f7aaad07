#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "cgkit/point.hpp"

namespace cgkit {

namespace detail {
// SplitMix64 finalizer (Steele, Lea, Flood 2014 / Vigna).
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}
}  // namespace detail

// Counter-based splittable stream: draw i of stream (seed, stream_id) is
// mix64(key + i * gamma), so identical (seed, stream_id) reproduce the same
// sequence and distinct stream_ids get statistically independent sequences.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_(detail::mix64(seed + 0x9e3779b97f4a7c15ULL) ^
               detail::mix64(stream_id * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL)),
          gamma_(detail::mix64(key_ ^ (stream_id + 0x9e3779b97f4a7c15ULL)) | 1ULL) {}

    std::uint64_t next_u64() { return detail::mix64(key_ + (++counter_) * gamma_); }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1].
    double next_double_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; two uniforms per draw, no caching, so
    // the draw order is a pure function of the counter.
    double next_normal() {
        double u1 = next_double_open();
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Uniform index in [0, n) by 128-bit multiply (Lemire).
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

  private:
    std::uint64_t key_;
    std::uint64_t gamma_;
    std::uint64_t counter_ = 0;
};

// d i.i.d. standard normal entries from the stream.
inline Point gaussian_direction(RngStream& rng, int d) {
    if (d < 1) throw std::invalid_argument("gaussian_direction: d must be >= 1");
    Point u(d);
    for (int i = 0; i < d; ++i) u[i] = rng.next_normal();
    return u;
}

}  // namespace cgkit
