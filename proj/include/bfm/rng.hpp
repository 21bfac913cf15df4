#pragma once

#include <cstdint>

namespace bfm {

/// PCG-64 (128-bit LCG state, XSL-RR output), the same stream as numpy's
/// PCG64 bit generator for a given (state, inc).
class Pcg64 {
public:
    using u128 = unsigned __int128;

    static constexpr u128 kMultiplier =
        (static_cast<u128>(0x2360ED051FC65DA4ULL) << 64) | 0x4385DF649FCCF645ULL;
    static constexpr u128 kDefaultIncrement =
        (static_cast<u128>(0x5851F42D4C957F2DULL) << 64) | 0x14057B7EF767814FULL;

    /// Reference seeding: state = 0, step, state += seed, step, with the
    /// default increment.
    explicit Pcg64(std::uint64_t seed) : inc_(kDefaultIncrement) {
        step();
        state_ += seed;
        step();
    }

    static Pcg64 from_state(u128 state, u128 inc) {
        Pcg64 r(0);
        r.state_ = state;
        r.inc_ = inc;
        return r;
    }

    std::uint64_t next() {
        step();
        const std::uint64_t x = static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
        const unsigned rot = static_cast<unsigned>(state_ >> 122);
        return (x >> rot) | (x << ((64u - rot) & 63u));
    }

    /// [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Box-Muller; every call consumes exactly two 64-bit outputs.
    double normal(double mean = 0.0, double sigma = 1.0);

    u128 state() const { return state_; }
    u128 increment() const { return inc_; }

private:
    void step() { state_ = state_ * kMultiplier + inc_; }

    u128 state_ = 0;
    u128 inc_;
};

}  // namespace bfm
