#pragma once

#include <array>
#include <cstdint>

namespace qlab {

// Counter-based random stream (Philox4x32-10, Random123 constants).
//
// The 128-bit counter is laid out as {block_lo, block_hi, stream_lo,
// stream_hi} and the key is the 64-bit master seed, so distinct stream ids
// address disjoint counter subspaces under one key. Identical
// (master_seed, stream_id) therefore reproduces an identical sequence
// bit-exactly, and distinct stream ids give independent streams.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : key0_(static_cast<std::uint32_t>(master_seed)),
          key1_(static_cast<std::uint32_t>(master_seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(stream_id)),
          stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

    std::uint64_t next_u64() {
        if (buf_pos_ == 4) refill();
        const std::uint64_t lo = buf_[buf_pos_];
        const std::uint64_t hi = buf_[buf_pos_ + 1];
        buf_pos_ += 2;
        return lo | (hi << 32);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; survival-function inversion wants an open lower end.
    double next_open01() { return 1.0 - next_double(); }

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~static_cast<result_type>(0); }
    result_type operator()() { return next_u64(); }

    // One 4x32 block for the given counter/key; exposed for known-answer tests.
    static std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                                   std::uint32_t k0, std::uint32_t k1) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = kMul0 * static_cast<std::uint64_t>(ctr[0]);
            const std::uint64_t p1 = kMul1 * static_cast<std::uint64_t>(ctr[2]);
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    void refill() {
        buf_ = philox4x32({static_cast<std::uint32_t>(block_),
                           static_cast<std::uint32_t>(block_ >> 32),
                           stream_lo_, stream_hi_},
                          key0_, key1_);
        ++block_;
        buf_pos_ = 0;
    }

    std::uint32_t key0_, key1_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 4;
};

}  // namespace qlab
