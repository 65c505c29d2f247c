#pragma once

#include <array>
#include <cstdint>

namespace hawkes {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

// Stream of uniforms for one (seed, stream) pair; the draw index is the other half of the counter.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)), stream_hi_(static_cast<std::uint32_t>(stream >> 32))
    {
    }

    // Uniform on (0, 1) with 53 random bits.
    double uniform()
    {
        if (pos_ == 2)
            refill();
        const std::uint64_t hi = buf_[2 * pos_], lo = buf_[2 * pos_ + 1];
        ++pos_;
        const std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t draws() const { return counter_; }

private:
    void refill()
    {
        buf_ = Philox4x32::block({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                  stream_lo_, stream_hi_},
                                 key_);
        ++counter_;
        pos_ = 0;
    }

    Philox4x32::Key key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t counter_ = 0;
    Philox4x32::Counter buf_{};
    int pos_ = 2;
};

} // namespace hawkes
