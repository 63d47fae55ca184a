#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// FIPS-202 sponge functions: SHA3-256, SHA3-512 and the SHAKE-128 XOF.
// This is the only place in the library that knows about Keccak; all
// other modules consume it through the functions below.

namespace saber {

namespace keccak_detail {

inline constexpr std::array<std::uint64_t, 24> kRoundConstants = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// Rotation offsets for lane (x, y) stored at index x + 5y.
inline constexpr std::array<unsigned, 25> kRho = {
    0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43,
    25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14,
};

using State = std::array<std::uint64_t, 25>;

inline void permute(State& st) {
    for (unsigned round = 0; round < 24; ++round) {
        // theta
        std::uint64_t c[5];
        for (unsigned x = 0; x < 5; ++x)
            c[x] = st[x] ^ st[x + 5] ^ st[x + 10] ^ st[x + 15] ^ st[x + 20];
        for (unsigned x = 0; x < 5; ++x) {
            const std::uint64_t d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
            for (unsigned y = 0; y < 25; y += 5) st[x + y] ^= d;
        }
        // rho + pi
        State b;
        for (unsigned x = 0; x < 5; ++x)
            for (unsigned y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = std::rotl(st[x + 5 * y], kRho[x + 5 * y]);
        // chi
        for (unsigned y = 0; y < 25; y += 5)
            for (unsigned x = 0; x < 5; ++x)
                st[x + y] = b[x + y] ^ (~b[(x + 1) % 5 + y] & b[(x + 2) % 5 + y]);
        // iota
        st[0] ^= kRoundConstants[round];
    }
}

inline void xor_byte(State& st, std::size_t i, std::uint8_t v) {
    st[i / 8] ^= static_cast<std::uint64_t>(v) << (8 * (i % 8));
}

inline std::uint8_t get_byte(const State& st, std::size_t i) {
    return static_cast<std::uint8_t>(st[i / 8] >> (8 * (i % 8)));
}

// Absorbs the whole message with the given domain-separation suffix and
// leaves the state ready for squeezing.
inline void absorb(State& st, std::size_t rate, std::span<const std::uint8_t> msg,
                   std::uint8_t domain) {
    std::size_t pos = 0;
    for (std::uint8_t byte : msg) {
        xor_byte(st, pos++, byte);
        if (pos == rate) {
            permute(st);
            pos = 0;
        }
    }
    xor_byte(st, pos, domain);
    xor_byte(st, rate - 1, 0x80);
    permute(st);
}

inline void squeeze(State& st, std::size_t rate, std::size_t& pos,
                    std::span<std::uint8_t> out) {
    for (std::uint8_t& byte : out) {
        if (pos == rate) {
            permute(st);
            pos = 0;
        }
        byte = get_byte(st, pos++);
    }
}

inline constexpr std::size_t kSha3_256Rate = 136;
inline constexpr std::size_t kSha3_512Rate = 72;
inline constexpr std::size_t kShake128Rate = 168;

}  // namespace keccak_detail

inline std::array<std::uint8_t, 32> sha3_256(std::span<const std::uint8_t> msg) {
    keccak_detail::State st{};
    keccak_detail::absorb(st, keccak_detail::kSha3_256Rate, msg, 0x06);
    std::array<std::uint8_t, 32> out;
    std::size_t pos = 0;
    keccak_detail::squeeze(st, keccak_detail::kSha3_256Rate, pos, out);
    return out;
}

inline std::array<std::uint8_t, 64> sha3_512(std::span<const std::uint8_t> msg) {
    keccak_detail::State st{};
    keccak_detail::absorb(st, keccak_detail::kSha3_512Rate, msg, 0x06);
    std::array<std::uint8_t, 64> out;
    std::size_t pos = 0;
    keccak_detail::squeeze(st, keccak_detail::kSha3_512Rate, pos, out);
    return out;
}

// Incremental SHAKE-128 stream: absorb once, squeeze any number of times.
// Squeezing k then j bytes yields the same stream as squeezing k+j at once.
class XofStream {
public:
    explicit XofStream(std::span<const std::uint8_t> seed) {
        keccak_detail::absorb(state_, keccak_detail::kShake128Rate, seed, 0x1f);
    }

    void squeeze(std::span<std::uint8_t> out) {
        keccak_detail::squeeze(state_, keccak_detail::kShake128Rate, pos_, out);
    }

    std::vector<std::uint8_t> squeeze(std::size_t n) {
        std::vector<std::uint8_t> out(n);
        squeeze(std::span<std::uint8_t>(out));
        return out;
    }

private:
    keccak_detail::State state_{};
    std::size_t pos_ = 0;
};

inline std::vector<std::uint8_t> shake128(std::span<const std::uint8_t> seed,
                                          std::size_t out_len) {
    return XofStream(seed).squeeze(out_len);
}

}  // namespace saber
