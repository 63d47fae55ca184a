#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "saber/codec.hpp"
#include "saber/keccak.hpp"
#include "saber/params.hpp"
#include "saber/ring.hpp"

// Deterministic expansion of the two 32-byte seeds: the public matrix from
// uniform XOF output, and the secret vector from the centered binomial
// distribution via nibble hamming weights.

namespace saber {

struct MatrixSeed {
    std::array<std::uint8_t, 32> bytes{};
};

struct NoiseSeed {
    std::array<std::uint8_t, 32> bytes{};
};

// One byte per coefficient: HW(low nibble) - HW(high nibble), giving the
// centered binomial distribution with parameter mu = 8, range [-4, 4].
inline SecretPoly cbd_from_bytes(std::span<const std::uint8_t> buf,
                                 const SaberParams& prm = kSaber) {
    if (buf.size() != kN * prm.mu / 8)
        throw std::invalid_argument("cbd_from_bytes: buffer length mismatch");
    SecretPoly s;
    for (std::size_t i = 0; i < kN; ++i) {
        const int low = std::popcount(static_cast<unsigned>(buf[i] & 0x0f));
        const int high = std::popcount(static_cast<unsigned>(buf[i] >> 4));
        s.set_coeff(i, low - high);
    }
    return s;
}

inline SecretVec gen_secret(const NoiseSeed& r, const SaberParams& prm = kSaber) {
    const std::size_t per_poly = kN * prm.mu / 8;
    XofStream xof(r.bytes);
    SecretVec s;
    for (std::size_t i = 0; i < kL; ++i)
        s[i] = cbd_from_bytes(xof.squeeze(per_poly), prm);
    return s;
}

// Expands the seed into l*l polynomials mod q, filled row major in the
// order the coefficients leave the XOF. Consumes exactly l*l*n*eps_q/8
// bytes of output.
inline Matrix gen_matrix(const MatrixSeed& seed, const SaberParams& prm = kSaber) {
    const std::size_t per_poly = packed_bytes(kN, prm.eps_q);
    XofStream xof(seed.bytes);
    Matrix mat;
    for (std::size_t row = 0; row < kL; ++row) {
        for (std::size_t col = 0; col < kL; ++col) {
            const auto bytes = xof.squeeze(per_poly);
            RingElem& e = mat[row][col];
            e.mod_bits = prm.eps_q;
            unpack_bits(bytes, prm.eps_q, std::span<std::uint16_t>(e.coeffs));
        }
    }
    return mat;
}

}  // namespace saber
