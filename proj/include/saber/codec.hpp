#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "saber/params.hpp"
#include "saber/ring.hpp"

// Bit packing between coefficient arrays and byte strings. Convention is
// little-endian bit order: coefficient i occupies stream bits
// [i*width, (i+1)*width), and stream bit j lives in byte j/8 at bit j%8.
// These layouts are the wire format of keys and ciphertexts and must stay
// stable across versions.

namespace saber {

constexpr std::size_t packed_bytes(std::size_t count, unsigned width) {
    return count * width / 8;
}

inline void pack_bits(std::span<const std::uint16_t> coeffs, unsigned width,
                      std::span<std::uint8_t> out) {
    if (out.size() != packed_bytes(coeffs.size(), width))
        throw std::invalid_argument("pack_bits: output length mismatch");
    const std::uint16_t mask = coeff_mask(width);
    for (auto& b : out) b = 0;
    std::size_t bit = 0;
    for (std::uint16_t c : coeffs) {
        if (width < 16 && (c & ~mask))
            throw std::invalid_argument("pack_bits: coefficient not normalized to width");
        for (unsigned k = 0; k < width; ++k, ++bit)
            out[bit / 8] |= static_cast<std::uint8_t>(((c >> k) & 1u) << (bit % 8));
    }
}

inline void unpack_bits(std::span<const std::uint8_t> in, unsigned width,
                        std::span<std::uint16_t> out) {
    if (in.size() != packed_bytes(out.size(), width))
        throw std::invalid_argument("unpack_bits: input length mismatch");
    std::size_t bit = 0;
    for (auto& c : out) {
        c = 0;
        for (unsigned k = 0; k < width; ++k, ++bit)
            c |= static_cast<std::uint16_t>(((in[bit / 8] >> (bit % 8)) & 1u) << k);
    }
}

struct PackedPoly {
    std::vector<std::uint8_t> bytes;
    unsigned width = 0;
};

inline PackedPoly pack(const RingElem& a, unsigned width) {
    PackedPoly p;
    p.width = width;
    p.bytes.resize(packed_bytes(kN, width));
    pack_bits(std::span<const std::uint16_t>(a.coeffs), width,
              std::span<std::uint8_t>(p.bytes));
    return p;
}

inline RingElem unpack(const PackedPoly& p) {
    if (p.bytes.size() != packed_bytes(kN, p.width))
        throw std::invalid_argument("unpack: byte length mismatch");
    RingElem a;
    a.mod_bits = p.width;
    unpack_bits(std::span<const std::uint8_t>(p.bytes), p.width,
                std::span<std::uint16_t>(a.coeffs));
    return a;
}

// Secrets are stored packed at eps_q width; the sign bit is re-extended on
// load so coefficients come back in [-mu/2, mu/2].
inline void pack_secret(const SecretVec& s, std::span<std::uint8_t> out,
                        const SaberParams& prm = kSaber) {
    const std::size_t per_poly = packed_bytes(kN, prm.eps_q);
    if (out.size() != kL * per_poly)
        throw std::invalid_argument("pack_secret: output length mismatch");
    for (std::size_t i = 0; i < kL; ++i) {
        std::array<std::uint16_t, kN> masked;
        for (std::size_t j = 0; j < kN; ++j)
            masked[j] = s[i].coeffs[j] & coeff_mask(prm.eps_q);
        pack_bits(masked, prm.eps_q, out.subspan(i * per_poly, per_poly));
    }
}

inline SecretVec unpack_secret(std::span<const std::uint8_t> in,
                               const SaberParams& prm = kSaber) {
    const std::size_t per_poly = packed_bytes(kN, prm.eps_q);
    if (in.size() != kL * per_poly)
        throw std::invalid_argument("unpack_secret: input length mismatch");
    const std::uint16_t sign_bit = static_cast<std::uint16_t>(1u << (prm.eps_q - 1));
    const std::uint16_t extend = static_cast<std::uint16_t>(~coeff_mask(prm.eps_q));
    SecretVec s;
    for (std::size_t i = 0; i < kL; ++i) {
        std::array<std::uint16_t, kN> raw;
        unpack_bits(in.subspan(i * per_poly, per_poly), prm.eps_q, raw);
        for (std::size_t j = 0; j < kN; ++j)
            s[i].coeffs[j] = static_cast<std::uint16_t>(
                raw[j] & sign_bit ? raw[j] | extend : raw[j]);
    }
    return s;
}

// Re-packs an eps_q-width secret vector as polynomials mod p: unpack at
// eps_q bits, then mask down to eps_p bits.
inline std::array<RingElem, kL> bs2polvecp(std::span<const std::uint8_t> packed,
                                           const SaberParams& prm = kSaber) {
    const std::size_t per_poly = packed_bytes(kN, prm.eps_q);
    if (packed.size() != kL * per_poly)
        throw std::invalid_argument("bs2polvecp: input length mismatch");
    std::array<RingElem, kL> out;
    for (std::size_t i = 0; i < kL; ++i) {
        unpack_bits(packed.subspan(i * per_poly, per_poly), prm.eps_q,
                    std::span<std::uint16_t>(out[i].coeffs));
        out[i].mod_bits = prm.eps_p;
        out[i].normalize();
    }
    return out;
}

}  // namespace saber
