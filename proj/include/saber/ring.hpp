#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "saber/params.hpp"

// Polynomial containers for Z_{2^k}[x]/(x^256 + 1) and the quadratic
// negacyclic multiplier that serves as ground truth for the fast paths.
//
// Coefficients live in a 16-bit carrier. Arithmetic is naturally mod 2^16;
// reduction to the active modulus is an explicit masking step. The three
// bits of headroom above eps_q are exactly what the interpolation stage's
// exact divisions consume.

namespace saber {

constexpr std::uint16_t coeff_mask(unsigned mod_bits) {
    return mod_bits >= 16 ? 0xffff
                          : static_cast<std::uint16_t>((1u << mod_bits) - 1);
}

struct RingElem {
    std::array<std::uint16_t, kN> coeffs{};
    unsigned mod_bits = 16;

    void normalize() {
        const std::uint16_t mask = coeff_mask(mod_bits);
        for (auto& c : coeffs) c &= mask;
    }
};

inline RingElem zero_elem(unsigned mod_bits) {
    RingElem r;
    r.mod_bits = mod_bits;
    return r;
}

inline RingElem one_elem(unsigned mod_bits) {
    RingElem r = zero_elem(mod_bits);
    r.coeffs[0] = 1;
    return r;
}

// Small-coefficient secret polynomial, coefficients in [-mu/2, mu/2],
// stored sign-extended in the same 16-bit carrier so the multiplier
// datapath is shared with public operands.
struct SecretPoly {
    std::array<std::uint16_t, kN> coeffs{};

    int coeff_signed(std::size_t i) const {
        return static_cast<std::int16_t>(coeffs[i]);
    }
    void set_coeff(std::size_t i, int v) {
        coeffs[i] = static_cast<std::uint16_t>(v);
    }
};

using SecretVec = std::array<SecretPoly, kL>;
using Matrix = std::array<std::array<RingElem, kL>, kL>;

// Secret viewed as a ring element mod 2^mod_bits; two's-complement masking
// is reduction mod a power of two.
inline RingElem lifted(const SecretPoly& s, unsigned mod_bits) {
    RingElem r;
    r.mod_bits = mod_bits;
    r.coeffs = s.coeffs;
    r.normalize();
    return r;
}

inline RingElem poly_add(const RingElem& a, const RingElem& b) {
    if (a.mod_bits != b.mod_bits)
        throw std::invalid_argument("poly_add: modulus mismatch");
    RingElem out;
    out.mod_bits = a.mod_bits;
    const std::uint16_t mask = coeff_mask(a.mod_bits);
    for (std::size_t i = 0; i < kN; ++i)
        out.coeffs[i] = static_cast<std::uint16_t>(a.coeffs[i] + b.coeffs[i]) & mask;
    return out;
}

inline RingElem poly_const_add(const RingElem& a, std::uint16_t c) {
    if (a.mod_bits < 16 && c >= (1u << a.mod_bits))
        throw std::invalid_argument("poly_const_add: constant out of range");
    RingElem out;
    out.mod_bits = a.mod_bits;
    const std::uint16_t mask = coeff_mask(a.mod_bits);
    for (std::size_t i = 0; i < kN; ++i)
        out.coeffs[i] = static_cast<std::uint16_t>(a.coeffs[i] + c) & mask;
    return out;
}

// Drops the low (from_bits - to_bits) bits of every coefficient. Rounding
// constants are added separately beforehand.
inline RingElem shift_round(const RingElem& a, unsigned from_bits, unsigned to_bits) {
    if (from_bits <= to_bits)
        throw std::invalid_argument("shift_round: from_bits must exceed to_bits");
    RingElem out;
    out.mod_bits = to_bits;
    const unsigned shift = from_bits - to_bits;
    for (std::size_t i = 0; i < kN; ++i)
        out.coeffs[i] = static_cast<std::uint16_t>(a.coeffs[i] >> shift);
    return out;
}

// c_k = sum_{i+j=k} a_i b_j - sum_{i+j=k+n} a_i b_j  (mod 2^mod_bits).
// Quadratic on purpose; length comes from the spans so the 64-coefficient
// base ring of the fast multiplier can be checked with the same code.
inline void schoolbook_negacyclic(std::span<const std::uint16_t> a,
                                  std::span<const std::uint16_t> b,
                                  std::span<std::uint16_t> out,
                                  unsigned mod_bits) {
    const std::size_t n = a.size();
    if (b.size() != n || out.size() != n)
        throw std::invalid_argument("schoolbook_negacyclic: length mismatch");
    for (auto& c : out) c = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint16_t ai = a[i];
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint16_t prod = static_cast<std::uint16_t>(ai * b[j]);
            const std::size_t k = i + j;
            if (k < n)
                out[k] = static_cast<std::uint16_t>(out[k] + prod);
            else
                out[k - n] = static_cast<std::uint16_t>(out[k - n] - prod);
        }
    }
    const std::uint16_t mask = coeff_mask(mod_bits);
    for (auto& c : out) c &= mask;
}

inline RingElem schoolbook_negacyclic(const RingElem& a, const RingElem& b,
                                      unsigned mod_bits) {
    RingElem out;
    out.mod_bits = mod_bits;
    schoolbook_negacyclic(std::span<const std::uint16_t>(a.coeffs),
                          std::span<const std::uint16_t>(b.coeffs),
                          std::span<std::uint16_t>(out.coeffs), mod_bits);
    return out;
}

}  // namespace saber
