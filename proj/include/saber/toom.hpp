#pragma once

#include <array>
#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "saber/params.hpp"
#include "saber/ring.hpp"

// Toom-Cook 4-way multiplication for the 256-coefficient negacyclic ring,
// in two forms:
//
//  * striding: operands are regrouped by index mod 4, so the base ring of
//    the seven 64x64 point multiplications is itself negacyclic. The ring
//    reduction happens inside the point products, the intermediate arrays
//    never grow past 64 coefficients, and loads are consecutive.
//  * classical: operands split into four contiguous 64-coefficient blocks,
//    point products are plain 127-coefficient convolutions, and the final
//    reduction mod (x^256 + 1) is an explicit pass. Kept as a second,
//    independently-structured pipeline for differential testing.
//
// Both share one evaluation and one interpolation core (the evaluation
// points {0, 1, -1, 1/2, -1/2, 2, inf} are the same); only the load/store
// index patterns differ.
//
// Evaluation and interpolation are linear, so products of a whole
// matrix row can be accumulated in the evaluated domain and interpolated
// once per row ("lazy interpolation"). The interpolation's exact divisions
// shift out at most 3 bits, which is precisely the headroom the 16-bit
// carrier leaves above the 13-bit modulus: results are exact mod 2^13.

namespace saber {

inline constexpr std::size_t kSplit = 4;            // Toom-Cook ways
inline constexpr std::size_t kLimb = kN / kSplit;   // 64, base-ring degree
inline constexpr std::size_t kPoints = 2 * kSplit - 1;

// Seven weighted 64-coefficient polynomials, one per evaluation point.
// ws[i] corresponds to point index i+1 of the evaluation order below.
struct EvalOperand {
    std::array<std::array<std::uint16_t, kLimb>, kPoints> ws{};
};

// Evaluated-domain accumulator for lazy interpolation. Zero-initialized on
// construction; the matrix-vector driver owns its lifetime.
struct EvalAccumulator {
    std::array<std::array<std::uint16_t, kLimb>, kPoints> ws{};
};

// Bijective regrouping of a polynomial by index mod 4: groups[i][j] = a[4j+i].
// This is the in-memory layout the striding variant's loads correspond to.
struct StridedView {
    std::array<std::array<std::uint16_t, kLimb>, kSplit> groups{};

    static StridedView from(std::span<const std::uint16_t, kN> a) {
        StridedView v;
        for (std::size_t j = 0; j < kLimb; ++j)
            for (std::size_t i = 0; i < kSplit; ++i)
                v.groups[i][j] = a[kSplit * j + i];
        return v;
    }

    std::array<std::uint16_t, kN> flatten() const {
        std::array<std::uint16_t, kN> a;
        for (std::size_t j = 0; j < kLimb; ++j)
            for (std::size_t i = 0; i < kSplit; ++i)
                a[kSplit * j + i] = groups[i][j];
        return a;
    }
};

namespace toom_detail {

using u16 = std::uint16_t;

// One evaluation slot: the four loaded coefficients produce the seven
// weighted values. Scalings are powers of two, done as shifts.
//   ws[6] = r0                          (x = 0)
//   ws[2] = r0+r1+r2+r3                 (x = 1)
//   ws[3] = r0-r1+r2-r3                 (x = -1)
//   ws[4] = 8r0+4r1+2r2+r3              (8 * value at x = 1/2)
//   ws[5] = 8r0-4r1+2r2-r3              (8 * value at x = -1/2)
//   ws[1] = r0+2r1+4r2+8r3              (x = 2)
//   ws[0] = r3                          (x = inf)
template <typename Out>
inline void eval_point(u16 r0, u16 r1, u16 r2, u16 r3, Out& out, std::size_t j) {
    const u16 s02 = static_cast<u16>(r0 + r2);
    const u16 s13 = static_cast<u16>(r1 + r3);
    out.ws[2][j] = static_cast<u16>(s02 + s13);
    out.ws[3][j] = static_cast<u16>(s02 - s13);
    const u16 even = static_cast<u16>((static_cast<u16>((r0 << 2)) + r2) << 1);
    const u16 odd = static_cast<u16>(static_cast<u16>(r1 << 2) + r3);
    out.ws[4][j] = static_cast<u16>(even + odd);
    out.ws[5][j] = static_cast<u16>(even - odd);
    out.ws[1][j] = static_cast<u16>(static_cast<u16>(r3 << 3) +
                                    static_cast<u16>(r2 << 2) +
                                    static_cast<u16>(r1 << 1) + r0);
    out.ws[6][j] = r0;
    out.ws[0][j] = r3;
}

constexpr u16 odd_inverse(unsigned odd) {
    // Newton iteration; each step doubles the number of correct low bits.
    u16 x = static_cast<u16>(odd);
    for (int i = 0; i < 4; ++i)
        x = static_cast<u16>(x * (2 - odd * x));
    return x;
}

static_assert(static_cast<u16>(odd_inverse(3) * 3) == 1);
static_assert(static_cast<u16>(odd_inverse(9) * 9) == 1);
static_assert(static_cast<u16>(odd_inverse(15) * 15) == 1);

}  // namespace toom_detail

// Division by d = 2^s * odd in the 16-bit carrier: shift out the 2-adic
// part, multiply by the odd part's inverse mod 2^16. The dividend is
// divisible by 2^s over the integers at every interpolation call site, so
// the result is exact in the bits that survive the carrier (>= 13).
inline std::uint16_t exact_div(std::uint16_t v, unsigned d) {
    const unsigned s = std::countr_zero(d);
    assert((v & ((1u << s) - 1)) == 0 && "exact_div: 2-adic part does not divide");
    const std::uint16_t inv = toom_detail::odd_inverse(d >> s);
    return static_cast<std::uint16_t>(static_cast<std::uint16_t>(v >> s) * inv);
}

namespace toom_detail {

// Interpolation core: maps the seven point values of one slot back to the
// seven coefficients of the degree-6 product in x. Single straight-line
// register sequence with exact divisions by 2, 24, 18 and 60; identical
// for the striding and classical variants.
inline std::array<u16, kPoints> interpolate_point(const std::array<u16, kPoints>& w) {
    u16 r0 = w[0];  // c6 (infinity)
    u16 r1 = w[1];  // value at 2
    u16 r2 = w[2];  // value at 1
    u16 r3 = w[3];  // value at -1
    u16 r4 = w[4];  // 64 * value at 1/2
    u16 r5 = w[5];  // 64 * value at -1/2
    const u16 r6 = w[6];  // c0 (zero)

    r1 = static_cast<u16>(r1 + r4);
    r5 = static_cast<u16>(r5 - r4);
    r3 = exact_div(static_cast<u16>(r3 - r2), 2);
    r4 = static_cast<u16>(r4 - r0);
    r4 = static_cast<u16>(r4 - static_cast<u16>(r6 << 6));
    r4 = static_cast<u16>(static_cast<u16>(r4 << 1) + r5);
    r2 = static_cast<u16>(r2 + r3);
    r1 = static_cast<u16>(r1 - static_cast<u16>(65 * r2));
    r2 = static_cast<u16>(r2 - r6);
    r2 = static_cast<u16>(r2 - r0);
    r1 = static_cast<u16>(r1 + static_cast<u16>(45 * r2));
    r4 = exact_div(static_cast<u16>(r4 - static_cast<u16>(r2 << 3)), 24);
    r5 = static_cast<u16>(r5 + r1);
    r1 = exact_div(static_cast<u16>(r1 + static_cast<u16>(r3 << 4)), 18);
    r3 = static_cast<u16>(0 - static_cast<u16>(r3 + r1));
    r5 = exact_div(static_cast<u16>(static_cast<u16>(30 * r1) - r5), 60);
    r2 = static_cast<u16>(r2 - r4);
    r1 = static_cast<u16>(r1 - r5);

    return {r6, r5, r4, r3, r2, r1, r0};  // c0 .. c6
}

}  // namespace toom_detail

inline EvalOperand evaluate_striding(std::span<const std::uint16_t, kN> a) {
    EvalOperand out;
    for (std::size_t j = 0; j < kLimb; ++j)
        toom_detail::eval_point(a[kSplit * j], a[kSplit * j + 1], a[kSplit * j + 2],
                                a[kSplit * j + 3], out, j);
    return out;
}

inline EvalOperand evaluate_striding(const RingElem& a) {
    return evaluate_striding(std::span<const std::uint16_t, kN>(a.coeffs));
}

// Secrets enter sign-extended; evaluation arithmetic is the same mod 2^16.
inline EvalOperand evaluate_striding(const SecretPoly& s) {
    return evaluate_striding(std::span<const std::uint16_t, kN>(s.coeffs));
}

inline EvalOperand evaluate_classical(std::span<const std::uint16_t, kN> a) {
    EvalOperand out;
    for (std::size_t j = 0; j < kLimb; ++j)
        toom_detail::eval_point(a[j], a[j + kLimb], a[j + 2 * kLimb],
                                a[j + 3 * kLimb], out, j);
    return out;
}

inline EvalOperand evaluate_classical(const RingElem& a) {
    return evaluate_classical(std::span<const std::uint16_t, kN>(a.coeffs));
}

// acc.ws[i] += a.ws[i] * b.ws[i] in Z_{2^16}[y]/(y^64 + 1), for all seven
// points. Value-equal to the schoolbook reference at length 64; the
// schedule is free as long as results match bit for bit.
inline void pointwise_mac_negacyclic(EvalAccumulator& acc, const EvalOperand& a,
                                     const EvalOperand& b) {
    for (std::size_t point = 0; point < kPoints; ++point) {
        const auto& pa = a.ws[point];
        const auto& pb = b.ws[point];
        auto& out = acc.ws[point];
        for (std::size_t i = 0; i < kLimb; ++i) {
            const std::uint16_t ai = pa[i];
            for (std::size_t j = 0; j < kLimb; ++j) {
                const std::uint16_t prod = static_cast<std::uint16_t>(ai * pb[j]);
                const std::size_t k = i + j;
                if (k < kLimb)
                    out[k] = static_cast<std::uint16_t>(out[k] + prod);
                else
                    out[k - kLimb] = static_cast<std::uint16_t>(out[k - kLimb] - prod);
            }
        }
    }
}

// Classical pipeline point products: plain convolutions, size-doubled to
// 127 coefficients per point.
using FullProducts = std::array<std::array<std::uint16_t, 2 * kLimb - 1>, kPoints>;

inline FullProducts pointwise_full(const EvalOperand& a, const EvalOperand& b) {
    FullProducts out{};
    for (std::size_t point = 0; point < kPoints; ++point) {
        const auto& pa = a.ws[point];
        const auto& pb = b.ws[point];
        auto& w = out[point];
        for (std::size_t i = 0; i < kLimb; ++i) {
            const std::uint16_t ai = pa[i];
            for (std::size_t j = 0; j < kLimb; ++j)
                w[i + j] = static_cast<std::uint16_t>(w[i + j] + ai * pb[j]);
        }
    }
    return out;
}

// Striding interpolation: 64 slots, strided stores at 4i..4i+3. The x^4,
// x^5, x^6 parts of slot i land at slot i+1's positions 0..2; the final
// slot wraps negacyclically onto coefficients 0..2 with a sign flip, which
// is what makes an explicit ring reduction unnecessary.
inline RingElem interpolate_striding(const EvalAccumulator& acc, unsigned mod_bits) {
    RingElem out;
    out.mod_bits = mod_bits;
    std::uint16_t carry4 = 0, carry5 = 0, carry6 = 0;
    for (std::size_t i = 0; i < kLimb; ++i) {
        const auto c = toom_detail::interpolate_point(
            {acc.ws[0][i], acc.ws[1][i], acc.ws[2][i], acc.ws[3][i], acc.ws[4][i],
             acc.ws[5][i], acc.ws[6][i]});
        out.coeffs[kSplit * i + 3] = c[3];
        if (i == 0) {
            out.coeffs[0] = c[0];
            out.coeffs[1] = c[1];
            out.coeffs[2] = c[2];
        } else {
            out.coeffs[kSplit * i] = static_cast<std::uint16_t>(c[0] + carry4);
            out.coeffs[kSplit * i + 1] = static_cast<std::uint16_t>(c[1] + carry5);
            out.coeffs[kSplit * i + 2] = static_cast<std::uint16_t>(c[2] + carry6);
        }
        carry4 = c[4];
        carry5 = c[5];
        carry6 = c[6];
    }
    out.coeffs[0] = static_cast<std::uint16_t>(out.coeffs[0] - carry4);
    out.coeffs[1] = static_cast<std::uint16_t>(out.coeffs[1] - carry5);
    out.coeffs[2] = static_cast<std::uint16_t>(out.coeffs[2] - carry6);
    out.normalize();
    return out;
}

// Classical interpolation: 127 slots accumulated at offsets {i, i+64, ...,
// i+384} into a 511-coefficient intermediate, then an explicit reduction
// mod (x^256 + 1).
inline RingElem interpolate_classical(const FullProducts& ws, unsigned mod_bits) {
    std::array<std::uint16_t, 2 * kN - 1> full{};
    for (std::size_t i = 0; i < 2 * kLimb - 1; ++i) {
        const auto c = toom_detail::interpolate_point(
            {ws[0][i], ws[1][i], ws[2][i], ws[3][i], ws[4][i], ws[5][i], ws[6][i]});
        for (std::size_t d = 0; d < kPoints; ++d)
            full[i + d * kLimb] = static_cast<std::uint16_t>(full[i + d * kLimb] + c[d]);
    }
    RingElem out;
    out.mod_bits = mod_bits;
    for (std::size_t k = 0; k < kN; ++k) out.coeffs[k] = full[k];
    for (std::size_t k = kN; k < full.size(); ++k)
        out.coeffs[k - kN] = static_cast<std::uint16_t>(out.coeffs[k - kN] - full[k]);
    out.normalize();
    return out;
}

// Whole striding pipeline for a single product; mostly a testing and
// benchmarking convenience.
inline RingElem multiply_striding(const RingElem& a, const RingElem& b,
                                  unsigned mod_bits) {
    EvalAccumulator acc;
    pointwise_mac_negacyclic(acc, evaluate_striding(a), evaluate_striding(b));
    return interpolate_striding(acc, mod_bits);
}

inline RingElem multiply_classical(const RingElem& a, const RingElem& b,
                                   unsigned mod_bits) {
    return interpolate_classical(pointwise_full(evaluate_classical(a), evaluate_classical(b)),
                                 mod_bits);
}

// Matrix-vector product with lazy interpolation: per output row, the three
// row products accumulate in the evaluated domain and interpolation runs
// once. Secret evaluations are computed once and reused across rows.
inline std::array<RingElem, kL> matvec_lazy(const Matrix& mat, const SecretVec& s,
                                            bool transpose, unsigned mod_bits) {
    std::array<EvalOperand, kL> secret_eval;
    for (std::size_t k = 0; k < kL; ++k) secret_eval[k] = evaluate_striding(s[k]);

    std::array<RingElem, kL> out;
    for (std::size_t row = 0; row < kL; ++row) {
        EvalAccumulator acc;
        for (std::size_t k = 0; k < kL; ++k) {
            const RingElem& entry = transpose ? mat[k][row] : mat[row][k];
            pointwise_mac_negacyclic(acc, evaluate_striding(entry), secret_eval[k]);
        }
        out[row] = interpolate_striding(acc, mod_bits);
    }
    return out;
}

// Inner product b^T s with one accumulator and a single interpolation.
inline RingElem inner_product_lazy(const std::array<RingElem, kL>& b,
                                   const SecretVec& s,
                                   unsigned mod_bits = kSaber.eps_p) {
    EvalAccumulator acc;
    for (std::size_t k = 0; k < kL; ++k)
        pointwise_mac_negacyclic(acc, evaluate_striding(b[k]), evaluate_striding(s[k]));
    return interpolate_striding(acc, mod_bits);
}

}  // namespace saber
