#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>

#include "saber/codec.hpp"
#include "saber/params.hpp"
#include "saber/ring.hpp"
#include "saber/sampler.hpp"
#include "saber/toom.hpp"

// The rounding-based public-key encryption scheme underneath the KEM.
// Fully deterministic given the seeds; no internal randomness.

namespace saber {

using Message = std::array<std::uint8_t, 32>;

struct PkePublicKey {
    MatrixSeed seed_a;
    std::array<RingElem, kL> b;  // mod p

    std::array<std::uint8_t, kSaber.sizes.public_key> packed() const {
        std::array<std::uint8_t, kSaber.sizes.public_key> out{};
        std::copy(seed_a.bytes.begin(), seed_a.bytes.end(), out.begin());
        const std::size_t per_poly = packed_bytes(kN, kSaber.eps_p);
        for (std::size_t i = 0; i < kL; ++i)
            pack_bits(std::span<const std::uint16_t>(b[i].coeffs), kSaber.eps_p,
                      std::span<std::uint8_t>(out).subspan(32 + i * per_poly, per_poly));
        return out;
    }

    static PkePublicKey from_bytes(std::span<const std::uint8_t> in) {
        if (in.size() != kSaber.sizes.public_key)
            throw std::invalid_argument("public key: wrong byte length");
        PkePublicKey pk;
        std::copy_n(in.begin(), 32, pk.seed_a.bytes.begin());
        const std::size_t per_poly = packed_bytes(kN, kSaber.eps_p);
        for (std::size_t i = 0; i < kL; ++i) {
            pk.b[i].mod_bits = kSaber.eps_p;
            unpack_bits(in.subspan(32 + i * per_poly, per_poly), kSaber.eps_p,
                        std::span<std::uint16_t>(pk.b[i].coeffs));
        }
        return pk;
    }
};

struct PkeCiphertext {
    RingElem c_m;                      // mod T
    std::array<RingElem, kL> b_prime;  // mod p

    std::array<std::uint8_t, kSaber.sizes.ciphertext> packed() const {
        std::array<std::uint8_t, kSaber.sizes.ciphertext> out{};
        const std::size_t cm_bytes = packed_bytes(kN, kSaber.eps_T);
        pack_bits(std::span<const std::uint16_t>(c_m.coeffs), kSaber.eps_T,
                  std::span<std::uint8_t>(out).first(cm_bytes));
        const std::size_t per_poly = packed_bytes(kN, kSaber.eps_p);
        for (std::size_t i = 0; i < kL; ++i)
            pack_bits(std::span<const std::uint16_t>(b_prime[i].coeffs), kSaber.eps_p,
                      std::span<std::uint8_t>(out).subspan(cm_bytes + i * per_poly, per_poly));
        return out;
    }

    static PkeCiphertext from_bytes(std::span<const std::uint8_t> in) {
        if (in.size() != kSaber.sizes.ciphertext)
            throw std::invalid_argument("ciphertext: wrong byte length");
        PkeCiphertext ct;
        const std::size_t cm_bytes = packed_bytes(kN, kSaber.eps_T);
        ct.c_m.mod_bits = kSaber.eps_T;
        unpack_bits(in.first(cm_bytes), kSaber.eps_T,
                    std::span<std::uint16_t>(ct.c_m.coeffs));
        const std::size_t per_poly = packed_bytes(kN, kSaber.eps_p);
        for (std::size_t i = 0; i < kL; ++i) {
            ct.b_prime[i].mod_bits = kSaber.eps_p;
            unpack_bits(in.subspan(cm_bytes + i * per_poly, per_poly), kSaber.eps_p,
                        std::span<std::uint16_t>(ct.b_prime[i].coeffs));
        }
        return ct;
    }
};

namespace pke_detail {

// (v + h) mod q >> (eps_q - eps_p), applied to every vector entry.
inline std::array<RingElem, kL> add_round(const std::array<RingElem, kL>& v,
                                          const SaberParams& prm) {
    std::array<RingElem, kL> out;
    for (std::size_t i = 0; i < kL; ++i)
        out[i] = shift_round(poly_const_add(v[i], prm.h1_coeff), prm.eps_q, prm.eps_p);
    return out;
}

}  // namespace pke_detail

// Key generation from already-expanded parts; the seeded entry point below
// is the normal path, this one exists so tests can pin A or s.
inline PkePublicKey pke_keygen_from_parts(const MatrixSeed& seed_a, const Matrix& a,
                                          const SecretVec& s,
                                          const SaberParams& prm = kSaber) {
    PkePublicKey pk;
    pk.seed_a = seed_a;
    pk.b = pke_detail::add_round(matvec_lazy(a, s, /*transpose=*/true, prm.eps_q), prm);
    return pk;
}

inline std::pair<PkePublicKey, SecretVec> pke_keygen(const MatrixSeed& seed_a,
                                                     const NoiseSeed& r,
                                                     const SaberParams& prm = kSaber) {
    const Matrix a = gen_matrix(seed_a, prm);
    SecretVec s = gen_secret(r, prm);
    return {pke_keygen_from_parts(seed_a, a, s, prm), std::move(s)};
}

inline PkeCiphertext pke_enc_from_parts(const Matrix& a,
                                        const std::array<RingElem, kL>& b,
                                        const SecretVec& s_prime, const Message& m,
                                        const SaberParams& prm = kSaber) {
    PkeCiphertext ct;
    ct.b_prime = pke_detail::add_round(matvec_lazy(a, s_prime, /*transpose=*/false, prm.eps_q), prm);

    const RingElem v_prime = inner_product_lazy(b, s_prime, prm.eps_p);

    std::array<std::uint16_t, kN> m_bits;
    unpack_bits(m, 1, m_bits);

    // c_m = (v' + h1 - 2^(eps_p-1) m  mod p) >> (eps_p - eps_T)
    ct.c_m.mod_bits = prm.eps_T;
    const std::uint16_t p_mask = coeff_mask(prm.eps_p);
    const std::uint16_t encode = static_cast<std::uint16_t>(1u << (prm.eps_p - 1));
    for (std::size_t i = 0; i < kN; ++i) {
        const std::uint16_t v = static_cast<std::uint16_t>(
                                    v_prime.coeffs[i] + prm.h1_coeff - encode * m_bits[i]) &
                                p_mask;
        ct.c_m.coeffs[i] = static_cast<std::uint16_t>(v >> (prm.eps_p - prm.eps_T));
    }
    return ct;
}

inline PkeCiphertext pke_enc(const PkePublicKey& pk, const Message& m,
                             const NoiseSeed& r, const SaberParams& prm = kSaber) {
    const Matrix a = gen_matrix(pk.seed_a, prm);
    const SecretVec s_prime = gen_secret(r, prm);
    return pke_enc_from_parts(a, pk.b, s_prime, m, prm);
}

inline Message pke_dec(const SecretVec& s, const PkeCiphertext& ct,
                       const SaberParams& prm = kSaber) {
    const RingElem v = inner_product_lazy(ct.b_prime, s, prm.eps_p);

    // m' = ((v - 2^(eps_p - eps_T) c_m + h2) mod p) >> (eps_p - 1)
    const std::uint16_t p_mask = coeff_mask(prm.eps_p);
    const unsigned scale = prm.eps_p - prm.eps_T;
    std::array<std::uint16_t, kN> m_bits;
    for (std::size_t i = 0; i < kN; ++i) {
        const std::uint16_t d = static_cast<std::uint16_t>(
                                    v.coeffs[i] -
                                    static_cast<std::uint16_t>(ct.c_m.coeffs[i] << scale) +
                                    prm.h2_coeff) &
                                p_mask;
        m_bits[i] = static_cast<std::uint16_t>(d >> (prm.eps_p - 1));
    }
    Message m{};
    pack_bits(m_bits, 1, m);
    return m;
}

}  // namespace saber
