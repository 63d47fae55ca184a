#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>

#include "saber/codec.hpp"
#include "saber/keccak.hpp"
#include "saber/params.hpp"
#include "saber/pke.hpp"

// CCA-secure KEM: re-encrypting Fujisaki-Okamoto transform with implicit
// rejection. Decapsulation of a tampered ciphertext is not an error; it
// returns the pseudorandom key derived from the secret value z.

namespace saber {

using SharedKey = std::array<std::uint8_t, 32>;

namespace ct {

// Executed byte-operation counter for the constant-time blocks below.
// Tests assert the count depends on input length only.
inline thread_local std::uint64_t byte_ops = 0;

// 0 iff the buffers are equal. Every byte is examined regardless of where
// a mismatch appears.
inline std::uint8_t verify(std::span<const std::uint8_t> a,
                           std::span<const std::uint8_t> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("verify: length mismatch");
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc = static_cast<std::uint8_t>(acc | (a[i] ^ b[i]));
        ++byte_ops;
    }
    return acc;
}

// dst <- src when flag is nonzero, dst unchanged otherwise. Same operation
// sequence either way: the flag is widened to a full byte mask and applied
// with xor arithmetic.
inline void cmov(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src,
                 std::uint8_t flag) {
    if (dst.size() != src.size())
        throw std::invalid_argument("cmov: length mismatch");
    const std::uint8_t normalized = static_cast<std::uint8_t>(
        (flag | static_cast<std::uint8_t>(-flag)) >> 7);
    const std::uint8_t mask = static_cast<std::uint8_t>(-normalized);
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = static_cast<std::uint8_t>(dst[i] ^ (mask & (dst[i] ^ src[i])));
        ++byte_ops;
    }
}

}  // namespace ct

struct KemSecretKey {
    std::array<std::uint8_t, 32> z{};
    std::array<std::uint8_t, 32> pkh{};
    PkePublicKey pk;
    SecretVec s;

    std::array<std::uint8_t, kSaber.sizes.kem_secret_key> packed() const {
        std::array<std::uint8_t, kSaber.sizes.kem_secret_key> out{};
        auto span = std::span<std::uint8_t>(out);
        std::copy(z.begin(), z.end(), span.begin());
        std::copy(pkh.begin(), pkh.end(), span.begin() + 32);
        const auto pk_bytes = pk.packed();
        std::copy(pk_bytes.begin(), pk_bytes.end(), span.begin() + 64);
        pack_secret(s, span.subspan(64 + pk_bytes.size()));
        return out;
    }

    static KemSecretKey from_bytes(std::span<const std::uint8_t> in) {
        if (in.size() != kSaber.sizes.kem_secret_key)
            throw std::invalid_argument("secret key: wrong byte length");
        KemSecretKey sk;
        std::copy_n(in.begin(), 32, sk.z.begin());
        std::copy_n(in.begin() + 32, 32, sk.pkh.begin());
        sk.pk = PkePublicKey::from_bytes(in.subspan(64, kSaber.sizes.public_key));
        sk.s = unpack_secret(in.subspan(64 + kSaber.sizes.public_key));
        return sk;
    }
};

namespace kem_detail {

// Shared derivation (r, K_hat) from (pkh, m): one SHA3-512 call, first
// half used as K_hat, second half as the encryption seed.
struct Derived {
    std::array<std::uint8_t, 32> k_hat;
    NoiseSeed enc_seed;
};

inline Derived derive(std::span<const std::uint8_t, 32> pkh, const Message& m) {
    std::array<std::uint8_t, 64> buf{};
    std::copy(pkh.begin(), pkh.end(), buf.begin());
    std::copy(m.begin(), m.end(), buf.begin() + 32);
    const auto g = sha3_512(buf);
    Derived d;
    std::copy_n(g.begin(), 32, d.k_hat.begin());
    std::copy_n(g.begin() + 32, 32, d.enc_seed.bytes.begin());
    return d;
}

inline SharedKey session_key(std::span<const std::uint8_t> ct_bytes,
                             std::span<const std::uint8_t, 32> k_hat) {
    std::array<std::uint8_t, 64> buf{};
    const auto ct_hash = sha3_256(ct_bytes);
    std::copy(ct_hash.begin(), ct_hash.end(), buf.begin());
    std::copy(k_hat.begin(), k_hat.end(), buf.begin() + 32);
    return sha3_256(buf);
}

}  // namespace kem_detail

// entropy = seed_a (32) || noise seed (32) || z (32). The caller provides
// all randomness; the library never reads the environment.
inline std::pair<PkePublicKey, KemSecretKey> kem_keygen(
    std::span<const std::uint8_t> entropy, const SaberParams& prm = kSaber) {
    if (entropy.size() != 96)
        throw std::invalid_argument("kem_keygen: expected 96 bytes of entropy");
    MatrixSeed seed_a;
    NoiseSeed r;
    std::copy_n(entropy.begin(), 32, seed_a.bytes.begin());
    std::copy_n(entropy.begin() + 32, 32, r.bytes.begin());

    auto [pk, s] = pke_keygen(seed_a, r, prm);
    KemSecretKey sk;
    std::copy_n(entropy.begin() + 64, 32, sk.z.begin());
    sk.pkh = sha3_256(pk.packed());
    sk.pk = pk;
    sk.s = std::move(s);
    return {std::move(pk), std::move(sk)};
}

// Caller entropy is hashed into the message so a biased source cannot
// produce a structured m.
inline std::pair<PkeCiphertext, SharedKey> encaps(
    const PkePublicKey& pk, std::span<const std::uint8_t, 32> m_entropy,
    const SaberParams& prm = kSaber) {
    const Message m = sha3_256(m_entropy);
    const auto pkh = sha3_256(pk.packed());
    const auto derived = kem_detail::derive(pkh, m);
    PkeCiphertext ct = pke_enc(pk, m, derived.enc_seed, prm);
    SharedKey key = kem_detail::session_key(ct.packed(), derived.k_hat);
    return {std::move(ct), key};
}

inline SharedKey decaps(const KemSecretKey& sk, const PkeCiphertext& ct,
                        const SaberParams& prm = kSaber) {
    const Message m_prime = pke_dec(sk.s, ct, prm);
    const auto derived = kem_detail::derive(sk.pkh, m_prime);
    const PkeCiphertext ct_prime = pke_enc(sk.pk, m_prime, derived.enc_seed, prm);

    const auto ct_bytes = ct.packed();
    const std::uint8_t mismatch = ct::verify(ct_bytes, ct_prime.packed());

    std::array<std::uint8_t, 32> k_hat = derived.k_hat;
    ct::cmov(k_hat, sk.z, mismatch);
    return kem_detail::session_key(ct_bytes, k_hat);
}

}  // namespace saber
