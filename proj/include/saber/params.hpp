#pragma once

#include <cstddef>
#include <cstdint>

namespace saber {

struct SaberSizes {
    std::size_t public_key;
    std::size_t indcpa_secret_key;
    std::size_t kem_secret_key;
    std::size_t ciphertext;
    std::size_t shared_key;
    std::size_t seed;
    std::size_t noise_seed;
};

// Saber (NIST level 3) parameter set. Every derived constant and byte
// length in the library comes from this record; nothing else hardcodes
// moduli or sizes.
struct SaberParams {
    unsigned n;      // coefficients per polynomial
    unsigned l;      // module rank
    unsigned eps_q;  // log2 q
    unsigned eps_p;  // log2 p
    unsigned eps_T;  // log2 T
    unsigned mu;     // binomial parameter, coefficients in [-mu/2, mu/2]

    std::uint16_t h1_coeff;  // rounding constant, added per coefficient
    std::uint16_t h2_coeff;  // decryption constant, per coefficient

    SaberSizes sizes;

    constexpr unsigned q() const { return 1u << eps_q; }
    constexpr unsigned p() const { return 1u << eps_p; }
    constexpr unsigned T() const { return 1u << eps_T; }
};

constexpr SaberParams default_saber() {
    SaberParams prm{};
    prm.n = 256;
    prm.l = 3;
    prm.eps_q = 13;
    prm.eps_p = 10;
    prm.eps_T = 4;
    prm.mu = 8;

    prm.h1_coeff = static_cast<std::uint16_t>(1u << (prm.eps_q - prm.eps_p - 1));
    prm.h2_coeff = static_cast<std::uint16_t>((1u << (prm.eps_p - 2)) -
                                              (1u << (prm.eps_p - prm.eps_T - 1)) +
                                              (1u << (prm.eps_q - prm.eps_p - 1)));

    prm.sizes.seed = 32;
    prm.sizes.noise_seed = 32;
    prm.sizes.shared_key = 32;
    prm.sizes.public_key = prm.l * prm.n * prm.eps_p / 8 + prm.sizes.seed;
    prm.sizes.indcpa_secret_key = prm.l * prm.n * prm.eps_q / 8;
    prm.sizes.ciphertext = prm.l * prm.n * prm.eps_p / 8 + prm.n * prm.eps_T / 8;
    prm.sizes.kem_secret_key =
        32 + 32 + prm.sizes.public_key + prm.sizes.indcpa_secret_key;
    return prm;
}

inline constexpr SaberParams kSaber = default_saber();

// Structural constants: array extents throughout the library.
inline constexpr std::size_t kN = kSaber.n;
inline constexpr std::size_t kL = kSaber.l;

static_assert(kSaber.sizes.public_key == 992);
static_assert(kSaber.sizes.indcpa_secret_key == 1248);
static_assert(kSaber.sizes.kem_secret_key == 2304);
static_assert(kSaber.sizes.ciphertext == 1088);

}  // namespace saber
