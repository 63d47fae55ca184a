#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "saber/pke.hpp"
#include "test_util.hpp"

using namespace saber;

namespace {

Message random_message(std::mt19937_64& rng) {
    Message m{};
    for (auto& b : m) b = static_cast<std::uint8_t>(rng());
    return m;
}

}  // namespace

TEST_CASE("keygen is deterministic and outputs are normalized") {
    MatrixSeed seed_a{test::seed_bytes(1)};
    NoiseSeed r{test::seed_bytes(2)};
    const auto [pk1, s1] = pke_keygen(seed_a, r);
    const auto [pk2, s2] = pke_keygen(seed_a, r);
    CHECK(pk1.packed() == pk2.packed());
    for (std::size_t i = 0; i < kL; ++i) {
        CHECK(s1[i].coeffs == s2[i].coeffs);
        CHECK(pk1.b[i].mod_bits == 10);
        for (auto c : pk1.b[i].coeffs) CHECK(c < 1024);
    }
}

TEST_CASE("zero secret maps to the zero public vector") {
    MatrixSeed seed_a{test::seed_bytes(3)};
    const Matrix a = gen_matrix(seed_a);
    const PkePublicKey pk = pke_keygen_from_parts(seed_a, a, SecretVec{});
    // (0 + h1) >> 3 = 0 in every coefficient
    for (const auto& poly : pk.b)
        for (auto c : poly.coeffs) CHECK(c == 0);
}

TEST_CASE("encryption is deterministic and compresses to 4 bits") {
    std::mt19937_64 rng(0x9ce00001);
    MatrixSeed seed_a{test::seed_bytes(4)};
    NoiseSeed r{test::seed_bytes(5)}, r_enc{test::seed_bytes(6)};
    const auto [pk, s] = pke_keygen(seed_a, r);
    const Message m = random_message(rng);

    const PkeCiphertext c1 = pke_enc(pk, m, r_enc);
    const PkeCiphertext c2 = pke_enc(pk, m, r_enc);
    CHECK(c1.packed() == c2.packed());
    for (auto c : c1.c_m.coeffs) CHECK(c < 16);
    for (const auto& poly : c1.b_prime)
        for (auto c : poly.coeffs) CHECK(c < 1024);
}

TEST_CASE("message encoding with a zeroed session secret") {
    MatrixSeed seed_a{test::seed_bytes(7)};
    const Matrix a = gen_matrix(seed_a);
    std::array<RingElem, kL> b{zero_elem(10), zero_elem(10), zero_elem(10)};

    Message m{};
    m[0] = 0x01;  // bit 0 set, everything else clear
    const PkeCiphertext ct = pke_enc_from_parts(a, b, SecretVec{}, m);
    // v' = 0, so c_m_i = ((4 - 512 m_i) mod 1024) >> 6: 8 for set bits, 0 else
    CHECK(ct.c_m.coeffs[0] == 8);
    for (std::size_t i = 1; i < kN; ++i) CHECK(ct.c_m.coeffs[i] == 0);
}

TEST_CASE("PKE roundtrip over random keys and messages") {
    std::mt19937_64 rng(0x9ce00002);
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        MatrixSeed seed_a{test::seed_bytes(100 + trial)};
        NoiseSeed r{test::seed_bytes(200 + trial)}, r_enc{test::seed_bytes(300 + trial)};
        const auto [pk, s] = pke_keygen(seed_a, r);
        const Message m = random_message(rng);
        CHECK(pke_dec(s, pke_enc(pk, m, r_enc)) == m);
    }
}

TEST_CASE("all-zero message roundtrip") {
    MatrixSeed seed_a{test::seed_bytes(8)};
    NoiseSeed r{test::seed_bytes(9)}, r_enc{test::seed_bytes(10)};
    const auto [pk, s] = pke_keygen(seed_a, r);
    const Message zero{};
    CHECK(pke_dec(s, pke_enc(pk, zero, r_enc)) == zero);
}

TEST_CASE("flipping a message bit flips exactly that recovered bit") {
    std::mt19937_64 rng(0x9ce00003);
    MatrixSeed seed_a{test::seed_bytes(11)};
    NoiseSeed r{test::seed_bytes(12)}, r_enc{test::seed_bytes(13)};
    const auto [pk, s] = pke_keygen(seed_a, r);

    const Message m = random_message(rng);
    for (std::size_t bit : {std::size_t{0}, std::size_t{17}, std::size_t{255}}) {
        Message flipped = m;
        flipped[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        const Message rec_m = pke_dec(s, pke_enc(pk, m, r_enc));
        const Message rec_f = pke_dec(s, pke_enc(pk, flipped, r_enc));
        for (std::size_t i = 0; i < rec_m.size(); ++i) {
            const std::uint8_t expect =
                i == bit / 8 ? static_cast<std::uint8_t>(1u << (bit % 8)) : 0;
            CHECK((rec_m[i] ^ rec_f[i]) == expect);
        }
    }
}

TEST_CASE("different encryption randomness randomizes b'") {
    std::mt19937_64 rng(0x9ce00004);
    MatrixSeed seed_a{test::seed_bytes(14)};
    NoiseSeed r{test::seed_bytes(15)};
    const auto [pk, s] = pke_keygen(seed_a, r);
    const Message m = random_message(rng);
    const PkeCiphertext c1 = pke_enc(pk, m, NoiseSeed{test::seed_bytes(16)});
    const PkeCiphertext c2 = pke_enc(pk, m, NoiseSeed{test::seed_bytes(17)});
    bool differs = false;
    for (std::size_t i = 0; i < kL && !differs; ++i)
        differs = c1.b_prime[i].coeffs != c2.b_prime[i].coeffs;
    CHECK(differs);
}

TEST_CASE("public key and ciphertext byte codecs") {
    std::mt19937_64 rng(0x9ce00005);
    MatrixSeed seed_a{test::seed_bytes(18)};
    NoiseSeed r{test::seed_bytes(19)}, r_enc{test::seed_bytes(20)};
    const auto [pk, s] = pke_keygen(seed_a, r);
    const PkeCiphertext ct = pke_enc(pk, random_message(rng), r_enc);

    const auto pk_bytes = pk.packed();
    REQUIRE(pk_bytes.size() == 992);
    const PkePublicKey pk2 = PkePublicKey::from_bytes(pk_bytes);
    CHECK(pk2.packed() == pk_bytes);

    const auto ct_bytes = ct.packed();
    REQUIRE(ct_bytes.size() == 1088);
    const PkeCiphertext ct2 = PkeCiphertext::from_bytes(ct_bytes);
    CHECK(ct2.packed() == ct_bytes);

    std::vector<std::uint8_t> truncated(100);
    CHECK_THROWS_AS(PkePublicKey::from_bytes(truncated), std::invalid_argument);
    CHECK_THROWS_AS(PkeCiphertext::from_bytes(truncated), std::invalid_argument);
}

// Boundary probes that pin the decryption constant exactly: a ciphertext
// crafted so the pre-shift value lands next to a decision threshold flips
// its decoded bit if h2 moves by one in either direction.
TEST_CASE("decryption decision boundaries pin h2") {
    SecretVec s{};
    s[0].set_coeff(0, 1);

    auto probe = [&s](std::uint16_t v0, const SaberParams& prm) {
        PkeCiphertext ct;
        ct.c_m = zero_elem(4);
        ct.b_prime = {zero_elem(10), zero_elem(10), zero_elem(10)};
        ct.b_prime[0].coeffs[0] = v0;  // v = v0 at coefficient 0, zero elsewhere
        return pke_dec(s, ct, prm)[0] & 1;
    };

    const SaberParams base = default_saber();
    CHECK(probe(283, base) == 0);
    CHECK(probe(284, base) == 1);
    CHECK(probe(795, base) == 1);
    CHECK(probe(796, base) == 0);

    SaberParams low = base;
    low.h2_coeff = 227;
    CHECK(probe(284, low) == 0);
    CHECK(probe(796, low) == 1);

    SaberParams high = base;
    high.h2_coeff = 229;
    CHECK(probe(283, high) == 1);
    CHECK(probe(795, high) == 0);
}
