#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ransomgame/sampling.hpp"

namespace ransomgame::protocol {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

// Order-q subgroup of Z_p^* for a safe prime p = 2q + 1.
struct GroupParams {
    mpz_class p;
    mpz_class q;
    mpz_class g;
    mpz_class h;
    int chunk_bits = 12;
};

inline constexpr int kMinChunkBits = 4;
inline constexpr int kMaxChunkBits = 16;

// Fixed 256-bit safe-prime group; h is derived from the seed.
// Throws std::invalid_argument for chunk_bits outside [4, 16].
GroupParams setup(int chunk_bits = 12, std::uint64_t seed = 1);

// 1 <= x < p and x^q = 1 (mod p).
bool in_subgroup(const GroupParams& params, const mpz_class& x);

// Fixed-width big-endian encoding (32 bytes for the default group).
Bytes element_bytes(const GroupParams& params, const mpz_class& x);
Digest sha256(const Bytes& data);
std::string to_hex(const Digest& d);

// Data packed MSB-first into chunk_bits-wide integers; the last chunk is
// zero-padded.
std::vector<std::uint32_t> encode_chunks(const Bytes& data, int chunk_bits);
Bytes decode_chunks(const std::vector<std::uint32_t>& chunks, int chunk_bits, std::size_t length);

struct Ciphertext {
    mpz_class u;  // g^r
    mpz_class v;  // vk^r * g^m
};

// Proof that log_g(u) = log_vk(v / cm).
struct DleqProof {
    mpz_class a1;  // g^k
    mpz_class a2;  // vk^k
    mpz_class c;   // hash challenge
    mpz_class z;   // k + c r mod q
};

struct VeckBundle {
    mpz_class vk;
    std::vector<mpz_class> commitments;  // cm_j = g^{m_j}
    Digest commit_digest{};
    std::vector<Ciphertext> ciphertext;
    std::vector<DleqProof> proofs;
    std::size_t length = 0;  // plaintext bytes
    Digest data_digest{};    // SHA-256 of the plaintext
};

struct KeyedBundle {
    mpz_class sk;
    VeckBundle bundle;
};

// Uniform in [1, q).
mpz_class random_scalar(const GroupParams& params, Rng& rng);

Digest commitment_digest(const GroupParams& params, const std::vector<mpz_class>& commitments,
                         std::size_t length);

// Throws std::invalid_argument for empty data.
KeyedBundle encrypt_with_proof(const GroupParams& params, const Bytes& data, Rng& rng);

struct VerifyResult {
    bool accept = false;
    std::string reason;  // empty when accepted
};

VerifyResult verify_cipher_data(const GroupParams& params, const Digest& commit_digest,
                                const mpz_class& vk, const std::vector<mpz_class>& commitments,
                                std::size_t length, const std::vector<Ciphertext>& ciphertext,
                                const std::vector<DleqProof>& proofs);
VerifyResult verify_cipher_data(const GroupParams& params, const VeckBundle& bundle);

// g^sk = vk; sk outside [1, q) is simply false.
bool verify_key(const GroupParams& params, const mpz_class& vk, const mpz_class& sk);

class DecryptError : public std::runtime_error {
  public:
    DecryptError(std::size_t chunk, const std::string& what)
        : std::runtime_error(what), chunk_(chunk) {}
    std::size_t chunk() const { return chunk_; }

  private:
    std::size_t chunk_;
};

// Throws DecryptError naming the first chunk whose discrete log is out of
// range.
Bytes decrypt(const GroupParams& params, const mpz_class& sk,
              const std::vector<Ciphertext>& ciphertext, std::size_t length);

}  // namespace ransomgame::protocol
