#include "ransomgame/protocol/crypto.hpp"

#include <unordered_map>

#include <openssl/evp.h>

namespace ransomgame::protocol {

namespace {

// 256-bit safe prime p = 2q + 1.
constexpr const char* kPrimeHex =
    "d7dd51f7b2695cef0098fed0202ac57ea6a1ce87dfcc8efefb1f4a8022a07c33";

mpz_class powm(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
    mpz_class out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return out;
}

mpz_class invert(const mpz_class& x, const mpz_class& mod) {
    mpz_class out;
    if (mpz_invert(out.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw std::invalid_argument("element is not invertible");
    return out;
}

mpz_class from_bytes(const std::uint8_t* data, std::size_t n) {
    mpz_class out;
    mpz_import(out.get_mpz_t(), n, 1, 1, 1, 0, data);
    return out;
}

class Transcript {
  public:
    explicit Transcript(const GroupParams& params) : params_(params) {}
    Transcript& add(const mpz_class& x) {
        const Bytes b = element_bytes(params_, x);
        buf_.insert(buf_.end(), b.begin(), b.end());
        return *this;
    }
    Transcript& add(const Digest& d) {
        buf_.insert(buf_.end(), d.begin(), d.end());
        return *this;
    }
    Transcript& add(std::uint64_t v) {
        for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        return *this;
    }
    mpz_class challenge() const {
        const Digest d = sha256(buf_);
        return from_bytes(d.data(), d.size()) % params_.q;
    }

  private:
    const GroupParams& params_;
    Bytes buf_;
};

mpz_class chunk_challenge(const GroupParams& params, const mpz_class& vk, const Digest& digest,
                          std::size_t j, const mpz_class& cm, const Ciphertext& ct,
                          const mpz_class& a1, const mpz_class& a2) {
    Transcript t(params);
    t.add(params.p).add(params.q).add(params.g).add(params.h).add(vk).add(digest);
    t.add(static_cast<std::uint64_t>(j)).add(cm).add(ct.u).add(ct.v).add(a1).add(a2);
    return t.challenge();
}

std::size_t chunk_count(std::size_t length, int chunk_bits) {
    return (length * 8 + static_cast<std::size_t>(chunk_bits) - 1) /
           static_cast<std::size_t>(chunk_bits);
}

}  // namespace

GroupParams setup(int chunk_bits, std::uint64_t seed) {
    if (chunk_bits < kMinChunkBits || chunk_bits > kMaxChunkBits)
        throw std::invalid_argument("chunk_bits must lie in [" + std::to_string(kMinChunkBits) +
                                    ", " + std::to_string(kMaxChunkBits) + "]");
    GroupParams params;
    params.p = mpz_class(kPrimeHex, 16);
    params.q = (params.p - 1) / 2;
    params.g = 4;
    params.chunk_bits = chunk_bits;
    // Squares generate the order-q subgroup; hash the seed into one.
    for (std::uint64_t counter = 0;; ++counter) {
        Bytes input{'h', '-', 'g', 'e', 'n'};
        for (std::uint64_t v : {seed, counter})
            for (int i = 7; i >= 0; --i) input.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        const Digest d = sha256(input);
        mpz_class x = from_bytes(d.data(), d.size()) % params.p;
        params.h = x * x % params.p;
        if (params.h > 1 && params.h != params.g) break;
    }
    return params;
}

bool in_subgroup(const GroupParams& params, const mpz_class& x) {
    if (x < 1 || x >= params.p) return false;
    return powm(x, params.q, params.p) == 1;
}

Bytes element_bytes(const GroupParams& params, const mpz_class& x) {
    const std::size_t width = (mpz_sizeinbase(params.p.get_mpz_t(), 2) + 7) / 8;
    Bytes out(width, 0);
    if (x < 0) throw std::invalid_argument("negative group element");
    std::size_t count = 0;
    Bytes tmp((mpz_sizeinbase(x.get_mpz_t(), 2) + 7) / 8 + 1, 0);
    mpz_export(tmp.data(), &count, 1, 1, 1, 0, x.get_mpz_t());
    if (count > width) throw std::invalid_argument("element wider than the modulus");
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(count),
              out.begin() + static_cast<std::ptrdiff_t>(width - count));
    return out;
}

Digest sha256(const Bytes& data) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    return out;
}

std::string to_hex(const Digest& d) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s;
    for (auto b : d) {
        s.push_back(kHex[b >> 4]);
        s.push_back(kHex[b & 15]);
    }
    return s;
}

std::vector<std::uint32_t> encode_chunks(const Bytes& data, int chunk_bits) {
    std::vector<std::uint32_t> chunks(chunk_count(data.size(), chunk_bits), 0);
    std::size_t bit = 0;
    for (std::uint8_t byte : data) {
        for (int b = 7; b >= 0; --b, ++bit) {
            const std::size_t c = bit / static_cast<std::size_t>(chunk_bits);
            chunks[c] = (chunks[c] << 1) | ((byte >> b) & 1u);
        }
    }
    // Left-align the padded tail.
    const std::size_t tail = bit % static_cast<std::size_t>(chunk_bits);
    if (tail != 0) chunks.back() <<= (static_cast<std::size_t>(chunk_bits) - tail);
    return chunks;
}

Bytes decode_chunks(const std::vector<std::uint32_t>& chunks, int chunk_bits, std::size_t length) {
    if (chunks.size() != chunk_count(length, chunk_bits))
        throw std::invalid_argument("chunk count does not match the recorded length");
    Bytes out(length, 0);
    for (std::size_t bit = 0; bit < length * 8; ++bit) {
        const std::size_t c = bit / static_cast<std::size_t>(chunk_bits);
        const int shift = chunk_bits - 1 - static_cast<int>(bit % static_cast<std::size_t>(chunk_bits));
        const std::uint8_t v = (chunks[c] >> shift) & 1u;
        out[bit / 8] = static_cast<std::uint8_t>(out[bit / 8] | (v << (7 - bit % 8)));
    }
    return out;
}

mpz_class random_scalar(const GroupParams& params, Rng& rng) {
    const std::size_t bits = mpz_sizeinbase(params.q.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    Bytes buf(words * 8);
    for (;;) {
        for (std::size_t w = 0; w < words; ++w) {
            const std::uint64_t v = rng.next();
            for (int i = 0; i < 8; ++i) buf[w * 8 + i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
        }
        // Rejection sampling on exactly `bits` bits.
        mpz_class x = from_bytes(buf.data(), buf.size()) >> (words * 64 - bits);
        if (x >= 1 && x < params.q) return x;
    }
}

Digest commitment_digest(const GroupParams& params, const std::vector<mpz_class>& commitments,
                         std::size_t length) {
    Bytes buf;
    for (int i = 7; i >= 0; --i) buf.push_back(static_cast<std::uint8_t>(length >> (8 * i)));
    for (const auto& cm : commitments) {
        const Bytes b = element_bytes(params, cm);
        buf.insert(buf.end(), b.begin(), b.end());
    }
    return sha256(buf);
}

KeyedBundle encrypt_with_proof(const GroupParams& params, const Bytes& data, Rng& rng) {
    if (data.empty()) throw std::invalid_argument("encrypt_with_proof: data must not be empty");
    KeyedBundle out;
    out.sk = random_scalar(params, rng);
    VeckBundle& b = out.bundle;
    b.vk = powm(params.g, out.sk, params.p);
    b.length = data.size();
    b.data_digest = sha256(data);
    const auto chunks = encode_chunks(data, params.chunk_bits);
    for (auto m : chunks) b.commitments.push_back(powm(params.g, mpz_class(m), params.p));
    b.commit_digest = commitment_digest(params, b.commitments, b.length);
    for (std::size_t j = 0; j < chunks.size(); ++j) {
        const mpz_class r = random_scalar(params, rng);
        Ciphertext ct;
        ct.u = powm(params.g, r, params.p);
        ct.v = powm(b.vk, r, params.p) * b.commitments[j] % params.p;
        const mpz_class k = random_scalar(params, rng);
        DleqProof proof;
        proof.a1 = powm(params.g, k, params.p);
        proof.a2 = powm(b.vk, k, params.p);
        proof.c = chunk_challenge(params, b.vk, b.commit_digest, j, b.commitments[j], ct, proof.a1,
                                  proof.a2);
        proof.z = (k + proof.c * r) % params.q;
        b.ciphertext.push_back(ct);
        b.proofs.push_back(proof);
    }
    return out;
}

VerifyResult verify_cipher_data(const GroupParams& params, const Digest& commit_digest,
                                const mpz_class& vk, const std::vector<mpz_class>& commitments,
                                std::size_t length, const std::vector<Ciphertext>& ciphertext,
                                const std::vector<DleqProof>& proofs) {
    const std::size_t count = chunk_count(length, params.chunk_bits);
    if (length == 0 || commitments.size() != count || ciphertext.size() != count ||
        proofs.size() != count)
        return {false, "bundle lengths do not match the recorded data length"};
    if (!in_subgroup(params, vk) || vk == 1) return {false, "verification key not in subgroup"};
    if (commitment_digest(params, commitments, length) != commit_digest)
        return {false, "commitment digest mismatch"};
    for (std::size_t j = 0; j < count; ++j) {
        const std::string at = " at chunk " + std::to_string(j);
        const auto& ct = ciphertext[j];
        const auto& pf = proofs[j];
        if (!in_subgroup(params, commitments[j])) return {false, "commitment not in subgroup" + at};
        if (!in_subgroup(params, ct.u) || !in_subgroup(params, ct.v))
            return {false, "ciphertext not in subgroup" + at};
        if (!in_subgroup(params, pf.a1) || !in_subgroup(params, pf.a2))
            return {false, "proof commitment not in subgroup" + at};
        if (pf.c < 0 || pf.c >= params.q || pf.z < 0 || pf.z >= params.q)
            return {false, "proof scalar out of range" + at};
        if (chunk_challenge(params, vk, commit_digest, j, commitments[j], ct, pf.a1, pf.a2) != pf.c)
            return {false, "challenge mismatch" + at};
        const mpz_class lhs1 = powm(params.g, pf.z, params.p);
        const mpz_class rhs1 = pf.a1 * powm(ct.u, pf.c, params.p) % params.p;
        const mpz_class masked = ct.v * invert(commitments[j], params.p) % params.p;
        const mpz_class lhs2 = powm(vk, pf.z, params.p);
        const mpz_class rhs2 = pf.a2 * powm(masked, pf.c, params.p) % params.p;
        if (lhs1 != rhs1 || lhs2 != rhs2) return {false, "equality proof fails" + at};
    }
    return {true, ""};
}

VerifyResult verify_cipher_data(const GroupParams& params, const VeckBundle& bundle) {
    return verify_cipher_data(params, bundle.commit_digest, bundle.vk, bundle.commitments,
                              bundle.length, bundle.ciphertext, bundle.proofs);
}

bool verify_key(const GroupParams& params, const mpz_class& vk, const mpz_class& sk) {
    if (sk < 1 || sk >= params.q) return false;
    return powm(params.g, sk, params.p) == vk;
}

Bytes decrypt(const GroupParams& params, const mpz_class& sk,
              const std::vector<Ciphertext>& ciphertext, std::size_t length) {
    const std::uint32_t range = 1u << params.chunk_bits;
    std::unordered_map<std::string, std::uint32_t> table;
    table.reserve(range);
    mpz_class acc = 1;
    for (std::uint32_t m = 0; m < range; ++m) {
        table.emplace(acc.get_str(16), m);
        acc = acc * params.g % params.p;
    }
    if (ciphertext.size() != chunk_count(length, params.chunk_bits))
        throw DecryptError(0, "ciphertext length does not match the recorded data length");
    std::vector<std::uint32_t> chunks;
    chunks.reserve(ciphertext.size());
    for (std::size_t j = 0; j < ciphertext.size(); ++j) {
        const auto& ct = ciphertext[j];
        if (!in_subgroup(params, ct.u) || !in_subgroup(params, ct.v))
            throw DecryptError(j, "chunk " + std::to_string(j) + ": ciphertext not in subgroup");
        const mpz_class cm = ct.v * invert(powm(ct.u, sk, params.p), params.p) % params.p;
        const auto it = table.find(cm.get_str(16));
        if (it == table.end())
            throw DecryptError(j, "chunk " + std::to_string(j) + ": discrete log not in range");
        chunks.push_back(it->second);
    }
    return decode_chunks(chunks, params.chunk_bits, length);
}

}  // namespace ransomgame::protocol
