#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "stegano/errors.hpp"

namespace stegano {

using Key128 = std::array<std::uint8_t, 16>;
using Block = std::array<std::uint8_t, 16>;

// AES-128 expanded key: round_keys[0] is the cipher key, rounds 1..10 derived.
struct KeySchedule {
    std::array<Block, 11> round_keys;
};

// CBC ciphertext plus the IV it was chained from. The ciphertext bytes are
// the alphabet that gets embedded into the video.
struct CipherEnvelope {
    std::array<std::uint8_t, 16> iv{};
    std::vector<std::uint8_t> ciphertext;
};

// First 16 bytes of SHA-256(password). Deliberately not a hardened KDF.
Key128 derive_key(std::string_view password);

KeySchedule expand_key(const Key128& key);

Block encrypt_block(const Block& block, const KeySchedule& ks);
Block decrypt_block(const Block& block, const KeySchedule& ks);

// Raw CBC over pre-padded data (length must be a multiple of 16).
std::vector<std::uint8_t> cbc_encrypt(std::span<const std::uint8_t> data, const KeySchedule& ks,
                                      const std::array<std::uint8_t, 16>& iv);
std::vector<std::uint8_t> cbc_decrypt(std::span<const std::uint8_t> data, const KeySchedule& ks,
                                      const std::array<std::uint8_t, 16>& iv);

// PKCS#7-pad, then CBC-encrypt with an IV drawn from the caller's rng.
CipherEnvelope encrypt_payload(std::span<const std::uint8_t> plaintext, const Key128& key,
                               std::mt19937_64& rng);

// CBC-decrypt and strip PKCS#7 padding. Bad padding (wrong password or
// corrupted extraction) raises IntegrityError.
std::vector<std::uint8_t> decrypt_payload(const CipherEnvelope& env, const Key128& key);

}  // namespace stegano
