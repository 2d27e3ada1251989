#include "stegano/aes.hpp"

#include <cstring>

#include "stegano/sha256.hpp"

namespace stegano {

namespace {

constexpr std::uint8_t kSbox[256] = {
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16};

constexpr std::uint8_t kInvSbox[256] = {
    0x52, 0x09, 0x6a, 0xd5, 0x30, 0x36, 0xa5, 0x38, 0xbf, 0x40, 0xa3, 0x9e, 0x81, 0xf3, 0xd7, 0xfb,
    0x7c, 0xe3, 0x39, 0x82, 0x9b, 0x2f, 0xff, 0x87, 0x34, 0x8e, 0x43, 0x44, 0xc4, 0xde, 0xe9, 0xcb,
    0x54, 0x7b, 0x94, 0x32, 0xa6, 0xc2, 0x23, 0x3d, 0xee, 0x4c, 0x95, 0x0b, 0x42, 0xfa, 0xc3, 0x4e,
    0x08, 0x2e, 0xa1, 0x66, 0x28, 0xd9, 0x24, 0xb2, 0x76, 0x5b, 0xa2, 0x49, 0x6d, 0x8b, 0xd1, 0x25,
    0x72, 0xf8, 0xf6, 0x64, 0x86, 0x68, 0x98, 0x16, 0xd4, 0xa4, 0x5c, 0xcc, 0x5d, 0x65, 0xb6, 0x92,
    0x6c, 0x70, 0x48, 0x50, 0xfd, 0xed, 0xb9, 0xda, 0x5e, 0x15, 0x46, 0x57, 0xa7, 0x8d, 0x9d, 0x84,
    0x90, 0xd8, 0xab, 0x00, 0x8c, 0xbc, 0xd3, 0x0a, 0xf7, 0xe4, 0x58, 0x05, 0xb8, 0xb3, 0x45, 0x06,
    0xd0, 0x2c, 0x1e, 0x8f, 0xca, 0x3f, 0x0f, 0x02, 0xc1, 0xaf, 0xbd, 0x03, 0x01, 0x13, 0x8a, 0x6b,
    0x3a, 0x91, 0x11, 0x41, 0x4f, 0x67, 0xdc, 0xea, 0x97, 0xf2, 0xcf, 0xce, 0xf0, 0xb4, 0xe6, 0x73,
    0x96, 0xac, 0x74, 0x22, 0xe7, 0xad, 0x35, 0x85, 0xe2, 0xf9, 0x37, 0xe8, 0x1c, 0x75, 0xdf, 0x6e,
    0x47, 0xf1, 0x1a, 0x71, 0x1d, 0x29, 0xc5, 0x89, 0x6f, 0xb7, 0x62, 0x0e, 0xaa, 0x18, 0xbe, 0x1b,
    0xfc, 0x56, 0x3e, 0x4b, 0xc6, 0xd2, 0x79, 0x20, 0x9a, 0xdb, 0xc0, 0xfe, 0x78, 0xcd, 0x5a, 0xf4,
    0x1f, 0xdd, 0xa8, 0x33, 0x88, 0x07, 0xc7, 0x31, 0xb1, 0x12, 0x10, 0x59, 0x27, 0x80, 0xec, 0x5f,
    0x60, 0x51, 0x7f, 0xa9, 0x19, 0xb5, 0x4a, 0x0d, 0x2d, 0xe5, 0x7a, 0x9f, 0x93, 0xc9, 0x9c, 0xef,
    0xa0, 0xe0, 0x3b, 0x4d, 0xae, 0x2a, 0xf5, 0xb0, 0xc8, 0xeb, 0xbb, 0x3c, 0x83, 0x53, 0x99, 0x61,
    0x17, 0x2b, 0x04, 0x7e, 0xba, 0x77, 0xd6, 0x26, 0xe1, 0x69, 0x14, 0x63, 0x55, 0x21, 0x0c, 0x7d};

constexpr std::uint8_t kRcon[11] = {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36};

// GF(2^8) doubling, reduction polynomial x^8 + x^4 + x^3 + x + 1.
inline std::uint8_t xtime(std::uint8_t a) {
    return std::uint8_t((a << 1) ^ ((a >> 7) * 0x1b));
}

inline std::uint8_t gmul(std::uint8_t a, std::uint8_t b) {
    std::uint8_t acc = 0;
    while (b) {
        if (b & 1) acc ^= a;
        a = xtime(a);
        b >>= 1;
    }
    return acc;
}

// State is kept in FIPS input order: byte i holds row i%4, column i/4.
inline void add_round_key(Block& s, const Block& rk) {
    for (int i = 0; i < 16; ++i) s[i] ^= rk[i];
}

inline void sub_bytes(Block& s) {
    for (auto& b : s) b = kSbox[b];
}

inline void inv_sub_bytes(Block& s) {
    for (auto& b : s) b = kInvSbox[b];
}

// Row r rotates left by r positions across the four columns.
inline void shift_rows(Block& s) {
    const Block t = s;
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) s[r + 4 * c] = t[r + 4 * ((c + r) % 4)];
}

inline void inv_shift_rows(Block& s) {
    const Block t = s;
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) s[r + 4 * ((c + r) % 4)] = t[r + 4 * c];
}

inline void mix_columns(Block& s) {
    for (int c = 0; c < 4; ++c) {
        std::uint8_t* col = &s[4 * c];
        const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
        const std::uint8_t all = a0 ^ a1 ^ a2 ^ a3;
        col[0] = std::uint8_t(a0 ^ all ^ xtime(std::uint8_t(a0 ^ a1)));
        col[1] = std::uint8_t(a1 ^ all ^ xtime(std::uint8_t(a1 ^ a2)));
        col[2] = std::uint8_t(a2 ^ all ^ xtime(std::uint8_t(a2 ^ a3)));
        col[3] = std::uint8_t(a3 ^ all ^ xtime(std::uint8_t(a3 ^ a0)));
    }
}

inline void inv_mix_columns(Block& s) {
    for (int c = 0; c < 4; ++c) {
        std::uint8_t* col = &s[4 * c];
        const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
        col[0] = gmul(a0, 14) ^ gmul(a1, 11) ^ gmul(a2, 13) ^ gmul(a3, 9);
        col[1] = gmul(a0, 9) ^ gmul(a1, 14) ^ gmul(a2, 11) ^ gmul(a3, 13);
        col[2] = gmul(a0, 13) ^ gmul(a1, 9) ^ gmul(a2, 14) ^ gmul(a3, 11);
        col[3] = gmul(a0, 11) ^ gmul(a1, 13) ^ gmul(a2, 9) ^ gmul(a3, 14);
    }
}

inline void xor_into(std::uint8_t* dst, const std::uint8_t* src) {
    for (int i = 0; i < 16; ++i) dst[i] ^= src[i];
}

}  // namespace

Key128 derive_key(std::string_view password) {
    if (password.empty()) throw ArgumentError("password must not be empty");
    const auto digest = sha256(
        std::span(reinterpret_cast<const std::uint8_t*>(password.data()), password.size()));
    Key128 key;
    std::memcpy(key.data(), digest.data(), key.size());
    return key;
}

KeySchedule expand_key(const Key128& key) {
    std::array<std::uint8_t, 176> w;  // 44 words
    std::memcpy(w.data(), key.data(), 16);
    for (int i = 4; i < 44; ++i) {
        std::uint8_t temp[4];
        std::memcpy(temp, &w[4 * (i - 1)], 4);
        if (i % 4 == 0) {
            const std::uint8_t t0 = temp[0];  // RotWord
            temp[0] = std::uint8_t(kSbox[temp[1]] ^ kRcon[i / 4]);
            temp[1] = kSbox[temp[2]];
            temp[2] = kSbox[temp[3]];
            temp[3] = kSbox[t0];
        }
        for (int b = 0; b < 4; ++b) w[4 * i + b] = std::uint8_t(w[4 * (i - 4) + b] ^ temp[b]);
    }
    KeySchedule ks;
    for (int r = 0; r < 11; ++r) std::memcpy(ks.round_keys[r].data(), &w[16 * r], 16);
    return ks;
}

Block encrypt_block(const Block& block, const KeySchedule& ks) {
    Block s = block;
    add_round_key(s, ks.round_keys[0]);
    for (int round = 1; round <= 9; ++round) {
        sub_bytes(s);
        shift_rows(s);
        mix_columns(s);
        add_round_key(s, ks.round_keys[round]);
    }
    // Final round skips the column mix.
    sub_bytes(s);
    shift_rows(s);
    add_round_key(s, ks.round_keys[10]);
    return s;
}

Block decrypt_block(const Block& block, const KeySchedule& ks) {
    Block s = block;
    add_round_key(s, ks.round_keys[10]);
    for (int round = 9; round >= 1; --round) {
        inv_shift_rows(s);
        inv_sub_bytes(s);
        add_round_key(s, ks.round_keys[round]);
        inv_mix_columns(s);
    }
    inv_shift_rows(s);
    inv_sub_bytes(s);
    add_round_key(s, ks.round_keys[0]);
    return s;
}

std::vector<std::uint8_t> cbc_encrypt(std::span<const std::uint8_t> data, const KeySchedule& ks,
                                      const std::array<std::uint8_t, 16>& iv) {
    if (data.size() % 16 != 0) throw ArgumentError("cbc_encrypt: data length must be a multiple of 16");
    std::vector<std::uint8_t> out(data.begin(), data.end());
    const std::uint8_t* chain = iv.data();
    for (std::size_t off = 0; off < out.size(); off += 16) {
        xor_into(&out[off], chain);
        Block b;
        std::memcpy(b.data(), &out[off], 16);
        b = encrypt_block(b, ks);
        std::memcpy(&out[off], b.data(), 16);
        chain = &out[off];
    }
    return out;
}

std::vector<std::uint8_t> cbc_decrypt(std::span<const std::uint8_t> data, const KeySchedule& ks,
                                      const std::array<std::uint8_t, 16>& iv) {
    if (data.empty() || data.size() % 16 != 0) {
        throw ArgumentError("cbc_decrypt: data length must be a positive multiple of 16");
    }
    std::vector<std::uint8_t> out(data.size());
    const std::uint8_t* chain = iv.data();
    for (std::size_t off = 0; off < data.size(); off += 16) {
        Block b;
        std::memcpy(b.data(), &data[off], 16);
        b = decrypt_block(b, ks);
        std::memcpy(&out[off], b.data(), 16);
        xor_into(&out[off], chain);
        chain = &data[off];
    }
    return out;
}

CipherEnvelope encrypt_payload(std::span<const std::uint8_t> plaintext, const Key128& key,
                               std::mt19937_64& rng) {
    CipherEnvelope env;
    for (std::size_t i = 0; i < 16; i += 8) {
        const std::uint64_t r = rng();
        for (int b = 0; b < 8; ++b) env.iv[i + b] = std::uint8_t(r >> (8 * b));
    }

    const std::size_t pad = 16 - plaintext.size() % 16;
    std::vector<std::uint8_t> padded(plaintext.begin(), plaintext.end());
    padded.insert(padded.end(), pad, std::uint8_t(pad));

    env.ciphertext = cbc_encrypt(padded, expand_key(key), env.iv);
    return env;
}

std::vector<std::uint8_t> decrypt_payload(const CipherEnvelope& env, const Key128& key) {
    if (env.ciphertext.empty() || env.ciphertext.size() % 16 != 0) {
        throw ArgumentError("decrypt_payload: ciphertext length must be a positive multiple of 16");
    }
    std::vector<std::uint8_t> padded = cbc_decrypt(env.ciphertext, expand_key(key), env.iv);

    const std::uint8_t pad = padded.back();
    if (pad == 0 || pad > 16) throw IntegrityError("invalid padding (wrong password or corrupted data)");
    for (std::size_t i = padded.size() - pad; i < padded.size(); ++i) {
        if (padded[i] != pad) throw IntegrityError("invalid padding (wrong password or corrupted data)");
    }
    padded.resize(padded.size() - pad);
    return padded;
}

}  // namespace stegano
