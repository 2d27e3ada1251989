#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace stegano {

// FIPS 180-4 SHA-256 of a single message.
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

}  // namespace stegano
