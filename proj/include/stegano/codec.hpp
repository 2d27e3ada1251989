#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stegano/aes.hpp"
#include "stegano/ga.hpp"
#include "stegano/video.hpp"

namespace stegano {

// One embedded byte's map entry. Adding delta_extract to the stego luma
// recovers the ciphertext byte; adding delta_restore recovers the cover luma.
struct SidecarRecord {
    std::uint32_t frame = 0;
    int x = 0;  // column
    int y = 0;  // row
    int delta_extract = 0;
    int delta_restore = 0;

    bool operator==(const SidecarRecord&) const = default;
};

struct Sidecar {
    int width = 0;
    int height = 0;
    std::uint32_t frame_count = 0;
    std::uint64_t payload_len = 0;  // ciphertext bytes == record count
    std::array<std::uint8_t, 16> iv{};
    std::vector<SidecarRecord> records;

    bool operator==(const Sidecar&) const = default;
};

// Contiguous per-frame chunking of the ciphertext.
struct ByteRange {
    std::uint64_t begin = 0;
    std::uint64_t end = 0;

    std::uint64_t size() const { return end - begin; }
    bool operator==(const ByteRange&) const = default;
};

struct EmbedPlan {
    std::vector<ByteRange> ranges;  // one per frame, may be empty at the tail
};

EmbedPlan allocate(std::uint64_t ciphertext_len, int frame_count, std::uint64_t capacity_per_frame);

struct EmbedOptions {
    GaParams ga;
    double row_fraction = 0.1;
    bool use_ga = true;
    int jobs = 1;
};

struct EmbedOutput {
    VideoSequence stego;
    Sidecar sidecar;
};

// AES-encrypts the secret and hides the ciphertext bytes, one GA run per
// byte. U/V planes and unselected Y samples stay byte-identical.
EmbedOutput embed(const VideoSequence& cover, std::span<const std::uint8_t> secret,
                  std::string_view password, const EmbedOptions& opts = {});

// Baseline without the GA: each byte lands on the next unused candidate.
EmbedOutput embed_direct(const VideoSequence& cover, std::span<const std::uint8_t> secret,
                         std::string_view password, EmbedOptions opts = {});

// Embedding core below the AES envelope; payload bytes go in as-is.
EmbedOutput embed_payload(const VideoSequence& cover, std::span<const std::uint8_t> payload,
                          const std::array<std::uint8_t, 16>& iv, const EmbedOptions& opts = {});

// Reads back the raw ciphertext bytes named by the sidecar records.
std::vector<std::uint8_t> extract_payload(const VideoSequence& stego, const Sidecar& sidecar);

// Full pipeline: gather ciphertext, then decrypt with the password.
std::vector<std::uint8_t> extract(const VideoSequence& stego, const Sidecar& sidecar,
                                  std::string_view password);

// Rebuilds the cover exactly by applying delta_restore to every record.
VideoSequence restore(const VideoSequence& stego, const Sidecar& sidecar);

void write_sidecar(const Sidecar& sidecar, std::ostream& out);
Sidecar parse_sidecar(std::istream& in);

Sidecar load_sidecar_file(const std::string& path);
void save_sidecar_file(const Sidecar& sidecar, const std::string& path);

}  // namespace stegano
