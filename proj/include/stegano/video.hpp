#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stegano/errors.hpp"

namespace stegano {

// One decoded 4:2:0 frame. Planes are row-major, 8-bit.
struct Frame {
    std::vector<std::uint8_t> y;  // width * height
    std::vector<std::uint8_t> u;  // (width/2) * (height/2)
    std::vector<std::uint8_t> v;  // (width/2) * (height/2)

    bool operator==(const Frame&) const = default;
};

// An uncompressed I420 video held fully in memory.
struct VideoSequence {
    int width = 0;   // even, > 0
    int height = 0;  // even, > 0
    int fps_num = 25;
    int fps_den = 1;
    // Y4M header tokens we do not interpret (interlacing, aspect, X-...),
    // kept verbatim so a rewrite stays faithful.
    std::vector<std::string> header_extras;
    std::vector<Frame> frames;

    std::size_t luma_size() const { return std::size_t(width) * std::size_t(height); }
    std::size_t chroma_size() const { return std::size_t(width / 2) * std::size_t(height / 2); }
    std::size_t frame_size() const { return luma_size() + 2 * chroma_size(); }

    std::uint8_t luma(std::size_t frame, int row, int col) const {
        return frames[frame].y[std::size_t(row) * width + col];
    }
    std::uint8_t& luma(std::size_t frame, int row, int col) {
        return frames[frame].y[std::size_t(row) * width + col];
    }

    // Throws ArgumentError/FormatError when an invariant is broken.
    void validate() const;

    bool operator==(const VideoSequence&) const = default;
};

// YUV4MPEG2 container. Only the C420 family is accepted; other chroma
// samplings are rejected rather than converted.
VideoSequence parse_y4m(std::istream& in);
std::size_t write_y4m(const VideoSequence& seq, std::ostream& out);

// Headerless planar I420. The stream length must be a multiple of
// width*height*3/2.
VideoSequence read_raw_i420(std::istream& in, int width, int height);
std::size_t write_raw_i420(const VideoSequence& seq, std::ostream& out);

// File helpers. Raw mode is selected by the caller (explicit dimensions).
VideoSequence load_y4m_file(const std::string& path);
VideoSequence load_raw_file(const std::string& path, int width, int height);
void save_y4m_file(const VideoSequence& seq, const std::string& path);
void save_raw_file(const VideoSequence& seq, const std::string& path);

}  // namespace stegano
