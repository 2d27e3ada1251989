#include "stegano/video.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace stegano {

namespace {

constexpr const char* kSignature = "YUV4MPEG2";

bool parse_int(std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

// Reads bytes until LF (consumed, not returned). Returns false only at a
// clean EOF; a partial unterminated line is still handed to the caller so
// trailing garbage cannot be silently dropped.
bool read_line(std::istream& in, std::string& line) {
    line.clear();
    int ch;
    while ((ch = in.get()) != std::char_traits<char>::eof()) {
        if (ch == 0x0A) return true;
        line.push_back(static_cast<char>(ch));
    }
    return !line.empty();
}

void read_plane(std::istream& in, std::vector<std::uint8_t>& plane, std::size_t n,
                std::size_t frame_index) {
    plane.resize(n);
    in.read(reinterpret_cast<char*>(plane.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw TruncationError("y4m: truncated plane data in frame " + std::to_string(frame_index));
    }
}

}  // namespace

void VideoSequence::validate() const {
    if (width <= 0 || height <= 0) throw ArgumentError("video: dimensions must be positive");
    if (width % 2 != 0 || height % 2 != 0) throw ArgumentError("video: dimensions must be even for 4:2:0");
    if (fps_den <= 0 || fps_num <= 0) throw ArgumentError("video: frame rate must be positive");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const Frame& f = frames[i];
        if (f.y.size() != luma_size() || f.u.size() != chroma_size() || f.v.size() != chroma_size()) {
            throw FormatError("video: frame " + std::to_string(i) + " has wrong plane sizes");
        }
    }
}

VideoSequence parse_y4m(std::istream& in) {
    std::string header;
    if (!read_line(in, header)) throw FormatError("y4m: missing stream header");

    std::istringstream tokens(header);
    std::string tok;
    if (!(tokens >> tok) || tok != kSignature) throw FormatError("y4m: bad signature");

    VideoSequence seq;
    bool have_w = false, have_h = false;
    while (tokens >> tok) {
        switch (tok[0]) {
            case 'W':
                if (!parse_int(std::string_view(tok).substr(1), seq.width))
                    throw FormatError("y4m: bad width token '" + tok + "'");
                have_w = true;
                break;
            case 'H':
                if (!parse_int(std::string_view(tok).substr(1), seq.height))
                    throw FormatError("y4m: bad height token '" + tok + "'");
                have_h = true;
                break;
            case 'F': {
                auto body = std::string_view(tok).substr(1);
                auto colon = body.find(':');
                if (colon == std::string_view::npos || !parse_int(body.substr(0, colon), seq.fps_num) ||
                    !parse_int(body.substr(colon + 1), seq.fps_den) || seq.fps_num <= 0 || seq.fps_den <= 0) {
                    throw FormatError("y4m: bad frame rate token '" + tok + "'");
                }
                break;
            }
            case 'C': {
                auto tag = std::string_view(tok).substr(1);
                if (tag != "420" && tag != "420jpeg" && tag != "420mpeg2") {
                    throw FormatError("y4m: unsupported chroma sampling '" + tok + "' (only C420 family)");
                }
                break;
            }
            default:
                seq.header_extras.push_back(tok);
                break;
        }
    }
    if (!have_w || !have_h) throw FormatError("y4m: header lacks W or H token");
    if (seq.width <= 0 || seq.height <= 0 || seq.width % 2 != 0 || seq.height % 2 != 0) {
        throw FormatError("y4m: invalid dimensions " + std::to_string(seq.width) + "x" +
                          std::to_string(seq.height));
    }

    std::string marker;
    while (read_line(in, marker)) {
        if (marker.rfind("FRAME", 0) != 0) {
            throw FormatError("y4m: expected FRAME marker before frame " +
                              std::to_string(seq.frames.size()));
        }
        // Anything after "FRAME" is per-frame parameters; accepted and dropped.
        Frame f;
        const std::size_t idx = seq.frames.size();
        read_plane(in, f.y, seq.luma_size(), idx);
        read_plane(in, f.u, seq.chroma_size(), idx);
        read_plane(in, f.v, seq.chroma_size(), idx);
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

std::size_t write_y4m(const VideoSequence& seq, std::ostream& out) {
    seq.validate();
    std::string header = std::string(kSignature) + " W" + std::to_string(seq.width) + " H" +
                         std::to_string(seq.height) + " F" + std::to_string(seq.fps_num) + ":" +
                         std::to_string(seq.fps_den) + " C420";
    for (const auto& extra : seq.header_extras) header += " " + extra;
    header += "\n";

    std::size_t written = header.size();
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const Frame& f : seq.frames) {
        out.write("FRAME\n", 6);
        out.write(reinterpret_cast<const char*>(f.y.data()), static_cast<std::streamsize>(f.y.size()));
        out.write(reinterpret_cast<const char*>(f.u.data()), static_cast<std::streamsize>(f.u.size()));
        out.write(reinterpret_cast<const char*>(f.v.data()), static_cast<std::streamsize>(f.v.size()));
        written += 6 + f.y.size() + f.u.size() + f.v.size();
    }
    if (!out) throw IoError("y4m: write failed");
    return written;
}

VideoSequence read_raw_i420(std::istream& in, int width, int height) {
    if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0) {
        throw ArgumentError("raw i420: width and height must be positive and even");
    }
    VideoSequence seq;
    seq.width = width;
    seq.height = height;

    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::size_t frame_size = seq.frame_size();
    if (data.size() % frame_size != 0) {
        throw TruncationError("raw i420: stream length " + std::to_string(data.size()) +
                              " is not a multiple of frame size " + std::to_string(frame_size));
    }
    const std::size_t count = data.size() / frame_size;
    seq.frames.reserve(count);
    const std::uint8_t* p = data.data();
    for (std::size_t i = 0; i < count; ++i) {
        Frame f;
        f.y.assign(p, p + seq.luma_size());
        p += seq.luma_size();
        f.u.assign(p, p + seq.chroma_size());
        p += seq.chroma_size();
        f.v.assign(p, p + seq.chroma_size());
        p += seq.chroma_size();
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

std::size_t write_raw_i420(const VideoSequence& seq, std::ostream& out) {
    seq.validate();
    std::size_t written = 0;
    for (const Frame& f : seq.frames) {
        out.write(reinterpret_cast<const char*>(f.y.data()), static_cast<std::streamsize>(f.y.size()));
        out.write(reinterpret_cast<const char*>(f.u.data()), static_cast<std::streamsize>(f.u.size()));
        out.write(reinterpret_cast<const char*>(f.v.data()), static_cast<std::streamsize>(f.v.size()));
        written += f.y.size() + f.u.size() + f.v.size();
    }
    if (!out) throw IoError("raw i420: write failed");
    return written;
}

VideoSequence load_y4m_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return parse_y4m(in);
}

VideoSequence load_raw_file(const std::string& path, int width, int height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_raw_i420(in, width, height);
}

namespace {

// Write through a temp file and rename, so failures never leave a partial output.
template <typename WriteFn>
void save_atomic(const std::string& path, WriteFn&& fn) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        try {
            fn(out);
        } catch (...) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw;
        }
        out.close();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write to '" + tmp + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move temp file onto '" + path + "'");
    }
}

}  // namespace

void save_y4m_file(const VideoSequence& seq, const std::string& path) {
    save_atomic(path, [&](std::ostream& out) { write_y4m(seq, out); });
}

void save_raw_file(const VideoSequence& seq, const std::string& path) {
    save_atomic(path, [&](std::ostream& out) { write_raw_i420(seq, out); });
}

}  // namespace stegano
