#include "stegano/codec.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

#include "stegano/roi.hpp"

namespace stegano {

namespace {

RoiParams roi_params_for(const VideoSequence& video, std::uint64_t payload_len, double fraction) {
    return RoiParams{video.width, video.height, payload_len, int(video.frames.size()), fraction};
}

void check_dims(const VideoSequence& video, const Sidecar& sc, const char* op) {
    if (video.width != sc.width || video.height != sc.height ||
        video.frames.size() != sc.frame_count) {
        throw FormatError(std::string(op) + ": sidecar dimensions " + std::to_string(sc.width) + "x" +
                          std::to_string(sc.height) + "/" + std::to_string(sc.frame_count) +
                          " frames do not match the video");
    }
}

// Embeds one frame's byte range; pool order is the candidate-list order.
void embed_frame(VideoSequence& stego, std::uint32_t frame, const ByteRange& range,
                 std::span<const std::uint8_t> payload, const RoiParams& roi,
                 const EmbedOptions& opts, std::vector<SidecarRecord>& records) {
    CandidateList positions;
    try {
        positions = candidate_positions(roi, range.size());
    } catch (const CapacityError& e) {
        throw CapacityError("frame " + std::to_string(frame) + ": " + e.what());
    }

    std::vector<GaCandidate> pool;
    pool.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        pool.push_back({i, positions[i], stego.luma(frame, positions[i].row, positions[i].col)});
    }

    std::mt19937_64 rng(mix_seed(opts.ga.seed, frame));
    records.reserve(range.size());
    for (std::uint64_t i = range.begin; i < range.end; ++i) {
        const std::uint8_t target = payload[i];
        GaResult result;
        if (opts.use_ga) {
            result = run_ga(pool, target, opts.ga, rng);
        } else {
            const GaCandidate& c = pool.front();
            result = {c.index, c.pos, target, 0, true};
        }

        const auto it = std::lower_bound(pool.begin(), pool.end(), result.candidate_index,
                                         [](const GaCandidate& c, std::size_t idx) { return c.index < idx; });
        const std::uint8_t original = it->luma;
        pool.erase(it);

        stego.luma(frame, result.pos.row, result.pos.col) = result.final_value;
        records.push_back({frame, result.pos.col, result.pos.row,
                           int(target) - int(result.final_value),
                           int(original) - int(result.final_value)});
    }
}

char hex_digit(unsigned v) {
    return v < 10 ? char('0' + v) : char('a' + v - 10);
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

std::uint64_t parse_field(std::string_view line, std::size_t& pos, std::string_view key) {
    const std::string want = "," + std::string(key) + "=";
    if (line.substr(pos, want.size()) != want) {
        throw FormatError("sidecar: expected '" + std::string(key) + "=' field");
    }
    pos += want.size();
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
    if (ec != std::errc{}) throw FormatError("sidecar: bad integer in '" + std::string(key) + "' field");
    pos = std::size_t(ptr - line.data());
    return value;
}

}  // namespace

EmbedPlan allocate(std::uint64_t ciphertext_len, int frame_count, std::uint64_t capacity_per_frame) {
    if (frame_count < 0) throw ArgumentError("allocate: frame_count must not be negative");
    EmbedPlan plan;
    plan.ranges.resize(std::size_t(frame_count));
    if (ciphertext_len == 0) return plan;
    if (frame_count == 0) {
        throw CapacityError("payload of " + std::to_string(ciphertext_len) +
                            " bytes cannot be embedded: the cover has no frames");
    }

    const std::uint64_t chunk = (ciphertext_len + frame_count - 1) / frame_count;
    if (chunk > capacity_per_frame) {
        throw CapacityError("payload of " + std::to_string(ciphertext_len) +
                            " bytes exceeds capacity; this cover holds at most " +
                            std::to_string(capacity_per_frame * std::uint64_t(frame_count)) +
                            " ciphertext bytes");
    }
    for (int k = 0; k < frame_count; ++k) {
        const std::uint64_t begin = std::min(std::uint64_t(k) * chunk, ciphertext_len);
        const std::uint64_t end = std::min(begin + chunk, ciphertext_len);
        plan.ranges[std::size_t(k)] = {begin, end};
    }
    return plan;
}

EmbedOutput embed_payload(const VideoSequence& cover, std::span<const std::uint8_t> payload,
                          const std::array<std::uint8_t, 16>& iv, const EmbedOptions& opts) {
    cover.validate();

    EmbedOutput out{cover, Sidecar{cover.width, cover.height, std::uint32_t(cover.frames.size()),
                                   payload.size(), iv, {}}};
    if (payload.empty()) return out;

    const RoiParams roi = roi_params_for(cover, payload.size(), opts.row_fraction);
    const EmbedPlan plan = allocate(payload.size(), int(cover.frames.size()), frame_capacity(roi));

    std::vector<std::vector<SidecarRecord>> per_frame(cover.frames.size());
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        for (std::uint32_t k = 0; k < cover.frames.size(); ++k) {
            if (plan.ranges[k].size() == 0) continue;
            embed_frame(out.stego, k, plan.ranges[k], payload, roi, opts, per_frame[k]);
        }
    } else {
        std::atomic<std::uint32_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            try {
                for (;;) {
                    const std::uint32_t k = next.fetch_add(1);
                    if (k >= cover.frames.size()) return;
                    if (plan.ranges[k].size() == 0) continue;
                    embed_frame(out.stego, k, plan.ranges[k], payload, roi, opts, per_frame[k]);
                }
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        };
        std::vector<std::thread> threads;
        const int n = std::min<int>(jobs, int(cover.frames.size()));
        threads.reserve(std::size_t(n));
        for (int t = 0; t < n; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    // Merge in frame order regardless of completion order.
    out.sidecar.records.reserve(payload.size());
    for (auto& records : per_frame) {
        out.sidecar.records.insert(out.sidecar.records.end(), records.begin(), records.end());
    }
    return out;
}

EmbedOutput embed(const VideoSequence& cover, std::span<const std::uint8_t> secret,
                  std::string_view password, const EmbedOptions& opts) {
    const Key128 key = derive_key(password);
    std::mt19937_64 iv_rng(mix_seed(opts.ga.seed, ~std::uint64_t{0}));
    const CipherEnvelope env = encrypt_payload(secret, key, iv_rng);
    return embed_payload(cover, env.ciphertext, env.iv, opts);
}

EmbedOutput embed_direct(const VideoSequence& cover, std::span<const std::uint8_t> secret,
                         std::string_view password, EmbedOptions opts) {
    opts.use_ga = false;
    return embed(cover, secret, password, opts);
}

std::vector<std::uint8_t> extract_payload(const VideoSequence& stego, const Sidecar& sidecar) {
    check_dims(stego, sidecar, "extract");
    std::vector<std::uint8_t> payload;
    payload.reserve(sidecar.records.size());
    for (const SidecarRecord& rec : sidecar.records) {
        const int value = int(stego.luma(rec.frame, rec.y, rec.x)) + rec.delta_extract;
        if (value < 0 || value > 255) {
            throw IntegrityError("extract: reconstructed byte out of range at frame " +
                                 std::to_string(rec.frame) + " (" + std::to_string(rec.x) + "," +
                                 std::to_string(rec.y) + "); stego or sidecar corrupted");
        }
        payload.push_back(std::uint8_t(value));
    }
    return payload;
}

std::vector<std::uint8_t> extract(const VideoSequence& stego, const Sidecar& sidecar,
                                  std::string_view password) {
    const Key128 key = derive_key(password);
    CipherEnvelope env{sidecar.iv, extract_payload(stego, sidecar)};
    return decrypt_payload(env, key);
}

VideoSequence restore(const VideoSequence& stego, const Sidecar& sidecar) {
    check_dims(stego, sidecar, "restore");
    VideoSequence cover = stego;
    for (const SidecarRecord& rec : sidecar.records) {
        const int value = int(cover.luma(rec.frame, rec.y, rec.x)) + rec.delta_restore;
        if (value < 0 || value > 255) {
            throw IntegrityError("restore: reconstructed luma out of range at frame " +
                                 std::to_string(rec.frame) + " (" + std::to_string(rec.x) + "," +
                                 std::to_string(rec.y) + ")");
        }
        cover.luma(rec.frame, rec.y, rec.x) = std::uint8_t(value);
    }
    return cover;
}

void write_sidecar(const Sidecar& sidecar, std::ostream& out) {
    if (sidecar.records.size() != sidecar.payload_len) {
        throw ArgumentError("sidecar: record count does not match payload_len");
    }
    std::string header = "#SGV1,w=" + std::to_string(sidecar.width) +
                         ",h=" + std::to_string(sidecar.height) +
                         ",f=" + std::to_string(sidecar.frame_count) +
                         ",len=" + std::to_string(sidecar.payload_len) + ",iv=";
    for (std::uint8_t b : sidecar.iv) {
        header += hex_digit(b >> 4);
        header += hex_digit(b & 0x0F);
    }
    header += "\nframe,x,y,de,dr\n";
    out.write(header.data(), std::streamsize(header.size()));

    std::string line;
    for (const SidecarRecord& rec : sidecar.records) {
        line.clear();
        line += std::to_string(rec.frame);
        line += ',';
        line += std::to_string(rec.x);
        line += ',';
        line += std::to_string(rec.y);
        line += ',';
        line += std::to_string(rec.delta_extract);
        line += ',';
        line += std::to_string(rec.delta_restore);
        line += '\n';
        out.write(line.data(), std::streamsize(line.size()));
    }
    if (!out) throw IoError("sidecar: write failed");
}

Sidecar parse_sidecar(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("sidecar: empty file");
    if (line.rfind("#SGV", 0) != 0) throw FormatError("sidecar: bad magic (expected #SGV1 header)");

    std::size_t pos = line.find(',');
    if (line.substr(0, pos) != "#SGV1") {
        throw FormatError("sidecar: unsupported version '" + line.substr(0, pos) + "'");
    }
    if (pos == std::string::npos) throw FormatError("sidecar: header lacks fields");

    Sidecar sc;
    sc.width = int(parse_field(line, pos, "w"));
    sc.height = int(parse_field(line, pos, "h"));
    sc.frame_count = std::uint32_t(parse_field(line, pos, "f"));
    sc.payload_len = parse_field(line, pos, "len");

    if (line.substr(pos, 4) != ",iv=") throw FormatError("sidecar: expected 'iv=' field");
    pos += 4;
    if (line.size() - pos != 32) throw FormatError("sidecar: iv must be 32 hex digits");
    for (int i = 0; i < 16; ++i) {
        const int hi = hex_value(line[pos + 2 * i]);
        const int lo = hex_value(line[pos + 2 * i + 1]);
        if (hi < 0 || lo < 0) throw FormatError("sidecar: iv must be lowercase hex");
        sc.iv[i] = std::uint8_t(hi << 4 | lo);
    }

    if (!std::getline(in, line) || line != "frame,x,y,de,dr") {
        throw FormatError("sidecar: missing column header 'frame,x,y,de,dr'");
    }

    sc.records.reserve(std::size_t(std::min<std::uint64_t>(sc.payload_len, 1u << 20)));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SidecarRecord rec;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        long long fields[5];
        for (int i = 0; i < 5; ++i) {
            if (i > 0) {
                if (p == end || *p != ',') throw FormatError("sidecar: malformed record line '" + line + "'");
                ++p;
            }
            auto [next, ec] = std::from_chars(p, end, fields[i]);
            if (ec != std::errc{}) throw FormatError("sidecar: malformed record line '" + line + "'");
            p = next;
        }
        if (p != end) throw FormatError("sidecar: malformed record line '" + line + "'");

        rec.frame = std::uint32_t(fields[0]);
        rec.x = int(fields[1]);
        rec.y = int(fields[2]);
        rec.delta_extract = int(fields[3]);
        rec.delta_restore = int(fields[4]);
        if (fields[0] < 0 || rec.frame >= sc.frame_count || rec.x < 0 || rec.x >= sc.width ||
            rec.y < 0 || rec.y >= sc.height) {
            throw FormatError("sidecar: record coordinates out of bounds in line '" + line + "'");
        }
        if (rec.delta_extract < -255 || rec.delta_extract > 255 || rec.delta_restore < -255 ||
            rec.delta_restore > 255) {
            throw FormatError("sidecar: delta out of range in line '" + line + "'");
        }
        sc.records.push_back(rec);
    }

    if (sc.records.size() != sc.payload_len) {
        throw FormatError("sidecar: header declares " + std::to_string(sc.payload_len) +
                          " records but file has " + std::to_string(sc.records.size()));
    }
    return sc;
}

Sidecar load_sidecar_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return parse_sidecar(in);
}

void save_sidecar_file(const Sidecar& sidecar, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        try {
            write_sidecar(sidecar, out);
        } catch (...) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw;
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move temp file onto '" + path + "'");
    }
}

}  // namespace stegano
