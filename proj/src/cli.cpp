#include "stegano/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <span>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "stegano/codec.hpp"
#include "stegano/quality.hpp"
#include "stegano/roi.hpp"

namespace stegano {

namespace {

namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string format_double(const char* fmt, double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string resolve_password(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("STEGO_PASSWORD")) return env;
    throw ArgumentError("no password given: use --password or set STEGO_PASSWORD");
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::vector<std::uint8_t> data{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
    if (in.bad()) throw IoError("read failed for '" + path + "'");
    return data;
}

void write_bytes_atomic(std::span<const std::uint8_t> data, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        if (!data.empty()) {
            out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
        }
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed for '" + tmp + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move temp file onto '" + path + "'");
    }
}

void write_text_atomic(const std::string& text, const std::string& path) {
    write_bytes_atomic({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()}, path);
}

VideoSequence load_cover(const std::string& path, const RunConfig& cfg) {
    return cfg.raw ? load_raw_file(path, cfg.width, cfg.height) : load_y4m_file(path);
}

// For restore there are no dimension flags; sniff the Y4M signature and
// fall back to raw I420 with the sidecar's dimensions.
std::pair<VideoSequence, bool> load_video_sniffed(const std::string& path, const Sidecar& sidecar) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    char magic[9] = {};
    in.read(magic, sizeof magic);
    const bool y4m = in.gcount() == 9 && std::string_view(magic, 9) == "YUV4MPEG2";
    in.clear();
    in.seekg(0);
    if (y4m) return {parse_y4m(in), true};
    return {read_raw_i420(in, sidecar.width, sidecar.height), false};
}

// Both embed outputs are staged as temp files and renamed together, so a
// failure partway leaves neither behind.
void commit_embed_outputs(const EmbedOutput& out, const RunConfig& cfg) {
    const std::string stego_tmp = cfg.out_path + ".tmp";
    const std::string map_tmp = cfg.sidecar_path + ".tmp";
    try {
        {
            std::ofstream f(stego_tmp, std::ios::binary | std::ios::trunc);
            if (!f) throw IoError("cannot open '" + stego_tmp + "' for writing");
            if (cfg.raw) {
                write_raw_i420(out.stego, f);
            } else {
                write_y4m(out.stego, f);
            }
            f.flush();
            if (!f) throw IoError("write failed for '" + stego_tmp + "'");
        }
        {
            std::ofstream f(map_tmp, std::ios::binary | std::ios::trunc);
            if (!f) throw IoError("cannot open '" + map_tmp + "' for writing");
            write_sidecar(out.sidecar, f);
            f.flush();
            if (!f) throw IoError("write failed for '" + map_tmp + "'");
        }
        fs::rename(stego_tmp, cfg.out_path);
        fs::rename(map_tmp, cfg.sidecar_path);
    } catch (...) {
        std::error_code ec;
        fs::remove(stego_tmp, ec);
        fs::remove(map_tmp, ec);
        throw;
    }
}

int do_embed(const RunConfig& cfg) {
    const std::string password = resolve_password(cfg.password);
    const VideoSequence cover = load_cover(cfg.cover_path, cfg);
    const std::vector<std::uint8_t> secret = read_file(cfg.secret_path);

    EmbedOptions opts;
    opts.ga.population_size = cfg.population;
    opts.ga.max_generations = cfg.max_generations;
    opts.ga.seed = cfg.seed;
    opts.row_fraction = cfg.fraction;
    opts.use_ga = !cfg.no_ga;
    opts.jobs = cfg.jobs;

    const auto start = std::chrono::steady_clock::now();
    const EmbedOutput out = cfg.no_ga ? embed_direct(cover, secret, password, opts)
                                      : embed(cover, secret, password, opts);
    const double encode_seconds = seconds_since(start);

    commit_embed_outputs(out, cfg);
    std::cout << compare_report(cover, out.stego, std::int64_t(secret.size()),
                                {encode_seconds, -1.0});
    return 0;
}

int do_extract(const RunConfig& cfg) {
    const std::string password = resolve_password(cfg.password);
    const Sidecar sidecar = load_sidecar_file(cfg.sidecar_path);
    const VideoSequence stego = load_cover(cfg.stego_path, cfg);

    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::uint8_t> secret = extract(stego, sidecar, password);
    const double decode_seconds = seconds_since(start);

    write_bytes_atomic(secret, cfg.out_path);
    std::cout << "decoding time/seconds: " << format_double("%.3f", decode_seconds) << '\n';
    return 0;
}

int do_restore(const RunConfig& cfg) {
    const Sidecar sidecar = load_sidecar_file(cfg.sidecar_path);
    const auto [stego, was_y4m] = load_video_sniffed(cfg.stego_path, sidecar);
    const VideoSequence cover = restore(stego, sidecar);
    if (was_y4m) {
        save_y4m_file(cover, cfg.out_path);
    } else {
        save_raw_file(cover, cfg.out_path);
    }
    return 0;
}

int do_capacity(const RunConfig& cfg) {
    const VideoSequence cover = load_y4m_file(cfg.cover_path);
    const RoiParams params{cover.width, cover.height, 0, int(cover.frames.size()), cfg.fraction};
    const std::uint64_t total = frame_capacity(params) * std::uint64_t(cover.frames.size());
    std::cout << total << '\n';
    return 0;
}

int do_metrics(const RunConfig& cfg, const std::vector<std::string>& hist_args) {
    const VideoSequence cover = load_y4m_file(cfg.cover_path);
    const VideoSequence stego = load_y4m_file(cfg.stego_path);
    std::cout << compare_report(cover, stego, -1);

    if (!cfg.per_frame_csv.empty()) {
        const QualityReport report = psnr_series(cover, stego);
        std::string csv = "frame,mse,psnr\n";
        for (const FrameMetric& m : report.per_frame) {
            csv += std::to_string(m.frame);
            csv += ',';
            csv += format_double("%.10g", m.mse);
            csv += ',';
            csv += format_double("%.10g", m.psnr);
            csv += '\n';
        }
        write_text_atomic(csv, cfg.per_frame_csv);
    }

    if (!hist_args.empty()) {
        std::uint32_t frame = 0;
        const std::string& arg = hist_args[0];
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), frame);
        if (ec != std::errc{} || ptr != arg.data() + arg.size()) {
            throw ArgumentError("--hist frame must be a non-negative integer");
        }
        if (frame >= cover.frames.size()) {
            throw ArgumentError("--hist frame " + arg + " out of range (video has " +
                                std::to_string(cover.frames.size()) + " frames)");
        }
        const Histogram256 ch = histogram(cover.frames[frame].y);
        const Histogram256 sh = histogram(stego.frames[frame].y);
        std::string csv = "bin,cover_count,stego_count\n";
        for (int bin = 0; bin < 256; ++bin) {
            csv += std::to_string(bin);
            csv += ',';
            csv += std::to_string(ch.counts[std::size_t(bin)]);
            csv += ',';
            csv += std::to_string(sh.counts[std::size_t(bin)]);
            csv += '\n';
        }
        write_text_atomic(csv, hist_args[1]);
    }
    return 0;
}

void add_raw_options(CLI::App* cmd, RunConfig& cfg) {
    auto* raw = cmd->add_flag("--raw", cfg.raw, "Treat video files as headerless planar I420");
    auto* width = cmd->add_option("--width", cfg.width, "Raw frame width")
                      ->check(CLI::PositiveNumber);
    auto* height = cmd->add_option("--height", cfg.height, "Raw frame height")
                       ->check(CLI::PositiveNumber);
    raw->needs(width)->needs(height);
    width->needs(raw);
    height->needs(raw);
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Hide an encrypted payload in the luma plane of uncompressed YUV video"};
    app.name("stegano-ga");
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<std::string> hist_args;

    CLI::App* embed_cmd =
        app.add_subcommand("embed", "Encrypt a secret file and hide it in a cover video");
    embed_cmd->add_option("--cover", cfg.cover_path, "Cover video (Y4M, or raw I420 with --raw)")
        ->required();
    embed_cmd->add_option("--secret", cfg.secret_path, "File to hide")->required();
    embed_cmd->add_option("--password", cfg.password, "Password (default: $STEGO_PASSWORD)");
    embed_cmd->add_option("--out", cfg.out_path, "Stego video output path")->required();
    embed_cmd->add_option("--sidecar", cfg.sidecar_path, "Extraction map output path (CSV)")
        ->required();
    embed_cmd->add_option("--seed", cfg.seed, "RNG seed; same seed reproduces outputs bit-exactly");
    embed_cmd->add_flag("--no-ga", cfg.no_ga, "Write each byte to the next candidate pixel as-is");
    embed_cmd->add_option("--pop", cfg.population, "GA population size")
        ->check(CLI::PositiveNumber);
    embed_cmd->add_option("--max-gen", cfg.max_generations, "GA generation cap")
        ->check(CLI::NonNegativeNumber);
    embed_cmd->add_option("--fraction", cfg.fraction, "Fraction of each row/diagonal eligible");
    embed_cmd->add_option("--jobs", cfg.jobs, "Worker threads (output identical to --jobs 1)")
        ->check(CLI::PositiveNumber);
    add_raw_options(embed_cmd, cfg);

    CLI::App* extract_cmd =
        app.add_subcommand("extract", "Recover the secret from a stego video and its sidecar");
    extract_cmd->add_option("--stego", cfg.stego_path, "Stego video")->required();
    extract_cmd->add_option("--sidecar", cfg.sidecar_path, "Extraction map (CSV)")->required();
    extract_cmd->add_option("--password", cfg.password, "Password (default: $STEGO_PASSWORD)");
    extract_cmd->add_option("--out", cfg.out_path, "Recovered secret output path")->required();
    add_raw_options(extract_cmd, cfg);

    CLI::App* restore_cmd =
        app.add_subcommand("restore", "Rebuild the exact cover video from a stego video");
    restore_cmd->add_option("--stego", cfg.stego_path, "Stego video")->required();
    restore_cmd->add_option("--sidecar", cfg.sidecar_path, "Extraction map (CSV)")->required();
    restore_cmd->add_option("--out", cfg.out_path, "Restored cover output path")->required();

    CLI::App* capacity_cmd =
        app.add_subcommand("capacity", "Print how many payload bytes a cover video can hold");
    capacity_cmd->add_option("--cover", cfg.cover_path, "Cover video (Y4M)")->required();
    capacity_cmd->add_option("--fraction", cfg.fraction, "Fraction of each row/diagonal eligible");

    CLI::App* metrics_cmd =
        app.add_subcommand("metrics", "Report PSNR/MSE between a cover and a stego video");
    metrics_cmd->add_option("--cover", cfg.cover_path, "Cover video (Y4M)")->required();
    metrics_cmd->add_option("--stego", cfg.stego_path, "Stego video (Y4M)")->required();
    metrics_cmd->add_option("--per-frame", cfg.per_frame_csv, "Write per-frame CSV here");
    metrics_cmd->add_option("--hist", hist_args, "Frame index and CSV path for Y histograms")
        ->expected(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "stegano-ga: " << e.what() << '\n';
        return 1;
    }

    try {
        if (embed_cmd->parsed()) {
            cfg.subcommand = "embed";
            return do_embed(cfg);
        }
        if (extract_cmd->parsed()) {
            cfg.subcommand = "extract";
            return do_extract(cfg);
        }
        if (restore_cmd->parsed()) {
            cfg.subcommand = "restore";
            return do_restore(cfg);
        }
        if (capacity_cmd->parsed()) {
            cfg.subcommand = "capacity";
            return do_capacity(cfg);
        }
        cfg.subcommand = "metrics";
        return do_metrics(cfg, hist_args);
    } catch (const CapacityError& e) {
        std::cerr << "stegano-ga: " << e.what() << '\n';
        return 2;
    } catch (const IntegrityError& e) {
        std::cerr << "stegano-ga: " << e.what() << '\n';
        return 3;
    } catch (const ArgumentError& e) {
        std::cerr << "stegano-ga: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "stegano-ga: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace stegano
