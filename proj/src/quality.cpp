#include "stegano/quality.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "stegano/errors.hpp"

namespace stegano {

namespace {

std::uint64_t squared_error(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int d = int(a[i]) - int(b[i]);
        sum += std::uint64_t(d * d);
    }
    return sum;
}

std::string format_double(const char* fmt, double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

double mse(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) {
        throw ArgumentError("mse: plane sizes differ (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
    }
    if (a.empty()) throw ArgumentError("mse: empty plane");
    return double(squared_error(a, b)) / double(a.size());
}

double psnr(double mse_value) {
    if (mse_value < 0.0) throw ArgumentError("psnr: mse must be non-negative");
    if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse_value);
}

QualityReport psnr_series(const VideoSequence& cover, const VideoSequence& stego) {
    if (cover.width != stego.width || cover.height != stego.height ||
        cover.frames.size() != stego.frames.size()) {
        throw ArgumentError("psnr_series: videos differ in dimensions or frame count");
    }
    cover.validate();
    stego.validate();

    QualityReport report;
    report.per_frame.reserve(cover.frames.size());
    std::uint64_t total_error = 0;
    for (std::size_t k = 0; k < cover.frames.size(); ++k) {
        const std::uint64_t err = squared_error(cover.frames[k].y, stego.frames[k].y);
        total_error += err;
        const double frame_mse = double(err) / double(cover.luma_size());
        report.per_frame.push_back({std::uint32_t(k), frame_mse, psnr(frame_mse)});
    }
    const std::uint64_t total_samples = cover.luma_size() * cover.frames.size();
    report.aggregate_mse = total_samples ? double(total_error) / double(total_samples) : 0.0;
    report.aggregate_psnr = psnr(report.aggregate_mse);
    return report;
}

Histogram256 histogram(std::span<const std::uint8_t> plane) {
    Histogram256 h;
    for (std::uint8_t v : plane) ++h.counts[v];
    return h;
}

std::string compare_report(const VideoSequence& cover, const VideoSequence& stego,
                           std::int64_t payload_bytes, const Timings& timings) {
    const QualityReport report = psnr_series(cover, stego);
    std::string table = "size,frames,payload_bytes,encode_seconds,decode_seconds,psnr_db,mse\n";
    table += std::to_string(cover.width) + "x" + std::to_string(cover.height);
    table += ',';
    table += std::to_string(cover.frames.size());
    table += ',';
    table += payload_bytes < 0 ? "-" : std::to_string(payload_bytes);
    table += ',';
    table += timings.encode_seconds < 0 ? "-" : format_double("%.3f", timings.encode_seconds);
    table += ',';
    table += timings.decode_seconds < 0 ? "-" : format_double("%.3f", timings.decode_seconds);
    table += ',';
    table += format_double("%.4f", report.aggregate_psnr);
    table += ',';
    table += format_double("%.9g", report.aggregate_mse);
    table += '\n';
    return table;
}

}  // namespace stegano
