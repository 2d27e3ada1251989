#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stegano/video.hpp"

namespace stegano {

struct FrameMetric {
    std::uint32_t frame = 0;
    double mse = 0.0;
    double psnr = 0.0;

    bool operator==(const FrameMetric&) const = default;
};

struct QualityReport {
    std::vector<FrameMetric> per_frame;
    double aggregate_mse = 0.0;
    double aggregate_psnr = 0.0;
    double encode_seconds = 0.0;
    double decode_seconds = 0.0;
};

struct Histogram256 {
    std::array<std::uint64_t, 256> counts{};

    bool operator==(const Histogram256&) const = default;
};

// Wall-clock figures for the report table; negative means "not measured"
// and renders as '-'.
struct Timings {
    double encode_seconds = -1.0;
    double decode_seconds = -1.0;
};

// Mean squared error between two equally sized sample planes.
double mse(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

// 10*log10(255^2/mse); mse of zero yields +infinity.
double psnr(double mse_value);

// Per-frame and pooled Y-plane metrics for a cover/stego pair.
QualityReport psnr_series(const VideoSequence& cover, const VideoSequence& stego);

Histogram256 histogram(std::span<const std::uint8_t> plane);

// Two-line CSV table: size, frames, payload bytes, timings, PSNR, MSE.
// payload_bytes < 0 renders as '-'.
std::string compare_report(const VideoSequence& cover, const VideoSequence& stego,
                           std::int64_t payload_bytes, const Timings& timings = {});

}  // namespace stegano
