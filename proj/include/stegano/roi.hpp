#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stegano/errors.hpp"

namespace stegano {

// Inputs to the per-frame candidate-pixel plan. payload_len is the total
// ciphertext length across all frames.
struct RoiParams {
    int width = 0;
    int height = 0;
    std::uint64_t payload_len = 0;
    int frame_count = 0;
    double row_fraction = 0.1;
};

// (row, col) of one luma sample within a frame.
struct PixelPos {
    int row = 0;
    int col = 0;

    bool operator==(const PixelPos&) const = default;
    auto operator<=>(const PixelPos&) const = default;
};

// One scan unit: the main diagonal, or a single row.
struct RoiUnit {
    bool diagonal = false;
    int row = 0;

    bool operator==(const RoiUnit&) const = default;
};

using CandidateList = std::vector<PixelPos>;

// Row demand per frame: R = (payload_len / frame_count) / (width * fraction).
// Zero payload gives 0.
double row_metric(const RoiParams& params);

// ceil(row_metric), at least 1 for a non-empty payload.
int unit_count(const RoiParams& params);

// Unit 0 is the diagonal; rows then alternate top, bottom, top+1, bottom-1, ...
// count may not exceed height + 1.
std::vector<RoiUnit> unit_schedule(int height, int count);

// Ordered candidate pixels for one frame: whole units are consumed in
// schedule order until at least bytes_for_frame positions are collected.
// Positions already claimed by an earlier unit (or earlier index in the same
// unit) are skipped. The result can exceed the budget but never falls short.
CandidateList candidate_positions(const RoiParams& params, std::uint64_t bytes_for_frame);

// Size of the maximal candidate list (every unit, duplicates removed).
std::uint64_t frame_capacity(const RoiParams& params);

}  // namespace stegano
