#include "stegano/roi.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

namespace stegano {

namespace {

void check_params(const RoiParams& p) {
    if (p.width <= 0 || p.height <= 0) throw ArgumentError("roi: dimensions must be positive");
    if (!(p.row_fraction > 0.0) || p.row_fraction > 1.0) {
        throw ArgumentError("roi: row_fraction must be in (0, 1]");
    }
}

// Candidates per unit under the fraction rule.
int unit_budget(const RoiParams& p) {
    return static_cast<int>(std::floor(p.row_fraction * p.width));
}

// Collects candidates unit by unit. Whole units are consumed, so the result
// may overshoot the budget. Returns false if even all units fall short.
bool collect(const RoiParams& p, std::uint64_t budget, bool all_units, CandidateList& out) {
    const int c = unit_budget(p);
    out.clear();
    if (c == 0) return budget == 0;
    const int d = std::min(p.height, p.width);

    struct PosHash {
        std::size_t operator()(const PixelPos& pos) const {
            return std::size_t(pos.row) * 0x9E3779B9u + std::size_t(pos.col);
        }
    };
    std::unordered_set<PixelPos, PosHash> claimed;
    claimed.reserve(std::size_t(c) * 8);

    const auto units = unit_schedule(p.height, p.height + 1);
    for (const RoiUnit& unit : units) {
        if (!all_units && out.size() >= budget) break;
        for (int j = 0; j < c; ++j) {
            PixelPos pos;
            if (unit.diagonal) {
                const int t = int(std::int64_t(j) * d / c);
                pos = {t, t};
            } else {
                pos = {unit.row, int(std::int64_t(j) * p.width / c)};
            }
            if (claimed.insert(pos).second) out.push_back(pos);
        }
    }
    return out.size() >= budget;
}

}  // namespace

double row_metric(const RoiParams& params) {
    check_params(params);
    if (params.payload_len == 0) return 0.0;
    if (params.frame_count <= 0) throw ArgumentError("roi: frame_count must be positive");
    return (double(params.payload_len) / params.frame_count) / (params.width * params.row_fraction);
}

int unit_count(const RoiParams& params) {
    const double r = row_metric(params);
    if (params.payload_len == 0) return 0;
    return std::max(1, static_cast<int>(std::ceil(r)));
}

std::vector<RoiUnit> unit_schedule(int height, int count) {
    if (height <= 0) throw ArgumentError("roi: height must be positive");
    if (count > height + 1) {
        throw CapacityError("roi: " + std::to_string(count) + " units requested but only " +
                            std::to_string(height + 1) + " exist (diagonal + " +
                            std::to_string(height) + " rows)");
    }
    std::vector<RoiUnit> units;
    units.reserve(std::size_t(std::max(count, 0)));
    if (count <= 0) return units;
    units.push_back({true, 0});
    int top = 0, bottom = height - 1;
    bool take_top = true;
    while (int(units.size()) < count) {
        if (take_top) {
            units.push_back({false, top++});
        } else {
            units.push_back({false, bottom--});
        }
        take_top = !take_top;
    }
    return units;
}

CandidateList candidate_positions(const RoiParams& params, std::uint64_t bytes_for_frame) {
    check_params(params);
    CandidateList out;
    if (bytes_for_frame == 0) return out;
    if (!collect(params, bytes_for_frame, false, out)) {
        throw CapacityError("roi: frame budget of " + std::to_string(bytes_for_frame) +
                            " bytes exceeds frame capacity of " + std::to_string(out.size()));
    }
    return out;
}

std::uint64_t frame_capacity(const RoiParams& params) {
    check_params(params);
    CandidateList all;
    collect(params, 0, true, all);
    return all.size();
}

}  // namespace stegano
