/**
 * gaze_core.hpp — Per-sample geometric labeling and fixation detection.
 *
 * Quadrant convention (configurable): Q3 = top-left, Q4 = top-right,
 * Q1 = bottom-left, Q2 = bottom-right. Boundary points on the screen
 * midlines assign to the right/bottom side.
 */

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "gazekit/types.hpp"

namespace gazekit {

struct OutOfBounds : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Labels for the four screen cells in order TL, TR, BL, BR.
struct QuadrantMap {
    std::array<Quadrant, 4> cells = {Quadrant::Q3, Quadrant::Q4, Quadrant::Q1, Quadrant::Q2};
};

Quadrant quadrant_of(double x, double y, double screen_w, double screen_h,
                     const QuadrantMap& map = {});

/// Ids of every AoI whose closed rectangle contains the point, in
/// config order.
std::vector<std::string> aoi_hits(double x, double y, const AoiConfig& aois);

struct SampleLabel {
    bool valid = false;
    Quadrant quadrant = Quadrant::Q1;
    std::vector<std::string> aoi_hits;
    // Highest-priority hit (Target > Distractor > Neutral, then config
    // order); empty when no AoI contains the sample.
    std::string primary_aoi;
    std::string message;
};

/// One label per sample, aligned with session.samples. Invalid samples
/// get valid=false and an empty message.
std::vector<SampleLabel> label_samples(const SessionLog& session, const AoiConfig& aois,
                                       const QuadrantMap& map = {});

/// Agreement between recomputed labels and the log's own Message
/// column, compared on a normalized form (case, spacing and "AoI"
/// spelling variants folded).
struct ConsistencyReport {
    std::size_t compared = 0;
    std::size_t quadrant_agree = 0;
    std::size_t aoi_flag_agree = 0;   // In vs Not-in AoI
    std::size_t full_agree = 0;       // quadrant + flag + stimulus name
    struct Diff {
        std::size_t row;
        std::string source;
        std::string recomputed;
    };
    std::vector<Diff> diffs;  // rows where quadrant or AoI flag disagree

    bool clean() const { return quadrant_agree == compared && aoi_flag_agree == compared; }
};

ConsistencyReport check_consistency(const SessionLog& session,
                                    const std::vector<SampleLabel>& labels);

/// Dispersion-threshold (I-DT) fixation detection. Greedy left-to-right:
/// a fixation is a maximal window of consecutive valid samples whose
/// bounding box stays within the threshold on both axes and whose time
/// span reaches the minimum duration. Validity gaps split windows.
std::vector<Fixation> detect_fixations(const std::vector<GazeSample>& samples,
                                       double dispersion_threshold_px = 50.0,
                                       double min_duration_ms = 100.0);

/// Labeled-sample CSV export, bit-stable across runs.
std::string export_labels_csv(const SessionLog& session, const std::vector<SampleLabel>& labels);

}  // namespace gazekit
