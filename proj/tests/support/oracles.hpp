// Brute-force reference implementations used to check the engine.
// Everything here recomputes from first principles (exhaustive window
// enumeration, per-millisecond replay) and must stay independent of the
// library's incremental code paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "gazekit/attention_metrics.hpp"
#include "gazekit/types.hpp"

namespace gazekit::oracle {

// Dispersion of samples[i..j], both axes, recomputed from scratch.
inline std::pair<double, double> window_dispersion(const std::vector<GazeSample>& samples,
                                                   std::size_t i, std::size_t j) {
    double min_x = samples[i].x, max_x = samples[i].x;
    double min_y = samples[i].y, max_y = samples[i].y;
    for (std::size_t k = i; k <= j; ++k) {
        min_x = std::min(min_x, samples[k].x);
        max_x = std::max(max_x, samples[k].x);
        min_y = std::min(min_y, samples[k].y);
        max_y = std::max(max_y, samples[k].y);
    }
    return {max_x - min_x, max_y - min_y};
}

// Exhaustive-enumeration fixation oracle: applies the declarative rule
// directly. A fixation starts at the earliest index whose maximal
// within-threshold window reaches the minimum duration; the next search
// resumes after it.
inline std::vector<Fixation> fixations(const std::vector<GazeSample>& samples,
                                       double threshold_px, double min_duration_ms) {
    std::vector<Fixation> out;
    std::size_t n = samples.size();
    std::size_t i = 0;
    while (i < n) {
        if (!samples[i].valid) {
            ++i;
            continue;
        }
        // maximal all-valid window starting at i within the threshold
        std::size_t best_j = i;
        for (std::size_t j = i; j < n; ++j) {
            if (!samples[j].valid) break;
            auto [dx, dy] = window_dispersion(samples, i, j);
            if (dx > threshold_px || dy > threshold_px) break;
            best_j = j;
        }
        double span = samples[best_j].timestamp_ms - samples[i].timestamp_ms;
        if (span >= min_duration_ms) {
            Fixation f;
            f.start_ms = samples[i].timestamp_ms;
            f.duration_ms = span;
            f.sample_count = static_cast<int>(best_j - i + 1);
            double sx = 0, sy = 0;
            for (std::size_t k = i; k <= best_j; ++k) {
                sx += samples[k].x;
                sy += samples[k].y;
            }
            f.centroid_x = sx / f.sample_count;
            f.centroid_y = sy / f.sample_count;
            out.push_back(f);
            i = best_j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

inline bool fixation_covers(const Fixation& f, double t) {
    return t >= f.start_ms && t <= f.start_ms + f.duration_ms;
}

// Per-millisecond replay of sustained attention.
inline std::optional<double> sustained_attention(const std::vector<StimulusEpisode>& episodes,
                                                 const std::vector<Fixation>& fixations) {
    if (episodes.empty()) return std::nullopt;
    std::size_t attended = 0;
    for (const auto& ep : episodes) {
        bool hit = false;
        for (double t = std::floor(ep.appear_ms); t < ep.disappear_ms && !hit; t += 1.0) {
            if (t < ep.appear_ms) continue;
            for (const auto& f : fixations) {
                if (fixation_covers(f, t) && ep.region.contains(f.centroid_x, f.centroid_y)) {
                    hit = true;
                    break;
                }
            }
        }
        if (hit) ++attended;
    }
    return static_cast<double>(attended) / static_cast<double>(episodes.size());
}

// Dumb double loop, no early exits, for the anticipation window.
inline std::optional<double> expectancy(const std::vector<StimulusEpisode>& episodes,
                                        const std::vector<GazeSample>& samples,
                                        double window_ms) {
    if (episodes.empty()) return std::nullopt;
    std::size_t anticipated = 0;
    for (const auto& ep : episodes) {
        bool hit = false;
        for (const auto& s : samples)
            if (s.valid && s.timestamp_ms >= ep.appear_ms - window_ms &&
                s.timestamp_ms < ep.appear_ms && ep.region.contains(s.x, s.y))
                hit = true;
        if (hit) ++anticipated;
    }
    return static_cast<double>(anticipated) / static_cast<double>(episodes.size());
}

// Per-millisecond replay of loss-of-focus; the sample governing an
// instant is the last one at or before it.
inline std::vector<FocusLossEpisode> loss_of_focus(const SessionLog& session,
                                                   const AoiConfig& aois,
                                                   const std::vector<StimulusEpisode>& episodes,
                                                   double gap_threshold_ms) {
    std::vector<FocusLossEpisode> out;
    const auto& samples = session.samples;
    if (samples.empty()) return out;
    std::size_t gov_ptr = 0;
    auto qualifying_at = [&](double t) {
        while (gov_ptr + 1 < samples.size() && samples[gov_ptr + 1].timestamp_ms <= t)
            ++gov_ptr;
        if (samples[gov_ptr].timestamp_ms > t) return false;
        const GazeSample& s = samples[gov_ptr];
        bool disengaged = !s.valid || s.off_screen;
        if (!disengaged) {
            bool in_any = false;
            for (const auto& a : aois.aois)
                if (a.contains(s.x, s.y)) in_any = true;
            disengaged = !in_any;
        }
        if (!disengaged) return false;
        for (const auto& ep : episodes)
            if (ep.visible_at(s.timestamp_ms)) return true;
        return false;
    };

    double begin = samples.front().timestamp_ms;
    double end = samples.back().timestamp_ms;
    std::optional<double> run_start;
    for (double t = begin; t <= end; t += 1.0) {
        bool q = t < end && qualifying_at(t);
        if (q && !run_start) run_start = t;
        if (!q && run_start) {
            double duration = t - *run_start;
            if (duration >= gap_threshold_ms) out.push_back({*run_start, duration});
            run_start.reset();
        }
    }
    return out;
}

// Per-millisecond replay of inhibitory control.
inline std::optional<double> inhibitory_control(const std::vector<StimulusEpisode>& episodes,
                                                const std::vector<Fixation>& fixations,
                                                double response_window_ms) {
    std::size_t distractors = 0, looked = 0;
    for (const auto& ep : episodes) {
        if (ep.role != StimulusRole::Distractor) continue;
        ++distractors;
        bool hit = false;
        for (double t = ep.appear_ms; t <= ep.appear_ms + response_window_ms && !hit;
             t += 1.0)
            for (const auto& f : fixations)
                if (fixation_covers(f, t) && ep.region.contains(f.centroid_x, f.centroid_y)) {
                    hit = true;
                    break;
                }
        if (hit) ++looked;
    }
    if (distractors == 0) return std::nullopt;
    return 1.0 - static_cast<double>(looked) / static_cast<double>(distractors);
}

// Comparison-sort oracle for cluster ranking.
inline std::vector<int> rank_by_count(const std::vector<std::size_t>& counts) {
    std::vector<int> order(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) order[i] = static_cast<int>(i);
    // selection sort, descending count, ascending index on ties
    for (std::size_t a = 0; a < order.size(); ++a) {
        std::size_t best = a;
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            if (counts[order[b]] > counts[order[best]] ||
                (counts[order[b]] == counts[order[best]] && order[b] < order[best]))
                best = b;
        }
        std::swap(order[a], order[best]);
    }
    return order;
}

}  // namespace gazekit::oracle
