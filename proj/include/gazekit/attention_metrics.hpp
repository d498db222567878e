/**
 * attention_metrics.hpp — The per-session metric suite: dwell analysis,
 * sustained attention, stimuli expectancy, loss of focus and inhibitory
 * control.
 *
 * All metrics work over stimulus episodes: an Appear event paired with
 * its Disappear and resolved to a screen region (the configured AoI
 * containing the object position, or a default square centered on it).
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gazekit/gaze_core.hpp"
#include "gazekit/types.hpp"

namespace gazekit {

struct MetricConfig {
    double expectancy_window_ms = 500.0;
    double focus_loss_threshold_ms = 2000.0;
    double inhibition_window_ms = 1000.0;
    // Side of the fallback square region for stimuli outside every
    // configured AoI.
    double stimulus_box_px = 160.0;
};

/// One stimulus visibility window with its resolved screen region.
struct StimulusEpisode {
    std::string object_id;
    double appear_ms = 0.0;
    double disappear_ms = 0.0;
    StimulusRole role = StimulusRole::Target;
    AoiDefinition region;  // aoi_id empty when the fallback box is used

    bool visible_at(double t) const { return t >= appear_ms && t < disappear_ms; }
};

/// Pair Appears with their Disappears (or session end) and resolve each
/// to a region. Also derives the event role: a stimulus inside a
/// Distractor AoI is a distractor, anything else a target.
std::vector<StimulusEpisode> build_episodes(const std::vector<StimulusEvent>& events,
                                            const AoiConfig& aois, double session_end_ms,
                                            const MetricConfig& config = {});

struct DwellReport {
    std::map<std::string, double> aoi_dwell_ms;  // exclusive: primary AoI per interval
    std::map<std::string, double> quadrant_dwell_ms;
    double non_aoi_dwell_ms = 0.0;
    double invalid_ms = 0.0;
    double total_ms = 0.0;
    double left_fraction = 0.0;
    double right_fraction = 0.0;
    bool left_dominant = false;
};

/// Inter-sample time attributed to the earlier sample; the last sample
/// gets the median inter-sample duration. Conservation: per-AoI +
/// non-AoI + invalid = total.
DwellReport dwell_analysis(const SessionLog& session, const std::vector<SampleLabel>& labels);

struct AttentionEpisode {
    std::size_t episode_index = 0;
    std::string object_id;
    double appear_ms = 0.0;
    std::optional<double> time_to_first_fixation_ms;
    double dwell_on_target_ms = 0.0;
    bool attended = false;
};

struct SustainedAttentionResult {
    std::optional<double> score;  // absent when no appearance events
    std::vector<AttentionEpisode> episodes;
};

/// attended = true iff any fixation overlaps the stimulus region in
/// time and space during its visibility window.
SustainedAttentionResult sustained_attention(const std::vector<StimulusEpisode>& episodes,
                                             const std::vector<Fixation>& fixations);

/// An event is anticipated when a valid gaze sample falls inside its
/// region within [appear - window, appear).
std::optional<double> stimuli_expectancy(const std::vector<StimulusEpisode>& episodes,
                                         const std::vector<GazeSample>& samples,
                                         double window_ms = 500.0);

struct FocusLossEpisode {
    double start_ms = 0.0;
    double duration_ms = 0.0;
};

/// Maximal intervals where gaze is invalid, off-screen or outside every
/// AoI while at least one stimulus is visible, lasting at least the
/// threshold.
std::vector<FocusLossEpisode> loss_of_focus(const SessionLog& session,
                                            const std::vector<SampleLabel>& labels,
                                            const std::vector<StimulusEpisode>& episodes,
                                            double gap_threshold_ms = 2000.0);

/// Fraction of distractor appearances the child did NOT fixate within
/// the response window; absent when there are no distractor events.
std::optional<double> inhibitory_control(const std::vector<StimulusEpisode>& episodes,
                                         const std::vector<Fixation>& fixations,
                                         double response_window_ms = 1000.0);

struct MetricSuite {
    std::optional<double> sustained_attention_score;
    std::optional<double> expectancy_rate;
    std::vector<FocusLossEpisode> focus_loss_episodes;
    std::optional<double> inhibitory_control_score;
    std::vector<AttentionEpisode> attention_episodes;
    DwellReport dwell;
};

MetricSuite compute_metrics(const SessionLog& session, const std::vector<SampleLabel>& labels,
                            const std::vector<Fixation>& fixations,
                            const std::vector<StimulusEpisode>& episodes,
                            const MetricConfig& config = {});

/// Versioned operationalization tag carried in every report so the
/// metric definitions can be audited.
inline constexpr const char* kMetricEngineVersion = "engine-definition-v1";

std::string export_metrics_json(const MetricSuite& metrics);
std::string export_metrics_csv(const MetricSuite& metrics);

}  // namespace gazekit
