/**
 * adaptation_engine.hpp — Game-adaptation signals from windowed
 * attention metrics.
 *
 * The streaming evaluator is a sequential consumer of time-ordered
 * items (stimulus contact records and windowed attention scores);
 * replay_batch feeds the same items from a full session and must
 * produce element-for-element identical signals.
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gazekit/attention_metrics.hpp"
#include "gazekit/insight_engine.hpp"

namespace gazekit {

struct PolicyConfig {
    double window_ms = 10000.0;
    double step_ms = 2000.0;
    double highlight_delay_ms = 1500.0;
    double low_attention_threshold = 0.3;
    int low_consecutive_windows = 2;
    double high_attention_threshold = 0.85;
    int high_consecutive_windows = 3;
    // Minimum spacing between difficulty changes.
    double difficulty_refractory_ms = 30000.0;
    std::string policy_version = "policy-v1";
};

enum class SignalKind { HighlightStimulus, DifficultyUp, DifficultyDown };

const char* to_string(SignalKind k);

struct AdaptationSignal {
    double timestamp_ms = 0.0;
    SignalKind kind = SignalKind::HighlightStimulus;
    std::string target_aoi;  // set for HighlightStimulus
    std::vector<Evidence> reason;

    bool operator==(const AdaptationSignal&) const = default;
};

/// One stimulus visibility window with the time of first fixation
/// contact, if any.
struct StimulusContact {
    std::string object_id;
    std::string aoi_id;  // falls back to object_id when no configured AoI
    double appear_ms = 0.0;
    double disappear_ms = 0.0;
    std::optional<double> first_contact_ms;  // absolute
};

struct MetricWindow {
    double end_ms = 0.0;
    std::optional<double> score;  // absent when no events fell in the window
};

/// Sequential policy evaluator. Items must be pushed in time order
/// (contact keyed by appear time, window by end time).
class StreamingEvaluator {
public:
    explicit StreamingEvaluator(PolicyConfig policy = {});

    void on_stimulus(const StimulusContact& contact);
    void on_window(const MetricWindow& window);

    const std::vector<AdaptationSignal>& signals() const { return signals_; }

private:
    void emit_difficulty(SignalKind kind, const MetricWindow& window, int run);

    PolicyConfig policy_;
    std::vector<AdaptationSignal> signals_;
    int low_run_ = 0;
    int high_run_ = 0;
    std::optional<double> last_difficulty_ms_;
};

/// Windowed sustained-attention scores for a session; windows span
/// `window_ms` and advance by `step_ms` from the session start.
std::vector<MetricWindow> windowed_attention(const std::vector<StimulusEpisode>& episodes,
                                             const std::vector<AttentionEpisode>& attention,
                                             double session_start_ms, double session_end_ms,
                                             const PolicyConfig& policy);

/// Offline what-would-have-fired analysis: builds the item stream from
/// the full session and runs it through a StreamingEvaluator.
std::vector<AdaptationSignal> replay_batch(const std::vector<StimulusEpisode>& episodes,
                                           const std::vector<AttentionEpisode>& attention,
                                           double session_start_ms, double session_end_ms,
                                           const PolicyConfig& policy = {});

PolicyConfig parse_policy(std::istream& in);
std::string serialize_policy(const PolicyConfig& policy);

/// Line-delimited JSON, one signal per line.
std::string export_signals_ldjson(const std::vector<AdaptationSignal>& signals);

}  // namespace gazekit
