/**
 * types.hpp — Core domain types shared by the whole pipeline.
 *
 * Conventions: screen coordinates in pixels, origin top-left; all
 * timestamps are epoch milliseconds stored as double (sub-ms fractions
 * preserved).
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gazekit {

/// One timestamped gaze point. Invalid samples mark tracking loss.
struct GazeSample {
    double timestamp_ms = 0.0;
    double x = 0.0;
    double y = 0.0;
    bool valid = true;
    // Raw point fell outside the screen and was clamped to the edge.
    // Kept separate from `valid`: off-screen gaze is evidence for the
    // loss-of-focus analysis, tracking loss is not.
    bool off_screen = false;
};

enum class EventKind { Appear, Disappear };

enum class StimulusRole { Target, Distractor };

/// Appearance or disappearance of a game object on screen.
struct StimulusEvent {
    double timestamp_ms = 0.0;
    EventKind kind = EventKind::Appear;
    std::string object_id;
    double obj_x = 0.0;
    double obj_y = 0.0;
    double obj_z = 0.0;  // carried from the log, unused by hit-testing
    StimulusRole role = StimulusRole::Target;
    // Disappear inserted by the visibility-timeout policy rather than
    // read from the log.
    bool synthetic = false;
};

enum class AoiRole { Target, Distractor, Neutral };

/// Analyst-defined rectangular screen region.
struct AoiDefinition {
    std::string aoi_id;
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;
    AoiRole role = AoiRole::Neutral;

    bool contains(double px, double py) const {
        return px >= x && px <= x + width && py >= y && py <= y + height;
    }
};

struct AoiConfig {
    std::vector<AoiDefinition> aois;

    const AoiDefinition* find(const std::string& id) const {
        for (const auto& a : aois)
            if (a.aoi_id == id) return &a;
        return nullptr;
    }
};

/// A fully parsed, validated session.
struct SessionLog {
    std::string participant_pseudonym;
    int screen_width = 1920;
    int screen_height = 1080;
    std::vector<GazeSample> samples;
    std::vector<StimulusEvent> events;
    // Verbatim Message column, one entry per accepted row, when the
    // input carried one (empty otherwise). Used by validation mode.
    std::vector<std::string> source_messages;

    double start_ms() const { return samples.empty() ? 0.0 : samples.front().timestamp_ms; }
    double end_ms() const { return samples.empty() ? 0.0 : samples.back().timestamp_ms; }
};

enum class Quadrant { Q1, Q2, Q3, Q4 };

const char* to_string(Quadrant q);
const char* to_string(EventKind k);
const char* to_string(StimulusRole r);
const char* to_string(AoiRole r);
std::optional<AoiRole> aoi_role_from_string(const std::string& s);

/// Dispersion-stable gaze episode.
struct Fixation {
    double start_ms = 0.0;
    double duration_ms = 0.0;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    int sample_count = 0;

    double end_ms() const { return start_ms + duration_ms; }
};

}  // namespace gazekit
