#include "gazekit/gaze_core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace gazekit {

namespace {

int role_priority(AoiRole r) {
    switch (r) {
        case AoiRole::Target: return 0;
        case AoiRole::Distractor: return 1;
        case AoiRole::Neutral: return 2;
    }
    return 3;
}

std::string fold(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '-' || c == '_') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

// Normalized view of a gaze message: quadrant token, in/not-in flag,
// folded stimulus name. Accepts the spacing and "AoI" variants that
// occur in real logs ("Q4-In AoI - No Stimuli", "Q4-AoI-No Stimuli").
struct NormalizedMessage {
    std::string quadrant;  // "q1".."q4" or empty
    bool in_aoi = false;
    std::string name;  // folded, "nostimuli" for the no-stimulus case
    bool parsed = false;
};

NormalizedMessage normalize_message(const std::string& message) {
    NormalizedMessage n;
    auto dash = message.find('-');
    if (dash == std::string::npos) return n;
    n.quadrant = fold(message.substr(0, dash));
    std::string rest = fold(message.substr(dash + 1));
    if (rest.rfind("notinaoi", 0) == 0) {
        n.in_aoi = false;
        n.name = rest.substr(8);
    } else if (rest.rfind("inaoi", 0) == 0) {
        n.in_aoi = true;
        n.name = rest.substr(5);
    } else if (rest.rfind("aoi", 0) == 0) {
        n.in_aoi = true;
        n.name = rest.substr(3);
    } else {
        return n;
    }
    n.parsed = n.quadrant.size() == 2 && n.quadrant[0] == 'q';
    return n;
}

}  // namespace

Quadrant quadrant_of(double x, double y, double screen_w, double screen_h,
                     const QuadrantMap& map) {
    if (x < 0 || x > screen_w || y < 0 || y > screen_h)
        throw OutOfBounds("gaze point outside screen; clamp before labeling");
    // Midline points go to the right/bottom cell.
    bool right = x >= screen_w / 2.0;
    bool bottom = y >= screen_h / 2.0;
    return map.cells[(bottom ? 2 : 0) + (right ? 1 : 0)];
}

std::vector<std::string> aoi_hits(double x, double y, const AoiConfig& aois) {
    std::vector<std::string> hits;
    for (const auto& aoi : aois.aois)
        if (aoi.contains(x, y)) hits.push_back(aoi.aoi_id);
    return hits;
}

std::vector<SampleLabel> label_samples(const SessionLog& session, const AoiConfig& aois,
                                       const QuadrantMap& map) {
    std::vector<SampleLabel> labels;
    labels.reserve(session.samples.size());

    // Sweep the event list alongside the samples to know which stimuli
    // are visible at each timestamp. Appear <= t < Disappear counts as
    // visible; the most recently appeared stimulus names the message.
    std::size_t ev = 0;
    std::vector<std::string> visible;  // in appearance order

    for (const auto& sample : session.samples) {
        while (ev < session.events.size() &&
               session.events[ev].timestamp_ms <= sample.timestamp_ms) {
            const StimulusEvent& e = session.events[ev++];
            if (e.kind == EventKind::Appear) {
                visible.push_back(e.object_id);
            } else {
                auto it = std::find(visible.begin(), visible.end(), e.object_id);
                if (it != visible.end()) visible.erase(it);
            }
        }

        SampleLabel label;
        if (!sample.valid) {
            labels.push_back(std::move(label));
            continue;
        }
        label.valid = true;
        label.quadrant = quadrant_of(sample.x, sample.y, session.screen_width,
                                     session.screen_height, map);
        label.aoi_hits = aoi_hits(sample.x, sample.y, aois);

        int best = 4;
        for (const auto& id : label.aoi_hits) {
            const AoiDefinition* aoi = aois.find(id);
            int p = aoi ? role_priority(aoi->role) : 3;
            if (p < best) {
                best = p;
                label.primary_aoi = id;
            }
        }

        std::string stimulus = visible.empty() ? "No Stimuli" : visible.back();
        label.message = std::string(to_string(label.quadrant)) +
                        (label.aoi_hits.empty() ? "-Not in AoI-" : "-In AoI-") + stimulus;
        labels.push_back(std::move(label));
    }
    return labels;
}

ConsistencyReport check_consistency(const SessionLog& session,
                                    const std::vector<SampleLabel>& labels) {
    ConsistencyReport report;
    if (session.source_messages.empty()) return report;
    for (std::size_t i = 0; i < labels.size() && i < session.source_messages.size(); ++i) {
        if (!labels[i].valid || session.source_messages[i].empty()) continue;
        NormalizedMessage src = normalize_message(session.source_messages[i]);
        if (!src.parsed) continue;
        NormalizedMessage ours = normalize_message(labels[i].message);
        ++report.compared;
        bool q_ok = src.quadrant == ours.quadrant;
        bool flag_ok = src.in_aoi == ours.in_aoi;
        if (q_ok) ++report.quadrant_agree;
        if (flag_ok) ++report.aoi_flag_agree;
        if (q_ok && flag_ok && src.name == ours.name) ++report.full_agree;
        if (!q_ok || !flag_ok)
            report.diffs.push_back({i, session.source_messages[i], labels[i].message});
    }
    return report;
}

std::vector<Fixation> detect_fixations(const std::vector<GazeSample>& samples,
                                       double dispersion_threshold_px,
                                       double min_duration_ms) {
    std::vector<Fixation> fixations;
    std::size_t n = samples.size();
    std::size_t run_start = 0;

    auto process_run = [&](std::size_t begin, std::size_t end) {
        // [begin, end) of consecutive valid samples
        std::size_t i = begin;
        while (i < end) {
            // Grow the window while the bounding box stays within the
            // threshold on both axes; dispersion is monotone in j.
            double min_x = samples[i].x, max_x = samples[i].x;
            double min_y = samples[i].y, max_y = samples[i].y;
            std::size_t j = i;
            while (j + 1 < end) {
                double nx_min = std::min(min_x, samples[j + 1].x);
                double nx_max = std::max(max_x, samples[j + 1].x);
                double ny_min = std::min(min_y, samples[j + 1].y);
                double ny_max = std::max(max_y, samples[j + 1].y);
                if (nx_max - nx_min > dispersion_threshold_px ||
                    ny_max - ny_min > dispersion_threshold_px)
                    break;
                min_x = nx_min;
                max_x = nx_max;
                min_y = ny_min;
                max_y = ny_max;
                ++j;
            }
            double span = samples[j].timestamp_ms - samples[i].timestamp_ms;
            if (span >= min_duration_ms) {
                Fixation f;
                f.start_ms = samples[i].timestamp_ms;
                f.duration_ms = span;
                f.sample_count = static_cast<int>(j - i + 1);
                double sx = 0, sy = 0;
                for (std::size_t k = i; k <= j; ++k) {
                    sx += samples[k].x;
                    sy += samples[k].y;
                }
                f.centroid_x = sx / f.sample_count;
                f.centroid_y = sy / f.sample_count;
                fixations.push_back(f);
                i = j + 1;
            } else {
                ++i;
            }
        }
    };

    for (std::size_t i = 0; i <= n; ++i) {
        if (i == n || !samples[i].valid) {
            if (i > run_start) process_run(run_start, i);
            run_start = i + 1;
        }
    }
    return fixations;
}

std::string export_labels_csv(const SessionLog& session, const std::vector<SampleLabel>& labels) {
    std::ostringstream out;
    out.precision(15);
    out << "timestamp_ms,x,y,quadrant,aoi_ids,message\n";
    for (std::size_t i = 0; i < session.samples.size(); ++i) {
        const GazeSample& s = session.samples[i];
        const SampleLabel& l = labels[i];
        out << s.timestamp_ms << ",";
        if (s.valid)
            out << s.x << "," << s.y << "," << to_string(l.quadrant) << ",";
        else
            out << ",,,";
        for (std::size_t k = 0; k < l.aoi_hits.size(); ++k)
            out << (k ? ";" : "") << l.aoi_hits[k];
        out << "," << l.message << "\n";
    }
    return out.str();
}

}  // namespace gazekit
