#include "gazekit/attention_metrics.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

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

double overlap(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

std::vector<StimulusEpisode> build_episodes(const std::vector<StimulusEvent>& events,
                                            const AoiConfig& aois, double session_end_ms,
                                            const MetricConfig& config) {
    std::vector<StimulusEpisode> episodes;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].kind != EventKind::Appear) continue;
        StimulusEpisode ep;
        ep.object_id = events[i].object_id;
        ep.appear_ms = events[i].timestamp_ms;
        ep.disappear_ms = session_end_ms;
        for (std::size_t j = i + 1; j < events.size(); ++j) {
            if (events[j].object_id == events[i].object_id &&
                events[j].kind == EventKind::Disappear) {
                ep.disappear_ms = events[j].timestamp_ms;
                break;
            }
        }
        ep.disappear_ms = std::max(ep.disappear_ms, ep.appear_ms);

        const AoiDefinition* best = nullptr;
        for (const auto& aoi : aois.aois) {
            if (!aoi.contains(events[i].obj_x, events[i].obj_y)) continue;
            if (!best || role_priority(aoi.role) < role_priority(best->role)) best = &aoi;
        }
        if (best) {
            ep.region = *best;
        } else {
            ep.region.aoi_id.clear();
            ep.region.x = events[i].obj_x - config.stimulus_box_px / 2.0;
            ep.region.y = events[i].obj_y - config.stimulus_box_px / 2.0;
            ep.region.width = config.stimulus_box_px;
            ep.region.height = config.stimulus_box_px;
            ep.region.role = AoiRole::Target;
        }
        ep.role = ep.region.role == AoiRole::Distractor ? StimulusRole::Distractor
                                                        : StimulusRole::Target;
        episodes.push_back(std::move(ep));
    }
    return episodes;
}

DwellReport dwell_analysis(const SessionLog& session, const std::vector<SampleLabel>& labels) {
    DwellReport report;
    const auto& samples = session.samples;
    if (samples.empty()) return report;

    std::vector<double> intervals;
    intervals.reserve(samples.size());
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        intervals.push_back(samples[i + 1].timestamp_ms - samples[i].timestamp_ms);
    double last = 0.0;
    if (!intervals.empty()) {
        auto sorted = intervals;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        last = sorted[sorted.size() / 2];
    }
    intervals.push_back(last);

    double left = 0.0, right = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double dt = intervals[i];
        report.total_ms += dt;
        if (!samples[i].valid) {
            report.invalid_ms += dt;
            continue;
        }
        const SampleLabel& l = labels[i];
        report.quadrant_dwell_ms[to_string(l.quadrant)] += dt;
        if (l.primary_aoi.empty())
            report.non_aoi_dwell_ms += dt;
        else
            report.aoi_dwell_ms[l.primary_aoi] += dt;
        if (samples[i].x < session.screen_width / 2.0)
            left += dt;
        else
            right += dt;
    }
    if (report.total_ms > 0) {
        report.left_fraction = left / report.total_ms;
        report.right_fraction = right / report.total_ms;
    }
    report.left_dominant = left > right;
    return report;
}

SustainedAttentionResult sustained_attention(const std::vector<StimulusEpisode>& episodes,
                                             const std::vector<Fixation>& fixations) {
    SustainedAttentionResult result;
    std::size_t attended = 0;
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        const StimulusEpisode& ep = episodes[i];
        AttentionEpisode att;
        att.episode_index = i;
        att.object_id = ep.object_id;
        att.appear_ms = ep.appear_ms;
        for (const auto& f : fixations) {
            if (!ep.region.contains(f.centroid_x, f.centroid_y)) continue;
            double ov = overlap(f.start_ms, f.end_ms(), ep.appear_ms, ep.disappear_ms);
            if (ov <= 0.0) continue;
            att.dwell_on_target_ms += ov;
            double first = std::max(f.start_ms, ep.appear_ms) - ep.appear_ms;
            if (!att.time_to_first_fixation_ms || first < *att.time_to_first_fixation_ms)
                att.time_to_first_fixation_ms = first;
        }
        att.attended = att.time_to_first_fixation_ms.has_value();
        if (att.attended) ++attended;
        result.episodes.push_back(std::move(att));
    }
    if (!episodes.empty())
        result.score = static_cast<double>(attended) / static_cast<double>(episodes.size());
    return result;
}

std::optional<double> stimuli_expectancy(const std::vector<StimulusEpisode>& episodes,
                                         const std::vector<GazeSample>& samples,
                                         double window_ms) {
    if (episodes.empty()) return std::nullopt;
    std::size_t anticipated = 0;
    for (const auto& ep : episodes) {
        double w0 = ep.appear_ms - window_ms;
        bool hit = false;
        for (const auto& s : samples) {
            if (!s.valid) continue;
            if (s.timestamp_ms < w0) continue;
            if (s.timestamp_ms >= ep.appear_ms) break;
            if (ep.region.contains(s.x, s.y)) {
                hit = true;
                break;
            }
        }
        if (hit) ++anticipated;
    }
    return static_cast<double>(anticipated) / static_cast<double>(episodes.size());
}

std::vector<FocusLossEpisode> loss_of_focus(const SessionLog& session,
                                            const std::vector<SampleLabel>& labels,
                                            const std::vector<StimulusEpisode>& episodes,
                                            double gap_threshold_ms) {
    std::vector<FocusLossEpisode> out;
    const auto& samples = session.samples;
    auto stimulus_visible = [&](double t) {
        for (const auto& ep : episodes)
            if (ep.visible_at(t)) return true;
        return false;
    };

    std::optional<double> run_start;
    for (std::size_t i = 0; i <= samples.size(); ++i) {
        bool qualifying = false;
        if (i < samples.size()) {
            const GazeSample& s = samples[i];
            bool disengaged = !s.valid || s.off_screen || labels[i].aoi_hits.empty();
            qualifying = disengaged && stimulus_visible(s.timestamp_ms);
        }
        if (qualifying) {
            if (!run_start) run_start = samples[i].timestamp_ms;
        } else if (run_start) {
            double end = i < samples.size() ? samples[i].timestamp_ms
                                            : samples.back().timestamp_ms;
            double duration = end - *run_start;
            if (duration >= gap_threshold_ms) out.push_back({*run_start, duration});
            run_start.reset();
        }
    }
    return out;
}

std::optional<double> inhibitory_control(const std::vector<StimulusEpisode>& episodes,
                                         const std::vector<Fixation>& fixations,
                                         double response_window_ms) {
    std::size_t distractors = 0, looked = 0;
    for (const auto& ep : episodes) {
        if (ep.role != StimulusRole::Distractor) continue;
        ++distractors;
        for (const auto& f : fixations) {
            if (!ep.region.contains(f.centroid_x, f.centroid_y)) continue;
            if (overlap(f.start_ms, f.end_ms(), ep.appear_ms,
                        ep.appear_ms + response_window_ms) > 0.0) {
                ++looked;
                break;
            }
        }
    }
    if (distractors == 0) return std::nullopt;
    return 1.0 - static_cast<double>(looked) / static_cast<double>(distractors);
}

MetricSuite compute_metrics(const SessionLog& session, const std::vector<SampleLabel>& labels,
                            const std::vector<Fixation>& fixations,
                            const std::vector<StimulusEpisode>& episodes,
                            const MetricConfig& config) {
    MetricSuite suite;
    suite.dwell = dwell_analysis(session, labels);
    auto sustained = sustained_attention(episodes, fixations);
    suite.sustained_attention_score = sustained.score;
    suite.attention_episodes = std::move(sustained.episodes);
    suite.expectancy_rate = stimuli_expectancy(episodes, session.samples,
                                               config.expectancy_window_ms);
    suite.focus_loss_episodes = loss_of_focus(session, labels, episodes,
                                              config.focus_loss_threshold_ms);
    suite.inhibitory_control_score = inhibitory_control(episodes, fixations,
                                                        config.inhibition_window_ms);
    return suite;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

}  // namespace

std::string export_metrics_json(const MetricSuite& metrics) {
    nlohmann::json doc;
    doc["engine"] = kMetricEngineVersion;
    doc["sustained_attention_score"] = optional_json(metrics.sustained_attention_score);
    doc["expectancy_rate"] = optional_json(metrics.expectancy_rate);
    doc["inhibitory_control_score"] = optional_json(metrics.inhibitory_control_score);
    auto losses = nlohmann::json::array();
    for (const auto& e : metrics.focus_loss_episodes)
        losses.push_back({{"start_ms", e.start_ms}, {"duration_ms", e.duration_ms}});
    doc["focus_loss_episodes"] = losses;
    auto eps = nlohmann::json::array();
    for (const auto& e : metrics.attention_episodes) {
        nlohmann::json ep = {{"object_id", e.object_id},
                             {"appear_ms", e.appear_ms},
                             {"attended", e.attended},
                             {"dwell_on_target_ms", e.dwell_on_target_ms}};
        ep["time_to_first_fixation_ms"] = optional_json(e.time_to_first_fixation_ms);
        eps.push_back(ep);
    }
    doc["attention_episodes"] = eps;
    nlohmann::json dwell;
    dwell["total_ms"] = metrics.dwell.total_ms;
    dwell["invalid_ms"] = metrics.dwell.invalid_ms;
    dwell["non_aoi_dwell_ms"] = metrics.dwell.non_aoi_dwell_ms;
    dwell["aoi_dwell_ms"] = metrics.dwell.aoi_dwell_ms;
    dwell["quadrant_dwell_ms"] = metrics.dwell.quadrant_dwell_ms;
    dwell["left_fraction"] = metrics.dwell.left_fraction;
    dwell["right_fraction"] = metrics.dwell.right_fraction;
    dwell["left_dominant"] = metrics.dwell.left_dominant;
    doc["dwell"] = dwell;
    return doc.dump(2);
}

std::string export_metrics_csv(const MetricSuite& metrics) {
    std::ostringstream out;
    out.precision(15);
    out << "metric,value\n";
    auto put = [&](const char* name, const std::optional<double>& v) {
        out << name << ",";
        if (v) out << *v;
        out << "\n";
    };
    put("sustained_attention_score", metrics.sustained_attention_score);
    put("expectancy_rate", metrics.expectancy_rate);
    put("inhibitory_control_score", metrics.inhibitory_control_score);
    out << "focus_loss_count," << metrics.focus_loss_episodes.size() << "\n";
    out << "left_fraction," << metrics.dwell.left_fraction << "\n";
    out << "right_fraction," << metrics.dwell.right_fraction << "\n";
    out << "total_ms," << metrics.dwell.total_ms << "\n";
    return out.str();
}

}  // namespace gazekit
