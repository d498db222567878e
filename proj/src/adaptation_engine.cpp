#include "gazekit/adaptation_engine.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace gazekit {

const char* to_string(SignalKind k) {
    switch (k) {
        case SignalKind::HighlightStimulus: return "HighlightStimulus";
        case SignalKind::DifficultyUp: return "DifficultyUp";
        case SignalKind::DifficultyDown: return "DifficultyDown";
    }
    return "?";
}

StreamingEvaluator::StreamingEvaluator(PolicyConfig policy) : policy_(std::move(policy)) {}

void StreamingEvaluator::on_stimulus(const StimulusContact& contact) {
    // Highlight when the stimulus stayed visible past the delay with no
    // fixation contact.
    double attended_at = contact.first_contact_ms.value_or(contact.disappear_ms);
    double unattended_ms = attended_at - contact.appear_ms;
    double visible_ms = contact.disappear_ms - contact.appear_ms;
    if (unattended_ms < policy_.highlight_delay_ms || visible_ms < policy_.highlight_delay_ms)
        return;
    AdaptationSignal signal;
    signal.kind = SignalKind::HighlightStimulus;
    signal.timestamp_ms = contact.appear_ms + policy_.highlight_delay_ms;
    signal.target_aoi = contact.aoi_id.empty() ? contact.object_id : contact.aoi_id;
    signal.reason.push_back(
        {"unattended_visible_ms", unattended_ms, Comparator::Ge, policy_.highlight_delay_ms});
    signals_.push_back(std::move(signal));
}

void StreamingEvaluator::on_window(const MetricWindow& window) {
    if (!window.score) {
        low_run_ = 0;
        high_run_ = 0;
        return;
    }
    double s = *window.score;
    if (s < policy_.low_attention_threshold) {
        ++low_run_;
        high_run_ = 0;
    } else if (s > policy_.high_attention_threshold) {
        ++high_run_;
        low_run_ = 0;
    } else {
        low_run_ = 0;
        high_run_ = 0;
    }
    if (low_run_ >= policy_.low_consecutive_windows) {
        emit_difficulty(SignalKind::DifficultyDown, window, low_run_);
        low_run_ = 0;
    } else if (high_run_ >= policy_.high_consecutive_windows) {
        emit_difficulty(SignalKind::DifficultyUp, window, high_run_);
        high_run_ = 0;
    }
}

void StreamingEvaluator::emit_difficulty(SignalKind kind, const MetricWindow& window, int run) {
    if (last_difficulty_ms_ &&
        window.end_ms - *last_difficulty_ms_ < policy_.difficulty_refractory_ms)
        return;
    AdaptationSignal signal;
    signal.kind = kind;
    signal.timestamp_ms = window.end_ms;
    bool down = kind == SignalKind::DifficultyDown;
    signal.reason.push_back({"windowed_attention_score", *window.score,
                             down ? Comparator::Lt : Comparator::Gt,
                             down ? policy_.low_attention_threshold
                                  : policy_.high_attention_threshold});
    signal.reason.push_back({"consecutive_windows", static_cast<double>(run), Comparator::Ge,
                             static_cast<double>(down ? policy_.low_consecutive_windows
                                                      : policy_.high_consecutive_windows)});
    signals_.push_back(std::move(signal));
    last_difficulty_ms_ = window.end_ms;
}

std::vector<MetricWindow> windowed_attention(const std::vector<StimulusEpisode>& episodes,
                                             const std::vector<AttentionEpisode>& attention,
                                             double session_start_ms, double session_end_ms,
                                             const PolicyConfig& policy) {
    std::vector<MetricWindow> windows;
    for (double end = session_start_ms + policy.window_ms; end <= session_end_ms;
         end += policy.step_ms) {
        MetricWindow w;
        w.end_ms = end;
        std::size_t total = 0, attended = 0;
        for (std::size_t i = 0; i < episodes.size(); ++i) {
            double t = episodes[i].appear_ms;
            if (t < end - policy.window_ms || t >= end) continue;
            ++total;
            if (i < attention.size() && attention[i].attended) ++attended;
        }
        if (total > 0) w.score = static_cast<double>(attended) / static_cast<double>(total);
        windows.push_back(w);
    }
    return windows;
}

std::vector<AdaptationSignal> replay_batch(const std::vector<StimulusEpisode>& episodes,
                                           const std::vector<AttentionEpisode>& attention,
                                           double session_start_ms, double session_end_ms,
                                           const PolicyConfig& policy) {
    struct Item {
        double key;
        int order;  // contacts before windows at equal keys
        std::size_t index;
    };
    std::vector<Item> items;

    std::vector<StimulusContact> contacts;
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        StimulusContact c;
        c.object_id = episodes[i].object_id;
        c.aoi_id = episodes[i].region.aoi_id;
        c.appear_ms = episodes[i].appear_ms;
        c.disappear_ms = episodes[i].disappear_ms;
        if (i < attention.size() && attention[i].time_to_first_fixation_ms)
            c.first_contact_ms = episodes[i].appear_ms + *attention[i].time_to_first_fixation_ms;
        items.push_back({c.appear_ms, 0, contacts.size()});
        contacts.push_back(std::move(c));
    }
    auto windows =
        windowed_attention(episodes, attention, session_start_ms, session_end_ms, policy);
    for (std::size_t i = 0; i < windows.size(); ++i)
        items.push_back({windows[i].end_ms, 1, i});

    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.key != b.key) return a.key < b.key;
        return a.order < b.order;
    });

    StreamingEvaluator evaluator(policy);
    for (const auto& item : items) {
        if (item.order == 0)
            evaluator.on_stimulus(contacts[item.index]);
        else
            evaluator.on_window(windows[item.index]);
    }
    return evaluator.signals();
}

PolicyConfig parse_policy(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in);
    PolicyConfig p;
    p.window_ms = doc.value("window_ms", p.window_ms);
    p.step_ms = doc.value("step_ms", p.step_ms);
    p.highlight_delay_ms = doc.value("highlight_delay_ms", p.highlight_delay_ms);
    p.low_attention_threshold = doc.value("low_attention_threshold", p.low_attention_threshold);
    p.low_consecutive_windows = doc.value("low_consecutive_windows", p.low_consecutive_windows);
    p.high_attention_threshold =
        doc.value("high_attention_threshold", p.high_attention_threshold);
    p.high_consecutive_windows =
        doc.value("high_consecutive_windows", p.high_consecutive_windows);
    p.difficulty_refractory_ms =
        doc.value("difficulty_refractory_ms", p.difficulty_refractory_ms);
    p.policy_version = doc.value("policy_version", p.policy_version);
    return p;
}

std::string serialize_policy(const PolicyConfig& p) {
    nlohmann::json doc = {{"window_ms", p.window_ms},
                          {"step_ms", p.step_ms},
                          {"highlight_delay_ms", p.highlight_delay_ms},
                          {"low_attention_threshold", p.low_attention_threshold},
                          {"low_consecutive_windows", p.low_consecutive_windows},
                          {"high_attention_threshold", p.high_attention_threshold},
                          {"high_consecutive_windows", p.high_consecutive_windows},
                          {"difficulty_refractory_ms", p.difficulty_refractory_ms},
                          {"policy_version", p.policy_version}};
    return doc.dump(2);
}

std::string export_signals_ldjson(const std::vector<AdaptationSignal>& signals) {
    std::ostringstream out;
    for (const auto& s : signals) {
        nlohmann::json reason = nlohmann::json::array();
        for (const auto& e : s.reason)
            reason.push_back({{"metric_name", e.metric_name},
                              {"value", e.value},
                              {"comparator", to_string(e.comparator)},
                              {"threshold", e.threshold}});
        nlohmann::json doc = {{"timestamp_ms", s.timestamp_ms},
                              {"kind", to_string(s.kind)},
                              {"reason", reason}};
        if (!s.target_aoi.empty()) doc["target_aoi"] = s.target_aoi;
        out << doc.dump() << "\n";
    }
    return out.str();
}

}  // namespace gazekit
