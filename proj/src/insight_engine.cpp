#include "gazekit/insight_engine.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "json.hpp"

namespace gazekit {

const char* to_string(Severity s) {
    switch (s) {
        case Severity::Info: return "info";
        case Severity::Notice: return "notice";
        case Severity::Concern: return "concern";
    }
    return "?";
}

const char* to_string(Comparator c) {
    switch (c) {
        case Comparator::Lt: return "<";
        case Comparator::Le: return "<=";
        case Comparator::Gt: return ">";
        case Comparator::Ge: return ">=";
    }
    return "?";
}

bool compare(Comparator c, double value, double threshold) {
    switch (c) {
        case Comparator::Lt: return value < threshold;
        case Comparator::Le: return value <= threshold;
        case Comparator::Gt: return value > threshold;
        case Comparator::Ge: return value >= threshold;
    }
    return false;
}

namespace {

constexpr std::array<const char*, 7> kKnownMetrics = {
    "sustained_attention_score", "expectancy_rate",    "inhibitory_control_score",
    "focus_loss_count",          "left_fraction",      "right_fraction",
    "max_quadrant_fraction"};

std::optional<Severity> severity_from_string(const std::string& s) {
    if (s == "info") return Severity::Info;
    if (s == "notice") return Severity::Notice;
    if (s == "concern") return Severity::Concern;
    return std::nullopt;
}

std::optional<Comparator> comparator_from_string(const std::string& s) {
    if (s == "<") return Comparator::Lt;
    if (s == "<=") return Comparator::Le;
    if (s == ">") return Comparator::Gt;
    if (s == ">=") return Comparator::Ge;
    return std::nullopt;
}

std::string format_value(double v) {
    std::ostringstream out;
    out.precision(15);
    out << v;
    return out.str();
}

std::string substitute(std::string text, const std::string& key, const std::string& value) {
    std::string token = "{" + key + "}";
    std::size_t pos;
    while ((pos = text.find(token)) != std::string::npos) text.replace(pos, token.size(), value);
    return text;
}

}  // namespace

std::vector<std::pair<std::string, double>> metric_registry(const MetricSuite& metrics) {
    std::vector<std::pair<std::string, double>> reg;
    if (metrics.sustained_attention_score)
        reg.push_back({"sustained_attention_score", *metrics.sustained_attention_score});
    if (metrics.expectancy_rate) reg.push_back({"expectancy_rate", *metrics.expectancy_rate});
    if (metrics.inhibitory_control_score)
        reg.push_back({"inhibitory_control_score", *metrics.inhibitory_control_score});
    reg.push_back({"focus_loss_count",
                   static_cast<double>(metrics.focus_loss_episodes.size())});
    reg.push_back({"left_fraction", metrics.dwell.left_fraction});
    reg.push_back({"right_fraction", metrics.dwell.right_fraction});
    double max_q = 0.0;
    for (const auto& [q, ms] : metrics.dwell.quadrant_dwell_ms)
        if (metrics.dwell.total_ms > 0) max_q = std::max(max_q, ms / metrics.dwell.total_ms);
    reg.push_back({"max_quadrant_fraction", max_q});
    return reg;
}

RuleConfig default_rules() {
    // Narratives stay hedged ("could indicate"): these are flags for
    // teachers and psychologists, not diagnoses.
    RuleConfig config;
    config.rules = {
        {"FREQUENT_FOCUS_LOSS", "focus_loss_count", Comparator::Ge, 3, Severity::Concern,
         "Gaze left all areas of interest {value} times while stimuli were visible "
         "(threshold {threshold}), which could indicate loss of focus or motivation."},
        {"LIMITED_VISUAL_EXPLORATION", "max_quadrant_fraction", Comparator::Ge, 0.75,
         Severity::Notice,
         "A fraction of {value} of looking time stayed in a single screen quadrant "
         "(threshold {threshold}), which could indicate limited visual exploration."},
        {"LOW_INHIBITORY_CONTROL", "inhibitory_control_score", Comparator::Le, 0.4,
         Severity::Concern,
         "Only a fraction of {value} of distractors were ignored within the response "
         "window (threshold {threshold}), which could indicate low inhibitory control."},
        {"POSITIVE_SUSTAINED_ATTENTION", "sustained_attention_score", Comparator::Ge, 0.8,
         Severity::Info,
         "A fraction of {value} of appearing stimuli received fixation contact "
         "(threshold {threshold}); the child was attentive to most stimuli."},
        {"SIDE_PREFERENCE_LEFT", "left_fraction", Comparator::Ge, 0.7, Severity::Notice,
         "A fraction of {value} of looking time fell on the left screen half "
         "(threshold {threshold}), which could indicate a preference for specific "
         "stimuli or limited exploration."},
        {"SIDE_PREFERENCE_RIGHT", "right_fraction", Comparator::Ge, 0.7, Severity::Notice,
         "A fraction of {value} of looking time fell on the right screen half "
         "(threshold {threshold}), which could indicate a preference for specific "
         "stimuli or limited exploration."},
    };
    return config;
}

RuleConfig parse_rules(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in);
    RuleConfig config;
    const nlohmann::json& rules = doc.is_array() ? doc : doc.at("rules");
    if (doc.is_object()) config.rule_version = doc.value("rule_version", config.rule_version);
    for (const auto& item : rules) {
        InsightRule rule;
        rule.code = item.at("code").get<std::string>();
        rule.metric = item.at("metric").get<std::string>();
        auto cmp = comparator_from_string(item.at("comparator").get<std::string>());
        if (!cmp) throw std::runtime_error("bad comparator in rule " + rule.code);
        rule.comparator = *cmp;
        rule.threshold = item.at("threshold").get<double>();
        auto sev = severity_from_string(item.value("severity", "notice"));
        if (!sev) throw std::runtime_error("bad severity in rule " + rule.code);
        rule.severity = *sev;
        rule.narrative_template = item.value("narrative", "");
        config.rules.push_back(std::move(rule));
    }
    return config;
}

std::string serialize_rules(const RuleConfig& config) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& r : config.rules) {
        rules.push_back({{"code", r.code},
                         {"metric", r.metric},
                         {"comparator", to_string(r.comparator)},
                         {"threshold", r.threshold},
                         {"severity", to_string(r.severity)},
                         {"narrative", r.narrative_template}});
    }
    nlohmann::json doc = {{"rule_version", config.rule_version}, {"rules", rules}};
    return doc.dump(2);
}

std::vector<Insight> derive_insights(const MetricSuite& metrics, const RuleConfig& config) {
    auto registry = metric_registry(metrics);
    std::vector<Insight> insights;
    for (const auto& rule : config.rules) {
        if (std::find_if(kKnownMetrics.begin(), kKnownMetrics.end(), [&](const char* m) {
                return rule.metric == m;
            }) == kKnownMetrics.end())
            throw UnknownMetricInRule("rule " + rule.code + " references unknown metric '" +
                                      rule.metric + "'");
        auto it = std::find_if(registry.begin(), registry.end(),
                               [&](const auto& kv) { return kv.first == rule.metric; });
        if (it == registry.end()) continue;  // metric absent for this session
        double value = it->second;
        if (!compare(rule.comparator, value, rule.threshold)) continue;

        Insight insight;
        insight.code = rule.code;
        insight.severity = rule.severity;
        insight.rule_version = config.rule_version;
        insight.evidence.push_back({rule.metric, value, rule.comparator, rule.threshold});
        std::string narrative = rule.narrative_template.empty()
                                    ? rule.code + " fired: {value} vs {threshold}"
                                    : rule.narrative_template;
        narrative = substitute(narrative, "value", format_value(value));
        narrative = substitute(narrative, "threshold", format_value(rule.threshold));
        insight.narrative = std::move(narrative);
        insights.push_back(std::move(insight));
    }
    return insights;
}

Report render_report(const std::vector<Insight>& insights, const MetricSuite& metrics,
                     const ReportMeta& meta) {
    Report report;

    nlohmann::json doc;
    doc["participant_pseudonym"] = meta.participant_pseudonym;
    doc["session"] = meta.session_name;
    doc["engine"] = kMetricEngineVersion;
    doc["config_hash"] = meta.config_hash;
    doc["metrics"] = nlohmann::json::parse(export_metrics_json(metrics));
    auto arr = nlohmann::json::array();
    for (const auto& ins : insights) {
        nlohmann::json ev = nlohmann::json::array();
        for (const auto& e : ins.evidence)
            ev.push_back({{"metric_name", e.metric_name},
                          {"value", e.value},
                          {"comparator", to_string(e.comparator)},
                          {"threshold", e.threshold}});
        arr.push_back({{"code", ins.code},
                       {"severity", to_string(ins.severity)},
                       {"narrative", ins.narrative},
                       {"evidence", ev},
                       {"rule_version", ins.rule_version}});
    }
    doc["insights"] = arr;
    report.json = doc.dump(2);

    std::ostringstream md;
    md.precision(15);
    md << "# Session insight report\n\n";
    md << "- Participant (pseudonym): " << meta.participant_pseudonym << "\n";
    if (!meta.session_name.empty()) md << "- Session: " << meta.session_name << "\n";
    md << "- Engine: " << kMetricEngineVersion << "\n";
    md << "- Config hash: " << meta.config_hash << "\n\n";
    md << "## Metrics\n\n";
    md << "| metric | value |\n|---|---|\n";
    for (const auto& [name, value] : metric_registry(metrics))
        md << "| " << name << " | " << value << " |\n";
    md << "| total_ms | " << metrics.dwell.total_ms << " |\n";
    md << "\n## Insights\n\n";
    if (insights.empty()) {
        md << "No flags raised for this session.\n";
    } else {
        for (const auto& ins : insights) {
            md << "### " << ins.code << " (" << to_string(ins.severity) << ")\n\n";
            md << ins.narrative << "\n\n";
            md << "| metric | value | comparator | threshold |\n|---|---|---|---|\n";
            for (const auto& e : ins.evidence)
                md << "| " << e.metric_name << " | " << e.value << " | "
                   << to_string(e.comparator) << " | " << e.threshold << " |\n";
            md << "\nRule version: " << ins.rule_version << "\n\n";
        }
    }
    report.markdown = md.str();
    return report;
}

}  // namespace gazekit
