/**
 * insight_engine.hpp — Declarative rules that turn the metric suite
 * into teacher-facing insights, each carrying machine-checkable
 * evidence.
 */

#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gazekit/attention_metrics.hpp"

namespace gazekit {

struct UnknownMetricInRule : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Severity { Info, Notice, Concern };
enum class Comparator { Lt, Le, Gt, Ge };

const char* to_string(Severity s);
const char* to_string(Comparator c);
bool compare(Comparator c, double value, double threshold);

struct InsightRule {
    std::string code;      // e.g. SIDE_PREFERENCE_LEFT
    std::string metric;    // name in the metric registry
    Comparator comparator = Comparator::Ge;
    double threshold = 0.0;
    Severity severity = Severity::Notice;
    // May reference {value} and {threshold}.
    std::string narrative_template;
};

struct RuleConfig {
    std::vector<InsightRule> rules;
    std::string rule_version = "rules-v1";
};

struct Evidence {
    std::string metric_name;
    double value = 0.0;
    Comparator comparator = Comparator::Ge;
    double threshold = 0.0;

    bool operator==(const Evidence&) const = default;
};

struct Insight {
    std::string code;
    Severity severity = Severity::Notice;
    std::string narrative;
    std::vector<Evidence> evidence;
    std::string rule_version;
};

/// Flat name -> value view of a metric suite; absent metrics (e.g. no
/// distractor events) are simply missing.
std::vector<std::pair<std::string, double>> metric_registry(const MetricSuite& metrics);

/// Ships the five default codes: LIMITED_VISUAL_EXPLORATION,
/// SIDE_PREFERENCE_LEFT/RIGHT, POSITIVE_SUSTAINED_ATTENTION,
/// FREQUENT_FOCUS_LOSS, LOW_INHIBITORY_CONTROL.
RuleConfig default_rules();

RuleConfig parse_rules(std::istream& in);
std::string serialize_rules(const RuleConfig& rules);

/// Each rule fires at most once; a rule naming a metric outside the
/// registry schema throws UnknownMetricInRule; a rule whose metric is
/// absent for this session is skipped.
std::vector<Insight> derive_insights(const MetricSuite& metrics, const RuleConfig& rules);

struct ReportMeta {
    std::string participant_pseudonym;
    std::string session_name;
    std::string config_hash;
};

struct Report {
    std::string markdown;
    std::string json;
};

/// Byte-identical across repeated runs for identical inputs.
Report render_report(const std::vector<Insight>& insights, const MetricSuite& metrics,
                     const ReportMeta& meta);

}  // namespace gazekit
