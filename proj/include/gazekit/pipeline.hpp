/**
 * pipeline.hpp — End-to-end session analysis: ingest, label, fixations,
 * clustering, metrics, insights, adaptation replay, artifact emission.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>

#include "gazekit/adaptation_engine.hpp"
#include "gazekit/attention_metrics.hpp"
#include "gazekit/cluster_analysis.hpp"
#include "gazekit/gaze_core.hpp"
#include "gazekit/insight_engine.hpp"
#include "gazekit/session_ingest.hpp"

namespace gazekit {

struct PipelineConfig {
    FormatOptions format;
    MetricConfig metrics;
    PolicyConfig policy;
    RuleConfig rules = default_rules();
    AoiConfig aois;
    QuadrantMap quadrants;
    int cluster_k = 4;
    std::uint64_t seed = 0;
    double visibility_timeout_ms = 3000.0;
    std::string session_name;
};

/// Hash over every knob that affects analysis output; lands in reports
/// so runs are attributable to an exact configuration.
std::string config_hash(const PipelineConfig& config);

struct AnalysisResult {
    SessionLog session;
    ParseLedger ledger;
    std::vector<SampleLabel> labels;
    ConsistencyReport consistency;
    std::vector<Fixation> fixations;
    std::vector<StimulusEpisode> episodes;
    bool clustered = false;
    ClusterModel clusters;
    MetricSuite metrics;
    std::vector<Insight> insights;
    Report report;
    std::vector<AdaptationSignal> signals;
};

/// Pure function of (stream, config, pseudonym); repeated runs produce
/// identical results.
AnalysisResult analyze_session(std::istream& raw_log, const PipelineConfig& config,
                               const std::string& participant_pseudonym);

/// Write every artifact plus a manifest of content hashes. Returns the
/// manifest JSON.
std::string write_artifacts(const AnalysisResult& result, const PipelineConfig& config,
                            const std::filesystem::path& out_dir);

}  // namespace gazekit
