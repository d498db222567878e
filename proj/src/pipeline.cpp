#include "gazekit/pipeline.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "gazekit/digest.hpp"
#include "json.hpp"

namespace gazekit {

std::string config_hash(const PipelineConfig& config) {
    std::ostringstream material;
    material.precision(15);
    material << serialize_rules(config.rules) << "\n"
             << serialize_policy(config.policy) << "\n"
             << serialize_aoi_config(config.aois) << "\n"
             << config.format.delimiter << " " << config.format.screen_width << " "
             << config.format.screen_height << "\n"
             << config.metrics.expectancy_window_ms << " "
             << config.metrics.focus_loss_threshold_ms << " "
             << config.metrics.inhibition_window_ms << " " << config.metrics.stimulus_box_px
             << "\n"
             << config.cluster_k << " " << config.seed << " " << config.visibility_timeout_ms;
    for (Quadrant q : config.quadrants.cells) material << " " << to_string(q);
    return sha256_hex(material.str());
}

AnalysisResult analyze_session(std::istream& raw_log, const PipelineConfig& config,
                               const std::string& participant_pseudonym) {
    AnalysisResult result;
    ParsedSession parsed = parse_session(raw_log, config.format);
    result.session = std::move(parsed.session);
    result.ledger = parsed.ledger;
    result.session.participant_pseudonym = participant_pseudonym;

    result.session.events = derive_disappearances(result.session.events,
                                                  config.visibility_timeout_ms,
                                                  result.session.end_ms());

    result.labels = label_samples(result.session, config.aois, config.quadrants);
    result.consistency = check_consistency(result.session, result.labels);
    result.fixations = detect_fixations(result.session.samples);
    result.episodes = build_episodes(result.session.events, config.aois,
                                     result.session.end_ms(), config.metrics);

    std::size_t valid = 0;
    for (const auto& s : result.session.samples)
        if (s.valid) ++valid;
    if (config.cluster_k >= 1 && valid >= static_cast<std::size_t>(config.cluster_k)) {
        result.clusters = cluster_gaze(result.session.samples, config.cluster_k, config.seed);
        result.clustered = true;
    }

    result.metrics = compute_metrics(result.session, result.labels, result.fixations,
                                     result.episodes, config.metrics);
    result.insights = derive_insights(result.metrics, config.rules);

    ReportMeta meta;
    meta.participant_pseudonym = participant_pseudonym;
    meta.session_name = config.session_name;
    meta.config_hash = config_hash(config);
    result.report = render_report(result.insights, result.metrics, meta);

    result.signals = replay_batch(result.episodes, result.metrics.attention_episodes,
                                  result.session.start_ms(), result.session.end_ms(),
                                  config.policy);
    return result;
}

namespace {

std::string fixation_csv(const std::vector<Fixation>& fixations) {
    std::ostringstream out;
    out.precision(15);
    out << "start_ms,duration_ms,centroid_x,centroid_y,sample_count\n";
    for (const auto& f : fixations)
        out << f.start_ms << "," << f.duration_ms << "," << f.centroid_x << ","
            << f.centroid_y << "," << f.sample_count << "\n";
    return out.str();
}

std::string aoi_overlay_json(const PipelineConfig& config, const MetricSuite& metrics) {
    nlohmann::json doc;
    doc["aois"] = nlohmann::json::parse(serialize_aoi_config(config.aois));
    doc["aoi_dwell_ms"] = metrics.dwell.aoi_dwell_ms;
    doc["non_aoi_dwell_ms"] = metrics.dwell.non_aoi_dwell_ms;
    return doc.dump(2);
}

}  // namespace

std::string write_artifacts(const AnalysisResult& result, const PipelineConfig& config,
                            const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::map<std::string, std::string> artifacts;
    artifacts["labeled_samples.csv"] = export_labels_csv(result.session, result.labels);
    artifacts["fixations.csv"] = fixation_csv(result.fixations);
    if (result.clustered) {
        artifacts["clusters.csv"] =
            export_cluster_csv(result.session.samples, result.clusters);
        artifacts["clusters.json"] = export_cluster_json(result.clusters);
    }
    artifacts["metrics.json"] = export_metrics_json(result.metrics);
    artifacts["metrics.csv"] = export_metrics_csv(result.metrics);
    artifacts["report.json"] = result.report.json;
    artifacts["report.md"] = result.report.markdown;
    artifacts["adaptation_signals.ldjson"] = export_signals_ldjson(result.signals);
    artifacts["aoi_overlay.json"] = aoi_overlay_json(config, result.metrics);

    nlohmann::json manifest;
    manifest["config_hash"] = config_hash(config);
    manifest["participant_pseudonym"] = result.session.participant_pseudonym;
    nlohmann::json files;
    for (const auto& [name, content] : artifacts) {
        std::ofstream out(out_dir / name, std::ios::binary);
        out << content;
        files[name] = sha256_hex(content);
    }
    manifest["files"] = files;
    std::string manifest_text = manifest.dump(2) + "\n";
    std::ofstream(out_dir / "manifest.json", std::ios::binary) << manifest_text;
    return manifest_text;
}

}  // namespace gazekit
