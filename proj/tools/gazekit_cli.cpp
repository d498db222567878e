// gazekit — eye-tracking session analytics for serious-game logs.
//
// Subcommands:
//   validate   parse a session and check recomputed labels against the
//              log's own Message column (exit 0 clean / 2 parse / 3 labels)
//   analyze    run the full pipeline and write an artifact directory
//   report     print the markdown report from an artifact directory
//   replay     recompute adaptation signals and print them as LDJSON

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gazekit/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gazekit;

namespace {

constexpr int kExitParseFailure = 2;
constexpr int kExitLabelDisagreement = 3;

std::ifstream open_or_die(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        std::exit(kExitParseFailure);
    }
    return in;
}

bool parse_screen(const std::string& spec, FormatOptions& format) {
    auto x = spec.find('x');
    if (x == std::string::npos) x = spec.find('X');
    if (x == std::string::npos) return false;
    try {
        format.screen_width = std::stoi(spec.substr(0, x));
        format.screen_height = std::stoi(spec.substr(x + 1));
    } catch (const std::exception&) {
        return false;
    }
    return format.screen_width > 0 && format.screen_height > 0;
}

struct CommonOpts {
    std::string aoi_path;
    std::string rules_path;
    std::string policy_path;
    std::string screen;
    std::string delimiter = ",";
    int k = 4;
    std::uint64_t seed = 0;
    double visibility_timeout_ms = 3000.0;
};

void load_config(PipelineConfig& config, const CommonOpts& opts) {
    if (!opts.screen.empty() && !parse_screen(opts.screen, config.format)) {
        std::cerr << "error: --screen expects WxH, got '" << opts.screen << "'\n";
        std::exit(kExitParseFailure);
    }
    if (!opts.delimiter.empty()) config.format.delimiter = opts.delimiter[0];
    if (!opts.aoi_path.empty()) {
        auto in = open_or_die(opts.aoi_path);
        config.aois = parse_aoi_config(in);
    }
    if (!opts.rules_path.empty()) {
        auto in = open_or_die(opts.rules_path);
        config.rules = parse_rules(in);
    }
    if (!opts.policy_path.empty()) {
        auto in = open_or_die(opts.policy_path);
        config.policy = parse_policy(in);
    }
    config.cluster_k = opts.k;
    config.seed = opts.seed;
    config.visibility_timeout_ms = opts.visibility_timeout_ms;
}

// Salt comes from the environment, never from flags or files, and is
// never echoed anywhere.
std::string resolve_pseudonym(const std::string& meta_path, const std::string& salt_env,
                              PipelineConfig& config) {
    if (meta_path.empty()) return "anonymous";
    auto in = open_or_die(meta_path);
    SessionMeta meta = parse_session_meta(in);
    config.format.screen_width = meta.screen_width;
    config.format.screen_height = meta.screen_height;
    const char* salt = std::getenv(salt_env.c_str());
    if (!salt || std::string(salt).size() < 16) {
        std::cerr << "error: pseudonymization salt env var " << salt_env
                  << " is unset or shorter than 16 bytes; refusing to run with a raw "
                     "participant identity\n";
        std::exit(kExitParseFailure);
    }
    return pseudonymize(meta.participant_id, salt);
}

int run_validate(const std::string& session_path, const CommonOpts& opts) {
    PipelineConfig config;
    load_config(config, opts);

    auto in = open_or_die(session_path);
    ParsedSession parsed;
    try {
        parsed = parse_session(in, config.format);
    } catch (const ParseError& e) {
        std::cerr << "parse failure: " << e.what() << "\n";
        return kExitParseFailure;
    }
    const ParseLedger& ledger = parsed.ledger;
    std::cout << "rows total=" << ledger.total_rows << " accepted=" << ledger.accepted_rows
              << " rejected=" << ledger.rejected_rows << " invalid=" << ledger.invalid_samples
              << " clamped=" << ledger.clamped_samples << "\n";
    if (ledger.rejected_rows > 0) return kExitParseFailure;

    SessionLog session = std::move(parsed.session);
    session.events = derive_disappearances(session.events, config.visibility_timeout_ms,
                                           session.end_ms());
    auto labels = label_samples(session, config.aois, config.quadrants);
    auto report = check_consistency(session, labels);
    if (report.compared == 0) {
        std::cout << "no Message column to validate against\n";
        return 0;
    }
    std::cout << "messages compared=" << report.compared
              << " quadrant_agree=" << report.quadrant_agree
              << " aoi_flag_agree=" << report.aoi_flag_agree
              << " full_agree=" << report.full_agree << "\n";
    if (!report.clean()) {
        for (const auto& d : report.diffs)
            std::cout << "row " << d.row << ": source '" << d.source << "' vs recomputed '"
                      << d.recomputed << "'\n";
        return kExitLabelDisagreement;
    }
    return 0;
}

int run_analyze(const std::vector<std::string>& sessions, const std::string& meta_path,
                const std::string& salt_env, const std::string& out_dir,
                const CommonOpts& opts) {
    PipelineConfig config;
    load_config(config, opts);
    std::string pseudonym = resolve_pseudonym(meta_path, salt_env, config);

    auto run_one = [&](const std::string& path, const fs::path& out) -> int {
        PipelineConfig local = config;
        local.session_name = fs::path(path).stem().string();
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot open " << path << "\n";
            return kExitParseFailure;
        }
        try {
            AnalysisResult result = analyze_session(in, local, pseudonym);
            write_artifacts(result, local, out);
        } catch (const std::exception& e) {
            std::cerr << path << ": " << e.what() << "\n";
            return kExitParseFailure;
        }
        std::cout << "wrote " << out.string() << "\n";
        return 0;
    };

    if (sessions.size() == 1) return run_one(sessions[0], out_dir);
    // One worker per session; pipelines share no mutable state.
    std::vector<std::future<int>> workers;
    for (const auto& path : sessions)
        workers.push_back(std::async(std::launch::async, run_one, path,
                                     fs::path(out_dir) / fs::path(path).stem()));
    int rc = 0;
    for (auto& w : workers) rc = std::max(rc, w.get());
    return rc;
}

int run_report(const std::string& artifact_dir) {
    fs::path md = fs::path(artifact_dir) / "report.md";
    std::ifstream in(md, std::ios::binary);
    if (!in) {
        std::cerr << "error: " << md.string() << " not found; run analyze first\n";
        return kExitParseFailure;
    }
    std::cout << in.rdbuf();
    return 0;
}

int run_replay(const std::string& session_path, const std::string& meta_path,
               const std::string& salt_env, const CommonOpts& opts) {
    PipelineConfig config;
    load_config(config, opts);
    std::string pseudonym = resolve_pseudonym(meta_path, salt_env, config);
    auto in = open_or_die(session_path);
    try {
        AnalysisResult result = analyze_session(in, config, pseudonym);
        std::cout << export_signals_ldjson(result.signals);
    } catch (const std::exception& e) {
        std::cerr << session_path << ": " << e.what() << "\n";
        return kExitParseFailure;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eye-tracking analytics for serious-game session logs"};
    app.set_config("--config");
    app.require_subcommand(1);

    CommonOpts opts;
    std::vector<std::string> sessions;
    std::string meta_path, out_dir = "out", salt_env = "GAZEKIT_SALT", artifact_dir;

    auto add_common = [&](CLI::App* cmd, bool with_aoi = true) {
        if (with_aoi) cmd->add_option("--aoi", opts.aoi_path, "AoI config JSON");
        cmd->add_option("--screen", opts.screen, "screen geometry WxH (default 1920x1080)");
        cmd->add_option("--delim", opts.delimiter, "CSV delimiter");
    };

    auto* validate = app.add_subcommand("validate", "parse + label-consistency check");
    validate->add_option("--session", sessions, "session CSV")->required();
    add_common(validate);

    auto* analyze = app.add_subcommand("analyze", "full pipeline to an artifact directory");
    analyze->add_option("--session", sessions, "session CSV (repeatable)")->required();
    analyze->add_option("--meta", meta_path, "session metadata JSON");
    analyze->add_option("--rules", opts.rules_path, "insight rules JSON");
    analyze->add_option("--policy", opts.policy_path, "adaptation policy JSON");
    analyze->add_option("--out", out_dir, "output directory");
    analyze->add_option("--k", opts.k, "cluster count");
    analyze->add_option("--seed", opts.seed, "clustering seed");
    analyze->add_option("--timeout", opts.visibility_timeout_ms,
                        "stimulus visibility timeout (ms)");
    analyze->add_option("--salt-env", salt_env, "env var holding the pseudonym salt");
    add_common(analyze);

    auto* report = app.add_subcommand("report", "print the markdown report");
    report->add_option("--in", artifact_dir, "artifact directory")->required();

    auto* replay = app.add_subcommand("replay", "print adaptation signals as LDJSON");
    replay->add_option("--session", sessions, "session CSV")->required();
    replay->add_option("--meta", meta_path, "session metadata JSON");
    replay->add_option("--policy", opts.policy_path, "adaptation policy JSON");
    replay->add_option("--salt-env", salt_env, "env var holding the pseudonym salt");
    replay->add_option("--timeout", opts.visibility_timeout_ms,
                       "stimulus visibility timeout (ms)");
    add_common(replay);

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return run_validate(sessions.front(), opts);
    if (analyze->parsed()) return run_analyze(sessions, meta_path, salt_env, out_dir, opts);
    if (report->parsed()) return run_report(artifact_dir);
    if (replay->parsed()) return run_replay(sessions.front(), meta_path, salt_env, opts);
    return 1;
}
