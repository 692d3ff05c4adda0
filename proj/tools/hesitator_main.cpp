// hesitator: choice-overload user simulation for recommender evaluation.
//
// Subcommands: simulate, experiment {overload,curves,ablation},
// validate-calibration, inspect. Exit codes: 0 success, 1 runtime failure,
// 2 configuration problem.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "hesitator/config.hpp"
#include "hesitator/external_client.hpp"

namespace fs = std::filesystem;
using namespace hesitator;

namespace {

struct Flags {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<int> sessions;
    std::optional<std::string> out_dir;
    std::optional<int> workers;
    std::optional<std::string> provider;
    std::optional<std::string> calibration;
    std::string curve = "assortment";
};

RunConfig resolve_config(const Flags& flags) {
    RunConfig config =
        flags.config_path.empty() ? default_run_config() : load_run_config(flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.sessions) {
        config.sessions = *flags.sessions;
        config.experiment_sessions = *flags.sessions;
    }
    if (flags.out_dir) config.out_dir = *flags.out_dir;
    if (flags.workers) config.workers = *flags.workers;
    if (flags.provider) config.provider = *flags.provider;
    if (flags.calibration) {
        config.calibration_path = *flags.calibration;
        std::ifstream cal(config.calibration_path);
        if (!cal) throw ConfigError("cannot open calibration '" + config.calibration_path + "'");
        config.calibration = CalibrationTable::load(cal);
    }
    config.validate();
    return config;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

void echo_config(const RunConfig& config, const fs::path& dir) {
    write_file(dir / "effective_config.json", config.to_json());
}

Catalog build_catalog(const RunConfig& config) {
    if (config.catalog_mode == "file") {
        std::ifstream schema_in(config.catalog_path + ".schema.json");
        if (!schema_in)
            throw ConfigError("cannot open schema '" + config.catalog_path + ".schema.json'");
        const AttributeSchema schema = load_schema(schema_in);
        std::ifstream in(config.catalog_path);
        if (!in) throw ConfigError("cannot open catalog '" + config.catalog_path + "'");
        return load_catalog(in, schema);
    }
    if (config.catalog_mode == "synthetic")
        return synthesize_catalog(split_seed(config.seed, 0xCA7), config.synthetic_items,
                                  config.synthetic_attrs, config.env.price_min,
                                  config.env.price_max);
    return make_environment_catalog(split_seed(config.seed, 0xE17), config.env);
}

ExperimentConfig experiment_config(const RunConfig& config) {
    ExperimentConfig ec;
    ec.sessions = config.experiment_sessions;
    ec.base_seed = config.seed;
    ec.workers = config.workers;
    ec.turn_limit = config.turn_limit;
    ec.env = config.env;
    ec.selection = config.selection;
    ec.hesitation = config.hesitation;
    ec.calibration = config.calibration;
    ec.mode = config.sales.mode;
    ec.relevance = config.sales.relevance;
    return ec;
}

int cmd_simulate(const Flags& flags) {
    const RunConfig config = resolve_config(flags);
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir / "transcripts");

    std::unique_ptr<ExternalTextClient> external;
    Providers providers;
    if (config.provider == "external") {
        external = std::make_unique<ExternalTextClient>(ExternalClientConfig::from_environment());
        providers.perception = external.get();
        providers.response = external.get();
    }

    const Catalog catalog = build_catalog(config);

    SessionConfig session_cfg;
    session_cfg.sales = config.sales;
    session_cfg.selection = config.selection;
    session_cfg.hesitation = config.hesitation;
    session_cfg.calibration = config.calibration;
    session_cfg.turn_limit = config.turn_limit;

    int purchases = 0;
    double turns_total = 0.0;
    for (int i = 0; i < config.sessions; ++i) {
        const uint64_t session_seed = split_seed(config.seed, static_cast<uint64_t>(i));
        ProfileConfig profile_cfg = config.profile;
        profile_cfg.seed = split_seed(session_seed, 11);
        const Profile profile = generate_profile(profile_cfg, catalog);
        const SessionResult result =
            run_session(profile.state, profile.weights, profile.constraints, catalog, session_cfg,
                        providers, split_seed(session_seed, 12));
        purchases += result.purchased ? 1 : 0;
        turns_total += result.terminal_turn;

        char name[64];
        std::snprintf(name, sizeof(name), "session_%04d.jsonl", i);
        std::ofstream ts(out_dir / "transcripts" / name, std::ios::binary);
        write_transcript(ts, result);
    }

    nlohmann::json summary{{"sessions", config.sessions},
                           {"purchases", purchases},
                           {"success_rate", static_cast<double>(purchases) / config.sessions},
                           {"mean_turns", turns_total / config.sessions},
                           {"seed", config.seed}};
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
    echo_config(config, out_dir);
    std::cout << "sessions: " << config.sessions << "  purchases: " << purchases
              << "  success_rate: " << static_cast<double>(purchases) / config.sessions
              << "  mean_turns: " << turns_total / config.sessions << "\n";
    return 0;
}

int cmd_experiment_overload(const Flags& flags) {
    RunConfig config = resolve_config(flags);
    if (!config.env_overridden) config.env = overload_environment();
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);

    const OverloadResult result =
        run_overload_experiment(config.overload_conditions, experiment_config(config));
    write_file(out_dir / "overload.csv", export_overload(result, ExportFormat::Csv));
    echo_config(config, out_dir);

    std::cout << "condition   SR\n";
    for (const auto& cr : result.conditions)
        std::cout << cr.condition.name << (cr.condition.name.size() < 7 ? "\t    " : "\t")
                  << cr.success_rate << "\n";
    std::cout << "wilcoxon Low vs Severe: p=" << result.low_vs_severe.p_two_sided << " ("
              << result.low_vs_severe.method << ")\n";
    return 0;
}

int cmd_experiment_curves(const Flags& flags) {
    RunConfig config = resolve_config(flags);
    config.sweep.curve = [&] {
        if (flags.curve == "total_info") return CurveKind::TotalInfo;
        if (flags.curve == "attributes") return CurveKind::Attributes;
        if (flags.curve == "assortment") return CurveKind::Assortment;
        throw ConfigError("unknown curve '" + flags.curve + "'");
    }();
    if (!config.env_overridden && config.sweep.curve == CurveKind::Attributes)
        config.env = attributes_environment();
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);

    const SweepResult result = run_sweep(config.sweep, experiment_config(config));
    const std::string name = curve_name(result.curve);
    write_file(out_dir / ("curve_" + name + ".csv"), export_sweep_curve(result, ExportFormat::Csv));
    write_file(out_dir / ("cells_" + name + ".csv"), export_sweep_cells(result));
    write_file(out_dir / ("curve_" + name + ".svg"), export_sweep_curve(result, ExportFormat::Svg));
    echo_config(config, out_dir);

    std::cout << "uncertainty  axis  SR\n";
    for (const auto& p : result.points)
        std::cout << p.uncertainty << "  " << p.axis << "  " << p.success_rate << "\n";
    return 0;
}

int cmd_experiment_ablation(const Flags& flags) {
    RunConfig config = resolve_config(flags);
    apply_ablation_environment(config);
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);

    const AblationResult result = run_ablation(config.sweep, experiment_config(config));
    write_file(out_dir / "ablation.csv", export_ablation(result, ExportFormat::Csv));
    echo_config(config, out_dir);

    std::cout << "variant      axis  SR\n";
    for (const auto& p : result.structured.points)
        std::cout << "structured   " << p.axis << "  " << p.success_rate << "\n";
    for (const auto& p : result.flat.points)
        std::cout << "flat_rating  " << p.axis << "  " << p.success_rate << "\n";
    std::cout << "sign changes: structured=" << result.sign_changes_structured
              << " flat_rating=" << result.sign_changes_flat << "\n";
    return 0;
}

int cmd_validate_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    const CalibrationTable table = CalibrationTable::load(in);  // throws on bad tables
    const double lo = table.min_total();
    const double hi = table.max_total();
    const double clamp_lo = 2.0 * (std::asin(std::sqrt(0.5)) - M_PI / 2.0);
    const double clamp_hi = 2.0 * std::asin(std::sqrt(0.5));
    std::cout << "calibration ok\n";
    std::cout << "attainable d_total range: [" << lo << ", " << hi << "]\n";
    std::cout << "clamp interval at P_base=0.5: [" << clamp_lo << ", " << clamp_hi << "]\n";
    std::cout << "zero-effect factors:";
    for (const auto& f : table.zero_effect_factors) std::cout << " " << f;
    std::cout << "\n";
    return 0;
}

int cmd_inspect(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::string line;
    int turns = 0, accepts = 0, defers = 0, rejects = 0;
    double last_p = -1.0, last_d = 0.0;
    std::string final_outcome = "none";
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw ParseError("transcript: bad record: " + std::string(e.what()));
        }
        const int turn = rec.value("turn", 0);
        if (turn == 0) {
            std::cout << "u0: " << rec.value("user_text", "") << "\n";
            continue;
        }
        ++turns;
        const std::string outcome = rec.value("outcome", "");
        if (outcome == "accept") ++accepts;
        else if (outcome == "defer") ++defers;
        else if (outcome == "reject") ++rejects;
        final_outcome = outcome;
        std::cout << "turn " << turn << " [" << outcome << "] " << rec.value("user_text", "");
        if (!rec["p_accept"].is_null()) {
            last_p = rec["p_accept"].get<double>();
            last_d = rec["d_total"].get<double>();
            std::cout << "  (P_accept=" << last_p << ", d_total=" << last_d << ")";
        }
        std::cout << "\n";
    }
    std::cout << "turns: " << turns << "  accept/defer/reject: " << accepts << "/" << defers << "/"
              << rejects << "  final: " << final_outcome << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hesitator: choice-overload user simulation for recommender evaluation"};
    app.require_subcommand(1);

    Flags flags;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config_path, "JSON config file");
        cmd->add_option("--seed", flags.seed, "base seed");
        cmd->add_option("--sessions", flags.sessions, "sessions to run");
        cmd->add_option("--out", flags.out_dir, "output directory");
        cmd->add_option("--workers", flags.workers, "worker threads");
        cmd->add_option("--provider", flags.provider, "rule | external")
            ->check(CLI::IsMember({"rule", "external"}));
        cmd->add_option("--calibration", flags.calibration, "calibration table override");
    };

    auto* simulate = app.add_subcommand("simulate", "run sessions and write transcripts");
    add_common(simulate);

    auto* experiment = app.add_subcommand("experiment", "run an experiment");
    experiment->require_subcommand(1);
    auto* overload = experiment->add_subcommand("overload", "Low/Medium/Severe contrast");
    add_common(overload);
    auto* curves = experiment->add_subcommand("curves", "information-load curves");
    add_common(curves);
    curves->add_option("--curve", flags.curve, "total_info | attributes | assortment")
        ->check(CLI::IsMember({"total_info", "attributes", "assortment"}));
    auto* ablation = experiment->add_subcommand("ablation", "structured vs flat-rating selection");
    add_common(ablation);

    std::string table_path;
    auto* validate = app.add_subcommand("validate-calibration", "check a calibration table");
    validate->add_option("table", table_path, "calibration JSON file")->required();

    std::string transcript_path;
    auto* inspect = app.add_subcommand("inspect", "summarize a transcript");
    inspect->add_option("transcript", transcript_path, "transcript JSONL file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(flags);
        if (overload->parsed()) return cmd_experiment_overload(flags);
        if (curves->parsed()) return cmd_experiment_curves(flags);
        if (ablation->parsed()) return cmd_experiment_ablation(flags);
        if (validate->parsed()) return cmd_validate_calibration(table_path);
        if (inspect->parsed()) return cmd_inspect(transcript_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
