#include "hesitator/config.hpp"

#include <fstream>

#include <json.hpp>

namespace hesitator {

using nlohmann::json;

namespace {

Presentation presentation_from_name(const std::string& name) {
    if (name == "tabular") return Presentation::Tabular;
    if (name == "mixed") return Presentation::Mixed;
    if (name == "free-text" || name == "free_text") return Presentation::FreeText;
    throw ConfigError("config: unknown presentation '" + name + "'");
}

CurveKind curve_from_name(const std::string& name) {
    if (name == "total_info") return CurveKind::TotalInfo;
    if (name == "attributes") return CurveKind::Attributes;
    if (name == "assortment") return CurveKind::Assortment;
    throw ConfigError("config: unknown curve '" + name + "'");
}

} // namespace

void RunConfig::validate() const {
    if (sessions < 1) throw ConfigError("config: sessions must be >= 1");
    if (experiment_sessions < 1) throw ConfigError("config: experiment_sessions must be >= 1");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    if (turn_limit < 1) throw ConfigError("config: turn_limit must be >= 1");
    if (provider != "rule" && provider != "external")
        throw ConfigError("config: provider must be 'rule' or 'external'");
    if (catalog_mode != "environment" && catalog_mode != "synthetic" && catalog_mode != "file")
        throw ConfigError("config: catalog mode must be environment, synthetic or file");
    if (catalog_mode == "file" && catalog_path.empty())
        throw ConfigError("config: catalog mode 'file' requires a catalog path");
    selection.validate();
    hesitation.validate();
    calibration.validate();
    if (!profile.valid()) throw ConfigError("config: profile levels out of range");
}

RunConfig default_run_config() {
    return RunConfig{};
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError("config: invalid JSON in '" + path + "': " + e.what());
    }

    RunConfig c;
    c.seed = doc.value("seed", c.seed);
    c.sessions = doc.value("sessions", c.sessions);
    c.experiment_sessions = doc.value("experiment_sessions", c.experiment_sessions);
    c.workers = doc.value("workers", c.workers);
    c.turn_limit = doc.value("turn_limit", c.turn_limit);
    c.out_dir = doc.value("out_dir", c.out_dir);
    c.provider = doc.value("provider", c.provider);
    c.calibration_path = doc.value("calibration_path", c.calibration_path);

    if (doc.contains("catalog")) {
        const auto& cat = doc["catalog"];
        c.catalog_mode = cat.value("mode", c.catalog_mode);
        c.catalog_path = cat.value("path", c.catalog_path);
        c.synthetic_items = cat.value("items", c.synthetic_items);
        c.synthetic_attrs = cat.value("attrs", c.synthetic_attrs);
    }
    if (doc.contains("environment")) {
        c.env_overridden = true;
        const auto& env = doc["environment"];
        c.env.catalog_size = env.value("catalog_size", c.env.catalog_size);
        c.env.schema_attrs = env.value("schema_attrs", c.env.schema_attrs);
        c.env.premium_share = env.value("premium_share", c.env.premium_share);
        c.env.premium_lo = env.value("premium_lo", c.env.premium_lo);
        c.env.premium_hi = env.value("premium_hi", c.env.premium_hi);
        c.env.mainstream_lo = env.value("mainstream_lo", c.env.mainstream_lo);
        c.env.mainstream_hi = env.value("mainstream_hi", c.env.mainstream_hi);
        c.env.attr_noise = env.value("attr_noise", c.env.attr_noise);
        c.env.price_min = env.value("price_min", c.env.price_min);
        c.env.price_max = env.value("price_max", c.env.price_max);
        c.env.decoy_attr = env.value("decoy_attr", c.env.decoy_attr);
        c.env.focal_attr = env.value("focal_attr", c.env.focal_attr);
        c.env.focal_noise = env.value("focal_noise", c.env.focal_noise);
    }
    if (doc.contains("profile")) {
        const auto& p = doc["profile"];
        c.profile.uncertainty = p.value("uncertainty", c.profile.uncertainty);
        c.profile.pickiness = p.value("pickiness", c.profile.pickiness);
        c.profile.openness = p.value("openness", c.profile.openness);
        c.profile.time_pressure = p.value("time_pressure", c.profile.time_pressure);
        c.profile.category = p.value("category", c.profile.category);
        if (p.contains("emphasis"))
            c.profile.emphasis = p["emphasis"].get<std::map<std::string, double>>();
    }
    if (doc.contains("sales")) {
        const auto& s = doc["sales"];
        c.sales.assortment_size = s.value("assortment", c.sales.assortment_size);
        c.sales.attrs_shown = s.value("attrs_shown", c.sales.attrs_shown);
        if (s.contains("presentation"))
            c.sales.presentation = presentation_from_name(s["presentation"].get<std::string>());
        if (s.contains("mode")) {
            const std::string mode = s["mode"].get<std::string>();
            if (mode == "basic") c.sales.mode = SalesMode::Basic;
            else if (mode == "persuasive-lite") c.sales.mode = SalesMode::PersuasiveLite;
            else throw ConfigError("config: unknown sales mode '" + mode + "'");
        }
        c.sales.relevance = s.value("relevance", c.sales.relevance);
    }
    if (doc.contains("selection")) {
        const auto& s = doc["selection"];
        c.selection.theta = s.value("theta", c.selection.theta);
        c.selection.gamma = s.value("gamma", c.selection.gamma);
        c.selection.alpha = s.value("alpha", c.selection.alpha);
    }
    if (doc.contains("hesitation"))
        c.hesitation.p_base = doc["hesitation"].value("p_base", c.hesitation.p_base);
    if (doc.contains("sweep")) {
        const auto& s = doc["sweep"];
        if (s.contains("curve")) c.sweep.curve = curve_from_name(s["curve"].get<std::string>());
        if (s.contains("assortment_grid"))
            c.sweep.assortment_grid = s["assortment_grid"].get<std::vector<int>>();
        if (s.contains("attribute_grid"))
            c.sweep.attribute_grid = s["attribute_grid"].get<std::vector<int>>();
        c.sweep.fixed_assortment = s.value("fixed_assortment", c.sweep.fixed_assortment);
        c.sweep.fixed_attrs = s.value("fixed_attrs", c.sweep.fixed_attrs);
        if (s.contains("uncertainty_levels"))
            c.sweep.uncertainty_levels = s["uncertainty_levels"].get<std::vector<int>>();
        c.sweep.openness = s.value("openness", c.sweep.openness);
        c.sweep.pickiness = s.value("pickiness", c.sweep.pickiness);
        c.sweep.time_pressure = s.value("time_pressure", c.sweep.time_pressure);
        if (s.contains("presentation"))
            c.sweep.presentation = presentation_from_name(s["presentation"].get<std::string>());
        if (s.contains("emphasis"))
            c.sweep.emphasis = s["emphasis"].get<std::map<std::string, double>>();
    }

    if (doc.contains("overload_conditions")) {
        c.overload_conditions.clear();
        for (const auto& j : doc["overload_conditions"]) {
            OverloadCondition cond;
            cond.name = j.at("name").get<std::string>();
            cond.openness = j.value("openness", cond.openness);
            cond.time_pressure = j.at("time_pressure").get<int>();
            cond.format_complexity = j.at("format_complexity").get<int>();
            cond.uncertainty = j.at("uncertainty").get<int>();
            cond.assortment = j.value("assortment", cond.assortment);
            cond.attrs_shown = j.value("attrs_shown", cond.attrs_shown);
            c.overload_conditions.push_back(std::move(cond));
        }
        if (c.overload_conditions.empty())
            throw ConfigError("config: overload_conditions must not be empty");
    }

    if (!c.calibration_path.empty()) {
        std::ifstream cal(c.calibration_path);
        if (!cal) throw ConfigError("config: cannot open calibration '" + c.calibration_path + "'");
        c.calibration = CalibrationTable::load(cal);
    }
    c.validate();
    return c;
}

std::string RunConfig::to_json() const {
    json doc{
        {"seed", seed},
        {"sessions", sessions},
        {"experiment_sessions", experiment_sessions},
        {"workers", workers},
        {"turn_limit", turn_limit},
        {"out_dir", out_dir},
        {"provider", provider},
        {"calibration_path", calibration_path},
        {"catalog",
         {{"mode", catalog_mode},
          {"path", catalog_path},
          {"items", synthetic_items},
          {"attrs", synthetic_attrs}}},
        {"environment",
         {{"catalog_size", env.catalog_size},
          {"schema_attrs", env.schema_attrs},
          {"premium_share", env.premium_share},
          {"premium_lo", env.premium_lo},
          {"premium_hi", env.premium_hi},
          {"mainstream_lo", env.mainstream_lo},
          {"mainstream_hi", env.mainstream_hi},
          {"attr_noise", env.attr_noise},
          {"price_min", env.price_min},
          {"price_max", env.price_max},
          {"decoy_attr", env.decoy_attr},
          {"focal_attr", env.focal_attr},
          {"focal_noise", env.focal_noise}}},
        {"profile",
         {{"uncertainty", profile.uncertainty},
          {"pickiness", profile.pickiness},
          {"openness", profile.openness},
          {"time_pressure", profile.time_pressure},
          {"category", profile.category},
          {"emphasis", profile.emphasis}}},
        {"sales",
         {{"assortment", sales.assortment_size},
          {"attrs_shown", sales.attrs_shown},
          {"presentation", presentation_name(sales.presentation)},
          {"mode", sales.mode == SalesMode::Basic ? "basic" : "persuasive-lite"},
          {"relevance", sales.relevance}}},
        {"selection",
         {{"theta", selection.theta}, {"gamma", selection.gamma}, {"alpha", selection.alpha}}},
        {"hesitation", {{"p_base", hesitation.p_base}}},
        {"sweep",
         {{"curve", curve_name(sweep.curve)},
          {"assortment_grid", sweep.assortment_grid},
          {"attribute_grid", sweep.attribute_grid},
          {"fixed_assortment", sweep.fixed_assortment},
          {"fixed_attrs", sweep.fixed_attrs},
          {"uncertainty_levels", sweep.uncertainty_levels},
          {"openness", sweep.openness},
          {"pickiness", sweep.pickiness},
          {"time_pressure", sweep.time_pressure},
          {"presentation", presentation_name(sweep.presentation)},
          {"emphasis", sweep.emphasis}}},
        {"calibration", nlohmann::json::parse(calibration.to_json())}};
    json conditions = json::array();
    for (const auto& cond : overload_conditions)
        conditions.push_back({{"name", cond.name},
                              {"openness", cond.openness},
                              {"time_pressure", cond.time_pressure},
                              {"format_complexity", cond.format_complexity},
                              {"uncertainty", cond.uncertainty},
                              {"assortment", cond.assortment},
                              {"attrs_shown", cond.attrs_shown}});
    doc["overload_conditions"] = conditions;
    return doc.dump(2) + "\n";
}

void apply_ablation_environment(RunConfig& config) {
    config.env.focal_attr = 4;
    config.env.focal_noise = 0.10;
    config.env.decoy_attr = 5;
    config.sweep.curve = CurveKind::Attributes;
    config.sweep.attribute_grid = {2, 4, 6, 10};
    config.sweep.uncertainty_levels = {1};
    config.sweep.emphasis = {{"attr1", 0.2}, {"attr2", 0.1}, {"attr3", 0.1}, {"attr4", 0.6}};
}

} // namespace hesitator
