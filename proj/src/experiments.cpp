#include "hesitator/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

namespace hesitator {

namespace {

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

Presentation presentation_for_level(int format_complexity) {
    switch (format_complexity) {
        case 1: return Presentation::Tabular;
        case 2: return Presentation::Mixed;
        default: return Presentation::FreeText;
    }
}

// Per-session sub-stream labels (split from the shared session seed, so
// paired conditions see the same catalog, profile draws and epsilon stream).
constexpr uint64_t kStreamCatalog = 10;
constexpr uint64_t kStreamProfile = 11;
constexpr uint64_t kStreamSession = 12;

struct CellConfig {
    int assortment = 3;
    int attrs_shown = 8;
    Presentation presentation = Presentation::Tabular;
    int openness = 2;
    int pickiness = 2;
    int uncertainty = 2;
    int time_pressure = 2;
    const std::map<std::string, double>* emphasis = nullptr;
};

SessionResult run_cell_session(const CellConfig& cell, const ExperimentConfig& config,
                               int session_index) {
    const uint64_t session_seed = split_seed(config.base_seed, static_cast<uint64_t>(session_index));

    const Catalog catalog =
        make_environment_catalog(split_seed(session_seed, kStreamCatalog), config.env);

    ProfileConfig profile_cfg;
    profile_cfg.seed = split_seed(session_seed, kStreamProfile);
    profile_cfg.uncertainty = cell.uncertainty;
    profile_cfg.pickiness = cell.pickiness;
    profile_cfg.openness = cell.openness;
    profile_cfg.time_pressure = cell.time_pressure;
    if (cell.emphasis && cell.uncertainty == 1) profile_cfg.emphasis = *cell.emphasis;
    const Profile profile = generate_profile(profile_cfg, catalog);

    SessionConfig session_cfg;
    session_cfg.sales.assortment_size = cell.assortment;
    session_cfg.sales.attrs_shown = cell.attrs_shown;
    session_cfg.sales.presentation = cell.presentation;
    session_cfg.sales.mode = config.mode;
    session_cfg.sales.relevance = config.relevance;
    session_cfg.selection = config.selection;
    session_cfg.variant = config.variant;
    session_cfg.hesitation = config.hesitation;
    session_cfg.calibration = config.calibration;
    session_cfg.turn_limit = config.turn_limit;

    return run_session(profile.state, profile.weights, profile.constraints, catalog, session_cfg,
                       Providers{}, split_seed(session_seed, kStreamSession));
}

CellResult run_cell(const CellConfig& cell, const ExperimentConfig& config) {
    CellResult result;
    result.assortment = cell.assortment;
    result.attrs_shown = cell.attrs_shown;
    result.uncertainty = cell.uncertainty;
    result.purchases.assign(static_cast<size_t>(config.sessions), 0);
    parallel_for(config.sessions, config.workers, [&](int i) {
        const SessionResult session = run_cell_session(cell, config, i);
        result.purchases[static_cast<size_t>(i)] = session.purchased ? 1 : 0;
    });
    result.success_rate = success_rate(result.purchases);
    return result;
}

} // namespace

Catalog make_environment_catalog(uint64_t seed, const EnvironmentParams& env) {
    if (env.catalog_size < 1) throw ConfigError("environment: catalog_size must be >= 1");
    if (env.schema_attrs < 1) throw ConfigError("environment: schema_attrs must be >= 1");
    if (env.premium_share < 0.0 || env.premium_share > 1.0)
        throw ConfigError("environment: premium_share outside [0,1]");

    Catalog catalog;
    for (int j = 0; j < env.schema_attrs; ++j) {
        AttributeDescriptor d;
        d.name = "attr" + std::to_string(j);
        d.kind = AttrKind::Numeric;
        d.observed_min = 0.0;
        d.observed_max = 1.0;
        catalog.schema.attributes.push_back(std::move(d));
    }

    Rng rng(split_seed(seed, 0xE27));
    for (int i = 0; i < env.catalog_size; ++i) {
        const bool premium = rng.uniform() < env.premium_share;
        const double q = premium ? rng.uniform(env.premium_lo, env.premium_hi)
                                 : rng.uniform(env.mainstream_lo, env.mainstream_hi);
        Item item;
        item.id = "item-" + std::to_string(i);
        item.title = "Product " + std::to_string(i);
        item.category = "gadget";
        item.price = rng.uniform(env.price_min, env.price_max);
        for (int j = 0; j < env.schema_attrs; ++j) {
            const double base = (j == env.decoy_attr) ? 1.0 - q : q;
            const double noise = (j == env.focal_attr) ? env.focal_noise : env.attr_noise;
            const double value = std::clamp(base + rng.uniform(-noise, noise), 0.0, 1.0);
            item.attributes[catalog.schema.attributes[static_cast<size_t>(j)].name] = value;
        }
        catalog.items.push_back(std::move(item));
    }
    return catalog;
}

EnvironmentParams sweep_environment() {
    return EnvironmentParams{};
}

EnvironmentParams overload_environment() {
    EnvironmentParams env;
    env.premium_share = 0.00625;
    return env;
}

EnvironmentParams attributes_environment() {
    EnvironmentParams env;
    env.mainstream_hi = 0.38;
    return env;
}

std::vector<OverloadCondition> OverloadCondition::standard_conditions() {
    return {{"Low", 2, 1, 1, 1, 3, 8}, {"Medium", 2, 2, 1, 2, 3, 8}, {"Severe", 2, 3, 3, 3, 3, 8}};
}

double success_rate(const std::vector<uint8_t>& purchases) {
    if (purchases.empty()) throw ConfigError("success_rate: empty sample");
    const double hits = static_cast<double>(
        std::count(purchases.begin(), purchases.end(), static_cast<uint8_t>(1)));
    return hits / static_cast<double>(purchases.size());
}

OverloadResult run_overload_experiment(const std::vector<OverloadCondition>& conditions,
                                       const ExperimentConfig& config) {
    config.validate();
    if (conditions.empty()) throw ConfigError("overload experiment: no conditions");

    OverloadResult result;
    for (const auto& cond : conditions) {
        CellConfig cell;
        cell.assortment = cond.assortment;
        cell.attrs_shown = cond.attrs_shown;
        cell.presentation = presentation_for_level(cond.format_complexity);
        cell.openness = cond.openness;
        cell.pickiness = 2;
        cell.uncertainty = cond.uncertainty;
        cell.time_pressure = cond.time_pressure;

        ConditionResult cr;
        cr.condition = cond;
        cr.purchases.assign(static_cast<size_t>(config.sessions), 0);
        cr.terminal_turns.assign(static_cast<size_t>(config.sessions), 0);
        parallel_for(config.sessions, config.workers, [&](int i) {
            const SessionResult session = run_cell_session(cell, config, i);
            cr.purchases[static_cast<size_t>(i)] = session.purchased ? 1 : 0;
            cr.terminal_turns[static_cast<size_t>(i)] = session.terminal_turn;
        });
        cr.success_rate = success_rate(cr.purchases);
        result.conditions.push_back(std::move(cr));
    }

    const ConditionResult* low = nullptr;
    const ConditionResult* severe = nullptr;
    for (const auto& cr : result.conditions) {
        if (cr.condition.name == "Low") low = &cr;
        if (cr.condition.name == "Severe") severe = &cr;
    }
    if (low && severe) {
        std::vector<double> diffs(static_cast<size_t>(config.sessions), 0.0);
        for (int i = 0; i < config.sessions; ++i)
            diffs[static_cast<size_t>(i)] =
                static_cast<double>(low->purchases[static_cast<size_t>(i)]) -
                static_cast<double>(severe->purchases[static_cast<size_t>(i)]);
        try {
            result.low_vs_severe = wilcoxon_signed_rank(diffs);
        } catch (const ConfigError&) {
            result.degenerate = true;
            result.low_vs_severe.p_two_sided = 1.0;
            result.low_vs_severe.method = "degenerate";
            result.low_vs_severe.n_nonzero = 0;
        }
    }
    return result;
}

std::string curve_name(CurveKind kind) {
    switch (kind) {
        case CurveKind::TotalInfo: return "total_info";
        case CurveKind::Attributes: return "attributes";
        case CurveKind::Assortment: return "assortment";
    }
    return "?";
}

SweepResult run_sweep(const SweepSpec& spec, const ExperimentConfig& config) {
    config.validate();
    if (spec.uncertainty_levels.empty())
        throw ConfigError("sweep: no uncertainty levels");

    std::vector<std::pair<int, int>> cells;  // (assortment, attrs)
    switch (spec.curve) {
        case CurveKind::TotalInfo:
            if (spec.assortment_grid.empty() || spec.attribute_grid.empty())
                throw ConfigError("sweep: empty grid");
            for (int a : spec.assortment_grid)
                for (int n : spec.attribute_grid) cells.emplace_back(a, n);
            break;
        case CurveKind::Attributes:
            if (spec.attribute_grid.empty()) throw ConfigError("sweep: empty grid");
            for (int n : spec.attribute_grid) cells.emplace_back(spec.fixed_assortment, n);
            break;
        case CurveKind::Assortment:
            if (spec.assortment_grid.empty()) throw ConfigError("sweep: empty grid");
            for (int a : spec.assortment_grid) cells.emplace_back(a, spec.fixed_attrs);
            break;
    }
    for (const auto& [a, n] : cells) {
        if (a < 1 || a > config.env.catalog_size)
            throw ConfigError("sweep: assortment " + std::to_string(a) +
                              " exceeds the catalog capacity");
        if (n < 1 || n > config.env.schema_attrs)
            throw ConfigError("sweep: attribute count " + std::to_string(n) +
                              " exceeds the schema capacity");
    }

    SweepResult result;
    result.curve = spec.curve;
    for (int u : spec.uncertainty_levels) {
        if (!valid_level(u)) throw ConfigError("sweep: uncertainty level out of range");
        for (const auto& [a, n] : cells) {
            CellConfig cell;
            cell.assortment = a;
            cell.attrs_shown = n;
            cell.presentation = spec.presentation;
            cell.openness = spec.openness;
            cell.pickiness = spec.pickiness;
            cell.uncertainty = u;
            cell.time_pressure = spec.time_pressure;
            cell.emphasis = spec.emphasis.empty() ? nullptr : &spec.emphasis;
            result.cells.push_back(run_cell(cell, config));
        }
    }

    // collapse cells onto the curve axis
    std::map<std::pair<int, double>, std::pair<long, long>> buckets;  // (u, axis) -> (hits, n)
    for (const auto& cell : result.cells) {
        double axis = 0.0;
        switch (spec.curve) {
            case CurveKind::TotalInfo: axis = static_cast<double>(cell.assortment) *
                                              static_cast<double>(cell.attrs_shown); break;
            case CurveKind::Attributes: axis = cell.attrs_shown; break;
            case CurveKind::Assortment: axis = cell.assortment; break;
        }
        auto& bucket = buckets[{cell.uncertainty, axis}];
        for (uint8_t p : cell.purchases) bucket.first += p;
        bucket.second += static_cast<long>(cell.purchases.size());
    }
    std::map<std::pair<int, double>, int> cell_counts;
    for (const auto& cell : result.cells) {
        double axis = spec.curve == CurveKind::TotalInfo
                          ? static_cast<double>(cell.assortment) * cell.attrs_shown
                          : (spec.curve == CurveKind::Attributes ? cell.attrs_shown
                                                                 : cell.assortment);
        cell_counts[{cell.uncertainty, axis}] += 1;
    }
    for (const auto& [key, bucket] : buckets) {
        CurvePoint p;
        p.uncertainty = key.first;
        p.axis = key.second;
        p.sessions = static_cast<int>(bucket.second);
        p.cells = cell_counts[key];
        p.success_rate = static_cast<double>(bucket.first) / static_cast<double>(bucket.second);
        result.points.push_back(p);
    }
    std::sort(result.points.begin(), result.points.end(), [](const CurvePoint& a, const CurvePoint& b) {
        if (a.uncertainty != b.uncertainty) return a.uncertainty < b.uncertainty;
        return a.axis < b.axis;
    });
    return result;
}

int count_sign_changes(const std::vector<double>& values) {
    int changes = 0;
    int last_sign = 0;
    for (size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        const int sign = (d > 1e-12) ? 1 : (d < -1e-12 ? -1 : 0);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) ++changes;
        last_sign = sign;
    }
    return changes;
}

AblationResult run_ablation(const SweepSpec& spec, const ExperimentConfig& config) {
    ExperimentConfig structured_cfg = config;
    structured_cfg.variant = SelectionVariant::Structured;
    ExperimentConfig flat_cfg = config;
    flat_cfg.variant = SelectionVariant::FlatRating;

    AblationResult result;
    result.structured = run_sweep(spec, structured_cfg);
    result.flat = run_sweep(spec, flat_cfg);

    auto curve_values = [](const SweepResult& sweep) {
        std::vector<double> values;
        for (const auto& p : sweep.points) values.push_back(p.success_rate);
        return values;
    };
    result.sign_changes_structured = count_sign_changes(curve_values(result.structured));
    result.sign_changes_flat = count_sign_changes(curve_values(result.flat));
    return result;
}

std::string export_overload(const OverloadResult& result, ExportFormat format) {
    if (format != ExportFormat::Csv)
        throw ConfigError("export: overload results support csv only");
    if (result.conditions.empty()) throw ConfigError("export: empty result");
    std::ostringstream out;
    out << "# format_version=1\n";
    out << "condition,sessions,purchases,success_rate,mean_turns\n";
    for (const auto& cr : result.conditions) {
        const long hits = std::count(cr.purchases.begin(), cr.purchases.end(),
                                     static_cast<uint8_t>(1));
        const double mean_turns =
            cr.terminal_turns.empty()
                ? 0.0
                : std::accumulate(cr.terminal_turns.begin(), cr.terminal_turns.end(), 0.0) /
                      static_cast<double>(cr.terminal_turns.size());
        out << cr.condition.name << "," << cr.purchases.size() << "," << hits << ","
            << fmt(cr.success_rate) << "," << fmt(mean_turns, 3) << "\n";
    }
    out << "# wilcoxon_low_vs_severe,method=" << result.low_vs_severe.method
        << ",n_nonzero=" << result.low_vs_severe.n_nonzero
        << ",w_plus=" << fmt(result.low_vs_severe.w_plus, 1)
        << ",p_two_sided=" << fmt(result.low_vs_severe.p_two_sided, 9) << "\n";
    return out.str();
}

namespace {

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "# format_version=1\n";
    out << "curve,uncertainty,axis,cells,sessions,success_rate\n";
    for (const auto& p : result.points) {
        out << curve_name(result.curve) << "," << p.uncertainty << "," << fmt(p.axis, 1) << ","
            << p.cells << "," << p.sessions << "," << fmt(p.success_rate) << "\n";
    }
    return out.str();
}

std::string sweep_svg(const SweepResult& result) {
    if (result.points.empty()) throw ConfigError("export: empty result");
    const double width = 640.0, height = 420.0;
    const double ml = 60.0, mr = 20.0, mt = 20.0, mb = 50.0;
    double axis_min = result.points.front().axis, axis_max = axis_min;
    for (const auto& p : result.points) {
        axis_min = std::min(axis_min, p.axis);
        axis_max = std::max(axis_max, p.axis);
    }
    if (axis_max == axis_min) axis_max = axis_min + 1.0;
    auto sx = [&](double axis) {
        return ml + (axis - axis_min) / (axis_max - axis_min) * (width - ml - mr);
    };
    auto sy = [&](double sr) { return mt + (1.0 - sr) * (height - mt - mb); };

    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(0) << "\" x2=\"" << width - mr << "\" y2=\""
        << sy(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(0) << "\" x2=\"" << ml << "\" y2=\"" << sy(1)
        << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double sr = tick / 4.0;
        out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(sr) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(sr, 2) << "</text>\n";
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">" << curve_name(result.curve)
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
        << (mt + height - mb) / 2 << ")\">success rate</text>\n";

    std::vector<int> levels;
    for (const auto& p : result.points)
        if (std::find(levels.begin(), levels.end(), p.uncertainty) == levels.end())
            levels.push_back(p.uncertainty);
    std::sort(levels.begin(), levels.end());
    for (size_t li = 0; li < levels.size(); ++li) {
        std::ostringstream pts;
        for (const auto& p : result.points) {
            if (p.uncertainty != levels[li]) continue;
            pts << fmt(sx(p.axis), 1) << "," << fmt(sy(p.success_rate), 1) << " ";
        }
        const char* color = colors[li % 3];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
            << pts.str() << "\"/>\n";
        out << "<text x=\"" << width - mr - 100 << "\" y=\"" << mt + 16 + 16 * li
            << "\" font-size=\"12\" fill=\"" << color << "\">uncertainty " << levels[li]
            << "</text>\n";
        for (const auto& p : result.points) {
            if (p.uncertainty != levels[li]) continue;
            out << "<circle cx=\"" << fmt(sx(p.axis), 1) << "\" cy=\"" << fmt(sy(p.success_rate), 1)
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace

std::string export_sweep_curve(const SweepResult& result, ExportFormat format) {
    if (result.points.empty()) throw ConfigError("export: empty result");
    return format == ExportFormat::Csv ? sweep_csv(result) : sweep_svg(result);
}

std::string export_sweep_cells(const SweepResult& result) {
    if (result.cells.empty()) throw ConfigError("export: empty result");
    std::ostringstream out;
    out << "# format_version=1\n";
    out << "curve,uncertainty,assortment,attrs_shown,sessions,success_rate\n";
    for (const auto& cell : result.cells) {
        out << curve_name(result.curve) << "," << cell.uncertainty << "," << cell.assortment << ","
            << cell.attrs_shown << "," << cell.purchases.size() << "," << fmt(cell.success_rate)
            << "\n";
    }
    return out.str();
}

std::string export_ablation(const AblationResult& result, ExportFormat format) {
    if (format != ExportFormat::Csv)
        throw ConfigError("export: ablation results support csv only");
    if (result.structured.points.empty()) throw ConfigError("export: empty result");
    std::ostringstream out;
    out << "# format_version=1\n";
    out << "variant,uncertainty,axis,sessions,success_rate\n";
    for (const auto& p : result.structured.points)
        out << "structured," << p.uncertainty << "," << fmt(p.axis, 1) << "," << p.sessions << ","
            << fmt(p.success_rate) << "\n";
    for (const auto& p : result.flat.points)
        out << "flat_rating," << p.uncertainty << "," << fmt(p.axis, 1) << "," << p.sessions << ","
            << fmt(p.success_rate) << "\n";
    out << "# sign_changes,structured=" << result.sign_changes_structured
        << ",flat_rating=" << result.sign_changes_flat << "\n";
    return out.str();
}

} // namespace hesitator
