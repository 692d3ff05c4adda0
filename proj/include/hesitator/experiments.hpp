#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hesitator/engine.hpp"
#include "hesitator/stats.hpp"

// Experiment harness: overload-level contrasts, information-load curves, the
// selection ablation, and deterministic CSV/SVG export. Sessions are paired
// across conditions by sharing the per-session seed, so only the condition
// parameters differ; results are bit-identical for any worker count.

namespace hesitator {

// Catalog model for experiment runs. Items carry a latent quality: a small
// premium segment near the top of the scale and a mainstream segment well
// below the acceptance region, with attribute values scattered around the
// quality by bounded uniform noise. Prices are independent of quality. A
// decoy attribute (inversely related to quality) and a low-noise focal
// attribute are available for ablation environments.
struct EnvironmentParams {
    int catalog_size = 256;
    int schema_attrs = 10;
    double premium_share = 0.0035;
    double premium_lo = 0.88, premium_hi = 0.99;
    double mainstream_lo = 0.05, mainstream_hi = 0.45;
    double attr_noise = 0.35;
    double price_min = 20.0, price_max = 500.0;
    int decoy_attr = -1;   // index scored as (1 - quality), -1 = none
    int focal_attr = -1;   // index with focal_noise instead of attr_noise
    double focal_noise = 0.10;
};

Catalog make_environment_catalog(uint64_t seed, const EnvironmentParams& env);

// Standard environments. The overload contrast runs premium-rich catalogs so
// outcomes hinge on commitment rather than discovery; the information-load
// sweeps run premium-scarce ones so discovery effects stay visible. The
// attributes sweep additionally keeps the mainstream segment well below the
// premium band, which stabilizes dominance perception across attribute
// counts.
EnvironmentParams sweep_environment();
EnvironmentParams overload_environment();
EnvironmentParams attributes_environment();

struct ExperimentConfig {
    int sessions = 200;
    uint64_t base_seed = 42;
    int workers = 1;
    int turn_limit = kDefaultTurnLimit;
    EnvironmentParams env;
    SelectionParams selection;
    HesitationParams hesitation;
    CalibrationTable calibration;
    SalesMode mode = SalesMode::Basic;
    bool relevance = false;
    SelectionVariant variant = SelectionVariant::Structured;

    void validate() const {
        if (sessions < 1) throw ConfigError("experiment: sessions must be >= 1");
        if (workers < 1) throw ConfigError("experiment: workers must be >= 1");
    }
};

// One overload condition: openness fixed, the three driven leaves, and the
// offer geometry.
struct OverloadCondition {
    std::string name;
    int openness = 2;
    int time_pressure = 1;      // v_{t,p}
    int format_complexity = 1;  // v_{t,f}, realized through the presentation
    int uncertainty = 1;        // v_u
    int assortment = 3;         // |I|
    int attrs_shown = 8;

    static std::vector<OverloadCondition> standard_conditions();
};

struct ConditionResult {
    OverloadCondition condition;
    std::vector<uint8_t> purchases;  // per session, index-aligned across conditions
    std::vector<int> terminal_turns;
    double success_rate = 0.0;
};

struct OverloadResult {
    std::vector<ConditionResult> conditions;
    WilcoxonResult low_vs_severe;
    bool degenerate = false;  // every paired difference was zero
};

double success_rate(const std::vector<uint8_t>& purchases);

OverloadResult run_overload_experiment(const std::vector<OverloadCondition>& conditions,
                                       const ExperimentConfig& config);

enum class CurveKind { TotalInfo, Attributes, Assortment };

std::string curve_name(CurveKind kind);

struct SweepSpec {
    CurveKind curve = CurveKind::TotalInfo;
    std::vector<int> assortment_grid{1, 3, 6, 9, 12};
    std::vector<int> attribute_grid{2, 4, 6, 8, 10};
    int fixed_assortment = 3;  // attributes curve
    int fixed_attrs = 5;       // assortment curve
    std::vector<int> uncertainty_levels{1, 2, 3};
    int openness = 2;
    int pickiness = 2;
    int time_pressure = 2;
    Presentation presentation = Presentation::Tabular;
    std::map<std::string, double> emphasis;  // expert weights for low uncertainty
};

struct CellResult {
    int assortment = 0;
    int attrs_shown = 0;
    int uncertainty = 0;
    std::vector<uint8_t> purchases;
    double success_rate = 0.0;
};

struct CurvePoint {
    int uncertainty = 0;
    double axis = 0.0;  // attrs, assortment, or total information (|I| * N_attr)
    int sessions = 0;
    int cells = 0;
    double success_rate = 0.0;
};

struct SweepResult {
    CurveKind curve = CurveKind::TotalInfo;
    std::vector<CellResult> cells;
    std::vector<CurvePoint> points;  // sorted by (uncertainty, axis)
};

SweepResult run_sweep(const SweepSpec& spec, const ExperimentConfig& config);

struct AblationResult {
    SweepResult structured;
    SweepResult flat;
    int sign_changes_structured = 0;
    int sign_changes_flat = 0;
};

// Attributes sweep under both selection variants with shared seeds, plus the
// count of sign changes in each realized curve's first differences.
AblationResult run_ablation(const SweepSpec& spec, const ExperimentConfig& config);

int count_sign_changes(const std::vector<double>& values);

// Deterministic, byte-stable exports.
enum class ExportFormat { Csv, Svg };
std::string export_overload(const OverloadResult& result, ExportFormat format);
std::string export_sweep_curve(const SweepResult& result, ExportFormat format);
std::string export_sweep_cells(const SweepResult& result);
std::string export_ablation(const AblationResult& result, ExportFormat format);

} // namespace hesitator
