#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hesitator/domain.hpp"
#include "hesitator/rng.hpp"
#include "hesitator/selection.hpp"

// Commitment under choice overload. Three phases: perceive leaf-level
// intensity scores from the sales turn, calibrate them to an aggregate
// effect size d_total through per-factor coefficient/range tables, and map
// d_total to an acceptance probability with the arcsine proportion
// transform. A purchase triggers only when a uniform sample eps <= P_accept.

namespace hesitator {

// Leaf intensities, each in {1,2,3}. time_pressure and uncertainty are not
// perceived: they are copied from the scenario and persona.
struct LeafScores {
    int assortment = 1;         // v_a
    int dominance = 1;          // v_{s,d}
    int alignability = 1;       // v_{s,a}
    int attribute_count = 1;    // v_{t,a}
    int format_complexity = 1;  // v_{t,f}
    int time_pressure = 1;      // v_{t,p} = sigma_T
    int uncertainty = 1;        // v_u = phi_U

    void validate() const;
};

// Four-factor state; composites are arithmetic means of their leaves, so
// components live in [1,3].
struct OverloadVector {
    double assortment = 1.0;   // v_a
    double complexity = 1.0;   // v_s = mean(v_sd, v_sa)
    double difficulty = 1.0;   // v_t = mean(v_tp, v_ta, v_tf)
    double uncertainty = 1.0;  // v_u
};

struct FactorCalibration {
    double beta = 0.0;
    double delta_min = 0.0;
    double delta_max = 0.0;
};

// Moderator coefficients and observed effect-size ranges. Factors known to
// contribute nothing in this setting (decision intent, accountability) are
// kept visible with zero effect rather than dropped.
struct CalibrationTable {
    FactorCalibration assortment{0.41, -0.18, 1.22};
    FactorCalibration complexity{0.55, -1.65, 0.48};
    FactorCalibration difficulty{0.37, -0.59, 0.81};
    FactorCalibration uncertainty{0.32, -1.34, 1.21};
    std::vector<std::string> zero_effect_factors{"decision_intent", "accountability"};

    void validate() const;

    // attainable d_total range [sum beta*delta_min, sum beta*delta_max]
    double min_total() const;
    double max_total() const;

    static CalibrationTable load(std::istream& in);
    std::string to_json() const;
};

struct HesitationParams {
    double p_base = 0.5;

    void validate() const {
        if (!(p_base > 0.0 && p_base < 1.0))
            throw ConfigError("hesitation: P_base must lie in (0,1)");
    }
};

struct HesitationOutcome {
    LeafScores leaves;
    OverloadVector v;
    double effect_assortment = 0.0;
    double effect_complexity = 0.0;
    double effect_difficulty = 0.0;
    double effect_uncertainty = 0.0;
    double d_total_raw = 0.0;  // before truncation
    double d_total = 0.0;      // after truncation
    double p_accept = 0.0;
    double epsilon = 0.0;
    bool purchase = false;
};

// Supplies the five perceived leaves for one sales turn. Implementations may
// consult an external service; failures surface as PerceptionError.
class PerceptionProvider {
public:
    virtual ~PerceptionProvider() = default;
    virtual LeafScores perceive(const SalesTurn& sales,
                                const std::vector<ItemView>& items) const = 0;
};

// Deterministic default provider.
//   assortment: <=3 items -> 1, 4-8 -> 2, >=9 -> 3
//   attribute count: <=4 -> 1, 5-9 -> 2, >=10 -> 3
//   dominance: a Pareto-dominant item -> 1; pairwise trade-off rate < 0.5 -> 2; else 3
//   alignability: shared attribute fraction >= 0.8 -> 1, >= 0.4 -> 2, else 3
//   format complexity: tabular -> 1, mixed -> 2, free text -> 3
class RuleBasedPerception final : public PerceptionProvider {
public:
    LeafScores perceive(const SalesTurn& sales,
                        const std::vector<ItemView>& items) const override;

    static int score_assortment(size_t n_items);
    static int score_attribute_count(int shown_attributes);
    static int score_dominance(const std::vector<ItemView>& items);
    static int score_alignability(const std::vector<ItemView>& items);
    static int score_format_complexity(Presentation presentation);
};

// Runs the provider and pins the fixed leaves from scenario/persona.
LeafScores perceive_overload(const SalesTurn& sales, const std::vector<ItemView>& items,
                             const GlobalState& state, const PerceptionProvider& provider);

OverloadVector compose_factors(const LeafScores& leaves);

// Linear map of a level in [1,3] onto [delta_min, delta_max]; endpoint-exact.
double interp_effect(double level, double delta_min, double delta_max);

// d_total = sum_k beta_k * interp(v_k, delta_k); untruncated.
double total_effect(const OverloadVector& v, const CalibrationTable& table);

// Truncation keeping the probability map inside [0,1]:
// [2*(asin(sqrt(P_base)) - pi/2), 2*asin(sqrt(P_base))]; at P_base = 0.5 this
// is [-pi/2, pi/2].
double clamp_effect(double d, double p_base);

// P_accept = sin^2(asin(sqrt(P_base)) - d/2)
double accept_probability(double d, double p_base);

// Inverse of accept_probability: d = 2*(asin(sqrt(P_base)) - asin(sqrt(P_accept)))
double inverse_effect(double p_accept, double p_base);

// Draws eps uniform on [0,1); purchase iff eps <= p_accept.
struct CommitDraw {
    double epsilon = 0.0;
    bool purchase = false;
};
CommitDraw decide_commit(double p_accept, Rng& rng);

// Full chain for one proceeding turn.
HesitationOutcome evaluate_hesitation(const SalesTurn& sales, const std::vector<ItemView>& items,
                                      const GlobalState& state, const PerceptionProvider& provider,
                                      const CalibrationTable& table, const HesitationParams& params,
                                      Rng& rng);

} // namespace hesitator
