#include <doctest.h>

#include <algorithm>

#include "hesitator/profiles.hpp"

using namespace hesitator;

namespace {

Catalog price_catalog(std::vector<double> prices) {
    Catalog catalog;
    catalog.schema.attributes.push_back({"attr0", AttrKind::Numeric, 0.0, 1.0});
    int i = 0;
    for (double p : prices) {
        Item item;
        item.id = "i" + std::to_string(i++);
        item.category = "general";
        item.price = p;
        item.attributes["attr0"] = 0.5;
        catalog.items.push_back(item);
    }
    return catalog;
}

AttributeSchema n_attr_schema(int n) {
    AttributeSchema schema;
    for (int j = 0; j < n; ++j)
        schema.attributes.push_back({"attr" + std::to_string(j), AttrKind::Numeric, 0.0, 1.0});
    return schema;
}

} // namespace

TEST_CASE("sample_budget lands inside the type-7 IQR") {
    const Catalog catalog = price_catalog({10, 20, 30, 40});
    // sorted {10,20,30,40}: Q1 = 17.5, Q3 = 32.5
    for (uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const double b = sample_budget(catalog, "general", rng);
        CHECK(b >= 17.5);
        CHECK(b <= 32.5);
    }
}

TEST_CASE("sample_budget degenerate and error cases") {
    const Catalog flat = price_catalog({25, 25, 25, 25});
    Rng rng(1);
    CHECK(sample_budget(flat, "general", rng) == doctest::Approx(25.0));

    const Catalog three = price_catalog({10, 20, 30});
    CHECK_THROWS_AS(sample_budget(three, "general", rng), ConfigError);
}

TEST_CASE("budget stays within the category price range") {
    const Catalog catalog = price_catalog({5, 80, 33, 12, 47, 61, 29});
    for (uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const double b = sample_budget(catalog, "general", rng);
        CHECK(b >= 5.0);
        CHECK(b <= 80.0);
    }
}

TEST_CASE("uniform weights at medium/high uncertainty") {
    const auto schema = n_attr_schema(4);
    Rng rng(3);
    for (int u : {2, 3}) {
        const WeightVector w = build_weight_vector(u, schema, nullptr, rng);
        for (double v : w.weights) CHECK(v == doctest::Approx(0.25));
    }
}

TEST_CASE("emphasis weights normalize") {
    const auto schema = n_attr_schema(2);
    std::map<std::string, double> emphasis{{"attr0", 3.0}, {"attr1", 1.0}};
    Rng rng(3);
    const WeightVector w = build_weight_vector(1, schema, &emphasis, rng);
    CHECK(w.weights[0] == doctest::Approx(0.75));
    CHECK(w.weights[1] == doctest::Approx(0.25));

    std::map<std::string, double> negative{{"attr0", -1.0}};
    CHECK_THROWS_AS(build_weight_vector(1, schema, &negative, rng), ConfigError);
}

TEST_CASE("low-uncertainty weights are deterministic, normalized, nonnegative") {
    const auto schema = n_attr_schema(6);
    Rng a(42), b(42);
    const WeightVector wa = build_weight_vector(1, schema, nullptr, a);
    const WeightVector wb = build_weight_vector(1, schema, nullptr, b);
    CHECK(wa.weights == wb.weights);
    wa.validate();
    double sum = 0.0;
    for (double v : wa.weights) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    // non-uniform with overwhelming probability
    const auto [mn, mx] = std::minmax_element(wa.weights.begin(), wa.weights.end());
    CHECK(*mx - *mn > 1e-6);
}

TEST_CASE("generate_profile follows the uncertainty gate") {
    const Catalog catalog = synthesize_catalog(5, 40, 6, 10.0, 200.0);

    SUBCASE("high uncertainty: coarse needs, no attribute names") {
        ProfileConfig cfg;
        cfg.seed = 9;
        cfg.uncertainty = 3;
        const Profile p = generate_profile(cfg, catalog);
        for (const auto& a : catalog.schema.attributes)
            CHECK(p.state.scenario.needs_text.find(a.name) == std::string::npos);
        CHECK(p.constraints.size() == 1);  // price only
    }

    SUBCASE("low uncertainty: at least one non-price constraint across seeds") {
        for (uint64_t seed = 0; seed < 100; ++seed) {
            ProfileConfig cfg;
            cfg.seed = seed;
            cfg.uncertainty = 1;
            const Profile p = generate_profile(cfg, catalog);
            const bool has_non_price =
                std::any_of(p.constraints.constraints.begin(), p.constraints.constraints.end(),
                            [](const Constraint& c) { return c.attribute != "price"; });
            CHECK(has_non_price);
        }
    }

    SUBCASE("every profile carries price <= budget") {
        for (int u : {1, 2, 3}) {
            ProfileConfig cfg;
            cfg.seed = 17;
            cfg.uncertainty = u;
            const Profile p = generate_profile(cfg, catalog);
            const bool has_price =
                std::any_of(p.constraints.constraints.begin(), p.constraints.constraints.end(),
                            [&](const Constraint& c) {
                                return c.attribute == "price" && c.cmp == Comparator::LessEqual &&
                                       c.bound == p.state.scenario.budget;
                            });
            CHECK(has_price);
        }
    }

    SUBCASE("deterministic in seed") {
        ProfileConfig cfg;
        cfg.seed = 123;
        cfg.uncertainty = 1;
        const Profile a = generate_profile(cfg, catalog);
        const Profile b = generate_profile(cfg, catalog);
        CHECK(a.state.scenario.budget == b.state.scenario.budget);
        CHECK(a.state.scenario.needs_text == b.state.scenario.needs_text);
        CHECK(a.weights.weights == b.weights.weights);
    }
}
