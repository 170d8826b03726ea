#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "choqmax/content.hpp"
#include "choqmax/grid.hpp"
#include "choqmax/lab.hpp"
#include "choqmax/operators.hpp"
#include "choqmax/rng.hpp"
#include "oracles.hpp"

using namespace choqmax;

namespace {

GridFunction ones(const GridSpec& spec) { return GridFunction::constant(spec, 1.0); }

TheoremParams strong_example() {
    return TheoremParams::strong_type(GridSpec(2, 4), 1.5, 0.5, 0.25, 1.0, 1.5);
}

TheoremParams weak_example() {
    return TheoremParams::weak_type(GridSpec(2, 4), 1.5, 0.5, 0.5, 1.0);
}

}  // namespace

TEST_CASE("strong box admissibility and delta") {
    TheoremParams tp = strong_example();
    CHECK(tp.kind == TheoremParams::Kind::strong);
    CHECK(tp.p == 1.0);
    CHECK(tp.delta == 1.875);  // (q/p)(d - (alpha-gamma)p)

    GridSpec spec(2, 4);
    // p must exceed d/n
    CHECK_THROWS_AS(TheoremParams::strong_type(spec, 1.5, 0.5, 0.25, 0.75, 1.5), ParamError);
    // q below p
    CHECK_THROWS_AS(TheoremParams::strong_type(spec, 1.5, 0.5, 0.25, 1.0, 0.9), ParamError);
    // gamma above alpha
    CHECK_THROWS_AS(TheoremParams::strong_type(spec, 1.5, 0.5, 0.6, 1.0, 1.5), ParamError);
    // p at or above d/alpha
    CHECK_THROWS_AS(TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 3.0, 3.0), ParamError);
    // q at or above n/gamma
    CHECK_THROWS_AS(TheoremParams::strong_type(spec, 1.5, 0.5, 0.5, 1.0, 4.0), ParamError);
    // d outside (0, n]
    CHECK_THROWS_AS(TheoremParams::strong_type(spec, 2.5, 0.5, 0.25, 1.5, 1.5), ParamError);
    // alpha outside [0, n)
    CHECK_THROWS_AS(TheoremParams::strong_type(spec, 1.5, 2.0, 0.25, 1.0, 1.5), ParamError);
    // p = q is admissible (single-exponent specializations)
    CHECK_NOTHROW(TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 1.0));
}

TEST_CASE("weak box admissibility and delta") {
    TheoremParams tp = weak_example();
    CHECK(tp.kind == TheoremParams::Kind::weak);
    CHECK(tp.p == 0.75);  // d/n
    CHECK(tp.delta == 2.0);  // q(n - alpha + gamma)

    GridSpec spec(2, 4);
    // q below d/n
    CHECK_THROWS_AS(TheoremParams::weak_type(spec, 1.5, 0.5, 0.5, 0.5), ParamError);
    // q above n/alpha
    CHECK_THROWS_AS(TheoremParams::weak_type(spec, 1.5, 0.5, 0.5, 5.0), ParamError);
    // gamma q at or above n (q = 4 = n/alpha itself is fine)
    CHECK_THROWS_AS(TheoremParams::weak_type(spec, 1.5, 0.5, 0.5, 4.0), ParamError);
    // gamma above alpha
    CHECK_THROWS_AS(TheoremParams::weak_type(spec, 1.5, 0.2, 0.3, 1.0), ParamError);

    // p = d/n must be exactly representable: d = 1 over n = 3 is not
    CHECK_THROWS_AS(TheoremParams::weak_type(GridSpec(3, 2), 1.0, 0.0, 0.0, 1.0), ParamError);
    // while d = 1.5 over n = 3 gives p = 0.5 exactly
    CHECK_NOTHROW(TheoremParams::weak_type(GridSpec(3, 2), 1.5, 0.0, 0.0, 1.0));
}

TEST_CASE("exact product comparison on denoted rationals") {
    CHECK(exact_product_equals(0.75, 2, 1.5));
    CHECK(exact_product_equals(0.5, 2, 1.0));
    CHECK(exact_product_equals(0.5, 3, 1.5));
    // non-decimal doubles still double exactly
    CHECK(exact_product_equals(0.1, 2, 0.2));
    CHECK(exact_product_equals(0.3, 2, 0.6));
    CHECK(!exact_product_equals(1.0 / 3.0, 3, 1.0));
    CHECK(!exact_product_equals(0.1 + 0.2, 1, 0.3));
    CHECK(exact_product_equals(0.0, 4, 0.0));
}

TEST_CASE("transformed weight fixes constants") {
    GridSpec spec(2, 3);
    GridFunction tw = transformed_weight(ones(spec), 0.25, 1.5, 0.75);
    for (double v : tw.values()) CHECK(v == 1.0);

    Rng rng(5);
    GridFunction w = oracle::random_function(spec, rng, 0.1, 4.0);
    GridFunction a = transformed_weight(w, 0.25, 1.5, 0.75);
    GridFunction b = transformed_weight(scale(w, 8.0), 0.25, 1.5, 0.75);
    for (std::uint64_t c = 0; c < spec.cell_count(); ++c) {
        CHECK(b.value(c) == doctest::Approx(std::pow(8.0, 0.5) * a.value(c)).epsilon(1e-12));
    }
}

TEST_CASE("indicator estimate at the root with unit weight is an identity") {
    // M_alpha of the constant 1 is 1; both quasinorm and average collapse to 1.
    GridSpec spec(2, 3);
    TheoremParams tp = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 2.0);
    CHECK(tp.delta == 2.0);
    RatioReport report = verify_indicator_estimate(root_cube(spec), ones(spec), tp);
    CHECK(report.lhs == 1.0);
    CHECK(report.rhs == 1.0);
    CHECK(report.ratio == 1.0);
    CHECK(!report.degenerate);
    CHECK(!report.violation());
}

TEST_CASE("indicator estimate degenerates gracefully on a vanishing weight") {
    GridSpec spec(2, 3);
    TheoremParams tp = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 2.0);
    RatioReport report =
        verify_indicator_estimate(DyadicCube(2, {1, 3}), GridFunction::constant(spec, 0.0), tp);
    CHECK(report.lhs == 0.0);
    CHECK(report.rhs == 0.0);
    CHECK(report.degenerate);
    CHECK(report.ratio == 0.0);
    CHECK(!report.violation());
}

TEST_CASE("strong type at p = q = 1 bounds the choquet integral") {
    // alpha = gamma = 0, p = q = 1, w = 1: delta collapses to d, both sides are
    // choquet integrals against the same content, and the maximal function
    // dominates f cellwise, so the ratio is at least one.
    GridSpec spec(2, 4);
    TheoremParams tp = TheoremParams::strong_type(spec, 1.5, 0.0, 0.0, 1.0, 1.0);
    CHECK(tp.delta == 1.5);
    ContentParams cp(1.5, ones(spec));
    Rng rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        GridFunction f = oracle::random_function(spec, rng);
        RatioReport report = verify_strong_type(f, ones(spec), tp);
        const double integral = choquet_integral(f, cp);
        CHECK(report.rhs == doctest::Approx(integral).epsilon(1e-12));
        CHECK(report.lhs >= report.rhs * (1.0 - 1e-12));
        CHECK(report.ratio >= 1.0 - 1e-12);
        CHECK(!report.violation());
    }
}

TEST_CASE("strong type right side against the exhaustive content") {
    // tiny grid so the layer-cake integral can be cross-checked with the
    // brute-force covering minimum at every breakpoint
    GridSpec spec(2, 2);
    TheoremParams tp = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 2.0);
    Rng rng(18);
    for (int rep = 0; rep < 8; ++rep) {
        GridFunction f = oracle::random_function(spec, rng, 0.0, 4.0);
        RatioReport report = verify_strong_type(f, ones(spec), tp);

        std::vector<double> thresholds;
        for (double v : f.values()) {
            if (v > 0.0) thresholds.push_back(v);
        }
        std::sort(thresholds.begin(), thresholds.end());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
        double brute = 0.0;
        double prev = 0.0;
        for (double t : thresholds) {
            std::vector<std::uint64_t> cells;
            for (std::uint64_t c = 0; c < spec.cell_count(); ++c) {
                if (f.value(c) >= t) cells.push_back(c);
            }
            brute += (t - prev) *
                     oracle::brute_content(CellSet::from_cells(spec, cells), ones(spec), tp.d);
            prev = t;
        }
        CHECK(report.rhs == doctest::Approx(brute).epsilon(1e-10));
    }
}

TEST_CASE("weak type left side matches a threshold scan") {
    TheoremParams tp = weak_example();  // delta = 2 = n, evaluable as a content
    Rng rng(19);
    for (int rep = 0; rep < 6; ++rep) {
        GridFunction f = oracle::random_function(tp.spec, rng, 0.0, 6.0);
        GridFunction w = oracle::random_function(tp.spec, rng, 0.1, 3.0);
        RatioReport report = verify_weak_type(f, w, tp);
        GridFunction mf = fractional_maximal(f, tp.alpha);
        ContentParams cp(tp.delta, w);
        CHECK(report.lhs ==
              doctest::Approx(oracle::scan_weak_quasinorm(mf, cp, tp.q)).epsilon(1e-12));
        CHECK(!report.violation());
    }
}

TEST_CASE("cube threshold bounds hold and expose the middle quantity") {
    GridSpec spec(2, 4);
    TheoremParams tp = weak_example();

    SUBCASE("single maximal cube in closed form") {
        DyadicCube cube(2, {1, 2});
        GridFunction f = GridFunction::indicator(spec, cube);
        const double t = 0.4;  // the cube qualifies, its ancestors do not
        CubeFamily family = maximal_cubes(f, tp.alpha, t);
        REQUIRE(family.cubes.size() == 1);
        CHECK(family.cubes[0] == cube);
        auto reports = verify_cube_threshold_bounds(f, family, tp, t);
        REQUIRE(reports.size() == 1);
        const double integral = std::exp2(-4.0);  // |Q| at level 2, n = 2
        const double middle = safe_pow(std::exp2(-tp.gamma * 2.0) * integral, tp.q);
        CHECK(reports[0].lhs == doctest::Approx(middle).epsilon(1e-13));
        CHECK(reports[0].ratio > 0.0);
    }

    SUBCASE("random families never break the exact inequality") {
        Rng rng(20);
        for (int rep = 0; rep < 25; ++rep) {
            GridFunction f = oracle::random_function(spec, rng, 0.0, 6.0);
            GridFunction mf = fractional_maximal(f, tp.alpha);
            if (mf.max_value() <= 0.0) continue;
            const double t = mf.max_value() * rng.uniform(0.05, 0.95);
            CubeFamily family = maximal_cubes(f, tp.alpha, t);
            CHECK_NOTHROW(verify_cube_threshold_bounds(f, family, tp, t));
        }
    }

    SUBCASE("a family from another threshold is rejected") {
        GridFunction f = GridFunction::indicator(spec, DyadicCube(2, {1, 2}));
        CubeFamily family = maximal_cubes(f, tp.alpha, 0.4);
        CHECK_THROWS_AS(verify_cube_threshold_bounds(f, family, tp, 0.01), ParamError);
    }
}

TEST_CASE("conjecture variants collapse onto the proven forms for w = 1") {
    GridSpec spec(2, 3);
    Rng rng(21);

    SUBCASE("strong pairing") {
        TheoremParams tp = TheoremParams::strong_type(spec, 1.5, 0.5, 0.25, 1.0, 1.5);
        for (int rep = 0; rep < 5; ++rep) {
            GridFunction f = oracle::random_function(spec, rng, 0.0, 4.0);
            RatioReport proven = verify_strong_type(f, ones(spec), tp);
            RatioReport conj = verify_conjecture(f, ones(spec), tp, ConjectureVariant::strong);
            CHECK(conj.lhs == doctest::Approx(proven.lhs).epsilon(1e-12));
            CHECK(conj.rhs == doctest::Approx(proven.rhs).epsilon(1e-12));
        }
    }

    SUBCASE("weak pairing") {
        TheoremParams tp = weak_example();
        for (int rep = 0; rep < 5; ++rep) {
            GridFunction f = oracle::random_function(tp.spec, rng, 0.0, 4.0);
            RatioReport proven = verify_weak_type(f, ones(tp.spec), tp);
            RatioReport conj =
                verify_conjecture(f, ones(tp.spec), tp, ConjectureVariant::weak);
            CHECK(conj.lhs == doctest::Approx(proven.lhs).epsilon(1e-12));
            CHECK(conj.rhs == doctest::Approx(proven.rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("generators are deterministic and well formed") {
    GridSpec spec(2, 3);
    for (const char* id : {"indsum", "lacunary", "rough", "a1", "const", "mixed"}) {
        GeneratorSpec gen{id, spec, 4, -1.0};
        Instance a = generate_instance(gen, 12345);
        Instance b = generate_instance(gen, 12345);
        CHECK(a.f.values() == b.f.values());
        CHECK(a.w.values() == b.w.values());
        CHECK(instance_digest(a.f, a.w) == instance_digest(b.f, b.w));
        Instance c = generate_instance(gen, 12346);
        if (std::string(id) != "const") {
            CHECK(instance_digest(a.f, a.w) != instance_digest(c.f, c.w));
        }
        CHECK(instance_digest(a.f, a.w).size() == 16);
    }

    SUBCASE("constant family") {
        GeneratorSpec gen{"const", spec, 4, -1.0};
        Instance inst = generate_instance(gen, 7);
        for (double v : inst.f.values()) CHECK(v == 1.0);
        for (double v : inst.w.values()) CHECK(v == 1.0);
    }

    SUBCASE("a single indicator cube") {
        GeneratorSpec gen{"indsum", spec, 1, -1.0};
        Instance inst = generate_instance(gen, 99);
        std::set<double> positives;
        for (double v : inst.f.values()) {
            if (v > 0.0) positives.insert(v);
        }
        REQUIRE(positives.size() == 1);  // one cube, one coefficient
        const std::uint64_t support = level_set(inst.f, 0.0).count();
        // support is a dyadic cube: a power of 4 on this grid
        bool pow4 = false;
        for (std::uint64_t s = 1; s <= spec.cell_count(); s *= 4) {
            if (support == s) pow4 = true;
        }
        CHECK(pow4);
    }

    SUBCASE("lacunary chain") {
        GeneratorSpec gen{"lacunary", spec, 4, -1.0};
        Instance inst = generate_instance(gen, 1234);
        std::set<double> positives(inst.f.values().begin(), inst.f.values().end());
        positives.erase(0.0);
        REQUIRE(positives.size() == static_cast<std::size_t>(spec.L) + 1);
        CHECK(*positives.rbegin() / *positives.begin() == std::exp2(spec.L));
    }

    SUBCASE("a1 weight peaks at its center and keeps M w / w bounded") {
        GeneratorSpec gen{"a1", spec, 4, -1.0};
        Instance inst = generate_instance(gen, 31415);
        const double wmax = inst.w.max_value();
        CHECK(wmax > 0.0);
        CHECK(inst.w.min_value() > 0.0);
        GridFunction mw = fractional_maximal(inst.w, 0.0);
        double sup = 0.0;
        for (std::uint64_t c = 0; c < spec.cell_count(); ++c) {
            sup = std::max(sup, mw.value(c) / inst.w.value(c));
        }
        CHECK(sup >= 1.0 - 1e-12);
        CHECK(sup < 1e6);
    }

    SUBCASE("unknown ids are rejected") {
        GeneratorSpec gen{"nope", spec, 4, -1.0};
        CHECK_THROWS_AS(generate_instance(gen, 1), ParamError);
    }
}

TEST_CASE("theorem tokens round trip") {
    for (TheoremId id : {TheoremId::indicator, TheoremId::strong, TheoremId::weak,
                         TheoremId::cube_bounds, TheoremId::adams, TheoremId::tang,
                         TheoremId::ov_strong, TheoremId::ov_weak, TheoremId::conj_strong,
                         TheoremId::conj_weak}) {
        const std::string token = theorem_token(id);
        CHECK(!token.empty());
        auto back = parse_theorem_token(token);
        REQUIRE(back.has_value());
        CHECK(*back == id);
    }
    CHECK(!parse_theorem_token("nope").has_value());
    CHECK(theorem_uses_weak_box(TheoremId::weak));
    CHECK(theorem_uses_weak_box(TheoremId::cube_bounds));
    CHECK(!theorem_uses_weak_box(TheoremId::strong));
    CHECK(!theorem_uses_weak_box(TheoremId::adams));
}

TEST_CASE("suites are deterministic with monotone prefixes") {
    GridSpec spec(2, 3);
    TheoremParams tp = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 2.0);
    GeneratorSpec gen{"mixed", spec, 4, -1.0};

    SuiteResult a = run_suite(TheoremId::strong, tp, gen, 20, 99);
    SuiteResult b = run_suite(TheoremId::strong, tp, gen, 20, 99);
    REQUIRE(a.reports.size() == 20);
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        CHECK(a.reports[i].lhs == b.reports[i].lhs);
        CHECK(a.reports[i].rhs == b.reports[i].rhs);
        CHECK(a.reports[i].instance_digest == b.reports[i].instance_digest);
    }
    CHECK(a.constant.sup_ratio == b.constant.sup_ratio);
    CHECK(a.constant.argmax_digest == b.constant.argmax_digest);
    CHECK(a.violations == 0);

    SuiteResult prefix = run_suite(TheoremId::strong, tp, gen, 10, 99);
    for (std::size_t i = 0; i < prefix.reports.size(); ++i) {
        CHECK(prefix.reports[i].lhs == a.reports[i].lhs);
    }
    CHECK(prefix.constant.sup_ratio <= a.constant.sup_ratio);

    // a different seed reorders instances
    SuiteResult other = run_suite(TheoremId::strong, tp, gen, 20, 100);
    CHECK(other.reports[0].instance_digest != a.reports[0].instance_digest);
}

TEST_CASE("suite reports replay exactly through run_single") {
    GridSpec spec(2, 3);
    TheoremParams tp = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 2.0);
    GeneratorSpec gen{"mixed", spec, 4, -1.0};
    SuiteResult suite = run_suite(TheoremId::strong, tp, gen, 5, 777);
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
        Instance inst = generate_instance(gen, substream_seed(777, trial));
        RatioReport single = run_single(TheoremId::strong, tp, inst);
        CHECK(single.lhs == suite.reports[trial].lhs);
        CHECK(single.rhs == suite.reports[trial].rhs);
        CHECK(single.ratio == suite.reports[trial].ratio);
        CHECK(single.instance_digest == suite.reports[trial].instance_digest);
    }
}

TEST_CASE("proven suites run clean across every theorem id") {
    GridSpec spec(2, 3);
    GeneratorSpec gen{"mixed", spec, 4, -1.0};
    TheoremParams strong = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 2.0);
    TheoremParams weak = TheoremParams::weak_type(spec, 1.5, 0.5, 0.5, 1.0);
    TheoremParams adams = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 2.0);
    TheoremParams tang = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 1.0);
    TheoremParams ovs = TheoremParams::strong_type(spec, 1.5, 0.0, 0.0, 1.0, 1.0);
    TheoremParams ovw = TheoremParams::weak_type(spec, 1.5, 0.0, 0.0, 0.75);

    struct Case {
        TheoremId id;
        TheoremParams tp;
    };
    for (const Case& c : {Case{TheoremId::indicator, strong}, Case{TheoremId::strong, strong},
                          Case{TheoremId::weak, weak}, Case{TheoremId::cube_bounds, weak},
                          Case{TheoremId::adams, adams}, Case{TheoremId::tang, tang},
                          Case{TheoremId::ov_strong, ovs}, Case{TheoremId::ov_weak, ovw}}) {
        GeneratorSpec g = gen;
        if (c.id == TheoremId::tang) g.id = "a1";
        SuiteResult result = run_suite(c.id, c.tp, g, 15, 4242);
        CHECK(result.violations == 0);
        CHECK(result.reports.size() == 15);
        for (const RatioReport& r : result.reports) {
            CHECK(std::isfinite(r.ratio));
            CHECK(r.theorem_id == theorem_token(c.id));
        }
        if (c.id == TheoremId::weak || c.id == TheoremId::ov_weak) {
            CHECK(result.families_checked > 0);
        }
        if (c.id == TheoremId::cube_bounds) {
            CHECK(result.second_bound_sup > 0.0);
        }
    }
}

TEST_CASE("specialization constraints are enforced per theorem id") {
    GridSpec spec(2, 3);
    GeneratorSpec gen{"mixed", spec, 4, -1.0};
    TheoremParams gamma_pos = TheoremParams::strong_type(spec, 1.5, 0.5, 0.25, 1.0, 1.5);
    CHECK_THROWS_AS(run_suite(TheoremId::adams, gamma_pos, gen, 1, 1), ParamError);
    CHECK_THROWS_AS(run_suite(TheoremId::tang, gamma_pos, gen, 1, 1), ParamError);
    TheoremParams alpha_pos = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 1.0);
    CHECK_THROWS_AS(run_suite(TheoremId::ov_strong, alpha_pos, gen, 1, 1), ParamError);
    TheoremParams weak = TheoremParams::weak_type(spec, 1.5, 0.5, 0.5, 1.0);
    CHECK_THROWS_AS(run_suite(TheoremId::strong, weak, gen, 1, 1), ParamError);
    CHECK_THROWS_AS(run_suite(TheoremId::weak, gamma_pos, gen, 1, 1), ParamError);
}

TEST_CASE("estimate_constant mirrors the suite") {
    GridSpec spec(2, 3);
    TheoremParams tp = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 2.0);
    GeneratorSpec gen{"rough", spec, 4, -1.0};
    SuiteResult suite = run_suite(TheoremId::strong, tp, gen, 12, 5);
    EstimatedConstant est = estimate_constant(TheoremId::strong, tp, gen, 12, 5);
    CHECK(est.sup_ratio == suite.constant.sup_ratio);
    CHECK(est.argmax_digest == suite.constant.argmax_digest);
    CHECK(est.trials == 12);
    CHECK_THROWS_AS(estimate_constant(TheoremId::strong, tp, gen, 0, 5), ParamError);
}

TEST_CASE("hill climbing only ever improves the ratio") {
    GridSpec spec(2, 3);
    TheoremParams tp = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 2.0);
    GeneratorSpec gen{"rough", spec, 4, -1.0};

    ClimbResult base = hill_climb_adversary(TheoremId::strong, tp, gen, 11, 0);
    Instance init = generate_instance(gen, substream_seed(11, 0));
    RatioReport init_report = run_single(TheoremId::strong, tp, init);
    CHECK(base.constant.sup_ratio == init_report.ratio);
    REQUIRE(base.accepted_ratios.size() == 1);
    CHECK(base.accepted_ratios[0] == init_report.ratio);

    ClimbResult climbed = hill_climb_adversary(TheoremId::strong, tp, gen, 11, 60);
    CHECK(climbed.constant.sup_ratio >= base.constant.sup_ratio);
    for (std::size_t i = 1; i < climbed.accepted_ratios.size(); ++i) {
        CHECK(climbed.accepted_ratios[i] > climbed.accepted_ratios[i - 1]);
    }
    CHECK(climbed.accepted_ratios.back() == climbed.constant.sup_ratio);
    CHECK(climbed.constant.argmax_digest ==
          instance_digest(climbed.best.f, climbed.best.w));

    ClimbResult again = hill_climb_adversary(TheoremId::strong, tp, gen, 11, 60);
    CHECK(again.constant.sup_ratio == climbed.constant.sup_ratio);
    CHECK(again.accepted_ratios == climbed.accepted_ratios);

    // the climbed instance replays to the reported ratio
    RatioReport replay = run_single(TheoremId::strong, tp, climbed.best);
    CHECK(replay.ratio == climbed.constant.sup_ratio);
}

TEST_CASE("report serialization follows the external schema") {
    GridSpec spec(2, 3);
    TheoremParams tp = TheoremParams::strong_type(spec, 1.5, 0.5, 0.0, 1.0, 2.0);
    GeneratorSpec gen{"mixed", spec, 4, -1.0};
    SuiteResult suite = run_suite(TheoremId::strong, tp, gen, 3, 8);

    for (const RatioReport& report : suite.reports) {
        const std::string line = report_to_jsonl(report);
        CHECK(line.find('\n') == std::string::npos);
        auto parsed = nlohmann::ordered_json::parse(line);
        const std::vector<std::string> keys = {"params",     "lhs",  "rhs",
                                               "ratio",      "degenerate", "seed",
                                               "instance_digest", "generator_id", "theorem_id"};
        std::size_t i = 0;
        for (auto it = parsed.begin(); it != parsed.end(); ++it, ++i) {
            REQUIRE(i < keys.size());
            CHECK(it.key() == keys[i]);
        }
        CHECK(i == keys.size());
        const std::vector<std::string> pkeys = {"n", "L", "d", "alpha", "gamma",
                                                "p", "q", "delta"};
        i = 0;
        for (auto it = parsed["params"].begin(); it != parsed["params"].end(); ++it, ++i) {
            REQUIRE(i < pkeys.size());
            CHECK(it.key() == pkeys[i]);
        }
        CHECK(parsed["theorem_id"] == "strong");
        CHECK(parsed["instance_digest"].get<std::string>().size() == 16);
        CHECK(parsed["params"]["delta"] == 2.0);
    }

    const std::string header = summary_csv_header();
    const std::string row =
        summary_csv_row("strong", tp, suite.constant, suite.violations);
    CHECK(std::count(header.begin(), header.end(), ',') ==
          std::count(row.begin(), row.end(), ','));
    CHECK(row.rfind("strong,", 0) == 0);
}

TEST_CASE("weak delta formulas agree exactly on admissible boxes") {
    // in the weak box (q/p)(d - (alpha-gamma)p) and q(n - alpha + gamma)
    // coincide iff p n = d; the constructor guarantees the identity
    for (auto [n, d, alpha, gamma, q] :
         std::vector<std::tuple<int, double, double, double, double>>{
             {2, 1.5, 0.5, 0.5, 1.0},
             {2, 1.0, 1.0, 0.0, 1.5},
             {2, 2.0, 0.0, 0.0, 1.0},
             {4, 3.0, 0.25, 0.25, 1.0},
         }) {
        GridSpec spec(n, 2);
        TheoremParams tp = TheoremParams::weak_type(spec, d, alpha, gamma, q);
        CHECK(exact_product_equals(tp.p, n, d));
        const double strong_delta = (tp.q / tp.p) * (d - (alpha - gamma) * tp.p);
        CHECK(tp.delta == doctest::Approx(strong_delta).epsilon(1e-14));
    }
}
