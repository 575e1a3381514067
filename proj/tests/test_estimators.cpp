#include <doctest.h>

#include <cmath>

#include "brwre/estimators.hpp"
#include "brwre/presets.hpp"
#include "support/test_models.hpp"

using namespace brwre;
using namespace brwre::testing;

TEST_CASE("tail curves are monotone with sane confidence bounds") {
    PresetParams pp;
    pp.alpha = Rat(1, 2);
    EnvironmentLaw law = make_preset("exx-q1", pp);
    McConfig cfg;
    cfg.replicas = 400;
    TailCurve curve = estimate_tail(law, make_site({1, 0}), {1, 3, 7, 15, 31, 63}, cfg);
    for (size_t i = 1; i < curve.survival.size(); ++i)
        CHECK(curve.survival[i] <= curve.survival[i - 1]);
    for (size_t i = 0; i < curve.survival.size(); ++i) {
        CHECK(curve.lo[i] <= curve.survival[i]);
        CHECK(curve.survival[i] <= curve.hi[i]);
    }
    // Recurrence drives survival to zero over the grid.
    CHECK(curve.survival.back() < 0.02);
    CHECK(curve.censored_fraction < 0.02);
}

TEST_CASE("hitting the start site is immediate") {
    EnvironmentLaw law = make_preset("exx-q1");
    McConfig cfg;
    cfg.replicas = 50;
    TailCurve curve = estimate_tail(law, Site{}, {1, 2, 4}, cfg);
    for (double s : curve.survival) CHECK(s == 0.0);
}

TEST_CASE("censored means detect divergence and plateaus") {
    SUBCASE("deterministic drift to the neighbour is constant") {
        EnvironmentLaw law = deterministic_drift_1d();
        McConfig cfg;
        cfg.replicas = 40;
        cfg.mode = SimMode::exact;
        MeanHittingLadder ladder =
            estimate_mean_hitting(law, make_site({1}), {1, 4, 16, 64}, cfg);
        for (double m : ladder.censored_mean) CHECK(m == doctest::Approx(1.0));
        CHECK(ladder.growth_exponent == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("trap family keeps rising through the ladder") {
        PresetParams pp;
        pp.p = Rat(1, 10);
        pp.alpha1 = Rat(9, 20);
        pp.alpha2 = Rat(9, 20);
        EnvironmentLaw law = make_preset("infexp", pp);
        McConfig cfg;
        cfg.replicas = 400;
        MeanHittingLadder ladder =
            estimate_mean_hitting(law, make_site({1}), {8, 32, 128, 512}, cfg);
        CHECK(ladder.censored_mean[3] > ladder.censored_mean[2]);
        CHECK(ladder.censored_mean[2] > ladder.censored_mean[1]);
        CHECK(ladder.growth_exponent > 0.1);
    }
    SUBCASE("recurrent planar family plateaus within noise") {
        PresetParams pp;
        pp.alpha = Rat(1, 2);
        EnvironmentLaw law = make_preset("exx-q1", pp);
        McConfig cfg;
        cfg.replicas = 600;
        MeanHittingLadder ladder =
            estimate_mean_hitting(law, make_site({1, 0}), {16, 64, 256}, cfg);
        double gap = std::abs(ladder.censored_mean[2] - ladder.censored_mean[1]);
        CHECK(gap <= 4 * (ladder.std_error[2] + ladder.std_error[1]) + 1e-9);
    }
}

TEST_CASE("shape radii recover the deterministic spreading speed") {
    PresetParams pp;
    pp.alpha = Rat(1, 2);
    EnvironmentLaw law = make_preset("d1-shape", pp);
    McConfig cfg;
    cfg.env_seed = 10;
    ShapeEstimate est = estimate_shape(law, 120, 12, 2, cfg);
    REQUIRE(est.directions.size() == 2);
    for (size_t j = 0; j < est.directions.size(); ++j) {
        CHECK(est.b.mean[j] > 1.3);
        CHECK(est.b.mean[j] < 1.7);
        CHECK(est.b.mean[j] <= law.l0());
    }
}

TEST_CASE("flat-edge radii and variant nesting") {
    EnvironmentLaw law = make_preset("flat-edge");
    McConfig cfg;
    cfg.env_seed = 4;
    SUBCASE("axis radius is exactly one") {
        ShapeEstimate est = estimate_shape(law, 50, 4, 8, cfg);
        // First probe direction is +e1.
        CHECK(est.directions[0][0] == doctest::Approx(1.0));
        CHECK(est.b.mean[0] == doctest::Approx(1.0));
        CHECK(est.b.sd[0] == doctest::Approx(0.0));
        for (size_t j = 0; j < est.directions.size(); ++j) CHECK(est.b.mean[j] <= law.l0());
    }
    SUBCASE("occupied variants need the aperiodicity condition") {
        ShapeVariants variants;
        variants.bar_b = true;
        CHECK_THROWS_AS(estimate_shape(law, 20, 2, 4, cfg, variants), ConditionAMissing);
    }
    SUBCASE("time zero degenerates to the start cell") {
        ShapeEstimate est = estimate_shape(law, 0, 2, 4, cfg);
        for (double m : est.b.mean) CHECK(m == doctest::Approx(0.0));
    }
}

TEST_CASE("occupied-set variants nest direction by direction") {
    PresetParams pp;
    pp.alpha = Rat(1, 2);
    EnvironmentLaw law = make_preset("d1-shape", pp);
    McConfig cfg;
    ShapeVariants variants;
    variants.bar_b = true;
    variants.tilde_b = true;
    variants.tilde_window = 8;
    ShapeEstimate est = estimate_shape(law, 60, 6, 2, cfg, variants);
    REQUIRE(est.bar_b.has_value());
    REQUIRE(est.tilde_b.has_value());
    for (size_t j = 0; j < est.directions.size(); ++j) {
        CHECK(est.tilde_b->mean[j] <= est.bar_b->mean[j] + 1e-12);
        CHECK(est.bar_b->mean[j] <= est.b.mean[j] + 1e-12);
    }
}

TEST_CASE("supermartingale audit validates and checks exactly") {
    PresetParams pp;
    pp.a = Rat(8, 9);
    EnvironmentLaw law = make_preset("exx-q2", pp);
    McConfig cfg;
    cfg.replicas = 20;

    SUBCASE("valid certificate passes every configuration") {
        SupermartingaleReport rep =
            supermartingale_audit(law, {1.0, 0.0}, 1.0 / 3.0, Site{}, 50, cfg);
        CHECK(rep.ok());
        CHECK(rep.checks == 20 * 51);
        // The mean supermartingale cannot drift upward.
        CHECK(rep.mean_f.back() <= rep.mean_f.front() + 0.05);
    }
    SUBCASE("lambda of one is rejected") {
        CHECK_THROWS_AS(supermartingale_audit(law, {1.0, 0.0}, 1.0, Site{}, 10, cfg),
                        CertificateInvalid);
    }
    SUBCASE("a wrong lambda is rejected") {
        CHECK_THROWS_AS(supermartingale_audit(law, {1.0, 0.0}, 3.0, Site{}, 10, cfg),
                        CertificateInvalid);
    }
    SUBCASE("single-particle drifted walk satisfies the same algebra") {
        EnvironmentLaw drift = deterministic_drift_1d();
        McConfig dcfg;
        dcfg.replicas = 5;
        dcfg.mode = SimMode::exact;
        SupermartingaleReport rep =
            supermartingale_audit(drift, {1.0}, 0.5, Site{}, 30, dcfg);
        CHECK(rep.ok());
    }
}

namespace {

// Patch on {-1, 0, 1}: the center branches in place with mass eps, the
// flanks send their single child to the center with probability rho and
// outward (to be discarded) otherwise.
struct ForcedSeed {
    EnvironmentLaw law;
    EnvironmentPatch patch;
    std::vector<Site> w;
};

ForcedSeed forced_seed(const Rat& rho, const Rat& eps) {
    StepSet ss = steps_1d_lazy();
    SiteLaw base = site_law({{ovec({{0, 1}}), Rat(1, 2)}, {ovec({{2, 1}}), Rat(1, 2)}});
    EnvironmentLaw law = build_law(ss, {base}, {Rat(1)});

    SiteLaw center = site_law({{ovec({{1, 2}}), eps}, {ovec({{1, 1}}), Rat(1) - eps}});
    SiteLaw from_right = site_law({{ovec({{0, 1}}), rho}, {ovec({{2, 1}}), Rat(1) - rho}});
    SiteLaw from_left = site_law({{ovec({{2, 1}}), rho}, {ovec({{0, 1}}), Rat(1) - rho}});

    ForcedSeed fs{std::move(law), {}, {Site{}}};
    fs.patch.sites[make_site({0})] = center;
    fs.patch.sites[make_site({1})] = from_right;
    fs.patch.sites[make_site({-1})] = from_left;
    return fs;
}

} // namespace

TEST_CASE("seed audits recover forced hit rates and exact branching mass") {
    SUBCASE("certain return gives margin epsilon") {
        ForcedSeed fs = forced_seed(Rat(1), Rat(1));
        McConfig cfg;
        SeedAudit audit = seed_audit(fs.law, fs.patch, fs.w, 500, cfg);
        CHECK(audit.rho_hat == doctest::Approx(1.0));
        CHECK(audit.epsilon_exact == Rat(1));
        CHECK(audit.margin == doctest::Approx(1.0)); // margin = eps here
    }
    SUBCASE("no branching can never be supercritical") {
        ForcedSeed fs = forced_seed(Rat(9, 10), Rat(0));
        McConfig cfg;
        SeedAudit audit = seed_audit(fs.law, fs.patch, fs.w, 500, cfg);
        CHECK(audit.epsilon == 0.0);
        CHECK(audit.margin == doctest::Approx(audit.rho_hat - 1.0).epsilon(1e-12));
        CHECK(audit.margin <= 0.0);
    }
    SUBCASE("derived distribution follows the closed form") {
        ForcedSeed fs = forced_seed(Rat(9, 10), Rat(1, 2));
        McConfig cfg;
        SeedAudit audit = seed_audit(fs.law, fs.patch, fs.w, 2000, cfg);
        double rho = audit.rho_hat, eps = audit.epsilon;
        CHECK(audit.p1 ==
              doctest::Approx((1 - eps) * rho + 2 * eps * rho * (1 - rho)).epsilon(1e-12));
        CHECK(audit.p2 == doctest::Approx(eps * rho * rho).epsilon(1e-12));
        CHECK(audit.margin == doctest::Approx(audit.p1 + 2 * audit.p2 - 1).epsilon(1e-12));
        CHECK(std::abs(rho - 0.9) < 0.05);
    }
    SUBCASE("a patch missing step neighbours is rejected") {
        ForcedSeed fs = forced_seed(Rat(9, 10), Rat(1, 2));
        fs.patch.sites.erase(make_site({1}));
        McConfig cfg;
        CHECK_THROWS_AS(seed_audit(fs.law, fs.patch, fs.w, 10, cfg), PatchTooSmall);
    }
}

TEST_CASE("branching ring around a core is supercritical") {
    // Plant the strongly branching law of the planar recurrent family on a
    // box; returns to the inner box are then nearly certain.
    EnvironmentLaw law = make_preset("exx-q1");
    EnvironmentPatch patch;
    for (int x = -4; x <= 4; ++x)
        for (int y = -4; y <= 4; ++y)
            patch.sites[make_site({x, y})] = law.support[1];
    std::vector<Site> w;
    for (int x = -3; x <= 3; ++x)
        for (int y = -3; y <= 3; ++y) w.push_back(make_site({x, y}));
    // From the outer fringe the lone-child atom (mass 1/8) can step out of
    // the patch and die, so the worst-site return rate sits near 7/8.
    McConfig cfg;
    SeedAudit audit = seed_audit(law, patch, w, 200, cfg);
    CHECK(audit.rho_hat > 0.78);
    CHECK(audit.epsilon_exact == Rat(7, 8));
    CHECK(audit.margin > 0.4);
}

TEST_CASE("tail order fits recover synthetic exponents") {
    auto synthetic = [](double kappa, double c) {
        TailCurve curve;
        for (int n = 2; n <= 4096; n *= 2) {
            curve.grid.push_back(n);
            double s = std::exp(-c * std::pow(static_cast<double>(n), kappa));
            curve.survival.push_back(s);
            curve.lo.push_back(s);
            curve.hi.push_back(s);
        }
        curve.replicas = 1000;
        return curve;
    };
    TailOrderFit heavy = fit_tail_order(synthetic(0.2, 0.05), 1);
    CHECK(heavy.kappa_hat == doctest::Approx(0.2).epsilon(0.05));
    CHECK(heavy.heavy_tail);
    TailOrderFit light = fit_tail_order(synthetic(1.0, 0.05), 1);
    CHECK(light.kappa_hat == doctest::Approx(1.0).epsilon(0.05));
    CHECK_FALSE(light.heavy_tail);
    CHECK(light.r2_kappa > 0.99);
}
