#include <doctest.h>

#include <cmath>

#include "brwre/environment.hpp"
#include "brwre/presets.hpp"
#include "support/test_models.hpp"

using namespace brwre;
using namespace brwre::testing;

TEST_CASE("omega_at is a pure function of (law, seed, site)") {
    EnvironmentLaw law = make_preset("exx-q1");
    EnvironmentRealization env(law, 42);
    EnvironmentRealization env2(law, 42);
    for (int x = -20; x <= 20; ++x) {
        for (int y = -20; y <= 20; ++y) {
            Site s = make_site({x, y});
            CHECK(env.omega_at(s) == env.omega_at(s));
            CHECK(env.omega_at(s) == env2.omega_at(s));
        }
    }
}

TEST_CASE("degenerate support always draws index zero") {
    EnvironmentLaw law = deterministic_drift_1d();
    EnvironmentRealization env(law, 7);
    for (int x = -100; x <= 100; ++x) CHECK(env.omega_at(make_site({x})) == 0);
}

TEST_CASE("marginal frequencies match the weights within 3 sigma") {
    PresetParams pp;
    pp.alpha = Rat(1, 4);
    EnvironmentLaw law = make_preset("exx-q1", pp);
    EnvironmentRealization env(law, 2024);
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        Site s = make_site({i % 400 - 200, i / 400 - 125});
        if (env.omega_at(s) == 0) ++hits;
    }
    double p = 0.25;
    double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(hits) / n - p) < 3 * sigma);
}

TEST_CASE("distinct sites behave independently across seeds") {
    PresetParams pp;
    pp.alpha = Rat(1, 3);
    EnvironmentLaw law = make_preset("exx-q1", pp);
    Site x = make_site({0, 0});
    Site y = make_site({1, 0});
    const int n = 40000;
    int joint[2][2] = {};
    for (int i = 0; i < n; ++i) {
        EnvironmentRealization env(law, 5000 + static_cast<std::uint64_t>(i));
        ++joint[env.omega_at(x)][env.omega_at(y)];
    }
    double p0 = 1.0 / 3.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            double expected = (a == 0 ? p0 : 1 - p0) * (b == 0 ? p0 : 1 - p0);
            double sigma = std::sqrt(expected * (1 - expected) / n);
            CHECK(std::abs(static_cast<double>(joint[a][b]) / n - expected) < 4 * sigma);
        }
    }
}

TEST_CASE("patches override the draw only on their sites") {
    EnvironmentLaw law = make_preset("qdecay");
    EnvironmentRealization base(law, 99);

    SUBCASE("empty patch is the identity") {
        EnvironmentRealization patched = base.with_patch(EnvironmentPatch{});
        for (int x = -30; x <= 30; ++x) {
            Site s = make_site({x});
            CHECK(&patched.law_at(s) != nullptr);
            CHECK(patched.omega_at(s) == base.omega_at(s));
        }
    }

    SUBCASE("trap patch returns the planted laws") {
        // Opposite drifts funnelling into a single site, as in the planted
        // trap experiments.
        EnvironmentPatch patch;
        int k = 5;
        for (int x = -2 * k; x <= -k; ++x) patch.sites[make_site({x})] = law.support[0];
        for (int x = -k + 1; x <= 0; ++x) patch.sites[make_site({x})] = law.support[1];
        EnvironmentRealization patched = base.with_patch(patch);
        for (int x = -2 * k; x <= 0; ++x) {
            const SiteLaw& at = patched.law_at(make_site({x}));
            const SiteLaw& want = x <= -k ? law.support[0] : law.support[1];
            REQUIRE(at.atoms.size() == want.atoms.size());
            CHECK(at.atoms[0].probability == want.atoms[0].probability);
        }
        // Outside the patch the base draw still rules.
        CHECK_FALSE(patched.patched_at(make_site({1})));
        CHECK(patched.omega_at(make_site({1})) == base.omega_at(make_site({1})));
    }

    SUBCASE("single-site override") {
        EnvironmentPatch patch;
        patch.sites[make_site({3})] = law.support[2];
        EnvironmentRealization patched = base.with_patch(patch);
        CHECK(patched.patched_at(make_site({3})));
        for (int x = -10; x <= 10; ++x)
            if (x != 3) CHECK_FALSE(patched.patched_at(make_site({x})));
    }

    SUBCASE("patch laws are validated") {
        EnvironmentPatch bad;
        SiteLaw broken = site_law({{ovec({{0, 1}}), Rat(1, 2)}});
        bad.sites[make_site({0})] = broken;
        CHECK_THROWS_AS(base.with_patch(bad), ValidationError);
    }
}
