// Integration gate: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "brwre/coupling.hpp"
#include "brwre/criteria.hpp"
#include "brwre/estimators.hpp"
#include "brwre/model_io.hpp"
#include "brwre/presets.hpp"
#include "brwre/simulator.hpp"
#include "support/test_models.hpp"

using namespace brwre;
using namespace brwre::testing;

namespace {

struct Check {
    std::ostringstream msg;
    bool ok = true;

    template <class T, class U>
    void equal(const T& got, const U& want, const std::string& what) {
        if (!(got == want)) {
            ok = false;
            msg << "  " << what << " mismatch\n";
        }
    }
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            msg << "  " << what << "\n";
        }
    }
};

EnvironmentLaw q2(const char* a) {
    PresetParams pp;
    pp.a = Rat::parse(a);
    return make_preset("exx-q2", pp);
}

EnvironmentLaw q1(const char* alpha) {
    PresetParams pp;
    pp.alpha = Rat::parse(alpha);
    return make_preset("exx-q1", pp);
}

// ---- criteria ---------------------------------------------------------------

void c1_condition_l_exactness(Check& c) {
    ClassifyResult res = classify(q2("8/9"));
    c.require(res.verdict == Classification::TransientCertified, "verdict not transient");
    c.require(res.transience.has_value(), "no certificate");
    if (!res.transience) return;
    const auto& cert = *res.transience;
    c.require(cert.exact, "certificate not exact");
    c.require(cert.axis == 0 && cert.axis_sign == 1, "certificate direction not +e1");
    c.equal(cert.lambda_exact, Rat(1, 3), "lambda");
    c.require(cert.per_law_values_exact.size() == 2, "per-law value count");
    for (const auto& v : cert.per_law_values_exact) c.equal(v, Rat(1), "per-law value");
}

void c2_recurrence_certificates(Check& c) {
    for (const char* alpha : {"1/10", "1/2", "9/10"}) {
        RecurrenceVerdict v = recurrence_check(q1(alpha));
        c.require(v.kind == RecurrenceKind::StrictInterior,
                  std::string("alpha=") + alpha + " not StrictInterior");
    }
    c.require(recurrence_check(q2("1/2")).kind == RecurrenceKind::BoundaryWithUE,
              "a=1/2 not BoundaryWithUE");
    RecurrenceVerdict neg = recurrence_check(q2("8/9"));
    c.require(neg.kind == RecurrenceKind::Negative, "a=8/9 not Negative");
    c.require(!neg.witness_direction.empty() &&
                  phi_q_exact(q2("8/9"), neg.witness_direction).sign() < 0,
              "negative witness fails exact verification");
}

void c3_mutual_exclusion(Check& c) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        EnvironmentLaw law = random_model(seed * 7919 + 13);
        try {
            ClassifyResult res = classify(law);
            if (res.verdict == Classification::TransientCertified)
                c.require(!res.recurrence.certified_recurrent() && !res.triv2,
                          "transient model holds a recurrence certificate, seed " +
                              std::to_string(seed));
        } catch (const InconsistentCertificates&) {
            c.require(false, "inconsistent certificates at seed " + std::to_string(seed));
        }
    }
}

void c4_support_only_dependence(Check& c) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        EnvironmentLaw law = random_model(seed * 104729 + 7);
        Classification before = classify(law).verdict;
        for (std::uint64_t w = 1; w <= 2; ++w) {
            EnvironmentLaw other = reweighted(law, seed * 31 + w);
            Classification after = classify(other).verdict;
            c.require(before == after, "verdict changed under reweighting at seed " +
                                           std::to_string(seed));
        }
    }
}

void c5_subadditivity(Check& c) {
    struct Arm {
        const char* preset;
        const char* alpha;
        int horizon;
    };
    for (Arm arm : {Arm{"exx-q1", "1/2", 9}, Arm{"d1-shape", "1/2", 8}}) {
        PresetParams pp;
        pp.alpha = Rat::parse(arm.alpha);
        EnvironmentLaw law = make_preset(arm.preset, pp);
        std::size_t evaluated = 0, violations = 0, domination = 0;
        for (std::uint64_t pair = 0; pair < 50; ++pair) {
            std::uint64_t env_seed = 9000 + pair;
            std::uint64_t draw_seed = 40 + pair * 3;
            EnvironmentRealization env(law, env_seed);
            CoupledFamily probe = coupled_run(env, draw_seed, {}, arm.horizon);
            std::vector<Site> starts;
            for (auto& [site, t] : probe.t_from_origin)
                if (t >= 1 && t <= arm.horizon / 2 && starts.size() < 6)
                    starts.push_back(site);
            CoupledFamily family = coupled_run(env, draw_seed, starts, arm.horizon);
            std::vector<std::pair<Site, Site>> triples;
            for (const auto& r : family.runs) {
                int added = 0;
                for (auto& [site, t] : r.t) {
                    if (!family.t0(site)) continue;
                    triples.emplace_back(r.z, site);
                    if (++added >= 4) break;
                }
                domination += r.domination_violations.size();
            }
            SubadditivityReport rep = subadditivity_audit(family, triples);
            evaluated += rep.evaluated;
            violations += rep.violations.size();
        }
        c.require(evaluated >= 1000, std::string(arm.preset) + ": only " +
                                         std::to_string(evaluated) + " triples evaluated");
        c.require(violations == 0,
                  std::string(arm.preset) + ": subadditivity violations found");
        c.require(domination == 0, std::string(arm.preset) + ": domination violations found");
    }
}

void c6_shape_d1(Check& c) {
    PresetParams pp;
    pp.alpha = Rat(1, 2);
    EnvironmentLaw law = make_preset("d1-shape", pp);
    McConfig cfg;
    cfg.env_seed = 77;
    cfg.walk_seed = 78;
    ShapeEstimate est = estimate_shape(law, 200, 20, 2, cfg);
    for (size_t j = 0; j < est.directions.size(); ++j) {
        c.require(est.b.mean[j] >= 1.4 && est.b.mean[j] <= 1.6,
                  "radius " + std::to_string(est.b.mean[j]) + " outside [1.4, 1.6]");
    }
}

void c7_flat_edge(Check& c) {
    const int n = 100;
    for (const char* alpha : {"1/4", "3/4"}) {
        PresetParams pp;
        pp.alpha = Rat::parse(alpha);
        EnvironmentLaw law = make_preset("flat-edge", pp);
        for (std::uint64_t rep = 0; rep < 5; ++rep) {
            EnvironmentRealization env(law, 300 + rep);
            SimConfig cfg;
            cfg.horizon = n;
            cfg.walk_seed = 400 + rep;
            cfg.track_sets = true;
            RunResult rr = run(env, cfg, Site{});
            const auto& b = rr.sets[static_cast<size_t>(n)].b;
            long inside = 0;
            bool bounded = true;
            for (const auto& s : b) {
                if (s[0] >= 0 && s[1] >= 0) {
                    ++inside;
                    if (s[0] + s[1] > n) bounded = false;
                }
            }
            c.require(bounded, "visited site beyond the simplex");
            c.require(inside == static_cast<long>(n + 1) * (n + 2) / 2,
                      "quadrant count " + std::to_string(inside) + " not the full simplex");
        }
    }
}

void c8_supermartingale(Check& c) {
    McConfig cfg;
    cfg.replicas = 100;
    cfg.env_seed = 500;
    cfg.walk_seed = 501;
    SupermartingaleReport rep =
        supermartingale_audit(q2("8/9"), {1.0, 0.0}, 1.0 / 3.0, Site{}, 100, cfg);
    c.require(rep.checks == 100 * 101, "check count");
    c.require(rep.violations == 0,
              std::to_string(rep.violations) + " per-configuration violations");
}

void c9_seed_audit_formula(Check& c) {
    for (const char* rho_text : {"9/10", "99/100"}) {
        Rat rho = Rat::parse(rho_text);
        StepSet ss = steps_1d_lazy();
        SiteLaw base = site_law({{ovec({{0, 1}}), Rat(1, 2)}, {ovec({{2, 1}}), Rat(1, 2)}});
        EnvironmentLaw law = build_law(ss, {base}, {Rat(1)});
        EnvironmentPatch patch;
        patch.sites[make_site({0})] =
            site_law({{ovec({{1, 2}}), Rat(1, 2)}, {ovec({{1, 1}}), Rat(1, 2)}});
        patch.sites[make_site({1})] =
            site_law({{ovec({{0, 1}}), rho}, {ovec({{2, 1}}), Rat(1) - rho}});
        patch.sites[make_site({-1})] =
            site_law({{ovec({{2, 1}}), rho}, {ovec({{0, 1}}), Rat(1) - rho}});
        McConfig cfg;
        cfg.env_seed = 600;
        cfg.walk_seed = 601;
        SeedAudit audit = seed_audit(law, patch, {Site{}}, 20000, cfg);
        c.equal(audit.epsilon_exact, Rat(1, 2), "epsilon");
        double r = audit.rho_hat, eps = audit.epsilon;
        c.require(std::abs(audit.p1 - ((1 - eps) * r + 2 * eps * r * (1 - r))) <= 1e-12,
                  "p1 formula");
        c.require(std::abs(audit.p2 - eps * r * r) <= 1e-12, "p2 formula");
        c.require(std::abs(audit.margin - (audit.p1 + 2 * audit.p2 - 1)) <= 1e-12,
                  "margin formula");
        c.require(std::abs(r - rho.to_double()) < 0.02,
                  "estimated rate " + std::to_string(r) + " far from forced " + rho_text);
    }
}

void c10_tail_order(Check& c) {
    // d=1 trap family, quenched, with a planted funnel left of the origin.
    PresetParams pq;
    pq.p = Rat(1, 100);
    EnvironmentLaw trap_law = make_preset("qdecay", pq);
    EnvironmentPatch trap;
    const int k = 8;
    for (int x = -2 * k; x <= -k; ++x) trap.sites[make_site({x})] = trap_law.support[0];
    for (int x = -k + 1; x <= 0; ++x) trap.sites[make_site({x})] = trap_law.support[1];

    McConfig trap_cfg;
    trap_cfg.replicas = 300;
    trap_cfg.quenched = true;
    trap_cfg.env_seed = 700;
    trap_cfg.walk_seed = 701;
    std::vector<int> grid = {1, 3, 7, 15, 31, 63, 127, 255};
    TailCurve trap_curve = estimate_tail(trap_law, make_site({1}), grid, trap_cfg, trap);
    TailOrderFit trap_fit = fit_tail_order(trap_curve, 1);

    McConfig rec_cfg;
    rec_cfg.replicas = 600;
    rec_cfg.env_seed = 800;
    rec_cfg.walk_seed = 801;
    TailCurve rec_curve = estimate_tail(q1("1/2"), make_site({1, 0}),
                                        {1, 3, 7, 15, 31, 63}, rec_cfg);
    TailOrderFit rec_fit = fit_tail_order(rec_curve, 2);

    c.require(trap_fit.kappa_hat < rec_fit.kappa_hat,
              "trap exponent " + std::to_string(trap_fit.kappa_hat) +
                  " not below recurrent exponent " + std::to_string(rec_fit.kappa_hat));
    c.require(trap_fit.heavy_tail, "trap model not flagged heavy-tail (kappa " +
                                       std::to_string(trap_fit.kappa_hat) + ")");
    c.require(!rec_fit.heavy_tail, "recurrent model wrongly flagged heavy-tail (kappa " +
                                       std::to_string(rec_fit.kappa_hat) + ")");
}

void c11_simulator_integrity(Check& c) {
    struct PresetCase {
        const char* name;
        PresetParams params;
    };
    std::vector<PresetCase> presets;
    presets.push_back({"exx-q1", {}});
    presets.push_back({"exx-q2", {}});
    {
        PresetParams pp;
        pp.a = Rat(8, 9);
        presets.push_back({"exx-q2", pp});
    }
    presets.push_back({"qdecay", {}});
    presets.push_back({"infexp", {}});
    presets.push_back({"driftmix", {}});
    presets.push_back({"d1-shape", {}});
    presets.push_back({"flat-edge", {}});

    auto as_u128 = [](const std::string& s) {
        unsigned __int128 v = 0;
        for (char ch : s) v = v * 10 + static_cast<unsigned>(ch - '0');
        return v;
    };

    for (const auto& pc : presets) {
        EnvironmentLaw law = make_preset(pc.name, pc.params);
        EnvironmentRealization env(law, 900);
        SimConfig cfg;
        cfg.horizon = 100;
        cfg.walk_seed = 901;
        cfg.track_sets = true;
        cfg.tilde_window = 16;
        RunResult a = run(env, cfg, Site{});
        RunResult b = run(env, cfg, Site{});

        int l0 = law.l0();
        unsigned __int128 prev = 0;
        for (size_t n = 0; n < a.records.size(); ++n) {
            if (!a.records[n].saturated) {
                unsigned __int128 total = as_u128(a.records[n].total_count);
                c.require(total >= prev, std::string(pc.name) + ": total decreased");
                prev = total;
            }
            for (const auto& site : a.sets[n].bar_b)
                c.require(linf_norm(site) <= l0 * static_cast<int>(n),
                          std::string(pc.name) + ": support bound violated");
            c.require(std::includes(a.sets[n].bar_b.begin(), a.sets[n].bar_b.end(),
                                    a.sets[n].tilde_b.begin(), a.sets[n].tilde_b.end()),
                      std::string(pc.name) + ": tilde not inside bar");
            c.require(std::includes(a.sets[n].b.begin(), a.sets[n].b.end(),
                                    a.sets[n].bar_b.begin(), a.sets[n].bar_b.end()),
                      std::string(pc.name) + ": bar not inside visited");
            c.require(a.records[n].total_count == b.records[n].total_count &&
                          a.sets[n].bar_b == b.sets[n].bar_b,
                      std::string(pc.name) + ": run not reproducible");
        }
        c.require(a.final_state.counts == b.final_state.counts,
                  std::string(pc.name) + ": final state not reproducible");
    }
}

void c12_residual_unbiasedness(Check& c) {
    StepSet ss = steps_1d_lazy();
    SiteLaw law = site_law({{ovec({{0, 1}}), Rat(1, 2)},
                            {ovec({{1, 1}}), Rat(1, 3)},
                            {ovec({{2, 1}}), Rat(1, 6)}});
    EnvironmentLaw model = build_law(ss, {law}, {Rat(1)});
    const std::uint64_t k = 100000;
    const int reps = 10000;
    double sums[3] = {0, 0, 0}, sq[3] = {0, 0, 0};
    for (int i = 0; i < reps; ++i) {
        SimConfig cfg;
        cfg.mode = SimMode::residual;
        cfg.walk_seed = 1000 + static_cast<std::uint64_t>(i);
        auto parts = split_count(k, model.support[0], cfg, Site{}, 0);
        c.require(parts[0] + parts[1] + parts[2] == k, "total not preserved");
        for (int j = 0; j < 3; ++j) {
            sums[j] += static_cast<double>(parts[j]);
            sq[j] += static_cast<double>(parts[j]) * static_cast<double>(parts[j]);
        }
    }
    double expected[3] = {k / 2.0, k / 3.0, k / 6.0};
    for (int j = 0; j < 3; ++j) {
        double mean = sums[j] / reps;
        double var = std::max(sq[j] / reps - mean * mean, 1e-12);
        double se = std::sqrt(var / reps);
        c.require(std::abs(mean - expected[j]) < 4 * se + 1e-9,
                  "component mean off by more than 4 sigma");
    }
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<void(Check&)> fn;
    };
    std::vector<Criterion> criteria = {
        {1, "Condition L certificate is exact on the worked family", 1, c1_condition_l_exactness},
        {2, "recurrence certificates decided in exact planar geometry", 3, c2_recurrence_certificates},
        {3, "no model earns both certificates (200 random models)", 60, c3_mutual_exclusion},
        {4, "classification is invariant under reweighting (50 models)", 120, c4_support_only_dependence},
        {5, "coupled hitting times are subadditive and dominated", 300, c5_subadditivity},
        {6, "one-dimensional shape radius matches the mixture speed", 120, c6_shape_d1},
        {7, "flat-edge visited set equals the simplex exactly", 120, c7_flat_edge},
        {8, "supermartingale inequality holds at every configuration", 120, c8_supermartingale},
        {9, "seed-audit outputs follow the closed-form distribution", 60, c9_seed_audit_formula},
        {10, "planted trap is flagged with the smaller tail exponent", 600, c10_tail_order},
        {11, "simulator integrity across presets at horizon 100", 120, c11_simulator_integrity},
        {12, "residual splits are unbiased with exact totals", 60, c12_residual_unbiasedness},
    };

    bool all_ok = true;
    for (auto& crit : criteria) {
        Check check;
        auto start = std::chrono::steady_clock::now();
        try {
            crit.fn(check);
        } catch (const std::exception& e) {
            check.ok = false;
            check.msg << "  exception: " << e.what() << "\n";
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > crit.budget_seconds) {
            check.ok = false;
            check.msg << "  exceeded " << crit.budget_seconds << " s budget\n";
        }
        std::cout << (check.ok ? "[PASS]" : "[FAIL]") << " criterion " << crit.id << ": "
                  << crit.name << " (" << elapsed << " s)\n"
                  << check.msg.str();
        all_ok = all_ok && check.ok;
    }
    std::cout << (all_ok ? "acceptance: all criteria passed"
                         : "acceptance: FAILURES present")
              << "\n";
    return all_ok ? 0 : 1;
}
