#include "brwre/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

namespace brwre {

namespace {

// Runs fn(replica_index) across a small thread pool; outputs land in
// preallocated slots so the aggregation is deterministic. The first worker
// exception, if any, is rethrown after the join.
void parallel_replicas(std::size_t replicas, int jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || replicas < 2) {
        for (std::size_t i = 0; i < replicas; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::size_t chunk = (replicas + static_cast<std::size_t>(jobs) - 1) / static_cast<std::size_t>(jobs);
    for (int t = 0; t < jobs; ++t) {
        std::size_t lo = static_cast<std::size_t>(t) * chunk;
        std::size_t hi = std::min(replicas, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &failure, &failure_mutex] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t replica_seed(std::uint64_t base, std::size_t replica, std::uint64_t salt) {
    return mix64(mix64(base ^ salt) + replica);
}

double log_binom_cdf(std::size_t k, std::size_t n, double p) {
    // log P[Bin(n,p) <= k], direct stable summation in log space.
    if (p <= 0) return 0.0;
    if (p >= 1) return k >= n ? 0.0 : -HUGE_VAL;
    double log_p = std::log(p), log_q = std::log1p(-p);
    double max_term = -HUGE_VAL;
    std::vector<double> terms;
    terms.reserve(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        double lt = std::lgamma(static_cast<double>(n) + 1) -
                    std::lgamma(static_cast<double>(i) + 1) -
                    std::lgamma(static_cast<double>(n - i) + 1) +
                    static_cast<double>(i) * log_p + static_cast<double>(n - i) * log_q;
        terms.push_back(lt);
        max_term = std::max(max_term, lt);
    }
    double acc = 0;
    for (double lt : terms) acc += std::exp(lt - max_term);
    return max_term + std::log(acc);
}

// Clopper-Pearson 95% interval by bisection on the binomial tails.
std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n) {
    const double alpha = 0.05;
    double lo = 0.0, hi = 1.0;
    if (k > 0) {
        // Largest p with P[Bin(n,p) >= k] <= alpha/2.
        double a = 0.0, b = static_cast<double>(k) / static_cast<double>(n);
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (a + b);
            double log_tail_below = log_binom_cdf(k - 1, n, mid);
            double tail_at_least = -std::expm1(log_tail_below); // 1 - cdf(k-1)
            if (tail_at_least > alpha / 2)
                b = mid;
            else
                a = mid;
        }
        lo = a;
    }
    if (k < n) {
        double a = static_cast<double>(k) / static_cast<double>(n), b = 1.0;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (a + b);
            double cdf = std::exp(log_binom_cdf(k, n, mid));
            if (cdf < alpha / 2)
                b = mid;
            else
                a = mid;
        }
        hi = b;
    }
    return {lo, hi};
}

SimConfig sim_config_for(const McConfig& cfg, int horizon, std::uint64_t walk_seed) {
    SimConfig sc;
    sc.mode = cfg.mode;
    sc.residual_threshold = cfg.residual_threshold;
    sc.horizon = horizon;
    sc.walk_seed = walk_seed;
    return sc;
}

struct HitSample {
    std::optional<int> t;
    bool saturated = false;
};

std::vector<HitSample> sample_hits(const EnvironmentLaw& law, const Site& target, int horizon,
                                   const McConfig& cfg,
                                   const std::optional<EnvironmentPatch>& patch) {
    std::vector<HitSample> out(cfg.replicas);
    parallel_replicas(cfg.replicas, cfg.jobs, [&](std::size_t i) {
        std::uint64_t es = cfg.quenched ? cfg.env_seed : replica_seed(cfg.env_seed, i, 0xE5ULL);
        EnvironmentRealization env(law, es);
        if (patch) env = env.with_patch(*patch);
        SimConfig sc = sim_config_for(cfg, horizon, replica_seed(cfg.walk_seed, i, 0x3AULL));
        // first_hit needs no sets; saturation is tracked through a short run
        // only when the hit is censored.
        PopulationState state = PopulationState::initial(Site{});
        for (int n = 0; n <= horizon; ++n) {
            auto it = state.counts.find(target);
            if (it != state.counts.end() && it->second > 0) {
                out[i].t = n;
                break;
            }
            if (n < horizon) state = step(state, env, sc);
        }
        out[i].saturated = state.saturated;
    });
    return out;
}

} // namespace

TailCurve estimate_tail(const EnvironmentLaw& law, const Site& target,
                        const std::vector<int>& grid, const McConfig& cfg,
                        const std::optional<EnvironmentPatch>& patch) {
    if (grid.empty() || cfg.replicas == 0)
        throw std::invalid_argument("tail estimation needs a grid and replicas");
    TailCurve curve;
    curve.target = target;
    curve.grid = grid;
    curve.replicas = cfg.replicas;
    curve.quenched = cfg.quenched;
    curve.env_seed = cfg.env_seed;

    int horizon = grid.back();
    std::vector<HitSample> hits = sample_hits(law, target, horizon, cfg, patch);

    std::size_t censored = 0;
    for (const auto& h : hits) {
        if (!h.t) ++censored;
        curve.any_saturated = curve.any_saturated || h.saturated;
    }
    curve.censored_fraction =
        static_cast<double>(censored) / static_cast<double>(cfg.replicas);

    for (int n : grid) {
        std::size_t surviving = 0;
        for (const auto& h : hits)
            if (!h.t || *h.t > n) ++surviving;
        auto [lo, hi] = clopper_pearson(surviving, cfg.replicas);
        curve.survival.push_back(static_cast<double>(surviving) /
                                 static_cast<double>(cfg.replicas));
        curve.lo.push_back(lo);
        curve.hi.push_back(hi);
    }
    return curve;
}

MeanHittingLadder estimate_mean_hitting(const EnvironmentLaw& law, const Site& target,
                                        const std::vector<int>& rungs, const McConfig& cfg) {
    if (rungs.empty()) throw std::invalid_argument("empty horizon ladder");
    for (size_t i = 1; i < rungs.size(); ++i)
        if (rungs[i] <= rungs[i - 1]) throw std::invalid_argument("ladder must increase");

    MeanHittingLadder ladder;
    ladder.target = target;
    ladder.rungs = rungs;
    ladder.replicas = cfg.replicas;

    int horizon = rungs.back();
    std::vector<HitSample> hits = sample_hits(law, target, horizon, cfg, std::nullopt);

    for (int rung : rungs) {
        double acc = 0, acc2 = 0;
        for (const auto& h : hits) {
            double v = static_cast<double>(h.t ? std::min(*h.t, rung) : rung);
            acc += v;
            acc2 += v * v;
        }
        double mean = acc / static_cast<double>(cfg.replicas);
        double var = std::max(0.0, acc2 / static_cast<double>(cfg.replicas) - mean * mean);
        ladder.censored_mean.push_back(mean);
        ladder.std_error.push_back(std::sqrt(var / static_cast<double>(cfg.replicas)));
    }

    // log-log slope of the censored mean against the rung.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = rungs.size();
    for (std::size_t i = 0; i < m; ++i) {
        double x = std::log(static_cast<double>(rungs[i]));
        double y = std::log(std::max(ladder.censored_mean[i], 1e-12));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = static_cast<double>(m) * sxx - sx * sx;
    ladder.growth_exponent = denom > 0 ? (static_cast<double>(m) * sxy - sx * sy) / denom : 0.0;
    return ladder;
}

namespace {

std::vector<std::vector<double>> probe_directions(int d, int count, std::uint64_t seed) {
    std::vector<std::vector<double>> dirs;
    for (int i = 0; i < d; ++i) {
        for (int sgn : {1, -1}) {
            std::vector<double> r(static_cast<size_t>(d), 0.0);
            r[static_cast<size_t>(i)] = sgn;
            dirs.push_back(r);
        }
    }
    if (d == 1) return dirs;
    if (d == 2) {
        int extra = std::max(0, count - static_cast<int>(dirs.size()));
        for (int k = 0; k < extra; ++k) {
            double theta = 6.283185307179586 * (k + 0.5) / extra;
            dirs.push_back({std::cos(theta), std::sin(theta)});
        }
        return dirs;
    }
    KeyedRng rng(seed);
    for (int k = static_cast<int>(dirs.size()); k < count; ++k) {
        std::vector<double> v(static_cast<size_t>(d));
        double norm2 = 0;
        for (int i = 0; i < d; ++i) {
            double u1 = rng.uniform(static_cast<std::uint64_t>(k * 16 + 2 * i));
            double u2 = rng.uniform(static_cast<std::uint64_t>(k * 16 + 2 * i + 1));
            double g = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300))) *
                       std::cos(6.283185307179586 * u2);
            v[static_cast<size_t>(i)] = g;
            norm2 += g * g;
        }
        double inv = 1.0 / std::sqrt(std::max(norm2, 1e-12));
        for (auto& c : v) c *= inv;
        dirs.push_back(std::move(v));
    }
    return dirs;
}

double directional_radius(const std::vector<Site>& sites, const std::vector<double>& u, int n) {
    double best = -HUGE_VAL;
    for (const auto& s : sites) best = std::max(best, dot(s, u));
    return best / std::max(1, n);
}

ShapeEstimate::Radii summarize(const std::vector<std::vector<double>>& per_replica) {
    ShapeEstimate::Radii r;
    if (per_replica.empty()) return r;
    std::size_t dirs = per_replica.front().size();
    for (std::size_t j = 0; j < dirs; ++j) {
        double acc = 0, acc2 = 0;
        for (const auto& row : per_replica) {
            acc += row[j];
            acc2 += row[j] * row[j];
        }
        double mean = acc / static_cast<double>(per_replica.size());
        double var =
            std::max(0.0, acc2 / static_cast<double>(per_replica.size()) - mean * mean);
        r.mean.push_back(mean);
        r.sd.push_back(std::sqrt(var));
    }
    return r;
}

} // namespace

ShapeEstimate estimate_shape(const EnvironmentLaw& law, int time, std::size_t replicas,
                             int directions, const McConfig& cfg,
                             const ShapeVariants& variants) {
    if (!check_condition_ue(law))
        throw std::invalid_argument("shape estimation requires uniform ellipticity");
    if ((variants.bar_b || variants.tilde_b) && !check_condition_a(law))
        throw ConditionAMissing();

    ShapeEstimate est;
    est.time = time;
    est.replicas = replicas;
    est.directions = probe_directions(law.dimension(), directions, 0x5AFEULL);

    int horizon = time + (variants.tilde_b ? variants.tilde_window : 0);
    std::vector<std::vector<double>> b_rows(replicas), bar_rows(replicas), tilde_rows(replicas);
    std::vector<char> saturated(replicas, 0);

    parallel_replicas(replicas, cfg.jobs, [&](std::size_t i) {
        std::uint64_t es = cfg.quenched ? cfg.env_seed : replica_seed(cfg.env_seed, i, 0x51ULL);
        EnvironmentRealization env(law, es);
        SimConfig sc = sim_config_for(cfg, horizon, replica_seed(cfg.walk_seed, i, 0x52ULL));
        sc.track_sets = true;
        sc.tilde_window = variants.tilde_window;
        RunResult rr = run(env, sc, Site{});
        const OccupancySets& at_n = rr.sets[static_cast<size_t>(time)];
        for (const auto& u : est.directions) {
            b_rows[i].push_back(directional_radius(at_n.b, u, time));
            if (variants.bar_b) bar_rows[i].push_back(directional_radius(at_n.bar_b, u, time));
            if (variants.tilde_b)
                tilde_rows[i].push_back(directional_radius(at_n.tilde_b, u, time));
        }
        saturated[i] = rr.saturated() ? 1 : 0;
    });

    est.b = summarize(b_rows);
    if (variants.bar_b) est.bar_b = summarize(bar_rows);
    if (variants.tilde_b) est.tilde_b = summarize(tilde_rows);
    for (char s : saturated) est.any_saturated = est.any_saturated || s;

    // Support functions are sublinear by construction; report the worst
    // violation over probe pairs as a numeric sanity value.
    double defect = 0;
    const auto& dirs = est.directions;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
            std::vector<double> sum(dirs[i].size());
            double norm2 = 0;
            for (std::size_t c = 0; c < sum.size(); ++c) {
                sum[c] = dirs[i][c] + dirs[j][c];
                norm2 += sum[c] * sum[c];
            }
            if (norm2 < 1e-12) continue;
            // Find the closest probe to the normalized sum and compare.
            double inv = 1.0 / std::sqrt(norm2);
            std::size_t nearest = 0;
            double best = -HUGE_VAL;
            for (std::size_t k = 0; k < dirs.size(); ++k) {
                double d = 0;
                for (std::size_t c = 0; c < sum.size(); ++c) d += dirs[k][c] * sum[c] * inv;
                if (d > best) {
                    best = d;
                    nearest = k;
                }
            }
            if (best > 1.0 - 1e-9) {
                double lhs = est.b.mean[nearest] * std::sqrt(norm2);
                double rhs = est.b.mean[i] + est.b.mean[j];
                defect = std::max(defect, lhs - rhs);
            }
        }
    }
    est.convexity_defect = defect;
    return est;
}

SupermartingaleReport supermartingale_audit(const EnvironmentLaw& law,
                                            const std::vector<double>& s, double lambda,
                                            const Site& start, int horizon,
                                            const McConfig& cfg) {
    ConditionLVerification ver = verify_condition_l(law, s, lambda);
    if (!ver.ok || !(lambda > 0) || std::abs(lambda - 1.0) < 1e-15)
        throw CertificateInvalid();

    SupermartingaleReport report;
    report.replicas = cfg.replicas;
    report.horizon = horizon;
    report.mean_f.assign(static_cast<size_t>(horizon) + 1, 0.0);

    const double t = std::log(lambda);
    // Per-support-law factor sum_y mu_y lambda^{y.s}.
    std::vector<double> factor;
    for (const auto& sl : law.support) {
        std::vector<Rat> mu = mean_offspring(law.step_set, sl);
        double acc = 0;
        for (size_t i = 0; i < mu.size(); ++i)
            if (!mu[i].is_zero())
                acc += mu[i].to_double() * std::exp(t * dot(law.step_set.steps[i], s));
        factor.push_back(acc);
    }

    std::vector<std::size_t> violations(cfg.replicas, 0);
    std::vector<std::size_t> checks(cfg.replicas, 0);
    std::vector<std::vector<double>> f_rows(cfg.replicas);

    parallel_replicas(cfg.replicas, cfg.jobs, [&](std::size_t i) {
        std::uint64_t es = cfg.quenched ? cfg.env_seed : replica_seed(cfg.env_seed, i, 0xF1ULL);
        EnvironmentRealization env(law, es);
        SimConfig sc = sim_config_for(cfg, horizon, replica_seed(cfg.walk_seed, i, 0xF2ULL));
        PopulationState state = PopulationState::initial(start);
        f_rows[i].resize(static_cast<size_t>(horizon) + 1);
        for (int n = 0; n <= horizon; ++n) {
            double f_n = 0, expected_next = 0;
            for (const auto& [site, count] : state.counts) {
                double weight = static_cast<double>(count) * std::exp(t * dot(site, s));
                f_n += weight;
                expected_next += weight * factor[static_cast<size_t>(env.omega_at(site))];
            }
            f_rows[i][static_cast<size_t>(n)] = f_n;
            ++checks[i];
            if (expected_next > f_n * (1.0 + 1e-12)) ++violations[i];
            if (n < horizon) state = step(state, env, sc);
        }
    });

    for (std::size_t i = 0; i < cfg.replicas; ++i) {
        report.checks += checks[i];
        report.violations += violations[i];
        for (size_t n = 0; n < f_rows[i].size(); ++n)
            report.mean_f[n] += f_rows[i][n] / static_cast<double>(cfg.replicas);
    }
    return report;
}

SeedAudit seed_audit(const EnvironmentLaw& law, const EnvironmentPatch& patch,
                     const std::vector<Site>& w, std::size_t replicas_per_site,
                     const McConfig& cfg, int safety_factor) {
    if (w.empty()) throw std::invalid_argument("W must be nonempty");
    for (const Site& z : w)
        if (patch.sites.find(z) == patch.sites.end()) throw PatchTooSmall();

    // Starting sites: W + steps, all of which must lie inside the patch.
    std::vector<Site> starts;
    std::unordered_set<Site, SiteHash> w_set(w.begin(), w.end());
    std::unordered_set<Site, SiteHash> seen;
    for (const Site& z : w) {
        for (const Site& stp : law.step_set.steps) {
            Site y = site_add(z, stp);
            if (patch.sites.find(y) == patch.sites.end()) throw PatchTooSmall();
            if (seen.insert(y).second) starts.push_back(y);
        }
    }
    std::sort(starts.begin(), starts.end());

    // Restriction: the patch domain. Horizon scales with its diameter.
    std::unordered_set<Site, SiteHash> domain;
    int lo = INT32_MAX, hi = INT32_MIN;
    for (auto& [site, lw] : patch.sites) {
        (void)lw;
        domain.insert(site);
        for (int i = 0; i < law.dimension(); ++i) {
            lo = std::min(lo, site[i]);
            hi = std::max(hi, site[i]);
        }
    }
    int horizon = std::max(4, (hi - lo + 1) * safety_factor);

    SeedAudit audit;
    audit.replicas_per_site = replicas_per_site;

    Rat eps_exact;
    bool first = true;
    for (const Site& z : w) {
        Rat bm = patch.sites.at(z).branching_mass();
        if (first || bm < eps_exact) {
            eps_exact = bm;
            first = false;
        }
    }
    audit.epsilon_exact = eps_exact;
    audit.epsilon = eps_exact.to_double();

    EnvironmentRealization base(law, cfg.env_seed);
    EnvironmentRealization env = base.with_patch(patch);

    double min_rate = 1.0;
    std::size_t min_hits = replicas_per_site;
    for (const Site& y : starts) {
        std::vector<char> hit(replicas_per_site, 0);
        parallel_replicas(replicas_per_site, cfg.jobs, [&](std::size_t i) {
            SimConfig sc = sim_config_for(
                cfg, horizon,
                replica_seed(cfg.walk_seed ^ site_key(y), i, 0xAEULL));
            sc.mode = SimMode::exact;
            sc.restriction = domain;
            PopulationState state = PopulationState::initial(y);
            for (int n = 0; n <= horizon; ++n) {
                bool in_w = false;
                for (const auto& [site, c] : state.counts)
                    if (c > 0 && w_set.count(site)) in_w = true;
                if (in_w) {
                    hit[i] = 1;
                    break;
                }
                if (state.counts.empty()) break; // all particles discarded
                if (n < horizon) state = step(state, env, sc);
            }
        });
        std::size_t hits = 0;
        for (char h : hit) hits += h;
        double rate = static_cast<double>(hits) / static_cast<double>(replicas_per_site);
        audit.per_site_rate.emplace_back(y, rate);
        if (rate < min_rate) {
            min_rate = rate;
            min_hits = hits;
        }
    }
    audit.rho_hat = min_rate;
    audit.rho_lo = clopper_pearson(min_hits, replicas_per_site).first;

    double rho = audit.rho_hat, eps = audit.epsilon;
    audit.p1 = (1.0 - eps) * rho + 2.0 * eps * rho * (1.0 - rho);
    audit.p2 = eps * rho * rho;
    audit.margin = audit.p1 + 2.0 * audit.p2 - 1.0;
    return audit;
}

TailOrderFit fit_tail_order(const TailCurve& curve, int dimension) {
    TailOrderFit fit;
    std::vector<double> xs_theta, ys_theta, xs_kappa, ys_kappa;
    for (size_t i = 0; i < curve.grid.size(); ++i) {
        double s = curve.survival[i];
        if (s <= 0.0 || s >= 1.0 || curve.grid[i] < 2) continue;
        double neg_log_s = -std::log(s);
        double ln_n = std::log(static_cast<double>(curve.grid[i]));
        xs_theta.push_back(std::pow(ln_n, dimension));
        ys_theta.push_back(neg_log_s);
        xs_kappa.push_back(ln_n);
        ys_kappa.push_back(std::log(neg_log_s));
    }
    fit.usable_points = xs_theta.size();
    auto regress = [](const std::vector<double>& x, const std::vector<double>& y,
                      double& slope, double& r2) {
        std::size_t m = x.size();
        if (m < 2) {
            slope = 0;
            r2 = 0;
            return;
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        for (std::size_t i = 0; i < m; ++i) {
            sx += x[i];
            sy += y[i];
            sxx += x[i] * x[i];
            sxy += x[i] * y[i];
            syy += y[i] * y[i];
        }
        double dm = static_cast<double>(m);
        double denom = dm * sxx - sx * sx;
        slope = denom != 0 ? (dm * sxy - sx * sy) / denom : 0.0;
        double var_y = dm * syy - sy * sy;
        r2 = (denom != 0 && var_y != 0)
                 ? (dm * sxy - sx * sy) * (dm * sxy - sx * sy) / (denom * var_y)
                 : 0.0;
    };
    regress(xs_theta, ys_theta, fit.theta_hat, fit.r2_theta);
    regress(xs_kappa, ys_kappa, fit.kappa_hat, fit.r2_kappa);
    fit.heavy_tail = fit.usable_points >= 2 && fit.kappa_hat < kHeavyTailKappa;
    return fit;
}

} // namespace brwre
