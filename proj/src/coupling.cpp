#include "brwre/coupling.hpp"

namespace brwre {

namespace {

// Per-particle evolution consuming v^{x,i}(n + offset) in index order
// i = 1..eta_n(x). Returns the trajectory and fills uncensored hitting times.
std::vector<CountMap> evolve(const SharedDraws& draws, const Site& start, int horizon,
                             int offset, std::uint64_t cap, HitTimes& times) {
    const EnvironmentRealization& env = draws.env();
    const StepSet& steps = env.law().step_set;

    std::vector<CountMap> traj;
    traj.reserve(static_cast<size_t>(horizon) + 1);
    CountMap current;
    current[start] = 1;
    times[start] = 0;

    for (int n = 0; n <= horizon; ++n) {
        traj.push_back(current);
        if (n == horizon) break;
        unsigned __int128 live = 0;
        for (auto& [s, c] : current) live += c;
        if (live > cap) throw PopulationCapExceeded(cap);

        CountMap next;
        next.reserve(current.size() * 2 + 8);
        for (const auto& [site, k] : current) {
            const SiteLaw& law = env.law_at(site);
            for (std::uint64_t i = 0; i < k; ++i) {
                int atom = draws.atom_index(site, i, n + offset);
                for (auto& [step_idx, cnt] : law.atoms[static_cast<size_t>(atom)].vector.counts)
                    next[site_add(site, steps.steps[static_cast<size_t>(step_idx)])] +=
                        static_cast<std::uint64_t>(cnt);
            }
        }
        for (const auto& [site, c] : next)
            if (c > 0 && times.find(site) == times.end()) times[site] = n + 1;
        current = std::move(next);
    }
    return traj;
}

} // namespace

CoupledFamily coupled_run(const EnvironmentRealization& env, std::uint64_t draw_seed,
                          const std::vector<Site>& starts, int horizon, std::uint64_t cap) {
    SharedDraws draws(env, draw_seed);
    CoupledFamily family;
    family.env_seed = env.env_seed();
    family.draw_seed = draw_seed;
    family.horizon = horizon;

    Site origin{};
    family.base_trajectory = evolve(draws, origin, horizon, 0, cap, family.t_from_origin);

    for (const Site& z : starts) {
        CoupledFamily::StartRun run;
        run.z = z;
        auto it = family.t_from_origin.find(z);
        int offset = 0;
        if (it != family.t_from_origin.end()) {
            run.m0 = it->second;
            offset = it->second;
        }
        std::vector<CountMap> traj = evolve(draws, z, horizon, offset, cap, run.t);

        if (run.m0) {
            // eta^z_n(x) <= eta^0_{n+m0}(x) must hold on every realization.
            for (int n = 0; n + *run.m0 <= horizon && n <= horizon; ++n) {
                const CountMap& shifted = traj[static_cast<size_t>(n)];
                const CountMap& base =
                    family.base_trajectory[static_cast<size_t>(n + *run.m0)];
                for (const auto& [x, c] : shifted) {
                    auto bit = base.find(x);
                    std::uint64_t bc = bit == base.end() ? 0 : bit->second;
                    if (c > bc)
                        run.domination_violations.push_back({x, n, c, bc});
                }
            }
        }
        family.runs.push_back(std::move(run));
    }
    return family;
}

SubadditivityReport subadditivity_audit(const CoupledFamily& family,
                                        const std::vector<std::pair<Site, Site>>& triples) {
    SubadditivityReport report;
    report.env_seed = family.env_seed;
    report.draw_seed = family.draw_seed;

    for (const auto& [z, y] : triples) {
        auto t0z = family.t0(z);
        auto t0y = family.t0(y);
        const CoupledFamily::StartRun* zrun = nullptr;
        for (const auto& r : family.runs)
            if (r.z == z) {
                zrun = &r;
                break;
            }
        std::optional<int> tzy;
        if (zrun) {
            auto it = zrun->t.find(y);
            if (it != zrun->t.end()) tzy = it->second;
        }
        if (!t0z || !t0y || !tzy) {
            ++report.skipped_censored;
            continue;
        }
        ++report.evaluated;
        TripleResult res{z, y, *t0z, *tzy, *t0y, *t0z + *tzy >= *t0y};
        report.results.push_back(res);
        if (!res.ok) report.violations.push_back(res);
    }
    return report;
}

} // namespace brwre
