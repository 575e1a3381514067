#include "brwre/simulator.hpp"

#include <algorithm>

namespace brwre {

std::string u128_str(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

namespace {

KeyedRng draw_base(const SimConfig& cfg, const Site& site, int time) {
    return KeyedRng(cfg.walk_seed).with(site_key(site)).with(static_cast<std::uint64_t>(time));
}

std::vector<std::uint64_t> split_exact(std::uint64_t k, const SiteLaw& law,
                                       const KeyedRng& rng) {
    std::vector<std::uint64_t> m(law.atoms.size(), 0);
    for (std::uint64_t i = 0; i < k; ++i)
        ++m[static_cast<size_t>(law.sample_atom(rng.u64(i)))];
    return m;
}

// floor(k*p) per atom plus a multinomial over the fractional parts; the
// residual draws live past counter 2^40 so they never collide with the
// per-particle index space.
std::vector<std::uint64_t> split_residual(std::uint64_t k, const SiteLaw& law,
                                          const KeyedRng& rng) {
    const size_t n = law.atoms.size();
    std::vector<std::uint64_t> m(n, 0);
    std::vector<long double> frac(n, 0.0L);
    unsigned __int128 assigned = 0;
    for (size_t j = 0; j < n; ++j) {
        const Rat& p = law.atoms[j].probability;
        unsigned __int128 prod = static_cast<unsigned __int128>(k) *
                                 static_cast<unsigned __int128>(p.num());
        unsigned __int128 den = static_cast<unsigned __int128>(p.den());
        m[j] = static_cast<std::uint64_t>(prod / den);
        frac[j] = static_cast<long double>(prod % den) / static_cast<long double>(den);
        assigned += m[j];
    }
    std::uint64_t residual = static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(k) - assigned);
    if (residual > 0) {
        long double total = 0.0L;
        for (size_t j = 0; j < n; ++j) total += frac[j];
        const std::uint64_t counter_base = 1ULL << 40;
        for (std::uint64_t r = 0; r < residual; ++r) {
            long double u = static_cast<long double>(rng.uniform(counter_base + r)) * total;
            size_t pick = n - 1;
            for (size_t j = 0; j < n; ++j) {
                if (u < frac[j]) {
                    pick = j;
                    break;
                }
                u -= frac[j];
            }
            ++m[pick];
        }
    }
    return m;
}

} // namespace

std::vector<std::uint64_t> split_count(std::uint64_t k, const SiteLaw& law,
                                       const SimConfig& cfg, const Site& site, int time) {
    KeyedRng rng = draw_base(cfg, site, time);
    if (cfg.mode == SimMode::exact || k <= cfg.residual_threshold)
        return split_exact(k, law, rng);
    return split_residual(k, law, rng);
}

PopulationState step(const PopulationState& state, const EnvironmentRealization& env,
                     const SimConfig& cfg) {
    const StepSet& steps = env.law().step_set;
    if (cfg.mode == SimMode::exact) {
        unsigned __int128 live = 0;
        for (const auto& [s, c] : state.counts) live += c;
        if (live > cfg.exact_population_cap) throw ExactPopulationCap(cfg.exact_population_cap);
    }
    PopulationState next;
    next.time = state.time + 1;
    next.visited = state.visited;
    next.saturated = state.saturated;
    next.counts.reserve(state.counts.size() * 2 + 8);

    for (const auto& [site, k] : state.counts) {
        if (k == 0) continue;
        const SiteLaw& law = env.law_at(site);
        std::vector<std::uint64_t> parts = split_count(k, law, cfg, site, state.time);
        for (size_t j = 0; j < parts.size(); ++j) {
            if (parts[j] == 0) continue;
            for (auto& [step_idx, cnt] : law.atoms[j].vector.counts) {
                Site child = site_add(site, steps.steps[static_cast<size_t>(step_idx)]);
                if (cfg.restriction && cfg.restriction->count(child) == 0) continue;
                unsigned __int128 add = static_cast<unsigned __int128>(parts[j]) *
                                        static_cast<unsigned __int128>(cnt);
                std::uint64_t& slot = next.counts[child];
                unsigned __int128 sum = static_cast<unsigned __int128>(slot) + add;
                if (cfg.mode == SimMode::exact) {
                    if (sum > UINT64_MAX) throw ExactOverflow();
                    slot = static_cast<std::uint64_t>(sum);
                } else if (sum > kCountCap) {
                    slot = kCountCap;
                    next.saturated = true;
                } else {
                    slot = static_cast<std::uint64_t>(sum);
                }
            }
        }
    }
    for (const auto& [site, c] : next.counts)
        if (c > 0) next.visited.insert(site);
    return next;
}

namespace {

std::vector<Site> sorted_keys(const CountMap& counts) {
    std::vector<Site> out;
    out.reserve(counts.size());
    for (auto& [s, c] : counts)
        if (c > 0) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Site> sorted_intersection(const std::vector<Site>& a, const std::vector<Site>& b) {
    std::vector<Site> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

RunResult run(const EnvironmentRealization& env, const SimConfig& cfg, const Site& start) {
    RunResult result;
    result.tilde_window = cfg.tilde_window;
    PopulationState state = PopulationState::initial(start);

    std::vector<std::vector<Site>> occupied_by_step;
    occupied_by_step.reserve(static_cast<size_t>(cfg.horizon) + 1);

    for (int n = 0; n <= cfg.horizon; ++n) {
        StepRecord rec;
        rec.n = n;
        rec.total_count = u128_str(state.total());
        rec.occupied_count = state.counts.size();
        rec.visited_count = state.visited.size();
        rec.saturated = state.saturated;
        result.records.push_back(rec);
        occupied_by_step.push_back(sorted_keys(state.counts));
        if (n < cfg.horizon) state = step(state, env, cfg);
    }
    result.final_state = std::move(state);

    if (cfg.track_sets) {
        result.sets.resize(occupied_by_step.size());
        std::vector<Site> b_cum;
        for (size_t n = 0; n < occupied_by_step.size(); ++n) {
            std::vector<Site> merged;
            std::set_union(b_cum.begin(), b_cum.end(), occupied_by_step[n].begin(),
                           occupied_by_step[n].end(), std::back_inserter(merged));
            b_cum = std::move(merged);
            result.sets[n].b = b_cum;
            result.sets[n].bar_b = occupied_by_step[n];
            std::vector<Site> tilde = occupied_by_step[n];
            size_t last = std::min(occupied_by_step.size() - 1,
                                   n + static_cast<size_t>(cfg.tilde_window));
            for (size_t m = n + 1; m <= last && !tilde.empty(); ++m)
                tilde = sorted_intersection(tilde, occupied_by_step[m]);
            result.sets[n].tilde_b = std::move(tilde);
        }
    }
    return result;
}

std::optional<int> first_hit(const EnvironmentRealization& env, const SimConfig& cfg,
                             const Site& start, const Site& target) {
    PopulationState state = PopulationState::initial(start);
    for (int n = 0; n <= cfg.horizon; ++n) {
        auto it = state.counts.find(target);
        if (it != state.counts.end() && it->second > 0) return n;
        if (n < cfg.horizon) state = step(state, env, cfg);
    }
    return std::nullopt;
}

} // namespace brwre
