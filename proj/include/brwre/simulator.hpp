#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "brwre/environment.hpp"

namespace brwre {

enum class SimMode { exact, residual };

/// Thrown when an exact-mode count leaves the 64-bit range. Exact mode never
/// clamps; populations that large are the residual mode's job.
class ExactOverflow : public std::runtime_error {
public:
    ExactOverflow() : std::runtime_error("exact-mode population count exceeded 64-bit range") {}
};

/// Thrown when an exact-mode step would process more live particles than the
/// configured cap. Exact sampling is O(population) per step, so this fails
/// fast instead of stalling; large populations belong to residual mode.
class ExactPopulationCap : public std::runtime_error {
public:
    explicit ExactPopulationCap(std::uint64_t cap)
        : std::runtime_error("exact-mode population exceeded the cap of " +
                             std::to_string(cap) + "; use residual mode") {}
};

struct SimConfig {
    SimMode mode = SimMode::residual;
    std::uint64_t residual_threshold = 4096;
    int horizon = 100;
    std::uint64_t walk_seed = 1;
    int tilde_window = 32;
    bool track_sets = false;
    std::uint64_t exact_population_cap = 50'000'000;
    // Particles stepping outside this set are discarded, when present.
    std::optional<std::unordered_set<Site, SiteHash>> restriction;
};

using CountMap = std::unordered_map<Site, std::uint64_t, SiteHash>;

// Residual-mode counts clamp here (with the saturation flag raised) so that
// aggregation headroom never wraps 64 bits.
inline constexpr std::uint64_t kCountCap = 1ULL << 62;

struct PopulationState {
    CountMap counts;
    int time = 0;
    std::unordered_set<Site, SiteHash> visited;
    bool saturated = false;

    unsigned __int128 total() const {
        unsigned __int128 t = 0;
        for (auto& [s, c] : counts) t += c;
        return t;
    }

    static PopulationState initial(const Site& start) {
        PopulationState st;
        st.counts[start] = 1;
        st.visited.insert(start);
        return st;
    }
};

/// Visited / currently-occupied / persistently-occupied site sets at one
/// time step (sorted for determinism). `tilde_b` uses the trailing-window
/// surrogate: occupied at every step of [n, min(n + window, horizon)].
struct OccupancySets {
    std::vector<Site> b;
    std::vector<Site> bar_b;
    std::vector<Site> tilde_b;
};

struct StepRecord {
    int n = 0;
    std::string total_count;
    std::size_t occupied_count = 0;
    std::size_t visited_count = 0;
    bool saturated = false;
};

struct RunResult {
    std::vector<StepRecord> records;     // horizon + 1 entries
    std::vector<OccupancySets> sets;     // filled when cfg.track_sets
    PopulationState final_state;
    int tilde_window = 0;

    bool saturated() const { return final_state.saturated; }
};

std::string u128_str(unsigned __int128 v);

/// One generation: every particle at every occupied site draws an offspring
/// vector from the site's law and is replaced by its children. Exact mode
/// samples the multinomial partition particle by particle; residual mode
/// splits large counts as floor(k*p) plus a multinomial over the fractional
/// parts, preserving totals exactly and expectations exactly.
PopulationState step(const PopulationState& state, const EnvironmentRealization& env,
                     const SimConfig& cfg);

/// Runs `cfg.horizon` generations from one particle at `start`, recording
/// per-step totals and (optionally) the occupancy sets.
RunResult run(const EnvironmentRealization& env, const SimConfig& cfg, const Site& start);

/// Least n <= horizon with a particle at `target`, absent when censored.
std::optional<int> first_hit(const EnvironmentRealization& env, const SimConfig& cfg,
                             const Site& start, const Site& target);

/// Splits a count among a law's atoms under the configured mode; exposed for
/// the distribution tests. Draw index space is (walk_seed, site, time, i).
std::vector<std::uint64_t> split_count(std::uint64_t k, const SiteLaw& law,
                                       const SimConfig& cfg, const Site& site, int time);

} // namespace brwre
