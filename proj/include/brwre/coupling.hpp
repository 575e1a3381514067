#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "brwre/environment.hpp"
#include "brwre/simulator.hpp"

namespace brwre {

class PopulationCapExceeded : public std::runtime_error {
public:
    explicit PopulationCapExceeded(std::uint64_t cap)
        : std::runtime_error("coupled run exceeded the live-particle cap of " +
                             std::to_string(cap)) {}
};

/// The shared i.i.d. offspring family v^{x,i}(n): particle i at site x and
/// time n draws this fixed vector from the site's law, no matter which
/// trajectory consumes it. Pure function of (draw_seed, x, i, n).
class SharedDraws {
public:
    SharedDraws(const EnvironmentRealization& env, std::uint64_t draw_seed)
        : env_(&env), seed_(draw_seed) {}

    const EnvironmentRealization& env() const { return *env_; }
    std::uint64_t draw_seed() const { return seed_; }

    /// Atom index of v^{x,i}(n) within law_at(x); i is 0-based here.
    int atom_index(const Site& x, std::uint64_t i, int n) const {
        std::uint64_t u = KeyedRng(seed_)
                              .with(site_key(x))
                              .with(static_cast<std::uint64_t>(n))
                              .u64(i);
        return env_->law_at(x).sample_atom(u);
    }

private:
    const EnvironmentRealization* env_;
    std::uint64_t seed_;
};

using HitTimes = std::unordered_map<Site, int, SiteHash>;

struct DominationViolation {
    Site x;
    int n = 0;
    std::uint64_t shifted_count = 0; // eta^z_n(x)
    std::uint64_t base_count = 0;    // eta^0_{n+m0}(x)
};

/// All trajectories built from one SharedDraws realization: the base process
/// from the origin plus one process per requested start, time-shifted by
/// m0 = T(0,z) when that is finite.
struct CoupledFamily {
    std::uint64_t env_seed = 0;
    std::uint64_t draw_seed = 0;
    int horizon = 0;

    std::vector<CountMap> base_trajectory; // eta^0 by step, 0..horizon
    HitTimes t_from_origin;                // uncensored T(0,.) entries

    struct StartRun {
        Site z;
        std::optional<int> m0; // T(0,z) when finite
        HitTimes t;            // uncensored T(z,.) entries
        std::vector<DominationViolation> domination_violations;
    };
    std::vector<StartRun> runs;

    std::optional<int> t0(const Site& y) const {
        auto it = t_from_origin.find(y);
        return it == t_from_origin.end() ? std::nullopt : std::optional<int>(it->second);
    }
};

/// Builds the coupled family. Exact per-particle dynamics only; throws
/// PopulationCapExceeded when any trajectory's live population passes `cap`.
CoupledFamily coupled_run(const EnvironmentRealization& env, std::uint64_t draw_seed,
                          const std::vector<Site>& starts, int horizon,
                          std::uint64_t cap = 1'000'000);

struct TripleResult {
    Site z;
    Site y;
    int t0z = 0;
    int tzy = 0;
    int t0y = 0;
    bool ok = false;
};

struct SubadditivityReport {
    std::uint64_t env_seed = 0;
    std::uint64_t draw_seed = 0;
    std::size_t evaluated = 0;
    std::size_t skipped_censored = 0; // some T in the triple never realized
    std::vector<TripleResult> results; // every evaluated triple
    std::vector<TripleResult> violations;

    bool clean() const { return violations.empty(); }
};

/// Checks T(0,z) + T(z,y) >= T(0,y) on triples rooted at the origin.
/// A violation is a bug in the construction, never a statistic, so every
/// failing triple is returned with its replay seeds.
SubadditivityReport subadditivity_audit(const CoupledFamily& family,
                                        const std::vector<std::pair<Site, Site>>& triples);

} // namespace brwre
