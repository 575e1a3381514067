#pragma once

#include <optional>
#include <vector>

#include "brwre/environment.hpp"
#include "brwre/model.hpp"

namespace brwre {

/// Pick-a-child rule for the walk induced by following one offspring per
/// generation.
struct SelectionRule {
    enum class Kind { uniform, particle_uniform, r_extremal };
    Kind kind = Kind::uniform;
    std::vector<double> direction; // r_extremal only; unit vector

    static SelectionRule uniform() { return {Kind::uniform, {}}; }
    static SelectionRule particle_uniform() { return {Kind::particle_uniform, {}}; }
    static SelectionRule r_extremal(std::vector<double> r) {
        return {Kind::r_extremal, std::move(r)};
    }
};

/// Exact one-step law of the induced walk at a site carrying `law`:
/// p(y) = sum_v w(v) kappa_v(y), indexed like the step set. kappa is uniform
/// over the occupied steps, proportional to the child counts, or a point
/// mass on the r-maximal occupied step (lexicographic tie-break).
std::vector<Rat> induced_step_law(const StepSet& steps, const SiteLaw& law,
                                  const SelectionRule& rule);

/// Induced local drift sum_y y p(y) of one site law, exact.
std::vector<Rat> induced_drift(const StepSet& steps, const SiteLaw& law,
                               const SelectionRule& rule);

enum class NestlingKind { nestling, non_nestling, marginally_nestling };

const char* nestling_kind_name(NestlingKind k);

struct NestlingClass {
    NestlingKind kind = NestlingKind::nestling;
    std::vector<Rat> witness; // non_nestling: direction with sup drift projection < 0
    bool decided_exactly = true;
};

/// Classifies the origin against the convex hull of the per-law induced
/// drifts, with the same exact d <= 2 geometry the recurrence check uses.
NestlingClass classify_nestling(const EnvironmentLaw& law, const SelectionRule& rule);

/// Samples one trajectory of the induced walk (diagnostics, seed-visiting
/// experiments).
std::vector<Site> induced_walk_run(const EnvironmentRealization& env, const SelectionRule& rule,
                                   const Site& start, int horizon, std::uint64_t seed);

} // namespace brwre
