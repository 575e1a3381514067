#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "brwre/lattice.hpp"
#include "brwre/rational.hpp"

namespace brwre {

/// The finite step set of allowed displacements. Must contain +-e_i for
/// every coordinate; the maximal jump length is derived, never stored.
struct StepSet {
    int dimension = 1;
    std::vector<Site> steps;

    int l0() const {
        int m = 0;
        for (const auto& s : steps) m = std::max(m, linf_norm(s));
        return m;
    }
    /// Index of a step equal to `s`, or -1.
    int find(const Site& s) const {
        for (size_t i = 0; i < steps.size(); ++i)
            if (steps[i] == s) return static_cast<int>(i);
        return -1;
    }
};

/// One offspring vector: how many children go to each step. Total >= 1,
/// i.e. a particle is never simply destroyed.
struct OffspringVector {
    // (step index, count), count >= 1, step indices strictly increasing.
    std::vector<std::pair<int, std::int32_t>> counts;

    std::int64_t total() const {
        std::int64_t t = 0;
        for (auto& [s, c] : counts) t += c;
        return t;
    }
    std::int32_t count_at(int step_index) const {
        for (auto& [s, c] : counts)
            if (s == step_index) return c;
        return 0;
    }
    friend bool operator==(const OffspringVector& a, const OffspringVector& b) {
        return a.counts == b.counts;
    }
};

/// A site law: finite distribution over offspring vectors, exact weights.
struct SiteLaw {
    struct Atom {
        OffspringVector vector;
        Rat probability;
    };
    std::vector<Atom> atoms;

    // Cumulative 2^64-scaled sampling thresholds, filled at validation.
    std::vector<std::uint64_t> thresholds;

    /// Probability that the drawn vector sends >= 1 child along `step_index`.
    Rat mass_to(int step_index) const {
        Rat m(0);
        for (const auto& a : atoms)
            if (a.vector.count_at(step_index) >= 1) m += a.probability;
        return m;
    }
    /// Probability of drawing a vector with >= 2 children.
    Rat branching_mass() const {
        Rat m(0);
        for (const auto& a : atoms)
            if (a.vector.total() >= 2) m += a.probability;
        return m;
    }
    /// Atom index for a 64-bit uniform variate.
    int sample_atom(std::uint64_t u) const {
        size_t lo = 0, hi = thresholds.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (u < thresholds[mid]) hi = mid; else lo = mid + 1;
        }
        return static_cast<int>(lo);
    }
};

/// The environment law Q: a finite-support distribution over site laws,
/// together with the step set they share.
struct EnvironmentLaw {
    StepSet step_set;
    std::vector<SiteLaw> support;
    std::vector<Rat> weights;

    std::vector<std::uint64_t> law_thresholds; // filled at validation

    int dimension() const { return step_set.dimension; }
    int l0() const { return step_set.l0(); }

    int sample_law(std::uint64_t u) const {
        size_t lo = 0, hi = law_thresholds.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (u < law_thresholds[mid]) hi = mid; else lo = mid + 1;
        }
        return static_cast<int>(lo);
    }
};

/// Structural conditions of the model, reported together.
/// `ue` carries the exact maximal ellipticity constant and is present
/// exactly when `e` holds (the support is finite, so E implies UE).
struct ConditionsReport {
    bool b = false;
    bool e = false;
    std::optional<Rat> ue;
    bool a = false;
};

struct ValidationIssue {
    enum class Kind {
        EmptySupport,
        ProbabilitySumMismatch,
        MissingUnitSteps,
        ZeroOffspringVector,
        DuplicateStep,
        DuplicateVector,
        ZeroWeight,
        IndexOutOfRange,
        BadDimension,
        NegativeProbability,
        EmptyLaw,
    };
    Kind kind;
    std::string detail;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues);
    const std::vector<ValidationIssue>& issues() const { return issues_; }

private:
    static std::string render(const std::vector<ValidationIssue>& issues);
    std::vector<ValidationIssue> issues_;
};

const char* issue_kind_name(ValidationIssue::Kind k);

/// Raw, unchecked model description (as parsed from the JSON format).
struct RawModel {
    int dimension = 0;
    std::vector<std::vector<std::int64_t>> steps;
    std::vector<std::map<int, std::int64_t>> offspring_vectors;
    std::vector<std::map<int, std::string>> site_laws; // vector index -> "p/q"
    std::vector<std::pair<int, std::string>> q;        // (law index, weight)
};

/// Checks every structural invariant and returns an immutable law with
/// sampling tables attached. Collects all violations before throwing.
EnvironmentLaw validate_model(const RawModel& raw);

/// Convenience for building laws in code (presets, tests). Runs the same
/// validation as the JSON path.
EnvironmentLaw build_law(StepSet step_set,
                         std::vector<SiteLaw> support,
                         std::vector<Rat> weights);

bool check_condition_b(const EnvironmentLaw& law);
bool check_condition_e(const EnvironmentLaw& law);
std::optional<Rat> check_condition_ue(const EnvironmentLaw& law);
bool check_condition_a(const EnvironmentLaw& law);
ConditionsReport conditions_report(const EnvironmentLaw& law);

/// Mean offspring vector mu_y = sum_v v_y w(v), exact, indexed like the
/// step set.
std::vector<Rat> mean_offspring(const StepSet& steps, const SiteLaw& law);

class ConvolutionOverflow : public std::runtime_error {
public:
    ConvolutionOverflow() : std::runtime_error("convolution support exceeds configured bound") {}
};

/// Mean number of generation-k descendants at the starting site when every
/// site carries `law` (homogeneous environment), by k-fold convolution of
/// the mean-offspring vector. Throws ConvolutionOverflow if the support
/// grows past `support_bound` entries.
Rat k_step_mean_return(const StepSet& steps, const SiteLaw& law, int k,
                       size_t support_bound = 1u << 20);

/// Full k-step mean vector (used by the semigroup property tests).
std::map<Site, Rat> k_step_mean_vector(const StepSet& steps, const SiteLaw& law, int k,
                                       size_t support_bound = 1u << 20);

} // namespace brwre
