#include "brwre/model.hpp"

#include <algorithm>
#include <set>

namespace brwre {

namespace {

// floor(p/q * 2^64) for 0 <= p/q <= 1, exact.
std::uint64_t scale_to_u64(const Rat& cum) {
    if (cum >= Rat(1)) return UINT64_MAX;
    unsigned __int128 n = static_cast<unsigned __int128>(cum.num());
    n <<= 64;
    return static_cast<std::uint64_t>(n / static_cast<unsigned __int128>(cum.den()));
}

void attach_thresholds(SiteLaw& law) {
    law.thresholds.clear();
    Rat cum(0);
    for (const auto& a : law.atoms) {
        cum += a.probability;
        law.thresholds.push_back(scale_to_u64(cum));
    }
    if (!law.thresholds.empty()) law.thresholds.back() = UINT64_MAX;
}

} // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::runtime_error(render(issues)), issues_(std::move(issues)) {}

std::string ValidationError::render(const std::vector<ValidationIssue>& issues) {
    std::string msg = "model validation failed:";
    for (const auto& i : issues) {
        msg += "\n  [";
        msg += issue_kind_name(i.kind);
        msg += "] ";
        msg += i.detail;
    }
    return msg;
}

const char* issue_kind_name(ValidationIssue::Kind k) {
    using K = ValidationIssue::Kind;
    switch (k) {
        case K::EmptySupport: return "EmptySupport";
        case K::ProbabilitySumMismatch: return "ProbabilitySumMismatch";
        case K::MissingUnitSteps: return "MissingUnitSteps";
        case K::ZeroOffspringVector: return "ZeroOffspringVector";
        case K::DuplicateStep: return "DuplicateStep";
        case K::DuplicateVector: return "DuplicateVector";
        case K::ZeroWeight: return "ZeroWeight";
        case K::IndexOutOfRange: return "IndexOutOfRange";
        case K::BadDimension: return "BadDimension";
        case K::NegativeProbability: return "NegativeProbability";
        case K::EmptyLaw: return "EmptyLaw";
    }
    return "Unknown";
}

namespace {

void check_step_set(const StepSet& ss, std::vector<ValidationIssue>& issues) {
    using K = ValidationIssue::Kind;
    if (ss.dimension < 1 || ss.dimension > kMaxDim) {
        issues.push_back({K::BadDimension,
                          "dimension " + std::to_string(ss.dimension) +
                              " outside [1," + std::to_string(kMaxDim) + "]"});
        return;
    }
    std::set<Site> seen;
    for (const auto& s : ss.steps) {
        for (int i = ss.dimension; i < kMaxDim; ++i)
            if (s[i] != 0)
                issues.push_back({K::BadDimension,
                                  "step has nonzero coordinate beyond dimension"});
        if (!seen.insert(s).second)
            issues.push_back({K::DuplicateStep, "duplicate step " + site_str(s, ss.dimension)});
    }
    for (int i = 0; i < ss.dimension; ++i) {
        Site plus, minus;
        plus[i] = 1;
        minus[i] = -1;
        if (ss.find(plus) < 0 || ss.find(minus) < 0) {
            issues.push_back({K::MissingUnitSteps,
                              "step set must contain both unit steps along axis " +
                                  std::to_string(i)});
        }
    }
}

void check_law(const StepSet& ss, const SiteLaw& law, size_t law_index,
               std::vector<ValidationIssue>& issues) {
    using K = ValidationIssue::Kind;
    std::string where = "site law " + std::to_string(law_index);
    if (law.atoms.empty()) {
        issues.push_back({K::EmptyLaw, where + " has no atoms"});
        return;
    }
    Rat sum(0);
    std::vector<OffspringVector> seen;
    for (const auto& a : law.atoms) {
        if (a.probability.is_negative())
            issues.push_back({K::NegativeProbability,
                              where + " has a negative atom probability"});
        sum += a.probability;
        if (a.vector.total() < 1)
            issues.push_back({K::ZeroOffspringVector,
                              where + " references an offspring vector with zero children"});
        for (auto& [idx, cnt] : a.vector.counts) {
            if (idx < 0 || idx >= static_cast<int>(ss.steps.size()))
                issues.push_back({K::IndexOutOfRange,
                                  where + " references step index " + std::to_string(idx)});
            if (cnt < 1)
                issues.push_back({K::ZeroOffspringVector,
                                  where + " has an offspring entry with count < 1"});
        }
        for (const auto& v : seen)
            if (v == a.vector)
                issues.push_back({K::DuplicateVector, where + " lists one vector twice"});
        seen.push_back(a.vector);
    }
    if (sum != Rat(1))
        issues.push_back({K::ProbabilitySumMismatch,
                          where + " probabilities sum to " + sum.str() + ", not 1"});
}

} // namespace

EnvironmentLaw build_law(StepSet step_set, std::vector<SiteLaw> support,
                         std::vector<Rat> weights) {
    using K = ValidationIssue::Kind;
    std::vector<ValidationIssue> issues;
    check_step_set(step_set, issues);

    // Drop zero-probability atoms (no mass, no support meaning) and order
    // the rest canonically so emit -> validate round-trips to an identical
    // law regardless of listing order.
    for (auto& law : support) {
        std::vector<SiteLaw::Atom> kept;
        for (auto& a : law.atoms)
            if (!a.probability.is_zero()) kept.push_back(a);
        std::sort(kept.begin(), kept.end(), [](const SiteLaw::Atom& a, const SiteLaw::Atom& b) {
            return a.vector.counts < b.vector.counts;
        });
        law.atoms = std::move(kept);
    }

    if (support.empty())
        issues.push_back({K::EmptySupport, "Q has empty support"});
    if (support.size() != weights.size())
        issues.push_back({K::EmptySupport, "support and weight counts differ"});

    for (size_t i = 0; i < support.size(); ++i)
        check_law(step_set, support[i], i, issues);

    Rat wsum(0);
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i].sign() <= 0)
            issues.push_back({K::ZeroWeight,
                              "law " + std::to_string(i) + " has non-positive weight"});
        wsum += weights[i];
    }
    if (!weights.empty() && wsum != Rat(1))
        issues.push_back({K::ProbabilitySumMismatch,
                          "Q weights sum to " + wsum.str() + ", not 1"});

    if (!issues.empty()) throw ValidationError(std::move(issues));

    EnvironmentLaw law;
    law.step_set = std::move(step_set);
    law.support = std::move(support);
    law.weights = std::move(weights);
    for (auto& sl : law.support) attach_thresholds(sl);
    Rat cum(0);
    for (const auto& w : law.weights) {
        cum += w;
        law.law_thresholds.push_back(scale_to_u64(cum));
    }
    law.law_thresholds.back() = UINT64_MAX;
    return law;
}

EnvironmentLaw validate_model(const RawModel& raw) {
    using K = ValidationIssue::Kind;
    std::vector<ValidationIssue> issues;

    StepSet ss;
    ss.dimension = raw.dimension;
    if (raw.dimension < 1 || raw.dimension > kMaxDim) {
        issues.push_back({K::BadDimension,
                          "dimension " + std::to_string(raw.dimension) + " outside [1," +
                              std::to_string(kMaxDim) + "]"});
        throw ValidationError(std::move(issues));
    }
    for (const auto& coords : raw.steps) {
        if (static_cast<int>(coords.size()) != raw.dimension) {
            issues.push_back({K::BadDimension, "step arity differs from dimension"});
            continue;
        }
        Site s;
        bool ok = true;
        for (int i = 0; i < raw.dimension; ++i) {
            if (coords[static_cast<size_t>(i)] < INT32_MIN || coords[static_cast<size_t>(i)] > INT32_MAX) {
                issues.push_back({K::BadDimension, "step coordinate out of range"});
                ok = false;
                break;
            }
            s[i] = static_cast<std::int32_t>(coords[static_cast<size_t>(i)]);
        }
        if (ok) ss.steps.push_back(s);
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));

    std::vector<OffspringVector> vectors;
    for (const auto& m : raw.offspring_vectors) {
        OffspringVector v;
        for (auto& [idx, cnt] : m) {
            if (cnt < 1 || cnt > INT32_MAX) {
                issues.push_back({K::ZeroOffspringVector,
                                  "offspring count " + std::to_string(cnt) + " invalid"});
                continue;
            }
            v.counts.emplace_back(idx, static_cast<std::int32_t>(cnt));
        }
        std::sort(v.counts.begin(), v.counts.end());
        vectors.push_back(std::move(v));
    }

    std::vector<SiteLaw> support;
    for (const auto& m : raw.site_laws) {
        SiteLaw law;
        for (auto& [vidx, prob] : m) {
            SiteLaw::Atom a;
            if (vidx < 0 || vidx >= static_cast<int>(vectors.size())) {
                issues.push_back({K::IndexOutOfRange,
                                  "site law references vector " + std::to_string(vidx)});
                continue;
            }
            a.vector = vectors[static_cast<size_t>(vidx)];
            a.probability = Rat::parse(prob);
            law.atoms.push_back(std::move(a));
        }
        support.push_back(std::move(law));
    }

    std::vector<SiteLaw> used;
    std::vector<Rat> weights;
    for (auto& [lidx, w] : raw.q) {
        if (lidx < 0 || lidx >= static_cast<int>(support.size())) {
            issues.push_back({K::IndexOutOfRange,
                              "Q references law " + std::to_string(lidx)});
            continue;
        }
        used.push_back(support[static_cast<size_t>(lidx)]);
        weights.push_back(Rat::parse(w));
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return build_law(std::move(ss), std::move(used), std::move(weights));
}

bool check_condition_b(const EnvironmentLaw& law) {
    for (const auto& sl : law.support)
        for (const auto& a : sl.atoms)
            if (a.vector.total() >= 2) return true;
    return false;
}

bool check_condition_e(const EnvironmentLaw& law) {
    return check_condition_ue(law).has_value();
}

std::optional<Rat> check_condition_ue(const EnvironmentLaw& law) {
    std::optional<Rat> eps;
    for (int i = 0; i < law.dimension(); ++i) {
        for (int sgn : {1, -1}) {
            Site e;
            e[i] = sgn;
            int idx = law.step_set.find(e);
            if (idx < 0) return std::nullopt;
            for (const auto& sl : law.support) {
                Rat m = sl.mass_to(idx);
                if (m.is_zero()) return std::nullopt;
                if (!eps || m < *eps) eps = m;
            }
        }
    }
    return eps;
}

bool check_condition_a(const EnvironmentLaw& law) {
    for (size_t si = 0; si < law.step_set.steps.size(); ++si) {
        if (l1_norm(law.step_set.steps[si]) % 2 != 0) continue;
        for (const auto& sl : law.support)
            for (const auto& a : sl.atoms)
                if (a.vector.count_at(static_cast<int>(si)) >= 1) return true;
    }
    return false;
}

ConditionsReport conditions_report(const EnvironmentLaw& law) {
    ConditionsReport r;
    r.b = check_condition_b(law);
    r.ue = check_condition_ue(law);
    r.e = r.ue.has_value();
    r.a = check_condition_a(law);
    return r;
}

std::vector<Rat> mean_offspring(const StepSet& steps, const SiteLaw& law) {
    std::vector<Rat> mu(steps.steps.size(), Rat(0));
    for (const auto& a : law.atoms)
        for (auto& [idx, cnt] : a.vector.counts)
            mu[static_cast<size_t>(idx)] += a.probability * Rat(cnt);
    return mu;
}

std::map<Site, Rat> k_step_mean_vector(const StepSet& steps, const SiteLaw& law, int k,
                                       size_t support_bound) {
    std::vector<Rat> mu = mean_offspring(steps, law);
    std::map<Site, Rat> acc;
    acc[Site{}] = Rat(1);
    for (int iter = 0; iter < k; ++iter) {
        std::map<Site, Rat> next;
        for (const auto& [site, val] : acc) {
            for (size_t i = 0; i < steps.steps.size(); ++i) {
                if (mu[i].is_zero()) continue;
                next[site_add(site, steps.steps[i])] += val * mu[i];
            }
        }
        if (next.size() > support_bound) throw ConvolutionOverflow();
        acc = std::move(next);
    }
    return acc;
}

Rat k_step_mean_return(const StepSet& steps, const SiteLaw& law, int k,
                       size_t support_bound) {
    auto vec = k_step_mean_vector(steps, law, k, support_bound);
    auto it = vec.find(Site{});
    return it == vec.end() ? Rat(0) : it->second;
}

} // namespace brwre
