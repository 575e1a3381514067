#pragma once

// Shared builders for the test suites: hand-rolled small laws, a random
// model generator for the property suites, and structural equality helpers.

#include <cstdint>
#include <vector>

#include "brwre/model.hpp"
#include "brwre/rng.hpp"

namespace brwre::testing {

inline OffspringVector ovec(std::initializer_list<std::pair<int, std::int32_t>> entries) {
    OffspringVector v;
    for (auto& e : entries) v.counts.push_back(e);
    return v;
}

inline SiteLaw site_law(std::initializer_list<std::pair<OffspringVector, Rat>> atoms) {
    SiteLaw l;
    for (auto& [v, p] : atoms) l.atoms.push_back({v, p});
    return l;
}

inline StepSet steps_1d() {
    StepSet ss;
    ss.dimension = 1;
    ss.steps = {make_site({-1}), make_site({1})};
    return ss;
}

inline StepSet steps_1d_lazy() {
    StepSet ss;
    ss.dimension = 1;
    ss.steps = {make_site({-1}), make_site({0}), make_site({1})};
    return ss;
}

inline StepSet steps_2d() {
    StepSet ss;
    ss.dimension = 2;
    ss.steps = {make_site({1, 0}), make_site({0, 1}), make_site({-1, 0}), make_site({0, -1})};
    return ss;
}

/// One-law model whose single atom sends one child along `step_index`.
inline EnvironmentLaw deterministic_drift_1d() {
    StepSet ss = steps_1d();
    SiteLaw law = site_law({{ovec({{1, 1}}), Rat(1)}});
    return build_law(ss, {law}, {Rat(1)});
}

/// Random valid model for the property suites: d <= 2, up to 4 laws with up
/// to 5 random atoms each plus one full-coverage atom, so Conditions B and E
/// hold by construction. Probabilities are small exact rationals.
inline EnvironmentLaw random_model(std::uint64_t seed) {
    KeyedRng rng(seed);
    std::uint64_t c = 0;
    auto pick = [&](std::uint64_t n) { return rng.u64(c++) % n; };

    int d = 1 + static_cast<int>(pick(2));
    StepSet ss;
    ss.dimension = d;
    for (int i = 0; i < d; ++i) {
        Site plus{}, minus{};
        plus[i] = 1;
        minus[i] = -1;
        ss.steps.push_back(plus);
        ss.steps.push_back(minus);
    }
    if (pick(2)) ss.steps.push_back(Site{}); // optional zero step
    if (d == 2 && pick(2)) {
        Site diag{};
        diag[0] = 1;
        diag[1] = pick(2) ? 1 : -1;
        ss.steps.push_back(diag);
    }

    // Coverage atom: one child to each signed unit step.
    OffspringVector coverage;
    for (int i = 0; i < 2 * d; ++i) coverage.counts.push_back({i, 1});

    std::uint64_t law_count = 1 + pick(4);
    std::vector<SiteLaw> support;
    for (std::uint64_t li = 0; li < law_count; ++li) {
        SiteLaw law;
        std::uint64_t atom_count = 1 + pick(5);
        std::vector<std::int64_t> raw;
        std::vector<OffspringVector> vectors;
        vectors.push_back(coverage);
        raw.push_back(1 + static_cast<std::int64_t>(pick(9)));
        for (std::uint64_t ai = 0; ai < atom_count; ++ai) {
            OffspringVector v;
            std::uint64_t children = 1 + pick(3);
            for (std::uint64_t ch = 0; ch < children; ++ch) {
                int idx = static_cast<int>(pick(ss.steps.size()));
                bool merged = false;
                for (auto& [i, cnt] : v.counts)
                    if (i == idx) {
                        ++cnt;
                        merged = true;
                    }
                if (!merged) v.counts.push_back({idx, 1});
            }
            std::sort(v.counts.begin(), v.counts.end());
            bool dup = false;
            for (const auto& seen : vectors)
                if (seen == v) dup = true;
            if (dup) continue;
            vectors.push_back(v);
            raw.push_back(1 + static_cast<std::int64_t>(pick(9)));
        }
        std::int64_t total = 0;
        for (auto r : raw) total += r;
        for (size_t i = 0; i < vectors.size(); ++i)
            law.atoms.push_back({vectors[i], Rat(raw[i], total)});
        support.push_back(std::move(law));
    }

    std::vector<Rat> weights;
    std::int64_t wtotal = 0;
    std::vector<std::int64_t> wraw;
    for (std::uint64_t li = 0; li < law_count; ++li) {
        wraw.push_back(1 + static_cast<std::int64_t>(pick(9)));
        wtotal += wraw.back();
    }
    for (auto w : wraw) weights.push_back(Rat(w, wtotal));
    return build_law(std::move(ss), std::move(support), std::move(weights));
}

/// Same support, fresh strictly positive weights.
inline EnvironmentLaw reweighted(const EnvironmentLaw& law, std::uint64_t seed) {
    KeyedRng rng(seed);
    std::vector<Rat> weights;
    std::int64_t total = 0;
    std::vector<std::int64_t> raw;
    for (size_t i = 0; i < law.support.size(); ++i) {
        raw.push_back(1 + static_cast<std::int64_t>(rng.u64(i) % 17));
        total += raw.back();
    }
    for (auto w : raw) weights.push_back(Rat(w, total));
    return build_law(law.step_set, law.support, weights);
}

/// First atom whose vector has the requested number of children.
inline const OffspringVector& atom_with_total(const SiteLaw& law, std::int64_t total) {
    for (const auto& a : law.atoms)
        if (a.vector.total() == total) return a.vector;
    throw std::logic_error("no atom with requested total");
}

inline bool laws_equal(const EnvironmentLaw& a, const EnvironmentLaw& b) {
    if (a.dimension() != b.dimension()) return false;
    if (a.step_set.steps != b.step_set.steps) return false;
    if (a.support.size() != b.support.size()) return false;
    for (size_t i = 0; i < a.support.size(); ++i) {
        const auto& la = a.support[i].atoms;
        const auto& lb = b.support[i].atoms;
        if (la.size() != lb.size()) return false;
        for (size_t j = 0; j < la.size(); ++j) {
            if (!(la[j].vector == lb[j].vector)) return false;
            if (la[j].probability != lb[j].probability) return false;
        }
    }
    return a.weights == b.weights;
}

} // namespace brwre::testing
