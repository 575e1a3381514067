#include "brwre/induced.hpp"

#include <algorithm>
#include <cmath>

#include "brwre/criteria.hpp"

namespace brwre {

const char* nestling_kind_name(NestlingKind k) {
    switch (k) {
        case NestlingKind::nestling: return "nestling";
        case NestlingKind::non_nestling: return "nonNestling";
        case NestlingKind::marginally_nestling: return "marginallyNestling";
    }
    return "unknown";
}

namespace {

// Maximizer of r.x over the occupied steps, lexicographic tie-break.
int extremal_step(const StepSet& steps, const OffspringVector& v,
                  const std::vector<double>& r) {
    int best = -1;
    double best_val = 0;
    for (auto& [idx, cnt] : v.counts) {
        (void)cnt;
        double val = dot(steps.steps[static_cast<size_t>(idx)], r);
        if (best < 0 || val > best_val + 1e-12) {
            best = idx;
            best_val = val;
        } else if (val > best_val - 1e-12 &&
                   steps.steps[static_cast<size_t>(idx)] < steps.steps[static_cast<size_t>(best)]) {
            best = idx;
        }
    }
    return best;
}

} // namespace

std::vector<Rat> induced_step_law(const StepSet& steps, const SiteLaw& law,
                                  const SelectionRule& rule) {
    std::vector<Rat> p(steps.steps.size(), Rat(0));
    for (const auto& a : law.atoms) {
        switch (rule.kind) {
            case SelectionRule::Kind::uniform: {
                Rat share = a.probability / Rat(static_cast<std::int64_t>(a.vector.counts.size()));
                for (auto& [idx, cnt] : a.vector.counts) {
                    (void)cnt;
                    p[static_cast<size_t>(idx)] += share;
                }
                break;
            }
            case SelectionRule::Kind::particle_uniform: {
                Rat total(a.vector.total());
                for (auto& [idx, cnt] : a.vector.counts)
                    p[static_cast<size_t>(idx)] += a.probability * Rat(cnt) / total;
                break;
            }
            case SelectionRule::Kind::r_extremal: {
                int idx = extremal_step(steps, a.vector, rule.direction);
                p[static_cast<size_t>(idx)] += a.probability;
                break;
            }
        }
    }
    return p;
}

std::vector<Rat> induced_drift(const StepSet& steps, const SiteLaw& law,
                               const SelectionRule& rule) {
    std::vector<Rat> p = induced_step_law(steps, law, rule);
    std::vector<Rat> drift(static_cast<size_t>(steps.dimension), Rat(0));
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero()) continue;
        for (int c = 0; c < steps.dimension; ++c)
            drift[static_cast<size_t>(c)] += p[i] * Rat(steps.steps[i][c]);
    }
    return drift;
}

NestlingClass classify_nestling(const EnvironmentLaw& law, const SelectionRule& rule) {
    std::vector<std::vector<Rat>> drifts;
    for (const auto& sl : law.support)
        drifts.push_back(induced_drift(law.step_set, sl, rule));

    OriginPosition pos = classify_origin_against_hull(law.dimension(), drifts);
    NestlingClass out;
    out.decided_exactly = pos.exact;
    switch (pos.pos) {
        case OriginPosition::Pos::inside: out.kind = NestlingKind::nestling; break;
        case OriginPosition::Pos::boundary:
        case OriginPosition::Pos::inconclusive:
            out.kind = NestlingKind::marginally_nestling;
            out.decided_exactly = pos.pos == OriginPosition::Pos::boundary && pos.exact;
            break;
        case OriginPosition::Pos::outside:
            out.kind = NestlingKind::non_nestling;
            out.witness = pos.witness;
            break;
    }
    return out;
}

std::vector<Site> induced_walk_run(const EnvironmentRealization& env, const SelectionRule& rule,
                                   const Site& start, int horizon, std::uint64_t seed) {
    const StepSet& steps = env.law().step_set;
    std::vector<Site> path;
    path.reserve(static_cast<size_t>(horizon) + 1);
    Site x = start;
    KeyedRng rng(seed);
    for (int n = 0; n <= horizon; ++n) {
        path.push_back(x);
        if (n == horizon) break;
        const SiteLaw& law = env.law_at(x);
        int atom = law.sample_atom(rng.u64(2 * static_cast<std::uint64_t>(n)));
        const OffspringVector& v = law.atoms[static_cast<size_t>(atom)].vector;
        int chosen = -1;
        switch (rule.kind) {
            case SelectionRule::Kind::uniform: {
                std::uint64_t pick =
                    rng.u64(2 * static_cast<std::uint64_t>(n) + 1) % v.counts.size();
                chosen = v.counts[pick].first;
                break;
            }
            case SelectionRule::Kind::particle_uniform: {
                std::uint64_t pick = rng.u64(2 * static_cast<std::uint64_t>(n) + 1) %
                                     static_cast<std::uint64_t>(v.total());
                for (auto& [idx, cnt] : v.counts) {
                    if (pick < static_cast<std::uint64_t>(cnt)) {
                        chosen = idx;
                        break;
                    }
                    pick -= static_cast<std::uint64_t>(cnt);
                }
                break;
            }
            case SelectionRule::Kind::r_extremal:
                chosen = extremal_step(steps, v, rule.direction);
                break;
        }
        x = site_add(x, steps.steps[static_cast<size_t>(chosen)]);
    }
    return path;
}

} // namespace brwre
