#include "brwre/presets.hpp"

#include <stdexcept>

namespace brwre {

namespace {

OffspringVector vec(std::initializer_list<std::pair<int, std::int32_t>> entries) {
    OffspringVector v;
    for (auto& e : entries) v.counts.push_back(e);
    return v;
}

SiteLaw law_of(std::initializer_list<std::pair<OffspringVector, Rat>> atoms) {
    SiteLaw l;
    for (auto& [v, p] : atoms) l.atoms.push_back({v, p});
    return l;
}

StepSet unit_steps_2d() {
    StepSet ss;
    ss.dimension = 2;
    ss.steps = {make_site({1, 0}), make_site({0, 1}), make_site({-1, 0}), make_site({0, -1})};
    return ss;
}

// Two-law family on the four unit steps of Z^2: a mildly drifting
// single-child law plus a strongly branching one.
EnvironmentLaw make_exx_q1(const Rat& alpha) {
    StepSet ss = unit_steps_2d();
    OffspringVector v1 = vec({{0, 1}});
    OffspringVector v2 = vec({{1, 1}});
    OffspringVector v3 = vec({{2, 1}});
    OffspringVector v4 = vec({{3, 1}});
    OffspringVector v5 = vec({{0, 1}, {1, 2}, {2, 1}, {3, 1}});
    SiteLaw w0 = law_of({{v1, Rat(3, 8)}, {v2, Rat(1, 4)}, {v3, Rat(1, 8)}, {v4, Rat(1, 4)}});
    SiteLaw wm = law_of({{v3, Rat(1, 8)}, {v5, Rat(7, 8)}});
    return build_law(ss, {w0, wm}, {alpha, Rat(1) - alpha});
}

// Same drifting law, now mixed with a right-pushing branching law whose
// drift strength `a` moves the model between the certified regimes.
EnvironmentLaw make_exx_q2(const Rat& alpha, const Rat& a) {
    StepSet ss = unit_steps_2d();
    OffspringVector v1 = vec({{0, 1}});
    OffspringVector v2 = vec({{1, 1}});
    OffspringVector v3 = vec({{2, 1}});
    OffspringVector v4 = vec({{3, 1}});
    OffspringVector v5 = vec({{0, 1}, {1, 2}, {2, 1}, {3, 1}});
    SiteLaw w0 = law_of({{v1, Rat(3, 8)}, {v2, Rat(1, 4)}, {v3, Rat(1, 8)}, {v4, Rat(1, 4)}});
    SiteLaw wp = law_of({{v1, a}, {v5, Rat(1) - a}});
    return build_law(ss, {w0, wp}, {alpha, Rat(1) - alpha});
}

StepSet steps_1d_nn() {
    StepSet ss;
    ss.dimension = 1;
    ss.steps = {make_site({-1}), make_site({1})};
    return ss;
}

SiteLaw drift_law_1d(const Rat& left_p) {
    // One child, left with probability left_p, right otherwise.
    return law_of({{vec({{0, 1}}), left_p}, {vec({{1, 1}}), Rat(1) - left_p}});
}

// Three-law nearest-neighbour family: two driftful non-branching laws with
// opposite directions (trap material) and one branching law.
EnvironmentLaw make_qdecay(const Rat& p) {
    StepSet ss = steps_1d_nn();
    SiteLaw w1 = drift_law_1d(p);            // drifts right
    SiteLaw w2 = drift_law_1d(Rat(1) - p);   // drifts left
    Rat two_p = Rat(2) * p;
    Rat branch = Rat(1) - two_p;
    SiteLaw w3 = law_of({
        {vec({{0, 1}}), p},
        {vec({{1, 1}}), p},
        {vec({{0, 2}}), branch / Rat(4)},
        {vec({{0, 1}, {1, 1}}), branch / Rat(2)},
        {vec({{1, 2}}), branch / Rat(4)},
    });
    return build_law(ss, {w1, w2, w3}, {Rat(1, 3), Rat(1, 3), Rat(1, 3)});
}

// Same trap material plus a law that always splits into one left and one
// right child.
EnvironmentLaw make_infexp(const Rat& p, const Rat& alpha1, const Rat& alpha2) {
    StepSet ss = steps_1d_nn();
    SiteLaw w1 = drift_law_1d(p);
    SiteLaw w2 = drift_law_1d(Rat(1) - p);
    SiteLaw w3 = law_of({{vec({{0, 1}, {1, 1}}), Rat(1)}});
    return build_law(ss, {w1, w2, w3}, {alpha1, alpha2, Rat(1) - alpha1 - alpha2});
}

// Family of lazy laws indexed by n: mean offspring n/(n-1), each child
// independently stepping left 1/n, staying (n-5)/n, right 4/n.
EnvironmentLaw make_driftmix(int nmin, int nmax) {
    if (nmin < 6 || nmax < nmin)
        throw std::invalid_argument("driftmix requires 6 <= nmin <= nmax");
    StepSet ss;
    ss.dimension = 1;
    ss.steps = {make_site({-1}), make_site({0}), make_site({1})};
    std::vector<SiteLaw> support;
    std::vector<Rat> weights;
    int count = nmax - nmin + 1;
    for (int n = nmin; n <= nmax; ++n) {
        Rat one_child(n - 2, n - 1);
        Rat two_children(1, n - 1);
        Rat left(1, n), stay(n - 5, n), right(4, n);
        SiteLaw w = law_of({
            {vec({{0, 1}}), one_child * left},
            {vec({{1, 1}}), one_child * stay},
            {vec({{2, 1}}), one_child * right},
            {vec({{0, 2}}), two_children * left * left},
            {vec({{0, 1}, {1, 1}}), two_children * Rat(2) * left * stay},
            {vec({{0, 1}, {2, 1}}), two_children * Rat(2) * left * right},
            {vec({{1, 2}}), two_children * stay * stay},
            {vec({{1, 1}, {2, 1}}), two_children * Rat(2) * stay * right},
            {vec({{2, 2}}), two_children * right * right},
        });
        support.push_back(w);
        weights.push_back(Rat(1, count));
    }
    return build_law(ss, support, weights);
}

// Deterministic spreading laws with jump lengths 1 and 2; the asymptotic
// speed depends on the mixture weight, not just the support.
EnvironmentLaw make_d1_shape(const Rat& alpha) {
    StepSet ss;
    ss.dimension = 1;
    ss.steps = {make_site({-2}), make_site({-1}), make_site({0}), make_site({1}),
                make_site({2})};
    SiteLaw w1 = law_of({{vec({{1, 1}, {2, 1}, {3, 1}}), Rat(1)}});
    SiteLaw w2 = law_of({{vec({{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}), Rat(1)}});
    return build_law(ss, {w1, w2}, {alpha, Rat(1) - alpha});
}

// Every vector sends one child up and one right, so the visited set fills
// the simplex x1 + x2 <= n in the positive quadrant exactly.
EnvironmentLaw make_flat_edge(const Rat& alpha) {
    StepSet ss = unit_steps_2d();
    OffspringVector v1 = vec({{0, 1}, {1, 1}});
    OffspringVector v2 = vec({{0, 1}, {1, 1}, {2, 1}});
    OffspringVector v3 = vec({{0, 1}, {1, 1}, {3, 1}});
    SiteLaw w1 = law_of({{v1, Rat(2, 5)}, {v2, Rat(2, 5)}, {v3, Rat(1, 5)}});
    SiteLaw w2 = law_of({{v1, Rat(2, 5)}, {v2, Rat(1, 5)}, {v3, Rat(2, 5)}});
    return build_law(ss, {w1, w2}, {alpha, Rat(1) - alpha});
}

void require_open_unit(const Rat& x, const char* name) {
    if (x.sign() <= 0 || x >= Rat(1))
        throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
}

} // namespace

std::vector<std::string> preset_names() {
    return {"exx-q1", "exx-q2", "qdecay", "infexp", "driftmix", "d1-shape", "flat-edge"};
}

std::string preset_description(const std::string& name) {
    if (name == "exx-q1") return "d=2 recurrent two-law family (alpha)";
    if (name == "exx-q2") return "d=2 family with drift parameter a; recurrent, transient or open depending on a (alpha, a)";
    if (name == "qdecay") return "d=1 three-law family with trap material and rare branching (p)";
    if (name == "infexp") return "d=1 trap family with an always-splitting law (p, alpha1, alpha2)";
    if (name == "driftmix") return "d=1 lazy mixture family, transient via an exact certificate (nmin, nmax)";
    if (name == "d1-shape") return "d=1 deterministic spreading laws with speed 2-alpha (alpha)";
    if (name == "flat-edge") return "d=2 recurrent family whose shape has a flat edge (alpha)";
    throw std::invalid_argument("unknown preset: " + name);
}

EnvironmentLaw make_preset(const std::string& name, const PresetParams& params) {
    if (name == "exx-q1") {
        require_open_unit(params.alpha, "alpha");
        return make_exx_q1(params.alpha);
    }
    if (name == "exx-q2") {
        require_open_unit(params.alpha, "alpha");
        require_open_unit(params.a, "a");
        return make_exx_q2(params.alpha, params.a);
    }
    if (name == "qdecay") {
        if (params.p.sign() <= 0 || params.p >= Rat(1, 2))
            throw std::invalid_argument("p must lie in (0,1/2)");
        return make_qdecay(params.p);
    }
    if (name == "infexp") {
        if (params.p.sign() <= 0 || params.p >= Rat(1, 2))
            throw std::invalid_argument("p must lie in (0,1/2)");
        require_open_unit(params.alpha1, "alpha1");
        require_open_unit(params.alpha2, "alpha2");
        if (params.alpha1 + params.alpha2 >= Rat(1))
            throw std::invalid_argument("alpha1 + alpha2 must be below 1");
        return make_infexp(params.p, params.alpha1, params.alpha2);
    }
    if (name == "driftmix") return make_driftmix(params.nmin, params.nmax);
    if (name == "d1-shape") {
        require_open_unit(params.alpha, "alpha");
        return make_d1_shape(params.alpha);
    }
    if (name == "flat-edge") {
        require_open_unit(params.alpha, "alpha");
        return make_flat_edge(params.alpha);
    }
    throw std::invalid_argument("unknown preset: " + name);
}

} // namespace brwre
