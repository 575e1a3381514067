#include "brwre/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "brwre/rng.hpp"

namespace brwre {

const char* recurrence_kind_name(RecurrenceKind k) {
    switch (k) {
        case RecurrenceKind::StrictInterior: return "StrictInterior";
        case RecurrenceKind::BoundaryWithUE: return "BoundaryWithUE";
        case RecurrenceKind::Boundary: return "Boundary";
        case RecurrenceKind::Negative: return "Negative";
        case RecurrenceKind::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

const char* classification_name(Classification c) {
    switch (c) {
        case Classification::RecurrentCertified: return "RecurrentCertified";
        case Classification::TransientCertified: return "TransientCertified";
        case Classification::Unknown: return "Unknown";
    }
    return "Unknown";
}

double eval_d(const StepSet& steps, const std::vector<double>& r, const OffspringVector& v) {
    double best = -HUGE_VAL;
    for (auto& [idx, cnt] : v.counts) {
        (void)cnt;
        best = std::max(best, dot(steps.steps[static_cast<size_t>(idx)], r));
    }
    return best;
}

Rat eval_d_exact(const StepSet& steps, const std::vector<Rat>& r, const OffspringVector& v) {
    bool first = true;
    Rat best(0);
    for (auto& [idx, cnt] : v.counts) {
        (void)cnt;
        const Site& s = steps.steps[static_cast<size_t>(idx)];
        Rat val(0);
        for (size_t i = 0; i < r.size(); ++i) val += r[i] * Rat(s[static_cast<int>(i)]);
        if (first || val > best) {
            best = val;
            first = false;
        }
    }
    return best;
}

double phi_q(const EnvironmentLaw& law, const std::vector<double>& r) {
    double best = -HUGE_VAL;
    for (const auto& sl : law.support) {
        double acc = 0.0;
        for (const auto& a : sl.atoms)
            acc += a.probability.to_double() * eval_d(law.step_set, r, a.vector);
        best = std::max(best, acc);
    }
    return best;
}

Rat phi_q_exact(const EnvironmentLaw& law, const std::vector<Rat>& r) {
    bool first = true;
    Rat best(0);
    for (const auto& sl : law.support) {
        Rat acc(0);
        for (const auto& a : sl.atoms)
            acc += a.probability * eval_d_exact(law.step_set, r, a.vector);
        if (first || acc > best) {
            best = acc;
            first = false;
        }
    }
    return best;
}

DriftPolytopeSet drift_polytope_set(const EnvironmentLaw& law, size_t cap) {
    DriftPolytopeSet out;
    const int d = law.dimension();
    for (const auto& sl : law.support) {
        std::vector<std::vector<int>> choices; // per atom, steps with >= 1 child
        size_t product = 1;
        bool overflow = false;
        for (const auto& a : sl.atoms) {
            std::vector<int> sv;
            for (auto& [idx, cnt] : a.vector.counts) {
                (void)cnt;
                sv.push_back(idx);
            }
            choices.push_back(std::move(sv));
            if (product > cap / std::max<size_t>(choices.back().size(), 1)) overflow = true;
            product *= choices.back().size();
        }
        if (overflow || out.pooled.size() + product > cap) {
            out.truncated = true;
            continue;
        }
        std::vector<Rat> point(static_cast<size_t>(d), Rat(0));
        std::function<void(size_t)> rec = [&](size_t atom) {
            if (atom == choices.size()) {
                out.pooled.push_back(point);
                return;
            }
            const Rat& p = sl.atoms[atom].probability;
            for (int step_idx : choices[atom]) {
                const Site& s = law.step_set.steps[static_cast<size_t>(step_idx)];
                for (int i = 0; i < d; ++i)
                    point[static_cast<size_t>(i)] += p * Rat(s[i]);
                rec(atom + 1);
                for (int i = 0; i < d; ++i)
                    point[static_cast<size_t>(i)] -= p * Rat(s[i]);
            }
        };
        rec(0);
    }
    std::sort(out.pooled.begin(), out.pooled.end(),
              [](const std::vector<Rat>& a, const std::vector<Rat>& b) {
                  for (size_t i = 0; i < a.size(); ++i) {
                      if (a[i] < b[i]) return true;
                      if (b[i] < a[i]) return false;
                  }
                  return false;
              });
    out.pooled.erase(std::unique(out.pooled.begin(), out.pooled.end()), out.pooled.end());
    return out;
}

// ---- origin-vs-hull geometry ------------------------------------------------

namespace {

struct P2 {
    Rat x, y;
};

int cross_sign(const P2& o, const P2& a, const P2& b) {
    return ((a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)).sign();
}

Rat dot2(const P2& a, const P2& b) { return a.x * b.x + a.y * b.y; }

// Monotone chain, counterclockwise, strictly convex (collinear boundary
// points dropped).
std::vector<P2> convex_hull2(std::vector<P2> pts) {
    std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const P2& a, const P2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<P2> hull(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross_sign(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross_sign(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

P2 segment_closest_to_origin(const P2& a, const P2& b) {
    P2 ab{b.x - a.x, b.y - a.y};
    Rat len2 = dot2(ab, ab);
    if (len2.is_zero()) return a;
    Rat t = -(a.x * ab.x + a.y * ab.y) / len2;
    if (t <= Rat(0)) return a;
    if (t >= Rat(1)) return b;
    return P2{a.x + t * ab.x, a.y + t * ab.y};
}

// max_p r.p over the cloud, exact.
Rat support_exact(const std::vector<std::vector<Rat>>& pts, const std::vector<Rat>& r) {
    bool first = true;
    Rat best(0);
    for (const auto& p : pts) {
        Rat v(0);
        for (size_t i = 0; i < r.size(); ++i) v += r[i] * p[i];
        if (first || v > best) {
            best = v;
            first = false;
        }
    }
    return best;
}

// Signed coordinate direction separating the cloud from 0, if one exists.
std::vector<Rat> axis_separator(int dim, const std::vector<std::vector<Rat>>& pts) {
    for (int i = 0; i < dim; ++i) {
        for (int sgn : {1, -1}) {
            std::vector<Rat> r(static_cast<size_t>(dim), Rat(0));
            r[static_cast<size_t>(i)] = Rat(sgn);
            if (support_exact(pts, r).sign() < 0) return r;
        }
    }
    return {};
}

double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Gilbert's minimum-norm-point iteration over conv(pts).
std::vector<double> min_norm_point(const std::vector<std::vector<double>>& pts) {
    std::vector<double> x = pts.front();
    for (int iter = 0; iter < 4000; ++iter) {
        const std::vector<double>* s = nullptr;
        double best = HUGE_VAL;
        for (const auto& p : pts) {
            double v = vec_dot(x, p);
            if (v < best) {
                best = v;
                s = &p;
            }
        }
        double xx = vec_dot(x, x);
        if (xx - best <= 1e-14 * (1.0 + xx)) break;
        std::vector<double> dv(x.size());
        for (size_t i = 0; i < x.size(); ++i) dv[i] = (*s)[i] - x[i];
        double dd = vec_dot(dv, dv);
        if (dd <= 0) break;
        double t = std::clamp(-vec_dot(x, dv) / dd, 0.0, 1.0);
        for (size_t i = 0; i < x.size(); ++i) x[i] += t * dv[i];
    }
    return x;
}

std::vector<std::vector<double>> sampled_directions(int d, int count, std::uint64_t seed) {
    std::vector<std::vector<double>> dirs;
    KeyedRng rng(seed);
    for (int k = 0; k < count; ++k) {
        std::vector<double> v(static_cast<size_t>(d));
        double norm2 = 0;
        for (int i = 0; i < d; ++i) {
            std::uint64_t base = static_cast<std::uint64_t>(k) * 64 + 2 * static_cast<std::uint64_t>(i);
            double u1 = rng.uniform(base);
            double u2 = rng.uniform(base + 1);
            double g = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300))) *
                       std::cos(6.283185307179586 * u2);
            v[static_cast<size_t>(i)] = g;
            norm2 += g * g;
        }
        if (norm2 <= 0) continue;
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : v) c *= inv;
        dirs.push_back(std::move(v));
    }
    return dirs;
}

std::optional<std::vector<Rat>> snap_direction(const std::vector<double>& r) {
    std::vector<Rat> out(r.size());
    bool all_zero = true;
    for (size_t i = 0; i < r.size(); ++i) {
        double scaled = r[i] * 720720.0; // highly divisible snapping scale
        double rounded = std::nearbyint(scaled);
        if (std::abs(rounded) > 1e15) return std::nullopt;
        out[i] = Rat(static_cast<std::int64_t>(rounded), 720720);
        if (!out[i].is_zero()) all_zero = false;
    }
    if (all_zero) return std::nullopt;
    return out;
}

OriginPosition classify_d1(const std::vector<std::vector<Rat>>& pts) {
    OriginPosition out;
    out.exact = true;
    Rat mn = pts.front()[0], mx = pts.front()[0];
    for (const auto& p : pts) {
        mn = std::min(mn, p[0]);
        mx = std::max(mx, p[0]);
    }
    if (mn.sign() < 0 && mx.sign() > 0) {
        out.pos = OriginPosition::Pos::inside;
        out.hull = {{mn}, {mx}};
    } else if (mn.sign() > 0) {
        out.pos = OriginPosition::Pos::outside;
        out.witness = {Rat(-1)};
    } else if (mx.sign() < 0) {
        out.pos = OriginPosition::Pos::outside;
        out.witness = {Rat(1)};
    } else {
        out.pos = OriginPosition::Pos::boundary;
    }
    return out;
}

OriginPosition classify_d2(const std::vector<std::vector<Rat>>& pts) {
    OriginPosition out;
    out.exact = true;
    std::vector<P2> p2;
    p2.reserve(pts.size());
    for (const auto& p : pts) p2.push_back(P2{p[0], p[1]});
    std::vector<P2> hull = convex_hull2(p2);
    P2 origin{Rat(0), Rat(0)};

    auto mark_outside = [&]() {
        out.pos = OriginPosition::Pos::outside;
        std::vector<Rat> axis = axis_separator(2, pts);
        if (!axis.empty()) {
            out.witness = axis;
            return;
        }
        bool first = true;
        P2 best{Rat(0), Rat(0)};
        Rat best_d2(0);
        for (size_t i = 0; i < hull.size(); ++i) {
            for (const P2& c :
                 {hull[i], segment_closest_to_origin(hull[i], hull[(i + 1) % hull.size()])}) {
                Rat d2 = dot2(c, c);
                if (first || d2 < best_d2) {
                    best = c;
                    best_d2 = d2;
                    first = false;
                }
            }
        }
        out.witness = {-best.x, -best.y};
    };

    if (hull.size() == 1) {
        if (hull[0].x.is_zero() && hull[0].y.is_zero())
            out.pos = OriginPosition::Pos::boundary;
        else
            mark_outside();
        return out;
    }
    if (hull.size() == 2) {
        if (cross_sign(hull[0], hull[1], origin) == 0 && dot2(hull[0], hull[1]) <= Rat(0))
            out.pos = OriginPosition::Pos::boundary;
        else
            mark_outside();
        return out;
    }
    bool any_zero = false, any_neg = false;
    for (size_t i = 0; i < hull.size(); ++i) {
        int s = cross_sign(hull[i], hull[(i + 1) % hull.size()], origin);
        if (s < 0) any_neg = true;
        if (s == 0) any_zero = true;
    }
    if (any_neg) {
        mark_outside();
    } else if (any_zero) {
        out.pos = OriginPosition::Pos::boundary;
    } else {
        out.pos = OriginPosition::Pos::inside;
        for (const auto& v : hull) out.hull.push_back({v.x, v.y});
    }
    return out;
}

OriginPosition classify_high_dim(int dim, const std::vector<std::vector<Rat>>& pts) {
    OriginPosition out;
    out.exact = false;

    std::vector<Rat> axis = axis_separator(dim, pts);
    if (!axis.empty()) {
        out.pos = OriginPosition::Pos::outside;
        out.exact = true;
        out.witness = axis;
        return out;
    }

    std::vector<std::vector<double>> fpts;
    fpts.reserve(pts.size());
    for (const auto& p : pts) {
        std::vector<double> fp(p.size());
        for (size_t i = 0; i < p.size(); ++i) fp[i] = p[i].to_double();
        fpts.push_back(std::move(fp));
    }

    std::vector<double> c = min_norm_point(fpts);
    double dist = std::sqrt(vec_dot(c, c));
    if (dist > 1e-7) {
        std::vector<double> r(c.size());
        for (size_t i = 0; i < c.size(); ++i) r[i] = -c[i] / dist;
        if (auto snapped = snap_direction(r)) {
            if (support_exact(pts, *snapped).sign() < 0) {
                out.pos = OriginPosition::Pos::outside;
                out.exact = true;
                out.witness = *snapped;
                return out;
            }
        }
        out.pos = OriginPosition::Pos::inconclusive;
        return out;
    }

    double min_support = HUGE_VAL;
    auto support_f = [&](const std::vector<double>& r) {
        double best = -HUGE_VAL;
        for (const auto& p : fpts) best = std::max(best, vec_dot(p, r));
        return best;
    };
    for (const auto& r : sampled_directions(dim, 512, 0xD1F7A33ULL))
        min_support = std::min(min_support, support_f(r));
    for (int i = 0; i < dim; ++i) {
        for (int sgn : {1, -1}) {
            std::vector<double> r(static_cast<size_t>(dim), 0.0);
            r[static_cast<size_t>(i)] = sgn;
            min_support = std::min(min_support, support_f(r));
        }
    }
    out.pos = min_support > 1e-6 ? OriginPosition::Pos::inside
                                 : OriginPosition::Pos::inconclusive;
    return out;
}

} // namespace

OriginPosition classify_origin_against_hull(int dim,
                                            const std::vector<std::vector<Rat>>& points) {
    if (points.empty()) {
        OriginPosition out;
        out.pos = OriginPosition::Pos::inconclusive;
        return out;
    }
    if (dim == 1) return classify_d1(points);
    if (dim == 2) return classify_d2(points);
    return classify_high_dim(dim, points);
}

RecurrenceVerdict recurrence_check(const EnvironmentLaw& law) {
    DriftPolytopeSet dps = drift_polytope_set(law);
    RecurrenceVerdict v;
    v.point_cloud_truncated = dps.truncated;

    if (dps.truncated) {
        // Partial cloud; only exact separating directions (evaluated through
        // phi_Q itself, not the points) can be trusted.
        for (int i = 0; i < law.dimension(); ++i) {
            for (int sgn : {1, -1}) {
                std::vector<Rat> r(static_cast<size_t>(law.dimension()), Rat(0));
                r[static_cast<size_t>(i)] = Rat(sgn);
                if (phi_q_exact(law, r).sign() < 0) {
                    v.kind = RecurrenceKind::Negative;
                    v.witness_direction = r;
                    return v;
                }
            }
        }
        for (const auto& r : sampled_directions(law.dimension(), 512, 0xF00DULL)) {
            if (phi_q(law, r) < -1e-9) {
                if (auto snapped = snap_direction(r)) {
                    if (phi_q_exact(law, *snapped).sign() < 0) {
                        v.kind = RecurrenceKind::Negative;
                        v.witness_direction = *snapped;
                        return v;
                    }
                }
            }
        }
        v.kind = RecurrenceKind::Inconclusive;
        return v;
    }

    OriginPosition pos = classify_origin_against_hull(law.dimension(), dps.pooled);
    switch (pos.pos) {
        case OriginPosition::Pos::inside:
            v.kind = RecurrenceKind::StrictInterior;
            v.interior_certificate = pos.hull;
            break;
        case OriginPosition::Pos::boundary:
            v.kind = check_condition_ue(law).has_value() ? RecurrenceKind::BoundaryWithUE
                                                         : RecurrenceKind::Boundary;
            break;
        case OriginPosition::Pos::outside:
            v.kind = RecurrenceKind::Negative;
            v.witness_direction = pos.witness;
            break;
        case OriginPosition::Pos::inconclusive:
            v.kind = RecurrenceKind::Inconclusive;
            break;
    }
    return v;
}

// ---- Condition L -----------------------------------------------------------

namespace {

struct MuEntry {
    int step_index;
    double mu;
};

std::vector<std::vector<MuEntry>> mu_tables(const EnvironmentLaw& law) {
    std::vector<std::vector<MuEntry>> tables;
    for (const auto& sl : law.support) {
        std::vector<Rat> mu = mean_offspring(law.step_set, sl);
        std::vector<MuEntry> t;
        for (size_t i = 0; i < mu.size(); ++i)
            if (!mu[i].is_zero()) t.push_back({static_cast<int>(i), mu[i].to_double()});
        tables.push_back(std::move(t));
    }
    return tables;
}

double g_value(const EnvironmentLaw& law, const std::vector<std::vector<MuEntry>>& tables,
               const std::vector<double>& s, double t) {
    double worst = -HUGE_VAL;
    for (const auto& table : tables) {
        double acc = 0;
        for (const auto& e : table)
            acc += e.mu *
                   std::exp(t * dot(law.step_set.steps[static_cast<size_t>(e.step_index)], s));
        worst = std::max(worst, acc);
    }
    return worst;
}

template <class F>
std::pair<double, double> golden_min(F f, double a, double b, double tol) {
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    double m = 0.5 * (a + b);
    return {m, f(m)};
}

// Continued-fraction convergents of x with denominators up to max_den,
// best approximations first.
std::vector<Rat> rational_candidates(double x, std::int64_t max_den) {
    std::vector<Rat> out;
    if (!(x > 0) || x > 1e15) return out;
    std::int64_t p_prev = 1, q_prev = 0, p_pp = 0, q_pp = 1;
    double frac = x;
    for (int iter = 0; iter < 40; ++iter) {
        double fl = std::floor(frac);
        if (fl > 9e17) break;
        std::int64_t a = static_cast<std::int64_t>(fl);
        std::int64_t p = a * p_prev + p_pp;
        std::int64_t q = a * q_prev + q_pp;
        if (q > max_den || q < 0 || p < 0) break;
        p_pp = p_prev;
        q_pp = q_prev;
        p_prev = p;
        q_prev = q;
        if (p > 0 && q > 0) out.push_back(Rat(p, q));
        double rem = frac - fl;
        if (rem < 1e-14) break;
        frac = 1.0 / rem;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

const double kSearchBox = 20.0; // t in [-box, box], lambda in [e^-20, e^20]
const double kGoldenTol = 1e-10;
const double kVerifyTol = 1e-9;

// Hyperspherical parametrization: s_k = cos(a_k) * prod_{j<k} sin(a_j).
std::vector<double> direction_from_angles(const std::vector<double>& ang) {
    std::vector<double> out(ang.size() + 1);
    double prod = 1.0;
    for (size_t k = 0; k < ang.size(); ++k) {
        out[k] = prod * std::cos(ang[k]);
        prod *= std::sin(ang[k]);
    }
    out[ang.size()] = prod;
    return out;
}

// Compact Nelder-Mead over a small parameter vector.
template <class F>
std::pair<std::vector<double>, double> nelder_mead(F f, std::vector<double> x0, double scale,
                                                   int iters) {
    const size_t n = x0.size();
    std::vector<std::pair<double, std::vector<double>>> simplex;
    simplex.push_back({f(x0), x0});
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> x = x0;
        x[i] += scale;
        simplex.push_back({f(x), x});
    }
    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    };
    order();
    for (int it = 0; it < iters; ++it) {
        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                centroid[j] += simplex[i].second[j] / static_cast<double>(n);
        auto point_at = [&](double coef) {
            std::vector<double> x(n);
            for (size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + coef * (simplex[n].second[j] - centroid[j]);
            return x;
        };
        std::vector<double> xr = point_at(-1.0);
        double fr = f(xr);
        if (fr < simplex[0].first) {
            std::vector<double> xe = point_at(-2.0);
            double fe = f(xe);
            simplex[n] = fe < fr ? std::make_pair(fe, xe) : std::make_pair(fr, xr);
        } else if (fr < simplex[n - 1].first) {
            simplex[n] = {fr, xr};
        } else {
            std::vector<double> xc = point_at(0.5);
            double fc = f(xc);
            if (fc < simplex[n].first) {
                simplex[n] = {fc, xc};
            } else {
                for (size_t i = 1; i <= n; ++i) {
                    for (size_t j = 0; j < n; ++j)
                        simplex[i].second[j] = simplex[0].second[j] +
                                               0.5 * (simplex[i].second[j] - simplex[0].second[j]);
                    simplex[i].first = f(simplex[i].second);
                }
            }
        }
        order();
    }
    return {simplex[0].second, simplex[0].first};
}

std::optional<ConditionLCertificate> try_exact_axis(const EnvironmentLaw& law, int axis,
                                                    int sign, double lambda_star) {
    for (const Rat& cand : rational_candidates(lambda_star, 10'000)) {
        if (cand == Rat(1) || cand.sign() <= 0) continue;
        try {
            ConditionLVerification ver = verify_condition_l_exact(law, axis, sign, cand);
            if (!ver.ok) continue;
            ConditionLCertificate cert;
            cert.exact = true;
            cert.axis = axis;
            cert.axis_sign = sign;
            cert.lambda_exact = cand;
            cert.lambda = cand.to_double();
            cert.per_law_values_exact = ver.values_exact;
            cert.s.assign(static_cast<size_t>(law.dimension()), 0.0);
            cert.s[static_cast<size_t>(axis)] = sign;
            for (const auto& v : ver.values_exact) {
                cert.per_law_values.push_back(v.to_double());
                if (v == Rat(1)) cert.marginal = true;
            }
            return cert;
        } catch (const std::overflow_error&) {
            continue;
        }
    }
    return std::nullopt;
}

} // namespace

ConditionLVerification verify_condition_l_exact(const EnvironmentLaw& law, int axis,
                                                int axis_sign, const Rat& lambda) {
    if (lambda.sign() <= 0) throw std::domain_error("lambda must be positive");
    ConditionLVerification out;
    out.exact = true;
    out.ok = true;
    for (const auto& sl : law.support) {
        std::vector<Rat> mu = mean_offspring(law.step_set, sl);
        Rat acc(0);
        for (size_t i = 0; i < mu.size(); ++i) {
            if (mu[i].is_zero()) continue;
            int e = axis_sign * law.step_set.steps[i][axis];
            acc += mu[i] * lambda.pow(e);
        }
        out.values_exact.push_back(acc);
        out.values.push_back(acc.to_double());
        if (acc > Rat(1)) out.ok = false;
    }
    return out;
}

ConditionLVerification verify_condition_l(const EnvironmentLaw& law,
                                          const std::vector<double>& s, double lambda) {
    if (!(lambda > 0)) throw std::domain_error("lambda must be positive");
    ConditionLVerification out;
    double t = std::log(lambda);
    for (const auto& sl : law.support) {
        std::vector<Rat> mu = mean_offspring(law.step_set, sl);
        double acc = 0;
        for (size_t i = 0; i < mu.size(); ++i) {
            if (mu[i].is_zero()) continue;
            acc += mu[i].to_double() * std::exp(t * dot(law.step_set.steps[i], s));
        }
        out.values.push_back(acc);
    }
    out.ok = true;
    for (double v : out.values)
        if (v > 1.0 + kVerifyTol) out.ok = false;
    return out;
}

std::optional<ConditionLCertificate> condition_l_search(const EnvironmentLaw& law) {
    const int d = law.dimension();
    auto tables = mu_tables(law);

    struct Best {
        double value = HUGE_VAL;
        std::vector<double> s;
        double t = 0;
        std::optional<int> axis;
        int axis_sign = 1;
    } best;

    // Signed coordinate directions first; exact certificates live here.
    for (int axis = 0; axis < d; ++axis) {
        for (int sign : {1, -1}) {
            std::vector<double> s(static_cast<size_t>(d), 0.0);
            s[static_cast<size_t>(axis)] = sign;
            auto [t_star, g_star] =
                golden_min([&](double t) { return g_value(law, tables, s, t); }, -kSearchBox,
                           kSearchBox, kGoldenTol);
            if (g_star <= 1.0 + 1e-12) {
                if (auto cert = try_exact_axis(law, axis, sign, std::exp(t_star))) return cert;
            }
            if (g_star < best.value) best = {g_star, s, t_star, axis, sign};
        }
    }

    // Direction grid plus Nelder-Mead refinement for d >= 2.
    if (d >= 2 && best.value > 1.0 + 1e-12) {
        auto eval_params = [&](const std::vector<double>& params) {
            std::vector<double> ang(params.begin(), params.end() - 1);
            return g_value(law, tables, direction_from_angles(ang), params.back());
        };
        std::vector<std::vector<double>> grid;
        if (d == 2) {
            for (int k = 0; k < 512; ++k) grid.push_back({6.283185307179586 * k / 512.0});
        } else {
            KeyedRng rng(0xA11CEULL);
            for (int k = 0; k < 512; ++k) {
                std::vector<double> ang;
                for (int i = 0; i < d - 1; ++i)
                    ang.push_back(3.141592653589793 *
                                  rng.uniform(static_cast<std::uint64_t>(k * 8 + i)));
                grid.push_back(ang);
            }
        }
        double grid_best = HUGE_VAL;
        std::vector<double> grid_arg;
        for (const auto& ang : grid) {
            std::vector<double> s = direction_from_angles(ang);
            auto [t_star, g_star] =
                golden_min([&](double t) { return g_value(law, tables, s, t); }, -kSearchBox,
                           kSearchBox, 1e-6);
            if (g_star < grid_best) {
                grid_best = g_star;
                grid_arg = ang;
                grid_arg.push_back(t_star);
            }
        }
        if (!grid_arg.empty()) {
            auto [refined, value] = nelder_mead(eval_params, grid_arg, 0.05, 400);
            if (value < best.value) {
                std::vector<double> ang(refined.begin(), refined.end() - 1);
                best.value = value;
                best.s = direction_from_angles(ang);
                best.t = refined.back();
                best.axis.reset();
                for (int axis = 0; axis < d; ++axis) {
                    for (int sign : {1, -1}) {
                        double diff = 0;
                        for (int i = 0; i < d; ++i)
                            diff += std::abs(best.s[static_cast<size_t>(i)] -
                                             (i == axis ? sign : 0.0));
                        if (diff < 1e-6) {
                            best.axis = axis;
                            best.axis_sign = sign;
                        }
                    }
                }
            }
        }
    }

    if (best.value > 1.0 + kVerifyTol) return std::nullopt;
    if (best.axis) {
        if (auto cert = try_exact_axis(law, *best.axis, best.axis_sign, std::exp(best.t)))
            return cert;
    }
    double lambda = std::exp(best.t);
    if (std::abs(lambda - 1.0) < 1e-12) return std::nullopt;
    ConditionLCertificate cert;
    cert.s = best.s;
    cert.lambda = lambda;
    ConditionLVerification ver = verify_condition_l(law, cert.s, lambda);
    if (!ver.ok) return std::nullopt;
    cert.per_law_values = ver.values;
    for (double v : cert.per_law_values)
        if (v > 1.0 - kVerifyTol) cert.marginal = true;
    return cert;
}

std::optional<Triv2Witness> check_triv2(const EnvironmentLaw& law) {
    int zero_idx = law.step_set.find(Site{});
    if (zero_idx < 0) return std::nullopt;
    for (size_t li = 0; li < law.support.size(); ++li) {
        Rat mean(0);
        for (const auto& a : law.support[li].atoms)
            mean += a.probability * Rat(a.vector.count_at(zero_idx));
        if (mean > Rat(1)) return Triv2Witness{li, mean};
    }
    return std::nullopt;
}

namespace {

bool certifies_transience(const ConditionLCertificate& cert) {
    if (cert.exact) return true; // only built when the rational check passed
    for (double v : cert.per_law_values)
        if (v > 1.0 - kVerifyTol) return false;
    return true;
}

} // namespace

ClassifyResult classify(const EnvironmentLaw& law) {
    ClassifyResult res;
    res.conditions = conditions_report(law);
    res.recurrence = recurrence_check(law);
    res.triv2 = check_triv2(law);
    res.transience = condition_l_search(law);

    bool recurrent = res.recurrence.certified_recurrent() || res.triv2.has_value();
    bool transient = res.transience && certifies_transience(*res.transience);
    if (recurrent && transient) throw InconsistentCertificates();
    if (recurrent)
        res.verdict = Classification::RecurrentCertified;
    else if (transient)
        res.verdict = Classification::TransientCertified;
    else
        res.verdict = Classification::Unknown;
    return res;
}

} // namespace brwre
