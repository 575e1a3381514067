#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "brwre/model.hpp"

namespace brwre {

/// D(r, v): the best projection on r among the steps that receive at least
/// one child. Positively homogeneous and subadditive in r.
double eval_d(const StepSet& steps, const std::vector<double>& r, const OffspringVector& v);
Rat eval_d_exact(const StepSet& steps, const std::vector<Rat>& r, const OffspringVector& v);

/// phi_Q(r) = max over support laws of sum_v w(v) D(r, v).
double phi_q(const EnvironmentLaw& law, const std::vector<double>& r);
Rat phi_q_exact(const EnvironmentLaw& law, const std::vector<Rat>& r);

/// Per support law, the finite cloud { sum_v w(v) x_v : x_v a step of v },
/// pooled across laws. The support function of the pooled hull is phi_Q.
struct DriftPolytopeSet {
    std::vector<std::vector<Rat>> pooled;
    bool truncated = false; // enumeration cap exceeded; pooled is partial
};
DriftPolytopeSet drift_polytope_set(const EnvironmentLaw& law, size_t cap = 1'000'000);

/// Exact position of the origin relative to the convex hull of a rational
/// point cloud. Decided in rational arithmetic for d <= 2; d >= 3 uses a
/// minimum-norm-point iteration whose separating witnesses are re-verified
/// exactly, with `inconclusive` near degeneracy.
struct OriginPosition {
    enum class Pos { inside, boundary, outside, inconclusive };
    Pos pos = Pos::inconclusive;
    bool exact = false;
    // outside: direction r with max_p r.p < 0, exact whenever `exact`.
    std::vector<Rat> witness;
    // inside, d <= 2: hull vertices (their hull strictly contains 0).
    std::vector<std::vector<Rat>> hull;
};

OriginPosition classify_origin_against_hull(int dim,
                                            const std::vector<std::vector<Rat>>& points);

enum class RecurrenceKind { StrictInterior, BoundaryWithUE, Boundary, Negative, Inconclusive };

const char* recurrence_kind_name(RecurrenceKind k);

struct RecurrenceVerdict {
    RecurrenceKind kind = RecurrenceKind::Inconclusive;
    // Negative: a direction with phi_Q < 0, exact in rationals for d <= 2.
    std::vector<Rat> witness_direction;
    // Interior kinds, d <= 2: pooled points whose hull strictly contains 0
    // (the hull vertices themselves).
    std::vector<std::vector<Rat>> interior_certificate;
    bool point_cloud_truncated = false;

    bool certified_recurrent() const {
        return kind == RecurrenceKind::StrictInterior || kind == RecurrenceKind::BoundaryWithUE;
    }
};

/// Decides the position of the origin relative to the pooled selection-point
/// hull: strictly interior, on the boundary (upgraded when uniform
/// ellipticity holds), or separated with an exact witness direction.
/// d <= 2 is decided entirely in rational arithmetic.
RecurrenceVerdict recurrence_check(const EnvironmentLaw& law);

struct ConditionLCertificate {
    std::vector<double> s; // unit direction
    double lambda = 1.0;

    // Exact form: s is a signed coordinate direction and lambda rational,
    // with all per-law values verified <= 1 in rational arithmetic.
    bool exact = false;
    std::optional<int> axis;
    int axis_sign = 1;
    Rat lambda_exact;
    std::vector<Rat> per_law_values_exact;

    std::vector<double> per_law_values;
    bool marginal = false; // some value within 1e-9 of the boundary
};

/// Minimizes g(s, t) = max over laws of sum_y mu_y e^{t (y.s)} over the unit
/// sphere and t in [-20, 20] (convex in t, golden section; signed axes first,
/// then a direction grid with Nelder-Mead refinement). Candidates found on an
/// axis are snapped to rational lambda and re-verified exactly; absence of a
/// certificate is a value, not an error.
std::optional<ConditionLCertificate> condition_l_search(const EnvironmentLaw& law);

struct ConditionLVerification {
    bool ok = false;
    bool exact = false;
    std::vector<Rat> values_exact;
    std::vector<double> values;
};

/// Checks sum_y mu_y lambda^{y.s} <= 1 for every support law: exact when s
/// is a signed coordinate direction and lambda rational, else floating with
/// tolerance 1e-9.
ConditionLVerification verify_condition_l(const EnvironmentLaw& law,
                                          const std::vector<double>& s, double lambda);
ConditionLVerification verify_condition_l_exact(const EnvironmentLaw& law, int axis,
                                                int axis_sign, const Rat& lambda);

struct Triv2Witness {
    size_t law_index = 0;
    Rat mean_self_offspring;
};

/// A support law whose mean number of children left in place exceeds 1, if
/// any (sufficient for recurrence). Requires the zero step to be in the set.
std::optional<Triv2Witness> check_triv2(const EnvironmentLaw& law);

class InconsistentCertificates : public std::runtime_error {
public:
    InconsistentCertificates()
        : std::runtime_error("both a recurrence and a transience certificate verified; "
                             "this indicates an implementation bug") {}
};

enum class Classification { RecurrentCertified, TransientCertified, Unknown };

const char* classification_name(Classification c);

struct ClassifyResult {
    Classification verdict = Classification::Unknown;
    ConditionsReport conditions;
    RecurrenceVerdict recurrence;
    std::optional<ConditionLCertificate> transience;
    std::optional<Triv2Witness> triv2;
    // The infinite-mean trivial condition is structurally unsatisfiable for
    // finite-support laws; reported as such rather than checked.
    std::string triv1 = "unsatisfiable under finite support";
};

/// Combines the certificate checkers. Transience counts only when verified
/// exactly or with a strict numerical margin; a certificate that merely
/// touches the boundary numerically leaves the verdict Unknown.
ClassifyResult classify(const EnvironmentLaw& law);

} // namespace brwre
