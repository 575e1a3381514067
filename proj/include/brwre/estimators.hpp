#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brwre/criteria.hpp"
#include "brwre/environment.hpp"
#include "brwre/simulator.hpp"

namespace brwre {

/// Shared Monte Carlo configuration. Quenched mode fixes the environment
/// seed and varies only the walk seed; annealed mode re-draws both per
/// replica.
struct McConfig {
    std::size_t replicas = 1000;
    bool quenched = false;
    std::uint64_t env_seed = 1;
    std::uint64_t walk_seed = 2;
    SimMode mode = SimMode::residual;
    std::uint64_t residual_threshold = 4096;
    int jobs = 1;
};

struct TailCurve {
    Site target;
    std::vector<int> grid;
    std::vector<double> survival; // estimated P[T > n_j], non-increasing
    std::vector<double> lo;       // Clopper-Pearson 95% bounds
    std::vector<double> hi;
    std::size_t replicas = 0;
    double censored_fraction = 0; // replicas with T past the last grid point
    bool quenched = false;
    std::uint64_t env_seed = 0;
    bool any_saturated = false;
};

/// Survival curve of the hitting time of `target` from the origin over the
/// horizon grid, with exact binomial confidence bounds.
TailCurve estimate_tail(const EnvironmentLaw& law, const Site& target,
                        const std::vector<int>& grid, const McConfig& cfg,
                        const std::optional<EnvironmentPatch>& patch = std::nullopt);

struct MeanHittingLadder {
    Site target;
    std::vector<int> rungs;
    std::vector<double> censored_mean; // E[min(T, N)] per rung
    std::vector<double> std_error;
    double growth_exponent = 0; // slope of log censored mean vs log N
    std::size_t replicas = 0;
};

/// Censored-mean ladder E[min(T, N)] with a divergence diagnostic: the
/// fitted growth exponent of the censored mean in N.
MeanHittingLadder estimate_mean_hitting(const EnvironmentLaw& law, const Site& target,
                                        const std::vector<int>& rungs, const McConfig& cfg);

class ConditionAMissing : public std::runtime_error {
public:
    ConditionAMissing()
        : std::runtime_error("occupied-set shape variants require the even-step "
                             "aperiodicity condition") {}
};

struct ShapeEstimate {
    int time = 0;
    std::size_t replicas = 0;
    std::vector<std::vector<double>> directions;
    // Per-direction mean and standard deviation of sup{y.u}/n.
    struct Radii {
        std::vector<double> mean;
        std::vector<double> sd;
    };
    Radii b;
    std::optional<Radii> bar_b;
    std::optional<Radii> tilde_b;
    double convexity_defect = 0; // max violation of support sublinearity
    bool any_saturated = false;
};

struct ShapeVariants {
    bool bar_b = false;
    bool tilde_b = false;
    int tilde_window = 32;
};

/// Directional radii of the n-scaled visited set over `directions` probe
/// directions (evenly spread, plus the signed axes). Requires uniform
/// ellipticity; the occupied-set variants additionally require the
/// aperiodicity condition.
ShapeEstimate estimate_shape(const EnvironmentLaw& law, int time, std::size_t replicas,
                             int directions, const McConfig& cfg,
                             const ShapeVariants& variants = {});

class CertificateInvalid : public std::runtime_error {
public:
    CertificateInvalid()
        : std::runtime_error("certificate failed verification; audit refused") {}
};

struct SupermartingaleReport {
    std::size_t replicas = 0;
    int horizon = 0;
    std::size_t checks = 0;          // per-configuration inequalities tested
    std::size_t violations = 0;      // analytic E[F_{n+1}|config] > F_n cases
    std::vector<double> mean_f;      // empirical mean of F_n across replicas
    bool ok() const { return violations == 0; }
};

/// Verifies the certificate, then asserts the per-configuration inequality
/// E[F_{n+1} | configuration] <= F_n at every step of every replica, where
/// F_n = sum_x eta_n(x) lambda^{x.s}. The expectation is analytic, so the
/// check carries no sampling noise.
SupermartingaleReport supermartingale_audit(const EnvironmentLaw& law,
                                            const std::vector<double>& s, double lambda,
                                            const Site& start, int horizon,
                                            const McConfig& cfg);

class PatchTooSmall : public std::runtime_error {
public:
    PatchTooSmall()
        : std::runtime_error("patch domain must contain W and all its step neighbours") {}
};

struct SeedAudit {
    double rho_hat = 0;   // min over starting sites of the restricted hit rate
    double rho_lo = 0;    // binomial lower bound at the minimizing site
    double epsilon = 0;   // exact min over W of the branching mass
    Rat epsilon_exact;
    double p1 = 0;        // (1 - eps) rho + 2 eps rho (1 - rho)
    double p2 = 0;        // eps rho^2
    double margin = 0;    // p1 + 2 p2 - 1, supercritical when positive
    std::size_t replicas_per_site = 0;
    std::vector<std::pair<Site, double>> per_site_rate;
};

/// Estimates the seed quality: from every site of W + steps, the probability
/// that the population restricted to the patch domain reaches W. Branching
/// mass over W is exact from the patch laws; the derived two-point offspring
/// distribution follows the closed-form polynomial in (eps, rho).
SeedAudit seed_audit(const EnvironmentLaw& law, const EnvironmentPatch& patch,
                     const std::vector<Site>& w, std::size_t replicas_per_site,
                     const McConfig& cfg, int safety_factor = 4);

// Diagnostic cut on the stretched-exponential exponent. A trap-dominated
// curve fits kappa near zero while even the slowly-decaying planar tails fit
// well above 0.6 at desk scale, so the flag separates the two regimes with
// margin on both sides.
inline constexpr double kHeavyTailKappa = 0.35;

struct TailOrderFit {
    // Regression of log survival against ln^d n: -ln S ~ theta ln^d n.
    double theta_hat = 0;
    double r2_theta = 0;
    // Stretched-exponential exponent: ln(-ln S) ~ kappa ln n + c.
    double kappa_hat = 0;
    double r2_kappa = 0;
    std::size_t usable_points = 0; // grid entries with survival in (0,1)
    bool heavy_tail = false;       // kappa below kHeavyTailKappa
};

/// Qualitative tail-order diagnostic; never estimates the theoretical
/// constants, only fits and flags.
TailOrderFit fit_tail_order(const TailCurve& curve, int dimension);

} // namespace brwre
