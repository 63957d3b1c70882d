#pragma once

#include <array>
#include <optional>
#include <vector>

#include "devur/deviation.hpp"

namespace devur::steering {

/// Two-qubit Werner state with detector loss, written on the 9-dimensional
/// two-qutrit detection space (outcomes +1/2, -1/2, no particle per site).
struct LossyWernerModel {
    double p = 0;   // Werner noise parameter
    double eta = 1; // detector efficiency
    CMat rho_f;     // 9x9 block-diagonal density matrix
};

/// Single-site operators on the 3-dimensional detection space
/// {spin-up, spin-down, no particle}: spin-1/2 on the particle sector,
/// annihilating the vacuum; n counts the particle.
struct SiteOperators {
    CMat jx, jy, jz, n;
};

SiteOperators site_operators();

enum class Axis { X, Y, Z };

const CMat& site_spin(const SiteOperators& ops, Axis axis);

/// Lift a single-site operator to the joint space on site A or B.
CMat lift_a(const CMat& op);
CMat lift_b(const CMat& op);

LossyWernerModel build_model(double p, double eta);

double number_expectation(const LossyWernerModel& model); // <N^A>

/// Conditional alpha-deviation of J_axis^A averaged over the outcomes of the
/// matching measurement on B (spin eigenprojectors on the particle sector
/// plus the no-particle projector). Deviations are referenced to detection:
/// the no-particle outcome carries zero deviation weight, i.e. the weight is
/// |a - <J>_b * n_a|^alpha. For alpha = 1 this reproduces
/// (eta/2)(1 - eta^2 p^2) exactly.
double inferred_deviation(const LossyWernerModel& model, Axis axis, double alpha = 1.0);

/// Plain conditional variance of J_axis^A (no-particle outcome included at
/// eigenvalue 0), averaged over B outcomes. This is the quantity entering the
/// established variance-based criterion used as the comparison curve.
double inferred_conditional_variance(const LossyWernerModel& model, Axis axis);

struct InferredReport {
    double alpha = 1;
    std::array<double, 3> axis_deviation{}; // x, y, z
    double lhs = 0;
    double rhs = 0;
    bool violated = false;
    bool outside_proof_regime = false; // alpha above 1 (and not 2): no bound known
};

/// EPR-violation check. alpha = 1: sum of inferred deviations against
/// (3/2)<N> - <N>^2/2. alpha = 2: conditional variances against <N>/2.
/// alpha in (0,1): termwise comparison of the generalized-deviation series.
/// Other alpha values report the inferred deviations only, flagged as
/// outside the proof regime (no violation is ever claimed there).
InferredReport check_epr_violation(const LossyWernerModel& model, double alpha = 1.0);

struct AlphaSeries {
    double rhs_bound = 0;       // local-bound series value
    double lhs_inferred = 0;    // inferred-deviation series value
    double truncation_error = 0;
    int terms_used = 0;
    std::vector<double> bound_terms;    // m = 1.. contributions to rhs_bound
    std::vector<double> inferred_terms; // matching contributions with p^{2m}
};

/// Truncated series evaluation of the generalized-deviation bound and its
/// inferred counterpart (the latter carries p^{2m} factors). Coefficients are
/// accumulated in log magnitude + sign. Throws SeriesNotConverged when the
/// term ratio test fails before the cap.
AlphaSeries alpha_bound(double eta, double alpha, int terms, double p = 1.0);

/// Per-term saturation threshold of the series comparison: eta = 1/(3 p^{2m}).
double per_term_threshold(int m, double p);

struct ThresholdCurve {
    double alpha = 1;
    std::vector<double> p;
    std::vector<std::optional<double>> eta_star; // empty optional: no violation even at eta = 1
};

/// Bisection (to 1e-9) of the detection-efficiency threshold over a grid of
/// Werner parameters.
ThresholdCurve threshold_curve(double alpha, const std::vector<double>& p_grid);

} // namespace devur::steering
