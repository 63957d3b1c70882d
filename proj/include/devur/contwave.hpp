#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "devur/quadrature.hpp"

namespace devur::contwave {

using Complex = std::complex<double>;

struct Tail {
    enum class Kind { Exponential, Power, Compact };
    Kind kind = Kind::Exponential;
    double exponent = 0; // nu, for Power: p(x) ~ c |x|^-nu

    static Tail exponential() { return {Kind::Exponential, 0}; }
    static Tail power(double nu) { return {Kind::Power, nu}; }
    static Tail compact() { return {Kind::Compact, 0}; }
};

/// One-dimensional probability density with tail classification for
/// quadrature and moment-existence decisions.
struct Density1D {
    std::string name;
    std::function<double(double)> pdf;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    Tail left_tail = Tail::exponential();
    Tail right_tail = Tail::exponential();
    double scale = 1.0;                // characteristic width, seeds tail mapping
    std::vector<double> breakpoints;   // kinks / non-smooth points
};

/// A moment that may fail to exist; `divergent` is decided by the tail
/// exponent (nu - order <= 1) rather than by an overflowing number.
struct MaybeDivergent {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool divergent = false;
    bool finite() const { return !divergent; }
};

struct DispersionSummary {
    MaybeDivergent mean;
    MaybeDivergent md; // mean absolute deviation about the mean
    MaybeDivergent sd;
    double diff_entropy = 0; // -integral p ln p, nats
    double norm = 0;         // measured integral of p
};

struct DispersionOptions {
    QuadOptions quad{1e-10, 1e-14, 6000, nullptr};
    double norm_tol = 1e-6;
};

/// Mean, MD, SD and differential entropy of a density, by adaptive
/// quadrature with analytic tail treatment. Throws NotNormalized when the
/// density does not integrate to 1 within norm_tol.
DispersionSummary dispersion(const Density1D& p, const DispersionOptions& opts = {});

/// Integral of |x - center|^order * p over support intersected with
/// [center - cutoff, center + cutoff]. Used by the cutoff-growth divergence
/// diagnostics.
double running_central_moment(const Density1D& p, int order, double center, double cutoff);

Density1D laplace_density(double mu, double center = 0);
Density1D gaussian_density(double sigma, double center = 0);
Density1D uniform_density(double halfwidth, double center = 0);

/// F-distribution density on x >= 0 with positive integer dof parameters.
Density1D f_distribution(int d1, int d2);

/// Uniform-grid samples of a wavefunction psi(x).
struct SampledWavefunction {
    double x0 = 0;
    double step = 1;
    std::vector<Complex> values;
    double norm_residual = 0; // |sum |psi|^2 step - 1|

    int count() const { return static_cast<int>(values.size()); }
    double x_at(int j) const { return x0 + j * step; }
    double grid_norm_sq() const;
    void update_norm_residual();
    /// Checks the state invariants: unit grid norm and decayed boundary.
    void require_state(double norm_tol = 1e-6, double boundary_tol = 1e-10) const;
};

SampledWavefunction sample_wavefunction(const std::function<Complex(double)>& psi, double x0,
                                        double step, int count);

/// Ground-state-quality grids for the bundled wavepackets.
SampledWavefunction gaussian_wavepacket(double sigma, double center = 0);
SampledWavefunction laplace_wavepacket(double mu, double center = 0);

/// Continuous Fourier transform psi~(p) = (2 pi)^{-1/2} integral psi(x) e^{-ipx} dx
/// evaluated on the conjugate grid (hbar = 1). Throws GridTooCoarse when the
/// Parseval residual exceeds 1e-4.
SampledWavefunction fourier(const SampledWavefunction& psi);

/// Moment analysis of |psi|^2 on its grid, with a kink-consistent trapezoid
/// correction at the mean and power-tail extrapolation beyond the grid when
/// the sampled tail is cleanly power-like.
DispersionSummary sampled_dispersion(const SampledWavefunction& psi);

struct IntelligentProduct {
    double md_x = 0, md_p = 0, md_product = 0;
    double sd_x = 0, sd_p = 0, sd_product = 0;
};

/// MD and SD uncertainties in position and momentum and their products.
IntelligentProduct intelligent_product(const SampledWavefunction& psi);

struct RankedEntropy {
    std::string name;
    double entropy = 0;
    double mean_residual = 0;
    double md_residual = 0;
};

/// Ranks candidate densities (each constrained to mean 0 and MD = md_target)
/// by differential entropy, highest first. Throws ConstraintViolated when a
/// candidate misses the constraints by more than 1e-6.
std::vector<RankedEntropy> entropy_maximizer_check(double md_target,
                                                   const std::vector<Density1D>& candidates);

struct PotentialGrid {
    double x0 = 0;
    double step = 1;
    std::vector<double> v;
    std::vector<bool> masked;
    int masked_count = 0; // interior points masked by |psi| < 1e-8
};

/// V(x) = energy_offset + psi''/(2 psi) by centered finite differences
/// (hbar = m = 1), masked where |psi| < 1e-8. psi must be real-valued.
PotentialGrid potential_from_wavefunction(const SampledWavefunction& psi, double energy_offset);

struct ParetoPatch {
    double c = 0, x0 = 0, w = 0;       // phi(x) = c exp(-(x-x0)^2 / w)
    double residual_value = 0;          // |phi(lambda) - f(lambda)|
    double residual_derivative = 0;     // |phi'(lambda) - f'(lambda)|
    double residual_mass = 0;           // |integral phi^2 - (1-p)|
};

struct ParetoState {
    double alpha = 0, lambda = 0, mass = 0;
    ParetoPatch patch;
    std::function<double(double)> evaluator; // psi(x), exact piecewise form
    Density1D density;                       // |psi|^2
    SampledWavefunction psi;
};

/// Piecewise wavefunction with a Pareto power tail above lambda and a
/// Gaussian patch below, matched in value, derivative and mass.
ParetoState pareto_wavefunction(double alpha_p, double lambda, double mass_p);

/// The same construction without sampling a grid (patch solve + density only).
ParetoState pareto_state_analytic(double alpha_p, double lambda, double mass_p);

} // namespace devur::contwave
