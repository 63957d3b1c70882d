#include "devur/contwave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace devur::contwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool moment_diverges(const Tail& tail, int order) {
    return tail.kind == Tail::Kind::Power && tail.exponent - order <= 1.0 + 1e-12;
}

/// Integral of a one-sided infinite tail from B outward (sign +1: toward
/// +inf, -1: toward -inf). `decay` is the power-law exponent of the integrand
/// when the tail is power-like; the substitution x = B u^{-1/(decay-1)} then
/// regularizes the integrand exactly. Exponential and compact tails use the
/// rational map x = B + s t/(1-t). The mapped integrand underflows before the
/// Jacobian overflows, so the 0 * inf corner is guarded explicitly.
double integrate_tail(const std::function<double(double)>& integrand, double b, double sign,
                      double s, const Tail& tail, double decay, const QuadOptions& quad) {
    if (tail.kind == Tail::Kind::Compact) return 0.0;
    if (tail.kind == Tail::Kind::Power && decay > 1.02 && sign * b > 1e-12) {
        const double inv = 1.0 / (decay - 1.0);
        const double babs = std::abs(b);
        auto mapped = [&](double u) {
            const double x = sign * babs * std::pow(u, -inv);
            if (!std::isfinite(x)) return 0.0;
            const double w = integrand(x);
            return w == 0.0 ? 0.0 : w * babs * inv * std::pow(u, -inv - 1.0);
        };
        return integrate_adaptive(mapped, 0.0, 1.0, quad).value;
    }
    auto mapped = [&](double t) {
        const double u = 1.0 - t;
        const double x = b + sign * s * t / u;
        if (!std::isfinite(x)) return 0.0;
        const double w = integrand(x);
        return w == 0.0 ? 0.0 : w * s / (u * u);
    };
    return integrate_adaptive(mapped, 0.0, 1.0, quad).value;
}

/// Integral of `integrand` over the support of `d`. `order` is the polynomial
/// growth of the weight factor (0 for the norm, 1 for mean/MD, 2 for the
/// variance), used to pick the tail substitution exponent. Extra breakpoints
/// seed splits (e.g. the mean for |x - mean| weights).
double integrate_over_support(const Density1D& d, const std::function<double(double)>& integrand,
                              const QuadOptions& quad, std::vector<double> extra_breakpoints = {},
                              int order = 0) {
    const double s = std::max(1e-12, d.scale);
    double core_lo = d.lo, core_hi = d.hi;
    if (!std::isfinite(core_lo)) core_lo = -8.0 * s;
    if (!std::isfinite(core_hi)) core_hi = 8.0 * s;
    for (double b : d.breakpoints) extra_breakpoints.push_back(b);
    // keep the core window covering all breakpoints
    for (double b : extra_breakpoints) {
        if (std::isfinite(b)) {
            if (!std::isfinite(d.lo)) core_lo = std::min(core_lo, b - s);
            if (!std::isfinite(d.hi)) core_hi = std::max(core_hi, b + s);
        }
    }
    if (core_hi <= core_lo) core_hi = core_lo + s;

    double total = integrate_adaptive(integrand, core_lo, core_hi, quad, extra_breakpoints).value;
    if (!std::isfinite(d.hi))
        total += integrate_tail(integrand, core_hi, 1.0, s, d.right_tail,
                                d.right_tail.exponent - order, quad);
    if (!std::isfinite(d.lo))
        total += integrate_tail(integrand, core_lo, -1.0, s, d.left_tail,
                                d.left_tail.exponent - order, quad);
    return total;
}

} // namespace

DispersionSummary dispersion(const Density1D& d, const DispersionOptions& opts) {
    require(static_cast<bool>(d.pdf), Err::InvalidArgument, "dispersion: density has no evaluator");
    DispersionSummary out;

    auto p = [&](double x) { return std::max(0.0, d.pdf(x)); };

    out.norm = integrate_over_support(d, p, opts.quad);
    require(std::abs(out.norm - 1.0) <= opts.norm_tol, Err::NotNormalized,
            "dispersion: density does not integrate to 1");

    const bool mean_div = moment_diverges(d.left_tail, 1) || moment_diverges(d.right_tail, 1);
    const bool var_div = moment_diverges(d.left_tail, 2) || moment_diverges(d.right_tail, 2);

    if (mean_div) {
        out.mean.divergent = true;
        out.md.divergent = true;
    } else {
        out.mean.value =
            integrate_over_support(d, [&](double x) { return x * p(x); }, opts.quad, {}, 1);
        const double m = out.mean.value;
        out.md.value = integrate_over_support(
            d, [&](double x) { return std::abs(x - m) * p(x); }, opts.quad, {m}, 1);
    }

    if (var_div) {
        out.sd.divergent = true;
    } else {
        const double m = out.mean.finite() ? out.mean.value : 0.0;
        const double var = integrate_over_support(
            d, [&](double x) { return (x - m) * (x - m) * p(x); }, opts.quad, {m}, 2);
        out.sd.value = std::sqrt(std::max(0.0, var));
    }

    out.diff_entropy = integrate_over_support(
        d,
        [&](double x) {
            const double px = p(x);
            return px > 0 ? -px * std::log(px) : 0.0;
        },
        opts.quad);
    return out;
}

double running_central_moment(const Density1D& d, int order, double center, double cutoff) {
    require(order >= 0, Err::InvalidArgument, "running_central_moment: negative order");
    require(cutoff > 0, Err::InvalidArgument, "running_central_moment: cutoff must be positive");
    const double a = std::max(d.lo, center - cutoff);
    const double b = std::min(d.hi, center + cutoff);
    if (b <= a) return 0.0;
    QuadOptions quad{1e-9, 1e-13, 6000, nullptr};
    std::vector<double> brk = d.breakpoints;
    brk.push_back(center);
    return integrate_adaptive(
               [&](double x) {
                   return std::pow(std::abs(x - center), order) * std::max(0.0, d.pdf(x));
               },
               a, b, quad, brk)
        .value;
}

Density1D laplace_density(double mu, double center) {
    require(mu > 0, Err::ParamOutOfRange, "laplace_density: mu must be positive");
    Density1D d;
    d.name = "laplace";
    d.pdf = [mu, center](double x) { return std::exp(-std::abs(x - center) / mu) / (2.0 * mu); };
    d.scale = mu;
    d.breakpoints = {center};
    return d;
}

Density1D gaussian_density(double sigma, double center) {
    require(sigma > 0, Err::ParamOutOfRange, "gaussian_density: sigma must be positive");
    Density1D d;
    d.name = "gaussian";
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    d.pdf = [sigma, center, norm](double x) {
        const double u = (x - center) / sigma;
        return norm * std::exp(-0.5 * u * u);
    };
    d.scale = sigma;
    return d;
}

Density1D uniform_density(double halfwidth, double center) {
    require(halfwidth > 0, Err::ParamOutOfRange, "uniform_density: halfwidth must be positive");
    Density1D d;
    d.name = "uniform";
    d.lo = center - halfwidth;
    d.hi = center + halfwidth;
    d.left_tail = d.right_tail = Tail::compact();
    const double h = 0.5 / halfwidth;
    const double lo = d.lo, hi = d.hi;
    d.pdf = [h, lo, hi](double x) { return (x >= lo && x <= hi) ? h : 0.0; };
    d.scale = halfwidth;
    return d;
}

Density1D f_distribution(int d1, int d2) {
    require(d1 >= 1 && d2 >= 1, Err::ParamOutOfRange, "f_distribution: dof must be >= 1");
    Density1D d;
    d.name = "f-distribution";
    d.lo = 0;
    d.hi = kInf;
    d.left_tail = Tail::compact();
    d.right_tail = Tail::power(d2 / 2.0 + 1.0);
    d.scale = d2;
    const double a = d1 / 2.0, b = d2 / 2.0;
    const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(d1 / static_cast<double>(d2));
    const double ratio = d1 / static_cast<double>(d2);
    d.pdf = [a, b, log_norm, ratio](double x) {
        if (x <= 0) return 0.0;
        return std::exp(log_norm + (a - 1.0) * std::log(x) - (a + b) * std::log1p(ratio * x));
    };
    return d;
}

// ---------------------------------------------------------------- sampled grids

double SampledWavefunction::grid_norm_sq() const {
    double s = 0;
    for (const auto& z : values) s += std::norm(z);
    return s * step;
}

void SampledWavefunction::update_norm_residual() { norm_residual = std::abs(grid_norm_sq() - 1.0); }

void SampledWavefunction::require_state(double norm_tol, double boundary_tol) const {
    require(count() >= 16, Err::GridTooCoarse, "wavefunction grid has too few samples");
    require(std::abs(grid_norm_sq() - 1.0) <= norm_tol, Err::NotNormalized,
            "wavefunction is not normalized on its grid");
    const double edge = std::max(std::norm(values.front()), std::norm(values.back()));
    require(edge < boundary_tol, Err::GridTooCoarse,
            "wavefunction does not decay at the grid boundary");
}

SampledWavefunction sample_wavefunction(const std::function<Complex(double)>& psi, double x0,
                                        double step, int count) {
    require(step > 0 && count > 1, Err::InvalidArgument, "sample_wavefunction: bad grid");
    SampledWavefunction out;
    out.x0 = x0;
    out.step = step;
    out.values.resize(static_cast<size_t>(count));
    for (int j = 0; j < count; ++j) out.values[static_cast<size_t>(j)] = psi(x0 + j * step);
    out.update_norm_residual();
    return out;
}

SampledWavefunction gaussian_wavepacket(double sigma, double center) {
    require(sigma > 0, Err::ParamOutOfRange, "gaussian_wavepacket: sigma must be positive");
    const int n = 1 << 15;
    const double half = 48.0 * sigma;
    const double step = 2.0 * half / n;
    const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    return sample_wavefunction(
        [=](double x) {
            const double u = (x - center) / sigma;
            return Complex(norm * std::exp(-0.25 * u * u), 0.0);
        },
        center - half, step, n);
}

SampledWavefunction laplace_wavepacket(double mu, double center) {
    require(mu > 0, Err::ParamOutOfRange, "laplace_wavepacket: mu must be positive");
    const int n = 1 << 17;
    const double half = 128.0 * mu;
    const double step = 2.0 * half / n;
    const double norm = 1.0 / std::sqrt(2.0 * mu);
    return sample_wavefunction(
        [=](double x) {
            return Complex(norm * std::exp(-std::abs(x - center) / (2.0 * mu)), 0.0);
        },
        center - half, step, n);
}

// ---------------------------------------------------------------- fourier

namespace {

void fft_pow2(std::vector<Complex>& a) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const Complex wl = std::polar(1.0, ang);
        for (size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

SampledWavefunction fourier(const SampledWavefunction& psi_in) {
    SampledWavefunction psi = psi_in;
    psi.require_state();
    if (!is_pow2(psi.values.size())) {
        size_t n2 = 1;
        while (n2 < psi.values.size()) n2 <<= 1;
        psi.values.resize(n2, Complex(0, 0));
    }
    const size_t n = psi.values.size();
    const double dx = psi.step;
    const double dp = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
    const double p0 = -0.5 * static_cast<double>(n) * dp;

    std::vector<Complex> work(n);
    for (size_t j = 0; j < n; ++j)
        work[j] = psi.values[j] * std::polar(1.0, -p0 * static_cast<double>(j) * dx);
    fft_pow2(work);

    SampledWavefunction out;
    out.x0 = p0;
    out.step = dp;
    out.values.resize(n);
    const double amp = dx / std::sqrt(2.0 * std::numbers::pi);
    for (size_t k = 0; k < n; ++k) {
        const double pk = p0 + static_cast<double>(k) * dp;
        out.values[k] = amp * std::polar(1.0, -pk * psi.x0) * work[k];
    }
    out.update_norm_residual();

    const double parseval = std::abs(out.grid_norm_sq() - psi_in.grid_norm_sq());
    require(parseval + psi_in.norm_residual <= 1e-4, Err::GridTooCoarse,
            "fourier: Parseval residual exceeds 1e-4");
    return out;
}

// ---------------------------------------------------------------- sampled moments

namespace {

struct TailFit {
    bool valid = false;
    double log_c = 0, nu = 0;
    double x_end = 0; // fit anchored at the grid end
};

/// Pure-power fit rho(x) ~ c x^-nu anchored at the grid end, with a lever arm
/// of a factor 2 in x and two interior validation probes. xs must be positive
/// and ascending.
TailFit fit_power_tail(const std::vector<double>& xs, const std::vector<double>& rho) {
    TailFit fit;
    const size_t n = xs.size();
    if (n < 64) return fit;
    size_t i3 = n - 1;
    while (i3 > 0 && rho[i3] <= 1e-280) --i3;
    const double x3 = xs[i3];
    const double r3 = rho[i3];
    if (x3 <= 0 || r3 <= 0) return fit;

    auto index_at = [&](double x_target) -> long {
        // xs is uniformly spaced; locate by linear interpolation of indices
        const double x_first = xs.front();
        const double span = xs.back() - x_first;
        if (span <= 0) return -1;
        const double frac = (x_target - x_first) / span;
        const long idx = std::lround(frac * static_cast<double>(n - 1));
        return (idx < 0 || idx >= static_cast<long>(n)) ? -1 : idx;
    };

    const long i1 = index_at(0.5 * x3);
    if (i1 <= 0 || i1 >= static_cast<long>(i3) - 8) return fit;
    const double x1 = xs[static_cast<size_t>(i1)];
    const double r1 = rho[static_cast<size_t>(i1)];
    if (x1 <= 0 || r1 <= 0) return fit;

    fit.nu = std::log(r1 / r3) / std::log(x3 / x1);
    fit.log_c = std::log(r3) + fit.nu * std::log(x3);
    fit.x_end = x3;
    if (!(fit.nu > 1.2 && fit.nu < 60.0)) return fit;

    for (double frac : {1.0 / 1.5, 1.0 / 1.2}) {
        const long iv = index_at(frac * x3);
        if (iv <= i1 || iv >= static_cast<long>(i3)) return fit;
        const double xv = xs[static_cast<size_t>(iv)];
        const double rv = rho[static_cast<size_t>(iv)];
        if (xv <= 0 || rv <= 0) return fit;
        const double pred = fit.log_c - fit.nu * std::log(xv);
        if (std::abs(pred - std::log(rv)) > 0.01) return fit;
    }
    fit.valid = true;
    return fit;
}

/// Power-tail remainders beyond the grid, per moment order. A fitted tail
/// whose exponent cannot support a moment marks that moment divergent.
struct SideTail {
    bool fitted = false;
    // weights 1, |x|, x^2 in the side's own |x| coordinate
    std::array<double, 3> remainder{0, 0, 0};
    std::array<bool, 3> usable{false, false, false};
    std::array<bool, 3> divergent{false, false, false};
};

SideTail side_tail(const std::vector<double>& xs, const std::vector<double>& rho) {
    SideTail t;
    const TailFit fit = fit_power_tail(xs, rho);
    if (!fit.valid) return t;
    t.fitted = true;
    const double c = std::exp(fit.log_c);
    for (int k = 0; k < 3; ++k) {
        const double e1 = fit.nu - k - 1.0; // x^{k-nu} integrates to X^{-e1}/e1
        if (e1 <= 0.05) {
            t.divergent[static_cast<size_t>(k)] = true;
            continue;
        }
        t.remainder[static_cast<size_t>(k)] = c * std::pow(fit.x_end, -e1) / e1;
        t.usable[static_cast<size_t>(k)] = true;
    }
    return t;
}

} // namespace

DispersionSummary sampled_dispersion(const SampledWavefunction& psi) {
    const int n = psi.count();
    require(n >= 64, Err::GridTooCoarse, "sampled_dispersion: too few samples");
    const double h = psi.step;

    std::vector<double> rho(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) rho[static_cast<size_t>(j)] = std::norm(psi.values[static_cast<size_t>(j)]);

    // grid sums (rectangle rule; spectrally accurate for decaying samples)
    double s0 = 0, s1 = 0;
    for (int j = 0; j < n; ++j) {
        s0 += rho[static_cast<size_t>(j)];
        s1 += psi.x_at(j) * rho[static_cast<size_t>(j)];
    }
    s0 *= h;
    s1 *= h;

    // power-tail extrapolation on each side, in that side's |x| coordinate
    std::vector<double> xs_r, rho_r, xs_l, rho_l;
    for (int j = 0; j < n; ++j) {
        const double x = psi.x_at(j);
        if (x > 0) {
            xs_r.push_back(x);
            rho_r.push_back(rho[static_cast<size_t>(j)]);
        }
    }
    for (int j = n - 1; j >= 0; --j) {
        const double x = psi.x_at(j);
        if (x < 0) {
            xs_l.push_back(-x);
            rho_l.push_back(rho[static_cast<size_t>(j)]);
        }
    }
    const SideTail right = side_tail(xs_r, rho_r);
    const SideTail left = side_tail(xs_l, rho_l);

    if (right.usable[0]) s0 += right.remainder[0];
    if (left.usable[0]) s0 += left.remainder[0];
    if (right.usable[1]) s1 += right.remainder[1];
    if (left.usable[1]) s1 -= left.remainder[1];

    DispersionSummary out;
    out.norm = s0;
    if (right.divergent[1] || left.divergent[1]) {
        out.mean.divergent = true;
        out.md.divergent = true;
        out.sd.divergent = true;
        double hsum0 = 0;
        for (int j = 0; j < n; ++j) {
            const double r = rho[static_cast<size_t>(j)];
            if (r > 0) hsum0 -= r * std::log(r);
        }
        out.diff_entropy = hsum0 * h;
        return out;
    }
    const double m = s1 / s0;
    out.mean.value = m;

    // interpolated density at the mean, for the |x - m| kink correction
    double rho_at_m = 0;
    {
        const double tpos = (m - psi.x0) / h;
        const int j = static_cast<int>(std::floor(tpos));
        if (j >= 0 && j + 1 < n) {
            const double frac = tpos - j;
            rho_at_m = (1 - frac) * rho[static_cast<size_t>(j)] + frac * rho[static_cast<size_t>(j + 1)];
        }
    }

    double md_sum = 0, var_sum = 0;
    for (int j = 0; j < n; ++j) {
        const double dx = psi.x_at(j) - m;
        md_sum += std::abs(dx) * rho[static_cast<size_t>(j)];
        var_sum += dx * dx * rho[static_cast<size_t>(j)];
    }
    md_sum *= h;
    var_sum *= h;
    md_sum += (h * h / 12.0) * 2.0 * rho_at_m; // Euler-Maclaurin kink term

    if (right.usable[1]) md_sum += right.remainder[1] - m * right.remainder[0]; // x >= X > m
    if (left.usable[1]) md_sum += left.remainder[1] + m * left.remainder[0];
    out.md.value = md_sum / s0;

    if (right.divergent[2] || left.divergent[2]) {
        out.sd.divergent = true;
    } else {
        if (right.usable[2])
            var_sum += right.remainder[2] - 2.0 * m * right.remainder[1] + m * m * right.remainder[0];
        if (left.usable[2])
            var_sum += left.remainder[2] + 2.0 * m * left.remainder[1] + m * m * left.remainder[0];
        out.sd.value = std::sqrt(std::max(0.0, var_sum / s0));
    }

    double hsum = 0;
    for (int j = 0; j < n; ++j) {
        const double r = rho[static_cast<size_t>(j)];
        if (r > 0) hsum -= r * std::log(r);
    }
    out.diff_entropy = hsum * h;
    return out;
}

namespace {

struct GradientMoments {
    double p1 = 0; // <P>
    double p2 = 0; // <P^2>
};

/// First and second momentum moments from forward differences on the x grid:
/// <P^2> = integral |psi'|^2 dx, <P> = Im integral conj(psi) psi' dx. Cell
/// midpoint rule; the power-law momentum tails that alias on the conjugate
/// grid are captured exactly here.
GradientMoments gradient_moments(const SampledWavefunction& psi, int stride) {
    GradientMoments g;
    const int n = psi.count();
    const double h = psi.step * stride;
    for (int j = 0; j + stride < n; j += stride) {
        const Complex d = psi.values[static_cast<size_t>(j + stride)] -
                          psi.values[static_cast<size_t>(j)];
        g.p2 += std::norm(d);
        const Complex mid = 0.5 * (psi.values[static_cast<size_t>(j)] +
                                   psi.values[static_cast<size_t>(j + stride)]);
        g.p1 += std::imag(std::conj(mid) * d);
    }
    g.p2 /= h;
    return g;
}

} // namespace

IntelligentProduct intelligent_product(const SampledWavefunction& psi) {
    psi.require_state();
    const DispersionSummary xstats = sampled_dispersion(psi);
    const SampledWavefunction phi = fourier(psi);
    const DispersionSummary pstats = sampled_dispersion(phi);
    require(xstats.md.finite() && xstats.sd.finite() && pstats.md.finite(),
            Err::ConstraintViolated, "intelligent_product: a dispersion moment diverges");

    IntelligentProduct out;
    out.md_x = xstats.md.value;
    out.md_p = pstats.md.value;
    out.md_product = out.md_x * out.md_p;
    out.sd_x = xstats.sd.value;

    // momentum spread via the gradient identity, Richardson-extrapolated
    const GradientMoments g1 = gradient_moments(psi, 1);
    const GradientMoments g2 = gradient_moments(psi, 2);
    const double norm = psi.grid_norm_sq();
    const double p2 = (g1.p2 + (g1.p2 - g2.p2) / 3.0) / norm;
    const double p1 = (g1.p1 + (g1.p1 - g2.p1) / 3.0) / norm;
    out.sd_p = std::sqrt(std::max(0.0, p2 - p1 * p1));

    out.sd_product = out.sd_x * out.sd_p;
    return out;
}

std::vector<RankedEntropy> entropy_maximizer_check(double md_target,
                                                   const std::vector<Density1D>& candidates) {
    require(md_target > 0, Err::InvalidArgument, "entropy_maximizer_check: md_target must be positive");
    require(!candidates.empty(), Err::InvalidArgument, "entropy_maximizer_check: no candidates");
    std::vector<RankedEntropy> out;
    for (const auto& d : candidates) {
        const DispersionSummary s = dispersion(d);
        RankedEntropy r;
        r.name = d.name;
        r.entropy = s.diff_entropy;
        r.mean_residual = s.mean.finite() ? std::abs(s.mean.value) : kInf;
        r.md_residual = s.md.finite() ? std::abs(s.md.value - md_target) : kInf;
        require(r.mean_residual <= 1e-6 && r.md_residual <= 1e-6, Err::ConstraintViolated,
                "entropy_maximizer_check: candidate '" + d.name + "' misses mean/MD constraints");
        out.push_back(std::move(r));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RankedEntropy& a, const RankedEntropy& b) { return a.entropy > b.entropy; });
    return out;
}

PotentialGrid potential_from_wavefunction(const SampledWavefunction& psi, double energy_offset) {
    const int n = psi.count();
    require(n >= 3, Err::InvalidArgument, "potential_from_wavefunction: need at least 3 samples");
    double max_re = 0, max_im = 0;
    for (const auto& z : psi.values) {
        max_re = std::max(max_re, std::abs(z.real()));
        max_im = std::max(max_im, std::abs(z.imag()));
    }
    require(max_im <= 1e-10 * std::max(1.0, max_re), Err::InvalidArgument,
            "potential_from_wavefunction: wavefunction must be real-valued");

    PotentialGrid out;
    out.x0 = psi.x0;
    out.step = psi.step;
    out.v.assign(static_cast<size_t>(n), kNan);
    out.masked.assign(static_cast<size_t>(n), true);
    const double h2 = psi.step * psi.step;
    for (int j = 1; j + 1 < n; ++j) {
        const double y = psi.values[static_cast<size_t>(j)].real();
        if (std::abs(y) < 1e-8) {
            ++out.masked_count;
            continue;
        }
        const double lap = psi.values[static_cast<size_t>(j + 1)].real() - 2.0 * y +
                           psi.values[static_cast<size_t>(j - 1)].real();
        out.v[static_cast<size_t>(j)] = energy_offset + lap / (h2 * 2.0 * y);
        out.masked[static_cast<size_t>(j)] = false;
    }
    return out;
}

// ---------------------------------------------------------------- pareto

ParetoState pareto_state_analytic(double alpha_p, double lambda, double mass_p) {
    require(alpha_p > 1, Err::ParamOutOfRange, "pareto_wavefunction: alpha must exceed 1");
    require(lambda > 0, Err::ParamOutOfRange, "pareto_wavefunction: lambda must be positive");
    require(mass_p > 0 && mass_p < 1, Err::ParamOutOfRange, "pareto_wavefunction: mass must be in (0,1)");

    const double a = alpha_p;
    const double amp = std::sqrt(mass_p * a / lambda); // f(lambda)

    // Patch phi(x) = c exp(-(x-x0)^2/w): matching value and slope at lambda fixes
    // x0 and c in terms of t = (lambda-x0)/sqrt(w); the mass constraint becomes
    // h(t) = t e^{2t^2} (1 + erf(sqrt(2) t)) = target.
    const double target =
        (1.0 - mass_p) * (a + 1.0) / (4.0 * mass_p * a * std::sqrt(std::numbers::pi / 8.0));
    auto hfun = [](double t) { return t * std::exp(2.0 * t * t) * (1.0 + std::erf(std::sqrt(2.0) * t)); };

    double t_hi = 1.0;
    int guard = 0;
    while (hfun(t_hi) < target) {
        t_hi *= 2.0;
        require(++guard < 60, Err::PatchInfeasible, "pareto patch: mass constraint bracket failed");
    }
    double t_lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (hfun(mid) < target)
            t_lo = mid;
        else
            t_hi = mid;
    }
    const double t = 0.5 * (t_lo + t_hi);
    require(t > 0 && std::isfinite(t), Err::PatchInfeasible, "pareto patch: no feasible solution");

    ParetoState st;
    st.alpha = a;
    st.lambda = lambda;
    st.mass = mass_p;
    const double sqrt_w = 4.0 * lambda * t / (a + 1.0);
    st.patch.w = sqrt_w * sqrt_w;
    st.patch.x0 = lambda - t * sqrt_w;
    st.patch.c = amp * std::exp(t * t);

    const double c = st.patch.c, x0 = st.patch.x0, w = st.patch.w;
    st.evaluator = [=](double x) {
        if (x >= lambda) return amp * std::pow(lambda / x, 0.5 * (a + 1.0));
        const double u = x - x0;
        return c * std::exp(-u * u / w);
    };

    // residuals of the three matching constraints
    st.patch.residual_value = std::abs(st.evaluator(lambda) - amp);
    const double fprime = -amp * (a + 1.0) / (2.0 * lambda);
    const double phiprime = c * std::exp(-t * t) * (-2.0 * (lambda - x0) / w);
    st.patch.residual_derivative = std::abs(phiprime - fprime);

    Density1D dens;
    dens.name = "pareto-wavefunction";
    dens.lo = -kInf;
    dens.hi = kInf;
    dens.left_tail = Tail::exponential();
    dens.right_tail = Tail::power(a + 1.0);
    dens.scale = std::max(lambda, sqrt_w);
    dens.breakpoints = {x0, lambda};
    auto ev = st.evaluator;
    dens.pdf = [ev](double x) {
        const double v = ev(x);
        return v * v;
    };
    st.density = dens;

    {
        QuadOptions quad{1e-11, 1e-15, 6000, nullptr};
        const double patch_mass =
            integrate_adaptive([&](double x) { return dens.pdf(x); },
                               x0 - 8.0 * sqrt_w, lambda, quad, {x0})
                .value;
        st.patch.residual_mass = std::abs(patch_mass - (1.0 - mass_p));
    }
    return st;
}

ParetoState pareto_wavefunction(double alpha_p, double lambda, double mass_p) {
    ParetoState st = pareto_state_analytic(alpha_p, lambda, mass_p);
    const double sqrt_w = std::sqrt(st.patch.w);
    const double x0 = st.patch.x0;
    const double a = st.alpha;

    // sampled form: lambda sits on a grid node; the extent reaches the
    // 1e-10 boundary-density requirement, the step resolves the patch
    const double x_lo_raw = x0 - 7.0 * sqrt_w;
    const double x_hi = 1.3 * std::pow(mass_p * a * std::pow(lambda, a) / 1e-10, 1.0 / (a + 1.0));
    double step = std::min(sqrt_w, lambda) / 100.0;
    constexpr int kMaxSamples = 1 << 23;
    if ((x_hi - x_lo_raw) / step > kMaxSamples - 2) step = (x_hi - x_lo_raw) / (kMaxSamples - 2);
    const int j0 = static_cast<int>(std::ceil((lambda - x_lo_raw) / step));
    const double x_lo = lambda - j0 * step;
    const int count = static_cast<int>((x_hi - x_lo) / step) + 1;
    st.psi = sample_wavefunction([&](double x) { return Complex(st.evaluator(x), 0.0); }, x_lo,
                                 step, count);
    return st;
}

} // namespace devur::contwave
