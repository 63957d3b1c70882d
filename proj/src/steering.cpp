#include "devur/steering.hpp"

#include <cmath>

namespace devur::steering {

namespace {

constexpr int kUp = 0, kDown = 1, kVac = 2;

struct SiteEigensystem {
    // particle-sector spin eigenvectors lifted to the 3-dim site space,
    // ascending eigenvalue (-1/2, +1/2), plus the vacuum vector.
    std::array<CVec, 2> spin_vectors;
    std::array<double, 2> spin_values;
    CVec vacuum;
};

SiteEigensystem site_eigensystem(const CMat& j_site) {
    CMat block(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) block(i, j) = j_site(i, j);
    const Spectrum spec = eig_hermitian(block);
    SiteEigensystem out;
    for (int k = 0; k < 2; ++k) {
        CVec v(3);
        v[0] = spec.eigenvectors[static_cast<size_t>(k)][0];
        v[1] = spec.eigenvectors[static_cast<size_t>(k)][1];
        v[2] = 0.0;
        out.spin_vectors[static_cast<size_t>(k)] = std::move(v);
        out.spin_values[static_cast<size_t>(k)] = spec.eigenvalues[static_cast<size_t>(k)];
    }
    out.vacuum = CVec(3);
    out.vacuum[kVac] = 1.0;
    return out;
}

struct ConditionalStats {
    double weight = 0;               // P(b)
    double mean = 0;                 // <J_A> on the conditional state
    std::array<double, 2> q_spin{};  // particle-outcome probabilities
    double q_vac = 0;
};

std::vector<ConditionalStats> conditional_stats(const LossyWernerModel& model, Axis axis) {
    const SiteOperators ops = site_operators();
    const CMat& j_site = site_spin(ops, axis);
    const SiteEigensystem sys = site_eigensystem(j_site);

    std::vector<const CVec*> b_outcomes{&sys.spin_vectors[0], &sys.spin_vectors[1], &sys.vacuum};
    const CMat eye3 = CMat::identity(3);

    std::vector<ConditionalStats> out;
    for (const CVec* vb : b_outcomes) {
        const CMat proj = kron(eye3, CMat::outer(*vb, *vb));
        const CMat sandwiched = proj.mul(model.rho_f).mul(proj);
        const double weight = sandwiched.trace().real();
        if (weight < 1e-14) continue; // zero-probability branch contributes nothing

        CMat cond = sandwiched;
        cond *= Complex(1.0 / weight, 0.0);
        const CMat rho_a = partial_trace(cond, 3, 3, Keep::A);

        ConditionalStats st;
        st.weight = weight;
        for (int k = 0; k < 2; ++k) {
            const CVec& va = sys.spin_vectors[static_cast<size_t>(k)];
            st.q_spin[static_cast<size_t>(k)] = std::max(0.0, va.dot(rho_a.apply(va)).real());
            st.mean += sys.spin_values[static_cast<size_t>(k)] * st.q_spin[static_cast<size_t>(k)];
        }
        st.q_vac = std::max(0.0, sys.vacuum.dot(rho_a.apply(sys.vacuum)).real());
        out.push_back(st);
    }
    return out;
}

} // namespace

SiteOperators site_operators() {
    SiteOperators ops;
    ops.jx = CMat(3, 3);
    ops.jx(kUp, kDown) = 0.5;
    ops.jx(kDown, kUp) = 0.5;
    ops.jy = CMat(3, 3);
    ops.jy(kDown, kUp) = Complex(0, 0.5);
    ops.jy(kUp, kDown) = Complex(0, -0.5);
    ops.jz = CMat(3, 3);
    ops.jz(kUp, kUp) = 0.5;
    ops.jz(kDown, kDown) = -0.5;
    ops.n = CMat(3, 3);
    ops.n(kUp, kUp) = 1.0;
    ops.n(kDown, kDown) = 1.0;
    return ops;
}

const CMat& site_spin(const SiteOperators& ops, Axis axis) {
    switch (axis) {
        case Axis::X: return ops.jx;
        case Axis::Y: return ops.jy;
        default: return ops.jz;
    }
}

CMat lift_a(const CMat& op) { return kron(op, CMat::identity(3)); }
CMat lift_b(const CMat& op) { return kron(CMat::identity(3), op); }

LossyWernerModel build_model(double p, double eta) {
    require(p >= 0 && p <= 1, Err::ParamOutOfRange, "build_model: p must be in [0,1]");
    require(eta > 0 && eta <= 1, Err::ParamOutOfRange, "build_model: eta must be in (0,1]");

    // Werner state on the two-qubit particle sector; the singlet lives on
    // |up,down> and |down,up>.
    CMat rho_w(4, 4);
    const double off = (1.0 - p) / 4.0;
    for (int i = 0; i < 4; ++i) rho_w(i, i) = off;
    rho_w(1, 1) += p * 0.5;
    rho_w(2, 2) += p * 0.5;
    rho_w(1, 2) -= p * 0.5;
    rho_w(2, 1) -= p * 0.5;

    LossyWernerModel model;
    model.p = p;
    model.eta = eta;
    model.rho_f = CMat(9, 9);

    auto joint = [](int site_a, int site_b) { return 3 * site_a + site_b; };

    // both particles detected: eta^2 * rho_W on the particle-particle block
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    model.rho_f(joint(i, j), joint(k, l)) = eta * eta * rho_w(2 * i + j, 2 * k + l);

    // exactly one particle lost: (eta/2)(1-eta) on each of the four states
    const double single = 0.5 * eta * (1.0 - eta);
    for (int s = 0; s < 2; ++s) {
        model.rho_f(joint(s, kVac), joint(s, kVac)) = single;
        model.rho_f(joint(kVac, s), joint(kVac, s)) = single;
    }

    // both lost
    model.rho_f(joint(kVac, kVac), joint(kVac, kVac)) = (1.0 - eta) * (1.0 - eta);
    return model;
}

double number_expectation(const LossyWernerModel& model) {
    return expval(lift_a(site_operators().n), State::mixed(model.rho_f));
}

double inferred_deviation(const LossyWernerModel& model, Axis axis, double alpha) {
    require(alpha > 0, Err::InvalidAlpha, "inferred_deviation: alpha must be positive");
    double total = 0;
    for (const ConditionalStats& st : conditional_stats(model, axis)) {
        double dev = 0;
        const double spin_vals[2] = {-0.5, 0.5};
        for (int k = 0; k < 2; ++k)
            dev += st.q_spin[static_cast<size_t>(k)] *
                   std::pow(std::abs(spin_vals[k] - st.mean), alpha);
        // no-particle outcome: deviation referenced to detection, weight zero
        total += st.weight * dev;
    }
    return total;
}

double inferred_conditional_variance(const LossyWernerModel& model, Axis axis) {
    double total = 0;
    for (const ConditionalStats& st : conditional_stats(model, axis)) {
        double var = 0;
        const double spin_vals[2] = {-0.5, 0.5};
        for (int k = 0; k < 2; ++k) {
            const double d = spin_vals[k] - st.mean;
            var += st.q_spin[static_cast<size_t>(k)] * d * d;
        }
        var += st.q_vac * st.mean * st.mean; // vacuum outcome sits at eigenvalue 0
        total += st.weight * var;
    }
    return total;
}

namespace {

/// Iterator over the series terms: base_m = eta^{2m} F_m(alpha) /
/// (2^alpha (2m-1)!) * [eta(alpha-2m-1)/(2m) - 1] with F_m the falling
/// product alpha(alpha-1)...(alpha-2m-2). Log-magnitude + sign accumulation.
class SeriesTerms {
public:
    SeriesTerms(double eta, double alpha) : eta_(eta), alpha_(alpha) {
        log_mag_ = -alpha_ * std::log(2.0) + 2.0 * std::log(eta_);
        sign_ = 1.0;
        // F_1 = alpha(alpha-1)(alpha-2)(alpha-3)(alpha-4), (2m-1)! = 1
        for (int k = 0; k <= 4; ++k) push_factor(alpha_ - k);
    }

    /// base_m for the current m (starts at 1); call advance() to move on.
    double base(int m) const {
        if (zero_) return 0.0;
        const double bracket = eta_ * (alpha_ - 2.0 * m - 1.0) / (2.0 * m) - 1.0;
        return sign_ * std::exp(log_mag_) * bracket;
    }

    void advance(int m) {
        // F_{m+1}/F_m adds factors (alpha-2m-3)(alpha-2m-4); the factorial
        // gains (2m)(2m+1); eta^{2m} gains eta^2.
        push_factor(alpha_ - 2.0 * m - 3.0);
        push_factor(alpha_ - 2.0 * m - 4.0);
        log_mag_ -= std::log(2.0 * m) + std::log(2.0 * m + 1.0);
        log_mag_ += 2.0 * std::log(eta_);
    }

    bool zero() const { return zero_; }

private:
    void push_factor(double f) {
        if (f == 0.0) {
            zero_ = true;
            return;
        }
        log_mag_ += std::log(std::abs(f));
        if (f < 0) sign_ = -sign_;
    }
    double eta_, alpha_;
    double log_mag_ = 0;
    double sign_ = 1;
    bool zero_ = false;
};

} // namespace

double per_term_threshold(int m, double p) {
    require(m >= 1, Err::InvalidArgument, "per_term_threshold: m must be >= 1");
    require(p > 0 && p <= 1, Err::ParamOutOfRange, "per_term_threshold: p in (0,1]");
    return 1.0 / (3.0 * std::pow(p, 2 * m));
}

AlphaSeries alpha_bound(double eta, double alpha, int terms, double p) {
    require(alpha > 0 && alpha <= 1, Err::InvalidAlpha, "alpha_bound: alpha must be in (0,1]");
    require(eta > 0 && eta <= 1, Err::ParamOutOfRange, "alpha_bound: eta must be in (0,1]");
    require(p >= 0 && p <= 1, Err::ParamOutOfRange, "alpha_bound: p must be in [0,1]");
    require(terms >= 1, Err::InvalidArgument, "alpha_bound: terms must be >= 1");

    AlphaSeries out;
    const double lead = 3.0 * eta / std::pow(2.0, alpha);
    out.rhs_bound = lead;
    out.lhs_inferred = lead;

    SeriesTerms it(eta, alpha);
    if (it.zero()) {
        out.terms_used = 0; // alpha = 1: every correction term vanishes
        return out;
    }

    double prev_mag = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= terms; ++m) {
        const double base = it.base(m);
        const double t26 = base;
        const double t27 = 3.0 * eta * std::pow(p, 2 * m) * base;
        out.rhs_bound += t26;
        out.lhs_inferred += t27;
        out.bound_terms.push_back(t26);
        out.inferred_terms.push_back(t27);
        out.terms_used = m;

        const double mag = std::abs(base);
        const double floor = 1e-14 * std::max({1.0, std::abs(out.rhs_bound), std::abs(out.lhs_inferred)});
        if (mag < floor) {
            out.truncation_error = mag;
            return out;
        }
        if (m == terms) {
            it.advance(m);
            out.truncation_error = std::abs(it.base(m + 1));
            require(mag < prev_mag || out.truncation_error < floor, Err::SeriesNotConverged,
                    "alpha_bound: term ratio test failed before the cap");
            return out;
        }
        prev_mag = mag;
        it.advance(m);
    }
    return out;
}

namespace {

/// Sign of sum_m base_m (3 eta p^{2m} - 1): negative means the inferred series
/// falls below the bound series (violation). Decides by the partial sum when
/// the terms die off, or by the (eventually fixed) tail sign when they do not.
bool series_comparison_violated(double eta, double alpha, double p) {
    SeriesTerms it(eta, alpha);
    if (it.zero()) return false; // degenerate series carries no information
    double sum = 0;
    double prev_mag = -1;
    int stable_sign_run = 0;
    double last_sign = 0;
    constexpr int kCap = 400;
    for (int m = 1; m <= kCap; ++m) {
        const double d = it.base(m) * (3.0 * eta * std::pow(p, 2 * m) - 1.0);
        sum += d;
        const double mag = std::abs(d);
        if (mag < 1e-15 * std::max(1.0, std::abs(sum))) return sum < 0;

        const double sgn = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
        stable_sign_run = (sgn == last_sign) ? stable_sign_run + 1 : 0;
        last_sign = sgn;
        // growing same-sign terms dominate every partial remainder
        if (prev_mag >= 0 && mag >= prev_mag && stable_sign_run >= 8) return sgn < 0;
        prev_mag = mag;
        it.advance(m);
    }
    fail(Err::SeriesNotConverged, "series comparison undecided at the term cap");
}

} // namespace

InferredReport check_epr_violation(const LossyWernerModel& model, double alpha) {
    InferredReport rep;
    rep.alpha = alpha;

    if (std::abs(alpha - 1.0) < 1e-12) {
        double lhs = 0;
        const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
        for (int i = 0; i < 3; ++i) {
            rep.axis_deviation[static_cast<size_t>(i)] = inferred_deviation(model, axes[i], 1.0);
            lhs += rep.axis_deviation[static_cast<size_t>(i)];
        }
        const double n = number_expectation(model);
        rep.lhs = lhs;
        rep.rhs = 1.5 * n - 0.5 * n * n;
        rep.violated = (rep.rhs - rep.lhs) > 1e-12;
        return rep;
    }
    if (std::abs(alpha - 2.0) < 1e-12) {
        double lhs = 0;
        const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
        for (int i = 0; i < 3; ++i) {
            rep.axis_deviation[static_cast<size_t>(i)] = inferred_conditional_variance(model, axes[i]);
            lhs += rep.axis_deviation[static_cast<size_t>(i)];
        }
        rep.lhs = lhs;
        rep.rhs = 0.5 * number_expectation(model);
        rep.violated = (rep.rhs - rep.lhs) > 1e-12;
        return rep;
    }
    require(alpha > 0, Err::InvalidAlpha, "check_epr_violation: alpha must be positive");

    const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
    for (int i = 0; i < 3; ++i)
        rep.axis_deviation[static_cast<size_t>(i)] = inferred_deviation(model, axes[i], alpha);
    rep.lhs = rep.axis_deviation[0] + rep.axis_deviation[1] + rep.axis_deviation[2];
    rep.rhs = std::numeric_limits<double>::quiet_NaN(); // series values may not converge at eta = 1
    if (alpha < 1.0) {
        rep.violated = series_comparison_violated(model.eta, alpha, model.p);
    } else {
        rep.outside_proof_regime = true;
        rep.violated = false;
    }
    return rep;
}

ThresholdCurve threshold_curve(double alpha, const std::vector<double>& p_grid) {
    require((alpha > 0 && alpha <= 1.0) || alpha == 2.0, Err::InvalidAlpha,
            "threshold_curve: no violation criterion outside alpha in (0,1] or alpha = 2");
    ThresholdCurve curve;
    curve.alpha = alpha;
    for (double p : p_grid) {
        require(p > 0 && p <= 1, Err::ParamOutOfRange, "threshold_curve: p grid must lie in (0,1]");
        curve.p.push_back(p);
        auto violated_at = [&](double eta) {
            return check_epr_violation(build_model(p, eta), alpha).violated;
        };
        if (!violated_at(1.0)) {
            curve.eta_star.emplace_back(std::nullopt);
            continue;
        }
        double lo = 1e-6, hi = 1.0;
        if (violated_at(lo)) {
            curve.eta_star.emplace_back(lo);
            continue;
        }
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            (violated_at(mid) ? hi : lo) = mid;
        }
        curve.eta_star.emplace_back(0.5 * (lo + hi));
    }
    return curve;
}

} // namespace devur::steering
