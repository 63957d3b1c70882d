// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "devur/contwave.hpp"
#include "devur/entwit.hpp"
#include "devur/relations.hpp"
#include "devur/rng.hpp"
#include "devur/steering.hpp"

using namespace devur;

namespace {

constexpr double kPi = std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Check {
    bool ok = true;
    std::ostringstream detail;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
    void note(const std::string& what) {
        detail << (detail.str().empty() ? "" : "; ") << what;
    }
};

// ---------------------------------------------------------------- criteria

Check intelligent_products() {
    Check c;
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto g = contwave::intelligent_product(contwave::gaussian_wavepacket(1.0));
        const double dt = seconds_since(t0);
        c.expect(std::abs(g.md_product - 1.0 / kPi) < 1e-4, "gaussian MD product off 1/pi");
        c.expect(std::abs(g.sd_product - 0.5) < 1e-6, "gaussian SD product off 1/2");
        c.expect(dt < 5.0, "gaussian runtime over 5 s");
        std::ostringstream s;
        s.precision(10);
        s << "gaussian md " << g.md_product << " sd " << g.sd_product << " (" << dt << " s)";
        c.note(s.str());
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto l = contwave::intelligent_product(contwave::laplace_wavepacket(1.0));
        const double dt = seconds_since(t0);
        c.expect(std::abs(l.md_product - 1.0 / kPi) < 1e-4, "laplace MD product off 1/pi");
        c.expect(std::abs(l.sd_product - 1.0 / std::sqrt(2.0)) < 1e-5,
                 "laplace SD product off 1/sqrt(2)");
        c.expect(dt < 5.0, "laplace runtime over 5 s");
        std::ostringstream s;
        s.precision(10);
        s << "laplace md " << l.md_product << " sd " << l.sd_product << " (" << dt << " s)";
        c.note(s.str());
    }
    return c;
}

Check steering_closed_form() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    double worst_dev = 0, worst_n = 0;
    for (int i = 0; i <= 20; ++i)
        for (int j = 1; j <= 20; ++j) {
            const double p = i / 20.0;
            const double eta = j / 20.0;
            const auto model = steering::build_model(p, eta);
            const double expect = 0.5 * eta * (1.0 - eta * eta * p * p);
            for (auto ax : {steering::Axis::X, steering::Axis::Y, steering::Axis::Z})
                worst_dev = std::max(worst_dev,
                                     std::abs(steering::inferred_deviation(model, ax) - expect));
            worst_n = std::max(worst_n, std::abs(steering::number_expectation(model) - eta));
        }
    const double dt = seconds_since(t0);
    c.expect(worst_dev < 1e-12, "inferred deviation misses the closed form");
    c.expect(worst_n < 1e-12, "<N^A> != eta");
    c.expect(dt < 10.0, "runtime over 10 s");
    std::ostringstream s;
    s << "max |dev - closed form| " << worst_dev << ", max |<N>-eta| " << worst_n << " (" << dt
      << " s)";
    c.note(s.str());
    return c;
}

Check steering_thresholds() {
    Check c;
    const std::vector<double> grid{0.6, 0.7, 0.8, 0.9, 1.0};
    const auto md = steering::threshold_curve(1.0, grid);
    const auto sd = steering::threshold_curve(2.0, grid);
    double worst = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!md.eta_star[i] || !sd.eta_star[i]) {
            c.expect(false, "missing threshold at p=" + std::to_string(grid[i]));
            continue;
        }
        worst = std::max(worst, std::abs(*md.eta_star[i] - 1.0 / (3.0 * grid[i] * grid[i])));
        c.expect(*sd.eta_star[i] > *md.eta_star[i] + 1e-6,
                 "variance curve not strictly above at p=" + std::to_string(grid[i]));
    }
    c.expect(worst < 1e-8, "eta threshold misses 1/(3p^2)");

    // p-threshold at unit efficiency
    double lo = 0.5, hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (steering::check_epr_violation(steering::build_model(mid, 1.0)).violated ? hi : lo) = mid;
    }
    const double p_star = 0.5 * (lo + hi);
    c.expect(std::abs(p_star - 1.0 / std::sqrt(3.0)) < 1e-8, "p threshold at eta=1 misses 3^-1/2");
    std::ostringstream s;
    s << "max eta error " << worst << ", p* " << p_star;
    c.note(s.str());
    return c;
}

Check alpha_optimality() {
    Check c;
    double min_eta = 1.0;
    for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
        const auto curve = steering::threshold_curve(alpha, {1.0});
        if (!curve.eta_star[0]) {
            c.expect(false, "no violation found at alpha=" + std::to_string(alpha));
            continue;
        }
        min_eta = std::min(min_eta, *curve.eta_star[0]);
    }
    c.expect(std::abs(min_eta - 1.0 / 3.0) < 1e-6, "minimum efficiency over alpha is not 1/3");
    std::ostringstream s;
    s << "min eta* " << min_eta;
    c.note(s.str());
    return c;
}

Check witness_checks() {
    Check c;
    double worst_thresh = 0;
    for (double a2 : {0.5, 0.75, 0.9}) {
        const auto fam = entwit::WitnessFamily::make(std::sqrt(a2), std::sqrt(1.0 - a2));
        const auto anchor = entwit::witness(fam, State::pure(fam.states[0]));
        c.expect(anchor.sum_md < 1e-14, "anchor state deviation sum above 1e-14");
        const double expected = std::sqrt(1.0 - 8.0 * a2 * (1.0 - a2) / 3.0);
        worst_thresh = std::max(worst_thresh, std::abs(entwit::werner_threshold(fam) - expected));
        const auto stress = entwit::separable_stress_test(fam, 10000, 20250811);
        c.expect(stress.ok, "product state violated the separable bound");
    }
    c.expect(worst_thresh < 1e-9, "werner threshold misses the closed form");
    std::ostringstream s;
    s << "max threshold error " << worst_thresh;
    c.note(s.str());
    return c;
}

Check relation_suites() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(0xACCE5501);
    const double alphas[3] = {0.5, 1.0, 2.0};
    int violations = 0, saturation_misses = 0;
    constexpr int kTrials = 100000;
    for (int trial = 0; trial < kTrials; ++trial) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 5);
        const Observable a(rng.hermitian(dim));
        const Observable b(rng.hermitian(dim));
        const State psi = State::pure(rng.haar_state(dim));
        const double alpha = alphas[trial % 3];

        const auto prod = product_relation(a, b, psi, alpha);
        if (prod.slack < -1e-8) ++violations;
        const auto sum = sum_relation(a, b, psi, std::nullopt, SumSign::Auto, alpha);
        if (sum.slack < -1e-8) ++violations;
        if (!sum.degenerate_witness && std::abs(sum.slack) >= 1e-10) ++saturation_misses;
        const auto lemma = entropic_lemma_check(a, psi, alpha);
        if (lemma.slack < -1e-8) ++violations;
    }
    const double dt = seconds_since(t0);
    c.expect(violations == 0, "relation violated beyond -1e-8");
    c.expect(saturation_misses == 0, "saturating witness missed |slack| < 1e-10");
    c.expect(dt < 60.0, "runtime over 60 s");
    std::ostringstream s;
    s << kTrials << " trials, 0 violations expected, got " << violations << " ("
      << dt << " s)";
    c.note(s.str());
    return c;
}

Check state_independent() {
    Check c;
    ObservableSet set;
    {
        CMat z(2, 2);
        z(0, 0) = 1.0;
        z(1, 1) = -1.0;
        CMat x(2, 2);
        x(0, 1) = 1.0;
        x(1, 0) = 1.0;
        set.observables.emplace_back(std::move(z), "sz");
        set.observables.emplace_back(std::move(x), "sx");
    }
    const double bound = state_independent_bound(set, 1.0);
    const double closed = std::log(2.0) - 2.0 * std::log(1.0 + std::exp(-2.0));
    c.expect(std::abs(bound - closed) < 1e-12, "bound misses ln2 - 2 ln(1+e^-2)");
    c.expect(std::abs(bound - 0.43929) < 1e-4, "bound far from 0.43929");

    Rng rng(0xACCE5507);
    double min_sum = 1e300;
    for (int trial = 0; trial < 10000; ++trial) {
        const State psi = State::pure(rng.haar_state(2));
        const double sum = md_uncertainty(set.observables[0], psi).value +
                           md_uncertainty(set.observables[1], psi).value;
        min_sum = std::min(min_sum, sum);
    }
    c.expect(min_sum >= bound, "a random state dipped below the bound");
    std::ostringstream s;
    s << "bound " << bound << ", min observed sum " << min_sum;
    c.note(s.str());
    return c;
}

Check existence_regimes() {
    Check c;
    for (int d1 : {1, 2})
        for (int d2 = 1; d2 <= 8; ++d2) {
            const auto s = contwave::dispersion(contwave::f_distribution(d1, d2));
            const std::string tag = "F(" + std::to_string(d1) + "," + std::to_string(d2) + ")";
            c.expect(s.mean.finite() == (d2 > 2), tag + " mean existence wrong");
            c.expect(s.sd.finite() == (d2 > 4), tag + " sd existence wrong");
        }
    const auto pareto = contwave::pareto_wavefunction(1.5, 1.0, 0.5);
    const auto pd = contwave::dispersion(pareto.density);
    c.expect(pd.md.finite(), "pareto MD should be finite");
    c.expect(!pd.sd.finite(), "pareto SD should diverge");
    c.note("16 f-distribution regimes plus the pareto tail");
    return c;
}

Check potential_reconstruction() {
    Check c;
    const int d1 = 1, d2 = 5;
    const auto dens = contwave::f_distribution(d1, d2);
    const double step = 1e-3;
    const double x_lo = 0.1 - step, x_hi = 25.0 + step;
    const int count = static_cast<int>((x_hi - x_lo) / step) + 1;
    const auto psi = contwave::sample_wavefunction(
        [&](double x) { return contwave::Complex(std::sqrt(dens.pdf(x)), 0.0); }, x_lo, step,
        count);
    const auto pot = contwave::potential_from_wavefunction(psi, 0.0);

    // closed form for psi = sqrt(f): with g = (d1-2)/4, h = -(d1+d2)/4,
    // r = d1/d2, V = g(g-1)/(2x^2) + g h r / (x(1+rx)) + h(h-1) r^2 / (2(1+rx)^2)
    const double g = (d1 - 2) / 4.0, h = -(d1 + d2) / 4.0, r = d1 / static_cast<double>(d2);
    auto closed = [&](double x) {
        return 0.5 * g * (g - 1.0) / (x * x) + g * h * r / (x * (1.0 + r * x)) +
               0.5 * h * (h - 1.0) * r * r / ((1.0 + r * x) * (1.0 + r * x));
    };
    double worst = 0;
    int compared = 0;
    for (int j = 1; j + 1 < static_cast<int>(pot.v.size()); ++j) {
        if (pot.masked[static_cast<size_t>(j)]) continue;
        const double x = pot.x0 + j * pot.step;
        if (x < 0.1 - 1e-12 || x > 25.0 + 1e-12) continue;
        const double expect = closed(x);
        worst = std::max(worst, std::abs(pot.v[static_cast<size_t>(j)] - expect) / std::abs(expect));
        ++compared;
    }
    c.expect(compared > 20000, "comparison grid unexpectedly small");
    c.expect(worst < 1e-3, "potential misses the closed form");
    std::ostringstream s;
    s << "max relative error " << worst << " over " << compared << " points";
    c.note(s.str());
    return c;
}

Check entropy_maximizer() {
    Check c;
    const double md = 1.0;
    const auto ranking = contwave::entropy_maximizer_check(
        md, {contwave::laplace_density(md), contwave::gaussian_density(md * std::sqrt(kPi / 2.0)),
             contwave::uniform_density(2.0 * md)});
    c.expect(ranking[0].name == "laplace", "laplace does not rank first");
    c.expect(std::abs(ranking[0].entropy - (1.0 + std::log(2.0))) < 1e-8,
             "laplace entropy misses 1 + ln 2");
    c.expect(ranking[0].entropy > ranking[1].entropy + 1e-3, "margin to second place too small");
    c.expect(ranking[0].entropy > ranking[2].entropy + 1e-3, "margin to third place too small");
    std::ostringstream s;
    s << ranking[0].name << " " << ranking[0].entropy << " > " << ranking[1].name << " "
      << ranking[1].entropy << " > " << ranking[2].name << " " << ranking[2].entropy;
    c.note(s.str());
    return c;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* label;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "intelligent-state products", intelligent_products},
        {2, "steering closed form on the (p, eta) grid", steering_closed_form},
        {3, "steering efficiency thresholds", steering_thresholds},
        {4, "alpha-sweep optimality at p = 1", alpha_optimality},
        {5, "entanglement witness anchors and thresholds", witness_checks},
        {6, "relation suites on 1e5 random trials", relation_suites},
        {7, "state-independent bound", state_independent},
        {8, "moment existence regimes", existence_regimes},
        {9, "potential reconstruction", potential_reconstruction},
        {10, "entropy maximizer", entropy_maximizer},
    };

    int failures = 0;
    for (const auto& crit : criteria) {
        Check result;
        try {
            result = crit.run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.note(std::string("exception: ") + e.what());
        }
        if (!result.ok) ++failures;
        std::printf("criterion %2d [%s]: %s", crit.id, crit.label, result.ok ? "PASS" : "FAIL");
        if (!result.detail.str().empty()) std::printf(" -- %s", result.detail.str().c_str());
        std::printf("\n");
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
