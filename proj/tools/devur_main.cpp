// devur: mean-deviation uncertainty toolkit command line.

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "devur/json_io.hpp"

using namespace devur;
using devur::io::Json;

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct Output {
    std::string path; // empty: stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << '\n';
            return;
        }
        std::ofstream f(path);
        require(f.good(), Err::InvalidArgument, "cannot open output file " + path);
        f << text;
        if (!text.empty() && text.back() != '\n') f << '\n';
    }
    void write_json(Json j) const { write(j.dump(2)); }
};

Json read_json_file(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), Err::InvalidArgument, "cannot open input file " + path);
    Json j;
    f >> j;
    return j;
}

CMat builtin_pauli(const std::string& name) {
    CMat m(2, 2);
    if (name == "pauli-x") {
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
    } else if (name == "pauli-y") {
        m(0, 1) = Complex(0, -1);
        m(1, 0) = Complex(0, 1);
    } else if (name == "pauli-z") {
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
    } else {
        fail(Err::InvalidArgument, "unknown observable '" + name +
                                       "' (expect a JSON file or pauli-x|pauli-y|pauli-z)");
    }
    return m;
}

Observable load_observable(const std::string& spec) {
    if (std::ifstream probe(spec); probe.good()) {
        return Observable(io::mat_from_json(read_json_file(spec)), spec);
    }
    return Observable(builtin_pauli(spec), spec);
}

State load_state(const std::string& path) { return io::state_from_json(read_json_file(path)); }

uint64_t seed_fallback(std::optional<uint64_t> flag) {
    if (flag.has_value()) return *flag;
    if (const char* env = std::getenv("DEVUR_SEED")) {
        return static_cast<uint64_t>(std::strtoull(env, nullptr, 10));
    }
    return 0;
}

Json tolerance_metadata(const contwave::DispersionOptions& opts) {
    Json t;
    t["quad_rel"] = opts.quad.rel_tol;
    t["norm"] = opts.norm_tol;
    return t;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string line;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    return line;
}

contwave::Density1D density_by_name(const std::string& dist, double scale, double center, int d1,
                                    int d2, double alpha_p, double lambda, double mass) {
    if (dist == "laplace") return contwave::laplace_density(scale, center);
    if (dist == "gaussian") return contwave::gaussian_density(scale, center);
    if (dist == "uniform") return contwave::uniform_density(scale, center);
    if (dist == "fdist") return contwave::f_distribution(d1, d2);
    if (dist == "pareto") return contwave::pareto_state_analytic(alpha_p, lambda, mass).density;
    fail(Err::InvalidArgument, "unknown distribution '" + dist + "'");
}

int run(int argc, char** argv) {
    CLI::App app{"mean-deviation quantum uncertainty toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json_errors = false;
    app.add_flag("--json", json_errors, "machine-readable errors on stderr");

    // ------------------------------------------------------------ md
    auto* md = app.add_subcommand("md", "alpha-deviation of an observable on a state");
    std::string md_obs, md_state, md_out;
    double md_alpha = 1.0;
    md->add_option("--observable", md_obs)->required();
    md->add_option("--state", md_state)->required();
    md->add_option("--alpha", md_alpha);
    md->add_option("--out", md_out);
    md->callback([&] {
        const auto rep = md_uncertainty(load_observable(md_obs), load_state(md_state), md_alpha);
        Output{md_out}.write_json(io::deviation_report_to_json(rep));
    });

    // ------------------------------------------------------------ relation
    auto* rel = app.add_subcommand("relation", "uncertainty-relation checks");
    rel->require_subcommand(1);
    std::string rel_a, rel_b, rel_state, rel_perp, rel_sign = "auto", rel_out;
    double rel_alpha = 1.0;
    auto add_rel_common = [&](CLI::App* cmd, bool two_observables) {
        cmd->add_option("--observable", rel_a)->required();
        if (two_observables) cmd->add_option("--observable-b", rel_b)->required();
        cmd->add_option("--state", rel_state)->required();
        cmd->add_option("--alpha", rel_alpha);
        cmd->add_option("--out", rel_out);
    };
    auto* rel_prod = rel->add_subcommand("product", "product relation");
    add_rel_common(rel_prod, true);
    rel_prod->callback([&] {
        const auto v = product_relation(load_observable(rel_a), load_observable(rel_b),
                                        load_state(rel_state), rel_alpha);
        Output{rel_out}.write_json(io::relation_verdict_to_json(v));
    });
    auto* rel_sum = rel->add_subcommand("sum", "sum relation with orthogonal witness");
    add_rel_common(rel_sum, true);
    rel_sum->add_option("--perp", rel_perp, "JSON file with witness amplitudes");
    rel_sum->add_option("--sign", rel_sign)->check(CLI::IsMember({"auto", "+", "-"}));
    rel_sum->callback([&] {
        std::optional<CVec> perp;
        if (!rel_perp.empty()) perp = io::vec_from_json(read_json_file(rel_perp)).normalized();
        const SumSign sign = rel_sign == "+"   ? SumSign::Plus
                             : rel_sign == "-" ? SumSign::Minus
                                               : SumSign::Auto;
        const auto v = sum_relation(load_observable(rel_a), load_observable(rel_b),
                                    load_state(rel_state), perp, sign, rel_alpha);
        Output{rel_out}.write_json(io::relation_verdict_to_json(v));
    });
    auto* rel_lemma = rel->add_subcommand("lemma", "entropic lemma check");
    add_rel_common(rel_lemma, false);
    rel_lemma->callback([&] {
        const auto v =
            entropic_lemma_check(load_observable(rel_a), load_state(rel_state), rel_alpha);
        Output{rel_out}.write_json(io::relation_verdict_to_json(v));
    });

    // ------------------------------------------------------------ bound
    auto* bound = app.add_subcommand("bound", "state-independent bounds");
    bound->require_subcommand(1);
    auto* bound_si = bound->add_subcommand("state-indep", "state-independent MD bound");
    std::string bnd_a, bnd_b, bnd_out;
    double bnd_alpha = 1.0;
    std::optional<double> bnd_c;
    bound_si->add_option("--observable", bnd_a)->required();
    bound_si->add_option("--observable-b", bnd_b)->required();
    bound_si->add_option("--alpha", bnd_alpha);
    double bnd_c_raw = 0;
    auto* copt = bound_si->add_option("--overlap-c", bnd_c_raw, "explicit overlap constant, nats");
    bound_si->add_option("--out", bnd_out);
    bound_si->callback([&] {
        if (copt->count()) bnd_c = bnd_c_raw;
        ObservableSet set;
        set.observables.push_back(load_observable(bnd_a));
        set.observables.push_back(load_observable(bnd_b));
        set.labels = {bnd_a, bnd_b};
        const double value = state_independent_bound(set, bnd_alpha, bnd_c);
        Json out;
        out["alpha"] = bnd_alpha;
        out["bound"] = value;
        out["overlap_c"] = bnd_c.has_value()
                               ? *bnd_c
                               : -std::log(max_basis_overlap(set.observables[0], set.observables[1]));
        Output{bnd_out}.write_json(out);
    });

    // ------------------------------------------------------------ intelligent
    auto* intel = app.add_subcommand("intelligent", "position-momentum uncertainty products");
    intel->require_subcommand(1);
    std::string intel_out, intel_input;
    double intel_sigma = 1.0, intel_mu = 1.0, intel_center = 0.0;
    auto intel_emit = [&](const contwave::SampledWavefunction& psi) {
        Output{intel_out}.write_json(io::intelligent_to_json(contwave::intelligent_product(psi)));
    };
    auto* ig = intel->add_subcommand("gaussian", "gaussian wavepacket");
    ig->add_option("--sigma", intel_sigma);
    ig->add_option("--center", intel_center);
    ig->add_option("--out", intel_out);
    ig->callback([&] { intel_emit(contwave::gaussian_wavepacket(intel_sigma, intel_center)); });
    auto* il = intel->add_subcommand("laplace", "laplace wavepacket");
    il->add_option("--mu", intel_mu);
    il->add_option("--center", intel_center);
    il->add_option("--out", intel_out);
    il->callback([&] { intel_emit(contwave::laplace_wavepacket(intel_mu, intel_center)); });
    auto* ic = intel->add_subcommand("custom", "wavefunction from a JSON grid file");
    ic->add_option("--input", intel_input)->required();
    ic->add_option("--out", intel_out);
    ic->callback([&] { intel_emit(io::wavefunction_from_json(read_json_file(intel_input))); });

    // ------------------------------------------------------------ contwave
    auto* cw = app.add_subcommand("contwave", "continuous-variable analysis");
    cw->require_subcommand(1);
    std::string cw_out, cw_input, cw_dist = "laplace";
    double cw_scale = 1.0, cw_center = 0.0;
    int cw_d1 = 1, cw_d2 = 5;
    double cw_alpha_p = 1.5, cw_lambda = 1.0, cw_mass = 0.5;
    double tol_quad_rel = 1e-10, tol_norm = 1e-6;

    auto dispersion_opts = [&] {
        contwave::DispersionOptions opts;
        opts.quad.rel_tol = tol_quad_rel;
        opts.norm_tol = tol_norm;
        return opts;
    };

    auto* cwd = cw->add_subcommand("dispersion", "mean/MD/SD/entropy of a density");
    cwd->add_option("--dist", cw_dist)->check(CLI::IsMember({"laplace", "gaussian", "uniform", "fdist", "pareto"}));
    cwd->add_option("--scale", cw_scale, "mu / sigma / halfwidth");
    cwd->add_option("--center", cw_center);
    cwd->add_option("--d1", cw_d1);
    cwd->add_option("--d2", cw_d2);
    cwd->add_option("--alpha-p", cw_alpha_p);
    cwd->add_option("--lambda", cw_lambda);
    cwd->add_option("--mass", cw_mass);
    cwd->add_option("--tol-quad-rel", tol_quad_rel);
    cwd->add_option("--tol-norm", tol_norm);
    cwd->add_option("--out", cw_out);
    cwd->callback([&] {
        const auto density = density_by_name(cw_dist, cw_scale, cw_center, cw_d1, cw_d2,
                                             cw_alpha_p, cw_lambda, cw_mass);
        const auto opts = dispersion_opts();
        Json out = io::dispersion_to_json(contwave::dispersion(density, opts));
        out["distribution"] = density.name;
        out["tolerances"] = tolerance_metadata(opts);
        Output{cw_out}.write_json(out);
    });

    auto* cwf = cw->add_subcommand("fdist", "f-distribution dispersion");
    cwf->add_option("--d1", cw_d1)->required();
    cwf->add_option("--d2", cw_d2)->required();
    cwf->add_option("--tol-quad-rel", tol_quad_rel);
    cwf->add_option("--tol-norm", tol_norm);
    cwf->add_option("--out", cw_out);
    cwf->callback([&] {
        const auto opts = dispersion_opts();
        Json out = io::dispersion_to_json(contwave::dispersion(contwave::f_distribution(cw_d1, cw_d2), opts));
        out["distribution"] = "f-distribution";
        out["d1"] = cw_d1;
        out["d2"] = cw_d2;
        out["tolerances"] = tolerance_metadata(opts);
        Output{cw_out}.write_json(out);
    });

    auto* cwt = cw->add_subcommand("fourier", "momentum-space transform of a wavefunction");
    std::string cwt_format = "csv";
    cwt->add_option("--input", cw_input)->required();
    cwt->add_option("--format", cwt_format)->check(CLI::IsMember({"csv", "json"}));
    cwt->add_option("--out", cw_out);
    cwt->callback([&] {
        const auto psi = io::wavefunction_from_json(read_json_file(cw_input));
        const auto phi = contwave::fourier(psi);
        if (cwt_format == "json") {
            Output{cw_out}.write_json(io::wavefunction_to_json(phi));
            return;
        }
        std::string csv = "p,density\n";
        for (int j = 0; j < phi.count(); ++j) {
            csv += csv_line({format_double(phi.x_at(j)),
                             format_double(std::norm(phi.values[static_cast<size_t>(j)]))});
            csv += '\n';
        }
        Output{cw_out}.write(csv);
    });

    auto* cwp = cw->add_subcommand("potential", "reconstruct V(x) from a real wavefunction");
    std::string cwp_source = "sqrtf";
    double cwp_xmin = 0.1, cwp_xmax = 25.0, cwp_step = 1e-3, cwp_offset = 0.0;
    cwp->add_option("--source", cwp_source, "sqrtf (sqrt of the f-distribution) or file")
        ->check(CLI::IsMember({"sqrtf", "file"}));
    cwp->add_option("--input", cw_input, "wavefunction JSON when --source file");
    cwp->add_option("--d1", cw_d1);
    cwp->add_option("--d2", cw_d2);
    cwp->add_option("--x-min", cwp_xmin);
    cwp->add_option("--x-max", cwp_xmax);
    cwp->add_option("--step", cwp_step);
    cwp->add_option("--offset", cwp_offset);
    cwp->add_option("--out", cw_out);
    cwp->callback([&] {
        contwave::SampledWavefunction psi;
        if (cwp_source == "file") {
            require(!cw_input.empty(), Err::InvalidArgument, "--input required with --source file");
            psi = io::wavefunction_from_json(read_json_file(cw_input));
        } else {
            const auto dens = contwave::f_distribution(cw_d1, cw_d2);
            const int count = static_cast<int>((cwp_xmax - cwp_xmin) / cwp_step) + 1;
            psi = contwave::sample_wavefunction(
                [&](double x) { return contwave::Complex(std::sqrt(dens.pdf(x)), 0.0); }, cwp_xmin,
                cwp_step, count);
        }
        const auto pot = contwave::potential_from_wavefunction(psi, cwp_offset);
        std::string csv = "x,psi,density,potential\n";
        for (int j = 0; j < psi.count(); ++j) {
            const bool masked = pot.masked[static_cast<size_t>(j)];
            csv += csv_line({format_double(psi.x_at(j)),
                             format_double(psi.values[static_cast<size_t>(j)].real()),
                             format_double(std::norm(psi.values[static_cast<size_t>(j)])),
                             masked ? "nan" : format_double(pot.v[static_cast<size_t>(j)])});
            csv += '\n';
        }
        Output{cw_out}.write(csv);
    });

    auto* cwpa = cw->add_subcommand("pareto", "pareto-tail wavefunction analysis");
    cwpa->add_option("--alpha-p", cw_alpha_p)->required();
    cwpa->add_option("--lambda", cw_lambda);
    cwpa->add_option("--mass", cw_mass);
    cwpa->add_option("--tol-quad-rel", tol_quad_rel);
    cwpa->add_option("--tol-norm", tol_norm);
    cwpa->add_option("--out", cw_out);
    cwpa->callback([&] {
        const auto st = contwave::pareto_wavefunction(cw_alpha_p, cw_lambda, cw_mass);
        const auto opts = dispersion_opts();
        Json out;
        out["alpha"] = st.alpha;
        out["lambda"] = st.lambda;
        out["mass"] = st.mass;
        Json patch;
        patch["c"] = st.patch.c;
        patch["x0"] = st.patch.x0;
        patch["w"] = st.patch.w;
        patch["residual_value"] = st.patch.residual_value;
        patch["residual_derivative"] = st.patch.residual_derivative;
        patch["residual_mass"] = st.patch.residual_mass;
        out["patch"] = std::move(patch);
        out["dispersion"] = io::dispersion_to_json(contwave::dispersion(st.density, opts));
        out["grid_norm_residual"] = st.psi.norm_residual;
        out["tolerances"] = tolerance_metadata(opts);
        Output{cw_out}.write_json(out);
    });

    // ------------------------------------------------------------ steering
    auto* steer = app.add_subcommand("steering", "lossy EPR-violation pipeline");
    steer->require_subcommand(1);
    std::string st_out;
    double st_p = 1.0, st_eta = 1.0, st_alpha = 1.0;
    auto* stc = steer->add_subcommand("check", "EPR-violation check for one (p, eta)");
    stc->add_option("--p", st_p)->required();
    stc->add_option("--eta", st_eta)->required();
    stc->add_option("--alpha", st_alpha);
    stc->add_option("--out", st_out);
    stc->callback([&] {
        const auto rep = steering::check_epr_violation(steering::build_model(st_p, st_eta), st_alpha);
        Json out = io::inferred_report_to_json(rep);
        out["p"] = st_p;
        out["eta"] = st_eta;
        out["number_expectation"] = steering::number_expectation(steering::build_model(st_p, st_eta));
        Output{st_out}.write_json(out);
    });

    auto* stv = steer->add_subcommand("curve", "efficiency threshold curve over p");
    double stv_pmin = 0.6, stv_pmax = 1.0;
    int stv_steps = 20;
    stv->add_option("--alpha", st_alpha);
    stv->add_option("--p-min", stv_pmin);
    stv->add_option("--p-max", stv_pmax);
    stv->add_option("--steps", stv_steps)->check(CLI::PositiveNumber);
    stv->add_option("--out", st_out);
    stv->callback([&] {
        std::vector<double> grid;
        for (int i = 0; i < stv_steps; ++i)
            grid.push_back(stv_steps == 1
                               ? stv_pmin
                               : stv_pmin + (stv_pmax - stv_pmin) * i / (stv_steps - 1.0));
        const auto md_curve = steering::threshold_curve(st_alpha, grid);
        const auto sd_curve = steering::threshold_curve(2.0, grid);
        std::string csv = "p,eta_md,eta_sd\n";
        for (size_t i = 0; i < grid.size(); ++i) {
            csv += csv_line({format_double(grid[i]),
                             md_curve.eta_star[i] ? format_double(*md_curve.eta_star[i]) : "nan",
                             sd_curve.eta_star[i] ? format_double(*sd_curve.eta_star[i]) : "nan"});
            csv += '\n';
        }
        Output{st_out}.write(csv);
    });

    auto* sta = steer->add_subcommand("alpha-sweep", "threshold and series diagnostics over alpha");
    std::vector<double> sta_alphas{0.25, 0.5, 0.75, 1.0};
    int sta_terms = 200;
    sta->add_option("--p", st_p);
    sta->add_option("--eta", st_eta, "efficiency for the series diagnostics");
    sta->add_option("--alphas", sta_alphas)->delimiter(',');
    sta->add_option("--terms", sta_terms);
    sta->add_option("--out", st_out);
    sta->callback([&] {
        Json rows = Json::array();
        for (double a : sta_alphas) {
            Json row;
            row["alpha"] = a;
            const auto curve = steering::threshold_curve(a, {st_p});
            if (curve.eta_star[0].has_value())
                row["eta_star"] = *curve.eta_star[0];
            else
                row["eta_star"] = nullptr;
            if (a <= 1.0) {
                try {
                    const auto series = steering::alpha_bound(st_eta, a, sta_terms, st_p);
                    row["series_bound"] = series.rhs_bound;
                    row["series_inferred"] = series.lhs_inferred;
                    row["series_terms"] = series.terms_used;
                    row["series_truncation"] = series.truncation_error;
                    double direct = 0;
                    const auto model = steering::build_model(st_p, st_eta);
                    for (auto ax : {steering::Axis::X, steering::Axis::Y, steering::Axis::Z})
                        direct += steering::inferred_deviation(model, ax, a);
                    row["direct_inferred"] = direct;
                    row["series_vs_direct_mismatch"] = std::abs(direct - series.lhs_inferred);
                } catch (const Error& e) {
                    row["series_error"] = err_name(e.kind());
                }
            }
            rows.push_back(std::move(row));
        }
        Json out;
        out["p"] = st_p;
        out["eta"] = st_eta;
        out["rows"] = std::move(rows);
        Output{st_out}.write_json(out);
    });

    // ------------------------------------------------------------ witness
    auto* wit = app.add_subcommand("witness", "local-uncertainty entanglement witness");
    wit->require_subcommand(1);
    std::string w_out, w_state;
    double w_a = 1.0 / std::sqrt(2.0), w_b = 1.0 / std::sqrt(2.0), w_p = -1.0;
    auto* witc = wit->add_subcommand("check", "witness verdict for a state");
    witc->add_option("--a", w_a);
    witc->add_option("--b", w_b);
    witc->add_option("--state", w_state, "two-qubit state JSON");
    witc->add_option("--werner-p", w_p, "use the Werner state with this p instead");
    witc->add_option("--out", w_out);
    witc->callback([&] {
        const auto fam = entwit::WitnessFamily::make(w_a, w_b);
        State rho = w_p >= 0 ? entwit::werner_state(fam, w_p) : load_state(w_state);
        Output{w_out}.write_json(io::witness_verdict_to_json(entwit::witness(fam, rho)));
    });
    auto* witw = wit->add_subcommand("werner", "detection threshold for Werner noise");
    bool witw_curve = false;
    int witw_steps = 101;
    witw->add_option("--a", w_a);
    witw->add_option("--b", w_b);
    witw->add_flag("--curve", witw_curve, "emit the p -> sum_md CSV instead of JSON");
    witw->add_option("--steps", witw_steps);
    witw->add_option("--out", w_out);
    witw->callback([&] {
        const auto fam = entwit::WitnessFamily::make(w_a, w_b);
        if (witw_curve) {
            std::string csv = "p,sum_md,bound\n";
            for (int i = 0; i < witw_steps; ++i) {
                const double p = witw_steps == 1 ? 0.0 : i / (witw_steps - 1.0);
                const auto v = entwit::witness(fam, entwit::werner_state(fam, p));
                csv += csv_line({format_double(p), format_double(v.sum_md),
                                 format_double(v.md_bound)});
                csv += '\n';
            }
            Output{w_out}.write(csv);
            return;
        }
        Json out;
        out["a"] = fam.a;
        out["b"] = fam.b;
        out["threshold"] = entwit::werner_threshold(fam);
        Output{w_out}.write_json(out);
    });
    auto* wits = wit->add_subcommand("stress", "separable product-state stress test");
    int wits_trials = 10000;
    std::optional<uint64_t> wits_seed;
    uint64_t wits_seed_raw = 0;
    wits->add_option("--a", w_a);
    wits->add_option("--b", w_b);
    wits->add_option("--trials", wits_trials);
    auto* seed_opt = wits->add_option("--seed", wits_seed_raw);
    wits->add_option("--out", w_out);
    wits->callback([&] {
        if (seed_opt->count()) wits_seed = wits_seed_raw;
        const auto fam = entwit::WitnessFamily::make(w_a, w_b);
        const auto rep = entwit::separable_stress_test(fam, wits_trials, seed_fallback(wits_seed));
        Output{w_out}.write_json(io::stress_report_to_json(rep));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // flag/usage problems are validation errors
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    bool json_errors = false;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--json") json_errors = true;
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        if (json_errors) {
            Json err;
            err["error"] = err_name(e.kind());
            err["message"] = e.what();
            std::cerr << err.dump() << '\n';
        } else {
            std::cerr << "error (" << err_name(e.kind()) << "): " << e.what() << '\n';
        }
        return e.is_internal() ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
