#include "devur/json_io.hpp"

#include <cmath>

namespace devur::io {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    require(j.is_array() && j.size() == 2, Err::InvalidArgument,
            "complex scalar must be a [re, im] pair");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

Json vec_to_json(const CVec& v) {
    Json arr = Json::array();
    for (int i = 0; i < v.dim(); ++i) arr.push_back(complex_to_json(v[i]));
    return arr;
}

CVec vec_from_json(const Json& j) {
    require(j.is_array() && !j.empty(), Err::InvalidArgument, "vector must be a non-empty array");
    CVec v(static_cast<int>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = complex_from_json(j[i]);
    return v;
}

Json mat_to_json(const CMat& m) {
    Json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    Json data = Json::array();
    for (const auto& z : m.data()) data.push_back(complex_to_json(z));
    out["data"] = std::move(data);
    return out;
}

CMat mat_from_json(const Json& j) {
    require(j.contains("rows") && j.contains("cols") && j.contains("data"), Err::InvalidArgument,
            "matrix JSON must carry rows, cols, data");
    const int rows = j["rows"].get<int>();
    const int cols = j["cols"].get<int>();
    require(rows > 0 && cols > 0, Err::InvalidArgument, "matrix dims must be positive");
    const Json& data = j["data"];
    require(data.is_array() && data.size() == static_cast<size_t>(rows) * static_cast<size_t>(cols),
            Err::InvalidArgument, "matrix data length must equal rows*cols");
    CMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k)
            m(i, k) = complex_from_json(data[static_cast<size_t>(i) * cols + k]);
    return m;
}

Json state_to_json(const State& s) {
    Json out;
    if (s.is_pure()) {
        out["kind"] = "pure";
        out["amplitudes"] = vec_to_json(s.vector());
    } else {
        out["kind"] = "mixed";
        out["matrix"] = mat_to_json(s.matrix());
    }
    return out;
}

State state_from_json(const Json& j) {
    require(j.contains("kind"), Err::InvalidArgument, "state JSON must carry kind");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "pure") {
        require(j.contains("amplitudes"), Err::InvalidArgument, "pure state needs amplitudes");
        return State::pure(vec_from_json(j["amplitudes"]));
    }
    if (kind == "mixed") {
        require(j.contains("matrix"), Err::InvalidArgument, "mixed state needs matrix");
        return State::mixed(mat_from_json(j["matrix"]));
    }
    fail(Err::InvalidArgument, "state kind must be pure or mixed");
}

Json deviation_report_to_json(const DeviationReport& r) {
    Json out;
    out["mean"] = r.mean;
    out["alpha"] = r.alpha;
    out["value"] = r.value;
    Json rows = Json::array();
    for (const auto& o : r.outcomes) {
        Json row;
        row["eigenvalue"] = o.eigenvalue;
        row["probability"] = o.probability;
        row["weight"] = o.weight;
        rows.push_back(std::move(row));
    }
    out["outcomes"] = std::move(rows);
    return out;
}

DeviationReport deviation_report_from_json(const Json& j) {
    DeviationReport r;
    r.mean = j.at("mean").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.value = j.at("value").get<double>();
    for (const auto& row : j.at("outcomes")) {
        OutcomeRow o;
        o.eigenvalue = row.at("eigenvalue").get<double>();
        o.probability = row.at("probability").get<double>();
        o.weight = row.at("weight").get<double>();
        r.outcomes.push_back(o);
    }
    return r;
}

Json relation_verdict_to_json(const RelationVerdict& v) {
    Json out;
    out["lhs"] = v.lhs;
    out["rhs"] = v.rhs;
    out["slack"] = v.slack;
    out["holds"] = v.holds;
    if (v.witness.has_value()) out["witness"] = vec_to_json(*v.witness);
    if (v.degenerate_witness) out["degenerate_witness"] = true;
    return out;
}

namespace {
Json maybe_to_json(const contwave::MaybeDivergent& m) {
    if (m.divergent) return nullptr;
    return m.value;
}
} // namespace

Json dispersion_to_json(const contwave::DispersionSummary& s) {
    Json out;
    out["mean"] = maybe_to_json(s.mean);
    out["md"] = maybe_to_json(s.md);
    out["sd"] = maybe_to_json(s.sd);
    out["diff_entropy"] = s.diff_entropy;
    out["norm"] = s.norm;
    Json div = Json::array();
    if (s.mean.divergent) div.push_back("mean");
    if (s.md.divergent) div.push_back("md");
    if (s.sd.divergent) div.push_back("sd");
    out["divergent"] = std::move(div);
    return out;
}

Json wavefunction_to_json(const contwave::SampledWavefunction& w) {
    Json out;
    out["x0"] = w.x0;
    out["step"] = w.step;
    Json vals = Json::array();
    for (const auto& z : w.values) vals.push_back(complex_to_json(z));
    out["values"] = std::move(vals);
    out["norm_residual"] = w.norm_residual;
    return out;
}

contwave::SampledWavefunction wavefunction_from_json(const Json& j) {
    contwave::SampledWavefunction w;
    w.x0 = j.at("x0").get<double>();
    w.step = j.at("step").get<double>();
    require(w.step > 0, Err::InvalidArgument, "wavefunction step must be positive");
    for (const auto& v : j.at("values")) w.values.push_back(complex_from_json(v));
    require(w.count() > 1, Err::InvalidArgument, "wavefunction needs at least 2 samples");
    w.update_norm_residual();
    return w;
}

Json intelligent_to_json(const contwave::IntelligentProduct& p) {
    Json out;
    out["md_x"] = p.md_x;
    out["md_p"] = p.md_p;
    out["md_product"] = p.md_product;
    out["sd_x"] = p.sd_x;
    out["sd_p"] = p.sd_p;
    out["sd_product"] = p.sd_product;
    return out;
}

Json inferred_report_to_json(const steering::InferredReport& r) {
    Json out;
    out["alpha"] = r.alpha;
    out["inferred_x"] = r.axis_deviation[0];
    out["inferred_y"] = r.axis_deviation[1];
    out["inferred_z"] = r.axis_deviation[2];
    out["lhs"] = r.lhs;
    if (std::isnan(r.rhs))
        out["rhs"] = nullptr; // series bound undefined at this point
    else
        out["rhs"] = r.rhs;
    out["violated"] = r.violated;
    if (r.outside_proof_regime) out["outside_proof_regime"] = true;
    return out;
}

Json witness_verdict_to_json(const entwit::WitnessVerdict& v) {
    Json out;
    out["sum_md"] = v.sum_md;
    out["sum_var"] = v.sum_var;
    out["md_bound"] = v.md_bound;
    out["var_bound"] = v.var_bound;
    out["entangled_by_md"] = v.entangled_by_md;
    out["entangled_by_var"] = v.entangled_by_var;
    out["q"] = Json::array({v.q[0], v.q[1], v.q[2], v.q[3]});
    return out;
}

Json stress_report_to_json(const entwit::StressReport& r) {
    Json out;
    out["trials"] = r.trials;
    out["seed"] = r.seed;
    out["bound"] = r.bound;
    out["min_sum_md"] = r.min_sum_md;
    out["argmin_a"] = Json::array({complex_to_json(r.argmin_a[0]), complex_to_json(r.argmin_a[1])});
    out["argmin_b"] = Json::array({complex_to_json(r.argmin_b[0]), complex_to_json(r.argmin_b[1])});
    out["ok"] = r.ok;
    return out;
}

} // namespace devur::io
