#include "devur/deviation.hpp"

#include <cmath>

namespace devur {

Observable::Observable(CMat matrix, std::string label)
    : matrix_(std::move(matrix)), spectrum_(eig_hermitian(matrix_)), label_(std::move(label)) {}

namespace detail {

std::vector<double> eigen_probabilities(const Observable& o, const State& state) {
    require(o.dim() == state.dim(), Err::DimensionMismatch,
            "observable/state dimension mismatch");
    const auto& spec = o.spectrum();
    std::vector<double> p(static_cast<size_t>(spec.dim()));
    double total = 0;
    for (int j = 0; j < spec.dim(); ++j) {
        p[static_cast<size_t>(j)] = state.overlap_probability(spec.eigenvectors[static_cast<size_t>(j)]);
        total += p[static_cast<size_t>(j)];
    }
    require(std::abs(total - 1.0) <= 1e-8, Err::NotNormalized,
            "outcome probabilities do not sum to 1");
    return p;
}

} // namespace detail

DeviationReport md_uncertainty(const Observable& o, const State& state, double alpha) {
    require(alpha > 0, Err::InvalidAlpha, "md_uncertainty: alpha must be positive");
    const auto& spec = o.spectrum();
    const std::vector<double> p = detail::eigen_probabilities(o, state);
    const double mean = expval(o.matrix(), state);

    DeviationReport rep;
    rep.mean = mean;
    rep.alpha = alpha;
    rep.outcomes.reserve(spec.degeneracy_classes.size());
    double value = 0;
    for (size_t c = 0; c < spec.degeneracy_classes.size(); ++c) {
        OutcomeRow row;
        row.eigenvalue = spec.class_eigenvalue(static_cast<int>(c));
        row.probability = 0;
        for (int idx : spec.degeneracy_classes[c]) row.probability += p[static_cast<size_t>(idx)];
        row.weight = std::pow(std::abs(row.eigenvalue - mean), alpha);
        value += row.probability * row.weight;
        rep.outcomes.push_back(row);
    }
    rep.value = value;
    return rep;
}

PrimedOperator primed_operator(const Observable& o, const State& state, double alpha) {
    require(alpha > 0, Err::InvalidAlpha, "primed_operator: alpha must be positive");
    const auto& spec = o.spectrum();
    const double mean = expval(o.matrix(), state);

    PrimedOperator out;
    out.alpha = alpha;
    out.mean = mean;
    out.matrix = CMat::zero(o.dim(), o.dim());
    for (int j = 0; j < spec.dim(); ++j) {
        const double w = std::sqrt(std::pow(std::abs(spec.eigenvalues[static_cast<size_t>(j)] - mean), alpha));
        if (w == 0.0) continue;
        const CVec& v = spec.eigenvectors[static_cast<size_t>(j)];
        out.matrix += Complex(w, 0.0) * CMat::outer(v, v);
    }
    return out;
}

double sd_uncertainty(const Observable& o, const State& state) {
    return std::sqrt(md_uncertainty(o, state, 2.0).value);
}

} // namespace devur
