#include "devur/relations.hpp"

#include <algorithm>
#include <cmath>

namespace devur {

namespace {

constexpr double kHoldsTol = 1e-10;
constexpr double kViolationTol = 1e-8;

RelationVerdict make_verdict(double lhs, double rhs, const char* what) {
    RelationVerdict v;
    v.lhs = lhs;
    v.rhs = rhs;
    v.slack = lhs - rhs;
    v.holds = v.slack >= -kHoldsTol;
    if (v.slack < -kViolationTol)
        fail(Err::InternalViolation, std::string(what) + ": slack below -1e-8, implementation bug");
    return v;
}

Complex commutator_expectation(const CMat& ap, const CMat& bp, const CVec& psi) {
    const CVec b_psi = bp.apply(psi);
    const CVec a_psi = ap.apply(psi);
    // <[A',B']> = <A'psi|B'psi> - <B'psi|A'psi>
    return a_psi.dot(b_psi) - b_psi.dot(a_psi);
}

/// First standard-basis vector orthogonal to psi, via Gram-Schmidt.
CVec orthogonal_basis_vector(const CVec& psi) {
    const int n = psi.dim();
    for (int k = 0; k < n; ++k) {
        CVec e(n);
        e[k] = 1.0;
        CVec residual = e - psi.dot(e) * psi;
        if (residual.norm() > 1e-6) return residual.normalized();
    }
    fail(Err::InternalViolation, "no basis vector orthogonal to state");
}

} // namespace

RelationVerdict product_relation(const Observable& a, const Observable& b, const State& state,
                                 double alpha) {
    require(state.is_pure(), Err::MixedStateUnsupported,
            "product_relation: stated for pure states only");
    const CVec& psi = state.vector();
    const double da = md_uncertainty(a, state, alpha).value;
    const double db = md_uncertainty(b, state, alpha).value;
    const CMat ap = primed_operator(a, state, alpha).matrix;
    const CMat bp = primed_operator(b, state, alpha).matrix;
    const Complex comm = commutator_expectation(ap, bp, psi);
    return make_verdict(da * db, 0.25 * std::norm(comm), "product_relation");
}

RelationVerdict sum_relation(const Observable& a, const Observable& b, const State& state,
                             std::optional<CVec> perp, SumSign sign, double alpha) {
    require(state.is_pure(), Err::MixedStateUnsupported,
            "sum_relation: stated for pure states only");
    const CVec& psi = state.vector();
    const double lhs = md_uncertainty(a, state, alpha).value + md_uncertainty(b, state, alpha).value;
    const CMat ap = primed_operator(a, state, alpha).matrix;
    const CMat bp = primed_operator(b, state, alpha).matrix;

    const Complex comm = commutator_expectation(ap, bp, psi); // purely imaginary
    double s;
    switch (sign) {
        case SumSign::Plus: s = 1.0; break;
        case SumSign::Minus: s = -1.0; break;
        default: s = (comm.imag() >= 0) ? -1.0 : 1.0; break; // +s*i<[A',B']> >= 0
    }
    const double commutator_term = s * (Complex(0, 1) * comm).real();

    const double mean_ap = psi.dot(ap.apply(psi)).real();
    const double mean_bp = psi.dot(bp.apply(psi)).real();

    // phi = (A' - i s B')|psi>; its component orthogonal to |psi> is the
    // saturating witness direction.
    CVec phi = ap.apply(psi);
    {
        const CVec bpsi = bp.apply(psi);
        for (int i = 0; i < phi.dim(); ++i) phi[i] -= Complex(0, s) * bpsi[i];
    }
    CVec phi_perp = phi - psi.dot(phi) * psi;

    RelationVerdict v;
    CVec witness;
    if (perp.has_value()) {
        witness = *perp;
        require(witness.dim() == psi.dim(), Err::DimensionMismatch, "sum_relation: perp dimension");
        require(std::abs(witness.norm() - 1.0) <= 1e-10, Err::NotOrthogonal,
                "sum_relation: perp must be unit norm");
        require(std::abs(psi.dot(witness)) <= 1e-10, Err::NotOrthogonal,
                "sum_relation: perp must be orthogonal to the state");
    } else if (phi_perp.norm() >= 1e-12) {
        witness = phi_perp.normalized();
    } else {
        witness = orthogonal_basis_vector(psi);
        v.degenerate_witness = true;
    }

    // <psi| A' + i s B' |perp> = <phi|perp>
    const double matrix_element_sq = std::norm(phi.dot(witness));
    const double rhs = commutator_term + matrix_element_sq + mean_ap * mean_ap + mean_bp * mean_bp;

    RelationVerdict base = make_verdict(lhs, rhs, "sum_relation");
    base.witness = std::move(witness);
    base.degenerate_witness = v.degenerate_witness;
    return base;
}

RelationVerdict entropic_lemma_check(const Observable& o, const State& state, double alpha) {
    const auto& spec = o.spectrum();
    const std::vector<double> p = detail::eigen_probabilities(o, state);
    const double mean = expval(o.matrix(), state);

    const double md = md_uncertainty(o, state, 1.0).value;
    double entropy = 0;
    double zsum = 0;
    for (int j = 0; j < spec.dim(); ++j) {
        const double pj = p[static_cast<size_t>(j)];
        if (pj > 0) entropy -= pj * std::log(pj);
        zsum += std::exp(-alpha * std::abs(spec.eigenvalues[static_cast<size_t>(j)] - mean));
    }
    return make_verdict(alpha * md, entropy - std::log(zsum), "entropic_lemma_check");
}

TentResult tent_max(const std::vector<double>& eigenvalues, double alpha) {
    require(alpha > 0, Err::InvalidAlpha, "tent_max: alpha must be positive");
    require(!eigenvalues.empty(), Err::InvalidArgument, "tent_max: empty eigenvalue list");

    std::vector<double> candidates = eigenvalues;
    std::sort(candidates.begin(), candidates.end());

    TentResult best{candidates.front(), -1.0};
    for (double beta : candidates) {
        double f = 0;
        for (double a : eigenvalues) f += std::exp(-alpha * std::abs(a - beta));
        if (f > best.value + 1e-15 * std::abs(f)) {
            best.beta_star = beta;
            best.value = f;
        }
    }
    return best;
}

double max_basis_overlap(const Observable& a, const Observable& b) {
    require(a.dim() == b.dim(), Err::DimensionMismatch, "max_basis_overlap: dimension mismatch");
    double best = 0;
    for (const auto& va : a.spectrum().eigenvectors)
        for (const auto& vb : b.spectrum().eigenvectors)
            best = std::max(best, std::norm(va.dot(vb)));
    return best;
}

double state_independent_bound(const ObservableSet& set, double alpha,
                               std::optional<double> overlap_constant) {
    require(alpha > 0, Err::InvalidAlpha, "state_independent_bound: alpha must be positive");
    require(!set.observables.empty(), Err::InvalidArgument, "state_independent_bound: empty set");
    const int dim = set.observables.front().dim();
    for (const auto& o : set.observables)
        require(o.dim() == dim, Err::DimensionMismatch, "state_independent_bound: mixed dimensions");

    double c;
    if (overlap_constant.has_value()) {
        c = *overlap_constant;
    } else {
        require(set.observables.size() == 2, Err::NeedOverlapConstant,
                "state_independent_bound: overlap constant required for more than two observables");
        c = -std::log(max_basis_overlap(set.observables[0], set.observables[1]));
    }

    double log_tents = 0;
    for (const auto& o : set.observables)
        log_tents += std::log(tent_max(o.spectrum().eigenvalues, alpha).value);
    return (c - log_tents) / alpha;
}

} // namespace devur
