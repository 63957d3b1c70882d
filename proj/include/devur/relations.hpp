#pragma once

#include <optional>
#include <string>
#include <vector>

#include "devur/deviation.hpp"

namespace devur {

/// Verdict of an uncertainty-relation check. `holds` means slack >= -1e-10;
/// slack below -1e-8 is treated as an internal invariant violation.
struct RelationVerdict {
    double lhs = 0;
    double rhs = 0;
    double slack = 0;
    bool holds = false;
    std::optional<CVec> witness;    // the |psi_perp> actually used, if any
    bool degenerate_witness = false; // default witness fell back to a basis vector
};

enum class SumSign { Auto, Plus, Minus };

/// Product relation: Delta_M^a(A) * Delta_M^a(B) >= (1/4)|<[A',B']>|^2.
/// Pure states only; a returned holds=false would indicate an implementation
/// bug and is raised as InternalViolation instead.
RelationVerdict product_relation(const Observable& a, const Observable& b, const State& state,
                                 double alpha = 1.0);

/// Sum relation: Delta_M^a(A) + Delta_M^a(B) >= +-i<[A',B']> + |<psi|A'+-iB'|perp>|^2
/// + <A'>^2 + <B'>^2. The last two terms make the bound an identity for the
/// default witness, which is the normalized component of (A'-+iB')|psi>
/// orthogonal to |psi>. If that component vanishes (common eigenstate), a
/// basis vector orthogonal to |psi> is used and degenerate_witness is set.
RelationVerdict sum_relation(const Observable& a, const Observable& b, const State& state,
                             std::optional<CVec> perp = std::nullopt,
                             SumSign sign = SumSign::Auto, double alpha = 1.0);

/// Entropic lemma: alpha * Delta_M(O) >= H(O) - ln sum_j e^{-alpha|a_j - <O>|},
/// valid for any real alpha. H is the Shannon entropy of the fine-grained
/// outcome distribution, in nats.
RelationVerdict entropic_lemma_check(const Observable& o, const State& state, double alpha);

struct TentResult {
    double beta_star = 0;
    double value = 0;
};

/// Maximum of beta -> sum_j e^{-alpha|a_j - beta|} over [min a, max a].
/// The function is convex between consecutive eigenvalues, so only the
/// eigenvalues themselves are candidates; ties resolve to the smallest beta.
TentResult tent_max(const std::vector<double>& eigenvalues, double alpha);

struct ObservableSet {
    std::vector<Observable> observables;
    std::vector<std::string> labels;
};

/// State-independent lower bound on sum_i Delta_M(O_i):
/// (C - sum_i ln tent_max_i) / alpha. For exactly two observables C defaults
/// to the maximum-overlap constant -ln max |<a_1^j|a_2^k>|^2; for more, the
/// caller must supply it.
double state_independent_bound(const ObservableSet& set, double alpha,
                               std::optional<double> overlap_constant = std::nullopt);

/// Maximum squared overlap between the eigenbases of two observables.
double max_basis_overlap(const Observable& a, const Observable& b);

} // namespace devur
