#include "devur/entwit.hpp"

#include <cmath>

#include "devur/rng.hpp"

namespace devur::entwit {

WitnessFamily WitnessFamily::make(double a, double b) {
    require(a > 0 && b >= 0 && a >= b, Err::ParamOutOfRange,
            "WitnessFamily: requires a >= b >= 0");
    require(std::abs(a * a + b * b - 1.0) <= 1e-6, Err::ParamOutOfRange,
            "WitnessFamily: a^2 + b^2 must equal 1");
    // renormalize so downstream identities hold to machine precision
    const double n = std::sqrt(a * a + b * b);
    a /= n;
    b /= n;

    WitnessFamily f;
    f.a = a;
    f.b = b;
    auto basis = [](int i, int j) { return 2 * i + j; }; // |ij> on C^2 (x) C^2
    CVec s1(4), s2(4), s3(4), s4(4);
    s1[basis(0, 0)] = a;
    s1[basis(1, 1)] = b;
    s2[basis(0, 1)] = a;
    s2[basis(1, 0)] = b;
    s3[basis(0, 1)] = b;
    s3[basis(1, 0)] = -a;
    s4[basis(0, 0)] = b;
    s4[basis(1, 1)] = -a;
    f.states = {s1, s2, s3, s4};
    return f;
}

CMat WitnessFamily::projector(int i) const {
    const CVec& v = states[static_cast<size_t>(i)];
    return CMat::outer(v, v);
}

WitnessVerdict witness(const WitnessFamily& family, const State& rho) {
    require(rho.dim() == 4, Err::DimensionMismatch, "witness: state must live on two qubits");
    WitnessVerdict v;
    v.md_bound = 4.0 * family.a * family.a * family.b * family.b;
    v.var_bound = 0.5 * v.md_bound;
    for (int i = 0; i < 4; ++i) {
        const double q = rho.overlap_probability(family.states[static_cast<size_t>(i)]);
        v.q[static_cast<size_t>(i)] = q;
        // projector outcomes are {0,1}: Delta_M = 2q(1-q), Delta^2 = q(1-q)
        v.sum_md += 2.0 * q * (1.0 - q);
        v.sum_var += q * (1.0 - q);
    }
    v.entangled_by_md = v.sum_md < v.md_bound - 1e-12;
    v.entangled_by_var = v.sum_var < v.var_bound - 1e-12;
    return v;
}

State werner_state(const WitnessFamily& family, double p) {
    require(p >= 0 && p <= 1, Err::ParamOutOfRange, "werner_state: p must be in [0,1]");
    CMat rho = family.projector(0);
    rho *= Complex(p, 0.0);
    const double off = (1.0 - p) / 4.0;
    for (int i = 0; i < 4; ++i) rho(i, i) += off;
    return State::mixed(std::move(rho));
}

double werner_threshold(const WitnessFamily& family) {
    auto detected = [&](double p) { return witness(family, werner_state(family, p)).entangled_by_md; };
    if (!detected(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (detected(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

StressReport separable_stress_test(const WitnessFamily& family, int trials, uint64_t seed) {
    require(trials >= 1, Err::InvalidArgument, "separable_stress_test: trials must be >= 1");
    StressReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.bound = 4.0 * family.a * family.a * family.b * family.b;
    rep.min_sum_md = std::numeric_limits<double>::infinity();

    constexpr int kShard = 1024;
    const int shards = (trials + kShard - 1) / kShard;
    int done = 0;
    for (int shard = 0; shard < shards; ++shard) {
        Rng rng(seed ^ (0xa0761d6478bd642fULL * static_cast<uint64_t>(shard + 1)));
        const int count = std::min(kShard, trials - done);
        for (int t = 0; t < count; ++t) {
            const CVec qa = rng.haar_state(2);
            const CVec qb = rng.haar_state(2);
            CVec prod(4);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) prod[2 * i + j] = qa[i] * qb[j];
            double sum_md = 0;
            for (int i = 0; i < 4; ++i) {
                const double q = std::norm(family.states[static_cast<size_t>(i)].dot(prod));
                sum_md += 2.0 * q * (1.0 - q);
            }
            if (sum_md < rep.min_sum_md) {
                rep.min_sum_md = sum_md;
                rep.argmin_a = {qa[0], qa[1]};
                rep.argmin_b = {qb[0], qb[1]};
            }
        }
        done += count;
    }
    rep.ok = rep.min_sum_md >= rep.bound - 1e-10;
    require(rep.ok, Err::BoundViolated,
            "separable_stress_test: product state violated the separable bound");
    return rep;
}

} // namespace devur::entwit
