#pragma once

#include <array>
#include <cstdint>

#include "devur/deviation.hpp"

namespace devur::entwit {

/// Four orthonormal two-qubit states built from Schmidt coefficients a > b >= 0
/// (a^2 + b^2 = 1); the witness observables are their rank-1 projectors, which
/// resolve the identity.
struct WitnessFamily {
    double a = 0, b = 0;
    std::array<CVec, 4> states;

    static WitnessFamily make(double a, double b);
    CMat projector(int i) const;
};

struct WitnessVerdict {
    double sum_md = 0;
    double sum_var = 0;
    double md_bound = 0;  // 4 a^2 b^2
    double var_bound = 0; // 2 a^2 b^2
    bool entangled_by_md = false;
    bool entangled_by_var = false;
    std::array<double, 4> q{}; // outcome probabilities Tr(rho O_i)
};

WitnessVerdict witness(const WitnessFamily& family, const State& rho);

/// Werner state p|Psi_1><Psi_1| + (1-p)/4 I on the family's own |Psi_1>.
State werner_state(const WitnessFamily& family, double p);

/// Smallest Werner p detected by the MD witness, by bisection to 1e-9.
/// Returns 1 when the witness never triggers (product |Psi_1>).
double werner_threshold(const WitnessFamily& family);

struct StressReport {
    int trials = 0;
    uint64_t seed = 0;
    double bound = 0;
    double min_sum_md = 0;
    std::array<Complex, 2> argmin_a{}; // qubit A amplitudes at the minimum
    std::array<Complex, 2> argmin_b{};
    bool ok = false;
};

/// Samples Haar-random pure product states and checks the separable bound
/// sum_md >= 4 a^2 b^2 - 1e-10 on every draw. Sharded deterministically from
/// the master seed. Throws BoundViolated if a sample lands below the bound.
StressReport separable_stress_test(const WitnessFamily& family, int trials, uint64_t seed);

} // namespace devur::entwit
