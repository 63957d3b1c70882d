#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "devur/numkit.hpp"

namespace devur {

/// Deterministic 64-bit generator (splitmix64). Pinned here so seeded runs
/// are bit-identical regardless of the standard library.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Complex complex_normal() { return Complex(normal(), normal()); }

    /// Haar-random pure state: normalized complex Gaussian vector.
    CVec haar_state(int dim) {
        CVec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = complex_normal();
        return v.normalized();
    }

    /// Random Hermitian matrix with Gaussian entries, (G + G^dagger)/2.
    CMat hermitian(int dim) {
        CMat g(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) g(i, j) = complex_normal();
        CMat h = g.dagger();
        h += g;
        h *= Complex(0.5, 0.0);
        return h;
    }

    /// Random density matrix, G G^dagger normalized to unit trace.
    CMat density(int dim) {
        CMat g(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) g(i, j) = complex_normal();
        CMat rho = g.mul(g.dagger());
        rho *= Complex(1.0 / rho.trace().real(), 0.0);
        // symmetrize away roundoff so State::mixed accepts it
        CMat sym = rho.dagger();
        sym += rho;
        sym *= Complex(0.5, 0.0);
        return sym;
    }

private:
    uint64_t state_;
};

} // namespace devur
