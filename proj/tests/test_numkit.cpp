#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "devur/numkit.hpp"
#include "devur/rng.hpp"
#include "devur/steering.hpp"

using namespace devur;

namespace {

CMat pauli_x() {
    CMat m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

CMat pauli_z() {
    CMat m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

CMat reconstruct(const Spectrum& s) {
    const int n = s.dim();
    CMat out(n, n);
    for (int j = 0; j < n; ++j) {
        const CVec& v = s.eigenvectors[static_cast<size_t>(j)];
        out += Complex(s.eigenvalues[static_cast<size_t>(j)], 0.0) * CMat::outer(v, v);
    }
    return out;
}

double max_entry_diff(const CMat& a, const CMat& b) {
    double m = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

} // namespace

TEST_CASE("eig_hermitian on simple matrices") {
    SUBCASE("identity") {
        const Spectrum s = eig_hermitian(CMat::identity(2));
        CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
        CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
        CHECK(s.degeneracy_classes.size() == 1);
        // orthonormal pair
        CHECK(std::abs(s.eigenvectors[0].dot(s.eigenvectors[1])) < 1e-12);
    }
    SUBCASE("already diagonal") {
        CMat m(2, 2);
        m(0, 0) = -1.0;
        m(1, 1) = 1.0;
        const Spectrum s = eig_hermitian(m);
        CHECK(s.eigenvalues[0] == doctest::Approx(-1.0));
        CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
        CHECK(std::abs(s.eigenvectors[0][0]) == doctest::Approx(1.0));
        CHECK(std::abs(s.eigenvectors[1][1]) == doctest::Approx(1.0));
    }
    SUBCASE("pauli-x") {
        const Spectrum s = eig_hermitian(pauli_x());
        CHECK(s.eigenvalues[0] == doctest::Approx(-1.0));
        CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        // phase convention: largest component real positive
        CHECK(s.eigenvectors[0][0].real() == doctest::Approx(inv_sqrt2));
        CHECK(s.eigenvectors[0][1].real() == doctest::Approx(-inv_sqrt2));
        CHECK(s.eigenvectors[1][0].real() == doctest::Approx(inv_sqrt2));
        CHECK(s.eigenvectors[1][1].real() == doctest::Approx(inv_sqrt2));
    }
    SUBCASE("rejects non-hermitian input") {
        CMat m(2, 2);
        m(0, 1) = 1.0;
        CHECK_THROWS_AS(eig_hermitian(m), Error);
    }
}

TEST_CASE("eig_hermitian reconstruction over random matrices") {
    Rng rng(20240811);
    for (int trial = 0; trial < 1000; ++trial) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 8); // 2..9
        const CMat m = rng.hermitian(dim);
        const Spectrum s = eig_hermitian(m);

        CHECK(max_entry_diff(reconstruct(s), m) < 1e-9);

        // completeness: sum of projectors is the identity
        CMat sum(dim, dim);
        for (const auto& v : s.eigenvectors) sum += CMat::outer(v, v);
        CHECK(max_entry_diff(sum, CMat::identity(dim)) < 1e-10);

        // eigen-equation residual
        for (int j = 0; j < dim; ++j) {
            const CVec& v = s.eigenvectors[static_cast<size_t>(j)];
            CVec mv = m.apply(v);
            mv -= Complex(s.eigenvalues[static_cast<size_t>(j)], 0.0) * v;
            CHECK(mv.norm() < 1e-9);
        }
        for (size_t j = 1; j < s.eigenvalues.size(); ++j)
            CHECK(s.eigenvalues[j] >= s.eigenvalues[j - 1]);
    }
}

TEST_CASE("eig_hermitian is deterministic") {
    Rng rng(7);
    const CMat m = rng.hermitian(5);
    const Spectrum s1 = eig_hermitian(m);
    const Spectrum s2 = eig_hermitian(m);
    for (size_t j = 0; j < s1.eigenvalues.size(); ++j) {
        CHECK(s1.eigenvalues[j] == s2.eigenvalues[j]);
        for (int i = 0; i < 5; ++i)
            CHECK(s1.eigenvectors[j][i] == s2.eigenvectors[j][i]);
    }
    // phase convention: the largest-magnitude component is real positive
    for (const auto& v : s1.eigenvectors) {
        int imax = 0;
        for (int i = 1; i < v.dim(); ++i)
            if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
        CHECK(v[imax].imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(v[imax].real() > 0);
    }
}

TEST_CASE("kron") {
    SUBCASE("identity times identity") {
        CHECK(max_entry_diff(kron(CMat::identity(2), CMat::identity(2)), CMat::identity(4)) == 0);
    }
    SUBCASE("diagonal product") {
        CMat a(2, 2), b(2, 2);
        a(0, 0) = 1.0;
        a(1, 1) = 2.0;
        b(0, 0) = 3.0;
        b(1, 1) = 4.0;
        const CMat k = kron(a, b);
        CHECK(k(0, 0) == Complex(3.0));
        CHECK(k(1, 1) == Complex(4.0));
        CHECK(k(2, 2) == Complex(6.0));
        CHECK(k(3, 3) == Complex(8.0));
    }
    SUBCASE("pauli-x pair fixes the Bell state") {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        CVec bell(4);
        bell[0] = inv_sqrt2;
        bell[3] = inv_sqrt2;
        const CVec mapped = kron(pauli_x(), pauli_x()).apply(bell);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(mapped[i] - bell[i]) < 1e-15);
    }
}

TEST_CASE("partial_trace") {
    Rng rng(99);
    SUBCASE("product states reduce to their factors") {
        for (int trial = 0; trial < 50; ++trial) {
            const CMat rho_a = rng.density(3);
            const CMat rho_b = rng.density(2);
            const CMat joint = kron(rho_a, rho_b);
            CHECK(max_entry_diff(partial_trace(joint, 3, 2, Keep::A), rho_a) < 1e-12);
            CHECK(max_entry_diff(partial_trace(joint, 3, 2, Keep::B), rho_b) < 1e-12);
            CHECK(std::abs(partial_trace(joint, 3, 2, Keep::A).trace() - joint.trace()) < 1e-12);
        }
    }
    SUBCASE("Bell state reduces to the maximally mixed qubit") {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        CVec bell(4);
        bell[0] = inv_sqrt2;
        bell[3] = inv_sqrt2;
        const CMat red = partial_trace(CMat::outer(bell, bell), 2, 2, Keep::A);
        CMat half = CMat::identity(2);
        half *= Complex(0.5, 0.0);
        CHECK(max_entry_diff(red, half) < 1e-12);
    }
    SUBCASE("lossless steering model reduces to the embedded mixed particle block") {
        const auto model = steering::build_model(0.7, 1.0);
        const CMat red = partial_trace(model.rho_f, 3, 3, Keep::A);
        for (int i = 0; i < 2; ++i) CHECK(red(i, i).real() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::abs(red(2, 2)) < 1e-12);
        CHECK(std::abs(red(0, 1)) < 1e-12);
    }
    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(partial_trace(CMat::identity(4), 3, 2, Keep::A), Error);
    }
}

TEST_CASE("expval") {
    CVec zero{1.0, 0.0};
    CVec plus{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    CHECK(expval(pauli_z(), State::pure(zero)) == doctest::Approx(1.0));
    CHECK(expval(pauli_z(), State::pure(plus)) == doctest::Approx(0.0).epsilon(1e-14));

    SUBCASE("number operator on the lossy model") {
        for (double eta : {0.3, 0.55, 1.0}) {
            const auto model = steering::build_model(0.4, eta);
            CHECK(steering::number_expectation(model) == doctest::Approx(eta).epsilon(1e-14));
        }
    }
    SUBCASE("non-real expectation is rejected") {
        CMat skew(2, 2);
        skew(0, 1) = Complex(0, 1);
        skew(1, 0) = Complex(0, 1); // not Hermitian
        CHECK_THROWS_AS(expval(skew, State::pure(plus)), Error);
    }
}

TEST_CASE("state validation") {
    CHECK_THROWS_AS(State::pure(CVec{1.0, 1.0}), Error);
    CMat not_unit = CMat::identity(2);
    CHECK_THROWS_AS(State::mixed(not_unit), Error);
}
