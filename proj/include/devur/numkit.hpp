#pragma once

#include <complex>
#include <initializer_list>
#include <variant>
#include <vector>

#include "devur/error.hpp"

namespace devur {

using Complex = std::complex<double>;

/// Dense complex vector. A state vector additionally carries unit 2-norm,
/// checked where required (see State).
class CVec {
public:
    CVec() = default;
    explicit CVec(int dim) : data_(static_cast<size_t>(dim)) {
        require(dim > 0, Err::InvalidArgument, "CVec dimension must be positive");
    }
    CVec(std::initializer_list<Complex> xs) : data_(xs) {}

    int dim() const { return static_cast<int>(data_.size()); }
    Complex& operator[](int i) { return data_[static_cast<size_t>(i)]; }
    const Complex& operator[](int i) const { return data_[static_cast<size_t>(i)]; }
    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    double norm() const;        // 2-norm
    double norm_sq() const;
    CVec normalized() const;
    /// Hermitian inner product, conjugate-linear in *this.
    Complex dot(const CVec& other) const;

    CVec& operator+=(const CVec& o);
    CVec& operator-=(const CVec& o);
    CVec& operator*=(Complex c);
    friend CVec operator+(CVec a, const CVec& b) { return a += b; }
    friend CVec operator-(CVec a, const CVec& b) { return a -= b; }
    friend CVec operator*(Complex c, CVec v) { return v *= c; }

private:
    std::vector<Complex> data_;
};

/// Dense row-major complex matrix.
class CMat {
public:
    CMat() = default;
    CMat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
        require(rows > 0 && cols > 0, Err::InvalidArgument, "CMat dims must be positive");
    }

    static CMat identity(int n);
    static CMat zero(int rows, int cols);
    /// Rank-1 projector |v><v| (v need not be normalized; uses v as given).
    static CMat outer(const CVec& v, const CVec& w);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Complex& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Complex& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    CMat dagger() const;
    Complex trace() const;
    double max_abs() const;
    /// max entrywise |M - M^dagger|
    double hermiticity_residual() const;
    bool is_hermitian(double tol = 1e-9) const { return rows_ == cols_ && hermiticity_residual() <= tol; }

    CVec apply(const CVec& v) const;
    CMat mul(const CMat& o) const;

    CMat& operator+=(const CMat& o);
    CMat& operator-=(const CMat& o);
    CMat& operator*=(Complex c);
    friend CMat operator+(CMat a, const CMat& b) { return a += b; }
    friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
    friend CMat operator*(Complex c, CMat m) { return m *= c; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Complex> data_;
};

/// Spectral decomposition of a Hermitian matrix: ascending eigenvalues,
/// orthonormal eigenvectors, and the partition of indices into degeneracy
/// classes (eigenvalues closer than the degeneracy tolerance).
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<CVec> eigenvectors;
    std::vector<std::vector<int>> degeneracy_classes;

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    /// Mean eigenvalue of a degeneracy class (the reporting representative).
    double class_eigenvalue(int c) const;
};

/// Cyclic Jacobi eigensolver for Hermitian matrices (dims <= ~16).
/// Deterministic: fixed sweep order; each eigenvector's largest-magnitude
/// component is made real positive.
/// Throws NotHermitian / NoConvergence.
Spectrum eig_hermitian(const CMat& m);

CMat kron(const CMat& a, const CMat& b);

enum class Keep { A, B };

/// Reduced density matrix of a bipartite density operator on C^dA (x) C^dB.
CMat partial_trace(const CMat& rho, int dim_a, int dim_b, Keep keep);

/// Quantum state: pure vector or density matrix.
class State {
public:
    static State pure(CVec psi);
    static State mixed(CMat rho);

    bool is_pure() const { return std::holds_alternative<CVec>(rep_); }
    int dim() const;
    const CVec& vector() const;
    const CMat& matrix() const;
    /// Density matrix view (|psi><psi| for pure states).
    CMat density() const;
    /// <v|rho|v> as a real probability (imaginary residue discarded).
    double overlap_probability(const CVec& v) const;

private:
    std::variant<CVec, CMat> rep_;
};

/// Tr(rho O) or <psi|O|psi>; imaginary residue above 1e-8 raises NonrealExpectation.
double expval(const CMat& o, const State& state);

namespace detail {
/// Degeneracy tolerance used to cluster eigenvalues: 1e-8 * max(1, max|M|).
double degeneracy_tolerance(const CMat& m);
} // namespace detail

} // namespace devur
