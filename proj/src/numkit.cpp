#include "devur/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace devur {

const char* err_name(Err kind) {
    switch (kind) {
        case Err::NotHermitian: return "NotHermitian";
        case Err::NoConvergence: return "NoConvergence";
        case Err::DimensionMismatch: return "DimensionMismatch";
        case Err::NonrealExpectation: return "NonrealExpectation";
        case Err::InvalidAlpha: return "InvalidAlpha";
        case Err::MixedStateUnsupported: return "MixedStateUnsupported";
        case Err::InternalViolation: return "InternalViolation";
        case Err::NotOrthogonal: return "NotOrthogonal";
        case Err::NeedOverlapConstant: return "NeedOverlapConstant";
        case Err::NotNormalized: return "NotNormalized";
        case Err::GridTooCoarse: return "GridTooCoarse";
        case Err::ConstraintViolated: return "ConstraintViolated";
        case Err::PatchInfeasible: return "PatchInfeasible";
        case Err::ParamOutOfRange: return "ParamOutOfRange";
        case Err::SeriesNotConverged: return "SeriesNotConverged";
        case Err::BoundViolated: return "BoundViolated";
        case Err::Cancelled: return "Cancelled";
        case Err::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

// ---------------------------------------------------------------- CVec

double CVec::norm_sq() const {
    double s = 0;
    for (const auto& z : data_) s += std::norm(z);
    return s;
}

double CVec::norm() const { return std::sqrt(norm_sq()); }

CVec CVec::normalized() const {
    double n = norm();
    require(n > 0, Err::InvalidArgument, "cannot normalize zero vector");
    CVec out = *this;
    for (auto& z : out.data_) z /= n;
    return out;
}

Complex CVec::dot(const CVec& other) const {
    require(dim() == other.dim(), Err::DimensionMismatch, "CVec::dot dimension mismatch");
    Complex s = 0;
    for (int i = 0; i < dim(); ++i) s += std::conj(data_[i]) * other.data_[i];
    return s;
}

CVec& CVec::operator+=(const CVec& o) {
    require(dim() == o.dim(), Err::DimensionMismatch, "CVec add dimension mismatch");
    for (int i = 0; i < dim(); ++i) data_[i] += o.data_[i];
    return *this;
}

CVec& CVec::operator-=(const CVec& o) {
    require(dim() == o.dim(), Err::DimensionMismatch, "CVec sub dimension mismatch");
    for (int i = 0; i < dim(); ++i) data_[i] -= o.data_[i];
    return *this;
}

CVec& CVec::operator*=(Complex c) {
    for (auto& z : data_) z *= c;
    return *this;
}

// ---------------------------------------------------------------- CMat

CMat CMat::identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::zero(int rows, int cols) { return CMat(rows, cols); }

CMat CMat::outer(const CVec& v, const CVec& w) {
    CMat m(v.dim(), w.dim());
    for (int i = 0; i < v.dim(); ++i)
        for (int j = 0; j < w.dim(); ++j) m(i, j) = v[i] * std::conj(w[j]);
    return m;
}

CMat CMat::dagger() const {
    CMat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

Complex CMat::trace() const {
    require(rows_ == cols_, Err::DimensionMismatch, "trace of non-square matrix");
    Complex s = 0;
    for (int i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
}

double CMat::max_abs() const {
    double m = 0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double CMat::hermiticity_residual() const {
    if (rows_ != cols_) return std::numeric_limits<double>::infinity();
    double m = 0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

CVec CMat::apply(const CVec& v) const {
    require(cols_ == v.dim(), Err::DimensionMismatch, "CMat::apply dimension mismatch");
    CVec out(rows_);
    for (int i = 0; i < rows_; ++i) {
        Complex s = 0;
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

CMat CMat::mul(const CMat& o) const {
    require(cols_ == o.rows_, Err::DimensionMismatch, "CMat::mul dimension mismatch");
    CMat out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            Complex a = (*this)(i, k);
            if (a == 0.0) continue;
            for (int j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
        }
    return out;
}

CMat& CMat::operator+=(const CMat& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, Err::DimensionMismatch, "CMat add mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

CMat& CMat::operator-=(const CMat& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, Err::DimensionMismatch, "CMat sub mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

CMat& CMat::operator*=(Complex c) {
    for (auto& z : data_) z *= c;
    return *this;
}

// ---------------------------------------------------------------- eig_hermitian

namespace detail {
double degeneracy_tolerance(const CMat& m) { return 1e-8 * std::max(1.0, m.max_abs()); }
} // namespace detail

double Spectrum::class_eigenvalue(int c) const {
    const auto& cls = degeneracy_classes[static_cast<size_t>(c)];
    double s = 0;
    for (int idx : cls) s += eigenvalues[static_cast<size_t>(idx)];
    return s / static_cast<double>(cls.size());
}

namespace {

double offdiag_frobenius(const CMat& m) {
    double s = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

} // namespace

Spectrum eig_hermitian(const CMat& input) {
    require(input.rows() == input.cols(), Err::DimensionMismatch, "eig_hermitian: non-square matrix");
    require(input.hermiticity_residual() <= 1e-9, Err::NotHermitian,
            "eig_hermitian: matrix is not Hermitian within 1e-9");

    const int n = input.rows();
    const double scale = input.max_abs();

    // Work on a symmetrized, scaled copy so the convergence threshold is scale-free.
    CMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));
    if (scale > 0) m *= Complex(1.0 / scale, 0.0);

    CMat v = CMat::identity(n);

    constexpr int kMaxSweeps = 100;
    constexpr double kOffTol = 1e-13;
    bool converged = (n == 1) || offdiag_frobenius(m) < kOffTol;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = m(p, q);
                const double r = std::abs(apq);
                if (r < 1e-300) continue;
                const double app = m(p, p).real();
                const double aqq = m(q, q).real();
                const Complex phase = apq / r; // e^{i beta}
                const double tau = (aqq - app) / (2.0 * r);
                double t;
                if (tau >= 0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Plane rotation G: G_pp = c, G_pq = s, G_qp = -s*conj(phase),
                // G_qq = c*conj(phase). Updates M <- G^dag M G, V <- V G.
                const Complex ph_conj = std::conj(phase);
                for (int k = 0; k < n; ++k) {
                    const Complex mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * ph_conj * mkq;
                    m(k, q) = s * mkp + c * ph_conj * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * phase * mqk;
                    m(q, k) = s * mpk + c * phase * mqk;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * ph_conj * vkq;
                    v(k, q) = s * vkp + c * ph_conj * vkq;
                }
            }
        }
        converged = offdiag_frobenius(m) < kOffTol;
    }
    require(converged, Err::NoConvergence, "eig_hermitian: Jacobi sweep cap reached");

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return m(a, a).real() < m(b, b).real(); });

    Spectrum out;
    out.eigenvalues.resize(static_cast<size_t>(n));
    out.eigenvectors.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<size_t>(j)];
        out.eigenvalues[static_cast<size_t>(j)] = m(src, src).real() * (scale > 0 ? scale : 1.0);
        CVec col(n);
        for (int i = 0; i < n; ++i) col[i] = v(i, src);
        // Phase convention: largest-magnitude component real positive.
        int imax = 0;
        double amax = std::abs(col[0]);
        for (int i = 1; i < n; ++i) {
            const double a = std::abs(col[i]);
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        if (amax > 0) col *= std::conj(col[imax]) / amax;
        out.eigenvectors[static_cast<size_t>(j)] = std::move(col);
    }

    const double deg_tol = detail::degeneracy_tolerance(input);
    std::vector<int> current{0};
    for (int j = 1; j < n; ++j) {
        if (out.eigenvalues[static_cast<size_t>(j)] - out.eigenvalues[static_cast<size_t>(j - 1)] <= deg_tol) {
            current.push_back(j);
        } else {
            out.degeneracy_classes.push_back(std::move(current));
            current = {j};
        }
    }
    out.degeneracy_classes.push_back(std::move(current));
    return out;
}

// ---------------------------------------------------------------- kron / partial trace

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == 0.0) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

CMat partial_trace(const CMat& rho, int dim_a, int dim_b, Keep keep) {
    require(dim_a > 0 && dim_b > 0, Err::DimensionMismatch, "partial_trace: bad subsystem dims");
    require(rho.rows() == rho.cols() && rho.rows() == dim_a * dim_b, Err::DimensionMismatch,
            "partial_trace: matrix is not (dA*dB) square");
    require(std::abs(rho.trace() - Complex(1.0, 0.0)) <= 1e-10, Err::NotNormalized,
            "partial_trace: input must have unit trace");
    if (keep == Keep::A) {
        CMat out(dim_a, dim_a);
        for (int i = 0; i < dim_a; ++i)
            for (int j = 0; j < dim_a; ++j) {
                Complex s = 0;
                for (int k = 0; k < dim_b; ++k) s += rho(i * dim_b + k, j * dim_b + k);
                out(i, j) = s;
            }
        return out;
    }
    CMat out(dim_b, dim_b);
    for (int k = 0; k < dim_b; ++k)
        for (int l = 0; l < dim_b; ++l) {
            Complex s = 0;
            for (int i = 0; i < dim_a; ++i) s += rho(i * dim_b + k, i * dim_b + l);
            out(k, l) = s;
        }
    return out;
}

// ---------------------------------------------------------------- State

State State::pure(CVec psi) {
    require(std::abs(psi.norm() - 1.0) <= 1e-12, Err::NotNormalized,
            "pure state must have unit norm within 1e-12");
    State s;
    s.rep_ = std::move(psi);
    return s;
}

State State::mixed(CMat rho) {
    require(rho.rows() == rho.cols(), Err::DimensionMismatch, "density matrix must be square");
    require(rho.hermiticity_residual() <= 1e-9, Err::NotHermitian, "density matrix not Hermitian");
    require(std::abs(rho.trace() - Complex(1.0, 0.0)) <= 1e-10, Err::NotNormalized,
            "density matrix must have unit trace");
    State s;
    s.rep_ = std::move(rho);
    return s;
}

int State::dim() const {
    return is_pure() ? std::get<CVec>(rep_).dim() : std::get<CMat>(rep_).rows();
}

const CVec& State::vector() const {
    require(is_pure(), Err::InvalidArgument, "state is not pure");
    return std::get<CVec>(rep_);
}

const CMat& State::matrix() const {
    require(!is_pure(), Err::InvalidArgument, "state is not mixed");
    return std::get<CMat>(rep_);
}

CMat State::density() const {
    if (is_pure()) {
        const CVec& psi = std::get<CVec>(rep_);
        return CMat::outer(psi, psi);
    }
    return std::get<CMat>(rep_);
}

double State::overlap_probability(const CVec& v) const {
    if (is_pure()) {
        return std::norm(v.dot(std::get<CVec>(rep_)));
    }
    const CMat& rho = std::get<CMat>(rep_);
    const CVec rv = rho.apply(v);
    return std::max(0.0, v.dot(rv).real());
}

double expval(const CMat& o, const State& state) {
    require(o.rows() == o.cols() && o.rows() == state.dim(), Err::DimensionMismatch,
            "expval: operator/state dimension mismatch");
    Complex val;
    if (state.is_pure()) {
        const CVec& psi = state.vector();
        val = psi.dot(o.apply(psi));
    } else {
        val = o.mul(state.matrix()).trace();
    }
    require(std::abs(val.imag()) <= 1e-8, Err::NonrealExpectation,
            "expval: imaginary residue exceeds 1e-8");
    return val.real();
}

} // namespace devur
