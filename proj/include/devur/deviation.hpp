#pragma once

#include <string>
#include <vector>

#include "devur/numkit.hpp"

namespace devur {

/// Hermitian observable with cached spectral decomposition.
class Observable {
public:
    explicit Observable(CMat matrix, std::string label = "");

    const CMat& matrix() const { return matrix_; }
    const Spectrum& spectrum() const { return spectrum_; }
    const std::string& label() const { return label_; }
    int dim() const { return matrix_.rows(); }

private:
    CMat matrix_;
    Spectrum spectrum_;
    std::string label_;
};

struct OutcomeRow {
    double eigenvalue;  // degeneracy-class representative
    double probability;
    double weight;      // |a - <O>|^alpha
};

/// Generalized alpha-deviation of an observable on a state.
/// alpha = 1 is the mean deviation, alpha = 2 the variance.
struct DeviationReport {
    double mean = 0;
    double alpha = 1;
    double value = 0;
    std::vector<OutcomeRow> outcomes; // one row per degeneracy class
};

/// Positive Hermitian operator whose square has expectation equal to the
/// alpha-deviation: sum_a sqrt(|a - <O>|^alpha) |a><a|.
struct PrimedOperator {
    double alpha = 1;
    double mean = 0;
    CMat matrix;
};

DeviationReport md_uncertainty(const Observable& o, const State& state, double alpha = 1.0);

PrimedOperator primed_operator(const Observable& o, const State& state, double alpha = 1.0);

/// Standard deviation: sqrt of the alpha = 2 deviation.
double sd_uncertainty(const Observable& o, const State& state);

namespace detail {
/// Probability of each eigenvector (fine-grained, one entry per basis element).
std::vector<double> eigen_probabilities(const Observable& o, const State& state);
} // namespace detail

} // namespace devur
