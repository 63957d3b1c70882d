#pragma once

#include <stdexcept>
#include <string>

namespace devur {

/// Error categories surfaced by the library. `kind` maps to CLI exit codes:
/// validation-type errors exit 2, invariant violations exit 3.
enum class Err {
    NotHermitian,
    NoConvergence,
    DimensionMismatch,
    NonrealExpectation,
    InvalidAlpha,
    MixedStateUnsupported,
    InternalViolation,
    NotOrthogonal,
    NeedOverlapConstant,
    NotNormalized,
    GridTooCoarse,
    ConstraintViolated,
    PatchInfeasible,
    ParamOutOfRange,
    SeriesNotConverged,
    BoundViolated,
    Cancelled,
    InvalidArgument,
};

class Error : public std::runtime_error {
public:
    Error(Err kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Err kind() const noexcept { return kind_; }

    /// True for errors that indicate a broken internal invariant rather than bad input.
    bool is_internal() const noexcept {
        return kind_ == Err::InternalViolation || kind_ == Err::BoundViolated;
    }

private:
    Err kind_;
};

const char* err_name(Err kind);

[[noreturn]] inline void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, Err kind, const std::string& msg) {
    if (!cond) fail(kind, msg);
}

} // namespace devur
