#pragma once

#include <stdexcept>
#include <string>

namespace qclab {

// Failure classes surfaced by the library.  `numerical` marks conditions where
// the inputs were well formed but an algorithm could not certify its result;
// callers (the CLI in particular) report those separately from usage errors.
enum class errc {
    invalid_argument,
    io_error,
    too_many_terms,
    norm_not_less_than_one,
    factorization_failed,
    empty_series,
    boundary_too_close_to_zero,
    quadrature_not_converged,
    non_real_zero_detected,
    convergence_failure,
    not_enough_points,
    ball_exceeds_window,
    window_too_short,
    support_exceeds_window,
    no_height_found,
    truncation_budget_exceeded,
    window_too_small,
    grid_too_short,
    empty_zero_set,
    zero_at_origin,
    insufficient_zeros,
    evaluation_at_zero,
    non_positive_imaginary_part,
    height_too_low,
    int_condition_diverging,
    count_mismatch,
    no_candidate_periods,
};

inline const char* to_string(errc code) {
    switch (code) {
        case errc::invalid_argument: return "InvalidArgument";
        case errc::io_error: return "IoError";
        case errc::too_many_terms: return "TooManyTerms";
        case errc::norm_not_less_than_one: return "NormNotLessThanOne";
        case errc::factorization_failed: return "FactorizationFailed";
        case errc::empty_series: return "EmptySeries";
        case errc::boundary_too_close_to_zero: return "BoundaryTooCloseToZero";
        case errc::quadrature_not_converged: return "QuadratureNotConverged";
        case errc::non_real_zero_detected: return "NonRealZeroDetected";
        case errc::convergence_failure: return "ConvergenceFailure";
        case errc::not_enough_points: return "NotEnoughPoints";
        case errc::ball_exceeds_window: return "BallExceedsWindow";
        case errc::window_too_short: return "WindowTooShort";
        case errc::support_exceeds_window: return "SupportExceedsWindow";
        case errc::no_height_found: return "NoHeightFound";
        case errc::truncation_budget_exceeded: return "TruncationBudgetExceeded";
        case errc::window_too_small: return "WindowTooSmall";
        case errc::grid_too_short: return "GridTooShort";
        case errc::empty_zero_set: return "EmptyZeroSet";
        case errc::zero_at_origin: return "ZeroAtOrigin";
        case errc::insufficient_zeros: return "InsufficientZeros";
        case errc::evaluation_at_zero: return "EvaluationAtZero";
        case errc::non_positive_imaginary_part: return "NonPositiveImaginaryPart";
        case errc::height_too_low: return "HeightTooLow";
        case errc::int_condition_diverging: return "IntConditionDiverging";
        case errc::count_mismatch: return "CountMismatch";
        case errc::no_candidate_periods: return "NoCandidatePeriods";
    }
    return "UnknownError";
}

// True for failures of convergence or certification rather than of usage.
inline bool is_numerical(errc code) {
    switch (code) {
        case errc::factorization_failed:
        case errc::quadrature_not_converged:
        case errc::non_real_zero_detected:
        case errc::convergence_failure:
        case errc::no_height_found:
        case errc::truncation_budget_exceeded:
        case errc::too_many_terms:
        case errc::boundary_too_close_to_zero:
        case errc::height_too_low:
        case errc::int_condition_diverging:
            return true;
        default:
            return false;
    }
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }
    bool numerical() const { return is_numerical(code_); }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace qclab
