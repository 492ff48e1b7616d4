#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace landau
{

/// Machine-readable failure classes. The CLI prints `category_name()` on stderr
/// and maps a subset of them onto dedicated exit codes.
enum class ErrorCategory {
    division_by_zero,
    negative_radicand,
    invalid_symbol,
    coefficient_out_of_bounds,
    radius_out_of_range,
    point_outside_disc,
    tolerance_too_tight,
    resource_cap,
    budget_exhausted,
    degenerate_window,
    empty_mask,
    bounds_audit_failed,
    parse_error,
    invalid_argument,
};

constexpr std::string_view category_name(ErrorCategory c) noexcept
{
    switch (c) {
    case ErrorCategory::division_by_zero: return "DivisionByZero";
    case ErrorCategory::negative_radicand: return "NegativeRadicand";
    case ErrorCategory::invalid_symbol: return "InvalidSymbol";
    case ErrorCategory::coefficient_out_of_bounds: return "CoefficientOutOfBounds";
    case ErrorCategory::radius_out_of_range: return "RadiusOutOfRange";
    case ErrorCategory::point_outside_disc: return "PointOutsideDisc";
    case ErrorCategory::tolerance_too_tight: return "ToleranceTooTight";
    case ErrorCategory::resource_cap: return "ResourceCap";
    case ErrorCategory::budget_exhausted: return "BudgetExhausted";
    case ErrorCategory::degenerate_window: return "DegenerateWindow";
    case ErrorCategory::empty_mask: return "EmptyMask";
    case ErrorCategory::bounds_audit_failed: return "BoundsAuditFailed";
    case ErrorCategory::parse_error: return "ParseError";
    case ErrorCategory::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error
{
public:
    Error(ErrorCategory category, const std::string &what)
        : std::runtime_error(std::string(category_name(category)) + ": " + what), m_category(category)
    {
    }
    ErrorCategory category() const noexcept
    {
        return m_category;
    }

private:
    ErrorCategory m_category;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string &what)
{
    throw Error(category, what);
}

} // namespace landau
