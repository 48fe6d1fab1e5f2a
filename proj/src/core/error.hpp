#pragma once

#include <stdexcept>
#include <string>

namespace synthgrid {

enum class ErrorKind {
    io,
    parse,
    integrity,
    invalid_argument,
    unknown_interconnection,
    no_generators_for_target,
    zero_group_capacity,
    zero_current_price,
    domain_mismatch,
    empty_profile,
    spur_topology,
    zero_total_weight,
    no_donor_data,
    too_short,
    no_valid_neighbor,
    bad_mix,
    infeasible_month,
    dimension_mismatch,
    unbounded_cost,
    numerical_failure,
    not_optimal,
    bad_window_length,
    retry_cap_exceeded,
    missing_profile,
    empty_log,
    iteration_cap_exceeded,
    upgrade_stalled,
    bad_cap,
};

const char* error_kind_name(ErrorKind kind) noexcept;

// Single exception type for the library; the kind drives the C API status code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace synthgrid
