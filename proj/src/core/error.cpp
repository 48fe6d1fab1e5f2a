#include "error.hpp"

namespace synthgrid {

const char* error_kind_name(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::io: return "IoError";
        case ErrorKind::parse: return "ParseError";
        case ErrorKind::integrity: return "IntegrityError";
        case ErrorKind::invalid_argument: return "InvalidArgument";
        case ErrorKind::unknown_interconnection: return "UnknownInterconnection";
        case ErrorKind::no_generators_for_target: return "NoGeneratorsForTarget";
        case ErrorKind::zero_group_capacity: return "ZeroGroupCapacity";
        case ErrorKind::zero_current_price: return "ZeroCurrentPrice";
        case ErrorKind::domain_mismatch: return "DomainMismatch";
        case ErrorKind::empty_profile: return "EmptyProfile";
        case ErrorKind::spur_topology: return "SpurTopologyError";
        case ErrorKind::zero_total_weight: return "ZeroTotalWeight";
        case ErrorKind::no_donor_data: return "NoDonorData";
        case ErrorKind::too_short: return "TooShort";
        case ErrorKind::no_valid_neighbor: return "NoValidNeighbor";
        case ErrorKind::bad_mix: return "BadMix";
        case ErrorKind::infeasible_month: return "InfeasibleMonth";
        case ErrorKind::dimension_mismatch: return "DimensionMismatch";
        case ErrorKind::unbounded_cost: return "UnboundedCost";
        case ErrorKind::numerical_failure: return "NumericalFailure";
        case ErrorKind::not_optimal: return "NotOptimal";
        case ErrorKind::bad_window_length: return "BadWindowLength";
        case ErrorKind::retry_cap_exceeded: return "RetryCapExceeded";
        case ErrorKind::missing_profile: return "MissingProfile";
        case ErrorKind::empty_log: return "EmptyLog";
        case ErrorKind::iteration_cap_exceeded: return "IterationCapExceeded";
        case ErrorKind::upgrade_stalled: return "UpgradeStalled";
        case ErrorKind::bad_cap: return "BadCap";
    }
    return "Error";
}

}  // namespace synthgrid
