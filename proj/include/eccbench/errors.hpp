#pragma once

#include <stdexcept>
#include <string>

namespace eccbench {

enum class ErrorCode {
    io,
    parse,
    schema,
    validation,
    invalid_graph,
    cycle,
    mismatched_grid,
    weight_sum,
    not_composite,
    empty_input,
    missing_utilization,
    unknown_node,
    last_child,
    unknown_component,
    unknown_intervention_target,
    zero_efficiency,
    domain,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define ECCBENCH_ERROR_TYPE(Name, code_value)                                  \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& message)                             \
            : Error(ErrorCode::code_value, message) {}                         \
    }

ECCBENCH_ERROR_TYPE(IoError, io);
ECCBENCH_ERROR_TYPE(ParseError, parse);
ECCBENCH_ERROR_TYPE(SchemaError, schema);
ECCBENCH_ERROR_TYPE(ValidationError, validation);
ECCBENCH_ERROR_TYPE(InvalidGraphError, invalid_graph);
ECCBENCH_ERROR_TYPE(CycleError, cycle);
ECCBENCH_ERROR_TYPE(MismatchedGridError, mismatched_grid);
ECCBENCH_ERROR_TYPE(WeightSumError, weight_sum);
ECCBENCH_ERROR_TYPE(NotCompositeError, not_composite);
ECCBENCH_ERROR_TYPE(EmptyInputError, empty_input);
ECCBENCH_ERROR_TYPE(MissingUtilizationError, missing_utilization);
ECCBENCH_ERROR_TYPE(UnknownNodeError, unknown_node);
ECCBENCH_ERROR_TYPE(LastChildError, last_child);
ECCBENCH_ERROR_TYPE(UnknownComponentError, unknown_component);
ECCBENCH_ERROR_TYPE(UnknownInterventionTargetError, unknown_intervention_target);
ECCBENCH_ERROR_TYPE(ZeroEfficiencyError, zero_efficiency);
ECCBENCH_ERROR_TYPE(DomainError, domain);

#undef ECCBENCH_ERROR_TYPE

} // namespace eccbench
