#pragma once

#include <exception>
#include <string>

namespace proxycause {

// Every failure carries a stable machine-readable code used in CLI reports.
class Error : public std::exception {
public:
    Error(std::string code, std::string message)
        : code_(std::move(code)), message_(std::move(message)) {}
    const char* what() const noexcept override { return message_.c_str(); }
    const std::string& code() const noexcept { return code_; }

    /// Adds location context (e.g. the stratum) while keeping the dynamic type;
    /// use with a bare `throw;`.
    void prepend(const std::string& context) { message_ = context + message_; }

private:
    std::string code_;
    std::string message_;
};

#define PROXYCAUSE_ERROR(Name, Base, Code)                                 \
    class Name : public Base {                                             \
    public:                                                                \
        explicit Name(const std::string& what) : Base(Code, what) {}       \
                                                                           \
    protected:                                                             \
        Name(std::string code, const std::string& what)                    \
            : Base(std::move(code), what) {}                               \
    };

// Input problems: malformed files, unknown names, violated preconditions.
PROXYCAUSE_ERROR(InputError, Error, "INPUT")
PROXYCAUSE_ERROR(FormatError, InputError, "FORMAT")
PROXYCAUSE_ERROR(EmptyDataError, InputError, "EMPTY_DATA")
PROXYCAUSE_ERROR(UnknownVertexError, InputError, "UNKNOWN_VERTEX")
PROXYCAUSE_ERROR(UnknownVariableError, InputError, "UNKNOWN_VARIABLE")
PROXYCAUSE_ERROR(CycleError, InputError, "CYCLE")
PROXYCAUSE_ERROR(PreconditionError, InputError, "PRECONDITION")
PROXYCAUSE_ERROR(SchemaMismatchError, InputError, "SCHEMA_MISMATCH")
PROXYCAUSE_ERROR(SpecError, InputError, "SPEC")
PROXYCAUSE_ERROR(DesignError, InputError, "DESIGN")
PROXYCAUSE_ERROR(SizeError, InputError, "SIZE")
PROXYCAUSE_ERROR(PatternError, InputError, "PATTERN")

// Probability-level failures: conditioning on or dividing by zero mass.
PROXYCAUSE_ERROR(ZeroMassError, Error, "ZERO_MASS")
PROXYCAUSE_ERROR(ZeroConditionalError, Error, "ZERO_CONDITIONAL")
PROXYCAUSE_ERROR(PositivityError, Error, "POSITIVITY")

// The causal quantity cannot be pinned down from the data and assumptions.
PROXYCAUSE_ERROR(IdentificationError, Error, "IDENTIFICATION")
PROXYCAUSE_ERROR(SingularMatrixError, IdentificationError, "SINGULAR_MATRIX")
PROXYCAUSE_ERROR(ComplexEigenvalueError, IdentificationError, "COMPLEX_EIGENVALUE")
PROXYCAUSE_ERROR(DegenerateSpectrumError, IdentificationError, "DEGENERATE_SPECTRUM")
PROXYCAUSE_ERROR(NonPositiveEigenvalueError, IdentificationError, "NONPOSITIVE_EIGENVALUE")
PROXYCAUSE_ERROR(PivotError, IdentificationError, "PIVOT")
PROXYCAUSE_ERROR(RangeError, IdentificationError, "RANGE")
PROXYCAUSE_ERROR(NonDiagonalError, IdentificationError, "NON_DIAGONAL")
PROXYCAUSE_ERROR(ReconstructionError, IdentificationError, "RECONSTRUCTION")
PROXYCAUSE_ERROR(OrderAmbiguityError, IdentificationError, "ORDER_AMBIGUITY")
PROXYCAUSE_ERROR(IndependenceConditionError, IdentificationError, "INDEPENDENCE_CONDITION")
PROXYCAUSE_ERROR(NoCriterionError, IdentificationError, "NO_CRITERION")
PROXYCAUSE_ERROR(InfeasibleError, IdentificationError, "INFEASIBLE")

#undef PROXYCAUSE_ERROR

}  // namespace proxycause
