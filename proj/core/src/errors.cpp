#include "goi/errors.hpp"

namespace goi {

InjectivityError::InjectivityError(Nat input, Nat output, const std::string& what)
    : Error(what), input_(std::move(input)), output_(std::move(output)) {}

OverlapError::OverlapError(std::size_t first, std::size_t second, const std::string& what)
    : Error(what), first_(first), second_(second) {}

CompatibilityError::CompatibilityError(Nat witness, const std::string& detail)
    : Error("maps are not compatible at " + to_string(witness) +
            (detail.empty() ? std::string() : ": " + detail)),
      witness_(std::move(witness)) {}

DivergenceError::DivergenceError(Nat input, std::size_t budget)
    : Error("execution diverged on input " + to_string(input) + " after " +
            std::to_string(budget) + " steps"),
      input_(std::move(input)),
      budget_(budget) {}

NoResidueError::NoResidueError(Nat witness)
    : Error("no-residue condition fails: stripping " + to_string(witness) +
            " by the second injection never terminates"),
      witness_(std::move(witness)) {}

UnknownLawError::UnknownLawError(const std::string& name) : Error("unknown law '" + name + "'") {}

}  // namespace goi
