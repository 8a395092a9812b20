#pragma once

#include <stdexcept>
#include <string>

namespace qsq {

// Shape mismatch between operands (non-square, incompatible dims, bad layout).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition on numeric input does not hold.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownLabelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One of the numbered conditions of a construction or lemma fails. `condition`
// is a short tag such as "(ii)" or "coherence".
class ConditionError : public std::runtime_error {
 public:
  ConditionError(std::string condition, const std::string& what)
      : std::runtime_error(condition + ": " + what), condition_(std::move(condition)) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

// A gauge reconstruction aborted at the named step.
class ReconstructionError : public std::runtime_error {
 public:
  ReconstructionError(std::string step, const std::string& what)
      : std::runtime_error("reconstruction failed at step '" + step + "': " + what),
        step_(std::move(step)) {}
  const std::string& step() const { return step_; }

 private:
  std::string step_;
};

}  // namespace qsq
