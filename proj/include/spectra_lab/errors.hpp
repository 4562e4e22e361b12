#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spectra_lab {

// Argument outside the mathematical domain of an operation (bad index, odd order, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An exhaustive enumeration would exceed its configured budget.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::uint64_t attempted_states)
      : std::runtime_error(what), attempted_states_(attempted_states) {}

  std::uint64_t attempted_states() const noexcept { return attempted_states_; }

 private:
  std::uint64_t attempted_states_;
};

// A numerical or structural contract was broken (e.g. a matrix tagged skew is not skew).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace spectra_lab
