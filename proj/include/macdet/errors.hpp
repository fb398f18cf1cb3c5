#pragma once

#include <stdexcept>
#include <string>

namespace macdet {

// Parameter outside the model's admissible set.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Root isolation failed to reach tolerance or produced an inadmissible root set.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation requested for a parameter regime where it is not defined.
class CaseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Requested power allocation exceeds a sensor's cap.
class CapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace macdet
