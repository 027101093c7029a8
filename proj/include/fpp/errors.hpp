#pragma once

#include <stdexcept>
#include <string>

namespace fpp {

// Argument outside an operation's domain (vertex outside the box, u not in [0,1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A documented precondition of an experiment does not hold (law outside E_{theta,S},
// box too small, enumeration guard exceeded, ...).
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A property that must hold exactly was observed to fail.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace fpp
