#pragma once

#include <stdexcept>
#include <string>

namespace greenforge {

// Bad argument values or mismatched inputs.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Unreadable or unwritable files. Messages always name the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A container we can open but whose contents we do not support.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace greenforge
