#pragma once

#include <stdexcept>
#include <string>

namespace baysc {

// Malformed or unreadable input files. The CLI maps this to exit code 3.
class InputFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite values or failed numerical procedures. Exit code 4.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace baysc
