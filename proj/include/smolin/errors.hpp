#pragma once

#include <stdexcept>
#include <string>

namespace smolin {

// Bad arguments or malformed input files. CLI maps this to exit code 2.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-Hermitian operand, rank-deficient measurement set,
// projection onto a null outcome. CLI maps this to exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace smolin
