#ifndef DIFFINV_ERROR_HPP
#define DIFFINV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace diffinv {

// Base class for all mathematical errors raised by the library.
// Usage errors (bad arguments, malformed files) use std::invalid_argument.
struct math_error : std::runtime_error {
    explicit math_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct parse_error : std::invalid_argument {
    size_t position;
    parse_error(const std::string& msg, size_t pos)
        : std::invalid_argument(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

struct pole_error : math_error {
    explicit pole_error(const std::string& msg) : math_error(msg) {}
};

struct degenerate_symbol_error : math_error {
    explicit degenerate_symbol_error(const std::string& msg) : math_error(msg) {}
};

struct general_position_error : math_error {
    std::string jacobian; // the vanished Jacobian, printed
    explicit general_position_error(const std::string& msg, std::string jac = "")
        : math_error(msg), jacobian(std::move(jac)) {}
};

} // namespace diffinv

#endif
