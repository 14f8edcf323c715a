#ifndef MAGTRACE_ERRORS_HPP
#define MAGTRACE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace magtrace {

// A caller handed us arguments that violate a documented precondition.
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numerical procedure failed to converge or lost its accuracy guarantee.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace magtrace

#endif
