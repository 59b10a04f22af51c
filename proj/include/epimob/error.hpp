#pragma once

#include <stdexcept>
#include <string>

namespace epimob {

// Error categories map to distinct CLI exit codes: bad inputs (files,
// flags, schemas) vs failures inside a computation (singular fits, etc).
enum class ErrorKind { InvalidInput, Computation };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Error input_error(const std::string& msg) {
    return Error(ErrorKind::InvalidInput, msg);
}

inline Error computation_error(const std::string& msg) {
    return Error(ErrorKind::Computation, msg);
}

} // namespace epimob
