#pragma once

#include <stdexcept>
#include <string>

namespace diagarcs {

enum class ErrorKind {
    input,         // malformed system or argument
    budget,        // enumeration / memory / evaluation budget exceeded
    overflow,      // wide-integer overflow
    precondition,  // mathematical precondition violated
    convergence,   // quadrature or iteration did not converge
    numeric,       // internal consistency check failed (reality, identities)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Quadrature that ran out of evaluations still hands back what it had.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_re, double best_im, double err)
        : Error(ErrorKind::convergence, what), best_re(best_re), best_im(best_im), best_err(err) {}
    double best_re, best_im, best_err;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace diagarcs
