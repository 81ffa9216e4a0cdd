#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stdrep {

/// Base of every error raised by the library. `exit_code()` is the CLI
/// contract: 2 for malformed or inconsistent input, 3 for scale limits.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 2; }
    virtual const char* kind() const noexcept = 0;
};

#define STDREP_DEFINE_ERROR(Name)                                         \
    class Name : public Error {                                           \
    public:                                                               \
        using Error::Error;                                               \
        const char* kind() const noexcept override { return #Name; }      \
    };

STDREP_DEFINE_ERROR(SpecError)
STDREP_DEFINE_ERROR(DomainError)
STDREP_DEFINE_ERROR(KindError)
STDREP_DEFINE_ERROR(ArityError)
STDREP_DEFINE_ERROR(SymmetryError)
STDREP_DEFINE_ERROR(RangeError)
STDREP_DEFINE_ERROR(UnsupportedError)

#undef STDREP_DEFINE_ERROR

class ScaleError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
    const char* kind() const noexcept override { return "ScaleError"; }
};

/// Raised when the Monte Carlo test cannot reach the expected-count floor.
class PowerError : public Error {
public:
    PowerError(const std::string& what, std::size_t required_runs)
        : Error(what), required_runs_(required_runs) {}
    const char* kind() const noexcept override { return "PowerError"; }
    std::size_t required_runs() const noexcept { return required_runs_; }

private:
    std::size_t required_runs_;
};

/// A kernel is not constant on a tuple of sigma-atoms. The witness holds two
/// atom-id tuples with identical Cantor codes and different kernel values.
class MeasurabilityError : public Error {
public:
    MeasurabilityError(const std::string& what, std::string kernel,
                       std::vector<std::string> first, std::vector<std::string> second)
        : Error(what), kernel_(std::move(kernel)), first_(std::move(first)),
          second_(std::move(second)) {}
    const char* kind() const noexcept override { return "MeasurabilityError"; }
    const std::string& kernel() const noexcept { return kernel_; }
    const std::vector<std::string>& witness_first() const noexcept { return first_; }
    const std::vector<std::string>& witness_second() const noexcept { return second_; }

private:
    std::string kernel_;
    std::vector<std::string> first_;
    std::vector<std::string> second_;
};

} // namespace stdrep
