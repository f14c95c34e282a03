#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace erwalk {

/// Base class for all domain errors. `name()` is the stable identifier that
/// the CLI prints on standard error and that callers may dispatch on.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

struct InvalidProbability : Error {
    explicit InvalidProbability(const std::string& m) : Error("InvalidProbability", m) {}
};

struct InvalidSize : Error {
    explicit InvalidSize(const std::string& m) : Error("InvalidSize", m) {}
};

struct MonotonicityViolation : Error {
    explicit MonotonicityViolation(const std::string& m) : Error("MonotonicityViolation", m) {}
};

struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& m) : Error("IndexOutOfRange", m) {}
};

struct IsolatedVertex : Error {
    explicit IsolatedVertex(const std::string& m) : Error("IsolatedVertex", m) {}
};

struct ConvergenceFailure : Error {
    explicit ConvergenceFailure(const std::string& m) : Error("ConvergenceFailure", m) {}
};

struct NearDisconnected : Error {
    explicit NearDisconnected(const std::string& m) : Error("NearDisconnected", m) {}
};

struct SameVertex : Error {
    explicit SameVertex(const std::string& m) : Error("SameVertex", m) {}
};

struct NotConnected : Error {
    explicit NotConnected(const std::string& m) : Error("NotConnected", m) {}
};

struct SingularSystem : Error {
    explicit SingularSystem(const std::string& m) : Error("SingularSystem", m) {}
};

struct StepCapExceeded : Error {
    explicit StepCapExceeded(const std::string& m) : Error("StepCapExceeded", m) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& m) : Error("DimensionMismatch", m) {}
};

struct IsolatedTarget : Error {
    explicit IsolatedTarget(const std::string& m) : Error("IsolatedTarget", m) {}
};

struct TooManyRejections : Error {
    explicit TooManyRejections(const std::string& m) : Error("TooManyRejections", m) {}
};

struct InsufficientSamples : Error {
    explicit InsufficientSamples(const std::string& m) : Error("InsufficientSamples", m) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error("ParseError", m) {}
};

}  // namespace erwalk
