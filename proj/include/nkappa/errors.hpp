#pragma once

#include <stdexcept>
#include <string>

namespace nk {

// Base class for all domain-level failures.  Anything deriving from
// DomainError is a property of the mathematical input, not a bug; the CLI
// maps these to exit status 1.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class PoleOnSupport : public DomainError {
public:
    explicit PoleOnSupport(const std::string& what) : DomainError(what) {}
};

class DivergentIntegral : public DomainError {
public:
    explicit DivergentIntegral(const std::string& what) : DomainError(what) {}
};

class QuadratureFailure : public DomainError {
public:
    explicit QuadratureFailure(const std::string& what) : DomainError(what) {}
};

class InvalidWindows : public DomainError {
public:
    explicit InvalidWindows(const std::string& what) : DomainError(what) {}
};

class EmptyWindow : public DomainError {
public:
    explicit EmptyWindow(const std::string& what) : DomainError(what) {}
};

class WitnessNotFound : public DomainError {
public:
    explicit WitnessNotFound(const std::string& what) : DomainError(what) {}
};

class PreconditionFailed : public DomainError {
public:
    explicit PreconditionFailed(const std::string& what) : DomainError(what) {}
};

class CoincidentPoints : public DomainError {
public:
    explicit CoincidentPoints(const std::string& what) : DomainError(what) {}
};

class NonHermitianInput : public DomainError {
public:
    explicit NonHermitianInput(const std::string& what) : DomainError(what) {}
};

class DimensionMismatch : public DomainError {
public:
    explicit DimensionMismatch(const std::string& what) : DomainError(what) {}
};

class OriginSingularity : public DomainError {
public:
    explicit OriginSingularity(const std::string& what) : DomainError(what) {}
};

class NearSingularity : public DomainError {
public:
    explicit NearSingularity(const std::string& what) : DomainError(what) {}
};

class NonIntegrableTail : public DomainError {
public:
    explicit NonIntegrableTail(const std::string& what) : DomainError(what) {}
};

// Signals a conversion bug (round-trip contract violated), not user error.
class InternalInconsistency : public DomainError {
public:
    explicit InternalInconsistency(const std::string& what) : DomainError(what) {}
};

// Malformed or invariant-violating input data (JSON specs, constructor args).
class InvalidSpec : public DomainError {
public:
    explicit InvalidSpec(const std::string& what) : DomainError(what) {}
};

// Input text that is not valid JSON at all; the CLI maps this to a usage
// error (exit status 2) rather than a domain failure.
class MalformedJson : public InvalidSpec {
public:
    explicit MalformedJson(const std::string& what) : InvalidSpec(what) {}
};

} // namespace nk
