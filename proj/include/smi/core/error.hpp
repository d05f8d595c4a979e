#pragma once

#include <stdexcept>
#include <string>

namespace smi {

// Base for all library errors. Subclasses exist so callers can react to a
// specific failure (e.g. retry with jitter on NotPositiveDefinite) without
// string matching.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DomainError : public Error {
  public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

class OutOfSupport : public Error {
  public:
    explicit OutOfSupport(const std::string& msg) : Error(msg) {}
};

class NotPositiveDefinite : public Error {
  public:
    explicit NotPositiveDefinite(const std::string& msg) : Error(msg) {}
};

class UnsortedKnots : public Error {
  public:
    explicit UnsortedKnots(const std::string& msg) : Error(msg) {}
};

class LengthMismatch : public Error {
  public:
    explicit LengthMismatch(const std::string& msg) : Error(msg) {}
};

class NonFiniteValue : public Error {
  public:
    explicit NonFiniteValue(const std::string& msg) : Error(msg) {}
};

class IndicatorViolated : public Error {
  public:
    explicit IndicatorViolated(const std::string& msg) : Error(msg) {}
};

class InsufficientTailSamples : public Error {
  public:
    explicit InsufficientTailSamples(const std::string& msg) : Error(msg) {}
};

class SingularBlock : public Error {
  public:
    explicit SingularBlock(const std::string& msg) : Error(msg) {}
};

class IllConditionedKernel : public Error {
  public:
    explicit IllConditionedKernel(const std::string& msg) : Error(msg) {}
};

class DivergedFit : public Error {
  public:
    explicit DivergedFit(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
  public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

class DuplicateDate : public Error {
  public:
    explicit DuplicateDate(const std::string& msg) : Error(msg) {}
};

class NonPositiveValue : public Error {
  public:
    explicit NonPositiveValue(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace smi
