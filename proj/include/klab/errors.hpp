#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace klab {

// Raised when a residue has no multiplicative inverse. Batch callers get the
// position of the first offending input.
class NonInvertible : public std::domain_error
{
public:
    explicit NonInvertible(const std::string& what,
                           std::optional<std::size_t> index = std::nullopt)
        : std::domain_error(what), index_(index)
    {
    }

    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    std::optional<std::size_t> index_;
};

struct EmptySupport : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotCoprime : std::domain_error {
    using std::domain_error::domain_error;
};

struct DivisorBoundViolated : std::domain_error {
    using std::domain_error::domain_error;
};

struct DecompositionMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

struct PsiDoesNotMajorize : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NegativeQuadratic : std::logic_error {
    using std::logic_error::logic_error;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidExponent : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyList : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class ZeroRHS : public std::domain_error
{
public:
    ZeroRHS(const std::string& what, std::size_t index)
        : std::domain_error(what), index_(index)
    {
    }
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// Malformed sweep configuration or command line.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace klab
