#pragma once

#include <stdexcept>
#include <string>

namespace equiflow {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Group construction
struct ClosureOverflow : Error { using Error::Error; };
struct FoldDivergence : Error { using Error::Error; };
struct UnknownCatalogName : Error { using Error::Error; };
struct BadParams : Error { using Error::Error; };

// Homomorphisms
struct NotAHomomorphism : Error { using Error::Error; };
struct NotDiscrete : Error { using Error::Error; };
struct NotPositive : Error { using Error::Error; };

// Regions
struct OutsideD : Error { using Error::Error; };
struct NotInCone : Error { using Error::Error; };

// Solver
struct BadSpacing : Error { using Error::Error; };
struct Blowup : Error { using Error::Error; };
struct NonMonotone : Error { using Error::Error; };
struct FileFormat : Error { using Error::Error; };

// Analysis
struct TooFewSamples : Error { using Error::Error; };

// CLI / config
struct ConfigError : Error { using Error::Error; };

}  // namespace equiflow
