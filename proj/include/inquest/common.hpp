#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace inquest {

using Scalar = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error taxonomy. The CLI maps each class to a distinct exit code, so new
// error types should derive from one of these.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (corpus records, bundles, paths).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : DataError {
  using DataError::DataError;
};
struct SchemaError : DataError {
  using DataError::DataError;
};
struct TaxonomyError : DataError {
  using DataError::DataError;
};

// A required artifact (checkpoint, bundle) is missing or incompatible.
struct DependencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A remote provider failed after retries. Retriable by the caller.
struct ProviderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API misuse (backward before forward, mismatched architectures).
struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};
struct DimensionError : std::logic_error {
  using std::logic_error::logic_error;
};

// FNV-1a, used for content hashes in manifests and for feature hashing.
// Not cryptographic; stable across runs and platforms.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 1469598103934665603ull);
std::uint64_t fnv1a_mix(std::uint64_t value, std::uint64_t seed);
std::string hex64(std::uint64_t value);

// splitmix64 step; used to derive independent per-stage seeds from the run seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Whitespace-split, ASCII-lowercased tokens.
std::vector<std::string> tokenize(std::string_view text);
std::string lowercase(std::string_view text);

Scalar token_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace inquest
