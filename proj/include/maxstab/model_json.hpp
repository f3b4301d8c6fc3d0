#pragma once

#include <stdexcept>
#include <string>

#include "maxstab/models.hpp"

namespace maxstab {

// Malformed input: bad JSON, wrong shapes, unknown families, bad subset keys.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed input describing an invalid model (negative masses, marginal
// sums, conditional negative definiteness, nonpositive shapes).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Subset keys are ascending 1-based indices joined by commas, e.g. "1,3".
std::string subset_key(mask_t m);
mask_t parse_subset_key(const std::string& s, int d);

// Model documents: {"family": ..., "d": ..., family parameters}.  Dirichlet
// carries "alpha", Husler-Reiss "gamma" (dense symmetric matrix), spectral
// models exactly one of "tau" (sparse, missing entries are zero), "theta" or
// "chi" (both complete).  A spectral model estimated by Monte Carlo may
// carry an "mc" object with its sample-block identity.
ModelSpec model_from_json_text(const std::string& text);
ModelSpec model_from_json_file(const std::string& path);
std::string model_to_json_text(const ModelSpec& m, int indent = 2);

}  // namespace maxstab
