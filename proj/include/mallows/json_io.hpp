#pragma once

#include <json.hpp>

#include "mallows/analytics.hpp"
#include "mallows/estimators.hpp"
#include "mallows/experiments.hpp"
#include "mallows/permutation.hpp"

namespace mallows {

using Json = nlohmann::ordered_json;

/// One-line form as a JSON array of 1-based integers.
Json permutation_to_json(const Permutation& p);
/// Validates the entries; throws std::invalid_argument on a non-permutation.
Permutation permutation_from_json(const Json& j);

Json constants_to_json(const CltConstants& c);
/// Reads the "constants" object written by constants_to_json.
CltConstants constants_from_json(const Json& j);

Json summary_to_json(const SampleSummary& s);
Json report_to_json(const ExperimentReport& r);

/// {quantity, estimate, std_error, n_samples, truncation_bound, seed}
Json quantity_json(const std::string& quantity, double estimate, double std_error, std::uint64_t n_samples,
                   double truncation_bound, std::uint64_t seed);

}  // namespace mallows
