#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "miohint/api_spec.hpp"
#include "miohint/hint.hpp"
#include "miohint/rest.hpp"
#include "miohint/util/rng.hpp"

namespace miohint {

struct MutationConfig {
  std::string charset =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.:/ ";
  int max_string_positions = 3;

  std::int64_t int_init_min = -100, int_init_max = 100;
  std::int64_t int_resample_min = -1000, int_resample_max = 1000;
  std::int64_t int_delta_max = 10;
  double float_resample_min = -1000.0, float_resample_max = 1000.0;
  double float_delta_max = 10.0;

  // Relative weights of the two numeric operators.
  int weight_delta = 1;
  int weight_resample = 1;

  void validate() const;
};

// Samples a fresh test case: 1-3 actions drawn from the endpoint list, every
// declared field present, string fields initialized to the `_EM_<d+>_XYZ`
// sentinel form.
TestCase sample_random_test_case(const std::vector<EndpointSpec>& apis,
                                 const MutationConfig& config, Rng& rng);

// Alters exactly one leaf field of one action: strings by replacing
// characters at random positions, numbers by a bounded delta or a re-sample,
// bools by flipping. The input is not modified.
TestCase random_mutate(const TestCase& tc, const std::vector<EndpointSpec>& apis,
                       const MutationConfig& config, Rng& rng);

// Applies a hint to a deep copy of the test case; the addressed field is
// replaced by the hint value, coerced to the field's current type when
// parseable and stored as a string otherwise. Throws NoSuchField (carrying
// the available names at the failing level) when the path does not resolve.
TestCase apply_hint(const TestCase& tc, const MutationHint& hint);

}  // namespace miohint
