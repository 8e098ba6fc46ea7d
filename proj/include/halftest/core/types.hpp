#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace halftest {

using Vector = std::vector<double>;

/// Raised for contract violations: bad dimensions, invalid parameters,
/// malformed input. Statistical rejections are never reported this way.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Label : std::int8_t { negative = -1, positive = 1 };

constexpr int to_int(Label y) { return static_cast<int>(y); }
constexpr double to_double(Label y) { return static_cast<double>(y); }
constexpr Label flip(Label y) {
  return y == Label::positive ? Label::negative : Label::positive;
}

/// Throws if `value` is not exactly -1 or +1.
Label label_from_int(int value);

/// Accuracy / confidence pair every learning entry point is driven by.
struct LearnConfig {
  double epsilon = 0.05;
  double tau = 0.1;
  std::uint64_t seed = 1;

  // Sample-size overrides. Zero means "use the built-in default".
  std::size_t inner_sample_cap = 0;   // localized points handed to the inner learner
  std::size_t wedge_sample_cap = 0;   // points used by the full-sample wedge gate
  std::size_t min_localized = 0;      // smallest localized set a refinement round may use
  double select_fraction = 0.2;       // share of S held out for hypothesis selection

  void validate() const;
};

}  // namespace halftest
