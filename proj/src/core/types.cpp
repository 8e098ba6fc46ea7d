#include "halftest/core/types.hpp"

#include <string>

namespace halftest {

Label label_from_int(int value) {
  if (value == 1) return Label::positive;
  if (value == -1) return Label::negative;
  throw Error("label must be -1 or +1, got " + std::to_string(value));
}

void LearnConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0,1)");
  if (!(tau > 0.0 && tau < 1.0)) throw Error("tau must lie in (0,1)");
  if (!(select_fraction > 0.0 && select_fraction < 1.0)) {
    throw Error("select_fraction must lie in (0,1)");
  }
}

}  // namespace halftest
