#pragma once

#include <iosfwd>
#include <string>

#include "halftest/core/dataset.hpp"

namespace halftest::synth {

// Text format: a header line `d=<int> n=<int>`, then one point per line as
// d decimal floats followed by `+1` or `-1`. Floats are written with 17
// significant digits so a write/read cycle is exact.

void write_dataset(std::ostream& out, const LabeledDataset& s);
void write_dataset(const std::string& path, const LabeledDataset& s);

/// Throws Error on any malformed or truncated input.
LabeledDataset read_dataset(std::istream& in);
LabeledDataset read_dataset(const std::string& path);

}  // namespace halftest::synth
