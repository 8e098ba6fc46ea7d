#pragma once

#include <span>
#include <vector>

#include "halftest/core/dataset.hpp"
#include "halftest/core/linalg.hpp"

namespace halftest {

Vector empirical_mean(const LabeledDataset& s);

/// (1/n) Σ xᵢxᵢᵀ (uncentered).
SymmetricMatrix second_moment(const LabeledDataset& s);

/// Chow vector (1/n) Σ yᵢxᵢ.
Vector chow_vector(const LabeledDataset& s);

/// v·xᵢ for every point.
std::vector<double> project(const LabeledDataset& s, std::span<const double> v);

}  // namespace halftest
