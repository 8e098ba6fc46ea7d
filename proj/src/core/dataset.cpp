#include "halftest/core/dataset.hpp"

#include <algorithm>
#include <string>

namespace halftest {

LabeledDataset::LabeledDataset(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error("dataset dimension must be positive");
}

LabeledDataset::LabeledDataset(std::size_t dim, std::vector<double> features,
                               std::vector<Label> labels)
    : dim_(dim), features_(std::move(features)), labels_(std::move(labels)) {
  if (dim == 0) throw Error("dataset dimension must be positive");
  if (features_.size() != labels_.size() * dim_) {
    throw Error("dataset: " + std::to_string(features_.size()) + " feature values for " +
                std::to_string(labels_.size()) + " points of dimension " + std::to_string(dim_));
  }
  for (Label y : labels_) label_from_int(to_int(y));
}

LabeledPoint LabeledDataset::point(std::size_t i) const {
  const auto xi = x(i);
  return {Vector(xi.begin(), xi.end()), labels_[i]};
}

void LabeledDataset::reserve(std::size_t n) {
  features_.reserve(n * dim_);
  labels_.reserve(n);
}

void LabeledDataset::push_back(std::span<const double> x, Label y) {
  if (x.size() != dim_) {
    throw Error("dataset: point of dimension " + std::to_string(x.size()) +
                " pushed into dimension " + std::to_string(dim_));
  }
  features_.insert(features_.end(), x.begin(), x.end());
  labels_.push_back(label_from_int(to_int(y)));
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out(dim_);
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw Error("dataset subset: index out of range");
    const auto xi = x(i);
    out.features_.insert(out.features_.end(), xi.begin(), xi.end());
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

LabeledDataset LabeledDataset::prefix(std::size_t n) const {
  n = std::min(n, size());
  return LabeledDataset(dim_, std::vector<double>(features_.begin(), features_.begin() + n * dim_),
                        std::vector<Label>(labels_.begin(), labels_.begin() + n));
}

std::size_t LabeledDataset::count(Label y) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), y));
}

}  // namespace halftest
