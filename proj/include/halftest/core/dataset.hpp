#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "halftest/core/types.hpp"

namespace halftest {

struct LabeledPoint {
  Vector x;
  Label y;
};

/// Points stored row-major in one contiguous buffer; order is significant
/// and preserved by every transformation below.
class LabeledDataset {
 public:
  explicit LabeledDataset(std::size_t dim);
  LabeledDataset(std::size_t dim, std::vector<double> features, std::vector<Label> labels);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  std::span<const double> x(std::size_t i) const {
    return {features_.data() + i * dim_, dim_};
  }
  std::span<double> x_mut(std::size_t i) { return {features_.data() + i * dim_, dim_}; }
  Label y(std::size_t i) const { return labels_[i]; }
  void set_label(std::size_t i, Label y) { labels_[i] = y; }

  LabeledPoint point(std::size_t i) const;

  void reserve(std::size_t n);
  void push_back(std::span<const double> x, Label y);

  std::span<const double> features() const { return features_; }
  std::span<const Label> labels() const { return labels_; }

  /// Points at the given indices, in the order given.
  LabeledDataset subset(std::span<const std::size_t> indices) const;
  /// First min(n, size()) points.
  LabeledDataset prefix(std::size_t n) const;

  std::size_t count(Label y) const;

  bool operator==(const LabeledDataset&) const = default;

 private:
  std::size_t dim_;
  std::vector<double> features_;
  std::vector<Label> labels_;
};

}  // namespace halftest
