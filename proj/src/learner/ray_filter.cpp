#include "halftest/learner/ray_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "halftest/core/linalg.hpp"
#include "halftest/core/rng.hpp"

namespace halftest::learner {

RayFilter::RayFilter(const LabeledDataset& s, std::uint64_t seed) : data_(s) {
  if (s.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error("RayFilter: dataset too large");
  }
  const std::uint64_t key = derive_seed(seed, StreamRole::RejectFilter);
  budget_.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    budget_[i] = -std::log(counter_uniform(key, i));
    max_budget_ = std::max(max_budget_, budget_[i]);
  }
}

std::size_t RayFilter::add_ray(const Vector& unit) {
  if (unit.size() != data_.dim()) throw Error("RayFilter: dimension mismatch");
  Ray ray;
  ray.unit = unit;
  ray.projection.resize(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) ray.projection[i] = dot(unit, data_.x(i));
  ray.order.resize(data_.size());
  std::iota(ray.order.begin(), ray.order.end(), 0u);
  std::sort(ray.order.begin(), ray.order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return ray.projection[a] < ray.projection[b] ||
           (ray.projection[a] == ray.projection[b] && a < b);
  });
  ray.sorted.resize(data_.size());
  for (std::size_t k = 0; k < data_.size(); ++k) ray.sorted[k] = ray.projection[ray.order[k]];
  rays_.push_back(std::move(ray));
  return rays_.size() - 1;
}

std::vector<std::size_t> RayFilter::first_survivors(std::size_t ray_id,
                                                    const localization::RejectionParams& p,
                                                    std::size_t cap) const {
  const Ray& ray = rays_.at(ray_id);
  if (p.axis() != ray.unit) throw Error("RayFilter: parameters do not lie on the ray");
  const double a = p.curvature();
  const double peak = p.peak();
  auto keeps = [&](std::size_t i) {
    const double gap = ray.projection[i] - peak;
    return a * gap * gap <= budget_[i];
  };

  // Only points with a·gap² ≤ max budget can survive. Widen slightly so
  // rounding at the window edge can never drop a survivor.
  const double half = std::sqrt(max_budget_ / a) * (1.0 + 1e-9) + 1e-12;
  const auto lo = std::lower_bound(ray.sorted.begin(), ray.sorted.end(), peak - half);
  const auto hi = std::upper_bound(ray.sorted.begin(), ray.sorted.end(), peak + half);
  const auto window = static_cast<std::size_t>(hi - lo);

  std::vector<std::size_t> kept;
  if (window * 4 < data_.size()) {
    const auto first = static_cast<std::size_t>(lo - ray.sorted.begin());
    for (std::size_t k = first; k < first + window; ++k) {
      const std::size_t i = ray.order[k];
      if (keeps(i)) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());
    if (kept.size() > cap) kept.resize(cap);
    return kept;
  }
  for (std::size_t i = 0; i < data_.size() && kept.size() < cap; ++i) {
    if (keeps(i)) kept.push_back(i);
  }
  return kept;
}

}  // namespace halftest::learner
