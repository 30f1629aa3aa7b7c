#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bif {

// One axis of a product grid: `count` evenly spaced values in [lo, hi],
// endpoints included.
struct AxisSpec {
  double lo;
  double hi;
  int count;
};

// A finite product grid. Each axis carries its coordinate labels (domain
// values); models index states by position, so axis d contributes indices
// 0 .. size(d)-1. Joint states are flattened row-major with the last
// dimension varying fastest.
class Grid {
 public:
  Grid() = default;

  explicit Grid(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
    for (const auto& a : axes_) {
      if (a.size() < 1) throw std::invalid_argument("Grid: empty axis");
    }
    rebuild_strides();
  }

  static Grid uniform(const std::vector<AxisSpec>& specs) {
    std::vector<std::vector<double>> axes;
    axes.reserve(specs.size());
    for (const auto& s : specs) {
      if (s.count < 2) throw std::invalid_argument("Grid: axis count must be >= 2");
      if (!(s.lo < s.hi)) throw std::invalid_argument("Grid: axis requires lo < hi");
      std::vector<double> axis(s.count);
      const double step = (s.hi - s.lo) / static_cast<double>(s.count - 1);
      for (int i = 0; i < s.count; ++i) axis[i] = s.lo + step * static_cast<double>(i);
      axes.push_back(std::move(axis));
    }
    return Grid(std::move(axes));
  }

  int dims() const { return static_cast<int>(axes_.size()); }
  int size() const { return total_; }
  int axis_size(int d) const { return static_cast<int>(axes_.at(d).size()); }
  const std::vector<double>& axis(int d) const { return axes_.at(d); }

  // The 1-D grid made of axis d alone (a child model's domain).
  Grid axis_grid(int d) const { return Grid({axes_.at(d)}); }

  double coord(int d, int idx) const { return axes_.at(d).at(idx); }

  int flatten(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != dims())
      throw std::invalid_argument("Grid::flatten: index rank mismatch");
    int flat = 0;
    for (int d = 0; d < dims(); ++d) {
      if (idx[d] < 0 || idx[d] >= axis_size(d))
        throw std::invalid_argument("Grid::flatten: index out of range on axis " + std::to_string(d));
      flat += idx[d] * strides_[d];
    }
    return flat;
  }

  std::vector<int> unflatten(int flat) const {
    check_flat(flat);
    std::vector<int> idx(dims());
    for (int d = 0; d < dims(); ++d) idx[d] = (flat / strides_[d]) % axis_size(d);
    return idx;
  }

  // Component of the multi-index along axis d, without allocating.
  int component(int flat, int d) const {
    check_flat(flat);
    return (flat / strides_[d]) % axis_size(d);
  }

  bool contains(int flat) const { return flat >= 0 && flat < total_; }

  friend bool operator==(const Grid& a, const Grid& b) { return a.axes_ == b.axes_; }

 private:
  void rebuild_strides() {
    strides_.assign(axes_.size(), 1);
    total_ = 1;
    for (int d = dims() - 1; d >= 0; --d) {
      strides_[d] = total_;
      total_ *= axis_size(d);
    }
  }

  void check_flat(int flat) const {
    if (!contains(flat)) throw std::invalid_argument("Grid: flat index out of range");
  }

  std::vector<std::vector<double>> axes_;
  std::vector<int> strides_;
  int total_ = 0;
};

}  // namespace bif
