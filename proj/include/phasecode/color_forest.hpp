#pragma once

#include <cstdint>
#include <vector>

#include "phasecode/core.hpp"

namespace phasecode {

/// Union-find over colored balls. Each node stores its value in its own frame
/// and a unit rotation into its parent's frame; a component's frame is its
/// root's. Merging rotates a whole component at once, so relative phases
/// inside a component never change.
class ColorForest {
 public:
  using Id = std::uint32_t;

  /// New singleton component.
  Id add(Index l, Complex value);
  /// New node inside `root`'s component, `value` given in the root frame.
  Id add_to(Id root, Index l, Complex value);

  Id find(Id a);
  /// Value of `a` in its root's frame.
  Complex value(Id a);
  Index index(Id a) const { return nodes_[a].index; }
  std::size_t component_size(Id a) { return nodes_[find(a)].size; }
  std::size_t size() const { return nodes_.size(); }

  /// Joins the components of a and b. `rot_b` maps b's root frame into a's
  /// root frame. Returns the new root.
  Id unite(Id a, Id b, Complex rot_b);

  void clear() { nodes_.clear(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }

 private:
  struct Node {
    Index index;
    Complex local;
    Complex rot;  // into parent's frame
    Id parent;
    std::uint32_t size;
  };
  std::vector<Node> nodes_;
  std::vector<Id> path_;
};

}  // namespace phasecode
