#include "phasecode/color_forest.hpp"

#include <cmath>

namespace phasecode {

ColorForest::Id ColorForest::add(Index l, Complex value) {
  const auto id = static_cast<Id>(nodes_.size());
  nodes_.push_back({l, value, Complex(1.0, 0.0), id, 1});
  return id;
}

ColorForest::Id ColorForest::add_to(Id root, Index l, Complex value) {
  root = find(root);
  const auto id = static_cast<Id>(nodes_.size());
  nodes_.push_back({l, value, Complex(1.0, 0.0), root, 1});
  ++nodes_[root].size;
  return id;
}

ColorForest::Id ColorForest::find(Id a) {
  // Two passes: locate the root, then compress while composing rotations.
  Id root = a;
  while (nodes_[root].parent != root) root = nodes_[root].parent;
  if (a == root) return root;

  // Rotation from each node on the path to the root, computed top-down.
  path_.clear();
  for (Id v = a; v != root; v = nodes_[v].parent) path_.push_back(v);
  Complex acc(1.0, 0.0);
  for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
    Node& n = nodes_[*it];
    acc *= n.rot;  // acc held the parent's rotation into the root frame
    acc /= std::abs(acc);
    n.rot = acc;
    n.parent = root;
  }
  return root;
}

Complex ColorForest::value(Id a) {
  const Id root = find(a);
  const Node& n = nodes_[a];
  return a == root ? n.local : n.rot * n.local;
}

ColorForest::Id ColorForest::unite(Id a, Id b, Complex rot_b) {
  a = find(a);
  b = find(b);
  if (a == b) return a;
  rot_b /= std::abs(rot_b);
  if (nodes_[a].size >= nodes_[b].size) {
    nodes_[b].parent = a;
    nodes_[b].rot = rot_b;
    nodes_[a].size += nodes_[b].size;
    return a;
  }
  nodes_[a].parent = b;
  nodes_[a].rot = std::conj(rot_b);
  nodes_[b].size += nodes_[a].size;
  return b;
}

}  // namespace phasecode
