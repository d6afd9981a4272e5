#pragma once

#include <cstdint>
#include <vector>

#include "saddlekit/surface.hpp"

namespace saddlekit {

/// Integer coordinates over the edge basis of the triangulation.
using HomologyVector = std::vector<std::int64_t>;

/// One basis element per glued edge pair; the slot with the smaller
/// (triangle, edge) index carries the positive orientation.
class EdgeBasis {
 public:
  explicit EdgeBasis(const TranslationSurface& s);

  int size() const { return size_; }
  int index(EdgeSlot slot) const {
    return index_[static_cast<std::size_t>(slot.triangle)][static_cast<std::size_t>(slot.edge)];
  }
  int sign(EdgeSlot slot) const {
    return sign_[static_cast<std::size_t>(slot.triangle)][static_cast<std::size_t>(slot.edge)];
  }
  /// Adds the oriented edge `slot` (times `times`) to v.
  void add(HomologyVector& v, EdgeSlot slot, std::int64_t times = 1) const;
  HomologyVector zero() const { return HomologyVector(static_cast<std::size_t>(size_), 0); }

 private:
  int size_ = 0;
  std::vector<std::array<int, 3>> index_;
  std::vector<std::array<int, 3>> sign_;
};

/// The sublattice spanned by triangle boundaries. H_1(X, Sigma; Z) is the
/// edge lattice modulo this one; the quotient is torsion free, so membership
/// over Z and over Q coincide.
class RelationLattice {
 public:
  RelationLattice(const TranslationSurface& s, const EdgeBasis& basis);

  int rank() const { return static_cast<int>(rows_.size()); }
  /// Reduces v against the echelon rows (fraction-free, content removed).
  HomologyVector reduce(HomologyVector v) const;
  bool contains(const HomologyVector& v) const;

  /// [a] == [b] in H_1(X, Sigma).
  bool same_class(const HomologyVector& a, const HomologyVector& b) const;
  /// [a] == +-[b].
  bool same_class_up_to_sign(const HomologyVector& a, const HomologyVector& b) const;
  /// [a] and [b] are linearly dependent over Q (including either being zero).
  bool proportional(const HomologyVector& a, const HomologyVector& b) const;

 private:
  struct Row {
    int pivot;
    HomologyVector values;
  };
  std::vector<Row> rows_;
};

/// Dimension of H_1(X, Sigma): edges - rank of triangle relations.
int relative_homology_rank(const TranslationSurface& s);

}  // namespace saddlekit
