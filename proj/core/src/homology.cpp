#include "saddlekit/homology.hpp"

#include <numeric>

#include "saddlekit/error.hpp"

namespace saddlekit {

EdgeBasis::EdgeBasis(const TranslationSurface& s) {
  const std::size_t n = s.triangle_count();
  index_.assign(n, {-1, -1, -1});
  sign_.assign(n, {0, 0, 0});
  for (int t = 0; t < static_cast<int>(n); ++t) {
    for (int i = 0; i < 3; ++i) {
      const EdgeSlot slot{t, i};
      const EdgeSlot other = s.partner(slot);
      if (!(slot < other)) continue;
      index_[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = size_;
      sign_[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = 1;
      index_[static_cast<std::size_t>(other.triangle)][static_cast<std::size_t>(other.edge)] = size_;
      sign_[static_cast<std::size_t>(other.triangle)][static_cast<std::size_t>(other.edge)] = -1;
      ++size_;
    }
  }
}

void EdgeBasis::add(HomologyVector& v, EdgeSlot slot, std::int64_t times) const {
  v[static_cast<std::size_t>(index(slot))] += times * sign(slot);
}

namespace {

std::int64_t content(const HomologyVector& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

void make_primitive(HomologyVector& v) {
  const std::int64_t g = content(v);
  if (g > 1) {
    for (auto& x : v) x /= g;
  }
}

bool is_zero(const HomologyVector& v) {
  for (auto x : v) {
    if (x != 0) return false;
  }
  return true;
}

// v <- (p / g) * v - (v[c] / g) * row, with g = gcd(p, v[c]); keeps entries
// small and integral.
void eliminate(HomologyVector& v, const HomologyVector& row, int pivot) {
  const auto c = static_cast<std::size_t>(pivot);
  if (v[c] == 0) return;
  const std::int64_t p = row[c];
  const std::int64_t g = std::gcd(p < 0 ? -p : p, v[c] < 0 ? -v[c] : v[c]);
  const std::int64_t a = p / g;
  const std::int64_t b = v[c] / g;
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a * v[k] - b * row[k];
  make_primitive(v);
}

}  // namespace

RelationLattice::RelationLattice(const TranslationSurface& s, const EdgeBasis& basis) {
  for (int t = 0; t < static_cast<int>(s.triangle_count()); ++t) {
    HomologyVector r = basis.zero();
    for (int i = 0; i < 3; ++i) basis.add(r, {t, i});
    r = reduce(std::move(r));
    if (is_zero(r)) continue;
    int pivot = 0;
    while (r[static_cast<std::size_t>(pivot)] == 0) ++pivot;
    // Keep earlier rows reduced against the new pivot is unnecessary for
    // membership tests; echelon order on pivots is enough.
    rows_.push_back({pivot, std::move(r)});
  }
}

HomologyVector RelationLattice::reduce(HomologyVector v) const {
  for (const Row& row : rows_) eliminate(v, row.values, row.pivot);
  return v;
}

bool RelationLattice::contains(const HomologyVector& v) const { return is_zero(reduce(v)); }

bool RelationLattice::same_class(const HomologyVector& a, const HomologyVector& b) const {
  HomologyVector d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return contains(d);
}

bool RelationLattice::same_class_up_to_sign(const HomologyVector& a,
                                            const HomologyVector& b) const {
  if (same_class(a, b)) return true;
  HomologyVector d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] + b[k];
  return contains(d);
}

bool RelationLattice::proportional(const HomologyVector& a, const HomologyVector& b) const {
  HomologyVector ra = reduce(a);
  HomologyVector rb = reduce(b);
  if (is_zero(ra) || is_zero(rb)) return true;
  // Eliminate rb against ra on ra's leading column; the pair is dependent
  // modulo the relations iff the remainder reduces to zero.
  int pivot = 0;
  while (ra[static_cast<std::size_t>(pivot)] == 0) ++pivot;
  eliminate(rb, ra, pivot);
  return contains(rb);
}

int relative_homology_rank(const TranslationSurface& s) {
  const EdgeBasis basis(s);
  const RelationLattice lattice(s, basis);
  return basis.size() - lattice.rank();
}

}  // namespace saddlekit
