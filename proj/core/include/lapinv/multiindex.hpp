#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace lapinv {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A vector in N_0^n. Indexes both derivative monomials d^v and the
/// derivative orders carried by jet variables.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim) : entries_(dim, 0) {}
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::vector<int> entries);

  static MultiIndex unit(std::size_t dim, std::size_t i);

  std::size_t dim() const { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  int &operator[](std::size_t i) { return entries_[i]; }
  const std::vector<int> &entries() const { return entries_; }

  /// Total order |v| = sum of entries.
  int order() const;
  bool is_zero() const;

  MultiIndex operator+(const MultiIndex &o) const;
  /// Throws std::domain_error when the result would have a negative entry.
  MultiIndex operator-(const MultiIndex &o) const;
  MultiIndex plus_unit(std::size_t i) const;
  MultiIndex minus_unit(std::size_t i) const;

  bool operator==(const MultiIndex &) const = default;
  /// Plain lexicographic comparison; use CanonicalLess for iteration order.
  std::strong_ordering operator<=>(const MultiIndex &o) const {
    return entries_ <=> o.entries_;
  }

  /// "[2,1]"
  std::string to_string() const;
  /// "21" when every entry is a single digit, otherwise "2,11".
  std::string compact() const;

private:
  std::vector<int> entries_;
};

void require_same_dim(const MultiIndex &a, const MultiIndex &b);

/// Canonical iteration order: higher total order first, ties broken by
/// descending lexicographic order.
struct CanonicalLess {
  bool operator()(const MultiIndex &a, const MultiIndex &b) const;
};

using IndexSet = std::set<MultiIndex, CanonicalLess>;

/// u is below v: u <= v coordinatewise and u != v.
bool below(const MultiIndex &u, const MultiIndex &v);
/// u <= v coordinatewise.
bool below_or_equal(const MultiIndex &u, const MultiIndex &v);
/// v = u + e_i for exactly one i.
bool covers(const MultiIndex &v, const MultiIndex &u);

/// Smallest downward-closed superset of `vs`.
IndexSet down_set(const IndexSet &vs);
IndexSet down_set(const std::vector<MultiIndex> &vs);

/// Multinomial binomial prod_i binom(u_i, b_i); requires b <= u.
mpz_class multi_binomial(const MultiIndex &u, const MultiIndex &b);

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex &m) const;
};

} // namespace lapinv
