#pragma once

// Finitely generated groups given by generators plus a word problem solver
// (normal forms), word length over S u S^-1, ball enumeration, and finitely
// supported probability measures.

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace harmcoc {

/// +k stands for generator k-1, -k for its inverse. Never 0.
using Letter = int;
using Word = std::vector<Letter>;

Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word free_reduce(const Word& w);
Word power(const Word& w, int n);
/// Uniformly random letters from S u S^-1 (not reduced).
Word random_word(std::size_t rank, std::size_t length, std::mt19937_64& rng);

/// Canonical form of a group element; equality of keys is equality in G.
struct Element {
  std::vector<std::int64_t> key;
  auto operator<=>(const Element&) const = default;
};

enum class GroupKind { finitely_presented, free, free_abelian, cayley_table, wreath };

std::string_view to_string(GroupKind kind);

/// A solution to the word problem for one particular group.
class NormalForm {
 public:
  virtual ~NormalForm() = default;
  virtual Element reduce(const Word& w) const = 0;
  virtual Element identity() const = 0;
  /// |g|_Q when it is available without search.
  virtual std::optional<std::size_t> length(const Element&) const { return std::nullopt; }
  virtual std::optional<std::size_t> order() const { return std::nullopt; }
};

/// Finite group data: multiplication table with identity at index 0.
struct CayleyTable {
  std::size_t order = 0;
  std::vector<std::uint32_t> mult;  // row-major: mult[g * order + h] = g h
  std::vector<std::uint32_t> inv;
  std::vector<std::uint32_t> generator_elements;
  std::vector<Word> words;          // a shortest word for each element
  std::vector<std::size_t> length;  // |g|_Q

  std::uint32_t operator()(std::uint32_t g, std::uint32_t h) const { return mult[g * order + h]; }
  std::uint32_t evaluate(const Word& w) const;
};

struct BallEntry {
  Element element;
  Word word;  // a shortest representative
  std::size_t length;
};

class GroupModel {
 public:
  GroupModel(GroupKind kind, std::vector<std::string> generators, std::vector<Word> relators,
             std::shared_ptr<const NormalForm> normal_form,
             std::shared_ptr<const CayleyTable> table = nullptr);

  GroupKind kind() const { return kind_; }
  const std::vector<std::string>& generators() const { return generators_; }
  std::size_t rank() const { return generators_.size(); }
  const std::vector<Word>& relators() const { return relators_; }

  bool has_word_problem() const { return normal_form_ != nullptr; }
  bool is_finite() const { return table_ != nullptr; }
  std::optional<std::size_t> order() const;
  /// Non-null for finite groups.
  const CayleyTable* table() const { return table_.get(); }

  /// Throws Unsupported for relator-presented groups.
  Element normal_form(const Word& w) const;
  Element identity() const;
  bool equal(const Word& a, const Word& b) const { return normal_form(a) == normal_form(b); }

  /// |g|_Q, exact: normal-form length where available, otherwise BFS.
  std::size_t word_length(const Word& w) const;
  /// Every element with |g|_Q <= r, deduplicated, in BFS order.
  std::vector<BallEntry> ball(std::size_t r) const;

  std::optional<std::size_t> generator_index(std::string_view name) const;
  /// Tokens separated by whitespace or '*': name, name^k, name^-k; "e" or "" is the identity.
  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w) const;

 private:
  GroupKind kind_;
  std::vector<std::string> generators_;
  std::vector<Word> relators_;
  std::shared_ptr<const NormalForm> normal_form_;
  std::shared_ptr<const CayleyTable> table_;
};

// Catalogue. Finite groups carry a Cayley table and a relator presentation.
GroupModel cyclic(std::size_t n);                 // generator t, relator t^n
GroupModel free_group(std::size_t rank);          // t (rank 1) or a, b, c, ...
GroupModel free_abelian(std::size_t rank);        // t (rank 1) or t1, t2, ...
GroupModel dihedral(std::size_t n);               // order 2n, generators r, s
GroupModel symmetric(std::size_t degree);         // s = (1 2), r = (1 2 ... n)
GroupModel quaternion();                          // Q8, generators i, j
/// Relators are derived from the table (one per Cayley graph edge).
GroupModel from_cayley_table(std::size_t order, const std::vector<std::uint32_t>& row_major,
                             const std::vector<std::uint32_t>& generator_elements,
                             std::vector<std::string> names);
/// Equality testing is disabled; only cocycle constraints are available.
GroupModel finitely_presented(std::vector<std::string> names, const std::vector<std::string>& relators);

/// Builds the table of the group generated by exact realisations (keys + product).
std::shared_ptr<CayleyTable> close_under_products(
    const std::vector<std::int64_t>& identity,
    const std::vector<std::vector<std::int64_t>>& generators,
    const std::function<std::vector<std::int64_t>(const std::vector<std::int64_t>&,
                                                   const std::vector<std::int64_t>&)>& product);

struct SupportPoint {
  Word word;
  double weight;
};

/// Finitely supported symmetric adapted probability measure.
struct FinMeasure {
  std::vector<SupportPoint> support;  // merged: one point per group element
  double second_moment = 0.0;         // sum mu(x) |x|_Q^2
  bool second_moment_exact = true;    // false when |x| is only a free-reduction bound
};

/**
 * Validates and merges the support. Errors: NonPositiveWeight, NotNormalized
 * (|sum - 1| > 1e-12), NotSymmetric, NotAdapted.
 *
 * Adaptedness is certified by closure for finite groups; for infinite groups
 * each generator must be found as a product of at most 8 support elements.
 */
FinMeasure make_measure(const GroupModel& group, std::vector<SupportPoint> support);

/// Uniform on S u S^-1 (points that coincide are merged).
FinMeasure uniform_measure(const GroupModel& group);

}  // namespace harmcoc
