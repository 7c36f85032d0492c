#include "harmcoc/groups.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "harmcoc/errors.hpp"

namespace harmcoc {

namespace {

constexpr double kMeasureTol = 1e-12;

[[noreturn]] void fail(ErrorKind kind, const std::string& op, const std::string& code,
                       const std::string& detail = {}) {
  throw Error(kind, "groups/" + op, code, detail);
}

std::size_t gen_of(Letter l) { return static_cast<std::size_t>(std::abs(l)) - 1; }

class FreeNormalForm final : public NormalForm {
 public:
  Element reduce(const Word& w) const override {
    Word r = free_reduce(w);
    return Element{{r.begin(), r.end()}};
  }
  Element identity() const override { return {}; }
  std::optional<std::size_t> length(const Element& e) const override { return e.key.size(); }
};

class AbelianNormalForm final : public NormalForm {
 public:
  explicit AbelianNormalForm(std::size_t rank) : rank_(rank) {}
  Element reduce(const Word& w) const override {
    Element e{std::vector<std::int64_t>(rank_, 0)};
    for (Letter l : w) e.key[gen_of(l)] += l > 0 ? 1 : -1;
    return e;
  }
  Element identity() const override { return Element{std::vector<std::int64_t>(rank_, 0)}; }
  std::optional<std::size_t> length(const Element& e) const override {
    std::size_t n = 0;
    for (auto x : e.key) n += static_cast<std::size_t>(std::llabs(x));
    return n;
  }

 private:
  std::size_t rank_;
};

class TableNormalForm final : public NormalForm {
 public:
  explicit TableNormalForm(std::shared_ptr<const CayleyTable> t) : table_(std::move(t)) {}
  Element reduce(const Word& w) const override { return Element{{table_->evaluate(w)}}; }
  Element identity() const override { return Element{{0}}; }
  std::optional<std::size_t> length(const Element& e) const override {
    return table_->length[static_cast<std::size_t>(e.key.at(0))];
  }
  std::optional<std::size_t> order() const override { return table_->order; }

 private:
  std::shared_ptr<const CayleyTable> table_;
};

// Fills inv, words and length from mult and generator_elements; identity is 0.
void finish_table(CayleyTable& t, const std::string& op) {
  const auto n = t.order;
  t.inv.assign(n, 0);
  for (std::uint32_t g = 0; g < n; ++g) {
    bool found = false;
    for (std::uint32_t h = 0; h < n && !found; ++h)
      if (t(g, h) == 0 && t(h, g) == 0) {
        t.inv[g] = h;
        found = true;
      }
    if (!found) fail(ErrorKind::Validation, op, "NoInverse", "element " + std::to_string(g));
  }
  t.words.assign(n, Word{});
  t.length.assign(n, SIZE_MAX);
  t.length[0] = 0;
  std::deque<std::uint32_t> queue{0};
  while (!queue.empty()) {
    auto g = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < t.generator_elements.size(); ++s) {
      for (int sign : {1, -1}) {
        std::uint32_t x = sign > 0 ? t.generator_elements[s] : t.inv[t.generator_elements[s]];
        std::uint32_t h = t(g, x);
        if (t.length[h] != SIZE_MAX) continue;
        t.length[h] = t.length[g] + 1;
        t.words[h] = t.words[g];
        t.words[h].push_back(sign * static_cast<Letter>(s + 1));
        queue.push_back(h);
      }
    }
  }
  for (std::size_t g = 0; g < n; ++g)
    if (t.length[g] == SIZE_MAX)
      fail(ErrorKind::Validation, op, "NotGenerating", "element " + std::to_string(g) + " unreachable");
}

// One relator w(g) s w(gs)^-1 per Cayley graph edge outside the BFS tree.
std::vector<Word> derived_relators(const CayleyTable& t) {
  std::vector<Word> out;
  std::set<Word> seen;
  for (std::uint32_t g = 0; g < t.order; ++g)
    for (std::size_t s = 0; s < t.generator_elements.size(); ++s) {
      Word w = t.words[g];
      w.push_back(static_cast<Letter>(s + 1));
      w = free_reduce(concat(w, inverse(t.words[t(g, t.generator_elements[s])])));
      if (!w.empty() && seen.insert(w).second) out.push_back(w);
    }
  return out;
}

GroupModel finite_model(std::shared_ptr<CayleyTable> table, std::vector<std::string> names,
                        std::vector<Word> relators, const std::string& op) {
  for (const auto& r : relators)
    if (table->evaluate(r) != 0) fail(ErrorKind::Numerical, op, "CatalogueRelatorFails");
  auto nf = std::make_shared<TableNormalForm>(table);
  return GroupModel(GroupKind::cayley_table, std::move(names), std::move(relators), std::move(nf),
                    std::move(table));
}

using Key = std::vector<std::int64_t>;

Key compose_perm(const Key& a, const Key& b) {
  // (a b)(i) = a(b(i)): apply b first.
  Key c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[static_cast<std::size_t>(b[i])];
  return c;
}

std::vector<std::string> letter_names(std::size_t rank) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rank; ++i) {
    if (rank <= 26)
      names.emplace_back(1, static_cast<char>('a' + i));
    else
      names.push_back("x" + std::to_string(i + 1));
  }
  return names;
}

}  // namespace

Word inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& l : r) l = -l;
  return r;
}

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Word free_reduce(const Word& w) {
  Word r;
  r.reserve(w.size());
  for (Letter l : w) {
    if (!r.empty() && r.back() == -l)
      r.pop_back();
    else
      r.push_back(l);
  }
  return r;
}

Word power(const Word& w, int n) {
  Word base = n >= 0 ? w : inverse(w);
  Word r;
  for (int i = 0; i < std::abs(n); ++i) r = concat(r, base);
  return r;
}

Word random_word(std::size_t rank, std::size_t length, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(2 * rank) - 1);
  Word w;
  for (std::size_t i = 0; i < length; ++i) {
    int k = pick(rng);
    Letter l = k / 2 + 1;
    w.push_back(k % 2 == 0 ? l : -l);
  }
  return w;
}

std::string_view to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::finitely_presented: return "finitely_presented";
    case GroupKind::free: return "free";
    case GroupKind::free_abelian: return "free_abelian";
    case GroupKind::cayley_table: return "cayley_table";
    case GroupKind::wreath: return "wreath";
  }
  return "unknown";
}

std::uint32_t CayleyTable::evaluate(const Word& w) const {
  std::uint32_t g = 0;
  for (Letter l : w) {
    std::uint32_t s = generator_elements[gen_of(l)];
    g = (*this)(g, l > 0 ? s : inv[s]);
  }
  return g;
}

GroupModel::GroupModel(GroupKind kind, std::vector<std::string> generators, std::vector<Word> relators,
                       std::shared_ptr<const NormalForm> normal_form,
                       std::shared_ptr<const CayleyTable> table)
    : kind_(kind),
      generators_(std::move(generators)),
      relators_(std::move(relators)),
      normal_form_(std::move(normal_form)),
      table_(std::move(table)) {
  if (generators_.empty()) fail(ErrorKind::Validation, "make_group", "EmptyGenerators");
  std::set<std::string> names(generators_.begin(), generators_.end());
  if (names.size() != generators_.size())
    fail(ErrorKind::Validation, "make_group", "DuplicateGenerator");
  for (const auto& r : relators_)
    for (Letter l : r)
      if (l == 0 || gen_of(l) >= generators_.size())
        fail(ErrorKind::Validation, "make_group", "UnknownGenerator", "in relator");
}

std::optional<std::size_t> GroupModel::order() const {
  if (table_) return table_->order;
  return std::nullopt;
}

Element GroupModel::normal_form(const Word& w) const {
  if (!normal_form_)
    fail(ErrorKind::Unsupported, "normal_form", "NoWordProblem",
         "equality testing is disabled for relator-presented groups");
  return normal_form_->reduce(w);
}

Element GroupModel::identity() const {
  if (!normal_form_) fail(ErrorKind::Unsupported, "identity", "NoWordProblem");
  return normal_form_->identity();
}

std::size_t GroupModel::word_length(const Word& w) const {
  Element target = normal_form(w);
  if (auto n = normal_form_->length(target)) return *n;
  // BFS; the reduced word itself bounds the search radius.
  const std::size_t bound = free_reduce(w).size();
  std::set<Element> seen{identity()};
  std::vector<Word> frontier{Word{}};
  if (target == identity()) return 0;
  for (std::size_t r = 1; r <= bound; ++r) {
    std::vector<Word> next;
    for (const auto& u : frontier)
      for (std::size_t s = 0; s < rank(); ++s)
        for (int sign : {1, -1}) {
          Word v = u;
          v.push_back(sign * static_cast<Letter>(s + 1));
          Element e = normal_form_->reduce(v);
          if (e == target) return r;
          if (seen.insert(e).second) next.push_back(std::move(v));
        }
    frontier = std::move(next);
  }
  fail(ErrorKind::Numerical, "word_length", "SearchExhausted");
}

std::vector<BallEntry> GroupModel::ball(std::size_t r) const {
  if (!normal_form_)
    fail(ErrorKind::Unsupported, "ball", "UnboundedEnumeration",
         "kind " + std::string(to_string(kind_)) + " has no normal form");
  std::vector<BallEntry> out{{identity(), Word{}, 0}};
  std::set<Element> seen{identity()};
  std::size_t begin = 0;
  for (std::size_t radius = 1; radius <= r; ++radius) {
    std::size_t end = out.size();
    if (begin == end) break;
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t s = 0; s < rank(); ++s)
        for (int sign : {1, -1}) {
          Word v = out[i].word;
          v.push_back(sign * static_cast<Letter>(s + 1));
          Element e = normal_form_->reduce(v);
          if (seen.insert(e).second) out.push_back({std::move(e), std::move(v), radius});
        }
    begin = end;
  }
  return out;
}

std::optional<std::size_t> GroupModel::generator_index(std::string_view name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i] == name) return i;
  return std::nullopt;
}

Word GroupModel::parse_word(std::string_view text) const {
  Word w;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::string name = token;
    long exponent = 1;
    if (auto caret = token.find('^'); caret != std::string::npos) {
      name = token.substr(0, caret);
      std::string ex = token.substr(caret + 1);
      try {
        std::size_t used = 0;
        exponent = std::stol(ex, &used);
        if (used != ex.size()) throw std::invalid_argument(ex);
      } catch (const std::exception&) {
        fail(ErrorKind::Parse, "parse_word", "BadExponent", token);
      }
    }
    token.clear();
    auto idx = generator_index(name);
    if (!idx) {
      if (name == "e" || name == "1") return;
      fail(ErrorKind::Parse, "parse_word", "UnknownGenerator", name);
    }
    Letter l = static_cast<Letter>(*idx + 1);
    for (long i = 0; i < std::labs(exponent); ++i) w.push_back(exponent > 0 ? l : -l);
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*')
      flush();
    else
      token.push_back(c);
  }
  flush();
  return w;
}

std::string GroupModel::format_word(const Word& w) const {
  if (w.empty()) return "e";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long count = static_cast<long>(j - i) * (w[i] > 0 ? 1 : -1);
    if (i > 0) os << ' ';
    os << generators_[gen_of(w[i])];
    if (count != 1) os << '^' << count;
    i = j;
  }
  return os.str();
}

std::shared_ptr<CayleyTable> close_under_products(
    const Key& identity, const std::vector<Key>& generators,
    const std::function<Key(const Key&, const Key&)>& product) {
  std::vector<Key> elements{identity};
  std::map<Key, std::uint32_t> index{{identity, 0}};
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (const auto& s : generators) {
      Key k = product(elements[i], s);
      if (index.emplace(k, static_cast<std::uint32_t>(elements.size())).second) elements.push_back(k);
      if (elements.size() > 100000) fail(ErrorKind::Validation, "make_group", "GroupTooLarge");
    }
  auto t = std::make_shared<CayleyTable>();
  t->order = elements.size();
  t->mult.resize(t->order * t->order);
  for (std::size_t g = 0; g < t->order; ++g)
    for (std::size_t h = 0; h < t->order; ++h)
      t->mult[g * t->order + h] = index.at(product(elements[g], elements[h]));
  for (const auto& s : generators) t->generator_elements.push_back(index.at(s));
  finish_table(*t, "make_group");
  return t;
}

GroupModel cyclic(std::size_t n) {
  if (n < 1) fail(ErrorKind::Validation, "make_group", "BadParameter", "cyclic order must be >= 1");
  auto n64 = static_cast<std::int64_t>(n);
  auto t = close_under_products({0}, {{1 % n64}},
                                [n64](const Key& a, const Key& b) { return Key{(a[0] + b[0]) % n64}; });
  return finite_model(std::move(t), {"t"}, {Word(n, 1)}, "make_group");
}

GroupModel free_group(std::size_t rank) {
  if (rank < 1) fail(ErrorKind::Validation, "make_group", "BadParameter", "free rank must be >= 1");
  std::vector<std::string> names = rank == 1 ? std::vector<std::string>{"t"} : letter_names(rank);
  return GroupModel(GroupKind::free, std::move(names), {}, std::make_shared<FreeNormalForm>());
}

GroupModel free_abelian(std::size_t rank) {
  if (rank < 1) fail(ErrorKind::Validation, "make_group", "BadParameter", "rank must be >= 1");
  std::vector<std::string> names;
  if (rank == 1)
    names.push_back("t");
  else
    for (std::size_t i = 0; i < rank; ++i) names.push_back("t" + std::to_string(i + 1));
  std::vector<Word> relators;
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = i + 1; j < rank; ++j) {
      Letter a = static_cast<Letter>(i + 1), b = static_cast<Letter>(j + 1);
      relators.push_back({a, b, -a, -b});
    }
  return GroupModel(GroupKind::free_abelian, std::move(names), std::move(relators),
                    std::make_shared<AbelianNormalForm>(rank));
}

GroupModel dihedral(std::size_t n) {
  if (n < 3) fail(ErrorKind::Validation, "make_group", "BadParameter", "dihedral n must be >= 3");
  Key id(n), r(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    id[i] = static_cast<std::int64_t>(i);
    r[i] = static_cast<std::int64_t>((i + 1) % n);
    s[i] = static_cast<std::int64_t>((n - i) % n);
  }
  auto t = close_under_products(id, {r, s}, compose_perm);
  // r = 1, s = 2: r^n, s^2, (s r)^2
  return finite_model(std::move(t), {"r", "s"}, {Word(n, 1), {2, 2}, {2, 1, 2, 1}}, "make_group");
}

GroupModel symmetric(std::size_t degree) {
  if (degree < 2 || degree > 6)
    fail(ErrorKind::Validation, "make_group", "BadParameter", "symmetric degree must be in [2, 6]");
  Key id(degree), s(degree), r(degree);
  for (std::size_t i = 0; i < degree; ++i) {
    id[i] = static_cast<std::int64_t>(i);
    s[i] = static_cast<std::int64_t>(i);
    r[i] = static_cast<std::int64_t>((i + 1) % degree);
  }
  std::swap(s[0], s[1]);
  auto t = close_under_products(id, {s, r}, compose_perm);
  std::vector<Word> relators;
  if (degree == 3)
    relators = {{1, 1}, {2, 2, 2}, {1, 2, 1, 2}};  // s^2, r^3, (s r)^2
  else
    relators = derived_relators(*t);
  return finite_model(std::move(t), {"s", "r"}, std::move(relators), "make_group");
}

GroupModel quaternion() {
  // 2x2 Gaussian-integer matrices, entries stored as (re, im) pairs row-major.
  auto mul = [](const Key& a, const Key& b) {
    Key c(8, 0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          auto ar = a[2 * (2 * i + k)], ai = a[2 * (2 * i + k) + 1];
          auto br = b[2 * (2 * k + j)], bi = b[2 * (2 * k + j) + 1];
          c[2 * (2 * i + j)] += ar * br - ai * bi;
          c[2 * (2 * i + j) + 1] += ar * bi + ai * br;
        }
    return c;
  };
  Key id{1, 0, 0, 0, 0, 0, 1, 0};
  Key i{0, 1, 0, 0, 0, 0, 0, -1};  // diag(i, -i)
  Key j{0, 0, -1, 0, 1, 0, 0, 0};  // [[0, -1], [1, 0]]
  auto t = close_under_products(id, {i, j}, mul);
  // i^4, i^2 j^-2, j^-1 i j i
  return finite_model(std::move(t), {"i", "j"}, {{1, 1, 1, 1}, {1, 1, -2, -2}, {-2, 1, 2, 1}},
                      "make_group");
}

GroupModel from_cayley_table(std::size_t order, const std::vector<std::uint32_t>& row_major,
                             const std::vector<std::uint32_t>& generator_elements,
                             std::vector<std::string> names) {
  const std::string op = "make_group";
  if (order == 0 || row_major.size() != order * order)
    fail(ErrorKind::Validation, op, "BadTable", "expected order^2 entries");
  if (names.size() != generator_elements.size())
    fail(ErrorKind::Validation, op, "BadTable", "one name per generator element");
  for (auto x : row_major)
    if (x >= order) fail(ErrorKind::Validation, op, "BadTable", "entry out of range");
  auto at = [&](std::size_t g, std::size_t h) { return row_major[g * order + h]; };
  std::optional<std::uint32_t> e;
  for (std::uint32_t c = 0; c < order && !e; ++c) {
    bool ok = true;
    for (std::uint32_t x = 0; x < order && ok; ++x) ok = at(c, x) == x && at(x, c) == x;
    if (ok) e = c;
  }
  if (!e) fail(ErrorKind::Validation, op, "NoIdentity");
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b)
      for (std::size_t c = 0; c < order; ++c)
        if (at(at(a, b), c) != at(a, at(b, c)))
          fail(ErrorKind::Validation, op, "NotAssociative",
               "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")");
  // Relabel so that the identity is element 0.
  auto relabel = [&](std::uint32_t x) -> std::uint32_t {
    if (x == *e) return 0;
    if (x == 0) return *e;
    return x;
  };
  auto t = std::make_shared<CayleyTable>();
  t->order = order;
  t->mult.resize(order * order);
  for (std::uint32_t g = 0; g < order; ++g)
    for (std::uint32_t h = 0; h < order; ++h)
      t->mult[relabel(g) * order + relabel(h)] = relabel(at(g, h));
  for (auto g : generator_elements) {
    if (g >= order) fail(ErrorKind::Validation, op, "BadTable", "generator out of range");
    t->generator_elements.push_back(relabel(g));
  }
  finish_table(*t, op);
  auto relators = derived_relators(*t);
  return finite_model(std::move(t), std::move(names), std::move(relators), op);
}

GroupModel finitely_presented(std::vector<std::string> names, const std::vector<std::string>& relators) {
  // Parse relators against a throwaway free group with the same names.
  GroupModel names_only(GroupKind::finitely_presented, names, {}, nullptr);
  std::vector<Word> rels;
  for (const auto& r : relators) rels.push_back(names_only.parse_word(r));
  return GroupModel(GroupKind::finitely_presented, std::move(names), std::move(rels), nullptr);
}

FinMeasure make_measure(const GroupModel& group, std::vector<SupportPoint> support) {
  const std::string op = "make_measure";
  if (support.empty()) fail(ErrorKind::Validation, op, "NotAdapted", "empty support");
  for (const auto& p : support)
    if (!(p.weight > 0.0) || !std::isfinite(p.weight))
      fail(ErrorKind::Validation, op, "NonPositiveWeight", group.format_word(p.word));

  // Elements are compared by normal form; without a word problem free
  // reduction is the (sufficient) equality test.
  auto key_of = [&](const Word& w) {
    if (group.has_word_problem()) return group.normal_form(w);
    Word r = free_reduce(w);
    return Element{{r.begin(), r.end()}};
  };

  FinMeasure m;
  std::map<Element, std::size_t> where;
  double total = 0.0;
  for (auto& p : support) {
    total += p.weight;
    Element k = key_of(p.word);
    if (auto it = where.find(k); it != where.end()) {
      m.support[it->second].weight += p.weight;
    } else {
      where.emplace(k, m.support.size());
      m.support.push_back({free_reduce(p.word), p.weight});
    }
  }
  if (std::abs(total - 1.0) > kMeasureTol)
    fail(ErrorKind::Validation, op, "NotNormalized", "total weight " + format_residual(total));

  for (const auto& p : m.support) {
    auto it = where.find(key_of(inverse(p.word)));
    if (it == where.end() || std::abs(m.support[it->second].weight - p.weight) > kMeasureTol)
      fail(ErrorKind::Validation, op, "NotSymmetric", group.format_word(p.word));
  }

  // Adaptedness.
  bool adapted = false;
  if (group.is_finite()) {
    const CayleyTable& t = *group.table();
    std::vector<std::uint32_t> gens;
    for (const auto& p : m.support) gens.push_back(t.evaluate(p.word));
    std::vector<char> seen(t.order, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      auto g = stack.back();
      stack.pop_back();
      for (auto s : gens) {
        auto h = t(g, s);
        if (!seen[h]) {
          seen[h] = 1;
          ++count;
          stack.push_back(h);
        }
      }
    }
    adapted = count == t.order;
  } else {
    std::set<Element> targets;
    for (std::size_t s = 0; s < group.rank(); ++s) targets.insert(key_of({static_cast<Letter>(s + 1)}));
    std::set<Element> seen{key_of({})};
    std::vector<Word> frontier{Word{}};
    for (int depth = 0; depth < 8 && !targets.empty() && !frontier.empty(); ++depth) {
      std::vector<Word> next;
      for (const auto& u : frontier)
        for (const auto& p : m.support) {
          Word v = free_reduce(concat(u, p.word));
          Element k = key_of(v);
          targets.erase(k);
          if (seen.insert(k).second) next.push_back(std::move(v));
        }
      frontier = std::move(next);
      if (seen.size() > 200000) break;
    }
    adapted = targets.empty();
  }
  if (!adapted) fail(ErrorKind::Validation, op, "NotAdapted", "support does not generate the group");

  for (const auto& p : m.support) {
    double len;
    if (group.has_word_problem()) {
      len = static_cast<double>(group.word_length(p.word));
    } else {
      len = static_cast<double>(p.word.size());
      m.second_moment_exact = false;
    }
    m.second_moment += p.weight * len * len;
  }
  return m;
}

FinMeasure uniform_measure(const GroupModel& group) {
  std::vector<SupportPoint> support;
  const double w = 1.0 / static_cast<double>(2 * group.rank());
  for (std::size_t s = 0; s < group.rank(); ++s) {
    Letter l = static_cast<Letter>(s + 1);
    support.push_back({{l}, w});
    support.push_back({{-l}, w});
  }
  return make_measure(group, std::move(support));
}

}  // namespace harmcoc
