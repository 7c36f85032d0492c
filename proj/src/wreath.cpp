#include "harmcoc/wreath.hpp"

#include <algorithm>
#include <cmath>

#include "harmcoc/errors.hpp"

namespace harmcoc {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& op, const std::string& code,
                       const std::string& detail = {}) {
  throw Error(kind, "wreath/" + op, code, detail);
}

void add_entry(std::map<std::uint32_t, std::int64_t>& f, std::uint32_t x, std::int64_t c) {
  if (c == 0) return;
  auto [it, inserted] = f.emplace(x, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) f.erase(it);
  }
}

WreathElement letter_element(const CayleyTable& t, Letter l, Letter lamp) {
  WreathElement x;
  if (std::abs(l) == lamp) {
    x.base[0] = l > 0 ? 1 : -1;
  } else {
    std::uint32_t s = t.generator_elements[static_cast<std::size_t>(std::abs(l)) - 1];
    x.top = l > 0 ? s : t.inv[s];
  }
  return x;
}

class WreathNormalForm final : public NormalForm {
 public:
  explicit WreathNormalForm(GroupModel base) : base_(std::move(base)) {}

  Element reduce(const Word& w) const override {
    const CayleyTable& t = *base_.table();
    const Letter lamp = static_cast<Letter>(base_.rank() + 1);
    WreathElement x;
    for (Letter l : w) x = wr_mul(t, x, letter_element(t, l, lamp));
    Element e{{static_cast<std::int64_t>(x.top)}};
    for (auto [pos, c] : x.base) {
      e.key.push_back(pos);
      e.key.push_back(c);
    }
    return e;
  }
  Element identity() const override { return Element{{0}}; }

 private:
  GroupModel base_;
};

}  // namespace

WreathElement wr_mul(const CayleyTable& g, const WreathElement& x, const WreathElement& y) {
  WreathElement out;
  out.top = g(x.top, y.top);
  // (h^-1 . f)(z) = f(h z): the entry of f at p moves to h^-1 p.
  const std::uint32_t hinv = g.inv[y.top];
  for (auto [p, c] : x.base) add_entry(out.base, g(hinv, p), c);
  for (auto [p, c] : y.base) add_entry(out.base, p, c);
  return out;
}

WreathElement wr_inv(const CayleyTable& g, const WreathElement& x) {
  // (g, f)^-1 = (g^-1, g . (-f)); the entry of f at p moves to g p.
  WreathElement out;
  out.top = g.inv[x.top];
  for (auto [p, c] : x.base) add_entry(out.base, g(x.top, p), -c);
  return out;
}

WreathGroup::WreathGroup(GroupModel base)
    : base_(std::move(base)), model_(GroupKind::free, {"_"}, {}, nullptr) {
  if (!base_.is_finite())
    fail(ErrorKind::Unsupported, "make_wreath", "UnsupportedGroupKind", "top group must be finite");
  std::vector<std::string> names = base_.generators();
  names.push_back(base_.generator_index("t") ? "z" : "t");
  const CayleyTable& t = *base_.table();
  const Letter lamp = static_cast<Letter>(base_.rank() + 1);
  std::vector<Word> relators = base_.relators();
  for (std::uint32_t g = 1; g < t.order; ++g) {
    // [t, w t w^-1]
    const Word& w = t.words[g];
    Word conj = concat(concat(w, Word{lamp}), inverse(w));
    relators.push_back(free_reduce(concat(concat(Word{lamp}, conj), concat(Word{-lamp}, inverse(conj)))));
  }
  model_ = GroupModel(GroupKind::wreath, std::move(names), std::move(relators),
                      std::make_shared<WreathNormalForm>(base_));
}

WreathElement WreathGroup::evaluate(const Word& w) const {
  WreathElement x;
  for (Letter l : w) x = wr_mul(table(), x, letter_element(table(), l, lamp()));
  return x;
}

Word WreathGroup::to_word(const WreathElement& x) const {
  Word w = table().words[x.top];
  for (auto [p, c] : x.base) {
    const Word& wp = table().words[p];
    w = concat(w, concat(concat(wp, power(Word{lamp()}, static_cast<int>(c))), inverse(wp)));
  }
  return w;
}

UnitaryRep extend_to_wreath(const UnitaryRep& rep) {
  UnitaryRep out = rep;
  out.images.push_back(CMatrix::Identity(rep.dim, rep.dim));
  return out;
}

FinMeasure wreath_measure(const WreathGroup& gamma, const FinMeasure& mu1, double lamp_weight) {
  if (!(lamp_weight > 0.0 && lamp_weight < 1.0))
    fail(ErrorKind::Validation, "wreath_measure", "BadWeight", "lamp weight must lie in (0, 1)");
  std::vector<SupportPoint> support;
  for (const auto& p : mu1.support) support.push_back({p.word, (1.0 - lamp_weight) * p.weight});
  support.push_back({{gamma.lamp()}, lamp_weight / 2.0});
  support.push_back({{-gamma.lamp()}, lamp_weight / 2.0});
  return make_measure(gamma.model(), std::move(support));
}

Cocycle LiftedCocycle::on_gamma() const {
  Cocycle out = Cocycle::zero(b1.dim(), b1.rank() + 1);
  out.values.leftCols(b1.values.cols()) = b1.values;
  out.values.col(static_cast<Index>(b1.rank())) = v;
  return out;
}

LiftedCocycle lift_cocycle(const Cocycle& b1, const CVector& v) {
  if (b1.dim() != v.size()) fail(ErrorKind::Validation, "lift_cocycle", "DimensionMismatch");
  return {b1, v};
}

CVector evaluate_wr(const WreathGroup& gamma, const UnitaryRep& rep, const LiftedCocycle& b,
                    const WreathElement& x) {
  const auto& t = gamma.table();
  CVector phi = CVector::Zero(rep.dim);
  for (auto [p, c] : x.base) phi += static_cast<double>(c) * rep.apply(t.words[p], b.v);
  const Word& wg = t.words[x.top];
  return evaluate(rep, b.b1, wg) + rep.apply(wg, phi);
}

double lifted_cocycle_identity_residual(const WreathGroup& gamma, const UnitaryRep& rep,
                                        const LiftedCocycle& b, Rng& rng, int pairs,
                                        const Tolerances& tol) {
  const std::size_t rank = gamma.model().rank();
  std::uniform_int_distribution<std::size_t> len(0, 12);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    WreathElement x = gamma.evaluate(random_word(rank, len(rng), rng));
    WreathElement y = gamma.evaluate(random_word(rank, len(rng), rng));
    CVector lhs = evaluate_wr(gamma, rep, b, wr_mul(gamma.table(), x, y));
    CVector rhs = evaluate_wr(gamma, rep, b, x) +
                  rep.apply(gamma.table().words[x.top], evaluate_wr(gamma, rep, b, y));
    worst = std::max(worst, (lhs - rhs).norm());
  }
  if (worst > tol.residual)
    fail(ErrorKind::Numerical, "lift_cocycle", "CocycleIdentityViolated", "residual " + format_residual(worst));
  return worst;
}

WreathDecomposition wreath_har_decomposition(const WreathGroup& gamma, const UnitaryRep& rep,
                                             const FinMeasure& mu1, double lamp_weight,
                                             const Tolerances& tol) {
  WreathDecomposition out;
  auto base_space = CocycleSpace::build(gamma.base(), rep, mu1, tol);
  out.dim_har_base = base_space.dim_har();
  out.dim_z1_base = base_space.dim_z1();
  out.dim_b1_base = base_space.dim_b1();
  if (out.dim_har_base != 0 || out.dim_z1_base != out.dim_b1_base)
    fail(ErrorKind::Numerical, "wreath_har_decomposition", "NonVanishingH1",
         "H1(G, pi) must vanish for a finite top group");

  auto gamma_space = std::make_shared<CocycleSpace>(CocycleSpace::build(
      gamma.model(), extend_to_wreath(rep), wreath_measure(gamma, mu1, lamp_weight), tol));
  out.dim_har_gamma = gamma_space->dim_har();
  out.dim_z1_gamma = gamma_space->dim_z1();
  out.dim_b1_gamma = gamma_space->dim_b1();

  const Index d = rep.dim;
  CMatrix lifts(d * static_cast<Index>(gamma.model().rank()), d);
  for (Index i = 0; i < d; ++i) {
    LiftedCocycle l = lift_cocycle(Cocycle::zero(d, gamma.base().rank()), CVector::Unit(d, i));
    Cocycle c = l.on_gamma();
    lifts.col(i) = c.coords();
    out.lift_mean_residual = std::max(out.lift_mean_residual, gamma_space->m_mu(c).norm());
  }
  Subspace lift_space = Subspace::span(gamma_space->embedding() * lifts, tol.rank, 1.0);
  out.lift_angle = max_principal_angle(lift_space, gamma_space->har_embedded());
  out.gamma_space = std::move(gamma_space);
  return out;
}

CyclicityVerdict wreath_exists_irreducible(const WreathGroup& gamma, const UnitaryRep& rep, Rng& rng,
                                           const WreathDecomposition* decomposition,
                                           const Tolerances& tol) {
  validate_rep(rep, gamma.base(), tol);
  CyclicityVerdict out;
  VNAlgebra m = commutant(rep, tol);
  out.blocks = center_blocks(m, tol, rng()).blocks;
  // Block sigma^{+m} has commutant M_m acting with multiplicity dim sigma.
  out.exists = std::all_of(out.blocks.begin(), out.blocks.end(),
                           [](const FactorBlock& b) { return b.factor_size <= b.multiplicity; });
  if (!out.exists) return out;

  for (int attempt = 0; attempt < 16 && !out.witness; ++attempt) {
    CVector v = random_gaussian_vector(rep.dim, rng);
    Index span = invariant_span(rep, v, tol).dim();
    if (span == rep.dim) {
      out.witness = v;
      out.witness_span_dim = span;
    }
  }
  if (!out.witness)
    fail(ErrorKind::Numerical, "wreath_exists_irreducible", "WitnessNotFound");

  if (decomposition && decomposition->gamma_space) {
    const CocycleSpace& gs = *decomposition->gamma_space;
    Cocycle b = lift_cocycle(Cocycle::zero(rep.dim, gamma.base().rank()), *out.witness).on_gamma();
    out.gamma_irreducible = is_irreducible(gs, b, rng, 10).irreducible;
    out.gamma_separating = is_separating(commutant(gs.rep(), tol), b, tol);
  }
  return out;
}

}  // namespace harmcoc
