#include "harmcoc/catalogue.hpp"

#include <cmath>
#include <numbers>

#include "harmcoc/errors.hpp"

namespace harmcoc {

namespace {

CMatrix scalar(cplx z) { return CMatrix::Constant(1, 1, z); }

CMatrix rotation(double angle) {
  CMatrix m(2, 2);
  m << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return m;
}

CMatrix reflection() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

std::vector<UnitaryRep> cyclic_irreps(std::size_t n) {
  std::vector<UnitaryRep> out;
  for (std::size_t j = 0; j < n; ++j)
    out.push_back({1, {scalar(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                                  static_cast<double>(n)))}});
  return out;
}

// Generators ordered (r, s) for dihedral(n), (s, r) for symmetric(3).
std::vector<UnitaryRep> dihedral_irreps(std::size_t n, bool s_first) {
  std::vector<UnitaryRep> out;
  auto make = [&](CMatrix r, CMatrix s) {
    Index d = r.rows();
    out.push_back(s_first ? UnitaryRep{d, {s, r}} : UnitaryRep{d, {r, s}});
  };
  for (double rs : {1.0, -1.0})
    for (double ss : {1.0, -1.0})
      if (rs > 0 || n % 2 == 0) make(scalar(rs), scalar(ss));
  for (std::size_t j = 1; 2 * j < n; ++j)
    make(rotation(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n)), reflection());
  return out;
}

std::vector<UnitaryRep> quaternion_irreps() {
  std::vector<UnitaryRep> out;
  for (double a : {1.0, -1.0})
    for (double b : {1.0, -1.0}) out.push_back({1, {scalar(a), scalar(b)}});
  CMatrix i(2, 2), j(2, 2);
  i << cplx(0, 1), 0.0, 0.0, cplx(0, -1);
  j << 0.0, -1.0, 1.0, 0.0;
  out.push_back({2, {i, j}});
  return out;
}

std::size_t parse_count(std::string_view text, std::string_view name) {
  try {
    std::size_t used = 0;
    auto v = std::stoul(std::string(text), &used);
    if (used == text.size() && !text.empty()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Parse, "catalogue", "UnknownGroup", std::string(name));
}

}  // namespace

CatalogueGroup catalogue_group(std::string_view name) {
  if (name == "Z") return {"Z", free_group(1), {}};
  if (name == "S3") return {"S3", symmetric(3), dihedral_irreps(3, true)};
  if (name == "Q8") return {"Q8", quaternion(), quaternion_irreps()};
  if (name.size() >= 2) {
    std::size_t n = parse_count(name.substr(1), name);
    switch (name[0]) {
      case 'C': return {std::string(name), cyclic(n), cyclic_irreps(n)};
      case 'D': return {std::string(name), dihedral(n), dihedral_irreps(n, false)};
      case 'F': return {std::string(name), free_group(n), {}};
      case 'Z': return {std::string(name), free_abelian(n), {}};
      default: break;
    }
  }
  throw Error(ErrorKind::Parse, "catalogue", "UnknownGroup", std::string(name));
}

std::vector<CatalogueGroup> finite_catalogue() {
  std::vector<CatalogueGroup> out;
  for (const char* n : {"C2", "C3", "C4", "C5", "C6", "S3", "D4", "Q8"}) out.push_back(catalogue_group(n));
  return out;
}

UnitaryRep random_finite_rep(const CatalogueGroup& g, Index dim, Rng& rng) {
  if (g.irreps.empty()) throw Error(ErrorKind::Unsupported, "catalogue", "NoIrreps", g.name);
  std::vector<UnitaryRep> parts;
  Index remaining = dim;
  while (remaining > 0) {
    std::vector<const UnitaryRep*> fitting;
    for (const auto& r : g.irreps)
      if (r.dim <= remaining) fitting.push_back(&r);
    std::uniform_int_distribution<std::size_t> pick(0, fitting.size() - 1);
    parts.push_back(*fitting[pick(rng)]);
    remaining -= parts.back().dim;
  }
  return conjugate(direct_sum(std::span<const UnitaryRep>(parts)), random_unitary(dim, rng));
}

UnitaryRep random_free_rep(std::size_t rank, Index dim, Rng& rng) {
  UnitaryRep out{dim, {}};
  for (std::size_t s = 0; s < rank; ++s) out.images.push_back(random_unitary(dim, rng));
  return out;
}

UnitaryRep random_abelian_rep(std::size_t rank, Index dim, Rng& rng) {
  CMatrix basis = random_unitary(dim, rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  UnitaryRep out{dim, {}};
  for (std::size_t s = 0; s < rank; ++s) {
    CVector phases(dim);
    for (Index i = 0; i < dim; ++i) phases(i) = std::polar(1.0, angle(rng));
    out.images.push_back(basis * phases.asDiagonal() * basis.adjoint());
  }
  return out;
}

UnitaryRep random_rep(const CatalogueGroup& g, Index dim, Rng& rng) {
  switch (g.group.kind()) {
    case GroupKind::cayley_table: return random_finite_rep(g, dim, rng);
    case GroupKind::free: return random_free_rep(g.group.rank(), dim, rng);
    case GroupKind::free_abelian: return random_abelian_rep(g.group.rank(), dim, rng);
    default: throw Error(ErrorKind::Unsupported, "catalogue", "NoRandomReps", g.name);
  }
}

UnitaryRep random_multiple(const UnitaryRep& sigma, int m, Rng& rng) {
  std::vector<UnitaryRep> copies(static_cast<std::size_t>(m), sigma);
  UnitaryRep sum = direct_sum(std::span<const UnitaryRep>(copies));
  return conjugate(sum, random_unitary(sum.dim, rng));
}

UnitaryRep character(double theta) { return {1, {scalar(std::polar(1.0, theta))}}; }

std::vector<Instance> random_instances(Rng& rng, int per_group, Index max_dim) {
  std::vector<CatalogueGroup> groups = {catalogue_group("F2"), catalogue_group("Z"), catalogue_group("Z2")};
  for (auto& g : finite_catalogue()) groups.push_back(std::move(g));
  std::uniform_int_distribution<Index> dim(1, max_dim);
  std::vector<Instance> out;
  for (const auto& g : groups) {
    FinMeasure mu = uniform_measure(g.group);
    for (int i = 0; i < per_group; ++i) {
      Index d = dim(rng);
      out.push_back({g.name + "/" + std::to_string(i) + "/d" + std::to_string(d), g.group, random_rep(g, d, rng), mu});
    }
  }
  return out;
}

}  // namespace harmcoc
