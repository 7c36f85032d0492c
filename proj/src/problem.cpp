#include "harmcoc/problem.hpp"

#include <cmath>
#include <set>

#include "harmcoc/affine.hpp"
#include "harmcoc/wreath.hpp"

namespace harmcoc {

namespace {

[[noreturn]] void parse_fail(const std::string& op, const std::string& code, const std::string& detail = {}) {
  throw Error(ErrorKind::Parse, "cli/" + op, code, detail);
}

[[noreturn]] void invalid(const std::string& op, const std::string& code, const std::string& detail = {}) {
  throw Error(ErrorKind::Validation, "cli/" + op, code, detail);
}

const Json& field(const Json& j, const char* key, const std::string& op) {
  if (!j.is_object() || !j.contains(key)) parse_fail(op, "MissingField", key);
  return j.at(key);
}

std::size_t count_field(const Json& j, const char* key, const std::string& op) {
  const Json& v = field(j, key, op);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) parse_fail(op, "BadField", key);
  return v.get<std::size_t>();
}

cplx parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  parse_fail("parse_complex", "BadNumber", j.dump());
}

CVector parse_vector(const Json& j) {
  if (!j.is_array()) parse_fail("parse_vector", "BadVector", j.dump());
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = parse_complex(j[i]);
  return v;
}

CMatrix parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) parse_fail("parse_matrix", "BadMatrix", j.dump());
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j[0].is_array() ? j[0].size() : 0);
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) parse_fail("parse_matrix", "RaggedMatrix");
    for (Index c = 0; c < cols; ++c) m(r, c) = parse_complex(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json nullable(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json certificate_json(const RepCertificate& c) {
  return {{"unitary_max", c.max_unitary}, {"relator_max", c.max_relator}};
}

Json blocks_json(const std::vector<FactorBlock>& blocks) {
  Json out = Json::array();
  for (const auto& b : blocks)
    out.push_back({{"rank", b.rank}, {"factor_size", b.factor_size}, {"multiplicity", b.multiplicity}});
  return out;
}

Json basis_json(const CMatrix& coords, const UnitaryRep& rep, const GroupModel& g) {
  Json out = Json::array();
  for (Index i = 0; i < coords.cols(); ++i)
    out.push_back(to_json(Cocycle::from_coords(coords.col(i), rep.dim, g.rank()), g));
  return out;
}

struct Context {
  const ProblemSpec& spec;
  const RunOptions& opts;
  Rng rng;
  Json residuals;

  Context(const ProblemSpec& s, const RunOptions& o) : spec(s), opts(o), rng(s.seed) {
    residuals = {{"tol_rank", s.tol.rank}, {"tol_residual", s.tol.residual}};
  }

  const GroupModel& group() const {
    if (!spec.group) invalid("run", "MissingGroup");
    return *spec.group;
  }
  const UnitaryRep& rep() const {
    if (!spec.rep) invalid("run", "MissingRep");
    return *spec.rep;
  }
  const Cocycle& cocycle() const {
    if (!spec.cocycle) invalid("run", "MissingCocycle");
    return *spec.cocycle;
  }
  CocycleSpace space() {
    residuals["rep"] = certificate_json(validate_rep(rep(), group(), spec.tol));
    FinMeasure mu = spec.measure ? *spec.measure : uniform_measure(group());
    return CocycleSpace::build(group(), rep(), std::move(mu), spec.tol);
  }
  /// The cocycle given in the input, checked against the relators.
  const Cocycle& checked_cocycle(const CocycleSpace& s) {
    const Cocycle& b = cocycle();
    double r = relator_residual(s.group(), s.rep(), b);
    residuals["cocycle_relator"] = r;
    if (r > spec.tol.residual * std::max(1.0, norm_q(s.rep(), b)))
      invalid("run", "NotACocycle", "relator residual " + format_residual(r));
    return b;
  }
};

Json space_summary(const CocycleSpace& s) {
  return {{"dim_z1", s.dim_z1()},
          {"dim_b1", s.dim_b1()},
          {"dim_har", s.dim_har()},
          {"dim", s.rep().dim},
          {"group_kind", std::string(to_string(s.group().kind()))}};
}

Json run_z1(Context& ctx) {
  CocycleSpace s = ctx.space();
  Json out = space_summary(s);
  out["dim_h1"] = s.dim_z1() - s.dim_b1();
  Z1Solution z = z1_relators(s.group(), s.rep(), s.tolerances());
  ctx.residuals["z1_relator_max"] = z.max_residual;
  if (s.group().is_finite()) {
    Z1Solution pairs = z1_all_pairs(s.group(), s.rep(), s.tolerances());
    out["dim_z1_all_pairs"] = pairs.dim();
    ctx.residuals["z1_all_pairs_max"] = pairs.max_residual;
  }
  if (ctx.opts.emit_bases) {
    out["z1_basis"] = basis_json(s.z1_basis(), s.rep(), s.group());
    out["b1_basis"] = basis_json(s.b1_basis(), s.rep(), s.group());
  }
  return out;
}

Json run_har(Context& ctx) {
  CocycleSpace s = ctx.space();
  Json out = space_summary(s);
  out["gap"] = nullable(s.gap().gap);
  out["gap_vacuous"] = s.gap().vacuous;
  out["second_moment"] = s.measure().second_moment;
  out["second_moment_exact"] = s.measure().second_moment_exact;
  double mean = 0.0;
  for (Index i = 0; i < s.dim_har(); ++i) mean = std::max(mean, s.m_mu(s.har_element(CVector::Unit(s.dim_har(), i))).norm());
  ctx.residuals["har_mean_max"] = mean;
  ctx.residuals["orthogonality_angle"] = s.orthogonality_angle();
  if (ctx.opts.emit_bases) out["har_basis"] = basis_json(s.har_basis(), s.rep(), s.group());
  return out;
}

Json run_project(Context& ctx) {
  CocycleSpace s = ctx.space();
  const Cocycle& b = ctx.checked_cocycle(s);
  HarmonicProjection p = s.project_harmonic(b);
  Cocycle gram = s.gram_projection(b);
  Json out = space_summary(s);
  out["harmonic"] = to_json(p.harmonic, s.group());
  out["shift"] = to_json(p.shift);
  out["gap"] = nullable(s.gap().gap);
  ctx.residuals["harmonic_mean"] = s.m_mu(p.harmonic).norm();
  ctx.residuals["gram_difference"] = (p.harmonic.values - gram.values).norm();
  ctx.residuals["idempotence"] = (s.project_harmonic(p.harmonic).harmonic.values - p.harmonic.values).norm();
  return out;
}

Json run_irreducible(Context& ctx) {
  CocycleSpace s = ctx.space();
  const Cocycle& b = ctx.checked_cocycle(s);
  IrreducibilityVerdict v = is_irreducible(s, b, ctx.rng, ctx.spec.trials);
  Json out = space_summary(s);
  out["irreducible"] = v.irreducible;
  out["span_dim"] = v.span_dim;
  out["ambient_dim"] = v.ambient_dim;
  out["sampler_trials"] = v.sampler_trials;
  out["sampler_failures"] = v.sampler_failures;
  out["harmonic_part"] = to_json(v.projection.harmonic, s.group());
  ctx.residuals["harmonic_mean"] = s.m_mu(v.projection.harmonic).norm();
  ctx.residuals["projection_agreement"] = v.projection_agreement;
  return out;
}

Json run_commutant(Context& ctx) {
  ctx.residuals["rep"] = certificate_json(validate_rep(ctx.rep(), ctx.group(), ctx.spec.tol));
  VNAlgebra m = commutant(ctx.rep(), ctx.spec.tol);
  BlockDecomposition dec = center_blocks(m, ctx.spec.tol, ctx.rng());
  ctx.residuals["closure"] = m.closure_residual();
  Json out = {{"dim", m.dim()},
              {"center_dim", dec.center.size()},
              {"is_factor", dec.is_factor()},
              {"blocks", blocks_json(dec.blocks)}};
  if (ctx.opts.emit_bases) {
    Json basis = Json::array();
    for (const auto& t : m.basis()) basis.push_back(to_json(t));
    out["basis"] = basis;
  }
  return out;
}

Json existence_json(const ExistenceReport& r) {
  Json out = {{"exists", r.exists}, {"is_factor", r.is_factor}, {"dim_har", r.dim_har}, {"diagnosis", r.diagnosis}};
  Json blocks = Json::array();
  for (const auto& b : r.blocks)
    blocks.push_back({{"factor_size", b.factor_size},
                      {"multiplicity", b.multiplicity},
                      {"dim_har", b.dim_har},
                      {"dim_vn", b.dim_vn.value()},
                      {"dim_vn_exact", to_json(b.dim_vn)},
                      {"passes", b.passes}});
  out["blocks"] = blocks;
  if (r.dim_vn) {
    out["dim_vn"] = r.dim_vn->value();
    out["dim_vn_exact"] = to_json(*r.dim_vn);
  }
  if (r.dim_vn_commutant) {
    out["dim_vn_commutant"] = r.dim_vn_commutant->value();
    out["dim_vn_commutant_exact"] = to_json(*r.dim_vn_commutant);
  }
  return out;
}

Json run_vndim(Context& ctx) {
  CocycleSpace s = ctx.space();
  ExistenceReport r = exists_irreducible_affine(s, ctx.rng);
  Json out = existence_json(r);
  out.erase("exists");
  out.erase("diagnosis");
  VNAlgebra m = commutant(s.rep(), s.tolerances());
  if (r.is_factor) {
    Rational dh = vn_dimension(m, Subspace::full(s.rep().dim), s.tolerances());
    out["dim_vn_rep"] = dh.value();
    out["dim_vn_rep_exact"] = to_json(dh);
  }
  if (r.dim_vn && r.dim_vn_commutant) {
    double product = (*r.dim_vn * *r.dim_vn_commutant).value();
    out["reciprocity_product"] = product;
    ctx.residuals["reciprocity"] = std::abs(product - 1.0);
  }
  return out;
}

Json run_exists(Context& ctx) {
  CocycleSpace s = ctx.space();
  ExistenceReport r = exists_irreducible_affine(s, ctx.rng);
  Json out = existence_json(r);
  if (r.witness) {
    out["witness_attempts"] = r.witness_attempts;
    if (ctx.opts.emit_bases) out["witness"] = to_json(*r.witness, s.group());
    ctx.residuals["witness_relator"] = relator_residual(s.group(), s.rep(), *r.witness);
    ctx.residuals["witness_mean"] = s.m_mu(*r.witness).norm();
  }
  return out;
}

Json run_wreath(Context& ctx) {
  if (!ctx.spec.wreath) invalid("run", "MissingWreath");
  const WreathSpec& w = *ctx.spec.wreath;
  WreathGroup gamma(w.base);
  ctx.residuals["rep"] = certificate_json(validate_rep(w.rep, w.base, ctx.spec.tol));
  WreathDecomposition dec = wreath_har_decomposition(gamma, w.rep, w.mu1, w.lamp_weight, ctx.spec.tol);
  CyclicityVerdict v = wreath_exists_irreducible(gamma, w.rep, ctx.rng, &dec, ctx.spec.tol);

  CVector probe = v.witness ? *v.witness : random_gaussian_vector(w.rep.dim, ctx.rng);
  LiftedCocycle lifted = lift_cocycle(Cocycle::zero(w.rep.dim, w.base.rank()), probe);
  ctx.residuals["cocycle_identity"] =
      lifted_cocycle_identity_residual(gamma, w.rep, lifted, ctx.rng, 1000, ctx.spec.tol);
  ctx.residuals["lift_angle"] = dec.lift_angle;
  ctx.residuals["lift_mean"] = dec.lift_mean_residual;

  Json out = {{"dim", w.rep.dim},
              {"lamp", gamma.model().generators().back()},
              {"base", {{"dim_z1", dec.dim_z1_base}, {"dim_b1", dec.dim_b1_base}, {"dim_har", dec.dim_har_base}}},
              {"gamma", {{"dim_z1", dec.dim_z1_gamma}, {"dim_b1", dec.dim_b1_gamma}, {"dim_har", dec.dim_har_gamma}}},
              {"exists", v.exists},
              {"cyclic", v.exists},
              {"blocks", blocks_json(v.blocks)}};
  if (v.witness) {
    out["witness_span_dim"] = v.witness_span_dim;
    if (ctx.opts.emit_bases) out["witness"] = to_json(*v.witness);
  }
  if (v.gamma_irreducible) out["gamma_irreducible"] = *v.gamma_irreducible;
  if (v.gamma_separating) out["gamma_separating"] = *v.gamma_separating;
  return out;
}

}  // namespace

GroupModel parse_group(const Json& j) {
  const std::string op = "parse_group";
  const Json& kind_j = field(j, "kind", op);
  if (!kind_j.is_string()) parse_fail(op, "BadField", "kind");
  const auto kind = kind_j.get<std::string>();
  if (kind == "cyclic") return cyclic(count_field(j, "order", op));
  if (kind == "free") return free_group(count_field(j, "rank", op));
  if (kind == "free_abelian") return free_abelian(count_field(j, "rank", op));
  if (kind == "dihedral") return dihedral(count_field(j, "n", op));
  if (kind == "symmetric") return symmetric(count_field(j, "degree", op));
  if (kind == "quaternion") return quaternion();
  if (kind == "cayley_table") {
    const Json& table = field(j, "table", op);
    if (!table.is_array()) parse_fail(op, "BadField", "table");
    std::vector<std::uint32_t> flat;
    for (const auto& entry : table) {
      if (entry.is_array()) {
        for (const auto& x : entry) flat.push_back(x.get<std::uint32_t>());
      } else {
        flat.push_back(entry.get<std::uint32_t>());
      }
    }
    auto order = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
    if (j.contains("order")) order = count_field(j, "order", op);
    std::vector<std::uint32_t> elements;
    std::vector<std::string> names;
    for (const auto& g : field(j, "generators", op)) {
      names.push_back(field(g, "name", op).get<std::string>());
      elements.push_back(field(g, "element", op).get<std::uint32_t>());
    }
    return from_cayley_table(order, flat, elements, std::move(names));
  }
  if (kind == "finitely_presented") {
    auto names = field(j, "generators", op).get<std::vector<std::string>>();
    auto relators = j.contains("relators") ? j.at("relators").get<std::vector<std::string>>()
                                           : std::vector<std::string>{};
    return finitely_presented(std::move(names), relators);
  }
  parse_fail(op, "UnknownKind", kind);
}

UnitaryRep parse_rep(const Json& j, const GroupModel& group) {
  if (!j.is_object()) parse_fail("parse_rep", "BadRep", "expected an object generator -> matrix");
  for (const auto& [name, _] : j.items())
    if (!group.generator_index(name)) invalid("parse_rep", "UnknownGenerator", name);
  UnitaryRep rep{0, {}};
  for (const auto& name : group.generators()) {
    if (!j.contains(name)) invalid("parse_rep", "MissingGenerator", name);
    CMatrix m = parse_matrix(j.at(name));
    if (m.rows() != m.cols()) invalid("parse_rep", "DimensionMismatch", name + " is not square");
    if (rep.images.empty()) rep.dim = m.rows();
    if (m.rows() != rep.dim) invalid("parse_rep", "DimensionMismatch", name);
    rep.images.push_back(std::move(m));
  }
  return rep;
}

FinMeasure parse_measure(const Json& j, const GroupModel& group) {
  if (!j.is_array()) parse_fail("parse_measure", "BadMeasure", "expected a list of points");
  std::vector<SupportPoint> support;
  for (const auto& p : j) {
    const Json& e = p.contains("element") ? p.at("element") : field(p, "word", "parse_measure");
    const Json& w = field(p, "weight", "parse_measure");
    if (!e.is_string() || !w.is_number()) parse_fail("parse_measure", "BadPoint", p.dump());
    support.push_back({group.parse_word(e.get<std::string>()), w.get<double>()});
  }
  return make_measure(group, std::move(support));
}

Cocycle parse_cocycle(const Json& j, const GroupModel& group, Index dim) {
  if (!j.is_object()) parse_fail("parse_cocycle", "BadCocycle", "expected an object generator -> vector");
  for (const auto& [name, _] : j.items())
    if (!group.generator_index(name)) invalid("parse_cocycle", "UnknownGenerator", name);
  Cocycle b = Cocycle::zero(dim, group.rank());
  for (std::size_t s = 0; s < group.rank(); ++s) {
    const auto& name = group.generators()[s];
    if (!j.contains(name)) invalid("parse_cocycle", "MissingGenerator", name);
    CVector v = parse_vector(j.at(name));
    if (v.size() != dim) invalid("parse_cocycle", "DimensionMismatch", name);
    b.values.col(static_cast<Index>(s)) = v;
  }
  return b;
}

ProblemSpec parse_problem(const Json& j, const RunOptions& opts) {
  if (!j.is_object()) parse_fail("parse_problem", "BadSpec", "top level must be an object");
  ProblemSpec spec;
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (t.contains("rank")) spec.tol.rank = t.at("rank").get<double>();
    if (t.contains("residual")) spec.tol.residual = t.at("residual").get<double>();
    if (t.contains("unitary")) spec.tol.unitary = t.at("unitary").get<double>();
    if (t.contains("relator")) spec.tol.relator = t.at("relator").get<double>();
    if (t.contains("gap")) spec.tol.gap = t.at("gap").get<double>();
  }
  if (opts.tol_rank) spec.tol.rank = *opts.tol_rank;
  if (opts.tol_res) spec.tol.residual = *opts.tol_res;
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (opts.seed) spec.seed = *opts.seed;
  if (j.contains("trials")) spec.trials = j.at("trials").get<int>();
  if (opts.trials) spec.trials = *opts.trials;

  if (j.contains("group")) {
    spec.group = parse_group(j.at("group"));
    if (j.contains("rep")) spec.rep = parse_rep(j.at("rep"), *spec.group);
    if (j.contains("measure")) spec.measure = parse_measure(j.at("measure"), *spec.group);
    if (j.contains("cocycle")) {
      if (!spec.rep) invalid("parse_problem", "MissingRep", "a cocycle needs a representation");
      spec.cocycle = parse_cocycle(j.at("cocycle"), *spec.group, spec.rep->dim);
    }
  }
  if (j.contains("wreath")) {
    const Json& w = j.at("wreath");
    GroupModel base = parse_group(field(w, "base_group", "parse_problem"));
    UnitaryRep rep = parse_rep(field(w, "rep", "parse_problem"), base);
    FinMeasure mu1 = w.contains("mu1") ? parse_measure(w.at("mu1"), base) : uniform_measure(base);
    double weight = w.contains("mu2_weight_t") ? w.at("mu2_weight_t").get<double>() : 0.5;
    spec.wreath = WreathSpec{std::move(base), std::move(rep), std::move(mu1), weight};
  }
  return spec;
}

Json to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

Json to_json(const CVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Json to_json(const Rational& r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

Json to_json(const Cocycle& b, const GroupModel& group) {
  Json out = Json::object();
  for (std::size_t s = 0; s < group.rank(); ++s)
    out[group.generators()[s]] = to_json(CVector(b.values.col(static_cast<Index>(s))));
  return out;
}

Json run_task(std::string_view task, const ProblemSpec& spec, const RunOptions& opts) {
  Context ctx(spec, opts);
  Json out;
  if (task == "z1") out = run_z1(ctx);
  else if (task == "har") out = run_har(ctx);
  else if (task == "project") out = run_project(ctx);
  else if (task == "irreducible") out = run_irreducible(ctx);
  else if (task == "commutant") out = run_commutant(ctx);
  else if (task == "vndim") out = run_vndim(ctx);
  else if (task == "exists") out = run_exists(ctx);
  else if (task == "wreath") out = run_wreath(ctx);
  else if (task == "selftest") out = run_selftest(spec.seed, spec.trials, spec.tol);
  else parse_fail("run", "UnknownTask", std::string(task));
  out["task"] = std::string(task);
  out["seed"] = spec.seed;
  if (task != "selftest") out["residuals"] = ctx.residuals;
  return out;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::GapTooSmall:
    case ErrorKind::Numerical: return 3;
    default: return 2;
  }
}

Json error_report(const Error& e) {
  static const char* kinds[] = {"Parse", "Validation", "Unsupported", "GapTooSmall", "Numerical"};
  return {{"error",
           {{"kind", kinds[static_cast<int>(e.kind())]},
            {"where", e.where()},
            {"code", e.code()},
            {"message", e.what()}}}};
}

}  // namespace harmcoc
