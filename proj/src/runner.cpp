#include "dgcohom/runner.hpp"

#include <chrono>
#include <map>
#include <random>

#include "dgcohom/cech.hpp"
#include "dgcohom/hochschild.hpp"
#include "dgcohom/shamash.hpp"

namespace dgcohom {

using Json = nlohmann::ordered_json;

namespace {

struct Context {
  const JobSpec& job;
  const RunOptions& options;
  std::uint64_t seed;
  std::map<std::string, QRingPtr> rings;

  QRingPtr ring(const std::string& name) {
    auto it = rings.find(name);
    if (it != rings.end()) return it->second;
    const RingSpec& r = job.ring(name);
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < r.vars.size(); ++i) vars.push_back({r.vars[i], 0, r.weights.empty() ? 1 : r.weights[i]});
    auto poly = PolyRing::make(job.field, vars, r.order == "lex" ? MonomialOrder::Lex : MonomialOrder::Grevlex);
    std::vector<Poly> rels;
    for (const auto& s : r.relations) rels.push_back(parse_poly(s, poly));
    auto q = QuotientRing::make(name, poly, rels, r.filtration);
    rings[name] = q;
    return q;
  }

  RingMorphism morphism(const std::string& name) {
    const MorphismSpec& m = job.morphism(name);
    QRingPtr src = ring(m.source), tgt = ring(m.target);
    std::vector<Poly> images;
    for (const auto& s : m.images) images.push_back(tgt->parse(s));
    return RingMorphism(src, tgt, images);
  }

  Bounds bounds(const RingMorphism& f, int n_max) const {
    Bounds b = default_bounds(f, n_max);
    const TaskSpec& t = job.task;
    b.hom_bound = static_cast<int>(t.get_int("hom_bound", b.hom_bound));
    b.internal_bound = static_cast<int>(t.get_int("internal_bound", b.internal_bound));
    return b;
  }

  ModPtr module(const HochschildSetup& setup) {
    const TaskSpec& t = job.task;
    if (!t.has("module")) return std::make_shared<const AlgebraModule>(setup.B);
    const ModuleSpec& m = job.module(t.at("module").as_string());
    QRingPtr r = ring(m.ring);
    std::vector<std::vector<Poly>> rels;
    for (const auto& row : m.relations) {
      std::vector<Poly> v;
      for (const auto& s : row) v.push_back(r->parse(s));
      rels.push_back(std::move(v));
    }
    return std::make_shared<const QuotientModule>(setup.B, m.generators, rels, m.shift);
  }
};

std::string window_flag(bool certified) { return certified ? "interior" : "edge"; }

Json report_json(const HHReport& rep) {
  Json cells = Json::array();
  for (const auto& c : rep.cells)
    if (c.dim != 0)
      cells.push_back({{"degree", c.degree}, {"internal", c.internal}, {"dim", c.dim}, {"window", window_flag(c.certified)}});
  Json totals = Json::array();
  for (int n = 0; n <= rep.n_max; ++n)
    totals.push_back({{"degree", n}, {"dim", rep.total(n)}, {"window", window_flag(rep.certified(n))}});
  Json negative = Json::array();
  for (const auto& c : rep.cells)
    if (c.degree < 0 && c.dim != 0) negative.push_back({{"degree", c.degree}, {"internal", c.internal}, {"dim", c.dim}});
  Json out;
  out["direction"] = rep.direction == HHReport::Direction::Cohomology ? "cohomology" : "homology";
  out["n_max"] = rep.n_max;
  out["totals"] = totals;
  out["cells"] = cells;
  out["negative_degrees_nonzero"] = negative;
  return out;
}

Json matrix_json(const SparseMatrix& m) {
  Json rows = Json::array();
  for (const auto& row : m.to_dense()) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(x.to_string());
    rows.push_back(r);
  }
  return rows;
}

Json poly_matrix_json(const std::vector<std::vector<Poly>>& cols) {
  Json out = Json::array();
  for (const auto& c : cols) {
    Json col = Json::array();
    for (const auto& p : c) col.push_back(p.to_string());
    out.push_back(col);
  }
  return out;
}

/// Cells certified in both reports whose dimensions differ.
Json compare_reports(const HHReport& a, const HHReport& b) {
  std::map<std::pair<int, int>, const HHCell*> index;
  for (const auto& c : b.cells) index[{c.degree, c.internal}] = &c;
  Json mismatches = Json::array();
  for (const auto& c : a.cells) {
    auto it = index.find({c.degree, c.internal});
    if (it == index.end() || !c.certified || !it->second->certified) continue;
    if (c.dim != it->second->dim)
      mismatches.push_back({{"degree", c.degree}, {"internal", c.internal}, {"first", c.dim}, {"second", it->second->dim}});
  }
  return mismatches;
}

Json window_check_hh(Context& ctx, const RingMorphism& f, const HHReport& rep, int n_max, int cap, bool cohomology) {
  Bounds b = ctx.bounds(f, n_max);
  b.hom_bound += 2;
  b.internal_bound += 4;
  auto setup = build_setup(f, b);
  auto M = ctx.module(setup);
  HHReport wide = cohomology ? hh_cohomology(setup, M, n_max, cap) : hh_homology(setup, M, n_max, cap);
  Json mism = compare_reports(rep, wide);
  return {{"hom_bound", b.hom_bound}, {"internal_bound", b.internal_bound}, {"agree", mism.empty()}, {"mismatches", mism}};
}

/// A degree with no certified cell at all is out of reach of the bounds.
void require_reach(const HHReport& rep) {
  for (int n = 0; n <= rep.n_max; ++n) {
    bool any = false;
    for (const auto& c : rep.cells)
      if (c.degree == n && c.certified) any = true;
    if (!any) throw BoundInsufficient("no certified cell in degree " + std::to_string(n) + "; raise hom_bound", n);
  }
}

RunResult task_resolve(Context& ctx) {
  const TaskSpec& t = ctx.job.task;
  RingMorphism f = ctx.morphism(t.at("morphism").as_string());
  Bounds b = ctx.bounds(f, static_cast<int>(t.get_int("n_max", 4)));
  Resolution R = tate_resolve(f, b);
  const DGAlgebra& X = *R.algebra;
  Json gens = Json::array();
  for (std::size_t i = X.ncoeff(); i < X.nvars(); ++i) {
    const Variable& v = X.poly_ring()->var(i);
    gens.push_back({{"name", v.name}, {"hom", v.hom}, {"internal", v.weight}, {"d", X.d_var(i).to_string()}});
  }
  bool acyclic = true;
  Json failures = Json::array();
  for (int q = 0; q <= b.internal_bound; ++q) {
    auto H = cohomology(cone_slice(R.augmentation, q, -b.hom_bound, 1));
    for (const auto& d : H.degrees)
      if (d.dim != 0 && !d.edge && d.degree > -b.hom_bound) {
        acyclic = false;
        failures.push_back({{"degree", d.degree}, {"internal", q}, {"dim", d.dim}});
      }
  }
  Json res;
  res["bounds"] = {{"hom_bound", b.hom_bound}, {"internal_bound", b.internal_bound}};
  res["generators"] = gens;
  res["cone_acyclic_interior"] = acyclic;
  res["cone_failures"] = failures;
  return {res, 0};
}

RunResult task_hh(Context& ctx, bool cohomology) {
  const TaskSpec& t = ctx.job.task;
  RingMorphism f = ctx.morphism(t.at("morphism").as_string());
  int n_max = static_cast<int>(t.get_int("n_max", 4));
  int cap = static_cast<int>(cohomology ? t.get_int("r_cap", 12) : t.get_int("q_cap", 12));
  auto setup = build_setup(f, ctx.bounds(f, n_max));
  auto M = ctx.module(setup);
  HHReport rep = cohomology ? hh_cohomology(setup, M, n_max, cap) : hh_homology(setup, M, n_max, cap);
  require_reach(rep);
  Json res = report_json(rep);
  res["bounds"] = {{"hom_bound", setup.bounds.hom_bound}, {"internal_bound", setup.bounds.internal_bound}};
  res["caveats"] = rep.caveats;
  if (ctx.options.emit_matrices && cohomology) {
    ExtSpace ext(setup.P, over_S(setup, M));
    Json reps = Json::array();
    for (const auto& c : rep.cells) {
      if (c.dim == 0 || c.degree < 0) continue;
      Json vs = Json::array();
      for (const auto& v : ext.classes(c.degree, c.internal).representatives()) vs.push_back(to_string(v));
      reps.push_back({{"degree", c.degree}, {"internal", c.internal}, {"representatives", vs}});
    }
    res["matrices"] = reps;
  }
  if (ctx.options.window_check) res["window_check"] = window_check_hh(ctx, f, rep, n_max, cap, cohomology);
  return {res, 0};
}

RunResult task_yoneda(Context& ctx) {
  const TaskSpec& t = ctx.job.task;
  RingMorphism f = ctx.morphism(t.at("morphism").as_string());
  int n_max = static_cast<int>(t.get_int("n_max", 3));
  int r_cap = static_cast<int>(t.get_int("r_cap", 6));
  auto setup = build_setup(f, ctx.bounds(f, n_max));
  auto Bm = std::make_shared<const AlgebraModule>(setup.B);
  HHReport rep = hh_cohomology(setup, Bm, n_max, r_cap);
  ExtSpace ext(setup.P, setup.B_over_S);
  auto certified = [&](int k, int r) { return hom_certified(setup, *setup.B_over_S, k, r); };

  struct Cell {
    int k, r, dim;
  };
  std::vector<Cell> cells;
  for (const auto& c : rep.cells)
    if (c.degree >= 0 && c.dim > 0 && c.certified) cells.push_back({c.degree, c.internal, c.dim});

  Json table = Json::array();
  bool commutative = true;
  std::map<std::tuple<int, int, int, int, int, int>, SVec> products;
  for (const auto& a : cells)
    for (const auto& b : cells) {
      if (a.k + b.k > n_max || !certified(a.k + b.k, a.r + b.r)) continue;
      for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < b.dim; ++j) {
          SVec p = yoneda_coordinates(setup, ext, a.k, a.r, unit_vector(i), b.k, b.r, unit_vector(j));
          products[{a.k, a.r, i, b.k, b.r, j}] = p;
          table.push_back({{"left", {a.k, a.r, i}}, {"right", {b.k, b.r, j}}, {"product", to_string(p)}});
        }
    }
  for (const auto& [key, p] : products) {
    auto [k1, r1, i, k2, r2, j] = key;
    auto it = products.find({k2, r2, j, k1, r1, i});
    if (it == products.end()) continue;
    if (p != scaled(it->second, (k1 * k2) % 2 ? Scalar(-1) : Scalar(1))) commutative = false;
  }

  std::mt19937_64 rng(ctx.seed);
  int samples = static_cast<int>(t.get_int("samples", 20));
  int checked = 0;
  bool sampled_ok = true;
  auto random_vec = [&](int dim) {
    std::vector<std::pair<int, Scalar>> v;
    for (int i = 0; i < dim; ++i) v.emplace_back(i, Scalar(static_cast<long>(rng() % 7) - 3));
    return make_svec(std::move(v));
  };
  for (int s = 0; s < samples && !cells.empty(); ++s) {
    const Cell& a = cells[rng() % cells.size()];
    const Cell& b = cells[rng() % cells.size()];
    SVec va = random_vec(a.dim), vb = random_vec(b.dim);
    if (a.k + b.k > n_max || !certified(a.k + b.k, a.r + b.r)) continue;
    SVec fg = yoneda_coordinates(setup, ext, a.k, a.r, va, b.k, b.r, vb);
    SVec gf = yoneda_coordinates(setup, ext, b.k, b.r, vb, a.k, a.r, va);
    if (fg != scaled(gf, (a.k * b.k) % 2 ? Scalar(-1) : Scalar(1))) sampled_ok = false;
    ++checked;
  }
  Json res;
  res["classes"] = Json::array();
  for (const auto& c : cells) res["classes"].push_back({{"degree", c.k}, {"internal", c.r}, {"dim", c.dim}});
  res["products"] = table;
  res["graded_commutative"] = commutative;
  res["sampled_pairs"] = checked;
  res["sampled_commutative"] = sampled_ok;
  return {res, 0};
}

RunResult task_shamash(Context& ctx) {
  const TaskSpec& t = ctx.job.task;
  QRingPtr lam = ctx.ring(t.at("ring").as_string());
  HypersurfaceModule M;
  M.ambient = lam;
  M.f = lam->parse(t.at("f").as_string());
  M.f0_degrees = t.at("f0").as_ints();
  M.f1_degrees = t.at("f1").as_ints();
  for (const auto& col : t.at("phi").as_list()) {
    std::vector<Poly> c;
    for (const auto& s : col.as_strings()) c.push_back(lam->parse(s));
    M.phi.push_back(std::move(c));
  }
  int length = static_cast<int>(t.get_int("length", 6));
  PeriodicResolution E = eisenbud_shamash(M, length);
  Json res;
  res["length"] = E.length;
  res["f_degree"] = E.f_degree;
  res["exact"] = E.exact;
  res["betti"] = E.betti();
  Json full = Json::array();
  for (int n = 0; n >= -length; --n) full.push_back(E.full.rank(n));
  res["full_ranks"] = full;
  res["psi"] = poly_matrix_json(E.psi);
  res["failures"] = E.failures;
  if (ctx.options.emit_matrices) {
    Json ds = Json::array();
    for (int n = -length; n < 0; ++n) ds.push_back({{"from", n}, {"columns", poly_matrix_json(E.minimal.d(n))}});
    res["matrices"] = ds;
  }
  if (ctx.options.window_check) {
    PeriodicResolution W = eisenbud_shamash(M, length + 2);
    auto bw = W.betti();
    auto b = E.betti();
    bool agree = W.exact == E.exact && std::equal(b.begin(), b.end(), bw.begin());
    res["window_check"] = {{"length", length + 2}, {"agree", agree}};
  }
  return {res, 0};
}

RunResult task_transversality(Context& ctx) {
  const TaskSpec& t = ctx.job.task;
  RingMorphism f = ctx.morphism(t.at("morphism").as_string());
  int i_max = static_cast<int>(t.get_int("i_max", 3));
  int q_cap = static_cast<int>(t.get_int("q_cap", 12));
  TorTable T = transversality_check(f, i_max, q_cap);
  auto json_of = [&](const TorTable& tt) {
    Json totals = Json::array(), cells = Json::array();
    for (int i = 0; i <= tt.i_max; ++i) totals.push_back({{"degree", i}, {"dim", tt.total(i)}, {"window", "interior"}});
    for (const auto& [key, d] : tt.dims) cells.push_back({{"degree", key.first}, {"internal", key.second}, {"dim", d}});
    return std::make_pair(totals, cells);
  };
  auto [totals, cells] = json_of(T);
  bool transversal = true;
  for (int i = 1; i <= i_max; ++i)
    if (T.total(i) != 0) transversal = false;
  Json res;
  res["i_max"] = i_max;
  res["q_cap"] = q_cap;
  res["tor_totals"] = totals;
  res["tor_cells"] = cells;
  res["transversal"] = transversal;
  if (ctx.options.window_check) {
    TorTable W = transversality_check(f, i_max, q_cap + 4);
    bool agree = true;
    for (const auto& [key, d] : T.dims)
      if (W.dims.count(key) == 0 || W.dims.at(key) != d) agree = false;
    for (const auto& [key, d] : W.dims)
      if (key.second <= q_cap && T.dims.count(key) == 0) agree = false;
    res["window_check"] = {{"q_cap", q_cap + 4}, {"agree", agree}};
  }
  return {res, 0};
}

ChartedSpace space_of(const TaskSpec& t) {
  return t.get_string("space", "P1") == "P1xP1" ? ChartedSpace::projective_line_squared()
                                                : ChartedSpace::projective_line();
}

RunResult task_cech(Context& ctx) {
  const TaskSpec& t = ctx.job.task;
  ChartedSpace X = space_of(t);
  int window = static_cast<int>(t.get_int("laurent_window", 6));
  std::vector<std::pair<std::string, std::vector<std::vector<int>>>> bundles;
  if (t.has("frames")) {
    for (const auto& fr : t.at("frames").as_list()) {
      std::vector<std::vector<int>> frames;
      for (const auto& v : fr.as_list()) {
        auto s = v.as_ints();
        if (static_cast<int>(s.size()) != X.rank()) throw ParseError("frame has the wrong rank", v.line, v.column);
        frames.push_back(s);
      }
      if (frames.size() != X.charts().size()) throw ParseError("one frame per chart required", fr.line, fr.column);
      bundles.emplace_back("frames", frames);
    }
  } else {
    if (X.rank() != 1) throw ParseError("twists need the projective line; use frames", t.line, 1);
    for (int n : t.has("twists") ? t.at("twists").as_ints() : std::vector<int>{-4, -3, -2, -1, 0, 1, 2, 3, 4})
      bundles.emplace_back("O(" + std::to_string(n) + ")", ChartedSpace::twist(n));
  }
  Json table = Json::array();
  for (const auto& [name, frames] : bundles) {
    if (!X.frames_compatible(frames)) throw StructuralError("frames of " + name + " disagree on an overlap");
    auto H = line_bundle_cohomology(X, frames, window);
    Json row{{"bundle", name}, {"frames", frames}, {"h", H.h}, {"window", window_flag(H.stable)}};
    if (ctx.options.emit_matrices) {
      BoundedComplex C = cech_complex(X.line_bundle(frames, window));
      Json ds = Json::array();
      for (int n = C.n_min(); n < C.n_max(); ++n) ds.push_back(matrix_json(C.d(n)));
      row["matrices"] = ds;
    }
    table.push_back(row);
  }
  Json res;
  res["space"] = t.get_string("space", "P1");
  res["laurent_window"] = window;
  res["stability_window"] = window + 2;
  res["bundles"] = table;
  return {res, 0};
}

RunResult task_glued(Context& ctx) {
  const TaskSpec& t = ctx.job.task;
  int n_max = static_cast<int>(t.get_int("n_max", 2));
  Json res;
  if (t.has("charts")) {
    std::vector<RingMorphism> charts;
    for (const auto& c : t.at("charts").as_strings()) charts.push_back(ctx.morphism(c));
    HHReport rep = glued_hochschild(charts, n_max, static_cast<int>(t.get_int("r_cap", 12)));
    res = report_json(rep);
    res["charts"] = charts.size();
    res["caveats"] = rep.caveats;
    return {res, 0};
  }
  ChartedSpace X = space_of(t);
  int window = static_cast<int>(t.get_int("laurent_window", 4));
  GluedReport G = glued_hochschild(X, n_max, window, ctx.job.field);
  res = report_json(G.report);
  res["space"] = t.get_string("space", "P1");
  res["polyvector_table"] = G.table;
  res["charts_verified"] = G.charts_verified;
  res["transitions_quasiiso"] = G.transitions_quasiiso;
  res["stable"] = G.stable;
  res["caveats"] = G.report.caveats;
  return {res, 0};
}

RunResult task_bar_compare(Context& ctx) {
  const TaskSpec& t = ctx.job.task;
  RingMorphism f = ctx.morphism(t.at("morphism").as_string());
  if (f.source()->nvars() != 0) throw StructuralError("the bar oracle needs the ground field as base");
  int n_max = static_cast<int>(t.get_int("n_max", 4));
  auto setup = build_setup(f, ctx.bounds(f, n_max));
  auto Bm = std::make_shared<const AlgebraModule>(setup.B);
  HHReport co = hh_cohomology(setup, Bm, n_max, static_cast<int>(t.get_int("r_cap", 12)));
  HHReport ho = hh_homology(setup, Bm, n_max, static_cast<int>(t.get_int("q_cap", 12)));
  require_reach(co);
  require_reach(ho);
  HHReport oco = bar_oracle_cohomology(setup.B, n_max);
  HHReport oho = bar_oracle_homology(setup.B, n_max);

  auto compare = [](const HHReport& engine, const HHReport& oracle) {
    std::map<std::pair<int, int>, int> od;
    for (const auto& c : oracle.cells) od[{c.degree, c.internal}] = c.dim;
    Json mism = Json::array();
    for (const auto& c : engine.cells) {
      if (c.degree < 0 || !c.certified) continue;
      auto it = od.find({c.degree, c.internal});
      int o = it == od.end() ? 0 : it->second;
      if (o != c.dim) mism.push_back({{"degree", c.degree}, {"internal", c.internal}, {"engine", c.dim}, {"oracle", o}});
    }
    std::map<std::pair<int, int>, const HHCell*> ed;
    for (const auto& c : engine.cells) ed[{c.degree, c.internal}] = &c;
    for (const auto& [key, o] : od) {
      if (o == 0 || ed.count(key)) continue;
      mism.push_back({{"degree", key.first}, {"internal", key.second}, {"engine", nullptr}, {"oracle", o}});
    }
    Json rows = Json::array();
    for (int n = 0; n <= engine.n_max; ++n)
      rows.push_back({{"degree", n}, {"engine", engine.total(n)}, {"oracle", oracle.total(n)},
                      {"window", window_flag(engine.certified(n))}});
    return std::make_pair(rows, mism);
  };
  auto [crow, cm] = compare(co, oco);
  auto [hrow, hm] = compare(ho, oho);
  bool agree = cm.empty() && hm.empty();
  Json res;
  res["cohomology"] = crow;
  res["homology"] = hrow;
  res["mismatches"] = {{"cohomology", cm}, {"homology", hm}};
  res["agree"] = agree;
  return {res, agree ? 0 : 1};
}

Json job_echo(const JobSpec& job, std::uint64_t seed) {
  Json rings = Json::array();
  for (const auto& r : job.rings)
    rings.push_back({{"name", r.name}, {"vars", r.vars}, {"weights", r.weights}, {"relations", r.relations},
                     {"order", r.order}, {"filtration", r.filtration}});
  Json morphisms = Json::array();
  for (const auto& m : job.morphisms)
    morphisms.push_back({{"name", m.name}, {"source", m.source}, {"target", m.target}, {"images", m.images}});
  Json modules = Json::array();
  for (const auto& m : job.modules)
    modules.push_back({{"name", m.name}, {"ring", m.ring}, {"generators", m.generators}, {"relations", m.relations},
                       {"shift", m.shift}});
  Json params = Json::object();
  std::function<Json(const JobValue&)> value = [&](const JobValue& v) -> Json {
    if (v.is_int()) return v.as_int();
    if (v.is_bool()) return v.as_bool();
    if (v.is_string()) return v.as_string();
    Json l = Json::array();
    for (const auto& x : v.as_list()) l.push_back(value(x));
    return l;
  };
  for (const auto& [k, v] : job.task.params) params[k] = value(v);
  return {{"field", job.field_text}, {"seed", seed},       {"rings", rings},
          {"morphisms", morphisms},  {"modules", modules}, {"task", {{"kind", job.task.kind}, {"params", params}}}};
}

}  // namespace

RunResult run_job(const JobSpec& job, const RunOptions& options) {
  auto start = std::chrono::steady_clock::now();
  std::uint64_t seed = options.seed.value_or(job.seed);
  Context ctx{job, options, seed, {}};
  const std::string& k = job.task.kind;
  RunResult r;
  if (k == "resolve") r = task_resolve(ctx);
  else if (k == "hochschild-cohomology") r = task_hh(ctx, true);
  else if (k == "hochschild-homology") r = task_hh(ctx, false);
  else if (k == "yoneda-table") r = task_yoneda(ctx);
  else if (k == "eisenbud-shamash") r = task_shamash(ctx);
  else if (k == "transversality") r = task_transversality(ctx);
  else if (k == "cech") r = task_cech(ctx);
  else if (k == "glued-hochschild") r = task_glued(ctx);
  else if (k == "bar-oracle-compare") r = task_bar_compare(ctx);
  else throw StructuralError("unknown task kind " + k);

  const Json& res = r.document;
  bool disagree = (res.contains("agree") && !res["agree"].get<bool>()) ||
                  (res.contains("window_check") && !res["window_check"]["agree"].get<bool>());
  if (disagree) r.exit_code = 1;

  Json doc;
  doc["format"] = kResultFormat;
  doc["job"] = job_echo(job, seed);
  doc["result"] = r.document;
  if (options.timing)
    doc["timing_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.document = doc;
  return r;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return 2;
  if (dynamic_cast<const BoundInsufficient*>(&e)) return 3;
  if (dynamic_cast<const CharacteristicGuard*>(&e)) return 4;
  if (dynamic_cast<const StructuralError*>(&e)) return 2;
  return 1;
}

}  // namespace dgcohom
