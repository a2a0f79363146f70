#include "isoposet/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>

#include "isoposet/chain.hpp"
#include "isoposet/errors.hpp"
#include "isoposet/finite_rank.hpp"
#include "isoposet/fixtures.hpp"
#include "isoposet/interpolation.hpp"
#include "isoposet/partial_isometry.hpp"

namespace isoposet::cli {

namespace {

struct Context {
  const Args& args;
  Tolerances tol;
  std::uint64_t seed = 0;

  bool has(const std::string& flag) const { return args.count(flag) != 0; }

  const std::string& get(const std::string& flag) const {
    auto it = args.find(flag);
    if (it == args.end()) throw UsageError("missing required flag --" + flag);
    return it->second;
  }

  std::size_t count(const std::string& flag, std::optional<std::size_t> fallback = {}) const {
    if (!has(flag)) {
      if (fallback) return *fallback;
      get(flag);
    }
    const std::string& text = get(flag);
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != text.size() || text.empty() || text[0] == '-') {
      throw UsageError("--" + flag + ": expected a non-negative integer, got '" + text + "'");
    }
    return static_cast<std::size_t>(v);
  }
};

double parse_double(const std::string& flag, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty()) {
    throw UsageError("--" + flag + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_seed(const std::string& source, const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty() || text[0] == '-') {
    throw UsageError(source + ": expected a non-negative integer seed, got '" + text + "'");
  }
  return v;
}

std::vector<PartialIsometry> load_family(const Context& ctx, const std::string& flag,
                                         std::size_t& dim) {
  const MatrixFile file = parse_matrix_file(ctx.get(flag));
  dim = file.dim;
  std::vector<PartialIsometry> out;
  for (std::size_t i = 0; i < file.matrices.size(); ++i) {
    try {
      out.push_back(PartialIsometry::validate(file.matrices[i].value, ctx.tol));
    } catch (const NotAPartialIsometry& e) {
      throw NotAPartialIsometry("--" + flag + " matrix " + std::to_string(i) + ": " + e.what(),
                                e.residual());
    }
  }
  return out;
}

Chain load_chain(const Context& ctx) {
  std::size_t dim = 0;
  const auto family = load_family(ctx, "chain", dim);
  return build_chain(family, dim, ctx.tol);
}

Matrix load_operator(const Context& ctx, std::size_t dim) {
  const MatrixFile file = parse_matrix_file(ctx.get("op"));
  if (file.matrices.empty()) throw UsageError("--op: file holds no matrix");
  if (file.dim != dim) throw DimensionMismatch("--op: dimension does not match the chain");
  return file.matrices.front().value;
}

Json doubles(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Json bound_json(double k) { return std::isfinite(k) ? Json(k) : Json("inf"); }

Json chain_json(const Chain& chain) {
  Json out = Json::array();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    Json e;
    e["index"] = i;
    e["rank"] = chain[i].rank();
    e["matrix"] = matrix_to_json(chain[i].matrix());
    out.push_back(std::move(e));
  }
  return out;
}

Json pi_json(const PartialIsometry& v) {
  Json out;
  out["rank"] = v.rank();
  out["matrix"] = matrix_to_json(v.matrix());
  return out;
}

// --- commands ---------------------------------------------------------------

Status cmd_validate(const Context& ctx, Json& payload) {
  const MatrixFile file = parse_matrix_file(ctx.get("op"));
  bool all = true;
  Json items = Json::array();
  for (const auto& nm : file.matrices) {
    const auto basic = basic_condition_residuals(nm.value, ctx.tol);
    const double residual = partial_isometry_residual(nm.value);
    const bool ok = residual <= ctx.tol.eq;
    all = all && ok;
    Json item;
    item["name"] = nm.name;
    item["is_partial_isometry"] = ok;
    item["residual"] = residual;
    item["basic_conditions"] = doubles({basic.begin(), basic.end()});
    if (ok) item["rank"] = PartialIsometry::validate(nm.value, ctx.tol).rank();
    items.push_back(std::move(item));
  }
  payload["matrices"] = std::move(items);
  return all ? Status::ok : Status::violation;
}

Status cmd_order(const Context& ctx, Json& payload) {
  std::size_t dim = 0;
  const auto family = load_family(ctx, "op", dim);
  Json leq = Json::array();
  for (const auto& e : family) {
    Json row = Json::array();
    for (const auto& f : family) row.push_back(hm_leq(e, f, ctx.tol));
    leq.push_back(std::move(row));
  }
  payload["leq"] = std::move(leq);
  const auto pair = first_incomparable_pair(family, ctx.tol);
  payload["totally_ordered"] = !pair.has_value();
  if (pair) payload["incomparable_pair"] = {pair->first, pair->second};
  return pair ? Status::violation : Status::ok;
}

Status cmd_inf(const Context& ctx, Json& payload) {
  std::size_t dim = 0;
  const auto family = load_family(ctx, "op", dim);
  if (family.empty()) throw UsageError("--op: infimum of an empty family");
  payload["infimum"] = pi_json(infimum(family, ctx.tol));
  return Status::ok;
}

Status cmd_sup(const Context& ctx, Json& payload) {
  std::size_t dim = 0;
  const auto family = load_family(ctx, "op", dim);
  if (family.empty()) throw UsageError("--op: supremum of an empty family");
  std::optional<PartialIsometry> bound;
  if (ctx.has("bound")) {
    std::size_t bdim = 0;
    const auto b = load_family(ctx, "bound", bdim);
    if (b.empty()) throw UsageError("--bound: file holds no matrix");
    if (bdim != dim) throw DimensionMismatch("--bound: dimension does not match --op");
    bound = b.front();
  }
  payload["supremum"] = pi_json(supremum(family, bound, ctx.tol));
  return Status::ok;
}

Status cmd_cover(const Context& ctx, Json& payload) {
  payload["chain"] = chain_json(load_chain(ctx));
  return Status::ok;
}

Status cmd_algebra(const Context& ctx, Json& payload) {
  const Chain chain = load_chain(ctx);
  const AlgebraReport r = algebra_criterion(chain, ctx.tol);
  Json elems = Json::array();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    Json e;
    e["index"] = i;
    e["rank"] = chain[i].rank();
    e["status"] = to_string(r.status[i]);
    e["power_partial_isometry"] = static_cast<bool>(r.ppi[i]);
    elems.push_back(std::move(e));
  }
  payload["is_algebra"] = r.is_algebra;
  payload["is_nest_algebra"] = r.is_nest_algebra;
  payload["ppi_dichotomy"] = r.ppi_dichotomy;
  payload["elements"] = std::move(elems);
  return r.is_algebra ? Status::ok : Status::violation;
}

Status cmd_member(const Context& ctx, Json& payload) {
  const Chain chain = load_chain(ctx);
  const Matrix t = load_operator(ctx, chain.dim());
  const MembershipReport r = membership(t, chain, ctx.tol);
  payload["is_member"] = r.is_member;
  payload["residuals"] = doubles(r.residuals);
  payload["worst_element"] = r.worst_element;
  payload["threshold"] = r.threshold;
  return r.is_member ? Status::ok : Status::violation;
}

Status cmd_counterexample(const Context& ctx, Json& payload) {
  const Chain chain = load_chain(ctx);
  std::size_t element = 0;
  if (ctx.has("element")) {
    element = ctx.count("element");
  } else {
    const AlgebraReport r = algebra_criterion(chain, ctx.tol);
    const auto it = std::find(r.status.begin(), r.status.end(), ElementStatus::violation);
    if (it == r.status.end()) {
      payload["message"] = "every element satisfies the algebra criterion";
      return Status::violation;
    }
    element = static_cast<std::size_t>(it - r.status.begin());
  }
  const Counterexample c = counterexample_xy(chain, element, ctx.tol);
  const Matrix t = c.operator_matrix();
  const auto d = static_cast<Eigen::Index>(chain.dim());
  const Matrix& q = chain[element].final_projection();
  payload["element"] = c.element;
  payload["case"] = to_string(c.which);
  payload["x"] = vector_to_json(c.x);
  payload["y"] = vector_to_json(c.y);
  payload["operator"] = matrix_to_json(t);
  payload["is_member"] = membership(t, chain, ctx.tol).is_member;
  payload["invariance_residual"] = spectral_norm((Matrix::Identity(d, d) - q) * t * q);
  return Status::ok;
}

Status cmd_decompose(const Context& ctx, Json& payload) {
  const Chain chain = load_chain(ctx);
  const Matrix r = load_operator(ctx, chain.dim());
  const Decomposition dec = decompose_finite_rank(r, chain, ctx.tol);
  Json terms = Json::array();
  for (const auto& t : dec.terms) {
    Json j;
    j["e"] = vector_to_json(t.e);
    j["f"] = vector_to_json(t.f);
    j["is_member"] = rank_one_membership(t.e, t.f, chain, ctx.tol);
    terms.push_back(std::move(j));
  }
  Json pivots = Json::array();
  for (std::size_t p : dec.pivots) {
    pivots.push_back(p == static_cast<std::size_t>(-1) ? Json(nullptr) : Json(p));
  }
  payload["rank"] = numerical_rank(r, ctx.tol);
  payload["terms"] = std::move(terms);
  payload["pivots"] = std::move(pivots);
  payload["residual"] = dec.residual;
  return Status::ok;
}

Status cmd_solve(const Context& ctx, Json& payload, bool adjoint) {
  const Chain chain = load_chain(ctx);
  const Vector x = parse_vector(ctx.get("x"), chain.dim());
  const Vector y = parse_vector(ctx.get("y"), chain.dim());
  const BoundData bound = adjoint ? adjoint_bound(x, y, chain, ctx.tol) : chain_bound(x, y, chain, ctx.tol);
  payload["K"] = bound_json(bound.k);
  payload["certificate"] = bound.certificate;
  if (!bound.finite()) {
    payload["message"] = "no operator in the space interpolates; the bound is infinite";
    return Status::violation;
  }
  const InterpolationSolution sol =
      adjoint ? chain_interpolate_adjoint(x, y, chain, ctx.tol) : chain_interpolate(x, y, chain, ctx.tol);
  const Matrix applied = adjoint ? Matrix(sol.t.adjoint()) : sol.t;
  payload["T"] = matrix_to_json(sol.t);
  payload["norm"] = sol.achieved_norm;
  payload["equation_residual"] = (applied * x - y).norm();
  payload["is_member"] = membership(sol.t, chain, ctx.tol).is_member;
  return Status::ok;
}

Status cmd_hw(const Context& ctx, Json& payload) {
  std::size_t dim = 0;
  const auto family = load_family(ctx, "op", dim);
  if (family.empty()) throw UsageError("--op: file holds no matrix");
  const PowerPIReport r = hw_invariants(family.front(), ctx.tol);
  payload["is_power_partial_isometry"] = r.is_ppi;
  payload["horizon"] = r.horizon;
  payload["failure_power"] = r.failure_power ? Json(*r.failure_power) : Json(nullptr);
  payload["rank_sequence"] = r.rank_sequence;
  payload["dim_unitary"] = r.dim_unitary;
  Json mult = Json::object();
  for (const auto& [k, m] : r.shift_multiplicities) mult[std::to_string(k)] = m;
  payload["shift_multiplicities"] = std::move(mult);
  return r.is_ppi ? Status::ok : Status::violation;
}

Status cmd_random(const Context& ctx, Json& payload) {
  const std::string kind = ctx.has("kind") ? ctx.get("kind") : "chain";
  const std::size_t d = ctx.count("dim");
  MatrixFile file;
  file.dim = d;
  if (kind == "pi") {
    const std::size_t r = ctx.count("rank", d);
    file.matrices.push_back({"V", random_partial_isometry(d, r, ctx.seed).matrix()});
  } else if (kind == "chain") {
    const std::size_t n = ctx.count("count", 1);
    const ChainMode mode = parse_chain_mode(ctx.has("mode") ? ctx.get("mode") : "mixed");
    const Chain chain = random_chain(d, n, mode, ctx.seed);
    for (std::size_t i = 1; i < chain.size(); ++i) {
      file.matrices.push_back({"E" + std::to_string(i), chain[i].matrix()});
    }
  } else {
    throw UsageError("--kind: expected 'pi' or 'chain', got '" + kind + "'");
  }
  Json mats = Json::array();
  for (const auto& nm : file.matrices) {
    Json j;
    j["name"] = nm.name;
    j["matrix"] = matrix_to_json(nm.value);
    mats.push_back(std::move(j));
  }
  payload["kind"] = kind;
  payload["dim"] = d;
  payload["matrices"] = std::move(mats);
  if (ctx.has("save")) {
    write_matrix_file(ctx.get("save"), file);
    payload["saved"] = ctx.get("save");
  }
  return Status::ok;
}

using Handler = std::function<Status(const Context&, Json&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"validate", cmd_validate},
      {"order", cmd_order},
      {"inf", cmd_inf},
      {"sup", cmd_sup},
      {"cover", cmd_cover},
      {"algebra", cmd_algebra},
      {"member", cmd_member},
      {"counterexample", cmd_counterexample},
      {"decompose", cmd_decompose},
      {"solve", [](const Context& c, Json& p) { return cmd_solve(c, p, false); }},
      {"solve-adjoint", [](const Context& c, Json& p) { return cmd_solve(c, p, true); }},
      {"hw", cmd_hw},
      {"random", cmd_random},
  };
  return table;
}

const CommandSpec* find_command(const std::string& name) {
  for (const auto& c : commands()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void check_flags(const CommandSpec& spec, const Args& args) {
  for (const auto& [flag, value] : args) {
    const auto named = [&](const FlagSpec& f) { return f.name == flag; };
    if (std::none_of(spec.flags.begin(), spec.flags.end(), named) &&
        std::none_of(common_flags().begin(), common_flags().end(), named)) {
      throw UsageError("unknown flag --" + flag + " for '" + spec.name + "'");
    }
  }
  for (const auto& f : spec.flags) {
    if (f.required && args.count(f.name) == 0) throw UsageError("missing required flag --" + f.name);
  }
}

// Negative answers to well-posed questions; everything else is an error.
bool is_violation(const std::exception& e) {
  return dynamic_cast<const NotTotallyOrdered*>(&e) || dynamic_cast<const NotAnUpperBound*>(&e) ||
         dynamic_cast<const NoUpperBoundProvided*>(&e) || dynamic_cast<const NotAMember*>(&e) ||
         dynamic_cast<const Infeasible*>(&e) || dynamic_cast<const HypothesisViolated*>(&e) ||
         dynamic_cast<const PreconditionViolated*>(&e);
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::violation: return "violation";
    case Status::error: return "error";
  }
  return "error";
}

int exit_code(Status s) {
  switch (s) {
    case Status::ok: return 0;
    case Status::violation: return 1;
    case Status::error: return 2;
  }
  return 2;
}

Json Report::to_json() const {
  Json j;
  j["command"] = command;
  j["status"] = to_string(status);
  j["tool_version"] = kToolVersion;
  j["seed"] = seed;
  j["tolerances"] = {{"rank", tolerances.rank}, {"eq", tolerances.eq}, {"member", tolerances.member}};
  j["payload"] = payload;
  return j;
}

std::string Report::render() const { return to_json().dump(2) + "\n"; }

const std::vector<FlagSpec>& common_flags() {
  static const std::vector<FlagSpec> flags = {
      {"seed", "random seed (ISOPOSET_SEED overrides)"},
      {"output", "write the report here instead of stdout"},
      {"tol-rank", "relative singular-value cutoff (default 1e-10)"},
      {"tol-eq", "relative equality tolerance (default 1e-9)"},
      {"tol-member", "relative membership tolerance (default 1e-9)"},
  };
  return flags;
}

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> table = {
      {"validate", "check that matrices are partial isometries", {{"op", "matrix file", true}}},
      {"order", "pairwise order relations of a family", {{"op", "matrix file", true}}},
      {"inf", "infimum of a family", {{"op", "matrix file", true}}},
      {"sup", "supremum of a family",
       {{"op", "matrix file", true}, {"bound", "matrix file holding an upper bound"}}},
      {"cover", "complete chain generated by a totally ordered family",
       {{"chain", "matrix file of chain elements", true}}},
      {"algebra", "algebra criterion per chain element",
       {{"chain", "matrix file of chain elements", true}}},
      {"member", "membership of an operator in the operator space",
       {{"chain", "matrix file of chain elements", true}, {"op", "matrix file (first matrix)", true}}},
      {"counterexample", "rank-one member outside the nest algebra",
       {{"chain", "matrix file of chain elements", true},
        {"element", "chain index (default: first violating element)"}}},
      {"decompose", "write a member as a sum of rank-one members",
       {{"chain", "matrix file of chain elements", true}, {"op", "matrix file (first matrix)", true}}},
      {"solve", "minimal-norm T in the space with Tx = y",
       {{"chain", "matrix file of chain elements", true},
        {"x", "vector (inline JSON or file)", true},
        {"y", "vector (inline JSON or file)", true}}},
      {"solve-adjoint", "minimal-norm T in the space with T*x = y",
       {{"chain", "matrix file of chain elements", true},
        {"x", "vector (inline JSON or file)", true},
        {"y", "vector (inline JSON or file)", true}}},
      {"hw", "power partial isometry test and invariants", {{"op", "matrix file (first matrix)", true}}},
      {"random", "seeded random fixtures",
       {{"kind", "pi or chain (default chain)"},
        {"dim", "ambient dimension", true},
        {"rank", "rank for kind=pi (default dim)"},
        {"count", "non-zero chain elements (default 1)"},
        {"mode", "nest, violating or mixed (default mixed)"},
        {"save", "also write the matrices as a matrix file"}}},
  };
  return table;
}

Report error_report(const std::string& command, const std::string& message) {
  Report r;
  r.command = command;
  r.status = Status::error;
  r.payload["error"] = message;
  return r;
}

Report run(const std::string& command, const Args& args) {
  Report report;
  report.command = command;
  try {
    const CommandSpec* spec = find_command(command);
    if (spec == nullptr) throw UnknownCommand("unknown command '" + command + "'");
    check_flags(*spec, args);

    Tolerances tol;
    if (auto it = args.find("tol-rank"); it != args.end()) tol.rank = parse_double("tol-rank", it->second);
    if (auto it = args.find("tol-eq"); it != args.end()) tol.eq = parse_double("tol-eq", it->second);
    if (auto it = args.find("tol-member"); it != args.end()) {
      tol.member = parse_double("tol-member", it->second);
    }
    report.tolerances = tol;
    tol.check();

    std::uint64_t seed = 0;
    if (auto it = args.find("seed"); it != args.end()) seed = parse_seed("--seed", it->second);
    if (const char* env = std::getenv("ISOPOSET_SEED"); env != nullptr && *env != '\0') {
      seed = parse_seed("ISOPOSET_SEED", env);
    }
    report.seed = seed;

    const Context ctx{args, tol, seed};
    report.status = handlers().at(command)(ctx, report.payload);
  } catch (const std::exception& e) {
    report.status = is_violation(e) ? Status::violation : Status::error;
    report.payload["error"] = e.what();
    if (const auto* nto = dynamic_cast<const NotTotallyOrdered*>(&e)) {
      report.payload["incomparable_pair"] = {nto->first(), nto->second()};
    }
  }
  return report;
}

int emit(const Report& report, const Args& args) {
  const std::string text = report.render();
  if (auto it = args.find("output"); it != args.end()) {
    std::ofstream out(it->second, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << it->second << "\n";
      return exit_code(Status::error);
    }
    out << text;
  } else {
    std::cout << text;
  }
  return exit_code(report.status);
}

}  // namespace isoposet::cli
