#include "qqw/config_io.hpp"

#include "qqw/freehopf.hpp"

#include <fstream>

namespace qqw {

namespace {

const json& require(const json& j, const std::string& key, const std::string& path) {
  check(j.is_object(), Errc::ConfigError, path + " must be an object");
  auto it = j.find(key);
  check(it != j.end(), Errc::ConfigError, path + ": missing key \"" + key + "\"");
  return *it;
}

std::string scalar_string(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(Errc::ConfigError, path + " must be a scalar string or integer");
}

FieldScalar parse_scalar(const json& j, const QContext& ctx, const std::string& path) {
  try {
    return ctx.parse(scalar_string(j, path));
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigError && j.is_string())
      fail(Errc::ConfigError, path + ": " + e.what());
    throw;
  }
}

unsigned parse_unsigned(const json& j, const std::string& path) {
  check(j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0),
        Errc::ConfigError, path + " must be a nonnegative integer");
  return static_cast<unsigned>(j.get<unsigned long long>());
}

long parse_long(const json& j, const std::string& path) {
  check(j.is_number_integer(), Errc::ConfigError, path + " must be an integer");
  return static_cast<long>(j.get<long long>());
}

}  // namespace

QContext parse_context(const json& root) {
  const json& f = require(root, "field", "$");
  std::string kind = require(f, "kind", "$.field").get<std::string>();
  const json& q = require(root, "q", "$");
  if (kind == "rational") {
    mpz_class num, den(1);
    std::string s = scalar_string(q, "$.q");
    std::string numstr = s, denstr = "1";
    if (auto slash = s.find('/'); slash != std::string::npos) {
      numstr = s.substr(0, slash);
      denstr = s.substr(slash + 1);
    }
    check(num.set_str(numstr, 10) == 0 && den.set_str(denstr, 10) == 0 && den != 0,
          Errc::ConfigError, "$.q: bad rational '" + s + "'");
    return QContext::rational(mpq_class(num, den));
  }
  if (kind == "prime") {
    std::uint64_t p = parse_unsigned(require(f, "p", "$.field"), "$.field.p");
    std::string s = scalar_string(q, "$.q");
    mpz_class qz;
    check(qz.set_str(s, 10) == 0, Errc::ConfigError, "$.q: bad integer '" + s + "'");
    mpz_class r = qz % mpz_class(static_cast<unsigned long>(p));
    if (r < 0) r += mpz_class(static_cast<unsigned long>(p));
    return make_prime_field_context(p, r.get_ui());
  }
  fail(Errc::ConfigError, "$.field.kind must be \"rational\" or \"prime\"");
}

Quiver parse_quiver(const json& j, const std::string& path) {
  Quiver q;
  const json& vs = require(j, "vertices", path);
  check(vs.is_array(), Errc::ConfigError, path + ".vertices must be an array");
  for (const auto& v : vs) q.vertices.push_back(static_cast<int>(parse_long(v, path + ".vertices[]")));
  const json& as = require(j, "arrows", path);
  check(as.is_array(), Errc::ConfigError, path + ".arrows must be an array");
  for (std::size_t i = 0; i < as.size(); ++i) {
    const std::string p = path + ".arrows[" + std::to_string(i) + "]";
    q.arrows.push_back({static_cast<int>(parse_long(require(as[i], "id", p), p + ".id")),
                        static_cast<int>(parse_long(require(as[i], "s", p), p + ".s")),
                        static_cast<int>(parse_long(require(as[i], "t", p), p + ".t"))});
  }
  q.validate();
  return q;
}

Matrix parse_matrix(const json& j, std::size_t rows, std::size_t cols, const QContext& ctx,
                    const std::string& path) {
  check(j.is_array(), Errc::ConfigError, path + " must be a row-major array");
  check(j.size() == rows * cols, Errc::ConfigError,
        path + " must have " + std::to_string(rows * cols) + " entries, got " +
            std::to_string(j.size()));
  Matrix m(rows, cols, ctx.field());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c)
      m.at(i, c) = parse_scalar(j[i * cols + c], ctx,
                                path + "[" + std::to_string(i * cols + c) + "]");
  return m;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j2 = 0; j2 < m.cols(); ++j2) out.push_back(m.at(i, j2).to_string());
  return out;
}

namespace {

std::vector<std::size_t> parse_perm(const json& j, const Quiver& q, const std::string& path) {
  check(j.is_array() && j.size() == q.vertices.size(), Errc::ConfigError,
        path + " must list the image of every vertex");
  std::vector<std::size_t> perm;
  for (std::size_t i = 0; i < j.size(); ++i)
    perm.push_back(q.vertex_index(static_cast<int>(
        parse_long(j[i], path + "[" + std::to_string(i) + "]"))));
  return perm;
}

std::vector<FieldScalar> parse_gamma_map(const json& j, const Quiver& q, const QContext& ctx,
                                         const std::string& path) {
  check(j.is_object(), Errc::ConfigError, path + " must map vertex ids to scalars");
  std::vector<FieldScalar> gamma(q.vertices.size(), ctx.zero());
  for (const auto& [key, value] : j.items()) {
    int id = 0;
    try {
      id = std::stoi(key);
    } catch (...) {
      fail(Errc::ConfigError, path + ": bad vertex id \"" + key + "\"");
    }
    gamma[q.vertex_index(id)] = parse_scalar(value, ctx, path + "." + key);
  }
  return gamma;
}

}  // namespace

std::pair<UqbVertexData, UqbArrowData> parse_uqb_action(const json& j, const Quiver& q,
                                                        const QContext& ctx,
                                                        const std::string& path) {
  UqbVertexData vd;
  vd.perm = parse_perm(require(j, "g_perm", path), q, path + ".g_perm");
  vd.gamma = parse_gamma_map(require(j, "gamma", path), q, ctx, path + ".gamma");
  UqbArrowData ad;
  std::size_t na = q.arrows.size();
  ad.g1 = parse_matrix(require(j, "g_on_arrows", path), na, na, ctx, path + ".g_on_arrows");
  ad.sigma = GradedLinearMap{
      1, 1, parse_matrix(require(j, "sigma", path), na, na, ctx, path + ".sigma")};
  return {std::move(vd), std::move(ad)};
}

UqslActionData parse_uqsl_action(const json& j, const Quiver& q, const QContext& ctx,
                                 const std::string& path) {
  UqslActionData data;
  data.perm = parse_perm(require(j, "g_perm", path), q, path + ".g_perm");
  data.gammaE = parse_gamma_map(require(j, "gammaE", path), q, ctx, path + ".gammaE");
  data.gammaF = parse_gamma_map(require(j, "gammaF", path), q, ctx, path + ".gammaF");
  std::size_t na = q.arrows.size();
  data.k1 = parse_matrix(require(j, "g_on_arrows", path), na, na, ctx, path + ".g_on_arrows");
  data.sigmaE = GradedLinearMap{
      1, 1, parse_matrix(require(j, "sigmaE", path), na, na, ctx, path + ".sigmaE")};
  data.sigmaF = GradedLinearMap{
      1, 1, parse_matrix(require(j, "sigmaF", path), na, na, ctx, path + ".sigmaF")};
  return data;
}

GammaRep parse_gamma_rep(const json& j, const QContext& ctx, const std::string& path) {
  GammaRep w;
  std::string mode = require(j, "mode", path).get<std::string>();
  check(mode == "borel" || mode == "sl2", Errc::ConfigError,
        path + ".mode must be \"borel\" or \"sl2\"");
  w.primed = mode == "sl2";
  const json& vs = require(j, "vertices", path);
  check(vs.is_array(), Errc::ConfigError, path + ".vertices must be an array");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string p = path + ".vertices[" + std::to_string(i) + "]";
    GammaVertex v;
    v.coset = parse_scalar(require(vs[i], "coset", p), ctx, p + ".coset");
    v.s = parse_long(require(vs[i], "s", p), p + ".s");
    v.k = parse_long(require(vs[i], "k", p), p + ".k");
    w.vertices.push_back(v);
    w.dims.push_back(parse_unsigned(require(vs[i], "dim", p), p + ".dim"));
  }
  auto parse_maps = [&](const char* key, std::vector<Matrix>& out) {
    const json& arr = require(j, key, path);
    check(arr.is_array() && arr.size() == w.vertices.size(), Errc::ConfigError,
          path + "." + key + " must have one matrix per vertex");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = path + "." + key + "[" + std::to_string(i) + "]";
      check(arr[i].is_array(), Errc::ConfigError, p + " must be a row-major array");
      std::size_t cols = w.dims[i];
      std::size_t rows = cols == 0 ? 0 : arr[i].size() / cols;
      check(cols == 0 ? arr[i].empty() : rows * cols == arr[i].size(), Errc::ConfigError,
            p + ": entry count must be a multiple of the vertex dimension");
      out.push_back(parse_matrix(arr[i], rows, cols, ctx, p));
    }
  };
  parse_maps("A", w.A);
  parse_maps("B", w.B);
  if (w.primed) parse_maps("C", w.C);
  for (std::size_t i = 0; i < w.vertices.size(); ++i)
    check(w.B[i].rows() == w.dims[i], Errc::ConfigError,
          path + ".B[" + std::to_string(i) + "] must be square of the vertex dimension");
  return w;
}

json gamma_rep_to_json(const GammaRep& w) {
  json out;
  out["mode"] = w.primed ? "sl2" : "borel";
  out["vertices"] = json::array();
  for (std::size_t i = 0; i < w.vertices.size(); ++i)
    out["vertices"].push_back({{"coset", w.vertices[i].coset.to_string()},
                               {"s", w.vertices[i].s},
                               {"k", w.vertices[i].k},
                               {"dim", w.dims[i]}});
  auto dump_maps = [&](const char* key, const std::vector<Matrix>& maps) {
    json arr = json::array();
    for (const Matrix& m : maps) arr.push_back(matrix_to_json(m));
    out[key] = std::move(arr);
  };
  dump_maps("A", w.A);
  dump_maps("B", w.B);
  if (w.primed) dump_maps("C", w.C);
  return out;
}

BimoduleInC parse_bimodule(const json& j, const QContext& ctx, const std::string& path) {
  BimoduleInC v;
  std::string mode = j.contains("mode") ? j["mode"].get<std::string>() : "borel";
  v.sl2 = mode == "sl2";
  v.m = parse_unsigned(require(j, "m", path), path + ".m");
  v.mprime = parse_unsigned(require(j, "mprime", path), path + ".mprime");
  check(v.m >= 1 && v.mprime >= 1, Errc::ConfigError, path + ": m, mprime must be positive");
  const json& bd = require(j, "block_dims", path);
  check(bd.is_array() && bd.size() == v.m, Errc::ConfigError,
        path + ".block_dims must have m rows");
  v.block_dims.assign(v.m, std::vector<unsigned>(v.mprime, 0));
  for (unsigned i = 0; i < v.m; ++i) {
    check(bd[i].is_array() && bd[i].size() == v.mprime, Errc::ConfigError,
          path + ".block_dims rows must have mprime entries");
    for (unsigned j2 = 0; j2 < v.mprime; ++j2)
      v.block_dims[i][j2] = parse_unsigned(bd[i][j2], path + ".block_dims[][]");
  }
  std::size_t n = v.dim();
  v.g = parse_matrix(require(j, "g_on_arrows", path), n, n, ctx, path + ".g_on_arrows");

  // gamma maps over the joint vertex set 0..m-1, m..m+mprime-1, as in the
  // action-data config; only the base values at 0 and m are retained
  Quiver joint;
  for (unsigned i = 0; i < v.m + v.mprime; ++i) joint.vertices.push_back(static_cast<int>(i));
  v.gamma0 = ctx.zero();
  v.gamma0p = ctx.zero();
  v.gammaE0 = ctx.zero();
  v.gammaE0p = ctx.zero();
  v.gammaF0 = ctx.zero();
  v.gammaF0p = ctx.zero();
  if (!v.sl2) {
    auto gamma = parse_gamma_map(require(j, "gamma", path), joint, ctx, path + ".gamma");
    v.gamma0 = gamma[0];
    v.gamma0p = gamma[v.m];
    v.sigma = parse_matrix(require(j, "sigma", path), n, n, ctx, path + ".sigma");
  } else {
    auto ge = parse_gamma_map(require(j, "gammaE", path), joint, ctx, path + ".gammaE");
    auto gf = parse_gamma_map(require(j, "gammaF", path), joint, ctx, path + ".gammaF");
    v.gammaE0 = ge[0];
    v.gammaE0p = ge[v.m];
    v.gammaF0 = gf[0];
    v.gammaF0p = gf[v.m];
    v.sigmaE = parse_matrix(require(j, "sigmaE", path), n, n, ctx, path + ".sigmaE");
    v.sigmaF = parse_matrix(require(j, "sigmaF", path), n, n, ctx, path + ".sigmaF");
  }
  return v;
}

json bimodule_to_json(const BimoduleInC& v, const QContext& ctx) {
  json out;
  out["mode"] = v.sl2 ? "sl2" : "borel";
  out["m"] = v.m;
  out["mprime"] = v.mprime;
  json bd = json::array();
  for (unsigned i = 0; i < v.m; ++i) {
    json row = json::array();
    for (unsigned j2 = 0; j2 < v.mprime; ++j2) row.push_back(v.block_dims[i][j2]);
    bd.push_back(std::move(row));
  }
  out["block_dims"] = std::move(bd);
  out["g_on_arrows"] = matrix_to_json(v.g);
  auto gamma_map = [&](const FieldScalar& base, const FieldScalar& basep, long power) {
    json g = json::object();
    for (unsigned i = 0; i < v.m; ++i)
      g[std::to_string(i)] = (ctx.q_pow(power * static_cast<long>(i)) * base).to_string();
    for (unsigned j2 = 0; j2 < v.mprime; ++j2)
      g[std::to_string(v.m + j2)] =
          (ctx.q_pow(power * static_cast<long>(j2)) * basep).to_string();
    return g;
  };
  if (!v.sl2) {
    out["gamma"] = gamma_map(v.gamma0, v.gamma0p, -1);
    out["sigma"] = matrix_to_json(v.sigma);
  } else {
    out["gammaE"] = gamma_map(v.gammaE0, v.gammaE0p, -2);
    out["gammaF"] = gamma_map(v.gammaF0, v.gammaF0p, 2);
    out["sigmaE"] = matrix_to_json(v.sigmaE);
    out["sigmaF"] = matrix_to_json(v.sigmaF);
  }
  return out;
}

namespace {

json failures_to_json(const VerifyReport& rep) {
  json arr = json::array();
  for (const auto& f : rep.failures) {
    json e;
    e["check"] = f.check;
    if (f.p) e["p"] = {{"len", f.p->len}, {"idx", f.p->idx}};
    if (f.r) e["r"] = {{"len", f.r->len}, {"idx", f.r->idx}};
    e["witness"] = f.witness;
    arr.push_back(std::move(e));
  }
  return arr;
}

json conditions_to_json(const FactorizationReport& rep) {
  json arr = json::array();
  for (const auto& [name, ok] : rep.conditions) arr.push_back({{"condition", name}, {"pass", ok}});
  return arr;
}

struct AlgebraSel {
  std::string kind;
  unsigned r = 0, n = 0;
};

AlgebraSel parse_algebra(const json& config) {
  AlgebraSel sel;
  const json& a = require(config, "algebra", "$");
  sel.kind = require(a, "kind", "$.algebra").get<std::string>();
  check(sel.kind == "uqb" || sel.kind == "taft" || sel.kind == "uqsl2" || sel.kind == "uq_sl2",
        Errc::ConfigError, "$.algebra.kind must be uqb | taft | uqsl2 | uq_sl2");
  if (sel.kind == "taft") {
    sel.r = parse_unsigned(require(a, "r", "$.algebra"), "$.algebra.r");
    sel.n = parse_unsigned(require(a, "n", "$.algebra"), "$.algebra.n");
  }
  if (sel.kind == "uq_sl2") sel.n = parse_unsigned(require(a, "n", "$.algebra"), "$.algebra.n");
  return sel;
}

unsigned truncation_bound(const json& config) {
  return config.contains("L") ? parse_unsigned(config["L"], "$.L") : 4;
}

CommandResult cmd_verify_action(const json& config, unsigned threads) {
  QContext ctx = parse_context(config);
  AlgebraSel sel = parse_algebra(config);
  Quiver q = parse_quiver(require(config, "quiver", "$"), "$.quiver");
  auto alg = std::make_shared<TruncatedPathAlgebra>(q, truncation_bound(config), ctx.field());
  const json& action = require(config, "action", "$");
  VerifyReport rep;
  if (sel.kind == "uqb" || sel.kind == "taft") {
    if (sel.kind == "taft") HopfAlgebra::taft(ctx, sel.r, sel.n);  // validates |q| = r, r | n
    auto [vd, ad] = parse_uqb_action(action, q, ctx, "$.action");
    UqbAction act = build_uqb_action(vd, ad, std::move(alg), ctx);
    rep = verify_hopf_action(act, threads);
  } else {
    if (sel.kind == "uq_sl2") HopfAlgebra::uq_sl2(ctx, sel.n);
    UqslActionData data = parse_uqsl_action(action, q, ctx, "$.action");
    UqslAction act = build_uqsl_action(data, std::move(alg), ctx);
    rep = verify_uqsl_action(act, threads);
  }
  CommandResult res;
  res.exit_code = rep.pass ? 0 : 1;
  res.report["pass"] = rep.pass;
  res.report["failures"] = failures_to_json(rep);
  return res;
}

CommandResult cmd_check_factorization(const json& config, unsigned threads) {
  (void)threads;
  QContext ctx = parse_context(config);
  AlgebraSel sel = parse_algebra(config);
  Quiver q = parse_quiver(require(config, "quiver", "$"), "$.quiver");
  auto alg = std::make_shared<TruncatedPathAlgebra>(q, truncation_bound(config), ctx.field());
  const json& action = require(config, "action", "$");
  FactorizationReport rep;
  if (sel.kind == "taft") {
    auto [vd, ad] = parse_uqb_action(action, q, ctx, "$.action");
    UqbAction act = build_uqb_action(vd, ad, std::move(alg), ctx);
    rep = check_taft_factorization(act, sel.r, sel.n);
  } else if (sel.kind == "uq_sl2") {
    UqslActionData data = parse_uqsl_action(action, q, ctx, "$.action");
    UqslAction act = build_uqsl_action(data, std::move(alg), ctx);
    rep = check_uqsl_factorization(act, sel.n);
  } else {
    fail(Errc::ConfigError, "check-factorization needs algebra kind taft or uq_sl2");
  }
  CommandResult res;
  res.exit_code = rep.factors ? 0 : 1;
  res.report["factors"] = rep.factors;
  res.report["oracle"] = rep.oracle;
  res.report["conditions"] = conditions_to_json(rep);
  return res;
}

std::pair<unsigned, unsigned> parse_mm(const json& config) {
  return {parse_unsigned(require(config, "m", "$"), "$.m"),
          parse_unsigned(require(config, "mprime", "$"), "$.mprime")};
}

CommandResult cmd_phi(const json& config) {
  QContext ctx = parse_context(config);
  BimoduleInC v = parse_bimodule(require(config, "bimodule", "$"), ctx, "$.bimodule");
  GammaRep w;
  if (v.sl2) {
    w = phi_prime(v, ctx);
  } else {
    BimodContext bc(ctx, v.m, v.mprime);
    w = phi(v, bc);
  }
  CommandResult res;
  res.report["pass"] = true;
  res.report["output"] = gamma_rep_to_json(w);
  return res;
}

CommandResult cmd_psi(const json& config) {
  QContext ctx = parse_context(config);
  auto [m, mprime] = parse_mm(config);
  GammaRep w = parse_gamma_rep(require(config, "gammarep", "$"), ctx, "$.gammarep");
  const json& scalars = require(config, "scalars", "$");
  BimoduleInC v;
  if (w.primed) {
    v = psi_prime(w, ctx, m, mprime,
                  parse_scalar(require(scalars, "gammaE0", "$.scalars"), ctx, "$.scalars.gammaE0"),
                  parse_scalar(require(scalars, "gammaE0prime", "$.scalars"), ctx,
                               "$.scalars.gammaE0prime"),
                  parse_scalar(require(scalars, "gammaF0", "$.scalars"), ctx, "$.scalars.gammaF0"),
                  parse_scalar(require(scalars, "gammaF0prime", "$.scalars"), ctx,
                               "$.scalars.gammaF0prime"));
  } else {
    BimodContext bc(ctx, m, mprime);
    v = psi(w, bc,
            parse_scalar(require(scalars, "gamma0", "$.scalars"), ctx, "$.scalars.gamma0"),
            parse_scalar(require(scalars, "gamma0prime", "$.scalars"), ctx,
                         "$.scalars.gamma0prime"));
  }
  CommandResult res;
  res.report["pass"] = true;
  res.report["output"] = bimodule_to_json(v, ctx);
  return res;
}

CommandResult cmd_roundtrip(const json& config) {
  QContext ctx = parse_context(config);
  RoundTripReport rep;
  if (config.contains("gammarep")) {
    auto [m, mprime] = parse_mm(config);
    GammaRep w = parse_gamma_rep(config["gammarep"], ctx, "$.gammarep");
    const json& scalars = require(config, "scalars", "$");
    if (w.primed) {
      rep = verify_round_trip_rep_prime(
          w, ctx, m, mprime,
          parse_scalar(require(scalars, "gammaE0", "$.scalars"), ctx, "$.scalars.gammaE0"),
          parse_scalar(require(scalars, "gammaE0prime", "$.scalars"), ctx,
                       "$.scalars.gammaE0prime"),
          parse_scalar(require(scalars, "gammaF0", "$.scalars"), ctx, "$.scalars.gammaF0"),
          parse_scalar(require(scalars, "gammaF0prime", "$.scalars"), ctx,
                       "$.scalars.gammaF0prime"));
    } else {
      BimodContext bc(ctx, m, mprime);
      rep = verify_round_trip_rep(
          w, bc, parse_scalar(require(scalars, "gamma0", "$.scalars"), ctx, "$.scalars.gamma0"),
          parse_scalar(require(scalars, "gamma0prime", "$.scalars"), ctx,
                       "$.scalars.gamma0prime"));
    }
  } else if (config.contains("bimodule")) {
    BimoduleInC v = parse_bimodule(config["bimodule"], ctx, "$.bimodule");
    check(!v.sl2, Errc::ConfigError, "bimodule round trips are checked in borel mode");
    BimodContext bc(ctx, v.m, v.mprime);
    rep = verify_round_trip_bimodule(v, bc);
  } else {
    fail(Errc::ConfigError, "roundtrip needs a \"gammarep\" or \"bimodule\" payload");
  }
  CommandResult res;
  res.exit_code = rep.pass ? 0 : 1;
  res.report["pass"] = rep.pass;
  res.report["failures"] = rep.failures;
  return res;
}

CommandResult cmd_coproduct_check(const json& config) {
  QContext ctx = parse_context(config);
  unsigned lmax = config.contains("l_max") ? parse_unsigned(config["l_max"], "$.l_max") : 3;
  unsigned kmax = config.contains("k_max") ? parse_unsigned(config["k_max"], "$.k_max") : 3;
  HopfAlgebra uqb = HopfAlgebra::uqb(ctx);
  HopfAlgebra uqsl = HopfAlgebra::uqsl(ctx);
  bool pass = true;
  json details = json::array();
  for (unsigned l = 1; l <= lmax; ++l) {
    for (unsigned k = 1; k <= kmax; ++k) {
      bool okb = uqb.skew_power_closed_form(l, k) == uqb.coproduct_power(l, uqb.x_power(k));
      bool oks = uqsl.skew_power_closed_form(l, k) == uqsl.coproduct_power(l, uqsl.x_power(k));
      pass = pass && okb && oks;
      details.push_back({{"l", l}, {"k", k}, {"xg_pair", okb}, {"EK_pair", oks}});
    }
  }
  CommandResult res;
  res.exit_code = pass ? 0 : 1;
  res.report["pass"] = pass;
  res.report["cases"] = std::move(details);
  return res;
}

CommandResult cmd_classify_eo(const json& config) {
  QContext ctx = parse_context(config);
  unsigned n = parse_unsigned(require(config, "n", "$"), "$.n");
  Quiver q = parse_quiver(require(config, "quiver", "$"), "$.quiver");
  check(q.arrows.empty(), Errc::ConfigError, "classify-eo expects a vertex-only quiver");
  const json& action = require(config, "action", "$");
  UqbVertexData vd;
  vd.perm = parse_perm(require(action, "g_perm", "$.action"), q, "$.action.g_perm");
  vd.gamma = parse_gamma_map(require(action, "gamma", "$.action"), q, ctx, "$.action.gamma");
  EOLabel label = classify_etingof_ostrik(vd, n, ctx);
  CommandResult res;
  res.report["pass"] = true;
  res.report["label"] = label.to_string();
  res.report["n"] = label.algebra_n;
  if (label.lambda) res.report["lambda"] = label.lambda->to_string();
  return res;
}

CommandResult cmd_fixtures(const json& config) {
  std::string dir = require(config, "out_dir", "$").get<std::string>();
  std::uint64_t seed =
      config.contains("seed") ? config["seed"].get<std::uint64_t>() : 20240817ull;
  auto files = write_fixture_corpus(dir, seed);
  CommandResult res;
  res.report["pass"] = true;
  res.report["files"] = files;
  return res;
}

}  // namespace

namespace {

json quiver_to_json(const Quiver& q) {
  json j;
  j["vertices"] = q.vertices;
  j["arrows"] = json::array();
  for (const auto& a : q.arrows) j["arrows"].push_back({{"id", a.id}, {"s", a.s}, {"t", a.t}});
  return j;
}

json uqb_action_to_json(const Quiver& q, const UqbVertexData& vd, const UqbArrowData& ad) {
  json j;
  json perm = json::array();
  for (std::size_t i = 0; i < vd.perm.size(); ++i) perm.push_back(q.vertices[vd.perm[i]]);
  j["g_perm"] = std::move(perm);
  json gamma = json::object();
  for (std::size_t i = 0; i < vd.gamma.size(); ++i)
    if (!vd.gamma[i].is_zero()) gamma[std::to_string(q.vertices[i])] = vd.gamma[i].to_string();
  j["gamma"] = std::move(gamma);
  j["g_on_arrows"] = matrix_to_json(ad.g1);
  j["sigma"] = matrix_to_json(ad.sigma.m);
  return j;
}

json field_header_f7() {
  return {{"field", {{"kind", "prime"}, {"p", 7}}}, {"q", "2"}};
}

void write_json(const std::string& dir, const std::string& name, const json& j,
                std::vector<std::string>& files) {
  std::ofstream out(dir + "/" + name);
  check(out.good(), Errc::ConfigError, "cannot write " + dir + "/" + name);
  out << j.dump(2) << "\n";
  files.push_back(name);
}

}  // namespace

std::vector<std::string> write_fixture_corpus(const std::string& dir, std::uint64_t seed) {
  std::vector<std::string> files;
  QContext f7 = make_prime_field_context(7, 2);

  // a valid U_q(b) action for verify-action
  {
    auto fx = fixtures::random_uqb_fixture(seed, f7);
    json cfg = field_header_f7();
    cfg["algebra"] = {{"kind", "uqb"}};
    cfg["L"] = 4;
    cfg["quiver"] = quiver_to_json(fx.quiver);
    cfg["action"] = uqb_action_to_json(fx.quiver, fx.vertex, fx.arrow);
    write_json(dir, "uqb_action_f7.json", cfg, files);
  }

  // a factoring T(3, 6) instance: a 3-cycle of vertices and arrows with
  // nonzero gamma, trivial wrap and sigma = 0
  {
    Quiver q;
    q.vertices = {0, 1, 2};
    q.arrows = {{0, 0, 1}, {1, 1, 2}, {2, 2, 0}};
    UqbVertexData vd;
    vd.perm = {1, 2, 0};
    vd.gamma = {f7.parse("1"), f7.parse("4"), f7.parse("2")};
    UqbArrowData ad;
    ad.g1 = Matrix(3, 3, f7.field());
    ad.g1.at(1, 0) = f7.one();
    ad.g1.at(2, 1) = f7.one();
    ad.g1.at(0, 2) = f7.one();
    ad.sigma = GradedLinearMap{1, 1, Matrix(3, 3, f7.field())};
    json cfg = field_header_f7();
    cfg["algebra"] = {{"kind", "taft"}, {"r", 3}, {"n", 6}};
    cfg["L"] = 4;
    cfg["quiver"] = quiver_to_json(q);
    cfg["action"] = uqb_action_to_json(q, vd, ad);
    write_json(dir, "taft_factor_f7.json", cfg, files);
  }

  // the coproduct oracle over F_7
  {
    json cfg = field_header_f7();
    cfg["l_max"] = 3;
    cfg["k_max"] = 3;
    write_json(dir, "coproduct_f7.json", cfg, files);
  }

  // a borel GammaRep round trip at (m, m') = (3, 3)
  {
    BimodContext bc(f7, 3, 3);
    GammaRep w = fixtures::random_gamma_rep(seed + 1, bc);
    json cfg = field_header_f7();
    cfg["m"] = 3;
    cfg["mprime"] = 3;
    cfg["scalars"] = {{"gamma0", "2"}, {"gamma0prime", "3"}};
    cfg["gammarep"] = gamma_rep_to_json(w);
    write_json(dir, "gammarep_f7.json", cfg, files);
  }

  // a primed round trip at m = m' = n = 3
  {
    GammaRep w = fixtures::random_gamma_rep_prime(seed + 2, f7, 3);
    auto [gE, gF] = fixtures::gammaEF_pair(seed + 3, f7);
    auto [gEp, gFp] = fixtures::gammaEF_pair(seed + 4, f7);
    json cfg = field_header_f7();
    cfg["m"] = 3;
    cfg["mprime"] = 3;
    cfg["scalars"] = {{"gammaE0", gE.to_string()},
                      {"gammaE0prime", gEp.to_string()},
                      {"gammaF0", gF.to_string()},
                      {"gammaF0prime", gFp.to_string()}};
    cfg["gammarep"] = gamma_rep_to_json(w);
    write_json(dir, "gammarep_prime_f7.json", cfg, files);
  }

  // psi input reusing the borel round-trip payload
  {
    BimodContext bc(f7, 3, 3);
    GammaRep w = fixtures::random_gamma_rep(seed + 5, bc);
    json cfg = field_header_f7();
    cfg["m"] = 3;
    cfg["mprime"] = 3;
    cfg["scalars"] = {{"gamma0", "1"}, {"gamma0prime", "5"}};
    cfg["gammarep"] = gamma_rep_to_json(w);
    write_json(dir, "psi_f7.json", cfg, files);
  }

  // Etingof-Ostrik classification fixture: transitive 3-cycle with gamma != 0
  {
    Quiver q;
    q.vertices = {0, 1, 2};
    json cfg = field_header_f7();
    cfg["n"] = 3;
    cfg["quiver"] = quiver_to_json(q);
    cfg["action"] = {{"g_perm", {1, 2, 0}},
                     {"gamma", {{"0", "1"}, {"1", "4"}, {"2", "2"}}}};
    write_json(dir, "classify_eo_f7.json", cfg, files);
  }

  // a valid U_q(sl2) fixture for verify-action
  {
    auto fx = fixtures::random_uqsl_fixture(seed + 6, f7, 3);
    json cfg = field_header_f7();
    cfg["algebra"] = {{"kind", "uqsl2"}};
    cfg["L"] = 3;
    cfg["quiver"] = quiver_to_json(fx.quiver);
    json action;
    json perm = json::array();
    for (std::size_t i = 0; i < fx.data.perm.size(); ++i)
      perm.push_back(fx.quiver.vertices[fx.data.perm[i]]);
    action["g_perm"] = std::move(perm);
    json ge = json::object(), gf = json::object();
    for (std::size_t i = 0; i < fx.data.gammaE.size(); ++i) {
      if (!fx.data.gammaE[i].is_zero())
        ge[std::to_string(fx.quiver.vertices[i])] = fx.data.gammaE[i].to_string();
      if (!fx.data.gammaF[i].is_zero())
        gf[std::to_string(fx.quiver.vertices[i])] = fx.data.gammaF[i].to_string();
    }
    action["gammaE"] = std::move(ge);
    action["gammaF"] = std::move(gf);
    action["g_on_arrows"] = matrix_to_json(fx.data.k1);
    action["sigmaE"] = matrix_to_json(fx.data.sigmaE.m);
    action["sigmaF"] = matrix_to_json(fx.data.sigmaF.m);
    cfg["action"] = std::move(action);
    write_json(dir, "uqsl_action_f7.json", cfg, files);
  }

  // malformed config: the q key is missing
  {
    json cfg = {{"field", {{"kind", "prime"}, {"p", 7}}}};
    write_json(dir, "bad_missing_q.json", cfg, files);
  }
  return files;
}

CommandResult run_command(const std::string& command, const json& config, unsigned threads) {
  try {
    if (command == "verify-action") return cmd_verify_action(config, threads);
    if (command == "check-factorization") return cmd_check_factorization(config, threads);
    if (command == "phi") return cmd_phi(config);
    if (command == "psi") return cmd_psi(config);
    if (command == "roundtrip") return cmd_roundtrip(config);
    if (command == "coproduct-check") return cmd_coproduct_check(config);
    if (command == "classify-eo") return cmd_classify_eo(config);
    if (command == "fixtures") return cmd_fixtures(config);
    fail(Errc::ConfigError, "unknown command \"" + command + "\"");
  } catch (const Error& e) {
    CommandResult res;
    res.exit_code = 2;
    res.report["pass"] = false;
    res.report["error"] = {{"code", e.code_name()}, {"message", e.what()}};
    return res;
  } catch (const json::exception& e) {
    CommandResult res;
    res.exit_code = 2;
    res.report["pass"] = false;
    res.report["error"] = {{"code", "ConfigError"}, {"message", e.what()}};
    return res;
  }
}

}  // namespace qqw
