#include "doctest.h"
#include "qqw/config_io.hpp"

using namespace qqw;

TEST_CASE("context parsing") {
  json rational = {{"field", {{"kind", "rational"}}}, {"q", "2"}};
  QContext rctx = parse_context(rational);
  CHECK(!rctx.q_is_root_of_unity());

  json prime = {{"field", {{"kind", "prime"}, {"p", 7}}}, {"q", 2}};
  QContext pctx = parse_context(prime);
  CHECK(pctx.order_of_q() == std::optional<unsigned>(3));

  json missing = {{"field", {{"kind", "prime"}, {"p", 7}}}};
  CHECK_THROWS_WITH_AS(parse_context(missing), doctest::Contains("missing key \"q\""), Error);
  json badkind = {{"field", {{"kind", "complex"}}}, {"q", "2"}};
  CHECK_THROWS_WITH_AS(parse_context(badkind), doctest::Contains("$.field.kind"), Error);
}

TEST_CASE("gamma rep serialization round trip") {
  QContext ctx = make_prime_field_context(7, 2);
  BimodContext bc(ctx, 3, 3);
  GammaRep w = fixtures::random_gamma_rep(5, bc);
  json j = gamma_rep_to_json(w);
  GammaRep back = parse_gamma_rep(j, ctx, "$");
  CHECK(gamma_reps_equal(w, back, bc));
  CHECK(json(gamma_rep_to_json(back)) == j);
}

TEST_CASE("bimodule serialization round trip") {
  QContext ctx = make_prime_field_context(7, 2);
  BimodContext bc(ctx, 3, 3);
  GammaRep w = fixtures::random_gamma_rep(9, bc);
  BimoduleInC v = psi(w, bc, ctx.parse("2"), ctx.parse("3"));
  json j = bimodule_to_json(v, ctx);
  BimoduleInC back = parse_bimodule(j, ctx, "$");
  CHECK(back.dim() == v.dim());
  CHECK(back.g == v.g);
  CHECK(back.sigma == v.sigma);
  CHECK(back.gamma0 == v.gamma0);
  CHECK(back.gamma0p == v.gamma0p);
  CHECK(gamma_reps_equal(phi(back, bc), w, bc));
}

TEST_CASE("driver dispatch and error codes") {
  json cfg = {{"field", {{"kind", "prime"}, {"p", 7}}},
              {"q", "2"},
              {"l_max", 2},
              {"k_max", 2}};
  CommandResult res = run_command("coproduct-check", cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.report["pass"] == true);

  CommandResult unknown = run_command("no-such-command", cfg);
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.report["error"]["code"] == "ConfigError");

  // u_q(sl2) with even n surfaces WrongOrderOfQ as a machine-readable code
  json even = {{"field", {{"kind", "prime"}, {"p", 7}}},
               {"q", "2"},
               {"algebra", {{"kind", "uq_sl2"}, {"n", 6}}},
               {"quiver", {{"vertices", {0}}, {"arrows", json::array()}}},
               {"action",
                {{"g_perm", {0}},
                 {"gammaE", json::object()},
                 {"gammaF", json::object()},
                 {"g_on_arrows", json::array()},
                 {"sigmaE", json::array()},
                 {"sigmaF", json::array()}}}};
  CommandResult res2 = run_command("verify-action", even);
  CHECK(res2.exit_code == 2);
  CHECK(res2.report["error"]["code"] == "WrongOrderOfQ");
}

TEST_CASE("reports are byte-identical across runs") {
  json cfg = {{"field", {{"kind", "prime"}, {"p", 7}}}, {"q", "2"}, {"l_max", 2}, {"k_max", 3}};
  CommandResult a = run_command("coproduct-check", cfg);
  CommandResult b = run_command("coproduct-check", cfg);
  CHECK(a.report.dump() == b.report.dump());
}
