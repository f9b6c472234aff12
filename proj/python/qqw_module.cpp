#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qqw/config_io.hpp"
#include "qqw/freehopf.hpp"

namespace py = pybind11;

namespace {

qqw::QContext context_from(const std::string& q, unsigned long long p) {
  if (p == 0) {
    mpq_class v;
    if (v.set_str(q, 10) != 0) throw qqw::Error(qqw::Errc::ConfigError, "bad rational " + q);
    v.canonicalize();
    return qqw::QContext::rational(v);
  }
  qqw::QContext tmp = qqw::QContext::rational(2);
  (void)tmp;
  mpz_class z;
  if (z.set_str(q, 10) != 0) throw qqw::Error(qqw::Errc::ConfigError, "bad integer " + q);
  mpz_class r = z % mpz_class(static_cast<unsigned long>(p));
  if (r < 0) r += mpz_class(static_cast<unsigned long>(p));
  return qqw::make_prime_field_context(p, r.get_ui());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact Hopf actions on quiver path algebras: core operations";

  m.def(
      "run_command",
      [](const std::string& command, const std::string& config_json, unsigned threads) {
        qqw::json config;
        try {
          config = qqw::json::parse(config_json);
        } catch (const qqw::json::exception& e) {
          qqw::json err{{"pass", false},
                        {"error", {{"code", "ConfigError"}, {"message", e.what()}}}};
          return py::make_tuple(2, err.dump(2));
        }
        qqw::CommandResult res = qqw::run_command(command, config, threads);
        res.report["command"] = command;
        return py::make_tuple(res.exit_code, res.report.dump(2));
      },
      py::arg("command"), py::arg("config_json"), py::arg("threads") = 1,
      "Run a driver command (verify-action, check-factorization, phi, psi, roundtrip, "
      "coproduct-check, classify-eo, fixtures) against a JSON config string; returns "
      "(exit_code, report_json).");

  m.def(
      "q_integer",
      [](unsigned n, const std::string& q, unsigned long long p) {
        return qqw::q_integer(n, context_from(q, p)).to_string();
      },
      py::arg("n"), py::arg("q"), py::arg("p") = 0);

  m.def(
      "q_binomial",
      [](unsigned n, unsigned k, const std::string& q, unsigned long long p) {
        return qqw::q_binomial(n, k, context_from(q, p)).to_string();
      },
      py::arg("n"), py::arg("k"), py::arg("q"), py::arg("p") = 0);

  m.def(
      "q_multinomial",
      [](unsigned k, const std::vector<unsigned>& lambda, const std::string& q,
         unsigned long long p) {
        return qqw::q_multinomial(k, qqw::WeakComposition{lambda}, context_from(q, p)).to_string();
      },
      py::arg("k"), py::arg("lambda_"), py::arg("q"), py::arg("p") = 0);

  m.def(
      "multiplicative_order",
      [](const std::string& x, unsigned long long p) -> py::object {
        qqw::QContext ctx = context_from(p ? "2" : "2", p ? p : 0);
        auto ord = qqw::multiplicative_order(ctx.parse(x));
        if (!ord) return py::none();
        return py::int_(*ord);
      },
      py::arg("x"), py::arg("p") = 0,
      "Least r with x^r = 1 in Q or F_p, or None when the order is infinite.");

  m.def(
      "coproduct_check",
      [](unsigned l_max, unsigned k_max, const std::string& q, unsigned long long p) {
        qqw::QContext ctx = context_from(q, p);
        qqw::HopfAlgebra uqb = qqw::HopfAlgebra::uqb(ctx);
        qqw::HopfAlgebra uqsl = qqw::HopfAlgebra::uqsl(ctx);
        for (unsigned l = 1; l <= l_max; ++l)
          for (unsigned k = 1; k <= k_max; ++k) {
            if (!(uqb.skew_power_closed_form(l, k) == uqb.coproduct_power(l, uqb.x_power(k))))
              return false;
            if (!(uqsl.skew_power_closed_form(l, k) == uqsl.coproduct_power(l, uqsl.x_power(k))))
              return false;
          }
        return true;
      },
      py::arg("l_max"), py::arg("k_max"), py::arg("q"), py::arg("p") = 0);

  py::register_exception<qqw::Error>(m, "QqwError");
}
