#include <doctest.h>

#include <cmath>
#include <string>

#include "orlicz_gauge/errors.hpp"
#include "orlicz_gauge/json_io.hpp"
#include "support/corpus.hpp"

using namespace orlicz;
using namespace orlicz::json_io;
using orlicz::testing::scalar;

namespace {

const Interval kDomain{0, 1};

template <class F>
std::string validation_message(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidation);
    return e.what();
  }
  FAIL("expected a validation error");
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

QuadratureConfig tol(double t) {
  QuadratureConfig c;
  c.tol = t;
  return c;
}

}  // namespace

TEST_CASE("function round trips") {
  const auto f = FunctionSpec::combination({{2, FunctionSpec::trig(1, 3, 0.5)},
                                            {-1, FunctionSpec::indicator(0.25, 0.75)},
                                            {1, FunctionSpec::spikes({{0.5, 4}})},
                                            {0.5, FunctionSpec::hk_pathological(2, 2)},
                                            {1, FunctionSpec::monomial(-0.5)}});
  const json j = to_json(f);
  const FunctionSpec g = function_from_json(j);
  CHECK(to_json(g) == j);
  for (double t : {0.1, 0.3, 0.5, 0.9}) CHECK(g.raw_value(t) == f.raw_value(t));

  const VectorFunctionSpec v({FunctionSpec::constant(1), FunctionSpec::monomial(2)}, NormSpec::infinity(),
                             Interval{0, 2});
  const json vj = to_json(v);
  CHECK(vj["norm"] == "inf");
  CHECK(to_json(vector_from_json(vj, kDomain)) == vj);
  // A bare function becomes a scalar on the default domain.
  const VectorFunctionSpec bare = vector_from_json(to_json(FunctionSpec::monomial(1)), Interval{0, 3});
  CHECK(bare.dimension() == 1);
  CHECK(bare.domain().hi == 3.0);
}

TEST_CASE("Young, measure, quadrature and partition round trips") {
  for (const auto& th : {YoungFunctionSpec::power(3), YoungFunctionSpec::power_scaled(2),
                         YoungFunctionSpec::exponential(), YoungFunctionSpec::piecewise(2, 1.5)}) {
    CHECK(to_json(young_from_json(to_json(th))) == to_json(th));
  }
  const auto var = YoungFunctionSpec::variable_exponent(FunctionSpec::constant(2));
  CHECK(to_json(young_from_json(to_json(var))) == to_json(var));

  const WeightedMeasure m(Interval{0, 2}, FunctionSpec::constant(3));
  CHECK(to_json(measure_from_json(to_json(m))) == to_json(m));
  CHECK(measure_from_json(to_json(m)).total() == doctest::Approx(6.0));

  QuadratureConfig c = tol(1e-7);
  c.mode = EvalMode::kRaw;
  c.h_max = 0.01;
  c.max_cells = 1000;
  CHECK(to_json(quadrature_from_json(to_json(c))) == to_json(c));

  const TaggedPartition p({{0, 0.4, 0.1}, {0.4, 1, 1.0}});
  CHECK(partition_from_json(to_json(p)).cells() == p.cells());
}

TEST_CASE("unknown keys and bad values carry a path") {
  CHECK(contains(validation_message([] {
          function_from_json(json::parse(R"({"kind":"constant","params":{"c":1},"colour":"red"})"));
        }), "colour"));
  CHECK(contains(validation_message([] {
          function_from_json(json::parse(R"({"kind":"constant","params":{"c":1,"d":2}})"));
        }), "/params"));
  CHECK(contains(validation_message([] {
          function_from_json(json::parse(R"({"kind":"combination","params":{"coefficients":[1]},
            "children":[{"kind":"monomial","params":{"alpha":-2}}]})"));
        }), "/children/0"));
  CHECK(contains(validation_message([] { function_from_json(json::parse(R"({"kind":"nope"})")); }),
                 "/kind"));
  CHECK(contains(validation_message([] { young_from_json(json::parse(R"({"family":"power","params":{"p":0.5}})")); }),
                 "/family"));
  CHECK(contains(validation_message([] { measure_from_json(json::parse(R"({"interval":[1,0]})")); }),
                 "/interval"));
  CHECK(contains(validation_message([] { quadrature_from_json(json::parse(R"({"mode":"fast"})")); }),
                 "/mode"));
  CHECK(contains(validation_message([] { quadrature_from_json(json::parse(R"({"max_cells":-1})")); }),
                 "/max_cells"));
  CHECK(contains(validation_message([] {
          partition_from_json(json::parse(R"([{"cell":[0,0.5],"tag":0.7}])"));
        }), "/"));
  CHECK(contains(validation_message([] {
          sequence_from_json(json::parse(R"j({"template":{"kind":"constant","params":{"c":"1/(n-3)"}},
            "limit":{"kind":"constant","params":{"c":0}},"n_max":4})j"), kDomain);
        }), "/template"));
}

TEST_CASE("expressions and placeholders") {
  const json tmpl = json::parse(R"({
    "template": {"kind":"combination","params":{"coefficients":["$c * n"]},
                 "children":[{"kind":"indicator","params":{"lo":0,"hi":"1/n"}}]},
    "limit": {"kind":"constant","params":{"c":0}},
    "n_max": 8})");
  const SequenceSpec s = sequence_from_json(tmpl, kDomain, {{"c", 2.0}});
  CHECK(s.n_max() == 8);
  CHECK(s.term(4).evaluate(0.1)[0] == doctest::Approx(8.0));
  CHECK(s.term(4).evaluate(0.3)[0] == 0.0);
  CHECK(contains(validation_message([&] { sequence_from_json(tmpl, kDomain); }), "$c"));

  const json fam = json::parse(R"({"name":"demo","sequence":)" + tmpl.dump() +
                               R"(,"sweep":[{"c":1},{"c":0.5}]})");
  const FamilyTemplate f = family_from_json(fam, kDomain);
  CHECK(f.name == "demo");
  REQUIRE(f.sweep.size() == 2);
  CHECK(f.instantiate(f.sweep[1]).term(2).evaluate(0.1)[0] == doctest::Approx(1.0));
  CHECK(contains(validation_message([&] {
          family_from_json(json::parse(R"({"sequence":)" + tmpl.dump() + R"(,"sweep":[{"d":1}]})"),
                           kDomain);
        }), "/sweep/0"));
}

TEST_CASE("number encoding") {
  CHECK(number(1.5) == 1.5);
  CHECK(number(INFINITY) == "inf");
  CHECK(number(-INFINITY) == "-inf");
  CHECK(number(NAN).is_null());
  CHECK(std::isinf(number_from_json("inf")));
  CHECK(number_from_json("-inf") < 0);
  CHECK(std::isnan(number_from_json(json(nullptr))));
  CHECK(number_from_json(2.5) == 2.5);
}

TEST_CASE("every report kind validates") {
  const auto t = scalar(FunctionSpec::monomial(1));
  const WeightedMeasure m(kDomain);
  const QuadratureConfig c = tol(1e-8);
  const auto x2 = YoungFunctionSpec::power(2);

  const json integral = to_json(hk_integrate(t, m, c));
  CHECK(integral["value"].is_number());
  const VectorFunctionSpec v({FunctionSpec::constant(1), FunctionSpec::monomial(1)}, NormSpec{2.0}, kDomain);
  CHECK(to_json(hk_integrate(v, m, c))["value"].is_array());

  const std::vector<std::pair<std::string, json>> reports{
      {"integrate", integral},
      {"hk-norm", to_json(sup_riemann_norm(t, m, 16, 1))},
      {"alexiewicz", to_json(alexiewicz_norm(t, m, 16, c))},
      {"modular", to_json(modular(t, x2, m, c))},
      {"lux-norm", to_json(luxemburg_norm(t, x2, m, c))},
      {"axioms", to_json(check_nfunction_axioms(x2, kDomain, 16, 1))},
      {"membership", to_json(h_orlicz_membership(t, x2, m, log2_grid(-2, 2), c))},
      {"convexity", to_json(modular_convexity_check(t, t, 0.5, 0.5, x2, m, c))},
      {"embedding", to_json(embedding_report(t, x2, m, c, 16, 1))},
  };
  for (const auto& [kind, body] : reports) {
    CAPTURE(kind);
    const json r = envelope(kind, body);
    CHECK(r["report"] == kind);
    CHECK(r["schema_version"] == kSchemaVersion);
    CHECK(validate_report(r) == "");
  }

  const SequenceSpec seq([](int n) { return scalar(orlicz::testing::scaled(1.0 / n, FunctionSpec::monomial(1))); },
                         scalar(FunctionSpec::constant(0)), 8);
  const ImplicationTable table = implication_check(seq, x2, m, default_convergence_grid(), c);
  CHECK(validate_report(envelope("converge", to_json(table.report))) == "");
  CHECK(validate_report(envelope("implications", to_json(table))) == "");
  CHECK(validate_report(envelope("counterexample",
                                 {{"family", "none"}, {"candidates", json::array()}, {"sweep_size", 0}})) == "");
  CHECK(validate_report(envelope("bench", {{"cases", json::array({{{"name", "x"},
                                                                    {"wall_seconds", 0.1},
                                                                    {"cells_used", 10}}})}})) == "");

  // Broken reports are caught.
  json broken = envelope("modular", to_json(modular(t, x2, m, c)));
  broken.erase("status");
  CHECK(validate_report(broken) != "");
  CHECK(validate_report(envelope("no-such-kind", json::object())) != "");
  json old = envelope("integrate", integral);
  old["schema_version"] = 2;
  CHECK(validate_report(old) != "");
}
