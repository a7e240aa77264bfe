#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "q41/dsl.hpp"

using namespace q41;

namespace {

const std::string kSamples = Q41_SOURCE_DIR "/samples/";

template <typename F>
ErrorCode code_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

double max_jet_difference(const JetVec6& a, const JetVec6& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) {
    const auto ca = a[i].coeffs(), cb = b[i].coeffs();
    for (std::size_t k = 0; k < ca.size(); ++k) m = std::max(m, std::abs(ca[k] - cb[k]));
  }
  return m;
}

}  // namespace

TEST(DslExpr, PrecedenceAndAssociativity) {
  EXPECT_DOUBLE_EQ(dsl_constant("1 + 2 * 3"), 7.0);
  EXPECT_DOUBLE_EQ(dsl_constant("2^3^2"), 512.0);
  EXPECT_DOUBLE_EQ(dsl_constant("-2^2"), -4.0);
  EXPECT_DOUBLE_EQ(dsl_constant("8 / 4 / 2"), 1.0);
  EXPECT_DOUBLE_EQ(dsl_constant("10 - 4 - 3"), 3.0);
  EXPECT_DOUBLE_EQ(dsl_constant("3/2"), 1.5);
  EXPECT_DOUBLE_EQ(dsl_constant("2*pi"), 2.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(dsl_constant("sqrt(t^2 - 1)", {{"t", 2.0}}), std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(dsl_constant("1.5e-3"), 1.5e-3);
}

TEST(DslExpr, ConstantErrors) {
  EXPECT_EQ(code_of([] { dsl_constant("u + 1"); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([] { dsl_constant("q + 1"); }), ErrorCode::UnknownIdentifier);
  EXPECT_EQ(code_of([] { dsl_constant("1/0"); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([] { dsl_constant("sqrt(-1)"); }), ErrorCode::DomainError);
}

TEST(DslParse, ErrorsCarryPositions) {
  try {
    dsl_parse("r3[u, v,\n  u * ]");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 7);
  }
  try {
    dsl_parse("r3[u, v $ u]");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 9);
  }
  EXPECT_EQ(code_of([] { dsl_parse("r3[u, tan(v), u]"); }), ErrorCode::UnknownIdentifier);
  EXPECT_EQ(code_of([] { dsl_parse("r3[u, v]"); }), ErrorCode::ArityMismatch);
  EXPECT_EQ(code_of([] { dsl_parse("s41[u, v, u, v, 1, 2]"); }), ErrorCode::ArityMismatch);
  EXPECT_EQ(code_of([] { dsl_parse("r9[u, v, u]"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { dsl_parse("r3[u, v, u] trailing"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { dsl_parse_file(kSamples + "missing.q41"); }), ErrorCode::IoError);
}

TEST(DslParse, UnknownIdentifiersCaughtAtChartCreation) {
  const DslProgram p = dsl_parse("r3[a * u, v, u]");
  EXPECT_EQ(p.parameters(), std::set<std::string>{"a"});
  EXPECT_EQ(code_of([&] { dsl_chart(p, {}); }), ErrorCode::UnknownIdentifier);
  EXPECT_NO_THROW(dsl_chart(p, {{"a", 2.0}}));
  EXPECT_EQ(code_of([] { dsl_chart(dsl_parse("r3[u, v, u] on [1, 0] x [0, 1]"), {}); }), ErrorCode::DomainError);
}

TEST(DslPrint, RoundTripGivesEqualTrees) {
  for (const char* src : {"r3[cosh(u)*cos(v), cosh(u)*sin(v), u] on [-1, 1] x [0, 2*pi]",
                          "raw6[-(u - v) - -u, u^2^3, (u^2)^3, u/(v*2), u/v*2, 1e-300 + 0.1]",
                          "s41[a*cos(u/a), a*sin(u/a), b*cos(v/b), b*sin(v/b), 0]",
                          "r41[u, v, -(u*v), exp(-(u^2))]"}) {
    const DslProgram a = dsl_parse(src);
    const DslProgram b = dsl_parse(dsl_print(a));
    EXPECT_EQ(a.target, b.target) << src;
    EXPECT_EQ(a.components, b.components) << src;
    EXPECT_EQ(a.domain.has_value(), b.domain.has_value());
    if (a.domain) {
      EXPECT_EQ(*a.domain, *b.domain);
    }
    EXPECT_EQ(dsl_print(a), dsl_print(b));
  }
  for (const auto& entry : std::filesystem::directory_iterator(kSamples)) {
    if (entry.path().stem() == "bad_syntax") continue;
    const DslProgram a = dsl_parse_file(entry.path().string());
    EXPECT_EQ(dsl_parse(dsl_print(a)).components, a.components) << entry.path();
  }
}

TEST(DslEval, MatchesHandWrittenJets) {
  const DslProgram p = dsl_parse("r3[u*v, sin(u) + v, exp(v)]");
  const JetVec6 y = dsl_eval(p, {}, 0.3, 0.4, 4);
  auto [u, v] = seed_point<Complex>(0.3, 0.4, 4);
  const JetVec6 want = lift_euclidean3({u * v, sin(u) + v, exp(v)});
  EXPECT_LT(max_jet_difference(y, want), 1e-15);
}

TEST(DslVsCatalog, Torus) {
  const SurfaceChart dsl = dsl_chart(dsl_parse_file(kSamples + "torus.q41"), {{"t", 2.0}});
  const SurfaceChart cat = catalog_homogeneous_torus(2.0);
  EXPECT_NEAR(dsl.domain().u1, cat.domain().u1, 1e-14);
  for (auto [u, v] : oracle::random_points(10, 0, 10, 0, 6, 11)) {
    EXPECT_LT(max_jet_difference(dsl.eval(u, v, 6), cat.eval(u, v, 6)), 1e-12);
  }
}

TEST(DslVsCatalog, Catenoid) {
  const SurfaceChart dsl = dsl_chart(dsl_parse_file(kSamples + "catenoid.q41"), {});
  const SurfaceChart cat = catalog_lookup("catenoid", {});
  for (auto [u, v] : oracle::random_points(10, -1, 1, 0, 6, 12)) {
    EXPECT_LT(max_jet_difference(dsl.eval(u, v, 6), cat.eval(u, v, 6)), 1e-12);
  }
}

TEST(DslEval, QuadricTargetsAreChecked) {
  const SurfaceChart bad = dsl_chart(dsl_parse("s41[u, v, 0, 0, 0]"), {});
  EXPECT_EQ(code_of([&] { bad.eval(0.5, 0.5, 2); }), ErrorCode::NotOnQuadric);
}
