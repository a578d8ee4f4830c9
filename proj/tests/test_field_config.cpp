#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "kdvlab/config.hpp"
#include "kdvlab/field.hpp"
#include "kdvlab/validate.hpp"

using namespace kdvlab;

namespace {

std::string temp(const std::string& name) { return ::testing::TempDir() + name; }

void write_text(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

FieldGrid small_field() {
  FieldGrid f;
  f.provenance = "oracle";
  f.x = {0.0, 0.5, 1.0};
  f.t = {5.0, 10.0, 20.0};
  f.q = {{-1.0, -0.5, 0.0}, {-0.9, -0.4, 0.1}, {-0.8, -0.3, 0.2}};
  f.meta["c"] = 1.0;
  return f;
}

}  // namespace

TEST(Field, CsvRoundTrip) {
  auto f = small_field();
  f.region_kind = {{"D0", "Dj", "Dj_sol"}, {"D0", "D0", "D0"}, {"outside", "D0", "Dj"}};
  f.region_index = {{0, 1, 2}, {0, 0, 0}, {0, 0, 1}};
  const std::string p = temp("field_rt.csv");
  write_field_csv(f, p);
  const auto g = read_field_csv(p);
  EXPECT_EQ(g.provenance, "oracle");
  EXPECT_EQ(g.x, f.x);
  EXPECT_EQ(g.t, f.t);
  EXPECT_EQ(g.q, f.q);
  EXPECT_EQ(g.region_kind, f.region_kind);
  EXPECT_EQ(g.region_index, f.region_index);
  EXPECT_EQ(g.meta["c"], 1.0);
  std::remove(p.c_str());
}

TEST(Field, SubnormalValuesRoundTrip) {
  auto f = small_field();
  f.q[1][2] = -5.9e-323;
  const std::string p = temp("field_tiny.csv");
  write_field_csv(f, p);
  EXPECT_EQ(read_field_csv(p).q[1][2], f.q[1][2]);
  write_text(p, "# {\"schema\":\"kdvlab.field/1\"}\nx,t,q\n0,1,2x\n");
  EXPECT_THROW(read_field_csv(p), DomainError);
  write_text(p, "# {\"schema\":\"kdvlab.field/1\"}\nx,t,q\n0,1,1e999\n");
  EXPECT_THROW(read_field_csv(p), DomainError);
  std::remove(p.c_str());
}

TEST(Field, SchemaMismatchRejected) {
  const std::string p = temp("field_bad.csv");
  write_text(p, "# {\"schema\":\"kdvlab.field/0\"}\nx,t,q\n0,1,2\n");
  EXPECT_THROW(read_field_csv(p), DomainError);
  write_text(p, "x,t,q\n0,1,2\n");
  EXPECT_THROW(read_field_csv(p), DomainError);
  std::remove(p.c_str());
}

TEST(Field, RaggedOrShiftedGridRejected) {
  const std::string p = temp("field_ragged.csv");
  write_text(p, "# {\"schema\":\"kdvlab.field/1\"}\nx,t,q\n0,1,0\n1,1,0\n0,2,0\n");
  EXPECT_THROW(read_field_csv(p), DomainError);
  write_text(p, "# {\"schema\":\"kdvlab.field/1\"}\nx,t,q\n0,1,0\n1,1,0\n0,2,0\n2,2,0\n");
  EXPECT_THROW(read_field_csv(p), DomainError);
  std::remove(p.c_str());
}

TEST(Config, ParsesAllSections) {
  const std::string p = temp("run.cfg");
  write_text(p,
             "[potential]\nfamily = tanh-step-plus-wells\nc = 1\nwells = 1.2:-3:1, 3.0:-1:0.5\nm0 = 5\nn0 = 9\n"
             "[split]\ntau = 0.8\n[oracle]\nnx = 4096\ndt = 1e-4\n[region]\nbeta = 2\n"
             "[run]\ntimes = 5, 10 ,20\nj = 1\nseed = 7\n");
  const auto c = load_config(p);
  EXPECT_EQ(c.potential.family, Family::TanhStepPlusWells);
  ASSERT_EQ(c.potential.wells.size(), 2u);
  EXPECT_EQ(c.potential.wells[1].width, 0.5);
  EXPECT_EQ(c.split.m0, 5);
  EXPECT_EQ(c.split.n0, 9);
  EXPECT_EQ(c.split.tau, 0.8);
  EXPECT_EQ(c.oracle.nx, 4096u);
  EXPECT_EQ(c.oracle.c, 1.0);
  EXPECT_EQ(c.region.beta, 2.0);
  EXPECT_EQ(c.times, (std::vector<double>{5.0, 10.0, 20.0}));
  EXPECT_EQ(c.oracle.times, c.times);
  EXPECT_EQ(c.j, 1);
  EXPECT_EQ(c.seed, 7u);
  std::remove(p.c_str());
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  const std::string p = temp("bad.cfg");
  write_text(p, "[potential]\nfamly = tanh-step\n");
  EXPECT_THROW(load_config(p), DomainError);
  write_text(p, "[potentials]\nfamily = tanh-step\n");
  EXPECT_THROW(load_config(p), DomainError);
  write_text(p, "[potential]\nc = one\n");
  EXPECT_THROW(load_config(p), DomainError);
  write_text(p, "[potential]\nwells = 1:2\n");
  EXPECT_THROW(load_config(p), DomainError);
  EXPECT_THROW(load_config(temp("missing.cfg")), DomainError);
  std::remove(p.c_str());
}

TEST(Config, ListParsing) {
  EXPECT_EQ(parse_list("1, 2.5,3e1"), (std::vector<double>{1.0, 2.5, 30.0}));
  EXPECT_THROW(parse_list("1, x"), DomainError);
  EXPECT_THROW(parse_wells("1:2:-1"), DomainError);
}

TEST(Validate, IdenticalFieldsPass) {
  const auto f = small_field();
  const auto r = validate_fields(f, f, 0.0, 0.0, 4, -10.0, 10.0);
  EXPECT_TRUE(r.pass);
  for (double e : r.sup_error) EXPECT_EQ(e, 0.0);
}

TEST(Validate, PowerLawErrorsGiveExponent) {
  auto o = small_field();
  auto a = small_field();
  for (std::size_t i = 0; i < a.t.size(); ++i)
    for (auto& v : a.q[i]) v += 0.3 / (a.t[i] * a.t[i]);
  const auto r = validate_fields(o, a, 0.0, 0.0, 4, -10.0, 10.0);
  EXPECT_NEAR(r.fit.slope, -2.0, 1e-10);
  EXPECT_TRUE(r.exponent_pass);
  for (std::size_t i = 0; i < a.t.size(); ++i)
    for (auto& v : a.q[i]) v += 0.3;
  EXPECT_FALSE(validate_fields(o, a, 0.0, 0.0, 4, -10.0, 10.0).exponent_pass);
}

TEST(Validate, MismatchedInputsRejected) {
  auto o = small_field();
  auto a = small_field();
  a.x[1] = 0.6;
  EXPECT_THROW(validate_fields(o, a, 0.0, 0.0, 4, -10.0, 10.0), DomainError);
  a = small_field();
  a.t = {5.0, 11.0, 21.0};
  EXPECT_THROW(validate_fields(o, a, 0.0, 0.0, 4, -10.0, 10.0), DomainError);
}
