#include <gtest/gtest.h>

#include <sstream>

#include "hwk/diagnostics.hpp"
#include "hwk/io.hpp"
#include "hwk/report.hpp"

using namespace hwk;

TEST(Snapshot, RoundTrip2D) {
  const Grid2D g(Axis(5, -1.0, 1.0, Boundary::dirichlet), Axis(4, 0.0, 2.0, Boundary::periodic));
  const auto f = Field2D::sample(g, [](double x, double y) { return x * 10.0 + y; });
  std::stringstream ss;
  write_snapshot(ss, to_snapshot(f));
  EXPECT_EQ(ss.str().size(), 4 + 4 + 4 + 8 + 8 + 32 + 20 * 8u);
  const Snapshot s = read_snapshot(ss);
  EXPECT_EQ(s.ndim, 2u);
  EXPECT_FALSE(s.x_periodic());
  EXPECT_TRUE(s.y_periodic());
  const Field2D back = field2d_from(s);
  EXPECT_EQ(back.values, f.values);
  EXPECT_EQ(back.grid.dy(), g.dy());
}

TEST(Snapshot, RoundTrip1D) {
  const Grid1D g(16, -1.0, 1.0, Boundary::periodic);
  const auto f = Field1D::sample(g, [](double x) { return x * x; });
  std::stringstream ss;
  write_snapshot(ss, to_snapshot(f));
  const Field1D back = field1d_from(read_snapshot(ss));
  EXPECT_EQ(back.values, f.values);
  EXPECT_TRUE(back.grid.periodic());
}

TEST(Snapshot, RejectsBadInput) {
  std::stringstream bad("XXXX0000");
  EXPECT_THROW(read_snapshot(bad), IoError);
  const Grid1D g(16, -1.0, 1.0, Boundary::periodic);
  std::stringstream ss;
  write_snapshot(ss, to_snapshot(Field1D(g, 1.0)));
  std::string s = ss.str();
  s.resize(s.size() - 8);
  std::stringstream cut(s);
  EXPECT_THROW(read_snapshot(cut), IoError);
  std::stringstream again(ss.str());
  EXPECT_THROW(field2d_from(read_snapshot(again)), IoError);
}

TEST(FieldCsv, Headers) {
  const Grid1D g(8, 0.0, 1.0, Boundary::periodic);
  std::ostringstream a;
  write_field_csv(a, Field1D(g, 2.0));
  EXPECT_EQ(a.str().substr(0, 8), "x,value\n");
  const Grid2D g2(Axis(3, 0.0, 1.0, Boundary::dirichlet), Axis(2, 0.0, 1.0, Boundary::dirichlet));
  std::ostringstream b;
  write_field_csv(b, Field2D(g2));
  std::istringstream is(b.str());
  const CsvTable t = read_csv_table(is);
  EXPECT_EQ(t.header, (std::vector<std::string>{"x", "y", "value"}));
  EXPECT_EQ(t.rows.size(), 6u);
}

TEST(Diagnostics, CsvHeaderAndRelativeColumns) {
  DiagnosticsRecord r0;
  r0.mass = 2.0;
  r0.energy = 4.0;
  r0.l1 = 1.0;
  r0.l2 = 1.0;
  r0.relate_to(r0);
  DiagnosticsRecord r1 = r0;
  r1.t = 0.5;
  r1.mass = 2.2;
  r1.relate_to(r0);
  EXPECT_EQ(r0.rel_mass, 0.0);
  EXPECT_NEAR(r1.rel_mass, 0.1, 1e-15);
  std::ostringstream os;
  write_diagnostics_csv(os, {r0, r1});
  std::istringstream is(os.str());
  const CsvTable t = read_csv_table(is);
  EXPECT_EQ(t.header.size(), 12u);
  EXPECT_EQ(t.header[0], "t");
  EXPECT_EQ(t.header[8], "rel_mass");
  EXPECT_EQ(t.rows[1][1], 2.2);
}

TEST(CsvTable, RejectsRaggedRows) {
  std::istringstream is("a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv_table(is), IoError);
  std::istringstream text("a,b\n1,zz\n");
  EXPECT_THROW(read_csv_table(text), IoError);
}

TEST(Compare, Tolerances) {
  CsvTable a{{"t", "v"}, {{0.0, 1.0}, {1.0, 2.0}}};
  CsvTable b = a;
  b.rows[1][1] = 2.0 + 1e-9;
  EXPECT_TRUE(compare_tables(a, a, 0.0, 0.0).equal);
  EXPECT_FALSE(compare_tables(a, b, 0.0, 0.0).equal);
  EXPECT_TRUE(compare_tables(a, b, 1e-8, 0.0).equal);
  EXPECT_TRUE(compare_tables(a, b, 0.0, 1e-8).equal);
  const auto r = compare_tables(a, b, 1e-12, 0.0);
  EXPECT_NE(r.message.find("row 2"), std::string::npos);
  EXPECT_NEAR(r.max_abs_diff, 1e-9, 1e-15);
  CsvTable c{{"t", "w"}, a.rows};
  EXPECT_FALSE(compare_tables(a, c, 1.0, 1.0).equal);
  CsvTable d{{"t", "v"}, {{0.0, 1.0}}};
  EXPECT_FALSE(compare_tables(a, d, 1.0, 1.0).equal);
}

TEST(Convergence, OrdersOnlyBetweenDoubledRows) {
  std::vector<ConvergenceRow> rows{{100, 1e-3, {}, 0}, {200, 1.25e-4, {}, 0}, {300, 1e-5, {}, 0}, {600, 6.25e-7, {}, 0}};
  fill_orders(rows);
  EXPECT_FALSE(rows[0].order.has_value());
  EXPECT_NEAR(*rows[1].order, 3.0, 1e-12);
  EXPECT_FALSE(rows[2].order.has_value());
  EXPECT_NEAR(*rows[3].order, 4.0, 1e-12);
}

TEST(Convergence, ReportFormats) {
  ConvergenceReport rep;
  rep.rows = {{200, 1e-6, {}, 0.5}, {400, 1.25e-7, 3.0, 0.25}};
  std::ostringstream csv, text;
  rep.write_csv(csv);
  rep.write_text(text);
  EXPECT_EQ(csv.str().substr(0, 26), "n,l1_error,order,tv_error\n");
  EXPECT_NE(text.str().find("3.00"), std::string::npos);
}

TEST(Convergence, HarnessKeepsPartialResultsOnFailure) {
  Transport1DSetup s;
  s.t_end = 0.1;
  SchemeConfig cfg;
  const auto rep = convergence_harness(s, SchemeKind::sl_hweno5, {16, 32, 4}, cfg);
  EXPECT_EQ(rep.rows.size(), 2u);
  ASSERT_TRUE(rep.failure.has_value());
  EXPECT_NE(rep.failure->find("n = 4"), std::string::npos);
}
