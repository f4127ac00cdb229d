#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "burgulence/error.hpp"
#include "burgulence/field_io.hpp"

using namespace burgulence;

TEST(FieldIo, NumbersRoundTrip) {
  for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 2.2250738585072014e-308, 0.0}) {
    EXPECT_EQ(std::stod(csv_number(v)), v);
  }
  EXPECT_EQ(csv_number(INFINITY), "inf");
  EXPECT_EQ(csv_number(-INFINITY), "-inf");
  EXPECT_EQ(csv_number(NAN), "nan");
}

TEST(FieldIo, CsvCarriesProvenance) {
  std::ostringstream out;
  write_field_csv(out, PeriodicField::zero(16), "abc");
  std::istringstream in(out.str());
  std::string first, second;
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_EQ(first, provenance_line("abc"));
  EXPECT_NE(first.find(std::string(version)), std::string::npos);
  EXPECT_EQ(second, "x,u");
}

TEST(FieldIo, RecordsRoundTrip) {
  const auto f = PeriodicField::from_samples(
      sample_function(64, [](double x) { return std::sin(2.0 * pi * x) + 0.3 * std::cos(6.0 * pi * x); }));
  const std::vector<FieldRecord> records{{0.0, 0.01, f}, {0.25, 0.01, PeriodicField::zero(32)}};
  std::stringstream buffer;
  write_field_records(buffer, records);
  const auto back = read_field_records(buffer);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].t, 0.0);
  EXPECT_EQ(back[1].t, 0.25);
  EXPECT_EQ(back[0].nu, 0.01);
  ASSERT_EQ(back[0].field.size(), 64u);
  for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(back[0].field.samples()[j], f.samples()[j], 1e-15);
  EXPECT_EQ(back[1].field.size(), 32u);
}

TEST(FieldIo, RejectsForeignBinary) {
  std::istringstream in("NOTAFIELDFILE");
  EXPECT_THROW(read_field_records(in), Error);
}
