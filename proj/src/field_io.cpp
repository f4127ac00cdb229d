#include "burgulence/field_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "burgulence/error.hpp"

namespace burgulence {

namespace {

constexpr std::array<char, 8> magic{'B', 'U', 'R', 'G', 'F', 'L', 'D', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap64(v);
  char bytes[8];
  std::memcpy(bytes, &v, 8);
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  char bytes[8];
  in.read(bytes, 8);
  require(in.gcount() == 8, ErrorKind::io, "truncated field container");
  std::uint64_t v;
  std::memcpy(&v, bytes, 8);
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap64(v);
  return v;
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.precision(17);
  s << value;
  return s.str();
}

std::string provenance_line(std::string_view config_hash) {
  std::string line = "# burgulence ";
  line += version;
  line += " config=";
  line += config_hash.empty() ? std::string_view("none") : config_hash;
  return line;
}

void write_field_csv(std::ostream& out, const PeriodicField& field, std::string_view config_hash) {
  out << provenance_line(config_hash) << '\n' << "x,u\n";
  out.precision(17);
  auto u = field.samples();
  for (std::size_t j = 0; j < u.size(); ++j) out << field.grid_point(j) << ',' << u[j] << '\n';
}

void write_field_records(std::ostream& out, std::span<const FieldRecord> records) {
  out.write(magic.data(), magic.size());
  for (const auto& r : records) {
    put_u64(out, r.field.size());
    put_f64(out, r.t);
    put_f64(out, r.nu);
    for (double v : r.field.samples()) put_f64(out, v);
  }
  require(static_cast<bool>(out), ErrorKind::io, "failed to write field container");
}

std::vector<FieldRecord> read_field_records(std::istream& in) {
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  require(in.gcount() == 8 && head == magic, ErrorKind::io, "not a burgulence field container");
  std::vector<FieldRecord> records;
  while (in.peek() != std::char_traits<char>::eof()) {
    const std::uint64_t n = get_u64(in);
    require(n >= 16 && n <= (std::uint64_t{1} << 30), ErrorKind::io, "implausible grid size in container");
    const double t = get_f64(in);
    const double nu = get_f64(in);
    std::vector<double> samples(n);
    for (auto& v : samples) v = get_f64(in);
    records.push_back({t, nu, PeriodicField::from_samples(samples)});
  }
  return records;
}

}  // namespace burgulence
