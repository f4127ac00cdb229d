#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "burgulence/field.hpp"

namespace burgulence {

inline constexpr std::string_view version = BURGULENCE_VERSION;

/// First line of every emitted CSV: "# burgulence <version> config=<hash>".
std::string provenance_line(std::string_view config_hash);

/// Shortest text that reads back to the same double (precision 17); "inf"/"-inf"/"nan".
std::string csv_number(double value);

/// Columns x,u; one row per grid point.
void write_field_csv(std::ostream& out, const PeriodicField& field, std::string_view config_hash);

struct FieldRecord {
  double t;
  double nu;
  PeriodicField field;
};

/// Binary container: the 8-byte magic "BURGFLD1" followed by records
///   uint64 n_grid | float64 t | float64 nu | float64 samples[n_grid]
/// all little-endian.
void write_field_records(std::ostream& out, std::span<const FieldRecord> records);
std::vector<FieldRecord> read_field_records(std::istream& in);

}  // namespace burgulence
