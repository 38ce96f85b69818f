#pragma once

#include <string>

#include "qpd/spectral.hpp"

namespace qpd {

/// Deterministic shortest-roundtrip formatting ("%.17g").
std::string format_double(double v);

/// Writes a field as CSV: a header line
///   # s=<s> backend=<tag> grid=<rows>x<cols> [L=<half-width>] [j=<spin>]
/// followed by rows `coord1,coord2,value` (real fields) or
/// `coord1,coord2,re,im` (complex fields), in axis1-major node order.
void write_field_csv(const std::string& path, const QpdField& field, const std::string& backend_tag);

struct LoadedField {
  QpdField field;
  std::string backend_tag;
};

/// Reads a field written by write_field_csv, rebuilding the grid from the
/// header and checking the stored coordinates against it.
LoadedField read_field_csv(const std::string& path);

/// Axiom report as a JSON array of {name, max_abs_deviation, tolerance, pass}.
void write_report_json(const std::string& path, const AxiomReport& report);

/// Dense complex matrix from CSV, row-major with interleaved re,im columns.
Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m);

}  // namespace qpd
