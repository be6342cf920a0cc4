#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bannaiito/connection.hpp"
#include "bannaiito/structure.hpp"

namespace bi {

/// Doubles in reports are printed with "%.17g": enough digits to round-trip,
/// and byte-stable across runs because every value is computed identically.
std::string json_double(double v);

/// Minimal streaming JSON writer with deterministic, compact output.
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  const std::string& str() const { return out_; }

private:
  void elem_prefix();
  std::string out_;
  std::vector<bool> first_;
  bool pending_value_ = false;
};

struct SpaceConfig {
  std::vector<ModuleSpec> sites;
  int max_level = 1;
};

/// Parses {"n": 3, "sites": [{"mu": "1/2", "truncation": 4}, ...],
/// "max_level": 4}. Rationals must be "p/q" strings; "truncation" may be
/// omitted and defaults to max_level. Anything malformed raises ParseError.
SpaceConfig parse_space_config(const std::string& text);

std::string to_json(const SparseRatMatrix& m);
std::string to_json(const LeveledOperator& op);

std::string structure_report_json(const StructureReport& report, bool include_timing);
std::string spectrum_report_json(const EigenBasis& basis);
std::string tridiag_report_json(const TridiagonalAction& tri, const EigenBasis& basis,
                                SubsetMask op);

struct ConnectionSummary {
  ConnectionMatrix cc;        ///< the direct endpoint overlap
  double recurrence_residual = 0.0;
  double path_residual = 0.0;  ///< max |composed - direct| over entries
};
std::string connection_report_json(const ConnectionSummary& summary);

}  // namespace bi
