#include "bannaiito/json_io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace bi {

std::string json_double(double v) {
  if (!std::isfinite(v)) throw Error("report: non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JsonWriter& JsonWriter::begin_object() {
  elem_prefix();
  out_ += '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  elem_prefix();
  out_ += '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  first_.pop_back();
  return *this;
}

void JsonWriter::elem_prefix() {
  if (pending_value_) {
    pending_value_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
  }
}

namespace {

void escape_into(std::string& out, std::string_view s) {
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
}

}  // namespace

JsonWriter& JsonWriter::key(std::string_view k) {
  elem_prefix();
  out_ += '"';
  escape_into(out_, k);
  out_ += "\":";
  pending_value_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  elem_prefix();
  out_ += '"';
  escape_into(out_, v);
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  elem_prefix();
  out_ += json_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  elem_prefix();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  elem_prefix();
  out_ += v ? "true" : "false";
  return *this;
}

SpaceConfig parse_space_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: top level must be an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (k != "n" && k != "sites" && k != "max_level")
      throw ParseError("config: unknown key '" + k + "'");
  }
  if (!j.contains("sites") || !j["sites"].is_array() || j["sites"].empty())
    throw ParseError("config: 'sites' must be a non-empty array");
  if (!j.contains("max_level") || !j["max_level"].is_number_integer())
    throw ParseError("config: 'max_level' must be an integer");

  SpaceConfig cfg;
  cfg.max_level = j["max_level"].get<int>();
  if (cfg.max_level < 1) throw ParseError("config: max_level must be >= 1");
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<int>() != static_cast<int>(j["sites"].size()))
      throw ParseError("config: 'n' disagrees with the number of sites");
  }
  for (const auto& site : j["sites"]) {
    if (!site.is_object()) throw ParseError("config: each site must be an object");
    for (const auto& [k, v] : site.items()) {
      (void)v;
      if (k != "mu" && k != "truncation") throw ParseError("config: unknown site key '" + k + "'");
    }
    if (!site.contains("mu") || !site["mu"].is_string())
      throw ParseError("config: site 'mu' must be a \"p/q\" string, not a number");
    ModuleSpec spec;
    spec.mu = Rational::parse(site["mu"].get<std::string>());
    spec.truncation = cfg.max_level;
    if (site.contains("truncation")) {
      if (!site["truncation"].is_number_integer())
        throw ParseError("config: site 'truncation' must be an integer");
      spec.truncation = site["truncation"].get<int>();
      if (spec.truncation < 1) throw ParseError("config: site 'truncation' must be >= 1");
    }
    cfg.sites.push_back(std::move(spec));
  }
  return cfg;
}

namespace {

void write_sites(JsonWriter& w, SubsetMask mask) {
  w.begin_array();
  for (const int s : subset_sites(mask)) w.value(s);
  w.end_array();
}

void write_matrix(JsonWriter& w, const SparseRatMatrix& m) {
  w.begin_object();
  w.key("rows").value(m.rows());
  w.key("cols").value(m.cols());
  w.key("entries").begin_array();
  for (const auto& [ij, v] : m.entries()) {
    w.begin_array();
    w.value(ij.first);
    w.value(ij.second);
    w.value(v.str());
    w.end_array();
  }
  w.end_array();
  w.end_object();
}

void write_pair_checks(JsonWriter& w, const std::vector<PairCheck>& checks) {
  w.begin_array();
  for (const auto& check : checks) {
    w.begin_object();
    w.key("A");
    write_sites(w, check.a);
    w.key("B");
    write_sites(w, check.b);
    w.key("status");
    if (!check.violation) {
      w.value("zero");
    } else {
      w.begin_object();
      w.key("level").value(check.violation->level);
      w.key("entry").begin_array();
      w.value(check.violation->row);
      w.value(check.violation->col);
      w.value(check.violation->value.str());
      w.end_array();
      w.end_object();
    }
    w.end_object();
  }
  w.end_array();
}

}  // namespace

std::string to_json(const SparseRatMatrix& m) {
  JsonWriter w;
  write_matrix(w, m);
  return w.str();
}

std::string to_json(const LeveledOperator& op) {
  JsonWriter w;
  w.begin_object();
  for (const auto& [level, block] : op.blocks) {
    w.key(std::to_string(level));
    write_matrix(w, block);
  }
  w.end_object();
  return w.str();
}

std::string structure_report_json(const StructureReport& report, bool include_timing) {
  JsonWriter w;
  w.begin_object();
  w.key("n").value(report.n);
  w.key("pairs");
  write_pair_checks(w, report.pairs);
  w.key("centrality");
  write_pair_checks(w, report.centrality);
  w.key("all_zero").value(report.all_zero);
  if (include_timing) w.key("elapsed_ms").value(report.elapsed_ms);
  w.end_object();
  return w.str();
}

std::string spectrum_report_json(const EigenBasis& basis) {
  JsonWriter w;
  w.begin_object();
  w.key("chain").begin_array();
  for (const SubsetMask mask : basis.ops) write_sites(w, mask);
  w.end_array();
  w.key("level").value(basis.level);
  w.key("states").begin_array();
  for (int k = 0; k < basis.vectors.cols(); ++k) {
    w.begin_object();
    w.key("labels").begin_array();
    for (const double v : basis.labels[static_cast<std::size_t>(k)]) w.value(v);
    w.end_array();
    w.key("vector").begin_array();
    for (int i = 0; i < basis.vectors.rows(); ++i) w.value(basis.vectors(i, k));
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.key("max_eigen_residual").value(basis.max_eigen_residual);
  w.end_object();
  return w.str();
}

std::string tridiag_report_json(const TridiagonalAction& tri, const EigenBasis& basis,
                                SubsetMask op) {
  JsonWriter w;
  w.begin_object();
  w.key("chain").begin_array();
  for (const SubsetMask mask : basis.ops) write_sites(w, mask);
  w.end_array();
  w.key("op");
  write_sites(w, op);
  w.key("level").value(basis.level);
  w.key("sort_key").value(tri.sort_key);
  w.key("groups").begin_array();
  for (const auto& group : tri.groups) {
    w.begin_object();
    w.key("common_labels").begin_array();
    for (const double v : group.common_labels) w.value(v);
    w.end_array();
    w.key("offset").value(group.offset);
    w.key("size").value(group.size);
    w.end_object();
  }
  w.end_array();
  w.key("order").begin_array();
  for (const int c : tri.order) w.value(c);
  w.end_array();
  w.key("diagonal").begin_array();
  for (const double v : tri.diag) w.value(v);
  w.end_array();
  w.key("superdiagonal").begin_array();
  for (const double v : tri.super) w.value(v);
  w.end_array();
  w.key("subdiagonal").begin_array();
  for (const double v : tri.sub) w.value(v);
  w.end_array();
  w.key("offband_residual").value(tri.offband_residual);
  w.end_object();
  return w.str();
}

std::string connection_report_json(const ConnectionSummary& summary) {
  const ConnectionMatrix& cc = summary.cc;
  JsonWriter w;
  w.begin_object();
  w.key("source").begin_array();
  for (const int p : cc.source_perm) w.value(p);
  w.end_array();
  w.key("target").begin_array();
  for (const int p : cc.target_perm) w.value(p);
  w.end_array();
  w.key("level").value(cc.level);
  w.key("blocks").begin_array();
  for (const auto& block : cc.blocks) {
    w.begin_object();
    w.key("common_labels").begin_array();
    for (const double v : block.common_labels) w.value(v);
    w.end_array();
    w.key("matrix").begin_array();
    for (int i = 0; i < block.m.rows(); ++i) {
      w.begin_array();
      for (int j = 0; j < block.m.cols(); ++j) w.value(block.m(i, j));
      w.end_array();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.key("orthogonality_residual").value(cc.orthogonality_residual);
  w.key("block_residual").value(cc.block_residual);
  w.key("recurrence_residual").value(summary.recurrence_residual);
  w.key("path_residual").value(summary.path_residual);
  w.end_object();
  return w.str();
}

}  // namespace bi
