// Command-line front end. Talks to the engine exclusively through the C API,
// prints the engine's canonical JSON (or a CSV rendering of it), and maps
// statuses onto exit codes: 0 ok, 1 mathematical failure (report still
// emitted), 2 malformed input, 3 internal error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bannaiito.h"

namespace {

struct SpaceArgs {
  std::string config_path;
  std::vector<std::string> mu;
  std::vector<int> truncations;
  int n = 0;
  int max_level = 0;
};

struct OutputArgs {
  std::string path;
  bool csv = false;
};

void add_space_options(CLI::App* cmd, SpaceArgs& args) {
  cmd->add_option("--config", args.config_path, "space config JSON file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--mu", args.mu, "site parameters as p/q strings, comma separated")
      ->delimiter(',');
  cmd->add_option("--truncation", args.truncations,
                  "per-site truncations (default: max-level each)")
      ->delimiter(',');
  cmd->add_option("--n", args.n, "number of sites (must match --mu)");
  cmd->add_option("--max-level", args.max_level, "highest retained total level");
}

void add_output_options(CLI::App* cmd, OutputArgs& args) {
  cmd->add_option("--out", args.path, "write the report to a file instead of stdout");
  auto* csv = cmd->add_flag("--csv", args.csv, "emit CSV instead of JSON");
  cmd->add_flag("--json", "emit JSON (the default)")->excludes(csv);
}

[[noreturn]] void die_usage(const std::string& message) {
  std::cerr << "bi: " << message << "\n";
  std::exit(2);
}

bi_space* make_space(const SpaceArgs& args) {
  bi_space* space = nullptr;
  bi_status status;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) die_usage("cannot read config file " + args.config_path);
    std::ostringstream text;
    text << in.rdbuf();
    status = bi_space_create_json(text.str().c_str(), &space);
  } else {
    if (args.mu.empty()) die_usage("need --mu (or --config)");
    if (args.max_level < 1) die_usage("need --max-level >= 1");
    if (args.n != 0 && args.n != static_cast<int>(args.mu.size()))
      die_usage("--n disagrees with the number of --mu values");
    if (!args.truncations.empty() && args.truncations.size() != args.mu.size())
      die_usage("--truncation needs one value per site");
    std::vector<const char*> mu_ptrs;
    for (const auto& m : args.mu) mu_ptrs.push_back(m.c_str());
    std::vector<int32_t> truncs(args.truncations.begin(), args.truncations.end());
    status = bi_space_create(static_cast<int32_t>(mu_ptrs.size()), mu_ptrs.data(),
                             truncs.empty() ? nullptr : truncs.data(), args.max_level, &space);
  }
  if (status != BI_OK) die_usage(bi_last_error());
  return space;
}

int thread_budget() {
  const char* env = std::getenv("BI_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) die_usage("BI_THREADS must be a positive integer");
  return static_cast<int>(v);
}

void emit(const OutputArgs& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out.path, std::ios::binary);
  if (!f) die_usage("cannot write " + out.path);
  f << text << "\n";
}

std::string d17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_ints(const nlohmann::json& array, const char* sep) {
  std::string out;
  for (const auto& v : array) {
    if (!out.empty()) out += sep;
    out += std::to_string(v.get<long>());
  }
  return out;
}

// --- CSV renderings of the canonical JSON reports ---------------------------

std::string verify_csv(const nlohmann::json& j) {
  std::ostringstream out;
  out << "kind,A,B,status,level,row,col,value\n";
  const auto row = [&out](const char* kind, const nlohmann::json& check) {
    out << kind << "," << join_ints(check["A"], " ") << "," << join_ints(check["B"], " ") << ",";
    if (check["status"].is_string()) {
      out << "zero,,,,\n";
    } else {
      const auto& v = check["status"];
      out << "violation," << v["level"].get<long>() << "," << v["entry"][0].get<long>() << ","
          << v["entry"][1].get<long>() << "," << v["entry"][2].get<std::string>() << "\n";
    }
  };
  for (const auto& check : j["pairs"]) row("relation", check);
  for (const auto& check : j["centrality"]) row("centrality", check);
  return out.str();
}

std::string spectrum_csv(const nlohmann::json& j) {
  std::ostringstream out;
  out << "state";
  for (const auto& op : j["chain"]) out << ",label_" << join_ints(op, ".");
  out << ",vector\n";
  int k = 0;
  for (const auto& state : j["states"]) {
    out << k++;
    for (const auto& v : state["labels"]) out << "," << d17(v.get<double>());
    out << ",";
    bool first = true;
    for (const auto& v : state["vector"]) {
      if (!first) out << " ";
      out << d17(v.get<double>());
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

std::string tridiag_csv(const nlohmann::json& j) {
  std::ostringstream out;
  out << "k,diagonal,superdiagonal,subdiagonal\n";
  const auto& diag = j["diagonal"];
  const auto& super = j["superdiagonal"];
  const auto& sub = j["subdiagonal"];
  for (std::size_t k = 0; k < diag.size(); ++k) {
    out << k << "," << d17(diag[k].get<double>()) << ",";
    if (k < super.size()) out << d17(super[k].get<double>());
    out << ",";
    if (k < sub.size()) out << d17(sub[k].get<double>());
    out << "\n";
  }
  return out.str();
}

std::string cc_csv(const nlohmann::json& j) {
  std::ostringstream out;
  out << "block,row,col,value\n";
  int b = 0;
  for (const auto& block : j["blocks"]) {
    const auto& m = block["matrix"];
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t c = 0; c < m[i].size(); ++c)
        out << b << "," << i << "," << c << "," << d17(m[i][c].get<double>()) << "\n";
    ++b;
  }
  return out.str();
}

int finish(bi_status status, char* report, const OutputArgs& out,
           std::string (*to_csv)(const nlohmann::json&)) {
  if (status == BI_ERR_ARGUMENT) {
    if (report) bi_string_free(report);
    die_usage(bi_last_error());
  }
  if (report) {
    std::string text = report;
    bi_string_free(report);
    if (out.csv) {
      // Reports are machine-generated; a parse failure here is a bug.
      text = to_csv(nlohmann::json::parse(text));
      if (!text.empty() && text.back() == '\n') text.pop_back();
    }
    emit(out, text);
  }
  if (status == BI_OK) return 0;
  if (status == BI_ERR_MATH) {
    std::cerr << "bi: " << bi_last_error() << "\n";
    return 1;
  }
  std::cerr << "bi: internal error: " << bi_last_error() << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bannai-Ito realization engine"};
  app.require_subcommand(1);

  SpaceArgs space_args;
  OutputArgs out_args;
  std::vector<int> chain, from, to, op;
  int level = 0;
  int sort_key = -1;
  bool timing = false;
  double eig_tol = 1e-10, cc_tol = 1e-9, band_tol = 1e-9;

  CLI::App* verify = app.add_subcommand(
      "verify", "exactly verify the structure relations over all subset pairs");
  add_space_options(verify, space_args);
  add_output_options(verify, out_args);
  verify->add_flag("--timing", timing, "include wall-clock time in the report");

  CLI::App* spectrum =
      app.add_subcommand("spectrum", "joint eigenbasis of a chain on one level");
  add_space_options(spectrum, space_args);
  add_output_options(spectrum, out_args);
  spectrum->add_option("--chain", chain, "site permutation, e.g. 1,3,2")
      ->delimiter(',')
      ->required();
  spectrum->add_option("--level", level, "level block")->required();
  spectrum->add_option("--eig-tol", eig_tol, "eigenvector residual tolerance");

  CLI::App* tridiag = app.add_subcommand(
      "tridiag", "tridiagonalized action of a subset operator in a chain eigenbasis");
  add_space_options(tridiag, space_args);
  add_output_options(tridiag, out_args);
  tridiag->add_option("--chain", chain, "site permutation")->delimiter(',')->required();
  tridiag->add_option("--op", op, "operator subset, e.g. 2,3")->delimiter(',')->required();
  tridiag->add_option("--level", level, "level block")->required();
  tridiag->add_option("--sort-key", sort_key, "label index ordering the groups (default: auto)");
  tridiag->add_option("--eig-tol", eig_tol, "eigenvector residual tolerance");
  tridiag->add_option("--band-tol", band_tol, "relative off-band tolerance");

  CLI::App* cc = app.add_subcommand(
      "cc", "connection coefficients between two chain eigenbases, with recurrence check");
  add_space_options(cc, space_args);
  add_output_options(cc, out_args);
  cc->add_option("--from", from, "source permutation")->delimiter(',')->required();
  cc->add_option("--to", to, "target permutation")->delimiter(',')->required();
  cc->add_option("--level", level, "level block")->required();
  cc->add_option("--eig-tol", eig_tol, "eigenvector residual tolerance");
  cc->add_option("--cc-tol", cc_tol, "orthogonality/block-diagonality tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  bi_space* space = make_space(space_args);
  char* report = nullptr;
  int code = 3;

  const auto as_i32 = [](const std::vector<int>& v) {
    return std::vector<int32_t>(v.begin(), v.end());
  };

  if (verify->parsed()) {
    const bi_status st = bi_verify(space, thread_budget(), timing ? 1 : 0, &report);
    code = finish(st, report, out_args, verify_csv);
  } else if (spectrum->parsed()) {
    const std::vector<int32_t> perm = as_i32(chain);
    if (static_cast<int32_t>(perm.size()) != bi_space_sites(space))
      die_usage("--chain must list every site exactly once");
    const bi_status st = bi_spectrum(space, perm.data(), level, eig_tol, &report);
    code = finish(st, report, out_args, spectrum_csv);
  } else if (tridiag->parsed()) {
    const std::vector<int32_t> perm = as_i32(chain);
    const std::vector<int32_t> op32 = as_i32(op);
    if (static_cast<int32_t>(perm.size()) != bi_space_sites(space))
      die_usage("--chain must list every site exactly once");
    const bi_status st =
        bi_tridiag(space, perm.data(), op32.data(), static_cast<int32_t>(op32.size()), level,
                   sort_key, eig_tol, band_tol, &report);
    code = finish(st, report, out_args, tridiag_csv);
  } else if (cc->parsed()) {
    const std::vector<int32_t> from32 = as_i32(from);
    const std::vector<int32_t> to32 = as_i32(to);
    if (static_cast<int32_t>(from32.size()) != bi_space_sites(space) ||
        static_cast<int32_t>(to32.size()) != bi_space_sites(space))
      die_usage("--from/--to must list every site exactly once");
    const bi_status st = bi_connection(space, from32.data(), to32.data(), level, eig_tol,
                                       cc_tol, &report);
    code = finish(st, report, out_args, cc_csv);
  }

  bi_space_free(space);
  return code;
}
