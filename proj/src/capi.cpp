#include "bannaiito.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "bannaiito/connection.hpp"
#include "bannaiito/json_io.hpp"
#include "bannaiito/spectral.hpp"
#include "bannaiito/structure.hpp"

struct bi_space {
  bi::TensorSpace space;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error_report(char** out_json, const std::string& message) {
  if (!out_json) return;
  bi::JsonWriter w;
  w.begin_object().key("error").value(message).end_object();
  *out_json = dup_string(w.str());
}

// Runs the body and maps exceptions onto statuses. On BI_ERR_MATH the
// (report-producing) callers still emit an error document via out_json.
template <typename Fn>
bi_status guarded(char** out_json, Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const bi::ParseError& e) {
    g_last_error = e.what();
    return BI_ERR_ARGUMENT;
  } catch (const bi::ArgumentError& e) {
    g_last_error = e.what();
    return BI_ERR_ARGUMENT;
  } catch (const bi::DimensionError& e) {
    g_last_error = e.what();
    return BI_ERR_ARGUMENT;
  } catch (const bi::GaugeError& e) {
    g_last_error = e.what();
    set_error_report(out_json, g_last_error);
    return BI_ERR_MATH;
  } catch (const bi::DegeneracyError& e) {
    g_last_error = e.what();
    set_error_report(out_json, g_last_error);
    return BI_ERR_MATH;
  } catch (const bi::PairingError& e) {
    g_last_error = e.what();
    set_error_report(out_json, g_last_error);
    return BI_ERR_MATH;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BI_ERR_INTERNAL;
  }
}

std::vector<int> read_perm(const bi_space* space, const int32_t* perm) {
  if (!perm) throw bi::ArgumentError("api: null permutation");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(space->space.sites()));
  for (int i = 0; i < space->space.sites(); ++i) out.push_back(perm[i]);
  return out;
}

bi::SubsetMask read_subset(const bi_space* space, const int32_t* sites, int32_t n) {
  if (n < 0 || (n > 0 && !sites)) throw bi::ArgumentError("api: bad subset array");
  std::vector<int> list(sites, sites + n);
  return bi::subset_from_sites(list, space->space.sites());
}

const bi_space* require_space(const bi_space* space) {
  if (!space) throw bi::ArgumentError("api: null space");
  return space;
}

}  // namespace

extern "C" {

const char* bi_version(void) { return "1.0.0"; }

const char* bi_last_error(void) { return g_last_error.c_str(); }

bi_status bi_space_create(int32_t n_sites, const char* const* mu, const int32_t* truncations,
                          int32_t max_level, bi_space** out) {
  return guarded(nullptr, [&]() -> bi_status {
    if (!out) throw bi::ArgumentError("api: null output pointer");
    if (n_sites < 1 || !mu) throw bi::ArgumentError("api: need at least one mu value");
    std::vector<bi::ModuleSpec> sites;
    for (int32_t i = 0; i < n_sites; ++i) {
      if (!mu[i]) throw bi::ArgumentError("api: null mu string");
      bi::ModuleSpec spec;
      spec.mu = bi::Rational::parse(mu[i]);
      spec.truncation = truncations ? truncations[i] : max_level;
      sites.push_back(std::move(spec));
    }
    if (max_level < 1) throw bi::ArgumentError("api: max_level must be >= 1");
    *out = new bi_space{bi::TensorSpace(std::move(sites), max_level)};
    return BI_OK;
  });
}

bi_status bi_space_create_json(const char* config_json, bi_space** out) {
  return guarded(nullptr, [&]() -> bi_status {
    if (!out) throw bi::ArgumentError("api: null output pointer");
    if (!config_json) throw bi::ArgumentError("api: null config");
    bi::SpaceConfig cfg = bi::parse_space_config(config_json);
    *out = new bi_space{bi::TensorSpace(std::move(cfg.sites), cfg.max_level)};
    return BI_OK;
  });
}

void bi_space_free(bi_space* space) { delete space; }

int32_t bi_space_sites(const bi_space* space) { return space ? space->space.sites() : 0; }

int32_t bi_space_max_level(const bi_space* space) {
  return space ? space->space.max_level() : -1;
}

bi_status bi_level_dimension(const bi_space* space, int32_t level, int32_t* out_dim) {
  return guarded(nullptr, [&]() -> bi_status {
    require_space(space);
    if (!out_dim) throw bi::ArgumentError("api: null output pointer");
    *out_dim = space->space.level_dimension(level);
    return BI_OK;
  });
}

bi_status bi_casimir_json(const bi_space* space, const int32_t* sites, int32_t n_subset,
                          char** out_json) {
  return guarded(out_json, [&]() -> bi_status {
    require_space(space);
    if (!out_json) throw bi::ArgumentError("api: null output pointer");
    const bi::SubsetMask mask = read_subset(space, sites, n_subset);
    *out_json = dup_string(bi::to_json(space->space.subset_casimir(mask)));
    return BI_OK;
  });
}

bi_status bi_verify(const bi_space* space, int32_t max_threads, int32_t emit_timing,
                    char** out_json) {
  return guarded(out_json, [&]() -> bi_status {
    require_space(space);
    if (!out_json) throw bi::ArgumentError("api: null output pointer");
    const bi::StructureReport report = bi::verify_all(space->space, max_threads);
    *out_json = dup_string(bi::structure_report_json(report, emit_timing != 0));
    if (!report.all_zero) {
      g_last_error = "structure relations violated";
      return BI_ERR_MATH;
    }
    return BI_OK;
  });
}

bi_status bi_spectrum(const bi_space* space, const int32_t* chain, int32_t level, double eig_tol,
                      char** out_json) {
  return guarded(out_json, [&]() -> bi_status {
    require_space(space);
    if (!out_json) throw bi::ArgumentError("api: null output pointer");
    const bi::ChainAlgebra alg = bi::make_chain(read_perm(space, chain));
    const bi::EigenBasis basis = bi::joint_eigenbasis(space->space, alg, level);
    *out_json = dup_string(bi::spectrum_report_json(basis));
    if (basis.max_eigen_residual > eig_tol) {
      g_last_error = "eigenvector residual above tolerance";
      return BI_ERR_MATH;
    }
    return BI_OK;
  });
}

bi_status bi_tridiag(const bi_space* space, const int32_t* chain, const int32_t* op_sites,
                     int32_t n_op, int32_t level, int32_t sort_key, double eig_tol,
                     double band_tol, char** out_json) {
  return guarded(out_json, [&]() -> bi_status {
    require_space(space);
    if (!out_json) throw bi::ArgumentError("api: null output pointer");
    const bi::ChainAlgebra alg = bi::make_chain(read_perm(space, chain));
    const bi::SubsetMask op = read_subset(space, op_sites, n_op);
    if (op == 0) throw bi::ArgumentError("api: empty operator subset");
    const bi::EigenBasis basis = bi::joint_eigenbasis(space->space, alg, level);
    const int key = sort_key < 0 ? bi::auto_sort_key(basis, op) : sort_key;
    const bi::TridiagonalAction tri = bi::tridiagonal_action(space->space, op, basis, key);
    *out_json = dup_string(bi::tridiag_report_json(tri, basis, op));
    if (basis.max_eigen_residual > eig_tol) {
      g_last_error = "eigenvector residual above tolerance";
      return BI_ERR_MATH;
    }
    if (tri.offband_residual > band_tol) {
      g_last_error = "off-band mass above tolerance";
      return BI_ERR_MATH;
    }
    return BI_OK;
  });
}

bi_status bi_connection(const bi_space* space, const int32_t* from, const int32_t* to,
                        int32_t level, double eig_tol, double cc_tol, char** out_json) {
  return guarded(out_json, [&]() -> bi_status {
    require_space(space);
    if (!out_json) throw bi::ArgumentError("api: null output pointer");
    const std::vector<int> from_perm = read_perm(space, from);
    const std::vector<int> to_perm = read_perm(space, to);
    const std::vector<bi::SwapStep> path = bi::adjacent_path(from_perm, to_perm);

    double max_eig_residual = 0.0;
    bi::ConnectionSummary summary;

    // Walk the path: accumulate the composed overlap and check the
    // three-term recurrence across every chain-changing swap.
    bi::EigenBasis current =
        bi::joint_eigenbasis(space->space, bi::make_chain(from_perm), level);
    const bi::EigenBasis first = current;
    max_eig_residual = std::max(max_eig_residual, current.max_eigen_residual);
    Eigen::MatrixXd composed =
        Eigen::MatrixXd::Identity(current.vectors.cols(), current.vectors.cols());
    double orth = 0.0, block_res = 0.0;
    for (const bi::SwapStep& step : path) {
      bi::EigenBasis next =
          bi::joint_eigenbasis(space->space, bi::make_chain(step.after), level);
      max_eig_residual = std::max(max_eig_residual, next.max_eigen_residual);
      const bi::ConnectionMatrix c = bi::block_overlap(current, next, step);
      orth = std::max(orth, c.orthogonality_residual);
      block_res = std::max(block_res, c.block_residual);
      if (!step.trivial()) {
        const bi::ChainAlgebra after_chain = bi::make_chain(step.after);
        const bi::SubsetMask incoming =
            after_chain.generators[static_cast<std::size_t>(step.position - 2)];
        const bi::TridiagonalAction tri =
            bi::tridiagonal_action(space->space, incoming, current, step.position - 2);
        const bi::RecurrenceReport rec = bi::check_three_term(c, tri);
        summary.recurrence_residual = std::max(summary.recurrence_residual, rec.max_residual);
      }
      composed = c.global * composed;
      current = std::move(next);
    }

    summary.cc = bi::overlap(first, current, from_perm, to_perm);
    orth = std::max(orth, summary.cc.orthogonality_residual);
    block_res = std::max(block_res, summary.cc.block_residual);
    summary.cc.orthogonality_residual = orth;
    summary.cc.block_residual = block_res;
    summary.path_residual = (composed - summary.cc.global).cwiseAbs().maxCoeff();

    *out_json = dup_string(bi::connection_report_json(summary));
    if (max_eig_residual > eig_tol) {
      g_last_error = "eigenvector residual above tolerance";
      return BI_ERR_MATH;
    }
    if (orth > cc_tol || block_res > cc_tol) {
      g_last_error = "connection blocks not orthogonal/block-diagonal within tolerance";
      return BI_ERR_MATH;
    }
    if (summary.path_residual > 10 * cc_tol || summary.recurrence_residual > 10 * cc_tol) {
      g_last_error = "path consistency or recurrence residual above tolerance";
      return BI_ERR_MATH;
    }
    return BI_OK;
  });
}

void bi_string_free(char* s) { std::free(s); }

}  // extern "C"
