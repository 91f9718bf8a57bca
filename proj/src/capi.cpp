#include "pw/pw_c.h"

#include <cstring>
#include <string>

#include "pw/affine.hpp"
#include "pw/errors.hpp"
#include "pw/io.hpp"
#include "pw/runner.hpp"
#include "pw/signal.hpp"

struct pw_signal {
  pw::PWSignal impl;
};

namespace {

thread_local std::string g_last_error;

pw_status status_of(const pw::Error& e) {
  switch (e.code()) {
    case pw::ErrorCode::DomainError: return PW_ERR_DOMAIN;
    case pw::ErrorCode::IndexError: return PW_ERR_INDEX;
    case pw::ErrorCode::DimensionError: return PW_ERR_DIMENSION;
    case pw::ErrorCode::SingularMatrix: return PW_ERR_SINGULAR;
    case pw::ErrorCode::NotInjective: return PW_ERR_NOT_INJECTIVE;
    case pw::ErrorCode::UnsupportedRep: return PW_ERR_UNSUPPORTED_REP;
    case pw::ErrorCode::ResourceLimit: return PW_ERR_RESOURCE;
    case pw::ErrorCode::UndefinedBandwidth: return PW_ERR_UNDEFINED_BANDWIDTH;
    case pw::ErrorCode::DegenerateLine: return PW_ERR_DEGENERATE_LINE;
    case pw::ErrorCode::ResolutionTooCoarse: return PW_ERR_RESOLUTION;
    case pw::ErrorCode::WrongRegime: return PW_ERR_WRONG_REGIME;
    case pw::ErrorCode::Precondition: return PW_ERR_PRECONDITION;
    case pw::ErrorCode::IoError: return PW_ERR_IO;
    case pw::ErrorCode::ParseError: return PW_ERR_PARSE;
  }
  return PW_ERR_INTERNAL;
}

template <typename Fn>
pw_status guarded(Fn&& fn) {
  try {
    fn();
    return PW_OK;
  } catch (const pw::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PW_ERR_INTERNAL;
  }
}

bool parse_kind(char kind, pw::CatalogKind* out) {
  switch (kind) {
    case 'K': case 'k': *out = pw::CatalogKind::K; return true;
    case 'P': case 'p': *out = pw::CatalogKind::P; return true;
    case 'Q': case 'q': *out = pw::CatalogKind::Q; return true;
  }
  return false;
}

}  // namespace

extern "C" {

const char* pw_last_error(void) { return g_last_error.c_str(); }

const char* pw_version(void) {
  static const std::string v = pw::runner::tool_version();
  return v.c_str();
}

pw_status pw_signal_catalog(int dim, char kind, int axis, pw_signal** out) {
  if (!out) {
    g_last_error = "pw_signal_catalog: out is NULL";
    return PW_ERR_INVALID_ARGUMENT;
  }
  pw::CatalogKind ck;
  if (!parse_kind(kind, &ck)) {
    g_last_error = "pw_signal_catalog: kind must be 'K', 'P' or 'Q'";
    return PW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new pw_signal{pw::PWSignal::catalog(dim, ck, axis)};
  });
}

pw_status pw_signal_load(const char* json_path, pw_signal** out) {
  if (!json_path || !out) {
    g_last_error = "pw_signal_load: NULL argument";
    return PW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new pw_signal{pw::io::load_signal(json_path)};
  });
}

pw_status pw_signal_save(const pw_signal* sig, const char* json_path) {
  if (!sig || !json_path) {
    g_last_error = "pw_signal_save: NULL argument";
    return PW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { pw::io::save_signal(sig->impl, json_path); });
}

void pw_signal_free(pw_signal* sig) { delete sig; }

int pw_signal_dim(const pw_signal* sig) { return sig ? sig->impl.dim() : 0; }

double pw_signal_band_radius(const pw_signal* sig) {
  return sig ? sig->impl.support().ball_radius() : 0.0;
}

pw_status pw_signal_eval(const pw_signal* sig, const double* t, double* re,
                         double* im) {
  if (!sig || !t || !re || !im) {
    g_last_error = "pw_signal_eval: NULL argument";
    return PW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    pw::Vector point = Eigen::Map<const pw::Vector>(t, sig->impl.dim());
    pw::Complex v = sig->impl.eval(point);
    *re = v.real();
    *im = v.imag();
  });
}

pw_status pw_signal_eval_line(const pw_signal* sig, const double* anchor,
                              const double* direction, double z_re,
                              double z_im, double* re, double* im) {
  if (!sig || !anchor || !direction || !re || !im) {
    g_last_error = "pw_signal_eval_line: NULL argument";
    return PW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    int n = sig->impl.dim();
    pw::Vector a = Eigen::Map<const pw::Vector>(anchor, n);
    pw::Vector b = Eigen::Map<const pw::Vector>(direction, n);
    pw::Complex v =
        pw::eval_pw_complex_on_line(sig->impl, a, b, pw::Complex(z_re, z_im));
    *re = v.real();
    *im = v.imag();
  });
}

pw_status pw_signal_compose_affine(const pw_signal* sig,
                                   const double* a_rowmajor, int rows,
                                   int cols, const double* offset,
                                   pw_signal** out) {
  if (!sig || !a_rowmajor || !out || rows < 1 || cols < 1) {
    g_last_error = "pw_signal_compose_affine: bad arguments";
    return PW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    pw::Matrix A(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) A(r, c) = a_rowmajor[r * cols + c];
    pw::Vector b = pw::Vector::Zero(rows);
    if (offset) b = Eigen::Map<const pw::Vector>(offset, rows);
    *out = new pw_signal{pw::affine::compose_affine(sig->impl, A, b)};
  });
}

pw_status pw_kernel_basis(const double* a_rowmajor, int rows, int cols,
                          double* basis_out, int* count) {
  if (!a_rowmajor || !basis_out || !count || rows < 1 || cols < 1) {
    g_last_error = "pw_kernel_basis: bad arguments";
    return PW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    pw::Matrix A(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) A(r, c) = a_rowmajor[r * cols + c];
    auto basis = pw::affine::kernel_basis(A);
    *count = static_cast<int>(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (int c = 0; c < cols; ++c) basis_out[i * cols + c] = basis[i][c];
  });
}

pw_status pw_identity_residual(const double* t, int dim, int axis,
                               pw_identity which, double* residual) {
  if (!t || !residual || dim < 1) {
    g_last_error = "pw_identity_residual: bad arguments";
    return PW_ERR_INVALID_ARGUMENT;
  }
  if (which != PW_IDENTITY_MODULATION && which != PW_IDENTITY_PRODUCT) {
    g_last_error = "pw_identity_residual: unknown identity selector";
    return PW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    pw::Vector point = Eigen::Map<const pw::Vector>(t, dim);
    *residual = pw::identity_residual(point, axis,
                                      which == PW_IDENTITY_MODULATION
                                          ? pw::IdentityKind::Modulation
                                          : pw::IdentityKind::Product);
  });
}

pw_status pw_describe_catalog(int dim, char kind, int axis, char* buffer,
                              size_t buffer_len) {
  if (!buffer || buffer_len == 0) {
    g_last_error = "pw_describe_catalog: bad buffer";
    return PW_ERR_INVALID_ARGUMENT;
  }
  pw::CatalogKind ck;
  if (!parse_kind(kind, &ck)) {
    g_last_error = "pw_describe_catalog: kind must be 'K', 'P' or 'Q'";
    return PW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::string text = pw::runner::describe_catalog(dim, ck, axis);
    std::strncpy(buffer, text.c_str(), buffer_len - 1);
    buffer[buffer_len - 1] = '\0';
  });
}

int pw_run_experiment(const char* config_path, const char* out_dir,
                      int has_seed, uint64_t seed, int has_tol, double tol,
                      int emit_plots) {
  if (!config_path) {
    g_last_error = "pw_run_experiment: config_path is NULL";
    return 1;
  }
  std::string message;
  int status = pw::runner::run_experiment_file(
      config_path, out_dir ? out_dir : "pw-out",
      has_seed ? std::optional<std::uint64_t>(seed) : std::nullopt,
      has_tol ? std::optional<double>(tol) : std::nullopt, emit_plots != 0,
      &message);
  g_last_error = message;
  return status;
}

}  // extern "C"
