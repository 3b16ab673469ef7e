#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "efpdet/contour.hpp"
#include "efpdet/matrix.hpp"

namespace efpdet {

// ---------------------------------------------------------------------------
// psi from the magnetic field h

struct FieldAngle {
  double psi = 0;
  double coupling_l = 0;  ///< L with cosh 2L = 2/h
  bool wrapped = false;   ///< the Moebius image needed wrapping into (-pi, 0)
};

/// psi in (-pi, 0) with e^{-i psi} = -i (e^{-2L} - i)/(e^{-2L} + i), cosh 2L = 2/h.
/// Throws DomainError unless 0 < h < 2.
FieldAngle psi_from_field(double h);

// ---------------------------------------------------------------------------
// sweeps

struct SweepRecord {
  int n = 0;
  double log_p = 0;
  std::optional<double> ratio_log;    ///< log P(n+1) - log P(n)
  std::optional<double> second_diff;  ///< log P(n+1) - 2 log P(n) + log P(n-1)
  double predicted_ratio_log = 0;
  double predicted_leading = 0;
  bool converged = false;
  double min_pivot = 0;
};

struct SweepConfig {
  ModelParams base;
  int n_min = 0;
  int n_max = 12;
  std::size_t m_nodes = 128;
  bool parallel = true;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<std::string> aborted;  ///< one message per row dropped by the pivot guard

  /// Records with converged = true.
  std::vector<SweepRecord> accepted() const;
};

SweepResult run_sweep(const SweepConfig& config);

// ---------------------------------------------------------------------------
// emission

enum class Format { csv, json };

Format parse_format(const std::string& name);

/// Column order of the CSV output.
inline constexpr const char* kCsvHeader =
    "n,log_p,ratio_log,second_diff,predicted_ratio_log,predicted_leading,converged,min_pivot";

void emit(const std::vector<SweepRecord>& records, Format format, std::ostream& out);
/// destination "-" or "stdout" writes to standard output.
void emit(const std::vector<SweepRecord>& records, Format format, const std::string& destination);

std::vector<SweepRecord> records_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// verification suites

enum class VerifyLevel { quick, full };

struct VerifyCheck {
  std::string id;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;
  bool overall = true;

  void add(std::string id, double residual, double tolerance);
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::quick;
  double gamma = 1.0;
  std::complex<double> beta_fault{1, 0};  ///< multiplies beta inside the circle in the F~ jump check
};

VerifyReport run_verify(const VerifyOptions& options = {});

void print_report(const VerifyReport& report, std::ostream& out);

/// Fourth root of f4 tracked continuously along the positive real axis from
/// `start` (where the root is taken close to 1) down to 0. Independent of
/// the closed-form branch selection in beta_fn.
std::complex<double> track_fourth_root_to_origin(const std::function<std::complex<double>(std::complex<double>)>& f4,
                                                 double start = 1e6, std::size_t steps = 200000);

/// Max |g(z0) - mean of g over a small circle around z0| for `count`
/// pseudo-random centres off C (Cauchy mean-value probe of analyticity).
double analyticity_probe(double psi, std::size_t count, unsigned seed = 7,
                         bool probe_beta = false);

// ---------------------------------------------------------------------------
// input parsing

/// "re+imi" style complex literal: "1", "-0.5", "2i", "0.1-3e-2i", "-i".
std::complex<double> parse_complex(const std::string& text);
/// Comma-separated list of complex literals.
std::vector<std::complex<double>> parse_complex_list(const std::string& text);

struct RunConfig {
  std::optional<double> psi;
  std::optional<double> field_h;
  int n_min = 0;
  int n_max = 12;
  std::size_t m_nodes = 128;
  std::size_t hl_nodes = 64;
  std::vector<std::complex<double>> phi_coeffs;
  double gamma = 1.0;
  std::string output = "stdout";
  std::optional<std::string> format;

  /// psi, from either key; throws DomainError unless exactly one is present.
  double resolved_psi() const;
};

/// Parses the JSON config document; throws DomainError on schema violations.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace efpdet
