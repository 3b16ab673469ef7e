#include "efpdet/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

#include "efpdet/asymptotics.hpp"
#include "efpdet/branches.hpp"
#include "efpdet/errors.hpp"
#include "efpdet/fredholm.hpp"
#include "efpdet/opkernels.hpp"

namespace efpdet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSweepMaxN = 200;

using json = nlohmann::json;

}  // namespace

// ---------------------------------------------------------------------------

FieldAngle psi_from_field(double h) {
  if (!(h > 0.0 && h < 2.0)) {
    std::ostringstream os;
    os << "field h = " << h << " outside (0, 2)";
    throw DomainError(os.str());
  }
  FieldAngle out;
  out.coupling_l = 0.5 * std::acosh(2.0 / h);
  const double x = std::exp(-2.0 * out.coupling_l);
  const cplx image = cplx(0, -1) * (cplx(x, -1) / cplx(x, 1));  // e^{-i psi}
  double psi = -std::arg(image);
  if (!(psi > -kPi && psi < 0.0)) {
    out.wrapped = true;
    psi = std::remainder(psi, 2 * kPi);
    if (psi >= 0.0) psi -= 2 * kPi;
  }
  out.psi = psi;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<SweepRecord> SweepResult::accepted() const {
  std::vector<SweepRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const SweepRecord& r) { return r.converged; });
  return out;
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.n_min < 0) throw DomainError("n_min must be nonnegative");
  if (config.n_max < config.n_min) throw DomainError("n_max must not be below n_min");
  if (config.n_max > kSweepMaxN) throw DomainError("n_max exceeds the sweep limit");
  if (config.m_nodes < 2) throw DomainError("m_nodes must be at least 2");
  config.base.validate();

  struct Row {
    int n = 0;
    std::optional<LogDet> value;
    std::string failure;
  };

  auto compute_row = [&config](int n) {
    Row row;
    row.n = n;
    ModelParams p = config.base;
    p.n = n;
    try {
      LogDet d = fredholm_logdet(p, config.m_nodes);
      if (!d.trusted()) {
        std::ostringstream os;
        os << "n = " << n << ": smallest pivot " << d.min_pivot << " below " << kMinTrustedPivot;
        row.failure = os.str();
      } else {
        row.value = d;
      }
    } catch (const NumericalError& e) {
      row.failure = "n = " + std::to_string(n) + ": " + e.what();
    }
    return row;
  };

  std::vector<Row> rows;
  if (config.parallel) {
    std::vector<std::future<Row>> pending;
    for (int n = config.n_min; n <= config.n_max; ++n)
      pending.push_back(std::async(std::launch::async, compute_row, n));
    for (auto& f : pending) rows.push_back(f.get());
  } else {
    for (int n = config.n_min; n <= config.n_max; ++n) rows.push_back(compute_row(n));
  }

  SweepResult result;
  std::map<int, double> log_p;
  for (const Row& row : rows) {
    if (!row.value) {
      std::clog << "sweep: row aborted, " << row.failure << '\n';
      result.aborted.push_back(row.failure);
      continue;
    }
    log_p[row.n] = row.value->log_abs;
    const Prediction pred = predictions(row.n, config.base.psi);
    SweepRecord r;
    r.n = row.n;
    r.log_p = row.value->log_abs;
    r.predicted_ratio_log = pred.log_ratio;
    r.predicted_leading = pred.leading_log_p;
    r.converged = row.value->converged;
    r.min_pivot = row.value->min_pivot;
    result.records.push_back(r);
  }
  for (SweepRecord& r : result.records) {
    const auto next = log_p.find(r.n + 1);
    const auto prev = log_p.find(r.n - 1);
    if (next != log_p.end()) r.ratio_log = next->second - r.log_p;
    if (next != log_p.end() && prev != log_p.end())
      r.second_diff = next->second - 2 * r.log_p + prev->second;
  }
  return result;
}

// ---------------------------------------------------------------------------

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw DomainError("unknown format '" + name + "' (expected csv or json)");
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const SweepRecord& r) {
  json j;
  j["n"] = r.n;
  j["log_p"] = r.log_p;
  j["ratio_log"] = r.ratio_log ? json(*r.ratio_log) : json(nullptr);
  j["second_diff"] = r.second_diff ? json(*r.second_diff) : json(nullptr);
  j["predicted_ratio_log"] = r.predicted_ratio_log;
  j["predicted_leading"] = r.predicted_leading;
  j["converged"] = r.converged;
  j["min_pivot"] = r.min_pivot;
  return j;
}

}  // namespace

void emit(const std::vector<SweepRecord>& records, Format format, std::ostream& out) {
  if (records.empty()) throw DomainError("emit: no records");
  if (format == Format::csv) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
      out << r.n << ',' << fmt17(r.log_p) << ',' << (r.ratio_log ? fmt17(*r.ratio_log) : "")
          << ',' << (r.second_diff ? fmt17(*r.second_diff) : "") << ','
          << fmt17(r.predicted_ratio_log) << ',' << fmt17(r.predicted_leading) << ','
          << (r.converged ? "true" : "false") << ',' << fmt17(r.min_pivot) << '\n';
    }
  } else {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(to_json(r));
    out << arr.dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("emit: write failed");
}

void emit(const std::vector<SweepRecord>& records, Format format, const std::string& destination) {
  if (destination == "-" || destination == "stdout") {
    emit(records, format, std::cout);
    return;
  }
  std::ofstream file(destination);
  if (!file) throw std::runtime_error("cannot open output file '" + destination + "'");
  try {
    emit(records, format, file);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string(e.what()) + " (destination '" + destination + "')");
  }
  file.close();
  if (!file) throw std::runtime_error("error closing output file '" + destination + "'");
}

std::vector<SweepRecord> records_from_json(const std::string& text) {
  const json arr = json::parse(text);
  if (!arr.is_array()) throw DomainError("records document must be a JSON array");
  std::vector<SweepRecord> out;
  for (const auto& j : arr) {
    SweepRecord r;
    r.n = j.at("n").get<int>();
    r.log_p = j.at("log_p").get<double>();
    if (!j.at("ratio_log").is_null()) r.ratio_log = j.at("ratio_log").get<double>();
    if (!j.at("second_diff").is_null()) r.second_diff = j.at("second_diff").get<double>();
    r.predicted_ratio_log = j.at("predicted_ratio_log").get<double>();
    r.predicted_leading = j.at("predicted_leading").get<double>();
    r.converged = j.at("converged").get<bool>();
    r.min_pivot = j.at("min_pivot").get<double>();
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------

void VerifyReport::add(std::string id, double residual, double tolerance) {
  VerifyCheck c;
  c.id = std::move(id);
  c.residual = residual;
  c.tolerance = tolerance;
  c.pass = residual < tolerance;  // NaN fails
  overall = overall && c.pass;
  checks.push_back(std::move(c));
}

cplx track_fourth_root_to_origin(const std::function<cplx(cplx)>& f4, double start,
                                 std::size_t steps) {
  if (!(start > 0.0) || steps < 2) throw DomainError("tracking needs start > 0 and steps >= 2");
  auto nearest_root = [&](cplx z, cplx previous) {
    const cplx principal = std::pow(f4(z), 0.25);
    cplx best = principal;
    cplx rot = principal;
    for (int k = 1; k < 4; ++k) {
      rot *= cplx(0, 1);
      if (std::abs(rot - previous) < std::abs(best - previous)) best = rot;
    }
    return best;
  };
  const double stop = 1e-9;
  cplx value = nearest_root(start, 1.0);
  const double ratio = std::log(stop / start) / double(steps);
  for (std::size_t k = 1; k <= steps; ++k)
    value = nearest_root(start * std::exp(ratio * double(k)), value);
  return nearest_root(0.0, value);
}

double analyticity_probe(double psi, std::size_t count, unsigned seed, bool probe_beta) {
  const BranchContext ctx = BranchContext::make(psi);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.1, 3.0);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  auto fn = [&](cplx z) { return probe_beta ? beta_fn(z, ctx) : g_fn(z, ctx); };

  constexpr std::size_t kCircleNodes = 64;
  double worst = 0;
  std::size_t done = 0;
  while (done < count) {
    const cplx z0 = std::polar(radius(rng), angle(rng));
    const double dist = distance_to_arc(psi, z0);
    if (dist < 0.05) continue;
    const double rho = std::min(0.5 * dist, 0.1);
    cplx mean{0, 0};
    for (std::size_t k = 0; k < kCircleNodes; ++k)
      mean += fn(z0 + std::polar(rho, 2 * kPi * double(k) / kCircleNodes));
    mean /= double(kCircleNodes);
    worst = std::max(worst, std::abs(mean - fn(z0)));
    ++done;
  }
  return worst;
}

namespace {

// Interior arc angles, equally spaced away from the endpoints.
std::vector<double> interior_angles(double psi, std::size_t count) {
  const double t0 = arc_theta_begin(psi), t1 = arc_theta_end(psi);
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(t0 + (t1 - t0) * (double(k) + 0.5) / double(count));
  return out;
}

// Runs one check; an exception turns into an infinite residual.
template <typename F>
void guarded(VerifyReport& report, const std::string& id, double tolerance, F&& residual) {
  double value;
  try {
    value = residual();
  } catch (const std::exception& e) {
    std::clog << "verify: " << id << " threw: " << e.what() << '\n';
    value = std::numeric_limits<double>::infinity();
  }
  report.add(id, value, tolerance);
}

void contour_suite(VerifyReport& report, std::size_t m) {
  const double psi = -kPi / 2;
  guarded(report, "contour.int_dz", 1e-12, [&] {
    const auto aq = build_arc(psi, m);
    cplx s{0, 0};
    for (const auto& w : aq.contour_weights) s += w;
    return std::abs(s - 2.0 * cplx(0, std::sin(psi)));
  });
  guarded(report, "contour.int_dz_over_z", 1e-12, [&] {
    const auto aq = build_arc(psi, m);
    cplx s{0, 0};
    for (std::size_t k = 0; k < m; ++k) s += aq.contour_weights[k] / aq.z_nodes[k];
    return std::abs(s - cplx(0, 2 * kPi + 2 * psi));
  });
  guarded(report, "contour.halfline_moments", 1e-10, [&] {
    const auto hq = build_halfline(m);
    double worst = 0, fact = 1;
    for (int k = 0; k <= 5; ++k) {
      if (k > 0) fact *= k;
      double s = 0;
      for (std::size_t j = 0; j < m; ++j)
        s += hq.weights[j] * std::pow(hq.s_nodes[j], k) * std::exp(-2 * hq.s_nodes[j]);
      const double exact = fact / std::pow(2.0, k + 1);
      worst = std::max(worst, std::abs(s - exact) / exact);
    }
    return worst;
  });
}

void branches_suite(VerifyReport& report, std::size_t samples) {
  for (double psi : {-0.3, -kPi / 2, -2.5}) {
    std::ostringstream id;
    id << "branches.g_origin[psi=" << psi << "]";
    guarded(report, id.str(), 1e-12, [&] {
      const double s = std::sin(psi / 2);
      return std::abs(g_fn(0.0, BranchContext::make(psi)) - s * s);
    });
  }
  const double psi = -kPi / 2;
  const BranchContext ctx = BranchContext::make(psi);
  const auto angles = interior_angles(psi, samples);
  guarded(report, "branches.g_product", 1e-5, [&] {
    double worst = 0;
    for (double th : angles) {
      const auto g = boundary_values(BranchFunction::g, th, ctx);
      worst = std::max(worst, std::abs(g.plus * g.minus - ctx.alpha / std::polar(1.0, th)));
    }
    return worst;
  });
  guarded(report, "branches.g_ratio_below_one", 1.0, [&] {
    double worst = 0;
    for (double th : angles) {
      const auto g = boundary_values(BranchFunction::g, th, ctx);
      worst = std::max(worst, std::abs(g.plus / g.minus));
    }
    return worst;
  });
  guarded(report, "branches.beta_ratio", 1e-5, [&] {
    double worst = 0;
    for (double th : angles) {
      const auto b = boundary_values(BranchFunction::beta, th, ctx);
      worst = std::max(worst, std::abs(b.plus / b.minus - cplx(0, 1)));
    }
    return worst;
  });
  guarded(report, "branches.g_infinity", 1e-7,
          [&] { return std::abs(g_fn(1e8, ctx) - 1.0); });
  guarded(report, "branches.g_analytic", 1e-8,
          [&] { return analyticity_probe(psi, samples, 7, false); });
  guarded(report, "branches.beta_analytic", 1e-8,
          [&] { return analyticity_probe(psi, samples, 11, true); });
  guarded(report, "branches.beta_origin_tracking", 1e-10, [&] {
    const cplx a = ctx.endpoint_begin, b = ctx.endpoint_end;
    const cplx tracked =
        track_fourth_root_to_origin([&](cplx z) { return (z - b) / (z - a); });
    return std::abs(beta_fn(0.0, ctx) - tracked);
  });
}

void opkernels_suite(VerifyReport& report, std::size_t m, std::size_t samples) {
  const double psi = -kPi / 2;
  const auto hq = build_halfline(m);
  const auto angles = interior_angles(psi, samples);
  ProjectionResiduals worst;
  bool failed = false;
  try {
    for (double th : angles) {
      const auto r = projection_residuals(std::polar(1.0, th), hq);
      worst.idempotence = std::max(worst.idempotence, r.idempotence);
      worst.self_adjoint = std::max(worst.self_adjoint, r.self_adjoint);
      worst.intertwining = std::max(worst.intertwining, r.intertwining);
      worst.composition = std::max(worst.composition, r.composition);
    }
  } catch (const std::exception& e) {
    std::clog << "verify: projection residuals threw: " << e.what() << '\n';
    failed = true;
  }
  const double inf = std::numeric_limits<double>::infinity();
  report.add("opkernels.idempotence", failed ? inf : worst.idempotence, 1e-8);
  report.add("opkernels.self_adjoint", failed ? inf : worst.self_adjoint, 1e-8);
  report.add("opkernels.intertwining", failed ? inf : worst.intertwining, 1e-8);
  report.add("opkernels.composition", failed ? inf : worst.composition, 1e-8);

  guarded(report, "opkernels.r_laplace", 1e-8, [&] {
    double worst_r = 0;
    for (std::size_t j = 0; j < angles.size(); ++j)
      for (std::size_t k = 0; k < angles.size(); ++k) {
        if (j == k) continue;
        const cplx z1 = std::polar(1.0, angles[j]), z2 = std::polar(1.0, angles[k]);
        const cplx exact = r_closed(z1, z2);
        worst_r = std::max(worst_r, std::abs(r_integral(z1, z2, hq) - exact) / std::abs(exact));
      }
    return worst_r;
  });
  guarded(report, "opkernels.q_eigenvalue", 1e-8, [&] {
    double worst_q = 0;
    for (double th : angles) {
      const cplx z = std::polar(1.0, th);
      const auto image = apply_kernel(
          hq, [&](double s, double t) { return q_kernel(z, s, t); },
          [&](double s) { return p_range_vector(z, s); });
      for (std::size_t j = 0; j < hq.node_count; ++j) {
        const cplx expected = (1.0 - z) / 2.0 * p_range_vector(z, hq.s_nodes[j]);
        worst_q = std::max(worst_q, std::abs(image[j] - expected));
      }
    }
    return worst_q;
  });
}

void fredholm_suite(VerifyReport& report, std::size_t m, std::size_t samples, double gamma,
                    VerifyLevel level) {
  const double psi = -kPi / 2;
  const auto angles = interior_angles(psi, samples);

  guarded(report, "fredholm.kernel_symmetry", 1e-12, [&] {
    const auto p = ModelParams::make(3, psi, {0.0, 0.1}, gamma);
    double worst = 0;
    for (std::size_t j = 0; j + 1 < angles.size(); ++j)
      worst = std::max(worst, std::abs(v_kernel(angles[j], angles[j + 1], p) -
                                       v_kernel(angles[j + 1], angles[j], p)));
    return worst;
  });
  guarded(report, "fredholm.diagonal_oracle", 1e-6, [&] {
    double worst = 0;
    const double h = 1e-2;
    for (const auto& p : {ModelParams::make(0, psi, {}, gamma), ModelParams::make(4, psi, {}, gamma),
                          ModelParams::make(3, psi, {0.0, 0.1}, gamma)}) {
      for (double th : angles) {
        // V(th - h, th + h) is even in h, so Richardson on h^2 applies
        const cplx coarse = v_kernel(th - h, th + h, p);
        const cplx fine = v_kernel(th - h / 2, th + h / 2, p);
        const cplx limit = (4.0 * fine - coarse) / 3.0;
        const cplx closed = v_diagonal(th, p);
        const double scale = std::max(std::abs(closed), 1e-300);
        worst = std::max(worst, gamma == 0.0 ? std::abs(limit - closed)
                                             : std::abs(limit - closed) / scale);
      }
    }
    return worst;
  });

  std::vector<int> ns;
  if (level == VerifyLevel::quick)
    ns = {0, 4, 8, 12};
  else
    for (int n = 0; n <= 12; ++n) ns.push_back(n);
  double worst_delta = 0, worst_arg = 0;
  bool failed = false;
  try {
    for (int n : ns) {
      const auto p = ModelParams::make(n, psi, {}, gamma);
      const LogDet coarse = fredholm_logdet_at(p, m);
      const LogDet fine = fredholm_logdet_at(p, 2 * m);
      worst_delta = std::max(worst_delta, std::abs(fine.log_abs - coarse.log_abs));
      worst_arg = std::max(worst_arg, std::abs(fine.arg));
    }
  } catch (const std::exception& e) {
    std::clog << "verify: determinant driver threw: " << e.what() << '\n';
    failed = true;
  }
  const double inf = std::numeric_limits<double>::infinity();
  report.add("fredholm.self_convergence", failed ? inf : worst_delta, 1e-8);
  report.add("fredholm.argument", failed ? inf : worst_arg, 1e-6);

  guarded(report, "fredholm.closed_vs_finite_rank", 1e-7, [&] {
    const auto p = ModelParams::make(4, psi, {}, gamma);
    const auto aq = build_arc<ExtendedReal>(psi, m);
    const auto hq = build_halfline<ExtendedReal>(64);
    const LogDet closed = logdet(assemble<ExtendedReal>(p, aq));
    const LogDet finite = logdet(assemble_finite_rank<ExtendedReal>(p, aq, hq));
    return std::abs(closed.log_abs - finite.log_abs);
  });
}

void asymptotics_suite(VerifyReport& report, std::size_t m, std::size_t samples,
                       cplx beta_fault) {
  const double psi = -kPi / 2;
  const BranchContext ctx = BranchContext::make(psi);
  const auto phi0 = ModelParams::make(0, psi);
  const auto phi1 = ModelParams::make(0, psi, {0.0, 0.1});
  const auto angles = interior_angles(psi, samples);

  guarded(report, "asymptotics.diagonalization", 1e-10, [&] {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    double worst = 0;
    for (std::size_t k = 0; k < samples;) {
      const cplx z{coord(rng), coord(rng)};
      if (std::abs(z - 1.0) <= 0.1) continue;
      worst = std::max(worst, diagonalize(z, phi1).residual);
      ++k;
    }
    return worst;
  });
  guarded(report, "asymptotics.conjugation", 1e-6, [&] {
    double worst = 0;
    for (int n : {1, 5, 10}) {
      const auto p = ModelParams::make(n, psi, {0.0, 0.1});
      for (double th : angles) worst = std::max(worst, conjugated_jump(th, ctx, p).identity_residual);
    }
    return worst;
  });
  guarded(report, "asymptotics.f_tilde_jump", 1e-5, [&] {
    double worst = 0;
    for (double th : angles)
      worst = std::max(worst, f_tilde_jump_residual(th, ctx, phi0, kDefaultBoundaryEps, beta_fault));
    return worst;
  });
  guarded(report, "asymptotics.f_tilde_det", 1e-8, [&] {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    double worst = 0;
    for (std::size_t k = 0; k < samples;) {
      const cplx z{coord(rng), coord(rng)};
      if (std::abs(z - 1.0) <= 0.1 || distance_to_arc(psi, z) < 1e-3) continue;
      worst = std::max(worst, std::abs(f_tilde(z, ctx, phi1).det() - 1.0));
      ++k;
    }
    return worst;
  });
  guarded(report, "asymptotics.f_tilde_22_at_one", 1e-3, [&] {
    double worst = 0;
    for (double d : {1e-4, 1e-6}) {
      const cplx left = f_tilde_22(1.0 - d, ctx), right = f_tilde_22(1.0 + d, ctx);
      if (!std::isfinite(std::abs(left)) || !std::isfinite(std::abs(right)))
        return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::abs(left - right));
    }
    return worst;
  });
  guarded(report, "asymptotics.factorization", 1e-7, [&] {
    const auto hq = build_halfline(m);
    double worst = 0;
    for (double p : {-0.8, -kPi / 2, -2.2}) {
      const auto params = ModelParams::make(4, p);
      for (double th : interior_angles(p, std::min<std::size_t>(samples, 10)))
        worst = std::max(worst, factor_check_im_ip(std::polar(1.0, th), params, hq));
    }
    return worst;
  });
  guarded(report, "asymptotics.lensing_decay", 1e-2, [&] {
    const auto hq = build_halfline(m);
    double worst = 0;
    for (double radius : {1.2, 0.8}) {
      const double v10 = decay_check_lensing(ModelParams::make(10, psi), radius, samples, hq);
      const double v20 = decay_check_lensing(ModelParams::make(20, psi), radius, samples, hq);
      const double expected = std::pow(radius > 1 ? 1 / radius : radius, 10);
      worst = std::max(worst, std::abs(v20 / v10 / expected - 1.0));
    }
    return worst;
  });
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  const bool quick = options.level == VerifyLevel::quick;
  const std::size_t m = quick ? 64 : 128;
  const std::size_t samples = quick ? 10 : 50;
  VerifyReport report;
  report.suite = quick ? "quick" : "full";
  contour_suite(report, m);
  branches_suite(report, samples);
  opkernels_suite(report, m, samples);
  fredholm_suite(report, m, samples, options.gamma, options.level);
  asymptotics_suite(report, m, samples, options.beta_fault);
  return report;
}

void print_report(const VerifyReport& report, std::ostream& out) {
  out << "suite: " << report.suite << '\n';
  for (const auto& c : report.checks) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-4s %-40s residual=%.3e tol=%.1e\n", c.pass ? "ok" : "FAIL",
                  c.id.c_str(), c.residual, c.tolerance);
    out << line;
  }
  out << "overall: " << (report.overall ? "PASS" : "FAIL") << '\n';
}

// ---------------------------------------------------------------------------

std::complex<double> parse_complex(const std::string& raw) {
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
  if (text.empty()) throw DomainError("empty complex literal");
  const auto bad = [&] { return DomainError("malformed complex literal '" + raw + "'"); };

  // Reads a signed real at pos; an empty magnitude before 'i' means 1.
  auto read_term = [&](std::size_t& pos, double& value, bool& imaginary) {
    const std::size_t begin = pos;
    double sign = 1;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') sign = -1;
      ++pos;
    }
    std::size_t used = 0;
    double mag = 1;
    bool have_number = false;
    if (pos < text.size() && text[pos] != 'i') {
      if (text[pos] == '+' || text[pos] == '-') throw bad();  // doubled sign
      try {
        mag = std::stod(text.substr(pos), &used);
      } catch (const std::exception&) {
        throw bad();
      }
      // stod also accepts "inf"/"nan" words; reject them
      for (std::size_t k = pos; k < pos + used; ++k)
        if (std::isalpha(static_cast<unsigned char>(text[k])) && text[k] != 'e' && text[k] != 'E')
          throw bad();
      pos += used;
      have_number = true;
    }
    imaginary = pos < text.size() && text[pos] == 'i';
    if (imaginary) ++pos;
    if (!have_number && !imaginary) throw bad();
    if (pos == begin) throw bad();
    value = sign * mag;
  };

  std::size_t pos = 0;
  double v1 = 0, v2 = 0;
  bool im1 = false, im2 = false;
  read_term(pos, v1, im1);
  if (pos == text.size()) return im1 ? cplx(0, v1) : cplx(v1, 0);
  if (im1 || (text[pos] != '+' && text[pos] != '-')) throw bad();
  read_term(pos, v2, im2);
  if (pos != text.size() || !im2) throw bad();
  return {v1, v2};
}

std::vector<std::complex<double>> parse_complex_list(const std::string& text) {
  std::vector<cplx> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  if (text.back() == ',') throw DomainError("trailing comma in coefficient list");
  return out;
}

double RunConfig::resolved_psi() const {
  if (psi.has_value() == field_h.has_value())
    throw DomainError("exactly one of psi or field_h must be given");
  return psi ? *psi : psi_from_field(*field_h).psi;
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DomainError("config must be a JSON object");
  static const std::vector<std::string> known{"psi",     "field_h",    "n_min", "n_max",
                                              "m_nodes", "hl_nodes",   "phi_coeffs",
                                              "gamma",   "output",     "format"};
  for (const auto& item : doc.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw DomainError("unknown config key '" + item.key() + "'");

  RunConfig cfg;
  try {
    if (doc.contains("psi")) cfg.psi = doc["psi"].get<double>();
    if (doc.contains("field_h")) cfg.field_h = doc["field_h"].get<double>();
    if (doc.contains("n_min")) cfg.n_min = doc["n_min"].get<int>();
    if (doc.contains("n_max")) cfg.n_max = doc["n_max"].get<int>();
    if (doc.contains("m_nodes")) cfg.m_nodes = doc["m_nodes"].get<std::size_t>();
    if (doc.contains("hl_nodes")) cfg.hl_nodes = doc["hl_nodes"].get<std::size_t>();
    if (doc.contains("gamma")) cfg.gamma = doc["gamma"].get<double>();
    if (doc.contains("output")) cfg.output = doc["output"].get<std::string>();
    if (doc.contains("format")) cfg.format = doc["format"].get<std::string>();
    if (doc.contains("phi_coeffs")) {
      const auto& phi = doc["phi_coeffs"];
      if (phi.is_string()) {
        cfg.phi_coeffs = parse_complex_list(phi.get<std::string>());
      } else if (phi.is_array()) {
        for (const auto& c : phi) {
          if (c.is_number())
            cfg.phi_coeffs.emplace_back(c.get<double>(), 0.0);
          else if (c.is_string())
            cfg.phi_coeffs.push_back(parse_complex(c.get<std::string>()));
          else if (c.is_array() && c.size() == 2)
            cfg.phi_coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
          else
            throw DomainError("phi_coeffs entries must be numbers, strings or [re, im] pairs");
        }
      } else {
        throw DomainError("phi_coeffs must be a string or an array");
      }
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("config type error: ") + e.what());
  }
  cfg.resolved_psi();  // enforces the psi / field_h exclusivity
  if (cfg.n_min < 0 || cfg.n_max < cfg.n_min) throw DomainError("config needs 0 <= n_min <= n_max");
  if (cfg.format) parse_format(*cfg.format);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace efpdet
