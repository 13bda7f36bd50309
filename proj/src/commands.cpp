#include "conbar/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "conbar/formats.hpp"

namespace conbar {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUnstable = 2;
constexpr int kExitNumerical = 3;

int status_exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return kExitOk;
    case SolveStatus::UnstableInput: return kExitUnstable;
    default: return kExitNumerical;
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Writes through either to the given path or to the fallback stream.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw FormatError("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open input file " + path);
  return in;
}

double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const auto idx = static_cast<size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
  return sorted[std::min(sorted.size() - 1, idx == 0 ? 0 : idx - 1)];
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "newton") return Method::NewtonFixed;
  if (name == "drnm") return Method::DRNM;
  if (name == "ay") return Method::AbikoffYe;
  throw FormatError("unknown method '" + name + "' (expected newton, drnm or ay)");
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
  if (name == "uniform") return EnsembleKind::UniformSphere;
  if (name == "vmf") return EnsembleKind::VonMisesFisher;
  if (name == "hardkink") return EnsembleKind::HardKink;
  throw FormatError("unknown ensemble kind '" + name + "'");
}

int cmd_barycenter(const BarycenterOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in = open_input(opt.input_path);
    DiscreteMeasure mu = read_measure_json(in);

    SolverConfig cfg;
    cfg.method = parse_method(opt.method);
    cfg.epsilon = opt.eps;
    cfg.alpha = opt.alpha;
    cfg.max_iter = opt.max_iter;

    BallPoint start = BallPoint::origin(mu.dim());
    if (!opt.start.empty()) {
      if (static_cast<Eigen::Index>(opt.start.size()) != mu.dim())
        throw FormatError("--start needs exactly 'dimension' coordinates");
      start = BallPoint(Eigen::Map<const Vector>(opt.start.data(), mu.dim()));
    }

    SolveResult res = solve_barycenter(mu, start, cfg);

    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["barycenter"] = std::vector<double>(res.barycenter.coords().data(),
                                            res.barycenter.coords().data() + res.barycenter.dim());
    doc["error_bound"] = res.error_bound;
    doc["iterations"] = res.trace.iterations();
    json qh = json::array();
    for (const IterationRecord& r : res.trace.records) qh.push_back(r.q);
    doc["q_history"] = std::move(qh);
    doc["status"] = to_string(res.trace.status);

    OutputTarget target(opt.out, out);
    target.stream() << doc.dump(2) << '\n';
    return status_exit_code(res.trace.status);
  } catch (const std::invalid_argument& e) {
    err << "barycenter: " << e.what() << '\n';
    return kExitInput;
  } catch (const FormatError& e) {
    err << "barycenter: " << e.what() << '\n';
    return kExitInput;
  } catch (const GeometryError& e) {
    err << "barycenter: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int cmd_close(const CloseOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in = open_input(opt.input_path);
    OpenPolygon polygon = read_polygon_json(in);

    SolverConfig cfg;
    cfg.method = Method::DRNM;
    cfg.epsilon = opt.eps;
    cfg.alpha = opt.alpha;
    cfg.max_iter = opt.max_iter;

    ClosedPolygon closed = close_polygon(polygon, cfg);
    OutputTarget target(opt.out, out);
    write_closed_polygon_json(closed, target.stream());
    return kExitOk;
  } catch (const UnstableInputError& e) {
    err << "close: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const SolverFailure& e) {
    err << "close: " << e.what() << '\n';
    return status_exit_code(e.status);
  } catch (const std::invalid_argument& e) {
    err << "close: " << e.what() << '\n';
    return kExitInput;
  } catch (const FormatError& e) {
    err << "close: " << e.what() << '\n';
    return kExitInput;
  } catch (const GeometryError& e) {
    err << "close: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int cmd_extend(const ExtendOptions& opt, std::ostream& err) {
  try {
    if (opt.out.empty()) throw FormatError("extend requires --out (OBJ path)");
    std::ifstream in = open_input(opt.input_path);
    SphericalCurve curve = read_curve_json(in);

    SolverConfig cfg;
    cfg.method = Method::DRNM;
    cfg.epsilon = opt.eps;
    cfg.alpha = opt.alpha;
    cfg.max_iter = opt.max_iter;

    ExtensionGrid grid = douady_earle_grid(
        [&curve](const SpherePoint& p) { return curve(p); }, opt.n_r, opt.n_theta,
        opt.quadrature, cfg, opt.r_max);

    std::ofstream obj(opt.out);
    if (!obj) throw FormatError("cannot open output file " + opt.out);
    write_obj(grid, obj);

    json diag;
    diag["schema_version"] = kSchemaVersion;
    diag["n_r"] = grid.n_r;
    diag["n_theta"] = grid.n_theta;
    diag["r_max"] = grid.r_max;
    diag["quadrature"] = grid.quadrature;
    json iters = json::array();
    json statuses = json::array();
    for (const PointDiagnostics& d : grid.diagnostics) {
      iters.push_back(d.iterations);
      statuses.push_back(to_string(d.status));
    }
    diag["iterations"] = std::move(iters);
    diag["statuses"] = std::move(statuses);
    const double frac =
        static_cast<double>(grid.converged_points()) / static_cast<double>(grid.solved_points());
    diag["converged_fraction"] = frac;
    diag["median_iterations"] = grid.median_iterations();
    std::ofstream sidecar(opt.out + ".diag.json");
    if (!sidecar) throw FormatError("cannot open output file " + opt.out + ".diag.json");
    sidecar << diag.dump(2) << '\n';

    return frac >= 0.99 ? kExitOk : kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "extend: " << e.what() << '\n';
    return kExitInput;
  } catch (const FormatError& e) {
    err << "extend: " << e.what() << '\n';
    return kExitInput;
  } catch (const GeometryError& e) {
    err << "extend: " << e.what() << '\n';
    return kExitNumerical;
  }
}

std::vector<double> qcdf_samples(int n, Eigen::Index d, int samples, uint64_t seed) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::UniformSphere;
  spec.n = n;
  spec.d = d;
  spec.samples = samples;
  spec.seed = seed;
  std::vector<double> qs;
  qs.reserve(static_cast<size_t>(samples));
  for (int i = 0; i < samples; ++i)
    qs.push_back(nk_report(sample_measure(spec, static_cast<uint64_t>(i))).q);
  std::sort(qs.begin(), qs.end());
  return qs;
}

int cmd_qcdf(const QcdfOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.n < 1 || opt.d < 2 || opt.samples < 1) throw FormatError("qcdf: bad ensemble sizes");
    const std::vector<double> qs = qcdf_samples(opt.n, opt.d, opt.samples, opt.seed);
    const auto total = static_cast<double>(qs.size());
    const auto above =
        qs.end() - std::upper_bound(qs.begin(), qs.end(), 0.99);  // P(q > 0.99) numerator

    OutputTarget target(opt.out, out);
    std::ostream& os = target.stream();
    os << "# schema_version," << kSchemaVersion << '\n';
    os << "# command,qcdf\n";
    os << "# n," << opt.n << '\n';
    os << "# d," << opt.d << '\n';
    os << "# samples," << opt.samples << '\n';
    os << "# seed," << opt.seed << '\n';
    os << "# p_q_gt_0.99," << fmt(static_cast<double>(above) / total) << '\n';
    os << "# q_p50," << fmt(percentile(qs, 50)) << '\n';
    os << "# q_p90," << fmt(percentile(qs, 90)) << '\n';
    os << "# q_p99," << fmt(percentile(qs, 99)) << '\n';
    os << "rank,q,cdf\n";
    for (size_t i = 0; i < qs.size(); ++i)
      os << i + 1 << ',' << fmt(qs[i]) << ',' << fmt(static_cast<double>(i + 1) / total) << '\n';
    return kExitOk;
  } catch (const FormatError& e) {
    err << "qcdf: " << e.what() << '\n';
    return kExitInput;
  }
}

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    EnsembleSpec spec;
    spec.kind = parse_ensemble_kind(opt.kind);
    spec.n = opt.n;
    spec.d = opt.d;
    spec.samples = opt.samples;
    spec.seed = opt.seed;
    spec.kappa = opt.kappa;

    std::vector<Method> methods;
    for (const std::string& m : opt.methods) methods.push_back(parse_method(m));
    if (methods.empty()) throw FormatError("bench: no methods given");

    OutputTarget target(opt.out, out);
    std::ostream& os = target.stream();
    os << "# schema_version," << kSchemaVersion << '\n';
    os << "# command,bench\n";
    os << "# kind," << opt.kind << '\n';
    os << "# n," << opt.n << ",d," << opt.d << ",samples," << opt.samples << ",seed," << opt.seed
       << ",kappa," << fmt(opt.kappa) << ",eps," << fmt(opt.eps) << '\n';
    os << "# wall_ms is wall-clock and not reproducible; iteration counts are exact\n";
    os << "instance,method,iterations,status,wall_ms\n";

    std::vector<std::vector<double>> iteration_counts(methods.size());
    for (int i = 0; i < opt.samples; ++i) {
      const DiscreteMeasure mu = sample_measure(spec, static_cast<uint64_t>(i));
      for (size_t m = 0; m < methods.size(); ++m) {
        SolverConfig cfg;
        cfg.method = methods[m];
        cfg.epsilon = opt.eps;
        cfg.max_iter = opt.max_iter;
        const auto t0 = std::chrono::steady_clock::now();
        SolveResult res = solve_barycenter(mu, cfg);
        const auto t1 = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        iteration_counts[m].push_back(res.trace.iterations());
        os << i << ',' << opt.methods[m] << ',' << res.trace.iterations() << ','
           << to_string(res.trace.status) << ',' << fmt(ms) << '\n';
      }
    }

    // Percentile bands matching the shaded-figure convention: p/2 and
    // 100-p/2 for p in {0, 10, 50}, plus the median.
    for (size_t m = 0; m < methods.size(); ++m) {
      std::vector<double>& counts = iteration_counts[m];
      std::sort(counts.begin(), counts.end());
      os << "# iterations_percentiles," << opt.methods[m];
      for (double p : {0.0, 5.0, 25.0, 50.0, 75.0, 95.0, 100.0})
        os << ",p" << p << ',' << fmt(percentile(counts, p));
      os << '\n';
    }
    return kExitOk;
  } catch (const FormatError& e) {
    err << "bench: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "bench: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace conbar
