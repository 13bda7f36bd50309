#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "conbar/random.hpp"

// Command implementations behind the CLI, kept stream-based so they can be
// exercised in-process. Exit codes: 0 success, 1 input error, 2 unstable
// input, 3 numerical failure.

namespace conbar {

struct BarycenterOptions {
  std::string input_path;
  std::string method = "drnm";  // newton | drnm | ay
  double eps = 1e-8;
  double alpha = 1.0;
  int max_iter = 1000;
  std::vector<double> start;  // optional; origin when empty
  std::string out;            // optional output path; stdout when empty
};

struct CloseOptions {
  std::string input_path;
  double eps = 1e-8;
  double alpha = 1.0;
  int max_iter = 1000;
  std::string out;
};

struct ExtendOptions {
  std::string input_path;
  int n_r = 20;
  int n_theta = 60;
  int quadrature = 720;
  double r_max = 0.95;
  double eps = 1e-8;
  double alpha = 1.0;
  int max_iter = 1000;
  std::string out;  // OBJ path (required); diagnostics land in out + ".diag.json"
};

struct QcdfOptions {
  int n = 64;
  Eigen::Index d = 3;
  int samples = 100000;
  uint64_t seed = 0;
  std::string out;
};

struct BenchOptions {
  std::string kind = "uniform";  // uniform | vmf | hardkink
  int n = 100;
  Eigen::Index d = 3;
  int samples = 100;
  uint64_t seed = 0;
  double kappa = 1.0;
  std::vector<std::string> methods = {"drnm", "ay"};
  double eps = 1e-8;
  int max_iter = 100000;
  std::string out;
};

int cmd_barycenter(const BarycenterOptions& opt, std::ostream& out, std::ostream& err);
int cmd_close(const CloseOptions& opt, std::ostream& out, std::ostream& err);
int cmd_extend(const ExtendOptions& opt, std::ostream& err);
int cmd_qcdf(const QcdfOptions& opt, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err);

// Shared by cmd_qcdf and the acceptance suite: sorted q values for `samples`
// uniform equal-weight measures.
std::vector<double> qcdf_samples(int n, Eigen::Index d, int samples, uint64_t seed);

Method parse_method(const std::string& name);
EnsembleKind parse_ensemble_kind(const std::string& name);

}  // namespace conbar
