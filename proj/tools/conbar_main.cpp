#include <iostream>

#include <CLI11.hpp>

#include "conbar/commands.hpp"

// conbar: conformal barycenters on the Poincaré ball, polygon closure,
// Douady-Earle extension, and the ensemble harnesses.

int main(int argc, char** argv) {
  CLI::App app{"Conformal barycenter toolbox"};
  app.require_subcommand(1);

  conbar::BarycenterOptions bary;
  CLI::App* cmd_bary = app.add_subcommand("barycenter", "Barycenter of a measure file");
  cmd_bary->add_option("input", bary.input_path, "Measure JSON file")->required();
  cmd_bary->add_option("--method", bary.method, "newton | drnm | ay");
  cmd_bary->add_option("--eps", bary.eps, "Target error bound");
  cmd_bary->add_option("--alpha", bary.alpha, "Regularization weight");
  cmd_bary->add_option("--max-iter", bary.max_iter, "Iteration cap");
  cmd_bary->add_option("--start", bary.start, "Starting point coordinates")->delimiter(',');
  cmd_bary->add_option("--out", bary.out, "Output path (stdout when omitted)");

  conbar::CloseOptions close;
  CLI::App* cmd_close = app.add_subcommand("close", "Close a polygon file");
  cmd_close->add_option("input", close.input_path, "Polygon JSON file")->required();
  cmd_close->add_option("--eps", close.eps, "Target error bound");
  cmd_close->add_option("--alpha", close.alpha, "Regularization weight");
  cmd_close->add_option("--max-iter", close.max_iter, "Iteration cap");
  cmd_close->add_option("--out", close.out, "Output path (stdout when omitted)");

  conbar::ExtendOptions extend;
  CLI::App* cmd_extend = app.add_subcommand("extend", "Douady-Earle extension of a curve file");
  cmd_extend->add_option("input", extend.input_path, "Curve JSON file")->required();
  cmd_extend->add_option("--grid", [&extend](const std::vector<std::string>& vals) {
    if (vals.size() != 2) return false;
    extend.n_r = std::stoi(vals[0]);
    extend.n_theta = std::stoi(vals[1]);
    return true;
  }, "Polar grid: n_r n_theta")->expected(2);
  cmd_extend->add_option("--quadrature", extend.quadrature, "Circle quadrature size");
  cmd_extend->add_option("--rmax", extend.r_max, "Outermost solved radius");
  cmd_extend->add_option("--eps", extend.eps, "Target error bound");
  cmd_extend->add_option("--alpha", extend.alpha, "Regularization weight");
  cmd_extend->add_option("--max-iter", extend.max_iter, "Iteration cap");
  cmd_extend->add_option("--out", extend.out, "OBJ output path")->required();

  conbar::QcdfOptions qcdf;
  CLI::App* cmd_qcdf = app.add_subcommand("qcdf", "Empirical CDF of the NK quantity q");
  cmd_qcdf->add_option("--n", qcdf.n, "Atoms per measure");
  cmd_qcdf->add_option("--d", qcdf.d, "Ambient dimension");
  cmd_qcdf->add_option("--samples", qcdf.samples, "Sample count");
  cmd_qcdf->add_option("--seed", qcdf.seed, "RNG seed");
  cmd_qcdf->add_option("--out", qcdf.out, "CSV output path (stdout when omitted)");

  conbar::BenchOptions bench;
  CLI::App* cmd_bench = app.add_subcommand("bench", "Solver benchmark over an ensemble");
  cmd_bench->add_option("--kind", bench.kind, "uniform | vmf | hardkink");
  cmd_bench->add_option("--n", bench.n, "Edges per instance");
  cmd_bench->add_option("--d", bench.d, "Ambient dimension");
  cmd_bench->add_option("--samples", bench.samples, "Instance count");
  cmd_bench->add_option("--seed", bench.seed, "RNG seed");
  cmd_bench->add_option("--kappa", bench.kappa, "vMF concentration");
  cmd_bench->add_option("--methods", bench.methods, "Methods to run")->delimiter(',');
  cmd_bench->add_option("--eps", bench.eps, "Target error bound");
  cmd_bench->add_option("--max-iter", bench.max_iter, "Iteration cap");
  cmd_bench->add_option("--out", bench.out, "CSV output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  if (cmd_bary->parsed()) return conbar::cmd_barycenter(bary, std::cout, std::cerr);
  if (cmd_close->parsed()) return conbar::cmd_close(close, std::cout, std::cerr);
  if (cmd_extend->parsed()) return conbar::cmd_extend(extend, std::cerr);
  if (cmd_qcdf->parsed()) return conbar::cmd_qcdf(qcdf, std::cout, std::cerr);
  if (cmd_bench->parsed()) return conbar::cmd_bench(bench, std::cout, std::cerr);
  return 1;
}
