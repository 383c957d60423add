// Copyright 2026 The UniPAN Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unipan/diagnostics.hpp"
#include "unipan/numfmt.hpp"
#include "unipan/pipeline.hpp"
#include "unipan/raster_io.hpp"
#include "unipan/transform_io.hpp"

namespace unipan {

// Exit codes: 0 success, 1 runtime error, 2 usage error.

namespace cli {

struct FitArgs {
  std::vector<std::string> inputs;
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string target;
  std::string out;
};

struct ApplyArgs {
  std::string transform;
  std::string input;
  std::string out;
};

struct FuseArgs {
  std::string fuser;
  std::string lrms;
  std::string pan;
  std::uint32_t ratio = 0;
  std::string transform_lrms;
  std::string transform_pan;
  std::string out;
};

struct EvalArgs {
  std::string fused;
  std::string lrms;
  std::string pan;
  std::uint32_t ratio = 0;
  std::uint32_t window = 32;
};

struct SweepArgs {
  std::string param;
  std::string values;
  std::vector<std::string> fit_lrms;
  std::vector<std::string> fit_pan;
  std::string lrms;
  std::string pan;
  std::uint32_t ratio = 0;
  std::string fuser = "highpass";
  std::string target = "uniform";
  std::uint64_t m = 1000;
  std::uint64_t n = 10000;
  std::uint64_t seed = 0;
  std::uint32_t window = 32;
};

struct DiagnoseArgs {
  std::string kind;
  std::string input;
  std::uint32_t band = 0;
  std::string input_b;
  std::uint32_t band_b = 0;
  double bandwidth = 0.0;  // 0 = Silverman default
  std::uint32_t points = 200;
};

inline TargetDistribution parse_target(const std::string& s) {
  return (s == "normal") ? TargetDistribution::normal()
                         : TargetDistribution::uniform();
}

inline std::uint32_t checked_m(std::uint64_t m) {
  if (m < 2 || m > 0xffffffffull) {
    throw std::invalid_argument("m must lie in [2, 2^32)");
  }
  return static_cast<std::uint32_t>(m);
}

inline Fuser make_fuser(const std::string& name) {
  return (name == "zero") ? zero_fuser() : highpass_fuser();
}

inline void run_fit(const FitArgs& a, std::ostream& /*out*/) {
  std::vector<Raster> rasters;
  rasters.reserve(a.inputs.size());
  for (const auto& path : a.inputs) rasters.push_back(read_raster(path));
  const TransformSet set =
      fit_set(rasters, checked_m(a.m), a.n, a.seed, parse_target(a.target));
  write_transform_set(a.out, set);
}

inline void run_apply(const ApplyArgs& a, std::ostream& /*out*/) {
  const TransformSet set = read_transform_set(a.transform);
  const Raster input = read_raster(a.input);
  write_raster(a.out, apply_raster(set, input));
}

inline void run_fuse(const FuseArgs& a, std::ostream& /*out*/) {
  FusionInputs inputs;
  inputs.lrms = read_raster(a.lrms);
  inputs.pan = read_raster(a.pan);
  inputs.ratio = a.ratio;
  inputs.check();

  if (a.transform_lrms.empty() != a.transform_pan.empty()) {
    throw std::invalid_argument(
        "fuse: --transform-lrms and --transform-pan must be given together");
  }
  const Raster lrms_up = bicubic_upsample(inputs.lrms, a.ratio);
  Raster lrms_t = inputs.lrms;
  Raster pan_t = inputs.pan;
  if (!a.transform_lrms.empty()) {
    lrms_t = apply_raster(read_transform_set(a.transform_lrms), inputs.lrms);
    pan_t = apply_raster(read_transform_set(a.transform_pan), inputs.pan);
  }
  const Raster fused = fuse(make_fuser(a.fuser), lrms_t, pan_t, lrms_up);
  write_raster(a.out, fused);
}

inline void run_eval(const EvalArgs& a, std::ostream& out) {
  FusionInputs inputs;
  inputs.lrms = read_raster(a.lrms);
  inputs.pan = read_raster(a.pan);
  inputs.ratio = a.ratio;
  const Raster fused = read_raster(a.fused);
  out << to_line(evaluate(fused, inputs, a.window)) << '\n';
}

inline std::vector<std::uint64_t> parse_value_list(const std::string& csv) {
  std::vector<std::uint64_t> values;
  std::string_view rest = csv;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto tok = (comma == std::string_view::npos) ? rest
                                                       : rest.substr(0, comma);
    rest = (comma == std::string_view::npos) ? std::string_view{}
                                             : rest.substr(comma + 1);
    const auto v = parse_u64(tok);
    if (!v) throw std::invalid_argument("sweep: bad value list");
    values.push_back(*v);
  }
  if (values.empty()) throw std::invalid_argument("sweep: empty value list");
  return values;
}

inline void run_sweep(const SweepArgs& a, std::ostream& out) {
  FusionInputs inputs;
  inputs.lrms = read_raster(a.lrms);
  inputs.pan = read_raster(a.pan);
  inputs.ratio = a.ratio;
  inputs.check();

  std::vector<Raster> fit_lrms, fit_pan;
  for (const auto& p : a.fit_lrms) fit_lrms.push_back(read_raster(p));
  for (const auto& p : a.fit_pan) fit_pan.push_back(read_raster(p));
  if (fit_lrms.empty()) fit_lrms.push_back(inputs.lrms);
  if (fit_pan.empty()) fit_pan.push_back(inputs.pan);

  const TargetDistribution target = parse_target(a.target);
  const Fuser fuser = make_fuser(a.fuser);
  const Raster lrms_up = bicubic_upsample(inputs.lrms, a.ratio);

  for (std::uint64_t value : parse_value_list(a.values)) {
    const std::uint64_t m = (a.param == "m") ? value : a.m;
    const std::uint64_t n = (a.param == "n") ? value : a.n;
    const TransformSet lrms_set =
        fit_set(fit_lrms, checked_m(m), n, a.seed, target);
    const TransformSet pan_set =
        fit_set(fit_pan, checked_m(m), n, a.seed, target);
    const Raster lrms_t = apply_raster(lrms_set, inputs.lrms);
    const Raster pan_t = apply_raster(pan_set, inputs.pan);
    const Raster fused = fuse(fuser, lrms_t, pan_t, lrms_up);
    const MetricsReport report = evaluate(fused, inputs, a.window);
    out << a.param << '=' << value << ' ' << to_line(report) << '\n';
  }
}

inline void run_diagnose(const DiagnoseArgs& a, std::ostream& out) {
  DiagnosticSeries series;
  if (a.kind == "kde") {
    const Raster r = read_raster(a.input);
    if (a.band >= r.bands) {
      throw std::invalid_argument("diagnose: band out of range");
    }
    const auto band = r.band(a.band);
    const std::vector<double> samples(band.begin(), band.end());
    const double h =
        (a.bandwidth > 0.0) ? a.bandwidth : silverman_bandwidth(samples);
    if (a.points < 2) {
      throw std::invalid_argument("diagnose: need at least 2 grid points");
    }
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *mn - 3.0 * h;
    const double hi = *mx + 3.0 * h;
    std::vector<double> grid(a.points);
    for (std::uint32_t i = 0; i < a.points; ++i) {
      grid[i] = lo + (hi - lo) * i / (a.points - 1);
    }
    series = kde(samples, h, grid);
  } else {
    const Raster ra = read_raster(a.input);
    const Raster rb = read_raster(a.input_b);
    if (a.band >= ra.bands || a.band_b >= rb.bands) {
      throw std::invalid_argument("diagnose: band out of range");
    }
    series = qq_points(ra.band(a.band), rb.band(a.band_b), a.points);
  }
  for (const auto& [x, y] : series.points) {
    out << format_double(x) << '\t' << format_double(y) << '\n';
  }
}

}  // namespace cli

/// Front-end entry point; streams are injectable so tests can capture
/// byte-exact output.
inline int cli_main(std::vector<std::string> args,
                    std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"UniPAN: per-band quantile transforms for multi-band rasters,"
               " fusion, and no-reference quality metrics"};
  app.name("unipan");
  app.require_subcommand(1);

  cli::FitArgs fit_args;
  auto* fit = app.add_subcommand(
      "fit", "Fit a per-band quantile transform set from rasters");
  fit->add_option("--input", fit_args.inputs, "Input rasters (UPRF)")
      ->required()
      ->expected(1, -1);
  fit->add_option("--m", fit_args.m, "Number of quantiles")->required();
  fit->add_option("--n", fit_args.n, "Pixels sampled per band")->required();
  fit->add_option("--seed", fit_args.seed, "Sampling seed")->required();
  fit->add_option("--target", fit_args.target, "Target distribution")
      ->required()
      ->check(CLI::IsMember({"normal", "uniform"}));
  fit->add_option("--out", fit_args.out, "Output transform-set file")
      ->required();

  cli::ApplyArgs apply_args;
  auto* apply_cmd = app.add_subcommand(
      "apply", "Apply a fitted transform set to a raster");
  apply_cmd->add_option("--transform", apply_args.transform,
                        "Transform-set file")->required();
  apply_cmd->add_option("--input", apply_args.input, "Input raster")
      ->required();
  apply_cmd->add_option("--out", apply_args.out, "Output raster")->required();

  cli::FuseArgs fuse_args;
  auto* fuse_cmd = app.add_subcommand(
      "fuse", "Fuse an LRMS/PAN pair with a built-in residual fuser");
  fuse_cmd->add_option("--fuser", fuse_args.fuser, "Residual fuser")
      ->required()
      ->check(CLI::IsMember({"zero", "highpass"}));
  fuse_cmd->add_option("--lrms", fuse_args.lrms, "LRMS raster")->required();
  fuse_cmd->add_option("--pan", fuse_args.pan, "PAN raster")->required();
  fuse_cmd->add_option("--ratio", fuse_args.ratio, "PAN/LRMS ratio")
      ->required();
  fuse_cmd->add_option("--transform-lrms", fuse_args.transform_lrms,
                       "Transform set for LRMS bands");
  fuse_cmd->add_option("--transform-pan", fuse_args.transform_pan,
                       "Transform set for the PAN band");
  fuse_cmd->add_option("--out", fuse_args.out, "Output raster")->required();

  cli::EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "eval", "No-reference metrics for a fused result");
  eval_cmd->add_option("--fused", eval_args.fused, "Fused raster")
      ->required();
  eval_cmd->add_option("--lrms", eval_args.lrms, "LRMS raster")->required();
  eval_cmd->add_option("--pan", eval_args.pan, "PAN raster")->required();
  eval_cmd->add_option("--ratio", eval_args.ratio, "PAN/LRMS ratio")
      ->required();
  eval_cmd->add_option("--window", eval_args.window,
                       "UIQI window at PAN scale");

  cli::SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Repeat fit+fuse+eval over a list of m or n values");
  sweep_cmd->add_option("--param", sweep_args.param, "Swept parameter")
      ->required()
      ->check(CLI::IsMember({"m", "n"}));
  sweep_cmd->add_option("--values", sweep_args.values,
                        "Comma-separated values")->required();
  sweep_cmd->add_option("--lrms", sweep_args.lrms, "LRMS raster")->required();
  sweep_cmd->add_option("--pan", sweep_args.pan, "PAN raster")->required();
  sweep_cmd->add_option("--ratio", sweep_args.ratio, "PAN/LRMS ratio")
      ->required();
  sweep_cmd->add_option("--fit-lrms", sweep_args.fit_lrms,
                        "Training LRMS rasters (default: the eval pair)");
  sweep_cmd->add_option("--fit-pan", sweep_args.fit_pan,
                        "Training PAN rasters (default: the eval pair)");
  sweep_cmd->add_option("--fuser", sweep_args.fuser, "Residual fuser")
      ->check(CLI::IsMember({"zero", "highpass"}));
  sweep_cmd->add_option("--target", sweep_args.target, "Target distribution")
      ->check(CLI::IsMember({"normal", "uniform"}));
  sweep_cmd->add_option("--m", sweep_args.m, "Quantile count when sweeping n");
  sweep_cmd->add_option("--n", sweep_args.n, "Sample count when sweeping m");
  sweep_cmd->add_option("--seed", sweep_args.seed, "Sampling seed");
  sweep_cmd->add_option("--window", sweep_args.window,
                        "UIQI window at PAN scale");

  cli::DiagnoseArgs diag_args;
  auto* diag_cmd = app.add_subcommand(
      "diagnose", "Emit KDE curves or Q-Q points as tab-separated pairs");
  diag_cmd->add_option("--kind", diag_args.kind, "Series kind")
      ->required()
      ->check(CLI::IsMember({"kde", "qq"}));
  diag_cmd->add_option("--input", diag_args.input, "Input raster")
      ->required();
  diag_cmd->add_option("--band", diag_args.band, "Band index");
  diag_cmd->add_option("--input-b", diag_args.input_b,
                       "Second raster (qq only)");
  diag_cmd->add_option("--band-b", diag_args.band_b,
                       "Band index in the second raster");
  diag_cmd->add_option("--bandwidth", diag_args.bandwidth,
                       "KDE bandwidth (default: Silverman's rule)");
  diag_cmd->add_option("--points", diag_args.points,
                       "Grid / quantile point count");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    err << app.help();
    return 2;
  }

  try {
    if (fit->parsed()) {
      cli::run_fit(fit_args, out);
    } else if (apply_cmd->parsed()) {
      cli::run_apply(apply_args, out);
    } else if (fuse_cmd->parsed()) {
      cli::run_fuse(fuse_args, out);
    } else if (eval_cmd->parsed()) {
      cli::run_eval(eval_args, out);
    } else if (sweep_cmd->parsed()) {
      cli::run_sweep(sweep_args, out);
    } else if (diag_cmd->parsed()) {
      if (diag_args.kind == "qq" && diag_args.input_b.empty()) {
        throw std::invalid_argument("diagnose: --input-b required for qq");
      }
      cli::run_diagnose(diag_args, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

inline int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc) - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(std::move(args));
}

}  // namespace unipan
