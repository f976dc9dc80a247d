// Copyright 2026 The PRS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: hpr, regions, solve, oracle, gen, bench.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prs/bench.hpp"
#include "prs/errors.hpp"
#include "prs/generator.hpp"
#include "prs/hpr.hpp"
#include "prs/json_report.hpp"
#include "prs/model_io.hpp"
#include "prs/oracle.hpp"
#include "prs/prs.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw prs::Error(prs::ErrorCode::kInvalidArgument, "not a number: " + item);
    }
  }
  return out;
}

prs::BinaryVector parse_binaries(const std::string& s) {
  prs::BinaryVector out;
  for (double v : parse_doubles(s)) out.push_back(static_cast<int>(v));
  return out;
}

std::uint64_t master_seed(std::uint64_t flag_value) {
  if (const char* env = std::getenv("PRS_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw prs::Error(prs::ErrorCode::kInvalidArgument, "PRS_SEED is not an integer");
    }
  }
  return flag_value;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw prs::Error(prs::ErrorCode::kIoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

prs::Box parse_box(const std::string& s, std::size_t n) {
  const auto v = parse_doubles(s);
  if (v.size() != 2) {
    throw prs::Error(prs::ErrorCode::kInvalidArgument, "--box expects lo,hi");
  }
  return prs::uniform_box(n, v[0], v[1]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric region search for mixed-integer bilevel programs"};
  app.require_subcommand(1);

  std::string instance_path;

  auto* hpr_cmd = app.add_subcommand("hpr", "High-point relaxation and its follower response");
  hpr_cmd->add_option("instance", instance_path, "Instance JSON")->required();

  std::string ybin, at, box_arg;
  bool enumerate = false;
  std::size_t budget = 2000;
  std::uint64_t region_seed = 0;
  auto* regions_cmd = app.add_subcommand("regions", "Critical region at a point, or an atlas");
  regions_cmd->add_option("instance", instance_path, "Instance JSON")->required();
  regions_cmd->add_option("--ybin", ybin, "Follower binaries, comma separated");
  regions_cmd->add_option("--at", at, "Leader point, comma separated");
  regions_cmd->add_flag("--enumerate", enumerate, "Sample the box and list every region found");
  regions_cmd->add_option("--budget", budget, "Samples for --enumerate");
  regions_cmd->add_option("--seed", region_seed, "Sampling seed for --enumerate");
  regions_cmd->add_option("--box", box_arg, "lo,hi for --enumerate (default: upper bounds)");

  std::size_t kmax = 100;
  double tol = 1e-6;
  std::string trace_path;
  auto* solve_cmd = app.add_subcommand("solve", "Run the region search from the HPR point");
  solve_cmd->add_option("instance", instance_path, "Instance JSON")->required();
  solve_cmd->add_option("--kmax", kmax, "Iteration limit")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tol", tol, "Membership, activity and feasibility tolerance")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--trace", trace_path, "Write the full result, regions included");

  std::size_t resolution = 0;
  double slack = 0.2;
  auto* oracle_cmd = app.add_subcommand("oracle", "Grid oracle, cross-checked against the search");
  oracle_cmd->add_option("instance", instance_path, "Instance JSON")->required();
  oracle_cmd->add_option("--resolution", resolution, "Points per axis")->required();
  oracle_cmd->add_option("--box", box_arg, "lo,hi")->required();
  oracle_cmd->add_option("--slack", slack, "Accepted F difference to the grid best");

  std::string size_name = "tiny", out_path;
  std::size_t count = 100;
  std::uint64_t seed = 42;
  auto* gen_cmd = app.add_subcommand("gen", "Generate random instances");
  gen_cmd->add_option("--size", size_name, "tiny, small, mid or large");
  gen_cmd->add_option("--count", count, "Number of instances");
  gen_cmd->add_option("--seed", seed, "Master seed (PRS_SEED overrides)");
  gen_cmd->add_option("--out", out_path, "Output directory")->required();

  std::string sizes = "tiny", algs = "prs,ps,hybrid-prs-ps,hybrid-ps-prs", caps = "1000";
  std::size_t threads = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark on generated suites");
  bench_cmd->add_option("--sizes", sizes, "Comma-separated size presets");
  bench_cmd->add_option("--algs", algs, "prs, ps, hybrid-prs-ps, hybrid-ps-prs, grid");
  bench_cmd->add_option("--caps", caps, "Time caps in seconds");
  bench_cmd->add_option("--count", count, "Instances per size");
  bench_cmd->add_option("--seed", seed, "Master seed (PRS_SEED overrides)");
  bench_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  bench_cmd->add_option("--out", out_path, "CSV path; a .summary.json is written beside it")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*hpr_cmd) {
      const auto inst = prs::load_instance(instance_path);
      std::cout << prs::to_json(prs::run_hpr(inst)).dump(2) << '\n';
    } else if (*regions_cmd) {
      const auto inst = prs::load_instance(instance_path);
      const prs::BinaryVector yb = parse_binaries(ybin);
      if (enumerate) {
        prs::Box box;
        if (!box_arg.empty()) {
          box = parse_box(box_arg, inst.n_x());
        } else if (auto b = prs::upper_box(inst)) {
          box = *b;
        } else {
          throw prs::Error(prs::ErrorCode::kInvalidArgument,
                           "instance has no finite upper box; pass --box");
        }
        std::cout << prs::to_json(prs::enumerate_regions(inst, yb, box, budget, region_seed))
                         .dump(2)
                  << '\n';
      } else {
        const auto x = parse_doubles(at);
        if (x.size() != inst.n_x()) {
          throw prs::Error(prs::ErrorCode::kInvalidArgument, "--at has the wrong length");
        }
        std::cout << prs::to_json(prs::make_region(inst, yb, x)).dump(2) << '\n';
      }
    } else if (*solve_cmd) {
      const auto inst = prs::load_instance(instance_path);
      prs::PrsConfig cfg;
      cfg.k_max = kmax;
      cfg.memb_tol = cfg.act_tol = cfg.feas_tol = tol;
      const auto hpr = prs::run_hpr(inst);
      const auto res = prs::prs_solve(inst, hpr.x_hat, cfg);
      json summary;
      summary["best"] = res.best ? prs::to_json(*res.best) : json(nullptr);
      summary["iterations"] = res.iterations;
      summary["termination"] = std::string(prs::termination_name(res.termination));
      summary["F_hprr"] = hpr.F_hprr ? json(*hpr.F_hprr) : json(nullptr);
      std::cout << summary.dump(2) << '\n';
      if (!trace_path.empty()) write_json(prs::to_json(res), trace_path);
    } else if (*oracle_cmd) {
      const auto inst = prs::load_instance(instance_path);
      const auto grid = prs::grid_oracle(inst, parse_box(box_arg, inst.n_x()), resolution);
      json j = prs::to_json(grid);
      try {
        const auto hpr = prs::run_hpr(inst);
        const auto res = prs::prs_solve(inst, hpr.x_hat);
        j["cross_check"] = prs::to_json(prs::cross_check_prs(inst, res, grid, slack));
      } catch (const prs::Error& e) {
        j["cross_check"] = {{"error", e.what()}};
      }
      std::cout << j.dump(2) << '\n';
    } else if (*gen_cmd) {
      const prs::SizeSpec spec = prs::size_preset(size_name);
      const std::uint64_t master = master_seed(seed);
      std::filesystem::create_directories(out_path);
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t s = prs::instance_seed(master, i);
        const auto gen = prs::generate_instance(spec, s);
        const auto file = std::filesystem::path(out_path) /
                          (spec.name + "_" + std::to_string(s) + ".json");
        prs::save_instance(gen.instance, file);
      }
      std::cout << "wrote " << count << " instances to " << out_path << '\n';
    } else if (*bench_cmd) {
      prs::BenchConfig cfg;
      for (const auto& s : split_list(sizes)) cfg.sizes.push_back(prs::size_preset(s));
      for (const auto& a : split_list(algs)) cfg.algorithms.push_back(prs::parse_algorithm(a));
      cfg.time_caps = parse_doubles(caps);
      cfg.n_instances = count;
      cfg.master_seed = master_seed(seed);
      cfg.threads = threads;
      const auto records = prs::run_benchmark(cfg);
      prs::write_csv(records, out_path);
      std::filesystem::path summary_path(out_path);
      summary_path.replace_extension(".summary.json");
      write_json(prs::summarize(records), summary_path);
      std::cout << "wrote " << records.size() << " records to " << out_path << '\n';
    }
  } catch (const prs::Error& e) {
    std::cerr << "error [" << prs::error_code_name(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
