// cdcsim: simulate coded-distributed-computing shuffles bit-exactly, count
// minimum map computations, and emit the communication/computation trade-off
// curves (closed forms, S-CDC plans, and the LP lower bound) with exact
// rational arithmetic.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cdc/cli.hpp"

namespace {

using cdc::cli::OutputFormat;

void add_config_flags(CLI::App* cmd, cdc::cli::ConfigArgs* args) {
  cmd->add_option("-K", args->server_count, "Server count")->required();
  cmd->add_option("-Q", args->function_count, "Output function count")->required();
  cmd->add_option("-N", args->file_count, "Input file count")->required();
  cmd->add_option("-r", args->redundancy, "Load redundancy (servers per file)")->required();
  cmd->add_option("-T", args->value_bits,
                  "Intermediate value size in bits (default: lcm(1..r))");
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") {
    return OutputFormat::Csv;
  }
  if (name == "json") {
    return OutputFormat::Json;
  }
  return OutputFormat::Text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coded distributed computing simulator and trade-off calculator"};
  app.require_subcommand(1);

  cdc::cli::SimulateSpec simulate;
  std::string simulate_format = "text";
  auto* sim_cmd = app.add_subcommand("simulate",
                                     "Run placement, map, shuffle, and verified reduce");
  add_config_flags(sim_cmd, &simulate.config);
  sim_cmd->add_option("--seed", simulate.seed, "Map oracle seed (default 0)");
  sim_cmd->add_option("--plan", simulate.plan_path,
                      "S-CDC integer split plan JSON (from scdc-plan)");
  sim_cmd->add_flag("--payloads", simulate.include_payloads,
                    "Include payload hex in the JSON transmission log");
  sim_cmd->add_option("--format", simulate_format, "text | csv | json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  sim_cmd->add_option("--out", simulate.out_path, "Write output to this file");

  cdc::cli::CurveSpec curve;
  std::string curve_figure = "fig1";
  std::string curve_format = "csv";
  std::int64_t budget_min = -1;
  std::int64_t budget_max = -1;
  auto* curve_cmd = app.add_subcommand("curve", "Emit the data behind the trade-off figures");
  curve_cmd->add_option("figure", curve_figure, "fig1 | fig2 | fig3")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  add_config_flags(curve_cmd, &curve.config);
  curve_cmd->add_option("--budget-min", budget_min, "fig3: sweep start (default N*Q)");
  curve_cmd->add_option("--budget-max", budget_max,
                        "fig3: sweep end (default minimum CDC computation)");
  curve_cmd->add_option("--steps", curve.steps, "fig3: sweep points (default 60)");
  curve_cmd->add_option("--format", curve_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  curve_cmd->add_option("--out", curve.out_path, "Write output to this file");

  cdc::cli::BoundSpec bound;
  auto* bound_cmd = app.add_subcommand("bound", "Communication lower bound LP at one budget");
  add_config_flags(bound_cmd, &bound.config);
  bound_cmd->add_option("--budget", bound.budget, "Total computation budget")->required();
  bound_cmd->add_option("--out", bound.out_path, "Write output to this file");

  cdc::cli::ScdcPlanSpec plan;
  auto* plan_cmd =
      app.add_subcommand("scdc-plan", "Optimal S-CDC split plan (LP + integer rounding)");
  add_config_flags(plan_cmd, &plan.config);
  plan_cmd->add_option("--budget", plan.budget, "Total computation budget")->required();
  plan_cmd->add_option("--out", plan.out_path, "Write output to this file");

  CLI11_PARSE(app, argc, argv);

  if (sim_cmd->parsed()) {
    simulate.format = parse_format(simulate_format);
    return cdc::cli::run_simulate(simulate, std::cout, std::cerr);
  }
  if (curve_cmd->parsed()) {
    curve.format = parse_format(curve_format);
    if (curve_figure == "fig2") {
      curve.figure = cdc::cli::CurveSpec::Figure::Fig2;
    } else if (curve_figure == "fig3") {
      curve.figure = cdc::cli::CurveSpec::Figure::Fig3;
    }
    if (budget_min >= 0) {
      curve.budget_min = budget_min;
    }
    if (budget_max >= 0) {
      curve.budget_max = budget_max;
    }
    return cdc::cli::run_curve(curve, std::cout, std::cerr);
  }
  if (bound_cmd->parsed()) {
    return cdc::cli::run_bound(bound, std::cout, std::cerr);
  }
  if (plan_cmd->parsed()) {
    return cdc::cli::run_scdc_plan(plan, std::cout, std::cerr);
  }
  return cdc::cli::kExitUsage;
}
