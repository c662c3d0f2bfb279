#include "cdc/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cdc/analysis.hpp"
#include "cdc/combinatorics.hpp"
#include "cdc/lp.hpp"
#include "cdc/placement.hpp"
#include "cdc/simulator.hpp"

namespace cdc::cli {

namespace {

ValidatedConfig config_from(const ConfigArgs& args) {
  return derive_config(args.server_count, args.function_count, args.file_count, args.redundancy,
                       args.value_bits);
}

int write_output(const std::string& content, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  if (out_path.empty()) {
    out << content;
    return kExitOk;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    err << "cannot open output file: " << out_path << "\n";
    return kExitUsage;
  }
  file << content;
  return kExitOk;
}

SplitPlan read_split_plan(const std::string& path, const ValidatedConfig& cfg) {
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("cannot open plan file: " + path);
  }
  nlohmann::json doc;
  file >> doc;
  if (!doc.contains("weights") || !doc["weights"].is_array()) {
    throw PlanSizeError("plan file has no integer \"weights\" array");
  }
  SplitPlan plan;
  plan.weights.assign(static_cast<std::size_t>(cfg.redundancy()), 0);
  for (const auto& entry : doc["weights"]) {
    const int ell = entry.at("ell").get<int>();
    if (!entry.contains("z") || !entry.at("z").is_number_integer()) {
      throw PlanSizeError("plan weights must be integers (key \"z\")");
    }
    const std::int64_t z = entry.at("z").get<std::int64_t>();
    if (ell < 1 || ell > cfg.redundancy()) {
      throw PlanSizeError("plan split size " + std::to_string(ell) + " outside [1:r]");
    }
    plan.weights[static_cast<std::size_t>(ell - 1)] += z;
  }
  return plan;
}

nlohmann::ordered_json config_json(const ValidatedConfig& cfg) {
  return {{"K", cfg.server_count()},    {"Q", cfg.function_count()},
          {"N", cfg.file_count()},      {"r", cfg.redundancy()},
          {"T", cfg.value_bits()},      {"eta1", cfg.files_per_batch()},
          {"eta2", cfg.functions_per_server()}};
}

}  // namespace

int run_simulate(const SimulateSpec& spec, std::ostream& out, std::ostream& err) {
  std::optional<ValidatedConfig> cfg;
  try {
    cfg = config_from(spec.config);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  const Placement placement = place_files(*cfg);
  const MapOracle oracle(spec.seed, cfg->value_bits());

  ShuffleResult result;
  std::string scheme;
  try {
    if (spec.plan_path.empty()) {
      scheme = "cdc";
      result = cdc_shuffle(placement, minimum_computation_plan(placement), oracle);
    } else {
      scheme = "s-cdc";
      result = scdc_shuffle(placement, read_split_plan(spec.plan_path, *cfg), oracle);
    }
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  const VerificationReport verification = reduce_verify(result, placement, oracle);
  const LoadReport loads = measure_loads(result.log, result.computed, *cfg);

  std::string rendered;
  if (spec.format == OutputFormat::Json) {
    nlohmann::ordered_json j;
    j["config"] = config_json(*cfg);
    j["scheme"] = scheme;
    j["seed"] = spec.seed;
    j["communication_load"] = loads.communication_load.to_string();
    j["communication_load_decimal"] = loads.communication_load.to_decimal();
    j["computation_total"] = loads.computation_count;
    j["total_bits"] = loads.total_bits;
    j["transmission_count"] = loads.transmissions;
    j["verified"] = verification.ok;
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const auto& f : verification.failures) {
      failures.push_back(
          {{"server", f.server},
           {"function", f.value.function},
           {"file", f.value.file},
           {"kind", f.kind == VerificationFailure::Kind::Missing ? "missing" : "corrupted"}});
    }
    j["failures"] = failures;
    nlohmann::ordered_json per_server = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < loads.per_server.size(); ++k) {
      per_server.push_back({{"server", k + 1},
                            {"sent_bits", loads.per_server[k].sent_bits},
                            {"computed_values", loads.per_server[k].computed_values}});
    }
    j["per_server"] = per_server;
    nlohmann::ordered_json log = nlohmann::ordered_json::array();
    for (const auto& tx : result.log) {
      log.push_back(transmission_to_json(tx, spec.include_payloads));
    }
    j["log"] = log;
    rendered = j.dump(2) + "\n";
  } else if (spec.format == OutputFormat::Csv) {
    std::ostringstream os;
    os << "comm,comm_decimal,computation,total_bits,transmissions,verified\n";
    os << loads.communication_load.to_string() << "," << loads.communication_load.to_decimal()
       << "," << loads.computation_count << "," << loads.total_bits << "," << loads.transmissions
       << "," << (verification.ok ? "yes" : "no") << "\n";
    rendered = os.str();
  } else {
    std::ostringstream os;
    os << "config: K=" << cfg->server_count() << " Q=" << cfg->function_count()
       << " N=" << cfg->file_count() << " r=" << cfg->redundancy() << " T=" << cfg->value_bits()
       << " eta1=" << cfg->files_per_batch() << " eta2=" << cfg->functions_per_server() << "\n";
    os << "scheme: " << scheme << "\n";
    os << "communication_load: " << loads.communication_load.to_string() << " ("
       << loads.communication_load.to_decimal() << ")\n";
    os << "computation_total: " << loads.computation_count << "\n";
    os << "total_bits: " << loads.total_bits << "\n";
    os << "transmissions: " << loads.transmissions << "\n";
    os << "verified: " << (verification.ok ? "yes" : "no") << "\n";
    for (std::size_t i = 0; i < verification.failures.size() && i < 10; ++i) {
      const auto& f = verification.failures[i];
      os << "  failure: server " << f.server << " " << to_string(f.value) << " "
         << (f.kind == VerificationFailure::Kind::Missing ? "missing" : "corrupted") << "\n";
    }
    if (verification.failures.size() > 10) {
      os << "  ... " << verification.failures.size() << " failures total\n";
    }
    rendered = os.str();
  }

  const int write_rc = write_output(rendered, spec.out_path, out, err);
  if (write_rc != kExitOk) {
    return write_rc;
  }
  return verification.ok ? kExitOk : kExitVerification;
}

namespace {

struct SweepRow {
  Rational budget;
  std::optional<Rational> cdc_fit_load;
  std::optional<Rational> scdc_load;
  std::optional<Rational> scdc_rounded_load;
  std::optional<Rational> bound_load;
};

std::vector<SweepRow> budget_sweep(const ValidatedConfig& cfg, const Rational& lo,
                                   const Rational& hi, int steps) {
  std::vector<SweepRow> rows;
  for (int i = 0; i < steps; ++i) {
    const Rational budget =
        steps == 1 ? lo : lo + (hi - lo) * Rational(Integer(i), Integer(steps - 1));
    SweepRow row;
    row.budget = budget;
    try {
      row.cdc_fit_load = cdc_fit(cfg, budget).load;
    } catch (const BudgetInfeasible&) {
    }
    try {
      const auto lp = scdc_optimize(cfg, budget);
      row.scdc_load = lp.objective;
      row.scdc_rounded_load = round_plan(lp, cfg).objective;
    } catch (const BudgetInfeasible&) {
    }
    try {
      row.bound_load = lower_bound(cfg, budget).objective;
    } catch (const BudgetInfeasible&) {
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void append_cell(std::ostringstream& os, const std::optional<Rational>& value) {
  if (value) {
    os << "," << value->to_string() << "," << value->to_decimal();
  } else {
    os << ",infeasible,infeasible";
  }
}

nlohmann::ordered_json cell_json(const std::optional<Rational>& value) {
  if (!value) {
    return nullptr;
  }
  return value->to_string();
}

}  // namespace

int run_curve(const CurveSpec& spec, std::ostream& out, std::ostream& err) {
  std::optional<ValidatedConfig> cfg;
  try {
    cfg = config_from(spec.config);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  std::string rendered;
  if (spec.figure == CurveSpec::Figure::Fig1 || spec.figure == CurveSpec::Figure::Fig2) {
    if (spec.format == OutputFormat::Json) {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      if (spec.figure == CurveSpec::Figure::Fig1) {
        for (const auto& r : figure1_series(*cfg)) {
          rows.push_back(
              {{"r", r.redundancy}, {"comp_min", r.comp_min}, {"comp_naive", r.comp_naive}});
        }
      } else {
        for (const auto& r : figure2_series(*cfg)) {
          rows.push_back({{"comp", r.computation},
                          {"comm", r.communication.to_string()},
                          {"comm_decimal", r.communication.to_decimal()},
                          {"scheme", r.scheme}});
        }
      }
      rendered = rows.dump(2) + "\n";
    } else {
      rendered = spec.figure == CurveSpec::Figure::Fig1 ? figure1_csv(figure1_series(*cfg))
                                                        : figure2_csv(figure2_series(*cfg));
    }
  } else {
    if (spec.steps < 1) {
      err << "fig3: --steps must be positive\n";
      return kExitUsage;
    }
    const Rational lo(spec.budget_min.value_or(cfg->total_values()));
    const Rational hi(spec.budget_max.value_or(cdc_min_computation(*cfg)));
    if (hi < lo) {
      err << "fig3: --budget-max below --budget-min\n";
      return kExitUsage;
    }
    const auto rows = budget_sweep(*cfg, lo, hi, spec.steps);
    if (spec.format == OutputFormat::Json) {
      nlohmann::ordered_json jrows = nlohmann::ordered_json::array();
      for (const auto& row : rows) {
        jrows.push_back({{"budget", row.budget.to_string()},
                         {"budget_decimal", row.budget.to_decimal()},
                         {"cdc_fit", cell_json(row.cdc_fit_load)},
                         {"scdc", cell_json(row.scdc_load)},
                         {"scdc_rounded", cell_json(row.scdc_rounded_load)},
                         {"lower_bound", cell_json(row.bound_load)}});
      }
      rendered = jrows.dump(2) + "\n";
    } else {
      std::ostringstream os;
      os << "budget,budget_decimal,cdc_fit,cdc_fit_decimal,scdc,scdc_decimal,"
            "scdc_rounded,scdc_rounded_decimal,lower_bound,lower_bound_decimal\n";
      for (const auto& row : rows) {
        os << row.budget.to_string() << "," << row.budget.to_decimal();
        append_cell(os, row.cdc_fit_load);
        append_cell(os, row.scdc_load);
        append_cell(os, row.scdc_rounded_load);
        append_cell(os, row.bound_load);
        os << "\n";
      }
      rendered = os.str();
    }
  }
  return write_output(rendered, spec.out_path, out, err);
}

int run_bound(const BoundSpec& spec, std::ostream& out, std::ostream& err) {
  std::optional<ValidatedConfig> cfg;
  try {
    cfg = config_from(spec.config);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  LpSolution solution;
  bool feasible = true;
  try {
    solution = lower_bound(*cfg, Rational(spec.budget));
  } catch (const BudgetInfeasible& e) {
    err << e.what() << "\n";
    feasible = false;
    solution.status = LpStatus::Infeasible;
    solution.budget = Rational(spec.budget);
  }
  const int write_rc = write_output(solution_to_json(solution).dump(2) + "\n", spec.out_path, out, err);
  if (write_rc != kExitOk) {
    return write_rc;
  }
  return feasible ? kExitOk : kExitInfeasible;
}

int run_scdc_plan(const ScdcPlanSpec& spec, std::ostream& out, std::ostream& err) {
  std::optional<ValidatedConfig> cfg;
  try {
    cfg = config_from(spec.config);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  nlohmann::ordered_json j;
  j["budget"] = spec.budget;
  try {
    const LpSolution lp = scdc_optimize(*cfg, Rational(spec.budget));
    const RoundedPlan plan = round_plan(lp, *cfg);
    j["feasible"] = true;
    j["eta1_eta2"] = cfg->rounds_per_subset();
    const auto lp_json = solution_to_json(lp);
    j["lp_weights"] = lp_json["weights"];
    j["lp_objective"] = lp_json["objective"];
    nlohmann::ordered_json weights = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < plan.weights.size(); ++i) {
      if (plan.weights[i] != 0) {
        weights.push_back({{"ell", i + 1}, {"z", plan.weights[i]}});
      }
    }
    j["weights"] = weights;
    j["objective"] = plan.objective.to_string();
    j["objective_decimal"] = plan.objective.to_decimal();
    j["predicted_computation"] = plan.predicted_computation;
    j["within_budget"] = plan.within_budget;
  } catch (const BudgetInfeasible& e) {
    err << e.what() << "\n";
    j["feasible"] = false;
    j["weights"] = nlohmann::ordered_json::array();
    j["objective"] = nullptr;
    const int write_rc = write_output(j.dump(2) + "\n", spec.out_path, out, err);
    return write_rc != kExitOk ? write_rc : kExitInfeasible;
  }
  return write_output(j.dump(2) + "\n", spec.out_path, out, err);
}

}  // namespace cdc::cli
