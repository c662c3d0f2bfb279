#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cdc::cli {

// Exit codes shared with the binary: 0 ok, 2 config error, 3 infeasible
// budget, 4 verification failure. 1 is left to the argument parser.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitVerification = 4;

enum class OutputFormat { Text, Csv, Json };

struct ConfigArgs {
  int server_count = 0;    // -K
  int function_count = 0;  // -Q
  int file_count = 0;      // -N
  int redundancy = 0;      // -r
  std::int64_t value_bits = 0;  // -T; 0 means lcm(1..r)
};

struct SimulateSpec {
  ConfigArgs config;
  std::uint64_t seed = 0;
  std::string plan_path;  // empty: CDC with the minimum computation plan
  bool include_payloads = false;
  OutputFormat format = OutputFormat::Text;
  std::string out_path;  // empty: stdout
};

struct CurveSpec {
  enum class Figure { Fig1, Fig2, Fig3 };
  Figure figure = Figure::Fig1;
  ConfigArgs config;
  std::optional<std::int64_t> budget_min;  // fig3 only; default N*Q
  std::optional<std::int64_t> budget_max;  // default cdc_min_computation
  int steps = 60;
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;
};

struct BoundSpec {
  ConfigArgs config;
  std::int64_t budget = 0;
  std::string out_path;
};

struct ScdcPlanSpec {
  ConfigArgs config;
  std::int64_t budget = 0;
  std::string out_path;
};

/// placement -> plan -> shuffle -> verify -> loads. Returns 0 iff verified.
int run_simulate(const SimulateSpec& spec, std::ostream& out, std::ostream& err);

/// Emit the series behind the three figures.
int run_curve(const CurveSpec& spec, std::ostream& out, std::ostream& err);

/// Communication lower bound LP at one budget, as JSON.
int run_bound(const BoundSpec& spec, std::ostream& out, std::ostream& err);

/// S-CDC LP + integer rounding at one budget; the JSON is consumable by
/// `simulate --plan`.
int run_scdc_plan(const ScdcPlanSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace cdc::cli
