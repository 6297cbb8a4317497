#pragma once

#include "toric/configs.hpp"
#include "toric/energy.hpp"
#include "toric/group.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace toric::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kNotCertified = 1,
  kInvalidSpec = 2,
  kBudget = 3,
  kIo = 4,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Json, Csv, AsciiGrid };
enum class SearchMethod { Brute, Local };

/// Everything needed to build and run one instance. Serialises to a flat
/// "key = value" text, one key per line.
struct InstanceSpec {
  std::vector<Index> dims;
  Metric metric = Metric::Lee;
  /// inverse-power:ALPHA | exp:A | exp:A:sq | table:PATH
  std::string energy = "inverse-power:1";
  std::optional<Index> p;
  Objective objective = Objective::Total;
  Index top_k = 1;
  Reduction reduce = Reduction::None;
  SearchMethod method = SearchMethod::Brute;
  int restarts = 200;
  std::optional<double> tie_tol;
  double budget = kDefaultWorkBudget;
  std::uint64_t seed = 0;
  int threads = 1;
  OutputFormat format = OutputFormat::Json;
  std::optional<std::string> out;

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

std::string to_config_text(const InstanceSpec& spec);

/// Applies the keys in `text` on top of `base`. Blank lines and lines starting
/// with '#' are ignored; unknown keys are an error.
InstanceSpec parse_config_text(std::string_view text, InstanceSpec base = {});

/// Parses the --f syntax. Table files hold "distance value" pairs per line.
EnergyFunction parse_energy(std::string_view text);

/// Work budget from TORIC_LAB_BUDGET, or the library default.
double default_budget_from_env();

/// Sites as "0,0;0,1;..." or one site per line (commas or blanks between
/// coordinates, '#' comments).
std::vector<Site> parse_sites(const GridDims& dims, std::string_view text);

/// Rows are the first coordinate; higher-rank grids print one 2-D slice per
/// leading index.
std::string render_ascii(const Configuration& s);

/// %.17g.
std::string format_double(double v);

/// RFC-4180 quoting when the field needs it.
std::string csv_field(std::string_view field);

/// Entry point behind the toric_lab executable.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toric::cli
