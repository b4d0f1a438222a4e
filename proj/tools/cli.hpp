#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mimocov/config.hpp"

namespace mimocov::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNumerical = 3,
  kStatistical = 4,
};

/// Runs the tool. args[0] is the program name. CSV goes to `out` (or the
/// --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

using CsvRecord = std::map<std::string, std::string>;

/// Reads CSV with a header row; fields contain no quotes or commas.
std::vector<CsvRecord> read_csv(std::istream& in);

/// Scenario fields of an emitted row, loaded through the config keys.
ScenarioConfig config_from_record(const CsvRecord& record);

/// 12 significant digits.
std::string format_number(double v);

}  // namespace mimocov::cli
