#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "msint/convergence.hpp"
#include "msint/dispersion.hpp"
#include "msint/invariants.hpp"

namespace msint {

// Scientific notation with 17 significant digits.
std::string fmt_double(double v);

struct Truncation {
  double last_good_time = 0;
  std::string message;
};

// Columns: t, then value and err_ (|Q(t) - Q(0)|) per selected quantity,
// then iterations. H_h appears only when the records carry it.
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& recs,
                           const std::vector<std::string>& selected,
                           const std::optional<Truncation>& trunc = std::nullopt);

void write_profile_csv(const std::string& path, const StateField& s,
                       const std::vector<std::pair<std::string, std::string>>& meta);
// Reads x, eta, u columns; '#' lines and a header row are skipped.
StateField read_profile_csv(const std::string& path, const GridSpec& g);

void write_dispersion_csv(const std::string& path, const std::vector<DispersionRow>& rows);

struct CheckRow {
  std::string name;
  double value = 0, bound = 0;
  bool pass = false;
};
void write_check_csv(const std::string& path, const std::vector<CheckRow>& rows);

void write_convergence_csv(const std::string& path,
                           const std::vector<std::pair<std::string, ConvergenceStudy>>& studies);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace msint
