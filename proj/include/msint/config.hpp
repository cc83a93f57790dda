#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msint/integrate.hpp"
#include "msint/waves.hpp"

namespace msint {

enum class InitialKind { Solitary, Gaussian, PlaneWave, SymmetricRandom, File };
std::string to_string(InitialKind k);

struct InitialBlock {
  InitialKind kind = InitialKind::Solitary;
  // solitary
  double c_s = 1.2;
  double tol = 1e-10;
  int max_newton = 50;
  std::optional<double> amplitude;  // solitary guess amplitude / field amplitude
  // gaussian
  double A = 1, width = 1;
  std::optional<double> center;
  // plane_wave
  int mode = 1;
  // symmetric_random
  unsigned long long seed = 7;
  double decay = 0.5;
  // file: CSV with columns x, eta, u ('#' lines skipped)
  std::string path;
  bool remove_mean = false;
  bool operator==(const InitialBlock&) const = default;
};

struct OutputBlock {
  std::string dir = "out";
  int stride = 10;
  // subset of E_h, I_h, frakI_h, H_h, C1, C2, local_laws, symplecticity
  std::vector<std::string> diagnostics{"E_h", "I_h", "frakI_h", "H_h", "C1", "C2"};
  bool operator==(const OutputBlock&) const = default;
};

struct TangentBlock {
  unsigned long long seed = 1;
  bool operator==(const TangentBlock&) const = default;
};

struct DispersionBlock {
  std::vector<int> modes;  // default 1..32
  int steps = 16;
  bool operator==(const DispersionBlock&) const = default;
};

struct ConvergenceBlock {
  std::vector<double> time_steps{0.2, 0.1, 0.05, 0.025};
  double reference_dt = 0.003125;
  double t_end = 1.0;
  std::vector<int> nodes{16, 32, 64, 128};
  int reference_nodes = 512;
  bool operator==(const ConvergenceBlock&) const = default;
};

struct RunConfig {
  ModelCoefficients model;
  GridSpec grid;
  SchemeConfig scheme;
  double t_end = 100;
  InitialBlock initial;
  OutputBlock output;
  std::optional<TangentBlock> tangent;
  DispersionBlock dispersion;
  ConvergenceBlock convergence;
  bool operator==(const RunConfig&) const = default;
};

// Strict parse: unknown keys, wrong types and invalid values raise
// ConfigError with the line number. Relative file paths resolve against
// base_dir and must exist.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& c);

// Parses "0.25", "1/6", "-1/3".
double parse_number(const std::string& s);

}  // namespace msint
