#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace poursim::cli {

inline constexpr int kExitOk = 0;         // success
inline constexpr int kExitViolation = 1;  // domain / validation failure
inline constexpr int kExitUsage = 2;      // IO or usage failure

struct ValidateOptions {
  std::string dataset_path;
  std::string models_dir;       // empty: skip CAD model checks
  std::string format = "text";  // text | json
};

struct GenPourOptions {
  std::string dataset_path;
  std::string models_dir;
  std::string out_path;  // empty or "-": stdout
  std::vector<double> angles = {36, 72, 108, 144, 180};
  int timesteps = 5;
  int jobs = 1;
};

struct SimulateOptions {
  std::string mesh_path;
  std::string sidecar_path;
  double volume_ml = 0.0;
  std::string content = "100";  // 0 | 33 | 50 | 66 | 100 | opaque
  double angle_deg = 180.0;
  int timesteps = 5;
};

struct ScoreOptions {
  std::string groundtruth_path;
  std::string predictions_path;
  std::string task;             // volume | content | comparative | pouring
  std::string format = "text";  // text | json | csv
  unsigned seed = 0;            // for the chance reference row
};

struct RescaleOptions {
  std::string mesh_path;
  std::string sidecar_path;
  double volume_ml = 0.0;
  std::string out_path;
};

/// Checks annotation records (and, when models_dir is given, that every
/// cad_id resolves to a loadable CAD model). Exit 0 iff no hard violations.
int cmd_validate(const ValidateOptions& opt, std::ostream& out,
                 std::ostream& err);

/// Writes the pour groundtruth JSONL for every upright container at every
/// angle. Output bytes are identical across runs and --jobs settings.
int cmd_gen_pour(const GenPourOptions& opt, std::ostream& out,
                 std::ostream& err);

/// Simulates one container pour and prints the per-step schedule plus the
/// snapped sequence.
int cmd_simulate(const SimulateOptions& opt, std::ostream& out,
                 std::ostream& err);

/// Scores aligned groundtruth/prediction JSONL files for one task.
int cmd_score(const ScoreOptions& opt, std::ostream& out, std::ostream& err);

/// Rescales a CAD model to a target volume and writes the scaled OBJ.
int cmd_rescale(const RescaleOptions& opt, std::ostream& out,
                std::ostream& err);

}  // namespace poursim::cli
