#include <iostream>

#include <CLI11.hpp>

#include "poursim/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace poursim::cli;

  CLI::App app{"container/liquid simulation and benchmark toolkit"};
  app.require_subcommand(1);

  ValidateOptions vopt;
  auto* validate =
      app.add_subcommand("validate", "check an annotation JSONL file");
  validate->add_option("dataset", vopt.dataset_path, "annotation JSONL file")
      ->required();
  validate->add_option("--models", vopt.models_dir,
                       "directory with <cad_id>.obj and <cad_id>.json");
  validate->add_option("--format", vopt.format, "report format")
      ->check(CLI::IsMember({"text", "json"}));

  GenPourOptions gopt;
  auto* gen = app.add_subcommand(
      "gen-pour", "generate pour groundtruth sequences for a dataset");
  gen->add_option("dataset", gopt.dataset_path, "annotation JSONL file")
      ->required();
  gen->add_option("--models", gopt.models_dir,
                  "directory with <cad_id>.obj and <cad_id>.json")
      ->required();
  gen->add_option("--out", gopt.out_path, "output JSONL path ('-' = stdout)");
  gen->add_option("--angles", gopt.angles, "tilt angles in degrees")
      ->delimiter(',');
  gen->add_option("--timesteps", gopt.timesteps, "steps per pour")
      ->check(CLI::Range(1, 5));
  gen->add_option("--jobs", gopt.jobs, "parallel workers")
      ->check(CLI::Range(1, 4096));

  SimulateOptions sopt;
  auto* sim =
      app.add_subcommand("simulate", "simulate one container pour in detail");
  sim->add_option("--mesh", sopt.mesh_path, "container OBJ file")->required();
  sim->add_option("--sidecar", sopt.sidecar_path, "cap/axis sidecar JSON")
      ->required();
  sim->add_option("--volume-ml", sopt.volume_ml, "container volume in mL")
      ->required()
      ->check(CLI::PositiveNumber);
  sim->add_option("--content", sopt.content, "initial content class")
      ->check(CLI::IsMember({"0", "33", "50", "66", "100", "opaque"}));
  sim->add_option("--angle", sopt.angle_deg, "target tilt angle in degrees");
  sim->add_option("--timesteps", sopt.timesteps, "steps per pour")
      ->check(CLI::Range(1, 5));

  ScoreOptions copt;
  auto* score = app.add_subcommand(
      "score", "score aligned groundtruth/prediction JSONL files");
  score->add_option("--gt", copt.groundtruth_path, "groundtruth JSONL")
      ->required();
  score->add_option("--pred", copt.predictions_path, "prediction JSONL")
      ->required();
  score->add_option("--task", copt.task, "benchmark task")
      ->required()
      ->check(CLI::IsMember({"volume", "content", "comparative", "pouring"}));
  score->add_option("--format", copt.format, "report format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  score->add_option("--seed", copt.seed, "seed for the chance reference");

  RescaleOptions ropt;
  auto* rescale = app.add_subcommand(
      "rescale", "rescale a CAD model to a target volume and save the OBJ");
  rescale->add_option("--mesh", ropt.mesh_path, "container OBJ file")
      ->required();
  rescale->add_option("--sidecar", ropt.sidecar_path, "cap/axis sidecar JSON")
      ->required();
  rescale->add_option("--volume-ml", ropt.volume_ml, "target volume in mL")
      ->required()
      ->check(CLI::PositiveNumber);
  rescale->add_option("--out", ropt.out_path, "output OBJ path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*validate) return cmd_validate(vopt, std::cout, std::cerr);
  if (*gen) return cmd_gen_pour(gopt, std::cout, std::cerr);
  if (*sim) return cmd_simulate(sopt, std::cout, std::cerr);
  if (*score) return cmd_score(copt, std::cout, std::cerr);
  if (*rescale) return cmd_rescale(ropt, std::cout, std::cerr);
  return kExitUsage;
}
