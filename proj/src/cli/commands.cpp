#include "poursim/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "poursim/dataset/groundtruth.hpp"
#include "poursim/dataset/loader.hpp"
#include "poursim/eval/baselines.hpp"
#include "poursim/eval/metrics.hpp"
#include "poursim/pouring/simulate.hpp"

namespace poursim::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const dataset::IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}

std::string fmt2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_ml(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void print_diagnostic(std::ostream& out, const dataset::Diagnostic& d) {
  out << (d.is_error() ? "ERROR" : "warning");
  if (d.line > 0) out << " line " << d.line;
  out << " [" << dataset::diagnostic_kind_name(d.kind) << "] " << d.rule;
  if (!d.image_id.empty()) out << " (image " << d.image_id << ")";
  out << ": " << d.message << "\n";
}

std::set<std::string> upright_cad_ids(
    const std::vector<dataset::ImageRecord>& records) {
  std::set<std::string> ids;
  for (const auto& r : records) {
    for (const auto& c : r.containers) {
      if (c.upright) ids.insert(c.cad_id);
    }
  }
  return ids;
}

dataset::ModelLibrary load_model_library(const std::string& dir,
                                         const std::set<std::string>& ids,
                                         std::vector<std::string>* warnings) {
  dataset::ModelLibrary lib;
  for (const auto& id : ids) {
    const fs::path obj = fs::path(dir) / (id + ".obj");
    const fs::path side = fs::path(dir) / (id + ".json");
    if (!fs::exists(obj) || !fs::exists(side)) {
      throw dataset::UnresolvedCadIdError("no CAD model files for cad_id \"" +
                                          id + "\" under " + dir);
    }
    lib.emplace(id,
                dataset::load_container_model(obj.string(), side.string(),
                                              warnings));
  }
  return lib;
}

}  // namespace

int cmd_validate(const ValidateOptions& opt, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    dataset::LoadResult result = dataset::load_dataset(opt.dataset_path);

    if (!opt.models_dir.empty()) {
      for (const auto& id : upright_cad_ids(result.records)) {
        const fs::path obj = fs::path(opt.models_dir) / (id + ".obj");
        const fs::path side = fs::path(opt.models_dir) / (id + ".json");
        if (!fs::exists(obj) || !fs::exists(side)) {
          result.diagnostics.push_back(
              {dataset::DiagnosticKind::kInvariantViolation, 0, "",
               "unresolved-cad-id",
               "no CAD model files for cad_id \"" + id + "\""});
          continue;
        }
        try {
          std::vector<std::string> warnings;
          dataset::load_container_model(obj.string(), side.string(),
                                        &warnings);
          for (auto& w : warnings) {
            result.diagnostics.push_back({dataset::DiagnosticKind::kWarning, 0,
                                          "", "cad-model", std::move(w)});
          }
        } catch (const std::exception& e) {
          result.diagnostics.push_back(
              {dataset::DiagnosticKind::kInvariantViolation, 0, "",
               "cad-model", "cad_id \"" + id + "\": " + e.what()});
        }
      }
    }

    int errors = 0, warnings = 0;
    for (const auto& d : result.diagnostics) {
      ++(d.is_error() ? errors : warnings);
    }

    if (opt.format == "json") {
      ordered_json report;
      report["records"] = result.records.size();
      report["errors"] = errors;
      report["warnings"] = warnings;
      report["ok"] = errors == 0;
      report["diagnostics"] = ordered_json::array();
      for (const auto& d : result.diagnostics) {
        ordered_json dj;
        dj["kind"] = dataset::diagnostic_kind_name(d.kind);
        dj["line"] = d.line;
        dj["image_id"] = d.image_id;
        dj["rule"] = d.rule;
        dj["message"] = d.message;
        report["diagnostics"].push_back(std::move(dj));
      }
      out << report.dump(2) << "\n";
    } else {
      for (const auto& d : result.diagnostics) print_diagnostic(out, d);
      out << "records: " << result.records.size() << ", errors: " << errors
          << ", warnings: " << warnings << "\n";
      out << (errors == 0 ? "OK" : "FAILED") << "\n";
    }
    return errors == 0 ? kExitOk : kExitViolation;
  });
}

int cmd_gen_pour(const GenPourOptions& opt, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    dataset::LoadResult loaded = dataset::load_dataset(opt.dataset_path);
    for (const auto& d : loaded.diagnostics) {
      if (d.is_error()) print_diagnostic(err, d);
    }
    if (loaded.has_errors()) {
      err << "dataset has hard violations; run validate for details\n";
      return kExitViolation;
    }

    std::vector<std::string> model_warnings;
    dataset::ModelLibrary lib = load_model_library(
        opt.models_dir, upright_cad_ids(loaded.records), &model_warnings);
    for (const auto& w : model_warnings) err << "warning: " << w << "\n";

    dataset::PourGroundtruth gt = dataset::generate_pour_groundtruth(
        loaded.records, lib, opt.angles, opt.timesteps, opt.jobs);
    for (const auto& skip : gt.skips) {
      err << "skip image " << skip.image_id << " container "
          << skip.container_index << ": " << skip.reason << "\n";
    }

    const std::string payload = dataset::serialize_pour_groundtruth(gt.rows);
    if (opt.out_path.empty() || opt.out_path == "-") {
      out << payload;
    } else {
      std::ofstream file(opt.out_path, std::ios::binary);
      if (!file) {
        throw dataset::IoError("cannot write output file: " + opt.out_path);
      }
      file << payload;
      if (!file) {
        throw dataset::IoError("failed writing output file: " + opt.out_path);
      }
      err << "wrote " << gt.rows.size() << " rows to " << opt.out_path << "\n";
    }
    return kExitOk;
  });
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> warnings;
    pouring::ContainerModel model = dataset::load_container_model(
        opt.mesh_path, opt.sidecar_path, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";

    model = pouring::rescale_to_volume(model, opt.volume_ml);
    auto content = dataset::parse_content(opt.content);
    if (!content) {
      throw std::invalid_argument("unknown content class \"" + opt.content +
                                  "\" (use 0, 33, 50, 66, 100 or opaque)");
    }
    const pouring::Vec3 axis = model.tilt_axis
                                   ? *model.tilt_axis
                                   : pouring::default_tilt_axis(model);
    pouring::TiltQuery query(opt.angle_deg, opt.timesteps, axis);
    pouring::PourTrace trace = pouring::simulate_pour_trace(
        model, dataset::content_initial(*content), query);

    out << "model: " << opt.mesh_path << "\n";
    out << "volume: " << fmt_ml(model.nominal_volume)
        << " mL, content: " << opt.content
        << ", target angle: " << fmt_ml(opt.angle_deg) << " deg, axis: ["
        << fmt_ml(axis.x()) << ", " << fmt_ml(axis.y()) << ", "
        << fmt_ml(axis.z()) << "]\n";
    for (size_t t = 0; t < trace.steps.size(); ++t) {
      const auto& s = trace.steps[t];
      out << "  t=" << t + 1 << "  angle=" << fmt_ml(s.angle_deg)
          << " deg  max_stable=" << fmt_ml(s.max_stable)
          << " mL  remaining=" << fmt_ml(s.remaining)
          << " mL  fraction=" << fmt2(s.fraction * 100.0)
          << "%  class=" << s.snapped.label() << "\n";
    }
    out << "sequence: " << trace.sequence.to_string() << "\n";
    return kExitOk;
  });
}

int cmd_rescale(const RescaleOptions& opt, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> warnings;
    pouring::ContainerModel model = dataset::load_container_model(
        opt.mesh_path, opt.sidecar_path, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";

    const double before = model.nominal_volume;
    model = pouring::rescale_to_volume(model, opt.volume_ml);
    dataset::save_obj(opt.out_path, model.interior);
    out << "rescaled " << opt.mesh_path << ": " << fmt_ml(before)
        << " -> " << fmt_ml(model.nominal_volume) << " mL, wrote "
        << opt.out_path << "\n";
    out << "sidecar " << opt.sidecar_path
        << " still applies (face indices unchanged)\n";
    return kExitOk;
  });
}

namespace {

struct JsonlRow {
  int line;
  json node;
};

std::vector<JsonlRow> load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dataset::IoError("cannot open file: " + path);
  std::vector<JsonlRow> rows;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json node = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (node.is_discarded() || !node.is_object()) {
      throw std::runtime_error(path + ":" + std::to_string(line) +
                               ": not a JSON object");
    }
    rows.push_back({line, std::move(node)});
  }
  return rows;
}

std::string row_context(const std::string& path, const JsonlRow& row) {
  return path + ":" + std::to_string(row.line);
}

const json& need_field(const std::string& path, const JsonlRow& row,
                       const char* key) {
  if (!row.node.contains(key)) {
    throw std::runtime_error(row_context(path, row) + ": missing field \"" +
                             key + "\"");
  }
  return row.node[key];
}

int need_int(const std::string& path, const JsonlRow& row, const char* key) {
  const json& v = need_field(path, row, key);
  if (!v.is_number_integer()) {
    throw std::runtime_error(row_context(path, row) + ": field \"" + key +
                             "\" must be an integer");
  }
  return v.get<int>();
}

std::string need_string(const std::string& path, const JsonlRow& row,
                        const char* key) {
  const json& v = need_field(path, row, key);
  if (!v.is_string()) {
    throw std::runtime_error(row_context(path, row) + ": field \"" + key +
                             "\" must be a string");
  }
  return v.get<std::string>();
}

// identity key + class label per task, so both files align row by row
struct ClassRowParser {
  int num_classes;
  int (*parse)(const std::string& path, const JsonlRow& row);
};

int parse_volume_row(const std::string& path, const JsonlRow& row) {
  const int bin = need_int(path, row, "bin");
  if (bin < 0 || bin >= dataset::VolumeBin::kNumBins) {
    throw std::runtime_error(row_context(path, row) +
                             ": bin must be in [0, 9]");
  }
  return bin;
}

int parse_content_row(const std::string& path, const JsonlRow& row) {
  const std::string label = need_string(path, row, "content");
  auto parsed = dataset::parse_content(label);
  if (!parsed) {
    throw std::runtime_error(row_context(path, row) +
                             ": unknown content class \"" + label + "\"");
  }
  return static_cast<int>(*parsed);
}

int parse_comparative_row(const std::string& path, const JsonlRow& row) {
  const std::string label = need_string(path, row, "label");
  auto parsed = dataset::parse_comparative(label);
  if (!parsed) {
    throw std::runtime_error(row_context(path, row) +
                             ": unknown comparative label \"" + label + "\"");
  }
  return static_cast<int>(*parsed);
}

std::string row_key(const std::string& task, const std::string& path,
                    const JsonlRow& row) {
  std::string key = need_string(path, row, "image_id");
  if (task == "comparative") {
    key += "#" + std::to_string(need_int(path, row, "from_index")) + ">" +
           std::to_string(need_int(path, row, "to_index"));
  } else {
    key += "#" + std::to_string(need_int(path, row, "container_index"));
  }
  if (task == "pouring") {
    const json& angle = need_field(path, row, "angle_deg");
    if (!angle.is_number()) {
      throw std::runtime_error(row_context(path, row) +
                               ": field \"angle_deg\" must be a number");
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "@%.10g", angle.get<double>());
    key += buf;
  }
  return key;
}

std::vector<int> parse_sequence_row(const std::string& path,
                                    const JsonlRow& row) {
  const json& seq = need_field(path, row, "sequence");
  if (!seq.is_array() || seq.empty() ||
      seq.size() > pouring::PourSequence::kMaxLength) {
    throw std::runtime_error(row_context(path, row) +
                             ": sequence must be an array of 1 to 5 labels");
  }
  std::vector<int> out;
  for (const auto& v : seq) {
    if (!v.is_string()) {
      throw std::runtime_error(row_context(path, row) +
                               ": sequence entries must be strings");
    }
    auto c = pouring::FractionClass::parse(v.get<std::string>());
    if (!c) {
      throw std::runtime_error(row_context(path, row) +
                               ": unknown sequence label \"" +
                               v.get<std::string>() + "\"");
    }
    out.push_back(c->index());
  }
  return out;
}

void check_alignment(const ScoreOptions& opt,
                     const std::vector<JsonlRow>& gt_rows,
                     const std::vector<JsonlRow>& pred_rows) {
  if (gt_rows.empty()) {
    throw std::runtime_error("groundtruth file has no rows");
  }
  if (gt_rows.size() != pred_rows.size()) {
    throw eval::LengthMismatchError(
        "files not aligned: " + std::to_string(gt_rows.size()) +
        " groundtruth rows vs " + std::to_string(pred_rows.size()) +
        " prediction rows");
  }
  for (size_t i = 0; i < gt_rows.size(); ++i) {
    const std::string gk = row_key(opt.task, opt.groundtruth_path, gt_rows[i]);
    const std::string pk =
        row_key(opt.task, opt.predictions_path, pred_rows[i]);
    if (gk != pk) {
      throw eval::LengthMismatchError(
          "files not aligned at row " + std::to_string(i + 1) + ": \"" + gk +
          "\" vs \"" + pk + "\"");
    }
  }
}

void emit_class_report(const ScoreOptions& opt, std::ostream& out, size_t n,
                       int num_classes, double accuracy, double chance) {
  if (opt.format == "json") {
    ordered_json report;
    report["task"] = opt.task;
    report["samples"] = n;
    report["num_classes"] = num_classes;
    report["avg_per_class_accuracy"] = accuracy;
    report["chance_accuracy"] = chance;
    out << report.dump(2) << "\n";
  } else if (opt.format == "csv") {
    out << "task,samples,num_classes,avg_per_class_accuracy,chance_accuracy\n"
        << opt.task << "," << n << "," << num_classes << "," << fmt2(accuracy)
        << "," << fmt2(chance) << "\n";
  } else {
    out << "task: " << opt.task << "\n"
        << "samples: " << n << "\n"
        << "avg per-class accuracy: " << fmt2(accuracy) << "\n"
        << "chance reference (seed " << opt.seed << "): " << fmt2(chance)
        << "\n";
  }
}

int score_class_task(const ScoreOptions& opt, std::ostream& out) {
  ClassRowParser parser;
  if (opt.task == "volume") {
    parser = {dataset::VolumeBin::kNumBins, &parse_volume_row};
  } else if (opt.task == "content") {
    parser = {static_cast<int>(dataset::kAllContentClasses.size()),
              &parse_content_row};
  } else {
    parser = {3, &parse_comparative_row};
  }

  const auto gt_rows = load_jsonl(opt.groundtruth_path);
  const auto pred_rows = load_jsonl(opt.predictions_path);
  check_alignment(opt, gt_rows, pred_rows);

  std::vector<int> gts, preds;
  gts.reserve(gt_rows.size());
  preds.reserve(pred_rows.size());
  for (size_t i = 0; i < gt_rows.size(); ++i) {
    gts.push_back(parser.parse(opt.groundtruth_path, gt_rows[i]));
    preds.push_back(parser.parse(opt.predictions_path, pred_rows[i]));
  }

  const auto cm = eval::ConfusionMatrix::from_predictions(parser.num_classes,
                                                          gts, preds);
  const double accuracy = eval::avg_per_class_accuracy(cm);
  const auto chance_preds = eval::chance_baseline(
      parser.num_classes, static_cast<int>(gts.size()), opt.seed);
  const double chance = eval::avg_per_class_accuracy(
      eval::ConfusionMatrix::from_predictions(parser.num_classes, gts,
                                              chance_preds));
  emit_class_report(opt, out, gts.size(), parser.num_classes, accuracy,
                    chance);
  return kExitOk;
}

int score_pouring_task(const ScoreOptions& opt, std::ostream& out) {
  const auto gt_rows = load_jsonl(opt.groundtruth_path);
  const auto pred_rows = load_jsonl(opt.predictions_path);
  check_alignment(opt, gt_rows, pred_rows);

  const int kMaxDistance = pouring::PourSequence::kMaxLength;
  std::vector<long> count_at(kMaxDistance + 1, 0);
  double distance_sum = 0.0;
  for (size_t i = 0; i < gt_rows.size(); ++i) {
    const auto gt = parse_sequence_row(opt.groundtruth_path, gt_rows[i]);
    const auto pred = parse_sequence_row(opt.predictions_path, pred_rows[i]);
    const int d = eval::edit_distance(std::span<const int>(gt),
                                      std::span<const int>(pred));
    distance_sum += d;
    ++count_at[std::min(d, kMaxDistance)];
  }

  const double n = static_cast<double>(gt_rows.size());
  std::array<double, 5> acc_at{};  // cumulative accuracy at distance <= k
  long cumulative = 0;
  for (int k = 0; k < 5; ++k) {
    cumulative += count_at[k];
    acc_at[k] = 100.0 * static_cast<double>(cumulative) / n;
  }
  const double mean_distance = distance_sum / n;

  if (opt.format == "json") {
    ordered_json report;
    report["task"] = opt.task;
    report["samples"] = gt_rows.size();
    report["exact_match"] = acc_at[0];
    ordered_json at;
    for (int k = 0; k < 5; ++k) at[std::to_string(k)] = acc_at[k];
    report["accuracy_at_edit_distance"] = std::move(at);
    report["mean_edit_distance"] = mean_distance;
    out << report.dump(2) << "\n";
  } else if (opt.format == "csv") {
    out << "task,samples,exact_match,acc_le_0,acc_le_1,acc_le_2,acc_le_3,"
           "acc_le_4,mean_edit_distance\n";
    out << opt.task << "," << gt_rows.size() << "," << fmt2(acc_at[0]);
    for (int k = 0; k < 5; ++k) out << "," << fmt2(acc_at[k]);
    out << "," << fmt2(mean_distance) << "\n";
  } else {
    out << "task: " << opt.task << "\n"
        << "samples: " << gt_rows.size() << "\n"
        << "exact match: " << fmt2(acc_at[0]) << "\n";
    for (int k = 0; k < 5; ++k) {
      out << "accuracy @ edit distance <= " << k << ": " << fmt2(acc_at[k])
          << "\n";
    }
    out << "mean edit distance: " << fmt2(mean_distance) << "\n";
  }
  return kExitOk;
}

}  // namespace

int cmd_score(const ScoreOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.task == "volume" || opt.task == "content" ||
        opt.task == "comparative") {
      return score_class_task(opt, out);
    }
    if (opt.task == "pouring") {
      return score_pouring_task(opt, out);
    }
    throw std::invalid_argument(
        "unknown task \"" + opt.task +
        "\" (use volume, content, comparative or pouring)");
  });
}

}  // namespace poursim::cli
