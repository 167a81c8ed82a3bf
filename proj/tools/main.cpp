#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pocketeval/common.hpp"
#include "pocketeval/eval.hpp"
#include "pocketeval/perception.hpp"
#include "pocketeval/ranking.hpp"
#include "pocketeval/report.hpp"
#include "pocketeval/sdf.hpp"
#include "pocketeval/taskbuild.hpp"

namespace fs = std::filesystem;
using namespace pocketeval;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string sanitize_id(const std::string& id) {
  std::string out;
  for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out.empty() ? "pocket" : out;
}

EvalManifest load_manifest(const std::string& path) {
  auto manifest = parse_eval_manifest(slurp(path));
  resolve_manifest_paths(manifest, fs::path(path).parent_path().string());
  return manifest;
}

int cmd_eval(const std::string& config_path, const std::string& manifest_path,
             const std::string& reference_manifest_path, EvalSettings flags,
             const std::vector<std::string>& set_flags) {
  auto has = [&](const char* name) {
    return std::find(set_flags.begin(), set_flags.end(), name) != set_flags.end();
  };

  EvalSettings settings;
  std::string manifest_file = manifest_path;
  std::string reference_file = reference_manifest_path;
  if (!config_path.empty()) {
    auto cfg = parse_eval_config(slurp(config_path));
    settings = cfg.settings;
    fs::path base = fs::path(config_path).parent_path();
    auto rebase = [&](std::string& p) {
      if (!p.empty() && !fs::path(p).is_absolute()) p = (base / p).lexically_normal().string();
    };
    rebase(cfg.manifest_path);
    rebase(cfg.reference_manifest_path);
    rebase(settings.scores_file);
    rebase(settings.ref_scores_file);
    rebase(settings.props_file);
    rebase(settings.out_dir);
    if (manifest_file.empty()) manifest_file = cfg.manifest_path;
    if (reference_file.empty()) reference_file = cfg.reference_manifest_path;
  }
  if (const char* env = std::getenv("POCKETEVAL_VINA"); env && *env && !has("vina-cmd")) {
    settings.vina_cmd = env;
  }
  if (has("aspects")) settings.aspects = flags.aspects;
  if (has("jobs")) settings.jobs = flags.jobs;
  if (has("vina-cmd")) settings.vina_cmd = flags.vina_cmd;
  if (has("vina-mode")) settings.vina_mode = flags.vina_mode;
  if (has("vina-timeout")) settings.vina_timeout = flags.vina_timeout;
  if (has("scores-file")) settings.scores_file = flags.scores_file;
  if (has("ref-scores-file")) settings.ref_scores_file = flags.ref_scores_file;
  if (has("props-file")) settings.props_file = flags.props_file;
  if (has("out")) settings.out_dir = flags.out_dir;
  if (has("validity-ratio")) {
    settings.thresholds.validity_ratio = flags.thresholds.validity_ratio;
  }
  if (has("clash-overlap")) {
    settings.thresholds.clash.min_overlap = flags.thresholds.clash.min_overlap;
  }

  if (manifest_file.empty()) throw Error("eval needs --manifest (or a config carrying one)");
  auto manifest = load_manifest(manifest_file);
  if (!reference_file.empty()) {
    merge_reference_manifest(manifest, slurp(reference_file));
    // overlay paths come in relative to the overlay file; already-absolute
    // entries from the main manifest are untouched
    resolve_manifest_paths(manifest, fs::path(reference_file).parent_path().string());
  }

  auto result = run_eval(manifest, settings);

  for (const auto& pocket : result.pockets) {
    if (!pocket.ok) {
      std::cerr << "pocket " << pocket.id << " failed: " << pocket.error << "\n";
    }
  }
  std::fprintf(stderr, "evaluated %d/%zu pockets; %.0f molecules (%.0f valid)\n",
               result.pockets_succeeded, manifest.entries.size(),
               result.aggregate.summary.count("molecules_total")
                   ? result.aggregate.summary.at("molecules_total")
                   : 0.0,
               result.aggregate.summary.count("molecules_valid")
                   ? result.aggregate.summary.at("molecules_valid")
                   : 0.0);
  if (result.pockets_succeeded == 0) return 1;

  if (settings.out_dir.empty()) {
    if (result.aggregate.any_aspect_present()) {
      std::cout << write_report(result.aggregate, ReportFormat::Json);
    } else {
      std::cerr << "no metrics computed\n";
      return 1;
    }
    return 0;
  }

  fs::path out_dir = settings.out_dir;
  if (result.aggregate.any_aspect_present()) {
    spit(out_dir / "report.json", write_report(result.aggregate, ReportFormat::Json));
    spit(out_dir / "report.csv", write_report(result.aggregate, ReportFormat::Csv));
    std::fprintf(stderr, "report: %s\n", (out_dir / "report.json").c_str());
  } else {
    std::cerr << "no metrics computed\n";
  }
  for (const auto& pocket : result.pockets) {
    if (pocket.ok && pocket.report.any_aspect_present()) {
      spit(out_dir / "pockets" / (sanitize_id(pocket.id) + ".json"),
           write_report(pocket.report, ReportFormat::Json));
    }
  }
  if (result.pockets_succeeded < int(result.pockets.size())) {
    std::string failures;
    for (const auto& pocket : result.pockets) {
      if (!pocket.ok) {
        nlohmann::ordered_json j;
        j["pocket_id"] = pocket.id;
        j["error"] = pocket.error;
        failures += j.dump();
        failures += '\n';
      }
    }
    spit(out_dir / "failures.jsonl", failures);
  }
  return result.aggregate.any_aspect_present() ? 0 : 1;
}

int cmd_build_tasks(const std::string& manifest_path, const std::string& task_name,
                    bool all_candidates, const TaskThresholds& thr, const std::string& out_dir) {
  auto manifest = load_manifest(manifest_path);

  std::vector<MoleculeGraph> owned(manifest.entries.size());
  std::vector<char> loaded(manifest.entries.size(), 0);
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& entry = manifest.entries[i];
    try {
      auto parsed = parse_sdf(slurp(entry.reference_path));
      if (parsed.molecules.empty()) throw Error("no usable molecule");
      owned[i] = std::move(parsed.molecules[0]);
      if (owned[i].bonds.empty()) {
        owned[i].bonds = perceive_bonds(owned[i].atoms);
        repair_bond_orders(owned[i]);
      }
      loaded[i] = 1;
    } catch (const std::exception& e) {
      std::cerr << "pocket " << entry.id << ": reference unusable: " << e.what() << "\n";
    }
  }
  std::vector<std::pair<std::string, const MoleculeGraph*>> ligands;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    ligands.push_back({manifest.entries[i].id, loaded[i] ? &owned[i] : nullptr});
  }

  std::vector<TaskKind> kinds;
  if (task_name == "all") {
    kinds = {TaskKind::DeNovo, TaskKind::Linker, TaskKind::Fragment, TaskKind::SideChain,
             TaskKind::Scaffold};
  } else {
    auto kind = task_kind_from_name(task_name);
    if (!kind) throw Error("unknown task \"" + task_name + "\"");
    kinds = {*kind};
  }

  size_t total_items = 0;
  for (TaskKind kind : kinds) {
    auto set = build_task_set(ligands, kind, thr, all_candidates);
    total_items += set.items.size();
    const char* name = task_kind_name(kind);
    spit(fs::path(out_dir) / (std::string(name) + ".jsonl"), write_task_manifest(set));
    spit(fs::path(out_dir) / (std::string(name) + ".skips.jsonl"), write_task_skips(set));
    std::fprintf(stderr, "task %s: %zu items, %zu skips\n", name, set.items.size(),
                 set.skips.size());
  }
  return total_items > 0 ? 0 : 1;
}

int cmd_rank(const std::vector<std::string>& report_paths, const std::string& out_path,
             const std::string& tie_name, bool logp_averaged,
             const std::vector<double>& weight_values) {
  std::vector<MetricReport> reports;
  for (const auto& path : report_paths) reports.push_back(read_report_json(slurp(path)));

  TieMode tie = TieMode::Average;
  if (tie_name == "dense") tie = TieMode::Dense;
  else if (tie_name == "min") tie = TieMode::Min;
  else if (tie_name != "average") throw Error("unknown tie mode \"" + tie_name + "\"");

  LeaderboardWeights weights;
  if (!weight_values.empty()) {
    if (weight_values.size() != 4) {
      throw Error("--weights needs four values: substructure,chemical,interaction,geometry");
    }
    weights = {weight_values[0], weight_values[1], weight_values[2], weight_values[3]};
  }

  auto board = rank_leaderboard(reports, weights, tie, logp_averaged);
  for (const auto& w : board.warnings) std::cerr << w << "\n";
  auto csv = write_leaderboard_csv(board);
  if (out_path.empty()) std::cout << csv;
  else spit(out_path, csv);
  return 0;
}

int cmd_report(const std::string& in_path, const std::string& format_name,
               const std::string& out_path) {
  ReportFormat format;
  if (format_name == "json") format = ReportFormat::Json;
  else if (format_name == "csv") format = ReportFormat::Csv;
  else throw Error("unknown format \"" + format_name + "\"");
  auto text = write_report(read_report_json(slurp(in_path)), format);
  if (out_path.empty()) std::cout << text;
  else spit(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pocket-conditioned molecule evaluation toolkit"};
  app.require_subcommand(0, 1);

  auto* eval_cmd = app.add_subcommand("eval", "run the four-aspect evaluation over a manifest");
  std::string eval_config, eval_manifest, eval_reference;
  EvalSettings eval_flags;
  eval_cmd->add_option("--config", eval_config, "JSON config mirroring these flags");
  eval_cmd->add_option("--manifest", eval_manifest, "pocket/ligand file manifest (JSON)");
  eval_cmd->add_option("--reference-manifest", eval_reference,
                       "overlay manifest for pocket/reference paths");
  eval_cmd->add_option("--aspects", eval_flags.aspects,
                       "comma-separated aspect subset (default: all)")
      ->delimiter(',');
  eval_cmd->add_option("--jobs", eval_flags.jobs, "parallel pocket workers")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--vina-cmd", eval_flags.vina_cmd,
                       "docking command template with {receptor} {ligand} {out} {cx} {cy} {cz}");
  eval_cmd->add_option("--vina-mode", eval_flags.vina_mode, "mode label for live docking")
      ->check(CLI::IsMember({"score", "min", "dock"}));
  eval_cmd->add_option("--vina-timeout", eval_flags.vina_timeout, "seconds per docking run")
      ->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--scores-file", eval_flags.scores_file, "precomputed energy CSV");
  eval_cmd->add_option("--ref-scores-file", eval_flags.ref_scores_file,
                       "reference-ligand energy CSV (ordinal 1 per pocket)");
  eval_cmd->add_option("--props-file", eval_flags.props_file, "external QED/SA CSV");
  eval_cmd->add_option("--out", eval_flags.out_dir, "output directory (default: JSON to stdout)");
  eval_cmd->add_option("--validity-ratio", eval_flags.thresholds.validity_ratio,
                       "largest-fragment gate in (0,1)");
  eval_cmd->add_option("--clash-overlap", eval_flags.thresholds.clash.min_overlap,
                       "vdW overlap that counts as a clash");

  auto* tasks_cmd = app.add_subcommand("build-tasks", "carve task datasets out of reference ligands");
  std::string tasks_manifest, tasks_name = "all", tasks_out = ".";
  bool tasks_all_candidates = false;
  TaskThresholds tasks_thr;
  tasks_cmd->add_option("--manifest", tasks_manifest, "manifest with reference ligands")
      ->required();
  tasks_cmd->add_option("--task", tasks_name, "task kind or \"all\"")
      ->check(CLI::IsMember({"all", "denovo", "linker", "fragment", "sidechain", "scaffold"}));
  tasks_cmd->add_flag("--all-candidates", tasks_all_candidates,
                      "emit every valid linker/fragment cut, not just the preferred one");
  tasks_cmd->add_option("--min-fragment-atoms", tasks_thr.min_fragment_atoms,
                        "retained fragments need at least this many heavy atoms")
      ->check(CLI::PositiveNumber);
  tasks_cmd->add_option("--min-linker-atoms", tasks_thr.min_linker_atoms,
                        "shortest attachment path through the linker")
      ->check(CLI::PositiveNumber);
  tasks_cmd->add_option("--out", tasks_out, "output directory for the JSONL manifests");

  auto* rank_cmd = app.add_subcommand("rank", "rank methods from their report files");
  std::vector<std::string> rank_reports;
  std::string rank_out, rank_tie = "average";
  bool rank_logp_averaged = false;
  std::vector<double> rank_weights;
  rank_cmd->add_option("reports", rank_reports, "method report JSON files")
      ->required()
      ->expected(-1);
  rank_cmd->add_option("--out", rank_out, "leaderboard CSV path (default: stdout)");
  rank_cmd->add_option("--tie", rank_tie, "tie handling for metric ranks")
      ->check(CLI::IsMember({"average", "dense", "min"}));
  rank_cmd->add_flag("--logp-averaged", rank_logp_averaged,
                     "tie-average the LogP range groups instead of literal 1/2");
  rank_cmd->add_option("--weights", rank_weights,
                       "aspect weights: substructure,chemical,interaction,geometry")
      ->delimiter(',');

  auto* report_cmd = app.add_subcommand("report", "convert a report between JSON and CSV");
  std::string report_in, report_format = "csv", report_out;
  report_cmd->add_option("--in", report_in, "report JSON file")->required();
  report_cmd->add_option("--format", report_format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  report_cmd->add_option("--out", report_out, "output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  if (app.get_subcommands().empty()) {
    std::puts(app.help().c_str());
    return 0;
  }

  try {
    if (eval_cmd->parsed()) {
      std::vector<std::string> set_flags;
      for (const auto* opt : eval_cmd->get_options()) {
        if (opt->count() > 0 && opt->get_name().size() > 2) {
          set_flags.push_back(opt->get_name().substr(2));
        }
      }
      return cmd_eval(eval_config, eval_manifest, eval_reference, eval_flags, set_flags);
    }
    if (tasks_cmd->parsed()) {
      return cmd_build_tasks(tasks_manifest, tasks_name, tasks_all_candidates, tasks_thr,
                             tasks_out);
    }
    if (rank_cmd->parsed()) {
      return cmd_rank(rank_reports, rank_out, rank_tie, rank_logp_averaged, rank_weights);
    }
    if (report_cmd->parsed()) {
      return cmd_report(report_in, report_format, report_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "pocketeval: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
