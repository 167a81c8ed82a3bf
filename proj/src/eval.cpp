#include "pocketeval/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pocketeval/affinity.hpp"
#include "pocketeval/chemprops.hpp"
#include "pocketeval/common.hpp"
#include "pocketeval/distributions.hpp"
#include "pocketeval/pdb.hpp"
#include "pocketeval/runproc.hpp"
#include "pocketeval/sdf.hpp"

namespace fs = std::filesystem;

namespace pocketeval {

namespace {

std::string get_string(const nlohmann::json& j, const char* key, const std::string& where,
                       bool required) {
  if (!j.contains(key)) {
    if (required) throw Error(where + ": missing \"" + key + "\"");
    return {};
  }
  if (!j.at(key).is_string()) throw Error(where + ": \"" + key + "\" must be a string");
  auto s = j.at(key).get<std::string>();
  if (required && s.empty()) throw Error(where + ": \"" + key + "\" is empty");
  return s;
}

PocketEntry parse_entry(const nlohmann::json& j, size_t index, bool overlay) {
  std::string where = "pocket entry " + std::to_string(index + 1);
  if (!j.is_object()) throw Error(where + ": not an object");
  for (const auto& [key, _] : j.items()) {
    if (key == "id" || key == "pocket" || key == "reference" || key == "generated" ||
        key == "center") {
      continue;
    }
    throw Error(where + ": unknown key \"" + key + "\"");
  }
  PocketEntry e;
  e.id = get_string(j, "id", where, true);
  e.pocket_path = get_string(j, "pocket", where, false);
  e.reference_path = get_string(j, "reference", where, !overlay);
  e.generated_path = get_string(j, "generated", where, false);
  if (j.contains("center")) {
    const auto& c = j.at("center");
    if (!c.is_array() || c.size() != 3 || !c[0].is_number() || !c[1].is_number() ||
        !c[2].is_number()) {
      throw Error(where + ": \"center\" must be an array of three numbers");
    }
    e.box_center = {{c[0].get<double>(), c[1].get<double>(), c[2].get<double>()}};
  }
  return e;
}

nlohmann::json parse_json_text(const std::string& text, const char* what) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(std::string(what) + ": not valid JSON");
  if (!doc.is_object()) throw Error(std::string(what) + ": top level must be an object");
  return doc;
}

}  // namespace

EvalManifest parse_eval_manifest(const std::string& json_text) {
  auto doc = parse_json_text(json_text, "manifest");
  for (const auto& [key, _] : doc.items()) {
    if (key != "method" && key != "pockets") throw Error("manifest: unknown key \"" + key + "\"");
  }
  EvalManifest m;
  m.method = get_string(doc, "method", "manifest", true);
  if (!doc.contains("pockets") || !doc.at("pockets").is_array()) {
    throw Error("manifest: missing \"pockets\" array");
  }
  std::set<std::string> seen;
  const auto& pockets = doc.at("pockets");
  for (size_t i = 0; i < pockets.size(); ++i) {
    auto e = parse_entry(pockets[i], i, false);
    if (!seen.insert(e.id).second) throw Error("manifest: duplicate pocket id \"" + e.id + "\"");
    m.entries.push_back(std::move(e));
  }
  return m;
}

void merge_reference_manifest(EvalManifest& manifest, const std::string& json_text) {
  auto doc = parse_json_text(json_text, "reference manifest");
  if (!doc.contains("pockets") || !doc.at("pockets").is_array()) {
    throw Error("reference manifest: missing \"pockets\" array");
  }
  const auto& pockets = doc.at("pockets");
  for (size_t i = 0; i < pockets.size(); ++i) {
    auto e = parse_entry(pockets[i], i, true);
    for (auto& target : manifest.entries) {
      if (target.id != e.id) continue;
      if (!e.pocket_path.empty()) target.pocket_path = e.pocket_path;
      if (!e.reference_path.empty()) target.reference_path = e.reference_path;
      if (e.box_center) target.box_center = e.box_center;
    }
  }
}

void resolve_manifest_paths(EvalManifest& manifest, const std::string& base_dir) {
  if (base_dir.empty()) return;
  auto rebase = [&](std::string& path) {
    if (path.empty() || fs::path(path).is_absolute()) return;
    path = (fs::path(base_dir) / path).lexically_normal().string();
  };
  for (auto& e : manifest.entries) {
    rebase(e.pocket_path);
    rebase(e.reference_path);
    rebase(e.generated_path);
  }
}

EvalConfig parse_eval_config(const std::string& json_text) {
  auto doc = parse_json_text(json_text, "eval config");
  EvalConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "manifest") {
      cfg.manifest_path = get_string(doc, "manifest", "eval config", false);
    } else if (key == "reference_manifest") {
      cfg.reference_manifest_path = get_string(doc, "reference_manifest", "eval config", false);
    } else if (key == "aspects") {
      if (!value.is_array()) throw Error("eval config: \"aspects\" must be an array");
      for (const auto& a : value) {
        if (!a.is_string()) throw Error("eval config: \"aspects\" entries must be strings");
        cfg.settings.aspects.push_back(a.get<std::string>());
      }
    } else if (key == "jobs") {
      if (!value.is_number_integer() || value.get<int>() < 1) {
        throw Error("eval config: \"jobs\" must be a positive integer");
      }
      cfg.settings.jobs = value.get<int>();
    } else if (key == "vina_cmd") {
      cfg.settings.vina_cmd = get_string(doc, "vina_cmd", "eval config", false);
    } else if (key == "vina_mode") {
      auto mode = get_string(doc, "vina_mode", "eval config", false);
      if (mode != "score" && mode != "min" && mode != "dock") {
        throw Error("eval config: \"vina_mode\" must be score, min, or dock");
      }
      cfg.settings.vina_mode = mode;
    } else if (key == "vina_timeout") {
      if (!value.is_number() || value.get<double>() < 0) {
        throw Error("eval config: \"vina_timeout\" must be a non-negative number");
      }
      cfg.settings.vina_timeout = value.get<double>();
    } else if (key == "scores_file") {
      cfg.settings.scores_file = get_string(doc, "scores_file", "eval config", false);
    } else if (key == "ref_scores_file") {
      cfg.settings.ref_scores_file = get_string(doc, "ref_scores_file", "eval config", false);
    } else if (key == "props_file") {
      cfg.settings.props_file = get_string(doc, "props_file", "eval config", false);
    } else if (key == "out_dir") {
      cfg.settings.out_dir = get_string(doc, "out_dir", "eval config", false);
    } else if (key == "validity_ratio") {
      if (!value.is_number() || value.get<double>() <= 0 || value.get<double>() >= 1) {
        throw Error("eval config: \"validity_ratio\" must lie in (0, 1)");
      }
      cfg.settings.thresholds.validity_ratio = value.get<double>();
    } else if (key == "clash_overlap") {
      if (!value.is_number() || value.get<double>() <= 0) {
        throw Error("eval config: \"clash_overlap\" must be positive");
      }
      cfg.settings.thresholds.clash.min_overlap = value.get<double>();
    } else {
      throw Error("eval config: unknown key \"" + key + "\"");
    }
  }
  return cfg;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool aspect_enabled(const EvalSettings& s, std::string_view aspect) {
  if (s.aspects.empty()) return true;
  return std::find(s.aspects.begin(), s.aspects.end(), aspect) != s.aspects.end();
}

std::string sanitize_id(const std::string& id) {
  std::string out;
  for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out.empty() ? "pocket" : out;
}

// Engine output contract: an "Affinity:" line wins; otherwise the last
// number printed anywhere is taken as the energy.
std::optional<double> parse_engine_energy(const std::string& output) {
  std::istringstream lines{output};
  std::string line;
  std::optional<double> last;
  while (std::getline(lines, line)) {
    size_t aff = line.find("Affinity:");
    std::istringstream toks{aff == std::string::npos ? line
                                                     : line.substr(aff + sizeof("Affinity:") - 1)};
    std::string tok;
    bool affinity_line = aff != std::string::npos;
    while (toks >> tok) {
      char* end = nullptr;
      double v = std::strtod(tok.c_str(), &end);
      if (!tok.empty() && end == tok.c_str() + tok.size()) {
        if (affinity_line) return v;
        last = v;
      }
    }
  }
  return last;
}

double mae_profile(const InteractionProfile& a, const InteractionProfile& b) {
  double sum = 0;
  for (size_t i = 0; i < kInteractionTypeCount; ++i) sum += std::abs(a[i] - b[i]);
  return sum / double(kInteractionTypeCount);
}

Vec3 heavy_centroid(const MoleculeGraph& mol) {
  Vec3 c{};
  int n = 0;
  for (const auto& a : mol.atoms) {
    if (a.z == 1) continue;
    c = c + a.pos;
    ++n;
  }
  return n > 0 ? c / double(n) : c;
}

// Everything one pocket contributes to the pooled aggregate, produced by the
// worker and merged on the main thread in manifest order.
struct PocketWork {
  PocketOutcome outcome;
  MoleculeGraph reference;
  std::vector<MoleculeGraph> valid_mols;
  std::vector<int> valid_ordinals;  // 1-based record positions in the generated file
  std::vector<InteractionProfile> profiles;
  InteractionProfile ref_profile{};
  bool has_profiles = false;
  std::vector<std::vector<char>> clash_flags;
  std::vector<AffinityRecord> live_records;
  std::map<std::string, double> live_ref;  // mode -> reference energy
};

struct ScratchDir {
  fs::path path;
  bool cleanup = false;
  ~ScratchDir() {
    if (cleanup) {
      std::error_code ec;
      fs::remove_all(path, ec);
    }
  }
};

void dock_pocket(const PocketEntry& entry, const EvalSettings& st, const fs::path& scratch,
                 PocketWork& w) {
  Vec3 center = entry.box_center
                    ? Vec3{(*entry.box_center)[0], (*entry.box_center)[1], (*entry.box_center)[2]}
                    : heavy_centroid(w.reference);
  auto& warnings = w.outcome.report.warnings;
  auto run_one = [&](const MoleculeGraph& mol, const std::string& tag) -> std::optional<double> {
    fs::path lig = scratch / (sanitize_id(entry.id) + "_" + tag + ".sdf");
    fs::path out = scratch / (sanitize_id(entry.id) + "_" + tag + "_out.sdf");
    {
      std::ofstream f(lig, std::ios::binary);
      if (!f) throw Error("cannot write " + lig.string());
      f << write_sdf(mol);
    }
    auto argv = expand_command(st.vina_cmd, entry.pocket_path, lig.string(), out.string(),
                               center.x, center.y, center.z);
    auto res = run_process(argv, st.vina_timeout);
    if (res.timed_out) {
      warnings.push_back("docking timed out for " + tag);
      return std::nullopt;
    }
    if (res.exit_code != 0) {
      warnings.push_back("docking failed for " + tag + " (exit " +
                         std::to_string(res.exit_code) + ")");
      return std::nullopt;
    }
    auto energy = parse_engine_energy(res.output);
    if (!energy) warnings.push_back("no energy in docking output for " + tag);
    return energy;
  };
  if (auto e = run_one(w.reference, "ref")) w.live_ref[st.vina_mode] = *e;
  for (size_t i = 0; i < w.valid_mols.size(); ++i) {
    std::string tag = std::to_string(w.valid_ordinals[i]);
    if (auto e = run_one(w.valid_mols[i], tag)) {
      w.live_records.push_back({entry.id, w.valid_ordinals[i], st.vina_mode, *e});
    }
  }
}

void process_pocket(const PocketEntry& entry, const EvalSettings& st,
                    const ExternalProperties* props, const fs::path& scratch, PocketWork& w) {
  w.outcome.id = entry.id;
  auto& rep = w.outcome.report;
  auto& warnings = rep.warnings;
  try {
    const bool want_sub = aspect_enabled(st, "substructure");
    const bool want_chem = aspect_enabled(st, "chemical");
    const bool want_int = aspect_enabled(st, "interaction");
    const bool want_geo = aspect_enabled(st, "geometry");
    const bool live_dock = want_int && !st.vina_cmd.empty();

    if (entry.reference_path.empty()) throw Error("no reference path in the manifest");
    if (entry.generated_path.empty()) throw Error("no generated path in the manifest");

    auto ref_parse = parse_sdf(read_file(entry.reference_path));
    for (const auto& err : ref_parse.errors) {
      warnings.push_back("reference record " + std::to_string(err.record) + ": " + err.message);
    }
    if (ref_parse.molecules.empty()) {
      throw Error("reference " + entry.reference_path + " has no usable molecule");
    }
    if (ref_parse.molecules.size() > 1) {
      warnings.push_back("reference file has " + std::to_string(ref_parse.molecules.size()) +
                         " records; using the first");
    }
    w.reference = std::move(ref_parse.molecules[0]);
    if (w.reference.bonds.empty()) {
      w.reference.bonds = perceive_bonds(w.reference.atoms, st.thresholds.perception);
      repair_bond_orders(w.reference);
    }
    perceive_aromaticity(w.reference);

    PocketStructure pocket;
    if (want_int || want_geo) {
      if (entry.pocket_path.empty()) throw Error("no pocket path in the manifest");
      auto pp = parse_pdb_pocket(read_file(entry.pocket_path), entry.id);
      size_t shown = std::min<size_t>(pp.issues.size(), 10);
      for (size_t i = 0; i < shown; ++i) {
        warnings.push_back("pocket line " + std::to_string(pp.issues[i].line) + ": " +
                           pp.issues[i].message);
      }
      if (pp.issues.size() > shown) {
        warnings.push_back("pocket: " + std::to_string(pp.issues.size() - shown) +
                           " more line issues");
      }
      pocket = std::move(pp.pocket);
    }

    auto gen_parse = parse_sdf(read_file(entry.generated_path));
    const int total = int(gen_parse.molecules.size() + gen_parse.errors.size());
    w.outcome.generated_records = total;
    std::set<int> bad_records;
    for (const auto& err : gen_parse.errors) {
      warnings.push_back("generated record " + std::to_string(err.record) + ": " + err.message);
      bad_records.insert(err.record);
    }
    // Generated poses are rebuilt from their atom clouds; file bonds are not
    // trusted. Records whose geometry defeats reconstruction count as invalid.
    int next_ordinal = 1;
    for (auto& raw : gen_parse.molecules) {
      while (bad_records.count(next_ordinal)) ++next_ordinal;
      int ordinal = next_ordinal++;
      try {
        auto [mol, verdict] = reconstruct_and_validate(raw.atoms);
        if (verdict.largest_fragment_ratio > st.thresholds.validity_ratio) {
          mol.name = std::move(raw.name);
          perceive_aromaticity(mol);
          w.valid_mols.push_back(std::move(mol));
          w.valid_ordinals.push_back(ordinal);
        }
      } catch (const Error& e) {
        warnings.push_back("generated record " + std::to_string(ordinal) +
                           ": reconstruction failed: " + e.what());
      }
    }
    w.outcome.valid_molecules = int(w.valid_mols.size());
    rep.summary["molecules_total"] = total;
    rep.summary["molecules_valid"] = w.outcome.valid_molecules;
    rep.summary["validity_ratio"] =
        total > 0 ? double(w.outcome.valid_molecules) / double(total) : 0.0;

    std::span<const MoleculeGraph> gen_span{w.valid_mols};
    std::span<const MoleculeGraph> ref_span{&w.reference, 1};

    if (want_sub && !w.valid_mols.empty()) {
      rep.substructure["jsd_at"] = jsd(atom_type_distribution(gen_span),
                                       atom_type_distribution(ref_span));
      rep.substructure["mae_at"] = mae_frequency(atom_type_distribution(gen_span),
                                                 atom_type_distribution(ref_span));
      auto gen_rt = ring_type_distribution(gen_span);
      auto ref_rt = ring_type_distribution(ref_span);
      rep.substructure["mae_rt"] = mae_frequency(gen_rt, ref_rt);
      if (!gen_rt.empty && !ref_rt.empty) {
        rep.substructure["jsd_rt"] = jsd(gen_rt, ref_rt);
      } else {
        warnings.push_back("ring jsd skipped: no rings on one side");
      }
      const auto& library = functional_group_library();
      auto gen_fg = functional_group_distribution(gen_span, library);
      auto ref_fg = functional_group_distribution(ref_span, library);
      rep.substructure["mae_fg"] = mae_frequency(gen_fg, ref_fg);
      if (!gen_fg.empty && !ref_fg.empty) {
        rep.substructure["jsd_fg"] = jsd(gen_fg, ref_fg);
      } else {
        warnings.push_back("functional group jsd skipped: no matches on one side");
      }
    }

    if (want_chem && !w.valid_mols.empty()) {
      double logp_sum = 0, lpsk_sum = 0, qed_sum = 0, sa_sum = 0;
      int joined = 0;
      std::set<std::string> chem_notes;
      for (size_t i = 0; i < w.valid_mols.size(); ++i) {
        std::vector<std::string> notes;
        auto profile = chem_profile(w.valid_mols[i], &notes);
        for (auto& n : notes) chem_notes.insert(std::move(n));
        logp_sum += profile.logp;
        lpsk_sum += profile.lpsk;
        if (props) {
          if (auto qs = props->find(entry.id, w.valid_ordinals[i])) {
            qed_sum += qs->first;
            sa_sum += qs->second;
            ++joined;
          }
        }
      }
      for (const auto& n : chem_notes) warnings.push_back(n);
      const double n = double(w.valid_mols.size());
      rep.chemical["logp"] = logp_sum / n;
      rep.chemical["lpsk"] = lpsk_sum / n;
      if (joined > 0) {
        rep.chemical["qed"] = qed_sum / joined;
        rep.chemical["sa"] = sa_sum / joined;
      } else if (props) {
        warnings.push_back("no external property rows matched this pocket");
      }
    }

    if (want_int && !w.valid_mols.empty()) {
      for (const auto& mol : w.valid_mols) {
        w.profiles.push_back(profile_interactions(mol, pocket, st.thresholds.interactions));
      }
      w.ref_profile = profile_interactions(w.reference, pocket, st.thresholds.interactions);
      w.has_profiles = true;
      auto mean = mean_profile(w.profiles);
      rep.interaction["mae_pp"] = mae_profile(mean, w.ref_profile);
      bool gen_zero = false, ref_zero = false;
      auto gen_norm = normalize_profile(mean, &gen_zero);
      auto ref_norm = normalize_profile(w.ref_profile, &ref_zero);
      if (!gen_zero && !ref_zero) {
        rep.interaction["jsd_pp"] = jsd_vectors(gen_norm, ref_norm);
      } else {
        warnings.push_back("interaction jsd skipped: all-zero profile");
      }
    }

    if (want_geo && !w.valid_mols.empty()) {
      auto emit_headline = [&](const char* id, const auto& gen_h, const auto& ref_h,
                               const std::vector<std::string>& keys) {
        auto headline = headline_geometry_jsd(gen_h, ref_h, keys);
        for (const auto& key : headline.skipped) {
          warnings.push_back(std::string(id) + ": key " + key + " skipped (empty histogram)");
        }
        if (headline.used > 0) rep.geometry[id] = headline.mean;
      };
      emit_headline("jsd_bl", bond_length_histograms(gen_span, st.thresholds.geometry),
                    bond_length_histograms(ref_span, st.thresholds.geometry), bond_length_keys());
      emit_headline("jsd_ba", bond_angle_histograms(gen_span, st.thresholds.geometry),
                    bond_angle_histograms(ref_span, st.thresholds.geometry), bond_angle_keys());
      ClashReport clashes;
      for (const auto& mol : w.valid_mols) {
        auto flags = detect_clashes(mol, pocket, st.thresholds.clash);
        clashes.add(mol, flags);
        w.clash_flags.push_back(std::move(flags));
      }
      rep.geometry["ratio_cca"] = clashes.ratio_cca();
      rep.geometry["ratio_cm"] = clashes.ratio_cm();
    }

    if (live_dock && !w.valid_mols.empty()) dock_pocket(entry, st, scratch, w);

    w.outcome.ok = true;
  } catch (const std::exception& e) {
    w.outcome.ok = false;
    w.outcome.error = e.what();
  }
}

// Affinity block shared by the per-pocket and aggregate reports.
void fill_affinity(MetricReport& rep, std::span<const AffinityRecord> records,
                   const std::map<std::string, std::map<std::string, double>>& ref_by_mode,
                   const std::map<std::pair<std::string, int>, int>& heavy_atoms) {
  static const std::map<std::string, double> kNoRefs;
  std::vector<AffinityRecord> by_mode;
  for (const char* mode : {"score", "min", "dock"}) {
    by_mode.clear();
    for (const auto& r : records) {
      if (r.mode == mode) by_mode.push_back(r);
    }
    if (by_mode.empty()) continue;
    auto refs = ref_by_mode.find(mode);
    auto summary = summarize_mode(by_mode, refs == ref_by_mode.end() ? kNoRefs : refs->second,
                                  &rep.warnings);
    std::string prefix = std::string("vina_") + mode;
    if (summary.mean_energy) rep.interaction[prefix + "_e"] = *summary.mean_energy;
    rep.interaction[prefix + "_imp"] = summary.improvement_pct;
    if (std::string(mode) == "dock") {
      if (auto mpbg = mean_percent_binding_gap(
              by_mode, refs == ref_by_mode.end() ? kNoRefs : refs->second, &rep.warnings)) {
        rep.interaction["mpbg"] = *mpbg;
      }
      if (auto lbe = mean_ligand_efficiency(by_mode, heavy_atoms, &rep.warnings)) {
        rep.interaction["lbe"] = *lbe;
      }
    }
  }
}

}  // namespace

EvalResult run_eval(const EvalManifest& manifest, const EvalSettings& settings) {
  for (const auto& aspect : settings.aspects) {
    if (std::find(std::begin(kAspects), std::end(kAspects), aspect) == std::end(kAspects)) {
      throw Error("unknown aspect \"" + aspect + "\"");
    }
  }
  EvalResult result;
  result.aggregate.method = manifest.method;
  auto& agg = result.aggregate;

  const bool want_sub = aspect_enabled(settings, "substructure");
  const bool want_chem = aspect_enabled(settings, "chemical");
  const bool want_int = aspect_enabled(settings, "interaction");
  const bool want_geo = aspect_enabled(settings, "geometry");

  AffinityTable scores, ref_scores;
  if (want_int && !settings.scores_file.empty()) {
    scores = parse_scores_csv(read_file(settings.scores_file));
    for (const auto& issue : scores.issues) agg.warnings.push_back("scores: " + issue);
  }
  if (want_int && !settings.ref_scores_file.empty()) {
    ref_scores = parse_scores_csv(read_file(settings.ref_scores_file));
    for (const auto& issue : ref_scores.issues) {
      agg.warnings.push_back("reference scores: " + issue);
    }
  }
  ExternalProperties props;
  bool have_props = false;
  if (want_chem && !settings.props_file.empty()) {
    props = parse_property_csv(read_file(settings.props_file));
    for (const auto& issue : props.issues) agg.warnings.push_back("props: " + issue);
    have_props = true;
  }

  ScratchDir scratch;
  if (want_int && !settings.vina_cmd.empty()) {
    if (!settings.out_dir.empty()) {
      scratch.path = fs::path(settings.out_dir) / "docking";
      fs::create_directories(scratch.path);
    } else {
      std::string tmpl = (fs::temp_directory_path() / "pocketeval-XXXXXX").string();
      std::vector<char> buf(tmpl.begin(), tmpl.end());
      buf.push_back('\0');
      if (!mkdtemp(buf.data())) throw Error("cannot create docking scratch directory");
      scratch.path = buf.data();
      scratch.cleanup = true;
    }
  }

  std::vector<PocketWork> works(manifest.entries.size());
  const int jobs = std::max(1, std::min(settings.jobs, int(std::max<size_t>(works.size(), 1))));
  if (jobs <= 1) {
    for (size_t i = 0; i < manifest.entries.size(); ++i) {
      process_pocket(manifest.entries[i], settings, have_props ? &props : nullptr, scratch.path,
                     works[i]);
    }
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        while (true) {
          size_t i = next.fetch_add(1);
          if (i >= manifest.entries.size()) break;
          process_pocket(manifest.entries[i], settings, have_props ? &props : nullptr,
                         scratch.path, works[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Deterministic merge in manifest order; thread count changes nothing below.
  std::vector<MoleculeGraph> all_gen, all_refs;
  std::vector<std::pair<std::string, int>> gen_keys;
  std::vector<InteractionProfile> all_profiles, ref_profiles;
  ClashReport pooled_clash;
  bool have_clash = false;
  long total_records = 0, total_valid = 0;
  std::vector<AffinityRecord> usable;
  std::map<std::string, std::map<std::string, double>> ref_energy_by_mode;
  std::map<std::pair<std::string, int>, int> heavy_map;
  std::vector<double> pocket_jsd_pp, pocket_mae_pp;

  for (size_t i = 0; i < works.size(); ++i) {
    auto& w = works[i];
    w.outcome.report.method = manifest.method;
    if (!w.outcome.ok) continue;
    ++result.pockets_succeeded;
    const std::string& id = manifest.entries[i].id;
    total_records += w.outcome.generated_records;
    total_valid += w.outcome.valid_molecules;
    if (w.outcome.generated_records == 0) {
      agg.warnings.push_back("pocket " + id + ": generated file has no records");
    } else if (w.outcome.valid_molecules == 0) {
      agg.warnings.push_back("pocket " + id + ": no valid molecules");
    }
    std::set<int> valid_set(w.valid_ordinals.begin(), w.valid_ordinals.end());
    for (size_t k = 0; k < w.valid_mols.size(); ++k) {
      gen_keys.push_back({id, w.valid_ordinals[k]});
      heavy_map[{id, w.valid_ordinals[k]}] = w.valid_mols[k].heavy_atom_count();
    }
    if (w.has_profiles) {
      for (const auto& p : w.profiles) all_profiles.push_back(p);
      ref_profiles.push_back(w.ref_profile);
      auto it = w.outcome.report.interaction.find("jsd_pp");
      if (it != w.outcome.report.interaction.end()) {
        pocket_jsd_pp.push_back(it->second);
      } else {
        agg.warnings.push_back("jsd_pp: pocket " + id + " skipped (all-zero profile)");
      }
      it = w.outcome.report.interaction.find("mae_pp");
      if (it != w.outcome.report.interaction.end()) pocket_mae_pp.push_back(it->second);
    }
    if (!w.clash_flags.empty()) have_clash = true;
    for (size_t k = 0; k < w.clash_flags.size(); ++k) {
      pooled_clash.add(w.valid_mols[k], w.clash_flags[k]);
    }
    if (want_int) {
      for (const auto& r : scores.records) {
        if (r.pocket_id == id && valid_set.count(r.ordinal)) usable.push_back(r);
      }
      for (const auto& r : w.live_records) usable.push_back(r);
      for (const char* mode : {"score", "min", "dock"}) {
        if (auto e = ref_scores.find(id, 1, mode)) ref_energy_by_mode[mode][id] = *e;
      }
      for (const auto& [mode, e] : w.live_ref) ref_energy_by_mode[mode][id] = e;
      // Per-pocket affinity block over this pocket's usable records.
      std::vector<AffinityRecord> mine;
      for (const auto& r : usable) {
        if (r.pocket_id == id) mine.push_back(r);
      }
      fill_affinity(w.outcome.report, mine, ref_energy_by_mode, heavy_map);
    }
    for (auto& mol : w.valid_mols) all_gen.push_back(std::move(mol));
    all_refs.push_back(std::move(w.reference));
  }

  agg.summary["pockets_total"] = double(manifest.entries.size());
  agg.summary["pockets_ok"] = double(result.pockets_succeeded);
  agg.summary["molecules_total"] = double(total_records);
  agg.summary["molecules_valid"] = double(total_valid);
  agg.summary["validity_ratio"] =
      total_records > 0 ? double(total_valid) / double(total_records) : 0.0;

  std::span<const MoleculeGraph> gen_span{all_gen};
  std::span<const MoleculeGraph> ref_span{all_refs};

  if (want_sub && !all_gen.empty() && !all_refs.empty()) {
    agg.substructure["jsd_at"] = jsd(atom_type_distribution(gen_span),
                                     atom_type_distribution(ref_span));
    agg.substructure["mae_at"] = mae_frequency(atom_type_distribution(gen_span),
                                               atom_type_distribution(ref_span));
    auto gen_rt = ring_type_distribution(gen_span);
    auto ref_rt = ring_type_distribution(ref_span);
    agg.substructure["mae_rt"] = mae_frequency(gen_rt, ref_rt);
    if (!gen_rt.empty && !ref_rt.empty) {
      agg.substructure["jsd_rt"] = jsd(gen_rt, ref_rt);
    } else {
      agg.warnings.push_back("jsd_rt skipped: no rings on one side");
    }
    const auto& library = functional_group_library();
    auto gen_fg = functional_group_distribution(gen_span, library);
    auto ref_fg = functional_group_distribution(ref_span, library);
    agg.substructure["mae_fg"] = mae_frequency(gen_fg, ref_fg);
    if (!gen_fg.empty && !ref_fg.empty) {
      agg.substructure["jsd_fg"] = jsd(gen_fg, ref_fg);
    } else {
      agg.warnings.push_back("jsd_fg skipped: no matches on one side");
    }
  }

  if (want_chem && !all_gen.empty()) {
    double logp_sum = 0, lpsk_sum = 0, qed_sum = 0, sa_sum = 0;
    int joined = 0;
    std::set<std::string> chem_notes;
    for (size_t i = 0; i < all_gen.size(); ++i) {
      std::vector<std::string> notes;
      auto profile = chem_profile(all_gen[i], &notes);
      for (auto& n : notes) chem_notes.insert(std::move(n));
      logp_sum += profile.logp;
      lpsk_sum += profile.lpsk;
      if (have_props) {
        if (auto qs = props.find(gen_keys[i].first, gen_keys[i].second)) {
          qed_sum += qs->first;
          sa_sum += qs->second;
          ++joined;
        }
      }
    }
    for (const auto& n : chem_notes) agg.warnings.push_back(n);
    agg.chemical["logp"] = logp_sum / double(all_gen.size());
    agg.chemical["lpsk"] = lpsk_sum / double(all_gen.size());
    if (joined > 0) {
      agg.chemical["qed"] = qed_sum / joined;
      agg.chemical["sa"] = sa_sum / joined;
    } else if (have_props) {
      agg.warnings.push_back("props: no rows joined any generated molecule");
    }
  }

  if (want_int && !all_profiles.empty()) {
    auto gen_mean = mean_profile(all_profiles);
    auto ref_mean = mean_profile(ref_profiles);
    agg.interaction["mae_oa"] = mae_profile(gen_mean, ref_mean);
    bool gen_zero = false, ref_zero = false;
    auto gen_norm = normalize_profile(gen_mean, &gen_zero);
    auto ref_norm = normalize_profile(ref_mean, &ref_zero);
    if (!gen_zero && !ref_zero) {
      agg.interaction["jsd_oa"] = jsd_vectors(gen_norm, ref_norm);
    } else {
      agg.warnings.push_back("jsd_oa skipped: all-zero pooled profile");
    }
    if (!pocket_jsd_pp.empty()) {
      double sum = 0;
      for (double v : pocket_jsd_pp) sum += v;
      agg.interaction["jsd_pp"] = sum / double(pocket_jsd_pp.size());
    }
    if (!pocket_mae_pp.empty()) {
      double sum = 0;
      for (double v : pocket_mae_pp) sum += v;
      agg.interaction["mae_pp"] = sum / double(pocket_mae_pp.size());
    }
  }
  if (want_int) fill_affinity(agg, usable, ref_energy_by_mode, heavy_map);

  if (want_geo && !all_gen.empty() && !all_refs.empty()) {
    auto emit_headline = [&](const char* id, const auto& gen_h, const auto& ref_h,
                             const std::vector<std::string>& keys) {
      auto headline = headline_geometry_jsd(gen_h, ref_h, keys);
      for (const auto& key : headline.skipped) {
        agg.warnings.push_back(std::string(id) + ": key " + key + " skipped (empty histogram)");
      }
      if (headline.used > 0) agg.geometry[id] = headline.mean;
    };
    emit_headline("jsd_bl", bond_length_histograms(gen_span, settings.thresholds.geometry),
                  bond_length_histograms(ref_span, settings.thresholds.geometry),
                  bond_length_keys());
    emit_headline("jsd_ba", bond_angle_histograms(gen_span, settings.thresholds.geometry),
                  bond_angle_histograms(ref_span, settings.thresholds.geometry),
                  bond_angle_keys());
    if (have_clash) {
      agg.geometry["ratio_cca"] = pooled_clash.ratio_cca();
      agg.geometry["ratio_cm"] = pooled_clash.ratio_cm();
    }
  }

  for (auto& w : works) result.pockets.push_back(std::move(w.outcome));
  return result;
}

}  // namespace pocketeval
