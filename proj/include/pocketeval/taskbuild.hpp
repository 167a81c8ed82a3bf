#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pocketeval/mol.hpp"

namespace pocketeval {

// Five fill-in-the-blank regimes carved out of a reference ligand. Atom sets
// are heavy-atom index sets into the source molecule; an explicit hydrogen
// always travels with its heavy neighbor.
enum class TaskKind { DeNovo, Linker, Fragment, SideChain, Scaffold };

const char* task_kind_name(TaskKind kind);
std::optional<TaskKind> task_kind_from_name(std::string_view name);

struct TaskThresholds {
  int min_fragment_atoms = 6;  // each retained fragment needs > 5 heavy atoms
  int min_linker_atoms = 2;    // shortest path between attachment points
};

// One way to split a ligand for a task: context_atoms are shown, masked_atoms
// are regenerated, cut_bonds are the severed (context, masked) bonds.
struct TaskPartition {
  std::vector<int> context_atoms;              // sorted
  std::vector<int> masked_atoms;               // sorted
  std::vector<std::array<int, 2>> cut_bonds;   // sorted by first, then second
};

// A candidate linker excision: two distinct acyclic single bonds whose
// removal leaves exactly three parts, the middle one being the linker.
struct LinkerCut {
  int bond_i = -1, bond_j = -1;  // bond indices, bond_i < bond_j
  std::vector<int> side_a, linker, side_b;  // |side_a| >= |side_b|
};

// All cuts satisfying the thresholds, in (bond_i, bond_j) order.
std::vector<LinkerCut> linker_candidates(const MoleculeGraph& mol,
                                         const TaskThresholds& thr = {});
// Preferred cut: maximize min(|side_a|, |side_b|), then smaller linker, then
// lowest (bond_i, bond_j).
std::optional<LinkerCut> choose_linker_cut(const MoleculeGraph& mol,
                                           const TaskThresholds& thr = {});

// A candidate growth seed: one acyclic single bond whose smaller part is the
// fragment to grow from. The smaller part must exceed half the larger one.
struct FragmentCut {
  int bond = -1;
  std::vector<int> kept, grown;  // kept = |kept| <= |grown| side; context vs masked
};

std::vector<FragmentCut> fragment_candidates(const MoleculeGraph& mol,
                                             const TaskThresholds& thr = {});
// Preferred cut: maximize |kept|, then lowest bond index. On equal part
// sizes the part containing the lower atom index is kept.
std::optional<FragmentCut> choose_fragment_cut(const MoleculeGraph& mol,
                                               const TaskThresholds& thr = {});

// Partition for each regime; nullopt when the ligand admits no valid split
// (the skip reason explains why). DeNovo always succeeds: everything masked.
std::optional<TaskPartition> make_task_partition(const MoleculeGraph& mol, TaskKind kind,
                                                 const TaskThresholds& thr,
                                                 std::string* skip_reason);

struct TaskItem {
  std::string pocket_id;
  TaskKind kind = TaskKind::DeNovo;
  TaskPartition partition;
  int ligand_heavy_atoms = 0;
};

struct TaskSkip {
  std::string pocket_id;
  TaskKind kind = TaskKind::DeNovo;
  std::string reason;
};

struct TaskSet {
  std::vector<TaskItem> items;
  std::vector<TaskSkip> skips;
};

// Build one regime's dataset over (pocket_id, reference ligand) pairs. With
// all_candidates every valid linker/fragment cut becomes its own item
// (other regimes are unaffected).
TaskSet build_task_set(const std::vector<std::pair<std::string, const MoleculeGraph*>>& ligands,
                       TaskKind kind, const TaskThresholds& thr = {},
                       bool all_candidates = false);

// One JSON object per line for items; skips go to a sibling stream.
std::string write_task_manifest(const TaskSet& set);
std::string write_task_skips(const TaskSet& set);

}  // namespace pocketeval
