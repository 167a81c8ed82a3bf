#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pocketeval/mol.hpp"

namespace pocketeval {

struct PdbLineIssue {
  int line = 0;  // 1-based
  std::string message;
};

struct PdbParseResult {
  PocketStructure pocket;
  std::vector<PdbLineIssue> issues;
};

// ATOM records only (HETATM ligands/waters/ions are not part of the pocket);
// altloc ' ' or 'A'; residues grouped by (chain, resSeq, iCode); element from
// columns 77-78 with atom-name fallback. Throws Error when no usable ATOM
// record survives. name becomes the pocket's id.
PdbParseResult parse_pdb_pocket(std::string_view text, std::string name = {});

}  // namespace pocketeval
