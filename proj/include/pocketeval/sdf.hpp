#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pocketeval/mol.hpp"

namespace pocketeval {

struct SdfRecordError {
  int record = 0;  // 1-based ordinal within the file
  std::string message;
};

struct SdfParseResult {
  std::vector<MoleculeGraph> molecules;
  std::vector<SdfRecordError> errors;  // bad records; the rest still parse
};

// V2000 connection tables only; V3000 records are rejected with a record
// error. `M  CHG` entries override the legacy per-atom charge column.
SdfParseResult parse_sdf(std::string_view text);

// Single V2000 record incl. the $$$$ terminator, coordinates at 4 decimals.
std::string write_sdf(const MoleculeGraph& mol);
std::string write_sdf(const std::vector<MoleculeGraph>& mols);

}  // namespace pocketeval
