#include "pocketeval/sdf.hpp"

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <set>
#include <sstream>

#include "pocketeval/common.hpp"
#include "pocketeval/elements.hpp"

namespace pocketeval {
namespace {

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = nl + 1;
  }
  return lines;
}

std::string_view field(const std::string& line, size_t pos, size_t len) {
  if (pos >= line.size()) return {};
  return std::string_view(line).substr(pos, std::min(len, line.size() - pos));
}

std::optional<int> parse_int(std::string_view s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  long v = std::strtol(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return static_cast<int>(v);
}

std::optional<double> parse_double(std::string_view s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

// Legacy atom-block charge column, code -> formal charge.
int legacy_charge(int code) {
  switch (code) {
    case 1: return 3;
    case 2: return 2;
    case 3: return 1;
    case 5: return -1;
    case 6: return -2;
    case 7: return -3;
    default: return 0;  // 0 = none, 4 = doublet radical (not a charge)
  }
}

MoleculeGraph parse_record(const std::vector<std::string>& lines) {
  if (lines.size() < 4) throw Error("record shorter than the 4 header lines");
  const std::string& counts = lines[3];
  if (counts.find("V3000") != std::string::npos) {
    throw Error("V3000 connection tables are not supported, only V2000");
  }
  auto natoms = parse_int(field(counts, 0, 3));
  auto nbonds = parse_int(field(counts, 3, 3));
  if (!natoms || !nbonds || *natoms < 0 || *nbonds < 0) {
    throw Error("malformed counts line: '" + counts + "'");
  }
  if (*natoms == 0) throw Error("record declares zero atoms");
  size_t need = 4 + static_cast<size_t>(*natoms) + static_cast<size_t>(*nbonds);
  if (lines.size() < need) {
    throw Error("record truncated: counts promise " + std::to_string(*natoms) + " atoms / " +
                std::to_string(*nbonds) + " bonds");
  }

  MoleculeGraph mol;
  mol.name = trim(lines[0]);
  mol.atoms.reserve(*natoms);
  for (int i = 0; i < *natoms; ++i) {
    const std::string& line = lines[4 + i];
    auto x = parse_double(field(line, 0, 10));
    auto y = parse_double(field(line, 10, 10));
    auto z = parse_double(field(line, 20, 10));
    if (!x || !y || !z) {
      throw Error("atom " + std::to_string(i + 1) + ": unparsable coordinates");
    }
    std::string sym = trim(field(line, 31, 3));
    auto elem = element_from_symbol(sym);
    if (!elem) {
      throw Error("atom " + std::to_string(i + 1) + ": unknown element '" + sym + "'");
    }
    AtomRecord atom;
    atom.z = *elem;
    atom.pos = {*x, *y, *z};
    if (auto code = parse_int(field(line, 36, 3))) atom.charge = legacy_charge(*code);
    mol.atoms.push_back(atom);
  }

  std::set<std::pair<int, int>> seen;
  mol.bonds.reserve(*nbonds);
  for (int i = 0; i < *nbonds; ++i) {
    const std::string& line = lines[4 + *natoms + i];
    auto a = parse_int(field(line, 0, 3));
    auto b = parse_int(field(line, 3, 3));
    auto t = parse_int(field(line, 6, 3));
    if (!a || !b || !t) throw Error("bond " + std::to_string(i + 1) + ": unparsable fields");
    if (*a < 1 || *a > *natoms || *b < 1 || *b > *natoms) {
      throw Error("bond " + std::to_string(i + 1) + ": atom index " +
                  std::to_string(std::max(*a, *b)) + " out of range 1.." + std::to_string(*natoms));
    }
    if (*a == *b) throw Error("bond " + std::to_string(i + 1) + ": self bond");
    if (*t < 1 || *t > 4) {
      throw Error("bond " + std::to_string(i + 1) + ": unsupported bond type " + std::to_string(*t));
    }
    auto key = std::minmax(*a, *b);
    if (!seen.insert(key).second) {
      throw Error("bond " + std::to_string(i + 1) + ": duplicate bond between atoms " +
                  std::to_string(key.first) + " and " + std::to_string(key.second));
    }
    BondRecord bond;
    bond.a = *a - 1;
    bond.b = *b - 1;
    bond.order = *t;
    bond.aromatic = (*t == 4);
    mol.bonds.push_back(bond);
  }

  // Property block. Any M  CHG supersedes every legacy charge column.
  bool chg_seen = false;
  for (size_t li = need; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    if (line.rfind("M  END", 0) == 0) break;
    if (line.rfind("M  CHG", 0) == 0) {
      if (!chg_seen) {
        for (auto& atom : mol.atoms) atom.charge = 0;
        chg_seen = true;
      }
      auto n = parse_int(field(line, 6, 3));
      if (!n) throw Error("malformed M  CHG line");
      for (int k = 0; k < *n; ++k) {
        auto idx = parse_int(field(line, 9 + 8 * static_cast<size_t>(k), 4));
        auto val = parse_int(field(line, 13 + 8 * static_cast<size_t>(k), 4));
        if (!idx || !val || *idx < 1 || *idx > *natoms) {
          throw Error("malformed M  CHG entry " + std::to_string(k + 1));
        }
        mol.atoms[*idx - 1].charge = *val;
      }
    }
  }
  return mol;
}

}  // namespace

SdfParseResult parse_sdf(std::string_view text) {
  SdfParseResult result;
  auto lines = split_lines(text);

  auto blank_only = [](const std::vector<std::string>& rec) {
    for (const auto& line : rec) {
      if (!trim(line).empty()) return false;
    }
    return true;
  };

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> current;
  for (auto& line : lines) {
    if (trim(line) == "$$$$") {
      if (!blank_only(current)) records.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(std::move(line));
    }
  }
  // Final record without the $$$$ terminator (single-molecule .mol files).
  if (!blank_only(current)) records.push_back(std::move(current));

  int ordinal = 0;
  for (const auto& rec : records) {
    ++ordinal;
    try {
      result.molecules.push_back(parse_record(rec));
    } catch (const Error& e) {
      result.errors.push_back({ordinal, e.what()});
    }
  }
  return result;
}

std::string write_sdf(const MoleculeGraph& mol) {
  std::string out;
  char buf[128];
  out += mol.name;
  out += "\n  pocketeval          3D\n\n";
  std::snprintf(buf, sizeof(buf), "%3d%3d  0  0  0  0  0  0  0  0999 V2000\n",
                static_cast<int>(mol.atoms.size()), static_cast<int>(mol.bonds.size()));
  out += buf;
  for (const auto& atom : mol.atoms) {
    std::snprintf(buf, sizeof(buf), "%10.4f%10.4f%10.4f %-3s 0  0  0  0  0  0  0  0  0  0  0  0\n",
                  atom.pos.x, atom.pos.y, atom.pos.z, element_symbol(atom.z).c_str());
    out += buf;
  }
  for (const auto& bond : mol.bonds) {
    std::snprintf(buf, sizeof(buf), "%3d%3d%3d  0\n", bond.a + 1, bond.b + 1, bond.order);
    out += buf;
  }
  std::vector<std::pair<int, int>> charges;
  for (size_t i = 0; i < mol.atoms.size(); ++i) {
    if (mol.atoms[i].charge != 0) charges.emplace_back(static_cast<int>(i) + 1, mol.atoms[i].charge);
  }
  for (size_t i = 0; i < charges.size(); i += 8) {
    size_t n = std::min<size_t>(8, charges.size() - i);
    std::snprintf(buf, sizeof(buf), "M  CHG%3d", static_cast<int>(n));
    out += buf;
    for (size_t k = i; k < i + n; ++k) {
      std::snprintf(buf, sizeof(buf), " %3d %3d", charges[k].first, charges[k].second);
      out += buf;
    }
    out += '\n';
  }
  out += "M  END\n$$$$\n";
  return out;
}

std::string write_sdf(const std::vector<MoleculeGraph>& mols) {
  std::string out;
  for (const auto& mol : mols) out += write_sdf(mol);
  return out;
}

}  // namespace pocketeval
