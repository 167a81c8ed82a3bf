#include "pocketeval/pdb.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <tuple>

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

std::string_view field(const std::string& line, size_t pos, size_t len) {
  if (pos >= line.size()) return {};
  return std::string_view(line).substr(pos, std::min(len, line.size() - pos));
}

std::optional<double> parse_double(std::string_view s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

constexpr const char* kCanonical[20] = {
    "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
    "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL"};

bool canonical_residue(const std::string& name) {
  for (const char* c : kCanonical) {
    if (name == c) return true;
  }
  return false;
}

// Element columns 77-78 first; else derive from the atom name. ATOM records
// cover protein chains, so the name fallback only has to tell apart
// H/C/N/O/S/P and selenium (SEC selenocysteine).
std::optional<int> element_of(const std::string& name_field, const std::string& elem_field) {
  std::string elem = trim(elem_field);
  if (!elem.empty()) {
    // Strip charge suffixes like "N1+".
    while (!elem.empty() && !std::isalpha(static_cast<unsigned char>(elem.back()))) elem.pop_back();
    if (auto z = element_from_symbol(elem)) return z;
  }
  std::string letters;
  for (char c : name_field) {
    if (std::isalpha(static_cast<unsigned char>(c))) letters.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (letters.empty()) return std::nullopt;
  if (letters.rfind("SE", 0) == 0) return element_from_symbol("Se");
  switch (letters[0]) {
    case 'H': case 'C': case 'N': case 'O': case 'S': case 'P':
      return element_from_symbol(std::string(1, letters[0]));
    default:
      return std::nullopt;
  }
}

}  // namespace

PdbParseResult parse_pdb_pocket(std::string_view text, std::string name) {
  PdbParseResult result;
  PocketStructure& pocket = result.pocket;
  pocket.name = std::move(name);

  std::map<std::tuple<char, std::string, char>, int> residue_index;

  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    std::string line(text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    start = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    if (line.empty() && start > text.size()) break;
    ++line_no;

    if (line.rfind("ATOM  ", 0) != 0) continue;
    char altloc = line.size() > 16 ? line[16] : ' ';
    if (altloc != ' ' && altloc != 'A') continue;  // single conformer only

    auto x = parse_double(field(line, 30, 8));
    auto y = parse_double(field(line, 38, 8));
    auto z = parse_double(field(line, 46, 8));
    if (!x || !y || !z) {
      result.issues.push_back({line_no, "unparsable coordinates"});
      continue;
    }
    std::string name = trim(field(line, 12, 4));
    auto elem = element_of(name, std::string(field(line, 76, 2)));
    if (!elem) {
      result.issues.push_back({line_no, "cannot determine element for atom '" + name + "'"});
      continue;
    }

    char chain = line.size() > 21 ? line[21] : ' ';
    std::string resseq = trim(field(line, 22, 4));
    char icode = line.size() > 26 ? line[26] : ' ';
    std::string resname = trim(field(line, 17, 3));

    auto key = std::make_tuple(chain, resseq, icode);
    auto it = residue_index.find(key);
    int ridx;
    if (it == residue_index.end()) {
      ridx = static_cast<int>(pocket.amino_acid_of.size());
      residue_index.emplace(key, ridx);
      pocket.amino_acid_of.push_back(canonical_residue(resname) ? resname : "UNK");
    } else {
      ridx = it->second;
    }

    AtomRecord atom;
    atom.z = *elem;
    atom.pos = {*x, *y, *z};
    pocket.atoms.push_back(atom);
    pocket.residue_of.push_back(ridx);
    pocket.atom_names.push_back(name);
  }

  if (pocket.atoms.empty()) {
    throw Error("no usable ATOM records: the pocket is empty");
  }
  return result;
}

}  // namespace pocketeval
