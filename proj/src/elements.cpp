#include "pocketeval/elements.hpp"

#include <cctype>
#include <map>
#include <mutex>
#include <vector>

#include <nlohmann/json.hpp>

#include "pocketeval/common.hpp"
#include "pocketeval/embedded_data.hpp"

namespace pocketeval {
namespace {

struct ElementEntry {
  std::string symbol;
  double covalent = 0, vdw = 0, mass = 0;
};

struct ElementTable {
  std::map<int, ElementEntry> by_z;
  std::map<std::string, int> by_symbol;  // normalized (capitalized) symbol
};

std::string normalize_symbol(std::string_view raw) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) return s;
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  for (size_t i = 1; i < s.size(); ++i) {
    s[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
  }
  return s;
}

const ElementTable& table() {
  static ElementTable t;
  static std::once_flag once;
  std::call_once(once, [] {
    auto doc = nlohmann::json::parse(embedded::radii_json);
    for (const auto& e : doc.at("elements")) {
      ElementEntry entry;
      entry.symbol = e.at("symbol").get<std::string>();
      entry.covalent = e.at("covalent").get<double>();
      entry.vdw = e.at("vdw").get<double>();
      entry.mass = e.at("mass").get<double>();
      int z = e.at("z").get<int>();
      t.by_z[z] = entry;
      t.by_symbol[entry.symbol] = z;
    }
  });
  return t;
}

const ElementEntry& entry_or_throw(int z) {
  const auto& t = table();
  auto it = t.by_z.find(z);
  if (it == t.by_z.end()) {
    throw Error("element Z=" + std::to_string(z) + " not in the radii table");
  }
  return it->second;
}

}  // namespace

std::optional<int> element_from_symbol(std::string_view symbol) {
  const auto& t = table();
  auto it = t.by_symbol.find(normalize_symbol(symbol));
  if (it == t.by_symbol.end()) return std::nullopt;
  return it->second;
}

const std::string& element_symbol(int z) { return entry_or_throw(z).symbol; }

bool element_known(int z) { return table().by_z.count(z) > 0; }

double covalent_radius(int z) { return entry_or_throw(z).covalent; }

double vdw_radius(int z) { return entry_or_throw(z).vdw; }

double atomic_mass(int z) { return entry_or_throw(z).mass; }

}  // namespace pocketeval
