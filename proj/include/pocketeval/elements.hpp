#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace pocketeval {

// Element data backed by the shipped radii table (data/radii.json, embedded at
// build time). Lookups key on atomic number; parsing goes through
// element_from_symbol, which normalizes case ("CL" from PDB columns -> Cl).

std::optional<int> element_from_symbol(std::string_view symbol);
const std::string& element_symbol(int z);

bool element_known(int z);
double covalent_radius(int z);   // Angstrom
double vdw_radius(int z);        // Angstrom
double atomic_mass(int z);       // Dalton

}  // namespace pocketeval
