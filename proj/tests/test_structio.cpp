#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "pocketeval/common.hpp"
#include "pocketeval/pdb.hpp"
#include "pocketeval/report.hpp"
#include "pocketeval/sdf.hpp"
#include "support/molfab.hpp"

using namespace pocketeval;

namespace {

const char* kMethaneSdf =
    "methane\n"
    "  fab\n"
    "\n"
    "  1  0  0  0  0  0  0  0  0  0999 V2000\n"
    "    0.1000   -0.2000    0.3000 C   0  0  0  0  0  0  0  0  0  0  0  0\n"
    "M  END\n"
    "$$$$\n";

const char* kEthaneSdf =
    "ethane\n"
    "  fab\n"
    "\n"
    "  2  1  0  0  0  0  0  0  0  0999 V2000\n"
    "    0.0000    0.0000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0\n"
    "    1.5400    0.0000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0\n"
    "  1  2  1  0\n"
    "M  END\n"
    "$$$$\n";

// Second record's bond references atom 3 of 2.
const char* kBadBondSecond =
    "ok\n"
    "  fab\n"
    "\n"
    "  2  1  0  0  0  0  0  0  0  0999 V2000\n"
    "    0.0000    0.0000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0\n"
    "    1.5400    0.0000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0\n"
    "  1  2  1  0\n"
    "M  END\n"
    "$$$$\n"
    "broken\n"
    "  fab\n"
    "\n"
    "  2  1  0  0  0  0  0  0  0  0999 V2000\n"
    "    0.0000    0.0000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0\n"
    "    1.5400    0.0000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0\n"
    "  1  3  1  0\n"
    "M  END\n"
    "$$$$\n";

}  // namespace

TEST_CASE("sdf: methane parses to one atom, no bonds") {
  auto res = parse_sdf(kMethaneSdf);
  REQUIRE(res.errors.empty());
  REQUIRE(res.molecules.size() == 1);
  const auto& m = res.molecules[0];
  CHECK(m.name == "methane");
  REQUIRE(m.atoms.size() == 1);
  CHECK(m.bonds.empty());
  CHECK(m.atoms[0].z == 6);
  CHECK(m.atoms[0].pos.x == doctest::Approx(0.1));
  CHECK(m.atoms[0].pos.y == doctest::Approx(-0.2));
  CHECK(m.atoms[0].pos.z == doctest::Approx(0.3));
}

TEST_CASE("sdf: bad bond in record 2 keeps record 1 and reports the ordinal") {
  auto res = parse_sdf(kBadBondSecond);
  REQUIRE(res.molecules.size() == 1);
  REQUIRE(res.errors.size() == 1);
  CHECK(res.errors[0].record == 2);
  CHECK(res.errors[0].message.find("bond") != std::string::npos);
}

TEST_CASE("sdf: V3000 records are rejected, siblings still parse") {
  std::string text = kMethaneSdf;
  text +=
      "v3\n"
      "  fab\n"
      "\n"
      "  0  0  0  0  0  0  0  0  0  0999 V3000\n"
      "M  V30 BEGIN CTAB\n"
      "M  END\n"
      "$$$$\n";
  auto res = parse_sdf(text);
  CHECK(res.molecules.size() == 1);
  REQUIRE(res.errors.size() == 1);
  CHECK(res.errors[0].record == 2);
  CHECK(res.errors[0].message.find("V3000") != std::string::npos);
}

TEST_CASE("sdf: empty and blank-only inputs yield nothing") {
  auto res = parse_sdf("");
  CHECK(res.molecules.empty());
  CHECK(res.errors.empty());
  res = parse_sdf("\n\n$$$$\n\n$$$$\n");
  CHECK(res.molecules.empty());
  CHECK(res.errors.empty());
}

TEST_CASE("sdf: M CHG supersedes every legacy charge column") {
  // Atom 1 carries legacy code 2 (+2), atom 2 legacy code 5 (-1); the
  // property block then sets only atom 2 to +1, so atom 1 must end at 0.
  const char* text =
      "charged\n"
      "  fab\n"
      "\n"
      "  2  1  0  0  0  0  0  0  0  0999 V2000\n"
      "    0.0000    0.0000    0.0000 N   0  2  0  0  0  0  0  0  0  0  0  0\n"
      "    1.5400    0.0000    0.0000 O   0  5  0  0  0  0  0  0  0  0  0  0\n"
      "  1  2  1  0\n"
      "M  CHG  1   2   1\n"
      "M  END\n"
      "$$$$\n";
  auto res = parse_sdf(text);
  REQUIRE(res.errors.empty());
  REQUIRE(res.molecules.size() == 1);
  CHECK(res.molecules[0].atoms[0].charge == 0);
  CHECK(res.molecules[0].atoms[1].charge == 1);
}

TEST_CASE("sdf: legacy charge codes map when no M CHG is present") {
  const char* text =
      "legacy\n"
      "  fab\n"
      "\n"
      "  3  2  0  0  0  0  0  0  0  0999 V2000\n"
      "    0.0000    0.0000    0.0000 N   0  3  0  0  0  0  0  0  0  0  0  0\n"
      "    1.5400    0.0000    0.0000 O   0  5  0  0  0  0  0  0  0  0  0  0\n"
      "    3.0800    0.0000    0.0000 C   0  4  0  0  0  0  0  0  0  0  0  0\n"
      "  1  2  1  0\n"
      "  2  3  1  0\n"
      "M  END\n"
      "$$$$\n";
  auto res = parse_sdf(text);
  REQUIRE(res.errors.empty());
  const auto& m = res.molecules.at(0);
  CHECK(m.atoms[0].charge == 1);   // code 3 -> +1
  CHECK(m.atoms[1].charge == -1);  // code 5 -> -1
  CHECK(m.atoms[2].charge == 0);   // code 4 is a radical marker, not a charge
}

TEST_CASE("sdf: aromatic type 4 bonds keep their declared order") {
  std::string text = write_sdf(fab::benzene());
  auto res = parse_sdf(text);
  REQUIRE(res.errors.empty());
  const auto& m = res.molecules.at(0);
  REQUIRE(m.bonds.size() == 6);
  // fab::benzene is kekulized with flags; the writer emits the stored
  // orders 1/2, never rewriting them to 4.
  int doubles = 0;
  for (const auto& b : m.bonds) doubles += (b.order == 2);
  CHECK(doubles == 3);

  MoleculeGraph arom;
  fab::add_atom(arom, 6, 0, 0, 0);
  fab::add_atom(arom, 6, 1.39, 0, 0);
  fab::add_bond(arom, 0, 1, 4, true);
  auto back = parse_sdf(write_sdf(arom));
  REQUIRE(back.errors.empty());
  REQUIRE(back.molecules.at(0).bonds.size() == 1);
  CHECK(back.molecules[0].bonds[0].order == 4);
  CHECK(back.molecules[0].bonds[0].aromatic);
}

TEST_CASE("sdf: write/parse round-trip is exact") {
  MoleculeGraph m;
  m.name = "roundtrip";
  fab::add_atom(m, 7, 0.25, -1.5, 3.125, 1);
  fab::add_atom(m, 6, 1.75, 0.0, 0.0);
  fab::add_atom(m, 8, 3.0, 0.5, -0.25, -1);
  fab::add_bond(m, 0, 1, 1);
  fab::add_bond(m, 1, 2, 2);
  std::string text = write_sdf(m);
  auto res = parse_sdf(text);
  REQUIRE(res.errors.empty());
  REQUIRE(res.molecules.size() == 1);
  const auto& r = res.molecules[0];
  REQUIRE(r.atoms.size() == m.atoms.size());
  for (size_t i = 0; i < m.atoms.size(); ++i) {
    CHECK(r.atoms[i].z == m.atoms[i].z);
    CHECK(r.atoms[i].charge == m.atoms[i].charge);
    CHECK(r.atoms[i].pos.x == doctest::Approx(m.atoms[i].pos.x).epsilon(1e-9));
  }
  REQUIRE(r.bonds.size() == m.bonds.size());
  for (size_t i = 0; i < m.bonds.size(); ++i) {
    CHECK(r.bonds[i].a == m.bonds[i].a);
    CHECK(r.bonds[i].b == m.bonds[i].b);
    CHECK(r.bonds[i].order == m.bonds[i].order);
  }
  // Writing the parsed copy reproduces the text byte for byte.
  CHECK(write_sdf(r) == text);
}

TEST_CASE("sdf: multi-record writer concatenates with separators") {
  std::vector<MoleculeGraph> mols{fab::methane(), fab::ethanol()};
  auto res = parse_sdf(write_sdf(mols));
  REQUIRE(res.errors.empty());
  REQUIRE(res.molecules.size() == 2);
  CHECK(res.molecules[0].atoms.size() == 5);
  CHECK(res.molecules[1].atoms.size() == 9);
}

TEST_CASE("sdf: truncated atom block is a record error") {
  const char* text =
      "short\n"
      "  fab\n"
      "\n"
      "  3  0  0  0  0  0  0  0  0  0999 V2000\n"
      "    0.0000    0.0000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0\n"
      "M  END\n"
      "$$$$\n";
  auto res = parse_sdf(text);
  CHECK(res.molecules.empty());
  REQUIRE(res.errors.size() == 1);
  CHECK(res.errors[0].record == 1);
}

namespace {

const char* kGlyPdb =
    "ATOM      1  N   GLY A   1      -0.525   1.362   0.000  1.00  0.00           N\n"
    "ATOM      2  CA  GLY A   1       0.000   0.000   0.000  1.00  0.00           C\n"
    "ATOM      3  C   GLY A   1       1.520   0.000   0.000  1.00  0.00           C\n"
    "ATOM      4  O   GLY A   1       2.153   1.062   0.000  1.00  0.00           O\n"
    "END\n";

}  // namespace

TEST_CASE("pdb: one glycine residue") {
  auto res = parse_pdb_pocket(kGlyPdb, "gly");
  CHECK(res.issues.empty());
  const auto& p = res.pocket;
  REQUIRE(p.atoms.size() == 4);
  CHECK(p.residue_count() == 1);
  CHECK(p.amino_acid_of[0] == "GLY");
  CHECK(p.atom_names[1] == "CA");
  CHECK(p.atoms[1].z == 6);
  CHECK(p.atoms[0].z == 7);
  CHECK(p.atoms[3].pos.x == doctest::Approx(2.153));
}

TEST_CASE("pdb: residues group by chain, seq, and insertion code") {
  std::string text;
  text += "ATOM      1  CA  GLY A   1       0.000   0.000   0.000  1.00  0.00           C\n";
  text += "ATOM      2  CA  ALA A   2       3.800   0.000   0.000  1.00  0.00           C\n";
  text += "ATOM      3  CA  GLY B   1       7.600   0.000   0.000  1.00  0.00           C\n";
  text += "ATOM      4  CA  GLY A   2A     11.400   0.000   0.000  1.00  0.00           C\n";
  auto res = parse_pdb_pocket(text, "chains");
  const auto& p = res.pocket;
  REQUIRE(p.atoms.size() == 4);
  CHECK(p.residue_count() == 4);
  CHECK(p.residue_of[0] == 0);
  CHECK(p.residue_of[1] == 1);
  CHECK(p.residue_of[2] == 2);
  CHECK(p.residue_of[3] == 3);
  CHECK(p.amino_acid_of[1] == "ALA");
}

TEST_CASE("pdb: altloc B and HETATM lines are skipped") {
  std::string text;
  text += "ATOM      1  CA AGLY A   1       0.000   0.000   0.000  1.00  0.00           C\n";
  text += "ATOM      2  CA BGLY A   1       0.100   0.000   0.000  1.00  0.00           C\n";
  text += "HETATM    3  O   HOH A 101       5.000   5.000   5.000  1.00  0.00           O\n";
  auto res = parse_pdb_pocket(text, "altloc");
  CHECK(res.pocket.atoms.size() == 1);
  CHECK(res.pocket.atoms[0].pos.x == doctest::Approx(0.0));
}

TEST_CASE("pdb: element falls back to the atom name") {
  // No element columns at all; SE prefix means selenium, CA means carbon.
  std::string text;
  text += "ATOM      1 SE   MSE A   1       0.000   0.000   0.000  1.00  0.00\n";
  text += "ATOM      2  CA  MSE A   1       1.900   0.000   0.000  1.00  0.00\n";
  auto res = parse_pdb_pocket(text, "fallback");
  REQUIRE(res.pocket.atoms.size() == 2);
  CHECK(res.pocket.atoms[0].z == 34);
  CHECK(res.pocket.atoms[1].z == 6);
  CHECK(res.pocket.amino_acid_of[0] == "UNK");  // MSE is not canonical
}

TEST_CASE("pdb: charge suffix on the element field is stripped") {
  std::string text =
      "ATOM      1  NZ  LYS A   1       0.000   0.000   0.000  1.00  0.00           N1+\n";
  auto res = parse_pdb_pocket(text, "charge");
  REQUIRE(res.pocket.atoms.size() == 1);
  CHECK(res.pocket.atoms[0].z == 7);
}

TEST_CASE("pdb: malformed coordinates become line issues") {
  std::string text;
  text += "ATOM      1  CA  GLY A   1       0.000   0.000   0.000  1.00  0.00           C\n";
  text += "ATOM      2  CA  GLY A   2         abc   0.000   0.000  1.00  0.00           C\n";
  auto res = parse_pdb_pocket(text, "badcoord");
  CHECK(res.pocket.atoms.size() == 1);
  REQUIRE(res.issues.size() == 1);
  CHECK(res.issues[0].line == 2);
}

TEST_CASE("pdb: a pocket with no usable atoms is an error") {
  CHECK_THROWS_AS(parse_pdb_pocket("HETATM    1  O   HOH A 101       0.000   0.000   0.000\n", "x"),
                  Error);
  CHECK_THROWS_AS(parse_pdb_pocket("", "x"), Error);
}

TEST_CASE("report: json output is deterministic and carries 4-decimal values") {
  MetricReport rep;
  rep.method = "demo";
  rep.substructure["jsd_at"] = 0.1167;
  rep.substructure["mae_at"] = 0.868;
  rep.summary["n_molecules"] = 42;
  std::string a = write_report(rep, ReportFormat::Json);
  std::string b = write_report(rep, ReportFormat::Json);
  CHECK(a == b);
  CHECK(a.find("\"jsd_at\": 0.1167") != std::string::npos);
  CHECK(a.find("\"mae_at\": 0.8680") != std::string::npos);

  MetricReport back = read_report_json(a);
  CHECK(back.method == "demo");
  CHECK(back.substructure.at("jsd_at") == doctest::Approx(0.1167));
  CHECK(back.summary.at("n_molecules") == doctest::Approx(42));
}

TEST_CASE("report: empty report is rejected") {
  MetricReport rep;
  rep.method = "empty";
  CHECK_THROWS_AS(write_report(rep, ReportFormat::Json), Error);
  CHECK_THROWS_AS(write_report(rep, ReportFormat::Csv), Error);
}

TEST_CASE("report: csv rows follow the protocol metric order") {
  MetricReport rep;
  rep.method = "demo";
  rep.geometry["ratio_cm"] = 0.25;
  rep.geometry["jsd_bl"] = 0.5;
  std::string csv = write_report(rep, ReportFormat::Csv);
  auto bl = csv.find("demo,geometry,jsd_bl,0.5000");
  auto cm = csv.find("demo,geometry,ratio_cm,0.2500");
  REQUIRE(bl != std::string::npos);
  REQUIRE(cm != std::string::npos);
  CHECK(bl < cm);
  CHECK(csv.rfind("method,aspect,metric,value\n", 0) == 0);
}
