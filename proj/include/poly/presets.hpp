#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poly/heat.hpp"
#include "poly/rewrite.hpp"
#include "poly/term.hpp"

namespace poly {

// POLY_DATA_DIR if set, else the data directory of the source tree.
std::string default_data_dir();
std::string read_file(const std::string &path);

// Operator involution for top-down mirroring.
struct Duality {
  std::map<std::string, std::string> table;
  bool empty() const { return table.empty(); }
  // Throws Error(Domain) for an operator without a dual.
  const std::string &dual(const std::string &op) const;
};

Duality lz2_duality(); // mu <-> delta, eta <-> epsilon, tau and kappa fixed

Circuit dualize(const Circuit &c, const Duality &d);

// Throws Error(Domain) unless interpret(I, dualize(g)) is the dual triple of
// interpret(I, g) for every operator g of sig.
void check_duality_compatible(const Interpretation &I, const Signature &sig, const Duality &d);

struct DedupEntry {
  std::string rule;
  std::string representative; // equals rule for kept rules
  std::string reason;         // "kept", "dual", "same-image"
  bool self_dual = false;
};

struct DedupResult {
  std::vector<Rule> reduced;
  std::vector<DedupEntry> entries;
};

// One rule per class of rules related by duality or with equal images under I.
// An empty duality only merges equal images.
DedupResult dedup_rules_for_checking(const Polygraph &p, const Interpretation &I, const Duality &d);

// Linear maps over GF(2): rows[k][j] is the coefficient of input j in output k.
struct Gf2Map {
  int m = 0;
  std::vector<std::vector<int>> rows;
  bool operator==(const Gf2Map &) const = default;
};
Gf2Map gf2_semantics(const Circuit &c); // over mu, eta, delta, epsilon, tau, kappa
std::string to_string(const Gf2Map &f);

// Resolves f1, g (built from sig) and preset names such as lz2, then paths.
Interpretation load_interpretation(const std::string &name_or_path, const Signature &sig,
                                   const std::string &data_dir = default_data_dir());

struct Preset {
  std::string name;
  std::string description;
  std::optional<Trs> trs;
  Polygraph polygraph; // the translation when trs is set
  std::vector<Interpretation> layers;
  std::optional<Duality> duality;
  std::map<std::string, int> expected_layer; // -1: not certified
  bool expect_certified = false;
};

std::vector<std::string> preset_names(const std::string &data_dir = default_data_dir());
// Validates the expected certificate verdicts; a mismatch throws Error(Domain)
// listing the differences.
Preset load_preset(const std::string &name, const std::string &data_dir = default_data_dir());

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct PresetReport {
  std::string preset;
  std::vector<CheckResult> checks;
  bool ok() const;
};

PresetReport verify_preset(const std::string &name, const std::string &data_dir = default_data_dir());

} // namespace poly
