#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "dirackit/diracgroup.hpp"
#include "dirackit/finitemodel.hpp"

namespace dirackit {

using Json = nlohmann::ordered_json;

/// One self-contained workspace document. Sections are maps from names to
/// definitions; rationals are strings "p/q" throughout so nothing depends on
/// binary float formats.
struct Workspace {
  struct SubspaceEntry {
    std::vector<Vec> raw;  // as listed in the file (candidate lists need this)
    Subspace space{0};
  };
  struct TripleEntry {
    std::string algebra, beta, g, h;
    std::vector<LinearMap> k_generators;
  };
  struct FiniteModelEntry {
    std::string group, bullet, lambda, l;
    std::vector<int> k;
  };

  std::map<std::string, LieAlgebra> lie_algebras;
  std::map<std::string, SymmetricForm> forms;
  std::map<std::string, SubspaceEntry> subspaces;
  std::map<std::string, TripleEntry> triples;
  std::map<std::string, FiniteGroup> groups;
  std::map<std::string, GroupRep> reps;
  std::map<std::string, FiniteModelEntry> finite_models;
};

Workspace parse_workspace(const Json& doc);
Workspace load_workspace(const std::string& path);

DiracManinTriple resolve_triple(const Workspace& ws, const std::string& name);

/// Serialization of the core value types, shaped exactly like the input
/// sections so every dump re-parses.
Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
Json matrix_to_json(const LinearMap& m);
LinearMap matrix_from_json(const Json& j);
Json subspace_to_json(const Subspace& s);
Json report_to_json(const ValidationReport& rep);

std::string file_digest(const std::string& path);

/// Command outcomes: ok == all checks passed; the `result` subtree is fully
/// deterministic (no timing, no timestamps).
struct CommandOutcome {
  Json report;
  bool ok = false;
};

CommandOutcome cmd_validate(const Workspace& ws, const std::string& triple_name);
CommandOutcome cmd_build_q(const Workspace& ws, const std::string& triple_name);

enum class HomspaceRoute { via_dbeta, via_q, both };
CommandOutcome cmd_homspace(const Workspace& ws, const std::string& triple_name,
                            const std::string& c_name, HomspaceRoute route);

CommandOutcome cmd_search(const Workspace& ws, const std::string& triple_name,
                          const std::string& k_name, const std::string& candidates_name,
                          std::size_t max_subset_size);

CommandOutcome cmd_finite_check(const Workspace& ws, const std::string& model_name);

/// Picks the unique entry name when `requested` is empty.
template <typename MapT>
std::string pick_name(const MapT& entries, const std::string& requested, const char* what) {
  if (!requested.empty()) {
    if (entries.find(requested) == entries.end())
      throw ParseError(std::string("no ") + what + " named '" + requested + "'");
    return requested;
  }
  if (entries.size() == 1) return entries.begin()->first;
  throw ParseError(std::string("workspace must contain exactly one ") + what +
                   " unless one is named explicitly");
}

}  // namespace dirackit
