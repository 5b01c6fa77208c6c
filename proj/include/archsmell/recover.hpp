#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "archsmell/ingest.hpp"
#include "archsmell/model.hpp"

namespace archsmell {

/// Raw structural facts a view is recovered from: dependency edges plus
/// optional per-entity interface counts and file paths.
struct EntityFacts {
  std::vector<std::pair<std::string, std::string>> deps;
  std::map<std::string, int> interfaces;          // absent -> 0
  std::map<std::string, std::string> files;       // absent -> convention
  std::set<std::string> extra_entities;           // entities with no deps
  std::string file_extension = ".java";
};

namespace detail {

inline std::set<std::string> entity_universe(const EntityFacts& facts) {
  std::set<std::string> ids = facts.extra_entities;
  for (const auto& [src, dst] : facts.deps) {
    ids.insert(src);
    ids.insert(dst);
  }
  for (const auto& [eid, _] : facts.interfaces) ids.insert(eid);
  return ids;
}

inline void fill_entities(ArchitectureView& view, const EntityFacts& facts,
                          const std::set<std::string>& ids) {
  for (const auto& eid : ids) {
    Entity e;
    e.id = eid;
    auto it = facts.interfaces.find(eid);
    e.interfaces = it == facts.interfaces.end() ? 0 : it->second;
    auto fit = facts.files.find(eid);
    e.file = fit != facts.files.end()
                 ? fit->second
                 : entity_path_by_convention(eid, facts.file_extension);
    view.entities[eid] = std::move(e);
  }
  for (const auto& [src, dst] : facts.deps) view.links.push_back({src, dst});
}

inline std::string package_of(const std::string& entity_id, int depth) {
  const auto last_dot = entity_id.rfind('.');
  if (last_dot == std::string::npos) return "(default)";
  std::string pkg = entity_id.substr(0, last_dot);
  if (depth > 0) {
    std::size_t pos = 0;
    int segments = 0;
    while (pos < pkg.size()) {
      const auto dot = pkg.find('.', pos);
      ++segments;
      if (segments == depth) {
        if (dot != std::string::npos) pkg = pkg.substr(0, dot);
        break;
      }
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
  }
  return pkg;
}

}  // namespace detail

/// Package-structure view: each entity's component is its package (the
/// qualified name minus the final segment), optionally truncated to the
/// first `depth` segments. Entities without a package land in "(default)".
inline ArchitectureView recover_pkg(const std::string& system,
                                    const std::string& version,
                                    const EntityFacts& facts, int depth = 0) {
  ArchitectureView view;
  view.system = system;
  view.version = version;
  view.kind = ViewKind::Pkg;
  const auto ids = detail::entity_universe(facts);
  detail::fill_entities(view, facts, ids);
  for (const auto& eid : ids) {
    const std::string pkg = detail::package_of(eid, depth);
    auto& comp = view.components[pkg];
    comp.id = pkg;
    comp.entity_ids.insert(eid);
  }
  validate_view(view);
  return view;
}

/// Applies an externally recovered cluster map (ACDC or ARC output). The
/// map must cover every entity appearing in the dependency facts.
inline ArchitectureView apply_cluster_map(
    const std::string& system, const std::string& version, ViewKind kind,
    const EntityFacts& facts,
    const std::map<std::string, std::set<std::string>>& cluster_map) {
  std::set<std::string> covered;
  for (const auto& [cid, entities] : cluster_map)
    covered.insert(entities.begin(), entities.end());

  std::vector<std::string> missing;
  for (const auto& eid : detail::entity_universe(facts))
    if (!covered.count(eid)) missing.push_back(eid);
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "cluster map does not cover " << missing.size() << " entities:";
    for (const auto& eid : missing) msg << ' ' << eid;
    throw ValidationError(msg.str());
  }

  ArchitectureView view;
  view.system = system;
  view.version = version;
  view.kind = kind;
  detail::fill_entities(view, facts, covered);
  for (const auto& [cid, entities] : cluster_map) {
    auto& comp = view.components[cid];
    comp.id = cid;
    comp.entity_ids = entities;
  }
  validate_view(view);
  return view;
}

/// Returns a copy of the view with concern distributions attached to the
/// mapped components and the topic set extended accordingly.
inline ArchitectureView attach_concerns(
    const ArchitectureView& view,
    const std::map<std::string, ConcernDistribution>& topic_map) {
  ArchitectureView out = view;
  for (const auto& [cid, dist] : topic_map) {
    auto it = out.components.find(cid);
    if (it == out.components.end())
      throw ValidationError("topic distribution for unknown component " + cid);
    it->second.concerns = dist;
    for (const auto& [topic, _] : dist) out.topics.insert(topic);
  }
  validate_view(out);
  return out;
}

struct AttachCouplingsResult {
  ArchitectureView view;
  int dropped = 0;  // couplings with endpoints outside the view
};

/// Adds couplings to the view. Couplings whose endpoints are not view
/// entities are dropped and counted: co-change extraction routinely sees
/// files outside the architecture.
inline AttachCouplingsResult attach_couplings(
    const ArchitectureView& view, const std::vector<Coupling>& couplings) {
  AttachCouplingsResult result{view, 0};
  for (const auto& cp : couplings) {
    if (result.view.entities.count(cp.a) && result.view.entities.count(cp.b))
      result.view.couplings.push_back(cp);
    else
      ++result.dropped;
  }
  validate_view(result.view);
  return result;
}

}  // namespace archsmell
