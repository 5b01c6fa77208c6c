#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "archsmell/errors.hpp"

namespace archsmell {

using TopicId = int;
using ConcernDistribution = std::map<TopicId, double>;

/// An implementation element (a class, in OO systems). `interfaces` is the
/// number of public interface members; detection only ever needs the count.
struct Entity {
  std::string id;
  int interfaces = 0;
  std::optional<std::string> file;
};

struct Component {
  std::string id;
  std::set<std::string> entity_ids;
  std::optional<ConcernDistribution> concerns;
};

/// Directed structural dependency between two entities.
struct Link {
  std::string src;
  std::string dst;

  friend auto operator<=>(const Link&, const Link&) = default;
};

enum class CouplingKind { Duplicate, Cochange };

inline const char* to_string(CouplingKind k) {
  return k == CouplingKind::Duplicate ? "duplicate" : "cochange";
}

/// Undirected evolutionary relation between two entities. Endpoints are
/// kept in canonical (a < b) order.
struct Coupling {
  std::string a;
  std::string b;
  CouplingKind kind = CouplingKind::Cochange;
  int strength = 1;

  friend auto operator<=>(const Coupling&, const Coupling&) = default;
};

inline Coupling make_coupling(std::string x, std::string y, CouplingKind kind,
                              int strength) {
  if (x == y)
    throw ValidationError("coupling endpoints must differ: " + x);
  if (strength < 1)
    throw ValidationError("coupling strength must be >= 1 for pair (" + x +
                          ", " + y + ")");
  if (y < x) std::swap(x, y);
  return Coupling{std::move(x), std::move(y), kind, strength};
}

enum class ViewKind { Pkg, Acdc, Arc, Custom };

inline const char* to_string(ViewKind v) {
  switch (v) {
    case ViewKind::Pkg: return "PKG";
    case ViewKind::Acdc: return "ACDC";
    case ViewKind::Arc: return "ARC";
    default: return "custom";
  }
}

inline ViewKind view_kind_from_string(const std::string& s) {
  if (s == "PKG") return ViewKind::Pkg;
  if (s == "ACDC") return ViewKind::Acdc;
  if (s == "ARC") return ViewKind::Arc;
  if (s == "custom") return ViewKind::Custom;
  throw ValidationError("unknown view kind: " + s);
}

/// One recovered architecture of one system version. Immutable once built;
/// all derivations over it are pure.
struct ArchitectureView {
  std::string system;
  std::string version;
  ViewKind kind = ViewKind::Custom;
  std::map<std::string, Entity> entities;        // keyed by entity id
  std::map<std::string, Component> components;   // keyed by component id
  std::vector<Link> links;
  std::vector<Coupling> couplings;
  std::set<TopicId> topics;

  const Entity& entity(const std::string& id) const {
    auto it = entities.find(id);
    if (it == entities.end())
      throw ValidationError("unknown entity: " + id);
    return it->second;
  }

  const Component& component(const std::string& id) const {
    auto it = components.find(id);
    if (it == components.end())
      throw ValidationError("unknown component: " + id);
    return it->second;
  }
};

/// entity id -> owning component id. Every entity belongs to exactly one
/// component in a valid view.
inline std::map<std::string, std::string> parent_map(
    const ArchitectureView& view) {
  std::map<std::string, std::string> parents;
  for (const auto& [cid, comp] : view.components) {
    for (const auto& eid : comp.entity_ids) {
      auto [it, inserted] = parents.emplace(eid, cid);
      if (!inserted)
        throw ValidationError("entity " + eid + " assigned to components " +
                              it->second + " and " + cid);
    }
  }
  return parents;
}

/// Checks all structural invariants: components partition the entities,
/// link/coupling endpoints resolve, concern distributions sum to one.
inline void validate_view(const ArchitectureView& view) {
  const auto parents = parent_map(view);
  for (const auto& [eid, entity] : view.entities) {
    if (eid.empty()) throw ValidationError("empty entity id");
    if (entity.interfaces < 0)
      throw ValidationError("negative interface count for " + eid);
    if (!parents.count(eid))
      throw ValidationError("entity " + eid + " not assigned to a component");
  }
  for (const auto& [eid, cid] : parents) {
    if (!view.entities.count(eid))
      throw ValidationError("component " + cid +
                            " references unknown entity " + eid);
  }
  for (const auto& [cid, comp] : view.components) {
    if (comp.entity_ids.empty())
      throw ValidationError("component " + cid + " has no entities");
    if (comp.concerns) {
      double sum = 0;
      for (const auto& [topic, p] : *comp.concerns) {
        if (p < 0.0 || p > 1.0)
          throw ValidationError("component " + cid +
                                " has out-of-range concern probability");
        if (!view.topics.count(topic))
          throw ValidationError("component " + cid +
                                " references unknown topic " +
                                std::to_string(topic));
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("concern distribution of " + cid +
                              " does not sum to 1");
    }
  }
  for (const auto& link : view.links) {
    if (!view.entities.count(link.src))
      throw ValidationError("link references unknown entity " + link.src);
    if (!view.entities.count(link.dst))
      throw ValidationError("link references unknown entity " + link.dst);
  }
  for (const auto& cp : view.couplings) {
    if (cp.a == cp.b)
      throw ValidationError("coupling endpoints must differ: " + cp.a);
    if (cp.strength < 1)
      throw ValidationError("coupling strength must be >= 1");
    if (!view.entities.count(cp.a))
      throw ValidationError("coupling references unknown entity " + cp.a);
    if (!view.entities.count(cp.b))
      throw ValidationError("coupling references unknown entity " + cp.b);
  }
}

/// Directed graph over component ids, adjacency as sorted sets.
using ComponentGraph = std::map<std::string, std::set<std::string>>;

/// Lifts entity links to the component level. Self-edges are dropped:
/// a component cannot architecturally depend on itself.
inline ComponentGraph component_graph(const ArchitectureView& view) {
  const auto parents = parent_map(view);
  ComponentGraph graph;
  for (const auto& [cid, comp] : view.components) graph[cid];
  for (const auto& link : view.links) {
    auto src = parents.find(link.src);
    if (src == parents.end())
      throw ValidationError("link references entity " + link.src +
                            " outside the view");
    auto dst = parents.find(link.dst);
    if (dst == parents.end())
      throw ValidationError("link references entity " + link.dst +
                            " outside the view");
    if (src->second != dst->second)
      graph[src->second].insert(dst->second);
  }
  return graph;
}

enum class LinkDirection { In, Out, Both };

inline const char* to_string(LinkDirection d) {
  switch (d) {
    case LinkDirection::In: return "in";
    case LinkDirection::Out: return "out";
    default: return "both";
  }
}

/// Number of entity-level links crossing the boundary of one component.
/// Links that stay inside the component are not counted.
inline int crossing_link_count(const ArchitectureView& view,
                               const std::string& component_id,
                               LinkDirection direction) {
  const auto& comp = view.component(component_id);
  const auto& members = comp.entity_ids;
  int in = 0;
  int out = 0;
  for (const auto& link : view.links) {
    const bool src_in = members.count(link.src) > 0;
    const bool dst_in = members.count(link.dst) > 0;
    if (src_in && !dst_in) ++out;
    if (!src_in && dst_in) ++in;
  }
  switch (direction) {
    case LinkDirection::In: return in;
    case LinkDirection::Out: return out;
    default: return in + out;
  }
}

/// Per-entity link degrees over all links (intra- and inter-component).
struct EntityDegrees {
  std::map<std::string, int> in;
  std::map<std::string, int> out;
};

inline EntityDegrees entity_degrees(const ArchitectureView& view) {
  EntityDegrees d;
  for (const auto& [eid, _] : view.entities) {
    d.in[eid] = 0;
    d.out[eid] = 0;
  }
  for (const auto& link : view.links) {
    ++d.out[link.src];
    ++d.in[link.dst];
  }
  return d;
}

}  // namespace archsmell
