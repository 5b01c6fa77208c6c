#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "archsmell/model.hpp"
#include "archsmell/stats.hpp"

namespace archsmell {

/// The 11 smell kinds, in dataset feature-column order.
enum class SmellType { UI, UC, SD, FO, LS, DF, CC, DC, LO, SPF, CO };

inline constexpr std::array<SmellType, 11> kAllSmellTypes = {
    SmellType::UI, SmellType::UC, SmellType::SD, SmellType::FO,
    SmellType::LS, SmellType::DF, SmellType::CC, SmellType::DC,
    SmellType::LO, SmellType::SPF, SmellType::CO};

inline const char* to_string(SmellType t) {
  switch (t) {
    case SmellType::UI: return "UI";
    case SmellType::UC: return "UC";
    case SmellType::SD: return "SD";
    case SmellType::FO: return "FO";
    case SmellType::LS: return "LS";
    case SmellType::DF: return "DF";
    case SmellType::CC: return "CC";
    case SmellType::DC: return "DC";
    case SmellType::LO: return "LO";
    case SmellType::SPF: return "SPF";
    default: return "CO";
  }
}

inline SmellType smell_type_from_string(const std::string& s) {
  for (SmellType t : kAllSmellTypes)
    if (s == to_string(t)) return t;
  throw ValidationError("unknown smell type: " + s);
}

struct SmellConfig {
  /// Minimum in-link count under which a cross-component delegation is
  /// considered sloppy. The strict setting is 2: the delegate serves only
  /// its caller.
  int th_sd = 2;
  /// Smallest strongly connected component reported as a dependency cycle.
  int min_cycle_size = 3;
  /// All fence comparisons are strict (>, <); constant populations yield
  /// no smells. Documented constant, not configurable.
  static constexpr bool strict_comparisons = true;
};

struct SmellInstance {
  SmellType type = SmellType::UI;
  std::set<std::string> component_ids;
  std::set<std::string> entity_ids;
  std::map<std::string, std::string> detail;

  friend auto operator<=>(const SmellInstance&, const SmellInstance&) = default;
};

/// All smell instances found in one view, plus every dynamically computed
/// threshold so results can be re-derived from the report alone.
struct SmellReport {
  std::string system;
  std::string version;
  ViewKind view_kind = ViewKind::Custom;
  SmellConfig config;
  std::vector<SmellInstance> instances;
  std::map<std::string, double> thresholds;
  std::vector<std::string> skipped;  // detectors not run (e.g. no concerns)

  std::vector<const SmellInstance*> of_type(SmellType t) const {
    std::vector<const SmellInstance*> out;
    for (const auto& inst : instances)
      if (inst.type == t) out.push_back(&inst);
    return out;
  }
};

namespace detail {

/// Upper inner fence of a component's concern probabilities; marks its
/// prevalent topics.
inline std::map<std::string, double> concern_fences(
    const ArchitectureView& view) {
  std::map<std::string, double> fences;
  for (const auto& [cid, comp] : view.components) {
    if (!comp.concerns)
      throw ValidationError("component " + cid +
                            " has no concern distribution");
    std::vector<double> probs;
    probs.reserve(comp.concerns->size());
    for (const auto& [_, p] : *comp.concerns) probs.push_back(p);
    fences[cid] = high_threshold(probs);
  }
  return fences;
}

inline double concern_probability(const Component& comp, TopicId topic) {
  auto it = comp.concerns->find(topic);
  return it == comp.concerns->end() ? 0.0 : it->second;
}

}  // namespace detail

struct SpfResult {
  std::map<TopicId, std::set<std::string>> scattered;  // topic -> components
  std::map<std::string, double> per_component_fence;   // th_{z_c}
  double th_spf = 0;
};

/// Scattered Parasitic Functionality: concerns significantly represented
/// in an outlier number of components.
inline SpfResult detect_spf(const ArchitectureView& view) {
  SpfResult result;
  if (view.topics.empty()) return result;
  result.per_component_fence = detail::concern_fences(view);

  std::map<TopicId, int> concern_counts;
  for (TopicId z : view.topics) concern_counts[z] = 0;
  for (const auto& [cid, comp] : view.components) {
    const double fence = result.per_component_fence.at(cid);
    for (const auto& [z, p] : *comp.concerns)
      if (p > fence) ++concern_counts[z];
  }

  std::vector<double> counts;
  counts.reserve(concern_counts.size());
  for (const auto& [_, n] : concern_counts) counts.push_back(n);
  result.th_spf = high_threshold(counts);

  for (TopicId z : view.topics) {
    if (concern_counts.at(z) > result.th_spf) {
      std::set<std::string> holders;
      for (const auto& [cid, comp] : view.components) {
        if (detail::concern_probability(comp, z) >
            result.per_component_fence.at(cid))
          holders.insert(cid);
      }
      result.scattered[z] = std::move(holders);
    }
  }
  return result;
}

struct CoResult {
  std::set<std::string> overloaded;
  std::map<std::string, double> per_component_fence;
  double th_co = 0;
};

/// Concern Overload: components with an outlier number of prevalent topics.
inline CoResult detect_co(const ArchitectureView& view) {
  CoResult result;
  if (view.topics.empty()) return result;
  result.per_component_fence = detail::concern_fences(view);

  std::map<std::string, int> concern_counts;
  for (const auto& [cid, comp] : view.components) {
    const double fence = result.per_component_fence.at(cid);
    int n = 0;
    for (const auto& [_, p] : *comp.concerns)
      if (p > fence) ++n;
    concern_counts[cid] = n;
  }

  std::vector<double> counts;
  counts.reserve(concern_counts.size());
  for (const auto& [_, n] : concern_counts) counts.push_back(n);
  result.th_co = high_threshold(counts);

  for (const auto& [cid, n] : concern_counts)
    if (n > result.th_co) result.overloaded.insert(cid);
  return result;
}

/// Dependency Cycle: strongly connected components of the component graph
/// with at least `min_cycle_size` members. SCCs are returned sorted by
/// their smallest member id.
inline std::vector<std::set<std::string>> detect_dc(
    const ArchitectureView& view, const SmellConfig& config = {}) {
  const ComponentGraph graph = component_graph(view);

  std::vector<std::string> ids;
  ids.reserve(graph.size());
  for (const auto& [id, _] : graph) ids.push_back(id);
  std::map<std::string, int> index_of;
  for (std::size_t i = 0; i < ids.size(); ++i)
    index_of[ids[i]] = static_cast<int>(i);

  const int n = static_cast<int>(ids.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& [src, dsts] : graph) {
    auto& row = adj[index_of.at(src)];
    for (const auto& dst : dsts) row.push_back(index_of.at(dst));
  }

  // Iterative Tarjan
  std::vector<int> order(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> sccs;
  int counter = 0;

  struct Frame {
    int node;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (order[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < adj[f.node].size()) {
        const int next = adj[f.node][f.edge++];
        if (order[next] == -1) {
          order[next] = low[next] = counter++;
          stack.push_back(next);
          on_stack[next] = true;
          frames.push_back({next, 0});
        } else if (on_stack[next]) {
          low[f.node] = std::min(low[f.node], order[next]);
        }
      } else {
        const int node = f.node;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().node] = std::min(low[frames.back().node], low[node]);
        if (low[node] == order[node]) {
          std::vector<int> scc;
          int member;
          do {
            member = stack.back();
            stack.pop_back();
            on_stack[member] = false;
            scc.push_back(member);
          } while (member != node);
          sccs.push_back(std::move(scc));
        }
      }
    }
  }

  std::vector<std::set<std::string>> cycles;
  for (const auto& scc : sccs) {
    if (static_cast<int>(scc.size()) < config.min_cycle_size) continue;
    std::set<std::string> members;
    for (int idx : scc) members.insert(ids[idx]);
    cycles.push_back(std::move(members));
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
  return cycles;
}

struct LoResult {
  std::set<std::pair<std::string, LinkDirection>> overloaded;
  std::map<LinkDirection, double> th_lo;
};

/// Link Overload: components whose inter-component link count is an
/// outlier, per direction (in, out, both).
inline LoResult detect_lo(const ArchitectureView& view) {
  LoResult result;
  constexpr std::array<LinkDirection, 3> directions = {
      LinkDirection::In, LinkDirection::Out, LinkDirection::Both};

  std::map<std::pair<std::string, LinkDirection>, int> counts;
  for (const auto& [cid, _] : view.components)
    for (LinkDirection d : directions)
      counts[{cid, d}] = crossing_link_count(view, cid, d);

  for (LinkDirection d : directions) {
    std::vector<double> population;
    population.reserve(view.components.size());
    for (const auto& [cid, _] : view.components)
      population.push_back(counts.at({cid, d}));
    result.th_lo[d] = high_threshold(population);
  }

  for (const auto& [cid, _] : view.components)
    for (LinkDirection d : directions)
      if (counts.at({cid, d}) > result.th_lo.at(d))
        result.overloaded.insert({cid, d});
  return result;
}

struct UiUcResult {
  std::set<std::pair<std::string, std::string>> unused_interfaces;  // (c, e)
  std::set<std::string> unused_components;
};

/// Unused Interface: an entity with a public interface and no incident
/// links in either direction. Unused Component: every interfaced entity of
/// the component is unused (at least one interfaced entity required).
inline UiUcResult detect_ui_uc(const ArchitectureView& view) {
  UiUcResult result;
  const EntityDegrees degrees = entity_degrees(view);
  for (const auto& [cid, comp] : view.components) {
    bool has_interfaced_entity = false;
    bool all_unused = true;
    for (const auto& eid : comp.entity_ids) {
      const Entity& e = view.entity(eid);
      if (e.interfaces <= 0) continue;
      has_interfaced_entity = true;
      if (degrees.in.at(eid) == 0 && degrees.out.at(eid) == 0)
        result.unused_interfaces.insert({cid, eid});
      else
        all_unused = false;
    }
    if (has_interfaced_entity && all_unused)
      result.unused_components.insert(cid);
  }
  return result;
}

struct SdInstance {
  std::string src_component;
  std::string src_entity;
  std::string dst_component;
  std::string dst_entity;

  friend auto operator<=>(const SdInstance&, const SdInstance&) = default;
};

/// Sloppy Delegation: a cross-component link to an entity that does
/// nothing further (no out-links) and serves almost nobody
/// (in-links < th_sd).
inline std::set<SdInstance> detect_sd(const ArchitectureView& view,
                                      const SmellConfig& config = {}) {
  std::set<SdInstance> result;
  const auto parents = parent_map(view);
  const EntityDegrees degrees = entity_degrees(view);
  for (const auto& link : view.links) {
    const auto& c1 = parents.at(link.src);
    const auto& c2 = parents.at(link.dst);
    if (c1 == c2) continue;
    if (degrees.out.at(link.dst) == 0 && degrees.in.at(link.dst) < config.th_sd)
      result.insert({c1, link.src, c2, link.dst});
  }
  return result;
}

struct FoLsResult {
  std::set<std::string> overloaded;   // FO
  std::set<std::string> underloaded;  // LS
  double th_fo = 0;
  double th_ls = 0;
};

/// Functionality Overload / Lego Syndrome: components whose total interface
/// count falls above the upper or below the lower inner fence.
inline FoLsResult detect_fo_ls(const ArchitectureView& view) {
  FoLsResult result;
  std::map<std::string, int> totals;
  for (const auto& [cid, comp] : view.components) {
    int n = 0;
    for (const auto& eid : comp.entity_ids) n += view.entity(eid).interfaces;
    totals[cid] = n;
  }
  std::vector<double> population;
  population.reserve(totals.size());
  for (const auto& [_, n] : totals) population.push_back(n);
  const FenceResult fences = inner_fences(population);
  result.th_fo = fences.high_fence;
  result.th_ls = fences.low_fence;
  for (const auto& [cid, n] : totals) {
    if (n > result.th_fo)
      result.overloaded.insert(cid);
    else if (n < result.th_ls)
      result.underloaded.insert(cid);
  }
  return result;
}

struct DfCcResult {
  std::set<std::string> duplicated;  // DF
  std::set<std::string> cochanged;   // CC
  double th_df = 0;
  double th_cc = 0;
};

/// Duplicate Functionality / Co-change Coupling: components whose summed
/// coupling strength (duplicates resp. co-changes over their entities) is
/// an outlier. A coupling internal to one component contributes through
/// both endpoints.
inline DfCcResult detect_df_cc(const ArchitectureView& view) {
  DfCcResult result;
  const auto parents = parent_map(view);
  std::map<std::string, int> num_du;
  std::map<std::string, int> num_co;
  for (const auto& [cid, _] : view.components) {
    num_du[cid] = 0;
    num_co[cid] = 0;
  }
  for (const auto& cp : view.couplings) {
    auto& totals = cp.kind == CouplingKind::Duplicate ? num_du : num_co;
    totals[parents.at(cp.a)] += cp.strength;
    totals[parents.at(cp.b)] += cp.strength;
  }

  std::vector<double> du_pop, co_pop;
  du_pop.reserve(num_du.size());
  co_pop.reserve(num_co.size());
  for (const auto& [_, n] : num_du) du_pop.push_back(n);
  for (const auto& [_, n] : num_co) co_pop.push_back(n);
  result.th_df = high_threshold(du_pop);
  result.th_cc = high_threshold(co_pop);

  for (const auto& [cid, n] : num_du)
    if (n > result.th_df) result.duplicated.insert(cid);
  for (const auto& [cid, n] : num_co)
    if (n > result.th_cc) result.cochanged.insert(cid);
  return result;
}

inline bool concerns_available(const ArchitectureView& view) {
  if (view.topics.empty()) return false;
  for (const auto& [_, comp] : view.components)
    if (!comp.concerns) return false;
  return true;
}

/// Runs every detector and assembles a report with deterministic instance
/// ordering. Concern-based detectors are skipped (and recorded as skipped)
/// when the view carries no usable concern data.
inline SmellReport detect_all(const ArchitectureView& view,
                              const SmellConfig& config = {}) {
  if (config.th_sd < 2)
    throw ValidationError("th_sd must be >= 2");
  if (config.min_cycle_size < 2)
    throw ValidationError("min_cycle_size must be >= 2");
  validate_view(view);
  SmellReport report;
  report.system = view.system;
  report.version = view.version;
  report.view_kind = view.kind;
  report.config = config;

  const UiUcResult ui_uc = detect_ui_uc(view);
  for (const auto& [cid, eid] : ui_uc.unused_interfaces)
    report.instances.push_back({SmellType::UI, {cid}, {eid}, {}});
  for (const auto& cid : ui_uc.unused_components)
    report.instances.push_back({SmellType::UC, {cid}, {}, {}});

  for (const auto& sd : detect_sd(view, config)) {
    report.instances.push_back({SmellType::SD,
                                {sd.src_component, sd.dst_component},
                                {sd.src_entity, sd.dst_entity},
                                {{"src", sd.src_entity}, {"dst", sd.dst_entity}}});
  }

  const FoLsResult fo_ls = detect_fo_ls(view);
  report.thresholds["th_fo"] = fo_ls.th_fo;
  report.thresholds["th_ls"] = fo_ls.th_ls;
  for (const auto& cid : fo_ls.overloaded)
    report.instances.push_back({SmellType::FO, {cid}, {}, {}});
  for (const auto& cid : fo_ls.underloaded)
    report.instances.push_back({SmellType::LS, {cid}, {}, {}});

  const DfCcResult df_cc = detect_df_cc(view);
  report.thresholds["th_df"] = df_cc.th_df;
  report.thresholds["th_cc"] = df_cc.th_cc;
  for (const auto& cid : df_cc.duplicated)
    report.instances.push_back({SmellType::DF, {cid}, {}, {}});
  for (const auto& cid : df_cc.cochanged)
    report.instances.push_back({SmellType::CC, {cid}, {}, {}});

  for (const auto& scc : detect_dc(view, config))
    report.instances.push_back({SmellType::DC, scc, {}, {}});

  const LoResult lo = detect_lo(view);
  report.thresholds["th_lo.in"] = lo.th_lo.at(LinkDirection::In);
  report.thresholds["th_lo.out"] = lo.th_lo.at(LinkDirection::Out);
  report.thresholds["th_lo.both"] = lo.th_lo.at(LinkDirection::Both);
  for (const auto& [cid, dir] : lo.overloaded)
    report.instances.push_back(
        {SmellType::LO, {cid}, {}, {{"direction", to_string(dir)}}});

  if (concerns_available(view)) {
    const SpfResult spf = detect_spf(view);
    report.thresholds["th_spf"] = spf.th_spf;
    for (const auto& [cid, fence] : spf.per_component_fence)
      report.thresholds["th_z." + cid] = fence;
    for (const auto& [topic, holders] : spf.scattered)
      report.instances.push_back(
          {SmellType::SPF, holders, {}, {{"topic", std::to_string(topic)}}});

    const CoResult co = detect_co(view);
    report.thresholds["th_co"] = co.th_co;
    for (const auto& cid : co.overloaded)
      report.instances.push_back({SmellType::CO, {cid}, {}, {}});
  } else {
    report.skipped = {"SPF", "CO"};
  }

  std::sort(report.instances.begin(), report.instances.end());
  return report;
}

}  // namespace archsmell
