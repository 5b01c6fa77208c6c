#pragma once

// Shared fixtures and independent oracles used across the test suites.
// Oracles re-evaluate each detection rule in straight-line form and
// must stay independent of the implementation they check.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "archsmell/model.hpp"
#include "archsmell/rng.hpp"
#include "archsmell/stats.hpp"

namespace testsupport {

using namespace archsmell;

struct ViewSpec {
  int components = 0;
  int entities = 0;
  bool with_concerns = false;
  bool with_couplings = false;
};

/// Random view: entities distributed over components, random links,
/// interface counts, optional topics and couplings.
inline ArchitectureView random_view(Rng& rng, const ViewSpec& spec) {
  ArchitectureView view;
  view.system = "sys";
  view.version = "1.0";
  view.kind = ViewKind::Custom;

  std::vector<std::string> entity_ids;
  for (int e = 0; e < spec.entities; ++e)
    entity_ids.push_back("e" + std::to_string(e));
  std::vector<std::string> component_ids;
  for (int c = 0; c < spec.components; ++c)
    component_ids.push_back("c" + std::to_string(c));

  for (int c = 0; c < spec.components; ++c) {
    Component comp;
    comp.id = component_ids[c];
    view.components[comp.id] = comp;
  }
  // every component gets at least one entity; the rest are spread randomly
  for (int e = 0; e < spec.entities; ++e) {
    const std::size_t c = e < spec.components
                              ? static_cast<std::size_t>(e)
                              : uniform_index(rng, component_ids.size());
    Entity entity;
    entity.id = entity_ids[e];
    entity.interfaces = static_cast<int>(uniform_index(rng, 8));  // 0..7
    view.entities[entity.id] = entity;
    view.components[component_ids[c]].entity_ids.insert(entity.id);
  }

  const std::size_t link_count = uniform_index(rng, 3 * spec.entities + 1);
  for (std::size_t i = 0; i < link_count; ++i) {
    const auto& src = entity_ids[uniform_index(rng, entity_ids.size())];
    const auto& dst = entity_ids[uniform_index(rng, entity_ids.size())];
    view.links.push_back({src, dst});
  }

  if (spec.with_concerns) {
    const int topic_count = 2 + static_cast<int>(uniform_index(rng, 6));
    for (int t = 0; t < topic_count; ++t) view.topics.insert(t);
    for (auto& [_, comp] : view.components) {
      ConcernDistribution dist;
      double sum = 0;
      for (int t = 0; t < topic_count; ++t) {
        const double w = uniform01(rng) + 1e-6;
        dist[t] = w;
        sum += w;
      }
      for (auto& [__, p] : dist) p /= sum;
      comp.concerns = dist;
    }
  }

  if (spec.with_couplings && spec.entities >= 2) {
    const std::size_t coupling_count = uniform_index(rng, 2 * spec.entities + 1);
    std::map<std::pair<std::string, std::string>, std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < coupling_count; ++i) {
      auto a = entity_ids[uniform_index(rng, entity_ids.size())];
      auto b = entity_ids[uniform_index(rng, entity_ids.size())];
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      const int strength = 1 + static_cast<int>(uniform_index(rng, 9));
      if (uniform_index(rng, 2) == 0)
        pairs[{a, b}].first += strength;  // duplicate
      else
        pairs[{a, b}].second += strength;  // cochange
    }
    for (const auto& [pair, strengths] : pairs) {
      if (strengths.first > 0)
        view.couplings.push_back(make_coupling(
            pair.first, pair.second, CouplingKind::Duplicate, strengths.first));
      if (strengths.second > 0)
        view.couplings.push_back(make_coupling(
            pair.first, pair.second, CouplingKind::Cochange, strengths.second));
    }
  }
  return view;
}

/// Hand-built view that triggers at least one instance of every smell kind:
/// FO (big), LS (tiny), DC (cyc1-3), LO (hub), UI+UC (dead), SD (leaf),
/// DF (p6/p7 duplicates), CC (p4/p5 co-changes), SPF (topic 100 across
/// spf1-4), CO (co1).
inline ArchitectureView all_smells_fixture() {
  ArchitectureView view;
  view.system = "fixture";
  view.version = "1.0";
  view.kind = ViewKind::Custom;

  std::vector<std::string> component_order;
  auto add_component = [&](const std::string& cid, int entity_count,
                           int interfaces_each) {
    Component comp;
    comp.id = cid;
    for (int i = 0; i < entity_count; ++i) {
      const std::string eid = cid + ".E" + std::to_string(i);
      view.entities[eid] = {eid, interfaces_each, {}};
      comp.entity_ids.insert(eid);
    }
    view.components[cid] = comp;
    component_order.push_back(cid);
  };
  auto eid = [](const std::string& cid, int i) {
    return cid + ".E" + std::to_string(i);
  };

  for (int i = 0; i < 8; ++i) add_component("p" + std::to_string(i), 3, 5);
  add_component("big", 2, 50);
  add_component("tiny", 1, 1);
  add_component("cyc1", 3, 5);
  add_component("cyc2", 3, 5);
  add_component("cyc3", 3, 5);
  add_component("hub", 3, 5);
  add_component("dead", 3, 5);
  add_component("leaf", 3, 5);
  for (int i = 1; i <= 4; ++i) add_component("spf" + std::to_string(i), 3, 5);
  add_component("co1", 3, 5);

  // keep E1/E2 used inside every three-entity component except dead
  for (const auto& cid : component_order) {
    if (cid == "dead" || cid == "tiny" || cid == "big") continue;
    view.links.push_back({eid(cid, 1), eid(cid, 2)});
  }
  // plain DAG chain
  for (int i = 0; i + 1 < 8; ++i)
    view.links.push_back(
        {eid("p" + std::to_string(i), 0), eid("p" + std::to_string(i + 1), 1)});
  // big used internally, tiny points outward
  view.links.push_back({eid("big", 0), eid("big", 1)});
  view.links.push_back({eid("tiny", 0), eid("p0", 2)});
  // dependency cycle
  view.links.push_back({eid("cyc1", 0), eid("cyc2", 0)});
  view.links.push_back({eid("cyc2", 0), eid("cyc3", 0)});
  view.links.push_back({eid("cyc3", 0), eid("cyc1", 0)});
  // hub overload: 4 in, 6 out
  view.links.push_back({eid("p0", 0), eid("hub", 0)});
  view.links.push_back({eid("p1", 0), eid("hub", 0)});
  view.links.push_back({eid("p2", 0), eid("hub", 1)});
  view.links.push_back({eid("p3", 0), eid("hub", 1)});
  view.links.push_back({eid("hub", 0), eid("p4", 1)});
  view.links.push_back({eid("hub", 0), eid("p5", 1)});
  view.links.push_back({eid("hub", 1), eid("p6", 1)});
  view.links.push_back({eid("hub", 2), eid("p7", 1)});
  view.links.push_back({eid("hub", 2), eid("p4", 2)});
  view.links.push_back({eid("hub", 1), eid("p5", 2)});
  // sloppy delegation: leaf.E0 has no out-links and a single in-link
  view.links.push_back({eid("p1", 1), eid("leaf", 0)});

  // couplings: duplicates between p6/p7, co-changes between p4/p5
  view.couplings.push_back(
      make_coupling(eid("p6", 0), eid("p7", 0), CouplingKind::Duplicate, 15));
  view.couplings.push_back(
      make_coupling(eid("p6", 1), eid("p7", 1), CouplingKind::Duplicate, 15));
  view.couplings.push_back(
      make_coupling(eid("p4", 0), eid("p5", 0), CouplingKind::Cochange, 9));

  // topics: one per component plus the scattered topic 100
  const TopicId scattered = 100;
  std::map<std::string, TopicId> own;
  for (std::size_t i = 0; i < component_order.size(); ++i) {
    own[component_order[i]] = static_cast<TopicId>(i);
    view.topics.insert(static_cast<TopicId>(i));
  }
  view.topics.insert(scattered);

  auto distribute = [&](const std::string& cid,
                        const std::map<TopicId, double>& strong) {
    ConcernDistribution dist;
    double used = 0;
    for (const auto& [t, p] : strong) used += p;
    std::size_t weak = 0;
    for (TopicId t : view.topics)
      if (!strong.count(t)) ++weak;
    const double epsilon = (1.0 - used) / static_cast<double>(weak);
    for (TopicId t : view.topics) {
      auto it = strong.find(t);
      dist[t] = it != strong.end() ? it->second : epsilon;
    }
    view.components[cid].concerns = dist;
  };

  for (const auto& cid : component_order) {
    if (cid.rfind("spf", 0) == 0) {
      distribute(cid, {{own[cid], 0.55}, {scattered, 0.35}});
    } else if (cid == "co1") {
      distribute(cid, {{own[cid], 0.18},
                       {own["p4"], 0.18},
                       {own["p5"], 0.18},
                       {own["p6"], 0.18},
                       {own["p7"], 0.18}});
    } else {
      distribute(cid, {{own[cid], 0.9}});
    }
  }
  return view;
}

// ---- straight-line re-evaluations of the detection rules ------------------

inline std::map<std::string, std::string> oracle_parents(
    const ArchitectureView& view) {
  std::map<std::string, std::string> parents;
  for (const auto& [cid, comp] : view.components)
    for (const auto& eid : comp.entity_ids) parents[eid] = cid;
  return parents;
}

inline std::set<std::pair<std::string, std::string>> oracle_component_edges(
    const ArchitectureView& view) {
  const auto parents = oracle_parents(view);
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& link : view.links) {
    const auto& c1 = parents.at(link.src);
    const auto& c2 = parents.at(link.dst);
    if (c1 != c2) edges.insert({c1, c2});
  }
  return edges;
}

/// Mutual-reachability SCCs by O(n^3) transitive closure.
inline std::vector<std::set<std::string>> oracle_sccs(
    const std::set<std::pair<std::string, std::string>>& edges,
    const std::vector<std::string>& nodes, int min_size) {
  const int n = static_cast<int>(nodes.size());
  std::map<std::string, int> index;
  for (int i = 0; i < n; ++i) index[nodes[i]] = i;
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) reach[i][i] = true;
  for (const auto& [a, b] : edges) reach[index.at(a)][index.at(b)] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;

  std::vector<bool> assigned(n, false);
  std::vector<std::set<std::string>> sccs;
  for (int i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::set<std::string> scc;
    for (int j = 0; j < n; ++j) {
      if (reach[i][j] && reach[j][i]) {
        scc.insert(nodes[j]);
        assigned[j] = true;
      }
    }
    if (static_cast<int>(scc.size()) >= min_size) sccs.push_back(scc);
  }
  std::sort(sccs.begin(), sccs.end(),
            [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
  return sccs;
}

inline int oracle_crossing_links(const ArchitectureView& view,
                                 const std::string& cid, bool incoming) {
  const auto parents = oracle_parents(view);
  int count = 0;
  for (const auto& link : view.links) {
    const bool src_in = parents.at(link.src) == cid;
    const bool dst_in = parents.at(link.dst) == cid;
    if (incoming && dst_in && !src_in) ++count;
    if (!incoming && src_in && !dst_in) ++count;
  }
  return count;
}

// detectSPF, line by line
inline std::map<TopicId, std::set<std::string>> oracle_spf(
    const ArchitectureView& view) {
  if (view.topics.empty()) return {};
  std::map<std::string, double> th_zc;
  for (const auto& [cid, comp] : view.components) {
    std::vector<double> probs;
    for (const auto& [_, p] : *comp.concerns) probs.push_back(p);
    th_zc[cid] = high_threshold(probs);
  }
  std::map<TopicId, int> concern_counts;
  for (TopicId z : view.topics) concern_counts[z] = 0;
  for (const auto& [cid, comp] : view.components)
    for (const auto& [z, p] : *comp.concerns)
      if (p > th_zc.at(cid)) concern_counts[z] += 1;
  std::vector<double> counts;
  for (const auto& [_, c] : concern_counts) counts.push_back(c);
  const double th_spf = high_threshold(counts);
  std::map<TopicId, std::set<std::string>> result;
  for (TopicId z : view.topics) {
    if (concern_counts.at(z) > th_spf) {
      for (const auto& [cid, comp] : view.components) {
        auto it = comp.concerns->find(z);
        const double p = it == comp.concerns->end() ? 0.0 : it->second;
        if (p > th_zc.at(cid)) result[z].insert(cid);
      }
    }
  }
  return result;
}

// detectCO, line by line
inline std::set<std::string> oracle_co(const ArchitectureView& view) {
  if (view.topics.empty()) return {};
  std::map<std::string, int> counts;
  for (const auto& [cid, comp] : view.components) {
    std::vector<double> probs;
    for (const auto& [_, p] : *comp.concerns) probs.push_back(p);
    const double th_zc = high_threshold(probs);
    int n = 0;
    for (const auto& [_, p] : *comp.concerns)
      if (p > th_zc) ++n;
    counts[cid] = n;
  }
  std::vector<double> population;
  for (const auto& [_, n] : counts) population.push_back(n);
  const double th_co = high_threshold(population);
  std::set<std::string> result;
  for (const auto& [cid, n] : counts)
    if (n > th_co) result.insert(cid);
  return result;
}

// detectLO, line by line
inline std::set<std::pair<std::string, std::string>> oracle_lo(
    const ArchitectureView& view) {
  const std::vector<std::string> directions = {"in", "out", "both"};
  std::map<std::pair<std::string, std::string>, int> num_links;
  for (const auto& [cid, _] : view.components) {
    const int in = oracle_crossing_links(view, cid, true);
    const int out = oracle_crossing_links(view, cid, false);
    num_links[{cid, "in"}] = in;
    num_links[{cid, "out"}] = out;
    num_links[{cid, "both"}] = in + out;
  }
  std::map<std::string, double> th_lo;
  for (const auto& d : directions) {
    std::vector<double> population;
    for (const auto& [cid, _] : view.components)
      population.push_back(num_links.at({cid, d}));
    th_lo[d] = high_threshold(population);
  }
  std::set<std::pair<std::string, std::string>> result;
  for (const auto& [cid, _] : view.components)
    for (const auto& d : directions)
      if (num_links.at({cid, d}) > th_lo.at(d)) result.insert({cid, d});
  return result;
}

// detectUI / UC, line by line
inline std::set<std::pair<std::string, std::string>> oracle_ui(
    const ArchitectureView& view) {
  std::set<std::pair<std::string, std::string>> result;
  for (const auto& [cid, comp] : view.components) {
    for (const auto& eid : comp.entity_ids) {
      if (view.entities.at(eid).interfaces == 0) continue;
      int incident = 0;
      for (const auto& link : view.links)
        if (link.src == eid || link.dst == eid) ++incident;
      if (incident == 0) result.insert({cid, eid});
    }
  }
  return result;
}

inline std::set<std::string> oracle_uc(const ArchitectureView& view) {
  const auto ui = oracle_ui(view);
  std::set<std::string> result;
  for (const auto& [cid, comp] : view.components) {
    bool has_interfaces = false;
    bool is_uc = true;
    for (const auto& eid : comp.entity_ids) {
      if (view.entities.at(eid).interfaces == 0) continue;
      has_interfaces = true;
      if (!ui.count({cid, eid})) is_uc = false;
    }
    if (has_interfaces && is_uc) result.insert(cid);
  }
  return result;
}

// detectSD, line by line
inline std::set<std::vector<std::string>> oracle_sd(
    const ArchitectureView& view, int th_sd) {
  const auto parents = oracle_parents(view);
  std::set<std::vector<std::string>> result;
  for (const auto& link : view.links) {
    const auto& c1 = parents.at(link.src);
    const auto& c2 = parents.at(link.dst);
    if (c1 == c2) continue;
    int out_links = 0;
    int in_links = 0;
    for (const auto& other : view.links) {
      if (other.src == link.dst) ++out_links;
      if (other.dst == link.dst) ++in_links;
    }
    if (out_links == 0 && in_links < th_sd)
      result.insert({c1, link.src, c2, link.dst});
  }
  return result;
}

// detectFO_LS, line by line
inline std::pair<std::set<std::string>, std::set<std::string>> oracle_fo_ls(
    const ArchitectureView& view) {
  std::map<std::string, int> totals;
  for (const auto& [cid, comp] : view.components) {
    int n = 0;
    for (const auto& eid : comp.entity_ids)
      n += view.entities.at(eid).interfaces;
    totals[cid] = n;
  }
  std::vector<double> population;
  for (const auto& [_, n] : totals) population.push_back(n);
  const double th_fo = high_threshold(population);
  const double th_ls = low_threshold(population);
  std::set<std::string> fo, ls;
  for (const auto& [cid, n] : totals) {
    if (n > th_fo)
      fo.insert(cid);
    else if (n < th_ls)
      ls.insert(cid);
  }
  return {fo, ls};
}

// detectCC (duplicates and co-changes), line by line
inline std::pair<std::set<std::string>, std::set<std::string>> oracle_df_cc(
    const ArchitectureView& view) {
  const auto parents = oracle_parents(view);
  std::map<std::string, int> num_du, num_co;
  for (const auto& [cid, _] : view.components) {
    num_du[cid] = 0;
    num_co[cid] = 0;
  }
  for (const auto& [cid, comp] : view.components) {
    for (const auto& eid : comp.entity_ids) {
      for (const auto& cp : view.couplings) {
        if (cp.a != eid && cp.b != eid) continue;
        if (cp.kind == CouplingKind::Duplicate)
          num_du[cid] += cp.strength;
        else
          num_co[cid] += cp.strength;
      }
    }
  }
  std::vector<double> du_pop, co_pop;
  for (const auto& [_, n] : num_du) du_pop.push_back(n);
  for (const auto& [_, n] : num_co) co_pop.push_back(n);
  const double th_df = high_threshold(du_pop);
  const double th_cc = high_threshold(co_pop);
  std::set<std::string> df, cc;
  for (const auto& [cid, n] : num_du)
    if (n > th_df) df.insert(cid);
  for (const auto& [cid, n] : num_co)
    if (n > th_cc) cc.insert(cid);
  return {df, cc};
}

}  // namespace testsupport
