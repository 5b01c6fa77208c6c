#pragma once

// Seeded synthetic-corpus generator. Builds small systems whose planted
// architectural smells drive per-file issue and change counts, so the full
// pipeline has a learnable signal to recover. Emits exactly the fact files
// the CLI ingests (deps/interfaces RSF, topics TSV, duplicate facts, git
// log, issues JSON) and re-derives the ground truth by running the same
// parsers and detectors the pipeline uses.

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "archsmell/coupling.hpp"
#include "archsmell/dataset.hpp"
#include "archsmell/ingest.hpp"
#include "archsmell/json_io.hpp"
#include "archsmell/recover.hpp"
#include "archsmell/rng.hpp"
#include "archsmell/smells.hpp"

namespace archsmell {

struct SynthConfig {
  int systems = 5;
  int versions = 5;
  int plain_components = 72;  // smell-free bulk; keeps band ratios near 80/16/4
  std::uint64_t seed = 17;
};

struct SynthVersionFacts {
  std::string deps_rsf;
  std::string interfaces_rsf;
  std::string topics_tsv;
  std::string duplicates_facts;
};

struct SynthSystem {
  std::string name;
  std::vector<std::string> versions;
  std::map<std::string, SynthVersionFacts> facts;  // by version
  std::string gitlog;
  std::string issues_json;
  std::map<std::string, int> file_counts;  // version -> files (row oracle)
};

namespace synth_detail {

struct ComponentPlan {
  std::string id;       // short name, e.g. "p03" or "big"
  int entities = 3;
  int interfaces = -1;  // -1: random 3..7 per entity
};

inline std::string entity_id(const std::string& system,
                             const std::string& comp, int index) {
  return system + "." + comp + ".E" + std::to_string(index);
}

inline std::string fake_hash(std::uint64_t n) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx%08llx",
                static_cast<unsigned long long>(split_seed(n, 0)),
                static_cast<unsigned long long>(split_seed(n, 1)),
                static_cast<unsigned long long>(n & 0xffffffffULL));
  return buf;
}

inline std::string commit_date(std::uint64_t n) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "2021-%02d-%02dT%02d:00:00+00:00",
                static_cast<int>(n / 28 % 12) + 1,
                static_cast<int>(n % 28) + 1, static_cast<int>(n % 24));
  return buf;
}

}  // namespace synth_detail

/// Generates one system's facts for every version plus its issue history.
inline SynthSystem generate_system(const std::string& name, int system_index,
                                   const SynthConfig& config) {
  using namespace synth_detail;
  SynthSystem out;
  out.name = name;

  const int plains = config.plain_components;
  if (plains < 48)
    throw ValidationError(
        "synthetic corpus needs at least 48 plain components to keep the "
        "band ratios near 80/16/4");

  // component inventory: 72 plains + the planted-smell archetypes
  std::vector<ComponentPlan> inventory;
  auto plain_name = [](int i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "p%02d", i % 100);
    return std::string(buf);
  };
  for (int i = 0; i < plains; ++i) inventory.push_back({plain_name(i), 3, -1});
  inventory.push_back({"big", 3, 50});    // FO + CO
  inventory.push_back({"tiny", 2, 1});    // LS
  inventory.push_back({"cyc1", 3, -1});   // DC + LO (+ SD caller)
  inventory.push_back({"cyc2", 3, -1});   // DC
  inventory.push_back({"cyc3", 3, -1});   // DC
  inventory.push_back({"dead", 3, -1});   // UI + UC
  inventory.push_back({"leaf", 3, -1});   // SD delegate in E0
  for (int i = 1; i <= 4; ++i)
    inventory.push_back({"spf" + std::to_string(i), 3, -1});  // SPF
  inventory.push_back({"co1", 3, -1});    // CO
  inventory.push_back({"dup1", 3, -1});   // DF
  inventory.push_back({"dup2", 3, -1});
  inventory.push_back({"chg1", 3, -1});   // CC
  inventory.push_back({"chg2", 3, -1});

  std::map<std::string, TopicId> own_topic;
  for (std::size_t i = 0; i < inventory.size(); ++i)
    own_topic[inventory[i].id] = static_cast<TopicId>(i);
  const TopicId scattered_topic = static_cast<TopicId>(inventory.size());

  // wiring is shared by all versions; interface counts and issue counts
  // are re-rolled per version
  std::vector<std::pair<std::string, std::string>> wiring;  // short comp.E refs
  auto link = [&](const std::string& a, int ai, const std::string& b, int bi) {
    wiring.push_back({a + ".E" + std::to_string(ai),
                      b + ".E" + std::to_string(bi)});
  };
  for (const auto& comp : inventory) {
    if (comp.id == "dead") continue;   // stays unlinked
    if (comp.id != "leaf")             // leaf.E0 must keep zero out-links
      link(comp.id, 0, comp.id, 1);
    if (comp.entities > 2) link(comp.id, 1, comp.id, 2);
  }
  // plain DAG: i -> i+1, i+3, i+7. The first twelve plains feed cyc1
  // instead of their i+7 neighbor; cyc1 fans out to the last twelve.
  // Feeders sit strictly below the fan-out targets in the DAG order, so
  // no cycle can close through cyc1.
  for (int i = 0; i < plains; ++i) {
    if (i + 1 < plains) link(plain_name(i), 0, plain_name(i + 1), 1);
    if (i + 3 < plains) link(plain_name(i), 0, plain_name(i + 3), 1);
    if (i + 7 < plains) {
      if (i < 12)
        link(plain_name(i), 0, "cyc1", 0);  // redirected feeder
      else
        link(plain_name(i), 0, plain_name(i + 7), 1);
    }
  }
  for (int j = plains - 12; j < plains; ++j)
    link("cyc1", 0, plain_name(j), 1);
  // dependency cycle
  link("cyc1", 0, "cyc2", 0);
  link("cyc2", 0, "cyc3", 0);
  link("cyc3", 0, "cyc1", 0);
  // sloppy delegation: exactly one in-link, no out-links on leaf.E0
  link("cyc1", 1, "leaf", 0);
  // tiny points somewhere so it is used
  link("tiny", 0, plain_name(0), 2);

  // versions
  for (int v = 1; v <= config.versions; ++v)
    out.versions.push_back("v" + std::to_string(v));

  std::ostringstream gitlog;
  Json issues = Json::array();
  std::uint64_t commit_counter =
      static_cast<std::uint64_t>(system_index) * 1000000ULL;
  long issue_counter = 0;

  // co-change commits shared by the whole history: chg1.Ei <-> chg2.Ei
  std::vector<Commit> cochange_commits;
  for (int pair = 0; pair < 3; ++pair) {
    for (int rep = 0; rep < 8; ++rep) {
      Commit c;
      c.hash = fake_hash(++commit_counter);
      c.author_date = commit_date(commit_counter);
      c.changed_files = {
          entity_path_by_convention(entity_id(name, "chg1", pair), ".java"),
          entity_path_by_convention(entity_id(name, "chg2", pair), ".java")};
      cochange_commits.push_back(c);
    }
  }
  for (const auto& c : cochange_commits) {
    gitlog << "@@" << c.hash << '|' << c.author_date << '\n';
    for (const auto& f : c.changed_files) gitlog << f << '\n';
    gitlog << '\n';
  }

  for (int v = 0; v < config.versions; ++v) {
    const std::string& version = out.versions[v];
    Rng rng = make_rng(config.seed,
                       static_cast<std::uint64_t>(system_index) * 97 + v);

    // ---- facts -------------------------------------------------------
    std::ostringstream deps, interfaces, topics, duplicates;
    for (const auto& [src, dst] : wiring)
      deps << "depends " << name << '.' << src << ' ' << name << '.' << dst
           << '\n';
    for (const auto& comp : inventory) {
      // per-entity spread with a constant per-component total, so the
      // FO/LS fences stay put across seeds
      static constexpr int kSpreads[4][3] = {
          {5, 5, 5}, {4, 5, 6}, {3, 5, 7}, {4, 4, 7}};
      const int* spread = kSpreads[uniform_index(rng, 4)];
      for (int e = 0; e < comp.entities; ++e) {
        const int n = comp.interfaces >= 0 ? comp.interfaces : spread[e];
        interfaces << "interface " << entity_id(name, comp.id, e) << ' ' << n
                   << '\n';
      }
    }
    for (int pair = 0; pair < 3; ++pair)
      duplicates << "dup " << entity_id(name, "dup1", pair) << ' '
                 << entity_id(name, "dup2", pair) << " 15\n";

    const std::size_t topic_count = inventory.size() + 1;
    for (const auto& comp : inventory) {
      std::map<TopicId, double> strong;
      const TopicId own = own_topic.at(comp.id);
      if (comp.id.rfind("spf", 0) == 0) {
        strong = {{own, 0.55}, {scattered_topic, 0.35}};
      } else if (comp.id == "co1") {
        strong = {{own, 0.18},
                  {own_topic.at("dup1"), 0.18},
                  {own_topic.at("dup2"), 0.18},
                  {own_topic.at("chg1"), 0.18},
                  {own_topic.at("chg2"), 0.18}};
      } else if (comp.id == "big") {
        strong = {{own, 0.18},
                  {own_topic.at("cyc1"), 0.18},
                  {own_topic.at("cyc2"), 0.18},
                  {own_topic.at("cyc3"), 0.18},
                  {own_topic.at("dead"), 0.18}};
      } else if (comp.id[0] == 'p' && (own_topic.at(comp.id) % 2 == 0)) {
        // half the plains carry a secondary concern
        strong = {{own, 0.6}, {own + 1, 0.3}};
      } else {
        strong = {{own, 0.9}};
      }
      double used = 0;
      for (const auto& [_, p] : strong) used += p;
      const double epsilon =
          (1.0 - used) / static_cast<double>(topic_count - strong.size());
      topics << name << '.' << comp.id;
      char buf[64];
      for (std::size_t t = 0; t < topic_count; ++t) {
        const auto it = strong.find(static_cast<TopicId>(t));
        const double p = it != strong.end() ? it->second : epsilon;
        std::snprintf(buf, sizeof(buf), "%zu:%.17g", t, p);
        topics << '\t' << buf;
      }
      topics << '\n';
    }

    SynthVersionFacts facts;
    facts.deps_rsf = deps.str();
    facts.interfaces_rsf = interfaces.str();
    facts.topics_tsv = topics.str();
    facts.duplicates_facts = duplicates.str();
    out.facts[version] = facts;

    // ---- ground truth through the pipeline's own machinery ------------
    EntityFacts entity_facts;
    entity_facts.deps = parse_deps_rsf(facts.deps_rsf);
    entity_facts.interfaces = parse_interfaces_rsf(facts.interfaces_rsf);
    ArchitectureView view = recover_pkg(name, version, entity_facts);
    view = attach_concerns(view, parse_topics_tsv(facts.topics_tsv));
    std::map<std::string, std::string> file_map;
    for (const auto& [eid, e] : view.entities) file_map[eid] = *e.file;
    std::vector<Coupling> couplings = parse_duplicates(facts.duplicates_facts);
    for (auto& cp : cochange_couplings(cochange_commits, file_map))
      couplings.push_back(cp);
    view = attach_couplings(view, couplings).view;
    const SmellReport report = detect_all(view);

    std::map<std::string, std::set<SmellType>> kinds_per_file;
    for (const auto& [_, file] : file_map) kinds_per_file[file];
    for (const auto& inst : report.instances)
      for (const auto& file : smell_files(inst, view, file_map))
        kinds_per_file[file].insert(inst.type);

    out.file_counts[version] = static_cast<int>(kinds_per_file.size());

    // band fractions must support the double-Pareto cut
    const double n_files = static_cast<double>(kinds_per_file.size());
    int low_files = 0, med_files = 0;
    for (const auto& [_, kinds] : kinds_per_file) {
      if (kinds.empty())
        ++low_files;
      else if (kinds.size() == 1)
        ++med_files;
    }
    if (low_files < 0.803 * n_files)
      throw ValidationError("synthetic corpus: smell-free band too small (" +
                            std::to_string(low_files) + "/" +
                            std::to_string(kinds_per_file.size()) + ")");
    if (low_files + med_files < 0.963 * n_files)
      throw ValidationError(
          "synthetic corpus: heavy-smell band too large for the 96% cut");
    if (static_cast<int>(kinds_per_file.size()) - low_files - med_files < 2)
      throw ValidationError("synthetic corpus: heavy-smell band too small");

    // ---- issue counts by band -----------------------------------------
    for (const auto& [file, kinds] : kinds_per_file) {
      int count = 0;
      if (kinds.empty()) {
        const std::size_t roll = uniform_index(rng, 10);
        count = roll < 4 ? 0 : (roll < 7 ? 1 : 2);
      } else if (kinds.size() == 1) {
        count = 5 + static_cast<int>(uniform_index(rng, 3));  // 5..7
      } else {
        count = 15 + static_cast<int>(uniform_index(rng, 11));  // 15..25
      }
      for (int k = 0; k < count; ++k) {
        const std::string hash = fake_hash(++commit_counter);
        gitlog << "@@" << hash << '|' << commit_date(commit_counter) << '\n'
               << file << "\n\n";
        Json issue;
        issue["id"] = name + "-" + std::to_string(++issue_counter);
        const char* types[] = {"Bug", "Improvement", "Task"};
        issue["type"] = types[uniform_index(rng, 3)];
        issue["status"] = uniform_index(rng, 2) == 0 ? "Resolved" : "Closed";
        issue["resolution"] = "Fixed";
        issue["affectedVersions"] = Json::array({version});
        issue["fixingCommits"] = Json::array({hash});
        issues.push_back(std::move(issue));
      }
      // a sprinkling of non-fixed issues the pipeline must ignore
      if (uniform_index(rng, 50) == 0) {
        const std::string hash = fake_hash(++commit_counter);
        gitlog << "@@" << hash << '|' << commit_date(commit_counter) << '\n'
               << file << "\n\n";
        Json issue;
        issue["id"] = name + "-" + std::to_string(++issue_counter);
        issue["type"] = "Bug";
        issue["status"] = "Resolved";
        issue["resolution"] = "Won't Fix";
        issue["affectedVersions"] = Json::array({version});
        issue["fixingCommits"] = Json::array({hash});
        issues.push_back(std::move(issue));
      }
    }
  }

  out.gitlog = gitlog.str();
  out.issues_json = issues.dump(2) + "\n";
  return out;
}

inline std::vector<SynthSystem> generate_corpus(const SynthConfig& config) {
  if (config.systems < 1 || config.systems > 26)
    throw ValidationError("synthetic corpus supports 1..26 systems");
  if (config.versions < 1)
    throw ValidationError("synthetic corpus needs at least one version");
  std::vector<SynthSystem> corpus;
  for (int s = 0; s < config.systems; ++s) {
    const std::string name = "sys" + std::string(1, static_cast<char>('A' + s));
    corpus.push_back(generate_system(name, s, config));
  }
  return corpus;
}

inline Json corpus_manifest(const std::vector<SynthSystem>& corpus,
                            const SynthConfig& config) {
  Json manifest;
  manifest["seed"] = config.seed;
  manifest["systems"] = Json::array();
  for (const auto& system : corpus) {
    Json entry;
    entry["name"] = system.name;
    entry["versions"] = system.versions;
    Json counts;
    for (const auto& [version, files] : system.file_counts)
      counts[version] = files;
    entry["fileCounts"] = std::move(counts);
    manifest["systems"].push_back(std::move(entry));
  }
  return manifest;
}

}  // namespace archsmell
