#pragma once

#include <array>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "archsmell/ingest.hpp"
#include "archsmell/model.hpp"
#include "archsmell/smells.hpp"

namespace archsmell {

enum class Proneness { Low, Med, High };

inline const char* to_string(Proneness p) {
  switch (p) {
    case Proneness::Low: return "low";
    case Proneness::Med: return "med";
    default: return "high";
  }
}

inline Proneness proneness_from_string(const std::string& s) {
  if (s == "low") return Proneness::Low;
  if (s == "med") return Proneness::Med;
  if (s == "high") return Proneness::High;
  throw ValidationError("unknown proneness label: " + s);
}

inline constexpr std::size_t kFeatureCount = 11;

/// CSV column order of the 11 binary smell features.
inline constexpr std::array<SmellType, kFeatureCount> kFeatureOrder = {
    SmellType::UI, SmellType::UC, SmellType::SD, SmellType::FO,
    SmellType::LS, SmellType::DF, SmellType::CC, SmellType::DC,
    SmellType::LO, SmellType::SPF, SmellType::CO};

inline std::size_t feature_index(SmellType t) {
  for (std::size_t i = 0; i < kFeatureOrder.size(); ++i)
    if (kFeatureOrder[i] == t) return i;
  throw ValidationError("unmapped smell type");
}

struct DatasetRow {
  std::string version;
  std::string file;
  std::array<int, kFeatureCount> features{};
  int issue_count = 0;
  int change_count = 0;
  std::optional<Proneness> issue_label;
  std::optional<Proneness> change_label;
};

/// Files involved in one smell instance. Entity-scoped smells (UI, SD) map
/// to the named entities' files only; all other smells map to every file of
/// the affected components. Entities without files contribute nothing.
inline std::set<std::string> smell_files(
    const SmellInstance& instance, const ArchitectureView& view,
    const std::map<std::string, std::string>& entity_file_map) {
  std::set<std::string> files;
  auto add = [&](const std::string& eid) {
    auto it = entity_file_map.find(eid);
    if (it != entity_file_map.end()) files.insert(it->second);
  };
  if (instance.type == SmellType::UI || instance.type == SmellType::SD) {
    for (const auto& eid : instance.entity_ids) add(eid);
  } else {
    for (const auto& cid : instance.component_ids)
      for (const auto& eid : view.component(cid).entity_ids) add(eid);
  }
  return files;
}

struct VersionArtifacts {
  ArchitectureView view;
  SmellReport report;
  std::map<std::string, std::string> entity_file_map;
};

struct BuildDatasetResult {
  std::vector<DatasetRow> rows;
  int unknown_version_refs = 0;   // issue affectedVersions outside the corpus
  int unresolved_commits = 0;     // fixingCommits absent from the git log
};

/// Assembles one unlabeled row per (version, file): the 11 smell flags, the
/// number of fixed issues whose fixing commits touched the file in that
/// version, and the number of distinct fixing commits touching it.
inline BuildDatasetResult build_dataset(
    const std::vector<VersionArtifacts>& per_version,
    const std::vector<Issue>& fixed_issues,
    const std::vector<Commit>& commits) {
  BuildDatasetResult result;

  std::map<std::string, const Commit*> commit_by_hash;
  for (const auto& c : commits) commit_by_hash[c.hash] = &c;

  std::set<std::string> known_versions;
  for (const auto& v : per_version) known_versions.insert(v.view.version);

  // version -> file -> {issue count, fixing commits touching the file}
  struct FileHistory {
    int issues = 0;
    std::set<std::string> fixing_commits;
  };
  std::map<std::string, std::map<std::string, FileHistory>> history;
  for (const auto& issue : fixed_issues) {
    std::set<const Commit*> fixings;
    for (const auto& hash : issue.fixing_commits) {
      auto it = commit_by_hash.find(hash);
      if (it == commit_by_hash.end()) {
        ++result.unresolved_commits;
        continue;
      }
      fixings.insert(it->second);
    }
    std::map<std::string, std::set<std::string>> touched;  // file -> hashes
    for (const Commit* c : fixings)
      for (const auto& file : c->changed_files) touched[file].insert(c->hash);
    for (const auto& version : issue.affected_versions) {
      if (!known_versions.count(version)) {
        ++result.unknown_version_refs;
        continue;
      }
      auto& files = history[version];
      for (const auto& [file, hashes] : touched) {
        auto& h = files[file];
        ++h.issues;
        h.fixing_commits.insert(hashes.begin(), hashes.end());
      }
    }
  }

  for (const auto& v : per_version) {
    std::map<std::string, std::array<int, kFeatureCount>> flags;
    for (const auto& [_, file] : v.entity_file_map) flags[file] = {};
    for (const auto& inst : v.report.instances) {
      const std::size_t idx = feature_index(inst.type);
      for (const auto& file : smell_files(inst, v.view, v.entity_file_map))
        flags[file][idx] = 1;
    }
    const auto hist = history.find(v.view.version);
    for (const auto& [file, features] : flags) {
      DatasetRow row;
      row.version = v.view.version;
      row.file = file;
      row.features = features;
      if (hist != history.end()) {
        auto it = hist->second.find(file);
        if (it != hist->second.end()) {
          row.issue_count = it->second.issues;
          row.change_count = static_cast<int>(it->second.fixing_commits.size());
        }
      }
      result.rows.push_back(std::move(row));
    }
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const DatasetRow& a, const DatasetRow& b) {
              return std::tie(a.version, a.file) < std::tie(b.version, b.file);
            });
  return result;
}

// ---- CSV ------------------------------------------------------------------

inline constexpr const char* kDatasetHeaderBase =
    "version,file,ui,uc,sd,fo,ls,df,cc,dc,lo,spf,co,issues,changes";

inline std::string dataset_to_csv(const std::vector<DatasetRow>& rows,
                                  bool with_labels = false) {
  std::ostringstream out;
  out << kDatasetHeaderBase;
  if (with_labels) out << ",issue_label,change_label";
  out << '\n';
  for (const auto& row : rows) {
    out << row.version << ',' << row.file;
    for (int f : row.features) out << ',' << f;
    out << ',' << row.issue_count << ',' << row.change_count;
    if (with_labels) {
      out << ',' << (row.issue_label ? to_string(*row.issue_label) : "")
          << ',' << (row.change_label ? to_string(*row.change_label) : "");
    }
    out << '\n';
  }
  return out.str();
}

inline std::vector<DatasetRow> dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("empty dataset CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const bool with_labels =
      line == std::string(kDatasetHeaderBase) + ",issue_label,change_label";
  if (!with_labels && line != kDatasetHeaderBase)
    throw ParseError("unexpected dataset CSV header: " + line, 1);

  std::vector<DatasetRow> rows;
  long number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row_in(line);
    while (std::getline(row_in, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    const std::size_t expected = with_labels ? 17 : 15;
    if (cells.size() != expected)
      throw ParseError("expected " + std::to_string(expected) +
                           " cells, got " + std::to_string(cells.size()),
                       number);
    DatasetRow row;
    row.version = cells[0];
    row.file = cells[1];
    try {
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const int f = std::stoi(cells[2 + i]);
        if (f != 0 && f != 1)
          throw ParseError("feature flags must be 0 or 1", number);
        row.features[i] = f;
      }
      row.issue_count = std::stoi(cells[13]);
      row.change_count = std::stoi(cells[14]);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("malformed numeric cell", number);
    }
    if (row.issue_count < 0 || row.change_count < 0)
      throw ParseError("counts must be >= 0", number);
    if (with_labels) {
      if (!cells[15].empty()) row.issue_label = proneness_from_string(cells[15]);
      if (!cells[16].empty())
        row.change_label = proneness_from_string(cells[16]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace archsmell
