#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "archsmell/dataset.hpp"
#include "archsmell/mlkit.hpp"
#include "archsmell/model.hpp"
#include "archsmell/smells.hpp"

namespace archsmell {

struct LongLivedFile {
  std::string file;
  int versions_involved = 0;
  long total_smell_count = 0;                  // instance involvements
  std::map<std::string, int> per_version;      // version -> involvements
};

struct VersionReport {
  std::string version;
  ArchitectureView view;
  SmellReport report;
  std::map<std::string, std::string> entity_file_map;
};

/// Files involved in smell instances across versions, ranked by the number
/// of versions involved, then total involvements, then path. A file in
/// three instances of one version counts three.
inline std::vector<LongLivedFile> long_lived_smelly_files(
    const std::vector<VersionReport>& versions, std::size_t top_n) {
  if (versions.empty())
    throw ValidationError("long_lived_smelly_files: no versions");
  std::map<std::string, LongLivedFile> by_file;
  for (const auto& v : versions) {
    std::map<std::string, int> involvements;
    for (const auto& inst : v.report.instances)
      for (const auto& file : smell_files(inst, v.view, v.entity_file_map))
        ++involvements[file];
    for (const auto& [file, count] : involvements) {
      auto& entry = by_file[file];
      entry.file = file;
      entry.versions_involved += 1;
      entry.total_smell_count += count;
      entry.per_version[v.version] = count;
    }
  }
  std::vector<LongLivedFile> ranked;
  ranked.reserve(by_file.size());
  for (auto& [_, entry] : by_file) ranked.push_back(std::move(entry));
  std::sort(ranked.begin(), ranked.end(),
            [](const LongLivedFile& a, const LongLivedFile& b) {
              if (a.versions_involved != b.versions_involved)
                return a.versions_involved > b.versions_involved;
              if (a.total_smell_count != b.total_smell_count)
                return a.total_smell_count > b.total_smell_count;
              return a.file < b.file;
            });
  if (ranked.size() > top_n) ranked.resize(top_n);
  return ranked;
}

namespace detail {

inline std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
  return buf;
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace detail

struct EvalCell {
  double precision = 0;
  double recall = 0;
};

/// Aligned text table of macro precision/recall: one row per system, one
/// column pair per view, and an unweighted Average row.
inline std::string render_eval_table(
    const std::map<std::string, std::map<std::string, EvalCell>>& results) {
  std::set<std::string> views;
  for (const auto& [_, per_view] : results)
    for (const auto& [view, __] : per_view) views.insert(view);

  constexpr std::size_t kCol = 12;
  std::size_t name_width = std::string("Average").size();
  for (const auto& [system, _] : results)
    name_width = std::max(name_width, system.size());
  name_width += 2;

  std::ostringstream out;
  out << detail::pad("System", name_width);
  for (const auto& view : views) {
    out << detail::pad(view + " Prec", kCol);
    out << detail::pad(view + " Rec", kCol);
  }
  out << '\n';

  std::map<std::string, std::pair<EvalCell, int>> sums;  // view -> (sum, n)
  for (const auto& [system, per_view] : results) {
    out << detail::pad(system, name_width);
    for (const auto& view : views) {
      auto it = per_view.find(view);
      if (it == per_view.end()) {
        out << detail::pad("-", kCol) << detail::pad("-", kCol);
        continue;
      }
      out << detail::pad(detail::percent(it->second.precision), kCol);
      out << detail::pad(detail::percent(it->second.recall), kCol);
      auto& [sum, n] = sums[view];
      sum.precision += it->second.precision;
      sum.recall += it->second.recall;
      ++n;
    }
    out << '\n';
  }

  if (!results.empty()) {
    out << detail::pad("Average", name_width);
    for (const auto& view : views) {
      auto it = sums.find(view);
      if (it == sums.end() || it->second.second == 0) {
        out << detail::pad("-", kCol) << detail::pad("-", kCol);
        continue;
      }
      const auto& [sum, n] = it->second;
      out << detail::pad(detail::percent(sum.precision / n), kCol);
      out << detail::pad(detail::percent(sum.recall / n), kCol);
    }
    out << '\n';
  }
  return out.str();
}

/// Human-readable per-type summary of one smell report.
inline std::string render_smell_summary(const SmellReport& report) {
  std::ostringstream out;
  out << report.system << ' ' << report.version << " ("
      << to_string(report.view_kind) << ")\n";
  if (!report.skipped.empty()) {
    out << "skipped:";
    for (const auto& s : report.skipped) out << ' ' << s;
    out << '\n';
  }
  std::map<SmellType, int> counts;
  for (const auto& inst : report.instances) ++counts[inst.type];
  out << "instances: " << report.instances.size() << '\n';
  for (SmellType t : kAllSmellTypes) {
    auto it = counts.find(t);
    out << "  " << detail::pad(to_string(t), 4)
        << (it == counts.end() ? 0 : it->second) << '\n';
  }
  for (const auto& inst : report.instances) {
    out << to_string(inst.type) << ':';
    for (const auto& c : inst.component_ids) out << ' ' << c;
    if (!inst.entity_ids.empty()) {
      out << " [";
      bool first = true;
      for (const auto& e : inst.entity_ids) {
        if (!first) out << ' ';
        out << e;
        first = false;
      }
      out << ']';
    }
    for (const auto& [k, v] : inst.detail) out << ' ' << k << '=' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace archsmell
