#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "archsmell/ingest.hpp"
#include "archsmell/model.hpp"

namespace archsmell {

struct CochangeConfig {
  /// Minimum number of joint commits before a pair counts as coupled.
  int min_support = 2;
  /// Commits touching more mapped files than this are skipped; bulk
  /// refactorings inflate logical coupling.
  int max_commit_files = 100;
};

/// Derives co-change couplings from commit history. For each retained
/// commit, every unordered pair of distinct mapped entities gains one unit
/// of support; pairs reaching min_support become couplings with
/// strength = support.
inline std::vector<Coupling> cochange_couplings(
    const std::vector<Commit>& commits,
    const std::map<std::string, std::string>& entity_file_map,
    const CochangeConfig& config = {}) {
  if (config.min_support < 1)
    throw ValidationError("min_support must be >= 1");
  if (config.max_commit_files < 2)
    throw ValidationError("max_commit_files must be >= 2");

  std::map<std::string, std::set<std::string>> entities_of_file;
  for (const auto& [entity, file] : entity_file_map)
    entities_of_file[file].insert(entity);

  std::map<std::pair<std::string, std::string>, int> support;
  for (const auto& commit : commits) {
    std::set<std::string> touched;
    int mapped_files = 0;
    for (const auto& file : commit.changed_files) {
      auto it = entities_of_file.find(file);
      if (it == entities_of_file.end()) continue;
      ++mapped_files;
      touched.insert(it->second.begin(), it->second.end());
    }
    if (mapped_files > config.max_commit_files) continue;
    for (auto a = touched.begin(); a != touched.end(); ++a)
      for (auto b = std::next(a); b != touched.end(); ++b)
        ++support[{*a, *b}];
  }

  std::vector<Coupling> couplings;
  for (const auto& [pair, count] : support)
    if (count >= config.min_support)
      couplings.push_back(
          make_coupling(pair.first, pair.second, CouplingKind::Cochange, count));
  return couplings;
}

}  // namespace archsmell
