#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "archsmell/model.hpp"

namespace archsmell {

struct Commit {
  std::string hash;
  std::string author_date;  // ISO-8601, kept verbatim
  std::vector<std::string> changed_files;
};

struct Issue {
  std::string id;
  std::string type;
  std::string status;
  std::string resolution;
  std::vector<std::string> affected_versions;
  std::vector<std::string> fixing_commits;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(std::move(tok));
  return tokens;
}

inline bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

inline bool is_comment(const std::string& line) {
  auto pos = line.find_first_not_of(" \t");
  return pos != std::string::npos && line[pos] == '#';
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

/// Visits each meaningful line of a fact file with its 1-based number.
template <typename Fn>
void for_each_fact_line(const std::string& text, Fn&& fn) {
  std::istringstream in(text);
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line) || is_comment(line)) continue;
    fn(line, number);
  }
}

}  // namespace detail

/// `depends <src> <dst>` fact lines. Duplicates are dropped, first
/// occurrence order is kept.
inline std::vector<std::pair<std::string, std::string>> parse_deps_rsf(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::set<std::pair<std::string, std::string>> seen;
  detail::for_each_fact_line(text, [&](const std::string& line, long number) {
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 3 || tokens[0] != "depends")
      throw ParseError("expected 'depends <src> <dst>', got: " + line, number);
    std::pair<std::string, std::string> edge{tokens[1], tokens[2]};
    if (seen.insert(edge).second) edges.push_back(std::move(edge));
  });
  return edges;
}

/// `interface <entity> <count>` fact lines; entities not listed default to
/// zero interfaces.
inline std::map<std::string, int> parse_interfaces_rsf(const std::string& text) {
  std::map<std::string, int> counts;
  detail::for_each_fact_line(text, [&](const std::string& line, long number) {
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 3 || tokens[0] != "interface")
      throw ParseError("expected 'interface <entity> <count>', got: " + line,
                       number);
    int n = 0;
    try {
      n = std::stoi(tokens[2]);
    } catch (const std::exception&) {
      throw ParseError("interface count is not an integer: " + tokens[2],
                       number);
    }
    if (n < 0)
      throw ParseError("interface count must be >= 0: " + tokens[2], number);
    counts[tokens[1]] = n;
  });
  return counts;
}

/// `contain <component> <entity>` fact lines (ACDC/ARC cluster maps).
inline std::map<std::string, std::set<std::string>> parse_cluster_map(
    const std::string& text) {
  std::map<std::string, std::set<std::string>> clusters;
  std::map<std::string, std::string> owner;
  detail::for_each_fact_line(text, [&](const std::string& line, long number) {
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 3 || tokens[0] != "contain")
      throw ParseError("expected 'contain <component> <entity>', got: " + line,
                       number);
    const std::string& comp = tokens[1];
    const std::string& entity = tokens[2];
    auto [it, inserted] = owner.emplace(entity, comp);
    if (!inserted && it->second != comp)
      throw ParseError("entity " + entity + " assigned to both " + it->second +
                           " and " + comp,
                       number);
    clusters[comp].insert(entity);
  });
  return clusters;
}

inline std::string serialize_cluster_map(
    const std::map<std::string, std::set<std::string>>& clusters) {
  std::ostringstream out;
  for (const auto& [comp, entities] : clusters)
    for (const auto& e : entities) out << "contain " << comp << ' ' << e << '\n';
  return out.str();
}

/// Tab-separated rows: component, then `topicId:probability` pairs.
/// Each row must sum to 1 within 1e-6 and is renormalized to exactly 1.
inline std::map<std::string, ConcernDistribution> parse_topics_tsv(
    const std::string& text) {
  std::map<std::string, ConcernDistribution> result;
  detail::for_each_fact_line(text, [&](const std::string& line, long number) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, '\t'))
      if (!cell.empty()) cells.push_back(cell);
    if (cells.size() < 2)
      throw ParseError("expected component and at least one topic:probability "
                       "pair",
                       number);
    ConcernDistribution dist;
    double sum = 0;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const auto colon = cells[i].find(':');
      if (colon == std::string::npos)
        throw ParseError("expected topic:probability, got: " + cells[i],
                         number);
      TopicId topic = 0;
      double p = 0;
      try {
        topic = std::stoi(cells[i].substr(0, colon));
        p = std::stod(cells[i].substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError("bad topic:probability pair: " + cells[i], number);
      }
      if (p < 0)
        throw ParseError("negative probability: " + cells[i], number);
      dist[topic] = p;
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw ParseError("topic distribution of " + cells[0] +
                           " sums to " + std::to_string(sum) + ", expected 1",
                       number);
    for (auto& [_, p] : dist) p /= sum;
    result[cells[0]] = std::move(dist);
  });
  return result;
}

/// Output of `git log --name-only --date=iso-strict
/// --pretty=format:"@@%H|%ad"`: each record starts with `@@hash|date`,
/// followed by one changed path per line until the next record.
inline std::vector<Commit> parse_git_log(const std::string& text) {
  std::vector<Commit> commits;
  std::set<std::string> seen_hashes;
  std::set<std::string> current_files;
  std::istringstream in(text);
  std::string line;
  long number = 0;
  auto flush = [&] {
    if (commits.empty()) return;
    commits.back().changed_files.assign(current_files.begin(),
                                        current_files.end());
    current_files.clear();
  };
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::is_blank(line)) continue;
    if (line.rfind("@@", 0) == 0) {
      flush();
      const auto bar = line.find('|');
      const std::string hash =
          line.substr(2, bar == std::string::npos ? std::string::npos : bar - 2);
      if (hash.empty())
        throw ParseError("commit record without hash", number);
      if (!seen_hashes.insert(hash).second)
        throw ParseError("duplicate commit hash: " + hash, number);
      Commit c;
      c.hash = hash;
      if (bar != std::string::npos) c.author_date = line.substr(bar + 1);
      commits.push_back(std::move(c));
    } else {
      if (commits.empty())
        throw ParseError("path outside any commit record: " + line, number);
      current_files.insert(line);
    }
  }
  flush();
  return commits;
}

inline std::string render_git_log(const std::vector<Commit>& commits) {
  std::ostringstream out;
  for (const auto& c : commits) {
    out << "@@" << c.hash << '|' << c.author_date << '\n';
    for (const auto& f : c.changed_files) out << f << '\n';
    out << '\n';
  }
  return out.str();
}

/// `dup <entityA> <entityB> <count>` fact lines.
inline std::vector<Coupling> parse_duplicates(const std::string& text) {
  std::vector<Coupling> couplings;
  detail::for_each_fact_line(text, [&](const std::string& line, long number) {
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 4 || tokens[0] != "dup")
      throw ParseError("expected 'dup <entityA> <entityB> <count>', got: " +
                           line,
                       number);
    int count = 0;
    try {
      count = std::stoi(tokens[3]);
    } catch (const std::exception&) {
      throw ParseError("duplicate count is not an integer: " + tokens[3],
                       number);
    }
    if (count < 1)
      throw ParseError("duplicate count must be >= 1: " + tokens[3], number);
    if (tokens[1] == tokens[2])
      throw ParseError("duplicate endpoints must differ: " + tokens[1], number);
    couplings.push_back(
        make_coupling(tokens[1], tokens[2], CouplingKind::Duplicate, count));
  });
  return couplings;
}

/// `cochange <entityA> <entityB> <strength>` fact lines (cached couplings).
inline std::vector<Coupling> parse_cochanges(const std::string& text) {
  std::vector<Coupling> couplings;
  detail::for_each_fact_line(text, [&](const std::string& line, long number) {
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 4 || tokens[0] != "cochange")
      throw ParseError(
          "expected 'cochange <entityA> <entityB> <strength>', got: " + line,
          number);
    int strength = 0;
    try {
      strength = std::stoi(tokens[3]);
    } catch (const std::exception&) {
      throw ParseError("cochange strength is not an integer: " + tokens[3],
                       number);
    }
    if (strength < 1)
      throw ParseError("cochange strength must be >= 1: " + tokens[3], number);
    if (tokens[1] == tokens[2])
      throw ParseError("cochange endpoints must differ: " + tokens[1], number);
    couplings.push_back(
        make_coupling(tokens[1], tokens[2], CouplingKind::Cochange, strength));
  });
  return couplings;
}

inline std::string serialize_couplings(const std::vector<Coupling>& couplings) {
  std::ostringstream out;
  for (const auto& cp : couplings)
    out << (cp.kind == CouplingKind::Duplicate ? "dup " : "cochange ") << cp.a
        << ' ' << cp.b << ' ' << cp.strength << '\n';
  return out.str();
}

/// Default mapping from a qualified entity id to a source path: inner-class
/// suffixes after '$' are stripped, dots become path separators, and the
/// extension is appended.
inline std::string entity_path_by_convention(const std::string& entity_id,
                                             const std::string& extension) {
  std::string base = entity_id.substr(0, entity_id.find('$'));
  std::replace(base.begin(), base.end(), '.', '/');
  return base + extension;
}

/// `file <entity> <path>` fact lines, completed with the convention rule so
/// that every entity of the view ends up mapped.
inline std::map<std::string, std::string> parse_entity_file_map(
    const std::string& text, const std::set<std::string>& entity_ids,
    const std::string& extension = ".java") {
  std::map<std::string, std::string> mapping;
  detail::for_each_fact_line(text, [&](const std::string& line, long number) {
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 3 || tokens[0] != "file")
      throw ParseError("expected 'file <entity> <path>', got: " + line, number);
    mapping[tokens[1]] = tokens[2];
  });
  for (const auto& eid : entity_ids)
    if (!mapping.count(eid))
      mapping[eid] = entity_path_by_convention(eid, extension);
  return mapping;
}

/// Keeps issues whose status is Resolved or Closed and whose resolution is
/// Fixed (case-insensitive). Won't-fix, duplicate, cannot-reproduce and
/// still-open issues are dropped.
inline std::vector<Issue> filter_fixed(const std::vector<Issue>& issues) {
  std::vector<Issue> kept;
  for (const auto& issue : issues) {
    const std::string status = detail::lower(issue.status);
    const std::string resolution = detail::lower(issue.resolution);
    if ((status == "resolved" || status == "closed") && resolution == "fixed")
      kept.push_back(issue);
  }
  return kept;
}

}  // namespace archsmell
