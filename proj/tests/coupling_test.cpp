#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "archsmell/coupling.hpp"
#include "archsmell/rng.hpp"

using namespace archsmell;

namespace {

Commit commit(const std::string& hash, std::vector<std::string> files) {
  return {hash, "2021-01-01T00:00:00+00:00", std::move(files)};
}

}  // namespace

TEST_CASE("two joint commits produce one coupling at min support 2") {
  const std::map<std::string, std::string> files = {{"A", "a.java"},
                                                    {"B", "b.java"}};
  const std::vector<Commit> commits = {commit("c1", {"a.java", "b.java"}),
                                       commit("c2", {"a.java", "b.java"})};
  const auto couplings = cochange_couplings(commits, files, {.min_support = 2});
  REQUIRE(couplings.size() == 1);
  CHECK(couplings[0].a == "A");
  CHECK(couplings[0].b == "B");
  CHECK(couplings[0].kind == CouplingKind::Cochange);
  CHECK(couplings[0].strength == 2);
}

TEST_CASE("bulk commits above the file cap contribute nothing") {
  std::map<std::string, std::string> files;
  std::vector<std::string> touched;
  for (int i = 0; i < 150; ++i) {
    const std::string entity = "E" + std::to_string(i);
    const std::string file = "f" + std::to_string(i) + ".java";
    files[entity] = file;
    touched.push_back(file);
  }
  const std::vector<Commit> commits = {commit("bulk", touched),
                                       commit("bulk2", touched)};
  CHECK(cochange_couplings(commits, files,
                           {.min_support = 1, .max_commit_files = 100})
            .empty());
  CHECK_FALSE(cochange_couplings(commits, files,
                                 {.min_support = 1, .max_commit_files = 200})
                  .empty());
}

TEST_CASE("unmapped files are ignored per commit") {
  const std::map<std::string, std::string> files = {{"A", "a.java"},
                                                    {"B", "b.java"}};
  const std::vector<Commit> commits = {
      commit("c1", {"a.java", "b.java", "docs/readme.md"}),
      commit("c2", {"a.java", "b.java", "build.xml"})};
  const auto couplings = cochange_couplings(commits, files, {.min_support = 2});
  REQUIRE(couplings.size() == 1);
  CHECK(couplings[0].strength == 2);
}

TEST_CASE("pair supports match the brute-force counting oracle") {
  Rng rng = make_rng(55);
  std::map<std::string, std::string> files;
  std::vector<std::string> entity_ids;
  for (int i = 0; i < 25; ++i) {
    const std::string entity = "E" + std::to_string(i);
    files[entity] = "f" + std::to_string(i) + ".java";
    entity_ids.push_back(entity);
  }
  std::vector<Commit> commits;
  for (int c = 0; c < 50; ++c) {
    std::set<std::string> touched;
    const std::size_t n = 1 + uniform_index(rng, 6);
    for (std::size_t f = 0; f < n; ++f)
      touched.insert(files.at(entity_ids[uniform_index(rng, entity_ids.size())]));
    commits.push_back(commit("c" + std::to_string(c),
                             {touched.begin(), touched.end()}));
  }

  // O(commits * files^2) oracle
  std::map<std::pair<std::string, std::string>, int> oracle;
  for (const auto& cm : commits) {
    std::set<std::string> touched_entities;
    for (const auto& f : cm.changed_files)
      for (const auto& [entity, file] : files)
        if (file == f) touched_entities.insert(entity);
    for (const auto& a : touched_entities)
      for (const auto& b : touched_entities)
        if (a < b) ++oracle[{a, b}];
  }

  for (int min_support : {1, 2, 3}) {
    const auto couplings =
        cochange_couplings(commits, files, {.min_support = min_support});
    std::map<std::pair<std::string, std::string>, int> got;
    for (const auto& cp : couplings) {
      CHECK(cp.strength >= min_support);
      got[{cp.a, cp.b}] = cp.strength;
    }
    std::map<std::pair<std::string, std::string>, int> expected;
    for (const auto& [pair, n] : oracle)
      if (n >= min_support) expected[pair] = n;
    CHECK(got == expected);
  }
}

TEST_CASE("lowering min support never removes a coupling") {
  Rng rng = make_rng(56);
  std::map<std::string, std::string> files;
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) {
    files["E" + std::to_string(i)] = "f" + std::to_string(i);
    ids.push_back("f" + std::to_string(i));
  }
  std::vector<Commit> commits;
  for (int c = 0; c < 40; ++c) {
    std::set<std::string> touched;
    for (int f = 0; f < 3; ++f)
      touched.insert(ids[uniform_index(rng, ids.size())]);
    commits.push_back(
        commit("c" + std::to_string(c), {touched.begin(), touched.end()}));
  }
  const auto strict = cochange_couplings(commits, files, {.min_support = 3});
  const auto loose = cochange_couplings(commits, files, {.min_support = 1});
  std::set<std::pair<std::string, std::string>> loose_pairs;
  for (const auto& cp : loose) loose_pairs.insert({cp.a, cp.b});
  for (const auto& cp : strict) CHECK(loose_pairs.count({cp.a, cp.b}) == 1);
  CHECK(loose.size() >= strict.size());
}

TEST_CASE("several entities sharing one file co-change through it") {
  const std::map<std::string, std::string> files = {
      {"Outer", "x/Y.java"}, {"Outer$Inner", "x/Y.java"}, {"B", "b.java"}};
  const std::vector<Commit> commits = {commit("c1", {"x/Y.java", "b.java"}),
                                       commit("c2", {"x/Y.java", "b.java"})};
  const auto couplings = cochange_couplings(commits, files, {.min_support = 2});
  // pairs: (Outer, Outer$Inner), (Outer, B), (Outer$Inner, B)
  CHECK(couplings.size() == 3);
}
