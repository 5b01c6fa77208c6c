#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "archsmell/json_io.hpp"
#include "archsmell/workspace.hpp"

namespace fs = std::filesystem;
using namespace archsmell;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

const std::string& cli_binary() {
  static const std::string path = [] {
    const char* env = std::getenv("ARCHSMELL_BIN");
    REQUIRE(env != nullptr);
    return std::string(env);
  }();
  return path;
}

CliResult run_cli(const std::string& args, const fs::path& workdir) {
  const fs::path out_file = workdir / "cli_output.tmp";
  const std::string command = "cd '" + workdir.string() + "' && '" +
                              cli_binary() + "' " + args + " > '" +
                              out_file.string() + "' 2>&1";
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WEXITSTATUS(status);
  if (fs::exists(out_file)) {
    result.output = read_file(out_file);
    fs::remove(out_file);
  }
  return result;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("archsmell_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

/// Collects every regular file below root as path -> content.
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file())
      files[fs::relative(entry.path(), root).string()] =
          read_file(entry.path());
  return files;
}

}  // namespace

TEST_CASE("detect on a view without topics skips concern detectors, exit 0") {
  const auto dir = fresh_dir("skip");
  write_text(dir / "deps.rsf", "depends a.X b.Y\ndepends b.Y a.Z\n");
  auto r = run_cli(
      "recover pkg --system demo --version 1.0 --deps deps.rsf", dir);
  REQUIRE(r.exit_code == 0);
  r = run_cli("detect --system demo --version 1.0", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("skipped: SPF CO") != std::string::npos);
  const auto report =
      parse_report(read_file(dir / "workspace/demo/1.0/PKG/report.json"));
  CHECK(report.skipped == std::vector<std::string>{"SPF", "CO"});
}

TEST_CASE("usage errors exit 1, data errors exit 2, errors name the input") {
  const auto dir = fresh_dir("errors");
  auto r = run_cli("recover pkg --system demo", dir);  // missing required
  CHECK(r.exit_code == 1);

  r = run_cli("nonsense-subcommand", dir);
  CHECK(r.exit_code == 1);

  write_text(dir / "bad.rsf", "depends a.X b.Y\nbroken line here extra\n");
  r = run_cli("recover pkg --system demo --version 1.0 --deps bad.rsf", dir);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("line 2") != std::string::npos);

  r = run_cli("detect --system ghost --version 0", dir);
  CHECK(r.exit_code == 2);
}

TEST_CASE("the config file supplies flags and flags override it") {
  const auto dir = fresh_dir("config");
  write_text(dir / "deps.rsf", "depends a.X b.Y\n");
  write_text(dir / "tool.conf", "workspace=ws_from_config\n");
  auto r = run_cli(
      "recover pkg --system demo --version 1.0 --deps deps.rsf "
      "--config tool.conf",
      dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "ws_from_config/demo/1.0/PKG/view.json"));

  r = run_cli(
      "recover pkg --system demo --version 1.0 --deps deps.rsf "
      "--config tool.conf --workspace ws_from_flag",
      dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "ws_from_flag/demo/1.0/PKG/view.json"));
}

TEST_CASE("apply-map recovers the mapped view and errors on gaps") {
  const auto dir = fresh_dir("applymap");
  write_text(dir / "deps.rsf", "depends e1 e2\n");
  write_text(dir / "map.rsf", "contain C1 e1\ncontain C2 e2\n");
  auto r = run_cli(
      "recover apply-map --system demo --version 1.0 --view-kind ACDC "
      "--deps deps.rsf --map map.rsf",
      dir);
  REQUIRE(r.exit_code == 0);
  const auto view =
      parse_view(read_file(dir / "workspace/demo/1.0/ACDC/view.json"));
  CHECK(view.kind == ViewKind::Acdc);
  CHECK(view.components.count("C1") == 1);

  write_text(dir / "gap.rsf", "contain C1 e1\n");
  r = run_cli(
      "recover apply-map --system demo --version 2.0 --view-kind ACDC "
      "--deps deps.rsf --map gap.rsf",
      dir);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("e2") != std::string::npos);
}

TEST_CASE("the full pipeline row count equals the manifest oracle") {
  const auto dir = fresh_dir("pipeline");
  auto r = run_cli("synth --systems 1 --versions 2 --seed 29", dir);
  REQUIRE(r.exit_code == 0);

  const Json manifest =
      Json::parse(read_file(dir / "workspace/corpus/manifest.json"));
  long expected_rows = 0;
  for (const auto& [_, files] : manifest["systems"][0]["fileCounts"].items())
    expected_rows += files.get<long>();

  for (const std::string version : {"v1", "v2"}) {
    r = run_cli("recover pkg --system sysA --version " + version +
                    " --deps workspace/corpus/sysA/deps-" + version +
                    ".rsf --interfaces workspace/corpus/sysA/interfaces-" +
                    version + ".rsf",
                dir);
    REQUIRE(r.exit_code == 0);
  }
  r = run_cli(
      "couplings from-gitlog --system sysA --version v1 "
      "--gitlog workspace/corpus/sysA/gitlog.txt",
      dir);
  REQUIRE(r.exit_code == 0);
  for (const std::string version : {"v1", "v2"}) {
    r = run_cli("detect --system sysA --version " + version +
                    " --topics workspace/corpus/sysA/topics-" + version +
                    ".tsv --duplicates workspace/corpus/sysA/duplicates-" +
                    version + ".facts --couplings workspace/sysA/cochange.facts",
                dir);
    REQUIRE(r.exit_code == 0);
  }
  r = run_cli(
      "dataset build --system sysA --issues workspace/corpus/sysA/issues.json "
      "--gitlog workspace/corpus/sysA/gitlog.txt",
      dir);
  REQUIRE(r.exit_code == 0);

  const auto rows =
      dataset_from_csv(read_file(dir / "workspace/sysA/dataset-PKG.csv"));
  CHECK(static_cast<long>(rows.size()) == expected_rows);

  r = run_cli("label --dataset workspace/sysA/dataset-PKG.csv", dir);
  REQUIRE(r.exit_code == 0);
  r = run_cli(
      "balance --dataset workspace/sysA/dataset-PKG.labeled.csv "
      "--target issue --seed 29",
      dir);
  REQUIRE(r.exit_code == 0);
  r = run_cli(
      "eval cv --dataset workspace/sysA/dataset-PKG.labeled.balanced-issue.csv "
      "--target issue --system sysA --seed 29",
      dir);
  REQUIRE(r.exit_code == 0);
  const auto tagged = parse_eval_result(read_file(
      dir /
      "workspace/sysA/dataset-PKG.labeled.balanced-issue.cv-issue-table.json"));
  CHECK(tagged.result.macro_precision > 0.5);
  CHECK(tagged.seed == 29);

  // report eval renders a table over the emitted result
  r = run_cli(
      "report eval --results "
      "workspace/sysA/dataset-PKG.labeled.balanced-issue.cv-issue-table.json",
      dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("Average") != std::string::npos);

  // strict balancing mode runs SMOTE inside the folds on the labeled set
  r = run_cli(
      "eval cv --dataset workspace/sysA/dataset-PKG.labeled.csv "
      "--target issue --strict-balancing --system sysA --seed 29",
      dir);
  REQUIRE(r.exit_code == 0);

  r = run_cli("report long-lived --system sysA --top 3", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("2 versions") != std::string::npos);
}

TEST_CASE("reruns with identical inputs and seed are byte-identical") {
  const auto a = fresh_dir("determinism_a");
  const auto b = fresh_dir("determinism_b");
  for (const auto& dir : {a, b}) {
    auto r = run_cli("synth --systems 1 --versions 1 --seed 99", dir);
    REQUIRE(r.exit_code == 0);
    r = run_cli(
        "recover pkg --system sysA --version v1 "
        "--deps workspace/corpus/sysA/deps-v1.rsf "
        "--interfaces workspace/corpus/sysA/interfaces-v1.rsf",
        dir);
    REQUIRE(r.exit_code == 0);
    r = run_cli(
        "detect --system sysA --version v1 "
        "--topics workspace/corpus/sysA/topics-v1.tsv "
        "--duplicates workspace/corpus/sysA/duplicates-v1.facts",
        dir);
    REQUIRE(r.exit_code == 0);
    r = run_cli(
        "dataset build --system sysA "
        "--issues workspace/corpus/sysA/issues.json "
        "--gitlog workspace/corpus/sysA/gitlog.txt",
        dir);
    REQUIRE(r.exit_code == 0);
    r = run_cli("label --dataset workspace/sysA/dataset-PKG.csv", dir);
    REQUIRE(r.exit_code == 0);
    r = run_cli(
        "balance --dataset workspace/sysA/dataset-PKG.labeled.csv "
        "--target issue --seed 99",
        dir);
    REQUIRE(r.exit_code == 0);
  }
  const auto snap_a = snapshot(a / "workspace");
  const auto snap_b = snapshot(b / "workspace");
  REQUIRE(snap_a.size() == snap_b.size());
  for (const auto& [path, content] : snap_a) {
    INFO(path);
    REQUIRE(snap_b.count(path) == 1);
    CHECK(content == snap_b.at(path));
  }
}

TEST_CASE("the seed environment variable is honored when no flag is given") {
  const auto dir = fresh_dir("seedenv");
  write_text(dir / "deps.rsf", "depends a.X b.Y\n");
  auto r = run_cli("recover pkg --system d --version 1 --deps deps.rsf", dir);
  REQUIRE(r.exit_code == 0);
  const fs::path out = dir / "ws2";
  const std::string command =
      "cd '" + dir.string() + "' && ARCHSMELL_SEED=123 '" + cli_binary() +
      "' synth --systems 1 --versions 1 --plains 72 > env_out.txt 2>&1";
  REQUIRE(WEXITSTATUS(std::system(command.c_str())) == 0);
  const Json manifest =
      Json::parse(read_file(dir / "workspace/corpus/manifest.json"));
  CHECK(manifest["seed"] == 123);
}
