// archsmell: recover architecture views, detect architectural smells, and
// build issue-/change-proneness prediction datasets and models from them.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "archsmell/coupling.hpp"
#include "archsmell/dataset.hpp"
#include "archsmell/ingest.hpp"
#include "archsmell/json_io.hpp"
#include "archsmell/mlkit.hpp"
#include "archsmell/recover.hpp"
#include "archsmell/report.hpp"
#include "archsmell/smells.hpp"
#include "archsmell/synth.hpp"
#include "archsmell/workspace.hpp"

namespace fs = std::filesystem;
using namespace archsmell;

namespace {

struct GlobalOptions {
  std::string workspace = "workspace";
  std::uint64_t seed = 17;
};

fs::path view_dir(const GlobalOptions& global, const std::string& system,
                  const std::string& version, const std::string& kind) {
  return fs::path(global.workspace) / system / version / kind;
}

ArchitectureView load_view(const fs::path& path) {
  return parse_view(read_file(path));
}

std::map<std::string, std::string> view_file_map(const ArchitectureView& view) {
  std::map<std::string, std::string> files;
  for (const auto& [eid, e] : view.entities)
    if (e.file) files[eid] = *e.file;
  return files;
}

/// Versions under <ws>/<system>/ that carry a cached view of this kind,
/// in lexicographic order.
std::vector<std::string> versions_with_view(const GlobalOptions& global,
                                            const std::string& system,
                                            const std::string& kind) {
  const fs::path root = fs::path(global.workspace) / system;
  std::vector<std::string> versions;
  if (!fs::exists(root)) return versions;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    if (fs::exists(entry.path() / kind / "view.json"))
      versions.push_back(entry.path().filename().string());
  }
  std::sort(versions.begin(), versions.end());
  return versions;
}

std::string default_ext(const std::string& ext) {
  return ext.empty() || ext[0] == '.' ? ext : "." + ext;
}

EntityFacts gather_entity_facts(const std::string& deps_path,
                                const std::string& interfaces_path,
                                const std::string& files_path,
                                const std::string& ext) {
  EntityFacts facts;
  facts.deps = parse_deps_rsf(read_file(deps_path));
  if (!interfaces_path.empty())
    facts.interfaces = parse_interfaces_rsf(read_file(interfaces_path));
  facts.file_extension = default_ext(ext);
  if (!files_path.empty()) {
    // explicit entries only; the convention fallback runs during recovery
    detail::for_each_fact_line(
        read_file(files_path), [&](const std::string& line, long number) {
          const auto tokens = detail::split_ws(line);
          if (tokens.size() != 3 || tokens[0] != "file")
            throw ParseError("expected 'file <entity> <path>', got: " + line,
                             number);
          facts.files[tokens[1]] = tokens[2];
        });
  }
  return facts;
}

void write_view_artifacts(const GlobalOptions& global,
                          const ArchitectureView& view, const RunMeta& meta) {
  const fs::path dir =
      view_dir(global, view.system, view.version, to_string(view.kind));
  const fs::path path = dir / "view.json";
  write_file_atomic(path, serialize_view(view));
  write_run_meta(path, meta);
  std::cout << "wrote " << path.string() << " (" << view.entities.size()
            << " entities, " << view.components.size() << " components)\n";
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", v * 100.0);
  return buf;
}

void print_eval(const TaggedEvalResult& tagged) {
  const EvalResult& r = tagged.result;
  std::cout << tagged.system << ' ' << tagged.view << ' ' << tagged.target
            << ' ' << tagged.classifier << ": macro precision "
            << percent(r.macro_precision) << ", macro recall "
            << percent(r.macro_recall) << '\n';
  static const char* names[3] = {"low", "med", "high"};
  for (std::size_t l = 0; l < 3; ++l)
    std::cout << "  " << names[l] << ": precision "
              << percent(r.per_label[l].precision) << ", recall "
              << percent(r.per_label[l].recall) << '\n';
  for (const auto& note : r.notes) std::cout << "  note: " << note << '\n';
}

std::vector<MLRow> load_ml_rows(const std::string& csv_path,
                                const std::string& target) {
  const auto rows = dataset_from_csv(read_file(csv_path));
  return to_ml_rows(rows, label_kind_from_string(target));
}

SmoteFactors factors_from(int med, int high) {
  return {{Proneness::Med, med}, {Proneness::High, high}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"architectural smell detection and proneness prediction"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags override");

  GlobalOptions global;
  app.add_option("--workspace", global.workspace,
                 "artifact directory (default: workspace)")
      ->envname("ARCHSMELL_WORKSPACE");
  app.add_option("--seed", global.seed, "master random seed")
      ->envname("ARCHSMELL_SEED");

  // ---- recover ------------------------------------------------------------
  auto* recover = app.add_subcommand("recover", "build architecture views");
  recover->require_subcommand(1);

  struct {
    std::string system, version, deps, interfaces, files, ext = ".java";
    int depth = 0;
  } pkg_opts;
  auto* recover_pkg_cmd =
      recover->add_subcommand("pkg", "package-structure view from deps facts");
  recover_pkg_cmd->add_option("--system", pkg_opts.system)->required();
  recover_pkg_cmd->add_option("--version", pkg_opts.version)->required();
  recover_pkg_cmd->add_option("--deps", pkg_opts.deps, "deps RSF file")
      ->required();
  recover_pkg_cmd->add_option("--interfaces", pkg_opts.interfaces,
                              "interface count facts");
  recover_pkg_cmd->add_option("--entity-files", pkg_opts.files,
                              "explicit entity-file map");
  recover_pkg_cmd->add_option("--ext", pkg_opts.ext,
                              "source extension for the convention fallback");
  recover_pkg_cmd->add_option("--depth", pkg_opts.depth,
                              "truncate packages to this many segments");
  recover_pkg_cmd->callback([&] {
    const EntityFacts facts = gather_entity_facts(
        pkg_opts.deps, pkg_opts.interfaces, pkg_opts.files, pkg_opts.ext);
    const auto view =
        recover_pkg(pkg_opts.system, pkg_opts.version, facts, pkg_opts.depth);
    RunMeta meta;
    meta.command = "recover pkg";
    meta.inputs = {{"deps", pkg_opts.deps},
                   {"interfaces", pkg_opts.interfaces},
                   {"entityFiles", pkg_opts.files}};
    meta.settings = {{"depth", std::to_string(pkg_opts.depth)},
                     {"ext", default_ext(pkg_opts.ext)}};
    meta.deviations = {"pkg-components-from-lexical-package-prefixes"};
    write_view_artifacts(global, view, meta);
  });

  struct {
    std::string system, version, kind = "ACDC", deps, map, interfaces, files,
                               ext = ".java";
  } map_opts;
  auto* apply_map_cmd = recover->add_subcommand(
      "apply-map", "view from an external ACDC/ARC cluster map");
  apply_map_cmd->add_option("--system", map_opts.system)->required();
  apply_map_cmd->add_option("--version", map_opts.version)->required();
  apply_map_cmd->add_option("--view-kind", map_opts.kind,
                            "ACDC, ARC, or custom");
  apply_map_cmd->add_option("--deps", map_opts.deps)->required();
  apply_map_cmd->add_option("--map", map_opts.map, "cluster RSF file")
      ->required();
  apply_map_cmd->add_option("--interfaces", map_opts.interfaces);
  apply_map_cmd->add_option("--entity-files", map_opts.files);
  apply_map_cmd->add_option("--ext", map_opts.ext);
  apply_map_cmd->callback([&] {
    const EntityFacts facts = gather_entity_facts(
        map_opts.deps, map_opts.interfaces, map_opts.files, map_opts.ext);
    const auto clusters = parse_cluster_map(read_file(map_opts.map));
    const auto view =
        apply_cluster_map(map_opts.system, map_opts.version,
                          view_kind_from_string(map_opts.kind), facts, clusters);
    RunMeta meta;
    meta.command = "recover apply-map";
    meta.inputs = {{"deps", map_opts.deps},
                   {"map", map_opts.map},
                   {"interfaces", map_opts.interfaces},
                   {"entityFiles", map_opts.files}};
    meta.settings = {{"viewKind", map_opts.kind},
                     {"ext", default_ext(map_opts.ext)}};
    write_view_artifacts(global, view, meta);
  });

  // ---- couplings ----------------------------------------------------------
  auto* couplings_cmd =
      app.add_subcommand("couplings", "derive evolutionary couplings");
  couplings_cmd->require_subcommand(1);
  struct {
    std::string system, version, kind = "PKG", gitlog, out;
    int min_support = 2;
    int max_commit_files = 100;
  } cochange_opts;
  auto* from_gitlog = couplings_cmd->add_subcommand(
      "from-gitlog", "co-change couplings from commit history");
  from_gitlog->add_option("--system", cochange_opts.system)->required();
  from_gitlog->add_option("--version", cochange_opts.version,
                          "version whose cached view provides the file map")
      ->required();
  from_gitlog->add_option("--view-kind", cochange_opts.kind);
  from_gitlog->add_option("--gitlog", cochange_opts.gitlog)->required();
  from_gitlog->add_option("--min-support", cochange_opts.min_support);
  from_gitlog->add_option("--max-commit-files",
                          cochange_opts.max_commit_files);
  from_gitlog->add_option("-o,--out", cochange_opts.out);
  from_gitlog->callback([&] {
    const auto view = load_view(view_dir(global, cochange_opts.system,
                                         cochange_opts.version,
                                         cochange_opts.kind) /
                                "view.json");
    const auto commits = parse_git_log(read_file(cochange_opts.gitlog));
    const auto couplings = cochange_couplings(
        commits, view_file_map(view),
        {cochange_opts.min_support, cochange_opts.max_commit_files});
    const fs::path out =
        cochange_opts.out.empty()
            ? fs::path(global.workspace) / cochange_opts.system /
                  "cochange.facts"
            : fs::path(cochange_opts.out);
    write_file_atomic(out, serialize_couplings(couplings));
    RunMeta meta;
    meta.command = "couplings from-gitlog";
    meta.inputs = {{"gitlog", cochange_opts.gitlog}};
    meta.settings = {
        {"minSupport", std::to_string(cochange_opts.min_support)},
        {"maxCommitFiles", std::to_string(cochange_opts.max_commit_files)}};
    meta.deviations = {"cochange-support-counted-per-commit"};
    write_run_meta(out, meta);
    std::cout << "wrote " << out.string() << " (" << couplings.size()
              << " couplings, " << commits.size() << " commits)\n";
  });

  // ---- detect ---------------------------------------------------------------
  struct {
    std::string system, version, kind = "PKG", view_path, topics, duplicates,
                               couplings;
    int th_sd = 2;
    int min_cycle_size = 3;
  } detect_opts;
  auto* detect_cmd =
      app.add_subcommand("detect", "run all smell detectors on a cached view");
  detect_cmd->add_option("--system", detect_opts.system);
  detect_cmd->add_option("--version", detect_opts.version);
  detect_cmd->add_option("--view-kind", detect_opts.kind);
  detect_cmd->add_option("--view", detect_opts.view_path,
                         "explicit view.json path (overrides the workspace)");
  detect_cmd->add_option("--topics", detect_opts.topics, "topics TSV");
  detect_cmd->add_option("--duplicates", detect_opts.duplicates,
                         "duplicate facts");
  detect_cmd->add_option("--couplings", detect_opts.couplings,
                         "cochange facts");
  detect_cmd->add_option("--th-sd", detect_opts.th_sd);
  detect_cmd->add_option("--min-cycle-size", detect_opts.min_cycle_size);
  detect_cmd->callback([&] {
    fs::path path;
    if (!detect_opts.view_path.empty()) {
      path = detect_opts.view_path;
    } else {
      if (detect_opts.system.empty() || detect_opts.version.empty())
        throw CLI::ValidationError(
            "detect", "pass --view or --system/--version/--view-kind");
      path = view_dir(global, detect_opts.system, detect_opts.version,
                      detect_opts.kind) /
             "view.json";
    }
    ArchitectureView view = load_view(path);
    if (!detect_opts.topics.empty())
      view = attach_concerns(view, parse_topics_tsv(read_file(detect_opts.topics)));
    std::vector<Coupling> couplings;
    int dropped = 0;
    if (!detect_opts.duplicates.empty())
      for (auto& cp : parse_duplicates(read_file(detect_opts.duplicates)))
        couplings.push_back(cp);
    if (!detect_opts.couplings.empty())
      for (auto& cp : parse_cochanges(read_file(detect_opts.couplings)))
        couplings.push_back(cp);
    if (!couplings.empty()) {
      auto attached = attach_couplings(view, couplings);
      view = std::move(attached.view);
      dropped = attached.dropped;
    }
    SmellConfig config;
    config.th_sd = detect_opts.th_sd;
    config.min_cycle_size = detect_opts.min_cycle_size;
    if (config.th_sd < 2)
      throw ValidationError("--th-sd must be >= 2");
    if (config.min_cycle_size < 2)
      throw ValidationError("--min-cycle-size must be >= 2");
    const SmellReport report = detect_all(view, config);

    const fs::path out = path.parent_path() / "report.json";
    write_file_atomic(out, serialize_report(report));
    RunMeta meta;
    meta.command = "detect";
    meta.inputs = {{"view", path.string()},
                   {"topics", detect_opts.topics},
                   {"duplicates", detect_opts.duplicates},
                   {"couplings", detect_opts.couplings}};
    meta.settings = {
        {"thSd", std::to_string(config.th_sd)},
        {"minCycleSize", std::to_string(config.min_cycle_size)},
        {"droppedCouplings", std::to_string(dropped)}};
    meta.deviations = {"quantiles-linear-interpolation-rank-(n-1)p",
                       "sd-distinctness-component-level"};
    write_run_meta(out, meta);
    std::cout << "wrote " << out.string() << " (" << report.instances.size()
              << " instances";
    if (!report.skipped.empty()) {
      std::cout << "; skipped:";
      for (const auto& s : report.skipped) std::cout << ' ' << s;
    }
    std::cout << ")\n";
  });

  // ---- dataset ---------------------------------------------------------------
  auto* dataset_cmd = app.add_subcommand("dataset", "assemble prediction data");
  dataset_cmd->require_subcommand(1);
  struct {
    std::string system, kind = "PKG", issues, gitlog, out;
  } build_opts;
  auto* build_cmd = dataset_cmd->add_subcommand(
      "build", "one row per (version, file) with smell flags and counts");
  build_cmd->add_option("--system", build_opts.system)->required();
  build_cmd->add_option("--view-kind", build_opts.kind);
  build_cmd->add_option("--issues", build_opts.issues, "issues JSON export")
      ->required();
  build_cmd->add_option("--gitlog", build_opts.gitlog)->required();
  build_cmd->add_option("-o,--out", build_opts.out);
  build_cmd->callback([&] {
    const auto versions =
        versions_with_view(global, build_opts.system, build_opts.kind);
    if (versions.empty())
      throw ValidationError("no cached " + build_opts.kind + " views for " +
                            build_opts.system + " under " + global.workspace);
    std::vector<VersionArtifacts> per_version;
    for (const auto& version : versions) {
      const fs::path dir =
          view_dir(global, build_opts.system, version, build_opts.kind);
      VersionArtifacts v;
      v.view = load_view(dir / "view.json");
      v.report = parse_report(read_file(dir / "report.json"));
      v.entity_file_map = view_file_map(v.view);
      per_version.push_back(std::move(v));
    }
    const auto issues = filter_fixed(parse_issues(read_file(build_opts.issues)));
    const auto commits = parse_git_log(read_file(build_opts.gitlog));
    const auto result = build_dataset(per_version, issues, commits);

    const fs::path out =
        build_opts.out.empty()
            ? fs::path(global.workspace) / build_opts.system /
                  ("dataset-" + build_opts.kind + ".csv")
            : fs::path(build_opts.out);
    write_file_atomic(out, dataset_to_csv(result.rows));
    RunMeta meta;
    meta.command = "dataset build";
    meta.inputs = {{"issues", build_opts.issues},
                   {"gitlog", build_opts.gitlog}};
    meta.settings = {
        {"viewKind", build_opts.kind},
        {"versions", std::to_string(versions.size())},
        {"unknownVersionRefs", std::to_string(result.unknown_version_refs)},
        {"unresolvedCommits", std::to_string(result.unresolved_commits)}};
    meta.deviations = {"change-count-dedups-commits-shared-across-issues"};
    write_run_meta(out, meta);
    std::cout << "wrote " << out.string() << " (" << result.rows.size()
              << " rows, " << versions.size() << " versions";
    if (result.unknown_version_refs > 0)
      std::cout << "; warning: " << result.unknown_version_refs
                << " issue references to unknown versions skipped";
    if (result.unresolved_commits > 0)
      std::cout << "; warning: " << result.unresolved_commits
                << " unresolvable fixing commits excluded";
    std::cout << ")\n";
  });

  // ---- label -----------------------------------------------------------------
  struct {
    std::string dataset, out;
  } label_opts;
  auto* label_cmd = app.add_subcommand(
      "label", "double-Pareto issue/change proneness labels");
  label_cmd->add_option("--dataset", label_opts.dataset)->required();
  label_cmd->add_option("-o,--out", label_opts.out);
  label_cmd->callback([&] {
    auto rows = dataset_from_csv(read_file(label_opts.dataset));
    label_dataset(rows);
    const fs::path in(label_opts.dataset);
    const fs::path out = label_opts.out.empty()
                             ? in.parent_path() /
                                   (in.stem().string() + ".labeled.csv")
                             : fs::path(label_opts.out);
    write_file_atomic(out, dataset_to_csv(rows, true));
    RunMeta meta;
    meta.command = "label";
    meta.inputs = {{"dataset", label_opts.dataset}};
    meta.deviations = {"pareto-cuts-as-order-statistic-values"};
    write_run_meta(out, meta);
    std::map<Proneness, int> tally;
    for (const auto& row : rows) ++tally[*row.issue_label];
    std::cout << "wrote " << out.string() << " (issue labels: low "
              << tally[Proneness::Low] << ", med " << tally[Proneness::Med]
              << ", high " << tally[Proneness::High] << ")\n";
  });

  // ---- balance ---------------------------------------------------------------
  struct {
    std::string dataset, target = "issue", out;
    int factor_med = 5;
    int factor_high = 20;
    int k = 5;
  } balance_opts;
  auto* balance_cmd =
      app.add_subcommand("balance", "SMOTE-balance a labeled dataset");
  balance_cmd->add_option("--dataset", balance_opts.dataset)->required();
  balance_cmd->add_option("--target", balance_opts.target,
                          "issue or change");
  balance_cmd->add_option("--factor-med", balance_opts.factor_med);
  balance_cmd->add_option("--factor-high", balance_opts.factor_high);
  balance_cmd->add_option("--k", balance_opts.k, "nearest neighbors");
  balance_cmd->add_option("-o,--out", balance_opts.out);
  balance_cmd->callback([&] {
    const auto rows = dataset_from_csv(read_file(balance_opts.dataset));
    const auto kind = label_kind_from_string(balance_opts.target);
    const auto balanced = smote_dataset(
        rows, kind,
        factors_from(balance_opts.factor_med, balance_opts.factor_high),
        balance_opts.k, global.seed);
    const fs::path in(balance_opts.dataset);
    const fs::path out =
        balance_opts.out.empty()
            ? in.parent_path() / (in.stem().string() + ".balanced-" +
                                  balance_opts.target + ".csv")
            : fs::path(balance_opts.out);
    write_file_atomic(out, dataset_to_csv(balanced, true));
    RunMeta meta;
    meta.command = "balance";
    meta.inputs = {{"dataset", balance_opts.dataset}};
    meta.settings = {{"target", balance_opts.target},
                     {"factorMed", std::to_string(balance_opts.factor_med)},
                     {"factorHigh", std::to_string(balance_opts.factor_high)},
                     {"k", std::to_string(balance_opts.k)},
                     {"seed", std::to_string(global.seed)}};
    meta.deviations = {"smote-hamming-distance-binary-thresholded",
                       "balance-mode-whole-dataset"};
    write_run_meta(out, meta);
    std::cout << "wrote " << out.string() << " (" << rows.size() << " -> "
              << balanced.size() << " rows)\n";
  });

  // ---- eval -------------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "train and score models");
  eval_cmd->require_subcommand(1);

  struct {
    std::string dataset, target = "issue", classifier = "table",
                         system = "-", kind = "PKG", out;
    int folds = 10;
    bool strict_balancing = false;
    int factor_med = 5;
    int factor_high = 20;
    int k = 5;
  } cv_opts;
  auto* cv_cmd =
      eval_cmd->add_subcommand("cv", "stratified k-fold cross-validation");
  cv_cmd->add_option("--dataset", cv_opts.dataset)->required();
  cv_cmd->add_option("--target", cv_opts.target);
  cv_cmd->add_option("--classifier", cv_opts.classifier,
                     "table, bayes, or uniform");
  cv_cmd->add_option("--folds", cv_opts.folds);
  cv_cmd->add_option("--system", cv_opts.system, "provenance tag for reports");
  cv_cmd->add_option("--view-kind", cv_opts.kind, "provenance tag for reports");
  cv_cmd->add_flag("--strict-balancing", cv_opts.strict_balancing,
                   "run SMOTE inside each training fold instead of expecting "
                   "a pre-balanced dataset");
  cv_cmd->add_option("--factor-med", cv_opts.factor_med);
  cv_cmd->add_option("--factor-high", cv_opts.factor_high);
  cv_cmd->add_option("--k", cv_opts.k);
  cv_cmd->add_option("-o,--out", cv_opts.out);
  cv_cmd->callback([&] {
    const auto rows = load_ml_rows(cv_opts.dataset, cv_opts.target);
    FoldTransform transform;
    if (cv_opts.strict_balancing) {
      const SmoteFactors factors =
          factors_from(cv_opts.factor_med, cv_opts.factor_high);
      const int k = cv_opts.k;
      transform = [factors, k](const std::vector<MLRow>& train,
                               std::uint64_t seed) {
        return smote(train, factors, k, seed);
      };
    }
    TaggedEvalResult tagged;
    tagged.system = cv_opts.system;
    tagged.view = cv_opts.kind;
    tagged.target = cv_opts.target;
    tagged.classifier = cv_opts.classifier;
    tagged.seed = global.seed;
    tagged.balancing = cv_opts.strict_balancing ? "strict" : "whole";
    tagged.result = cross_validate(rows, cv_opts.folds, global.seed,
                                   make_trainer(cv_opts.classifier), transform);
    const fs::path in(cv_opts.dataset);
    const fs::path out =
        cv_opts.out.empty()
            ? in.parent_path() / (in.stem().string() + ".cv-" + cv_opts.target +
                                  "-" + cv_opts.classifier + ".json")
            : fs::path(cv_opts.out);
    write_file_atomic(out, serialize_eval_result(tagged));
    RunMeta meta;
    meta.command = "eval cv";
    meta.inputs = {{"dataset", cv_opts.dataset}};
    meta.settings = {{"target", cv_opts.target},
                     {"classifier", cv_opts.classifier},
                     {"folds", std::to_string(cv_opts.folds)},
                     {"seed", std::to_string(global.seed)},
                     {"balancing", tagged.balancing}};
    meta.deviations = {"stratified-folds"};
    if (cv_opts.strict_balancing)
      meta.deviations.push_back("balance-mode-strict-per-fold");
    write_run_meta(out, meta);
    print_eval(tagged);
    std::cout << "wrote " << out.string() << '\n';
  });

  struct {
    std::vector<std::string> train;
    std::string test, target = "issue", classifier = "table", system = "-",
                      kind = "PKG", out;
  } cross_opts;
  auto* cross_cmd = eval_cmd->add_subcommand(
      "cross-system", "train on other systems, test on one");
  cross_cmd->add_option("--train", cross_opts.train, "training dataset CSVs")
      ->required()
      ->expected(-1);
  cross_cmd->add_option("--test", cross_opts.test)->required();
  cross_cmd->add_option("--target", cross_opts.target);
  cross_cmd->add_option("--classifier", cross_opts.classifier);
  cross_cmd->add_option("--system", cross_opts.system);
  cross_cmd->add_option("--view-kind", cross_opts.kind);
  cross_cmd->add_option("-o,--out", cross_opts.out);
  cross_cmd->callback([&] {
    std::vector<std::vector<MLRow>> train_sets;
    for (const auto& path : cross_opts.train)
      train_sets.push_back(load_ml_rows(path, cross_opts.target));
    const auto test_set = load_ml_rows(cross_opts.test, cross_opts.target);
    TaggedEvalResult tagged;
    tagged.system = cross_opts.system;
    tagged.view = cross_opts.kind;
    tagged.target = cross_opts.target;
    tagged.classifier = cross_opts.classifier;
    tagged.seed = global.seed;
    tagged.balancing = "whole";
    tagged.result = cross_system(train_sets, test_set, global.seed,
                                 make_trainer(cross_opts.classifier));
    const fs::path in(cross_opts.test);
    const fs::path out =
        cross_opts.out.empty()
            ? in.parent_path() / (in.stem().string() + ".cross-" +
                                  cross_opts.target + "-" +
                                  cross_opts.classifier + ".json")
            : fs::path(cross_opts.out);
    write_file_atomic(out, serialize_eval_result(tagged));
    RunMeta meta;
    meta.command = "eval cross-system";
    meta.inputs = {{"test", cross_opts.test}};
    for (std::size_t i = 0; i < cross_opts.train.size(); ++i)
      meta.inputs["train" + std::to_string(i)] = cross_opts.train[i];
    meta.settings = {{"target", cross_opts.target},
                     {"classifier", cross_opts.classifier},
                     {"seed", std::to_string(global.seed)}};
    meta.deviations = {"cross-system-downsampled-to-minimum-dataset-size"};
    write_run_meta(out, meta);
    print_eval(tagged);
    std::cout << "wrote " << out.string() << '\n';
  });

  // ---- report -----------------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "human-readable summaries");
  report_cmd->require_subcommand(1);

  struct {
    std::string report;
  } smells_opts;
  auto* smells_cmd =
      report_cmd->add_subcommand("smells", "per-type smell summary");
  smells_cmd->add_option("--report", smells_opts.report, "report.json path")
      ->required();
  smells_cmd->callback([&] {
    std::cout << render_smell_summary(parse_report(read_file(smells_opts.report)));
  });

  struct {
    std::vector<std::string> results;
    std::string out;
  } eval_table_opts;
  auto* eval_table_cmd = report_cmd->add_subcommand(
      "eval", "precision/recall table across systems and views");
  eval_table_cmd
      ->add_option("--results", eval_table_opts.results, "eval result JSONs")
      ->required()
      ->expected(-1);
  eval_table_cmd->add_option("-o,--out", eval_table_opts.out);
  eval_table_cmd->callback([&] {
    std::map<std::string, std::map<std::string, EvalCell>> cells;
    for (const auto& path : eval_table_opts.results) {
      const auto tagged = parse_eval_result(read_file(path));
      cells[tagged.system][tagged.view] = {tagged.result.macro_precision,
                                           tagged.result.macro_recall};
    }
    const std::string table = render_eval_table(cells);
    std::cout << table;
    if (!eval_table_opts.out.empty()) {
      write_file_atomic(eval_table_opts.out, table);
      std::cout << "wrote " << eval_table_opts.out << '\n';
    }
  });

  struct {
    std::string system, kind = "PKG", out;
    int top = 10;
  } long_lived_opts;
  auto* long_lived_cmd = report_cmd->add_subcommand(
      "long-lived", "files involved in smells across many versions");
  long_lived_cmd->add_option("--system", long_lived_opts.system)->required();
  long_lived_cmd->add_option("--view-kind", long_lived_opts.kind);
  long_lived_cmd->add_option("--top", long_lived_opts.top);
  long_lived_cmd->add_option("-o,--out", long_lived_opts.out);
  long_lived_cmd->callback([&] {
    const auto versions =
        versions_with_view(global, long_lived_opts.system, long_lived_opts.kind);
    if (versions.empty())
      throw ValidationError("no cached " + long_lived_opts.kind +
                            " views for " + long_lived_opts.system);
    std::vector<VersionReport> reports;
    for (const auto& version : versions) {
      const fs::path dir =
          view_dir(global, long_lived_opts.system, version, long_lived_opts.kind);
      VersionReport vr;
      vr.version = version;
      vr.view = load_view(dir / "view.json");
      vr.report = parse_report(read_file(dir / "report.json"));
      vr.entity_file_map = view_file_map(vr.view);
      reports.push_back(std::move(vr));
    }
    const auto ranked = long_lived_smelly_files(
        reports, static_cast<std::size_t>(long_lived_opts.top));
    std::ostringstream csv;
    csv << "file,versions,total\n";
    for (const auto& entry : ranked) {
      std::cout << entry.file << ": " << entry.versions_involved
                << " versions, " << entry.total_smell_count
                << " involvements\n";
      csv << entry.file << ',' << entry.versions_involved << ','
          << entry.total_smell_count << '\n';
    }
    if (!long_lived_opts.out.empty()) {
      write_file_atomic(long_lived_opts.out, csv.str());
      std::cout << "wrote " << long_lived_opts.out << '\n';
    }
  });

  // ---- synth ------------------------------------------------------------------
  struct {
    std::string out;
    int systems = 5;
    int versions = 5;
    int plains = 72;
  } synth_opts;
  auto* synth_cmd = app.add_subcommand(
      "synth", "generate the bundled synthetic corpus (seeded)");
  synth_cmd->add_option("-o,--out", synth_opts.out,
                        "corpus directory (default: <workspace>/corpus)");
  synth_cmd->add_option("--systems", synth_opts.systems);
  synth_cmd->add_option("--versions", synth_opts.versions);
  synth_cmd->add_option("--plains", synth_opts.plains,
                        "smell-free components per system");
  synth_cmd->callback([&] {
    SynthConfig config;
    config.systems = synth_opts.systems;
    config.versions = synth_opts.versions;
    config.plain_components = synth_opts.plains;
    config.seed = global.seed;
    const auto corpus = generate_corpus(config);
    const fs::path root = synth_opts.out.empty()
                              ? fs::path(global.workspace) / "corpus"
                              : fs::path(synth_opts.out);
    for (const auto& system : corpus) {
      const fs::path dir = root / system.name;
      for (const auto& version : system.versions) {
        const auto& facts = system.facts.at(version);
        write_file_atomic(dir / ("deps-" + version + ".rsf"), facts.deps_rsf);
        write_file_atomic(dir / ("interfaces-" + version + ".rsf"),
                          facts.interfaces_rsf);
        write_file_atomic(dir / ("topics-" + version + ".tsv"),
                          facts.topics_tsv);
        write_file_atomic(dir / ("duplicates-" + version + ".facts"),
                          facts.duplicates_facts);
      }
      write_file_atomic(dir / "gitlog.txt", system.gitlog);
      write_file_atomic(dir / "issues.json", system.issues_json);
    }
    const fs::path manifest_path = root / "manifest.json";
    write_file_atomic(manifest_path,
                      corpus_manifest(corpus, config).dump(2) + "\n");
    RunMeta meta;
    meta.command = "synth";
    meta.settings = {{"systems", std::to_string(config.systems)},
                     {"versions", std::to_string(config.versions)},
                     {"plains", std::to_string(config.plain_components)},
                     {"seed", std::to_string(config.seed)}};
    write_run_meta(manifest_path, meta);
    std::cout << "wrote corpus for " << corpus.size() << " systems under "
              << root.string() << '\n';
  });

  // let global flags (--seed, --workspace, --config) appear after subcommands
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* cmd) {
    cmd->fallthrough();
    for (auto* sub : cmd->get_subcommands(nullptr)) enable_fallthrough(sub);
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const archsmell::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
