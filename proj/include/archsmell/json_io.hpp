#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "archsmell/ingest.hpp"
#include "archsmell/mlkit.hpp"
#include "archsmell/model.hpp"
#include "archsmell/smells.hpp"

namespace archsmell {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::vector<std::string> dedup_keep_order(std::vector<std::string> xs) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (auto& x : xs)
    if (seen.insert(x).second) out.push_back(std::move(x));
  return out;
}

}  // namespace detail

// ---- issues -------------------------------------------------------------

/// Issue export: a JSON array of objects with the fields
/// id, type, status, resolution, affectedVersions, fixingCommits.
inline std::vector<Issue> parse_issues(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid issues JSON: ") + e.what());
  }
  if (!doc.is_array())
    throw ParseError("issues document must be a JSON array");
  std::vector<Issue> issues;
  std::set<std::string> ids;
  for (const auto& item : doc) {
    if (!item.is_object())
      throw ParseError("issue entries must be JSON objects");
    if (!item.contains("id") || !item["id"].is_string() ||
        item["id"].get<std::string>().empty())
      throw ParseError("issue without id");
    Issue issue;
    issue.id = item["id"].get<std::string>();
    if (!ids.insert(issue.id).second)
      throw ParseError("duplicate issue id: " + issue.id);
    issue.type = item.value("type", std::string{});
    issue.status = item.value("status", std::string{});
    issue.resolution = item.value("resolution", std::string{});
    if (item.contains("affectedVersions"))
      issue.affected_versions = detail::dedup_keep_order(
          item["affectedVersions"].get<std::vector<std::string>>());
    if (item.contains("fixingCommits"))
      issue.fixing_commits = detail::dedup_keep_order(
          item["fixingCommits"].get<std::vector<std::string>>());
    issues.push_back(std::move(issue));
  }
  return issues;
}

inline std::string serialize_issues(const std::vector<Issue>& issues) {
  Json doc = Json::array();
  for (const auto& issue : issues) {
    Json item;
    item["id"] = issue.id;
    item["type"] = issue.type;
    item["status"] = issue.status;
    item["resolution"] = issue.resolution;
    item["affectedVersions"] = issue.affected_versions;
    item["fixingCommits"] = issue.fixing_commits;
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

// ---- architecture views ---------------------------------------------------

inline Json view_to_json(const ArchitectureView& view) {
  Json doc;
  doc["system"] = view.system;
  doc["version"] = view.version;
  doc["view"] = to_string(view.kind);
  doc["topics"] = view.topics;
  Json entities = Json::array();
  for (const auto& [eid, e] : view.entities) {
    Json item;
    item["id"] = eid;
    item["interfaces"] = e.interfaces;
    if (e.file) item["file"] = *e.file;
    entities.push_back(std::move(item));
  }
  doc["entities"] = std::move(entities);
  Json components = Json::array();
  for (const auto& [cid, comp] : view.components) {
    Json item;
    item["id"] = cid;
    item["entities"] = comp.entity_ids;
    if (comp.concerns) {
      Json concerns;
      for (const auto& [topic, p] : *comp.concerns)
        concerns[std::to_string(topic)] = p;
      item["concerns"] = std::move(concerns);
    }
    components.push_back(std::move(item));
  }
  doc["components"] = std::move(components);
  Json links = Json::array();
  std::vector<Link> sorted_links = view.links;
  std::sort(sorted_links.begin(), sorted_links.end());
  for (const auto& link : sorted_links)
    links.push_back(Json::array({link.src, link.dst}));
  doc["links"] = std::move(links);
  Json couplings = Json::array();
  std::vector<Coupling> sorted_couplings = view.couplings;
  std::sort(sorted_couplings.begin(), sorted_couplings.end());
  for (const auto& cp : sorted_couplings) {
    Json item;
    item["a"] = cp.a;
    item["b"] = cp.b;
    item["kind"] = to_string(cp.kind);
    item["strength"] = cp.strength;
    couplings.push_back(std::move(item));
  }
  doc["couplings"] = std::move(couplings);
  return doc;
}

inline ArchitectureView view_from_json(const Json& doc) {
  ArchitectureView view;
  view.system = doc.at("system").get<std::string>();
  view.version = doc.at("version").get<std::string>();
  view.kind = view_kind_from_string(doc.at("view").get<std::string>());
  for (const auto& t : doc.at("topics")) view.topics.insert(t.get<TopicId>());
  for (const auto& item : doc.at("entities")) {
    Entity e;
    e.id = item.at("id").get<std::string>();
    e.interfaces = item.at("interfaces").get<int>();
    if (item.contains("file")) e.file = item["file"].get<std::string>();
    view.entities[e.id] = std::move(e);
  }
  for (const auto& item : doc.at("components")) {
    Component comp;
    comp.id = item.at("id").get<std::string>();
    for (const auto& e : item.at("entities"))
      comp.entity_ids.insert(e.get<std::string>());
    if (item.contains("concerns")) {
      ConcernDistribution dist;
      for (const auto& [key, value] : item["concerns"].items())
        dist[std::stoi(key)] = value.get<double>();
      comp.concerns = std::move(dist);
    }
    view.components[comp.id] = std::move(comp);
  }
  for (const auto& pair : doc.at("links"))
    view.links.push_back({pair.at(0).get<std::string>(),
                          pair.at(1).get<std::string>()});
  for (const auto& item : doc.at("couplings")) {
    view.couplings.push_back(make_coupling(
        item.at("a").get<std::string>(), item.at("b").get<std::string>(),
        item.at("kind").get<std::string>() == "duplicate"
            ? CouplingKind::Duplicate
            : CouplingKind::Cochange,
        item.at("strength").get<int>()));
  }
  validate_view(view);
  return view;
}

inline std::string serialize_view(const ArchitectureView& view) {
  return view_to_json(view).dump(2) + "\n";
}

inline ArchitectureView parse_view(const std::string& text) {
  try {
    return view_from_json(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid view JSON: ") + e.what());
  }
}

// ---- smell reports ----------------------------------------------------------

inline Json report_to_json(const SmellReport& report) {
  Json doc;
  doc["system"] = report.system;
  doc["version"] = report.version;
  doc["view"] = to_string(report.view_kind);
  doc["config"] = {{"thSd", report.config.th_sd},
                   {"minCycleSize", report.config.min_cycle_size}};
  doc["skipped"] = report.skipped;
  Json thresholds;
  for (const auto& [name, value] : report.thresholds) thresholds[name] = value;
  doc["thresholds"] = std::move(thresholds);
  Json instances = Json::array();
  for (const auto& inst : report.instances) {
    Json item;
    item["type"] = to_string(inst.type);
    item["components"] = inst.component_ids;
    item["entities"] = inst.entity_ids;
    Json detail = Json::object();
    for (const auto& [k, v] : inst.detail) detail[k] = v;
    item["detail"] = std::move(detail);
    instances.push_back(std::move(item));
  }
  doc["instances"] = std::move(instances);
  return doc;
}

inline SmellReport report_from_json(const Json& doc) {
  SmellReport report;
  report.system = doc.at("system").get<std::string>();
  report.version = doc.at("version").get<std::string>();
  report.view_kind = view_kind_from_string(doc.at("view").get<std::string>());
  report.config.th_sd = doc.at("config").at("thSd").get<int>();
  report.config.min_cycle_size = doc.at("config").at("minCycleSize").get<int>();
  for (const auto& s : doc.at("skipped"))
    report.skipped.push_back(s.get<std::string>());
  for (const auto& [name, value] : doc.at("thresholds").items())
    report.thresholds[name] = value.get<double>();
  for (const auto& item : doc.at("instances")) {
    SmellInstance inst;
    inst.type = smell_type_from_string(item.at("type").get<std::string>());
    for (const auto& c : item.at("components"))
      inst.component_ids.insert(c.get<std::string>());
    for (const auto& e : item.at("entities"))
      inst.entity_ids.insert(e.get<std::string>());
    for (const auto& [k, v] : item.at("detail").items())
      inst.detail[k] = v.get<std::string>();
    report.instances.push_back(std::move(inst));
  }
  return report;
}

inline std::string serialize_report(const SmellReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

inline SmellReport parse_report(const std::string& text) {
  try {
    return report_from_json(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid report JSON: ") + e.what());
  }
}

// ---- evaluation results ---------------------------------------------------

/// An EvalResult plus the provenance needed to place it in summary tables.
struct TaggedEvalResult {
  std::string system;
  std::string view;
  std::string target;      // issue | change
  std::string classifier;  // table | bayes | uniform
  std::uint64_t seed = 0;
  std::string balancing;   // whole | strict | none
  EvalResult result;
};

inline Json eval_result_to_json(const TaggedEvalResult& tagged) {
  const EvalResult& r = tagged.result;
  Json doc;
  doc["system"] = tagged.system;
  doc["view"] = tagged.view;
  doc["target"] = tagged.target;
  doc["classifier"] = tagged.classifier;
  doc["seed"] = tagged.seed;
  doc["balancing"] = tagged.balancing;
  Json confusion = Json::array();
  for (const auto& row : r.confusion)
    confusion.push_back(Json::array({row[0], row[1], row[2]}));
  doc["confusion"] = std::move(confusion);
  Json per_label;
  for (std::size_t l = 0; l < 3; ++l) {
    per_label[to_string(kLabels[l])] = {{"precision", r.per_label[l].precision},
                                        {"recall", r.per_label[l].recall}};
  }
  doc["perLabel"] = std::move(per_label);
  doc["macroPrecision"] = r.macro_precision;
  doc["macroRecall"] = r.macro_recall;
  doc["notes"] = r.notes;
  return doc;
}

inline TaggedEvalResult eval_result_from_json(const Json& doc) {
  TaggedEvalResult tagged;
  tagged.system = doc.at("system").get<std::string>();
  tagged.view = doc.at("view").get<std::string>();
  tagged.target = doc.at("target").get<std::string>();
  tagged.classifier = doc.at("classifier").get<std::string>();
  tagged.seed = doc.at("seed").get<std::uint64_t>();
  tagged.balancing = doc.at("balancing").get<std::string>();
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t a = 0; a < 3; ++a)
      tagged.result.confusion[p][a] =
          doc.at("confusion").at(p).at(a).get<long>();
  for (std::size_t l = 0; l < 3; ++l) {
    const auto& entry = doc.at("perLabel").at(to_string(kLabels[l]));
    tagged.result.per_label[l].precision = entry.at("precision").get<double>();
    tagged.result.per_label[l].recall = entry.at("recall").get<double>();
  }
  tagged.result.macro_precision = doc.at("macroPrecision").get<double>();
  tagged.result.macro_recall = doc.at("macroRecall").get<double>();
  for (const auto& note : doc.at("notes"))
    tagged.result.notes.push_back(note.get<std::string>());
  return tagged;
}

inline std::string serialize_eval_result(const TaggedEvalResult& tagged) {
  return eval_result_to_json(tagged).dump(2) + "\n";
}

inline TaggedEvalResult parse_eval_result(const std::string& text) {
  try {
    return eval_result_from_json(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid eval result JSON: ") + e.what());
  }
}

}  // namespace archsmell
