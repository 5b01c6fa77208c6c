#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "archsmell/dataset.hpp"
#include "archsmell/rng.hpp"

namespace archsmell {

/// The 11 binary smell features packed into one word, bit i = column i of
/// the dataset feature order.
using FeatureBits = std::uint16_t;

inline FeatureBits pack_features(const std::array<int, kFeatureCount>& f) {
  FeatureBits bits = 0;
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    if (f[i]) bits |= static_cast<FeatureBits>(1u << i);
  return bits;
}

inline std::array<int, kFeatureCount> unpack_features(FeatureBits bits) {
  std::array<int, kFeatureCount> f{};
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    f[i] = (bits >> i) & 1u;
  return f;
}

struct MLRow {
  FeatureBits bits = 0;
  Proneness label = Proneness::Low;
};

inline std::size_t label_index(Proneness p) {
  return static_cast<std::size_t>(p);
}

inline constexpr std::array<Proneness, 3> kLabels = {
    Proneness::Low, Proneness::Med, Proneness::High};

// ---- double-Pareto labeling -------------------------------------------------

/// Three-level proneness labels from raw counts. The sorted sample is cut
/// at the 80% and 96% order statistics; rows at or below the first cut
/// value are low, rows above the second are high. Using cut *values*
/// (rather than index positions) keeps equal counts on one side.
inline std::vector<Proneness> pareto_label(const std::vector<int>& counts) {
  if (counts.empty()) throw ValidationError("pareto_label: empty sample");
  std::vector<int> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const std::size_t i1 = (4 * n + 4) / 5;    // ceil(0.8 n), 1-based
  const std::size_t i2 = (24 * n + 24) / 25;  // ceil(0.96 n), 1-based
  const int t1 = sorted[i1 - 1];
  const int t2 = sorted[i2 - 1];
  std::vector<Proneness> labels;
  labels.reserve(n);
  for (int c : counts) {
    if (c <= t1)
      labels.push_back(Proneness::Low);
    else if (c <= t2)
      labels.push_back(Proneness::Med);
    else
      labels.push_back(Proneness::High);
  }
  return labels;
}

// ---- SMOTE ------------------------------------------------------------------

using SmoteFactors = std::map<Proneness, int>;

inline SmoteFactors default_smote_factors() {
  return {{Proneness::Med, 5}, {Proneness::High, 20}};
}

struct SyntheticRow {
  std::size_t base_index;  // row the synthesis started from
  FeatureBits bits;
};

/// SMOTE over binary features. For every row of an oversampled class,
/// factor-1 synthetic rows are generated by interpolating towards one of
/// its k nearest same-class neighbors (Hamming distance, ties broken by
/// row order) and re-thresholding each feature at 0.5; a coefficient of
/// exactly 0.5 keeps the base row's value. Originals are never modified.
inline std::vector<SyntheticRow> smote_synthesize(
    const std::vector<MLRow>& rows, const SmoteFactors& factors, int k,
    std::uint64_t seed) {
  if (k < 1) throw ValidationError("smote: k must be >= 1");
  Rng rng = make_rng(seed);
  std::vector<SyntheticRow> synthetic;

  for (Proneness label : kLabels) {
    auto fit = factors.find(label);
    const int factor = fit == factors.end() ? 1 : fit->second;
    if (factor < 1)
      throw ValidationError("smote: factors must be >= 1");
    if (factor == 1) continue;

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].label == label) members.push_back(i);
    if (members.size() < 2)
      throw ValidationError(
          std::string("smote: class '") + to_string(label) + "' has " +
          std::to_string(members.size()) +
          " rows; oversampling needs at least 2 (adjust the factors)");

    const std::size_t usable_k =
        std::min<std::size_t>(static_cast<std::size_t>(k), members.size() - 1);
    for (std::size_t base : members) {
      // k nearest same-class neighbors, ties by row order
      std::vector<std::size_t> neighbors;
      neighbors.reserve(members.size() - 1);
      for (std::size_t other : members)
        if (other != base) neighbors.push_back(other);
      std::stable_sort(neighbors.begin(), neighbors.end(),
                       [&](std::size_t a, std::size_t b) {
                         const int da = std::popcount(
                             static_cast<unsigned>(rows[a].bits ^ rows[base].bits));
                         const int db = std::popcount(
                             static_cast<unsigned>(rows[b].bits ^ rows[base].bits));
                         if (da != db) return da < db;
                         return a < b;
                       });
      neighbors.resize(usable_k);

      for (int copy = 1; copy < factor; ++copy) {
        const std::size_t nb = neighbors[uniform_index(rng, neighbors.size())];
        FeatureBits bits = 0;
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
          const int b = (rows[base].bits >> i) & 1u;
          const int v = (rows[nb].bits >> i) & 1u;
          int out = b;
          if (b != v) {
            const double u = uniform01(rng);
            const double interpolated = b + u * (v - b);
            if (interpolated > 0.5)
              out = 1;
            else if (interpolated < 0.5)
              out = 0;
            // exactly 0.5 resolves to the base value
          }
          if (out) bits |= static_cast<FeatureBits>(1u << i);
        }
        synthetic.push_back({base, bits});
      }
    }
  }
  return synthetic;
}

inline std::vector<MLRow> smote(const std::vector<MLRow>& rows,
                                const SmoteFactors& factors, int k,
                                std::uint64_t seed) {
  std::vector<MLRow> out = rows;
  for (const auto& syn : smote_synthesize(rows, factors, k, seed))
    out.push_back({syn.bits, rows[syn.base_index].label});
  return out;
}

// ---- classifiers --------------------------------------------------------------

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual Proneness predict(FeatureBits bits) = 0;
};

using ClassifierPtr = std::unique_ptr<Classifier>;
using Trainer =
    std::function<ClassifierPtr(const std::vector<MLRow>&, std::uint64_t)>;

namespace detail {

/// Majority label of a count triple; ties resolve to the lowest label.
inline Proneness majority(const std::array<int, 3>& counts) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (counts[i] > counts[best]) best = i;
  return kLabels[best];
}

struct PatternTable {
  FeatureBits mask = 0;
  std::map<FeatureBits, Proneness> entries;
  Proneness fallback = Proneness::Low;

  Proneness predict(FeatureBits bits) const {
    auto it = entries.find(bits & mask);
    return it == entries.end() ? fallback : it->second;
  }
};

inline PatternTable build_pattern_table(const std::vector<MLRow>& rows,
                                        FeatureBits mask) {
  std::map<FeatureBits, std::array<int, 3>> counts;
  std::array<int, 3> total{};
  for (const auto& row : rows) {
    ++counts[row.bits & mask][label_index(row.label)];
    ++total[label_index(row.label)];
  }
  PatternTable table;
  table.mask = mask;
  table.fallback = majority(total);
  for (const auto& [pattern, c] : counts) table.entries[pattern] = majority(c);
  return table;
}

inline std::vector<int> mask_to_indices(FeatureBits mask) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(kFeatureCount); ++i)
    if (mask & (1u << i)) idx.push_back(i);
  return idx;
}

/// Smaller subsets first, then lexicographic on sorted feature indices.
inline bool subset_preferred(FeatureBits a, FeatureBits b) {
  const int pa = std::popcount(static_cast<unsigned>(a));
  const int pb = std::popcount(static_cast<unsigned>(b));
  if (pa != pb) return pa < pb;
  const auto ia = mask_to_indices(a);
  const auto ib = mask_to_indices(b);
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(),
                                      ib.end());
}

}  // namespace detail

class DecisionTableClassifier final : public Classifier {
 public:
  explicit DecisionTableClassifier(detail::PatternTable table)
      : table_(std::move(table)) {}

  Proneness predict(FeatureBits bits) override { return table_.predict(bits); }

  FeatureBits selected_features() const { return table_.mask; }

 private:
  detail::PatternTable table_;
};

/// Decision table in the style of Kohavi: best-first search over feature
/// subsets scored by inner 5-fold cross-validated accuracy of an
/// exact-match majority table. Score ties prefer smaller subsets, then
/// lexicographic feature order. The search stops after five consecutive
/// expansions without improvement.
inline ClassifierPtr train_decision_table(const std::vector<MLRow>& rows,
                                          std::uint64_t seed) {
  if (rows.empty())
    throw ValidationError("decision table: empty training set");

  const std::size_t n = rows.size();
  const int folds = static_cast<int>(std::min<std::size_t>(5, n));

  // one fixed fold assignment reused for every subset evaluation
  std::vector<int> fold_of(n, 0);
  if (folds >= 2) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng = make_rng(seed, 1);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < n; ++i)
      fold_of[order[i]] = static_cast<int>(i % folds);
  }

  // flat per-pattern counters; patterns fit in 11 bits
  constexpr std::size_t kPatternSpace = 1u << kFeatureCount;
  std::vector<std::array<int, 3>> total_counts(kPatternSpace);
  std::vector<std::vector<std::array<int, 3>>> fold_counts(
      folds, std::vector<std::array<int, 3>>(kPatternSpace));
  std::array<int, 3> total_labels{};
  std::vector<std::array<int, 3>> fold_labels(folds);
  for (std::size_t i = 0; i < n; ++i)
    ++total_labels[label_index(rows[i].label)];
  for (int fold = 0; fold < folds; ++fold)
    for (std::size_t i = 0; i < n; ++i)
      if (fold_of[i] == fold) ++fold_labels[fold][label_index(rows[i].label)];

  auto cv_correct = [&](FeatureBits mask) -> int {
    if (folds < 2) {
      // too few rows to cross-validate; fall back to resubstitution
      const auto table = detail::build_pattern_table(rows, mask);
      int correct = 0;
      for (const auto& row : rows)
        if (table.predict(row.bits) == row.label) ++correct;
      return correct;
    }
    for (auto& c : total_counts) c = {};
    for (int fold = 0; fold < folds; ++fold)
      for (auto& c : fold_counts[fold]) c = {};
    for (std::size_t i = 0; i < n; ++i) {
      const FeatureBits pattern = rows[i].bits & mask;
      const std::size_t l = label_index(rows[i].label);
      ++total_counts[pattern][l];
      ++fold_counts[fold_of[i]][pattern][l];
    }
    int correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int fold = fold_of[i];
      const FeatureBits pattern = rows[i].bits & mask;
      std::array<int, 3> train{};
      bool seen = false;
      for (std::size_t l = 0; l < 3; ++l) {
        train[l] = total_counts[pattern][l] - fold_counts[fold][pattern][l];
        if (train[l] > 0) seen = true;
      }
      Proneness predicted;
      if (seen) {
        predicted = detail::majority(train);
      } else {
        std::array<int, 3> fallback{};
        for (std::size_t l = 0; l < 3; ++l)
          fallback[l] = total_labels[l] - fold_labels[fold][l];
        predicted = detail::majority(fallback);
      }
      if (predicted == rows[i].label) ++correct;
    }
    return correct;
  };

  auto better = [&](int score_a, FeatureBits a, int score_b, FeatureBits b) {
    if (score_a != score_b) return score_a > score_b;
    return detail::subset_preferred(a, b);
  };

  constexpr int kStaleLimit = 5;
  std::set<FeatureBits> visited;
  // open list ordered worst-to-best so the best expandable node is at the back
  std::vector<std::pair<int, FeatureBits>> open;

  FeatureBits best_mask = 0;
  int best_score = cv_correct(0);
  visited.insert(0);
  open.push_back({best_score, 0});

  int stale = 0;
  while (!open.empty() && stale < kStaleLimit) {
    // best open node: highest score, preferred subset on ties
    auto best_it = open.begin();
    for (auto it = std::next(open.begin()); it != open.end(); ++it)
      if (better(it->first, it->second, best_it->first, best_it->second))
        best_it = it;
    const FeatureBits node = best_it->second;
    open.erase(best_it);

    bool improved = false;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const FeatureBits child = node | static_cast<FeatureBits>(1u << f);
      if (child == node || visited.count(child)) continue;
      visited.insert(child);
      const int score = cv_correct(child);
      open.push_back({score, child});
      if (better(score, child, best_score, best_mask)) {
        best_score = score;
        best_mask = child;
        improved = true;
      }
    }
    stale = improved ? 0 : stale + 1;
  }

  return std::make_unique<DecisionTableClassifier>(
      detail::build_pattern_table(rows, best_mask));
}

class NaiveBayesClassifier final : public Classifier {
 public:
  NaiveBayesClassifier(std::array<double, 3> priors,
                       std::array<std::array<double, kFeatureCount>, 3> p_one)
      : priors_(priors), p_one_(p_one) {}

  Proneness predict(FeatureBits bits) override {
    std::array<double, 3> posterior{};
    for (std::size_t l = 0; l < 3; ++l) {
      double p = priors_[l];
      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        const bool set = (bits >> f) & 1u;
        p *= set ? p_one_[l][f] : 1.0 - p_one_[l][f];
      }
      posterior[l] = p;
    }
    std::size_t best = 0;
    for (std::size_t l = 1; l < 3; ++l)
      if (posterior[l] > posterior[best]) best = l;
    return kLabels[best];
  }

 private:
  std::array<double, 3> priors_;
  std::array<std::array<double, kFeatureCount>, 3> p_one_;
};

/// Bernoulli naive Bayes with add-one smoothing on the per-feature
/// likelihoods. Posterior ties resolve to the lowest label.
inline ClassifierPtr train_naive_bayes(const std::vector<MLRow>& rows,
                                       std::uint64_t /*seed*/ = 0) {
  if (rows.empty()) throw ValidationError("naive bayes: empty training set");
  std::array<int, 3> label_counts{};
  std::array<std::array<int, kFeatureCount>, 3> one_counts{};
  for (const auto& row : rows) {
    const std::size_t l = label_index(row.label);
    ++label_counts[l];
    for (std::size_t f = 0; f < kFeatureCount; ++f)
      if ((row.bits >> f) & 1u) ++one_counts[l][f];
  }
  std::array<double, 3> priors{};
  std::array<std::array<double, kFeatureCount>, 3> p_one{};
  for (std::size_t l = 0; l < 3; ++l) {
    priors[l] = static_cast<double>(label_counts[l]) /
                static_cast<double>(rows.size());
    for (std::size_t f = 0; f < kFeatureCount; ++f)
      p_one[l][f] = (one_counts[l][f] + 1.0) / (label_counts[l] + 2.0);
  }
  return std::make_unique<NaiveBayesClassifier>(priors, p_one);
}

class UniformBaselineClassifier final : public Classifier {
 public:
  explicit UniformBaselineClassifier(std::uint64_t seed)
      : rng_(make_rng(seed)) {}

  Proneness predict(FeatureBits) override {
    return kLabels[uniform_index(rng_, 3)];
  }

 private:
  Rng rng_;
};

/// Ignores the features; predicts each label with probability 1/3.
inline ClassifierPtr baseline_uniform(std::uint64_t seed) {
  return std::make_unique<UniformBaselineClassifier>(seed);
}

inline Trainer make_trainer(const std::string& name) {
  if (name == "table")
    return [](const std::vector<MLRow>& rows, std::uint64_t seed) {
      return train_decision_table(rows, seed);
    };
  if (name == "bayes")
    return [](const std::vector<MLRow>& rows, std::uint64_t seed) {
      return train_naive_bayes(rows, seed);
    };
  if (name == "uniform")
    return [](const std::vector<MLRow>&, std::uint64_t seed) {
      return baseline_uniform(seed);
    };
  throw ValidationError("unknown classifier: " + name +
                        " (expected table, bayes, or uniform)");
}

// ---- metrics ---------------------------------------------------------------

/// predicted x actual counts, indexed [predicted label][actual label].
using ConfusionMatrix = std::array<std::array<long, 3>, 3>;

struct LabelMetrics {
  double precision = 0;
  double recall = 0;
};

struct EvalResult {
  ConfusionMatrix confusion{};
  std::array<LabelMetrics, 3> per_label{};  // indexed by label
  double macro_precision = 0;
  double macro_recall = 0;
  std::vector<std::string> notes;
};

/// Precision = diagonal over predicted-row sum, recall = diagonal over
/// actual-column sum, per label; zero denominators yield 0. Macro values
/// are unweighted means over the three labels.
inline EvalResult confusion_metrics(const ConfusionMatrix& m) {
  EvalResult result;
  result.confusion = m;
  double precision_sum = 0;
  double recall_sum = 0;
  for (std::size_t l = 0; l < 3; ++l) {
    long predicted = 0;
    long actual = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      predicted += m[l][j];
      actual += m[j][l];
    }
    LabelMetrics metrics;
    metrics.precision =
        predicted == 0 ? 0.0 : static_cast<double>(m[l][l]) / predicted;
    metrics.recall = actual == 0 ? 0.0 : static_cast<double>(m[l][l]) / actual;
    result.per_label[l] = metrics;
    precision_sum += metrics.precision;
    recall_sum += metrics.recall;
  }
  result.macro_precision = precision_sum / 3.0;
  result.macro_recall = recall_sum / 3.0;
  return result;
}

// ---- evaluation protocols -----------------------------------------------------

/// Optional per-fold training-set transform (used for strict balancing,
/// where SMOTE runs inside each fold instead of up front).
using FoldTransform =
    std::function<std::vector<MLRow>(const std::vector<MLRow>&, std::uint64_t)>;

/// Seeded stratified k-fold cross-validation. Fold confusion matrices are
/// summed and the metrics computed from the total. Falls back to an
/// unstratified split (with a note) when some class has fewer rows than
/// folds.
inline EvalResult cross_validate(const std::vector<MLRow>& rows, int folds,
                                 std::uint64_t seed, const Trainer& trainer,
                                 const FoldTransform& fold_transform = {}) {
  if (folds < 2) throw ValidationError("cross_validate: folds must be >= 2");
  if (rows.size() < static_cast<std::size_t>(folds))
    throw ValidationError("cross_validate: fewer rows than folds");

  std::array<std::vector<std::size_t>, 3> by_label;
  for (std::size_t i = 0; i < rows.size(); ++i)
    by_label[label_index(rows[i].label)].push_back(i);

  bool stratified = true;
  for (const auto& group : by_label)
    if (!group.empty() && group.size() < static_cast<std::size_t>(folds))
      stratified = false;

  std::vector<int> fold_of(rows.size(), 0);
  Rng rng = make_rng(seed, 7);
  if (stratified) {
    for (auto& group : by_label) {
      std::shuffle(group.begin(), group.end(), rng);
      for (std::size_t i = 0; i < group.size(); ++i)
        fold_of[group[i]] = static_cast<int>(i % folds);
    }
  } else {
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < order.size(); ++i)
      fold_of[order[i]] = static_cast<int>(i % folds);
  }

  ConfusionMatrix total{};
  for (int fold = 0; fold < folds; ++fold) {
    std::vector<MLRow> train;
    train.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (fold_of[i] != fold) train.push_back(rows[i]);
    const std::uint64_t fold_seed = split_seed(seed, 100 + fold);
    if (fold_transform) train = fold_transform(train, fold_seed);
    ClassifierPtr model = trainer(train, fold_seed);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (fold_of[i] != fold) continue;
      const Proneness predicted = model->predict(rows[i].bits);
      ++total[label_index(predicted)][label_index(rows[i].label)];
    }
  }

  EvalResult result = confusion_metrics(total);
  if (!stratified)
    result.notes.push_back(
        "unstratified folds: some class has fewer rows than folds");
  return result;
}

/// Cross-system protocol: each training dataset is downsampled without
/// replacement to the smallest dataset size, the samples are concatenated,
/// one model is trained, and the full test set is evaluated.
inline EvalResult cross_system(const std::vector<std::vector<MLRow>>& train_sets,
                               const std::vector<MLRow>& test_set,
                               std::uint64_t seed, const Trainer& trainer) {
  if (train_sets.empty())
    throw ValidationError("cross_system: empty training pool");
  std::size_t min_size = train_sets[0].size();
  for (const auto& s : train_sets) min_size = std::min(min_size, s.size());
  if (min_size == 0)
    throw ValidationError("cross_system: a training dataset is empty");

  std::vector<MLRow> pooled;
  pooled.reserve(min_size * train_sets.size());
  for (std::size_t s = 0; s < train_sets.size(); ++s) {
    std::vector<std::size_t> order(train_sets[s].size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng = make_rng(seed, 200 + s);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < min_size; ++i)
      pooled.push_back(train_sets[s][order[i]]);
  }

  ClassifierPtr model = trainer(pooled, split_seed(seed, 300));
  ConfusionMatrix total{};
  for (const auto& row : test_set) {
    const Proneness predicted = model->predict(row.bits);
    ++total[label_index(predicted)][label_index(row.label)];
  }
  return confusion_metrics(total);
}

// ---- dataset adapters ----------------------------------------------------------

enum class LabelKind { Issue, Change };

inline const char* to_string(LabelKind k) {
  return k == LabelKind::Issue ? "issue" : "change";
}

inline LabelKind label_kind_from_string(const std::string& s) {
  if (s == "issue") return LabelKind::Issue;
  if (s == "change") return LabelKind::Change;
  throw ValidationError("unknown label target: " + s +
                        " (expected issue or change)");
}

/// Projects labeled dataset rows onto (features, label) pairs for the
/// chosen prediction target.
inline std::vector<MLRow> to_ml_rows(const std::vector<DatasetRow>& rows,
                                     LabelKind kind) {
  std::vector<MLRow> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const auto& label =
        kind == LabelKind::Issue ? row.issue_label : row.change_label;
    if (!label)
      throw ValidationError("row " + row.version + "," + row.file +
                            " has no " + std::string(to_string(kind)) +
                            " label; run the labeling step first");
    out.push_back({pack_features(row.features), *label});
  }
  return out;
}

/// Applies double-Pareto labels for both targets in place.
inline void label_dataset(std::vector<DatasetRow>& rows) {
  if (rows.empty()) throw ValidationError("label_dataset: empty dataset");
  std::vector<int> issues, changes;
  issues.reserve(rows.size());
  changes.reserve(rows.size());
  for (const auto& row : rows) {
    issues.push_back(row.issue_count);
    changes.push_back(row.change_count);
  }
  const auto issue_labels = pareto_label(issues);
  const auto change_labels = pareto_label(changes);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].issue_label = issue_labels[i];
    rows[i].change_label = change_labels[i];
  }
}

/// SMOTE at the dataset level: synthetic rows copy the base row and replace
/// only the interpolated features, so the CSV schema is preserved.
inline std::vector<DatasetRow> smote_dataset(const std::vector<DatasetRow>& rows,
                                             LabelKind kind,
                                             const SmoteFactors& factors, int k,
                                             std::uint64_t seed) {
  const std::vector<MLRow> ml = to_ml_rows(rows, kind);
  std::vector<DatasetRow> out = rows;
  for (const auto& syn : smote_synthesize(ml, factors, k, seed)) {
    DatasetRow row = rows[syn.base_index];
    row.features = unpack_features(syn.bits);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace archsmell
