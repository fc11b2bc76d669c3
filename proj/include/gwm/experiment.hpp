#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gwm/adversary.hpp"
#include "gwm/distance.hpp"
#include "gwm/dk2.hpp"
#include "gwm/edge_list_io.hpp"
#include "gwm/key_values.hpp"
#include "gwm/parallel.hpp"
#include "gwm/random_models.hpp"
#include "gwm/separation.hpp"
#include "gwm/watermark.hpp"

namespace gwm {

/// Configuration of the watermarking security experiment
/// (keygen, draw G, mark k copies, leak one, attack, identify).
struct ExperimentConfig {
  std::optional<ModelSpec> model;   // graph drawn per trial
  std::optional<Graph> fixed_graph; // or a given network
  bool resample_graph = true;       // false: one graph for every trial

  std::optional<std::size_t> high;  // empty: analytic thresholds of the model
  std::optional<std::size_t> medium;
  bool medium_auto = false;         // largest collision-free medium set
  double er_epsilon = 0.1;
  LabelMode mode = LabelMode::relaxed;

  std::size_t ell = 0;  // 0: maximum possible, floor(x t / 2)
  std::size_t t = 1;
  bool model_resampling = false;  // false: constant probability below
  double resample_p = 0.5;
  std::size_t copies = 10;

  AttackSpec attack;
  std::vector<double> sweep;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  std::size_t threads = default_threads();

  void validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (sweep.empty()) throw ConfigError("attack sweep must not be empty");
    if (copies < 1) throw ConfigError("copies must be >= 1");
    if (!model && !fixed_graph) throw ConfigError("experiment needs a model or an input graph");
  }

  static ExperimentConfig from_key_values(const KeyValues& kv) {
    ExperimentConfig c;
    if (kv.contains("input")) {
      std::ifstream in(kv.str("input"));
      if (!in) throw ConfigError("cannot open input graph '" + kv.str("input") + "'");
      c.fixed_graph = read_edge_list(in);
      c.resample_graph = false;
    } else {
      c.model = ModelSpec::from_key_values(kv);
      c.resample_graph = kv.boolean_or("resample_graph", true);
    }
    if (kv.contains("high")) c.high = kv.integer("high");
    if (kv.contains("medium")) {
      const auto m = kv.str("medium");
      if (m == "auto")
        c.medium_auto = true;
      else if (m != "all")
        c.medium = kv.integer("medium");
    }
    c.er_epsilon = kv.real_or("epsilon", c.er_epsilon);
    const auto mode = kv.str_or("mode", "relaxed");
    if (mode == "strict")
      c.mode = LabelMode::strict;
    else if (mode == "relaxed")
      c.mode = LabelMode::relaxed;
    else
      throw ConfigError("mode must be strict or relaxed");
    c.ell = kv.integer_or("ell", 0);
    c.t = kv.integer_or("t", 1);
    const auto resample = kv.str_or("resample", "0.5");
    if (resample == "model") {
      c.model_resampling = true;
    } else {
      c.resample_p = kv.real_or("resample", 0.5);
    }
    c.copies = kv.integer_or("copies", 10);
    KeyValues attack = kv;
    if (!attack.contains("attack")) attack.set("attack", std::string("uniform"));
    if (attack.str("attack") == "uniform" && !attack.contains("fraction") && !attack.contains("pairs"))
      attack.set("fraction", 0.0);
    c.attack = AttackSpec::from_key_values(attack);
    c.sweep = kv.reals("sweep");
    c.trials = kv.integer_or("trials", 10);
    c.seed = kv.integer_or("seed", 0);
    c.threads = kv.integer_or("threads", default_threads());
    c.validate();
    return c;
  }
};

enum class TrialOutcome { correct, wrong, bottom };

struct TrialRecord {
  TrialOutcome outcome = TrialOutcome::bottom;
  std::string failure;
  double dk2_deviation = 0.0;          // original vs attacked
  double marking_dk2_deviation = 0.0;  // original vs leaked copy
  std::size_t marking_flips = 0;
  IdentityDistances attack_distances;  // leaked copy vs attacked
  std::size_t id_distance = 0;
};

struct SweepPoint {
  double strength = 0.0;
  std::size_t trials = 0;
  std::size_t correct = 0;
  std::size_t wrong = 0;
  std::size_t bottom = 0;
  double success_rate = 0.0;
  double dk2_deviation = 0.0;
  double marking_dk2_deviation = 0.0;
  double marking_flips = 0.0;
  double edit_distance = 0.0;
  double vertex_distance = 0.0;
  std::vector<TrialRecord> records;
};

struct ExperimentResult {
  std::vector<SweepPoint> points;
};

namespace detail {

inline SeparationThresholds experiment_thresholds(const ExperimentConfig& c, const Graph& g) {
  SeparationThresholds t;
  if (c.high) {
    t = explicit_thresholds(*c.high, c.medium);
  } else if (c.model && !c.model->is_power_law()) {
    const auto& er = std::get<ErdosRenyiParams>(c.model->params);
    t = er_thresholds(er.n, er.p, c.er_epsilon);
  } else if (c.model) {
    t = plg_thresholds(std::get<PowerLawParams>(c.model->params));
  } else {
    throw ConfigError("an input graph needs an explicit high= count");
  }
  if (c.medium_auto) t.medium = max_collision_free_medium(g, t.high, c.mode);
  return t;
}

inline ResampleSource experiment_resampling(const ExperimentConfig& c) {
  if (!c.model_resampling) return ResampleSource::constant(c.resample_p);
  if (!c.model) throw ConfigError("model resampling needs a generative model");
  if (c.model->is_power_law())
    return ResampleSource::power_law(std::get<PowerLawParams>(c.model->params));
  return ResampleSource::erdos_renyi(std::get<ErdosRenyiParams>(c.model->params));
}

}  // namespace detail

/// One run of the security experiment at a given attack strength.
inline TrialRecord run_trial(const ExperimentConfig& c, const Graph* shared_graph, double strength,
                             std::uint64_t trial_seed) {
  TrialRecord rec;
  Graph sampled;
  const Graph* g = shared_graph;
  if (!g) {
    sampled = c.model->sample(derive_seed(trial_seed, {1}));
    g = &sampled;
  }
  const auto thresholds = detail::experiment_thresholds(c, *g);
  auto lr = label(*g, thresholds, c.mode);
  if (!lr) {
    rec.failure = std::string("labeling failed: ") + to_string(lr.failure);
    return rec;
  }
  const LabelSet& labels = *lr.labels;
  const std::size_t x = labels.size();
  const std::size_t ell = c.ell ? c.ell : x * c.t / 2;
  MarkKey key;
  try {
    key = keygen(ell, g->num_vertices(), x, c.t, derive_seed(trial_seed, {2}));
  } catch (const InfeasibleKeyError& e) {
    rec.failure = e.what();
    return rec;
  }
  const auto source = detail::experiment_resampling(c);
  std::vector<MarkedCopy> copies;
  std::vector<WatermarkId> ids;
  copies.reserve(c.copies);
  for (std::size_t i = 0; i < c.copies; ++i) {
    copies.push_back(mark(key, *g, labels, source, derive_seed(trial_seed, {3, i})));
    ids.push_back(copies.back().id);
  }
  Rng pick(derive_seed(trial_seed, {4}));
  const std::size_t leaked = pick.below(c.copies);
  const Graph& leaked_graph = copies[leaked].graph;
  const Graph attacked = c.attack.at_strength(strength).apply(leaked_graph, derive_seed(trial_seed, {5}));

  const auto original_dk2 = dk2_series(*g);
  rec.dk2_deviation = dk2_deviation(original_dk2, dk2_series(attacked));
  rec.marking_dk2_deviation = dk2_deviation(original_dk2, dk2_series(leaked_graph));
  rec.marking_flips = identity_distances(*g, leaked_graph).edit;
  rec.attack_distances = identity_distances(leaked_graph, attacked);

  auto res = identify(key, labels, ids, attacked, thresholds, c.mode, g->num_vertices());
  if (res.failed()) {
    rec.outcome = TrialOutcome::bottom;
    rec.failure = res.failure;
  } else {
    rec.outcome = *res.index == leaked ? TrialOutcome::correct : TrialOutcome::wrong;
    rec.id_distance = res.distance;
  }
  return rec;
}

/// Runs every (sweep point, trial) pair. Trial seeds derive from
/// (master seed, sweep index, trial index), so results do not depend on threads.
inline ExperimentResult run_experiment(const ExperimentConfig& c) {
  c.validate();
  std::optional<Graph> shared;
  if (c.fixed_graph)
    shared = *c.fixed_graph;
  else if (!c.resample_graph)
    shared = c.model->sample(derive_seed(c.seed, {0xfeed}));

  const std::size_t points = c.sweep.size();
  std::vector<TrialRecord> records(points * c.trials);
  parallel_for(
      records.size(),
      [&](std::size_t idx) {
        const std::size_t s = idx / c.trials;
        const std::size_t trial = idx % c.trials;
        records[idx] = run_trial(c, shared ? &*shared : nullptr, c.sweep[s],
                                 derive_seed(c.seed, {s, trial}));
      },
      c.threads);

  ExperimentResult result;
  for (std::size_t s = 0; s < points; ++s) {
    SweepPoint p;
    p.strength = c.sweep[s];
    p.trials = c.trials;
    for (std::size_t trial = 0; trial < c.trials; ++trial) {
      const auto& r = records[s * c.trials + trial];
      switch (r.outcome) {
        case TrialOutcome::correct: ++p.correct; break;
        case TrialOutcome::wrong: ++p.wrong; break;
        case TrialOutcome::bottom: ++p.bottom; break;
      }
      p.dk2_deviation += r.dk2_deviation;
      p.marking_dk2_deviation += r.marking_dk2_deviation;
      p.marking_flips += static_cast<double>(r.marking_flips);
      p.edit_distance += static_cast<double>(r.attack_distances.edit);
      p.vertex_distance += static_cast<double>(r.attack_distances.vertex);
      p.records.push_back(r);
    }
    const double k = static_cast<double>(c.trials);
    p.success_rate = static_cast<double>(p.correct) / k;
    p.dk2_deviation /= k;
    p.marking_dk2_deviation /= k;
    p.marking_flips /= k;
    p.edit_distance /= k;
    p.vertex_distance /= k;
    result.points.push_back(std::move(p));
  }
  return result;
}

inline void write_csv(const ExperimentResult& r, std::ostream& out) {
  out << "fraction,success_rate,dk2_deviation,edit_distance,vertex_distance,correct,wrong,bottom,"
         "trials,marking_dk2_deviation,marking_flips\n";
  out << std::setprecision(10);
  for (const auto& p : r.points)
    out << p.strength << ',' << p.success_rate << ',' << p.dk2_deviation << ',' << p.edit_distance
        << ',' << p.vertex_distance << ',' << p.correct << ',' << p.wrong << ',' << p.bottom << ','
        << p.trials << ',' << p.marking_dk2_deviation << ',' << p.marking_flips << '\n';
}

/// Whitespace-separated columns for gnuplot.
inline void write_plot_data(const ExperimentResult& r, std::ostream& out) {
  out << "# fraction success_rate dk2_deviation\n" << std::setprecision(10);
  for (const auto& p : r.points)
    out << p.strength << ' ' << p.success_rate << ' ' << p.dk2_deviation << '\n';
}

}  // namespace gwm
