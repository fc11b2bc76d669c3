// Command-line front end: one subcommand per library operation.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gwm/gwm.hpp"

using namespace gwm;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void save_graph(const Graph& g, const std::string& path) {
  auto out = open_out(path);
  write_edge_list(g, out);
}

std::vector<WatermarkId> load_ids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open id file '" + path + "'");
  std::vector<WatermarkId> ids;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) ids.push_back(BitVector::from_string(line));
  }
  if (ids.empty()) throw WatermarkError("id file '" + path + "' holds no ids");
  return ids;
}

MarkKey load_key(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open key file '" + path + "'");
  return read_key(in);
}

// Model flags shared by generate and the threshold/resampling options.
struct ModelFlags {
  std::string model;
  std::size_t n = 0;
  double m = 0, w = 0, gamma = 0, p = 0;

  void add(CLI::App* app, bool with_n) {
    app->add_option("--model", model, "random graph model")->check(CLI::IsMember({"er", "plg"}));
    if (with_n) app->add_option("--n", n, "number of vertices");
    app->add_option("--m", m, "maximum expected degree (plg)");
    app->add_option("--w", w, "average expected degree (plg)");
    app->add_option("--gamma", gamma, "power-law exponent (plg)");
    app->add_option("--p", p, "edge probability (er)");
  }

  ModelSpec spec(std::size_t vertices, std::uint64_t seed) const {
    if (model.empty()) throw UsageError("--model is required");
    KeyValues kv;
    kv.set("model", model);
    kv.set("n", vertices);
    kv.set("seed", seed);
    if (model == "er") {
      if (p <= 0.0) throw UsageError("--p is required for the er model");
      kv.set("p", p);
    } else {
      if (m <= 0.0 || w <= 0.0 || gamma <= 0.0)
        throw UsageError("--m, --w and --gamma are required for the plg model");
      kv.set("m", m);
      kv.set("w", w);
      kv.set("gamma", gamma);
    }
    return ModelSpec::from_key_values(kv);
  }
};

// Labeling flags: explicit class sizes, or analytic thresholds from a model.
struct LabelFlags {
  std::optional<std::size_t> high;
  std::string medium = "all";
  std::string mode = "relaxed";
  double epsilon = 0.1;
  ModelFlags model;

  void add(CLI::App* app) {
    app->add_option("--high", high, "number of high-degree vertices");
    app->add_option("--medium", medium, "number of medium-degree vertices, 'all' or 'auto'");
    app->add_option("--mode", mode, "labeling mode")->check(CLI::IsMember({"strict", "relaxed"}));
    app->add_option("--epsilon", epsilon, "epsilon of the G(n,p) thresholds");
    model.add(app, false);
  }

  LabelMode label_mode() const { return mode == "strict" ? LabelMode::strict : LabelMode::relaxed; }

  SeparationThresholds thresholds(const Graph& g) const {
    SeparationThresholds t;
    if (high) {
      t = explicit_thresholds(*high, std::nullopt);
    } else if (!model.model.empty()) {
      const auto spec = model.spec(g.num_vertices(), 0);
      if (spec.is_power_law())
        t = plg_thresholds(std::get<PowerLawParams>(spec.params));
      else
        t = er_thresholds(g.num_vertices(), std::get<ErdosRenyiParams>(spec.params).p, epsilon);
    } else {
      throw UsageError("either --high or --model is required to pick the labeled vertices");
    }
    if (medium == "auto") {
      t.medium = max_collision_free_medium(g, t.high, label_mode());
    } else if (medium != "all") {
      std::size_t pos = 0;
      std::size_t value = 0;
      try {
        value = std::stoul(medium, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != medium.size())
        throw UsageError("--medium: expected a count, 'all' or 'auto', got '" + medium + "'");
      t.medium = value;
    }
    return t;
  }
};

void print(const KeyValues& kv) { std::cout << kv.to_string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph watermarking toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "sample a random graph");
  ModelFlags gen_model;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen_model.add(gen, true);
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("-o,--output", gen_out, "edge-list output")->required();

  // analyze
  auto* ana = app.add_subcommand("analyze", "labeling and separation report for a graph");
  std::string ana_in;
  LabelFlags ana_label;
  double ana_d = 3.0, ana_dprime = 3.0;
  ana->add_option("-i,--input", ana_in, "edge-list input")->required();
  ana_label.add(ana);
  ana->add_option("--d", ana_d, "required degree gap of high vertices");
  ana->add_option("--d-prime", ana_dprime, "required neighbourhood distance of medium vertices");

  // keygen
  auto* kg = app.add_subcommand("keygen", "draw a marking key");
  std::size_t kg_ell = 0, kg_n = 0, kg_x = 0, kg_t = 1;
  std::uint64_t kg_seed = 0;
  std::string kg_out;
  kg->add_option("--ell", kg_ell, "number of key pairs")->required();
  kg->add_option("--n", kg_n, "vertex count of the graph")->required();
  kg->add_option("--x", kg_x, "number of labeled vertices")->required();
  kg->add_option("--t", kg_t, "maximum pairs per labeled vertex");
  kg->add_option("--seed", kg_seed, "random seed");
  kg->add_option("-o,--output", kg_out, "key output")->required();

  // mark
  auto* mk = app.add_subcommand("mark", "embed a fresh id into a copy of a graph");
  std::string mk_in, mk_key, mk_out, mk_id_out, mk_resample = "0.5";
  std::uint64_t mk_seed = 0;
  LabelFlags mk_label;
  mk->add_option("-i,--input", mk_in, "edge-list input")->required();
  mk->add_option("--key", mk_key, "key file")->required();
  mk_label.add(mk);
  mk->add_option("--resample", mk_resample, "bit probability, or 'model' for the model probability");
  mk->add_option("--seed", mk_seed, "random seed");
  mk->add_option("-o,--output", mk_out, "marked edge-list output")->required();
  mk->add_option("--id-out", mk_id_out, "file receiving the embedded id")->required();

  // identify
  auto* idf = app.add_subcommand("identify", "find which id a suspect copy carries");
  std::string id_orig, id_suspect, id_key, id_ids;
  std::optional<std::size_t> id_max;
  LabelFlags id_label;
  idf->add_option("-i,--input", id_orig, "original edge list")->required();
  idf->add_option("--suspect", id_suspect, "suspect edge list")->required();
  idf->add_option("--key", id_key, "key file")->required();
  idf->add_option("--ids", id_ids, "candidate ids, one per line")->required();
  idf->add_option("--max-distance", id_max, "report no match beyond this Hamming distance");
  id_label.add(idf);

  // attack
  auto* atk = app.add_subcommand("attack", "perturb a graph");
  std::string atk_in, atk_out, atk_kind = "uniform", atk_strategy = "uniform";
  double atk_prob = 0.0;
  std::optional<std::uint64_t> atk_pairs;
  std::optional<double> atk_fraction;
  std::size_t atk_total = 0, atk_per = 0;
  std::uint64_t atk_seed = 0;
  atk->add_option("-i,--input", atk_in, "edge-list input")->required();
  atk->add_option("--attack", atk_kind, "attack kind")
      ->check(CLI::IsMember({"random", "uniform", "capped"}));
  atk->add_option("--prob", atk_prob, "per-pair flip probability (random)");
  atk->add_option("--pairs", atk_pairs, "number of pairs to flip (uniform)");
  atk->add_option("--fraction", atk_fraction, "fraction of potential edges (uniform, capped)");
  atk->add_option("--max-total", atk_total, "total flip budget (capped)");
  atk->add_option("--max-per-vertex", atk_per, "per-vertex flip budget (capped)");
  atk->add_option("--strategy", atk_strategy, "proposal strategy (capped)")
      ->check(CLI::IsMember({"uniform", "high-degree-first"}));
  atk->add_option("--seed", atk_seed, "random seed");
  atk->add_option("-o,--output", atk_out, "edge-list output")->required();

  // dk2
  auto* dk = app.add_subcommand("dk2", "joint degree series and deviation");
  std::string dk_in, dk_cmp, dk_out;
  dk->add_option("-i,--input", dk_in, "edge-list input")->required();
  dk->add_option("--compare", dk_cmp, "second edge list; prints the deviation");
  dk->add_option("-o,--output", dk_out, "series dump output");

  // fit
  auto* ft = app.add_subcommand("fit", "power-law fit of a degree sequence");
  std::string ft_in, ft_samples, ft_model = "discrete";
  std::size_t ft_resamples = 1000;
  std::uint64_t ft_seed = 0;
  auto* ft_in_opt = ft->add_option("-i,--input", ft_in, "edge-list input (fits its degrees)");
  auto* ft_samples_opt = ft->add_option("--samples", ft_samples, "whitespace-separated samples");
  ft_in_opt->excludes(ft_samples_opt);
  ft->add_option("--resamples", ft_resamples, "bootstrap resamples (0 skips the p-value)");
  ft->add_option("--tail", ft_model, "tail model")->check(CLI::IsMember({"discrete", "continuous"}));
  ft->add_option("--seed", ft_seed, "random seed");

  // experiment
  auto* ex = app.add_subcommand("experiment", "run the watermarking security experiment");
  std::string ex_cfg, ex_out, ex_plot;
  std::optional<std::uint64_t> ex_seed;
  std::optional<std::size_t> ex_threads;
  ex->add_option("--config", ex_cfg, "key=value configuration file")->required();
  ex->add_option("-o,--output", ex_out, "CSV output")->required();
  ex->add_option("--plot-data", ex_plot, "also write gnuplot columns to this file");
  ex->add_option("--seed", ex_seed, "override the configured master seed");
  ex->add_option("--threads", ex_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      if (gen_model.n == 0) throw UsageError("--n is required");
      const auto spec = gen_model.spec(gen_model.n, gen_seed);
      if (spec.is_power_law())
        for (const auto& w : std::get<PowerLawParams>(spec.params).warnings)
          std::cerr << "warning: " << w << '\n';
      const auto g = spec.sample();
      save_graph(g, gen_out);
      std::cout << "vertices=" << g.num_vertices() << " edges=" << g.num_edges() << '\n';
    } else if (ana->parsed()) {
      const auto g = load_graph(ana_in);
      const auto t = ana_label.thresholds(g);
      KeyValues kv = t.to_key_values();
      kv.set("vertices", g.num_vertices());
      kv.set("edges", g.num_edges());
      kv.set("unique_degree_prefix", unique_degree_prefix(g));
      kv.set("collision_free_medium", max_collision_free_medium(g, t.high, ana_label.label_mode()));
      auto lr = label(g, t, ana_label.label_mode());
      kv.set("labeled", lr ? lr.labels->size() : 0);
      kv.set("label_failure", std::string(to_string(lr.failure)));
      const auto report = check_separation(g, t, ana_d, ana_dprime).to_key_values();
      for (const auto& [k, v] : report.entries()) kv.set(k, v);
      print(kv);
      for (const auto& w : t.warnings) std::cerr << "warning: " << w << '\n';
    } else if (kg->parsed()) {
      const auto key = keygen(kg_ell, kg_n, kg_x, kg_t, kg_seed);
      auto out = open_out(kg_out);
      write_key(key, out);
    } else if (mk->parsed()) {
      const auto g = load_graph(mk_in);
      const auto key = load_key(mk_key);
      const auto t = mk_label.thresholds(g);
      ResampleSource source = ResampleSource::constant(0.5);
      if (mk_resample == "model") {
        const auto spec = mk_label.model.spec(g.num_vertices(), 0);
        source = spec.is_power_law()
                     ? ResampleSource::power_law(std::get<PowerLawParams>(spec.params))
                     : ResampleSource::erdos_renyi(std::get<ErdosRenyiParams>(spec.params));
      } else {
        std::size_t pos = 0;
        double p = -1.0;
        try {
          p = std::stod(mk_resample, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos == 0 || pos != mk_resample.size())
          throw UsageError("--resample: expected a probability or 'model', got '" + mk_resample + "'");
        source = ResampleSource::constant(p);
      }
      const auto copy = mark(key, g, t, mk_label.label_mode(), source, mk_seed);
      save_graph(copy.graph, mk_out);
      auto out = open_out(mk_id_out);
      write_id(copy.id, out);
      std::cout << "id=" << copy.id.to_string()
                << " flips=" << identity_distances(g, copy.graph).edit << '\n';
    } else if (idf->parsed()) {
      const auto g = load_graph(id_orig);
      const auto h = load_graph(id_suspect);
      const auto key = load_key(id_key);
      const auto ids = load_ids(id_ids);
      const auto t = id_label.thresholds(g);
      IdentifyOptions opts;
      opts.max_distance = id_max;
      const auto r = identify(key, g, ids, h, t, id_label.label_mode(), opts);
      if (r.failed()) {
        std::cout << "index=none failure=\"" << r.failure << "\"\n";
      } else {
        std::cout << "index=" << *r.index << " id=" << ids[*r.index].to_string()
                  << " distance=" << r.distance << '\n';
      }
    } else if (atk->parsed()) {
      const auto g = load_graph(atk_in);
      Graph out_graph;
      if (atk_kind == "random") {
        out_graph = random_flip_attack(g, atk_prob, atk_seed);
      } else if (atk_kind == "uniform") {
        if (!atk_pairs && !atk_fraction) throw UsageError("--pairs or --fraction is required");
        const auto k = atk_pairs ? *atk_pairs : pairs_for_fraction(g.num_vertices(), *atk_fraction);
        out_graph = uniform_pair_attack(g, k, atk_seed);
      } else {
        AttackBudget b{atk_total, atk_per, atk_fraction};
        auto r = budget_capped_attack(g, b, make_strategy(atk_strategy, b, g.num_vertices()), atk_seed);
        out_graph = std::move(r.graph);
      }
      save_graph(out_graph, atk_out);
      const auto d = identity_distances(g, out_graph);
      std::cout << "flips=" << d.edit << " max_vertex_flips=" << d.vertex << '\n';
    } else if (dk->parsed()) {
      const auto s = dk2_series(load_graph(dk_in));
      if (!dk_out.empty()) {
        auto out = open_out(dk_out);
        write_dk2(s, out);
      }
      if (!dk_cmp.empty()) {
        std::cout << std::setprecision(10)
                  << "deviation=" << dk2_deviation(s, dk2_series(load_graph(dk_cmp))) << '\n';
      } else if (dk_out.empty()) {
        write_dk2(s, std::cout);
      }
    } else if (ft->parsed()) {
      std::vector<double> samples;
      if (!ft_in.empty()) {
        for (auto d : load_graph(ft_in).degrees())
          if (d > 0) samples.push_back(static_cast<double>(d));
      } else if (!ft_samples.empty()) {
        std::ifstream in(ft_samples);
        if (!in) throw std::runtime_error("cannot open samples file '" + ft_samples + "'");
        double x = 0.0;
        while (in >> x) samples.push_back(x);
        if (!in.eof()) throw std::runtime_error("samples file: malformed number");
      } else {
        throw UsageError("--input or --samples is required");
      }
      const auto model = ft_model == "discrete" ? TailModel::discrete : TailModel::continuous;
      auto fit = select_xmin(samples, model);
      if (ft_resamples > 0) fit.p_value = bootstrap_pvalue(samples, fit, ft_resamples, ft_seed);
      print(fit.to_key_values());
    } else if (ex->parsed()) {
      std::ifstream in(ex_cfg);
      if (!in) throw std::runtime_error("cannot open config '" + ex_cfg + "'");
      auto kv = KeyValues::parse(in);
      if (ex_seed) kv.set("seed", *ex_seed);
      if (ex_threads) kv.set("threads", *ex_threads);
      const auto cfg = ExperimentConfig::from_key_values(kv);
      const auto result = run_experiment(cfg);
      auto out = open_out(ex_out);
      write_csv(result, out);
      if (!ex_plot.empty()) {
        auto plot = open_out(ex_plot);
        write_plot_data(result, plot);
      }
      for (const auto& p : result.points)
        std::cout << "strength=" << p.strength << " success_rate=" << p.success_rate << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
