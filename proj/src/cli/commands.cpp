#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ncga/cli.hpp"
#include "ncga/error.hpp"

namespace ncga::cli {

namespace {

namespace fs = std::filesystem;

struct Loaded {
  Network net;
  std::uint32_t target;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

fs::path out_dir(const ExperimentConfig& cfg) {
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

Loaded load_network(const ExperimentConfig& cfg) {
  Network net = cfg.graph.empty()
                    ? generate_random_dag(cfg.nodes, cfg.links, cfg.receivers, cfg.rate, cfg.seed)
                    : parse_graph(read_file(cfg.graph), false).network;
  const std::uint32_t target = cfg.target ? cfg.target : net.target_rate();
  return {std::move(net), target};
}

FitnessCoefficients coefficients(const ExperimentConfig& cfg, std::uint32_t target) {
  FitnessCoefficients c;
  c.a = cfg.a;
  c.target_rate = target;
  return c;
}

std::string describe(const FitnessReport& r) {
  return std::to_string(r.resources.coding_nodes) + " " + std::to_string(r.resources.coding_links) +
         " min_rate " + std::to_string(r.min_rate);
}

// The GA result GANS runs with: the given file, or a fresh optimization.
CodingAssignment ga_assignment(const ExperimentConfig& cfg, const Loaded& loaded, std::ostream& out) {
  if (!cfg.assignment.empty()) return parse_assignment(read_file(cfg.assignment));
  const RunResult r = run_ga(loaded.net, cfg.ga, coefficients(cfg, loaded.target), cfg.seed);
  out << "optimized: " << describe(r.best_report) << "\n";
  write_file(out_dir(cfg) / "assignment.txt", serialize_assignment(r.best_assignment));
  return r.best_assignment;
}

SimConfig sim_config(const ExperimentConfig& cfg, const Network& net, std::size_t blocks, std::size_t coding_nodes) {
  SimConfig s;
  s.block_size_bytes = cfg.block_size;
  s.blocks_per_segment = cfg.segment_blocks;
  s.content_size_bytes = blocks * cfg.block_size;
  s.rsn_count = cfg.rsn_count ? *cfg.rsn_count : coding_nodes;
  s.deadline_rounds = cfg.deadline ? cfg.deadline : static_cast<std::uint32_t>(blocks + net.node_count());
  s.forward = cfg.forward;
  return s;
}

std::uint32_t horizon(const ExperimentConfig& cfg, const SimConfig& s) {
  return cfg.churn_horizon ? cfg.churn_horizon : s.deadline_rounds;
}

std::string grid_header() { return "file_blocks,dynamic_links," + metrics_csv_header() + "\n"; }

std::string grid_row(std::size_t blocks, std::size_t dyn, Strategy s, std::uint64_t seed, const SimMetrics& m) {
  return std::to_string(blocks) + "," + std::to_string(dyn) + "," + metrics_csv_row(s, seed, m) + "\n";
}

// ---------------------------------------------------------------------------

int cmd_gen(const ExperimentConfig& cfg, std::ostream& out) {
  const Network net = generate_random_dag(cfg.nodes, cfg.links, cfg.receivers, cfg.rate, cfg.seed);
  const fs::path path = out_dir(cfg) / "network.txt";
  write_file(path, serialize_graph(net));
  out << "wrote " << path.string() << " (" << net.node_count() << " nodes, " << net.links().size() << " links, "
      << merging_nodes(net).size() << " merging nodes)\n";
  return kOk;
}

int cmd_optimize(const ExperimentConfig& cfg, std::ostream& out) {
  const Loaded loaded = load_network(cfg);
  const RunResult r = run_ga(loaded.net, cfg.ga, coefficients(cfg, loaded.target), cfg.seed);
  const fs::path dir = out_dir(cfg);
  write_file(dir / "assignment.txt", serialize_assignment(r.best_assignment));
  write_file(dir / "ga_history.csv", history_csv(r));
  out << describe(r.best_report) << " generations " << r.generations_run << "\n";
  return r.best_report.feasible(loaded.target) ? kOk : kInfeasible;
}

int cmd_oracle(const ExperimentConfig& cfg, std::ostream& out) {
  const Loaded loaded = load_network(cfg);
  const OracleResult r = brute_force_min_coding(loaded.net, loaded.target);
  if (!r.feasible) {
    out << "infeasible\n";
    return kInfeasible;
  }
  out << r.optimum.coding_nodes << " " << r.optimum.coding_links << "\n" << serialize_assignment(r.witness);
  return kOk;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
  const Loaded loaded = load_network(cfg);
  const Strategy strategy = parse_strategy(cfg.strategy);
  std::optional<CodingAssignment> ga;
  if (strategy == Strategy::GANS || !cfg.rsn_count) ga = ga_assignment(cfg, loaded, out);
  const std::size_t ga_nodes = ga ? count_resources(loaded.net, *ga).coding_nodes : 0;

  std::ofstream csv(out_dir(cfg) / "simulate.csv");
  if (!csv) throw IoError("cannot write simulate.csv");
  csv << grid_header();
  for (std::size_t blocks : cfg.file_sizes) {
    for (std::size_t dyn : cfg.dynamic_links) {
      for (std::uint64_t seed : cfg.seeds) {
        SimConfig s = sim_config(cfg, loaded.net, blocks, ga_nodes);
        s.strategy = strategy;
        s.seed = seed;
        if (dyn) s.churn = random_link_churn(loaded.net, dyn, horizon(cfg, s), seed);
        const EffectiveCoding coding =
            select_coding_nodes(loaded.net, strategy, s.rsn_count, ga ? &*ga : nullptr, seed);
        csv << grid_row(blocks, dyn, strategy, seed, run_simulation(loaded.net, coding.assignment, s)) << std::flush;
      }
    }
  }
  out << "wrote " << (fs::path(cfg.out) / "simulate.csv").string() << "\n";
  return kOk;
}

double mean_or_nan(const MetricSummary& m) { return m.n ? m.mean : std::numeric_limits<double>::quiet_NaN(); }

int cmd_compare(const ExperimentConfig& cfg, std::ostream& out) {
  const Loaded loaded = load_network(cfg);
  const CodingAssignment ga = ga_assignment(cfg, loaded, out);
  const std::size_t ga_nodes = count_resources(loaded.net, ga).coding_nodes;
  const fs::path dir = out_dir(cfg);
  const std::vector<Strategy> strategies{Strategy::GANS, Strategy::RSN, Strategy::CAN, Strategy::NONE};

  std::ofstream csv(dir / "compare.csv");
  if (!csv) throw IoError("cannot write compare.csv");
  csv << grid_header();
  std::string summary =
      "file_blocks,dynamic_links,strategy,redundancy_mean,redundancy_sd,avg_time_mean,avg_time_sd,max_time_mean,"
      "max_time_sd,throughput_mean,throughput_sd,failure_mean,failure_sd\n";

  // [file size][dynamic links] -> per-strategy summaries
  std::vector<std::vector<std::vector<StrategySummary>>> grid(cfg.file_sizes.size());
  for (std::size_t i = 0; i < cfg.file_sizes.size(); ++i) {
    const std::size_t blocks = cfg.file_sizes[i];
    for (std::size_t dyn : cfg.dynamic_links) {
      const SimConfig s = sim_config(cfg, loaded.net, blocks, ga_nodes);
      CompareOptions opts;
      opts.dynamic_links = dyn;
      opts.churn_horizon = horizon(cfg, s);
      opts.strategies = strategies;
      const Comparison c = compare_strategies(loaded.net, s, &ga, cfg.seeds, opts);
      for (const ComparisonRow& row : c.rows) csv << grid_row(blocks, dyn, row.strategy, row.seed, row.metrics);
      csv << std::flush;
      for (const StrategySummary& st : c.summary) {
        std::ostringstream line;
        line.precision(10);
        line << blocks << ',' << dyn << ',' << to_string(st.strategy);
        for (const MetricSummary* m : {&st.redundancy, &st.avg_time, &st.max_time, &st.throughput, &st.failure_rate}) {
          line << ',';
          if (m->n) line << m->mean;
          line << ',';
          if (m->n) line << m->stddev;
        }
        summary += line.str() + "\n";
      }
      grid[i].push_back(c.summary);
    }
  }
  write_file(dir / "summary.csv", summary);

  auto by_size = [&](ChartKind kind, auto metric) {
    ChartSpec chart{kind, {}, {}};
    for (std::size_t f : cfg.file_sizes) chart.x.push_back(static_cast<double>(f));
    for (std::size_t k = 0; k < strategies.size(); ++k) {
      std::vector<double> ys;
      for (std::size_t i = 0; i < cfg.file_sizes.size(); ++i) ys.push_back(metric(grid[i][0][k]));
      chart.series.emplace_back(to_string(strategies[k]), ys);
    }
    return chart;
  };
  std::vector<ChartSpec> charts;
  charts.push_back(by_size(ChartKind::download_time_vs_filesize,
                           [](const StrategySummary& st) { return mean_or_nan(st.avg_time); }));
  charts.push_back(by_size(ChartKind::redundancy_vs_filesize,
                           [](const StrategySummary& st) { return mean_or_nan(st.redundancy); }));

  ChartSpec failure{ChartKind::failure_vs_dynamic_links, {}, {}};
  for (std::size_t d : cfg.dynamic_links) failure.x.push_back(static_cast<double>(d));
  for (std::size_t k = 0; k < strategies.size(); ++k) {
    std::vector<double> ys;
    for (std::size_t j = 0; j < cfg.dynamic_links.size(); ++j) ys.push_back(mean_or_nan(grid[0][j][k].failure_rate));
    failure.series.emplace_back(to_string(strategies[k]), ys);
  }
  charts.push_back(failure);

  // Throughput over time: first seed, first file size, first churn setting.
  ChartSpec throughput{ChartKind::throughput_vs_time, {}, {}};
  std::vector<std::vector<double>> decoded;
  std::size_t rounds = 0;
  for (Strategy strategy : strategies) {
    SimConfig s = sim_config(cfg, loaded.net, cfg.file_sizes[0], ga_nodes);
    s.strategy = strategy;
    s.seed = cfg.seeds[0];
    if (cfg.dynamic_links[0]) s.churn = random_link_churn(loaded.net, cfg.dynamic_links[0], horizon(cfg, s), s.seed);
    const EffectiveCoding coding = select_coding_nodes(loaded.net, strategy, s.rsn_count, &ga, s.seed);
    decoded.push_back(simulate(loaded.net, coding.assignment, s).decoded_bytes_by_round);
    rounds = std::max(rounds, decoded.back().size());
  }
  for (std::size_t t = 1; t <= rounds; ++t) throughput.x.push_back(static_cast<double>(t));
  for (std::size_t k = 0; k < strategies.size(); ++k) {
    std::vector<double> ys;
    for (std::size_t t = 1; t <= rounds; ++t) {
      const auto& d = decoded[k];
      const double bytes = d.empty() ? 0 : d[std::min(t, d.size()) - 1];
      ys.push_back(bytes / static_cast<double>(t));
    }
    throughput.series.emplace_back(to_string(strategies[k]), ys);
  }
  charts.push_back(throughput);

  for (const ChartSpec& chart : charts) write_file(dir / (to_string(chart.kind) + ".svg"), render_svg(chart));
  out << "wrote " << (dir / "compare.csv").string() << ", summary.csv and " << charts.size() << " charts\n";
  return kOk;
}

// Finds --config before CLI11 runs so flags can override the file.
std::optional<std::string> config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return std::nullopt;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Network coding resource minimization: generation, GA optimization, P2P simulation"};
  app.require_subcommand(1);
  std::string config_file;
  std::map<std::string, std::string> flags;
  for (const char* name : {"gen", "optimize", "simulate", "compare", "oracle"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_file, "key = value file; flags override it");
    for (const std::string& key : config_keys()) sub->add_option("--" + key, flags[key]);
  }
  app.get_subcommand("gen")->description("Generate a random acyclic network into <out>/network.txt");
  app.get_subcommand("optimize")->description("Run the GA; writes assignment.txt and ga_history.csv");
  app.get_subcommand("simulate")->description("Simulate one strategy over the seed and file-size grid");
  app.get_subcommand("compare")->description("Compare GANS, RSN, CAN and NONE; writes CSVs and SVG charts");
  app.get_subcommand("oracle")->description("Exhaustive minimum (N_n, N_l) for small networks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    ExperimentConfig cfg;
    if (const auto path = config_path(argc, argv)) cfg = load_config(*path);
    if (const char* env = std::getenv("NCGA_OUT_DIR"); env && *env) cfg.out = env;
    CLI::App* sub = app.get_subcommands().front();
    for (const std::string& key : config_keys()) {
      if (sub->count("--" + key)) apply_setting(cfg, key, flags[key]);
    }
    cfg.validate();

    const std::string name = sub->get_name();
    if (name == "gen") return cmd_gen(cfg, out);
    if (name == "optimize") return cmd_optimize(cfg, out);
    if (name == "simulate") return cmd_simulate(cfg, out);
    if (name == "compare") return cmd_compare(cfg, out);
    return cmd_oracle(cfg, out);
  } catch (const TooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kTooLarge;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace ncga::cli
