#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "ncga/cli.hpp"
#include "ncga/error.hpp"

namespace ncga::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class T>
std::string fmt(T v) {
  return std::to_string(v);
}

std::string fmt(bool v) { return v ? "true" : "false"; }

template <class T>
void read(const std::string& key, const std::string& text, T& out) {
  if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1") {
      out = true;
    } else if (text == "false" || text == "0") {
      out = false;
    } else {
      throw ConfigError(key + ": expected true or false, got '" + text + "'");
    }
  } else {
    T v{};
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
      throw ConfigError(key + ": bad value '" + text + "'");
    }
    out = v;
  }
}

template <class T>
std::string fmt_list(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + fmt(xs[i]);
  return s;
}

template <class T>
void read_list(const std::string& key, const std::string& text, std::vector<T>& out) {
  out.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    T v{};
    read(key, trim(item), v);
    out.push_back(v);
  }
}

struct Field {
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <class T>
Field scalar(const char* key, T ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return fmt(c.*member); },
          [key, member](ExperimentConfig& c, const std::string& v) { read(key, v, c.*member); }};
}

template <class T>
Field ga_field(const char* key, T GaParams::*member) {
  return {key, [member](const ExperimentConfig& c) { return fmt(c.ga.*member); },
          [key, member](ExperimentConfig& c, const std::string& v) { read(key, v, c.ga.*member); }};
}

template <class T>
Field list(const char* key, std::vector<T> ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return fmt_list(c.*member); },
          [key, member](ExperimentConfig& c, const std::string& v) { read_list(key, v, c.*member); }};
}

Field text(const char* key, std::string ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return c.*member; },
          [member](ExperimentConfig& c, const std::string& v) { c.*member = v; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      text("graph", &ExperimentConfig::graph),
      scalar("nodes", &ExperimentConfig::nodes),
      scalar("links", &ExperimentConfig::links),
      scalar("receivers", &ExperimentConfig::receivers),
      scalar("rate", &ExperimentConfig::rate),
      scalar("target", &ExperimentConfig::target),
      scalar("seed", &ExperimentConfig::seed),
      list("seeds", &ExperimentConfig::seeds),
      text("out", &ExperimentConfig::out),
      text("assignment", &ExperimentConfig::assignment),
      ga_field("pop-size", &GaParams::pop_size),
      ga_field("pc", &GaParams::crossover_prob),
      ga_field("pm", &GaParams::mutation_prob),
      ga_field("generations", &GaParams::max_generations),
      ga_field("elite", &GaParams::elite_count),
      ga_field("p-uniform", &GaParams::p_uniform),
      ga_field("p-struct", &GaParams::p_struct),
      ga_field("threshold", &GaParams::improvement_threshold),
      ga_field("stall", &GaParams::stall_generations),
      ga_field("improve", &GaParams::improve),
      ga_field("seed-full-coding", &GaParams::seed_full_coding),
      ga_field("q", &GaParams::q),
      ga_field("eval-trials", &GaParams::eval_trials),
      ga_field("churn-links", &GaParams::churn_links),
      ga_field("churn-confidence", &GaParams::churn_confidence),
      ga_field("churn-tolerance", &GaParams::churn_tolerance),
      ga_field("churn-max-trials", &GaParams::churn_max_trials),
      {"a",
       [](const ExperimentConfig& c) { return fmt_list(std::vector<double>(c.a.begin(), c.a.end())); },
       [](ExperimentConfig& c, const std::string& v) {
         std::vector<double> xs;
         read_list("a", v, xs);
         if (xs.size() != 6) throw ConfigError("a: expected six coefficients");
         std::copy(xs.begin(), xs.end(), c.a.begin());
       }},
      text("strategy", &ExperimentConfig::strategy),
      list("file-sizes", &ExperimentConfig::file_sizes),
      scalar("block-size", &ExperimentConfig::block_size),
      scalar("segment-blocks", &ExperimentConfig::segment_blocks),
      {"rsn-count", [](const ExperimentConfig& c) { return c.rsn_count ? fmt(*c.rsn_count) : std::string("auto"); },
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "auto") {
           c.rsn_count.reset();
         } else {
           std::size_t n = 0;
           read("rsn-count", v, n);
           c.rsn_count = n;
         }
       }},
      scalar("deadline", &ExperimentConfig::deadline),
      list("dynamic-links", &ExperimentConfig::dynamic_links),
      scalar("churn-horizon", &ExperimentConfig::churn_horizon),
      {"forward",
       [](const ExperimentConfig& c) {
         return std::string(c.forward == ForwardPolicy::round_robin ? "round-robin" : "innovative");
       },
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "round-robin") {
           c.forward = ForwardPolicy::round_robin;
         } else if (v == "innovative") {
           c.forward = ForwardPolicy::innovative_if_known;
         } else {
           throw ConfigError("forward: expected round-robin or innovative, got '" + v + "'");
         }
       }},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (graph.empty() && (nodes < 2 || receivers == 0 || rate == 0)) {
    throw ConfigError("generator needs nodes >= 2, receivers >= 1 and rate >= 1");
  }
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (file_sizes.empty()) throw ConfigError("file-sizes must not be empty");
  for (std::size_t f : file_sizes) {
    if (f == 0) throw ConfigError("file sizes must be positive");
  }
  if (dynamic_links.empty()) throw ConfigError("dynamic-links must not be empty");
  if (block_size == 0 || segment_blocks == 0) throw ConfigError("block-size and segment-blocks must be positive");
  try {
    parse_strategy(strategy);
    ga.validate();
    FitnessCoefficients c;
    c.a = a;
    c.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string s;
  for (const Field& f : fields()) s += std::string(f.key) + " = " + f.get(cfg) + "\n";
  return s;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_setting(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.emplace_back(f.key);
  return keys;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const Field& f : fields()) {
    if (key == f.key) return f.set(cfg, value);
  }
  throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ncga::cli
