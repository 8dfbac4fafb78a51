#include "blockseg/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "blockseg/dp.hpp"
#include "blockseg/evaluate.hpp"
#include "blockseg/io.hpp"
#include "blockseg/prefix_stats.hpp"
#include "blockseg/simulate.hpp"

namespace blockseg {

namespace {

using json = nlohmann::json;

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

json toml_value(const std::string& raw) {
  std::string v = strip(raw);
  if (v.empty()) throw IoError("empty TOML value");
  if (v.front() == '[') {
    if (v.back() != ']') throw IoError("unterminated TOML array: " + v);
    json arr = json::array();
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = strip(item);
      if (!item.empty()) arr.push_back(toml_value(item));
    }
    return arr;
  }
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw IoError("unterminated TOML string: " + v);
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  try {
    size_t pos = 0;
    if (v.find_first_of(".eE") == std::string::npos) {
      const long long i = std::stoll(v, &pos);
      if (pos == v.size()) return i;
    }
    const double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw IoError("cannot parse TOML value: " + v);
}

// flat key = value pairs plus one level of [table] sections; enough for the
// experiment config shape
json parse_toml_subset(std::istream& in) {
  json root = json::object();
  json* target = &root;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw IoError("malformed TOML section: " + line);
      const std::string name = strip(line.substr(1, line.size() - 2));
      target = &root[name];
      *target = json::object();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("malformed TOML line: " + line);
    (*target)[strip(line.substr(0, eq))] = toml_value(line.substr(eq + 1));
  }
  return root;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.n_values = j.at("n_values").get<std::vector<int>>();
  cfg.sigma_values = j.at("sigma_values").get<std::vector<double>>();
  if (j.contains("omega_values")) cfg.omega_values = j.at("omega_values").get<std::vector<double>>();
  cfg.replicates = j.at("replicates").get<int>();
  cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();

  const json& t = j.at("truth");
  cfg.truth.tau = t.at("tau").get<std::vector<double>>();
  cfg.truth.mu = t.at("mu").get<std::vector<double>>();
  cfg.truth.mu0 = t.at("mu0").get<double>();

  if (j.contains("seg")) {
    const json& s = j.at("seg");
    if (s.contains("c")) cfg.seg.c = s.at("c").get<double>();
    if (s.contains("min_len")) cfg.seg.min_len = s.at("min_len").get<int>();
    if (s.contains("k_max")) cfg.seg.k_max = s.at("k_max").get<int>();
  }

  if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
  cfg.truth.validate();
  for (int n : cfg.n_values) {
    cfg.truth.boundaries(n);   // admissible true segmentation for every n
    validate_config(cfg.seg, n);
  }
  return cfg;
}

using CellKey = std::tuple<int, double, double, std::uint64_t>;

CellKey key_of(const ReplicateRow& r) { return {r.n, r.sigma, r.omega, r.seed}; }

std::vector<ReplicateRow> read_replicate_csv(const std::string& path) {
  std::vector<ReplicateRow> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> f;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw IoError("malformed replicate row in " + path + ": " + line);
    ReplicateRow r;
    r.n = std::stoi(f[0]);
    r.sigma = std::stod(f[1]);
    r.omega = std::stod(f[2]);
    r.seed = std::stoull(f[3]);
    r.k_hat = std::stoi(f[4]);
    r.h1 = std::stoi(f[5]);
    r.h2 = std::stoi(f[6]);
    r.runtime_ms = std::stoll(f[7]);
    rows.push_back(r);
  }
  return rows;
}

// type-7 quantile (linear interpolation), matching common plotting defaults
double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const double h = p * (static_cast<double>(v.size()) - 1.0);
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  json j;
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0) {
    j = parse_toml_subset(in);
  } else {
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw IoError("cannot parse JSON config " + path + ": " + e.what());
    }
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw IoError("bad config " + path + ": " + e.what());
  }
}

std::string aggregate_path_for(const std::string& output) {
  std::filesystem::path p(output);
  std::filesystem::path agg = p.parent_path() / (p.stem().string() + "_aggregate.csv");
  return agg.string();
}

std::vector<ReplicateRow> run_experiment(const ExperimentConfig& cfg, const std::string& output) {
  struct Cell {
    int n;
    double sigma;
    double omega;
    std::uint64_t seed;
  };
  std::vector<Cell> plan;
  for (int n : cfg.n_values)
    for (double sigma : cfg.sigma_values)
      for (double omega : cfg.omega_values)
        for (int r = 0; r < cfg.replicates; ++r)
          plan.push_back({n, sigma, omega, cfg.base_seed + static_cast<std::uint64_t>(r)});

  std::map<CellKey, ReplicateRow> done;
  for (const ReplicateRow& r : read_replicate_csv(output)) done[key_of(r)] = r;

  std::vector<Cell> todo;
  for (const Cell& c : plan) {
    if (!done.count({c.n, c.sigma, c.omega, c.seed})) todo.push_back(c);
  }

  int jobs = cfg.jobs;
  if (const char* env = std::getenv("BLOCKSEG_JOBS")) jobs = std::atoi(env);
  if (jobs <= 0) jobs = omp_get_max_threads();

  // incremental flush so an interrupted run can resume
  const bool fresh = done.empty();
  std::ofstream append(output, fresh ? std::ios::trunc : std::ios::app);
  if (!append) throw IoError("cannot write " + output);
  if (fresh) append << "n,sigma,omega,seed,k_hat,h1,h2,runtime_ms\n";

  std::vector<ReplicateRow> fresh_rows(todo.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (long long i = 0; i < static_cast<long long>(todo.size()); ++i) {
    const Cell& c = todo[i];
    SimSpec spec;
    spec.n = c.n;
    spec.truth = cfg.truth;
    spec.truth.sigma = c.sigma;
    spec.truth.omega = c.omega;
    spec.seed = c.seed;

    const auto start = std::chrono::steady_clock::now();
    const auto [y, t_star] = generate(spec, cfg.seg);
    const PrefixStats stats(y, cfg.seg);
    const SegmentationResult res = select_k(stats, cfg.seg, /*parallel=*/false);
    const auto stop = std::chrono::steady_clock::now();

    const HausdorffPair h = hausdorff(t_star, res.boundaries_hat);
    ReplicateRow row{c.n, c.sigma, c.omega, c.seed, res.k_hat, h.h1, h.h2,
                     std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count()};
    fresh_rows[i] = row;
#pragma omp critical
    {
      append << row.n << ',' << format_double(row.sigma) << ',' << format_double(row.omega) << ','
             << row.seed << ',' << row.k_hat << ',' << row.h1 << ',' << row.h2 << ','
             << row.runtime_ms << '\n';
      append.flush();
    }
  }
  append.close();

  for (const ReplicateRow& r : fresh_rows) done[key_of(r)] = r;
  std::vector<ReplicateRow> rows;
  rows.reserve(done.size());
  for (const Cell& c : plan) rows.push_back(done.at({c.n, c.sigma, c.omega, c.seed}));
  std::sort(rows.begin(), rows.end(), [](const ReplicateRow& a, const ReplicateRow& b) {
    return key_of(a) < key_of(b);
  });

  write_replicate_csv(rows, output);
  write_aggregate_csv(rows, aggregate_path_for(output));
  return rows;
}

void write_replicate_csv(const std::vector<ReplicateRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "n,sigma,omega,seed,k_hat,h1,h2,runtime_ms\n";
  for (const ReplicateRow& r : rows) {
    out << r.n << ',' << format_double(r.sigma) << ',' << format_double(r.omega) << ',' << r.seed
        << ',' << r.k_hat << ',' << r.h1 << ',' << r.h2 << ',' << r.runtime_ms << '\n';
  }
}

void write_aggregate_csv(const std::vector<ReplicateRow>& rows, const std::string& path) {
  std::map<std::tuple<int, double, double>, std::vector<const ReplicateRow*>> cells;
  for (const ReplicateRow& r : rows) cells[{r.n, r.sigma, r.omega}].push_back(&r);

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "n,sigma,omega,replicates,khat_q1,khat_median,khat_q3,"
         "h1_q1,h1_median,h1_q3,h2_q1,h2_median,h2_q3\n";
  for (const auto& [key, cell] : cells) {
    std::vector<double> khat, h1, h2;
    for (const ReplicateRow* r : cell) {
      khat.push_back(r->k_hat);
      h1.push_back(r->h1);
      h2.push_back(r->h2);
    }
    out << std::get<0>(key) << ',' << format_double(std::get<1>(key)) << ','
        << format_double(std::get<2>(key)) << ',' << cell.size();
    for (const auto& v : {khat, h1, h2}) {
      for (double p : {0.25, 0.5, 0.75}) out << ',' << format_double(quantile(v, p));
    }
    out << '\n';
  }
}

}  // namespace blockseg
