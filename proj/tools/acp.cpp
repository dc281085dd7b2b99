// Command-line front end: replica-parallel experiments over the branching,
// lattice, mean-field and percolation modules, CSV + JSON summary output,
// and the `verify` mode running the full property-check suite.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acp/branching.hpp"
#include "acp/csv.hpp"
#include "acp/lattice.hpp"
#include "acp/meanfield.hpp"
#include "acp/percolation.hpp"
#include "acp/replicas.hpp"
#include "acp/rng.hpp"
#include "acp/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Config = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Config cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line is not key=value: " + line);
    cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

double parse_double(const Config& cfg, const std::string& key, double dflt) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return dflt;
  if (it->second == "inf" || it->second == "INFINITY" ||
      it->second == "Infinity")
    return acp::lattice::kInfiniteRate;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value for key \"" + key + "\": " +
                      it->second);
  }
}

std::int64_t parse_int(const Config& cfg, const std::string& key,
                       std::int64_t dflt) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return dflt;
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer value for key \"" + key + "\": " +
                      it->second);
  }
}

std::string get_string(const Config& cfg, const std::string& key,
                       const std::string& dflt) {
  auto it = cfg.find(key);
  return it == cfg.end() ? dflt : it->second;
}

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 1;
  std::uint64_t replicas = 100;
  int jobs = 1;
  std::string out_dir = ".";
  bool seed_set = false, replicas_set = false, jobs_set = false;
};

void attach_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "key=value config file");
  sub->add_option("--seed", args.seed, "base RNG seed")
      ->each([&](const std::string&) { args.seed_set = true; });
  sub->add_option("--replicas", args.replicas, "replica count")
      ->each([&](const std::string&) { args.replicas_set = true; });
  sub->add_option("--jobs", args.jobs, "max worker threads")
      ->each([&](const std::string&) { args.jobs_set = true; });
  sub->add_option("--out", args.out_dir, "output directory");
}

struct Resolved {
  Config cfg;
  std::uint64_t seed;
  std::uint64_t replicas;
  int jobs;
  fs::path out;
};

Resolved resolve(const CommonArgs& args) {
  Resolved r;
  if (!args.config_path.empty()) r.cfg = load_config(args.config_path);
  r.seed = args.seed_set
               ? args.seed
               : static_cast<std::uint64_t>(parse_int(r.cfg, "seed", 1));
  r.replicas = args.replicas_set ? args.replicas
                                 : static_cast<std::uint64_t>(
                                       parse_int(r.cfg, "replicas", 100));
  r.jobs = args.jobs_set ? args.jobs
                         : static_cast<int>(parse_int(r.cfg, "jobs", 1));
  if (r.replicas < 1) throw ConfigError("key \"replicas\" must be positive");
  if (r.jobs < 1) throw ConfigError("key \"jobs\" must be positive");
  r.out = args.out_dir;
  fs::create_directories(r.out);
  return r;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

json config_echo(const Resolved& r, const std::string& mode) {
  json echo = json::object();
  for (const auto& [k, v] : r.cfg) echo[k] = v;
  echo["mode"] = mode;
  echo["seed"] = r.seed;
  echo["replicas"] = r.replicas;
  echo["jobs"] = r.jobs;
  return echo;
}

void write_summary(const Resolved& r, const std::string& mode, json aggregates,
                   double wall_seconds) {
  json summary;
  summary["config"] = config_echo(r, mode);
  summary["aggregates"] = std::move(aggregates);
  summary["wall_clock_seconds"] = wall_seconds;
  write_file(r.out / (mode + "_summary.json"), summary.dump(2) + "\n");
}

acp::lattice::SimParams sim_params_from(const Config& cfg) {
  acp::lattice::SimParams p;
  p.d = static_cast<int>(parse_int(cfg, "d", 1));
  p.half_width = static_cast<int>(parse_int(cfg, "half_width", 50));
  p.lambda1 = parse_double(cfg, "lambda1", 0.0);
  p.lambda2 = parse_double(cfg, "lambda2", 0.0);
  p.gamma = parse_double(cfg, "gamma", 0.0);
  p.horizon = parse_double(cfg, "horizon", 1000.0);
  const std::int64_t cap = parse_int(cfg, "pi2_cap", -1);
  if (cap >= 0) p.pi2_cap = static_cast<std::uint64_t>(cap);
  const std::string b = get_string(cfg, "boundary", "healthy_frozen");
  if (b == "healthy_frozen")
    p.boundary = acp::lattice::Boundary::healthy_frozen;
  else if (b == "periodic")
    p.boundary = acp::lattice::Boundary::periodic;
  else if (b == "symptomatic_frozen")
    p.boundary = acp::lattice::Boundary::symptomatic_frozen;
  else
    throw ConfigError("invalid value for key \"boundary\": " + b);
  p.validate();
  return p;
}

int run_simulate(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved r = resolve(args);
  const acp::lattice::SimParams params = sim_params_from(r.cfg);

  auto runs = acp::replicate<acp::lattice::RunSummary>(
      r.replicas, r.seed, r.jobs, [&](std::uint64_t, acp::Rng& rng) {
        return acp::lattice::run_single_source(params, rng);
      });

  std::ostringstream csv;
  csv << "replica,pi1,pi2,t_cumulative,extinction_time,max_space,max_time,"
         "extinct\n";
  std::uint64_t extinct = 0;
  double mean_pi1 = 0.0, mean_pi2 = 0.0;
  for (std::uint64_t i = 0; i < runs.size(); ++i) {
    const auto& s = runs[i];
    csv << acp::format_u64(i) << "," << acp::format_u64(s.pi1) << ","
        << acp::format_u64(s.pi2) << "," << acp::format_double(s.t_cumulative)
        << ","
        << (s.extinction_time ? acp::format_double(*s.extinction_time) : "nan")
        << "," << acp::format_i64(s.max_space) << ","
        << acp::format_double(s.max_time) << "," << (s.extinct ? "1" : "0")
        << "\n";
    if (s.extinct) ++extinct;
    mean_pi1 += static_cast<double>(s.pi1);
    mean_pi2 += static_cast<double>(s.pi2);
  }
  mean_pi1 /= static_cast<double>(runs.size());
  mean_pi2 /= static_cast<double>(runs.size());
  write_file(r.out / "simulate.csv", csv.str());

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_summary(r, "simulate",
                {{"extinct_fraction",
                  static_cast<double>(extinct) /
                      static_cast<double>(runs.size())},
                 {"mean_pi1", mean_pi1},
                 {"mean_pi2", mean_pi2}},
                wall);
  return 0;
}

int run_branching(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved r = resolve(args);
  acp::branching::GWParams gw;
  gw.d = static_cast<int>(parse_int(r.cfg, "d", 1));
  gw.gamma = parse_double(r.cfg, "gamma", 0.0);
  gw.validate();
  const auto cap = static_cast<std::uint64_t>(parse_int(
      r.cfg, "cap",
      static_cast<std::int64_t>(acp::branching::kDefaultProgenyCap)));

  auto runs = acp::replicate<acp::branching::ProgenyResult>(
      r.replicas, r.seed, r.jobs, [&](std::uint64_t, acp::Rng& rng) {
        return acp::branching::simulate_progeny(gw, cap, rng);
      });

  std::ostringstream csv;
  csv << "replica,progeny,generations,capped\n";
  double mean_progeny = 0.0;
  std::uint64_t capped = 0;
  for (std::uint64_t i = 0; i < runs.size(); ++i) {
    const auto& s = runs[i];
    csv << acp::format_u64(i) << "," << acp::format_u64(s.progeny) << ","
        << acp::format_u64(s.generations) << "," << (s.capped ? "1" : "0")
        << "\n";
    mean_progeny += static_cast<double>(s.progeny);
    if (s.capped) ++capped;
  }
  mean_progeny /= static_cast<double>(runs.size());
  write_file(r.out / "branching.csv", csv.str());

  json agg = {{"mean_progeny", mean_progeny}, {"capped", capped}};
  if (gw.subcritical()) agg["progeny_mean_exact"] = acp::branching::progeny_mean(gw);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_summary(r, "branching", agg, wall);
  return 0;
}

int run_meanfield(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved r = resolve(args);
  acp::meanfield::MFParams p;
  p.lambda1 = parse_double(r.cfg, "lambda1", 0.0);
  p.lambda2 = parse_double(r.cfg, "lambda2", 0.0);
  p.gamma = parse_double(r.cfg, "gamma", 0.0);
  p.validate();
  acp::meanfield::MFState start;
  start.u1 = parse_double(r.cfg, "u1", 0.1);
  start.u2 = parse_double(r.cfg, "u2", 0.1);
  const double t_end = parse_double(r.cfg, "t_end", 200.0);
  const double dt = parse_double(r.cfg, "dt", 0.01);
  if (!(t_end > 0.0)) throw ConfigError("key \"t_end\" must be positive");
  if (!(dt > 0.0)) throw ConfigError("key \"dt\" must be positive");

  const auto traj = acp::meanfield::integrate(start, p, t_end, dt);
  std::ostringstream csv;
  csv << "t,u1,u2\n";
  for (const auto& [t, s] : traj)
    csv << acp::format_double(t) << "," << acp::format_double(s.u1) << ","
        << acp::format_double(s.u2) << "\n";
  write_file(r.out / "meanfield.csv", csv.str());

  const auto fp = acp::meanfield::interior_fixed_point(p, 1e-12);
  json agg = {{"epidemic", acp::meanfield::threshold_check(p)},
              {"final_u1", traj.back().second.u1},
              {"final_u2", traj.back().second.u2},
              {"stable", fp.stable}};
  if (fp.point) {
    agg["fixed_point_u1"] = fp.point->u1;
    agg["fixed_point_u2"] = fp.point->u2;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_summary(r, "meanfield", agg, wall);
  return 0;
}

int run_percolation(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved r = resolve(args);
  const int d = static_cast<int>(parse_int(r.cfg, "d", 1));
  if (d < 1 || d > acp::percolation::kMaxDim)
    throw ConfigError("key \"d\" must be in [1, 3]");

  json agg;
  std::ostringstream csv;
  if (r.cfg.count("epsilon")) {
    const double epsilon = parse_double(r.cfg, "epsilon", 0.0);
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
      throw ConfigError("key \"epsilon\" must be in [0, 1]");
    acp::percolation::FieldExtent extent;
    extent.half_width = static_cast<int>(parse_int(r.cfg, "half_width", 10));
    extent.height = static_cast<int>(parse_int(r.cfg, "height", 10));
    auto runs = acp::replicate<acp::percolation::FieldSearch>(
        r.replicas, r.seed, r.jobs, [&](std::uint64_t, acp::Rng& rng) {
          return acp::percolation::sample_field_and_search(epsilon, d, extent,
                                                           rng);
        });
    csv << "replica,has_closed_path,longest\n";
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < runs.size(); ++i) {
      csv << acp::format_u64(i) << ","
          << (runs[i].has_closed_path_from_level0 ? "1" : "0") << ","
          << acp::format_i64(runs[i].longest_closed_path) << "\n";
      if (runs[i].has_closed_path_from_level0) ++hits;
    }
    agg = {{"closed_path_fraction",
            static_cast<double>(hits) / static_cast<double>(runs.size())}};
  } else {
    const int n_max = static_cast<int>(parse_int(r.cfg, "n_max", 6));
    if (n_max < 0) throw ConfigError("key \"n_max\" must be nonnegative");
    csv << "n,count,bound\n";
    for (int n = 0; n <= n_max; ++n) {
      const auto rep = acp::percolation::count_directed_sa_paths(n, d);
      csv << acp::format_i64(n) << "," << acp::format_u64(rep.count) << ","
          << acp::format_double(rep.bound) << "\n";
    }
    agg = {{"n_max", n_max}};
  }
  write_file(r.out / "percolation.csv", csv.str());
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_summary(r, "percolation", agg, wall);
  return 0;
}

int run_block(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved r = resolve(args);
  acp::lattice::SimParams params = sim_params_from(r.cfg);
  acp::lattice::BlockGeometry geom;
  geom.k = static_cast<int>(parse_int(r.cfg, "k", 4));
  geom.d = params.d;
  if (geom.k < 1) throw ConfigError("key \"k\" must be positive");
  const std::string init = get_string(r.cfg, "initial", "all_symptomatic");
  acp::lattice::BlockInitial initial;
  if (init == "all_symptomatic")
    initial = acp::lattice::BlockInitial::all_symptomatic;
  else if (init == "all_healthy")
    initial = acp::lattice::BlockInitial::all_healthy;
  else
    throw ConfigError("invalid value for key \"initial\": " + init);

  auto runs = acp::replicate<acp::lattice::BlockOutcome>(
      r.replicas, r.seed, r.jobs, [&](std::uint64_t, acp::Rng& rng) {
        return acp::lattice::run_block_experiment(geom, params, initial, rng);
      });

  std::ostringstream csv;
  csv << "replica,healthy_block,card_lambda_minus,card_lambda_plus\n";
  std::uint64_t healthy = 0;
  for (std::uint64_t i = 0; i < runs.size(); ++i) {
    const auto& s = runs[i];
    csv << acp::format_u64(i) << "," << (s.healthy_block ? "1" : "0") << ","
        << acp::format_i64(s.card_lambda_minus) << ","
        << acp::format_i64(s.card_lambda_plus) << "\n";
    if (s.healthy_block) ++healthy;
  }
  write_file(r.out / "block.csv", csv.str());

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_summary(r, "block",
                {{"healthy_block_fraction",
                  static_cast<double>(healthy) /
                      static_cast<double>(runs.size())},
                 {"m_bound", geom.m_bound()}},
                wall);
  return 0;
}

int run_verify(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved r = resolve(args);
  acp::verify::VerifyOptions opt;
  opt.seed = args.seed_set
                 ? args.seed
                 : static_cast<std::uint64_t>(
                       parse_int(r.cfg, "seed", 20260823));
  opt.scale = parse_double(r.cfg, "scale", 1.0);
  if (!(opt.scale > 0.0)) throw ConfigError("key \"scale\" must be positive");
  opt.jobs = r.jobs;

  const auto results = acp::verify::run_all_criteria(opt);
  const std::string report = acp::verify::format_report(results);
  // The report file must be byte-identical across reruns: no wall clock.
  write_file(r.out / "verify_report.txt", report);
  std::cout << report;

  bool all_pass = true;
  json agg = json::array();
  for (const auto& c : results) {
    all_pass = all_pass && c.pass;
    agg.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}});
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_summary(r, "verify", agg, wall);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymptomatic contact process laboratory"};
  app.require_subcommand(1);

  CommonArgs args;
  int (*handler)(const CommonArgs&) = nullptr;
  for (const auto& [name, fn] :
       std::initializer_list<std::pair<const char*, int (*)(const CommonArgs&)>>{
           {"simulate", run_simulate},
           {"branching", run_branching},
           {"meanfield", run_meanfield},
           {"percolation", run_percolation},
           {"block", run_block},
           {"verify", run_verify}}) {
    CLI::App* sub = app.add_subcommand(name);
    attach_common(sub, args);
    sub->callback([&handler, fn] { handler = fn; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return handler(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const acp::percolation::EnumerationBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
