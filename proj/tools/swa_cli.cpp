#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swa/swa.h"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kInvalid = 2, kRuntime = 3, kCheckFailed = 4 };

struct ConfigDeleter {
  void operator()(swa_config* c) const { swa_config_destroy(c); }
};
struct LogDeleter {
  void operator()(swa_log* l) const { swa_log_destroy(l); }
};
struct ConsistencyDeleter {
  void operator()(swa_consistency* c) const { swa_consistency_destroy(c); }
};
using ConfigPtr = std::unique_ptr<swa_config, ConfigDeleter>;
using LogPtr = std::unique_ptr<swa_log, LogDeleter>;
using ConsistencyPtr = std::unique_ptr<swa_consistency, ConsistencyDeleter>;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
  std::string axis;
  int seeds = 10;
  std::string n_range = "2..6";
  double dt = 0.1;
  std::string log_path;
  int runs = 12;
  double duration = 60.0;
};

class Failure {
 public:
  Failure(int code, std::string message) : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

int exit_code_for(swa_status status) {
  switch (status) {
    case SWA_OK: return kOk;
    case SWA_ERR_INVALID_CONFIG:
    case SWA_ERR_INVALID_ARGUMENT:
    case SWA_ERR_IO: return kInvalid;
    default: return kRuntime;
  }
}

void check(swa_status status, const std::string& context) {
  if (status == SWA_OK) return;
  std::string msg = context + ": " + swa_last_error();
  throw Failure(exit_code_for(status), msg);
}

std::string default_out(const Options& opt) {
  if (!opt.out_dir.empty()) return opt.out_dir;
  if (const char* env = std::getenv("SWA_OUT"); env && *env) return env;
  return "out";
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure(kInvalid, "cannot create '" + dir + "': " + ec.message());
  return fs::path(dir);
}

ConfigPtr load_config(const Options& opt) {
  swa_config* raw = nullptr;
  if (opt.config_path.empty()) {
    check(swa_config_create(&raw), "config");
  } else {
    check(swa_config_load(opt.config_path.c_str(), &raw), "config");
  }
  ConfigPtr config(raw);
  if (opt.seed_set) {
    check(swa_config_set(config.get(), "sim.seed", std::to_string(opt.seed).c_str()), "--seed");
  }
  return config;
}

std::string config_value(const swa_config* config, const char* key) {
  size_t needed = 0;
  swa_config_get(config, key, nullptr, 0, &needed);
  std::string buf(needed, '\0');
  check(swa_config_get(config, key, buf.data(), buf.size(), nullptr), key);
  buf.resize(needed - 1);
  return buf;
}

void info(const Options& opt, const std::string& line) {
  if (!opt.quiet) std::printf("%s\n", line.c_str());
}

swa_run_metrics run_into(const swa_config* config, const fs::path& dir) {
  check(swa_config_validate(config), "config");
  swa_log* raw = nullptr;
  check(swa_run_scenario(config, &raw), "run");
  LogPtr log(raw);
  swa_run_metrics metrics{};
  check(swa_log_write_csv(log.get(), (dir / "log.csv").c_str()), "log.csv");
  check(swa_log_metrics(log.get(), &metrics), "metrics");
  check(swa_write_metrics_csv(&metrics, 1, (dir / "metrics.csv").c_str()), "metrics.csv");
  check(swa_config_write_resolved(config, (dir / "config.resolved").c_str()), "config.resolved");
  check(swa_write_schema(swa_log_uav_count(log.get()), (dir / "schema.json").c_str()), "schema.json");
  return metrics;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int cmd_validate(const Options& opt) {
  auto config = load_config(opt);
  check(swa_config_validate(config.get()), "config");
  info(opt, "config ok");
  return kOk;
}

int cmd_run(const Options& opt) {
  auto config = load_config(opt);
  check(swa_config_validate(config.get()), "config");
  const auto dir = prepare_dir(default_out(opt));
  const auto m = run_into(config.get(), dir);
  info(opt, "wrote " + dir.string() + "/{log.csv,metrics.csv,config.resolved,schema.json}");
  info(opt, "mean d_nb " + fmt(m.mean_d_nb) + " m, mean v_drift " + fmt(m.mean_v_drift) + " m/s");
  return kOk;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_sweep(const Options& opt) {
  const auto eq = opt.axis.find('=');
  if (eq == std::string::npos || eq == 0) throw Failure(kInvalid, "--axis must look like key=v1,v2,...");
  const std::string key = opt.axis.substr(0, eq);
  const auto values = split(opt.axis.substr(eq + 1), ',');
  if (values.empty()) throw Failure(kInvalid, "--axis: empty value list");
  if (opt.seeds < 1) throw Failure(kInvalid, "--seeds: seed list is empty");

  auto base = load_config(opt);
  const std::uint64_t seed_base = std::stoull(config_value(base.get(), "sim.seed"));

  // Build and validate every configuration before running anything.
  struct Job {
    std::string value;
    std::uint64_t seed;
    ConfigPtr config;
  };
  std::vector<Job> jobs;
  for (const auto& value : values) {
    for (int i = 0; i < opt.seeds; ++i) {
      swa_config* raw = nullptr;
      check(swa_config_clone(base.get(), &raw), "config");
      ConfigPtr config(raw);
      check(swa_config_set(config.get(), key.c_str(), value.c_str()), "--axis");
      const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(i);
      check(swa_config_set(config.get(), "sim.seed", std::to_string(seed).c_str()), "seed");
      check(swa_config_validate(config.get()), key + "=" + value);
      jobs.push_back({value, seed, std::move(config)});
    }
  }

  const auto root = prepare_dir(default_out(opt));
  std::vector<swa_run_metrics> all;
  std::map<std::string, std::vector<swa_run_metrics>> by_value;
  for (const auto& job : jobs) {
    const auto dir = prepare_dir((root / (key + "=" + job.value) / ("seed_" + std::to_string(job.seed))).string());
    const auto m = run_into(job.config.get(), dir);
    all.push_back(m);
    by_value[job.value].push_back(m);
    info(opt, key + "=" + job.value + " seed " + std::to_string(job.seed) + ": mean d_nb " + fmt(m.mean_d_nb) +
                  ", mean v_drift " + fmt(m.mean_v_drift));
  }
  check(swa_write_metrics_csv(all.data(), all.size(), (root / "metrics.csv").c_str()), "metrics.csv");

  std::ofstream summary(root / "summary.csv", std::ios::binary);
  if (!summary) throw Failure(kInvalid, "cannot write summary.csv");
  summary << "axis_value,runs,mean_d_nb,mean_v_drift\n";
  for (const auto& value : values) {
    const auto& runs = by_value[value];
    double d = 0.0, v = 0.0;
    for (const auto& m : runs) {
      d += m.mean_d_nb;
      v += m.mean_v_drift;
    }
    const double n = static_cast<double>(runs.size());
    summary << value << ',' << runs.size() << ',' << fmt(d / n) << ',' << fmt(v / n) << '\n';
  }
  check(swa_write_schema(0, (root / "schema.json").c_str()), "schema.json");
  info(opt, "wrote " + std::to_string(jobs.size()) + " runs and " + (root / "summary.csv").string());
  return kOk;
}

int cmd_observability(const Options& opt) {
  const auto dots = opt.n_range.find("..");
  int lo = 0, hi = 0;
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(opt.n_range);
    } else {
      lo = std::stoi(opt.n_range.substr(0, dots));
      hi = std::stoi(opt.n_range.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw Failure(kInvalid, "--n-range must look like a..b");
  }
  if (lo < 2 || hi > 12 || lo > hi) throw Failure(kInvalid, "--n-range must lie within [2, 12]");

  bool ok = true;
  std::printf("%4s %6s %6s %8s %s\n", "n", "dim", "rank", "nullity", "translation_basis");
  for (int n = lo; n <= hi; ++n) {
    swa_observability_report r{};
    check(swa_observability(n, opt.dt, -1, &r), "observability");
    const bool row_ok = r.rank == 4 * n - 4 && r.basis_in_null_space && r.spans_null_space;
    ok = ok && row_ok;
    std::printf("%4d %6d %6d %8d %s\n", r.n, r.state_dim, r.rank, r.nullity,
                r.basis_in_null_space && r.spans_null_space ? "spans" : "MISMATCH");
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_anees(const Options& opt) {
  auto config = load_config(opt);
  check(swa_config_validate(config.get()), "config");
  swa_consistency_options o;
  swa_consistency_options_default(&o);
  o.runs = opt.runs;
  o.duration = opt.duration;
  o.seed = std::stoull(config_value(config.get(), "sim.seed"));
  swa_consistency* raw = nullptr;
  check(swa_consistency_run(config.get(), &o, &raw), "anees");
  ConsistencyPtr result(raw);
  swa_consistency_summary s{};
  check(swa_consistency_summarize(result.get(), &s), "anees");
  const auto dir = prepare_dir(default_out(opt));
  check(swa_consistency_write_csv(result.get(), (dir / "anees.csv").c_str()), "anees.csv");
  info(opt, "bounds [" + fmt(s.lower) + ", " + fmt(s.upper) + "]");
  info(opt, "inside bounds: position " + fmt(s.position_pass) + ", velocity " + fmt(s.velocity_pass));
  info(opt, "wrote " + (dir / "anees.csv").string());
  return s.position_pass >= 0.9 && s.velocity_pass >= 0.9 ? kOk : kCheckFailed;
}

int cmd_metrics(const Options& opt) {
  if (opt.log_path.empty()) throw Failure(kInvalid, "--log is required");
  auto config = load_config(opt);
  swa_log* raw = nullptr;
  check(swa_log_read_csv(opt.log_path.c_str(), config.get(), &raw), "log");
  LogPtr log(raw);
  swa_run_metrics m{};
  check(swa_log_metrics(log.get(), &m), "metrics");
  const auto dir = prepare_dir(default_out(opt));
  check(swa_write_metrics_csv(&m, 1, (dir / "metrics.csv").c_str()), "metrics.csv");
  info(opt, "wrote " + (dir / "metrics.csv").string());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anchor-free swarm stabilization: simulation and analysis"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "scenario config file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory (default $SWA_OUT, else ./out)");
    sub->add_option("--seed", opt.seed, "seed override")->each([&](const std::string&) { opt.seed_set = true; });
    sub->add_flag("--quiet", opt.quiet, "suppress informational output");
  };

  auto* run = app.add_subcommand("run", "run one scenario");
  add_common(run);
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep over seeds");
  add_common(sweep);
  sweep->add_option("--axis", opt.axis, "key=v1,v2,...")->required();
  sweep->add_option("--seeds", opt.seeds, "runs per value; seeds are base, base+1, ...");
  auto* obs = app.add_subcommand("observability", "rank and null space of the combined swarm");
  obs->add_option("--n-range", opt.n_range, "a..b within [2, 12]");
  obs->add_option("--dt", opt.dt, "discretization step");
  obs->add_flag("--quiet", opt.quiet);
  auto* anees = app.add_subcommand("anees", "focal estimator consistency experiment");
  add_common(anees);
  anees->add_option("--runs", opt.runs, "Monte-Carlo runs");
  anees->add_option("--duration", opt.duration, "seconds per run");
  auto* metrics = app.add_subcommand("metrics", "recompute metrics.csv from a log");
  add_common(metrics);
  metrics->add_option("--log", opt.log_path, "log.csv to read")->required();
  auto* validate = app.add_subcommand("validate", "check a config file");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (obs->parsed()) return cmd_observability(opt);
    if (anees->parsed()) return cmd_anees(opt);
    if (metrics->parsed()) return cmd_metrics(opt);
    if (validate->parsed()) return cmd_validate(opt);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message().c_str());
    return f.code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
  return kInvalid;
}
