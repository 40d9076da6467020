// ergolab command-line front end. Links only the C API.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ergolab/ergolab.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::string N;
  int precision_digits = 50;
  double tol = 0.02;
  double tol_diverge = 0.1;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool quiet = false;
};

// Accepts integers and exact scientific forms such as 1e6.
bool parse_horizon(const std::string& text, std::int64_t& N) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !(v >= 1) || v > 9e18 || v != std::floor(v)) return false;
    N = static_cast<std::int64_t>(v);
    return true;
  } catch (...) {
    return false;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to a sibling temporary, then renames over the target.
void write_atomic(const fs::path& path, const char* data, std::size_t size) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(data, static_cast<std::streamsize>(size));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct Settings {
  ergo_settings* p = nullptr;
  ~Settings() { ergo_settings_free(p); }
};

int fail(ergo_status st) {
  std::cerr << "ergolab: " << ergo_status_name(st) << ": " << ergo_last_error() << "\n";
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolab: subsequence ergodic averages along Hardy-field sequences"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", ergo_version());

  Globals g;
  app.add_option("--N", g.N, "horizon, e.g. 100000 or 1e6 (overrides config files)");
  app.add_option("--precision-digits", g.precision_digits, "working precision for floor evaluation")
      ->check(CLI::Range(16, 10000));
  app.add_option("--tol", g.tol, "convergence tolerance for verdicts")->check(CLI::PositiveNumber);
  app.add_option("--tol-diverge", g.tol_diverge, "oscillation threshold for a divergence verdict")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "default seed for random perturbations and sets");
  app.add_option("--out-dir", g.out_dir, "write report.json, data files and manifest.json here");
  app.add_flag("--quiet", g.quiet, "do not print the report to stdout");

  Json echo = Json::object();

  std::string expr;
  auto* classify = app.add_subcommand("classify", "normal form and Pm / Ml classification of f");
  classify->add_option("f", expr, "expression in t")->required();

  std::string seq_f, seq_h = "zero";
  bool seq_dedup = false, seq_binary = false;
  auto* seq = app.add_subcommand("seq", "generate a_n = [f(n)] + h_n");
  seq->add_option("f", seq_f)->required();
  seq->add_option("--perturbation", seq_h, "h_n: zero, const:c, period:c1,c2,..., rand:r=R,seed=s");
  seq->add_flag("--dedup", seq_dedup, "keep first occurrence of each value");
  seq->add_flag("--binary", seq_binary, "write little-endian int64 instead of text");

  std::string bk_f;
  std::int64_t bk_K = 20;
  auto* bk = app.add_subcommand("bk", "table of B_k = {n : [f(n)] = k}");
  bk->add_option("f", bk_f)->required();
  bk->add_option("--K", bk_K, "largest k")->check(CLI::NonNegativeNumber);

  std::string set_spec, set_format = "none", set_akm;
  int set_regularity = -1;
  auto* set = app.add_subcommand("set", "index set density and regularity");
  set->add_option("spec", set_spec, "nat, ap:offset,step, rot:alpha=..,lo=..,hi=.., bern:p=..,seed=.., champ, blocks, mask:...")
      ->required();
  set->add_option("--regularity", set_regularity, "word length K for block statistics");
  set->add_option("--format", set_format)->check(CLI::IsMember({"none", "elements", "rle1"}));
  set->add_option("--akm", set_akm, "extract A_{k,m}, given as k,m");
  bool set_density = true;
  set->add_flag("--density", set_density, "report the density trace (always on)");

  std::string weyl_w;
  int weyl_m = 5;
  auto* weyl = app.add_subcommand("weyl", "Weyl sums of a weight along the integers");
  weyl->add_option("weight", weyl_w, "phase g of lambda_n = e(g(n)), e.g. sqrt2*t^2, or gp:q;alpha:p;...")->required();
  weyl->add_option("--m-max", weyl_m)->check(CLI::Range(1, 64));

  std::string bosh_e;
  auto* bosh = app.add_subcommand("bosh", "equidistribution trichotomy for g in the Hardy field");
  bosh->add_option("g", bosh_e)->required();

  std::string q_w;
  int q_k = 2, q_m = 2;
  auto* qtest = app.add_subcommand("qtest", "property (Q) for a weight");
  qtest->add_option("weight", q_w)->required();
  qtest->add_option("--k-max", q_k)->check(CLI::Range(1, 6));
  qtest->add_option("--m-bound", q_m)->check(CLI::Range(1, 6));

  std::string avg_file;
  auto* average = app.add_subcommand("average", "one averaging experiment from a JSON config");
  average->add_option("config", avg_file, "experiment JSON file")->required()->check(CLI::ExistingFile);

  std::string bat_file;
  auto* battery = app.add_subcommand("battery", "run an experiment battery and the van der Corput gate");
  battery->add_option("battery", bat_file, "battery JSON file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  std::int64_t N = 0;
  if (!g.N.empty() && !parse_horizon(g.N, N)) {
    std::cerr << "ergolab: --N must be a positive integer, got '" << g.N << "'\n";
    return static_cast<int>(ERGO_INVALID_ARGUMENT);
  }

  Settings s;
  ergo_status st = ergo_settings_new(&s.p);
  if (st == ERGO_OK) st = ergo_settings_set_n(s.p, N);
  if (st == ERGO_OK) st = ergo_settings_set_precision_digits(s.p, g.precision_digits);
  if (st == ERGO_OK) st = ergo_settings_set_tolerance(s.p, g.tol, g.tol_diverge);
  if (st == ERGO_OK) st = ergo_settings_set_jobs(s.p, g.jobs);
  if (st == ERGO_OK) st = ergo_settings_set_seed(s.p, g.seed);
  if (st != ERGO_OK) return fail(st);

  const auto started = std::chrono::steady_clock::now();
  ergo_report* rep = nullptr;
  std::string sub;
  try {
    if (*classify) {
      sub = "classify";
      echo = {{"f", expr}};
      st = ergo_classify(s.p, expr.c_str(), &rep);
    } else if (*seq) {
      sub = "seq";
      echo = {{"f", seq_f}, {"h", seq_h}, {"dedup", seq_dedup}, {"binary", seq_binary}};
      st = ergo_seq(s.p, seq_f.c_str(), seq_h.c_str(), seq_dedup, seq_binary, &rep);
    } else if (*bk) {
      sub = "bk";
      echo = {{"f", bk_f}, {"K", bk_K}};
      st = ergo_bk(s.p, bk_f.c_str(), bk_K, &rep);
    } else if (*set) {
      sub = "set";
      std::int64_t k = 0, m = 0;
      if (!set_akm.empty()) {
        char comma = 0;
        std::istringstream in(set_akm);
        if (!(in >> k >> comma >> m) || comma != ',' || k < 1 || m < 1 || !in.eof()) {
          std::cerr << "ergolab: --akm expects k,m with k, m >= 1\n";
          return static_cast<int>(ERGO_INVALID_ARGUMENT);
        }
      }
      echo = {{"spec", set_spec}, {"regularity", set_regularity}, {"format", set_format}, {"akm", set_akm}};
      st = ergo_set(s.p, set_spec.c_str(), set_regularity, set_format.c_str(), k, m, &rep);
    } else if (*weyl) {
      sub = "weyl";
      echo = {{"weight", weyl_w}, {"m_max", weyl_m}};
      st = ergo_weyl(s.p, weyl_w.c_str(), weyl_m, &rep);
    } else if (*bosh) {
      sub = "bosh";
      echo = {{"g", bosh_e}};
      st = ergo_bosh(s.p, bosh_e.c_str(), &rep);
    } else if (*qtest) {
      sub = "qtest";
      echo = {{"weight", q_w}, {"k_max", q_k}, {"m_bound", q_m}};
      st = ergo_qtest(s.p, q_w.c_str(), q_k, q_m, &rep);
    } else if (*average) {
      sub = "average";
      const std::string text = read_file(avg_file);
      echo = {{"config_file", avg_file}, {"config", Json::parse(text)}};
      st = ergo_average(s.p, text.c_str(), &rep);
    } else if (*battery) {
      sub = "battery";
      const std::string text = read_file(bat_file);
      echo = {{"battery_file", bat_file}, {"battery", Json::parse(text)}};
      st = ergo_battery(s.p, text.c_str(), &rep);
    }
  } catch (const std::exception& e) {
    std::cerr << "ergolab: " << e.what() << "\n";
    return static_cast<int>(ERGO_IO_ERROR);
  }
  if (st != ERGO_OK) return fail(st);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const std::string report = ergo_report_json(rep);
  const bool failed = ergo_report_failed(rep) != 0;
  if (!g.quiet) std::cout << report;

  if (!g.out_dir.empty()) {
    try {
      const fs::path dir(g.out_dir);
      fs::create_directories(dir);
      std::vector<std::string> outputs;
      write_atomic(dir / "report.json", report.data(), report.size());
      outputs.push_back((dir / "report.json").string());
      for (std::size_t i = 0; i < ergo_report_file_count(rep); ++i) {
        std::size_t size = 0;
        const char* data = ergo_report_file_data(rep, i, &size);
        const fs::path p = dir / ergo_report_file_name(rep, i);
        write_atomic(p, data, size);
        outputs.push_back(p.string());
      }
      Json manifest = {
          {"tool", "ergolab"},
          {"version", ergo_version()},
          {"subcommand", sub},
          {"arguments", echo},
          {"settings",
           {{"N", g.N.empty() ? Json(nullptr) : Json(N)},
            {"precision_digits", g.precision_digits},
            {"tol", g.tol},
            {"tol_diverge", g.tol_diverge},
            {"jobs", g.jobs},
            {"seed", g.seed}}},
          {"outputs", outputs},
          {"failed", failed},
          {"started_utc", utc_now()},
          {"wall_clock_seconds", wall},
      };
      const std::string mtext = manifest.dump(2) + "\n";
      write_atomic(dir / "manifest.json", mtext.data(), mtext.size());
    } catch (const std::exception& e) {
      ergo_report_free(rep);
      std::cerr << "ergolab: " << e.what() << "\n";
      return static_cast<int>(ERGO_IO_ERROR);
    }
  }
  ergo_report_free(rep);
  if (failed) {
    std::cerr << "ergolab: expectation or gate failed\n";
    return static_cast<int>(ERGO_PROPERTY_FAILED);
  }
  return 0;
}
