#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clsim/clsim.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitViolation = 2;

clsim::SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw clsim::ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return clsim::parse_config(buf.str());
  } catch (const clsim::ConfigError& e) {
    throw clsim::ConfigError(path + ": " + e.what());
  }
}

void print_report(const clsim::SimConfig& c, const clsim::MetricsReport& m) {
  std::cout << "policy                      " << clsim::to_string(c.policy) << "\n"
            << "alpha                       " << c.alpha << "\n"
            << "cache_fraction              " << c.cache_fraction << "\n"
            << "seed                        " << c.seed << "\n"
            << "h_th                        " << c.effective_h_th() << "\n"
            << "hit_ratio                   " << clsim::format_g6(m.hit_ratio) << "\n"
            << "avg_hit_distance_hops       " << clsim::format_g6(m.avg_hit_distance_hops) << "\n"
            << "avg_download_time_ms        " << clsim::format_g6(m.avg_download_time_ms)
            << "  (propagation delay only)\n"
            << "avg_byte_hops_per_request   " << clsim::format_g6(m.avg_byte_hops_per_request)
            << "\n";
}

template <typename T, typename F>
std::vector<T> convert_list(const std::vector<std::string>& raw, const char* flag, F&& conv) {
  std::vector<T> out;
  for (const auto& s : raw) {
    try {
      out.push_back(conv(s));
    } catch (const std::exception&) {
      throw clsim::ConfigError(std::string(flag) + ": invalid value '" + s + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical CCN chunk-caching simulator (LCE, LCD, MCD, CLS)"};
  app.require_subcommand(1);

  std::string config_path;
  bool summary = false;

  auto* run_cmd = app.add_subcommand("run", "Run one simulation and print its metrics");
  run_cmd->add_option("config", config_path, "Config file (key = value lines)")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  std::vector<std::string> policies{"lce", "lcd", "cls"}, alphas{"0.3", "0.9"},
      fractions{"0.1", "0.2", "0.3", "0.4", "0.5"}, seeds{"1"};
  std::string out_path;
  unsigned threads = 0;
  sweep_cmd->add_option("config", config_path, "Base config file")->required();
  sweep_cmd->add_option("--policies", policies, "Comma-separated policies")->delimiter(',');
  sweep_cmd->add_option("--alphas", alphas, "Comma-separated Zipf exponents")->delimiter(',');
  sweep_cmd->add_option("--cache-fractions", fractions, "Comma-separated cache fractions")
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", seeds, "Comma-separated seeds")->delimiter(',');
  sweep_cmd->add_option("--out", out_path, "CSV output path")->required();
  sweep_cmd->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  sweep_cmd->add_flag("--summary", summary, "Also print a table to standard output");

  auto* replay_cmd =
      app.add_subcommand("replay-figure", "Replay a scripted scenario and print state changes");
  int figure = 0;
  replay_cmd->add_option("figure", figure, "Scenario number")
      ->required()
      ->check(CLI::IsMember({2, 3, 5}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) {
      clsim::SimConfig c = load_config(config_path);
      print_report(c, clsim::run(c));
    } else if (*sweep_cmd) {
      clsim::SweepSpec spec;
      spec.base = load_config(config_path);
      spec.policies = convert_list<clsim::PolicyKind>(policies, "--policies", [](const std::string& s) {
        auto p = clsim::parse_policy(s);
        if (!p) throw std::invalid_argument(s);
        return *p;
      });
      auto to_double = [](const std::string& s) {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
      };
      spec.alphas = convert_list<double>(alphas, "--alphas", to_double);
      spec.cache_fractions = convert_list<double>(fractions, "--cache-fractions", to_double);
      spec.seeds = convert_list<std::uint64_t>(seeds, "--seeds", [](const std::string& s) {
        std::size_t pos = 0;
        if (!s.empty() && s.front() == '-') throw std::invalid_argument(s);
        auto v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return static_cast<std::uint64_t>(v);
      });
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw clsim::ConfigError("--out: cannot open '" + out_path + "' for writing");
      auto rows = clsim::run_sweep(spec, out, threads);
      if (summary) clsim::print_summary(rows, std::cout);
    } else if (*replay_cmd) {
      clsim::ReplayResult r = figure == 2   ? clsim::replay_figure2()
                              : figure == 3 ? clsim::replay_figure3()
                                            : clsim::replay_figure5();
      for (const auto& line : r.lines) std::cout << line << "\n";
    }
  } catch (const clsim::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const clsim::ProtocolViolation& e) {
    std::cerr << "protocol violation: " << e.what() << "\n";
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
