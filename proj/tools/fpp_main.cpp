#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fpp/harness.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  int64_t seed = -1;
  std::string t_list;
  std::string out_dir;
  int workers = 0;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--config", opts.config_path, "config file (key = value with [sections])")
      ->required();
  sub->add_option("--seed", opts.seed, "run a single seed, overriding the config");
  sub->add_option("--t", opts.t_list, "comma-separated t grid, overriding the config");
  sub->add_option("--out", opts.out_dir, "output directory");
  sub->add_option("--workers", opts.workers, "worker threads");
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-passage percolation hole experiments"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, fpp::ExperimentKind>> kinds = {
      {"holes", fpp::ExperimentKind::holes},
      {"scaling", fpp::ExperimentKind::scaling},
      {"shape", fpp::ExperimentKind::shape},
      {"barrel", fpp::ExperimentKind::barrel},
      {"plant", fpp::ExperimentKind::plant},
      {"sector", fpp::ExperimentKind::sector},
      {"straightness", fpp::ExperimentKind::straightness},
      {"kesten", fpp::ExperimentKind::kesten},
      {"concentration", fpp::ExperimentKind::concentration},
  };

  std::vector<CommonOpts> opts(kinds.size());
  std::vector<CLI::App*> subs;
  for (size_t i = 0; i < kinds.size(); ++i) {
    CLI::App* sub = app.add_subcommand(kinds[i].first, kinds[i].first + " experiment");
    add_common(sub, opts[i]);
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < kinds.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    fpp::ExperimentConfig config;
    try {
      std::ifstream is(opts[i].config_path);
      if (!is) throw std::invalid_argument("cannot open config: " + opts[i].config_path);
      std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
      config = fpp::parse_config_text(text, kinds[i].second, true);
      if (opts[i].seed >= 0) {
        config.explicit_seeds = {uint64_t(opts[i].seed)};
        config.base_seed = uint64_t(opts[i].seed);
        config.seed_count = 1;
      }
      if (!opts[i].t_list.empty()) config.t_grid = parse_doubles(opts[i].t_list);
      if (!opts[i].out_dir.empty()) config.out_dir = opts[i].out_dir;
      if (opts[i].workers > 0) config.workers = opts[i].workers;
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 1;
    }

    try {
      fpp::RunManifest manifest = fpp::run(config);
      int ok = 0, fail = 0;
      for (const auto& st : manifest.seeds) (st.ok ? ok : fail)++;
      std::cout << fpp::experiment_name(config.kind) << ": " << ok << " ok, " << fail
                << " failed, " << manifest.total_seconds << " s -> " << config.out_dir << "\n";
      return manifest.exit_code;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
