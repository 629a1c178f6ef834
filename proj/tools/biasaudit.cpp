// Command-line front end: one audit command per invocation.
//
// Exit codes: 0 success, 1 data error, 2 usage or configuration error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "biasaudit/errors.hpp"
#include "biasaudit/report.hpp"

namespace ba = biasaudit;

int main(int argc, char** argv) {
  CLI::App app{"Representation-space bias audit"};
  app.set_version_flag("--version", std::string(ba::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k;
  app.add_option("--config", config_path, "JSON audit configuration")->required();
  app.add_option("--out", out_dir, "Output directory (overrides config)");
  app.add_option("--seed", seed, "Seed for distortions (overrides config)");
  app.add_option("--k", k, "Neighbor count (overrides config)")->check(CLI::PositiveNumber);

  app.add_subcommand("gap", "Shared-failure analysis and gap manifest");
  app.add_subcommand("colorbias", "Mean hue-signature EMD to nearest neighbors over the gap set");
  app.add_subcommand("shapebias", "Probe accuracy on the silhouette set");
  app.add_subcommand("distort", "Write distorted datasets and/or accuracy deltas");
  app.add_subcommand("knn", "kNN accuracy over the gap set");
  app.add_subcommand("probe", "Train linear probes on frozen features");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    ba::ConfigOverrides overrides;
    if (out_dir) overrides.out_dir = *out_dir;
    overrides.seed = seed;
    overrides.k = k;
    const ba::AuditConfig cfg = ba::load_config(config_path, overrides);

    if (command == "gap") {
      const auto gap = ba::cmd_gap(cfg);
      std::cout << "gap: " << gap.shared_wrong_count << " shared wrong, " << gap.shared_wrong_same_count
                << " with the same label, " << gap.gap_count << " in gap\n";
    } else if (command == "colorbias") {
      ba::cmd_colorbias(cfg);
    } else if (command == "shapebias") {
      ba::cmd_shapebias(cfg);
    } else if (command == "distort") {
      ba::cmd_distort(cfg);
    } else if (command == "knn") {
      ba::cmd_knn(cfg);
    } else if (command == "probe") {
      ba::cmd_probe(cfg);
    }
    if (command != "gap") std::cout << command << ": reports written to " << cfg.out_dir.string() << "\n";
  } catch (const ba::Error& e) {
    std::cerr << "biasaudit " << command << ": " << ba::to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ba::ErrorKind::Config ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "biasaudit " << command << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
