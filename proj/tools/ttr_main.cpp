// ttr: command-line front end. Flags override values from --config.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ttr/cli.hpp"

namespace {

using nlohmann::json;

// A bare name selects a named curve; anything starting with '{' is parsed as JSON.
json curve_arg(const std::string& s) {
  if (!s.empty() && s.front() == '{') return json::parse(s);
  return {{"kind", "named"}, {"name", s}};
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological recursion on spectral curves"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path, out_dir, curve, suite, twist;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--seed", seed, "random seed");

  auto* dims = app.add_subcommand("dims", "Hitchin moduli dimension table");
  std::optional<int> rank, deg_l, genus, degree;
  bool canonical = false, trace_free = false;
  dims->add_option("--rank", rank);
  dims->add_option("--deg-l", deg_l);
  dims->add_option("--genus", genus);
  dims->add_option("--degree", degree);
  dims->add_flag("--canonical", canonical, "take L = K");
  dims->add_flag("--trace-free", trace_free);

  auto* rec = app.add_subcommand("recursion", "evaluate W(g,n)");
  std::optional<int> g, n, samples, nodes, series_order;
  std::string mode, variant;
  rec->add_option("--curve", curve, "named curve or JSON curve object");
  rec->add_option("--twist", twist, "JSON coefficient list of the twist s(x)");
  rec->add_option("--g", g);
  rec->add_option("--n", n);
  rec->add_option("--mode", mode)->check(CLI::IsMember({"exact", "numeric"}));
  rec->add_option("--variant", variant);
  rec->add_option("--samples", samples);
  rec->add_option("--nodes", nodes, "trapezoid nodes per residue contour");
  rec->add_option("--series-order", series_order, "exact-mode truncation order (0 = automatic)");

  auto* per = app.add_subcommand("periods", "periods, tau and cycles of a genus-1 curve");
  per->add_option("--curve", curve);
  per->add_option("--twist", twist);

  auto* ver = app.add_subcommand("verify", "run checks and emit JSONL records");
  ver->add_option("--suite", suite, "comma list: properties, bergman-normalization, rauch, dm-cubic, taylor, all");
  ver->add_option("--curve", curve);
  ver->add_option("--twist", twist);

  CLI11_PARSE(app, argc, argv);
  if (config_path.empty() && app.get_subcommands().empty()) {
    std::cerr << app.help();
    return ttr::kExitInvalid;
  }

  ttr::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      cfg = ttr::RunConfig::from_json(json::parse(f));
    }
    if (*dims) cfg.command = "dims";
    if (*rec) cfg.command = "recursion";
    if (*per) cfg.command = "periods";
    if (*ver) cfg.command = "verify";
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (threads) cfg.threads = *threads;
    if (seed) cfg.seed = *seed;
    if (!curve.empty()) cfg.curve = curve_arg(curve);
    if (!twist.empty()) cfg.twist = json::parse(twist);
    if (!suite.empty()) cfg.suite = split_commas(suite);
    if (rank) cfg.dims.rank = *rank;
    if (deg_l) cfg.dims.deg_l = *deg_l;
    if (genus) cfg.dims.genus = *genus;
    if (degree) cfg.dims.degree = *degree;
    if (canonical) cfg.dims.canonical = true;
    if (trace_free) cfg.dims.trace_free = true;
    if (g) cfg.recursion.g = *g;
    if (n) cfg.recursion.n = *n;
    if (!mode.empty()) cfg.recursion.mode = mode;
    if (!variant.empty()) cfg.recursion.variant = variant;
    if (samples) cfg.recursion.samples = *samples;
    if (nodes) cfg.recursion.contour_nodes = *nodes;
    if (series_order) cfg.recursion.series_order = *series_order;
  } catch (const std::exception& e) {
    std::cerr << "error: invalid config: " << e.what() << '\n';
    return ttr::kExitInvalid;
  }
  return ttr::run(cfg, std::cout, std::cerr);
}
