// Command-line front end: parses flags with CLI11 and hands off to cli::run.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lucasprod/cli.hpp"

namespace {

using lucasprod::cli::Format;
using lucasprod::cli::RunConfig;

void add_sequence_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--p", cfg.p, "Lucas parameter P")->capture_default_str();
  sub->add_option("--q", cfg.q, "Lucas parameter Q (+1 or -1)")->capture_default_str();
}

void add_common_options(CLI::App* sub, RunConfig& cfg, std::string& format,
                        std::string& cache) {
  sub->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  sub->add_option("--cache", cache, "factor cache file (overrides $LUCAS_FACTOR_CACHE)");
  sub->add_option("--budget", cfg.budget, "rho iterations per composite")->capture_default_str();
  sub->add_option("--jobs", cfg.jobs, "threads for term factorization")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coprime products of Lucas sequence terms: A y^k = U_{n_1} ... U_{n_r}"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "text";
  std::string cache;

  auto* seq = app.add_subcommand("seq", "print U_1..U_N");
  auto* classify = app.add_subcommand("classify", "per-index power-free part and square class");
  auto* admissible = app.add_subcommand("admissible", "indices whose power-free part lives on Supp(A)");
  auto* solve = app.add_subcommand("solve", "all canonical solutions with certificates");
  auto* verify = app.add_subcommand("verify", "certificate or typed rejection for given indices");
  auto* rank = app.add_subcommand("rank", "rank of apparition z(p)");
  auto* primitive = app.add_subcommand("primitive", "primitive divisors of U_n and the obstruction verdict");
  auto* quality = app.add_subcommand("abc-quality", "height, radical and quality of Binet triples");

  for (auto* sub : {seq, classify, admissible, solve, verify, rank, primitive, quality}) {
    add_sequence_options(sub, cfg);
    add_common_options(sub, cfg, format, cache);
  }
  for (auto* sub : {seq, classify, admissible, solve, quality}) {
    sub->add_option("--max", cfg.max_index, "largest index N")->capture_default_str();
  }
  for (auto* sub : {classify, quality}) {
    sub->add_option("--min", cfg.min_index, "smallest index")->capture_default_str();
  }
  for (auto* sub : {classify, admissible, solve, verify, quality}) {
    sub->add_option("--k", cfg.k, "power k >= 2")->capture_default_str();
  }
  for (auto* sub : {admissible, solve, verify, primitive}) {
    sub->add_option("--a", cfg.a, "nonzero coefficient A")->capture_default_str();
  }
  solve->add_option("--r", cfg.max_factors, "maximum number of factors")->capture_default_str();
  verify->add_option("--indices", cfg.indices, "comma-separated indices")
      ->delimiter(',')
      ->required();
  rank->add_option("--prime", cfg.prime, "prime p")->required();
  primitive->add_option("--n", cfg.n, "index n")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lucasprod::cli::kExitUsage;
  }

  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  cfg.format = format == "json" ? Format::Json : Format::Text;
  if (!cache.empty()) cfg.cache_path = cache;
  return lucasprod::cli::run(cfg, std::cout, std::cerr);
}
