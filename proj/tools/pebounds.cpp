// pebounds --config run.json [--out file] [--format csv|json] [--seed N] [--r R] [--quiet]
//
// Exit codes: 0 ok, 2 bad configuration or argument, 3 numerical failure, 1 other.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pebounds/cli/commands.hpp"
#include "pebounds/error.hpp"

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance lower bounds for discrete parameter-estimation models"};
  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<double> r;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_path, "output file (default: config 'output' or stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "RNG seed (fig3)");
  app.add_option("--r", r, "visibility of the qubit model (fig1, fig2)");
  app.add_flag("--quiet", quiet, "suppress progress messages");
  CLI11_PARSE(app, argc, argv);

  using namespace pebounds;
  try {
    cli::RunConfig config = cli::load_config(config_path);
    if (out_path) config.output = *out_path;
    if (format) config.format = *format == "json" ? cli::OutputFormat::json : cli::OutputFormat::csv;
    if (seed) config.seed = *seed;
    if (r) {
      if (!(*r > 0.0 && *r <= 1.0)) throw InvalidArgument("--r must lie in (0, 1]");
      config.r = *r;
    }
    if (!quiet) std::cerr << "running " << cli::to_string(config.command) << "\n";

    const cli::RunOutput result = cli::run(config);
    const std::string text = cli::render(result.table, config.format);
    if (config.output) {
      write_file(*config.output, text);
    } else {
      std::cout << text;
    }
    if (result.samples && config.samples_output) {
      write_file(*config.samples_output, cli::render(*result.samples, config.format));
    }
    if (!quiet && config.output) std::cerr << "wrote " << *config.output << "\n";
    return 0;
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
