#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "isoposet/cli.hpp"

using namespace isoposet;

int main(int argc, char** argv) {
  CLI::App app{"partial-isometry posets and 2-nest operator spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::kToolVersion);

  // subcommand name -> flag -> value
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& spec : cli::commands()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    subs[spec.name] = sub;
    auto& store = values[spec.name];
    // Required flags are enforced by cli::run so that their absence still
    // yields a JSON report.
    for (const auto& f : spec.flags) sub->add_option("--" + f.name, store[f.name], f.help);
    for (const auto& f : cli::common_flags()) sub->add_option("--" + f.name, store[f.name], f.help);
  }

  if (argc > 1 && argv[1][0] != '-' && subs.count(argv[1]) == 0) {
    const cli::Report report = cli::run(argv[1], {});
    std::cout << report.render();
    return cli::exit_code(report.status);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const std::string command = argc > 1 ? argv[1] : "";
    const cli::Report report = cli::error_report(command, e.what());
    std::cout << report.render();
    return cli::exit_code(report.status);
  }

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    cli::Args args;
    for (const auto& [flag, value] : values[name]) {
      if (sub->get_option("--" + flag)->count() > 0) args[flag] = value;
    }
    return cli::emit(cli::run(name, args), args);
  }
  return 2;
}
