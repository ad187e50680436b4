// Command-line front end. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure.
#include "bjj/config.hpp"
#include "bjj/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"two-mode junction: spectra, open-system dynamics, trap design, noise budgets"};
    app.require_subcommand(1);

    std::string config_path;
    bjj::config::RunContext ctx;

    using Runner = std::function<int(const bjj::config::json&, const bjj::config::RunContext&)>;
    struct Command {
        const char* name;
        const char* help;
        Runner run;
    };
    const Command commands[] = {
        {"ground", "ground-state characterization of the two-mode model", bjj::config::run_ground},
        {"evolve", "master-equation evolution with rotation noise and loss", bjj::config::run_evolve},
        {"semiclassical", "phase-space trajectory ensemble", bjj::config::run_semiclassical},
        {"sweep", "double-well barrier sweep and junction parameters", bjj::config::run_sweep},
        {"rates", "noise-spectrum to junction-rate conversion", bjj::config::run_rates},
        {"lifetime", "surface lifetime fit and noise budget", bjj::config::run_lifetime},
    };

    const Runner* selected = nullptr;
    for (const auto& cmd : commands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", ctx.out_dir, "output directory (default: out)");
        sub->add_option("--seed", ctx.seed, "RNG seed for stochastic commands");
        sub->add_option("--threads", ctx.threads, "worker thread count (0 = runtime default)");
        sub->callback([&selected, &cmd]() { selected = &cmd.run; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        bjj::config::apply_thread_count(ctx.threads);
        const auto cfg = bjj::config::load_file(config_path);
        return (*selected)(cfg, ctx);
    } catch (const bjj::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const bjj::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "failure: %s\n", e.what());
        return 3;
    }
}
