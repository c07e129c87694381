#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hexbend/errors.hpp"
#include "hexbend/kernels.hpp"
#include "hexbend/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hexbend: discrete-to-continuum bending studies on the honeycomb lattice"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run the study described by a JSON config file");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suite");
    auto* version = app.add_subcommand("version", "Print version and kernel information");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*version) {
            std::cout << "hexbend " << HEXBEND_VERSION << " (kernels: " << hexbend::simd::to_string(hexbend::simd::active_isa())
                      << ")\n";
            return 0;
        }
        if (*selftest) {
            int failed = 0;
            for (const auto& c : hexbend::run_selftest()) {
                std::cout << (c.passed ? "ok    " : "FAIL  ") << c.name << "  " << c.detail << '\n';
                failed += c.passed ? 0 : 1;
            }
            return failed == 0 ? 0 : 1;
        }
        const hexbend::Config cfg = hexbend::load_config(config_path);
        const hexbend::RunOutcome o = hexbend::run_study(cfg, std::cout);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "extrapolated %.10g  reference %.10g  relative error %.3e\n",
                      o.extrapolated_value, o.reference_value, o.relative_error);
        std::cout << buf;
        return o.ok ? 0 : 1;
    } catch (const hexbend::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
