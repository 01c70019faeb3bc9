#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "relq/runner.hpp"

int main(int argc, char** argv) {
    using namespace relq;
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && (args[0] == "--help" || args[0] == "-h" || args[0] == "help")) {
        std::cout << usage_text();
        return 0;
    }

    RunConfig cfg;
    try {
        cfg = parse_config(args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    Report rep;
    auto t0 = std::chrono::steady_clock::now();
    try {
        rep = run_command(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    auto t1 = std::chrono::steady_clock::now();
    rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    try {
        emit_report(rep, cfg.format, cfg.output_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "# " << rep.command << (rep.pass() ? " pass" : " FAIL") << ", wall "
              << rep.wall_ms << " ms\n";
    return rep.pass() ? 0 : 1;
}
