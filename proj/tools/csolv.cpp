#include "csolv/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"exact character-sheaf calculator for solvable groups at desk scale"};
    std::string config_path, command = "verify-all", out_path;
    int threads = 0;
    app.add_option("--config", config_path, "configuration file")->required();
    app.add_option("--command", command,
                   "chartable | blocks | packets | smatrix | shintani | modular | verify-all");
    app.add_option("--out", out_path, "output path (default: config [output] path or stdout)");
    app.add_option("--threads", threads, "worker threads (overrides the config)");
    CLI11_PARSE(app, argc, argv);

    csolv::RunConfig cfg;
    try {
        cfg = csolv::load_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (threads > 0) cfg.threads = (uint32_t)threads;
    if (!out_path.empty()) cfg.out_path = out_path;

    if (cfg.out_path == "-" || cfg.out_path.empty()) return csolv::run_command(cfg, command, std::cout);
    std::ofstream out(cfg.out_path);
    if (!out) {
        std::cerr << "error: cannot open output path '" << cfg.out_path << "'\n";
        return 2;
    }
    return csolv::run_command(cfg, command, out);
}
