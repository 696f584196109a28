#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <gheat/gheat.hpp>

int main(int argc, char** argv) {
    CLI::App app{"graph heat-semigroup toolkit: kernels, curvature, blow-up runs"};
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    std::vector<std::string> overrides;

    app.add_option("--config", config_path, "run configuration file (JSON)")
        ->required();
    app.add_option("--out", out_dir, "output directory (takes precedence over the config)");
    app.add_option("--seed", seed, "rng seed (takes precedence over the config)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--override", overrides,
                   "key.path=value applied onto the config before validation")
        ->take_all();
    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<std::string> patches = overrides;
        if (!out_dir.empty()) patches.push_back("out=" + nlohmann::json(out_dir).dump());
        if (seed >= 0) patches.push_back("seed=" + std::to_string(seed));
        const gheat::RunConfig config = gheat::load_config(config_path, patches);
        const gheat::RunOutcome outcome = gheat::run(config);
        std::cout << outcome.summary << "\n";
        return 0;
    } catch (const gheat::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 99;
    }
}
