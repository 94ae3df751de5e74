#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rafu/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"joint aleatory/epistemic uncertainty propagation"};
    app.require_subcommand(1);

    rafu::CommandArgs args;
    std::uint64_t seed = 0;

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"validate", "check the config and print the derived plan; writes nothing"},
        {"plan", "derive sample size, alpha schedule and evaluation budget; writes plan.json"},
        {"propagate", "run the planned evaluations; writes sample.csv and sample_meta.json"},
        {"summarize", "turn the sample into p-box CSVs and summary.json"},
    };
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", args.config_path, "study config (JSON)")->required();
        sub->add_option("--out", args.out_dir, "output directory (default: .)");
        sub->add_option("--seed", seed, "override the config seed");
        if (std::string(s.name) == "summarize")
            sub->add_flag("--accept-failures", args.accept_failures,
                          "count failed evaluations as +inf in the percentile bound");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    CLI::App* sub = app.get_subcommands().at(0);
    args.command = sub->get_name();
    if (sub->count("--seed")) args.seed = seed;
    return rafu::run_command(args, std::cout, std::cerr);
}
