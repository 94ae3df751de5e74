#include "rafu/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <vector>

#include "json.hpp"
#include "rafu/config.hpp"
#include "rafu/io.hpp"
#include "rafu/model.hpp"
#include "rafu/postprocess.hpp"

namespace rafu {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string error_line(const char* kind, const std::string& message) {
    json j;
    j["error"]["kind"] = kind;
    j["error"]["message"] = message;
    return j.dump() + "\n";
}

std::string level_text(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", alpha);
    return buf;
}

std::string opt_text(const std::optional<std::size_t>& v) {
    return v ? std::to_string(*v) : "none";
}

void print_plan(const Plan& plan, std::ostream& out) {
    out << "sample_size=" << plan.sample_size << "\n"
        << "schedule=" << schedule_kind_name(plan.kind) << "\n"
        << "eval_count=" << plan.eval_count << "\n"
        << "rank=" << opt_text(plan.rank_from_top) << "\n"
        << "achieved_confidence="
        << (plan.achieved_confidence ? format_double(*plan.achieved_confidence) : "none")
        << "\n";
}

void run_validate(const StudyConfig& config, std::ostream& out) {
    out << "config OK\n"
        << "parameters: " << config.aleatory_count() << " aleatory, "
        << config.epistemic_count() << " epistemic\n";
    std::set<std::string> used = config.model.variables();
    std::string unused;
    for (const auto& p : config.parameters)
        if (!used.count(p.name)) {
            if (!unused.empty()) unused += ", ";
            unused += p.name;
        }
    if (!unused.empty()) out << "note: unused parameter(s): " << unused << "\n";
    char digest[24];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(config.digest));
    out << "digest=" << digest << "\n";
    print_plan(make_plan(config.triplet, config), out);
}

void run_plan(const StudyConfig& config, const std::string& out_dir, std::ostream& out) {
    const Plan plan = make_plan(config.triplet, config);
    fs::create_directories(out_dir);
    const std::string path = out_dir + "/plan.json";
    write_plan_file(path, plan);
    print_plan(plan, out);
    out << "wrote " << path << "\n";
}

void run_propagate(const StudyConfig& config, const CommandArgs& args, std::ostream& out) {
    const std::string plan_path = args.out_dir + "/plan.json";
    if (!fs::exists(plan_path))
        throw ValidationError("no plan found at " + plan_path + "; run plan first");
    const Plan plan = read_plan_file(plan_path);
    if (args.seed && *args.seed != plan.seed)
        throw ValidationError("seed " + std::to_string(*args.seed) +
                              " conflicts with the plan's seed " +
                              std::to_string(plan.seed) + "; rerun plan with the new seed");
    const FuzzySample sample = propagate(plan, config);
    const std::string csv_path = args.out_dir + "/sample.csv";
    const std::string meta_path = args.out_dir + "/sample_meta.json";
    write_sample_files(csv_path, meta_path, sample);
    out << "eval_calls=" << sample.eval_calls << "\n"
        << "failures=" << sample.failure_count() << "\n"
        << "wrote " << csv_path << "\n"
        << "wrote " << meta_path << "\n";
}

void run_summarize(const StudyConfig& config, const CommandArgs& args, std::ostream& out) {
    const std::string csv_path = args.out_dir + "/sample.csv";
    const std::string meta_path = args.out_dir + "/sample_meta.json";
    if (!fs::exists(csv_path) || !fs::exists(meta_path))
        throw ValidationError("no sample found in " + args.out_dir +
                              "; run propagate first");
    const FuzzySample sample = read_sample_files(csv_path, meta_path);
    if (sample.plan.config_digest != config.digest)
        throw DigestMismatchError(
            "sample was produced from a different config (digest mismatch); rerun plan "
            "and propagate");
    const Plan& plan = sample.plan;

    json summary;
    summary["schedule"] = schedule_kind_name(plan.kind);
    summary["sample_size"] = plan.sample_size;
    summary["eval_count"] = plan.eval_count;
    summary["eval_calls"] = sample.eval_calls;
    summary["failure_count"] = sample.failure_count();
    summary["rank"] = plan.rank_from_top ? json(*plan.rank_from_top) : json(nullptr);
    summary["achieved_confidence"] =
        plan.achieved_confidence ? json(*plan.achieved_confidence) : json(nullptr);

    std::vector<std::pair<std::string, PBox>> boxes;
    switch (plan.kind) {
        case ScheduleKind::Fixed: {
            const double alpha = plan.levels.at(0);
            boxes.emplace_back("pbox_alpha_" + level_text(alpha) + ".csv",
                               pbox_at_alpha(sample, alpha));
            if (plan.rank_from_top) {
                // +inf (failures accepted at or above the rank) has no JSON
                // number; ship it as a string
                const double bound = percentile_bound(sample, plan, args.accept_failures);
                summary["percentile_bound"] =
                    std::isfinite(bound) ? json(bound) : json("inf");
            }
            break;
        }
        case ScheduleKind::Random:
            boxes.emplace_back("pbox_mean.csv", mean_pbox(sample));
            break;
        case ScheduleKind::Dual: {
            auto pair = double_pair(sample);
            boxes.emplace_back("pbox_pessimistic.csv", std::move(pair.first));
            boxes.emplace_back("pbox_optimistic.csv", std::move(pair.second));
            break;
        }
        case ScheduleKind::Grid: {
            for (double alpha : plan.levels)
                boxes.emplace_back("pbox_alpha_" + level_text(alpha) + ".csv",
                                   pbox_at_alpha(sample, alpha));
            boxes.emplace_back("pbox_mean.csv", mean_pbox(sample));
            break;
        }
    }

    fs::create_directories(args.out_dir);
    std::vector<std::string> files;
    for (const auto& [name, pbox] : boxes) {
        const std::string path = args.out_dir + "/" + name;
        write_pbox_csv(path, pbox);
        files.push_back(name);
        out << "wrote " << path << "\n";
    }
    summary["pbox_files"] = files;
    const std::string summary_path = args.out_dir + "/summary.json";
    {
        std::ofstream f(summary_path);
        if (!f) throw std::runtime_error("cannot create " + summary_path);
        f << summary.dump(2) << "\n";
        if (!f.good()) throw std::runtime_error("failed while writing " + summary_path);
    }
    if (summary.contains("percentile_bound")) {
        const json& bound = summary["percentile_bound"];
        out << "percentile_bound="
            << (bound.is_number() ? format_double(bound.get<double>())
                                  : bound.get<std::string>())
            << "\n";
    }
    out << "wrote " << summary_path << "\n";
}

} // namespace

int run_command(const CommandArgs& args, std::ostream& out, std::ostream& err) {
    try {
        if (args.command != "validate" && args.command != "plan" &&
            args.command != "propagate" && args.command != "summarize")
            throw ValidationError("unknown command \"" + args.command +
                                  "\" (expected validate, plan, propagate, summarize)");
        StudyConfig config = load_config(args.config_path);
        if (args.seed) config.seed = *args.seed;
        if (args.command == "validate")
            run_validate(config, out);
        else if (args.command == "plan")
            run_plan(config, args.out_dir, out);
        else if (args.command == "propagate")
            run_propagate(config, args, out);
        else
            run_summarize(config, args, out);
        return 0;
    } catch (const DigestMismatchError& e) {
        err << error_line("digest_mismatch", e.what());
        return 1;
    } catch (const ParseError& e) {
        err << error_line("validation", e.what());
        return 1;
    } catch (const ValidationError& e) {
        err << error_line("validation", e.what());
        return 1;
    } catch (const std::exception& e) {
        err << error_line("runtime", e.what());
        return 2;
    }
}

} // namespace rafu
