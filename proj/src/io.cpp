#include "rafu/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rafu {

namespace {

using nlohmann::json;

std::string digest_hex(std::uint64_t digest) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

std::uint64_t digest_from_hex(const std::string& s) {
    return std::strtoull(s.c_str(), nullptr, 16);
}

json plan_to_json(const Plan& plan) {
    json schedule;
    schedule["kind"] = schedule_kind_name(plan.kind);
    if (plan.kind == ScheduleKind::Random)
        schedule["alphas"] = plan.random_alphas;
    else
        schedule["levels"] = plan.levels;
    json j;
    j["sample_size"] = plan.sample_size;
    j["schedule"] = schedule;
    j["eval_count"] = plan.eval_count;
    j["rank"] = plan.rank_from_top ? json(*plan.rank_from_top) : json(nullptr);
    j["achieved_confidence"] =
        plan.achieved_confidence ? json(*plan.achieved_confidence) : json(nullptr);
    j["seed"] = plan.seed;
    j["config_digest"] = digest_hex(plan.config_digest);
    return j;
}

Plan plan_from_json(const json& j, const std::string& ctx) {
    try {
        Plan plan;
        plan.sample_size = j.at("sample_size").get<std::size_t>();
        plan.eval_count = j.at("eval_count").get<std::size_t>();
        if (!j.at("rank").is_null())
            plan.rank_from_top = j.at("rank").get<std::size_t>();
        if (!j.at("achieved_confidence").is_null())
            plan.achieved_confidence = j.at("achieved_confidence").get<double>();
        plan.seed = j.at("seed").get<std::uint64_t>();
        plan.config_digest = digest_from_hex(j.at("config_digest").get<std::string>());
        const json& schedule = j.at("schedule");
        const std::string kind = schedule.at("kind").get<std::string>();
        if (kind == "fixed")
            plan.kind = ScheduleKind::Fixed;
        else if (kind == "random_alpha")
            plan.kind = ScheduleKind::Random;
        else if (kind == "dual")
            plan.kind = ScheduleKind::Dual;
        else if (kind == "grid")
            plan.kind = ScheduleKind::Grid;
        else
            throw ValidationError("unknown schedule kind \"" + kind + "\"");
        if (plan.kind == ScheduleKind::Random)
            plan.random_alphas = schedule.at("alphas").get<std::vector<double>>();
        else
            plan.levels = schedule.at("levels").get<std::vector<double>>();
        return plan;
    } catch (const json::exception& e) {
        throw ValidationError(ctx + ": malformed plan: " + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ValidationError("cannot open " + path);
    try {
        return json::parse(file);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot create " + path);
    file << text;
    if (!file.good()) throw std::runtime_error("failed while writing " + path);
}

std::string sanitize(std::string s) {
    for (char& ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ' ';
    return s;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_plan_file(const std::string& path, const Plan& plan) {
    write_text_file(path, plan_to_json(plan).dump(2) + "\n");
}

Plan read_plan_file(const std::string& path) {
    return plan_from_json(read_json_file(path), path);
}

void write_sample_files(const std::string& csv_path, const std::string& meta_path,
                        const FuzzySample& sample) {
    std::string csv = "sample_index,alpha,lo,hi,status\n";
    for (const auto& r : sample.records) {
        csv += std::to_string(r.sample_index);
        csv += ',';
        csv += format_double(r.alpha);
        csv += ',';
        if (r.ok()) {
            csv += format_double(r.output->lo);
            csv += ',';
            csv += format_double(r.output->hi);
            csv += ",ok\n";
        } else {
            csv += ",,error: ";
            csv += sanitize(r.error);
            csv += '\n';
        }
    }
    write_text_file(csv_path, csv);

    json meta;
    meta["plan"] = plan_to_json(sample.plan);
    meta["config_digest"] = digest_hex(sample.plan.config_digest);
    meta["eval_calls"] = sample.eval_calls;
    meta["failure_count"] = sample.failure_count();
    write_text_file(meta_path, meta.dump(2) + "\n");
}

FuzzySample read_sample_files(const std::string& csv_path, const std::string& meta_path) {
    const json meta = read_json_file(meta_path);
    FuzzySample sample;
    try {
        sample.plan = plan_from_json(meta.at("plan"), meta_path);
        sample.eval_calls = meta.at("eval_calls").get<std::size_t>();
    } catch (const json::exception& e) {
        throw ValidationError(meta_path + ": malformed sample metadata: " + e.what());
    }

    std::ifstream file(csv_path);
    if (!file) throw ValidationError("cannot open " + csv_path);
    std::string line;
    if (!std::getline(file, line) || line != "sample_index,alpha,lo,hi,status")
        throw ValidationError(csv_path + ": unexpected header");
    std::size_t line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t pos = 0;
        std::string fields[4];
        for (auto& field : fields) {
            const std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos)
                throw ValidationError(csv_path + ":" + std::to_string(line_no) +
                                      ": expected 5 comma-separated fields");
            field = line.substr(pos, comma - pos);
            pos = comma + 1;
        }
        const std::string status = line.substr(pos);
        FuzzyRecord rec;
        rec.sample_index = std::strtoull(fields[0].c_str(), nullptr, 10);
        rec.alpha = std::strtod(fields[1].c_str(), nullptr);
        if (status == "ok") {
            rec.output = Interval(std::strtod(fields[2].c_str(), nullptr),
                                  std::strtod(fields[3].c_str(), nullptr));
        } else if (status.rfind("error: ", 0) == 0) {
            rec.error = status.substr(7);
        } else {
            throw ValidationError(csv_path + ":" + std::to_string(line_no) +
                                  ": unexpected status \"" + status + "\"");
        }
        sample.records.push_back(std::move(rec));
    }
    return sample;
}

void write_pbox_csv(const std::string& path, const PBox& pbox) {
    std::set<double> xs(pbox.f_low.xs().begin(), pbox.f_low.xs().end());
    xs.insert(pbox.f_up.xs().begin(), pbox.f_up.xs().end());
    std::string csv = "x,f_low,f_up\n";
    for (double x : xs) {
        csv += format_double(x);
        csv += ',';
        csv += format_double(pbox.f_low(x));
        csv += ',';
        csv += format_double(pbox.f_up(x));
        csv += '\n';
    }
    write_text_file(path, csv);
}

} // namespace rafu
