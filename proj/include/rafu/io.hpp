#ifndef RAFU_IO_HPP
#define RAFU_IO_HPP

#include <string>

#include "rafu/engine.hpp"
#include "rafu/postprocess.hpp"

namespace rafu {

/// Text that parses back to exactly the same double (%.17g).
std::string format_double(double v);

void write_plan_file(const std::string& path, const Plan& plan);
Plan read_plan_file(const std::string& path);

/// CSV columns: sample_index, alpha, lo, hi, status ("ok" or
/// "error: reason" with lo/hi left empty). The JSON sidecar carries the
/// plan, the config digest and the evaluation counter.
void write_sample_files(const std::string& csv_path, const std::string& meta_path,
                        const FuzzySample& sample);
FuzzySample read_sample_files(const std::string& csv_path, const std::string& meta_path);

/// CSV columns x, f_low, f_up, one row per jump point of either bound.
void write_pbox_csv(const std::string& path, const PBox& pbox);

} // namespace rafu

#endif
