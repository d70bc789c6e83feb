#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eprlab/config.hpp"

namespace eprlab {

// 17-significant-digit decimal rendering; lossless double round trip.
std::string format_double(double v);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Runs one subcommand (state | evolve | discriminate | signal-test |
// kim-shih | persistence | bell | oracle-check), writing report.json and the
// subcommand's CSV files into out_dir. Returns the process exit status:
// 0 on success, 1 when oracle-check finds an out-of-tolerance deviation.
// Failures inside modules surface as exceptions for the caller to report.
int dispatch(const RunConfig& cfg, const std::string& subcommand,
             const std::filesystem::path& out_dir, int workers = 1);

}  // namespace eprlab
