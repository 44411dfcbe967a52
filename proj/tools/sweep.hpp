#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jcm::cli {

// One [section] of an INI manifest.  Keys other than `command`, `svg` and
// `note` are passed through as --key value flags.
struct SweepRun {
    std::string name;
    std::string command;
    std::vector<std::pair<std::string, std::string>> flags;
    bool svg = true;
    std::string note;
};

std::vector<SweepRun> read_manifest(const std::string& path);

// Runs every entry on `jobs` workers, each in out_dir/<name>/ with data.csv,
// summary.json and optionally plot.svg; writes out_dir/index.json.  Returns
// the exit code of the first failing run in manifest order, or 0.
int run_sweep(const std::string& manifest_path, const std::string& out_dir, int jobs, std::ostream& out,
              std::ostream& err);

}  // namespace jcm::cli
