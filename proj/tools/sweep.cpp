#include "sweep.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "jcm/errors.hpp"

namespace jcm::cli {

namespace {

namespace fs = std::filesystem;

struct RunOutcome {
    int exit_code = 0;
    std::vector<std::string> args;
    std::string error;
    std::vector<std::string> files;
};

bool valid_name(const std::string& s) {
    return !s.empty() && s != "." && s != ".." && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    });
}

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw InvalidArgument(where + ": expected a boolean, got '" + v + "'");
}

RunOutcome execute(const SweepRun& run, const fs::path& dir) {
    RunOutcome o;
    o.args.push_back(run.command);
    for (const auto& [key, value] : run.flags) {
        o.args.push_back("--" + key);
        o.args.push_back(value);
    }
    const bool writes_data = run.command != "moments";
    if (writes_data) {
        o.args.insert(o.args.end(), {"--out", (dir / "data.csv").string()});
        o.files.push_back("data.csv");
        if (run.svg) {
            o.args.insert(o.args.end(), {"--svg", (dir / "plot.svg").string()});
            o.files.push_back("plot.svg");
        }
    }
    std::ostringstream out, err;
    try {
        fs::create_directories(dir);
        o.exit_code = jcm::cli::run(o.args, out, err);
    } catch (const std::exception& e) {
        o.exit_code = kExitNumeric;
        err << e.what();
    }
    if (o.exit_code == 0) {
        std::ofstream f(dir / "summary.json", std::ios::binary);
        f << out.str();
        o.files.insert(o.files.begin() + (writes_data ? 1 : 0), "summary.json");
    } else {
        o.error = err.str();
        while (!o.error.empty() && o.error.back() == '\n') o.error.pop_back();
        o.files.clear();
    }
    return o;
}

}  // namespace

std::vector<SweepRun> read_manifest(const std::string& path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw InvalidArgument(std::string("manifest: ") + e.what());
    }
    std::vector<SweepRun> runs;
    for (const auto& [name, section] : tree) {
        if (section.empty()) throw InvalidArgument("manifest: key '" + name + "' outside a [run] section");
        if (!valid_name(name)) throw InvalidArgument("manifest: run name '" + name + "' is not a plain file name");
        SweepRun r;
        r.name = name;
        for (const auto& [key, node] : section) {
            const std::string value = node.get_value<std::string>();
            if (key == "command") {
                r.command = value;
            } else if (key == "svg") {
                r.svg = parse_bool(value, name + ".svg");
            } else if (key == "note") {
                r.note = value;
            } else {
                if (key == "out" || key == "svg-file") throw InvalidArgument("manifest: " + name + " sets an output path");
                r.flags.emplace_back(key, value);
            }
        }
        if (r.command != "pmf" && r.command != "dyn" && r.command != "moments")
            throw InvalidArgument("manifest: " + name + " needs command = pmf, dyn or moments");
        runs.push_back(std::move(r));
    }
    return runs;
}

int run_sweep(const std::string& manifest_path, const std::string& out_dir, int jobs, std::ostream& out,
              std::ostream& err) {
    if (jobs < 1) throw InvalidArgument("--jobs must be >= 1");
    const auto runs = read_manifest(manifest_path);
    if (runs.empty()) throw InvalidArgument("no runs in " + manifest_path);

    const fs::path root(out_dir);
    fs::create_directories(root);
    std::vector<RunOutcome> outcomes(runs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) outcomes[i] = execute(runs[i], root / runs[i].name);
    };
    std::vector<std::thread> pool;
    const int threads = std::min<int>(jobs, static_cast<int>(runs.size()));
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    nlohmann::ordered_json index;
    index["manifest"] = manifest_path;
    index["runs"] = nlohmann::ordered_json::array();
    int status = kExitOk;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        const auto& o = outcomes[i];
        nlohmann::ordered_json entry;
        entry["name"] = r.name;
        entry["command"] = r.command;
        entry["note"] = r.note;
        entry["args"] = o.args;
        entry["exit_code"] = o.exit_code;
        entry["directory"] = r.name;
        entry["files"] = o.files;
        if (o.exit_code != 0) {
            entry["error"] = o.error;
            if (status == kExitOk) status = o.exit_code;
            ++failures;
            err << "sweep: " << r.name << " failed (exit " << o.exit_code << "): " << o.error << '\n';
        }
        index["runs"].push_back(entry);
    }
    std::ofstream f(root / "index.json", std::ios::binary);
    f << index.dump(2) << '\n';
    if (!f) throw NumericError("failed writing index.json");
    out << "sweep: " << runs.size() - failures << " of " << runs.size() << " runs succeeded; index at "
        << (root / "index.json").string() << '\n';
    return status;
}

}  // namespace jcm::cli
