#include "ticketdp/results_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>
#include <fmt/os.h>

namespace ticketdp {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::runtime_error(fmt::format("bad number '{}'", s));
    }
    return v;
}

int to_int(const std::string& s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::runtime_error(fmt::format("bad integer '{}'", s));
    }
    return v;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
    return in;
}

void expect_header(std::istream& in, const char* expected, const fs::path& path) {
    std::string header;
    std::getline(in, header);
    if (header != expected) {
        throw std::runtime_error(fmt::format("{}: unexpected header '{}'", path.string(), header));
    }
}

constexpr const char* kRevenueHeader = "scenario,label,env_id,m,revenue";
constexpr const char* kCaseHeader =
    "scenario,label,error_type,env_id,eta,regime,inventory,is_oracle,distinct_from_oracle,runs";

}  // namespace

void write_results(const ResultsStore& store, const BenchmarkConfig& config,
                   const ScenarioManifest& manifest, const fs::path& dir) {
    fs::create_directories(dir);
    {
        auto out = fmt::output_file((dir / kRevenuesFile).string());
        out.print("{}\n", kRevenueHeader);
        for (const auto& c : store.cases) {
            for (std::size_t m = 0; m < c.revenues.size(); ++m) {
                out.print("{},{},{},{},{:.17g}\n", c.scenario_id, c.label, c.env_id, m + 1,
                          c.revenues[m]);
            }
        }
    }
    {
        auto out = fmt::output_file((dir / kCasesFile).string());
        out.print("{}\n", kCaseHeader);
        for (const auto& c : store.cases) {
            out.print("{},{},{},{},{:.17g},{},{},{:d},{:d},{}\n", c.scenario_id, c.label,
                      c.error_type, c.env_id, c.eta, to_string(c.regime), c.inventory,
                      c.is_oracle, c.distinct_from_oracle, c.revenues.size());
        }
    }
    {
        auto out = fmt::output_file((dir / kTimingsFile).string());
        out.print("scenario,label,env_id,solve_seconds,simulate_seconds\n");
        for (const auto& c : store.cases) {
            out.print("{},{},{},{:.6f},{:.6f}\n", c.scenario_id, c.label, c.env_id,
                      c.solve_seconds, c.simulate_seconds);
        }
    }
    {
        auto out = fmt::output_file((dir / kFailuresFile).string());
        for (const auto& f : store.failures) out.print("{}\n", f);
    }
    {
        // Thread count and destination do not affect results, so they stay out of the snapshot.
        std::ofstream out(dir / kConfigFile);
        auto j = to_json(config);
        j.erase("output_dir");
        j["target_mass_resolved"] = calibrated_target_mass(config);
        out << j.dump(2) << '\n';
    }
    save_manifest(manifest, dir / kManifestFile);

    const bool any_traj = std::any_of(store.cases.begin(), store.cases.end(),
                                      [](const CaseResult& c) { return !c.trajectories.empty(); });
    if (any_traj) {
        auto out = fmt::output_file((dir / kTrajectoriesFile).string());
        out.print("scenario,label,env_id,m,t,price,demand,sales,inventory\n");
        for (const auto& c : store.cases) {
            for (std::size_t m = 0; m < c.trajectories.size(); ++m) {
                const auto& tr = c.trajectories[m];
                for (std::size_t t = 0; t < tr.price.size(); ++t) {
                    out.print("{},{},{},{},{},{:.17g},{},{},{}\n", c.scenario_id, c.label, c.env_id,
                              m + 1, t, tr.price[t], tr.demand[t], tr.sales[t], tr.inventory[t]);
                }
            }
        }
    }
}

ResultsStore read_results(const fs::path& dir) {
    ResultsStore store;
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;

    {
        const auto path = dir / kCasesFile;
        auto in = open_in(path);
        expect_header(in, kCaseHeader, path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split(line);
            if (f.size() != 10) throw std::runtime_error(fmt::format("{}: bad row '{}'", path.string(), line));
            CaseResult c;
            c.scenario_id = f[0];
            c.label = f[1];
            c.error_type = f[2];
            c.env_id = f[3];
            c.eta = to_double(f[4]);
            c.regime = parse_deadline_kind(f[5]);
            c.inventory = to_int(f[6]);
            c.is_oracle = f[7] == "1";
            c.distinct_from_oracle = f[8] == "1";
            c.revenues.assign(static_cast<std::size_t>(to_int(f[9])), 0.0);
            index[{c.scenario_id, c.label, c.env_id}] = store.cases.size();
            store.cases.push_back(std::move(c));
        }
    }
    {
        const auto path = dir / kRevenuesFile;
        auto in = open_in(path);
        expect_header(in, kRevenueHeader, path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split(line);
            if (f.size() != 5) throw std::runtime_error(fmt::format("{}: bad row '{}'", path.string(), line));
            const auto it = index.find({f[0], f[1], f[2]});
            if (it == index.end()) {
                throw std::runtime_error(fmt::format("{}: row for unknown case {}/{}/{}",
                                                     path.string(), f[0], f[1], f[2]));
            }
            auto& revenues = store.cases[it->second].revenues;
            const int m = to_int(f[3]);
            if (m < 1 || static_cast<std::size_t>(m) > revenues.size()) {
                throw std::runtime_error(fmt::format("{}: run index {} out of range", path.string(), m));
            }
            revenues[static_cast<std::size_t>(m) - 1] = to_double(f[4]);
        }
    }
    if (fs::exists(dir / kFailuresFile)) {
        std::ifstream in(dir / kFailuresFile);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) store.failures.push_back(line);
        }
    }
    return store;
}

}  // namespace ticketdp
