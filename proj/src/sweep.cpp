#include "evactree/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace evactree {

using nlohmann::json;

namespace {

std::string resolve(const std::string& path, const std::string& base_dir) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        p = std::filesystem::path(base_dir) / p;
    }
    return p.string();
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string join(const std::vector<NodeId>& ids, char sep) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += std::to_string(ids[i]);
    }
    return out;
}

}  // namespace

std::vector<std::vector<NodeId>> station_subsets(const std::vector<NodeId>& base, const std::vector<int>& sizes) {
    if (base.size() > 20) {
        throw ConfigError("station subset enumeration is limited to 20 base stations");
    }
    std::vector<std::vector<NodeId>> out;
    const std::uint32_t count = 1u << base.size();
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        std::vector<NodeId> subset;
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (mask & (1u << i)) {
                subset.push_back(base[i]);
            }
        }
        if (std::find(sizes.begin(), sizes.end(), static_cast<int>(subset.size())) != sizes.end()) {
            out.push_back(std::move(subset));
        }
    }
    return out;
}

SweepSpec parse_sweep_spec(const std::string& document, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("sweep spec is not valid JSON: ") + e.what());
    }
    SweepSpec spec;
    try {
        spec.id = doc.value("id", std::string("sweep"));
        spec.base_scenario = resolve(doc.at("base_scenario").get<std::string>(), base_dir);
        spec.target_class = doc.value("class", 0);
        spec.taus = doc.at("taus").get<std::vector<int>>();
        if (doc.contains("config")) {
            spec.config_path = resolve(doc["config"].get<std::string>(), base_dir);
        }
        if (doc.contains("stations")) {
            const json& st = doc["stations"];
            if (st.contains("explicit")) {
                spec.station_sets = st["explicit"].get<std::vector<std::vector<NodeId>>>();
            } else {
                const auto base = st.at("base").get<std::vector<NodeId>>();
                std::vector<int> sizes;
                if (st.contains("subset_sizes")) {
                    sizes = st["subset_sizes"].get<std::vector<int>>();
                } else {
                    for (int s = 0; s <= static_cast<int>(base.size()); ++s) {
                        sizes.push_back(s);
                    }
                }
                spec.station_sets = station_subsets(base, sizes);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sweep spec schema error: ") + e.what());
    }
    if (spec.taus.empty()) {
        throw ConfigError("sweep spec lists no tau values");
    }
    if (std::any_of(spec.taus.begin(), spec.taus.end(), [](int t) { return t < 0; })) {
        throw ConfigError("tau values must be non-negative");
    }
    if (spec.station_sets && spec.station_sets->empty()) {
        throw ConfigError("sweep spec selects no station sets");
    }
    if (spec.target_class < 0) {
        throw ConfigError("class index must be non-negative");
    }
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    return parse_sweep_spec(read_text(path), std::filesystem::path(path).parent_path().string());
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SearchConfig& config, int parallel) {
    const std::string base_text = read_text(spec.base_scenario);
    const std::string base_dir = std::filesystem::path(spec.base_scenario).parent_path().string();
    json base = json::parse(base_text);
    if (!base.contains("classes") || spec.target_class >= static_cast<int>(base["classes"].size())) {
        throw ConfigError("sweep class index out of range for the base scenario");
    }
    std::vector<NodeId> base_stations =
        base["classes"][static_cast<std::size_t>(spec.target_class)].value("stations", std::vector<NodeId>{});
    std::vector<std::vector<NodeId>> sets = spec.station_sets.value_or(std::vector<std::vector<NodeId>>{base_stations});

    std::vector<SweepRow> rows;
    std::vector<json> documents;
    for (int tau : spec.taus) {
        for (const auto& stations : sets) {
            SweepRow row;
            row.tau = tau;
            row.stations = stations;
            row.scenario_id = spec.id + "-t" + std::to_string(tau) + "-s" + (stations.empty() ? "none" : join(stations, '-'));
            json doc = base;
            json& cls = doc["classes"][static_cast<std::size_t>(spec.target_class)];
            cls["tau_hops"] = tau;
            cls["stations"] = stations;
            doc["label"] = row.scenario_id;
            rows.push_back(std::move(row));
            documents.push_back(std::move(doc));
        }
    }

    auto run_one = [&](std::size_t i) {
        SweepRow& row = rows[i];
        try {
            const Scenario scenario = load_scenario(documents[i].dump(), base_dir);
            const Solution s = solve(scenario, config);
            row.status = to_string(s.status);
            row.objective = s.objective;
            row.diagnostics = s.diagnostics;
        } catch (const std::exception& e) {
            row.status = "error";
            row.error = e.what();
        }
    };
    const int workers = std::clamp(parallel, 1, static_cast<int>(std::max<std::size_t>(1, rows.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            run_one(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < rows.size(); i = next++) {
                    run_one(i);
                }
            });
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    return rows;
}

std::string sweep_csv_header() {
    return "scenario_id,tau,stations,status,total_objective,average_time,travel,refuel,colgen_iterations,nodes,"
           "wall_seconds";
}

std::string sweep_csv_row(const SweepRow& row) {
    std::ostringstream out;
    out << row.scenario_id << ',' << row.tau << ',' << join(row.stations, ';') << ',' << row.status << ',';
    if (row.status == "optimal-heuristic") {
        out << std::setprecision(12) << row.objective.total << ',' << row.objective.average << ','
            << row.objective.travel << ',' << row.objective.refuel;
    } else {
        out << ",,,";
    }
    out << ',' << row.diagnostics.colgen_iterations << ',' << row.diagnostics.nodes_explored << ','
        << std::setprecision(6) << row.diagnostics.wall_seconds;
    return out.str();
}

}  // namespace evactree
