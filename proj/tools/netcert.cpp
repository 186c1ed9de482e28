// netcert: bounds, decompositions, simulation and certification from the command line.
//
// Exit codes: 0 ok, 1 usage or invalid argument, 2 bad input data, 3 resource limit.

#include "netcert/netcert.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace netcert;
using io::json;

namespace {

struct Global {
    std::string out;
    std::string format;
    std::uint64_t seed = 0;
    bool verbose = false;
};

// Relative paths resolve against NETCERT_OUT_DIR when it is set.
std::filesystem::path output_path(const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("NETCERT_OUT_DIR"); dir && *dir) path = std::filesystem::path(dir) / path;
    }
    return path;
}

void emit(const Global& g, const std::string& text) {
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
        return;
    }
    const auto path = output_path(g.out);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (g.verbose) std::cerr << "wrote " << path.string() << '\n';
}

json global_config(const Global& g, const std::string& format) {
    const char* dir = std::getenv("NETCERT_OUT_DIR");
    return {{"out", g.out.empty() ? "-" : g.out},
            {"out_dir", dir ? json(dir) : json(nullptr)},
            {"format", format},
            {"seed", g.seed},
            {"verbose", g.verbose}};
}

std::string envelope(const std::string& command, json config, json result) {
    return io::rounded(json{{"command", command}, {"config", std::move(config)}, {"result", std::move(result)}}).dump(2) +
           "\n";
}

// CSV output carries the resolved config as one leading comment line.
std::string csv_with_config(const std::string& command, const json& config, const std::string& body) {
    return "# " + json{{"command", command}, {"config", config}}.dump() + "\n" + body;
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("not valid JSON: ") + e.what());
    }
}

// --- bound ---------------------------------------------------------------

struct BoundOpts {
    std::optional<int> n, nc;
    std::string method = "reduced";
    std::string table;
    std::string protocol = "ghz-xy";
};

void cmd_bound(const Global& g, const BoundOpts& o) {
    const auto method = parse_method(o.method);
    const auto protocol = parse_protocol(o.protocol);
    const std::string format = g.format.empty() ? "json" : g.format;
    std::vector<BoundResult> rows;
    if (!o.table.empty()) {
        if (o.n || o.nc) throw std::invalid_argument("--table cannot be combined with --n/--nc");
        if (o.table == "s1") {
            for (int n = 2; n <= 6; ++n) {
                for (int n_c = 1; n_c < n; ++n_c) rows.push_back(max_classical_fidelity(n, n_c, method, protocol));
            }
        } else if (o.table == "s2") {
            for (int n = 7; n <= 12; ++n) rows.push_back(max_classical_fidelity(n, 1, method, protocol));
        } else {
            throw std::invalid_argument("--table must be s1 or s2");
        }
    } else {
        if (!o.n) throw std::invalid_argument("bound needs --n or --table");
        rows.push_back(o.nc ? max_classical_fidelity(*o.n, *o.nc, method, protocol) : classical_bound(*o.n, method, protocol));
    }

    json config = global_config(g, format);
    config["n"] = o.n ? json(*o.n) : json(nullptr);
    config["nc"] = o.nc ? json(*o.nc) : json(nullptr);
    config["method"] = to_string(method);
    config["table"] = o.table.empty() ? json(nullptr) : json(o.table);
    config["protocol"] = to_string(protocol);

    if (format == "csv") {
        std::ostringstream os;
        io::write_bound_csv(os, rows);
        emit(g, csv_with_config("bound", config, os.str()));
        return;
    }
    json result;
    if (o.table.empty()) {
        result = io::to_json(rows.front());
    } else {
        result = json::array();
        for (const auto& r : rows) result.push_back(io::to_json(r));
    }
    emit(g, envelope("bound", std::move(config), std::move(result)));
}

// --- decompose -----------------------------------------------------------

struct DecomposeOpts {
    int n = 3;
    std::string protocol = "ghz-xy";
};

void cmd_decompose(const Global& g, const DecomposeOpts& o) {
    if (!g.format.empty() && g.format != "json") throw std::invalid_argument("decompose only emits json");
    const auto d = make_decomposition(parse_protocol(o.protocol), o.n);
    json config = global_config(g, "json");
    config["n"] = o.n;
    config["protocol"] = to_string(d.kind());
    json result = io::to_json(d);
    result["setting_count"] = setting_count(d);
    json contexts = json::array();
    for (const auto& c : measurement_contexts(d)) contexts.push_back(c);
    result["contexts"] = std::move(contexts);
    emit(g, envelope("decompose", std::move(config), std::move(result)));
}

// --- simulate ------------------------------------------------------------

struct SimulateOpts {
    std::string scenario = "ghz";
    std::optional<int> n;
    double p = 0.0;
    std::string hybrid_case = "e1_3";
    std::string state_file;
    std::int64_t shots = 100000;
    std::string protocol;
    std::string records_out;
};

void cmd_simulate(const Global& g, const SimulateOpts& o) {
    if (!g.format.empty() && g.format != "json") throw std::invalid_argument("simulate only emits json");
    Scenario s;
    s.name = o.scenario;
    s.shots = o.shots;
    s.seed = g.seed;
    s.p = o.p;
    if (o.scenario == "ghz") {
        s.source = SourceKind::Ghz;
    } else if (o.scenario == "star") {
        s.source = SourceKind::Star;
    } else if (o.scenario == "noise") {
        s.source = SourceKind::WhiteNoise;
    } else if (o.scenario == "hybrid") {
        s.source = SourceKind::Hybrid;
    } else if (o.scenario == "custom") {
        s.source = SourceKind::Custom;
    } else {
        throw std::invalid_argument("--scenario must be one of ghz, star, noise, hybrid, custom");
    }
    s.protocol = !o.protocol.empty()            ? parse_protocol(o.protocol)
                 : s.source == SourceKind::Star ? ProtocolKind::StarXY
                                                : ProtocolKind::GhzXY;
    if (s.source == SourceKind::Star && s.protocol != ProtocolKind::StarXY) {
        throw std::invalid_argument("the star scenario is certified with --protocol star-xy");
    }
    if (s.source == SourceKind::Hybrid) {
        s.hybrid_case = parse_extremal_case(o.hybrid_case);
        if (s.protocol != ProtocolKind::GhzXY) throw std::invalid_argument("hybrid cases are defined for --protocol ghz-xy");
        s.n = extremal_hybrid(s.hybrid_case).num_nodes();
        if (o.n && *o.n != s.n) throw std::invalid_argument("--n does not match the hybrid case (" + std::to_string(s.n) + " nodes)");
    } else if (s.source == SourceKind::Custom) {
        if (o.state_file.empty()) throw std::invalid_argument("the custom scenario needs --state FILE");
        const json j = read_json_file(o.state_file);
        s.custom_state = j.is_object() ? io::density_matrix_from_json(io::detail::require(j, "matrix", ""), "/matrix")
                                       : io::density_matrix_from_json(j);
        s.n = s.custom_state->num_qubits();
        if (o.n && *o.n != s.n) throw std::invalid_argument("--n does not match the state file");
    } else {
        s.n = o.n.value_or(3);
    }
    if (s.source != SourceKind::WhiteNoise && o.p != 0.0) throw std::invalid_argument("--p only applies to the noise scenario");

    const auto t0 = std::chrono::steady_clock::now();
    const auto run = run_scenario(s);
    if (g.verbose) {
        std::cerr << "sampled " << run.records.records.size() << " contexts x " << s.shots << " shots in "
                  << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    }

    json config = global_config(g, "json");
    config["scenario"] = o.scenario;
    config["n"] = s.n;
    config["p"] = s.source == SourceKind::WhiteNoise ? json(s.p) : json(nullptr);
    config["case"] = s.source == SourceKind::Hybrid ? json(to_string(s.hybrid_case)) : json(nullptr);
    config["state"] = o.state_file.empty() ? json(nullptr) : json(o.state_file);
    config["shots"] = s.shots;
    config["protocol"] = to_string(s.protocol);
    config["records_out"] = o.records_out.empty() ? json(nullptr) : json(o.records_out);

    json result = io::to_json(run.result);
    if (!o.records_out.empty()) {
        const auto path = output_path(o.records_out);
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << io::to_json(run.records).dump(2) << '\n';
        if (g.verbose) std::cerr << "wrote " << path.string() << '\n';
        result["records_file"] = path.string();
    } else {
        result["records"] = io::to_json(run.records);
    }
    emit(g, envelope("simulate", std::move(config), std::move(result)));
}

// --- certify -------------------------------------------------------------

struct CertifyOpts {
    std::string records;
    std::string protocol;
};

void cmd_certify(const Global& g, const CertifyOpts& o) {
    if (!g.format.empty() && g.format != "json") throw std::invalid_argument("certify only emits json");
    const auto rs = io::records_from_json(read_json_file(o.records));
    if (!o.protocol.empty() && parse_protocol(o.protocol) != rs.protocol) {
        throw std::invalid_argument("--protocol " + o.protocol + " does not match the records file (" +
                                    to_string(rs.protocol) + ")");
    }
    json config = global_config(g, "json");
    config["records"] = o.records;
    config["protocol"] = to_string(rs.protocol);
    emit(g, envelope("certify", std::move(config), io::to_json(certify_records(rs))));
}

// --- noise ---------------------------------------------------------------

void cmd_noise(const Global& g, int n_max) {
    const std::string format = g.format.empty() ? "csv" : g.format;
    const auto rows = noise_comparison(n_max);
    json config = global_config(g, format);
    config["n_max"] = n_max;
    if (format == "csv") {
        std::ostringstream os;
        io::write_noise_csv(os, rows);
        emit(g, csv_with_config("noise", config, os.str()));
        return;
    }
    json result = json::array();
    for (const auto& r : rows) result.push_back({{"n", r.n}, {"p_xy", r.p_xy}, {"p_pauli", r.p_pauli}});
    emit(g, envelope("noise", std::move(config), std::move(result)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-network steering certification: classical bounds, decompositions, simulation, verdicts"};
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    app.add_option("--out", g.out, "Output file (default stdout; relative paths go under $NETCERT_OUT_DIR)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", g.seed, "Base seed for simulation");
    app.add_flag("-v,--verbose", g.verbose, "Progress messages on stderr");

    BoundOpts bo;
    auto* bound = app.add_subcommand("bound", "Classical fidelity upper bounds");
    bound->add_option("--n", bo.n, "Number of nodes")->check(CLI::Range(2, 30));
    bound->add_option("--nc", bo.nc, "Number of classical nodes (omit to maximize over all)");
    bound->add_option("--method", bo.method, "brute, reduced or closed")->check(CLI::IsMember({"brute", "reduced", "closed"}));
    bound->add_option("--table", bo.table, "Reproduce a full table: s1 (n=2..6) or s2 (n=7..12, n_c=1)")
        ->check(CLI::IsMember({"s1", "s2"}));
    bound->add_option("--protocol", bo.protocol, "ghz-xy, star-xy or pauli");

    DecomposeOpts dopt;
    auto* decompose = app.add_subcommand("decompose", "Projector decomposition into measurement settings");
    decompose->add_option("--n", dopt.n, "Number of nodes")->required()->check(CLI::Range(2, 16));
    decompose->add_option("--protocol", dopt.protocol, "ghz-xy, star-xy or pauli");

    SimulateOpts so;
    auto* simulate = app.add_subcommand("simulate", "Sample measurement records for a scenario and certify them");
    simulate->add_option("--scenario", so.scenario, "ghz, star, noise, hybrid or custom")
        ->check(CLI::IsMember({"ghz", "star", "noise", "hybrid", "custom"}));
    simulate->add_option("--n", so.n, "Number of nodes (ghz, star, noise)")->check(CLI::Range(2, 12));
    simulate->add_option("--p", so.p, "White-noise fraction (noise scenario)")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--case", so.hybrid_case, "Extremal hybrid: e1_3, e2_4 or e3_4")
        ->check(CLI::IsMember({"e1_3", "e2_4", "e3_4"}));
    simulate->add_option("--state", so.state_file, "Density matrix JSON for the custom scenario");
    simulate->add_option("--shots", so.shots, "Shots per measurement context")->check(CLI::PositiveNumber);
    simulate->add_option("--protocol", so.protocol, "ghz-xy, star-xy or pauli");
    simulate->add_option("--records-out", so.records_out, "Write the records file here instead of embedding it");

    CertifyOpts co;
    auto* certify_cmd = app.add_subcommand("certify", "Certify a records file");
    certify_cmd->add_option("--records", co.records, "Records JSON file")->required();
    certify_cmd->add_option("--protocol", co.protocol, "Expected protocol (must match the file)");

    int n_max = 14;
    auto* noise = app.add_subcommand("noise", "White-noise tolerance of the xy and Pauli criteria");
    noise->add_option("--n-max", n_max, "Largest node count (2..14)")->check(CLI::Range(2, 14));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*bound) cmd_bound(g, bo);
        if (*decompose) cmd_decompose(g, dopt);
        if (*simulate) cmd_simulate(g, so);
        if (*certify_cmd) cmd_certify(g, co);
        if (*noise) cmd_noise(g, n_max);
    } catch (const SchemaError& e) {
        std::cerr << "error: schema violation at '" << e.path() << "': " << e.what() << '\n';
        return 2;
    } catch (const IncompleteDataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: resource limit: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
