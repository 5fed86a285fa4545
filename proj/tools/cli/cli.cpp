#include "cli.hpp"

#include "scy/identities/identity_suite.hpp"
#include "scy/monitor/estimate_monitor.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace scy::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T v{};
    const std::string t = trim(text);
    const auto* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc() || p != end) throw ConfigError(fmt::format("bad value for {}: '{}'", key, text));
    return v;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

solver::SolverConfig solver_config(const RunConfig& cfg) {
    solver::SolverConfig s;
    s.tol = cfg.tol;
    s.krylov_tol = cfg.krylov_tol;
    s.max_newton = cfg.max_newton;
    return s;
}

fs::path prepare_out(const RunConfig& cfg) {
    fs::path out(cfg.out);
    fs::create_directories(out);
    return out;
}

std::string rstrip(const std::string& s) { return s.substr(0, s.find_last_not_of(' ') + 1); }

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {"command", "dim",     "n",          "family",     "amplitude",
                                                  "seed",    "modes",   "tol",        "krylov_tol", "max_newton",
                                                  "threads", "out",     "mutate"};
    return keys;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    const auto& keys = config_keys();
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected key=value", path, lineno));
        const std::string key = trim(line.substr(0, eq));
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(fmt::format("{}:{}: unknown key '{}'", path, lineno, key));
        if (kv.count(key)) throw ConfigError(fmt::format("{}:{}: repeated key '{}'", path, lineno, key));
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::vector<double> parse_amplitudes(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_number<double>("amplitude", part));
    return out;
}

RunConfig make_config(const std::map<std::string, std::string>& kv) {
    RunConfig c;
    const auto& keys = config_keys();
    for (const auto& [k, v] : kv) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown key '" + k + "'");
    }
    auto get = [&](const char* k) -> const std::string* {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto v = get("command")) c.command = *v;
    if (auto v = get("dim")) c.dim = parse_number<int>("dim", *v);
    if (auto v = get("n")) c.n = parse_number<int>("n", *v);
    if (auto v = get("family")) c.family = *v;
    if (auto v = get("amplitude")) c.amplitudes = parse_amplitudes(*v);
    if (auto v = get("seed")) c.seed = parse_number<std::uint64_t>("seed", *v);
    if (auto v = get("modes")) c.modes = parse_number<int>("modes", *v);
    if (auto v = get("tol")) c.tol = parse_number<double>("tol", *v);
    if (auto v = get("krylov_tol")) c.krylov_tol = parse_number<double>("krylov_tol", *v);
    if (auto v = get("max_newton")) c.max_newton = parse_number<int>("max_newton", *v);
    if (auto v = get("threads")) c.threads = parse_number<int>("threads", *v);
    if (auto v = get("out")) c.out = *v;
    if (auto v = get("mutate")) c.mutate = *v;

    static const std::set<std::string> commands = {"verify", "solve", "sweep", "check"};
    if (!commands.count(c.command)) throw ConfigError("command must be one of verify, solve, sweep, check");
    try {
        torus::make_grid(c.dim, c.n);
        torus::parse_family(c.family);
        solver_config(c).validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    for (double a : c.amplitudes)
        if (!(a >= 0.0)) throw ConfigError("amplitudes must be non-negative");
    if (c.threads < 1) throw ConfigError("threads must be at least 1");
    if (c.modes < 1 || 2 * c.modes >= c.n) throw ConfigError("modes must satisfy 1 <= modes < n/2");
    if (c.out.empty()) throw ConfigError("out must not be empty");
    if (c.command == "solve" && c.amplitudes.size() > 1) throw ConfigError("solve takes a single amplitude");
    if (!c.mutate.empty()) {
        identities::Mutations m;
        try {
            identities::apply_mutation(m, c.mutate);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return c;
}

int run_verify(const RunConfig& cfg) {
    identities::Mutations m;
    if (!cfg.mutate.empty()) identities::apply_mutation(m, cfg.mutate);
    const auto summary = identities::verify_all(m);
    auto j = identities::to_json(summary);
    j["mutation"] = cfg.mutate;
    const fs::path out = prepare_out(cfg);
    write_file(out / "verify.json", j.dump(2) + "\n");
    std::cout << fmt::format("verify: {} passed, {} failed\n", summary.passed, summary.failed);
    for (const auto& r : summary.results)
        if (!r.pass) std::cout << "  failing " << r.id << "\n";
    return summary.failed == 0 ? kOk : kSymbolicFailure;
}

int run_solve(const RunConfig& cfg) {
    torus::set_fft_threads(cfg.threads);
    const double amp = cfg.amplitudes.empty() ? 0.5 : cfg.amplitudes.front();
    const auto grid = torus::make_grid(cfg.dim, cfg.n);
    const auto bg = torus::make_background(grid, torus::Family{torus::parse_family(cfg.family), amp, cfg.modes, cfg.seed});
    const auto sol = solver::newton_solve(bg, solver_config(cfg));
    const auto report = monitor::evaluate(bg, sol);

    const fs::path out = prepare_out(cfg);
    torus::write_snapshot((out / "phi.snap").string(), sol.potential.phi, false);
    write_file(out / "diagnostics.json", monitor::to_json(report).dump(2) + "\n");
    write_file(out / "solve.csv", monitor::to_csv({report}));
    std::cout << monitor::csv_row(report) << "\n";
    for (const auto& f : report.flags) std::cout << "  flag: " << f << "\n";
    return report.flagged ? kNumericalFlag : kOk;
}

int run_sweep(const RunConfig& cfg) {
    torus::set_fft_threads(cfg.threads);
    const std::vector<double> amps =
        cfg.amplitudes.empty() ? std::vector<double>{0.0, 0.25, 0.5, 0.75} : cfg.amplitudes;
    const auto rows = monitor::sweep(torus::parse_family(cfg.family), amps, cfg.dim, cfg.n, cfg.seed,
                                     solver_config(cfg), cfg.modes);
    nlohmann::json j = nlohmann::json::array();
    bool flagged = false;
    for (const auto& r : rows) {
        j.push_back(monitor::to_json(r));
        flagged = flagged || r.flagged;
    }
    const fs::path out = prepare_out(cfg);
    write_file(out / "sweep.csv", monitor::to_csv(rows));
    write_file(out / "sweep.json", j.dump(2) + "\n");
    std::cout << monitor::to_csv(rows);
    return flagged ? kNumericalFlag : kOk;
}

std::string emit_report(const std::string& dir) {
    const fs::path root(dir);
    if (!fs::is_directory(root)) throw std::runtime_error("no such directory: " + dir);
    std::vector<fs::path> csvs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_regular_file() && e.path().extension() == ".csv") csvs.push_back(e.path());
    std::sort(csvs.begin(), csvs.end());
    const bool have_verify = fs::is_regular_file(root / "verify.json");
    if (!have_verify && csvs.empty()) throw std::runtime_error("nothing to report in " + dir);

    std::string s = "scy summary\n";
    if (have_verify) {
        const auto j = nlohmann::json::parse(read_file(root / "verify.json"));
        std::vector<std::string> failing;
        for (const auto& c : j.at("cases"))
            if (!c.at("pass").get<bool>()) failing.push_back(c.at("id").get<std::string>());
        std::string axioms;
        for (const auto& [tag, count] : j.at("axiom_usage").items())
            axioms += fmt::format("{}{}={}", axioms.empty() ? "" : " ", tag, count.get<int>());
        std::string fails;
        for (const auto& f : failing) fails += (fails.empty() ? "" : " ") + f;
        const std::string mutation = j.value("mutation", std::string());
        s += "\nverify.json\n";
        s += fmt::format("  {:<10}{}\n", "cases", j.at("cases").size());
        s += fmt::format("  {:<10}{}\n", "passed", j.at("passed").get<int>());
        s += fmt::format("  {:<10}{}\n", "failed", j.at("failed").get<int>());
        s += fmt::format("  {:<10}{}\n", "failing", fails.empty() ? "-" : fails);
        s += fmt::format("  {:<10}{}\n", "axioms", axioms.empty() ? "-" : axioms);
        s += fmt::format("  {:<10}{}\n", "mutation", mutation.empty() ? "-" : mutation);
    }

    const std::vector<std::pair<std::string, int>> shown = {
        {"family", 13}, {"amplitude", 11}, {"N", 5},        {"seed", 6},          {"max_tr", 22},
        {"max_a2", 24}, {"ratio", 22},     {"ein1_margin", 24}, {"newton_iters", 14}, {"flagged", 7}};
    for (const auto& path : csvs) {
        std::istringstream in(read_file(path));
        std::string line;
        std::getline(in, line);
        const auto header = split(line, ',');
        std::vector<std::vector<std::string>> rows;
        while (std::getline(in, line))
            if (!trim(line).empty()) rows.push_back(split(line, ','));
        int flagged = 0;
        const auto fcol = std::find(header.begin(), header.end(), "flagged") - header.begin();
        for (const auto& r : rows)
            if (fcol < static_cast<long>(r.size()) && r[fcol] == "true") ++flagged;

        s += fmt::format("\n{} ({} {}, {} flagged)\n", path.filename().string(), rows.size(),
                         rows.size() == 1 ? "row" : "rows", flagged);
        std::string head = " ";
        for (const auto& [name, w] : shown) head += fmt::format(" {:<{}}", name, w);
        s += rstrip(head) + "\n";
        for (const auto& r : rows) {
            std::string out = " ";
            for (const auto& [name, w] : shown) {
                const auto col = std::find(header.begin(), header.end(), name) - header.begin();
                const std::string v = col < static_cast<long>(r.size()) ? r[col] : "-";
                out += fmt::format(" {:<{}}", v, w);
            }
            s += rstrip(out) + "\n";
        }
    }
    return s;
}

int run_check(const RunConfig& cfg) {
    std::string text;
    try {
        text = emit_report(cfg.out);
    } catch (const std::runtime_error& e) {
        std::cerr << "scy: " << e.what() << "\n";
        return kMissingInput;
    }
    write_file(fs::path(cfg.out) / "summary.txt", text);
    std::cout << text;
    return kOk;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Calabi-Yau estimate lab: symbolic identities, torus solves and sweeps", "scy"};
    std::string command, config_path, amplitude;
    std::map<std::string, std::string> flags;
    app.add_option("command", command, "verify | solve | sweep | check")->required();
    app.add_option("--config", config_path, "key=value config file");
    auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
        app.add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
    };
    flag("--out", "out", "output directory");
    flag("--seed", "seed", "random seed (u64)");
    flag("--n", "n", "points per axis");
    flag("--dim", "dim", "complex dimension, 1 or 2");
    flag("--family", "family", "zero | single-mode | random-band");
    flag("--amplitude", "amplitude", "amplitude or comma-separated list");
    flag("--mutate", "mutate", "mutation tag for verify");
    flag("--modes", "modes", "random-band mode cutoff");
    flag("--tol", "tol", "Newton tolerance on the sup residual");
    flag("--krylov-tol", "krylov_tol", "relative GMRES tolerance");
    flag("--max-newton", "max_newton", "Newton iteration limit");
    flag("--threads", "threads", "FFT worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    RunConfig cfg;
    try {
        std::map<std::string, std::string> kv;
        if (!config_path.empty()) kv = read_config_file(config_path);
        if (kv.count("command") && kv["command"] != command)
            throw ConfigError("config file command '" + kv["command"] + "' conflicts with '" + command + "'");
        kv["command"] = command;
        for (const auto& [k, v] : flags) kv[k] = v;
        cfg = make_config(kv);
    } catch (const ConfigError& e) {
        std::cerr << "scy: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (cfg.command == "verify") return run_verify(cfg);
        if (cfg.command == "solve") return run_solve(cfg);
        if (cfg.command == "sweep") return run_sweep(cfg);
        return run_check(cfg);
    } catch (const std::range_error& e) {
        // forcing outside the representable range is a bad amplitude, not a solver failure
        std::cerr << "scy: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "scy: " << e.what() << "\n";
        return kNumericalFlag;
    }
}

}  // namespace scy::cli
