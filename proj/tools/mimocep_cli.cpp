// Command-line front end; talks to the library only through mimocep.h.
#include "mimocep/mimocep.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Failure {
    int code;
    std::string message;
};

int exit_code(mc_status s) {
    switch (s) {
        case MC_OK: return 0;
        case MC_ERR_VALIDATION:
        case MC_ERR_IO: return 2;
        case MC_ERR_NUMERICAL: return 3;
        default: return 1;
    }
}

void check(mc_status s) {
    if (s != MC_OK) throw Failure{exit_code(s), mc_last_error()};
}

[[noreturn]] void invalid(const std::string& msg) { throw Failure{2, msg}; }

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Model = std::unique_ptr<mc_model, Deleter<mc_model, mc_model_free>>;
using Signal = std::unique_ptr<mc_signal, Deleter<mc_signal, mc_signal_free>>;
using Cepstrum = std::unique_ptr<mc_cepstrum, Deleter<mc_cepstrum, mc_cepstrum_free>>;
using Config = std::unique_ptr<mc_cstr_config, Deleter<mc_cstr_config, mc_cstr_config_free>>;

template <typename Ptr, typename F>
Ptr make(F&& f) {
    typename Ptr::pointer raw = nullptr;
    check(f(&raw));
    return Ptr(raw);
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Manifest {
    std::string command;
    std::string config_path;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> argv;

    void write(const std::string& path) const {
        json j;
        j["command"] = command;
        j["config_path"] = config_path;
        j["input_paths"] = inputs;
        j["output_paths"] = outputs;
        j["seed"] = seed ? json(*seed) : json(nullptr);
        j["tool_version"] = mc_version();
        j["timestamp"] = timestamp();
        j["argv"] = argv;
        std::ofstream out(path);
        if (!out) throw Failure{2, "cannot write manifest '" + path + "'"};
        out << j.dump(2) << '\n';
    }
};

struct SpectralOptions {
    std::size_t seglen = 1024;
    double overlap = 0.5;
    std::size_t grid = 4096;
    std::size_t order = 50;
    bool no_demean = false;
    std::string window = "hann";
    unsigned threads = 1;

    void add(CLI::App* app) {
        app->add_option("--seglen", seglen, "Welch segment length")->capture_default_str();
        app->add_option("--overlap", overlap, "Welch segment overlap in [0, 1)")->capture_default_str();
        app->add_option("--grid", grid, "FFT grid size (power of two)")->capture_default_str();
        app->add_option("--K", order, "Highest cepstral coefficient")->capture_default_str();
        app->add_flag("--no-demean", no_demean, "Keep segment means");
        app->add_option("--window", window, "hann | hamming | rectangular")->capture_default_str();
        app->add_option("--threads", threads, "Worker threads for per-bin work")->capture_default_str();
    }

    mc_welch_params params() const {
        mc_welch_params p;
        mc_welch_defaults(&p);
        p.segment_length = seglen;
        p.overlap = overlap;
        p.grid_size = grid;
        p.demean = no_demean ? 0 : 1;
        p.threads = threads;
        if (window == "hann") p.window = MC_WINDOW_HANN;
        else if (window == "hamming") p.window = MC_WINDOW_HAMMING;
        else if (window == "rectangular") p.window = MC_WINDOW_RECTANGULAR;
        else invalid("unknown window '" + window + "'");
        return p;
    }
};

struct Range {
    std::size_t begin = 0, end = 0;
};

Range parse_range(const std::string& s) {
    if (s.empty()) return {};
    const auto colon = s.find(':');
    if (colon == std::string::npos) invalid("--range expects begin:end");
    Range r;
    try {
        r.begin = colon == 0 ? 0 : std::stoull(s.substr(0, colon));
        r.end = colon + 1 == s.size() ? 0 : std::stoull(s.substr(colon + 1));
    } catch (const std::exception&) {
        invalid("--range expects non-negative integers, got '" + s + "'");
    }
    return r;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Failure{2, "cannot create directory '" + dir + "': " + ec.message()};
}

int run_simulate(const std::string& config, const std::string& out_dir, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> samples, const std::vector<std::string>& argv) {
    Manifest m{"simulate", config, {config}, {}, std::nullopt, argv};
    if (mc_file_is_model_json(config.c_str())) {
        const auto model = make<Model>([&](mc_model** p) { return mc_model_load_json(config.c_str(), p); });
        std::size_t n = 0, outs = 0, ins = 0;
        check(mc_model_dims(model.get(), &n, &outs, &ins));
        int present = 0;
        std::size_t count = 1 << 16;
        std::uint64_t s = 1;
        std::vector<double> gains(ins, 1.0);
        check(mc_model_input_spec(model.get(), &present, &count, &s, gains.data(), gains.size()));
        if (seed) s = *seed;
        if (samples) count = *samples;
        if (count == 0) invalid("simulate: the number of samples must be positive");
        ensure_dir(out_dir);
        const auto u = make<Signal>([&](mc_signal** p) { return mc_signal_white_noise(count, gains.data(), ins, s, p); });
        const auto y = make<Signal>([&](mc_signal** p) { return mc_simulate(model.get(), u.get(), p); });
        const std::string up = (fs::path(out_dir) / "u.csv").string(), yp = (fs::path(out_dir) / "y.csv").string();
        check(mc_signal_write_csv(u.get(), up.c_str()));
        check(mc_signal_write_csv(y.get(), yp.c_str()));
        m.outputs = {up, yp};
        m.seed = s;
    } else {
        const auto cfg = make<Config>([&](mc_cstr_config** p) { return mc_cstr_config_load_json(config.c_str(), p); });
        if (seed) check(mc_cstr_config_set_seed(cfg.get(), *seed));
        if (samples) {
            if (*samples == 0) invalid("simulate: the number of samples must be positive");
            check(mc_cstr_config_set_samples(cfg.get(), *samples));
        }
        mc_signal* u_raw = nullptr;
        mc_signal* y_raw = nullptr;
        check(mc_cstr_generate(cfg.get(), &u_raw, &y_raw));
        const Signal u(u_raw), y(y_raw);
        ensure_dir(out_dir);
        const std::string sp = (fs::path(out_dir) / "scenario.csv").string();
        check(mc_cstr_write_scenario_csv(u.get(), y.get(), sp.c_str()));
        std::uint64_t s = 0;
        check(mc_cstr_config_seed(cfg.get(), &s));
        m.outputs = {sp};
        m.seed = s;
    }
    const std::string mp = (fs::path(out_dir) / "manifest.json").string();
    m.write(mp);
    std::cout << "wrote";
    for (const auto& o : m.outputs) std::cout << ' ' << o;
    std::cout << '\n';
    return 0;
}

Signal load_signal(const std::string& path, const std::string& columns, const Range& r) {
    return make<Signal>([&](mc_signal** p) {
        return mc_signal_read_csv(path.c_str(), columns.empty() ? nullptr : columns.c_str(), r.begin, r.end, p);
    });
}

void print_warnings(const mc_cepstrum* c) {
    for (std::size_t i = 0; i < mc_cepstrum_warning_count(c); ++i)
        std::cerr << "warning: " << mc_cepstrum_warning(c, i) << '\n';
}

int run_cepstrum(const std::string& u_path, const std::string& y_path, const std::string& signal_path,
                 const std::string& u_cols, const std::string& y_cols, const std::string& range,
                 const SpectralOptions& opt, const std::string& out, const std::string& io_prefix,
                 const std::vector<std::string>& argv) {
    const auto params = opt.params();
    const Range r = parse_range(range);
    Manifest m{"cepstrum", "", {}, {out}, std::nullopt, argv};
    Cepstrum result;
    if (!signal_path.empty()) {
        if (!u_path.empty() || !y_path.empty()) invalid("cepstrum: use either --signal or --u/--y");
        const auto x = load_signal(signal_path, u_cols, r);
        result = make<Cepstrum>([&](mc_cepstrum** p) { return mc_cepstrum_data(x.get(), &params, opt.order, p); });
        m.inputs = {signal_path};
    } else {
        if (u_path.empty() || y_path.empty()) invalid("cepstrum: --u and --y are required (or --signal)");
        const auto u = load_signal(u_path, u_cols, r);
        const auto y = load_signal(y_path, y_cols, r);
        result = make<Cepstrum>(
            [&](mc_cepstrum** p) { return mc_cepstrum_system(u.get(), y.get(), &params, opt.order, p); });
        m.inputs = {u_path, y_path};
        if (!io_prefix.empty()) {
            const auto cu = make<Cepstrum>([&](mc_cepstrum** p) { return mc_cepstrum_data(u.get(), &params, opt.order, p); });
            const auto cy = make<Cepstrum>([&](mc_cepstrum** p) { return mc_cepstrum_data(y.get(), &params, opt.order, p); });
            const std::string up = io_prefix + "_u.csv", yp = io_prefix + "_y.csv";
            check(mc_cepstrum_write_csv(cu.get(), up.c_str()));
            check(mc_cepstrum_write_csv(cy.get(), yp.c_str()));
            m.outputs.push_back(up);
            m.outputs.push_back(yp);
        }
    }
    print_warnings(result.get());
    check(mc_cepstrum_write_csv(result.get(), out.c_str()));
    m.write(out + ".manifest.json");
    return 0;
}

int run_exact(const std::string& model_path, std::size_t order, const std::string& out, std::string poles_out,
              const std::vector<std::string>& argv) {
    const auto model = make<Model>([&](mc_model** p) { return mc_model_load_json(model_path.c_str(), p); });
    const auto c = make<Cepstrum>([&](mc_cepstrum** p) { return mc_cepstrum_model(model.get(), order, p); });
    print_warnings(c.get());
    if (poles_out.empty()) poles_out = (fs::path(out).replace_extension("").string()) + ".poles.json";
    check(mc_model_write_pole_zero_json(model.get(), poles_out.c_str()));
    check(mc_cepstrum_write_csv(c.get(), out.c_str()));
    Manifest{"exact", model_path, {model_path}, {out, poles_out}, std::nullopt, argv}.write(out + ".manifest.json");
    return 0;
}

std::vector<double> parse_weights(const std::string& spec) {
    std::vector<double> w;
    if (spec.empty()) return w;
    std::string text = spec;
    if (fs::exists(spec)) {
        std::ifstream in(spec);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    for (char& ch : text)
        if (ch == '\n' || ch == '\r' || ch == ' ' || ch == '\t') ch = ',';
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        try {
            std::size_t used = 0;
            w.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            invalid("--weights: '" + cell + "' is not a number");
        }
    }
    return w;
}

int run_compare(const std::string& a_path, const std::string& b_path, const std::string& weights, bool as_json) {
    const auto a = make<Cepstrum>([&](mc_cepstrum** p) { return mc_cepstrum_read_csv(a_path.c_str(), p); });
    const auto b = make<Cepstrum>([&](mc_cepstrum** p) { return mc_cepstrum_read_csv(b_path.c_str(), p); });
    const auto w = parse_weights(weights);
    double dist = 0.0;
    check(mc_fingerprint_distance(a.get(), b.get(), w.empty() ? nullptr : w.data(), w.size(), &dist));
    std::size_t n = 0;
    check(mc_cepstrum_coeffs(a.get(), nullptr, 0, &n));
    std::vector<double> ca(n), cb(n);
    check(mc_cepstrum_coeffs(a.get(), ca.data(), n, &n));
    check(mc_cepstrum_coeffs(b.get(), cb.data(), n, &n));
    if (as_json) {
        json j;
        j["distance"] = dist;
        j["per_k"] = json::array();
        for (std::size_t k = 1; k < n; ++k) j["per_k"].push_back({{"k", k}, {"a", ca[k]}, {"b", cb[k]}, {"diff", ca[k] - cb[k]}});
        std::cout << j.dump(2) << '\n';
    } else {
        char buf[128];
        std::snprintf(buf, sizeof buf, "distance %.17g\n", dist);
        std::cout << buf << "k,a,b,diff\n";
        for (std::size_t k = 1; k < n; ++k) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", k, ca[k], cb[k], ca[k] - cb[k]);
            std::cout << buf;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MIMO power cepstrum toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mc_version()));
    const std::vector<std::string> args(argv, argv + argc);

    auto* sim = app.add_subcommand("simulate", "Generate data from a model JSON or a CSTR config JSON");
    std::string sim_config, sim_out = ".";
    std::optional<std::uint64_t> sim_seed;
    std::optional<std::size_t> sim_samples;
    sim->add_option("--config", sim_config, "Model or CSTR config JSON")->required();
    sim->add_option("--out,-o", sim_out, "Output directory")->capture_default_str();
    sim->add_option("--seed", sim_seed, "Override the seed in the config");
    sim->add_option("--samples,-N", sim_samples, "Override the number of samples");

    auto* cep = app.add_subcommand("cepstrum", "Data-driven cepstrum of a square system (c_Y - c_U) or one signal");
    std::string cu, cy, csig, ucols, ycols, crange, cout_path, io_prefix;
    SpectralOptions sopt;
    cep->add_option("--u", cu, "Input signal CSV");
    cep->add_option("--y", cy, "Output signal CSV");
    cep->add_option("--signal", csig, "Single signal CSV (cepstrum of the signal itself)");
    cep->add_option("--u-columns", ucols, "Comma-separated input (or --signal) columns");
    cep->add_option("--y-columns", ycols, "Comma-separated output columns");
    cep->add_option("--range", crange, "Sample range begin:end");
    cep->add_option("--out,-o", cout_path, "Cepstrum CSV")->required();
    cep->add_option("--io-out", io_prefix, "Also write PREFIX_u.csv and PREFIX_y.csv");
    sopt.add(cep);

    auto* ex = app.add_subcommand("exact", "Cepstrum of a state-space model through its Smith-McMillan form");
    std::string model_path, ex_out, poles_out;
    std::size_t ex_order = 50;
    ex->add_option("--config,--model", model_path, "Model JSON")->required();
    ex->add_option("--K", ex_order, "Highest cepstral coefficient")->capture_default_str();
    ex->add_option("--out,-o", ex_out, "Cepstrum CSV")->required();
    ex->add_option("--poles-out", poles_out, "Pole/zero JSON (default: next to --out)");

    auto* cmp = app.add_subcommand("compare", "Fingerprint distance between two cepstrum CSVs");
    std::string ca, cb, weights;
    bool as_json = false;
    cmp->add_option("a", ca, "First cepstrum CSV")->required();
    cmp->add_option("b", cb, "Second cepstrum CSV")->required();
    cmp->add_option("--weights", weights, "Weights for k = 1..K: comma list or file");
    cmp->add_flag("--json", as_json, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        if (*sim) return run_simulate(sim_config, sim_out, sim_seed, sim_samples, args);
        if (*cep) return run_cepstrum(cu, cy, csig, ucols, ycols, crange, sopt, cout_path, io_prefix, args);
        if (*ex) return run_exact(model_path, ex_order, ex_out, poles_out, args);
        if (*cmp) return run_compare(ca, cb, weights, as_json);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
