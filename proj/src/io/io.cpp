#include "mimocep/io.hpp"

#include "mimocep/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mimocep {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path + "' failed");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, const std::string& path, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
        throw ValidationError(path + ":" + std::to_string(line) + ": '" + s + "' is not a finite number");
    return v;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    Table t;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw ValidationError(path + ":" + std::to_string(no) + ": expected " + std::to_string(t.header.size()) +
                                  " fields, found " + std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
        t.line_numbers.push_back(no);
    }
    if (t.header.empty()) throw ValidationError(path + ": empty file");
    return t;
}

bool is_time_column(const std::string& name) { return name == "t" || name == "t_min" || name == "time"; }

}  // namespace

void write_signal_csv(const std::string& path, const SignalRecord& x, const std::string& time_label) {
    std::ostringstream out;
    bool first = true;
    if (!time_label.empty()) {
        out << time_label;
        first = false;
    }
    for (const auto& l : x.labels) {
        out << (first ? "" : ",") << l;
        first = false;
    }
    out << '\n';
    for (std::size_t k = 0; k < x.length(); ++k) {
        first = true;
        if (!time_label.empty()) {
            out << format_double(static_cast<double>(k) * x.sample_time);
            first = false;
        }
        for (Eigen::Index c = 0; c < x.channels.rows(); ++c) {
            out << (first ? "" : ",") << format_double(x.channels(c, static_cast<Eigen::Index>(k)));
            first = false;
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

SignalRecord read_signal_csv(const std::string& path, const CsvSelection& sel) {
    const Table t = read_table(path);
    const bool timed = is_time_column(t.header.front());
    std::vector<std::size_t> cols;
    std::vector<std::string> labels;
    if (sel.columns.empty()) {
        for (std::size_t j = timed ? 1 : 0; j < t.header.size(); ++j) {
            cols.push_back(j);
            labels.push_back(t.header[j]);
        }
    } else {
        for (const auto& name : sel.columns) {
            std::size_t j = 0;
            while (j < t.header.size() && t.header[j] != name) ++j;
            if (j == t.header.size()) throw ValidationError(path + ": no column named '" + name + "'");
            cols.push_back(j);
            labels.push_back(name);
        }
    }
    if (cols.empty()) throw ValidationError(path + ": no data columns");
    const std::size_t end = std::min(sel.end, t.rows.size());
    if (sel.begin >= end)
        throw ValidationError(path + ": sample range [" + std::to_string(sel.begin) + ", " +
                              std::to_string(sel.end) + ") selects no rows of " + std::to_string(t.rows.size()));
    Eigen::MatrixXd data(static_cast<Eigen::Index>(cols.size()), static_cast<Eigen::Index>(end - sel.begin));
    for (std::size_t k = sel.begin; k < end; ++k)
        for (std::size_t c = 0; c < cols.size(); ++c)
            data(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k - sel.begin)) =
                parse_number(t.rows[k][cols[c]], path, t.line_numbers[k]);
    double ts = 1.0;
    if (timed && t.rows.size() >= 2) {
        ts = parse_number(t.rows[1][0], path, t.line_numbers[1]) - parse_number(t.rows[0][0], path, t.line_numbers[0]);
        if (!(ts > 0.0)) throw ValidationError(path + ": time column is not increasing");
    }
    return SignalRecord(std::move(data), ts, std::move(labels));
}

void write_scenario_csv(const std::string& path, const CstrDataset& d) {
    if (d.u.length() != d.y.length() || d.u.channel_count() != 2 || d.y.channel_count() != 2)
        throw ValidationError("write_scenario_csv: expects two inputs and two outputs of equal length");
    Eigen::MatrixXd all(4, d.u.channels.cols());
    all << d.u.channels, d.y.channels;
    write_signal_csv(path, SignalRecord(std::move(all), d.u.sample_time, {"q", "Tj", "CA", "T"}), "t_min");
}

CstrDataset read_scenario_csv(const std::string& path) {
    return {read_signal_csv(path, {{"q", "Tj"}}), read_signal_csv(path, {{"CA", "T"}})};
}

void write_cepstrum_csv(const std::string& path, const CepstrumSequence& c) {
    std::ostringstream out;
    out << "k,c,provenance,zeroth_reliable\n";
    for (std::size_t k = 0; k < c.coeffs.size(); ++k)
        out << k << ',' << format_double(c.coeffs[k]) << ',' << to_string(c.provenance) << ','
            << (c.zeroth_reliable ? "true" : "false") << '\n';
    write_text_file(path, out.str());
}

CepstrumSequence read_cepstrum_csv(const std::string& path) {
    const Table t = read_table(path);
    if (t.header != std::vector<std::string>{"k", "c", "provenance", "zeroth_reliable"})
        throw ValidationError(path + ": expected header k,c,provenance,zeroth_reliable");
    if (t.rows.empty()) throw ValidationError(path + ": no coefficients");
    CepstrumSequence out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::size_t line = t.line_numbers[r];
        if (parse_number(row[0], path, line) != static_cast<double>(r))
            throw ValidationError(path + ":" + std::to_string(line) + ": k must ascend from 0");
        out.coeffs.push_back(parse_number(row[1], path, line));
        const auto prov = provenance_from_string(row[2]);
        if (row[3] != "true" && row[3] != "false")
            throw ValidationError(path + ":" + std::to_string(line) + ": zeroth_reliable must be true or false");
        if (r == 0) {
            out.provenance = prov;
            out.zeroth_reliable = row[3] == "true";
        }
    }
    return out;
}

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
    return j.at(key);
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ValidationError(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(where + ": expected a finite number");
    return v;
}

std::size_t as_count(const json& j, const std::string& where) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) throw ValidationError(where + ": expected an integer");
    if (j.get<long long>() < 0) throw ValidationError(where + ": must not be negative");
    return j.get<std::size_t>();
}

Eigen::MatrixXd flat_matrix(const json& j, const char* key, std::size_t rows, std::size_t cols) {
    const std::string where = std::string("model.") + key;
    const json& a = field(j, key, "model");
    if (!a.is_array()) throw ValidationError(where + ": expected a flat row-major array");
    if (a.size() != rows * cols)
        throw ValidationError(where + ": expected " + std::to_string(rows * cols) + " entries (" + std::to_string(rows) +
                              "x" + std::to_string(cols) + "), found " + std::to_string(a.size()));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                as_number(a[i * cols + k], where + "[" + std::to_string(i * cols + k) + "]");
    return m;
}

json flat(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) a.push_back(m(i, k));
    return a;
}

json parse_object(const std::string& text, const std::string& what) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(what + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw ValidationError(what + ": expected a JSON object");
    return j;
}

}  // namespace

ModelFile parse_model_json(const std::string& text) {
    const json j = parse_object(text, "model");
    for (const auto& [key, value] : j.items())
        if (key != "n" && key != "m" && key != "l" && key != "A" && key != "B" && key != "C" && key != "D" &&
            key != "input")
            throw ValidationError("model: unknown field '" + key + "'");
    const std::size_t n = as_count(field(j, "n", "model"), "model.n");
    const std::size_t m = as_count(field(j, "m", "model"), "model.m");
    const std::size_t l = as_count(field(j, "l", "model"), "model.l");
    if (m == 0 || l == 0) throw ValidationError("model: m and l must be positive");
    ModelFile out{StateSpaceModel(flat_matrix(j, "A", n, n), flat_matrix(j, "B", n, l), flat_matrix(j, "C", m, n),
                                  flat_matrix(j, "D", m, l)),
                  std::nullopt};
    if (j.contains("input")) {
        const json& in = j.at("input");
        if (!in.is_object()) throw ValidationError("model.input: expected an object");
        InputSpec spec;
        for (const auto& [key, value] : in.items()) {
            if (key == "samples") {
                spec.samples = as_count(value, "model.input.samples");
            } else if (key == "seed") {
                spec.seed = as_count(value, "model.input.seed");
            } else if (key == "gains") {
                if (!value.is_array()) throw ValidationError("model.input.gains: expected an array");
                for (std::size_t i = 0; i < value.size(); ++i)
                    spec.gains.push_back(as_number(value[i], "model.input.gains[" + std::to_string(i) + "]"));
            } else {
                throw ValidationError("model.input: unknown field '" + key + "'");
            }
        }
        if (spec.samples == 0) throw ValidationError("model.input.samples: must be positive");
        if (!spec.gains.empty() && spec.gains.size() != l)
            throw ValidationError("model.input.gains: expected " + std::to_string(l) + " entries, found " +
                                  std::to_string(spec.gains.size()));
        out.input = spec;
    }
    return out;
}

std::string model_to_json(const StateSpaceModel& model, const std::optional<InputSpec>& input) {
    json j;
    j["n"] = model.states();
    j["m"] = model.outputs();
    j["l"] = model.inputs();
    j["A"] = flat(model.A());
    j["B"] = flat(model.B());
    j["C"] = flat(model.C());
    j["D"] = flat(model.D());
    if (input) j["input"] = {{"samples", input->samples}, {"gains", input->gains}, {"seed", input->seed}};
    return j.dump(2) + "\n";
}

bool looks_like_model_json(const std::string& text) {
    const json j = json::parse(text, nullptr, false);
    return j.is_object() && j.contains("A");
}

CstrConfig parse_cstr_config(const std::string& text) {
    const json j = parse_object(text, "cstr config");
    CstrConfig cfg;
    auto num = [](const json& v, const std::string& k) { return as_number(v, "cstr config." + k); };
    for (const auto& [key, value] : j.items()) {
        if (key == "V") cfg.volume = num(value, key);
        else if (key == "k0") cfg.k0 = num(value, key);
        else if (key == "EoverR") cfg.e_over_r = num(value, key);
        else if (key == "dH") cfg.delta_h = num(value, key);
        else if (key == "rho") cfg.rho = num(value, key);
        else if (key == "Cp") cfg.cp = num(value, key);
        else if (key == "UA0") cfg.ua0 = num(value, key);
        else if (key == "fouling_start") cfg.fouling_start = num(value, key);
        else if (key == "fouling_slope") cfg.fouling_slope = num(value, key);
        else if (key == "Kp") cfg.kp = num(value, key);
        else if (key == "Kd") cfg.kd = num(value, key);
        else if (key == "Ki") cfg.ki = num(value, key);
        else if (key == "sample_time") cfg.sample_time = num(value, key);
        else if (key == "integrator_step") cfg.integrator_step = num(value, key);
        else if (key == "control_step") cfg.control_step = num(value, key);
        else if (key == "windup_factor") cfg.windup_factor = num(value, key);
        else if (key == "samples") cfg.samples = as_count(value, "cstr config.samples");
        else if (key == "seed") cfg.seed = as_count(value, "cstr config.seed");
        else if (key == "controller_on") {
            if (!value.is_boolean()) throw ValidationError("cstr config.controller_on: expected true or false");
            cfg.controller_on = value.get<bool>();
        } else if (key == "decoupler") {
            if (!value.is_array() || value.size() != 2 || !value[0].is_array() || !value[1].is_array() ||
                value[0].size() != 2 || value[1].size() != 2)
                throw ValidationError("cstr config.decoupler: expected [[a, b], [c, d]]");
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) cfg.decoupler(r, c) = num(value[r][c], "decoupler");
        } else if (key == "operating_point") {
            if (!value.is_object()) throw ValidationError("cstr config.operating_point: expected an object");
            for (const auto& [k, v] : value.items()) {
                const std::string w = "operating_point." + k;
                if (k == "CA") cfg.op.ca = num(v, w);
                else if (k == "T") cfg.op.t = num(v, w);
                else if (k == "q") cfg.op.q = num(v, w);
                else if (k == "Tj") cfg.op.tj = num(v, w);
                else if (k == "Tf") cfg.op.tf = num(v, w);
                else if (k == "CAf") cfg.op.caf = num(v, w);
                else throw ValidationError("cstr config.operating_point: unknown field '" + k + "'");
            }
        } else if (key == "noise_variances") {
            if (!value.is_object()) throw ValidationError("cstr config.noise_variances: expected an object");
            for (const auto& [k, v] : value.items()) {
                const std::string w = "noise_variances." + k;
                if (k == "v1") cfg.noise.v1 = num(v, w);
                else if (k == "v2") cfg.noise.v2 = num(v, w);
                else if (k == "CA") cfg.noise.ca = num(v, w);
                else if (k == "T") cfg.noise.t = num(v, w);
                else if (k == "q") cfg.noise.q = num(v, w);
                else if (k == "Tj") cfg.noise.tj = num(v, w);
                else throw ValidationError("cstr config.noise_variances: unknown field '" + k + "'");
            }
        } else {
            throw ValidationError("cstr config: unknown field '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

std::string cstr_config_to_json(const CstrConfig& cfg) {
    json j;
    j["V"] = cfg.volume;
    j["k0"] = cfg.k0;
    j["EoverR"] = cfg.e_over_r;
    j["dH"] = cfg.delta_h;
    j["rho"] = cfg.rho;
    j["Cp"] = cfg.cp;
    j["UA0"] = cfg.ua0;
    j["operating_point"] = {{"CA", cfg.op.ca}, {"T", cfg.op.t}, {"q", cfg.op.q},
                            {"Tj", cfg.op.tj}, {"Tf", cfg.op.tf}, {"CAf", cfg.op.caf}};
    j["noise_variances"] = {{"v1", cfg.noise.v1}, {"v2", cfg.noise.v2}, {"CA", cfg.noise.ca},
                            {"T", cfg.noise.t},   {"q", cfg.noise.q},   {"Tj", cfg.noise.tj}};
    j["fouling_start"] = cfg.fouling_start;
    j["fouling_slope"] = cfg.fouling_slope;
    j["controller_on"] = cfg.controller_on;
    j["Kp"] = cfg.kp;
    j["Kd"] = cfg.kd;
    j["Ki"] = cfg.ki;
    j["decoupler"] = {{cfg.decoupler(0, 0), cfg.decoupler(0, 1)}, {cfg.decoupler(1, 0), cfg.decoupler(1, 1)}};
    j["sample_time"] = cfg.sample_time;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["integrator_step"] = cfg.integrator_step;
    j["control_step"] = cfg.control_step;
    j["windup_factor"] = cfg.windup_factor;
    return j.dump(2) + "\n";
}

std::string pole_zero_json(const std::vector<cplx>& poles, const std::vector<cplx>& zeros, double gain,
                           const std::vector<std::string>& warnings) {
    auto list = [](const std::vector<cplx>& v) {
        json a = json::array();
        for (const cplx z : v) a.push_back({{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}});
        return a;
    };
    json j;
    j["poles"] = list(poles);
    j["zeros"] = list(zeros);
    j["gain"] = gain;
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

}  // namespace mimocep
