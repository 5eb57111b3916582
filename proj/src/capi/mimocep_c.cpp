#include "mimocep/mimocep.h"

#include "mimocep/cepstrum.hpp"
#include "mimocep/cstr.hpp"
#include "mimocep/error.hpp"
#include "mimocep/io.hpp"
#include "mimocep/smith_mcmillan.hpp"
#include "mimocep/synthesis.hpp"

#include <new>
#include <optional>
#include <span>
#include <sstream>
#include <string>

struct mc_model {
    mimocep::StateSpaceModel model;
    std::optional<mimocep::InputSpec> input;
};

struct mc_signal {
    mimocep::SignalRecord record;
};

struct mc_cepstrum {
    mimocep::CepstrumSequence seq;
};

struct mc_cstr_config {
    mimocep::CstrConfig cfg;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
mc_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return MC_OK;
    } catch (const mimocep::IoError& e) {
        g_last_error = e.what();
        return MC_ERR_IO;
    } catch (const mimocep::ValidationError& e) {
        g_last_error = e.what();
        return MC_ERR_VALIDATION;
    } catch (const mimocep::NumericalError& e) {
        g_last_error = e.what();
        return MC_ERR_NUMERICAL;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return MC_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = std::string("internal error: ") + e.what();
        return MC_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "internal error";
        return MC_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (p == nullptr) throw mimocep::ValidationError(std::string(what) + " must not be NULL");
}

Eigen::MatrixXd matrix(const double* data, std::size_t rows, std::size_t cols, const char* what) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    if (rows * cols > 0) need(data, what);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = data[i * cols + k];
    return m;
}

void copy_roots(const std::vector<mimocep::cplx>& roots, double* re, double* im, std::size_t cap, std::size_t* count) {
    need(count, "count");
    *count = roots.size();
    for (std::size_t i = 0; i < roots.size() && i < cap; ++i) {
        if (re) re[i] = roots[i].real();
        if (im) im[i] = roots[i].imag();
    }
}

std::vector<mimocep::cplx> roots(const double* re, const double* im, std::size_t n, const char* what) {
    std::vector<mimocep::cplx> out;
    if (n > 0) need(re, what);
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(re[i], im ? im[i] : 0.0);
    return out;
}

mimocep::WelchParams welch(const mc_welch_params* p) {
    mimocep::WelchParams w;
    if (!p) return w;
    w.segment_length = p->segment_length;
    w.overlap = p->overlap;
    switch (p->window) {
        case MC_WINDOW_HANN: w.window = mimocep::WindowKind::hann; break;
        case MC_WINDOW_HAMMING: w.window = mimocep::WindowKind::hamming; break;
        case MC_WINDOW_RECTANGULAR: w.window = mimocep::WindowKind::rectangular; break;
        default: throw mimocep::ValidationError("unknown window kind");
    }
    w.grid_size = p->grid_size;
    w.demean = p->demean != 0;
    return w;
}

unsigned threads(const mc_welch_params* p) { return p && p->threads > 0 ? p->threads : 1; }

template <typename T, typename... Args>
void emit(T** out, Args&&... args) {
    need(out, "out");
    *out = nullptr;
    *out = new T{std::forward<Args>(args)...};
}

}  // namespace

extern "C" {

const char* mc_last_error(void) { return g_last_error.c_str(); }

const char* mc_version(void) { return MIMOCEP_VERSION; }

mc_status mc_model_create(size_t n, size_t m, size_t l, const double* a, const double* b, const double* c,
                          const double* d, mc_model** out) {
    return guarded([&] {
        emit(out, mimocep::StateSpaceModel(matrix(a, n, n, "A"), matrix(b, n, l, "B"), matrix(c, m, n, "C"),
                                           matrix(d, m, l, "D")),
             std::nullopt);
    });
}

mc_status mc_model_load_json(const char* path, mc_model** out) {
    return guarded([&] {
        need(path, "path");
        auto file = mimocep::parse_model_json(mimocep::read_text_file(path));
        emit(out, std::move(file.model), std::move(file.input));
    });
}

mc_status mc_model_save_json(const mc_model* model, const char* path) {
    return guarded([&] {
        need(model, "model");
        need(path, "path");
        mimocep::write_text_file(path, mimocep::model_to_json(model->model, model->input));
    });
}

mc_status mc_model_fixture(uint64_t seed, mc_model** out) {
    return guarded([&] { emit(out, mimocep::synthetic_3x3_fixture(seed).model, std::nullopt); });
}

mc_status mc_model_random(size_t order, size_t ports, uint64_t seed, mc_model** out) {
    return guarded([&] {
        mimocep::RandomModelSpec spec;
        spec.order = order;
        spec.ports = ports;
        spec.seed = seed;
        emit(out, mimocep::random_stable_model(spec).model, std::nullopt);
    });
}

void mc_model_free(mc_model* model) { delete model; }

mc_status mc_model_dims(const mc_model* model, size_t* n, size_t* m, size_t* l) {
    return guarded([&] {
        need(model, "model");
        if (n) *n = model->model.states();
        if (m) *m = model->model.outputs();
        if (l) *l = model->model.inputs();
    });
}

mc_status mc_model_poles(const mc_model* model, double* re, double* im, size_t cap, size_t* count) {
    return guarded([&] {
        need(model, "model");
        copy_roots(mimocep::poles(model->model), re, im, cap, count);
    });
}

mc_status mc_model_zeros(const mc_model* model, double* re, double* im, size_t cap, size_t* count) {
    return guarded([&] {
        need(model, "model");
        copy_roots(mimocep::transmission_zeros(model->model).zeros, re, im, cap, count);
    });
}

mc_status mc_model_write_pole_zero_json(const mc_model* model, const char* path) {
    return guarded([&] {
        need(model, "model");
        need(path, "path");
        const auto tf = mimocep::transfer_matrix(model->model);
        const auto smf = mimocep::smith_mcmillan(tf.matrix);
        const auto pz = mimocep::pole_zero_roots(smf);
        auto warnings = tf.warnings;
        warnings.insert(warnings.end(), smf.warnings.begin(), smf.warnings.end());
        mimocep::write_text_file(path, mimocep::pole_zero_json(pz.poles, pz.zeros, pz.gain, warnings));
    });
}

mc_status mc_model_input_spec(const mc_model* model, int* present, size_t* samples, uint64_t* seed, double* gains,
                              size_t cap) {
    return guarded([&] {
        need(model, "model");
        need(present, "present");
        *present = model->input.has_value() ? 1 : 0;
        if (!model->input) return;
        if (samples) *samples = model->input->samples;
        if (seed) *seed = model->input->seed;
        if (gains)
            for (std::size_t i = 0; i < cap && i < model->model.inputs(); ++i)
                gains[i] = model->input->gains.empty() ? 1.0 : model->input->gains[i];
    });
}

mc_status mc_signal_create(size_t channels, size_t samples, const double* data, double sample_time, mc_signal** out) {
    return guarded([&] { emit(out, mimocep::SignalRecord(matrix(data, channels, samples, "data"), sample_time)); });
}

mc_status mc_signal_white_noise(size_t samples, const double* gains, size_t channels, uint64_t seed, mc_signal** out) {
    return guarded([&] {
        need(gains, "gains");
        emit(out, mimocep::white_noise(samples, std::vector<double>(gains, gains + channels), seed));
    });
}

mc_status mc_signal_read_csv(const char* path, const char* columns, size_t begin, size_t end, mc_signal** out) {
    return guarded([&] {
        need(path, "path");
        mimocep::CsvSelection sel;
        if (columns && *columns) {
            std::istringstream ss(columns);
            std::string name;
            while (std::getline(ss, name, ',')) sel.columns.push_back(name);
        }
        sel.begin = begin;
        if (end > 0) sel.end = end;
        emit(out, mimocep::read_signal_csv(path, sel));
    });
}

mc_status mc_signal_write_csv(const mc_signal* x, const char* path) {
    return guarded([&] {
        need(x, "signal");
        need(path, "path");
        mimocep::write_signal_csv(path, x->record);
    });
}

void mc_signal_free(mc_signal* x) { delete x; }

mc_status mc_signal_dims(const mc_signal* x, size_t* channels, size_t* samples) {
    return guarded([&] {
        need(x, "signal");
        if (channels) *channels = x->record.channel_count();
        if (samples) *samples = x->record.length();
    });
}

mc_status mc_signal_data(const mc_signal* x, double* out, size_t cap) {
    return guarded([&] {
        need(x, "signal");
        need(out, "out");
        const auto& m = x->record.channels;
        std::size_t i = 0;
        for (Eigen::Index c = 0; c < m.rows(); ++c)
            for (Eigen::Index k = 0; k < m.cols() && i < cap; ++k) out[i++] = m(c, k);
    });
}

mc_status mc_signal_slice(const mc_signal* x, size_t begin, size_t end, mc_signal** out) {
    return guarded([&] {
        need(x, "signal");
        emit(out, x->record.slice(begin, end));
    });
}

mc_status mc_simulate(const mc_model* model, const mc_signal* u, mc_signal** y) {
    return guarded([&] {
        need(model, "model");
        need(u, "input signal");
        emit(y, mimocep::simulate(model->model, u->record));
    });
}

void mc_welch_defaults(mc_welch_params* p) {
    if (!p) return;
    const mimocep::WelchParams w;
    p->segment_length = w.segment_length;
    p->overlap = w.overlap;
    p->window = MC_WINDOW_HANN;
    p->grid_size = w.grid_size;
    p->demean = w.demean ? 1 : 0;
    p->threads = 1;
}

mc_status mc_cepstrum_exact(const double* pole_re, const double* pole_im, size_t n_poles, const double* zero_re,
                            const double* zero_im, size_t n_zeros, double gain, size_t order, mc_cepstrum** out) {
    return guarded([&] {
        emit(out, mimocep::exact_cepstrum(roots(pole_re, pole_im, n_poles, "poles"),
                                          roots(zero_re, zero_im, n_zeros, "zeros"), gain, order));
    });
}

mc_status mc_cepstrum_model(const mc_model* model, size_t order, mc_cepstrum** out) {
    return guarded([&] {
        need(model, "model");
        emit(out, mimocep::model_cepstrum(model->model, order));
    });
}

mc_status mc_cepstrum_spectrum(const mc_model* model, size_t order, size_t grid_size, mc_cepstrum** out) {
    return guarded([&] {
        need(model, "model");
        emit(out, mimocep::spectrum_cepstrum(model->model, order, grid_size));
    });
}

mc_status mc_cepstrum_data(const mc_signal* x, const mc_welch_params* p, size_t order, mc_cepstrum** out) {
    return guarded([&] {
        need(x, "signal");
        emit(out, mimocep::data_cepstrum(x->record, welch(p), order, threads(p)));
    });
}

mc_status mc_cepstrum_system(const mc_signal* u, const mc_signal* y, const mc_welch_params* p, size_t order,
                             mc_cepstrum** out) {
    return guarded([&] {
        need(u, "input signal");
        need(y, "output signal");
        emit(out, mimocep::system_cepstrum_from_io(u->record, y->record, welch(p), order, threads(p)));
    });
}

mc_status mc_cepstrum_read_csv(const char* path, mc_cepstrum** out) {
    return guarded([&] {
        need(path, "path");
        emit(out, mimocep::read_cepstrum_csv(path));
    });
}

mc_status mc_cepstrum_write_csv(const mc_cepstrum* c, const char* path) {
    return guarded([&] {
        need(c, "cepstrum");
        need(path, "path");
        mimocep::write_cepstrum_csv(path, c->seq);
    });
}

void mc_cepstrum_free(mc_cepstrum* c) { delete c; }

mc_status mc_cepstrum_coeffs(const mc_cepstrum* c, double* out, size_t cap, size_t* count) {
    return guarded([&] {
        need(c, "cepstrum");
        if (count) *count = c->seq.coeffs.size();
        for (std::size_t k = 0; out && k < cap && k < c->seq.coeffs.size(); ++k) out[k] = c->seq.coeffs[k];
    });
}

int mc_cepstrum_zeroth_reliable(const mc_cepstrum* c) { return c && c->seq.zeroth_reliable ? 1 : 0; }

const char* mc_cepstrum_provenance(const mc_cepstrum* c) { return c ? mimocep::to_string(c->seq.provenance) : ""; }

size_t mc_cepstrum_warning_count(const mc_cepstrum* c) { return c ? c->seq.warnings.size() : 0; }

const char* mc_cepstrum_warning(const mc_cepstrum* c, size_t i) {
    return c && i < c->seq.warnings.size() ? c->seq.warnings[i].c_str() : "";
}

mc_status mc_fingerprint_distance(const mc_cepstrum* a, const mc_cepstrum* b, const double* weights,
                                  size_t n_weights, double* out) {
    return guarded([&] {
        need(a, "a");
        need(b, "b");
        need(out, "out");
        std::span<const double> w;
        if (weights) w = std::span<const double>(weights, n_weights);
        *out = mimocep::fingerprint_distance(a->seq, b->seq, w);
    });
}

mc_status mc_cstr_config_default(mc_cstr_config** out) {
    return guarded([&] { emit(out, mimocep::CstrConfig{}); });
}

mc_status mc_cstr_config_load_json(const char* path, mc_cstr_config** out) {
    return guarded([&] {
        need(path, "path");
        emit(out, mimocep::parse_cstr_config(mimocep::read_text_file(path)));
    });
}

mc_status mc_cstr_config_save_json(const mc_cstr_config* cfg, const char* path) {
    return guarded([&] {
        need(cfg, "config");
        need(path, "path");
        mimocep::write_text_file(path, mimocep::cstr_config_to_json(cfg->cfg));
    });
}

void mc_cstr_config_free(mc_cstr_config* cfg) { delete cfg; }

mc_status mc_cstr_config_set_controller(mc_cstr_config* cfg, int on) {
    return guarded([&] {
        need(cfg, "config");
        cfg->cfg.controller_on = on != 0;
    });
}

mc_status mc_cstr_config_set_seed(mc_cstr_config* cfg, uint64_t seed) {
    return guarded([&] {
        need(cfg, "config");
        cfg->cfg.seed = seed;
    });
}

mc_status mc_cstr_config_set_samples(mc_cstr_config* cfg, size_t samples) {
    return guarded([&] {
        need(cfg, "config");
        if (samples == 0) throw mimocep::ValidationError("cstr config: samples must be positive");
        cfg->cfg.samples = samples;
    });
}

mc_status mc_cstr_config_seed(const mc_cstr_config* cfg, uint64_t* seed) {
    return guarded([&] {
        need(cfg, "config");
        need(seed, "seed");
        *seed = cfg->cfg.seed;
    });
}

mc_status mc_cstr_generate(const mc_cstr_config* cfg, mc_signal** u, mc_signal** y) {
    return guarded([&] {
        need(cfg, "config");
        need(u, "u");
        need(y, "y");
        auto d = mimocep::generate_dataset(cfg->cfg);
        auto* us = new mc_signal{std::move(d.u)};
        try {
            *y = new mc_signal{std::move(d.y)};
        } catch (...) {
            delete us;
            throw;
        }
        *u = us;
    });
}

mc_status mc_cstr_write_scenario_csv(const mc_signal* u, const mc_signal* y, const char* path) {
    return guarded([&] {
        need(u, "u");
        need(y, "y");
        need(path, "path");
        mimocep::write_scenario_csv(path, {u->record, y->record});
    });
}

int mc_file_is_model_json(const char* path) {
    if (!path) return 0;
    try {
        return mimocep::looks_like_model_json(mimocep::read_text_file(path)) ? 1 : 0;
    } catch (...) {
        return 0;
    }
}

}  // extern "C"
