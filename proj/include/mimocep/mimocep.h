/* C interface to the mimocep library. Every function returns an mc_status;
 * on failure mc_last_error() describes the problem (per thread). Objects are
 * opaque handles released with the matching *_free function. Matrices are
 * passed row-major; signal data is channel-major (channel 0 samples first). */
#ifndef MIMOCEP_H
#define MIMOCEP_H

#include <stddef.h>
#include <stdint.h>

#if defined(MIMOCEP_BUILDING)
#define MC_API __attribute__((visibility("default")))
#else
#define MC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mc_status {
    MC_OK = 0,
    MC_ERR_VALIDATION = 2,
    MC_ERR_NUMERICAL = 3,
    MC_ERR_IO = 4,
    MC_ERR_INTERNAL = 5
} mc_status;

typedef struct mc_model mc_model;
typedef struct mc_signal mc_signal;
typedef struct mc_cepstrum mc_cepstrum;
typedef struct mc_cstr_config mc_cstr_config;

typedef enum mc_window { MC_WINDOW_HANN = 0, MC_WINDOW_HAMMING = 1, MC_WINDOW_RECTANGULAR = 2 } mc_window;

typedef struct mc_welch_params {
    size_t segment_length;
    double overlap;
    mc_window window;
    size_t grid_size;
    int demean;
    unsigned threads;
} mc_welch_params;

MC_API const char* mc_last_error(void);
MC_API const char* mc_version(void);

/* models */
MC_API mc_status mc_model_create(size_t n, size_t m, size_t l, const double* a, const double* b, const double* c,
                                 const double* d, mc_model** out);
MC_API mc_status mc_model_load_json(const char* path, mc_model** out);
MC_API mc_status mc_model_save_json(const mc_model* model, const char* path);
MC_API mc_status mc_model_fixture(uint64_t seed, mc_model** out);
MC_API mc_status mc_model_random(size_t order, size_t ports, uint64_t seed, mc_model** out);
MC_API void mc_model_free(mc_model* model);
MC_API mc_status mc_model_dims(const mc_model* model, size_t* n, size_t* m, size_t* l);
/* count receives the number of roots; at most cap are written. */
MC_API mc_status mc_model_poles(const mc_model* model, double* re, double* im, size_t cap, size_t* count);
MC_API mc_status mc_model_zeros(const mc_model* model, double* re, double* im, size_t cap, size_t* count);
/* Smith-McMillan pole/zero listing as JSON. */
MC_API mc_status mc_model_write_pole_zero_json(const mc_model* model, const char* path);
/* White-noise request stored in the model file; *present is 0 when absent.
 * gains receives up to cap values (l of them, ones when unspecified). */
MC_API mc_status mc_model_input_spec(const mc_model* model, int* present, size_t* samples, uint64_t* seed,
                                     double* gains, size_t cap);

/* signals */
MC_API mc_status mc_signal_create(size_t channels, size_t samples, const double* data, double sample_time,
                                  mc_signal** out);
MC_API mc_status mc_signal_white_noise(size_t samples, const double* gains, size_t channels, uint64_t seed,
                                       mc_signal** out);
/* columns: comma-separated names or NULL for all; end = 0 reads to the end. */
MC_API mc_status mc_signal_read_csv(const char* path, const char* columns, size_t begin, size_t end,
                                    mc_signal** out);
MC_API mc_status mc_signal_write_csv(const mc_signal* x, const char* path);
MC_API void mc_signal_free(mc_signal* x);
MC_API mc_status mc_signal_dims(const mc_signal* x, size_t* channels, size_t* samples);
MC_API mc_status mc_signal_data(const mc_signal* x, double* out, size_t cap);
MC_API mc_status mc_signal_slice(const mc_signal* x, size_t begin, size_t end, mc_signal** out);
MC_API mc_status mc_simulate(const mc_model* model, const mc_signal* u, mc_signal** y);

/* cepstra */
MC_API void mc_welch_defaults(mc_welch_params* p);
MC_API mc_status mc_cepstrum_exact(const double* pole_re, const double* pole_im, size_t n_poles,
                                   const double* zero_re, const double* zero_im, size_t n_zeros, double gain,
                                   size_t order, mc_cepstrum** out);
MC_API mc_status mc_cepstrum_model(const mc_model* model, size_t order, mc_cepstrum** out);
MC_API mc_status mc_cepstrum_spectrum(const mc_model* model, size_t order, size_t grid_size, mc_cepstrum** out);
MC_API mc_status mc_cepstrum_data(const mc_signal* x, const mc_welch_params* p, size_t order, mc_cepstrum** out);
MC_API mc_status mc_cepstrum_system(const mc_signal* u, const mc_signal* y, const mc_welch_params* p, size_t order,
                                    mc_cepstrum** out);
MC_API mc_status mc_cepstrum_read_csv(const char* path, mc_cepstrum** out);
MC_API mc_status mc_cepstrum_write_csv(const mc_cepstrum* c, const char* path);
MC_API void mc_cepstrum_free(mc_cepstrum* c);
MC_API mc_status mc_cepstrum_coeffs(const mc_cepstrum* c, double* out, size_t cap, size_t* count);
MC_API int mc_cepstrum_zeroth_reliable(const mc_cepstrum* c);
MC_API const char* mc_cepstrum_provenance(const mc_cepstrum* c);
MC_API size_t mc_cepstrum_warning_count(const mc_cepstrum* c);
MC_API const char* mc_cepstrum_warning(const mc_cepstrum* c, size_t i);
/* weights may be NULL (all ones); otherwise n_weights must equal the order. */
MC_API mc_status mc_fingerprint_distance(const mc_cepstrum* a, const mc_cepstrum* b, const double* weights,
                                         size_t n_weights, double* out);

/* CSTR */
MC_API mc_status mc_cstr_config_default(mc_cstr_config** out);
MC_API mc_status mc_cstr_config_load_json(const char* path, mc_cstr_config** out);
MC_API mc_status mc_cstr_config_save_json(const mc_cstr_config* cfg, const char* path);
MC_API void mc_cstr_config_free(mc_cstr_config* cfg);
MC_API mc_status mc_cstr_config_set_controller(mc_cstr_config* cfg, int on);
MC_API mc_status mc_cstr_config_set_seed(mc_cstr_config* cfg, uint64_t seed);
MC_API mc_status mc_cstr_config_set_samples(mc_cstr_config* cfg, size_t samples);
MC_API mc_status mc_cstr_config_seed(const mc_cstr_config* cfg, uint64_t* seed);
/* u receives (q, Tj), y receives (CA, T). */
MC_API mc_status mc_cstr_generate(const mc_cstr_config* cfg, mc_signal** u, mc_signal** y);
MC_API mc_status mc_cstr_write_scenario_csv(const mc_signal* u, const mc_signal* y, const char* path);

/* 1 when the file parses as a JSON object with a state-space "A" field. */
MC_API int mc_file_is_model_json(const char* path);

#ifdef __cplusplus
}
#endif

#endif
