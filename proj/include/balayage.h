#ifndef BALAYAGE_H
#define BALAYAGE_H

/* C interface to the balayage library. Every function returns a bl_status;
 * on failure bl_last_error() describes the error of the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * bl_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BL_API __declspec(dllexport)
#else
#define BL_API __attribute__((visibility("default")))
#endif

typedef enum bl_status {
    BL_OK = 0,
    BL_ERR_CONFIG = 1,
    BL_ERR_DOMAIN = 2,
    BL_ERR_DIMENSION = 3,
    BL_ERR_HYPOTHESIS = 4,
    BL_ERR_NUMERIC = 5,
    BL_ERR_INVALID_ARGUMENT = 6,
    BL_ERR_INTERNAL = 7
} bl_status;

typedef struct bl_measure bl_measure;
typedef struct bl_grid bl_grid;
typedef struct bl_cells bl_cells;

BL_API const char* bl_version(void);
BL_API const char* bl_last_error(void);
BL_API void bl_string_free(char* s);

/* Measures: n atoms, coords holds n * dim doubles. */
BL_API bl_status bl_measure_create(int dim, size_t n, const double* coords, const double* weights, bl_measure** out);
BL_API bl_status bl_measure_from_json(const char* json, bl_measure** out);
BL_API bl_status bl_measure_to_json(const bl_measure* m, char** out);
BL_API void bl_measure_destroy(bl_measure* m);
BL_API int bl_measure_dim(const bl_measure* m);
BL_API size_t bl_measure_size(const bl_measure* m);
BL_API bl_status bl_measure_mass(const bl_measure* m, double* total, double* positive, double* negative);

/* Extended-real outputs are IEEE doubles (+-INFINITY allowed). */
BL_API bl_status bl_potential(const bl_measure* m, const double* y, double* value, int* evaluable);
BL_API bl_status bl_spatial_kernel(int dim, const double* y, const double* x, double* value);
BL_API bl_status bl_riesz_constant(int dim, double* value);

/* Harmonic measure quadrature and Green's function of the ball B(center, radius). */
BL_API bl_status bl_harmonic_measure(int dim, const double* center, double radius, const double* x, size_t n,
                                     bl_measure** out);
BL_API bl_status bl_green_ball(int dim, const double* center, double radius, const double* x, const double* y,
                               double* value);

/* Grids and cell sets in the plain-text mask format. */
BL_API bl_status bl_grid_from_mask(const char* text, bl_grid** out);
BL_API void bl_grid_destroy(bl_grid* g);
BL_API bl_status bl_cells_from_mask(const bl_grid* g, const char* text, bl_cells** out);
BL_API void bl_cells_destroy(bl_cells* s);
BL_API size_t bl_cells_count(const bl_cells* s);
BL_API bl_status bl_cells_to_mask(const bl_grid* g, const bl_cells* s, char** out);
BL_API bl_status bl_inward_fill(const bl_grid* g, const bl_cells* s, bl_cells** out);

/* Har-balayage check; writes the report JSON and whether it passed. */
BL_API bl_status bl_check_har_balayage(const bl_measure* delta, const bl_measure* omega, const bl_grid* g, double tol,
                                       int* verdict, char** report_json);

/* Scenario runner. exit_code is 0 pass, 1 verification failure, 2 config
 * error, 3 numeric fault; report and csv are always produced. base_dir
 * resolves relative mask_file paths (may be NULL). */
BL_API bl_status bl_scenario_run(const char* config_json, const char* base_dir, int has_seed, uint64_t seed,
                                 int timing, int* exit_code, char** report, char** csv);

/* Writes the files of a fixture kind into an existing directory. */
BL_API bl_status bl_fixture_make(const char* kind, uint64_t seed, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* BALAYAGE_H */
