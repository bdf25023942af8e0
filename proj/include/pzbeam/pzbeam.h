/* C API of the piezoelectric composite beam modal-analysis library.
 *
 * All functions return pzb_status; outputs go through pointers. On any
 * failure pzb_last_error() returns a thread-local description. Handles are
 * opaque and must be released with the matching *_free function. SI units
 * throughout; frequencies in Hz unless noted.
 */
#ifndef PZBEAM_PZBEAM_H
#define PZBEAM_PZBEAM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pzb_status {
    PZB_OK = 0,
    PZB_ERR_IO = 1,          /* file not readable */
    PZB_ERR_PARSE = 2,       /* malformed input */
    PZB_ERR_INVALID = 3,     /* invariant or argument violation */
    PZB_ERR_NOT_FOUND = 4,   /* unknown material name */
    PZB_ERR_NO_COUPLING = 5, /* operation needs piezoelectric coupling */
    PZB_ERR_SOLVER = 6,      /* numerical failure */
    PZB_ERR_INTERNAL = 7
} pzb_status;

const char* pzb_status_name(pzb_status status);
const char* pzb_last_error(void);

/* ---- material database ---- */

typedef struct pzb_material_db pzb_material_db;

pzb_status pzb_material_db_load(const char* path, pzb_material_db** out);
pzb_status pzb_material_db_parse(const char* json_text, pzb_material_db** out);
void pzb_material_db_free(pzb_material_db* db);
int pzb_material_db_count(const pzb_material_db* db);
/* Name of the idx-th material (sorted); NULL if out of range. The pointer
 * stays valid until the database is freed. */
const char* pzb_material_db_name(const pzb_material_db* db, int idx);

/* ---- model: layup + derived section ---- */

typedef struct pzb_model pzb_model;

pzb_status pzb_model_create(const pzb_material_db* db, const char* piezo_name,
                            const char* substrate_name, double h1, double h2,
                            double length, pzb_model** out);
void pzb_model_free(pzb_model* model);
pzb_status pzb_model_set_length(pzb_model* model, double length);
double pzb_model_length(const pzb_model* model);

typedef struct pzb_section {
    double z0;
    double A11;
    double B11;
    double D11;
    double F;
    double rho0;
    double rho1;
    double rho2;
    double eta1;
    double eta2;
    double Dbar;
} pzb_section;

pzb_status pzb_model_section(const pzb_model* model, pzb_section* out);

/* ---- analytic modal solution ---- */

typedef struct pzb_mode {
    int m;
    int symmetric; /* 1 = cosine family (odd m), 0 = sine family */
    double omega;  /* rad/s */
    double freq_hz;
    double n1, n3;
    double alpha2, beta4;
    double b1, b2, b3, b4;
    double length;
} pzb_mode;

pzb_status pzb_mode_closed_form(const pzb_model* model, int m, pzb_mode* out);
pzb_status pzb_mode_sixth_order(const pzb_model* model, int m, pzb_mode* out);
/* Deflection amplitude at x in [-L/2, L/2], normalized to max |w| = 1. */
pzb_status pzb_mode_shape(const pzb_mode* mode, double x, double* w_out);
/* Electric amplitude phi(x) on a uniform n_samples grid over [-L/2, L/2];
 * the full potential is z*(h1-z)*phi(x). */
pzb_status pzb_electric_profile(const pzb_model* model, const pzb_mode* mode,
                                int n_samples, double* phi_out);
/* Length whose closed-form mode-m frequency equals target_hz. Does not
 * modify the model. */
pzb_status pzb_calibrate_length(const pzb_model* model, double target_hz, int m,
                                double* length_out);

/* ---- finite-element oracle ---- */

typedef enum pzb_mode_class {
    PZB_MODE_FLEX_SYMMETRIC = 0,
    PZB_MODE_FLEX_ANTISYMMETRIC = 1,
    PZB_MODE_AXIAL = 2
} pzb_mode_class;

typedef struct pzb_fem_mode {
    double freq_hz;
    int mode_class; /* pzb_mode_class */
} pzb_fem_mode;

/* First k modes (all classes, ascending) of the simply supported beam. */
pzb_status pzb_fem_solve(const pzb_model* model, int n_elems, int include_rho1,
                         int k, pzb_fem_mode* out_modes);
/* First k flexural modes only. */
pzb_status pzb_fem_flexural(const pzb_model* model, int n_elems, int include_rho1,
                            int k, double* out_freqs);
/* Flexural convergence table: out_freqs is n_meshes*k, mesh-major. */
pzb_status pzb_fem_convergence(const pzb_model* model, const int* meshes,
                               int n_meshes, int k, double* out_freqs);
/* Writes the assembled stiffness and mass as (row, col, value) triplet text
 * files <prefix>K.txt and <prefix>M.txt. */
pzb_status pzb_fem_dump_matrices(const pzb_model* model, int n_elems,
                                 const char* path_prefix);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PZBEAM_PZBEAM_H */
