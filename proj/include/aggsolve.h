/* aggsolve.h
 *
 * C interface to the aggregative-game solver library. The core is C++; this
 * header exposes opaque handles and status codes so command-line tools and
 * foreign-language bindings can link the shared library without touching C++
 * ABI. All functions are thread-compatible: handles are immutable after
 * construction except agg_config, which must not be mutated concurrently.
 */
#ifndef AGGSOLVE_H
#define AGGSOLVE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum agg_status {
  AGG_OK = 0,
  AGG_ERR_USAGE = 1,        /* bad arguments or configuration */
  AGG_ERR_NONCONVERGED = 2, /* run finished without meeting the tolerance */
  AGG_ERR_NUMERIC = 3,      /* numerical failure or I/O failure */
} agg_status;

/* Human-readable message for the last failing call on this thread. */
const char* agg_last_error(void);
const char* agg_version(void);

/* ------------------------------------------------------------------ bodies */

typedef struct agg_body agg_body;

/* Ellipsoid sum((x_i-c_i)^2 / v_i^2) <= 1; pass equal semiaxes for a ball. */
agg_body* agg_body_ellipsoid(int dim, const double* center, const double* semiaxes);
void agg_body_free(agg_body* body);
/* out receives dim entries. u must be a unit vector for the support point. */
agg_status agg_body_support_point(const agg_body* body, const double* u, double* out);
agg_status agg_body_project(const agg_body* body, const double* z, double* out);
double agg_body_curvature(const agg_body* body);

/* -------------------------------------------------------------- polyhedra */

typedef struct agg_poly agg_poly;

agg_poly* agg_poly_inscribe_regular(const agg_body* body, int m, double theta0);
agg_poly* agg_poly_inscribe_greedy(const agg_body* body, int s);
/* Plain-text halfspace format; see the project README. */
agg_poly* agg_poly_load_file(const char* path);
agg_status agg_poly_save_file(const agg_poly* poly, const char* path);
void agg_poly_free(agg_poly* poly);
int agg_poly_facets(const agg_poly* poly);
int agg_poly_vertex_count(const agg_poly* poly);
/* Euclidean projection of z onto the polyhedron; out receives dim entries. */
agg_status agg_poly_project(const agg_poly* poly, const double* z, double tol, double* out);
/* Hausdorff estimate between an inscribing body and the polyhedron. */
agg_status agg_poly_hausdorff(const agg_body* body, const agg_poly* poly, double* out);

/* delta(H) perturbation bound from per-player Hausdorff distances and
 * curvatures; returns a negative value on domain errors. */
double agg_delta_bound(int n, const double* h, const double* nu, double c3);

/* ----------------------------------------------------------------- graphs */

typedef struct agg_graph agg_graph;

agg_graph* agg_graph_ring(int n);
agg_graph* agg_graph_complete(int n);
agg_graph* agg_graph_erdos_renyi(int n, double p, uint64_t seed);
void agg_graph_free(agg_graph* graph);
int agg_graph_is_weight_balanced(const agg_graph* graph);
int agg_graph_is_strongly_connected(const agg_graph* graph);
/* Smallest positive eigenvalue of (L+L^T)/2; negative on failure. */
double agg_graph_lambda(const agg_graph* graph);

/* ------------------------------------------------------------ experiments */

/* Flat dotted-key configuration; the same keys the CLI flags map to. */
typedef struct agg_config agg_config;

agg_config* agg_config_create(void);
void agg_config_free(agg_config* cfg);
agg_status agg_config_load_file(agg_config* cfg, const char* path);
agg_status agg_config_set(agg_config* cfg, const char* key, const char* value);
/* Returns NULL when the key is unset; the pointer stays valid until the next
 * call that mutates the configuration. */
const char* agg_config_get(const agg_config* cfg, const char* key);

/* Experiment commands. Log output is appended to `log` (may be NULL); file
 * artifacts land under the configured out.dir. */
agg_status agg_cmd_run(const agg_config* cfg, char* log, size_t log_cap);
agg_status agg_cmd_sweep_polygons(const agg_config* cfg, const char* m_list,
                                  char* log, size_t log_cap);
agg_status agg_cmd_compare(const agg_config* cfg, char* log, size_t log_cap);
agg_status agg_cmd_check_graph(const agg_config* cfg, char* log, size_t log_cap);
agg_status agg_cmd_validate(const agg_config* cfg, char* log, size_t log_cap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AGGSOLVE_H */
