#include "aggsolve.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "config.hpp"
#include "experiment.hpp"
#include "geometry.hpp"
#include "network.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown error"; }

template <typename F>
agg_status guarded(F&& f) {
  try {
    return f();
  } catch (const aggsolve::ConfigError& e) {
    set_error(e.what());
    return AGG_ERR_USAGE;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return AGG_ERR_USAGE;
  } catch (const std::exception& e) {
    set_error(e.what());
    return AGG_ERR_NUMERIC;
  }
}

template <typename T, typename F>
T* guarded_make(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

void copy_log(const std::ostringstream& os, char* log, size_t cap) {
  if (!log || cap == 0) return;
  const std::string s = os.str();
  const size_t n = std::min(cap - 1, s.size());
  std::memcpy(log, s.data(), n);
  log[n] = '\0';
}

agg_status from_status(aggsolve::Status s) { return static_cast<agg_status>(s); }

}  // namespace

struct agg_body {
  aggsolve::ConvexBody body;
};
struct agg_poly {
  aggsolve::Polyhedron poly;
};
struct agg_graph {
  aggsolve::Digraph graph;
};
struct agg_config {
  aggsolve::KeyValueConfig cfg;
};

extern "C" {

const char* agg_last_error(void) { return g_last_error.c_str(); }
const char* agg_version(void) { return "aggsolve 1.0.0"; }

agg_body* agg_body_ellipsoid(int dim, const double* center, const double* semiaxes) {
  return guarded_make<agg_body>([&]() -> agg_body* {
    if (dim <= 0 || !center || !semiaxes)
      throw std::invalid_argument("agg_body_ellipsoid: bad arguments");
    aggsolve::Vec c(center, center + dim), v(semiaxes, semiaxes + dim);
    return new agg_body{aggsolve::ConvexBody::ellipsoid(std::move(c), std::move(v))};
  });
}

void agg_body_free(agg_body* body) { delete body; }

agg_status agg_body_support_point(const agg_body* body, const double* u, double* out) {
  return guarded([&]() {
    if (!body || !u || !out) throw std::invalid_argument("support_point: null argument");
    const aggsolve::Vec p =
        body->body.support_point({u, static_cast<size_t>(body->body.dim())});
    std::memcpy(out, p.data(), p.size() * sizeof(double));
    return AGG_OK;
  });
}

agg_status agg_body_project(const agg_body* body, const double* z, double* out) {
  return guarded([&]() {
    if (!body || !z || !out) throw std::invalid_argument("project: null argument");
    const aggsolve::Vec p =
        body->body.project({z, static_cast<size_t>(body->body.dim())});
    std::memcpy(out, p.data(), p.size() * sizeof(double));
    return AGG_OK;
  });
}

double agg_body_curvature(const agg_body* body) {
  return body ? aggsolve::curvature_nu(body->body) : -1.0;
}

agg_poly* agg_poly_inscribe_regular(const agg_body* body, int m, double theta0) {
  return guarded_make<agg_poly>([&]() -> agg_poly* {
    if (!body) throw std::invalid_argument("inscribe_regular: null body");
    return new agg_poly{aggsolve::inscribe_regular(body->body, m, theta0)};
  });
}

agg_poly* agg_poly_inscribe_greedy(const agg_body* body, int s) {
  return guarded_make<agg_poly>([&]() -> agg_poly* {
    if (!body) throw std::invalid_argument("inscribe_greedy: null body");
    return new agg_poly{aggsolve::inscribe_greedy(body->body, s)};
  });
}

agg_poly* agg_poly_load_file(const char* path) {
  return guarded_make<agg_poly>([&]() -> agg_poly* {
    if (!path) throw std::invalid_argument("poly_load: null path");
    std::ifstream is(path);
    if (!is) throw std::invalid_argument(std::string("poly_load: cannot open ") + path);
    return new agg_poly{aggsolve::Polyhedron::load(is)};
  });
}

agg_status agg_poly_save_file(const agg_poly* poly, const char* path) {
  return guarded([&]() {
    if (!poly || !path) throw std::invalid_argument("poly_save: null argument");
    std::ofstream os(path);
    if (!os) throw std::runtime_error(std::string("poly_save: cannot write ") + path);
    poly->poly.save(os);
    return AGG_OK;
  });
}

void agg_poly_free(agg_poly* poly) { delete poly; }

int agg_poly_facets(const agg_poly* poly) { return poly ? poly->poly.facet_count() : -1; }

int agg_poly_vertex_count(const agg_poly* poly) {
  return poly ? poly->poly.vertex_count() : -1;
}

agg_status agg_poly_project(const agg_poly* poly, const double* z, double tol,
                            double* out) {
  return guarded([&]() {
    if (!poly || !z || !out) throw std::invalid_argument("poly_project: null argument");
    const aggsolve::QpSolution sol = aggsolve::project_polyhedron(
        poly->poly, {z, static_cast<size_t>(poly->poly.dim())},
        tol > 0 ? tol : 1e-10);
    std::memcpy(out, sol.point.data(), sol.point.size() * sizeof(double));
    return AGG_OK;
  });
}

agg_status agg_poly_hausdorff(const agg_body* body, const agg_poly* poly, double* out) {
  return guarded([&]() {
    if (!body || !poly || !out) throw std::invalid_argument("hausdorff: null argument");
    *out = aggsolve::hausdorff_estimate(body->body, poly->poly).value;
    return AGG_OK;
  });
}

double agg_delta_bound(int n, const double* h, const double* nu, double c3) {
  try {
    if (n <= 0 || !h || !nu) throw std::invalid_argument("delta_bound: bad arguments");
    return aggsolve::delta_bound({h, static_cast<size_t>(n)},
                                 {nu, static_cast<size_t>(n)}, c3);
  } catch (const std::exception& e) {
    set_error(e.what());
    return -1.0;
  }
}

agg_graph* agg_graph_ring(int n) {
  return guarded_make<agg_graph>([&]() { return new agg_graph{aggsolve::ring(n)}; });
}

agg_graph* agg_graph_complete(int n) {
  return guarded_make<agg_graph>([&]() { return new agg_graph{aggsolve::complete(n)}; });
}

agg_graph* agg_graph_erdos_renyi(int n, double p, uint64_t seed) {
  return guarded_make<agg_graph>(
      [&]() { return new agg_graph{aggsolve::erdos_renyi(n, p, seed)}; });
}

void agg_graph_free(agg_graph* graph) { delete graph; }

int agg_graph_is_weight_balanced(const agg_graph* graph) {
  return graph ? (aggsolve::is_weight_balanced(graph->graph) ? 1 : 0) : -1;
}

int agg_graph_is_strongly_connected(const agg_graph* graph) {
  return graph ? (aggsolve::is_strongly_connected(graph->graph) ? 1 : 0) : -1;
}

double agg_graph_lambda(const agg_graph* graph) {
  try {
    if (!graph) throw std::invalid_argument("graph_lambda: null graph");
    return aggsolve::lambda_min_positive(graph->graph);
  } catch (const std::exception& e) {
    set_error(e.what());
    return -1.0;
  }
}

agg_config* agg_config_create(void) { return new agg_config{}; }

void agg_config_free(agg_config* cfg) { delete cfg; }

agg_status agg_config_load_file(agg_config* cfg, const char* path) {
  return guarded([&]() {
    if (!cfg || !path) throw std::invalid_argument("config_load: null argument");
    const aggsolve::KeyValueConfig loaded = aggsolve::KeyValueConfig::from_file(path);
    for (const auto& [k, v] : loaded.values()) cfg->cfg.set(k, v);
    return AGG_OK;
  });
}

agg_status agg_config_set(agg_config* cfg, const char* key, const char* value) {
  return guarded([&]() {
    if (!cfg || !key || !value) throw std::invalid_argument("config_set: null argument");
    cfg->cfg.set(key, value);
    return AGG_OK;
  });
}

const char* agg_config_get(const agg_config* cfg, const char* key) {
  if (!cfg || !key || !cfg->cfg.has(key)) return nullptr;
  thread_local std::string slot;
  slot = cfg->cfg.get(key);
  return slot.c_str();
}

agg_status agg_cmd_run(const agg_config* cfg, char* log, size_t log_cap) {
  return guarded([&]() {
    if (!cfg) throw std::invalid_argument("cmd_run: null config");
    std::ostringstream os;
    const aggsolve::Status st = aggsolve::cmd_run(cfg->cfg, os);
    copy_log(os, log, log_cap);
    if (st != aggsolve::Status::ok) set_error(os.str().c_str());
    return from_status(st);
  });
}

agg_status agg_cmd_sweep_polygons(const agg_config* cfg, const char* m_list,
                                  char* log, size_t log_cap) {
  return guarded([&]() {
    if (!cfg || !m_list) throw std::invalid_argument("cmd_sweep: null argument");
    std::ostringstream os;
    const aggsolve::Status st = aggsolve::cmd_sweep_polygons(cfg->cfg, m_list, os);
    copy_log(os, log, log_cap);
    return from_status(st);
  });
}

agg_status agg_cmd_compare(const agg_config* cfg, char* log, size_t log_cap) {
  return guarded([&]() {
    if (!cfg) throw std::invalid_argument("cmd_compare: null config");
    std::ostringstream os;
    const aggsolve::Status st = aggsolve::cmd_compare(cfg->cfg, os);
    copy_log(os, log, log_cap);
    return from_status(st);
  });
}

agg_status agg_cmd_check_graph(const agg_config* cfg, char* log, size_t log_cap) {
  return guarded([&]() {
    if (!cfg) throw std::invalid_argument("cmd_check_graph: null config");
    std::ostringstream os;
    const aggsolve::Status st = aggsolve::cmd_check_graph(cfg->cfg, os);
    copy_log(os, log, log_cap);
    return from_status(st);
  });
}

agg_status agg_cmd_validate(const agg_config* cfg, char* log, size_t log_cap) {
  return guarded([&]() {
    if (!cfg) throw std::invalid_argument("cmd_validate: null config");
    std::ostringstream os;
    const aggsolve::Status st = aggsolve::cmd_validate(cfg->cfg, os);
    copy_log(os, log, log_cap);
    return from_status(st);
  });
}

}  // extern "C"
