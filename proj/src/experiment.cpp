#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace aggsolve {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Vec parse_numbers(const std::string& s) {
  std::istringstream is(s);
  Vec out;
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp);
    os << content;
  }
  fs::rename(tmp, path);
}

std::string polygon_name(int m) {
  switch (m) {
    case 3: return "triangle";
    case 4: return "rectangle";
    case 6: return "hexagon";
    case 8: return "octagon";
    case 10: return "decagon";
    case 12: return "dodecagon";
    default: return std::to_string(m) + "-gon";
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string out_dir(const KeyValueConfig& cfg) {
  const std::string dir = cfg.get("out.dir", "out");
  fs::create_directories(dir);
  return dir;
}

void append_certificate(std::ostringstream& os, const GainCertificate& g,
                        const std::string& prefix) {
  os << prefix << "beta1 = " << fmt17(g.beta1) << '\n'
     << prefix << "beta2 = " << fmt17(g.beta2) << '\n'
     << prefix << "kappa = " << fmt17(g.kappa) << '\n'
     << prefix << "c1 = " << fmt17(g.c1) << '\n'
     << prefix << "c2 = " << fmt17(g.c2) << '\n'
     << prefix << "c3 = " << fmt17(g.c3) << '\n'
     << prefix << "c = " << fmt17(g.c) << '\n'
     << prefix << "lambda = " << fmt17(g.lambda) << '\n'
     << prefix << "beta2_lower = " << fmt17(g.beta2_lower) << '\n'
     << prefix << "beta1_ok = " << (g.beta1_ok ? 1 : 0) << '\n'
     << prefix << "beta2_ok = " << (g.beta2_ok ? 1 : 0) << '\n';
}

}  // namespace

AggregativeGame build_model(const KeyValueConfig& cfg) {
  const std::string name = cfg.get("model.name");
  if (name.empty()) throw ConfigError("config: model.name is required");
  if (name == "cournot") {
    CournotParams p;
    p.players = static_cast<int>(cfg.get_long("model.players", p.players));
    p.price_slope = cfg.get_double("model.price_slope", p.price_slope);
    if (cfg.has("model.semiaxes")) {
      p.semiaxes = parse_numbers(cfg.get("model.semiaxes"));
      if (p.semiaxes.size() != 2)
        throw ConfigError("config: cournot model.semiaxes needs 2 values");
    }
    return make_cournot(p);
  }
  if (name == "demand_response") {
    DemandResponseParams p;
    p.players = static_cast<int>(cfg.get_long("model.players", p.players));
    p.dim = static_cast<int>(cfg.get_long("model.dim", p.dim));
    p.iota = cfg.get_double("model.iota", p.iota);
    p.omega = cfg.get_double("model.omega", p.omega);
    p.p0 = cfg.get_double("model.p0", p.p0);
    p.pi_scale = cfg.get_double("model.pi_scale", p.pi_scale);
    p.ball_radius = cfg.get_double("model.radius", p.ball_radius);
    if (cfg.has("model.semiaxes")) {
      p.semiaxes = parse_numbers(cfg.get("model.semiaxes"));
    } else if (p.dim != 3 && p.ball_radius <= 0.0) {
      throw ConfigError("config: demand_response with dim != 3 needs model.radius or model.semiaxes");
    }
    return make_demand_response(p);
  }
  throw ConfigError("config: unknown model.name `" + name + "`");
}

Digraph build_graph(const KeyValueConfig& cfg, int default_n) {
  std::string type = cfg.get("graph.type", "ring");
  double p = cfg.get_double("graph.p", 0.5);
  std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_long("graph.seed", 1));
  if (cfg.has("graph.spec")) {
    const auto parts = split(cfg.get("graph.spec"), ':');
    if (parts.empty()) throw ConfigError("config: empty graph.spec");
    type = parts[0];
    if (parts.size() > 1) p = std::atof(parts[1].c_str());
    if (parts.size() > 2) seed = std::strtoull(parts[2].c_str(), nullptr, 10);
  }
  const int n = static_cast<int>(cfg.get_long("graph.n", default_n));
  if (type == "ring") return ring(n);
  if (type == "complete") return complete(n);
  if (type == "er") return erdos_renyi(n, p, seed);
  if (type == "matrix") {
    const Vec w = parse_numbers(cfg.get("graph.weights"));
    if (static_cast<int>(w.size()) != n * n)
      throw ConfigError("config: graph.weights needs N*N entries");
    Mat m(n, n);
    m.data = w;
    return Digraph::from_weights(std::move(m));
  }
  throw ConfigError("config: unknown graph type `" + type + "`");
}

ApproxSpec parse_approx(const KeyValueConfig& cfg) {
  ApproxSpec spec;
  spec.mode = cfg.get("approx.mode", spec.mode);
  spec.count = static_cast<int>(cfg.get_long("approx.m", cfg.get_long("approx.s", spec.count)));
  spec.theta0 = cfg.get_double("approx.theta0", spec.theta0);
  spec.file = cfg.get("approx.file");
  spec.align_ne = cfg.get("approx.align", "none") == "ne";
  spec.align_fraction = cfg.get_double("approx.align_fraction", spec.align_fraction);
  if (cfg.has("approx.spec")) {
    const auto parts = split(cfg.get("approx.spec"), ':');
    if (parts.empty()) throw ConfigError("config: empty approx.spec");
    spec.mode = parts[0];
    if (spec.mode == "file") {
      if (parts.size() < 2) throw ConfigError("config: approx file needs a path");
      spec.file = parts[1];
    } else if (parts.size() > 1) {
      spec.count = std::atoi(parts[1].c_str());
    }
  }
  return spec;
}

std::vector<Polyhedron> build_approximation(const AggregativeGame& game,
                                            const ApproxSpec& spec,
                                            const Vec* x_reference) {
  std::vector<Polyhedron> polys;
  for (int i = 0; i < game.players; ++i) {
    const ConvexBody& body = game.bodies[i];
    if (spec.mode == "regular") {
      double theta0 = spec.theta0;
      if (spec.align_ne) {
        if (!x_reference)
          throw std::invalid_argument("approximation: NE alignment needs a reference profile");
        const int n = game.action_dim;
        const double tx = ((*x_reference)[i * n] - body.center()[0]) / body.semiaxes()[0];
        const double ty = ((*x_reference)[i * n + 1] - body.center()[1]) / body.semiaxes()[1];
        const double tstar = std::atan2(ty, tx);
        theta0 = tstar - spec.align_fraction * 2.0 * std::numbers::pi / spec.count;
      }
      polys.push_back(inscribe_regular(body, spec.count, theta0));
    } else if (spec.mode == "greedy") {
      polys.push_back(inscribe_greedy(body, spec.count));
    } else if (spec.mode == "box") {
      polys.push_back(inscribe_box(body));
    } else if (spec.mode == "file") {
      std::ifstream is(spec.file);
      if (!is) throw ConfigError("config: cannot open approx file " + spec.file);
      Polyhedron poly = Polyhedron::load(is);
      if (!poly.is_bounded())
        throw std::invalid_argument("approximation: loaded polyhedron is unbounded");
      polys.push_back(std::move(poly));
    } else {
      throw ConfigError("config: unknown approx mode `" + spec.mode + "`");
    }
  }
  return polys;
}

RunOptions build_options(const KeyValueConfig& cfg, const std::string& model_name) {
  RunOptions opt;
  if (model_name == "demand_response") {
    opt.beta1 = 0.5;
    opt.beta2 = 2.0;
  }
  opt.beta1 = cfg.get_double("run.beta1", opt.beta1);
  opt.beta2 = cfg.get_double("run.beta2", opt.beta2);
  opt.h = cfg.get_double("run.h", opt.h);
  opt.t_tol = cfg.get_double("run.t_tol", opt.t_tol);
  opt.max_steps = cfg.get_long("run.max_steps", opt.max_steps);
  opt.record_every = static_cast<int>(cfg.get_long("run.record_every", opt.record_every));
  opt.warm_start = cfg.get_long("run.warm_start", 1) != 0;
  opt.use_rk4 = cfg.get_long("run.rk4", 0) != 0;
  opt.random_init = cfg.get_long("run.random_init", 0) != 0;
  opt.seed = static_cast<std::uint64_t>(cfg.get_long("run.seed", 0));
  opt.qp_tol = cfg.get_double("run.qp_tol", opt.qp_tol);
  return opt;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const AggregativeGame& game) {
  if (game.action_dim != game.aggregate_dim)
    throw std::invalid_argument("trajectory csv: requires n == M");
  std::ostringstream os;
  os << "t,player,component,x,zeta\n";
  const int n = game.action_dim;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    for (int i = 0; i < game.players; ++i) {
      for (int c = 0; c < n; ++c) {
        os << fmt17(traj.t[k]) << ',' << (i + 1) << ',' << (c + 1) << ','
           << fmt17(traj.x[k][i * n + c]) << ','
           << fmt17(traj.zeta[k][i * n + c]) << '\n';
      }
    }
  }
  atomic_write(path, os.str());
}

namespace {

struct SingleRun {
  RunResult result;
  std::vector<Polyhedron> polys;
  Mode mode = Mode::approx;
  std::string approx_desc;
};

SingleRun execute(const KeyValueConfig& cfg, const AggregativeGame& game,
                  const Digraph& graph, const RunOptions& opt,
                  const ApproxSpec& spec, const Vec* x_reference) {
  SingleRun sr;
  if (spec.mode == "exact") {
    sr.mode = Mode::exact;
    sr.approx_desc = "exact";
    sr.result = run(game, Mode::exact, nullptr, graph, opt);
  } else {
    sr.mode = Mode::approx;
    sr.polys = build_approximation(game, spec, x_reference);
    sr.approx_desc = spec.mode + ":" + std::to_string(spec.count);
    sr.result = run(game, Mode::approx, &sr.polys, graph, opt);
  }
  (void)cfg;
  return sr;
}

std::string report_text(const KeyValueConfig& cfg, const AggregativeGame& game,
                        const SingleRun& sr, const RunOptions& opt) {
  const RunReport& rep = sr.result.report;
  std::ostringstream os;
  os << "model = " << cfg.get("model.name") << '\n'
     << "graph = " << cfg.get("graph.type", cfg.get("graph.spec", "ring")) << '\n'
     << "approx = " << sr.approx_desc << '\n'
     << "h = " << fmt17(opt.h) << '\n'
     << "t_tol = " << fmt17(opt.t_tol) << '\n'
     << "seed = " << opt.seed << '\n'
     << "converged = " << (rep.converged ? 1 : 0) << '\n'
     << "steps = " << rep.steps << '\n'
     << "wall_time_s = " << fmt17(rep.wall_time) << '\n'
     << "proj_time_s = " << fmt17(rep.proj_time) << '\n'
     << "qp_iterations_total = " << rep.qp_iterations_total << '\n'
     << "residual_x = " << fmt17(rep.residual_x) << '\n'
     << "residual_zeta = " << fmt17(rep.residual_zeta) << '\n'
     << "gain_ok = " << (rep.gain_ok ? 1 : 0) << '\n';
  append_certificate(os, rep.gain, "gain.");
  if (!sr.polys.empty()) {
    double hmax = 0.0;
    for (int i = 0; i < game.players; ++i) {
      const HausdorffEstimate est = hausdorff_estimate(game.bodies[i], sr.polys[i]);
      os << "hausdorff." << (i + 1) << " = " << fmt17(est.value)
         << " resolution = " << est.resolution
         << " refined = " << (est.refined ? 1 : 0) << '\n';
      hmax = std::max(hmax, est.value);
    }
    os << "hausdorff.max = " << fmt17(hmax) << '\n';
  }
  const Vec q = game.aggregate(rep.x_final);
  double consensus = 0.0;
  for (int i = 0; i < game.players; ++i) {
    Vec zi(rep.zeta_final.begin() + i * game.aggregate_dim,
           rep.zeta_final.begin() + (i + 1) * game.aggregate_dim);
    consensus = std::max(consensus, distance(zi, q));
  }
  os << "consensus_error = " << fmt17(consensus) << '\n';
  os << "x_final =";
  for (double v : rep.x_final) os << ' ' << fmt17(v);
  os << '\n';
  return os.str();
}

}  // namespace

Status cmd_run(const KeyValueConfig& cfg, std::ostream& log) {
  const AggregativeGame game = build_model(cfg);
  const Digraph graph = build_graph(cfg, game.players);
  const RunOptions opt = build_options(cfg, cfg.get("model.name"));
  ApproxSpec spec = parse_approx(cfg);
  std::optional<Vec> reference;
  if (spec.align_ne && spec.mode == "regular") {
    RunOptions ref_opt = opt;
    ref_opt.t_tol = 1e-6;
    ref_opt.record_every = 1 << 20;
    reference = run(game, Mode::exact, nullptr, graph, ref_opt).report.x_final;
  }
  const SingleRun sr = execute(cfg, game, graph, opt, spec,
                               reference ? &*reference : nullptr);
  const std::string dir = out_dir(cfg);
  write_trajectory_csv(dir + "/trajectory.csv", sr.result.trajectory, game);
  atomic_write(dir + "/report.txt", report_text(cfg, game, sr, opt));
  if (sr.mode == Mode::exact) {
    std::ostringstream os;
    for (double v : sr.result.report.x_final) os << fmt17(v) << '\n';
    atomic_write(dir + "/reference_ne.txt", os.str());
  }
  log << "run: " << (sr.result.report.converged ? "converged" : "DID NOT converge")
      << " in " << sr.result.report.steps << " steps, "
      << fmt17(sr.result.report.wall_time) << " s\n";
  if (!sr.result.report.gain_ok)
    log << "warning: gain conditions (12) not satisfied; continuing\n";
  return sr.result.report.converged ? Status::ok : Status::nonconverged;
}

int worker_width(int jobs) {
  int width = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("AGGSOLVE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) width = cap;
  }
  return std::max(1, std::min(width, jobs));
}

Status cmd_sweep_polygons(const KeyValueConfig& cfg, const std::string& m_list,
                          std::ostream& log) {
  const AggregativeGame game = build_model(cfg);
  if (game.action_dim != 2)
    throw ConfigError("sweep-polygons: requires a 2D model");
  std::vector<int> ms;
  for (const std::string& tok : split(m_list, ',')) ms.push_back(std::atoi(tok.c_str()));
  if (ms.empty()) throw ConfigError("sweep-polygons: empty m list");
  for (int m : ms)
    if (m < 3) throw ConfigError("sweep-polygons: m >= 3 required");

  const Digraph graph = build_graph(cfg, game.players);
  const RunOptions opt = build_options(cfg, cfg.get("model.name"));
  ApproxSpec spec = parse_approx(cfg);
  spec.mode = "regular";
  if (!cfg.has("approx.align")) spec.align_ne = true;  // sweep default

  // reference equilibrium of the original game, cached for all metrics
  RunOptions ref_opt = opt;
  ref_opt.t_tol = 1e-6;
  ref_opt.max_steps = std::max<long>(opt.max_steps, 400000);
  ref_opt.record_every = 1 << 20;
  const RunResult ref = run(game, Mode::exact, nullptr, graph, ref_opt);
  if (!ref.report.converged)
    throw std::runtime_error("sweep-polygons: exact reference run did not converge");
  const Vec& x_ref = ref.report.x_final;

  struct Row {
    int m = 0;
    EpsilonReport eps;
    long steps = 0;
    double wall = 0.0;
    bool converged = false;
  };
  std::vector<Row> rows(ms.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= ms.size()) return;
      ApproxSpec s = spec;
      s.count = ms[idx];
      const std::vector<Polyhedron> polys = build_approximation(game, s, &x_ref);
      const RunResult rr = run(game, Mode::approx, &polys, graph, opt);
      Row& row = rows[idx];
      row.m = ms[idx];
      row.steps = rr.report.steps;
      row.wall = rr.report.wall_time;
      row.converged = rr.report.converged;
      row.eps = approximation_report(game, polys, rr.report.x_final, x_ref);
    }
  };
  const int width = worker_width(static_cast<int>(ms.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < width; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::ostringstream os;
  os << "polygon,s,h_max,delta_H,epsilon_hat,ne_distance,steps,wall_time_s\n";
  bool all_converged = true;
  for (const Row& row : rows) {
    const double hmax =
        *std::max_element(row.eps.h_vector.begin(), row.eps.h_vector.end());
    os << polygon_name(row.m) << ',' << row.m << ',' << fmt17(hmax) << ','
       << fmt17(row.eps.delta_h) << ',' << fmt17(row.eps.epsilon_hat) << ','
       << fmt17(row.eps.ne_distance) << ',' << row.steps << ','
       << fmt17(row.wall) << '\n';
    all_converged = all_converged && row.converged;
  }
  bool decreasing = true;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k)
    decreasing = decreasing &&
                 rows[k].eps.epsilon_hat > rows[k + 1].eps.epsilon_hat;
  os << "# epsilon_hat strictly decreasing: " << (decreasing ? "yes" : "no") << '\n';
  append_certificate(os, ref.report.gain, "# gain.");

  const std::string dir = out_dir(cfg);
  atomic_write(dir + "/sweep_polygons.csv", os.str());
  log << "sweep-polygons: " << rows.size() << " rows -> " << dir
      << "/sweep_polygons.csv (decreasing: " << (decreasing ? "yes" : "no")
      << ")\n";
  return all_converged ? Status::ok : Status::nonconverged;
}

Status cmd_compare(const KeyValueConfig& cfg, std::ostream& log) {
  const AggregativeGame game = build_model(cfg);
  const Digraph graph = build_graph(cfg, game.players);
  const RunOptions opt = build_options(cfg, cfg.get("model.name"));
  const int repeats = static_cast<int>(cfg.get_long("compare.repeats", 5));
  const std::string mode_list = cfg.get("compare.modes", "exact,approx:12");
  const auto modes = split(mode_list, ',');
  if (modes.empty()) throw ConfigError("compare: empty mode list");

  std::ostringstream os;
  os << "mode,s,steps,median_wall_time_s,median_proj_per_step_s,median_qp_iterations\n";
  bool all_converged = true;
  for (const std::string& mode : modes) {
    ApproxSpec spec = parse_approx(cfg);
    int svtx = 0;
    if (mode == "exact") {
      spec.mode = "exact";
    } else if (mode.rfind("approx", 0) == 0) {
      const auto parts = split(mode, ':');
      spec.mode = game.action_dim == 2 ? "regular" : "greedy";
      if (parts.size() > 1) spec.count = std::atoi(parts[1].c_str());
      svtx = spec.count;
    } else if (mode == "box") {
      spec.mode = "box";
      svtx = 2 * game.action_dim;
    } else {
      throw ConfigError("compare: unknown mode `" + mode + "`");
    }
    std::vector<double> walls, projs, qps;
    long steps = 0;
    for (int r = 0; r < repeats; ++r) {
      const SingleRun sr = execute(cfg, game, graph, opt, spec, nullptr);
      const RunReport& rep = sr.result.report;
      all_converged = all_converged && rep.converged;
      steps = rep.steps;
      walls.push_back(rep.wall_time);
      projs.push_back(rep.proj_time / std::max<long>(1, rep.steps));
      qps.push_back(static_cast<double>(rep.qp_iterations_total));
    }
    os << mode << ',' << svtx << ',' << steps << ',' << fmt17(median(walls))
       << ',' << fmt17(median(projs)) << ',' << fmt17(median(qps)) << '\n';
  }
  const std::string dir = out_dir(cfg);
  atomic_write(dir + "/compare.csv", os.str());
  log << "compare: " << modes.size() << " modes x " << repeats << " repeats -> "
      << dir << "/compare.csv\n";
  return all_converged ? Status::ok : Status::nonconverged;
}

Status cmd_check_graph(const KeyValueConfig& cfg, std::ostream& log) {
  const int default_n = static_cast<int>(cfg.get_long("graph.n", 4));
  const Digraph graph = build_graph(cfg, default_n);
  const bool balanced = is_weight_balanced(graph);
  const bool connected = is_strongly_connected(graph);
  log << "nodes = " << graph.size() << '\n'
      << "weight_balanced = " << (balanced ? "yes" : "no") << '\n'
      << "strongly_connected = " << (connected ? "yes" : "no") << '\n';
  if (balanced && connected)
    log << "lambda_min_positive = " << fmt17(lambda_min_positive(graph)) << '\n';
  return Status::ok;
}

}  // namespace aggsolve
