#include "nilsphere/cli.hpp"

#include "nilsphere/canonical.hpp"
#include "nilsphere/errors.hpp"
#include "nilsphere/haar.hpp"
#include "nilsphere/kernels.hpp"
#include "nilsphere/plancherel.hpp"
#include "nilsphere/representation.hpp"
#include "nilsphere/special.hpp"
#include "nilsphere/spherical.hpp"
#include "nilsphere/sublaplacian.hpp"

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace nilsphere::cli {
namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Config {
  std::string command;
  int p = 2;
  double r = 0.0;
  std::vector<double> lambda;
  std::vector<int> l;
  std::optional<int> epsilon;
  std::string group = "O";
  std::size_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::string format;
  bool reproducible = false;
  std::string integrator = "auto";
  int rotations = 256;
  std::vector<std::string> points;
  int n_points = 20;
  // tabulate
  int x_coord = 0;
  std::vector<double> x_range;
  int y_coord = -1;
  std::vector<double> y_range;
  std::vector<double> base;
  // canonical
  std::string matrix;
  // verify-functional
  std::size_t inner_samples = 2000;
  // plancherel
  double dilation = 1.5;
};

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GroupKind parse_kind(const std::string& g) {
  if (g == "O") return GroupKind::O;
  if (g == "SO") return GroupKind::SO;
  throw UsageError("--group must be O or SO");
}

SphericalIndex make_index(const Config& cfg) {
  std::vector<double> lam = cfg.lambda;
  if (lam.empty()) lam.assign(static_cast<std::size_t>(cfg.p / 2), 0.0);
  return SphericalIndex(cfg.r, LambdaSpec(cfg.p, lam), cfg.l, parse_kind(cfg.group), cfg.epsilon);
}

std::uint64_t require_seed(const Config& cfg) {
  if (!cfg.seed) throw UsageError("--seed is required for Monte-Carlo runs");
  return *cfg.seed;
}

Integrator make_integrator(const Config& cfg, GroupKind kind) {
  const bool exact = cfg.integrator == "exact" || (cfg.integrator == "auto" && cfg.p <= 2);
  if (cfg.integrator != "auto" && cfg.integrator != "exact" && cfg.integrator != "mc")
    throw UsageError("--integrator must be auto, exact or mc");
  if (exact) return Exact{kind, cfg.p, cfg.rotations};
  return MonteCarlo{kind, cfg.p, cfg.samples, require_seed(cfg)};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse number '" + item + "'");
    }
  }
  return v;
}

GroupPoint parse_point(int p, const std::string& s) {
  const auto v = parse_list(s);
  const std::size_t want = static_cast<std::size_t>(p + centre_dim(p));
  if (v.size() != want)
    throw UsageError("point '" + s + "' must have p + p(p-1)/2 = " + std::to_string(want) + " coordinates");
  return GroupPoint::from_coords(p, v);
}

std::vector<std::string> coordinate_names(int p) {
  std::vector<std::string> names;
  for (int i = 1; i <= p; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) names.push_back("a" + std::to_string(i) + "_" + std::to_string(j));
  return names;
}

GroupPoint random_point(int p, Rng& rng, double scale) {
  std::vector<double> c(static_cast<std::size_t>(p + centre_dim(p)));
  for (double& v : c) v = scale * (2.0 * rng.uniform() - 1.0);
  return GroupPoint::from_coords(p, c);
}

Json index_json(const Config& cfg) {
  Json j;
  j["p"] = cfg.p;
  j["r"] = cfg.r;
  j["lambda"] = cfg.lambda;
  j["l"] = cfg.l;
  j["group"] = cfg.group;
  if (cfg.epsilon) j["epsilon"] = *cfg.epsilon;
  return j;
}

Json estimate_json(const MCEstimate& e) {
  return Json{{"value_re", e.value.real()}, {"value_im", e.value.imag()}, {"std_error", e.std_error},
              {"n_samples", e.n_samples}};
}

struct Outcome {
  Json results;
  bool pass = true;
  bool has_verdict = false;
  std::string csv;
};

MCEstimate eval_phi(const SphericalIndex& idx, const GroupPoint& n, const std::optional<Integrator>& integ) {
  if (!integ) return MCEstimate{Complex(phi_bessel(idx.r(), n), 0.0), 0.0, 0};
  return phi(idx, n, *integ);
}

std::string csv_header(int p) {
  std::string h;
  for (const auto& name : coordinate_names(p)) h += name + ",";
  return h + "value_re,value_im,std_error\n";
}

std::string csv_row(const GroupPoint& n, const MCEstimate& e) {
  std::string row;
  for (double c : n.coords()) row += fmt(c) + ",";
  return row + fmt(e.value.real()) + "," + fmt(e.value.imag()) + "," + fmt(e.std_error) + "\n";
}

Outcome cmd_eval(const Config& cfg) {
  if (cfg.points.empty()) throw UsageError("eval needs at least one --point");
  const SphericalIndex idx = make_index(cfg);
  const std::optional<Integrator> integ =
      idx.bessel_family() ? std::nullopt : std::optional<Integrator>(make_integrator(cfg, idx.kind()));
  Outcome out;
  out.results = Json::array();
  out.csv = csv_header(cfg.p);
  for (const auto& s : cfg.points) {
    const GroupPoint n = parse_point(cfg.p, s);
    const MCEstimate e = eval_phi(idx, n, integ);
    Json row = estimate_json(e);
    row["point"] = n.coords();
    out.results.push_back(row);
    out.csv += csv_row(n, e);
  }
  return out;
}

Outcome cmd_tabulate(const Config& cfg) {
  const SphericalIndex idx = make_index(cfg);
  const int dim = cfg.p + centre_dim(cfg.p);
  std::vector<double> base = cfg.base;
  if (base.empty()) base.assign(static_cast<std::size_t>(dim), 0.0);
  if (static_cast<int>(base.size()) != dim) throw UsageError("--base must have p + p(p-1)/2 coordinates");
  auto axis = [&](int coord, const std::vector<double>& range, const char* name) {
    if (coord < 0 || coord >= dim) throw UsageError(std::string(name) + " coordinate index out of range");
    if (range.size() != 3 || range[2] < 1 || range[2] != std::floor(range[2]))
      throw UsageError(std::string(name) + " range must be from,to,count");
    std::vector<double> v;
    const int count = static_cast<int>(range[2]);
    for (int i = 0; i < count; ++i) v.push_back(count == 1 ? range[0] : range[0] + (range[1] - range[0]) * i / (count - 1));
    return v;
  };
  const auto xs = axis(cfg.x_coord, cfg.x_range, "--x");
  const auto ys = cfg.y_coord >= 0 ? axis(cfg.y_coord, cfg.y_range, "--y") : std::vector<double>{0.0};
  const std::optional<Integrator> integ =
      idx.bessel_family() ? std::nullopt : std::optional<Integrator>(make_integrator(cfg, idx.kind()));
  Outcome out;
  out.results = Json::array();
  out.csv = csv_header(cfg.p);
  for (double y : ys)
    for (double x : xs) {
      std::vector<double> c = base;
      c[static_cast<std::size_t>(cfg.x_coord)] = x;
      if (cfg.y_coord >= 0) c[static_cast<std::size_t>(cfg.y_coord)] = y;
      const GroupPoint n = GroupPoint::from_coords(cfg.p, c);
      const MCEstimate e = eval_phi(idx, n, integ);
      Json row = estimate_json(e);
      row["point"] = n.coords();
      out.results.push_back(row);
      out.csv += csv_row(n, e);
    }
  return out;
}

Outcome cmd_canonical(const Config& cfg) {
  Json parsed;
  try {
    parsed = Json::parse(cfg.matrix);
  } catch (const std::exception&) {
    throw UsageError("--matrix must be a JSON array of rows");
  }
  if (!parsed.is_array() || parsed.empty()) throw UsageError("--matrix must be a JSON array of rows");
  const int p = static_cast<int>(parsed.size());
  Matrix m(p, p);
  for (int i = 0; i < p; ++i) {
    if (!parsed[static_cast<std::size_t>(i)].is_array() || static_cast<int>(parsed[static_cast<std::size_t>(i)].size()) != p)
      throw UsageError("--matrix must be square");
    for (int j = 0; j < p; ++j) {
      const auto& v = parsed[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!v.is_number()) throw UsageError("--matrix entries must be numbers");
      m(i, j) = v.get<double>();
    }
  }
  const ZSkew a(m);
  const CanonicalForm cf = canonical_form(a);
  const Matrix resid = cf.k * a.matrix() * cf.k.transpose() - d2_matrix(cf.lambda).matrix();
  const double orth = (cf.k.transpose() * cf.k - Matrix::Identity(p, p)).norm();
  Json k = Json::array();
  for (int i = 0; i < p; ++i) {
    std::vector<double> row(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) row[static_cast<std::size_t>(j)] = cf.k(i, j);
    k.push_back(row);
  }
  const OrbitProfile prof = orbit_profile(cluster_lambda(cf.lambda));
  Outcome out;
  out.results = Json{{"p", p},
                     {"lambda", cf.lambda.values()},
                     {"k", k},
                     {"residual", resid.norm()},
                     {"orthogonality_error", orth},
                     {"profile", Json{{"p0", prof.p0}, {"p1", prof.p1}, {"mu", prof.mu}, {"m", prof.m}}}};
  return out;
}

Outcome cmd_verify_bessel(const Config& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const GroupKind kind = parse_kind(cfg.group);
  const int p = cfg.p;
  if (p < 1) throw UsageError("--p must be >= 1");
  Rng rng(seed);
  Outcome out;
  out.has_verdict = true;
  out.results = Json::array();
  for (int t = 0; t < cfg.n_points; ++t) {
    Vector x(p);
    for (int i = 0; i < p; ++i) x[i] = rng.normal();
    x *= 5.0 * rng.uniform() / x.norm();
    auto f = [p, x](const double* ks, std::size_t count, Complex* o) {
      const std::size_t pp = static_cast<std::size_t>(p * p);
      for (std::size_t s = 0; s < count; ++s) {
        Eigen::Map<const Matrix> k(ks + s * pp, p, p);
        o[s] = std::polar(1.0, k.row(p - 1).dot(x));
      }
    };
    const MCEstimate e = k_average(BatchIntegrand(f), MonteCarlo{kind, p, cfg.samples, rng.next_u64()});
    const double ref = bessel_reduced(0.5 * (p - 2), x.norm());
    const double err = std::abs(e.value - Complex(ref, 0.0));
    const double tol = std::max(5.0 * e.std_error, 5e-3);
    const bool ok = err <= tol;
    out.pass = out.pass && ok;
    out.results.push_back(Json{{"norm_x", x.norm()}, {"mc", estimate_json(e)}, {"bessel", ref}, {"abs_error", err},
                               {"tolerance", tol}, {"pass", ok}});
  }
  return out;
}

// Relative spectral residual of f at n, or nullopt when |f(n)| is too small.
std::optional<double> fd_residual(const GroupFn& f, const GroupPoint& n, double eig, double h, bool richardson) {
  const Complex v = f(n);
  if (std::abs(v) <= 0.1) return std::nullopt;
  const Complex lf = richardson ? sublap_apply_richardson(f, n, h) : sublap_apply(f, n, h);
  return std::abs(lf / v - eig) / std::max(1.0, std::abs(eig));
}

Outcome cmd_verify_eigen(const Config& cfg) {
  const SphericalIndex idx = make_index(cfg);
  const double eig = sublap_eigenvalue(idx);
  Outcome out;
  out.has_verdict = true;
  Json checks = Json::array();
  if (idx.bessel_family() || idx.p() == 2) {
    GroupFn f;
    if (idx.bessel_family())
      f = [r = idx.r()](const GroupPoint& n) { return Complex(phi_bessel(r, n), 0.0); };
    else
      f = [idx](const GroupPoint& n) { return phi_p2_closed_form(idx, n); };
    Rng rng(cfg.seed.value_or(0));
    std::vector<double> orders;
    for (int t = 0; t < cfg.n_points; ++t) {
      const GroupPoint n = random_point(idx.p(), rng, 1.0);
      const auto rel = fd_residual(f, n, eig, kDefaultFdStep, true);
      if (!rel) continue;
      const double e1 = *fd_residual(f, n, eig, 0.1, false);
      const double e2 = *fd_residual(f, n, eig, 0.03, false);
      const double e3 = *fd_residual(f, n, eig, 0.01, false);
      std::optional<double> order;
      if (e1 > 1e-9 && e2 > 0.0) {
        order = std::log(e1 / e2) / std::log(0.1 / 0.03);
        orders.push_back(*order);
      }
      const bool ok = *rel <= 1e-4;
      out.pass = out.pass && ok;
      Json row{{"point", n.coords()}, {"relative_residual", *rel}, {"errors_h", {e1, e2, e3}}, {"pass", ok}};
      if (order) row["observed_order"] = *order;
      checks.push_back(row);
    }
    if (!orders.empty()) {
      std::sort(orders.begin(), orders.end());
      const double med = orders[orders.size() / 2];
      const bool ok = med >= 3.5 && med <= 4.5;
      out.pass = out.pass && ok;
      out.results["median_order"] = med;
      out.results["order_pass"] = ok;
    }
    out.results["route"] = idx.bessel_family() ? "bessel-closed-form" : "p2-closed-form";
  } else {
    if (idx.kind() != GroupKind::O) throw UsageError("verify-eigen: the representation route needs --group O");
    const auto all = enumerate_El(idx.l(), idx.profile());
    const std::size_t count = std::min<std::size_t>(all.size(), 5);
    for (std::size_t a = 0; a < count; ++a) {
      const MultiIndex alpha = all[a];
      GroupFn f = [&idx, alpha](const GroupPoint& n) { return matrix_element(idx.r(), idx.lambda(), alpha, n); };
      const Complex lf = sublap_apply_richardson(f, GroupPoint::identity(idx.p()));
      const double rel = std::abs(lf - eig) / std::max(1.0, eig);
      const bool ok = rel <= 1e-4;
      out.pass = out.pass && ok;
      checks.push_back(Json{{"alpha", alpha}, {"minus_sum_second_derivatives", lf.real()}, {"relative_residual", rel},
                            {"pass", ok}});
    }
    out.results["route"] = "representation";
  }
  out.results["eigenvalue"] = eig;
  out.results["checks"] = checks;
  return out;
}

Outcome cmd_verify_functional(const Config& cfg) {
  const SphericalIndex idx = make_index(cfg);
  Rng rng(cfg.seed.value_or(0));
  Integrator outer, inner;
  double floor_tol;
  if (cfg.p <= 2) {
    outer = inner = Exact{idx.kind(), cfg.p, cfg.rotations};
    floor_tol = 1e-8;
  } else {
    const std::uint64_t seed = require_seed(cfg);
    outer = MonteCarlo{idx.kind(), cfg.p, cfg.samples, splitmix64(seed)};
    inner = MonteCarlo{idx.kind(), cfg.p, cfg.inner_samples, splitmix64(seed + 1)};
    floor_tol = 0.0;
  }
  Outcome out;
  out.has_verdict = true;
  out.results = Json::array();
  for (int t = 0; t < cfg.n_points; ++t) {
    const GroupPoint n1 = random_point(cfg.p, rng, 1.0), n2 = random_point(cfg.p, rng, 1.0);
    const Residual res = functional_equation_residual(idx, n1, n2, outer, inner);
    const double tol = std::max(floor_tol, 5.0 * res.std_error);
    const bool ok = res.value <= tol;
    out.pass = out.pass && ok;
    out.results.push_back(Json{{"n1", n1.coords()}, {"n2", n2.coords()}, {"residual", res.value},
                               {"std_error", res.std_error}, {"tolerance", tol}, {"pass", ok}});
  }
  return out;
}

Outcome cmd_verify_oracle(const Config& cfg) {
  const SphericalIndex idx = make_index(cfg);
  if (idx.bessel_family()) throw UsageError("verify-oracle needs a nonzero --lambda");
  if (idx.kind() != GroupKind::O) throw UsageError("verify-oracle needs --group O");
  Rng rng(cfg.seed.value_or(0));
  Integrator integ;
  double floor_tol;
  if (cfg.p <= 2) {
    integ = Exact{GroupKind::O, cfg.p, cfg.rotations};
    floor_tol = 1e-8;
  } else {
    integ = Paired{draw_samples(GroupKind::O, cfg.p, cfg.samples, require_seed(cfg))};
    floor_tol = 1e-6;
  }
  const MultiIndex alpha = enumerate_El(idx.l(), idx.profile()).front();
  Outcome out;
  out.has_verdict = true;
  out.results = Json::array();
  for (int t = 0; t < cfg.n_points; ++t) {
    const GroupPoint n = random_point(cfg.p, rng, 1.0);
    const BatchIntegrand th = theta_integrand(idx, n);
    const BatchIntegrand me = matrix_element_integrand(idx, alpha, n);
    auto diff = [&](const double* ks, std::size_t count, Complex* o) {
      std::vector<Complex> b(count);
      th(ks, count, o);
      me(ks, count, b.data());
      for (std::size_t s = 0; s < count; ++s) o[s] -= b[s];
    };
    const MCEstimate a = k_average(th, integ);
    const MCEstimate d = k_average(BatchIntegrand(diff), integ);
    const double tol = std::max(floor_tol, 3.0 * d.std_error);
    const bool ok = std::abs(d.value) <= tol;
    out.pass = out.pass && ok;
    out.results.push_back(Json{{"point", n.coords()}, {"theta_route", estimate_json(a)},
                               {"difference", std::abs(d.value)}, {"paired_std_error", d.std_error},
                               {"tolerance", tol}, {"pass", ok}});
  }
  return out;
}

Outcome cmd_calibrate(const Config& cfg) {
  const std::uint64_t seed = cfg.p == 2 ? cfg.seed.value_or(0) : require_seed(cfg);
  const CalibrationResult res = calibrate_c(cfg.p, seed, cfg.samples);
  Outcome out;
  out.has_verdict = true;
  Json held = Json::array();
  for (const auto& h : res.held_out) {
    const double tol = std::max(3.0 * h.ratio_se, 1e-8);
    const bool ok = std::abs(h.ratio - 1.0) <= tol;
    out.pass = out.pass && ok;
    held.push_back(Json{{"lhs", h.lhs}, {"rhs", h.rhs}, {"ratio", h.ratio}, {"ratio_se", h.ratio_se}, {"pass", ok}});
  }
  out.results = Json{{"c", res.c}, {"std_error", res.std_error}, {"n_samples", res.n_samples},
                     {"deterministic", res.deterministic}, {"held_out", held}};
  if (const auto ref = polar_constant_reference(cfg.p)) {
    const bool ok = cfg.p == 2 ? std::abs(res.c - *ref) <= 1e-8 : std::abs(res.c / *ref - 1.0) <= 0.01;
    out.pass = out.pass && ok;
    out.results["reference"] = *ref;
    out.results["reference_pass"] = ok;
  }
  return out;
}

struct Gaussian2 {
  double sx, sa;
  GroupFn fn() const {
    return [sx = sx, sa = sa](const GroupPoint& n) {
      const double a = n.a.matrix()(1, 0);
      return Complex(std::exp(-0.5 * (n.x.coords().squaredNorm() / (sx * sx) + a * a / (sa * sa))), 0.0);
    };
  }
  RadialMeasure measure() const {
    RadialMeasure m = RadialMeasure::for_p(2);
    m.polar.rho_max = 8.0 * sx;
    m.polar.a_max = 8.0 * sa;
    m.tensor.scale_x = sx;
    m.tensor.scale_a = sa;
    return m;
  }
};

Outcome cmd_plancherel(const Config& cfg) {
  if (cfg.p != 2) throw UsageError("plancherel supports --p 2 only");
  const std::vector<Gaussian2> family{{1.0, 1.0}, {0.8, 1.5}, {1.3, 0.6}};
  Outcome out;
  out.has_verdict = true;
  Json rows = Json::array();
  std::vector<double> ratios;
  std::vector<PlancherelResult> results;
  for (const auto& g : family) {
    const PlancherelResult r = radial_plancherel_check(g.fn(), g.measure());
    results.push_back(r);
    ratios.push_back(r.ratio.value_or(std::nan("")));
    rows.push_back(Json{{"sigma_x", g.sx}, {"sigma_a", g.sa}, {"lhs", r.lhs}, {"rhs", r.rhs},
                        {"ratio", r.ratio.value_or(std::nan(""))}, {"lambda_max", r.lambda_max},
                        {"max_l_terms", r.max_l_terms}});
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = *hi / *lo - 1.0;
  const bool constant_ok = spread <= 0.01;
  // Dilation (X, A) -> (sX, s^2 A) of the first Gaussian.
  const double s = cfg.dilation;
  const Gaussian2 dil{family[0].sx / s, family[0].sa / (s * s)};
  const PlancherelResult rd = radial_plancherel_check(dil.fn(), dil.measure());
  const double jac = std::pow(s, -4.0);
  const double lhs_dev = rd.lhs / (jac * results[0].lhs) - 1.0;
  const double rhs_dev = rd.rhs / (jac * results[0].rhs) - 1.0;
  const bool dil_ok = std::abs(lhs_dev) <= 0.01 && std::abs(rhs_dev) <= 0.01;
  out.pass = constant_ok && dil_ok;
  const double c_p = plancherel_constant(2);
  const double mean_ratio = (ratios[0] + ratios[1] + ratios[2]) / 3.0;
  const double measured = c_p / mean_ratio;
  out.results = Json{{"gaussians", rows},
                     {"ratio_spread", spread},
                     {"constant_pass", constant_ok},
                     {"dilation", Json{{"s", s}, {"lhs_deviation", lhs_dev}, {"rhs_deviation", rhs_dev}, {"pass", dil_ok}}},
                     {"c_p_formula", c_p},
                     {"c_p_measured", measured},
                     {"c_p_agrees", std::abs(measured / c_p - 1.0) <= 0.01}};
  return out;
}

Json config_json(const Config& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["index"] = index_json(cfg);
  j["samples"] = cfg.samples;
  j["integrator"] = cfg.integrator;
  j["rotations"] = cfg.rotations;
  j["points"] = cfg.points;
  j["n_points"] = cfg.n_points;
  if (cfg.command == "tabulate") {
    j["x_coord"] = cfg.x_coord;
    j["x_range"] = cfg.x_range;
    j["y_coord"] = cfg.y_coord;
    j["y_range"] = cfg.y_range;
    j["base"] = cfg.base;
  }
  if (cfg.command == "canonical") j["matrix"] = cfg.matrix;
  if (cfg.command == "verify-functional") j["inner_samples"] = cfg.inner_samples;
  if (cfg.command == "plancherel") j["dilation"] = cfg.dilation;
  return j;
}

Json versions_json() {
  return Json{{"nilsphere", NILSPHERE_VERSION},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"boost", BOOST_LIB_VERSION},
              {"cli11", CLI11_VERSION},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

void add_index_options(CLI::App* sub, Config& cfg) {
  sub->add_option("--p", cfg.p, "Dimension p of V")->check(CLI::Range(1, 16));
  sub->add_option("--r", cfg.r, "Parameter r >= 0");
  sub->add_option("--lambda", cfg.lambda, "Lambda, comma separated, nonincreasing (default 0)")->delimiter(',');
  sub->add_option("--l", cfg.l, "Laguerre indices l, one per distinct nonzero lambda")->delimiter(',');
  sub->add_option("--epsilon", cfg.epsilon, "Orientation sign for SO_p (+1 or -1)");
  sub->add_option("--group", cfg.group, "O or SO");
}

void add_mc_options(CLI::App* sub, Config& cfg) {
  sub->add_option("--samples", cfg.samples, "Monte-Carlo sample count");
  sub->add_option("--seed", cfg.seed, "Random seed (required for Monte-Carlo runs)");
  sub->add_option("--integrator", cfg.integrator, "auto, exact (p <= 2) or mc");
  sub->add_option("--rotations", cfg.rotations, "Rotations of the exact p <= 2 rule");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"nilsphere: spherical functions of the free two-step nilpotent group N_p"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--reproducible", cfg.reproducible, "Omit the timestamp so reports are byte-identical");
  app.add_option("--format", cfg.format, "json or csv (csv for eval and tabulate)");
  const char* point_help =
      "Point in exponential coordinates: x_1..x_p, then a_ij for i<j in lexicographic order";

  auto* eval = app.add_subcommand("eval", "Evaluate phi at points");
  add_index_options(eval, cfg);
  add_mc_options(eval, cfg);
  eval->add_option("--point", cfg.points, point_help);

  auto* tab = app.add_subcommand("tabulate", "Tabulate phi on a 1-D or 2-D coordinate grid");
  add_index_options(tab, cfg);
  add_mc_options(tab, cfg);
  tab->add_option("--x-coord", cfg.x_coord, "Index of the first varied coordinate");
  tab->add_option("--x-range", cfg.x_range, "from,to,count")->delimiter(',');
  tab->add_option("--y-coord", cfg.y_coord, "Index of the second varied coordinate (optional)");
  tab->add_option("--y-range", cfg.y_range, "from,to,count")->delimiter(',');
  tab->add_option("--base", cfg.base, "Base point (default identity)")->delimiter(',');

  auto* canon = app.add_subcommand("canonical", "Orthogonal normal form of a skew matrix");
  canon->add_option("--matrix", cfg.matrix, "JSON rows, e.g. [[0,3],[-3,0]]")->required();

  auto* veig = app.add_subcommand("verify-eigen", "Sub-Laplacian eigenvalue check");
  add_index_options(veig, cfg);
  veig->add_option("--seed", cfg.seed, "Seed for the random test points");
  veig->add_option("--points", cfg.n_points, "Number of random points");

  auto* vbes = app.add_subcommand("verify-bessel", "K-average of e^{i<kX, e_p>} against the reduced Bessel function");
  vbes->add_option("--p", cfg.p, "Dimension p")->check(CLI::Range(1, 16));
  vbes->add_option("--group", cfg.group, "O or SO");
  vbes->add_option("--samples", cfg.samples, "Monte-Carlo samples per point");
  vbes->add_option("--seed", cfg.seed, "Random seed")->required();
  vbes->add_option("--points", cfg.n_points, "Number of random X");

  auto* vfun = app.add_subcommand("verify-functional", "Functional equation int_K phi(n1 k.n2) dk = phi(n1) phi(n2)");
  add_index_options(vfun, cfg);
  add_mc_options(vfun, cfg);
  vfun->add_option("--inner-samples", cfg.inner_samples, "Samples per inner phi evaluation (p >= 3)");
  vfun->add_option("--pairs", cfg.n_points, "Number of random pairs");

  auto* vora = app.add_subcommand("verify-oracle", "Theta route against the representation route");
  add_index_options(vora, cfg);
  add_mc_options(vora, cfg);
  vora->add_option("--points", cfg.n_points, "Number of random points");

  auto* cal = app.add_subcommand("calibrate-c", "Calibrate the polar constant c");
  cal->add_option("--p", cfg.p, "Dimension p")->check(CLI::Range(2, 6));
  cal->add_option("--samples", cfg.samples, "Monte-Carlo samples over K");
  cal->add_option("--seed", cfg.seed, "Random seed (required for p >= 3)");

  auto* pl = app.add_subcommand("plancherel", "Radial Plancherel check at p = 2");
  pl->add_option("--p", cfg.p, "Dimension p (2)");
  pl->add_option("--dilation", cfg.dilation, "Dilation factor for the covariance check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    out << Json{{"schema", 1}, {"error", Json{{"type", "usage"}, {"message", e.what()}}}}.dump(2) << "\n";
    return kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  const bool tabular = cfg.command == "eval" || cfg.command == "tabulate";
  if (cfg.format.empty()) cfg.format = cfg.command == "tabulate" ? "csv" : "json";

  auto fail = [&](const char* type, const std::string& msg, int code) {
    err << "nilsphere: " << msg << "\n";
    out << Json{{"schema", 1}, {"command", cfg.command}, {"error", Json{{"type", type}, {"message", msg}}}}.dump(2)
        << "\n";
    return code;
  };

  Outcome res;
  try {
    if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
    if (cfg.format == "csv" && !tabular) throw UsageError("--format csv is only available for eval and tabulate");
    if (cfg.command == "eval")
      res = cmd_eval(cfg);
    else if (cfg.command == "tabulate")
      res = cmd_tabulate(cfg);
    else if (cfg.command == "canonical")
      res = cmd_canonical(cfg);
    else if (cfg.command == "verify-eigen")
      res = cmd_verify_eigen(cfg);
    else if (cfg.command == "verify-bessel")
      res = cmd_verify_bessel(cfg);
    else if (cfg.command == "verify-functional")
      res = cmd_verify_functional(cfg);
    else if (cfg.command == "verify-oracle")
      res = cmd_verify_oracle(cfg);
    else if (cfg.command == "calibrate-c")
      res = cmd_calibrate(cfg);
    else
      res = cmd_plancherel(cfg);
  } catch (const BudgetError& e) {
    return fail("budget", e.what(), kBudget);
  } catch (const std::invalid_argument& e) {
    return fail("usage", e.what(), kUsage);
  }

  if (cfg.format == "csv") {
    out << res.csv;
    return kPass;
  }
  Json report;
  report["schema"] = 1;
  report["command"] = cfg.command;
  report["config"] = config_json(cfg);
  if (cfg.seed)
    report["seed"] = *cfg.seed;
  else
    report["seed"] = nullptr;
  report["versions"] = versions_json();
  report["isa"] = kernels::isa_name(kernels::active_isa());
  if (!cfg.reproducible) report["timestamp"] = timestamp();
  report["results"] = res.results;
  if (res.has_verdict) report["verdict"] = res.pass ? "PASS" : "FAIL";
  out << report.dump(2) << "\n";
  return res.has_verdict && !res.pass ? kFail : kPass;
}

}  // namespace nilsphere::cli
