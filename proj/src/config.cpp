#include "bregman/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "bregman/overloaded.hpp"

namespace bregman {

using detail::overloaded;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing required field");
  return *it;
}

const json* optional_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(join(path, key), "unknown field");
  }
}

double read_number(const json& j, const std::string& path, bool allow_inf = false) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "number must be finite");
    return v;
  }
  if (allow_inf && j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ConfigError(path, allow_inf ? "expected a number, \"inf\" or \"-inf\"" : "expected a finite number");
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

int read_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

Vector read_vector(const json& j, const std::string& path, Eigen::Index n, bool allow_inf = false) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  if (n >= 0 && static_cast<Eigen::Index>(j.size()) != n) {
    throw ConfigError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  }
  if (j.empty()) throw ConfigError(path, "vector must be nonempty");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = read_number(j[i], index(path, i), allow_inf);
  return v;
}

Matrix read_matrix(const json& j, const std::string& path, Eigen::Index n) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw ConfigError(path, "expected an array of " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (std::size_t i = 0; i < j.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = read_vector(j[i], index(path, i), n);
  return m;
}

/// Runs `build`, turning library errors into ConfigErrors at `path`.
template <class F>
auto guarded(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

LegendreFunction read_geometry(const json& j, const std::string& path, Eigen::Index n) {
  reject_unknown(j, path, {"kind", "p", "dim"});
  const std::string kind = read_string(field(j, path, "kind"), join(path, "kind"));
  if (const json* d = optional_field(j, "dim"); d && read_int(*d, join(path, "dim")) != n) {
    throw ConfigError(join(path, "dim"), "does not match the length of x1");
  }
  if (kind == "squared_norm") return LegendreFunction::squared_norm(n);
  if (kind == "neg_entropy") return LegendreFunction::neg_entropy(n);
  if (kind == "power_p") {
    const double p = read_number(field(j, path, "p"), join(path, "p"));
    if (!(p >= 1.1 && p <= 10.0)) throw ConfigError(join(path, "p"), "p must lie in [1.1, 10]");
    return LegendreFunction::power_p(p, n);
  }
  throw ConfigError(join(path, "kind"), "unknown geometry '" + kind + "' (squared_norm, power_p, neg_entropy)");
}

ConvexSet read_set(const json& j, const std::string& path, Eigen::Index n) {
  const std::string type = read_string(field(j, path, "type"), join(path, "type"));
  return guarded(path, [&]() -> ConvexSet {
    if (type == "whole_space") {
      reject_unknown(j, path, {"type"});
      return ConvexSet::whole_space(n);
    }
    if (type == "halfspace" || type == "hyperplane") {
      reject_unknown(j, path, {"type", "a", "b"});
      Vector a = read_vector(field(j, path, "a"), join(path, "a"), n);
      const double b = read_number(field(j, path, "b"), join(path, "b"));
      return type == "halfspace" ? ConvexSet::halfspace(std::move(a), b) : ConvexSet::hyperplane(std::move(a), b);
    }
    if (type == "box") {
      reject_unknown(j, path, {"type", "lower", "upper"});
      return ConvexSet::box(read_vector(field(j, path, "lower"), join(path, "lower"), n, true),
                            read_vector(field(j, path, "upper"), join(path, "upper"), n, true));
    }
    if (type == "simplex") {
      reject_unknown(j, path, {"type", "radius"});
      const json* r = optional_field(j, "radius");
      return ConvexSet::simplex(n, r ? read_number(*r, join(path, "radius")) : 1.0);
    }
    if (type == "intersection") {
      reject_unknown(j, path, {"type", "members", "witness"});
      const json& ms = field(j, path, "members");
      const std::string mpath = join(path, "members");
      if (!ms.is_array() || ms.empty()) throw ConfigError(mpath, "expected a nonempty array of sets");
      std::vector<ConvexSet> members;
      for (std::size_t i = 0; i < ms.size(); ++i) members.push_back(read_set(ms[i], index(mpath, i), n));
      return ConvexSet::intersection(std::move(members), read_vector(field(j, path, "witness"), join(path, "witness"), n));
    }
    throw ConfigError(join(path, "type"), "unknown set type '" + type + "'");
  });
}

ConvexFunctional read_functional(const json& j, const std::string& path, Eigen::Index n) {
  const std::string type = read_string(field(j, path, "type"), join(path, "type"));
  return guarded(path, [&]() -> ConvexFunctional {
    if (type == "zero") {
      reject_unknown(j, path, {"type"});
      return ConvexFunctional::zero();
    }
    if (type == "quadratic") {
      reject_unknown(j, path, {"type", "Q", "r", "s"});
      const json* s = optional_field(j, "s");
      const json* r = optional_field(j, "r");
      return ConvexFunctional::quadratic(read_matrix(field(j, path, "Q"), join(path, "Q"), n),
                                         r ? read_vector(*r, join(path, "r"), n) : Vector(Vector::Zero(n)),
                                         s ? read_number(*s, join(path, "s")) : 0.0);
    }
    if (type == "weighted_l1") {
      reject_unknown(j, path, {"type", "w"});
      return ConvexFunctional::weighted_l1(read_vector(field(j, path, "w"), join(path, "w"), n));
    }
    throw ConfigError(join(path, "type"), "unknown functional type '" + type + "'");
  });
}

Bifunction read_bifunction(const json& j, const std::string& path, Eigen::Index n) {
  const std::string type = read_string(field(j, path, "type"), join(path, "type"));
  return guarded(path, [&]() -> Bifunction {
    if (type == "optimization") {
      reject_unknown(j, path, {"type", "g"});
      return Bifunction::optimization(read_functional(field(j, path, "g"), join(path, "g"), n));
    }
    if (type == "operator") {
      reject_unknown(j, path, {"type", "M", "c"});
      const json* c = optional_field(j, "c");
      return Bifunction::operator_induced(read_matrix(field(j, path, "M"), join(path, "M"), n),
                                          c ? read_vector(*c, join(path, "c"), n) : Vector(Vector::Zero(n)));
    }
    throw ConfigError(join(path, "type"), "unknown bifunction type '" + type + "'");
  });
}

BsneMapping read_mapping(const json& j, const std::string& path, const LegendreFunction& f,
                         const std::optional<PrimalPoint>& witness, std::uint64_t seed) {
  const Eigen::Index n = f.dim();
  const std::string type = read_string(field(j, path, "type"), join(path, "type"));
  if (type == "projection") {
    reject_unknown(j, path, {"type", "set"});
    ConvexSet s = read_set(field(j, path, "set"), join(path, "set"), n);
    return guarded(path, [&] { return BsneMapping::projection(f, std::move(s), witness); });
  }
  if (type == "resolvent") {
    reject_unknown(j, path, {"type", "bifunction", "phi", "set"});
    Bifunction theta = read_bifunction(field(j, path, "bifunction"), join(path, "bifunction"), n);
    const json* phi = optional_field(j, "phi");
    const json* set = optional_field(j, "set");
    ConvexFunctional g = phi ? read_functional(*phi, join(path, "phi"), n) : ConvexFunctional::zero();
    ConvexSet c = set ? read_set(*set, join(path, "set"), n) : ConvexSet::whole_space(n);
    if (!witness) throw ConfigError(path, "a resolvent mapping needs the instance witness");
    ResolventOptions opts;
    opts.seed = seed;
    return guarded(path, [&] { return BsneMapping::resolvent(f, theta, g, c, *witness, opts); });
  }
  if (type == "composition") {
    reject_unknown(j, path, {"type", "members"});
    const json& ms = field(j, path, "members");
    const std::string mpath = join(path, "members");
    if (!ms.is_array() || ms.empty()) throw ConfigError(mpath, "expected a nonempty array of mappings");
    std::vector<BsneMapping> members;
    for (std::size_t i = 0; i < ms.size(); ++i) members.push_back(read_mapping(ms[i], index(mpath, i), f, witness, seed));
    return guarded(path, [&] { return BsneMapping::composition(std::move(members), witness); });
  }
  throw ConfigError(join(path, "type"), "unknown mapping type '" + type + "'");
}

StepRule read_rule(const json& j, const std::string& path) {
  const std::string rule = read_string(field(j, path, "rule"), join(path, "rule"));
  if (rule == "power") {
    reject_unknown(j, path, {"rule", "a", "s"});
    const json* a = optional_field(j, "a");
    const json* s = optional_field(j, "s");
    return rules::PowerDecay{a ? read_number(*a, join(path, "a")) : 1.0, s ? read_number(*s, join(path, "s")) : 1.0};
  }
  if (rule == "constant") {
    reject_unknown(j, path, {"rule", "v"});
    return rules::Constant{read_number(field(j, path, "v"), join(path, "v"))};
  }
  throw ConfigError(join(path, "rule"), "unknown step rule '" + rule + "' (power, constant)");
}

template <class T, class Read>
std::vector<T> read_list(const json& parent, const char* key, const std::string& path, Read read) {
  std::vector<T> out;
  const json* j = optional_field(parent, key);
  if (!j) return out;
  const std::string p = join(path, key);
  if (!j->is_array()) throw ConfigError(p, "expected an array");
  for (std::size_t i = 0; i < j->size(); ++i) out.push_back(read((*j)[i], index(p, i)));
  return out;
}

json number_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_json(v[i]));
  return a;
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
  return a;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  reject_unknown(doc, "", {"seed", "geometry", "set", "bifunction", "phi", "mappings", "x1", "witness", "anchor",
                           "target", "algorithm", "schedule", "stop", "output", "sweep", "suites"});
  RunConfig cfg;
  if (const json* s = optional_field(doc, "seed")) {
    if (!s->is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    cfg.seed = s->get<std::uint64_t>();
  }

  const Vector x1 = read_vector(field(doc, "", "x1"), "x1", -1);
  const Eigen::Index n = x1.size();
  cfg.geometry = read_geometry(field(doc, "", "geometry"), "geometry", n);
  const LegendreFunction& f = cfg.geometry;
  cfg.x1 = PrimalPoint(x1);
  if (!f.in_domain(cfg.x1)) throw ConfigError("x1", "x1 is outside the domain of the geometry");

  auto read_point = [&](const char* key) -> std::optional<PrimalPoint> {
    const json* j = optional_field(doc, key);
    if (!j) return std::nullopt;
    PrimalPoint p(read_vector(*j, key, n));
    if (!f.in_domain(p)) throw ConfigError(key, "point is outside the domain of the geometry");
    return p;
  };
  cfg.witness = read_point("witness");
  cfg.anchor = read_point("anchor");
  if (const json* j = optional_field(doc, "target")) cfg.target = PrimalPoint(read_vector(*j, "target", n));

  const json* set = optional_field(doc, "set");
  cfg.set = set ? read_set(*set, "set", n) : ConvexSet::whole_space(n);
  if (!contains(cfg.set, cfg.x1, 1e-9)) throw ConfigError("x1", "x1 must lie in the set C");

  const json* bif = optional_field(doc, "bifunction");
  cfg.theta = bif ? read_bifunction(*bif, "bifunction", n) : Bifunction::optimization(ConvexFunctional::zero());
  const json* phi = optional_field(doc, "phi");
  cfg.phi = phi ? read_functional(*phi, "phi", n) : ConvexFunctional::zero();

  const json& maps = field(doc, "", "mappings");
  if (!maps.is_array() || maps.empty()) throw ConfigError("mappings", "expected a nonempty array of mappings");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    cfg.mappings.push_back(read_mapping(maps[i], index("mappings", i), f, cfg.witness, cfg.seed));
  }

  if (const json* a = optional_field(doc, "algorithm")) {
    cfg.algorithm = guarded("algorithm", [&] { return parse_algorithm(read_string(*a, "algorithm")); });
  }

  if (const json* s = optional_field(doc, "schedule")) {
    reject_unknown(*s, "schedule", {"alpha", "beta"});
    const json* a = optional_field(*s, "alpha");
    const json* b = optional_field(*s, "beta");
    const StepRule alpha = a ? read_rule(*a, "schedule.alpha") : StepRule{rules::PowerDecay{1.0, 1.0}};
    const StepRule beta = b ? read_rule(*b, "schedule.beta") : StepRule{rules::Constant{0.5}};
    try {
      cfg.schedule = StepSchedule::make(alpha, beta);
    } catch (const ScheduleError& e) {
      throw ConfigError(std::string("schedule.") + (std::string(e.what()).rfind("alpha", 0) == 0 ? "alpha" : "beta"),
                        e.what());
    }
  }

  if (const json* s = optional_field(doc, "stop")) {
    reject_unknown(*s, "stop", {"max_iter", "x_tol", "fp_tol"});
    if (const json* m = optional_field(*s, "max_iter")) cfg.stop.max_iter = read_int(*m, "stop.max_iter");
    if (const json* x = optional_field(*s, "x_tol")) cfg.stop.x_tol = read_number(*x, "stop.x_tol");
    if (const json* p = optional_field(*s, "fp_tol")) cfg.stop.fp_tol = read_number(*p, "stop.fp_tol");
    if (cfg.stop.max_iter < 1) throw ConfigError("stop.max_iter", "must be at least 1");
  }

  if (const json* o = optional_field(doc, "output")) {
    reject_unknown(*o, "output", {"trace", "summary", "report", "sweep"});
    if (const json* v = optional_field(*o, "trace")) cfg.output.trace = read_string(*v, "output.trace");
    if (const json* v = optional_field(*o, "summary")) cfg.output.summary = read_string(*v, "output.summary");
    if (const json* v = optional_field(*o, "report")) cfg.output.report = read_string(*v, "output.report");
    if (const json* v = optional_field(*o, "sweep")) cfg.output.sweep = read_string(*v, "output.sweep");
  }

  if (const json* g = optional_field(doc, "sweep")) {
    reject_unknown(*g, "sweep", {"algo", "p", "s", "beta", "max_iter"});
    cfg.sweep.algo = read_list<std::string>(*g, "algo", "sweep", [](const json& j, const std::string& p) {
      const auto s = read_string(j, p);
      guarded(p, [&] { return parse_algorithm(s); });
      return s;
    });
    cfg.sweep.p = read_list<double>(*g, "p", "sweep", [](const json& j, const std::string& p) { return read_number(j, p); });
    cfg.sweep.s = read_list<double>(*g, "s", "sweep", [](const json& j, const std::string& p) { return read_number(j, p); });
    cfg.sweep.beta =
        read_list<double>(*g, "beta", "sweep", [](const json& j, const std::string& p) { return read_number(j, p); });
    cfg.sweep.max_iter =
        read_list<int>(*g, "max_iter", "sweep", [](const json& j, const std::string& p) { return read_int(j, p); });
  }

  cfg.suites = read_list<std::string>(doc, "suites", "", [](const json& j, const std::string& p) {
    static const std::set<std::string> known{"core-identities", "projection", "resolvent", "algorithm"};
    auto s = read_string(j, p);
    if (!known.count(s)) throw ConfigError(p, "unknown suite '" + s + "'");
    return s;
  });

  if (cfg.theta.is_monotone()) {
    InstanceSpec spec{cfg.geometry, cfg.set,     cfg.theta,  cfg.phi, cfg.mappings,
                      cfg.x1,       cfg.witness, cfg.target, cfg.anchor, ResolventOptions{}};
    spec.resolvent.seed = cfg.seed;
    cfg.instance = guarded(cfg.witness ? "witness" : "mappings", [&] { return ProblemInstance::make(std::move(spec)); });
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json to_json(const LegendreFunction& f) {
  json j{{"kind", std::string(to_string(f.kind()))}, {"dim", f.dim()}};
  if (f.kind() == LegendreKind::PowerP) j["p"] = f.p();
  return j;
}

json to_json(const ConvexSet& set) {
  return std::visit(overloaded{
                        [](const sets::WholeSpace&) { return json{{"type", "whole_space"}}; },
                        [](const sets::Halfspace& h) { return json{{"type", "halfspace"}, {"a", vector_json(h.a)}, {"b", h.b}}; },
                        [](const sets::Hyperplane& h) {
                          return json{{"type", "hyperplane"}, {"a", vector_json(h.a)}, {"b", h.b}};
                        },
                        [](const sets::Box& b) {
                          return json{{"type", "box"}, {"lower", vector_json(b.lower)}, {"upper", vector_json(b.upper)}};
                        },
                        [](const sets::Simplex& s) { return json{{"type", "simplex"}, {"radius", s.radius}}; },
                        [](const sets::Intersection& in) {
                          json members = json::array();
                          for (const auto& m : in.members) members.push_back(to_json(m));
                          return json{{"type", "intersection"}, {"members", members}, {"witness", vector_json(in.witness)}};
                        },
                    },
                    set.variant());
}

json to_json(const ConvexFunctional& g) {
  return std::visit(overloaded{
                        [](const functionals::Zero&) { return json{{"type", "zero"}}; },
                        [](const functionals::Quadratic& q) {
                          return json{{"type", "quadratic"}, {"Q", matrix_json(q.Q)}, {"r", vector_json(q.r)}, {"s", q.s}};
                        },
                        [](const functionals::WeightedL1& l) { return json{{"type", "weighted_l1"}, {"w", vector_json(l.w)}}; },
                    },
                    g.variant());
}

json to_json(const Bifunction& theta) {
  return std::visit(overloaded{
                        [](const bifunctions::OptimizationInduced& o) { return json{{"type", "optimization"}, {"g", to_json(o.g)}}; },
                        [](const bifunctions::OperatorInduced& o) {
                          return json{{"type", "operator"}, {"M", matrix_json(o.M)}, {"c", vector_json(o.c)}};
                        },
                    },
                    theta.variant());
}

json to_json(const BsneMapping& T) {
  return std::visit(overloaded{
                        [](const BsneMapping::Projection& p) { return json{{"type", "projection"}, {"set", to_json(p.set)}}; },
                        [](const BsneMapping::Resolvent& r) {
                          return json{{"type", "resolvent"},
                                      {"bifunction", to_json(r.solver->bifunction())},
                                      {"phi", to_json(r.solver->penalty())},
                                      {"set", to_json(r.solver->set())}};
                        },
                        [](const BsneMapping::Composition& c) {
                          json members = json::array();
                          for (const auto& m : c.members) members.push_back(to_json(m));
                          return json{{"type", "composition"}, {"members", members}};
                        },
                    },
                    T.variant());
}

json to_json(const StepRule& rule) {
  return std::visit(overloaded{
                        [](const rules::PowerDecay& r) { return json{{"rule", "power"}, {"a", r.a}, {"s", r.s}}; },
                        [](const rules::Constant& r) { return json{{"rule", "constant"}, {"v", r.v}}; },
                    },
                    rule);
}

json echo_config(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["geometry"] = to_json(cfg.geometry);
  j["set"] = to_json(cfg.set);
  j["bifunction"] = to_json(cfg.theta);
  j["phi"] = to_json(cfg.phi);
  j["mappings"] = json::array();
  for (const auto& m : cfg.mappings) j["mappings"].push_back(to_json(m));
  j["x1"] = vector_json(cfg.x1.coords());
  if (cfg.witness) j["witness"] = vector_json(cfg.witness->coords());
  if (cfg.anchor) j["anchor"] = vector_json(cfg.anchor->coords());
  if (cfg.target) j["target"] = vector_json(cfg.target->coords());
  j["algorithm"] = std::string(to_string(cfg.algorithm));
  j["schedule"] = {{"alpha", to_json(cfg.schedule.alpha_rule())}, {"beta", to_json(cfg.schedule.beta_rule())}};
  j["stop"] = {{"max_iter", cfg.stop.max_iter}, {"x_tol", cfg.stop.x_tol}, {"fp_tol", cfg.stop.fp_tol}};
  j["output"] = {{"trace", cfg.output.trace},
                 {"summary", cfg.output.summary},
                 {"report", cfg.output.report},
                 {"sweep", cfg.output.sweep}};
  if (!cfg.sweep.empty()) {
    j["sweep"] = {{"algo", cfg.sweep.algo},
                  {"p", cfg.sweep.p},
                  {"s", cfg.sweep.s},
                  {"beta", cfg.sweep.beta},
                  {"max_iter", cfg.sweep.max_iter}};
  }
  if (!cfg.suites.empty()) j["suites"] = cfg.suites;
  return j;
}

}  // namespace bregman
