#include "grhs/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>

#include "grhs/error.hpp"

namespace grhs {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

namespace {

double number_or_inf(const Json& j, double fallback) {
  if (j.is_null()) return fallback;
  return j.get<double>();
}

template <class F>
auto guarded(const char* what, F&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

Json node_to_json(const detail::Node& n) {
  using detail::Op;
  Json j;
  j["op"] = detail::op_name(n.op);
  switch (n.op) {
    case Op::Constant: j["const"] = n.value; break;
    case Op::Power: j["const"] = n.value; break;
    case Op::Antiderivative:
      j["const"] = n.value;
      j["ref"] = n.ref;
      j["tol"] = n.tol;
      j["integrand_domain"] = interval_to_json(n.integrand_domain);
      j["exact"] = false;
      break;
    case Op::OdeState:
      j["component"] = n.component;
      j["source"] = Json::parse(n.source->describe_json());
      j["exact"] = false;
      break;
    default: break;
  }
  if (!n.args.empty()) {
    Json args = Json::array();
    for (const auto& a : n.args) args.push_back(node_to_json(*a));
    j["args"] = std::move(args);
  }
  return j;
}

using SourceCache = std::map<std::string, std::shared_ptr<const StateSource>>;

Profile node_from_json(const Json& j, SourceCache& cache) {
  const std::string op = j.at("op").get<std::string>();
  auto arg = [&](std::size_t i) {
    const Json& args = j.at("args");
    if (!args.is_array() || args.size() <= i) throw ConfigError("profile node \"" + op + "\" is missing arguments");
    return node_from_json(args[i], cache);
  };
  if (op == "const") return Profile::constant(j.at("const").get<double>());
  if (op == "id") return Profile::identity();
  if (op == "sum" || op == "product") {
    const Json& args = j.at("args");
    if (!args.is_array() || args.empty()) throw ConfigError("profile node \"" + op + "\" needs arguments");
    Profile out = node_from_json(args[0], cache);
    for (std::size_t i = 1; i < args.size(); ++i) {
      out = op == "sum" ? out + node_from_json(args[i], cache) : out * node_from_json(args[i], cache);
    }
    return out;
  }
  if (op == "neg") return -arg(0);
  if (op == "pow") return pow(arg(0), j.at("const").get<double>());
  if (op == "exp") return exp(arg(0));
  if (op == "log") return log(arg(0));
  if (op == "antiderivative") {
    Profile integrand = arg(0);
    if (j.contains("integrand_domain")) integrand = integrand.restricted(interval_from_json(j.at("integrand_domain")));
    return Profile::antiderivative(integrand, j.at("ref").get<double>(), j.value("const", 0.0),
                                   j.value("tol", kDefaultQuadratureTolerance));
  }
  if (op == "ode_state") {
    const std::string key = j.at("source").dump();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, state_source_from_json(key)).first;
    return Profile::ode_state(it->second, j.at("component").get<std::size_t>());
  }
  throw ConfigError("unknown profile op \"" + op + "\"");
}

Profile profile_from_json_cached(const Json& j, SourceCache& cache) {
  return guarded("profile", [&] {
    if (!j.is_object()) throw ConfigError("profile must be an object");
    if (j.contains("schema") && j.at("schema") != "profile-v1") throw ConfigError("profile schema must be profile-v1");
    Profile p = node_from_json(j.at("expr"), cache);
    if (j.contains("domain")) p = p.restricted(interval_from_json(j.at("domain")));
    return p;
  });
}

Json signature_json(const SemiEuclideanFactor& f) {
  Json a = Json::array();
  for (int e : f.signature()) a.push_back(e);
  return a;
}

Json direction_json(const InvariantDirection& d) {
  Json a = Json::array();
  for (double v : d.coefficients()) a.push_back(v);
  return a;
}

Json range_json(const Interval& d) { return interval_to_json(d); }

}  // namespace

Json interval_to_json(const Interval& d) {
  return {{"lo", number_or_null(d.lo)}, {"hi", number_or_null(d.hi)}, {"lo_closed", d.lo_closed},
          {"hi_closed", d.hi_closed}};
}

Interval interval_from_json(const Json& j) {
  return guarded("interval", [&] {
    if (j.is_array()) {
      if (j.size() != 2) throw ConfigError("interval array needs two entries");
      return Interval::closed(j[0].get<double>(), j[1].get<double>());
    }
    Interval d;
    d.lo = number_or_inf(j.at("lo"), -std::numeric_limits<double>::infinity());
    d.hi = number_or_inf(j.at("hi"), std::numeric_limits<double>::infinity());
    d.lo_closed = j.value("lo_closed", false);
    d.hi_closed = j.value("hi_closed", false);
    if (!(d.lo <= d.hi)) throw ConfigError("interval endpoints out of order");
    return d;
  });
}

Json profile_to_json(const Profile& p) {
  return {{"schema", "profile-v1"}, {"domain", interval_to_json(p.domain())}, {"expr", node_to_json(p.root())}};
}

Profile profile_from_json(const Json& j) {
  SourceCache cache;
  return profile_from_json_cached(j, cache);
}

Json candidate_to_json(const WarpedCandidate& c) {
  Json j;
  j["schema"] = "candidate-v1";
  j["name"] = c.name;
  j["base"] = {{"signature", signature_json(c.base)}, {"alpha", direction_json(c.alpha)}};
  j["fiber"] = {{"signature", signature_json(c.fiber)},
                {"beta", c.beta ? direction_json(*c.beta) : Json(nullptr)}};
  j["phi"] = profile_to_json(c.phi);
  j["f"] = profile_to_json(c.f);
  j["h"] = profile_to_json(c.h);
  j["u"] = profile_to_json(c.u);
  j["tau"] = c.tau ? profile_to_json(*c.tau) : Json(nullptr);
  j["u_placement"] = std::string(to_string(c.u_placement));
  j["theta"] = c.theta;
  j["lambda"] = c.lambda;
  j["mu"] = c.mu;
  return j;
}

WarpedCandidate candidate_from_json(const Json& j) {
  return guarded("candidate", [&] {
    if (!j.is_object()) throw ConfigError("candidate must be an object");
    if (j.contains("schema") && j.at("schema") != "candidate-v1") {
      throw ConfigError("candidate schema must be candidate-v1");
    }
    SourceCache cache;
    WarpedCandidate c;
    c.name = j.value("name", std::string("candidate"));
    c.base = SemiEuclideanFactor(j.at("base").at("signature").get<std::vector<int>>());
    c.alpha = InvariantDirection(j.at("base").at("alpha").get<std::vector<double>>(), c.base);
    c.fiber = SemiEuclideanFactor(j.at("fiber").at("signature").get<std::vector<int>>());
    const Json& fb = j.at("fiber");
    if (fb.contains("beta") && !fb.at("beta").is_null()) {
      c.beta = InvariantDirection(fb.at("beta").get<std::vector<double>>(), c.fiber);
    }
    c.phi = profile_from_json_cached(j.at("phi"), cache);
    c.f = profile_from_json_cached(j.at("f"), cache);
    c.h = profile_from_json_cached(j.at("h"), cache);
    c.u = profile_from_json_cached(j.at("u"), cache);
    if (j.contains("tau") && !j.at("tau").is_null()) c.tau = profile_from_json_cached(j.at("tau"), cache);
    c.u_placement = placement_from_string(j.value("u_placement", std::string("base")));
    c.theta = j.value("theta", 0.0);
    c.lambda = j.value("lambda", 0.0);
    c.mu = j.value("mu", 0.0);
    c.validate();
    return c;
  });
}

Json case_params_to_json(const CaseParams& p) {
  Json j;
  j["schema"] = "caseparams-v1";
  j["case"] = p.case_id;
  j["n"] = p.n;
  j["m"] = p.m;
  if (p.base_signature) j["base_signature"] = *p.base_signature;
  if (p.fiber_signature) j["fiber_signature"] = *p.fiber_signature;
  if (p.alpha) j["alpha"] = *p.alpha;
  if (p.beta) j["beta"] = *p.beta;
  j["theta"] = p.theta;
  Json c = Json::object();
  for (std::size_t i = 1; i < p.c.size(); ++i) c["c" + std::to_string(i)] = p.c[i];
  j["c"] = std::move(c);
  j["k"] = p.k;
  j["b"] = p.b;
  j["h_c1"] = p.h_c1;
  j["h_c2"] = p.h_c2;
  j["u_sign"] = p.u_sign;
  j["n_branch"] = p.n_branch;
  j["z_mode"] = std::string(to_string(p.z_mode));
  j["z0"] = p.z0;
  j["xi0"] = p.xi0;
  j["xi_span"] = p.xi_span;
  j["psi_form"] = std::string(to_string(p.psi_form));
  j["xi_interval"] = range_json(p.xi_interval);
  j["zeta_interval"] = range_json(p.zeta_interval);
  j["quad_tol"] = p.quad_tol;
  if (p.phi) j["phi"] = profile_to_json(*p.phi);
  if (p.f) j["f"] = profile_to_json(*p.f);
  if (p.tau) j["tau"] = profile_to_json(*p.tau);
  return j;
}

CaseParams case_params_from_json(const Json& j) {
  return guarded("caseparams", [&] {
    if (!j.is_object()) throw ConfigError("caseparams must be an object");
    if (j.contains("schema") && j.at("schema") != "caseparams-v1") {
      throw ConfigError("caseparams schema must be caseparams-v1");
    }
    static const char* const kKnown[] = {"schema", "case", "n", "m", "base_signature", "fiber_signature", "alpha",
                                         "beta", "theta", "c", "k", "b", "h_c1", "h_c2", "u_sign", "n_branch",
                                         "z_mode", "z0", "xi0", "xi_span", "psi_form", "xi_interval",
                                         "zeta_interval", "quad_tol", "phi", "f", "tau"};
    for (const auto& [key, _] : j.items()) {
      if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
        throw ConfigError("caseparams: unknown key \"" + key + "\"");
      }
    }
    CaseParams p = default_case_params(j.at("case").get<int>());
    p.n = j.value("n", p.n);
    p.m = j.value("m", p.m);
    if (j.contains("base_signature")) p.base_signature = j.at("base_signature").get<std::vector<int>>();
    if (j.contains("fiber_signature")) p.fiber_signature = j.at("fiber_signature").get<std::vector<int>>();
    if (j.contains("alpha")) p.alpha = j.at("alpha").get<std::vector<double>>();
    if (j.contains("beta")) p.beta = j.at("beta").get<std::vector<double>>();
    p.theta = j.value("theta", p.theta);
    if (j.contains("c")) {
      for (const auto& [key, value] : j.at("c").items()) {
        std::size_t idx = 0;
        if (key.size() == 2 && key[0] == 'c' && key[1] >= '1' && key[1] <= '9') {
          idx = static_cast<std::size_t>(key[1] - '0');
        } else {
          throw ConfigError("caseparams: constants are named c1..c9");
        }
        p.c[idx] = value.get<double>();
      }
    }
    p.k = j.value("k", p.k);
    p.b = j.value("b", p.b);
    p.h_c1 = j.value("h_c1", p.h_c1);
    p.h_c2 = j.value("h_c2", p.h_c2);
    p.u_sign = j.value("u_sign", p.u_sign);
    p.n_branch = j.value("n_branch", p.n_branch);
    if (j.contains("z_mode")) p.z_mode = z_mode_from_string(j.at("z_mode").get<std::string>());
    p.z0 = j.value("z0", p.z0);
    p.xi0 = j.value("xi0", p.xi0);
    p.xi_span = j.value("xi_span", p.xi_span);
    if (j.contains("psi_form")) p.psi_form = psi_form_from_string(j.at("psi_form").get<std::string>());
    if (j.contains("xi_interval")) p.xi_interval = interval_from_json(j.at("xi_interval"));
    if (j.contains("zeta_interval")) p.zeta_interval = interval_from_json(j.at("zeta_interval"));
    p.quad_tol = j.value("quad_tol", p.quad_tol);
    if (j.contains("phi")) p.phi = profile_from_json(j.at("phi"));
    if (j.contains("f")) p.f = profile_from_json(j.at("f"));
    if (j.contains("tau")) p.tau = profile_from_json(j.at("tau"));
    p.validate();
    return p;
  });
}

Json report_to_json(const ResidualReport& r) {
  Json sup = Json::array();
  for (double v : r.sup_residuals) sup.push_back(number_or_null(v));
  Json xi = Json::array(), zeta = Json::array();
  for (const auto& s : r.grid) {
    xi.push_back(s.xi);
    zeta.push_back(s.zeta);
  }
  return {{"schema", "residual-report-v1"},
          {"candidate", r.candidate},
          {"equations", r.equations},
          {"sup_residuals", std::move(sup)},
          {"tolerance", r.tolerance},
          {"passed", r.passed},
          {"failing", r.failing()},
          {"grid", {{"count", r.grid.size()}, {"xi", std::move(xi)}, {"zeta", std::move(zeta)}}}};
}

Json probe_to_json(const ProbeSummary& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries) {
    Json je = {{"kind", std::string(to_string(e.kind))},
               {"causal_character", number_or_null(e.causal_character)},
               {"termination", std::string(to_string(e.termination))},
               {"s_forward", number_or_null(e.s_forward)},
               {"s_backward", number_or_null(e.s_backward)},
               {"max_drift", number_or_null(e.max_drift)}};
    if (s.bound_checked) {
      je["accel_bound"] = number_or_null(e.accel_bound);
      je["sup_y1_accel"] = number_or_null(e.sup_y1_accel);
      je["bound_holds"] = e.bound_holds;
    }
    entries.push_back(std::move(je));
  }
  return {{"schema", "probe-summary-v1"},
          {"candidate", s.candidate},
          {"count", s.count},
          {"seed", s.seed},
          {"s_max", s.s_max},
          {"early_terminations", s.early_terminations},
          {"max_drift", number_or_null(s.max_drift)},
          {"bound_checked", s.bound_checked},
          {"bound_violations", s.bound_violations},
          {"verdict", s.verdict()},
          {"entries", std::move(entries)}};
}

}  // namespace grhs
