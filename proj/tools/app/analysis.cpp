#include "analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "arfinsler/ar.hpp"
#include "arfinsler/errors.hpp"
#include "arfinsler/oracle.hpp"

namespace arf::app {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Resolved {
  WeylVariant weyl;
  int points;
  unsigned precision;
};

Resolved resolve(const MetricSpec& spec, const RunOptions& opt) {
  Resolved r;
  r.weyl = opt.weyl.value_or(spec.weyl.value_or(WeylVariant::Printed));
  r.points = opt.points.value_or(10);
  r.precision = opt.precision.value_or(spec.precision.value_or(50));
  return r;
}

const char* weyl_name(WeylVariant w) { return w == WeylVariant::Printed ? "printed" : "standard"; }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

json support_json(const std::set<int>& s) {
  json a = json::array();
  for (int d : s) a.push_back(d);
  return a;
}

json oracle_json(const OracleReport& r) {
  json objects = json::object();
  for (const auto& o : r.objects) objects[o.name] = sci(o.max_rel_error);
  return {{"points_used", r.points_used},
          {"digits", r.digits},
          {"f2_source", r.f2_source},
          {"max_rel_error", sci(r.max_rel_error())},
          {"geodesic_residual", sci(r.geodesic_residual)},
          {"ok", r.ok()},
          {"objects", objects}};
}

class Stopwatch {
 public:
  void lap(json& timing, const std::string& stage) {
    const auto now = Clock::now();
    timing[stage] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  Clock::time_point last_ = Clock::now();
};

json build_report(const MetricSpec& spec, const RunOptions& opt, bool with_timing) {
  const Resolved res = resolve(spec, opt);
  json timing = json::object();
  Stopwatch sw;

  const MetricInstance inst = build_instance(spec);
  FinslerSession s(inst.F2, spec.sigma);
  sw.lap(timing, "construct");

  json report;
  report["metric"] = {{"family", spec.family},
                      {"instance_family", inst.family},
                      {"n", inst.n},
                      {"spec", print_metric_file(spec)},
                      {"kernel", {{"m", inst.kernel->m}, {"A", inst.kernel->A.str()}}},
                      {"F2", inst.F2.str()},
                      {"sigma", s.volume().sigma.str()}};
  report["options"] = {{"weyl", weyl_name(res.weyl)},
                       {"points", res.points},
                       {"precision", res.precision},
                       {"seed", opt.seed}};

  const MetricData& md = s.metric();
  const auto pts = spec.points.empty() ? sample_points(inst, 10, opt.seed) : spec.points;
  const PositivitySample pos = sample_positivity(inst, md, pts);
  const bool regular = !inst.nondegenerate_only && pos.ok(false);
  report["validity"] = {{"points", pos.points},
                        {"positive", pos.positive},
                        {"nondegenerate", pos.nondegenerate},
                        {"expected", inst.nondegenerate_only ? "nondegenerate" : "positive-definite"},
                        {"regular", regular}};
  sw.lap(timing, "metric");

  const auto dec = detect_ar(md);
  json ar = {{"detected", dec.has_value()}};
  if (dec) {
    ar["theta_degree"] = dec->theta_deg;
    ar["eta"] = dec->eta().str();
    ar["eta_rational"] = dec->eta_is_rational;
    json a = json::array();
    for (int i = 0; i < inst.n; ++i) {
      json row = json::array();
      for (int j = 0; j < inst.n; ++j) row.push_back(dec->a(i, j).str());
      a.push_back(row);
    }
    ar["a"] = a;
  }
  report["ar"] = ar;
  sw.lap(timing, "ar");

  const VerificationReport vr = verify_instance(inst, s, regular);
  json claims = json::array();
  std::map<std::string, int> counts = {{"holds", 0}, {"finding", 0}, {"not-applicable", 0}, {"fails", 0}};
  for (const auto& c : vr.claims()) {
    claims.push_back({{"id", c.id},
                      {"kind", to_string(c.kind)},
                      {"status", to_string(c.status)},
                      {"detail", c.detail},
                      {"witness", c.witness}});
    ++counts[to_string(c.status)];
  }
  report["claims"] = claims;
  report["summary"] = counts;
  json consequences = json::object();
  for (const char* id : {"thm.isotropic_s", "thm.isotropic_j", "thm.einstein_ricci_flat"})
    if (const ClaimRecord* c = vr.find(id)) consequences[id] = to_string(c->status);
  report["consequences"] = consequences;
  sw.lap(timing, "verify");

  json rat = json::object();
  for (const auto& name : FinslerSession::object_names()) {
    const Tensor t = s.object(name);
    rat[name] = {{"support", support_json(t.support())}, {"rational", t.is_rational()}, {"zero", t.is_zero()}};
  }
  report["rationality"] = rat;
  sw.lap(timing, "rationality");

  if (res.points > 0) {
    OracleOptions oo;
    oo.points = res.points;
    oo.digits = res.precision;
    oo.seed = opt.seed;
    report["oracle"] = oracle_json(run_oracle(inst, s, oo));
  } else {
    report["oracle"] = nullptr;
  }
  sw.lap(timing, "oracle");
  if (with_timing) report["timing"] = timing;
  return report;
}

std::string index_label(const std::string& variance, const std::vector<int>& idx) {
  std::string up, low;
  for (std::size_t p = 0; p < idx.size(); ++p) (variance[p] == 'u' ? up : low) += std::to_string(idx[p] + 1);
  std::string out;
  if (!up.empty()) out += "^" + up;
  if (!low.empty()) out += "_" + low;
  return out;
}

std::string support_text(const json& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i].get<int>());
  return out + "}";
}

std::string str_or(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

}  // namespace

json run_analysis(const MetricSpec& spec, const RunOptions& opt) { return build_report(spec, opt, opt.timing); }

VerifyOutcome run_verify(const MetricSpec& spec, const RunOptions& opt) {
  VerifyOutcome out;
  out.report = build_report(spec, opt, false);
  bool reference_fail = false, internal_fail = false;
  for (const auto& c : out.report["claims"]) {
    if (c["status"] != "fails") continue;
    out.failures.push_back(c["id"].get<std::string>());
    (c["kind"] == "reference" ? reference_fail : internal_fail) = true;
  }
  const json& orc = out.report["oracle"];
  if (!orc.is_null() && !orc["ok"].get<bool>()) {
    out.failures.push_back("oracle");
    internal_fail = true;
  }
  out.exit_code = internal_fail ? kInternal : reference_fail ? kClaimViolation : kOk;
  out.report["verdict"] = {{"exit_code", out.exit_code}, {"failures", out.failures}};
  return out;
}

std::string run_tensor(const MetricSpec& spec, const std::string& object, const RunOptions& opt) {
  const Resolved res = resolve(spec, opt);
  const auto& names = FinslerSession::object_names();
  if (std::find(names.begin(), names.end(), object) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown object '" + object + "'; expected one of " + list);
  }
  const MetricInstance inst = build_instance(spec);
  FinslerSession s(inst.F2, spec.sigma);
  const std::string name = object == "W" && res.weyl == WeylVariant::Standard ? "W_standard" : object;
  const Tensor t = s.object(name);
  std::ostringstream os;
  os << "# " << name << " for " << spec.family << ", n = " << inst.n << "\n";
  bool any = false;
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (t[f].is_zero()) continue;
    os << name << index_label(t.variance(), t.multi_index(f)) << " = " << t[f].str() << "\n";
    any = true;
  }
  if (!any) os << "all entries are zero\n";
  os << "theta support: " << support_text(support_json(t.support())) << "\n";
  return os.str();
}

json run_oracle_report(const MetricSpec& spec, const RunOptions& opt) {
  const Resolved res = resolve(spec, opt);
  const MetricInstance inst = build_instance(spec);
  FinslerSession s(inst.F2, spec.sigma);
  OracleOptions oo;
  oo.points = res.points;
  oo.digits = res.precision;
  oo.seed = opt.seed;
  return {{"metric", {{"family", spec.family}, {"n", inst.n}}}, {"oracle", oracle_json(run_oracle(inst, s, oo))}};
}

std::string render_text(const json& r) {
  std::ostringstream os;
  if (r.contains("metric")) {
    const json& m = r["metric"];
    os << "metric\n";
    os << "  family: " << m["family"].get<std::string>() << "\n";
    os << "  n: " << m["n"] << "\n";
    if (m.contains("F2")) os << "  F2: " << m["F2"].get<std::string>() << "\n";
    if (m.contains("kernel")) os << "  kernel: theta^" << m["kernel"]["m"] << " = " << str_or(m["kernel"]["A"]) << "\n";
  }
  if (r.contains("validity")) {
    const json& v = r["validity"];
    os << "validity\n  positive: " << v["positive"] << "/" << v["points"] << "\n  nondegenerate: " << v["nondegenerate"]
       << "/" << v["points"] << "\n  expected: " << str_or(v["expected"]) << "\n  regular: " << (v["regular"].get<bool>() ? "yes" : "no")
       << "\n";
  }
  if (r.contains("ar")) {
    const json& a = r["ar"];
    os << "ar\n  detected: " << (a["detected"].get<bool>() ? "yes" : "no") << "\n";
    if (a["detected"].get<bool>()) {
      os << "  theta_degree: " << a["theta_degree"] << "\n  eta: " << str_or(a["eta"]) << "\n";
      for (std::size_t i = 0; i < a["a"].size(); ++i)
        for (std::size_t j = 0; j < a["a"][i].size(); ++j)
          os << "  a_" << i + 1 << j + 1 << ": " << str_or(a["a"][i][j]) << "\n";
    }
  }
  if (r.contains("rationality")) {
    os << "rationality\n";
    char buf[96];
    for (const auto& [name, v] : r["rationality"].items()) {
      std::snprintf(buf, sizeof buf, "  %-11s %-10s %s\n", name.c_str(), support_text(v["support"]).c_str(),
                    v["zero"].get<bool>() ? "zero" : v["rational"].get<bool>() ? "rational" : "irrational");
      os << buf;
    }
  }
  if (r.contains("claims")) {
    os << "claims\n";
    for (const auto& c : r["claims"]) {
      os << "  " << str_or(c["id"]) << " [" << str_or(c["kind"]) << "] " << str_or(c["status"]);
      if (!c["detail"].get<std::string>().empty()) os << ": " << str_or(c["detail"]);
      os << "\n";
      if (!c["witness"].get<std::string>().empty()) os << "    witness: " << str_or(c["witness"]) << "\n";
    }
  }
  if (r.contains("summary")) {
    os << "summary\n";
    for (const auto& [k, v] : r["summary"].items()) os << "  " << k << ": " << v << "\n";
  }
  if (r.contains("oracle") && !r["oracle"].is_null()) {
    const json& o = r["oracle"];
    os << "oracle\n  points: " << o["points_used"] << "\n  digits: " << o["digits"] << "\n  F2 source: " << str_or(o["f2_source"])
       << "\n  max relative error: " << str_or(o["max_rel_error"]) << "\n  geodesic residual: " << str_or(o["geodesic_residual"])
       << "\n  ok: " << (o["ok"].get<bool>() ? "yes" : "no") << "\n";
  }
  if (r.contains("verdict")) {
    const json& v = r["verdict"];
    os << "verdict\n  exit code: " << v["exit_code"] << "\n";
    for (const auto& f : v["failures"]) os << "  failed: " << str_or(f) << "\n";
  }
  if (r.contains("timing")) {
    os << "timing\n";
    for (const auto& [k, v] : r["timing"].items()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "  %s: %.3f s\n", k.c_str(), v.get<double>());
      os << buf;
    }
  }
  return os.str();
}

MetricSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_metric_file(ss.str());
}

}  // namespace arf::app
