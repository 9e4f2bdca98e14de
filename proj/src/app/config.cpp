#include "vekua/config.hpp"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

namespace vekua {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(path + "." + k, "unknown field");
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

const json* optional_field(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& required_field(const json& j, const std::string& path, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "required");
  return *it;
}

Complex parse_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (j.is_array()) {
    if (j.size() != 2) fail(path, "expected [re, im]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  }
  if (j.is_object()) {
    allow_keys(j, path, {"re", "im"});
    const json* re = optional_field(j, "re");
    const json* im = optional_field(j, "im");
    return {re ? number(*re, path + ".re") : 0.0, im ? number(*im, path + ".im") : 0.0};
  }
  fail(path, "expected a number, [re, im] or {\"re\", \"im\"}");
}

FactorKind parse_kind(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected \"circle\" or \"su2\"");
  const auto s = j.get<std::string>();
  if (s == "circle") return FactorKind::Circle;
  if (s == "su2") return FactorKind::SU2;
  fail(path, "unknown factor kind \"" + s + "\" (expected \"circle\" or \"su2\")");
}

}  // namespace

std::string to_string(Task task) {
  switch (task) {
    case Task::Solve: return "solve";
    case Task::Classify: return "classify";
    case Task::Resonances: return "resonances";
    case Task::Diophantine: return "diophantine";
    case Task::Oracle: return "oracle";
    case Task::Selftest: return "selftest";
  }
  return "?";
}

std::optional<Task> task_from_string(const std::string& name) {
  for (Task t : {Task::Solve, Task::Classify, Task::Resonances, Task::Diophantine, Task::Oracle,
                 Task::Selftest})
    if (to_string(t) == name) return t;
  return std::nullopt;
}

TrigPoly parse_trig(const json& j, const std::string& path) {
  if (j.is_number()) return TrigPoly(number(j, path));
  allow_keys(j, path, {"mean", "harmonics"});
  const json* mean = optional_field(j, "mean");
  std::vector<Harmonic> harmonics;
  if (const json* h = optional_field(j, "harmonics")) {
    if (!h->is_array()) fail(path + ".harmonics", "expected an array");
    for (std::size_t i = 0; i < h->size(); ++i) {
      const std::string hp = path + ".harmonics[" + std::to_string(i) + "]";
      const json& e = (*h)[i];
      allow_keys(e, hp, {"k", "cos", "sin"});
      Harmonic hh;
      const long k = integer(required_field(e, hp, "k"), hp + ".k");
      if (k < 1) fail(hp + ".k", "frequency must be >= 1");
      if (i > 0 && k <= harmonics.back().freq) fail(hp + ".k", "frequencies must be strictly increasing");
      hh.freq = static_cast<int>(k);
      if (const json* c = optional_field(e, "cos")) hh.cos_coeff = number(*c, hp + ".cos");
      if (const json* s = optional_field(e, "sin")) hh.sin_coeff = number(*s, hp + ".sin");
      harmonics.push_back(hh);
    }
  }
  return TrigPoly(mean ? number(*mean, path + ".mean") : 0.0, std::move(harmonics));
}

json trig_to_json(const TrigPoly& p) {
  json out;
  out["mean"] = p.mean();
  out["harmonics"] = json::array();
  for (const auto& h : p.harmonics()) out["harmonics"].push_back({{"k", h.freq}, {"cos", h.cos_coeff}, {"sin", h.sin_coeff}});
  return out;
}

RunConfig parse_config(const std::string& text, const Overrides& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("$: malformed JSON: ") + e.what());
  }
  return parse_config(std::move(doc), overrides);
}

RunConfig parse_config(json doc, const Overrides& o) {
  if (!doc.is_object()) fail("$", "configuration must be a JSON object");
  allow_keys(doc, "$", {"task", "operator", "truncation", "forcing", "diophantine", "solver", "output", "selftest"});

  // Overrides are written into the document so that the hash sees them.
  if (o.task) doc["task"] = to_string(*o.task);
  if (o.delta || o.alpha_re || o.alpha_im) {
    if (!doc.contains("operator")) fail("$.operator", "required");
    json& op = doc["operator"];
    if (o.delta) op["delta"] = *o.delta;
    if (o.alpha_re || o.alpha_im) {
      Complex a = op.contains("alpha") ? parse_complex(op["alpha"], "$.operator.alpha") : Complex(0.0);
      if (o.alpha_re) a.real(*o.alpha_re);
      if (o.alpha_im) a.imag(*o.alpha_im);
      op["alpha"] = json::array({a.real(), a.imag()});
    }
  }
  if (o.trunc_L || o.nt) {
    json& tr = doc["truncation"];
    if (o.nt) tr["nt"] = *o.nt;
    if (o.trunc_L) {
      const std::size_t n = doc.contains("operator") && doc["operator"].contains("factors") &&
                                    doc["operator"]["factors"].is_array()
                                ? doc["operator"]["factors"].size()
                                : 0;
      tr["bounds"] = json::array();
      for (std::size_t i = 0; i < n; ++i) tr["bounds"].push_back(*o.trunc_L);
    }
  }

  RunConfig cfg;
  if (const json* t = optional_field(doc, "task")) {
    if (!t->is_string()) fail("$.task", "expected a string");
    const auto task = task_from_string(t->get<std::string>());
    if (!task) fail("$.task", "unknown task \"" + t->get<std::string>() + "\"");
    cfg.task = *task;
  }

  // operator
  const json& op = required_field(doc, "$", "operator");
  allow_keys(op, "$.operator", {"factors", "delta", "alpha", "s", "q"});
  const json& factors = required_field(op, "$.operator", "factors");
  if (!factors.is_array() || factors.empty()) fail("$.operator.factors", "expected a nonempty array");
  bool any_drift = false;
  std::vector<TrigPoly> drift;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::string fp = "$.operator.factors[" + std::to_string(i) + "]";
    const json& f = factors[i];
    allow_keys(f, fp, {"kind", "lambda", "p0", "p"});
    cfg.params.group.factors.push_back({parse_kind(required_field(f, fp, "kind"), fp + ".kind")});
    const json* lam = optional_field(f, "lambda");
    cfg.params.group.lambda.push_back(lam ? number(*lam, fp + ".lambda") : 0.0);
    const json* p0 = optional_field(f, "p0");
    const json* p = optional_field(f, "p");
    if (p0 && p) fail(fp, "give either p0 or p, not both");
    TrigPoly pj = p ? parse_trig(*p, fp + ".p") : TrigPoly(p0 ? number(*p0, fp + ".p0") : 0.0);
    any_drift = any_drift || !pj.harmonics().empty();
    cfg.params.group.p0.push_back(pj.mean());
    drift.push_back(std::move(pj));
  }
  if (any_drift) cfg.params.drift = std::move(drift);
  if (const json* d = optional_field(op, "delta")) cfg.params.delta = number(*d, "$.operator.delta");
  cfg.params.alpha = parse_complex(required_field(op, "$.operator", "alpha"), "$.operator.alpha");
  if (cfg.params.alpha == Complex(0.0))
    fail("$.operator.alpha", "alpha = 0 violates the hypothesis alpha in C \\ {0}");
  cfg.params.s = optional_field(op, "s") ? parse_trig(op["s"], "$.operator.s") : TrigPoly(0.0);
  cfg.params.q = optional_field(op, "q") ? parse_trig(op["q"], "$.operator.q") : TrigPoly(1.0);
  try {
    validate(cfg.params);
  } catch (const InvalidParameters& e) {
    fail("$.operator", e.what());
  }

  // truncation
  const std::size_t nf = cfg.params.group.size();
  if (const json* tr = optional_field(doc, "truncation")) {
    allow_keys(*tr, "$.truncation", {"bounds", "nt", "k_bound"});
    if (const json* b = optional_field(*tr, "bounds")) {
      if (!b->is_array() || b->size() != nf)
        fail("$.truncation.bounds", "expected one bound per factor (" + std::to_string(nf) + ")");
      for (std::size_t i = 0; i < nf; ++i) {
        const long v = integer((*b)[i], "$.truncation.bounds[" + std::to_string(i) + "]");
        if (v < 0) fail("$.truncation.bounds[" + std::to_string(i) + "]", "truncation bounds must be >= 0");
        cfg.truncation.push_back(static_cast<int>(v));
      }
    }
    if (const json* n = optional_field(*tr, "nt")) {
      const long v = integer(*n, "$.truncation.nt");
      if (v < 2 || v % 2 != 0) fail("$.truncation.nt", "nt must be even and >= 2");
      cfg.nt = static_cast<int>(v);
    }
    if (const json* k = optional_field(*tr, "k_bound")) {
      cfg.k_bound = integer(*k, "$.truncation.k_bound");
      if (cfg.k_bound < 0) fail("$.truncation.k_bound", "must be >= 0");
    }
  }
  if (cfg.truncation.empty()) cfg.truncation.assign(nf, 2);

  if (const json* f = optional_field(doc, "forcing")) {
    allow_keys(*f, "$.forcing", {"path", "field"});
    ForcingSpec spec;
    if (const json* p = optional_field(*f, "path")) {
      if (!p->is_string()) fail("$.forcing.path", "expected a string");
      spec.path = p->get<std::string>();
    }
    if (const json* fld = optional_field(*f, "field")) spec.inline_field = *fld;
    if (spec.path.has_value() == spec.inline_field.has_value())
      fail("$.forcing", "give exactly one of path or field");
    cfg.forcing = std::move(spec);
  }
  if (cfg.task == Task::Solve && !cfg.forcing) fail("$.forcing", "forcing required for task solve");

  if (const json* d = optional_field(doc, "diophantine")) {
    allow_keys(*d, "$.diophantine", {"M"});
    if (const json* m = optional_field(*d, "M")) {
      cfg.diophantine_M = number(*m, "$.diophantine.M");
      if (cfg.diophantine_M < 0) fail("$.diophantine.M", "must be >= 0");
    }
  }
  if (const json* s = optional_field(doc, "solver")) {
    allow_keys(*s, "$.solver", {"threads", "max_subpanels", "fixed_subpanels", "emit_fit", "decay_orders"});
    if (const json* v = optional_field(*s, "threads")) {
      const long t = integer(*v, "$.solver.threads");
      if (t < 0) fail("$.solver.threads", "must be >= 0");
      cfg.solver.threads = static_cast<unsigned>(t);
    }
    if (const json* v = optional_field(*s, "max_subpanels")) {
      cfg.solver.max_subpanels = static_cast<int>(integer(*v, "$.solver.max_subpanels"));
      if (cfg.solver.max_subpanels < 1) fail("$.solver.max_subpanels", "must be >= 1");
    }
    if (const json* v = optional_field(*s, "fixed_subpanels"))
      cfg.solver.fixed_subpanels = static_cast<int>(integer(*v, "$.solver.fixed_subpanels"));
    if (const json* v = optional_field(*s, "emit_fit")) {
      if (!v->is_boolean()) fail("$.solver.emit_fit", "expected a boolean");
      cfg.solver.emit_fit = v->get<bool>();
    }
    if (const json* v = optional_field(*s, "decay_orders")) {
      if (!v->is_array()) fail("$.solver.decay_orders", "expected an array of integers");
      cfg.solver.decay_orders.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const long b = integer((*v)[i], "$.solver.decay_orders[" + std::to_string(i) + "]");
        if (b < 0) fail("$.solver.decay_orders[" + std::to_string(i) + "]", "must be >= 0");
        cfg.solver.decay_orders.push_back(static_cast<int>(b));
      }
    }
  }
  if (const json* out = optional_field(doc, "output")) {
    allow_keys(*out, "$.output", {"prefix", "decay_csv"});
    if (const json* p = optional_field(*out, "prefix")) {
      if (!p->is_string()) fail("$.output.prefix", "expected a string");
      cfg.output_prefix = p->get<std::string>();
    }
    if (const json* c = optional_field(*out, "decay_csv")) {
      if (!c->is_boolean()) fail("$.output.decay_csv", "expected a boolean");
      cfg.decay_csv = c->get<bool>();
    }
  }
  if (const json* st = optional_field(doc, "selftest")) {
    allow_keys(*st, "$.selftest", {"scale"});
    if (const json* s = optional_field(*st, "scale")) {
      cfg.selftest_scale = number(*s, "$.selftest.scale");
      if (!(cfg.selftest_scale > 0.0 && cfg.selftest_scale <= 1.0))
        fail("$.selftest.scale", "must lie in (0, 1]");
    }
  }
  cfg.effective = std::move(doc);
  return cfg;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("SHA-256 computation failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

}  // namespace vekua
