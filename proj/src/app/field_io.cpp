#include "vekua/field_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "vekua/config.hpp"

namespace vekua {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double num(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

ModeIndex mode_from_json(const json& j, const GroupModel& model, const std::string& path) {
  if (!j.is_array() || j.size() != model.size())
    fail(path, "expected one entry per factor (" + std::to_string(model.size()) + ")");
  ModeIndex m;
  for (std::size_t f = 0; f < model.size(); ++f) {
    const std::string p = path + "[" + std::to_string(f) + "]";
    const json& e = j[f];
    if (!e.is_object()) fail(p, "expected an object");
    if (model.factors[f].kind == FactorKind::Circle) {
      if (!e.contains("k") || e.size() != 1) fail(p, "circle entry must be {\"k\": int}");
      m.entries.push_back(CircleMode{integer(e["k"], p + ".k")});
    } else {
      if (!e.contains("two_l") || !e.contains("two_m") || !e.contains("two_n") || e.size() != 3)
        fail(p, "su2 entry must be {\"two_l\", \"two_m\", \"two_n\"}");
      m.entries.push_back(Su2Mode{integer(e["two_l"], p + ".two_l"), integer(e["two_m"], p + ".two_m"),
                                  integer(e["two_n"], p + ".two_n")});
    }
  }
  if (!is_admissible(model, m)) fail(path, "inadmissible mode " + to_string(m));
  return m;
}

TimeProfile profile_from_json(const json& j, int nt, const std::string& path) {
  if (!j.is_object() || j.size() != 1) fail(path, "expected {\"samples\"}, {\"series\"} or {\"trig\"}");
  if (const auto it = j.find("samples"); it != j.end()) {
    if (!it->is_array() || it->size() != static_cast<std::size_t>(nt + 1))
      fail(path + ".samples", "expected nt + 1 = " + std::to_string(nt + 1) + " [re, im] pairs");
    SampledProfile v(nt + 1);
    for (int i = 0; i <= nt; ++i) {
      const json& e = (*it)[i];
      const std::string p = path + ".samples[" + std::to_string(i) + "]";
      if (!e.is_array() || e.size() != 2) fail(p, "expected [re, im]");
      v[i] = {num(e[0], p + "[0]"), num(e[1], p + "[1]")};
    }
    return v;
  }
  if (const auto it = j.find("series"); it != j.end()) {
    const std::string p = path + ".series";
    if (!it->is_object() || !it->contains("re") || !it->contains("im")) fail(p, "expected {\"re\", \"im\"}");
    const json& re = (*it)["re"];
    const json& im = (*it)["im"];
    if (!re.is_array() || !im.is_array() || re.size() != im.size() || re.size() % 2 != 1)
      fail(p, "re and im must be arrays of equal odd length 2d + 1");
    ComplexSeries s(static_cast<int>(re.size() / 2));
    for (int k = -s.degree(); k <= s.degree(); ++k) {
      const std::size_t i = static_cast<std::size_t>(k + s.degree());
      s.coeff_ref(k) = {num(re[i], p + ".re[" + std::to_string(i) + "]"),
                        num(im[i], p + ".im[" + std::to_string(i) + "]")};
    }
    return s;
  }
  if (const auto it = j.find("trig"); it != j.end()) {
    const std::string p = path + ".trig";
    if (!it->is_object()) fail(p, "expected {\"re\": trig, \"im\": trig}");
    for (const auto& [k, v] : it->items())
      if (k != "re" && k != "im") fail(p + "." + k, "unknown field");
    const TrigPoly re = it->contains("re") ? parse_trig((*it)["re"], p + ".re") : TrigPoly(0.0);
    const TrigPoly im = it->contains("im") ? parse_trig((*it)["im"], p + ".im") : TrigPoly(0.0);
    return re.to_series() + Complex(0.0, 1.0) * im.to_series();
  }
  fail(path, "expected {\"samples\"}, {\"series\"} or {\"trig\"}");
}

json profile_to_json(const TimeProfile& p) {
  if (const auto* s = std::get_if<ComplexSeries>(&p)) {
    json re = json::array(), im = json::array();
    for (int k = -s->degree(); k <= s->degree(); ++k) {
      re.push_back(s->coeff(k).real());
      im.push_back(s->coeff(k).imag());
    }
    return {{"series", {{"re", re}, {"im", im}}}};
  }
  json samples = json::array();
  for (const Complex& z : std::get<SampledProfile>(p)) samples.push_back({z.real(), z.imag()});
  return {{"samples", samples}};
}

}  // namespace

json mode_to_json(const ModeIndex& mode) {
  json out = json::array();
  for (const auto& e : mode.entries) {
    if (const auto* c = std::get_if<CircleMode>(&e))
      out.push_back({{"k", c->k}});
    else {
      const auto& s = std::get<Su2Mode>(e);
      out.push_back({{"two_l", s.two_l}, {"two_m", s.two_m}, {"two_n", s.two_n}});
    }
  }
  return out;
}

FieldDocument field_from_json(const json& doc, const GroupModel& model, const Truncation& default_truncation,
                              int default_nt, const std::string& path) {
  if (!doc.is_object()) fail(path, "field must be a JSON object");
  for (const auto& [k, v] : doc.items())
    if (k != "format" && k != "nt" && k != "truncation" && k != "factors" && k != "modes")
      fail(path + "." + k, "unknown field");
  if (doc.contains("format") && doc["format"] != "vekua-field/1")
    fail(path + ".format", "unsupported format (expected \"vekua-field/1\")");
  if (doc.contains("factors")) {
    const json& f = doc["factors"];
    if (!f.is_array() || f.size() != model.size()) fail(path + ".factors", "factor list differs from the operator");
    for (std::size_t i = 0; i < model.size(); ++i) {
      const char* want = model.factors[i].kind == FactorKind::Circle ? "circle" : "su2";
      if (f[i] != want) fail(path + ".factors[" + std::to_string(i) + "]", std::string("expected \"") + want + "\"");
    }
  }
  FieldDocument out;
  out.primal.nt = doc.contains("nt") ? integer(doc["nt"], path + ".nt") : default_nt;
  if (out.primal.nt < 2 || out.primal.nt % 2) fail(path + ".nt", "nt must be even and >= 2");
  out.primal.truncation = default_truncation;
  if (doc.contains("truncation")) {
    const json& t = doc["truncation"];
    if (!t.is_array() || t.size() != model.size()) fail(path + ".truncation", "expected one bound per factor");
    out.primal.truncation.clear();
    for (std::size_t i = 0; i < t.size(); ++i) {
      const int b = integer(t[i], path + ".truncation[" + std::to_string(i) + "]");
      if (b < 0) fail(path + ".truncation[" + std::to_string(i) + "]", "truncation bounds must be >= 0");
      out.primal.truncation.push_back(b);
    }
  }
  CoefficientField conj;
  conj.nt = out.primal.nt;
  conj.truncation = out.primal.truncation;
  bool any_conj = false, all_conj = true;

  if (!doc.contains("modes") || !doc["modes"].is_array()) fail(path + ".modes", "expected an array");
  const json& modes = doc["modes"];
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string p = path + ".modes[" + std::to_string(i) + "]";
    const json& rec = modes[i];
    if (!rec.is_object() || !rec.contains("index") || !rec.contains("f"))
      fail(p, "record needs \"index\" and \"f\"");
    for (const auto& [k, v] : rec.items())
      if (k != "index" && k != "f" && k != "g") fail(p + "." + k, "unknown field");
    const ModeIndex m = mode_from_json(rec["index"], model, p + ".index");
    if (!within_truncation(model, out.primal.truncation, m))
      fail(p + ".index", "mode " + to_string(m) + " lies outside the truncation");
    if (out.primal.modes.count(m)) fail(p + ".index", "duplicate mode " + to_string(m));
    out.primal.modes.emplace(m, profile_from_json(rec["f"], out.primal.nt, p + ".f"));
    if (rec.contains("g")) {
      any_conj = true;
      conj.modes.emplace(m, profile_from_json(rec["g"], out.primal.nt, p + ".g"));
    } else {
      all_conj = false;
    }
  }
  if (any_conj && !all_conj) fail(path + ".modes", "either every record carries \"g\" or none does");
  if (any_conj) out.conj = std::move(conj);
  return out;
}

json field_to_json(const GroupModel& model, const CoefficientField& primal, const CoefficientField* conj) {
  json out;
  out["format"] = "vekua-field/1";
  out["nt"] = primal.nt;
  out["factors"] = json::array();
  for (const auto& f : model.factors) out["factors"].push_back(f.kind == FactorKind::Circle ? "circle" : "su2");
  out["truncation"] = primal.truncation;
  out["modes"] = json::array();
  std::set<ModeIndex> keys;
  for (const auto& kv : primal.modes) keys.insert(kv.first);
  if (conj)
    for (const auto& kv : conj->modes) keys.insert(kv.first);
  auto profile_or_zero = [](const CoefficientField& f, const ModeIndex& m) {
    const auto it = f.modes.find(m);
    return it != f.modes.end() ? profile_to_json(it->second) : profile_to_json(ComplexSeries());
  };
  for (const auto& mode : keys) {
    json rec;
    rec["index"] = mode_to_json(mode);
    rec["f"] = profile_or_zero(primal, mode);
    if (conj) rec["g"] = profile_or_zero(*conj, mode);
    out["modes"].push_back(std::move(rec));
  }
  return out;
}

std::string read_text(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw FileError("cannot open " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FileError("error reading " + file);
  return ss.str();
}

void write_text(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot write " + file);
  out << text;
  if (!out) throw FileError("error writing " + file);
}

FieldDocument read_field(const std::string& file, const GroupModel& model, const Truncation& default_truncation,
                         int default_nt) {
  json doc;
  try {
    doc = json::parse(read_text(file));
  } catch (const json::parse_error& e) {
    throw ConfigError(file + ": malformed JSON: " + e.what());
  }
  return field_from_json(doc, model, default_truncation, default_nt, file);
}

}  // namespace vekua
