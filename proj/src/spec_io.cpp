#include "levy/spec_io.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "levy/errors.hpp"

namespace levy {

namespace {

using nlohmann::json;

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw SpecError(where + ": expected a JSON object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!names.count(item.key())) throw SpecError(where + ": unknown field \"" + item.key() + "\"");
  }
}

double number(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw SpecError(where + ": missing field \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number()) throw SpecError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& where, const char* key, double fallback) {
  return j.contains(key) ? number(j, where, key) : fallback;
}

std::vector<PowerTerm> read_terms(const json& j, const std::string& where) {
  if (!j.is_array()) throw SpecError(where + ": expected an array of terms");
  std::vector<PowerTerm> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const json& t = j[i];
    expect_object(t, w);
    reject_unknown(t, w, {"coef", "power", "lower", "upper", "decay"});
    PowerTerm p;
    p.coef = number(t, w, "coef");
    p.power = number(t, w, "power");
    p.lower = number_or(t, w, "lower", 0.0);
    p.upper = number_or(t, w, "upper", kInf);
    p.decay = number_or(t, w, "decay", 0.0);
    out.push_back(p);
  }
  return out;
}

SideHint read_hint(const json& j, const std::string& where, const char* index_key) {
  expect_object(j, where);
  reject_unknown(j, where, {index_key, "kPlus", "kMinus"});
  return {number(j, where, index_key), number(j, where, "kPlus"), number(j, where, "kMinus")};
}

json write_terms(const std::vector<PowerTerm>& terms) {
  json arr = json::array();
  for (const PowerTerm& p : terms) {
    json t = {{"coef", p.coef}, {"power", p.power}};
    if (p.lower != 0.0) t["lower"] = p.lower;
    if (p.upper != kInf) t["upper"] = p.upper;
    if (p.decay != 0.0) t["decay"] = p.decay;
    arr.push_back(t);
  }
  return arr;
}

}  // namespace

LevyProcessSpec spec_from_json(const json& doc) {
  expect_object(doc, "spec");
  reject_unknown(doc, "spec", {"a", "b", "measure"});
  LevyProcessSpec spec;
  spec.a = number(doc, "spec", "a");
  spec.b = number(doc, "spec", "b");
  if (!doc.contains("measure")) throw SpecError("spec: missing field \"measure\"");
  const json& m = doc.at("measure");
  expect_object(m, "measure");
  if (!m.contains("kind") || !m.at("kind").is_string()) {
    throw SpecError("measure.kind: expected one of stable, tempered, exponential, zero, custom");
  }
  const std::string kind = m.at("kind").get<std::string>();
  if (kind == "zero") {
    reject_unknown(m, "measure", {"kind"});
    spec.measure = ZeroMeasure{};
  } else if (kind == "stable") {
    reject_unknown(m, "measure", {"kind", "kPlus", "kMinus", "alpha"});
    spec.measure = StableDensity{number(m, "measure", "kPlus"), number(m, "measure", "kMinus"),
                                 number(m, "measure", "alpha")};
  } else if (kind == "tempered") {
    reject_unknown(m, "measure", {"kind", "kPlus", "kMinus", "alpha", "betaTail"});
    spec.measure = TemperedPolynomial{number(m, "measure", "kPlus"), number(m, "measure", "kMinus"),
                                      number(m, "measure", "alpha"), number(m, "measure", "betaTail")};
  } else if (kind == "exponential") {
    reject_unknown(m, "measure", {"kind", "scale"});
    spec.measure = ExponentialDensity{number(m, "measure", "scale")};
  } else if (kind == "custom") {
    reject_unknown(m, "measure", {"kind", "xiPlus", "xiMinus", "originHint", "tailHint"});
    CustomDensity c;
    if (m.contains("xiPlus")) c.plus = read_terms(m.at("xiPlus"), "measure.xiPlus");
    if (m.contains("xiMinus")) c.minus = read_terms(m.at("xiMinus"), "measure.xiMinus");
    if (m.contains("originHint")) c.origin_hint = read_hint(m.at("originHint"), "measure.originHint", "alpha");
    if (m.contains("tailHint")) c.tail_hint = read_hint(m.at("tailHint"), "measure.tailHint", "betaTail");
    spec.measure = c;
  } else {
    throw SpecError("measure.kind: unknown kind \"" + kind + "\"");
  }
  return spec;
}

json spec_to_json(const LevyProcessSpec& spec) {
  json m;
  if (std::holds_alternative<ZeroMeasure>(spec.measure)) {
    m = {{"kind", "zero"}};
  } else if (const auto* s = std::get_if<StableDensity>(&spec.measure)) {
    m = {{"kind", "stable"}, {"kPlus", s->k_plus}, {"kMinus", s->k_minus}, {"alpha", s->alpha}};
  } else if (const auto* t = std::get_if<TemperedPolynomial>(&spec.measure)) {
    m = {{"kind", "tempered"}, {"kPlus", t->k_plus}, {"kMinus", t->k_minus},
         {"alpha", t->alpha}, {"betaTail", t->beta_tail}};
  } else if (const auto* e = std::get_if<ExponentialDensity>(&spec.measure)) {
    m = {{"kind", "exponential"}, {"scale", e->scale}};
  } else {
    const auto& c = std::get<CustomDensity>(spec.measure);
    if (c.extra_plus || c.extra_minus) {
      throw SpecError("custom density with function-valued terms cannot be serialized");
    }
    m = {{"kind", "custom"}, {"xiPlus", write_terms(c.plus)}, {"xiMinus", write_terms(c.minus)}};
    if (c.origin_hint) {
      m["originHint"] = {{"alpha", c.origin_hint->index}, {"kPlus", c.origin_hint->k_plus},
                         {"kMinus", c.origin_hint->k_minus}};
    }
    if (c.tail_hint) {
      m["tailHint"] = {{"betaTail", c.tail_hint->index}, {"kPlus", c.tail_hint->k_plus},
                       {"kMinus", c.tail_hint->k_minus}};
    }
  }
  return {{"a", spec.a}, {"b", spec.b}, {"measure", m}};
}

LevyProcessSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
  return spec_from_json(doc);
}

LevyProcessSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

}  // namespace levy
