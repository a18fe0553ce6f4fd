#include "mirrorcone/config.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace mirrorcone {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path, msg); }

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

Int get_int(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return Int(j.get<unsigned long>());
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    Int x;
    if (!s.empty() && x.set_str(s, 10) == 0) return x;
  }
  fail(path, "expected an integer");
}

Rat get_rat(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rat(get_int(j, path));
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  if (j.is_number_float()) fail(path, "rationals are written as \"num/den\" strings");
  fail(path, "expected a rational");
}

IntVec get_intvec(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  IntVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(get_int(j[i], at(path, i)));
  return v;
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(at(path, key), "missing field");
  return *it;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) fail(at(path, k), "unknown field");
}

std::map<IntVec, Rat> get_rat_map(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object keyed by comma-joined exponents");
  std::map<IntVec, Rat> out;
  for (const auto& [k, v] : j.items()) {
    IntVec p;
    try {
      p = parse_exponent_key(k);
    } catch (const std::exception&) {
      fail(at(path, k), "bad exponent key");
    }
    out[p] = get_rat(v, at(path, k));
  }
  return out;
}

json int_json(const Int& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

json intvec_json(const IntVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(int_json(x));
  return a;
}

json rat_map_json(const std::map<IntVec, Rat>& m) {
  json o = json::object();
  for (const auto& [p, x] : m) o[exponent_key(p)] = rat_string(x);
  return o;
}

}  // namespace

std::string rat_string(const Rat& x) {
  Rat c = x;
  c.canonicalize();
  return c.get_str();
}

Rat parse_rat(const std::string& s) {
  std::size_t i = 0;
  auto digits = [&] {
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return i > start;
  };
  if (i < s.size() && s[i] == '-') ++i;
  bool ok = digits();
  bool has_den = false;
  if (ok && i < s.size() && s[i] == '/') {
    ++i;
    has_den = true;
    ok = digits();
  }
  if (!ok || i != s.size()) throw std::invalid_argument("expected \"num\" or \"num/den\", got \"" + s + "\"");
  Rat x(s, 10);
  if (has_den && x.get_den() == 0) throw std::invalid_argument("zero denominator in \"" + s + "\"");
  x.canonicalize();
  return x;
}

Config parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    fail("line " + std::to_string(line), "malformed JSON");
  }
  if (!j.is_object()) fail("", "config must be a JSON object");
  only_keys(j, {"blocks", "d", "lattice", "lambda", "v", "b_valuations", "analysis"}, "");

  Config cfg;
  ToricInput& in = cfg.input;

  const json& blocks = require(j, "blocks", "");
  if (!blocks.is_array()) fail("blocks", "expected a list of index lists");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto path = at("blocks", b);
    Block blk;
    for (const auto& x : get_intvec(blocks[b], path)) {
      if (x < 1) fail(path, "indices are 1-based");
      blk.push_back(x.get_ui() - 1);
    }
    in.blocks.push_back(std::move(blk));
  }

  in.d = get_intvec(require(j, "d", ""), "d");

  const json& lattice = require(j, "lattice", "");
  if (!lattice.is_object()) fail("lattice", "expected an object");
  only_keys(lattice, {"congruences", "generators"}, "lattice");
  if (lattice.contains("congruences") == lattice.contains("generators"))
    fail("lattice", "give exactly one of \"congruences\" and \"generators\"");
  if (lattice.contains("congruences")) {
    const json& cs = lattice["congruences"];
    if (!cs.is_array()) fail("lattice.congruences", "expected a list");
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const auto path = at("lattice.congruences", k);
      if (!cs[k].is_object()) fail(path, "expected {\"c\": [...], \"mod\": n}");
      only_keys(cs[k], {"c", "mod"}, path);
      Congruence c{get_intvec(require(cs[k], "c", path), at(path, "c")), get_int(require(cs[k], "mod", path), at(path, "mod"))};
      if (c.modulus < 1) fail(at(path, "mod"), "modulus must be positive");
      in.congruences.push_back(std::move(c));
    }
  } else {
    const json& gs = lattice["generators"];
    if (!gs.is_array() || gs.empty()) fail("lattice.generators", "expected a nonempty list of vectors");
    for (std::size_t k = 0; k < gs.size(); ++k) in.generators.push_back(get_intvec(gs[k], at("lattice.generators", k)));
  }

  if (auto it = j.find("lambda"); it != j.end()) {
    if (it->is_string()) {
      const auto s = it->get<std::string>();
      const std::string prefix = "uniform:";
      if (s.rfind(prefix, 0) != 0) fail("lambda", "expected \"uniform:<rational>\" or a map");
      in.lambda.kind = LambdaSpec::Kind::Uniform;
      in.lambda.uniform = get_rat(json(s.substr(prefix.size())), "lambda");
    } else {
      in.lambda.kind = LambdaSpec::Kind::Map;
      in.lambda.values = get_rat_map(*it, "lambda");
    }
  }
  if (auto it = j.find("v"); it != j.end()) in.v = get_intvec(*it, "v");
  if (auto it = j.find("b_valuations"); it != j.end()) in.b_valuations = get_rat_map(*it, "b_valuations");

  if (auto it = j.find("analysis"); it != j.end()) {
    if (!it->is_object()) fail("analysis", "expected an object");
    only_keys(*it, {"algebra", "cutoff", "perturb"}, "analysis");
    if (auto a = it->find("algebra"); a != it->end()) {
      if (!a->is_boolean()) fail("analysis.algebra", "expected true or false");
      cfg.flags.algebra = a->get<bool>();
    }
    if (auto c = it->find("cutoff"); c != it->end()) {
      Int x = get_int(*c, "analysis.cutoff");
      if (x < 0) fail("analysis.cutoff", "must be nonnegative");
      cfg.flags.cutoff = x.get_ui();
    }
    if (auto p = it->find("perturb"); p != it->end()) {
      Int x = get_int(*p, "analysis.perturb");
      if (x < 0) fail("analysis.perturb", "must be nonnegative");
      cfg.flags.perturb = x.get_ui();
    }
  }
  return cfg;
}

json config_to_json(const Config& cfg) {
  const ToricInput& in = cfg.input;
  json j;
  j["blocks"] = json::array();
  for (const auto& b : in.blocks) {
    json a = json::array();
    for (auto i : b) a.push_back(i + 1);
    j["blocks"].push_back(a);
  }
  j["d"] = intvec_json(in.d);
  if (!in.generators.empty()) {
    j["lattice"]["generators"] = json::array();
    for (const auto& g : in.generators) j["lattice"]["generators"].push_back(intvec_json(g));
  } else {
    j["lattice"]["congruences"] = json::array();
    for (const auto& c : in.congruences) j["lattice"]["congruences"].push_back({{"c", intvec_json(c.c)}, {"mod", int_json(c.modulus)}});
  }
  if (in.lambda.kind == LambdaSpec::Kind::Uniform) j["lambda"] = "uniform:" + rat_string(in.lambda.uniform);
  if (in.lambda.kind == LambdaSpec::Kind::Map) j["lambda"] = rat_map_json(in.lambda.values);
  if (in.v) j["v"] = intvec_json(*in.v);
  if (!in.b_valuations.empty()) j["b_valuations"] = rat_map_json(in.b_valuations);
  if (cfg.flags.algebra || cfg.flags.cutoff || cfg.flags.perturb) {
    json a = json::object();
    if (cfg.flags.algebra) a["algebra"] = true;
    if (cfg.flags.cutoff) a["cutoff"] = *cfg.flags.cutoff;
    if (cfg.flags.perturb) a["perturb"] = *cfg.flags.perturb;
    j["analysis"] = a;
  }
  return j;
}

}  // namespace mirrorcone
