#include "warpcheck/scene.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "warpcheck/chen.hpp"
#include "warpcheck/descriptor.hpp"

namespace warpcheck {

using json = nlohmann::json;

namespace {

// ------------------------------------------------------------ canonical JSON

void write_canonical(const json& j, std::string& out, int indent, const char* float_fmt) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::null: out += "null"; break;
    case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
    case json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, float_fmt, v);
      out += buf;
      break;
    }
    case json::value_t::string: out += j.dump(); break;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      // numeric arrays stay on one line
      bool flat = true;
      for (const json& e : j) flat = flat && e.is_primitive();
      out += "[";
      bool first = true;
      for (const json& e : j) {
        out += first ? "" : ",";
        if (flat) {
          out += first ? "" : " ";
        } else {
          out += "\n" + pad;
        }
        write_canonical(e, out, indent + 2, float_fmt);
        first = false;
      }
      out += flat ? "]" : "\n" + close_pad + "]";
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        out += first ? "\n" : ",\n";
        out += pad + json(it.key()).dump() + ": ";
        write_canonical(it.value(), out, indent + 2, float_fmt);
        first = false;
      }
      out += "\n" + close_pad + "}";
      break;
    }
    default: out += "null"; break;
  }
}

std::string canonical(const json& j, const char* float_fmt = "%.12e") {
  std::string out;
  write_canonical(j, out, 0, float_fmt);
  return out;
}

// ------------------------------------------------------------ parsing helpers

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::validation, what); }

void allow_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) invalid("unknown key '" + it.key() + "' in " + where);
}

double get_number(const json& j, const std::string& what) {
  if (!j.is_number()) invalid(what + " must be a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) invalid(what + " must be a non-negative integer");
  return j.get<std::size_t>();
}

bool get_bool(const json& j, const std::string& what) {
  if (!j.is_boolean()) invalid(what + " must be true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& what) {
  if (!j.is_string()) invalid(what + " must be a string");
  return j.get<std::string>();
}

std::vector<double> get_vector(const json& j, const std::string& what) {
  if (!j.is_array()) invalid(what + " must be an array of numbers");
  std::vector<double> v;
  for (const json& e : j) v.push_back(get_number(e, what));
  return v;
}

std::vector<std::vector<double>> get_matrix(const json& j, const std::string& what) {
  if (!j.is_array()) invalid(what + " must be an array of rows");
  std::vector<std::vector<double>> m;
  for (const json& row : j) m.push_back(get_vector(row, what));
  return m;
}

WarpFunction parse_warp(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "cos") return WarpFunction::cosine();
    if (s == "exp") return WarpFunction::exponential();
    invalid("unknown warping function '" + s + "'");
  }
  if (!j.is_object() || j.empty()) invalid("warping function must be a string or an object");
  if (j.contains("const")) {
    allow_keys(j, {"const"}, "warp");
    const double a = get_number(j["const"], "const");
    if (!(a > 0.0)) invalid("a constant warping function must be positive");
    return WarpFunction::constant(a);
  }
  if (j.contains("cos")) {
    allow_keys(j, {"cos"}, "warp");
    return WarpFunction::cosine(get_count(j["cos"], "cos coordinate"));
  }
  if (j.contains("exp")) {
    allow_keys(j, {"exp"}, "warp");
    return WarpFunction::exponential(get_count(j["exp"], "exp coordinate"));
  }
  if (j.contains("polynomial")) {
    allow_keys(j, {"polynomial", "coord"}, "warp");
    const std::size_t coord = j.contains("coord") ? get_count(j["coord"], "coord") : 0;
    return WarpFunction::polynomial(get_vector(j["polynomial"], "polynomial"), coord);
  }
  for (const char* op : {"sum", "product"}) {
    if (!j.contains(op)) continue;
    allow_keys(j, {op}, "warp");
    if (!j[op].is_array() || j[op].empty()) invalid(std::string(op) + " needs a non-empty array");
    std::vector<WarpFunction> terms;
    for (const json& t : j[op]) terms.push_back(parse_warp(t));
    return std::string(op) == "sum" ? WarpFunction::sum(std::move(terms))
                                    : WarpFunction::product(std::move(terms));
  }
  invalid("unknown warping function " + j.dump());
}

json warp_to_json(const WarpFunction& w) {
  using K = WarpFunction::Kind;
  switch (w.kind()) {
    case K::constant: return {{"const", w.constant_value()}};
    case K::cosine: return {{"cos", w.coord()}};
    case K::exponential: return {{"exp", w.coord()}};
    case K::polynomial: return {{"polynomial", w.coeffs()}, {"coord", w.coord()}};
    case K::sum:
    case K::product: {
      json terms = json::array();
      for (const WarpFunction& c : w.children()) terms.push_back(warp_to_json(c));
      return {{w.kind() == K::sum ? "sum" : "product", terms}};
    }
  }
  return nullptr;
}

// ------------------------------------------------------------ check table

struct CheckInfo {
  const char* name;
  bool needs_data;
  bool needs_warped;
  bool needs_contact;
  bool per_sample;
};

constexpr CheckInfo kChecks[] = {
    {"general_inequality", true, false, false, true},
    {"kmu_space_form_inequality", true, false, true, true},
    {"non_sasakian_inequality", true, false, true, true},
    {"decomposition", true, false, false, true},
    {"gauss_residual", true, false, false, true},
    {"mean_curvature", true, false, false, true},
    {"c_totally_real", true, false, true, true},
    {"a_xi_identity", true, false, true, true},
    {"mixed_totally_geodesic", true, false, false, true},
    {"obstruction", true, false, false, true},
    {"connection_identity", false, true, false, true},
    {"laplacian_ratio", false, true, false, true},
    {"mixed_sectional", false, true, false, true},
    {"frame_identities", false, false, true, false},
    {"km_condition", false, false, true, false},
    {"curvature_symmetries", false, false, false, false},
    {"phi_sectional", false, false, true, false},
    {"chen_lemma", false, false, false, false},
};

const CheckInfo& check_info(const std::string& name) {
  for (const CheckInfo& c : kChecks)
    if (name == c.name) return c;
  invalid("unknown check '" + name + "'");
}

const std::set<std::string> kInequalities = {"general_inequality", "kmu_space_form_inequality",
                                             "non_sasakian_inequality"};

CheckSpec parse_check(const json& j) {
  CheckSpec c;
  if (j.is_string()) {
    c.name = j.get<std::string>();
    check_info(c.name);
    return c;
  }
  if (!j.is_object() || !j.contains("name")) invalid("a check is a name or an object with \"name\"");
  c.name = get_string(j["name"], "check name");
  check_info(c.name);
  const std::string where = "check '" + c.name + "'";
  if (c.name == "obstruction") {
    allow_keys(j, {"name", "harmonic", "eigenvalue", "minimal", "inequality", "expect"}, where);
  } else if (c.name == "chen_lemma") {
    allow_keys(j, {"name", "a", "b", "expect_equality"}, where);
  } else if (kInequalities.count(c.name)) {
    allow_keys(j, {"name", "expect_equality"}, where);
  } else if (c.name == "c_totally_real" || c.name == "mixed_totally_geodesic") {
    allow_keys(j, {"name", "expect_value"}, where);
  } else {
    allow_keys(j, {"name"}, where);
  }
  if (j.contains("harmonic")) c.harmonic = get_bool(j["harmonic"], "harmonic");
  if (j.contains("eigenvalue")) c.eigenvalue = get_number(j["eigenvalue"], "eigenvalue");
  if (j.contains("minimal")) c.minimal = get_bool(j["minimal"], "minimal");
  if (j.contains("inequality")) {
    c.inequality = get_string(j["inequality"], "inequality");
    if (!kInequalities.count(*c.inequality)) invalid("unknown inequality '" + *c.inequality + "'");
  }
  if (j.contains("expect")) {
    c.expect = get_string(j["expect"], "expect");
    if (*c.expect != "NONEXISTENCE" && *c.expect != "WARPED_PRODUCT_IMMERSION" &&
        *c.expect != "UNOBSTRUCTED")
      invalid("unknown verdict '" + *c.expect + "'");
  }
  if (j.contains("expect_equality")) c.expect_equality = get_bool(j["expect_equality"], "expect_equality");
  if (j.contains("expect_value")) c.expect_value = get_bool(j["expect_value"], "expect_value");
  if (j.contains("a")) c.a = get_vector(j["a"], "a");
  if (j.contains("b")) c.b = get_number(j["b"], "b");
  if (c.name == "obstruction" && c.harmonic == c.eigenvalue.has_value())
    invalid("obstruction needs exactly one of \"harmonic\": true or \"eigenvalue\"");
  if (c.name == "chen_lemma" && c.a.size() < 2) invalid("chen_lemma needs \"a\" with at least two entries");
  return c;
}

json check_to_json(const CheckSpec& c) {
  json j = {{"name", c.name}};
  if (c.harmonic) j["harmonic"] = true;
  if (c.eigenvalue) j["eigenvalue"] = *c.eigenvalue;
  if (c.minimal) j["minimal"] = true;
  if (c.inequality) j["inequality"] = *c.inequality;
  if (c.expect) j["expect"] = *c.expect;
  if (c.expect_equality) j["expect_equality"] = *c.expect_equality;
  if (c.expect_value) j["expect_value"] = *c.expect_value;
  if (!c.a.empty()) j["a"] = c.a;
  if (c.b) j["b"] = *c.b;
  return j;
}

SourceSpec parse_source(const json& j) {
  if (!j.is_object() || !j.contains("type")) invalid("\"source\" must be an object with \"type\"");
  SourceSpec s;
  s.type = get_string(j["type"], "source type");
  if (s.type == "immersion") {
    allow_keys(j, {"type", "key", "point"}, "immersion source");
    if (!j.contains("key")) invalid("immersion source needs \"key\"");
    s.key = get_string(j["key"], "key");
  } else if (s.type == "warped") {
    allow_keys(j, {"type", "key", "factor1", "factor2", "warp", "point"}, "warped source");
    if (j.contains("key")) {
      if (j.contains("factor1") || j.contains("factor2") || j.contains("warp"))
        invalid("warped source takes either \"key\" or explicit factors, not both");
      s.key = get_string(j["key"], "key");
    } else {
      if (!j.contains("factor1") || !j.contains("factor2") || !j.contains("warp"))
        invalid("explicit warped source needs \"factor1\", \"factor2\" and \"warp\"");
      s.factor1 = get_string(j["factor1"], "factor1");
      s.factor2 = get_string(j["factor2"], "factor2");
      s.warp = parse_warp(j["warp"]);
    }
  } else if (s.type == "pointwise") {
    allow_keys(j, {"type", "n1", "n2", "frame", "sigma"}, "pointwise source");
    if (!j.contains("sigma")) invalid("pointwise source needs \"sigma\"");
    if (!j["sigma"].is_array()) invalid("sigma must be an array of matrices");
    for (const json& m : j["sigma"]) s.sigma.push_back(get_matrix(m, "sigma"));
    if (j.contains("frame")) s.frame = get_matrix(j["frame"], "frame");
  } else if (s.type == "random") {
    allow_keys(j, {"type", "n1", "n2", "kind", "scale"}, "random source");
    if (j.contains("kind")) s.kind = get_string(j["kind"], "kind");
    if (s.kind != "unconstrained" && s.kind != "equality" && s.kind != "c-totally-real" &&
        s.kind != "c-totally-real-equality")
      invalid("unknown random kind '" + s.kind + "'");
    if (j.contains("scale")) s.scale = get_number(j["scale"], "scale");
    if (!(s.scale > 0.0)) invalid("scale must be positive");
  } else if (s.type == "dplus-leaf") {
    allow_keys(j, {"type", "n1", "n2"}, "dplus-leaf source");
  } else {
    invalid("unknown source type '" + s.type + "'");
  }
  if (s.type == "pointwise" || s.type == "random" || s.type == "dplus-leaf") {
    if (!j.contains("n1") || !j.contains("n2")) invalid(s.type + " source needs \"n1\" and \"n2\"");
    s.n1 = get_count(j["n1"], "n1");
    s.n2 = get_count(j["n2"], "n2");
    if (s.n1 < 1 || s.n2 < 1) invalid("n1 and n2 must be >= 1");
  }
  if (j.contains("point")) s.point = get_vector(j["point"], "point");
  return s;
}

json source_to_json(const SourceSpec& s) {
  json j = {{"type", s.type}};
  if (!s.key.empty()) j["key"] = s.key;
  if (s.point) j["point"] = *s.point;
  if (s.type == "warped" && s.key.empty()) {
    j["factor1"] = s.factor1;
    j["factor2"] = s.factor2;
    if (s.warp) j["warp"] = warp_to_json(*s.warp);
  }
  if (s.type == "pointwise" || s.type == "random" || s.type == "dplus-leaf") {
    j["n1"] = s.n1;
    j["n2"] = s.n2;
  }
  if (s.type == "pointwise") {
    j["sigma"] = s.sigma;
    if (s.frame) j["frame"] = *s.frame;
  }
  if (s.type == "random") {
    j["kind"] = s.kind;
    j["scale"] = s.scale;
  }
  return j;
}

// ------------------------------------------------------------ materialization

Tolerance effective_tolerance(const SceneSpec& spec, const RunOptions& opts) {
  if (opts.tolerance) return *opts.tolerance;
  Tolerance t;
  if (spec.tol_algebraic) t.algebraic = *spec.tol_algebraic;
  if (spec.tol_finite_difference) t.finite_difference = *spec.tol_finite_difference;
  if (spec.tol_equality_gap) t.equality_gap = *spec.tol_equality_gap;
  return t;
}

std::optional<std::size_t> dim_hint(const SourceSpec& s) {
  if (s.type == "pointwise") {
    if (s.frame) return s.frame->size();
    return s.n1 + s.n2 + s.sigma.size();
  }
  if (s.type == "random" || s.type == "dplus-leaf") return s.n1 + s.n2 + 1;
  if (s.type == "immersion" && is_chart_immersion_key(s.key)) return immersion_catalog(s.key).ambient.dim;
  return std::nullopt;
}

bool is_dplus_key(const std::string& key) { return parse_descriptor(key).name == "dplus-leaf"; }

// Warped charts with a standard embedding into the given Euclidean ambient.
std::optional<std::string> standard_embedding(const std::string& warped_key, const std::string& ambient) {
  const Descriptor a = parse_descriptor(ambient);
  if (a.name != "euclidean" || a.args.size() != 1) return std::nullopt;
  const std::size_t N = descriptor_count(a, 0, 0);
  const Descriptor w = parse_descriptor(warped_key);
  if (w.name == "sphere" && descriptor_count(w, 0, 2) + 1 == N)
    return "sphere-in-euclidean(" + std::to_string(N - 1) + ")";
  if (w.name == "flat-product" && descriptor_count(w, 0, 1) == 1 && descriptor_count(w, 1, 1) == 1 && N == 3)
    return "plane";
  return std::nullopt;
}

struct Context {
  Ambient ambient;
  std::optional<ChartImmersion> chart;         // immersion source with a chart key
  std::optional<CatalogChart> warped;          // warped source
  Tolerance tol;
};

Context make_context(const SceneSpec& spec, const Tolerance& tol) {
  Context ctx;
  ctx.tol = tol;
  ctx.ambient = make_ambient(spec.ambient, dim_hint(spec.source));
  const SourceSpec& s = spec.source;
  if (s.type == "immersion" && !is_dplus_key(s.key)) {
    ctx.chart = immersion_catalog(s.key);
  } else if (s.type == "warped") {
    if (!s.key.empty()) {
      ctx.warped = warped_catalog(s.key);
      if (const auto key = standard_embedding(s.key, spec.ambient)) ctx.chart = immersion_catalog(*key);
    } else {
      CatalogChart cc;
      cc.chart.factor1 = factor_metric(s.factor1);
      cc.chart.factor2 = factor_metric(s.factor2);
      cc.chart.warp = s.warp->as_function();
      cc.chart.name = "explicit";
      if (s.warp->max_coord() >= cc.chart.n1())
        invalid("warping function refers to a coordinate outside the first factor");
      cc.lo = Vec(cc.chart.dim(), -0.5);
      cc.hi = Vec(cc.chart.dim(), 0.5);
      ctx.warped = std::move(cc);
    }
  }
  return ctx;
}

struct Instance {
  std::optional<PointwiseImmersionData> data;
  const WarpedProductChart* warped = nullptr;
  Vec point;
  bool chart = false;
  double chart_lhs = 0.0;
};

PointwiseImmersionData pointwise_data(const SourceSpec& s, const Ambient& ambient) {
  PointwiseImmersionData d;
  d.n1 = s.n1;
  d.n2 = s.n2;
  d.ambient_dim = ambient.dim;
  d.oracle = ambient.oracle;
  d.contact = ambient.contact;
  d.frame = Mat::identity(ambient.dim);
  if (s.frame) {
    if (s.frame->size() != ambient.dim) invalid("frame must have ambient_dim rows");
    for (std::size_t i = 0; i < ambient.dim; ++i) {
      if ((*s.frame)[i].size() != ambient.dim) invalid("frame must be square");
      for (std::size_t j = 0; j < ambient.dim; ++j) d.frame(i, j) = (*s.frame)[i][j];
    }
  }
  const std::size_t n = s.n1 + s.n2;
  for (const auto& m : s.sigma) {
    Mat sm(n, n);
    if (m.size() != n) invalid("each sigma matrix must be n x n");
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i].size() != n) invalid("each sigma matrix must be n x n");
      for (std::size_t j = 0; j < n; ++j) sm(i, j) = m[i][j];
    }
    d.sigma.push_back(std::move(sm));
  }
  return d;
}

Instance materialize(const SceneSpec& spec, const Context& ctx, Rng& rng) {
  const SourceSpec& s = spec.source;
  Instance in;
  const FdSteps steps{ctx.tol.finite_difference, 10.0 * ctx.tol.finite_difference};
  if (s.type == "immersion" || ctx.chart) {
    if (!ctx.chart) {
      const std::size_t m = ctx.ambient.contact->m;
      in.data = dplus_leaf(ctx.ambient, 1, m - 1);
      return in;
    }
    const ChartImmersion& im = *ctx.chart;
    in.point = s.point ? Vec(*s.point) : random_in_box(rng, im.lo, im.hi);
    in.data = second_fundamental_form(im, in.point.span(), steps);
    in.chart = true;
    in.chart_lhs = chart_laplacian_ratio(im, in.point.span(), ctx.tol.finite_difference);
    if (im.warped) in.warped = &*im.warped;
  } else if (s.type == "warped") {
    in.warped = &ctx.warped->chart;
    in.point = s.point ? Vec(*s.point) : random_in_box(rng, ctx.warped->lo, ctx.warped->hi);
    in.chart = true;
  } else if (s.type == "pointwise") {
    in.data = pointwise_data(s, ctx.ambient);
  } else if (s.type == "random") {
    if (s.kind == "unconstrained") {
      in.data = random_immersion_data(rng, s.n1, s.n2, ctx.ambient, s.scale);
    } else if (s.kind == "equality") {
      in.data = equality_immersion_data(rng, s.n1, s.n2, ctx.ambient, s.scale);
    } else {
      in.data = c_totally_real_data(rng, s.n1, s.n2, ctx.ambient, s.kind == "c-totally-real-equality",
                                    s.scale);
    }
  } else {
    in.data = dplus_leaf(ctx.ambient, s.n1, s.n2);
  }
  return in;
}

bool deterministic_source(const SourceSpec& s) {
  if (s.type == "pointwise" || s.type == "dplus-leaf") return true;
  if (s.type == "immersion" && is_dplus_key(s.key)) return true;
  return (s.type == "immersion" || s.type == "warped") && s.point.has_value();
}

void validate_scene(const SceneSpec& spec) {
  try {
    const Tolerance tol = effective_tolerance(spec, {});
    tol.validate();
    Context ctx = make_context(spec, tol);
    const SourceSpec& s = spec.source;
    const Ambient& a = ctx.ambient;
    const std::size_t n = s.n1 + s.n2;

    if (s.type == "immersion") {
      if (ctx.chart) {
        if (parse_descriptor(spec.ambient).name != "euclidean" || a.dim != ctx.chart->ambient.dim)
          invalid("chart immersion '" + s.key + "' lives in euclidean(" +
                  std::to_string(ctx.chart->ambient.dim) + ")");
        if (s.point && s.point->size() != ctx.chart->source_dim) invalid("point has the wrong dimension");
      } else {
        const NamedPointwise named = pointwise_catalog(s.key);
        if (!a.contact || a.contact->m != named.ambient.contact->m ||
            a.contact->kappa != named.ambient.contact->kappa || a.contact->mu != named.ambient.contact->mu)
          invalid("ambient does not match the parameters of '" + s.key + "'");
      }
    }
    if (s.type == "warped" && s.point && s.point->size() != ctx.warped->chart.dim())
      invalid("point has the wrong dimension");
    if (s.type == "pointwise" || s.type == "random" || s.type == "dplus-leaf") {
      if (n >= a.dim)
        invalid("n = n1 + n2 = " + std::to_string(n) + " must be below the ambient dimension " +
                std::to_string(a.dim));
    }
    if (s.type == "pointwise") validate(pointwise_data(s, a), 1e-8);
    const bool ctr_source = s.type == "dplus-leaf" || s.kind.rfind("c-totally-real", 0) == 0;
    if ((s.type == "dplus-leaf" || (s.type == "random" && ctr_source))) {
      if (!a.contact) invalid("C-totally real sources need a contact ambient");
      if (n > a.contact->m) invalid("C-totally real sources need n <= m");
    }

    const bool has_data = s.type != "warped" || ctx.chart.has_value();
    const bool has_warped = s.type == "warped" || (ctx.chart && ctx.chart->warped);
    for (const CheckSpec& c : spec.checks) {
      const CheckInfo& info = check_info(c.name);
      if (info.needs_data && !has_data) invalid("check '" + c.name + "' needs immersion data");
      if (info.needs_warped && !has_warped) invalid("check '" + c.name + "' needs a warped chart");
      if (info.needs_contact && !a.contact) invalid("check '" + c.name + "' needs a contact ambient");
      const std::string ineq = c.name == "obstruction" && c.inequality ? *c.inequality : c.name;
      if (ineq == "kmu_space_form_inequality" && !a.c)
        invalid("kmu_space_form_inequality needs an ambient with phi-sectional curvature c");
      if (ineq == "non_sasakian_inequality") {
        if (!a.contact) invalid("non_sasakian_inequality needs a contact ambient");
        if (a.contact->kappa > 1.0 - 1e-8)
          invalid("singular parameter: non_sasakian_inequality needs kappa < 1");
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::validation || e.kind() == ErrorKind::parse) throw;
    throw Error(ErrorKind::validation, e.what());
  }
}

// ------------------------------------------------------------ checks

struct Outcome {
  bool pass = false;
  json payload = json::object();
};

json report_payload(const InequalityReport& r) {
  json p = json::object();
  for (const auto& [k, v] : r.values) p[k] = v;
  p["lhs_source"] = r.lhs_source;
  p["equality"] = r.equality;
  p["holds"] = r.holds;
  p["mixed_totally_geodesic"] = r.diagnostics.mixed_totally_geodesic;
  p["partial_mean_equal"] = r.diagnostics.partial_mean_equal;
  p["equality_consistent"] = r.equality_consistent();
  return p;
}

InequalityOptions inequality_options(const Instance& in, const Tolerance& tol) {
  if (in.chart) {
    const double t = 10.0 * tol.finite_difference;
    return {t, t, t};
  }
  return {tol.equality_gap, tol.equality_gap, 10.0 * tol.algebraic};
}

InequalityReport inequality_by_name(const std::string& name, const Instance& in, const Context& ctx) {
  const LhsSource lhs = in.chart ? LhsSource::chart(in.chart_lhs) : LhsSource::tau_proxy();
  const InequalityOptions opts = inequality_options(in, ctx.tol);
  if (name == "kmu_space_form_inequality") return kmu_space_form_inequality(*in.data, *ctx.ambient.c, lhs, opts);
  if (name == "non_sasakian_inequality") return non_sasakian_inequality(*in.data, lhs, opts);
  return general_inequality(*in.data, lhs, opts);
}

std::string default_inequality(const Ambient& a) {
  if (a.oracle.kind() == OracleKind::non_sasakian_kmu) return "non_sasakian_inequality";
  if (a.contact && a.c) return "kmu_space_form_inequality";
  return "general_inequality";
}

double scale_of(std::initializer_list<double> xs) {
  double s = 1.0;
  for (double x : xs) s = std::max(s, std::abs(x));
  return s;
}

Outcome run_data_check(const CheckSpec& c, const Instance& in, const Context& ctx) {
  const Tolerance& tol = ctx.tol;
  Outcome o;
  if (kInequalities.count(c.name)) {
    const InequalityReport r = inequality_by_name(c.name, in, ctx);
    o.payload = report_payload(r);
    o.pass = r.holds;
    if (r.values.count("specialization_residual"))
      o.pass = o.pass && r.value("specialization_residual") <= 1e-9 * scale_of({r.rhs});
    if (c.expect_equality) o.pass = o.pass && r.equality == *c.expect_equality;
    return o;
  }
  const PointwiseImmersionData& d = *in.data;
  if (c.name == "decomposition") {
    const ProofDecomposition p = decompose(d);
    const double t = 1e-9 * scale_of({p.norm_H2 * static_cast<double>(d.n() * d.n()), p.sigma_norm2, p.delta});
    o.payload = {{"delta", p.delta},
                 {"a1", p.a1},
                 {"a2", p.a2},
                 {"a3", p.a3},
                 {"b", p.b},
                 {"a_i_residual", p.a_i_residual},
                 {"h_delta_sigma_residual", p.h_delta_sigma_residual},
                 {"lemma_margin", p.lemma_margin},
                 {"ab_lhs", p.ab_lhs},
                 {"ab_rhs", p.ab_rhs},
                 {"trace_balance", p.trace_balance},
                 {"lemma_equality", std::abs(p.trace_balance) < tol.equality_gap},
                 {"h_defined_direction", p.h_defined_direction}};
    o.pass = std::abs(p.a_i_residual) <= t && std::abs(p.h_delta_sigma_residual) <= t &&
             p.lemma_margin >= -t && std::abs(p.lemma_margin - 2.0 * (p.ab_lhs - p.ab_rhs)) <= t;
    return o;
  }
  if (c.name == "gauss_residual") {
    const bool chart = d.intrinsic.has_value();
    const GaussReport g = gauss_residual(d, chart ? IntrinsicSource::chart : IntrinsicSource::gauss);
    o.payload = {{"intrinsic_source", chart ? "chart" : "gauss"},
                 {"max_gauss", g.max_gauss},
                 {"max_kij", g.max_kij},
                 {"tau_identity", g.tau_identity},
                 {"tau", g.tau},
                 {"tau_ambient", g.tau_ambient},
                 {"norm_H2", g.norm_H2},
                 {"sigma_norm2", g.sigma_norm2}};
    const double t = chart ? tol.finite_difference : tol.algebraic * scale_of({g.sigma_norm2, g.tau});
    o.pass = g.max() < t;
    return o;
  }
  if (c.name == "mean_curvature") {
    const MeanCurvatureRecord m = mean_curvatures(d);
    o.payload = {{"norm_H", m.norm_H},
                 {"norm_H1", m.norm_H1},
                 {"norm_H2", m.norm_H2},
                 {"additivity_residual", m.additivity_residual}};
    o.pass = m.additivity_residual <= 1e-12 * scale_of({static_cast<double>(d.n()) * m.norm_H});
    return o;
  }
  if (c.name == "c_totally_real") {
    const CTotallyRealReport r = is_C_totally_real(d, in.chart ? tol.finite_difference : tol.algebraic);
    const bool dims_ok = !r.value || d.n() <= d.contact->m;
    o.payload = {{"value", r.value},
                 {"xi_tangential", r.xi_tangential},
                 {"phi_tangential", r.phi_tangential},
                 {"dimension_consistent", dims_ok}};
    o.pass = dims_ok && r.value == c.expect_value.value_or(true);
    return o;
  }
  if (c.name == "a_xi_identity") {
    const AXiReport a = a_xi_identity(d);
    o.payload = {{"residual", a.residual},
                 {"trace_h", a.h.trace},
                 {"trace_h_1", a.h.trace1},
                 {"trace_h_2", a.h.trace2},
                 {"norm2_h_1", a.h.norm2_1},
                 {"norm2_h_2", a.h.norm2_2},
                 {"trace_a_xi", a.a.trace},
                 {"trace_a_xi_1", a.a.trace1},
                 {"trace_a_xi_2", a.a.trace2},
                 {"norm2_a_xi_1", a.a.norm2_1},
                 {"norm2_a_xi_2", a.a.norm2_2}};
    o.pass = a.residual < (in.chart ? 1e-6 : 10.0 * tol.algebraic);
    o.payload["realizable"] = o.pass;
    return o;
  }
  if (c.name == "mixed_totally_geodesic") {
    const double t = in.chart ? 10.0 * tol.finite_difference : tol.algebraic;
    const double res = mixed_residual(d);
    o.payload = {{"value", res < t}, {"mixed_residual", res}};
    o.pass = (res < t) == c.expect_value.value_or(true);
    return o;
  }
  if (c.name == "obstruction") {
    const std::string which = c.inequality.value_or(default_inequality(ctx.ambient));
    const InequalityReport r = inequality_by_name(which, in, ctx);
    ObstructionFlags flags;
    flags.harmonic = c.harmonic;
    flags.eigenvalue = c.eigenvalue;
    flags.minimal = c.minimal;
    flags.tol = in.chart ? 10.0 * tol.finite_difference : tol.equality_gap;
    const ObstructionResult res = obstruction_check(r, flags);
    const std::string verdict(to_string(res.verdict));
    o.payload = {{"verdict", verdict},
                 {"inequality", which},
                 {"implied_lhs", res.implied_lhs},
                 {"rhs_curvature", res.rhs_curvature},
                 {"reason", res.reason}};
    o.pass = !c.expect || *c.expect == verdict;
    return o;
  }
  throw Error(ErrorKind::validation, "unhandled check '" + c.name + "'");
}

Outcome run_warped_check(const CheckSpec& c, const Instance& in, const Context& ctx, Rng& rng) {
  const WarpedProductChart& wp = *in.warped;
  const double fd = ctx.tol.finite_difference;
  const std::span<const double> x = in.point.span();
  Outcome o;
  if (c.name == "laplacian_ratio") {
    const LaplacianRatioReport r = check_laplacian_ratio(wp, x, {fd, 10.0 * fd});
    o.payload = {{"laplacian_ratio", r.laplacian_ratio},
                 {"per_fibre_sums", r.per_fibre_sums},
                 {"max_deviation", r.max_deviation},
                 {"max_pairwise", r.max_pairwise}};
    o.pass = r.max_deviation < 10.0 * fd;
    return o;
  }
  const Mat g = build_metric(wp).at(x);
  auto unit = [&](Vec v) { return (1.0 / std::sqrt(dot(v, g * v))) * v; };
  Vec X(wp.dim()), Z(wp.dim());
  for (std::size_t i = 0; i < wp.n1(); ++i) X[i] = random_gaussian(rng, 1)[0];
  for (std::size_t i = wp.n1(); i < wp.dim(); ++i) Z[i] = random_gaussian(rng, 1)[0];
  X = unit(X);
  Z = unit(Z);
  if (c.name == "connection_identity") {
    const double r = check_connection_identity(wp, x, X, Z, fd);
    o.payload = {{"residual", r}};
    o.pass = r < 10.0 * fd;
    return o;
  }
  const double k_formula = mixed_sectional(wp, x, X, Z, fd);
  const double k_chart = sectional_curvature(riemann(build_metric(wp), x, {fd, 10.0 * fd}), X, Z);
  o.payload = {{"mixed_sectional", k_formula},
               {"chart_sectional", k_chart},
               {"residual", std::abs(k_formula - k_chart)}};
  o.pass = std::abs(k_formula - k_chart) < 10.0 * fd;
  return o;
}

Outcome run_ambient_check(const CheckSpec& c, const Context& ctx, Rng& rng) {
  const Ambient& a = ctx.ambient;
  const double alg = ctx.tol.algebraic;
  Outcome o;
  if (c.name == "chen_lemma") {
    const double b = c.b.value_or(admissible_b(c.a));
    const LemmaResult r = chen_lemma(c.a, b, alg);
    o.payload = {{"b", b},
                 {"constraint_residual", r.constraint_residual},
                 {"margin", r.margin},
                 {"tail_residual", r.tail_residual},
                 {"holds", r.holds},
                 {"equality", r.equality}};
    o.pass = r.holds && (!c.expect_equality || *c.expect_equality == r.equality);
    return o;
  }
  if (c.name == "curvature_symmetries") {
    Rng probe = rng;
    double size = 1.0;
    for (int i = 0; i < 100; ++i) {
      const Vec X = random_gaussian(probe, a.dim), Y = random_gaussian(probe, a.dim);
      size = std::max(size, std::abs(a.oracle(X, Y, random_gaussian(probe, a.dim), random_gaussian(probe, a.dim))));
    }
    const SymmetryResiduals s = oracle_symmetries(a.oracle, rng, 1000);
    o.payload = {{"antisym_first", s.antisym_first},
                 {"antisym_second", s.antisym_second},
                 {"pair", s.pair},
                 {"bianchi", s.bianchi},
                 {"scale", size}};
    o.pass = s.max() < alg * size;
    return o;
  }
  const ContactFrame& cf = *a.contact;
  const double pscale = scale_of({cf.kappa, cf.mu, a.c.value_or(0.0)});
  if (c.name == "frame_identities") {
    const FrameResiduals r = frame_residuals(cf);
    o.payload = {{"max_residual", r.max()}, {"phi_squared", r.phi_squared}, {"h_squared", r.h_squared},
                 {"h_phi_anticommute", r.h_phi_anticommute}, {"metric_compatible", r.metric_compatible}};
    o.pass = r.max() < alg * pscale;
    return o;
  }
  if (c.name == "km_condition") {
    const double r = check_km_condition(a.oracle, cf);
    o.payload = {{"residual", r}};
    o.pass = r < alg * pscale;
    return o;
  }
  // phi_sectional
  std::optional<double> expected = a.c;
  if (!expected && std::abs(cf.mu - (cf.kappa + 1.0)) < 1e-12) expected = -2.0 * cf.kappa - 1.0;
  double lo = 1e300, hi = -1e300, worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Vec X = random_gaussian(rng, a.dim);
    X -= dot(cf.xi, X) * cf.xi;
    X *= 1.0 / norm(X);
    const double k = phi_sectional(a.oracle, cf, X, 1e-9);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
    if (expected) worst = std::max(worst, std::abs(k - *expected));
  }
  o.payload = {{"min", lo}, {"max", hi}, {"spread", hi - lo}};
  if (expected) {
    o.payload["expected"] = *expected;
    o.payload["max_deviation"] = worst;
  }
  o.pass = !expected || worst < alg * scale_of({*expected});
  return o;
}

// Folds per-sample outcomes into one record.
struct Aggregate {
  std::size_t count = 0;
  std::size_t failures = 0;
  std::optional<std::size_t> first_failure;
  std::string first_error;
  json last;
  std::map<std::string, double> min, max;
  std::map<std::string, std::size_t> true_counts;
  std::map<std::string, std::map<std::string, std::size_t>> strings;

  void add(std::size_t sample, const Outcome& o) {
    ++count;
    if (!o.pass) {
      ++failures;
      if (!first_failure) first_failure = sample;
    }
    last = o.payload;
    for (auto it = o.payload.begin(); it != o.payload.end(); ++it) {
      const json& v = it.value();
      if (v.is_boolean()) {
        true_counts[it.key()] += v.get<bool>() ? 1 : 0;
      } else if (v.is_number()) {
        const double x = v.get<double>();
        auto [mi, fresh] = min.emplace(it.key(), x);
        if (!fresh) mi->second = std::min(mi->second, x);
        auto [ma, fresh2] = max.emplace(it.key(), x);
        if (!fresh2) ma->second = std::max(ma->second, x);
      } else if (v.is_string()) {
        ++strings[it.key()][v.get<std::string>()];
      }
    }
  }

  void add_error(std::size_t sample, const Error& e) {
    ++count;
    ++failures;
    if (!first_failure) first_failure = sample;
    if (first_error.empty()) first_error = e.what();
  }

  json payload() const {
    if (count == 1) return last.is_null() ? json::object() : last;
    json p = {{"samples", count}, {"failures", failures}};
    if (first_failure) p["first_failure"] = *first_failure;
    if (!min.empty()) p["min"] = min;
    if (!max.empty()) p["max"] = max;
    if (!true_counts.empty()) p["true_counts"] = true_counts;
    if (!strings.empty()) p["string_counts"] = strings;
    return p;
  }
};

}  // namespace

// ------------------------------------------------------------ public API

std::vector<std::string> check_names() {
  std::vector<std::string> names;
  for (const CheckInfo& c : kChecks) names.emplace_back(c.name);
  return names;
}

SceneSpec parse_scene_string(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1, start = 0;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
        start = i + 1;
      } else {
        ++col;
      }
    }
    const std::size_t end = text.find('\n', start);
    const std::string context(text.substr(start, end == std::string_view::npos ? end : end - start));
    throw Error(ErrorKind::parse, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                      ": " + context);
  }
  if (!j.is_object()) throw Error(ErrorKind::validation, "a scene must be a JSON object");
  allow_keys(j, {"ambient", "source", "checks", "tolerances", "samples", "seed"}, "scene");
  if (!j.contains("ambient") || !j.contains("source")) invalid("a scene needs \"ambient\" and \"source\"");

  SceneSpec s;
  s.ambient = get_string(j["ambient"], "ambient");
  s.source = parse_source(j["source"]);
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) invalid("\"checks\" must be an array");
    for (const json& c : j["checks"]) s.checks.push_back(parse_check(c));
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) invalid("\"tolerances\" must be an object");
    allow_keys(t, {"algebraic", "finite_difference", "equality_gap"}, "tolerances");
    if (t.contains("algebraic")) s.tol_algebraic = get_number(t["algebraic"], "algebraic");
    if (t.contains("finite_difference")) s.tol_finite_difference = get_number(t["finite_difference"], "finite_difference");
    if (t.contains("equality_gap")) s.tol_equality_gap = get_number(t["equality_gap"], "equality_gap");
  }
  if (j.contains("samples")) {
    s.samples = get_count(j["samples"], "samples");
    if (*s.samples < 1) invalid("samples must be >= 1");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) invalid("seed must be an integer");
    if (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() < 0) invalid("seed must be non-negative");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  validate_scene(s);
  return s;
}

SceneSpec parse_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open scene file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene_string(ss.str());
}

std::string scene_to_json(const SceneSpec& spec) {
  json j = {{"ambient", spec.ambient}, {"source", source_to_json(spec.source)}};
  json checks = json::array();
  for (const CheckSpec& c : spec.checks) checks.push_back(check_to_json(c));
  j["checks"] = checks;
  json tol = json::object();
  if (spec.tol_algebraic) tol["algebraic"] = *spec.tol_algebraic;
  if (spec.tol_finite_difference) tol["finite_difference"] = *spec.tol_finite_difference;
  if (spec.tol_equality_gap) tol["equality_gap"] = *spec.tol_equality_gap;
  if (!tol.empty()) j["tolerances"] = tol;
  if (spec.samples) j["samples"] = *spec.samples;
  if (spec.seed) j["seed"] = *spec.seed;
  return canonical(j, "%.17g") + "\n";
}

bool RunReport::all_pass() const {
  for (const CheckRecord& r : records)
    if (!r.pass) return false;
  return true;
}

int RunReport::exit_code() const { return all_pass() ? 0 : 1; }

RunReport run(const SceneSpec& spec, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.tolerance = effective_tolerance(spec, options);
  report.tolerance.validate();
  report.seed = options.seed.value_or(spec.seed.value_or(0));
  report.samples = options.samples.value_or(spec.samples.value_or(1));
  if (report.samples < 1) throw Error(ErrorKind::validation, "samples must be >= 1");
  report.ambient = spec.ambient;

  const Context ctx = make_context(spec, report.tolerance);
  report.notes = ctx.ambient.notes;
  std::size_t data_samples = report.samples;
  if (deterministic_source(spec.source) && data_samples > 1) {
    report.notes.push_back("source is deterministic; sample-level checks run once");
    data_samples = 1;
  }

  std::vector<Aggregate> agg(spec.checks.size());
  for (std::size_t k = 0; k < data_samples; ++k) {
    Rng rng = derive_rng(report.seed, k);
    std::optional<Instance> inst;
    std::optional<Error> source_error;
    for (std::size_t ci = 0; ci < spec.checks.size(); ++ci) {
      const CheckSpec& c = spec.checks[ci];
      const CheckInfo& info = check_info(c.name);
      if (!info.per_sample) continue;
      if (!inst && !source_error) {
        try {
          inst = materialize(spec, ctx, rng);
        } catch (const Error& e) {
          source_error = e;
        }
      }
      if (source_error) {
        agg[ci].add_error(k, *source_error);
        continue;
      }
      try {
        if (info.needs_warped) {
          Rng check_rng = derive_rng(report.seed ^ 0x5bd1e995ULL, k * spec.checks.size() + ci);
          agg[ci].add(k, run_warped_check(c, *inst, ctx, check_rng));
        } else {
          agg[ci].add(k, run_data_check(c, *inst, ctx));
        }
      } catch (const Error& e) {
        agg[ci].add_error(k, e);
      }
    }
  }
  for (std::size_t ci = 0; ci < spec.checks.size(); ++ci) {
    const CheckSpec& c = spec.checks[ci];
    if (check_info(c.name).per_sample) continue;
    Rng rng = derive_rng(report.seed ^ 0xa5a5a5a5ULL, ci);
    try {
      agg[ci].add(0, run_ambient_check(c, ctx, rng));
    } catch (const Error& e) {
      agg[ci].add_error(0, e);
    }
  }

  for (std::size_t ci = 0; ci < spec.checks.size(); ++ci) {
    CheckRecord rec;
    rec.name = spec.checks[ci].name;
    rec.pass = agg[ci].failures == 0 && agg[ci].count > 0;
    rec.error = agg[ci].first_error;
    rec.payload_json = canonical(agg[ci].payload());
    report.records.push_back(std::move(rec));
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string emit(const RunReport& report, OutputFormat format) {
  if (format == OutputFormat::json) {
    json records = json::array();
    std::size_t failed = 0;
    for (const CheckRecord& r : report.records) {
      json rec = {{"name", r.name}, {"pass", r.pass}, {"payload", json::parse(r.payload_json)}};
      if (!r.error.empty()) rec["error"] = r.error;
      records.push_back(rec);
      failed += r.pass ? 0 : 1;
    }
    json env = {{"ambient", report.ambient},
                {"seed", report.seed},
                {"samples", report.samples},
                {"version", std::string(version)},
                {"tolerances",
                 {{"algebraic", report.tolerance.algebraic},
                  {"finite_difference", report.tolerance.finite_difference},
                  {"equality_gap", report.tolerance.equality_gap}}}};
    if (!report.notes.empty()) env["notes"] = report.notes;
    const json j = {{"environment", env},
                    {"records", records},
                    {"summary", {{"checks", report.records.size()}, {"failed", failed}, {"pass", failed == 0}}}};
    return canonical(j) + "\n";
  }

  std::ostringstream out;
  std::size_t width = 5;
  for (const CheckRecord& r : report.records) width = std::max(width, r.name.size());
  for (const CheckRecord& r : report.records) {
    const json p = json::parse(r.payload_json);
    std::string gap = "-";
    char buf[64];
    if (p.contains("gap") && p["gap"].is_number()) {
      std::snprintf(buf, sizeof buf, "%.6e", p["gap"].get<double>());
      gap = buf;
    } else if (p.contains("min") && p["min"].contains("gap")) {
      std::snprintf(buf, sizeof buf, "min %.6e", p["min"]["gap"].get<double>());
      gap = buf;
    }
    out << r.name << std::string(width - r.name.size() + 2, ' ') << (r.pass ? "PASS" : "FAIL") << "  "
        << gap;
    if (p.contains("verdict")) out << "  " << p["verdict"].get<std::string>();
    if (!r.error.empty()) out << "  error: " << r.error;
    out << "\n";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu checks, %s, seed %llu, %.1f ms\n", report.records.size(),
                report.all_pass() ? "all pass" : "FAILURES", static_cast<unsigned long long>(report.seed),
                report.wall_time_ms);
  out << buf;
  return out.str();
}

std::string catalog_text() {
  std::ostringstream out;
  out << "ambients:\n";
  for (const std::string& k : ambient_catalog_keys()) out << "  " << k << "\n";
  out << "immersions:\n";
  for (const std::string& k : immersion_catalog_keys()) out << "  " << k << "\n";
  out << "warped charts:\n";
  for (const std::string& k : warped_catalog_keys()) out << "  " << k << "\n";
  out << "factor metrics:\n  euclidean(k)\n  round-sphere(k)\n";
  out << "warping functions:\n  {\"const\": a}  {\"cos\": k}  {\"exp\": k}  "
         "{\"polynomial\": [c0, c1, ...], \"coord\": k}  {\"sum\": [...]}  {\"product\": [...]}\n";
  out << "checks:\n";
  for (const std::string& k : check_names()) out << "  " << k << "\n";
  return out.str();
}

}  // namespace warpcheck
