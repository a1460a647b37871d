#include <doctest.h>

#include <json.hpp>

#include "warpcheck/scene.hpp"

using namespace warpcheck;
using nlohmann::json;

namespace {

const char* kSphere = R"js({
  "ambient": "euclidean(3)",
  "source": {"type": "warped", "key": "sphere(2)"},
  "checks": ["general_inequality"]
})js";

ErrorKind kind_of(const std::string& text) {
  try {
    (void)parse_scene_string(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("scene was accepted");
  return ErrorKind::invalid_input;
}

json record(const RunReport& r, std::size_t i) { return json::parse(r.records.at(i).payload_json); }

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("minimal sphere scene") {
  const SceneSpec s = parse_scene_string(kSphere);
  CHECK(s.ambient == "euclidean(3)");
  REQUIRE(s.checks.size() == 1);
  const RunReport r = run(s, {.tolerance = {}, .samples = {}, .seed = 3});
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].pass);
  CHECK(std::abs(record(r, 0)["gap"].get<double>()) < 1e-3);
  CHECK(r.exit_code() == 0);
}

TEST_CASE("parse errors carry line context") {
  try {
    (void)parse_scene_string("{\n  \"ambient\": \"euclidean(3)\",\n  \"source\": [1,,2]\n}");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("\"source\"") != std::string::npos);
  }
}

TEST_CASE("validation errors") {
  CHECK(kind_of(R"js({"ambient": "euclidean(3)", "source": {"type": "warped", "key": "sphere(2)"}, "extra": 1})js") ==
        ErrorKind::validation);
  CHECK(kind_of(R"js({"ambient": "euclidean(3)", "source": {"type": "warped", "key": "torus"}})js") == ErrorKind::validation);
  CHECK(kind_of(R"js({"ambient": "euclidean(3)", "source": {"type": "warped", "key": "sphere(2)"},
                    "checks": ["nope"]})js") == ErrorKind::validation);
  // n > 2m + 1
  CHECK(kind_of(R"js({"ambient": "sasakian-space-form(2,1)", "source": {"type": "random", "n1": 3, "n2": 3}})js") ==
        ErrorKind::validation);
  // κ = 1 with the non-Sasakian inequality
  CHECK(kind_of(R"js({"ambient": "kmu-space-form(3,1,0,1)",
                    "source": {"type": "random", "n1": 1, "n2": 1, "kind": "c-totally-real"},
                    "checks": ["non_sasakian_inequality"]})js") == ErrorKind::validation);
  // contact checks in a Euclidean ambient
  CHECK(kind_of(R"js({"ambient": "euclidean(5)", "source": {"type": "random", "n1": 1, "n2": 1},
                    "checks": ["c_totally_real"]})js") == ErrorKind::validation);
  // warped checks without a warped chart
  CHECK(kind_of(R"js({"ambient": "euclidean(5)", "source": {"type": "random", "n1": 1, "n2": 1},
                    "checks": ["laplacian_ratio"]})js") == ErrorKind::validation);
  // obstruction needs exactly one flag
  CHECK(kind_of(R"js({"ambient": "euclidean(5)", "source": {"type": "random", "n1": 1, "n2": 1},
                    "checks": [{"name": "obstruction", "harmonic": true, "eigenvalue": 1}]})js") == ErrorKind::validation);
  // sigma shape mismatch
  CHECK(kind_of(R"js({"ambient": "euclidean(3)", "source": {"type": "pointwise", "n1": 1, "n2": 1,
                    "sigma": [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]}})js") == ErrorKind::validation);
  // chart immersion in the wrong ambient
  CHECK(kind_of(R"js({"ambient": "euclidean(5)", "source": {"type": "immersion", "key": "cylinder"}})js") ==
        ErrorKind::validation);
  // warping expressions outside the catalog
  CHECK(kind_of(R"js({"ambient": "euclidean(4)", "source": {"type": "warped", "factor1": "euclidean(1)",
                    "factor2": "euclidean(2)", "warp": "sinh"}})js") == ErrorKind::validation);
  CHECK(kind_of(R"js({"ambient": "euclidean(4)", "source": {"type": "warped", "factor1": "euclidean(1)",
                    "factor2": "euclidean(2)", "warp": {"cos": 2}}})js") == ErrorKind::validation);
}

TEST_CASE("spec echo round-trips") {
  for (const char* name : {"sphere", "sphere_full", "warped_explicit", "kmu_model", "non_sasakian_random",
                           "sasakian_harmonic_c-4", "sasakian_eigen_c-3"}) {
    CAPTURE(name);
    const SceneSpec s = parse_scene(std::string(WARPCHECK_SCENE_DIR) + "/" + name + ".json");
    const std::string echo = scene_to_json(s);
    CHECK(parse_scene_string(echo) == s);
    CHECK(scene_to_json(parse_scene_string(echo)) == echo);
  }
}

TEST_CASE("missing files are parse errors") {
  CHECK_THROWS_AS(parse_scene("/nonexistent/scene.json"), Error);
}

TEST_CASE("empty check list yields a valid empty report") {
  const SceneSpec s = parse_scene_string(R"js({"ambient": "euclidean(3)", "source": {"type": "warped", "key": "sphere(2)"}})js");
  const RunReport r = run(s);
  CHECK(r.records.empty());
  const json j = json::parse(emit(r, OutputFormat::json));
  CHECK(j["records"].empty());
  CHECK(j["summary"]["pass"].get<bool>());
}

TEST_CASE("json output is deterministic and canonical") {
  const SceneSpec s = parse_scene(std::string(WARPCHECK_SCENE_DIR) + "/sphere_full.json");
  const std::string a = emit(run(s), OutputFormat::json);
  const std::string b = emit(run(s), OutputFormat::json);
  CHECK(a == b);
  CHECK(a.find("e-") != std::string::npos);
  CHECK(a.find("wall") == std::string::npos);
  const json j = json::parse(a);
  CHECK(j["environment"]["version"] == std::string(version));
  CHECK(j["environment"]["seed"] == 11);
  // a different seed moves the sampled points
  const std::string c = emit(run(s, {.tolerance = {}, .samples = {}, .seed = 12}), OutputFormat::json);
  CHECK(c != a);
}

TEST_CASE("text output has one line per check") {
  const SceneSpec s = parse_scene(std::string(WARPCHECK_SCENE_DIR) + "/sphere_full.json");
  const std::string t = emit(run(s, {.tolerance = {}, .samples = 2, .seed = {}}), OutputFormat::text);
  std::size_t lines = 0;
  for (char ch : t) lines += ch == '\n';
  CHECK(lines == s.checks.size() + 1);
  CHECK(t.rfind("general_inequality", 0) == 0);
  CHECK(t.find("PASS") != std::string::npos);
}

TEST_CASE("check errors are captured per record") {
  // generic data is not C-totally real: the specialized inequality fails, the
  // general one still runs
  const SceneSpec s = parse_scene_string(R"js({
    "ambient": "sasakian-space-form(2,1)",
    "source": {"type": "random", "n1": 1, "n2": 1},
    "checks": ["kmu_space_form_inequality", "general_inequality"],
    "samples": 3
  })js");
  const RunReport r = run(s);
  REQUIRE(r.records.size() == 2);
  CHECK_FALSE(r.records[0].pass);
  CHECK(r.records[0].error.find("invalid-configuration") != std::string::npos);
  CHECK(r.records[1].pass);
  CHECK(r.exit_code() == 1);
}

TEST_CASE("obstruction scenes") {
  struct Case {
    const char* file;
    const char* verdict;
  };
  for (const Case c : {Case{"sasakian_harmonic_c-4", "NONEXISTENCE"}, Case{"sasakian_harmonic_c-3", "WARPED_PRODUCT_IMMERSION"},
                       Case{"sasakian_eigen_c-3", "NONEXISTENCE"}}) {
    const RunReport r = run(parse_scene(std::string(WARPCHECK_SCENE_DIR) + "/" + c.file + ".json"));
    const json p = record(r, r.records.size() - 1);
    CHECK(p["verdict"] == c.verdict);
    CHECK(r.all_pass());
  }
  const RunReport miss = run(parse_scene(std::string(WARPCHECK_TEST_DATA_DIR) + "/expect_mismatch.json"));
  CHECK(miss.exit_code() == 1);
}

TEST_CASE("pointwise scenes") {
  const RunReport r = run(parse_scene(std::string(WARPCHECK_TEST_DATA_DIR) + "/pointwise_plane.json"));
  for (const CheckRecord& rec : r.records) {
    CAPTURE(rec.name);
    CAPTURE(rec.error);
    CHECK(rec.pass);
  }
}

TEST_CASE("samples aggregate into min and max") {
  const SceneSpec s = parse_scene_string(R"js({
    "ambient": "euclidean(6)",
    "source": {"type": "random", "n1": 2, "n2": 2, "scale": 0.3},
    "checks": ["general_inequality"],
    "samples": 25,
    "seed": 8
  })js");
  const RunReport r = run(s);
  const json p = record(r, 0);
  CHECK(p["samples"] == 25);
  CHECK(p["failures"] == 0);
  CHECK(p["min"]["gap"].get<double>() >= -1e-9);
  CHECK(p["min"]["gap"].get<double>() <= p["max"]["gap"].get<double>());
}

TEST_CASE("tolerance overrides") {
  SceneSpec s = parse_scene_string(kSphere);
  s.tol_finite_difference = 1e-5;
  const RunReport r = run(s);
  CHECK(r.tolerance.finite_difference == 1e-5);
  Tolerance t;
  t.algebraic = 1e-8;
  const RunReport o = run(s, {.tolerance = t, .samples = {}, .seed = {}});
  CHECK(o.tolerance.algebraic == 1e-8);
  Tolerance bad;
  bad.equality_gap = -1.0;
  CHECK_THROWS_AS(run(s, {.tolerance = bad, .samples = {}, .seed = {}}), Error);
}

TEST_CASE("catalog lists every check") {
  const std::string c = catalog_text();
  for (const std::string& name : check_names()) CHECK(c.find(name) != std::string::npos);
  CHECK(c.find("sphere-in-euclidean") != std::string::npos);
}

}
