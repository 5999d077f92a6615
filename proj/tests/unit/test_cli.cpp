#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "rbez/cli.hpp"
#include "rbez/element.hpp"
#include "rbez/errors.hpp"
#include "rbez/family.hpp"
#include "rbez/mesh_io.hpp"

using namespace rbez;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run rbez_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rbez");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("rbez_unit_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("mesh json round trip") {
    const Mesh a = annulus_seed();
    const Mesh b = mesh_from_json(mesh_to_json(a));
    REQUIRE(b.elements.size() == a.elements.size());
    CHECK(b.kind == a.kind);
    CHECK(b.fixed == a.fixed);
    for (std::size_t n = 0; n < a.elements.size(); ++n) {
      CHECK(b.elements[n].points == a.elements[n].points);
      CHECK(b.elements[n].weights == a.elements[n].weights);
    }
    const Mesh t = mesh_from_json(mesh_to_json(chamfer_seed()));
    CHECK(t.kind == ElementKind::simplex(2, 3));
  }

  TEST_CASE("malformed meshes") {
    nlohmann::json j = mesh_to_json(plate_seed());
    j["elements"][0]["weights"][0] = -1.0;
    CHECK_THROWS_AS(mesh_from_json(j), InputError);
    j = mesh_to_json(plate_seed());
    j["elements"][0]["points"].erase(0);
    CHECK_THROWS_AS(mesh_from_json(j), InputError);
    CHECK_THROWS_AS(mesh_from_json(nlohmann::json::parse("{\"dimension\":2}")), InputError);
  }

  TEST_CASE("family files") {
    const fs::path d = scratch("family");
    const MeshFamily f = uniform_family(plate_seed(), 2);
    const fs::path manifest = write_family(d, f);
    const MeshFamily g = read_family(manifest);
    REQUIRE(g.meshes.size() == 2);
    CHECK(g.h == f.h);
    CHECK(g.meshes[1].elements[3].points == f.meshes[1].elements[3].points);
    CHECK(format_number(0.1) == "0.10000000000000001");
  }

  TEST_CASE("stencil command") {
    const Run r = rbez_cli({"stencil", "--topology", "simplex", "--d", "2", "--p", "3", "--alpha", "3,0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("{\"scale\":6,\"taps\":{\"(0,0)\":-1,\"(1,0)\":3,\"(2,0)\":-3,\"(3,0)\":1}}") !=
          std::string::npos);
  }

  TEST_CASE("metrics command") {
    const fs::path d = scratch("metrics");
    write_mesh(d / "sq.json", uniform_family(testing::single(identity_element(ElementKind::tensor_uniform(2, 2))), 2)
                                  .meshes[1]);
    const Run r = rbez_cli({"metrics", (d / "sq.json").string(), "--order", "2", "--out", (d / "r.json").string()});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(d / "r.json"));
    REQUIRE(j["elements"].size() == 4);
    for (const auto& e : j["elements"]) CHECK(e["scaled_jacobian"].get<double>() == doctest::Approx(1.0));
  }

  TEST_CASE("refine and certify") {
    const fs::path d = scratch("certify");
    write_mesh(d / "seed.json", testing::single(identity_element(ElementKind::tensor_uniform(2, 3))));
    REQUIRE(rbez_cli({"refine", (d / "seed.json").string(), "--scheme", "uniform", "--levels", "3", "--out",
                      (d / "fam").string()})
                .code == 0);
    const std::string manifest = (d / "fam" / "manifest.json").string();
    CHECK(rbez_cli({"certify", manifest, "--cmax", "1.01", "--cproj", "2", "--cweight", "1.01", "--sigma0", "1.5"})
              .code == 0);
    CHECK(rbez_cli({"certify", manifest, "--cmax", "1.01", "--cproj", "2", "--cweight", "1.01", "--sigma0", "1.2"})
              .code == 3);
  }

  TEST_CASE("converge and optimize commands") {
    const fs::path d = scratch("converge");
    write_mesh(d / "seed.json", plate_seed());
    REQUIRE(rbez_cli({"refine", (d / "seed.json").string(), "--scheme", "pert1", "--levels", "2", "--out",
                      (d / "fam").string()})
                .code == 0);
    const Run c = rbez_cli({"converge", (d / "fam" / "manifest.json").string(), "--solution", "plate"});
    CHECK(c.code == 0);
    CHECK(c.out.rfind("level,h,error", 0) == 0);
    CHECK(c.out.find("slope,,") != std::string::npos);

    const Run o = rbez_cli({"optimize", (d / "fam" / "level_1.json").string(), "--iters", "3", "--out",
                            (d / "opt.json").string()});
    CHECK(o.code == 0);
    CHECK(fs::exists(d / "opt.json"));
    CHECK(o.out.find("iter") != std::string::npos);
  }

  TEST_CASE("errors") {
    CHECK(rbez_cli({"stencil", "--topology", "simplex", "--d", "2", "--p", "3", "--alpha", "3,0", "--bogus"}).code ==
          2);
    CHECK(rbez_cli({"metrics", "/nonexistent/mesh.json"}).code == 2);
    CHECK(rbez_cli({"stencil", "--topology", "prism", "--d", "2", "--p", "3", "--alpha", "1,0"}).code == 2);
    const fs::path d = scratch("errors");
    write_mesh(d / "fixed.json", testing::single(identity_element(ElementKind::simplex(2, 3)), true));
    CHECK(rbez_cli({"optimize", (d / "fixed.json").string(), "--out", (d / "o.json").string()}).code == 2);
  }
}
