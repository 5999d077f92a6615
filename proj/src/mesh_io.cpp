#include "rbez/mesh_io.hpp"

#include <cstdio>
#include <fstream>

#include "rbez/element.hpp"
#include "rbez/errors.hpp"

namespace rbez {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text << '\n';
}

}  // namespace

json mesh_to_json(const Mesh& m) {
  json j;
  j["dimension"] = m.kind.dim;
  j["topology"] = topology_name(m.kind.topology);
  if (m.kind.is_simplex()) {
    j["degree"] = m.kind.simplex_degree();
  } else {
    j["degree"] = json::array();
    for (int p : m.kind.degree) j["degree"].push_back(p);
  }
  j["elements"] = json::array();
  for (std::size_t n = 0; n < m.elements.size(); ++n) {
    const auto& e = m.elements[n];
    json el;
    el["points"] = json::array();
    el["weights"] = json::array();
    el["fixed"] = json::array();
    for (Eigen::Index c = 0; c < e.points.cols(); ++c) {
      json pt = json::array();
      for (Eigen::Index r = 0; r < e.points.rows(); ++r) pt.push_back(e.points(r, c));
      el["points"].push_back(pt);
      el["weights"].push_back(e.weights[c]);
      el["fixed"].push_back(n < m.fixed.size() ? static_cast<bool>(m.fixed[n][static_cast<std::size_t>(c)]) : false);
    }
    j["elements"].push_back(el);
  }
  return j;
}

Mesh mesh_from_json(const json& j) {
  try {
    const int d = j.at("dimension").get<int>();
    const std::string topo = j.at("topology").get<std::string>();
    Mesh m;
    if (topo == "simplex") {
      m.kind = ElementKind::simplex(d, j.at("degree").get<int>());
    } else if (topo == "tensor") {
      const json& deg = j.at("degree");
      if (deg.is_array()) {
        if (static_cast<int>(deg.size()) != d) throw InputError("degree list length differs from dimension");
        MultiIndex p(d);
        for (int k = 0; k < d; ++k) p[k] = deg[k].get<int>();
        m.kind = ElementKind::tensor(p);
      } else {
        m.kind = ElementKind::tensor_uniform(d, deg.get<int>());
      }
    } else {
      throw InputError("unknown topology '" + topo + "'");
    }
    for (const json& el : j.at("elements")) {
      const json& pts = el.at("points");
      const json& ws = el.at("weights");
      const auto n = static_cast<Eigen::Index>(pts.size());
      if (static_cast<Eigen::Index>(ws.size()) != n) throw InputError("points and weights differ in length");
      RationalElement e{m.kind, Eigen::MatrixXd(d, n), Eigen::VectorXd(n)};
      for (Eigen::Index c = 0; c < n; ++c) {
        const json& pt = pts[static_cast<std::size_t>(c)];
        if (static_cast<int>(pt.size()) != d) throw InputError("control point has wrong dimension");
        for (int r = 0; r < d; ++r) e.points(r, c) = pt[static_cast<std::size_t>(r)].get<double>();
        e.weights[c] = ws[static_cast<std::size_t>(c)].get<double>();
      }
      std::vector<bool> fx(static_cast<std::size_t>(n), false);
      if (el.contains("fixed")) {
        const json& f = el.at("fixed");
        if (static_cast<Eigen::Index>(f.size()) != n) throw InputError("fixed flags differ in length");
        for (std::size_t c = 0; c < f.size(); ++c) fx[c] = f[c].get<bool>();
      }
      m.elements.push_back(std::move(e));
      m.fixed.push_back(std::move(fx));
    }
    validate(m);
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed mesh JSON: ") + e.what());
  }
}

Mesh read_mesh(const std::filesystem::path& path) { return mesh_from_json(read_json(path)); }

void write_mesh(const std::filesystem::path& path, const Mesh& m) { write_text(path, mesh_to_json(m).dump(1)); }

std::filesystem::path write_family(const std::filesystem::path& dir, const MeshFamily& f) {
  std::filesystem::create_directories(dir);
  json man;
  man["generator"] = f.generator;
  man["params"] = f.params;
  man["levels"] = json::array();
  man["h"] = f.h;
  for (std::size_t l = 0; l < f.meshes.size(); ++l) {
    const std::string name = "level_" + std::to_string(l + 1) + ".json";
    write_mesh(dir / name, f.meshes[l]);
    man["levels"].push_back(name);
  }
  const auto path = dir / "manifest.json";
  write_text(path, man.dump(1));
  return path;
}

MeshFamily read_family(const std::filesystem::path& manifest) {
  const json man = read_json(manifest);
  try {
    MeshFamily f;
    f.generator = man.value("generator", std::string{});
    if (man.contains("params")) f.params = man.at("params").get<std::map<std::string, double>>();
    const auto base = manifest.parent_path();
    for (const json& lvl : man.at("levels")) f.meshes.push_back(read_mesh(base / lvl.get<std::string>()));
    if (man.contains("h")) f.h = man.at("h").get<std::vector<double>>();
    if (f.h.size() != f.meshes.size()) {
      f.h.clear();
      for (const auto& m : f.meshes) f.h.push_back(mesh_size(m));
    }
    return f;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed manifest: ") + e.what());
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace rbez
