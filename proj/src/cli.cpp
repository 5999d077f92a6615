#include "rbez/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbez/approx.hpp"
#include "rbez/errors.hpp"
#include "rbez/family.hpp"
#include "rbez/mesh_io.hpp"
#include "rbez/metrics.hpp"
#include "rbez/optimize.hpp"
#include "rbez/stencils.hpp"

namespace rbez {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

ordered_json report_json(const MetricReport& r) {
  ordered_json j;
  j["h"] = r.h;
  j["rho"] = r.rho;
  j["sigma"] = num(r.sigma);
  j["scaled_jacobian"] = r.scaled_jacobian;
  j["nonpositive_detected"] = r.nonpositive_detected;
  j["inv_scaled_jacobian_sampled"] = num(r.inv_scaled_jacobian_sampled);
  j["inv_scaled_jacobian_bound"] = num(r.inv_scaled_jacobian_bound);
  j["inv_scaled_jacobian_valid"] = r.inv_scaled_jacobian_valid;
  j["inv_weight_sampled"] = r.inv_weight.sampled;
  j["inv_weight_bound"] = r.inv_weight.bound;
  j["c_det_sampled"] = num(r.c_det.sampled);
  j["c_det_bound"] = num(r.c_det.bound);
  ordered_json sd = ordered_json::array();
  for (const auto& a : r.scaled_deriv)
    sd.push_back({{"alpha", a.alpha.str()}, {"sampled", a.sampled}, {"bound", a.bound}});
  j["scaled_derivative"] = sd;
  j["nabla_max"] = r.nabla_max;
  j["weight_nabla_max"] = r.weight_nabla_max;
  j["map_nabla_sup"] = r.map_nabla_sup;
  j["alpha_prime"] = r.alpha_prime;
  return j;
}

ordered_json certificate_json(const FamilyCertificate& fc) {
  ordered_json j;
  j["constants"] = {{"c_max", fc.constants.c_max},
                    {"c_proj", fc.constants.c_proj},
                    {"c_weight", fc.constants.c_weight},
                    {"sigma0", fc.sigma0}};
  j["certified"] = fc.verdict;
  ordered_json meshes = ordered_json::array();
  for (const auto& row : fc.meshes) {
    ordered_json els = ordered_json::array();
    bool all = true;
    for (const auto& c : row) {
      all = all && c.passes();
      els.push_back({{"det_ratio_ok", c.det_ratio_ok},
                     {"projective_ok", c.projective_ok},
                     {"weight_ok", c.weight_ok},
                     {"shape_ok", c.shape_ok},
                     {"det_bound", num(c.det_bound)},
                     {"det_sampled", num(c.det_sampled)},
                     {"proj_ratio", c.proj_ratio},
                     {"worst_alpha", c.worst_alpha.str()},
                     {"inv_weight", c.inv_weight},
                     {"sigma", num(c.sigma)}});
    }
    meshes.push_back({{"certified", all}, {"elements", els}});
  }
  j["meshes"] = meshes;
  return j;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("not an integer list: '" + s + "'");
    }
  }
  if (v.empty()) throw InputError("empty integer list");
  return v;
}

std::map<std::string, double> parse_params(const std::string& s) {
  std::map<std::string, double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw InputError("parameter '" + tok + "' is not key=value");
    try {
      out[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("parameter '" + tok + "' has no numeric value");
    }
  }
  return out;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text << '\n';
}

}  // namespace

int run(int argc, char** argv) { return run(argc, argv, std::cout, std::cerr); }

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rational Bezier element quality and approximation toolkit"};
  app.require_subcommand(1);
  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "seed for sampled metrics");

  std::string mesh_path, out_path, manifest_path;
  int order = 3;
  auto* metrics = app.add_subcommand("metrics", "per-element distortion report");
  metrics->add_option("mesh", mesh_path)->required();
  metrics->add_option("--order", order);
  metrics->add_option("--out", out_path);

  Constants consts;
  double sigma0 = 0.0;
  auto* certify = app.add_subcommand("certify", "check the family conditions");
  certify->add_option("manifest", manifest_path)->required();
  certify->add_option("--cmax", consts.c_max)->required();
  certify->add_option("--cproj", consts.c_proj)->required();
  certify->add_option("--cweight", consts.c_weight)->required();
  certify->add_option("--sigma0", sigma0)->required();
  certify->add_option("--out", out_path);

  std::string scheme;
  int levels = 3;
  double pa = 2.0, pb = 1.0, pr = 0.5;
  auto* refine = app.add_subcommand("refine", "generate a mesh family");
  refine->add_option("seed", mesh_path)->required();
  refine->add_option("--scheme", scheme)
      ->required()
      ->check(CLI::IsMember({"uniform", "pert1", "pert2", "weights1", "weights2", "elevate", "bisect"}));
  refine->add_option("--levels", levels)->required();
  refine->add_option("--a", pa);
  refine->add_option("--b", pb);
  refine->add_option("--r", pr);
  refine->add_option("--out", out_path)->required();

  std::string solution, params;
  int quad_order = 0;
  auto* converge = app.add_subcommand("converge", "best-approximation errors and slope");
  converge->add_option("manifest", manifest_path)->required();
  converge->add_option("--solution", solution)
      ->required()
      ->check(CLI::IsMember({"plate", "hole", "annulus", "chamfer"}));
  converge->add_option("--params", params, "comma-separated key=value");
  converge->add_option("--quad-order", quad_order);
  converge->add_option("--out", out_path);

  OptimizeOptions oo;
  std::string trace_path;
  auto* optimize = app.add_subcommand("optimize", "minimize the Modified cost");
  optimize->add_option("mesh", mesh_path)->required();
  optimize->add_option("--iters", oo.iters);
  optimize->add_option("--beta", oo.beta);
  optimize->add_option("--out", out_path)->required();
  optimize->add_option("--trace", trace_path);

  std::string topo, degree, alpha;
  int dim = 2;
  auto* stencil = app.add_subcommand("stencil", "finite-difference stencil of a derivative");
  stencil->add_option("--topology", topo)->required()->check(CLI::IsMember({"simplex", "tensor"}));
  stencil->add_option("--d", dim)->required();
  stencil->add_option("--p", degree)->required();
  stencil->add_option("--alpha", alpha)->required();

  std::string seed_name;
  auto* seedcmd = app.add_subcommand("seed", "write a built-in seed mesh");
  seedcmd->add_option("name", seed_name)->required()->check(CLI::IsMember({"plate", "annulus", "hole", "chamfer"}));
  seedcmd->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  const SampleOptions so{20, 500, seed};
  try {
    if (*metrics) {
      if (order < 0) throw DomainError("--order must be >= 0");
      const Mesh m = read_mesh(mesh_path);
      ordered_json j;
      j["mesh"] = mesh_path;
      j["elements"] = ordered_json::array();
      for (const auto& e : m.elements) j["elements"].push_back(report_json(distortion_report(e, order, so)));
      emit(out_path, j.dump(1), out);
      return 0;
    }
    if (*certify) {
      const MeshFamily f = read_family(manifest_path);
      const FamilyCertificate fc = certify_family(f.meshes, consts, sigma0, so);
      emit(out_path, certificate_json(fc).dump(1), out);
      return fc.verdict ? 0 : 3;
    }
    if (*refine) {
      const Mesh s = read_mesh(mesh_path);
      if (levels < 1) throw DomainError("--levels must be >= 1");
      MeshFamily f;
      if (scheme == "uniform") {
        f = uniform_family(s, levels);
      } else if (scheme == "pert1" || scheme == "pert2") {
        f = perturb_family(s, scheme == "pert1" ? PertScheme::pert1 : PertScheme::pert2, levels, pa, pb);
      } else if (scheme == "weights1" || scheme == "weights2") {
        f = weight_family(s, scheme == "weights1" ? WeightScheme::subdivide_weights : WeightScheme::boundary_only,
                          levels);
      } else if (scheme == "elevate") {
        f = elevate_family(s, levels);
      } else {
        f = uniform_family(s, levels);
        f.generator = "bisect";
        for (std::size_t l = 0; l < f.meshes.size(); ++l) {
          f.meshes[l] = bisect_to_triangles(f.meshes[l]);
          f.h[l] = mesh_size(f.meshes[l]);
        }
      }
      f.params["r"] = pr;
      out << write_family(out_path, f).string() << '\n';
      return 0;
    }
    if (*converge) {
      const MeshFamily f = read_family(manifest_path);
      const ManufacturedSolution u = make_solution(solution, parse_params(params));
      if (quad_order < 0) throw DomainError("--quad-order must be >= 0");
      const ConvergenceTable t = family_convergence(f, u, quad_order);
      std::string csv = "level,h,error\n";
      for (std::size_t l = 0; l < t.h.size(); ++l)
        csv += std::to_string(l + 1) + "," + format_number(t.h[l]) + "," + format_number(t.error[l]) + "\n";
      csv += "slope,," + format_number(t.slope);
      emit(out_path, csv, out);
      return 0;
    }
    if (*optimize) {
      const OptimizeResult r = optimize_mesh(read_mesh(mesh_path), oo);
      write_mesh(out_path, r.mesh);
      std::string csv = "iter,true_cost,surrogate_cost,step\n";
      for (const auto& row : r.trace)
        csv += std::to_string(row.iter) + "," + format_number(row.true_cost) + "," + format_number(row.surrogate_cost) +
               "," + format_number(row.step) + "\n";
      if (r.stalled) err << "line search stalled at the first iteration\n";
      csv.pop_back();
      emit(trace_path, csv, out);
      return 0;
    }
    if (*stencil) {
      const std::vector<int> pv = parse_ints(degree);
      const std::vector<int> av = parse_ints(alpha);
      if (static_cast<int>(av.size()) != dim) throw InputError("--alpha needs one entry per dimension");
      if (dim < 1 || dim > 3) throw UnsupportedError("dimension must be 1, 2 or 3");
      ElementKind kind;
      if (topo == "simplex") {
        if (pv.size() != 1) throw InputError("simplex degree is a single integer");
        kind = ElementKind::simplex(dim, pv[0]);
      } else if (pv.size() == 1) {
        kind = ElementKind::tensor_uniform(dim, pv[0]);
      } else {
        if (static_cast<int>(pv.size()) != dim) throw InputError("--p needs one entry or one per dimension");
        MultiIndex p(dim);
        for (int k = 0; k < dim; ++k) p[k] = pv[static_cast<std::size_t>(k)];
        kind = ElementKind::tensor(p);
      }
      MultiIndex a(dim);
      for (int k = 0; k < dim; ++k) a[k] = av[static_cast<std::size_t>(k)];
      const Stencil st = make_stencil(kind, a);
      ordered_json j;
      j["scale"] = st.scale;
      j["taps"] = ordered_json::object();
      for (const auto& [idx, v] : st.taps) j["taps"][idx.str()] = v;
      out << j.dump() << '\n';
      return 0;
    }
    if (*seedcmd) {
      Mesh m;
      if (seed_name == "plate") m = plate_seed();
      else if (seed_name == "annulus") m = annulus_seed();
      else if (seed_name == "hole") m = hole_seed();
      else m = chamfer_seed();
      write_mesh(out_path, m);
      return 0;
    }
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace rbez
