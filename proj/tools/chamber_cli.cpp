// chamber: command-line front end for the SL(d,R) Weyl-chamber dynamics
// toolkit. Subcommands mirror the library modules; all vector/matrix payloads
// are JSON, larger outputs (rays, demo traces) go to CSV files.
//
// Exit codes: 0 success, 2 certified refusal or infeasibility (the
// mathematics said no), 1 error.

#include "chamber/json_io.hpp"
#include "chamber/representations.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace chamber;

struct RunConfig {
  int dim = 3;
  std::uint64_t seed = 1;
  Json tolerances = Json::object();
  Json caps = Json::object();
  std::string out_json;
  std::string out_csv;

  double tol(const std::string& name, double fallback) const {
    return tolerances.contains(name) ? tolerances.at(name).get<double>() : fallback;
  }
  long cap(const std::string& name, long fallback) const {
    return caps.contains(name) ? caps.at(name).get<long>() : fallback;
  }
};

std::string output_dir() {
  const char* env = std::getenv("CHAMBER_OUTPUT_DIR");
  return env ? std::string(env) : std::string();
}

std::string resolve_output(const std::string& path) {
  const std::string dir = output_dir();
  if (dir.empty() || path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(dir) / path).string();
}

Json read_input(const std::string& in_path) {
  try {
    if (!in_path.empty()) {
      std::ifstream f(in_path);
      if (!f) fail(ErrorKind::io_error, "cannot open input file: " + in_path);
      return Json::parse(f);
    }
    return Json::parse(std::cin);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::io_error, std::string("malformed JSON input: ") + e.what());
  }
}

void emit(const Json& j, const std::string& out_path) {
  const std::string resolved = resolve_output(out_path);
  if (resolved.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(resolved);
  if (!f) fail(ErrorKind::io_error, "cannot open output file: " + resolved);
  f << j.dump(2) << "\n";
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  const std::string resolved = resolve_output(path);
  std::ofstream f(resolved);
  if (!f) fail(ErrorKind::io_error, "cannot open CSV output: " + resolved);
  f << header << "\n";
  char buf[64];
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      f << (i ? "," : "") << buf;
    }
    f << "\n";
  }
}

Vec parse_csv_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      vals.push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(ErrorKind::io_error, "bad number in vector: '" + tok + "'");
    }
  }
  Vec v(static_cast<int>(vals.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = vals[static_cast<size_t>(i)];
  return v;
}

std::vector<double> parse_grid(const std::string& spec) {
  // "a:b:step"
  double a, b, step;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0)
    fail(ErrorKind::io_error, "t-grid must be a:b:step with positive step");
  std::vector<double> grid;
  for (double t = a; t <= b + 1e-12; t += step) grid.push_back(t);
  return grid;
}

int exit_code_for(const Error& e) {
  switch (e.kind) {
    case ErrorKind::needs_larger_t:
    case ErrorKind::infeasible:
    case ErrorKind::degenerate_cone:
    case ErrorKind::proximality:
    case ErrorKind::degenerate_configuration:
    case ErrorKind::insufficient_generators:
      return 2;
    default:
      return 1;
  }
}

HopfBox box_from_json(const Json& j, const GroupElement& h) {
  HopfBox box;
  box.flags = lox_fixed_flags(h);
  box.flag_radius = j.value("flag_radius", 0.2);
  box.radius = j.value("radius", 0.25);
  if (j.contains("center"))
    box.center = vec_from_json(j.at("center"));
  else
    box.center = Vec::Zero(h.dim());
  return box;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SL(d,R) Weyl-chamber dynamics toolkit"};
  app.require_subcommand(1);

  std::string config_path, in_path, out_path, csv_path;
  app.add_option("--config", config_path, "RunConfig JSON path");
  app.add_option("--in", in_path, "input JSON (default: stdin)");
  app.add_option("--out", out_path, "output JSON (default: stdout)");
  app.add_option("--csv", csv_path, "CSV output path (subcommands that emit tables)");

  // project
  auto* project = app.add_subcommand("project", "Cartan/Jordan/Iwasawa projections");
  std::string kind = "cartan", flag_path;
  project->add_option("--kind", kind, "cartan|jordan|iwasawa")->required();
  project->add_option("--flag", flag_path, "flag frame JSON (iwasawa; default standard)");

  // rep
  auto* rep = app.add_subcommand("rep", "exterior-power representation matrix");
  int rep_k = 1;
  rep->add_option("--k", rep_k, "power index in [1, d-1]")->required();

  // certify
  auto* certify = app.add_subcommand("certify", "(r,eps)-proximality certificate");
  double c_r = 0, c_eps = 0;
  int c_grid = 400;
  certify->add_option("--r", c_r)->required();
  certify->add_option("--eps", c_eps)->required();
  certify->add_option("--grid", c_grid);

  // schottky
  auto* schottky = app.add_subcommand("schottky", "Schottky families and product estimates");
  auto* sch_cert = schottky->add_subcommand("certify", "certify a strong Schottky family");
  auto* sch_est = schottky->add_subcommand("estimate", "product spectral estimate for a word");
  double s_r = 0, s_eps = 0;
  int s_grid = 400;
  std::string word_text;
  for (auto* sub : {sch_cert, sch_est}) {
    sub->add_option("--r", s_r)->required();
    sub->add_option("--eps", s_eps)->required();
    sub->add_option("--grid", s_grid);
  }
  sch_est->add_option("--word", word_text, "e.g. \"1^3 2^5 1^2\"")->required();

  // hopf / flow
  app.add_subcommand("hopf", "Hopf coordinates of a group element");
  auto* flow = app.add_subcommand("flow", "translation flow on a Hopf point");
  std::string theta_text;
  double flow_t = 0;
  flow->add_option("--theta", theta_text, "direction, comma-separated")->required();
  flow->add_option("--t", flow_t)->required();

  // cone
  auto* cone = app.add_subcommand("cone", "limit-cone sampling and membership");
  auto* cone_sample = cone->add_subcommand("sample", "sample rays and build the hull");
  auto* cone_contains = cone->add_subcommand("contains", "interior membership with slack");
  int cone_depth_arg = 4;
  std::string cone_kind = "jordan", rays_csv = "rays.csv", facets_json = "facets.json";
  std::string cone_theta;
  double cone_slack = 1e-3;
  for (auto* sub : {cone_sample, cone_contains}) {
    sub->add_option("--depth", cone_depth_arg);
    sub->add_option("--kind", cone_kind, "jordan|cartan");
  }
  cone_sample->add_option("--rays-csv", rays_csv);
  cone_sample->add_option("--facets-json", facets_json);
  cone_contains->add_option("--theta", cone_theta)->required();
  cone_contains->add_option("--slack", cone_slack);

  // dense
  auto* dense = app.add_subcommand("dense", "dense-subgroup toolkit");
  auto* dense_check = dense->add_subcommand("check", "covering-radius certification");
  auto* dense_complete = dense->add_subcommand("complete", "eps-dense completion (<= 2d extras)");
  auto* dense_approx = dense->add_subcommand("approx", "nonnegative integer approximation");
  double d_eps = 0.1, d_domain = 4.0, d_eta = 0.05;
  int d_grid = 512;
  std::string d_target;
  dense_check->add_option("--eps", d_eps)->required();
  dense_check->add_option("--domain", d_domain);
  dense_check->add_option("--grid", d_grid);
  dense_complete->add_option("--eps", d_eps)->required();
  dense_approx->add_option("--target", d_target)->required();
  dense_approx->add_option("--eta", d_eta)->required();

  // mix
  auto* mix = app.add_subcommand("mix", "mixing witnesses");
  auto* mix_witness = mix->add_subcommand("witness", "single witness at time t");
  auto* mix_demo = mix->add_subcommand("demo", "overlap demo over a t grid");
  std::string mix_theta, mix_x, t_grid_text;
  double mix_t = 0, mix_eta = 0.25;
  int mix_depth = 4;
  mix_witness->add_option("--theta", mix_theta)->required();
  mix_witness->add_option("--x", mix_x)->required();
  mix_witness->add_option("--t", mix_t)->required();
  mix_witness->add_option("--eta", mix_eta)->required();
  mix_witness->add_option("--depth", mix_depth);
  mix_demo->add_option("--t-grid", t_grid_text, "a:b:step")->required();
  mix_demo->add_option("--eta", mix_eta);
  mix_demo->add_option("--depth", mix_depth);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) fail(ErrorKind::io_error, "cannot open config: " + config_path);
      Json j = Json::parse(f);
      cfg.dim = j.value("dim", 3);
      cfg.seed = j.value("seed", 1ull);
      if (j.contains("tolerances")) cfg.tolerances = j.at("tolerances");
      if (j.contains("caps")) cfg.caps = j.at("caps");
      if (j.contains("output")) {
        cfg.out_json = j.at("output").value("json", "");
        cfg.out_csv = j.at("output").value("csv", "");
      }
    }
    if (out_path.empty()) out_path = cfg.out_json;
    if (csv_path.empty()) csv_path = cfg.out_csv;

    CertifyOptions copt;
    copt.seed = cfg.seed;
    copt.eigen_gap_tol = cfg.tol("eigen_gap", 1e-6);

    if (*project) {
      const GroupElement g{mat_from_json(read_input(in_path))};
      CartanVector v;
      if (kind == "cartan")
        v = cartan_projection(g);
      else if (kind == "jordan")
        v = jordan_projection(g);
      else if (kind == "iwasawa")
        v = iwasawa_cocycle(g, flag_path.empty()
                                   ? Flag::standard(g.dim())
                                   : flag_from_json(read_input(flag_path)));
      else
        fail(ErrorKind::io_error, "unknown projection kind: " + kind);
      emit(to_json(v), out_path);
      return 0;
    }

    if (*rep) {
      const GroupElement g{mat_from_json(read_input(in_path))};
      emit(to_json(exterior_power(g.entries(), rep_k)), out_path);
      return 0;
    }

    if (*certify) {
      const Mat g = mat_from_json(read_input(in_path));
      const auto cert = certify_proximal(g, c_r, c_eps, c_grid, copt);
      if (!cert) {
        emit(Json{{"refused", true}, {"reason", cert.refusal}}, out_path);
        return 2;
      }
      emit(to_json(*cert), out_path);
      return 0;
    }

    if (*schottky) {
      const auto gens = generators_from_json(read_input(in_path));
      SchottkyOptions sopt;
      sopt.grid_n = s_grid;
      sopt.certify = copt;
      const auto fam = certify_schottky(gens, s_r, s_eps, sopt);
      if (!fam) {
        emit(Json{{"refused", true}, {"reason", fam.refusal}}, out_path);
        return 2;
      }
      if (*sch_est) {
        const Word w = parse_word(word_text);
        emit(to_json(product_estimate_check(*fam, w, sopt)), out_path);
      } else {
        emit(to_json(*fam), out_path);
      }
      return 0;
    }

    if (app.get_subcommand("hopf")->parsed()) {
      const GroupElement g{mat_from_json(read_input(in_path))};
      emit(to_json(hopf_coordinates(g)), out_path);
      return 0;
    }

    if (*flow) {
      const HopfPoint p = hopf_from_json(read_input(in_path));
      const CartanVector theta{parse_csv_vector(theta_text)};
      emit(to_json(flow_action(p, theta, flow_t)), out_path);
      return 0;
    }

    if (*cone) {
      const auto gens = generators_from_json(read_input(in_path));
      ConeOptions co;
      co.word_cap = cfg.cap("word_cap", 100000);
      const RayKind rk = cone_kind == "cartan" ? RayKind::cartan : RayKind::jordan;
      const ConeModel model = sample_cone(gens, cone_depth_arg, rk, co);
      if (*cone_sample) {
        std::vector<std::vector<double>> rows;
        for (const auto& r : model.rays) {
          std::vector<double> row(r.data(), r.data() + r.size());
          rows.push_back(row);
        }
        write_csv(rays_csv, "ray coordinates (trace-zero)", rows);
        Json facets = Json::array();
        for (const auto& f : model.facets) facets.push_back(to_json(f));
        {
          std::ofstream f(resolve_output(facets_json));
          if (!f) fail(ErrorKind::io_error, "cannot open facets output");
          f << facets.dump(2) << "\n";
        }
        emit(to_json(model), out_path);
        return 0;
      }
      const CartanVector theta{parse_csv_vector(cone_theta)};
      const double margin = interior_margin(model, theta);  // throws degenerate_cone
      Json report{{"margin", margin}, {"slack", cone_slack}, {"contains", margin >= cone_slack}};
      Json slacks = Json::array();
      const Vec tn = theta.coords / theta.coords.norm();
      for (const auto& f : model.facets) slacks.push_back(f.dot(tn));
      report["facet_slacks"] = slacks;
      emit(report, out_path);
      return margin >= cone_slack ? 0 : 2;
    }

    if (*dense) {
      const Json input = read_input(in_path);
      std::vector<Vec> vectors;
      for (const auto& v : input.at("vectors")) vectors.push_back(vec_from_json(v));
      GeneratorSet set;
      if (input.contains("basis")) {
        set.vectors = vectors;
        for (const auto& idx : input.at("basis")) set.basis_idx.push_back(idx.get<int>());
      } else {
        set = designate_basis(vectors);
      }
      DenseOptions dopt;
      dopt.seed = cfg.seed;
      if (*dense_check) {
        const DensityReport report = eps_density_check(set, d_eps, d_domain, d_grid, dopt);
        emit(to_json(report), out_path);
        return report.certified || report.inconclusive ? 0 : 2;
      }
      if (*dense_complete) {
        try {
          const std::vector<int> f = dense_completion(set, d_eps, dopt);
          Json out{{"completion", f}};
          Json vecs = Json::array();
          for (int idx : f) vecs.push_back(to_json(set.vectors[static_cast<size_t>(idx)]));
          out["vectors"] = vecs;
          emit(out, out_path);
          return 0;
        } catch (const Error& e) {
          if (e.kind == ErrorKind::precondition) {
            emit(Json{{"refused", true}, {"reason", e.what()}}, out_path);
            return 2;
          }
          throw;
        }
      }
      // approx
      const Vec target = parse_csv_vector(d_target);
      const ApproxResult res = nonneg_integer_approx(vectors, target, d_eta);
      emit(to_json(res), out_path);
      return res.ok ? 0 : 2;
    }

    if (*mix) {
      const Json input = read_input(in_path);
      const auto gens = generators_from_json(input);
      const GroupElement h{mat_from_json(input.at("h"))};
      MixOptions mopt;
      mopt.seed = cfg.seed;
      mopt.certify = copt;
      if (input.contains("depth")) mix_depth = input.at("depth").get<int>();

      if (*mix_witness) {
        const CartanVector theta{parse_csv_vector(mix_theta)};
        const CartanVector x{parse_csv_vector(mix_x)};
        const DirectionFamily df = build_direction_family(gens, theta, mix_depth, mopt);
        const MixingWitness w = make_witness(df, h, x, mix_t, mix_eta, mopt);
        emit(to_json(w), out_path);
        return 0;
      }

      // demo
      const CartanVector theta{input.contains("theta") ? vec_from_json(input.at("theta"))
                                                       : parse_csv_vector(mix_theta)};
      if (input.contains("eta")) mix_eta = input.at("eta").get<double>();
      const DirectionFamily df = build_direction_family(gens, theta, mix_depth, mopt);
      const HopfBox u_box = box_from_json(input.value("u_box", Json::object()), h);
      const HopfBox v_box = box_from_json(input.value("v_box", Json::object()), h);
      const auto entries = mixing_overlap_demo(df, h, u_box, v_box, parse_grid(t_grid_text), mopt);
      Json arr = Json::array();
      std::vector<std::vector<double>> rows;
      for (const auto& e : entries) {
        Json je{{"t", e.t}, {"ok", e.ok}};
        if (e.ok) {
          je["witness"] = to_json(e.witness);
          je["overlap_apart"] = to_json(e.overlap_apart);
          je["overlap_slack"] = e.overlap_slack;
          rows.push_back({e.t, e.witness.lambda_err});
        } else {
          je["error"] = e.error;
        }
        arr.push_back(je);
      }
      if (!csv_path.empty()) write_csv(csv_path, "t,lambda_err", rows);
      emit(Json{{"entries", arr}}, out_path);
      for (const auto& e : entries)
        if (!e.ok) return 2;
      return 0;
    }

    fail(ErrorKind::io_error, "no subcommand matched");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
