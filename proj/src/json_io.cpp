#include "chamber/json_io.hpp"

#include <cmath>
#include <sstream>

namespace chamber {

Json to_json(const Mat& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
  return Json{{"dim", m.rows()}, {"entries", entries}};
}

Json to_json(const Vec& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Json to_json(const CartanVector& v) { return to_json(v.coords); }

Json to_json(const Flag& f) { return Json{{"frame", to_json(f.frame)}}; }

Json to_json(const HopfPoint& p) {
  return Json{{"plus", to_json(p.pair.plus)},
              {"minus", to_json(p.pair.minus)},
              {"opposition_margin", p.pair.opposition_margin},
              {"apart", to_json(p.apart)}};
}

Json to_json(const ProximalityCertificate& c) {
  return Json{{"r", c.r},
              {"eps", c.eps},
              {"attract", to_json(c.attract.v)},
              {"repel_normal", to_json(c.repel.normal)},
              {"lipschitz_bound", c.lipschitz_bound},
              {"method", c.method == CertifyMethod::gap_bound ? "gap-bound" : "grid-sample"},
              {"singular_gap", c.singular_gap},
              {"grid_n", c.grid_n}};
}

Json to_json(const LoxodromicCertificate& c) {
  Json per = Json::array();
  for (const auto& p : c.per_power) per.push_back(to_json(p));
  return Json{{"r", c.r}, {"eps", c.eps}, {"per_power", per}};
}

Json to_json(const SchottkyFamily& f) {
  Json certs = Json::array();
  for (const auto& c : f.certificates) certs.push_back(to_json(c));
  return Json{{"r", f.r},
              {"eps", f.eps},
              {"generators", f.gens.size()},
              {"min_margins", to_json(f.min_margins)},
              {"certificates", certs}};
}

Json to_json(const ProductEstimate& e) {
  return Json{{"lambda", to_json(e.lambda_actual)},
              {"predicted", to_json(e.predicted)},
              {"residual", e.residual},
              {"per_block", e.per_block},
              {"loxodromic_certified", e.loxodromic_certified},
              {"plus_flag_dist", e.plus_flag_dist},
              {"minus_flag_dist", e.minus_flag_dist}};
}

Json to_json(const DensityReport& r) {
  return Json{{"eps", r.eps},
              {"covering_radius_estimate", r.covering_radius_estimate},
              {"samples", r.samples},
              {"certified", r.certified},
              {"inconclusive", r.inconclusive},
              {"saturated", r.saturated},
              {"cells_visited", r.cells_visited}};
}

Json to_json(const ApproxResult& r) {
  return Json{{"ok", r.ok}, {"coefficients", r.coefficients}, {"error", r.error}};
}

Json to_json(const ConeModel& c) {
  Json rays = Json::array();
  for (const auto& r : c.rays) rays.push_back(to_json(r));
  Json facets = Json::array();
  for (const auto& f : c.facets) facets.push_back(to_json(f));
  return Json{{"rays", rays},
              {"facets", facets},
              {"extreme_rays", c.extreme_rays},
              {"depth", c.depth},
              {"kind", c.kind == RayKind::jordan ? "jordan" : "cartan"},
              {"hull_dim", c.hull_dim},
              {"ambient_dim", c.ambient_dim},
              {"truncated", c.truncated}};
}

Json to_json(const MixingWitness& w) {
  Json word = Json::array();
  for (const auto& b : w.word) word.push_back(Json{{"gen", b.gen}, {"power", b.power}});
  return Json{{"word", word},
              {"t", w.t},
              {"lambda", to_json(w.lambda)},
              {"lambda_err", w.lambda_err},
              {"flag_err", w.flag_err},
              {"log_scale", w.gamma.log_scale}};
}

Mat mat_from_json(const Json& j) {
  if (j.is_array() && !j.empty() && j.front().is_array()) {
    const int d = static_cast<int>(j.size());
    Mat m(d, d);
    for (int i = 0; i < d; ++i) {
      if (static_cast<int>(j.at(i).size()) != d)
        fail(ErrorKind::io_error, "ragged matrix rows in JSON");
      for (int k = 0; k < d; ++k) m(i, k) = j.at(i).at(k).get<double>();
    }
    return m;
  }
  const Json& entries = j.is_object() ? j.at("entries") : j;
  if (!entries.is_array()) fail(ErrorKind::io_error, "matrix JSON must be an array");
  int d;
  if (j.is_object() && j.contains("dim")) {
    d = j.at("dim").get<int>();
  } else {
    d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
  }
  if (d * d != static_cast<int>(entries.size()))
    fail(ErrorKind::io_error, "matrix entry count is not a square");
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) m(i, k) = entries.at(i * d + k).get<double>();
  return m;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::io_error, "vector JSON must be an array");
  Vec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

Flag flag_from_json(const Json& j) {
  if (j.is_object() && j.contains("frame")) return Flag::of_matrix(mat_from_json(j.at("frame")));
  return Flag::of_matrix(mat_from_json(j));
}

HopfPoint hopf_from_json(const Json& j) {
  Flag plus = flag_from_json(j.at("plus"));
  Flag minus = flag_from_json(j.at("minus"));
  return HopfPoint{make_flag_pair(std::move(plus), std::move(minus)),
                   CartanVector(vec_from_json(j.at("apart")))};
}

std::vector<GroupElement> generators_from_json(const Json& j) {
  const Json& arr = j.is_object() ? j.at("generators") : j;
  if (!arr.is_array() || arr.empty())
    fail(ErrorKind::io_error, "expected a nonempty generators array");
  std::vector<GroupElement> out;
  for (const auto& g : arr) out.emplace_back(mat_from_json(g));
  return out;
}

Word parse_word(const std::string& text) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto caret = tok.find('^');
    long gen, power = 1;
    try {
      gen = std::stol(tok.substr(0, caret));
      if (caret != std::string::npos) power = std::stol(tok.substr(caret + 1));
    } catch (const std::exception&) {
      fail(ErrorKind::io_error, "bad word token '" + tok + "'");
    }
    if (gen < 1) fail(ErrorKind::io_error, "word generators are one-based");
    if (power < 1) fail(ErrorKind::io_error, "word powers must be >= 1");
    w.push_back(WordBlock{static_cast<int>(gen - 1), power});
  }
  if (w.empty()) fail(ErrorKind::io_error, "empty word");
  return w;
}

}  // namespace chamber
