#include "chamber/limit_cone.hpp"

#include "chamber/hopf.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace chamber {

Mat trace_zero_basis(int d) {
  Mat b = Mat::Zero(d, d - 1);
  for (int k = 1; k <= d - 1; ++k) {
    for (int i = 0; i < k; ++i) b(i, k - 1) = 1.0;
    b(k, k - 1) = -static_cast<double>(k);
    b.col(k - 1) /= b.col(k - 1).norm();
  }
  return b;
}

namespace {

// Double description of the dual cone: processes constraints <ray, y> >= 0
// one at a time, maintaining lineality and a pointed generator list. The
// generators that survive every constraint are the facet normals of the
// primal hull.
class DualConeBuilder {
 public:
  DualConeBuilder(int m, double tol) : m_(m), tol_(tol) {
    for (int i = 0; i < m; ++i) lineality_.push_back(Vec::Unit(m, i));
  }

  void insert(const Vec& a) {
    int pivot = -1;
    double best = tol_;
    for (int i = 0; i < static_cast<int>(lineality_.size()); ++i) {
      const double dot = std::abs(a.dot(lineality_[static_cast<size_t>(i)]));
      if (dot > best) {
        best = dot;
        pivot = i;
      }
    }
    if (pivot >= 0) {
      Vec l = lineality_[static_cast<size_t>(pivot)];
      lineality_.erase(lineality_.begin() + pivot);
      const double al = a.dot(l);
      for (auto& other : lineality_) {
        other -= l * (a.dot(other) / al);
        other.normalize();
      }
      for (auto& r : rays_) {
        r -= l * (a.dot(r) / al);
        const double n = r.norm();
        if (n > tol_) r /= n;
      }
      rays_.push_back(al > 0 ? l : Vec(-l));
      prune_rays();
    } else {
      std::vector<Vec> pos, zero, neg;
      for (const auto& r : rays_) {
        const double dot = a.dot(r);
        if (dot > tol_)
          pos.push_back(r);
        else if (dot < -tol_)
          neg.push_back(r);
        else
          zero.push_back(r);
      }
      if (!neg.empty()) {
        std::vector<Vec> fresh;
        for (const auto& u : pos)
          for (const auto& v : neg) {
            if (!adjacent(u, v)) continue;
            Vec w = a.dot(u) * v - a.dot(v) * u;
            const double n = w.norm();
            if (n > tol_) fresh.push_back(w / n);
          }
        rays_ = std::move(pos);
        rays_.insert(rays_.end(), zero.begin(), zero.end());
        for (const auto& w : fresh) push_unique(w);
      }
    }
    processed_.push_back(a);
  }

  const std::vector<Vec>& generators() const { return rays_; }
  int lineality_dim() const { return static_cast<int>(lineality_.size()); }

 private:
  bool adjacent(const Vec& u, const Vec& v) const {
    const int pointed = m_ - static_cast<int>(lineality_.size());
    if (pointed <= 2) return true;
    std::vector<Vec> active;
    for (const auto& c : processed_)
      if (std::abs(c.dot(u)) <= 10 * tol_ && std::abs(c.dot(v)) <= 10 * tol_)
        active.push_back(c);
    if (static_cast<int>(active.size()) < pointed - 2) return false;
    Mat mat(static_cast<int>(active.size()), m_);
    for (int i = 0; i < static_cast<int>(active.size()); ++i)
      mat.row(i) = active[static_cast<size_t>(i)].transpose();
    Eigen::JacobiSVD<Mat> svd(mat);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-8) ++rank;
    return rank >= pointed - 2;
  }

  void push_unique(const Vec& w) {
    for (const auto& r : rays_)
      if ((r - w).norm() < 1e-9 || (r + w).norm() < 1e-9) return;
    rays_.push_back(w);
  }

  void prune_rays() {
    std::vector<Vec> kept;
    for (const auto& r : rays_) {
      bool dup = false;
      for (const auto& k : kept)
        if ((k - r).norm() < 1e-9) dup = true;
      if (!dup) kept.push_back(r);
    }
    rays_ = std::move(kept);
  }

  int m_;
  double tol_;
  std::vector<Vec> lineality_;
  std::vector<Vec> rays_;
  std::vector<Vec> processed_;
};

std::vector<Vec> dedupe_rays(const std::vector<Vec>& rays, double tol) {
  std::vector<Vec> out;
  for (const auto& r : rays) {
    bool dup = false;
    for (const auto& k : out)
      if ((k - r).norm() < tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const Vec& x, const Vec& y) {
    for (int i = 0; i < x.size(); ++i)
      if (x(i) != y(i)) return x(i) < y(i);
    return false;
  });
  return out;
}

int rank_of(const std::vector<Vec>& rays, int m, double tol) {
  if (rays.empty()) return 0;
  Mat mat(static_cast<int>(rays.size()), m);
  for (int i = 0; i < static_cast<int>(rays.size()); ++i)
    mat.row(i) = rays[static_cast<size_t>(i)].transpose();
  Eigen::JacobiSVD<Mat> svd(mat);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * svd.singularValues()(0)) ++rank;
  return rank;
}

}  // namespace

ConeModel cone_of_rays(const std::vector<Vec>& rays_rd, int d, const ConeOptions& opt) {
  const int m = d - 1;
  const Mat basis = trace_zero_basis(d);
  ConeModel model;
  model.ambient_dim = m;

  std::vector<Vec> coords;
  coords.reserve(rays_rd.size());
  for (const auto& r : rays_rd) {
    Vec y = basis.transpose() * r;
    const double n = y.norm();
    if (n > 1e-12) coords.push_back(y / n);
  }
  coords = dedupe_rays(coords, opt.dedupe_tol);
  for (const auto& y : coords) model.rays.push_back(basis * y);
  model.hull_dim = rank_of(coords, m, 1e-10);
  if (coords.empty()) return model;

  // Build facets in the span of the rays; for full-dimensional hulls that is
  // the whole trace-zero space.
  Mat span_basis;
  std::vector<Vec> work;
  int work_dim = model.hull_dim;
  if (model.hull_dim == m) {
    span_basis = Mat::Identity(m, m);
    work = coords;
  } else {
    Mat mat(static_cast<int>(coords.size()), m);
    for (int i = 0; i < static_cast<int>(coords.size()); ++i)
      mat.row(i) = coords[static_cast<size_t>(i)].transpose();
    Eigen::JacobiSVD<Mat> svd(mat, Eigen::ComputeFullV);
    span_basis = svd.matrixV().leftCols(model.hull_dim);
    for (const auto& y : coords) work.push_back(span_basis.transpose() * y);
  }

  DualConeBuilder dd(work_dim, 1e-11);
  for (const auto& y : work) dd.insert(y);
  for (const auto& f : dd.generators()) model.facets.push_back(basis * (span_basis * f));

  // extreme rays: at least (hull_dim - 1) independent active facets
  for (int i = 0; i < static_cast<int>(work.size()); ++i) {
    if (model.facets.empty()) {
      model.extreme_rays.push_back(i);
      continue;
    }
    std::vector<Vec> active;
    for (const auto& f : dd.generators())
      if (std::abs(f.dot(work[static_cast<size_t>(i)])) <= 1e-8) active.push_back(f);
    if (rank_of(active, work_dim, 1e-10) >= work_dim - 1) model.extreme_rays.push_back(i);
  }
  return model;
}

ConeModel sample_cone(const std::vector<GroupElement>& gens, int depth, RayKind kind,
                      const ConeOptions& opt) {
  if (gens.empty()) fail(ErrorKind::precondition, "need at least one generator");
  if (depth < 1) fail(ErrorKind::precondition, "depth must be >= 1");
  const int d = gens.front().dim();
  const WordRaySample sample =
      word_rays(gens, depth, kind, opt.word_cap, opt.gap_tol, opt.parallel);
  ConeModel model = cone_of_rays(sample.rays, d, opt);
  model.depth = depth;
  model.kind = kind;
  model.truncated = sample.truncated;
  return model;
}

double interior_margin(const ConeModel& cone, const CartanVector& theta) {
  if (cone.rays.empty()) fail(ErrorKind::degenerate_cone, "empty cone model", 0.0);
  if (cone.hull_dim < cone.ambient_dim)
    fail(ErrorKind::degenerate_cone,
         "hull is lower-dimensional (dim " + std::to_string(cone.hull_dim) + ")",
         static_cast<double>(cone.hull_dim));
  const double n = theta.norm();
  if (!(n > 0)) fail(ErrorKind::precondition, "zero direction");
  const Vec t = theta.coords / n;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& f : cone.facets) margin = std::min(margin, f.dot(t));
  return margin;
}

bool interior_contains(const ConeModel& cone, const CartanVector& theta, double slack) {
  if (!(slack > 0)) fail(ErrorKind::precondition, "slack must be positive");
  return interior_margin(cone, theta) >= slack;
}

namespace {

// Distance from a unit direction to the unit cross-section of the hull:
// 0 inside; otherwise via the Euclidean projection onto the polyhedral cone
// (active-set enumeration over facet subsets).
double ray_to_cone_distance(const Vec& ray_rd, const ConeModel& cone, const Mat& basis) {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& f : cone.facets) margin = std::min(margin, f.dot(ray_rd));
  if (margin >= -1e-12) return 0.0;

  const int m = cone.ambient_dim;
  const Vec r = basis.transpose() * ray_rd;
  std::vector<Vec> facets;
  for (const auto& f : cone.facets) facets.push_back(basis.transpose() * f);
  const int nf = static_cast<int>(facets.size());

  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << nf); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) > m) continue;
    std::vector<Vec> sel;
    for (int i = 0; i < nf; ++i)
      if (mask & (1 << i)) sel.push_back(facets[static_cast<size_t>(i)]);
    Vec p = r;
    if (!sel.empty()) {
      Mat s(m, static_cast<int>(sel.size()));
      for (int i = 0; i < static_cast<int>(sel.size()); ++i) s.col(i) = sel[static_cast<size_t>(i)];
      Eigen::JacobiSVD<Mat> svd(s, Eigen::ComputeFullU);
      int rank = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10) ++rank;
      const Mat u = svd.matrixU().leftCols(rank);
      p = r - u * (u.transpose() * r);
    }
    bool feasible = true;
    for (const auto& f : facets)
      if (f.dot(p) < -1e-9) feasible = false;
    if (!feasible) continue;
    const double pn = p.norm();
    if (pn > 1e-12) best = std::min(best, (r - p / pn).norm());
  }
  for (int idx : cone.extreme_rays) {
    const Vec e = basis.transpose() * cone.rays[static_cast<size_t>(idx)];
    best = std::min(best, (r - e).norm());
  }
  return best;
}

}  // namespace

double hausdorff_ray_distance(const ConeModel& a, const ConeModel& b) {
  if (a.rays.empty() || b.rays.empty())
    fail(ErrorKind::precondition, "empty cone model in Hausdorff distance");
  const int d = static_cast<int>(a.rays.front().size());
  const Mat basis = trace_zero_basis(d);
  double worst = 0.0;
  for (int idx : a.extreme_rays)
    worst = std::max(worst, ray_to_cone_distance(a.rays[static_cast<size_t>(idx)], b, basis));
  for (int idx : b.extreme_rays)
    worst = std::max(worst, ray_to_cone_distance(b.rays[static_cast<size_t>(idx)], a, basis));
  return worst;
}

LimitPointCloud limit_point_cloud(const SchottkyFamily& family, int depth, double gap_tol) {
  LimitPointCloud cloud;
  const int gens = static_cast<int>(family.gens.size());
  const long total = word_count(gens, depth);
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<ScaledMatrix> powered;
  for (int i = 0; i < gens; ++i)
    powered.push_back(
        ScaledMatrix::of(family.gens[static_cast<size_t>(i)].entries()).power(family.power_of(i)));
  for (long i = 0; i < total; ++i) {
    const std::vector<int> digits = decode_word(i, gens, depth);
    ScaledMatrix prod = powered[static_cast<size_t>(digits[0])];
    for (size_t k = 1; k < digits.size(); ++k)
      prod = prod.times(powered[static_cast<size_t>(digits[k])]);
    // fixed flags only need the matrix up to scale
    GroupElement element{prod.mat};
    if (!is_loxodromic(element, gap_tol)) continue;
    cloud.pairs.push_back(lox_fixed_flags(element, gap_tol));
    cloud.source_words.push_back(digits);
  }
  for (const auto& p : cloud.pairs)
    for (const auto& q : cloud.pairs)
      min_margin = std::min(min_margin, opposition_margin(p.plus, q.minus));
  cloud.min_cross_opposition = cloud.pairs.empty() ? 0.0 : min_margin;
  return cloud;
}

bool FlagPairBox::contains(const FlagPair& p) const {
  return flag_distance(p.plus, center.plus) <= radius &&
         flag_distance(p.minus, center.minus) <= radius;
}

namespace {

double box_slack(const FlagPair& p, const FlagPairBox& box) {
  return box.radius -
         std::max(flag_distance(p.plus, box.center.plus), flag_distance(p.minus, box.center.minus));
}

}  // namespace

TransitivityResult transitivity_witness(const LimitPointCloud& cloud,
                                        const SchottkyFamily& family, const FlagPairBox& u_box,
                                        const FlagPairBox& v_box, long n_cap) {
  TransitivityResult out;
  out.best_margin = -std::numeric_limits<double>::infinity();

  std::vector<int> u_cands, v_cands;
  for (int i = 0; i < static_cast<int>(cloud.pairs.size()); ++i) {
    if (u_box.contains(cloud.pairs[static_cast<size_t>(i)])) u_cands.push_back(i);
    if (v_box.contains(cloud.pairs[static_cast<size_t>(i)])) v_cands.push_back(i);
  }
  if (u_cands.empty() || v_cands.empty()) return out;  // boxes miss the cloud

  auto word_matrix = [&](const std::vector<int>& digits) {
    auto powered = [&](int gen) {
      return ScaledMatrix::of(family.gens[static_cast<size_t>(gen)].entries())
          .power(family.power_of(gen));
    };
    ScaledMatrix prod = powered(digits[0]);
    for (size_t k = 1; k < digits.size(); ++k) prod = prod.times(powered(digits[k]));
    return prod;
  };

  for (int iv : v_cands) {
    const ScaledMatrix g2 = word_matrix(cloud.source_words[static_cast<size_t>(iv)]);
    for (int iu : u_cands) {
      const ScaledMatrix g1 = word_matrix(cloud.source_words[static_cast<size_t>(iu)]);
      ScaledMatrix acc = g2;
      double prev_slack = -std::numeric_limits<double>::infinity();
      for (long n = 0; n <= n_cap; ++n) {
        FlagPair image;
        try {
          image = make_flag_pair(act(acc.mat, u_box.center.plus),
                                 act(acc.mat, u_box.center.minus));
        } catch (const Error&) {
          break;  // contraction exhausted floating-point rank
        }
        const double slack = box_slack(image, v_box);
        if (std::abs(slack - prev_slack) < 1e-12) break;  // image stagnated
        prev_slack = slack;
        if (slack > out.best_margin) {
          out.best_margin = slack;
          out.word = cloud.source_words[static_cast<size_t>(iv)];
          for (long rep = 0; rep < n; ++rep)
            out.word.insert(out.word.end(), cloud.source_words[static_cast<size_t>(iu)].begin(),
                            cloud.source_words[static_cast<size_t>(iu)].end());
          out.n = n;
        }
        if (slack >= 0) {
          out.found = true;
          return out;
        }
        acc = acc.times(g1);
      }
    }
  }
  return out;
}

}  // namespace chamber
