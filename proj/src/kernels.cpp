#include "chamber/kernels.hpp"

#include "chamber/grids.hpp"
#include "chamber/projective.hpp"
#include "chamber/representations.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <optional>

namespace chamber {

namespace {

struct GridPartial {
  double image = 0.0;
  double lip = 0.0;
  long samples = 0;
  void merge(const GridPartial& o) {
    image = std::max(image, o.image);
    lip = std::max(lip, o.lip);
    samples += o.samples;
  }
};

}  // namespace

GridVerifyResult grid_verify(const Mat& g, const Vec& attract, const Vec& region_normal,
                             double exclusion, int grid_n, std::uint64_t seed, Parallel par) {
  if (grid_n < 1) fail(ErrorKind::precondition, "grid_n must be positive");
  const int d = static_cast<int>(g.rows());
  const Vec x = canonical_line(attract);
  const Vec nrm = canonical_line(region_normal);
  const long half = grid_n / 2;

  auto in_domain = [&](const Vec& v) {
    return proj_point_hyperplane_distance(v, nrm) >= exclusion;
  };
  auto image_of = [&](const Vec& v) -> Vec {
    Vec w = g * v;
    const double n = w.norm();
    if (n <= 0) fail(ErrorKind::invalid_input, "grid point annihilated by g");
    return w / n;
  };

  auto body = [&](long i, GridPartial& p) {
    const Vec v = sphere_grid_point(d, i, seed);
    if (!in_domain(v)) return;
    ++p.samples;
    const Vec gv = image_of(v);
    p.image = std::max(p.image, proj_distance(gv, x));

    // far pair: the antipodal-in-index grid point
    const Vec w = sphere_grid_point(d, (i + half) % grid_n, seed);
    if (in_domain(w)) {
      const double den = proj_distance(v, w);
      if (den > 1e-13) p.lip = std::max(p.lip, proj_distance(gv, image_of(w)) / den);
    }
    // local probe along a deterministic tangent
    const Vec t = sphere_grid_tangent(v, i, seed);
    Vec v2 = v + 1e-4 * t;
    v2 /= v2.norm();
    if (in_domain(v2)) {
      const double den = proj_distance(v, v2);
      if (den > 1e-13) p.lip = std::max(p.lip, proj_distance(gv, image_of(v2)) / den);
    }
  };

  GridPartial total;
  if (par == Parallel::serial) {
    for (long i = 0; i < grid_n; ++i) body(i, total);
  } else {
#pragma omp parallel
    {
      GridPartial local;
#pragma omp for nowait
      for (long i = 0; i < grid_n; ++i) body(i, local);
#pragma omp critical
      total.merge(local);
    }
  }
  return GridVerifyResult{total.image, total.lip, total.samples};
}

long word_count(int gens, int depth) {
  long total = 0, layer = 1;
  for (int l = 1; l <= depth; ++l) {
    if (layer > (1L << 56) / std::max(1, gens)) return 1L << 56;
    layer *= gens;
    total += layer;
    if (total > (1L << 56)) return 1L << 56;
  }
  return total;
}

std::vector<int> decode_word(long index, int gens, int depth) {
  long layer = 1;
  for (int l = 1; l <= depth; ++l) {
    layer *= gens;
    if (index < layer) {
      std::vector<int> digits(l);
      long rem = index;
      for (int p = l - 1; p >= 0; --p) {
        digits[p] = static_cast<int>(rem % gens);
        rem /= gens;
      }
      return digits;
    }
    index -= layer;
  }
  fail(ErrorKind::precondition, "word index out of range");
}

namespace {

// Dominant log-modulus of a scaled matrix, or nothing when the dominant
// eigenvalue is not (numerically) simple-real.
std::optional<double> dominant_log_modulus(const ScaledMatrix& m) {
  Eigen::EigenSolver<Mat> es(m.mat, /*computeEigenvectors=*/false);
  const CVec ev = es.eigenvalues();
  int top = 0;
  for (int i = 1; i < ev.size(); ++i)
    if (std::abs(ev(i)) > std::abs(ev(top))) top = i;
  const double mod = std::abs(ev(top));
  if (!(mod > 0)) return std::nullopt;
  if (std::abs(ev(top).imag()) > 1e-8 * (1.0 + mod)) return std::nullopt;
  return std::log(mod) + m.log_scale;
}

// lambda (and for the Cartan kind mu) of a word product, assembled per
// exterior power so that trailing coordinates stay accurate however
// hyperbolic the product is.
std::optional<Vec> stream_ray(const std::vector<std::vector<ScaledMatrix>>& rep_base,
                              const std::vector<int>& digits, int d, RayKind kind,
                              double gap_tol) {
  Vec lambda_partial = Vec::Zero(d + 1);
  Vec ray_partial = Vec::Zero(d + 1);
  for (int k = 1; k <= d - 1; ++k) {
    ScaledMatrix prod = rep_base[static_cast<size_t>(digits[0])][static_cast<size_t>(k - 1)];
    for (size_t i = 1; i < digits.size(); ++i)
      prod = prod.times(rep_base[static_cast<size_t>(digits[i])][static_cast<size_t>(k - 1)]);
    const auto dom = dominant_log_modulus(prod);
    if (!dom) return std::nullopt;
    lambda_partial(k) = *dom;
    if (kind == RayKind::cartan) {
      Eigen::JacobiSVD<Mat> svd(prod.mat);
      ray_partial(k) = std::log(svd.singularValues()(0)) + prod.log_scale;
    }
  }
  Vec lambda(d);
  for (int i = 1; i <= d; ++i) lambda(i - 1) = lambda_partial(i) - lambda_partial(i - 1);
  for (int i = 0; i + 1 < d; ++i)
    if (lambda(i) - lambda(i + 1) <= gap_tol) return std::nullopt;
  Vec ray = lambda;
  if (kind == RayKind::cartan)
    for (int i = 1; i <= d; ++i) ray(i - 1) = ray_partial(i) - ray_partial(i - 1);
  const double n = ray.norm();
  if (!(n > 1e-12)) return std::nullopt;
  return ray / n;
}

}  // namespace

WordRaySample word_rays(const std::vector<GroupElement>& gens, int depth, RayKind kind,
                        long cap, double gap_tol, Parallel par) {
  if (gens.empty()) fail(ErrorKind::precondition, "need at least one generator");
  if (depth < 1) fail(ErrorKind::precondition, "depth must be >= 1");
  const int d = gens.front().dim();
  const long total = word_count(static_cast<int>(gens.size()), depth);
  const long n = std::min(total, cap);

  std::vector<std::vector<ScaledMatrix>> rep_base(gens.size());
  for (size_t g = 0; g < gens.size(); ++g)
    for (int k = 1; k <= d - 1; ++k)
      rep_base[g].push_back(ScaledMatrix::of(exterior_power(gens[g].entries(), k)));

  std::vector<std::optional<Vec>> slots(static_cast<size_t>(n));
  auto body = [&](long i) {
    const std::vector<int> digits = decode_word(i, static_cast<int>(gens.size()), depth);
    slots[static_cast<size_t>(i)] = stream_ray(rep_base, digits, d, kind, gap_tol);
  };

  if (par == Parallel::serial) {
    for (long i = 0; i < n; ++i) body(i);
  } else {
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < n; ++i) body(i);
  }

  WordRaySample out;
  out.words_enumerated = n;
  out.truncated = n < total;
  for (long i = 0; i < n; ++i) {
    if (slots[static_cast<size_t>(i)]) {
      out.rays.push_back(*slots[static_cast<size_t>(i)]);
      out.word_index.push_back(i);
    }
  }
  return out;
}

namespace {

struct BoxBest {
  bool found = false;
  double dist2 = 0.0;
  std::vector<long> n;

  // strict ordering: smaller distance wins, exact ties go to the
  // lexicographically smaller coefficient vector
  bool better(double cand2, const std::vector<long>& cand) const {
    if (!found) return true;
    if (cand2 != dist2) return cand2 < dist2;
    return std::lexicographical_compare(cand.begin(), cand.end(), n.begin(), n.end());
  }
  void take(double cand2, const std::vector<long>& cand) {
    found = true;
    dist2 = cand2;
    n = cand;
  }
  void merge(const BoxBest& o) {
    if (o.found && better(o.dist2, o.n)) take(o.dist2, o.n);
  }
};

void enumerate_box(const Mat& cols, int level, const std::vector<long>& lo,
                   const std::vector<long>& hi, Vec& residual, std::vector<long>& n,
                   BoxBest& best, long& evaluated) {
  const int l = static_cast<int>(cols.cols());
  if (level == l) {
    ++evaluated;
    const double d2 = residual.squaredNorm();
    if (best.better(d2, n)) best.take(d2, n);
    return;
  }
  residual -= static_cast<double>(lo[level]) * cols.col(level);
  for (long v = lo[level]; v <= hi[level]; ++v) {
    n[static_cast<size_t>(level)] = v;
    enumerate_box(cols, level + 1, lo, hi, residual, n, best, evaluated);
    residual -= cols.col(level);
  }
  // restore: (hi + 1) columns were subtracted in total
  residual += static_cast<double>(hi[level] + 1) * cols.col(level);
}

}  // namespace

BoxSearchResult integer_box_search(const Mat& columns, const Vec& target,
                                   const std::vector<long>& lo, const std::vector<long>& hi,
                                   long budget, Parallel par) {
  const int l = static_cast<int>(columns.cols());
  if (static_cast<int>(lo.size()) != l || static_cast<int>(hi.size()) != l)
    fail(ErrorKind::precondition, "bound size mismatch");
  double volume = 1.0;
  for (int i = 0; i < l; ++i) {
    if (hi[i] < lo[i]) return BoxSearchResult{};
    volume *= static_cast<double>(hi[i] - lo[i] + 1);
  }
  if (volume > static_cast<double>(budget)) return BoxSearchResult{};

  BoxBest best;
  long evaluated = 0;
  if (l == 0) return BoxSearchResult{};

  const long first_lo = lo[0], first_hi = hi[0];
  auto slice = [&](long v, BoxBest& b, long& ev) {
    Vec residual = target - static_cast<double>(v) * columns.col(0);
    std::vector<long> n(static_cast<size_t>(l));
    n[0] = v;
    enumerate_box(columns, 1, lo, hi, residual, n, b, ev);
  };

  if (par == Parallel::serial || first_hi - first_lo < 1) {
    for (long v = first_lo; v <= first_hi; ++v) slice(v, best, evaluated);
  } else {
#pragma omp parallel
    {
      BoxBest local;
      long local_ev = 0;
#pragma omp for nowait schedule(dynamic)
      for (long v = first_lo; v <= first_hi; ++v) slice(v, local, local_ev);
#pragma omp critical
      {
        best.merge(local);
        evaluated += local_ev;
      }
    }
  }

  BoxSearchResult out;
  out.found = best.found;
  if (best.found) {
    out.coefficients = best.n;
    out.distance = std::sqrt(best.dist2);
  }
  out.evaluated = evaluated;
  return out;
}

namespace {

struct BabaiBest {
  bool found = false;
  double dist2 = 0.0;
  std::vector<long> extra;
  std::vector<long> basis;

  bool better(double cand2, const std::vector<long>& ce, const std::vector<long>& cb) const {
    if (!found) return true;
    if (cand2 != dist2) return cand2 < dist2;
    if (ce != extra) return std::lexicographical_compare(ce.begin(), ce.end(), extra.begin(), extra.end());
    return std::lexicographical_compare(cb.begin(), cb.end(), basis.begin(), basis.end());
  }
  void take(double cand2, std::vector<long> ce, std::vector<long> cb) {
    found = true;
    dist2 = cand2;
    extra = std::move(ce);
    basis = std::move(cb);
  }
  void merge(const BabaiBest& o) {
    if (o.found && better(o.dist2, o.extra, o.basis)) take(o.dist2, o.extra, o.basis);
  }
};

void babai_leaf(const Mat& basis, const Mat& basis_inv, const std::vector<long>& basis_lo,
                const Vec& residual, const std::vector<long>& ne, BabaiBest& best,
                long& evaluated) {
  const int d = static_cast<int>(basis.rows());
  ++evaluated;
  const Vec y = basis_inv * residual;
  std::vector<long> nb(static_cast<size_t>(d));
  Vec rounded(d);
  for (int i = 0; i < d; ++i) {
    nb[static_cast<size_t>(i)] = std::max(std::lround(y(i)), basis_lo[static_cast<size_t>(i)]);
    rounded(i) = static_cast<double>(nb[static_cast<size_t>(i)]);
  }
  const double d2 = (residual - basis * rounded).squaredNorm();
  if (best.better(d2, ne, nb)) best.take(d2, ne, nb);
}

void babai_enumerate(const Mat& extras, const Mat& basis, const Mat& basis_inv,
                     const std::vector<long>& basis_lo, int level, const std::vector<long>& lo,
                     const std::vector<long>& hi, Vec& residual, std::vector<long>& ne,
                     BabaiBest& best, long& evaluated) {
  const int e = static_cast<int>(extras.cols());
  if (level == e) {
    babai_leaf(basis, basis_inv, basis_lo, residual, ne, best, evaluated);
    return;
  }
  residual -= static_cast<double>(lo[static_cast<size_t>(level)]) * extras.col(level);
  for (long v = lo[static_cast<size_t>(level)]; v <= hi[static_cast<size_t>(level)]; ++v) {
    ne[static_cast<size_t>(level)] = v;
    babai_enumerate(extras, basis, basis_inv, basis_lo, level + 1, lo, hi, residual, ne, best,
                    evaluated);
    residual -= extras.col(level);
  }
  residual += static_cast<double>(hi[static_cast<size_t>(level)] + 1) * extras.col(level);
}

}  // namespace

BabaiSearchResult babai_box_search(const Mat& extras, const Mat& basis, const Vec& target,
                                   const std::vector<long>& lo, const std::vector<long>& hi,
                                   const std::vector<long>& basis_lo, long budget, Parallel par) {
  const int e = static_cast<int>(extras.cols());
  if (static_cast<int>(lo.size()) != e || static_cast<int>(hi.size()) != e)
    fail(ErrorKind::precondition, "bound size mismatch");
  if (basis.rows() != basis.cols() || basis.rows() != target.size())
    fail(ErrorKind::precondition, "basis must be square and match the target");
  const Mat basis_inv = basis.inverse();

  double volume = 1.0;
  for (int i = 0; i < e; ++i) {
    if (hi[static_cast<size_t>(i)] < lo[static_cast<size_t>(i)]) return BabaiSearchResult{};
    volume *= static_cast<double>(hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)] + 1);
  }
  if (volume > static_cast<double>(budget)) return BabaiSearchResult{};

  BabaiBest best;
  long evaluated = 0;
  if (e == 0) {
    Vec residual = target;
    std::vector<long> ne;
    babai_leaf(basis, basis_inv, basis_lo, residual, ne, best, evaluated);
  } else {
    auto slice = [&](long v, BabaiBest& b, long& ev) {
      Vec residual = target - static_cast<double>(v) * extras.col(0);
      std::vector<long> ne(static_cast<size_t>(e));
      ne[0] = v;
      babai_enumerate(extras, basis, basis_inv, basis_lo, 1, lo, hi, residual, ne, b, ev);
    };
    if (par == Parallel::serial) {
      for (long v = lo[0]; v <= hi[0]; ++v) slice(v, best, evaluated);
    } else {
#pragma omp parallel
      {
        BabaiBest local;
        long local_ev = 0;
#pragma omp for nowait schedule(dynamic)
        for (long v = lo[0]; v <= hi[0]; ++v) slice(v, local, local_ev);
#pragma omp critical
        {
          best.merge(local);
          evaluated += local_ev;
        }
      }
    }
  }

  BabaiSearchResult out;
  out.found = best.found;
  if (best.found) {
    out.extra = best.extra;
    out.basis = best.basis;
    out.distance = std::sqrt(best.dist2);
  }
  out.evaluated = evaluated;
  return out;
}

}  // namespace chamber
