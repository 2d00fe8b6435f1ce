#include "chamber/dense_subgroup.hpp"

#include "chamber/grids.hpp"
#include "chamber/kernels.hpp"
#include "chamber/smalllp.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace chamber {

GeneratorSet designate_basis(std::vector<Vec> vectors) {
  if (vectors.empty()) fail(ErrorKind::precondition, "empty generator list");
  const int d = static_cast<int>(vectors.front().size());
  Mat all(d, static_cast<int>(vectors.size()));
  for (int i = 0; i < static_cast<int>(vectors.size()); ++i) all.col(i) = vectors[static_cast<size_t>(i)];
  Eigen::ColPivHouseholderQR<Mat> qr(all);
  if (qr.rank() < d)
    fail(ErrorKind::precondition, "generators do not span the space",
         static_cast<double>(qr.rank()));
  GeneratorSet out;
  out.vectors = std::move(vectors);
  const auto& perm = qr.colsPermutation().indices();
  for (int i = 0; i < d; ++i) out.basis_idx.push_back(perm(i));
  std::sort(out.basis_idx.begin(), out.basis_idx.end());
  Mat b(d, d);
  for (int i = 0; i < d; ++i) b.col(i) = out.vectors[static_cast<size_t>(out.basis_idx[static_cast<size_t>(i)])];
  Eigen::JacobiSVD<Mat> svd(b);
  out.basis_condition = svd.singularValues()(0) / svd.singularValues()(d - 1);
  return out;
}

namespace {

Vec wrap_unit(Vec y) {
  for (int i = 0; i < y.size(); ++i) {
    y(i) -= std::floor(y(i) + 0.5);  // into [-0.5, 0.5)
    if (y(i) >= 0.5) y(i) -= 1.0;
  }
  return y;
}

// Occupancy bitmap over torus cells in basis coordinates. Cell sizes are
// chosen so one cell costs at most eps/8 of covering slack per axis sum.
struct TorusGrid {
  std::vector<long> res;
  std::vector<std::uint8_t> occupied;
  long total = 1;
  int d = 0;

  TorusGrid(int dim, const std::vector<double>& col_norms, double eps, long cell_cap) : d(dim) {
    res.resize(static_cast<size_t>(dim));
    double want = 1.0;
    for (int j = 0; j < dim; ++j) {
      res[static_cast<size_t>(j)] = std::max<long>(
          1, static_cast<long>(std::ceil(4.0 * dim * col_norms[static_cast<size_t>(j)] / eps)));
      want *= static_cast<double>(res[static_cast<size_t>(j)]);
    }
    if (want > static_cast<double>(cell_cap)) {
      const double shrink = std::pow(static_cast<double>(cell_cap) / want, 1.0 / dim);
      for (int j = 0; j < dim; ++j)
        res[static_cast<size_t>(j)] = std::max<long>(
            1, static_cast<long>(std::floor(shrink * static_cast<double>(res[static_cast<size_t>(j)]))));
    }
    total = 1;
    for (int j = 0; j < dim; ++j) total *= res[static_cast<size_t>(j)];
    occupied.assign(static_cast<size_t>(total), 0);
  }

  long cell_of(const Vec& y) const {
    long id = 0;
    for (int j = 0; j < d; ++j) {
      long c = static_cast<long>(std::floor((y(j) + 0.5) * static_cast<double>(res[static_cast<size_t>(j)])));
      c = std::min(std::max<long>(c, 0), res[static_cast<size_t>(j)] - 1);
      id = id * res[static_cast<size_t>(j)] + c;
    }
    return id;
  }

  // mark; returns true when the cell was fresh
  bool mark(const Vec& y) {
    auto& slot = occupied[static_cast<size_t>(cell_of(y))];
    if (slot) return false;
    slot = 1;
    return true;
  }

  Vec center(long id) const {
    Vec y(d);
    for (int j = d - 1; j >= 0; --j) {
      const long r = res[static_cast<size_t>(j)];
      y(j) = (static_cast<double>(id % r) + 0.5) / static_cast<double>(r) - 0.5;
      id /= r;
    }
    return y;
  }

  double half_diagonal(const std::vector<double>& col_norms) const {
    double s = 0.0;
    for (int j = 0; j < d; ++j)
      s += col_norms[static_cast<size_t>(j)] / static_cast<double>(res[static_cast<size_t>(j)]);
    return 0.5 * s;
  }
};

double torus_distance(const Mat& basis, const Vec& ya, const Vec& yb) {
  const int d = static_cast<int>(ya.size());
  const Vec delta = wrap_unit(ya - yb);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> z(static_cast<size_t>(d), -1);
  for (;;) {
    Vec shifted = delta;
    for (int j = 0; j < d; ++j) shifted(j) += z[static_cast<size_t>(j)];
    best = std::min(best, (basis * shifted).norm());
    int j = 0;
    while (j < d && z[static_cast<size_t>(j)] == 1) z[static_cast<size_t>(j++)] = -1;
    if (j == d) break;
    ++z[static_cast<size_t>(j)];
  }
  return best;
}

// distance from a target to the nearest occupied cell center, searched over
// growing cell rings
double nearest_occupied(const TorusGrid& grid, const Mat& basis, const Vec& y) {
  const int d = grid.d;
  std::vector<long> home(static_cast<size_t>(d));
  {
    long id = grid.cell_of(y);
    for (int j = d - 1; j >= 0; --j) {
      home[static_cast<size_t>(j)] = id % grid.res[static_cast<size_t>(j)];
      id /= grid.res[static_cast<size_t>(j)];
    }
  }
  double best = std::numeric_limits<double>::infinity();
  long found_ring = -1;
  const long max_ring = *std::max_element(grid.res.begin(), grid.res.end());
  for (long ring = 0; ring <= max_ring; ++ring) {
    // all cells with Chebyshev distance == ring from the home cell
    std::vector<long> offset(static_cast<size_t>(d), -ring);
    bool any_cell = false;
    for (;;) {
      long cheb = 0;
      for (int j = 0; j < d; ++j) cheb = std::max(cheb, std::labs(offset[static_cast<size_t>(j)]));
      if (cheb == ring) {
        any_cell = true;
        long id = 0;
        for (int j = 0; j < d; ++j) {
          const long r = grid.res[static_cast<size_t>(j)];
          long c = (home[static_cast<size_t>(j)] + offset[static_cast<size_t>(j)]) % r;
          if (c < 0) c += r;
          id = id * r + c;
        }
        if (grid.occupied[static_cast<size_t>(id)]) {
          const double dist = torus_distance(basis, y, grid.center(id));
          if (dist < best) {
            best = dist;
            if (found_ring < 0) found_ring = ring;
          }
        }
      }
      int j = 0;
      while (j < d && offset[static_cast<size_t>(j)] == ring) offset[static_cast<size_t>(j++)] = -ring;
      if (j == d) break;
      ++offset[static_cast<size_t>(j)];
    }
    if (!any_cell) break;
    // cell sizes are near-uniform in the metric: two rings of slack suffice
    if (found_ring >= 0 && ring >= found_ring + 2) break;
  }
  return best;
}

struct ClosureOutcome {
  bool saturated = false;
  long combos = 0;
  long depth = 0;
};

// Breadth-first closure of the subgroup image on the torus, deduplicated per
// cell. On a torus the frontier stays boundary-sized, so the fill costs
// O(cells) work and O(frontier) memory however many generators there are.
ClosureOutcome fill_closure(TorusGrid& grid, const std::vector<Vec>& extras_y, long depth_cap,
                            long combo_budget) {
  const int d = grid.d;
  ClosureOutcome out;
  grid.mark(Vec::Zero(d));
  out.combos = 1;
  if (extras_y.empty()) {
    out.saturated = true;
    return out;
  }
  std::vector<Vec> steps;
  for (const auto& y : extras_y) {
    steps.push_back(y);
    steps.push_back(-y);
  }
  std::vector<Vec> frontier{Vec::Zero(d)};
  std::vector<Vec> next;
  out.saturated = true;
  while (!frontier.empty()) {
    if (out.depth >= depth_cap) {
      out.saturated = false;
      break;
    }
    next.clear();
    for (const auto& p : frontier) {
      for (const auto& s : steps) {
        if (++out.combos > combo_budget) {
          out.saturated = false;
          return out;
        }
        Vec q = wrap_unit(p + s);
        if (grid.mark(q)) next.push_back(std::move(q));
      }
    }
    frontier.swap(next);
    ++out.depth;
  }
  return out;
}

}  // namespace

DensityReport eps_density_check(const GeneratorSet& gens, double eps, double domain_radius,
                                int grid_n, const DenseOptions& opt) {
  if (!(eps > 0)) fail(ErrorKind::precondition, "eps must be positive");
  if (grid_n < 1) fail(ErrorKind::precondition, "grid_n must be positive");
  const int d = static_cast<int>(gens.vectors.front().size());

  Mat basis(d, d);
  for (int i = 0; i < d; ++i)
    basis.col(i) = gens.vectors[static_cast<size_t>(gens.basis_idx[static_cast<size_t>(i)])];
  const Mat basis_inv = basis.inverse();
  std::vector<double> col_norms;
  for (int j = 0; j < d; ++j) col_norms.push_back(basis.col(j).norm());

  std::vector<Vec> extras_y;
  for (int i = 0; i < static_cast<int>(gens.vectors.size()); ++i) {
    if (std::find(gens.basis_idx.begin(), gens.basis_idx.end(), i) != gens.basis_idx.end())
      continue;
    extras_y.push_back(wrap_unit(basis_inv * gens.vectors[static_cast<size_t>(i)]));
  }

  TorusGrid grid(d, col_norms, eps, opt.cell_cap);

  // Coefficients are bounded by the configured cap (a cap hit is recorded via
  // saturated/inconclusive). Targets are the basis-reduced images of the
  // requested domain ball; once the domain covers a fundamental box this is
  // the whole torus, so the estimate no longer depends on domain_radius.
  (void)domain_radius;
  const long combo_budget = std::max<long>(
      opt.depth_cap, static_cast<long>(std::min(2.56e8, 16.0 * static_cast<double>(grid.total))));
  const ClosureOutcome closure = fill_closure(grid, extras_y, opt.depth_cap, combo_budget);

  const double slack = grid.half_diagonal(col_norms);
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static) if (opt.parallel == Parallel::omp)
  for (int t = 0; t < grid_n; ++t) {
    Vec y(d);
    for (int j = 0; j < d; ++j) {
      double u = halton_sequence(t + 1, j) + seeded_uniform(opt.seed, 7777 + j, 0);
      y(j) = u - std::floor(u) - 0.5;
    }
    worst = std::max(worst, nearest_occupied(grid, basis, y));
  }

  DensityReport report;
  report.eps = eps;
  report.samples = grid_n;
  report.saturated = closure.saturated;
  report.cells_visited = static_cast<long>(std::count(grid.occupied.begin(), grid.occupied.end(), 1));
  // conservative: representatives may sit anywhere inside their cell
  report.covering_radius_estimate = worst + slack;
  report.certified = report.covering_radius_estimate <= eps;
  report.inconclusive = !report.certified && !report.saturated;
  return report;
}

DensityReport eps_density_check(const std::vector<Vec>& gens, double eps, double domain_radius,
                                int grid_n, const DenseOptions& opt) {
  return eps_density_check(designate_basis(gens), eps, domain_radius, grid_n, opt);
}

namespace {

GeneratorSet project_out(const GeneratorSet& e, const Vec& direction) {
  const int d = static_cast<int>(direction.size());
  const Vec u = direction / direction.norm();
  Mat row(1, d);
  row.row(0) = u.transpose();
  Eigen::JacobiSVD<Mat> svd(row, Eigen::ComputeFullV);
  const Mat q = svd.matrixV().rightCols(d - 1);  // columns orthogonal to u

  std::vector<Vec> projected;
  projected.reserve(e.vectors.size());
  for (const auto& v : e.vectors) projected.push_back(q.transpose() * v);

  std::vector<int> new_basis;
  Mat chosen(d - 1, 0);
  for (int idx : e.basis_idx) {
    if (static_cast<int>(new_basis.size()) == d - 1) break;
    Mat trial(d - 1, static_cast<int>(new_basis.size()) + 1);
    trial.leftCols(chosen.cols()) = chosen;
    trial.col(chosen.cols()) = projected[static_cast<size_t>(idx)];
    Eigen::ColPivHouseholderQR<Mat> qr(trial);
    if (qr.rank() == trial.cols()) {
      new_basis.push_back(idx);
      chosen = trial;
    }
  }
  if (static_cast<int>(new_basis.size()) != d - 1)
    fail(ErrorKind::insufficient_generators, "projected basis degenerated in the quotient");
  GeneratorSet out;
  out.vectors = std::move(projected);
  out.basis_idx = std::move(new_basis);
  Eigen::JacobiSVD<Mat> cond(chosen);
  out.basis_condition = cond.singularValues()(0) / cond.singularValues()(d - 2);
  return out;
}

struct ShortVector {
  Vec u;
  std::vector<int> contributors;
};

// Shortest nonzero wrapped combination from multiples of one extra generator
// or from a pair difference (the pigeonhole step of the induction).
ShortVector find_short_vector(const GeneratorSet& e, const Mat& basis, const Mat& basis_inv,
                              double eps, long multiple_cap) {
  const int d = static_cast<int>(basis.rows());
  const double target = eps / 2.0;
  const double nonzero_tol = 1e-12;

  std::vector<int> extras;
  for (int i = 0; i < static_cast<int>(e.vectors.size()); ++i)
    if (std::find(e.basis_idx.begin(), e.basis_idx.end(), i) == e.basis_idx.end())
      extras.push_back(i);

  for (int idx : extras) {
    const Vec step = wrap_unit(basis_inv * e.vectors[static_cast<size_t>(idx)]);
    Vec acc = Vec::Zero(d);
    for (long k = 1; k <= multiple_cap; ++k) {
      acc = wrap_unit(acc + step);
      const double len = (basis * acc).norm();
      if (len > nonzero_tol && len <= target) return ShortVector{basis * acc, {idx}};
    }
  }
  // two-element combinations: the pigeonhole step of the proof, realized as
  // a coefficient box over a pair of extras, scanned smallest shell first
  for (size_t a = 0; a < extras.size(); ++a) {
    const Vec ya = wrap_unit(basis_inv * e.vectors[static_cast<size_t>(extras[a])]);
    for (size_t b = a + 1; b < extras.size(); ++b) {
      const Vec yb = wrap_unit(basis_inv * e.vectors[static_cast<size_t>(extras[b])]);
      const long box = std::min<long>(1500, multiple_cap);
      for (long shell = 1; shell <= box; ++shell)
        for (long ka = -shell; ka <= shell; ++ka)
          for (long kb = -shell; kb <= shell; ++kb) {
            if (std::max(std::labs(ka), std::labs(kb)) != shell) continue;
            const Vec w = wrap_unit(static_cast<double>(ka) * ya + static_cast<double>(kb) * yb);
            const double len = (basis * w).norm();
            if (len > nonzero_tol && len <= target)
              return ShortVector{basis * w, {extras[a], extras[b]}};
          }
    }
  }
  fail(ErrorKind::insufficient_generators,
       "no short vector reachable from the available generators (finite set too small)");
}

std::vector<int> completion_rec(const GeneratorSet& e, double eps, const DenseOptions& opt) {
  const int d = static_cast<int>(e.vectors.front().size());
  const double ref_domain = 4.0;

  DensityReport pre = eps_density_check(e, eps / 4.0, ref_domain, 256, opt);
  if (!pre.certified) {
    if (pre.inconclusive)
      fail(ErrorKind::precondition,
           "density of E could not be certified at eps/4 (inconclusive at caps)",
           pre.covering_radius_estimate);
    fail(ErrorKind::precondition, "E is not dense at resolution eps/4",
         pre.covering_radius_estimate);
  }

  Mat basis(d, d);
  for (int i = 0; i < d; ++i)
    basis.col(i) = e.vectors[static_cast<size_t>(e.basis_idx[static_cast<size_t>(i)])];
  const Mat basis_inv = basis.inverse();

  if (d == 1) {
    // one element whose circle orbit is already fine enough wins outright
    std::vector<int> extras;
    for (int i = 0; i < static_cast<int>(e.vectors.size()); ++i)
      if (i != e.basis_idx.front()) extras.push_back(i);
    for (int idx : extras) {
      GeneratorSet trial;
      trial.vectors = {e.vectors[static_cast<size_t>(e.basis_idx.front())],
                       e.vectors[static_cast<size_t>(idx)]};
      trial.basis_idx = {0};
      if (eps_density_check(trial, eps, ref_domain, 256, opt).certified) return {idx};
    }
    const ShortVector sv =
        find_short_vector(e, basis, basis_inv, eps, std::max<long>(64, opt.depth_cap));
    return sv.contributors;
  }

  const long multiple_cap = std::min<long>(
      2000000,
      std::max<long>(20000, static_cast<long>(std::pow(
                                std::ceil(2.0 * std::sqrt(double(d)) / eps) + 1, std::min(d, 3)))));
  const ShortVector sv = find_short_vector(e, basis, basis_inv, eps, multiple_cap);

  const GeneratorSet quotient = project_out(e, sv.u);
  const std::vector<int> f_quotient = completion_rec(quotient, eps / 2.0, opt);

  std::vector<int> f = sv.contributors;
  for (int idx : f_quotient)
    if (std::find(f.begin(), f.end(), idx) == f.end()) f.push_back(idx);
  std::sort(f.begin(), f.end());
  return f;
}

}  // namespace

std::vector<int> dense_completion(const GeneratorSet& e, double eps, const DenseOptions& opt) {
  if (!(eps > 0)) fail(ErrorKind::precondition, "eps must be positive");
  const int d = static_cast<int>(e.vectors.front().size());
  std::vector<int> f = completion_rec(e, eps, opt);

  // strip designated basis members; the contract returns extras only
  f.erase(std::remove_if(f.begin(), f.end(),
                         [&](int i) {
                           return std::find(e.basis_idx.begin(), e.basis_idx.end(), i) !=
                                  e.basis_idx.end();
                         }),
          f.end());
  if (static_cast<int>(f.size()) > 2 * d)
    fail(ErrorKind::search_exhausted, "completion exceeded the 2d bound",
         static_cast<double>(f.size()));

  // independent re-certification under a fresh grid seed
  GeneratorSet final_set;
  for (int idx : e.basis_idx) final_set.vectors.push_back(e.vectors[static_cast<size_t>(idx)]);
  for (int i = 0; i < d; ++i) final_set.basis_idx.push_back(i);
  for (int idx : f) final_set.vectors.push_back(e.vectors[static_cast<size_t>(idx)]);
  DenseOptions fresh = opt;
  fresh.seed = opt.seed ^ 0x9e3779b97f4a7c15ull;
  const DensityReport post = eps_density_check(final_set, eps, 4.0, 512, fresh);
  if (!post.certified)
    fail(ErrorKind::search_exhausted, "completed set failed independent re-certification",
         post.covering_radius_estimate);
  return f;
}

ApproxResult nonneg_integer_approx(const std::vector<Vec>& ls, const Vec& target, double eta,
                                   const ApproxOptions& opt) {
  if (ls.empty()) fail(ErrorKind::precondition, "no generators");
  if (!(eta > 0)) fail(ErrorKind::precondition, "eta must be positive");
  const int d = static_cast<int>(target.size());
  const int l = static_cast<int>(ls.size());
  Mat cols(d, l);
  for (int i = 0; i < l; ++i) cols.col(i) = ls[static_cast<size_t>(i)];

  const auto depth = cone_depth(cols, target, opt.lp_tol);
  if (!depth)
    fail(ErrorKind::precondition, "target is outside the positive cone of the generators");

  // LP point maximizing the minimum coefficient, then rounded
  Mat a = Mat::Zero(d + 1, l + 2);
  a.block(0, 0, d, 1) = cols.rowwise().sum();
  a.block(0, 1, d, l) = cols;
  a(d, 0) = 1.0;
  a(d, l + 1) = 1.0;
  Vec b(d + 1);
  b.head(d) = target;
  b(d) = 1e6;
  Vec c = Vec::Zero(l + 2);
  c(0) = -1.0;
  const LpResult lp = lp_solve_eq(a, b, c, opt.lp_tol);
  if (!lp.feasible) fail(ErrorKind::infeasible, "LP relaxation infeasible");
  Vec relaxed(l);
  for (int i = 0; i < l; ++i) relaxed(i) = lp.x(0) + lp.x(1 + i);

  // split the generators: a designated basis absorbs unbounded corrections by
  // rounding, the others are enumerated over growing deviation boxes
  const GeneratorSet split = designate_basis(ls);
  std::vector<int> extra_idx;
  for (int i = 0; i < l; ++i)
    if (std::find(split.basis_idx.begin(), split.basis_idx.end(), i) == split.basis_idx.end())
      extra_idx.push_back(i);
  Mat basis_cols(d, d);
  for (int i = 0; i < d; ++i) basis_cols.col(i) = ls[static_cast<size_t>(split.basis_idx[static_cast<size_t>(i)])];
  Mat extras(d, static_cast<int>(extra_idx.size()));
  for (int i = 0; i < static_cast<int>(extra_idx.size()); ++i)
    extras.col(i) = ls[static_cast<size_t>(extra_idx[static_cast<size_t>(i)])];

  std::vector<long> center(extra_idx.size());
  for (size_t i = 0; i < extra_idx.size(); ++i)
    center[i] = std::max<long>(0, std::lround(relaxed(extra_idx[i])));

  ApproxResult best;
  best.error = std::numeric_limits<double>::infinity();
  for (long radius = 2; radius <= opt.coeff_radius; radius *= 2) {
    std::vector<long> lo(extra_idx.size()), hi(extra_idx.size());
    for (size_t i = 0; i < extra_idx.size(); ++i) {
      lo[i] = std::max<long>(0, center[i] - radius);
      hi[i] = center[i] + radius;
    }
    const BabaiSearchResult res =
        babai_box_search(extras, basis_cols, target, lo, hi,
                         std::vector<long>(static_cast<size_t>(d), 0), opt.budget, opt.parallel);
    if (!res.found) break;  // box exceeded the budget; larger radii only grow
    if (res.distance < best.error) {
      best.error = res.distance;
      best.coefficients.assign(static_cast<size_t>(l), 0);
      for (size_t i = 0; i < extra_idx.size(); ++i)
        best.coefficients[static_cast<size_t>(extra_idx[i])] = res.extra[i];
      for (int i = 0; i < d; ++i)
        best.coefficients[static_cast<size_t>(split.basis_idx[static_cast<size_t>(i)])] =
            res.basis[static_cast<size_t>(i)];
    }
    if (best.error <= eta) {
      best.ok = true;
      return best;
    }
  }
  best.ok = std::isfinite(best.error) && best.error <= eta;
  return best;
}

}  // namespace chamber
