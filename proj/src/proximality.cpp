#include "chamber/proximality.hpp"

#include "chamber/representations.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>

namespace chamber {

AttractRepel attract_repel(const Mat& g, double gap_tol) {
  if (!g.allFinite()) fail(ErrorKind::invalid_input, "matrix has non-finite entries");
  const int d = static_cast<int>(g.rows());
  if (d < 2 || g.cols() != d) fail(ErrorKind::invalid_input, "need a square matrix, dim >= 2");

  Eigen::EigenSolver<Mat> es(g);
  const CVec vals = es.eigenvalues();
  int top = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(vals(i)) > std::abs(vals(top))) top = i;
  double second = 0.0;
  for (int i = 0; i < d; ++i)
    if (i != top) second = std::max(second, std::abs(vals(i)));
  const double mod = std::abs(vals(top));
  const double gap = second > 0 ? mod / second - 1.0 : std::numeric_limits<double>::infinity();
  if (std::abs(vals(top).imag()) > 1e-10 * (1.0 + mod))
    fail(ErrorKind::proximality, "dominant eigenvalue is not real", gap);
  if (!(gap > gap_tol))
    fail(ErrorKind::proximality, "dominant eigenvalue is not simple enough", gap);

  AttractRepel out;
  out.modulus_gap = gap;
  out.attract = ProjPoint::of(es.eigenvectors().col(top).real());

  // invariant complement: kernel of projection along the dominant left
  // eigenvector, i.e. the dominant eigendirection of g^T
  Eigen::EigenSolver<Mat> est(Mat(g.transpose()));
  const CVec tvals = est.eigenvalues();
  int ttop = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(tvals(i)) > std::abs(tvals(ttop))) ttop = i;
  out.repel = ProjHyperplane::of(est.eigenvectors().col(ttop).real());
  return out;
}

namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

Certified<ProximalityCertificate> certify_proximal(const Mat& g, double r, double eps,
                                                   int grid_n, const CertifyOptions& opt) {
  if (!(eps > 0) || !(eps <= r)) fail(ErrorKind::precondition, "need 0 < eps <= r");
  if (grid_n < 100) fail(ErrorKind::precondition, "grid_n must be >= 100");

  AttractRepel ar;
  try {
    ar = attract_repel(g, opt.eigen_gap_tol);
  } catch (const Error& e) {
    if (e.kind == ErrorKind::proximality)
      return Certified<ProximalityCertificate>::refuse(
          std::string("no spectral gap: ") + e.what() + " (gap " + describe(e.payload) + ")");
    throw;
  }

  const double separation = proj_distance(ar.attract, ar.repel);
  if (separation < 2 * r - 1e-12)
    return Certified<ProximalityCertificate>::refuse(
        "separation: d(attract, repel) = " + describe(separation) + " < 2r");

  ProximalityCertificate cert;
  cert.r = r;
  cert.eps = eps;
  cert.attract = ar.attract;
  cert.repel = ar.repel;
  cert.grid_n = grid_n;

  // scale-invariant data
  const Mat m = g / g.norm();
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double delta = svd.singularValues()(1) / svd.singularValues()(0);
  cert.singular_gap = delta;

  // Gap route: Breuillard-Gelander Lipschitz bound plus alignment of the
  // singular frame with the eigendata so that the contraction actually lands
  // in B(attract, eps).
  {
    const Vec x_sing = canonical_line(svd.matrixU().col(0));
    const Vec h_sing = canonical_line(svd.matrixV().col(0));
    const double align = proj_distance(ar.repel.normal, h_sing);
    const double s = eps - align;
    if (delta <= eps * eps * eps && s > 0) {
      const double lip = delta / (s * s);
      const double reach = proj_distance(Vec(ar.attract.v), x_sing) + 2.0 * delta / s;
      if (lip <= eps && reach <= eps) {
        cert.method = CertifyMethod::gap_bound;
        cert.lipschitz_bound = lip;
        cert.grid_n = 0;
        return Certified<ProximalityCertificate>::ok(cert);
      }
    }
  }

  // Grid route.
  const GridVerifyResult gv =
      grid_verify(m, ar.attract.v, ar.repel.normal, eps, grid_n, opt.seed, opt.parallel);
  if (gv.max_image_dist <= eps && gv.max_lipschitz <= eps) {
    cert.method = CertifyMethod::grid_sample;
    cert.lipschitz_bound = gv.max_lipschitz;
    return Certified<ProximalityCertificate>::ok(cert);
  }
  std::string why;
  if (gv.max_image_dist > eps)
    why += "containment: max image distance " + describe(gv.max_image_dist) + " > eps; ";
  if (gv.max_lipschitz > eps)
    why += "lipschitz: measured constant " + describe(gv.max_lipschitz) + " > eps; ";
  why += "gap bound a2/a1 = " + describe(delta);
  return Certified<ProximalityCertificate>::refuse(why);
}

PowerProximality power_proximality(const Mat& g, double eps_target, int grid_n, long cap,
                                   const CertifyOptions& opt) {
  const AttractRepel ar = attract_repel(g, opt.eigen_gap_tol);  // throws if not proximal
  const double r = proj_distance(ar.attract, ar.repel) / 2.0;
  if (!(eps_target > 0) || !(eps_target <= r))
    fail(ErrorKind::precondition, "need 0 < eps_target <= r = d(attract, repel)/2", r);

  const ScaledMatrix base = ScaledMatrix::of(g);
  for (long n0 = 1; n0 <= cap; ++n0) {
    const auto once = certify_proximal(base.power(n0).mat, r, eps_target, grid_n, opt);
    if (!once) continue;
    const auto twice = certify_proximal(base.power(2 * n0).mat, r, eps_target, grid_n, opt);
    if (twice) return PowerProximality{n0, r};
  }
  fail(ErrorKind::search_exhausted, "no certifying power found below cap", static_cast<double>(cap));
}

bool tits_criterion(const Mat& g, const ProjPoint& x, const ProjHyperplane& y, double r,
                    double eps, int grid_n, const CertifyOptions& opt) {
  if (!(eps > 0) || !(eps <= r)) fail(ErrorKind::precondition, "need 0 < eps <= r");
  const double sep = proj_distance(x, y);
  if (sep < 6 * r - 1e-12)
    fail(ErrorKind::geometry, "need d(x, Y) >= 6r, got " + std::to_string(sep), sep);
  const Mat m = g / g.norm();
  const GridVerifyResult gv = grid_verify(m, x.v, y.normal, eps, grid_n, opt.seed, opt.parallel);
  return gv.max_image_dist <= eps && gv.max_lipschitz <= eps;
}

Certified<LoxodromicCertificate> certify_loxodromic(const GroupElement& g, double r, double eps,
                                                    int grid_n, const CertifyOptions& opt) {
  LoxodromicCertificate out;
  out.r = r;
  out.eps = eps;
  const int d = g.dim();
  for (int k = 1; k <= d - 1; ++k) {
    auto c = certify_proximal(exterior_power(g.entries(), k), r, eps, grid_n, opt);
    if (!c)
      return Certified<LoxodromicCertificate>::refuse("exterior power k=" + std::to_string(k) +
                                                      ": " + c.refusal);
    out.per_power.push_back(*c);
  }
  return Certified<LoxodromicCertificate>::ok(out);
}

}  // namespace chamber
