#include "chamber/schottky.hpp"

#include "chamber/grids.hpp"
#include "chamber/representations.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace chamber {

double overlap_coefficient(const Mat& g, const Mat& h, double gap_tol, double degeneracy_tol) {
  const AttractRepel ag = attract_repel(g, gap_tol);
  const AttractRepel ah = attract_repel(h, gap_tol);
  const double num = std::abs(ag.repel.normal.dot(ah.attract.v));
  const double den = std::abs(ag.repel.normal.dot(ag.attract.v));
  if (num <= degeneracy_tol * std::max(1.0, den))
    fail(ErrorKind::degenerate_configuration,
         "attractive point of h lies on the repelling hyperplane of g", num);
  return num / den;
}

double cycle_log_overlap(const std::vector<Mat>& blocks, double gap_tol, double degeneracy_tol) {
  if (blocks.empty()) fail(ErrorKind::precondition, "empty block list");
  const size_t l = blocks.size();
  double total = 0.0;
  for (size_t j = 0; j < l; ++j)
    total += std::log(overlap_coefficient(blocks[j], blocks[(j + 1) % l], gap_tol, degeneracy_tol));
  return total;
}

CartanVector product_correction(const std::vector<GroupElement>& blocks, double gap_tol,
                                double degeneracy_tol) {
  if (blocks.empty()) fail(ErrorKind::precondition, "empty block list");
  const int d = blocks.front().dim();
  const Mat dual = weight_dual_basis(d);
  Vec correction = Vec::Zero(d);
  for (int k = 1; k <= d - 1; ++k) {
    std::vector<Mat> reps;
    reps.reserve(blocks.size());
    for (const auto& b : blocks) reps.push_back(exterior_power(b.entries(), k));
    correction += cycle_log_overlap(reps, gap_tol, degeneracy_tol) * dual.col(k - 1);
  }
  return CartanVector(correction);
}

namespace {

// Product accumulator with a QR re-factorization every eight multiplications:
// the running value is q * r * exp(log_scale) with q orthogonal, which keeps
// the triangular part well scaled over long strongly-hyperbolic words.
class WordAccumulator {
 public:
  explicit WordAccumulator(int d)
      : q_(Mat::Identity(d, d)), r_(Mat::Identity(d, d)), log_scale_(0.0), since_qr_(0) {}

  void multiply(const ScaledMatrix& m) {
    Mat t = r_ * m.mat;
    log_scale_ += m.log_scale;
    if (++since_qr_ >= 8) {
      Eigen::HouseholderQR<Mat> qr(t);
      Mat q2 = qr.householderQ();
      Mat r2 = qr.matrixQR().triangularView<Eigen::Upper>();
      for (int i = 0; i < r2.rows(); ++i)
        if (r2(i, i) < 0) {
          q2.col(i) = -q2.col(i);
          r2.row(i) = -r2.row(i);
        }
      q_ = q_ * q2;
      t = r2;
      since_qr_ = 0;
    }
    const double n = t.norm();
    if (!(n > 0) || !t.allFinite())
      fail(ErrorKind::invalid_input, "word product degenerated numerically");
    r_ = t / n;
    log_scale_ += std::log(n);
  }

  ScaledMatrix finish() const {
    Mat full = q_ * r_;
    const double n = full.norm();
    return ScaledMatrix{full / n, log_scale_ + std::log(n)};
  }

 private:
  Mat q_;
  Mat r_;
  double log_scale_;
  int since_qr_;
};

ScaledMatrix accumulate_word(const std::vector<ScaledMatrix>& base, const Word& w, int d) {
  WordAccumulator acc(d);
  for (const auto& block : w) {
    if (block.gen < 0 || block.gen >= static_cast<int>(base.size()))
      fail(ErrorKind::precondition, "word refers to a missing generator");
    if (block.power < 1) fail(ErrorKind::precondition, "block powers must be >= 1");
    const ScaledMatrix p = base[static_cast<size_t>(block.gen)].power(block.power);
    acc.multiply(p);
  }
  return acc.finish();
}

struct DominantData {
  double log_modulus = 0.0;
  bool real_dominant = false;
  Vec right;
  Vec left;
};

DominantData dominant_eigen(const ScaledMatrix& m) {
  DominantData out;
  Eigen::EigenSolver<Mat> es(m.mat);
  const CVec vals = es.eigenvalues();
  int top = 0;
  for (int i = 1; i < vals.size(); ++i)
    if (std::abs(vals(i)) > std::abs(vals(top))) top = i;
  const double mod = std::abs(vals(top));
  out.log_modulus = std::log(mod) + m.log_scale;
  out.real_dominant = std::abs(vals(top).imag()) <= 1e-8 * (1.0 + mod);
  out.right = canonical_line(es.eigenvectors().col(top).real());
  Eigen::EigenSolver<Mat> est(Mat(m.mat.transpose()));
  const CVec tvals = est.eigenvalues();
  int ttop = 0;
  for (int i = 1; i < tvals.size(); ++i)
    if (std::abs(tvals(i)) > std::abs(tvals(ttop))) ttop = i;
  out.left = canonical_line(est.eigenvectors().col(ttop).real());
  return out;
}

}  // namespace

ScaledMatrix evaluate_word(const std::vector<GroupElement>& gens, const Word& w) {
  if (gens.empty() || w.empty()) fail(ErrorKind::precondition, "empty generators or word");
  const int d = gens.front().dim();
  std::vector<ScaledMatrix> base;
  base.reserve(gens.size());
  for (const auto& g : gens) base.push_back(ScaledMatrix::of(g.entries()));
  return accumulate_word(base, w, d);
}

WordSpectralData word_spectral_data(const std::vector<GroupElement>& gens, const Word& w) {
  if (gens.empty() || w.empty()) fail(ErrorKind::precondition, "empty generators or word");
  const int d = gens.front().dim();
  WordSpectralData out;
  out.real_dominant = true;

  // log spectral radius of the k-th exterior power = sum of the top k
  // log eigenvalue moduli; differences recover the Jordan projection.
  Vec partial = Vec::Zero(d + 1);
  for (int k = 1; k <= d - 1; ++k) {
    std::vector<ScaledMatrix> base;
    base.reserve(gens.size());
    for (const auto& g : gens) base.push_back(ScaledMatrix::of(exterior_power(g.entries(), k)));
    const ScaledMatrix stream = accumulate_word(base, w, static_cast<int>(base.front().mat.rows()));
    const DominantData dom = dominant_eigen(stream);
    partial(k) = dom.log_modulus;
    out.real_dominant = out.real_dominant && dom.real_dominant;
    out.plus_lines.push_back(dom.right);
    out.minus_normals.push_back(dom.left);
    out.powers.push_back(stream);
  }
  partial(d) = 0.0;  // determinant one
  Vec lambda(d);
  for (int i = 1; i <= d; ++i) lambda(i - 1) = partial(i) - partial(i - 1);
  out.lambda = CartanVector(lambda);
  return out;
}

Word SchottkyFamily::expand(const Word& w) const {
  Word out = w;
  for (auto& b : out) b.power *= power_of(b.gen);
  return out;
}

Vec SchottkyFamily::block_lambda(int gen) const {
  return static_cast<double>(power_of(gen)) *
         jordan_projection(gens[static_cast<size_t>(gen)]).coords;
}

Certified<SchottkyFamily> certify_schottky(const std::vector<GroupElement>& gens, double r,
                                           double eps, const SchottkyOptions& opt,
                                           const std::vector<long>& powers) {
  if (gens.empty()) fail(ErrorKind::precondition, "need at least one generator");
  if (!(eps > 0) || !(eps <= r)) fail(ErrorKind::precondition, "need 0 < eps <= r");
  if (!powers.empty() && powers.size() != gens.size())
    fail(ErrorKind::precondition, "one power per generator");
  const int d = gens.front().dim();
  const int n = static_cast<int>(gens.size());

  SchottkyFamily fam;
  fam.gens = gens;
  fam.powers = powers.empty() ? std::vector<long>(gens.size(), 1) : powers;
  fam.r = r;
  fam.eps = eps;

  for (int i = 0; i < n; ++i) {
    LoxodromicCertificate cert;
    cert.r = r;
    cert.eps = eps;
    for (int k = 1; k <= d - 1; ++k) {
      const ScaledMatrix stream =
          ScaledMatrix::of(exterior_power(gens[static_cast<size_t>(i)].entries(), k))
              .power(fam.powers[static_cast<size_t>(i)]);
      auto c = certify_proximal(stream.mat, r, eps, opt.grid_n, opt.certify);
      if (!c)
        return Certified<SchottkyFamily>::refuse("generator " + std::to_string(i) +
                                                 ": exterior power k=" + std::to_string(k) +
                                                 ": " + c.refusal);
      cert.per_power.push_back(*c);
    }
    fam.certificates.push_back(cert);
  }

  fam.min_margins = Mat::Constant(n, n, std::numeric_limits<double>::infinity());
  for (int k = 1; k <= d - 1; ++k) {
    Mat margin(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto& ci = fam.certificates[static_cast<size_t>(i)].per_power[static_cast<size_t>(k - 1)];
        const auto& cj = fam.certificates[static_cast<size_t>(j)].per_power[static_cast<size_t>(k - 1)];
        margin(i, j) = proj_distance(ci.attract, cj.repel);
        if (margin(i, j) < 6 * r - 1e-12)
          return Certified<SchottkyFamily>::refuse(
              "margin: d(attract(g" + std::to_string(i) + "), repel(g" + std::to_string(j) +
              ")) = " + std::to_string(margin(i, j)) + " < 6r on exterior power k=" +
              std::to_string(k));
        fam.min_margins(i, j) = std::min(fam.min_margins(i, j), margin(i, j));
      }
    fam.margins.push_back(margin);
  }
  return Certified<SchottkyFamily>::ok(fam);
}

ProductEstimate product_estimate_check(const SchottkyFamily& family, const Word& w,
                                       const SchottkyOptions& opt) {
  if (w.empty()) fail(ErrorKind::precondition, "empty word");
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i].gen == w[i + 1].gen)
      fail(ErrorKind::precondition, "word must alternate generators between blocks");
  for (const auto& b : w)
    if (b.power < 1) fail(ErrorKind::precondition, "block powers must be >= 1");

  const int d = family.gens.front().dim();
  ProductEstimate out;

  const WordSpectralData data = word_spectral_data(family.gens, family.expand(w));
  out.lambda_actual = data.lambda;

  // predicted: sum of block Jordan projections plus the cyclic correction,
  // the latter assembled from the certified eigendata (power-invariant)
  Vec predicted = Vec::Zero(d);
  for (const auto& b : w)
    predicted += static_cast<double>(b.power) * family.block_lambda(b.gen);
  const Mat dual = weight_dual_basis(d);
  for (int k = 1; k <= d - 1; ++k) {
    double cyc = 0.0;
    for (size_t j = 0; j < w.size(); ++j) {
      const auto& a = family.certificates[static_cast<size_t>(w[j].gen)]
                          .per_power[static_cast<size_t>(k - 1)];
      const auto& bnext = family.certificates[static_cast<size_t>(w[(j + 1) % w.size()].gen)]
                              .per_power[static_cast<size_t>(k - 1)];
      const double num = std::abs(a.repel.normal.dot(bnext.attract.v));
      const double den = std::abs(a.repel.normal.dot(a.attract.v));
      if (num <= 1e-12 * std::max(1.0, den))
        fail(ErrorKind::degenerate_configuration,
             "adjacent blocks have touching attracting/repelling data");
      cyc += std::log(num / den);
    }
    predicted += cyc * dual.col(k - 1);
  }
  out.predicted = CartanVector(predicted);
  out.residual = (out.lambda_actual - out.predicted).norm();
  out.per_block = out.residual / static_cast<double>(w.size());

  // (2r, 2eps) proximality of every power stream, flags near the outer blocks
  out.loxodromic_certified = data.real_dominant;
  const int first = w.front().gen;
  const int last = w.back().gen;
  for (int k = 1; k <= d - 1 && out.loxodromic_certified; ++k) {
    auto cert = certify_proximal(data.powers[static_cast<size_t>(k - 1)].mat, 2 * family.r,
                                 2 * family.eps, opt.grid_n, opt.certify);
    if (!cert) {
      out.loxodromic_certified = false;
      break;
    }
    const auto& cf = family.certificates[static_cast<size_t>(first)].per_power[static_cast<size_t>(k - 1)];
    const auto& cl = family.certificates[static_cast<size_t>(last)].per_power[static_cast<size_t>(k - 1)];
    out.plus_flag_dist = std::max(
        out.plus_flag_dist, proj_distance(data.plus_lines[static_cast<size_t>(k - 1)], cf.attract.v));
    out.minus_flag_dist = std::max(
        out.minus_flag_dist,
        proj_distance(data.minus_normals[static_cast<size_t>(k - 1)], cl.repel.normal));
  }
  return out;
}

double measured_spectral_constant(const SchottkyFamily& family, int corpus_size, int max_blocks,
                                  long max_power, std::uint64_t seed, const SchottkyOptions& opt) {
  const int n = static_cast<int>(family.gens.size());
  double worst = 0.0;
  for (int c = 0; c < corpus_size; ++c) {
    std::uint64_t state = seed ^ (0x5851f42d4c957f2dull * static_cast<std::uint64_t>(c + 1));
    const int blocks = 1 + static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(max_blocks));
    Word w;
    int prev = -1;
    for (int b = 0; b < blocks; ++b) {
      int gen = static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(n));
      if (gen == prev) gen = (gen + 1) % n;
      if (n == 1) gen = 0;
      const long power = 1 + static_cast<long>(splitmix64(state) % static_cast<std::uint64_t>(max_power));
      if (gen == prev) break;  // single-generator family: stop at one block
      w.push_back(WordBlock{gen, power});
      prev = gen;
    }
    const ProductEstimate est = product_estimate_check(family, w, opt);
    worst = std::max(worst, est.per_block);
  }
  return worst;
}

}  // namespace chamber
