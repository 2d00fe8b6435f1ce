#include "chamber/mixing.hpp"

#include "chamber/grids.hpp"
#include "chamber/representations.hpp"
#include "chamber/smalllp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chamber {

namespace {

GroupElement word_product(const std::vector<GroupElement>& gens, const std::vector<int>& digits) {
  GroupElement g = gens[static_cast<size_t>(digits.front())];
  for (size_t i = 1; i < digits.size(); ++i) g = g * gens[static_cast<size_t>(digits[i])];
  return g;
}

// merge adjacent blocks of the same generator
Word canonical_word(Word w) {
  Word out;
  for (const auto& b : w) {
    if (!out.empty() && out.back().gen == b.gen)
      out.back().power += b.power;
    else
      out.push_back(b);
  }
  return out;
}

Word repeat_word(const Word& w, long times) {
  if (w.size() == 1) return {WordBlock{w.front().gen, w.front().power * times}};
  Word out;
  for (long i = 0; i < times; ++i) out.insert(out.end(), w.begin(), w.end());
  return canonical_word(out);
}

ScaffoldBlock make_block(const std::vector<GroupElement>& base, Word w) {
  ScaffoldBlock block;
  block.word = canonical_word(std::move(w));
  const WordSpectralData data = word_spectral_data(base, block.word);
  block.lambda = data.lambda.coords;
  block.plus_lines = data.plus_lines;
  block.minus_normals = data.minus_normals;
  return block;
}

double block_margin(const ScaffoldBlock& from, const ScaffoldBlock& to) {
  // d(attract(from), repel(to)) per exterior power, worst case
  double m = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < from.plus_lines.size(); ++k)
    m = std::min(m, proj_point_hyperplane_distance(from.plus_lines[k], to.minus_normals[k]));
  return m;
}

// cyclic correction of a block sequence in product order, assembled from the
// streamed eigendata of each block
CartanVector block_correction(const std::vector<const ScaffoldBlock*>& seq, int d) {
  const Mat dual = weight_dual_basis(d);
  Vec out = Vec::Zero(d);
  for (int k = 0; k < d - 1; ++k) {
    double cyc = 0.0;
    for (size_t j = 0; j < seq.size(); ++j) {
      const auto& a = *seq[j];
      const auto& b = *seq[(j + 1) % seq.size()];
      const double num =
          std::abs(a.minus_normals[static_cast<size_t>(k)].dot(b.plus_lines[static_cast<size_t>(k)]));
      const double den =
          std::abs(a.minus_normals[static_cast<size_t>(k)].dot(a.plus_lines[static_cast<size_t>(k)]));
      if (num <= 1e-12 * std::max(1.0, den))
        fail(ErrorKind::degenerate_configuration,
             "adjacent blocks have touching attracting/repelling data");
      cyc += std::log(num / den);
    }
    out += cyc * dual.col(k);
  }
  return CartanVector(out);
}

}  // namespace

DirectionFamily build_direction_family(const std::vector<GroupElement>& gens,
                                       const CartanVector& theta, int depth,
                                       const MixOptions& opt) {
  if (gens.empty()) fail(ErrorKind::precondition, "need generators");
  const int d = gens.front().dim();
  const int want = d - 1;

  ConeOptions cone_opt;
  cone_opt.parallel = opt.certify.parallel;
  const WordRaySample sample = word_rays(gens, depth, RayKind::jordan, cone_opt.word_cap,
                                         cone_opt.gap_tol, cone_opt.parallel);
  if (sample.rays.empty()) fail(ErrorKind::search_exhausted, "no loxodromic words at this depth");

  const ConeModel hull = cone_of_rays(sample.rays, d, cone_opt);
  double theta_margin;
  try {
    theta_margin = interior_margin(hull, theta);
  } catch (const Error& e) {
    if (e.kind == ErrorKind::degenerate_cone)
      fail(ErrorKind::direction, "sampled cone is lower-dimensional", e.payload);
    throw;
  }
  if (!(theta_margin > 0))
    fail(ErrorKind::direction, "theta is outside or on the boundary of the sampled cone",
         theta_margin);

  // candidate rays: the hull's extreme rays, each matched to the earliest
  // sampled word on that ray
  std::vector<std::pair<Vec, long>> candidates;
  for (int idx : hull.extreme_rays) {
    const Vec& ray = hull.rays[static_cast<size_t>(idx)];
    long best_word = -1;
    double best = 1e9;
    for (size_t i = 0; i < sample.rays.size(); ++i) {
      const double dist = (sample.rays[i] - ray).norm();
      if (dist < best - 1e-10) {
        best = dist;
        best_word = sample.word_index[i];
      }
    }
    if (best_word >= 0) candidates.emplace_back(ray, best_word);
  }
  if (static_cast<int>(candidates.size()) < want)
    fail(ErrorKind::search_exhausted, "not enough extreme rays to bracket the direction",
         static_cast<double>(candidates.size()));
  if (candidates.size() > 24) candidates.resize(24);

  // best subset of size d-1 by interior margin of theta
  std::vector<int> best_pick;
  double best_margin = 0.0;
  const int nc = static_cast<int>(candidates.size());
  std::vector<int> comb(static_cast<size_t>(want));
  for (int i = 0; i < want; ++i) comb[static_cast<size_t>(i)] = i;
  for (;;) {
    std::vector<Vec> rays;
    for (int i : comb) rays.push_back(candidates[static_cast<size_t>(i)].first);
    try {
      const ConeModel sub = cone_of_rays(rays, d, cone_opt);
      const double margin = interior_margin(sub, theta);
      if (margin > best_margin) {
        best_margin = margin;
        best_pick = comb;
      }
    } catch (const Error&) {
      // degenerate subset: skip
    }
    int i = want - 1;
    while (i >= 0 && comb[static_cast<size_t>(i)] == nc - want + i) --i;
    if (i < 0) break;
    ++comb[static_cast<size_t>(i)];
    for (int j = i + 1; j < want; ++j)
      comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
  }
  if (best_pick.empty() || best_margin < opt.direction_margin)
    fail(ErrorKind::search_exhausted,
         "no transverse selection found at this depth (best margin " +
             std::to_string(best_margin) + ")",
         best_margin);

  std::vector<std::vector<int>> words;
  std::vector<GroupElement> base;
  for (int i : best_pick) {
    const long widx = candidates[static_cast<size_t>(i)].second;
    words.push_back(decode_word(widx, static_cast<int>(gens.size()), depth));
    base.push_back(word_product(gens, words.back()));
  }

  // raise the generator power until the family certifies strongly Schottky
  SchottkyOptions sopt;
  sopt.grid_n = opt.grid_n;
  sopt.certify = opt.certify;
  std::string last_refusal = "never attempted";

  double min_margin = std::numeric_limits<double>::infinity();
  {
    std::vector<std::vector<AttractRepel>> data;
    for (const auto& g : base) {
      data.emplace_back();
      for (int k = 1; k <= d - 1; ++k)
        data.back().push_back(
            attract_repel(exterior_power(g.entries(), k), opt.certify.eigen_gap_tol));
    }
    for (const auto& a : data)
      for (const auto& b : data)
        for (int k = 0; k < d - 1; ++k)
          min_margin = std::min(min_margin, proj_point_hyperplane_distance(
                                                a[static_cast<size_t>(k)].attract.v,
                                                b[static_cast<size_t>(k)].repel.normal));
  }
  const double r = 0.999 * min_margin / 6.0;
  if (!(r > 0)) fail(ErrorKind::search_exhausted, "selected words have touching flags");

  for (long n = 1; n <= opt.max_family_power; n *= 2) {
    const std::vector<long> powers(base.size(), n);
    for (double eps = r; eps >= r / 64.0; eps /= 2.0) {
      auto fam = certify_schottky(base, r, eps, sopt, powers);
      if (fam) {
        DirectionFamily df;
        df.family = *fam;
        df.theta = theta;
        df.cone_margin = best_margin;
        df.source_words = words;
        return df;
      }
      last_refusal = fam.refusal;
    }
  }
  fail(ErrorKind::search_exhausted,
       "selected words did not certify as a Schottky family: " + last_refusal);
}

WitnessScaffold prepare_witness(const DirectionFamily& df, const GroupElement& h, double eta,
                                const MixOptions& opt) {
  const int d = h.dim();
  const int r_g = d - 1;
  if (!(eta > 0)) fail(ErrorKind::precondition, "eta must be positive");
  if (!is_loxodromic(h, opt.certify.eigen_gap_tol))
    fail(ErrorKind::precondition, "h must be loxodromic");

  std::vector<GroupElement> base = df.family.gens;
  base.push_back(h);
  const int h_base = static_cast<int>(base.size()) - 1;
  const int families = static_cast<int>(df.family.gens.size());

  SchottkyOptions sopt;
  sopt.grid_n = opt.grid_n;
  sopt.certify = opt.certify;

  // transversality of h against the family caps the working radius
  double min_margin = std::numeric_limits<double>::infinity();
  {
    std::vector<std::vector<AttractRepel>> data;
    for (const auto& g : base) {
      data.emplace_back();
      for (int k = 1; k <= d - 1; ++k)
        data.back().push_back(
            attract_repel(exterior_power(g.entries(), k), opt.certify.eigen_gap_tol));
    }
    for (const auto& a : data)
      for (const auto& b : data)
        for (int k = 0; k < d - 1; ++k)
          min_margin = std::min(min_margin, proj_point_hyperplane_distance(
                                                a[static_cast<size_t>(k)].attract.v,
                                                b[static_cast<size_t>(k)].repel.normal));
  }
  const double r = std::min(df.family.r, 0.999 * min_margin / 6.0);
  if (!(r > 0))
    fail(ErrorKind::precondition, "h flags are not transverse to the family", min_margin);

  const double budget_factor = static_cast<double>(3 * r_g + 2);
  std::string last_refusal = "never attempted";

  for (long n = 1; n <= opt.max_family_power; n *= 2) {
    // the family keeps its certified powers (their Jordan vectors are the
    // completion basis, so inflating them inflates the torus); only the
    // bracketing element h is powered up the ladder
    std::vector<long> powers;
    for (int i = 0; i < families; ++i) powers.push_back(df.family.power_of(i));
    powers.push_back(n);

    Certified<SchottkyFamily> ext = Certified<SchottkyFamily>::refuse("eps ladder exhausted");
    for (double eps = r; eps >= r / 256.0; eps /= 2.0) {
      ext = certify_schottky(base, r, eps, sopt, powers);
      if (ext) break;
    }
    if (!ext) {
      last_refusal = ext.refusal;
      continue;
    }

    // blocks of S' start as the certified family generator powers
    std::vector<ScaffoldBlock> blocks;
    for (int i = 0; i < families; ++i)
      blocks.push_back(make_block(base, {WordBlock{i, powers[static_cast<size_t>(i)]}}));
    ScaffoldBlock h_block = make_block(base, {WordBlock{h_base, n}});

    // Pool of alternating block words for the density completion. Words
    // mixing h are included deliberately: distinct flag pairs produce
    // rationally independent correction terms, which is what makes the
    // quotient lattice fill at accessible coefficients.
    std::vector<ScaffoldBlock> pool = blocks;
    {
      const int all = families + 1;
      const long total = word_count(all, opt.pool_depth);
      for (long widx = all; widx < total; ++widx) {
        const std::vector<int> digits = decode_word(widx, all, opt.pool_depth);
        bool alternating = true;
        for (size_t k = 0; k + 1 < digits.size(); ++k)
          if (digits[k] == digits[k + 1]) alternating = false;
        if (!alternating) continue;
        Word w;
        for (int dig : digits) w.push_back(WordBlock{dig, powers[static_cast<size_t>(dig)]});
        pool.push_back(make_block(base, w));
      }
    }

    // density completion on the Jordan vectors, in trace-zero coordinates
    const Mat tz = trace_zero_basis(d);
    GeneratorSet e;
    for (const auto& block : pool) e.vectors.push_back(tz.transpose() * block.lambda);
    for (int i = 0; i < d - 1; ++i) e.basis_idx.push_back(i);
    DenseOptions dopt = opt.dense;
    dopt.seed = opt.seed;
    std::vector<int> completion;
    try {
      completion = dense_completion(e, eta / 2.0, dopt);
    } catch (const Error& err) {
      if (err.kind == ErrorKind::precondition || err.kind == ErrorKind::insufficient_generators) {
        last_refusal = std::string("density completion: ") + err.what();
        continue;
      }
      throw;
    }
    for (int idx : completion) blocks.push_back(pool[static_cast<size_t>(idx)]);

    // Enrich up to the 3(d-1) block bound with pool words whose correction
    // directions are most independent of the ones already present: every
    // additional independent direction shrinks the integer-approximation
    // coefficients (and with them the practical T) dramatically.
    {
      Mat basis2(d - 1, d - 1);
      for (int i = 0; i < d - 1; ++i) basis2.col(i) = tz.transpose() * blocks[static_cast<size_t>(i)].lambda;
      const Mat basis2_inv = basis2.inverse();
      auto frac_dir = [&](const ScaffoldBlock& blk) {
        Vec y = basis2_inv * (tz.transpose() * blk.lambda);
        for (int j = 0; j < d - 1; ++j) y(j) -= std::floor(y(j) + 0.5);
        return y;
      };
      while (static_cast<int>(blocks.size()) < 3 * r_g) {
        int best_idx = -1;
        double best_score = 0.015;  // below this the direction adds nothing
        for (int c = families; c < static_cast<int>(pool.size()); ++c) {
          bool used = false;
          for (const auto& b : blocks)
            if (b.word == pool[static_cast<size_t>(c)].word) used = true;
          if (used) continue;
          const Vec cand = frac_dir(pool[static_cast<size_t>(c)]);
          if (cand.norm() < 1e-6) continue;
          double score = std::numeric_limits<double>::infinity();
          for (size_t b = static_cast<size_t>(d - 1); b < blocks.size(); ++b) {
            const Vec have = frac_dir(blocks[b]);
            if (have.norm() < 1e-6) continue;
            const double sine = std::sqrt(std::max(
                0.0, 1.0 - std::pow(cand.normalized().dot(have.normalized()), 2)));
            score = std::min(score, sine * cand.norm());
          }
          if (score > best_score) {
            best_score = score;
            best_idx = c;
          }
        }
        if (best_idx < 0) break;
        blocks.push_back(pool[static_cast<size_t>(best_idx)]);
      }
    }

    // pairwise margins of the working blocks (and h) at the working radius
    double worst = std::numeric_limits<double>::infinity();
    {
      std::vector<const ScaffoldBlock*> all;
      for (const auto& b : blocks) all.push_back(&b);
      all.push_back(&h_block);
      for (const auto* a : all)
        for (const auto* b : all) worst = std::min(worst, block_margin(*a, *b));
    }
    if (worst < 6.0 * r - 1e-12) {
      last_refusal =
          "block margins below 6r after completion (worst " + std::to_string(worst) + ")";
      continue;
    }

    WitnessScaffold sc;
    sc.base = base;
    sc.h_base = h_base;
    sc.blocks = blocks;
    sc.h_block = h_block;
    sc.power = n;
    sc.working_r = ext->r;
    sc.working_eps = ext->eps;

    // cyclic correction of (h^n, g_l, ..., g_1, h^n) in product order
    std::vector<const ScaffoldBlock*> cyclic;
    cyclic.push_back(&sc.h_block);
    for (size_t i = sc.blocks.size(); i-- > 0;) cyclic.push_back(&sc.blocks[i]);
    cyclic.push_back(&sc.h_block);
    sc.correction = block_correction(cyclic, d);

    Vec sum = Vec::Zero(d);
    for (const auto& b : sc.blocks) sum += b.lambda;
    sc.lambda_sum = sum;

    // empirical spectral constant over a corpus of alternating block words
    double measured = 0.0;
    {
      const int nb = static_cast<int>(sc.blocks.size()) + 1;  // + h
      for (int c = 0; c < opt.corpus_size; ++c) {
        std::uint64_t state =
            opt.seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(c + 1));
        const int len = 1 + static_cast<int>(splitmix64(state) %
                                             static_cast<std::uint64_t>(opt.corpus_blocks));
        std::vector<const ScaffoldBlock*> seq;
        std::vector<long> mult;
        int prev = -1;
        for (int bi = 0; bi < len; ++bi) {
          int pick = static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(nb));
          if (pick == prev) pick = (pick + 1) % nb;
          if (nb == 1) pick = 0;
          if (pick == prev) break;
          seq.push_back(pick < static_cast<int>(sc.blocks.size())
                            ? &sc.blocks[static_cast<size_t>(pick)]
                            : &sc.h_block);
          mult.push_back(1 + static_cast<long>(splitmix64(state) %
                                               static_cast<std::uint64_t>(opt.corpus_power)));
          prev = pick;
        }
        Word w;
        Vec predicted = Vec::Zero(d);
        for (size_t bi = 0; bi < seq.size(); ++bi) {
          const Word rep = repeat_word(seq[bi]->word, mult[bi]);
          w.insert(w.end(), rep.begin(), rep.end());
          predicted += static_cast<double>(mult[bi]) * seq[bi]->lambda;
        }
        predicted += block_correction(seq, d).coords;
        const WordSpectralData data = word_spectral_data(base, canonical_word(w));
        const double residual = (data.lambda.coords - predicted).norm();
        measured = std::max(measured, residual / static_cast<double>(seq.size()));
      }
    }
    sc.measured_c = measured;
    sc.c_budget = budget_factor * measured;
    if (sc.c_budget > eta / 2.0) {
      last_refusal = "spectral constant too large: (3(d-1)+2) C = " + std::to_string(sc.c_budget);
      continue;
    }
    return sc;
  }
  fail(ErrorKind::search_exhausted, "no witness scaffold at the power cap: " + last_refusal);
}

namespace {

Vec shifted_target(const WitnessScaffold& sc, const DirectionFamily& df, const CartanVector& x,
                   double t) {
  return x.coords - sc.correction.coords - 2.0 * sc.h_block.lambda + t * df.theta.coords -
         sc.lambda_sum;
}

Mat lambda_columns(const WitnessScaffold& sc, const Mat& tz) {
  Mat cols(tz.cols(), static_cast<int>(sc.blocks.size()));
  for (int i = 0; i < cols.cols(); ++i)
    cols.col(i) = tz.transpose() * sc.blocks[static_cast<size_t>(i)].lambda;
  return cols;
}

}  // namespace

double discover_min_t(const WitnessScaffold& sc, const DirectionFamily& df,
                      const CartanVector& x, double t_hint, const MixOptions& opt) {
  const int d = static_cast<int>(x.coords.size());
  const Mat tz = trace_zero_basis(d);
  const Mat cols = lambda_columns(sc, tz);
  auto feasible = [&](double t) {
    const auto depth =
        cone_depth(cols, tz.transpose() * shifted_target(sc, df, x, t), opt.approx.lp_tol);
    return depth && *depth >= opt.lp_margin;
  };
  double hi = std::max(1.0, t_hint);
  int guard = 0;
  while (!feasible(hi)) {
    hi *= 2.0;
    if (++guard > 60)
      fail(ErrorKind::infeasible, "no feasible t found: direction outside the cone");
  }
  double lo = 0.0;
  if (feasible(lo)) return 0.0;
  while (hi - lo > 0.5) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

double discover_practical_t(const WitnessScaffold& sc, const DirectionFamily& df,
                            const CartanVector& x, double eta, const MixOptions& opt) {
  double t = std::max(1.0, std::ceil(discover_min_t(sc, df, x, 8.0, opt)));
  for (int attempt = 0; attempt < 48; ++attempt) {
    try {
      (void)witness_at(sc, df, x, t, eta, opt);
      // demand a stable onset: the next two steps must succeed as well
      (void)witness_at(sc, df, x, t + 1.0, eta, opt);
      (void)witness_at(sc, df, x, t + 2.0, eta, opt);
      return t;
    } catch (const Error& e) {
      if (e.kind != ErrorKind::needs_larger_t && e.kind != ErrorKind::search_exhausted) throw;
    }
    t = std::ceil(t * 1.35 + 1.0);
  }
  fail(ErrorKind::search_exhausted, "no practical t found below the scan cap", t);
}

MixingWitness witness_at(const WitnessScaffold& sc, const DirectionFamily& df,
                         const CartanVector& x, double t, double eta, const MixOptions& opt) {
  const int d = static_cast<int>(x.coords.size());
  const Mat tz = trace_zero_basis(d);
  const Mat cols = lambda_columns(sc, tz);
  const Vec target = tz.transpose() * shifted_target(sc, df, x, t);

  const auto depth = cone_depth(cols, target, opt.approx.lp_tol);
  if (!depth || *depth < opt.lp_margin) {
    const double min_t = discover_min_t(sc, df, x, t, opt);
    fail(ErrorKind::needs_larger_t,
         "target infeasible at t = " + std::to_string(t) +
             ", minimal feasible T = " + std::to_string(min_t),
         min_t);
  }

  std::vector<Vec> ls;
  for (int i = 0; i < cols.cols(); ++i) ls.push_back(cols.col(i));
  const ApproxResult approx = nonneg_integer_approx(ls, target, eta / 2.0, opt.approx);

  // assemble h^n g_l^{m_l+1} ... g_1^{m_1+1} h^n
  const int l = static_cast<int>(sc.blocks.size());
  Word w = sc.h_block.word;
  for (int i = l; i-- > 0;) {
    long m = 1;
    if (static_cast<int>(approx.coefficients.size()) == l)
      m = approx.coefficients[static_cast<size_t>(i)] + 1;
    const Word rep = repeat_word(sc.blocks[static_cast<size_t>(i)].word, m);
    w.insert(w.end(), rep.begin(), rep.end());
  }
  w.insert(w.end(), sc.h_block.word.begin(), sc.h_block.word.end());
  w = canonical_word(w);

  const WordSpectralData data = word_spectral_data(sc.base, w);
  MixingWitness out;
  out.word = w;
  out.gamma = evaluate_word(sc.base, w);
  out.lambda = data.lambda;
  out.t = t;
  out.lambda_err = (data.lambda.coords - (x.coords + t * df.theta.coords)).norm();
  double ferr = 0.0;
  for (int k = 0; k < d - 1; ++k) {
    ferr = std::max(ferr, proj_distance(data.plus_lines[static_cast<size_t>(k)],
                                        sc.h_block.plus_lines[static_cast<size_t>(k)]));
    ferr = std::max(ferr, proj_distance(data.minus_normals[static_cast<size_t>(k)],
                                        sc.h_block.minus_normals[static_cast<size_t>(k)]));
  }
  out.flag_err = ferr;

  if (!approx.ok && out.lambda_err > eta)
    fail(ErrorKind::search_exhausted,
         "integer search exhausted, best lambda_err = " + std::to_string(out.lambda_err),
         out.lambda_err);
  return out;
}

MixingWitness make_witness(const DirectionFamily& df, const GroupElement& h,
                           const CartanVector& x, double t, double eta, const MixOptions& opt) {
  const WitnessScaffold sc = prepare_witness(df, h, eta, opt);
  return witness_at(sc, df, x, t, eta, opt);
}

std::vector<OverlapEntry> mixing_overlap_demo(const DirectionFamily& df, const GroupElement& h,
                                              const HopfBox& u_box, const HopfBox& v_box,
                                              const std::vector<double>& t_grid,
                                              const MixOptions& opt) {
  std::vector<OverlapEntry> out;
  if (t_grid.empty()) return out;
  const double eta = std::min(u_box.radius, v_box.radius);
  const CartanVector x(Vec(v_box.center - u_box.center));
  const WitnessScaffold sc = prepare_witness(df, h, eta, opt);

  for (double t : t_grid) {
    OverlapEntry entry;
    entry.t = t;
    try {
      entry.witness = witness_at(sc, df, x, t, eta, opt);
      // the overlap point: gamma_t fixes its own flags, so the image of
      // (gamma_t^+, gamma_t^-; u) has apart-coordinate u + sigma(gamma_t, gamma_t^+),
      // and sigma at the attracting flag is the Jordan projection
      entry.overlap_apart = CartanVector(u_box.center + entry.witness.lambda.coords);
      const double a_slack =
          v_box.radius -
          (entry.overlap_apart.coords - (v_box.center + t * df.theta.coords)).norm();
      const double f_slack =
          std::min(u_box.flag_radius, v_box.flag_radius) - entry.witness.flag_err;
      entry.overlap_slack = std::min(a_slack, f_slack);
      entry.ok = entry.overlap_slack >= 0 && entry.witness.lambda_err <= eta;
      if (!entry.ok) entry.error = "witness outside the requested boxes";
    } catch (const Error& e) {
      entry.error = e.what();
      entry.ok = false;
    }
    out.push_back(entry);
  }
  return out;
}

}  // namespace chamber
