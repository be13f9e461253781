#include "qfa/density.hpp"

#include <algorithm>
#include <string>

#include "qfa/parallel.hpp"
#include "qfa/rng.hpp"

namespace qfa {

namespace {

// Best cell over one (translate, L) pair against one fiber partition.
struct Candidate {
  long long num = 0;  // members in the cell
  long long den = 1;  // cell size
  u64 x_code = 0;
  u64 l_code = 0;
  u64 a_code = 0;
  bool valid = false;

  // Strictly larger ratio wins; on ties the lexicographically earlier
  // (x, L, a) witness wins, matching a translate-then-L-then-a scan with
  // first-maximiser tie-break.
  bool better_than(const Candidate& o) const {
    if (!o.valid) return valid;
    if (!valid) return false;
    __int128 lhs = static_cast<__int128>(num) * o.den;
    __int128 rhs = static_cast<__int128>(o.num) * den;
    if (lhs != rhs) return lhs > rhs;
    if (x_code != o.x_code) return x_code < o.x_code;
    if (l_code != o.l_code) return l_code < o.l_code;
    return a_code < o.a_code;
  }
};

struct DensityContext {
  const Subspace* h;
  int p, m, nn, d;
  u64 hsize, translates, forms_per, ltuples;
  std::vector<FpVector> pts;       // H points, enumeration order
  std::vector<int> qv;             // d values per point, flattened
  std::vector<u8> form_table;      // forms_per x hsize, ell(t_j); empty if too large
  std::vector<char> in_a;          // translates x hsize membership, empty if too large
  const PointSet* a;

  int form_value(u64 l_code, u64 j) const {
    if (!form_table.empty()) return form_table[l_code * hsize + j];
    FpVector lv = point_from_code(l_code, p, m);
    FpVector tj = point_from_code(j, p, m);
    int s = 0;
    for (int i = 0; i < m; ++i) s += lv.c[static_cast<size_t>(i)] * tj.c[static_cast<size_t>(i)];
    return s % p;
  }

  bool member(u64 x_code, u64 j) const {
    if (!in_a.empty()) return in_a[x_code * hsize + j] != 0;
    return a->contains(pts[j] + point_from_code(x_code, p, nn));
  }
};

DensityContext make_context(const PointSet& a, const QuadTuple& q) {
  DensityContext ctx;
  ctx.h = &q.domain();
  ctx.p = q.p();
  ctx.m = q.domain().dim();
  ctx.nn = q.ambient_dim();
  ctx.d = q.d();
  ctx.hsize = q.domain().point_count();
  ctx.translates = ipow(static_cast<u64>(ctx.p), static_cast<unsigned>(ctx.nn));
  ctx.forms_per = ctx.hsize;
  ctx.ltuples = ipow(ctx.forms_per, static_cast<unsigned>(ctx.d));
  ctx.a = &a;

  ctx.pts.resize(ctx.hsize);
  ctx.qv.resize(ctx.hsize * static_cast<u64>(std::max(ctx.d, 1)));
  for (u64 j = 0; j < ctx.hsize; ++j) {
    ctx.pts[j] = q.domain().point_at(j);
    std::vector<int> vals = q.eval(ctx.pts[j]);
    for (int i = 0; i < ctx.d; ++i) ctx.qv[j * static_cast<u64>(ctx.d) + static_cast<u64>(i)] = vals[static_cast<size_t>(i)];
  }
  if (ctx.hsize * ctx.hsize <= (u64(1) << 26)) {
    ctx.form_table.resize(ctx.hsize * ctx.hsize);
    for (u64 lc = 0; lc < ctx.hsize; ++lc) {
      FpVector lv = point_from_code(lc, ctx.p, ctx.m);
      for (u64 j = 0; j < ctx.hsize; ++j) {
        FpVector tj = point_from_code(j, ctx.p, ctx.m);
        int s = 0;
        for (int i = 0; i < ctx.m; ++i) s += lv.c[static_cast<size_t>(i)] * tj.c[static_cast<size_t>(i)];
        ctx.form_table[lc * ctx.hsize + j] = static_cast<u8>(s % ctx.p);
      }
    }
  }
  if (ctx.translates * ctx.hsize <= (u64(1) << 28)) {
    ctx.in_a.resize(ctx.translates * ctx.hsize);
    for (u64 xc = 0; xc < ctx.translates; ++xc) {
      FpVector x = point_from_code(xc, ctx.p, ctx.nn);
      for (u64 j = 0; j < ctx.hsize; ++j)
        ctx.in_a[xc * ctx.hsize + j] = a.contains(ctx.pts[j] + x) ? 1 : 0;
    }
  }
  return ctx;
}

// Scan every translate and level value for one L tuple.
Candidate scan_l_tuple(const DensityContext& ctx, u64 l_code) {
  const int p = ctx.p;
  const int d = ctx.d;
  const u64 fibers = ipow(static_cast<u64>(p), static_cast<unsigned>(d));
  // Decode the L tuple: form i is digit i (big-endian) of l_code.
  std::vector<u64> l_digits(static_cast<size_t>(std::max(d, 1)), 0);
  u64 rest = l_code;
  for (int i = d - 1; i >= 0; --i) {
    l_digits[static_cast<size_t>(i)] = rest % ctx.forms_per;
    rest /= ctx.forms_per;
  }
  std::vector<u64> fiber_of(ctx.hsize);
  std::vector<long long> fiber_size(fibers, 0);
  for (u64 j = 0; j < ctx.hsize; ++j) {
    u64 fib = 0;
    for (int i = 0; i < d; ++i) {
      int v = ctx.qv[j * static_cast<u64>(d) + static_cast<u64>(i)] +
              ctx.form_value(l_digits[static_cast<size_t>(i)], j);
      fib = fib * static_cast<u64>(p) + static_cast<u64>(v % p);
    }
    fiber_of[j] = fib;
    ++fiber_size[fib];
  }

  Candidate best;
  std::vector<long long> counts(fibers);
  for (u64 xc = 0; xc < ctx.translates; ++xc) {
    std::fill(counts.begin(), counts.end(), 0);
    for (u64 j = 0; j < ctx.hsize; ++j)
      if (ctx.member(xc, j)) ++counts[fiber_of[j]];
    for (u64 ac = 0; ac < fibers; ++ac) {
      if (!fiber_size[ac]) continue;
      Candidate c{counts[ac], fiber_size[ac], xc, l_code, ac, true};
      if (c.better_than(best)) best = c;
    }
  }
  return best;
}

DensityWitness witness_from(const DensityContext& ctx, const Candidate& c, bool exhaustive) {
  DensityWitness w;
  w.delta = Rat(c.num, c.den);
  w.translate = point_from_code(c.x_code, ctx.p, ctx.nn);
  u64 rest = c.l_code;
  w.shifts.assign(static_cast<size_t>(ctx.d), LinearForm::zero(ctx.p, ctx.m));
  for (int i = ctx.d - 1; i >= 0; --i) {
    w.shifts[static_cast<size_t>(i)] = form_from_code(rest % ctx.forms_per, ctx.p, ctx.m);
    rest /= ctx.forms_per;
  }
  FpVector av = point_from_code(c.a_code, ctx.p, ctx.d);
  w.value.assign(av.c.begin(), av.c.end());
  w.exhaustive = exhaustive;
  return w;
}

}  // namespace

DensityWitness max_level_density(const PointSet& a, const QuadTuple& q, const DensityBudget& budget) {
  if (a.p() != q.p() || a.ambient_dim() != q.ambient_dim())
    throw BadParams("set and tuple must share an ambient space");
  DensityContext ctx = make_context(a, q);

  bool exhaustive = true;
  u64 work = ctx.hsize;
  for (u64 f : {ctx.translates, ctx.ltuples}) {
    if (work > budget.max_cells / (f ? f : 1)) exhaustive = false;
    work *= f;
  }
  if (work > budget.max_cells) exhaustive = false;

  if (exhaustive) {
    std::vector<Candidate> per_l(ctx.ltuples);
    parallel_for(ctx.ltuples, budget.threads,
                 [&](size_t lc) { per_l[lc] = scan_l_tuple(ctx, static_cast<u64>(lc)); });
    Candidate best;
    for (const Candidate& c : per_l)
      if (c.better_than(best)) best = c;
    if (!best.valid) throw EmptySetError("no nonempty level cell");
    return witness_from(ctx, best, true);
  }

  // Sampled lower bound: random (translate, L) pairs, all level values.
  SplitMix64 rng(budget.seed);
  Candidate best;
  for (u64 s = 0; s < budget.samples; ++s) {
    u64 lc = rng.uniform_below(ctx.ltuples);
    u64 xc = rng.uniform_below(ctx.translates);
    const int d = ctx.d;
    const u64 fibers = ipow(static_cast<u64>(ctx.p), static_cast<unsigned>(d));
    std::vector<u64> l_digits(static_cast<size_t>(std::max(d, 1)), 0);
    u64 rest = lc;
    for (int i = d - 1; i >= 0; --i) {
      l_digits[static_cast<size_t>(i)] = rest % ctx.forms_per;
      rest /= ctx.forms_per;
    }
    std::vector<long long> fiber_size(fibers, 0), counts(fibers, 0);
    for (u64 j = 0; j < ctx.hsize; ++j) {
      u64 fib = 0;
      for (int i = 0; i < d; ++i) {
        int v = ctx.qv[j * static_cast<u64>(d) + static_cast<u64>(i)] +
                ctx.form_value(l_digits[static_cast<size_t>(i)], j);
        fib = fib * static_cast<u64>(ctx.p) + static_cast<u64>(v % ctx.p);
      }
      ++fiber_size[fib];
      if (ctx.member(xc, j)) ++counts[fib];
    }
    for (u64 ac = 0; ac < fibers; ++ac) {
      if (!fiber_size[ac]) continue;
      Candidate c{counts[ac], fiber_size[ac], xc, lc, ac, true};
      if (c.better_than(best)) best = c;
    }
  }
  if (!best.valid) throw EmptySetError("no nonempty level cell sampled");
  return witness_from(ctx, best, false);
}

DensityPreservationCheck check_density_preservation(const PointSet& a, const QuadTuple& q,
                                                    const QuadraticPoly& extra,
                                                    const DensityBudget& budget) {
  DensityPreservationCheck rec;
  rec.before = max_level_density(a, q, budget).delta;
  rec.after = max_level_density(a, q.appended(extra), budget).delta;
  rec.pass = rec.after >= rec.before;
  if (!rec.pass) throw CheckFailed("density decreased on increasing complexity");
  return rec;
}

namespace {

// Exact density of (A - x) on {k in cell_domain : (Q + L)(k) = a}, where the
// cell is carved from `points` (a subspace's point list); returns false when
// the cell is empty.
bool cell_density(const PointSet& a, const std::vector<FpVector>& points, const QuadTuple& q,
                  const std::vector<LinearForm>& ambient_l, const std::vector<int>& value,
                  const FpVector& translate, Rat& out) {
  long long num = 0, den = 0;
  for (const FpVector& k : points) {
    bool in_cell = true;
    std::vector<int> qv = q.eval(k);
    for (size_t i = 0; i < ambient_l.size() && in_cell; ++i)
      if ((qv[i] + ambient_l[i].eval(k)) % q.p() != value[i]) in_cell = false;
    if (!in_cell) continue;
    ++den;
    if (a.contains(k + translate)) ++num;
  }
  if (!den) return false;
  out = Rat(num, den);
  return true;
}

struct RecursionLevel {
  Subspace domain;
  QuadTuple tuple;
};

}  // namespace

PartitionResult high_rank_partition(const QuadTuple& q_in, int target_rank,
                                    const std::vector<PointSet>& sets, const DensityBudget& budget) {
  if (!q_in.is_homogeneous()) throw BadParams("partitioning expects homogeneous forms");
  const int p = q_in.p();
  const int r = static_cast<int>(sets.size());
  const int d0 = q_in.d();
  const Subspace h0 = q_in.domain();

  PartitionResult res{h0, q_in, {}};
  for (const PointSet& a : sets)
    res.stats.densities_before.push_back(max_level_density(a, q_in, budget).delta);

  Subspace h = h0;
  QuadTuple q = q_in;
  while (true) {
    if (q.d() == 0) break;
    RankCertificate cert = tuple_rank(q);
    if (cert.at_least(target_rank)) break;

    // Normalise the minimising combination: move its last nonzero entry to
    // the final slot and scale it to -1, so the final form agrees with a
    // combination of the earlier ones on the radical.
    const int d = q.d();
    std::vector<u8> lambda = cert.lambda;
    int j0 = d - 1;
    while (lambda[static_cast<size_t>(j0)] == 0) --j0;
    std::vector<int> perm;
    for (int i = 0; i < d; ++i)
      if (i != j0) perm.push_back(i);
    perm.push_back(j0);
    std::vector<QuadraticPoly> reordered;
    std::vector<int> lam;
    for (int i : perm) {
      reordered.push_back(q.poly(i));
      lam.push_back(lambda[static_cast<size_t>(i)]);
    }
    int scale = fp_mul(p - 1, fp_inv(lam.back(), p), p);  // lam_d * scale == -1
    for (int& li : lam) li = fp_mul(li, scale, p);
    QuadTuple qp(h, reordered);

    FpMatrix b_comb(p, q.ambient_dim(), q.ambient_dim());
    for (int i = 0; i < d; ++i) {
      if (!lam[static_cast<size_t>(i)]) continue;
      for (size_t t = 0; t < b_comb.e.size(); ++t)
        b_comb.e[t] = static_cast<u8>((b_comb.e[t] + lam[static_cast<size_t>(i)] * qp.poly(i).b.e[t]) % p);
    }

    // K = radical of the combination within H; codim_H(K) = rank < R.
    std::vector<LinearForm> radical_forms;
    for (int j = 0; j < h.dim(); ++j) radical_forms.push_back(bilinear_row_form(b_comb, h.basis_vector(j)));
    Subspace k = kernel(radical_forms, h);
    if (h.dim() - k.dim() >= target_rank) throw CheckFailed("radical codimension reached R");

    std::vector<FpVector> h_points = h.enumerate_points();
    std::vector<FpVector> k_points = k.enumerate_points();

    // Per set: locate the density witness, align it with a K-coset, then
    // express the final form's constraint on K as an affine-linear one.
    std::vector<LinearForm> slice_forms;
    std::vector<int> slice_values;
    std::vector<std::vector<LinearForm>> tilde_l(sets.size());
    std::vector<std::vector<int>> tilde_a(sets.size());
    std::vector<FpVector> tilde_x;
    std::vector<Rat> level_base;
    for (size_t si = 0; si < sets.size(); ++si) {
      DensityWitness w = max_level_density(sets[si], qp, budget);
      level_base.push_back(w.delta);
      std::vector<LinearForm> ambient_l;
      for (const LinearForm& cov : w.shifts) ambient_l.push_back(lift_covector(cov, h));

      // Best K-coset of the witness cell.
      Rat base = w.delta;
      FpVector best_t = FpVector::zero(p, h.ambient_dim());
      Rat best_ratio(-1, 1);
      for (const FpVector& t : h.coset_reps(k)) {
        std::vector<LinearForm> lt = ambient_l;
        std::vector<int> at(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) {
          lt[static_cast<size_t>(i)] = ambient_l[static_cast<size_t>(i)] +
                                       (2 * bilinear_row_form(qp.poly(i).b, t));
          at[static_cast<size_t>(i)] =
              fp_reduce(w.value[static_cast<size_t>(i)] - qp.poly(i).eval(t) -
                            ambient_l[static_cast<size_t>(i)].eval(t),
                        p);
        }
        Rat ratio;
        if (!cell_density(sets[si], k_points, qp, lt, at, w.translate + t, ratio)) continue;
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best_t = t;
          tilde_l[si] = lt;
          tilde_a[si] = at;
        }
      }
      if (best_ratio < base) throw CheckFailed("K-coset pigeonhole lost density");
      tilde_x.push_back(w.translate + best_t);

      // On K the final form equals sum_i lam_i q_i, so its cell constraint
      // becomes linear: (l_d - sum lam_i l_i)(k) = a_d - sum lam_i a_i.
      LinearForm lin = tilde_l[si][static_cast<size_t>(d - 1)];
      int val = tilde_a[si][static_cast<size_t>(d - 1)];
      for (int i = 0; i < d - 1; ++i) {
        if (!lam[static_cast<size_t>(i)]) continue;
        lin = lin - (lam[static_cast<size_t>(i)] * tilde_l[si][static_cast<size_t>(i)]);
        val = fp_reduce(val - lam[static_cast<size_t>(i)] * tilde_a[si][static_cast<size_t>(i)], p);
      }
      slice_forms.push_back(lin);
      slice_values.push_back(val);
    }

    Subspace k_hat = kernel(slice_forms, k);
    if (k.dim() - k_hat.dim() > r) throw CheckFailed("slice codimension exceeded r");

    // Recurse on the first d-1 forms over K^.
    QuadTuple q_next = qp.prefix(d - 1).with_domain(k_hat);

    // Sanity: for each set some K^-coset cell still attains the density.
    std::vector<FpVector> khat_points = k_hat.enumerate_points();
    for (size_t si = 0; si < sets.size(); ++si) {
      // Solve for s_i in K with lin(s_i) = val, then scan K^-cosets inside
      // K cap ker(lin) + s_i.
      const LinearForm& lin = slice_forms[si];
      int val = slice_values[si];
      FpVector s_i = FpVector::zero(p, h.ambient_dim());
      bool found = false;
      for (const FpVector& kp : k_points)
        if (lin.eval(kp) == val) {
          s_i = kp;
          found = true;
          break;
        }
      if (!found) throw CheckFailed("witness slice has no solution in K");
      Subspace k_lin = kernel({lin}, k);
      Rat best_ratio(-1, 1);
      std::vector<LinearForm> dropped_l(tilde_l[si].begin(), tilde_l[si].end() - 1);
      std::vector<int> dropped_a(tilde_a[si].begin(), tilde_a[si].end() - 1);
      QuadTuple q_prefix = qp.prefix(d - 1);
      for (const FpVector& u : k_lin.coset_reps(k_hat)) {
        FpVector y = u + s_i;
        std::vector<LinearForm> lt = dropped_l;
        std::vector<int> at(static_cast<size_t>(d - 1));
        for (int i = 0; i < d - 1; ++i) {
          lt[static_cast<size_t>(i)] =
              dropped_l[static_cast<size_t>(i)] + (2 * bilinear_row_form(q_prefix.poly(i).b, y));
          at[static_cast<size_t>(i)] = fp_reduce(
              dropped_a[static_cast<size_t>(i)] - q_prefix.poly(i).eval(y) -
                  dropped_l[static_cast<size_t>(i)].eval(y),
              p);
        }
        Rat ratio;
        if (!cell_density(sets[si], khat_points, q_prefix, lt, at, tilde_x[si] + y, ratio)) continue;
        if (ratio > best_ratio) best_ratio = ratio;
      }
      if (best_ratio < level_base[si]) throw CheckFailed("K^-coset pigeonhole lost density");
    }

    h = k_hat;
    q = q_next;
  }

  res.new_domain = h;
  res.new_tuple = q;
  res.stats.codim_increase = h0.dim() - h.dim();
  res.stats.d_out = q.d();
  RankCertificate final_cert = tuple_rank(q);
  res.stats.rank_achieved = final_cert.infinite ? -1 : final_cert.rank;

  // The four output guarantees, hard-asserted on every call.
  if (!final_cert.at_least(target_rank)) throw CheckFailed("partition output rank below target");
  if (res.stats.codim_increase > (target_rank + r - 1) * d0)
    throw CheckFailed("partition codimension exceeded (R+r-1)d");
  if (res.stats.d_out > d0) throw CheckFailed("partition increased the tuple length");
  for (size_t si = 0; si < sets.size(); ++si) {
    Rat after = max_level_density(sets[si], q, budget).delta;
    res.stats.densities_after.push_back(after);
    if (after < res.stats.densities_before[si]) throw CheckFailed("partition lost density");
  }
  return res;
}

Classification classify(const PointSet& a, const QuadTuple& q, const Rat& alpha, const Rat& beta,
                        const DensityBudget& budget) {
  Classification cls{SetClass::Sparse, Rat(0, 1), 0, 0};
  cls.density = max_level_density(a, q, budget).delta;
  PointSet z = zero_level_set(q);
  cls.level_size = z.size();
  cls.expansion_count = expansion_set(a, q).size();
  if (cls.density < alpha) {
    cls.tag = SetClass::Sparse;
  } else {
    // expansion_count > (1 - beta) |Z|, exactly.
    Rat lhs(static_cast<long long>(cls.expansion_count), 1);
    Rat rhs = (Rat(1, 1) - beta) * Rat(static_cast<long long>(cls.level_size), 1);
    cls.tag = lhs > rhs ? SetClass::DenseExpanding : SetClass::DenseNonExpanding;
  }
  return cls;
}

std::optional<IncrementResult> find_increment(const PointSet& a, const QuadTuple& q,
                                              const Rat& gain_threshold, const DensityBudget& budget,
                                              u64 candidate_budget) {
  const int p = q.p();
  const int nn = q.ambient_dim();
  const unsigned tri = static_cast<unsigned>(nn * (nn + 1) / 2);
  const u64 candidates = ipow(static_cast<u64>(p), tri);
  Rat base = max_level_density(a, q, budget).delta;

  bool exhaustive = candidates <= candidate_budget;
  u64 examined = exhaustive ? candidates : budget.samples;

  // Candidate code -> symmetric matrix via upper-triangle digits.
  auto decode = [&](u64 code) {
    FpMatrix b(p, nn, nn);
    for (int i = nn - 1; i >= 0; --i)
      for (int j = nn - 1; j >= i; --j) {
        int digit = static_cast<int>(code % static_cast<u64>(p));
        code /= static_cast<u64>(p);
        b.set(i, j, digit);
        b.set(j, i, digit);
      }
    return b;
  };

  std::vector<Rat> gains(examined, Rat(-1, 1));
  DensityBudget inner = budget;
  inner.threads = 1;
  std::vector<u64> codes(examined);
  if (exhaustive) {
    for (u64 i = 0; i < examined; ++i) codes[i] = i;
  } else {
    SplitMix64 rng(budget.seed);
    for (u64 i = 0; i < examined; ++i) codes[i] = rng.uniform_below(candidates);
  }
  parallel_for(examined, budget.threads, [&](size_t idx) {
    QuadraticPoly cand = QuadraticPoly::homogeneous(decode(codes[idx]));
    gains[idx] = max_level_density(a, q.appended(cand), inner).delta - base;
  });

  u64 best = 0;
  for (u64 i = 1; i < examined; ++i)
    if (gains[i] > gains[best]) best = i;
  if (gains[best] < gain_threshold) return std::nullopt;
  return IncrementResult{QuadraticPoly::homogeneous(decode(codes[best])), gains[best]};
}

namespace {

SetVerdict make_verdict(const PointSet& a, const QuadTuple& q, const Rat& alpha, const Rat& beta) {
  SetVerdict v;
  PointSet z = zero_level_set(q);
  v.level_size = z.size();
  v.intersection = intersect(a, z).size();
  v.expansion_count = expansion_set(a, q).size();
  v.sparse = Rat(static_cast<long long>(v.intersection), 1) <
             alpha * Rat(static_cast<long long>(v.level_size), 1);
  v.expanding = Rat(static_cast<long long>(v.expansion_count), 1) >
                (Rat(1, 1) - beta) * Rat(static_cast<long long>(v.level_size), 1);
  return v;
}

std::string class_name(SetClass c) {
  switch (c) {
    case SetClass::Sparse: return "sparse";
    case SetClass::DenseExpanding: return "dense-expanding";
    default: return "dense-non-expanding";
  }
}

}  // namespace

IterationOutcome sparsity_expansion_iterate(const std::vector<PointSet>& sets, int p, int n,
                                            const IterationConfig& config) {
  require_prime(p);
  const int r = static_cast<int>(sets.size());
  const int big_r = config.rank_target;
  IterationOutcome out;

  Subspace h = Subspace::full(p, n);
  QuadTuple q(h, {});
  for (int m = 0;; ++m) {
    if (m > config.max_stages) {
      out.failure = "stage limit reached";
      return out;
    }

    StageTrace stage;
    stage.m = m;
    stage.d = q.d();
    stage.codim = n - h.dim();
    RankCertificate cert = tuple_rank(q);
    stage.rank = cert.infinite ? -1 : cert.rank;

    // Stage bookkeeping, asserted every time.
    if (stage.d > m) throw CheckFailed("iteration invariant d <= m violated");
    if (!cert.at_least(big_r)) throw CheckFailed("iteration invariant rank >= R violated");
    if (stage.codim > (big_r + r - 1) * m * (m + 1) / 2)
      throw CheckFailed("iteration codimension invariant violated");
    // level set = {0} forces dim H <= 2d (zero-dimensional zero locus).
    PointSet z = zero_level_set(q);
    if (z.size() == 1 && h.dim() > 2 * q.d())
      throw CheckFailed("trivial zero set with dim H > 2d");

    std::vector<Classification> classes;
    Rat density_sum(0, 1);
    int pending = -1;
    for (int i = 0; i < r; ++i) {
      classes.push_back(classify(sets[static_cast<size_t>(i)], q, config.alpha, config.beta,
                                 config.density_budget));
      stage.classes.push_back(classes.back().tag);
      density_sum += classes.back().density;
      if (pending < 0 && classes.back().tag == SetClass::DenseNonExpanding) pending = i;
    }
    stage.density_sum = density_sum;

    if (pending < 0) {
      stage.action = "terminate";
      out.trace.push_back(stage);
      DichotomyCertificate cert_out{h, q, config.alpha, config.beta, {}};
      for (const PointSet& a : sets)
        cert_out.verdicts.push_back(make_verdict(a, q, config.alpha, config.beta));
      for (size_t i = 0; i < cert_out.verdicts.size(); ++i)
        if (!cert_out.verdicts[i].sparse && !cert_out.verdicts[i].expanding)
          throw CheckFailed("certificate verdict fails the dichotomy for set " + std::to_string(i));
      out.certificate = std::move(cert_out);
      out.terminated = true;
      out.stages = m;
      return out;
    }

    auto inc = find_increment(sets[static_cast<size_t>(pending)], q, config.gain_threshold,
                              config.density_budget, config.candidate_budget);
    if (!inc) {
      stage.action = "no-increment(set=" + std::to_string(pending) + ")";
      out.trace.push_back(stage);
      out.failure = "no increment above threshold for " + class_name(SetClass::DenseNonExpanding) +
                    " set " + std::to_string(pending);
      out.stages = m;
      return out;
    }
    stage.action = "increment(set=" + std::to_string(pending) + ", gain=" + to_string(inc->gain) + ")";
    out.trace.push_back(stage);

    QuadTuple extended = q.appended(inc->q);
    PartitionResult part = high_rank_partition(extended, big_r, sets, config.density_budget);
    h = part.new_domain;
    q = part.new_tuple;
  }
}

bool verify_certificate(const DichotomyCertificate& cert, const std::vector<PointSet>& sets,
                        const DensityBudget& budget) {
  (void)budget;
  if (cert.verdicts.size() != sets.size()) return false;
  for (size_t i = 0; i < sets.size(); ++i) {
    SetVerdict fresh = make_verdict(sets[i], cert.tuple, cert.alpha, cert.beta);
    const SetVerdict& rec = cert.verdicts[i];
    if (fresh.intersection != rec.intersection || fresh.expansion_count != rec.expansion_count ||
        fresh.level_size != rec.level_size)
      return false;
    if (fresh.sparse != rec.sparse || fresh.expanding != rec.expanding) return false;
    if (!fresh.sparse && !fresh.expanding) return false;
  }
  return true;
}

}  // namespace qfa
