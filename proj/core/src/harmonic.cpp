#include "qfa/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "qfa/parallel.hpp"

namespace qfa {

namespace {

// One radix-p butterfly pass along each coordinate axis.  `kernel[k][t]`
// multiplies the contribution of digit t to output digit k.
void tensor_transform(std::vector<cplx>& v, int p, int dims, const std::vector<cplx>& kernel) {
  const u64 n = v.size();
  std::vector<cplx> scratch(static_cast<size_t>(p));
  u64 stride = n / static_cast<u64>(p);  // axis 0 is the most significant digit
  for (int axis = 0; axis < dims; ++axis) {
    const u64 block = stride * static_cast<u64>(p);
    for (u64 base = 0; base < n; base += block) {
      for (u64 off = 0; off < stride; ++off) {
        for (int k = 0; k < p; ++k) scratch[static_cast<size_t>(k)] = v[base + off + static_cast<u64>(k) * stride];
        for (int k = 0; k < p; ++k) {
          cplx acc(0.0, 0.0);
          for (int t = 0; t < p; ++t)
            acc += scratch[static_cast<size_t>(t)] * kernel[static_cast<size_t>(k * p + t)];
          v[base + off + static_cast<u64>(k) * stride] = acc;
        }
      }
    }
    stride /= static_cast<u64>(p);
  }
}

std::vector<cplx> forward_kernel(int p) {
  UnitRoots w(p);
  std::vector<cplx> kernel(static_cast<size_t>(p * p));
  for (int k = 0; k < p; ++k)
    for (int t = 0; t < p; ++t) kernel[static_cast<size_t>(k * p + t)] = w(static_cast<long long>(k) * t);
  return kernel;
}

std::vector<cplx> backward_kernel(int p) {
  UnitRoots w(p);
  std::vector<cplx> kernel(static_cast<size_t>(p * p));
  for (int k = 0; k < p; ++k)
    for (int t = 0; t < p; ++t) kernel[static_cast<size_t>(k * p + t)] = w(-static_cast<long long>(k) * t);
  return kernel;
}

double fourth_moment(const std::vector<cplx>& vals) {
  std::vector<double> terms(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) {
    double m = std::norm(vals[i]);
    terms[i] = m * m;
  }
  return pairwise_sum(terms);
}

}  // namespace

DualFunction dft(const DenseFunction& f) {
  DualFunction out{f.domain(), f.values()};
  if (f.domain().dim() > 0)
    tensor_transform(out.values, f.domain().p(), f.domain().dim(), forward_kernel(f.domain().p()));
  return out;
}

DenseFunction inverse_dft(const DualFunction& fhat) {
  std::vector<cplx> v = fhat.values;
  const Subspace& dom = fhat.primal_domain;
  if (dom.dim() > 0) tensor_transform(v, dom.p(), dom.dim(), backward_kernel(dom.p()));
  double scale = 1.0 / static_cast<double>(v.size());
  for (cplx& z : v) z *= scale;
  return DenseFunction::from_values(dom, std::move(v));
}

DenseFunction difference_fn(const DenseFunction& f, const FpVector& h) {
  const Subspace& dom = f.domain();
  if (h.dim() != dom.ambient_dim()) throw BadParams("difference direction has wrong dimension");
  std::vector<cplx> v(f.size());
  if (!dom.linear_part().contains(h)) {
    // x + h leaves the domain for every x, so f(x+h) = 0 identically.
    return DenseFunction::from_values(dom, std::move(v));
  }
  // Work on coefficient tuples: index(x + h) = index shift by coeffs(h).
  FpVector th = dom.linear_part().coefficients_of(h);
  const int p = dom.p();
  const int m = dom.dim();
  for (u64 i = 0; i < f.size(); ++i) {
    FpVector t = point_from_code(i, p, m);
    u64 j = point_code(t + th);
    v[i] = f[i] * std::conj(f[j]);
  }
  return DenseFunction::from_values(dom, std::move(v));
}

double u2_norm(const DenseFunction& f) {
  DualFunction fh = dft(f);
  double mean4 = fourth_moment(fh.values) / static_cast<double>(fh.values.size());
  return std::pow(mean4, 0.25);
}

double u2_norm_direct(const DenseFunction& f) {
  const int p = f.domain().p();
  const int m = f.domain().dim();
  const u64 n = f.size();
  std::vector<FpVector> tuples(n);
  for (u64 i = 0; i < n; ++i) tuples[i] = point_from_code(i, p, m);
  std::vector<double> terms;
  terms.reserve(n * n);
  for (u64 x = 0; x < n; ++x)
    for (u64 h1 = 0; h1 < n; ++h1) {
      const u64 xh1 = point_code(tuples[x] + tuples[h1]);
      cplx partial = f[x] * std::conj(f[xh1]);
      cplx acc(0.0, 0.0);
      for (u64 h2 = 0; h2 < n; ++h2) {
        const u64 xh2 = point_code(tuples[x] + tuples[h2]);
        const u64 xh12 = point_code(tuples[xh1] + tuples[h2]);
        acc += std::conj(f[xh2]) * f[xh12];
      }
      terms.push_back((partial * acc).real());
    }
  double s = pairwise_sum(terms);
  return std::pow(std::max(s, 0.0), 0.25);
}

double u3_norm(const DenseFunction& f, u64 domain_budget, int threads) {
  const Subspace& dom = f.domain();
  if (f.size() > domain_budget) throw BudgetExceeded("U^3 norm domain");
  const u64 n = f.size();
  std::vector<double> per_h(n, 0.0);
  parallel_for(n, threads, [&](size_t hi) {
    FpVector h = dom.point_at(hi) - dom.offset();
    DenseFunction dh = difference_fn(f, h);
    DualFunction dhat = dft(dh);
    per_h[hi] = fourth_moment(dhat.values) / static_cast<double>(n);
  });
  double s = pairwise_sum(per_h);
  return std::pow(std::max(s, 0.0), 0.125);
}

std::vector<LinearForm> spectrum(const DenseFunction& f, double K) {
  if (!(K > 0.0)) throw BadParams("spectrum threshold must be positive");
  DualFunction fh = dft(f);
  std::vector<LinearForm> out;
  for (u64 c = 0; c < fh.values.size(); ++c)
    if (std::abs(fh.values[c]) >= K) out.push_back(form_from_code(c, f.domain().p(), f.domain().dim()));
  return out;
}

UniformityReport fourier_uniformity(const PointSet& phi, const Subspace& h) {
  if (phi.empty()) throw EmptySetError("fourier_uniformity");
  DenseFunction ind = DenseFunction::indicator(h, phi);
  if (static_cast<u64>(ind.l2_norm_squared() + 0.5) != phi.size())
    throw SupportViolation("Phi is not contained in H");
  DualFunction fh = dft(ind);
  UniformityReport rep;
  rep.set_size = phi.size();
  rep.density = static_cast<double>(phi.size()) / static_cast<double>(h.point_count());
  rep.max_witness = LinearForm::zero(h.p(), h.dim());
  double best = -1.0;
  for (u64 c = 1; c < fh.values.size(); ++c) {
    double v = std::abs(fh.values[c]);
    if (v > best + 1e-12) {
      best = v;
      rep.max_witness = form_from_code(c, h.p(), h.dim());
    }
  }
  rep.epsilon = fh.values.size() == 1 ? 0.0 : best / static_cast<double>(phi.size());
  if (h.dim() == 0) rep.epsilon = 0.0;
  return rep;
}

SpectralCheck check_spectral_estimate(const DenseFunction& f, const PointSet& phi, double K) {
  if (!f.supported_in(phi)) throw SupportViolation("supp(f) must lie in Phi");
  SpectralCheck rec;
  rec.K = K;
  UniformityReport u = fourier_uniformity(phi, f.domain());
  rec.epsilon = u.epsilon;
  double l2sq = f.l2_norm_squared();
  rec.threshold = std::sqrt(2.0 * u.epsilon * static_cast<double>(phi.size())) * std::sqrt(l2sq);
  rec.precondition_met = K >= rec.threshold - 1e-12;
  DualFunction fh = dft(f);
  u64 count = 0;
  for (const cplx& z : fh.values)
    if (std::abs(z) >= K) ++count;
  rec.spectrum_size = count;
  rec.bound = 2.0 * static_cast<double>(phi.size()) * l2sq / (K * K);
  rec.pass = static_cast<double>(count) <= rec.bound * (1.0 + 1e-12) + 1e-9;
  return rec;
}

RestrictionCheck check_restriction(const DenseFunction& f, const PointSet& phi, double q_exp) {
  if (!(q_exp > 2.0)) throw BadParams("restriction estimate needs q > 2");
  if (!f.supported_in(phi)) throw SupportViolation("supp(f) must lie in Phi");
  RestrictionCheck rec;
  rec.q_exp = q_exp;
  UniformityReport u = fourier_uniformity(phi, f.domain());
  rec.epsilon = u.epsilon;
  DualFunction fh = dft(f);
  std::vector<double> terms(fh.values.size());
  for (size_t i = 0; i < fh.values.size(); ++i) terms[i] = std::pow(std::abs(fh.values[i]), q_exp);
  rec.lhs = pairwise_sum(terms) / static_cast<double>(fh.values.size());
  double l2 = std::sqrt(f.l2_norm_squared());
  double g = static_cast<double>(f.size());
  rec.rhs_no_const = std::pow(l2, q_exp) * std::pow(static_cast<double>(phi.size()), q_exp / 2.0) *
                     (1.0 / g + std::pow(u.epsilon, q_exp / 2.0 - 1.0) / static_cast<double>(phi.size()));
  rec.ratio = rec.rhs_no_const > 0.0 ? rec.lhs / rec.rhs_no_const : 0.0;
  return rec;
}

U2InverseWitness u2_inverse_witness(const DenseFunction& f, const PointSet& phi) {
  if (!f.supported_in(phi)) throw SupportViolation("supp(f) must lie in Phi");
  U2InverseWitness w;
  UniformityReport u = fourier_uniformity(phi, f.domain());
  w.epsilon = u.epsilon;
  w.density = u.density;
  w.hypothesis_met = u.epsilon <= u.density * u.density + 1e-12;
  DualFunction fh = dft(f);
  u64 best = 0;
  double best_val = -1.0;
  for (u64 c = 0; c < fh.values.size(); ++c) {
    double v = std::abs(fh.values[c]);
    if (v > best_val + 1e-12) {
      best_val = v;
      best = c;
    }
  }
  w.witness = form_from_code(best, f.domain().p(), f.domain().dim());
  w.correlation = std::max(best_val, 0.0);
  return w;
}

}  // namespace qfa
