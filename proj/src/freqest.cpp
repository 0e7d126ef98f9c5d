#include "mdcrt/freqest.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

namespace mdcrt {

namespace {

std::int64_t to_i64(const Int& x) {
  if (!x.fits_slong_p()) fail(ErrorCode::BoundExceeded, "value too large for the DFT index tables");
  return x.get_si();
}

std::int64_t mod_i64(const Int& x, std::int64_t m) {
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(m));
  return r.get_si();
}

std::vector<Complex> unit_roots(std::int64_t n, double sign) {
  std::vector<Complex> w(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n; ++t) {
    const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
    w[static_cast<std::size_t>(t)] = {std::cos(ang), std::sin(ang)};
  }
  return w;
}

// Integer phase of k^T M^{-T} n in units of 1/|det M|: returns p with
// p[n] = sign(det) adj(M^T) n mod |det|, so the phase of (k, n) is k . p[n].
std::vector<std::vector<std::int64_t>> phase_rows(const IntMat& m, const std::vector<IntVec>& ns) {
  Modulus mt(m.transpose());
  const std::int64_t ad = to_i64(abs(mt.det()));
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(ns.size());
  for (const auto& n : ns) {
    IntVec y = mt.scaled_coords(n);
    std::vector<std::int64_t> row(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) row[j] = mod_i64(y[j], ad);
    out.push_back(std::move(row));
  }
  return out;
}

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

double SignalModel::snr_db() const {
  if (sigma == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(std::norm(a) / (2.0 * sigma * sigma));
}

SignalModel SignalModel::from_snr(IntVec f, Complex a, double snr_db) {
  SignalModel s{std::move(f), a, 0.0};
  if (std::isfinite(snr_db)) s.sigma = std::abs(a) / std::sqrt(2.0 * std::pow(10.0, snr_db / 10.0));
  return s;
}

SampledSignal sample_signal(const SignalModel& model, const IntMat& mi, Rng& rng) {
  if (model.f.size() != mi.rows()) fail(ErrorCode::ShapeMismatch, "sample_signal: frequency dimension mismatch");
  if (model.sigma < 0) fail(ErrorCode::InvalidArgument, "sample_signal: negative noise level");
  SampledSignal s{mi, residue_set(mi.transpose()), {}};
  Modulus mt(mi.transpose());
  const std::int64_t ad = to_i64(abs(mt.det()));
  const auto roots = unit_roots(ad, +1.0);
  // f^T M^{-T} n = (M^{-1} f)^T n; reduce the integer numerator first.
  Modulus mm(mi);
  IntVec g = mm.scaled_coords(model.f);
  std::vector<std::int64_t> gr(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) gr[j] = mod_i64(g[j], ad);
  s.x.reserve(s.n.size());
  for (const auto& n : s.n) {
    std::int64_t p = 0;
    for (std::size_t j = 0; j < n.size(); ++j) p = (p + gr[j] * mod_i64(n[j], ad)) % ad;
    Complex v = model.a * roots[static_cast<std::size_t>(p)];
    if (model.sigma > 0) {
      const double re = rng.normal(), im = rng.normal();
      v += Complex(model.sigma * re, model.sigma * im);
    }
    s.x.push_back(v);
  }
  return s;
}

DftSpectrum md_dft(const SampledSignal& samples, const IntMat& mi) {
  if (!(samples.modulus == mi)) fail(ErrorCode::InvalidArgument, "md_dft: samples belong to another modulus");
  if (samples.n.size() != samples.x.size()) fail(ErrorCode::InvalidArgument, "md_dft: index/value count mismatch");
  DftSpectrum spec{mi, residue_set(mi), {}};
  if (spec.k.size() != samples.n.size()) fail(ErrorCode::InvalidArgument, "md_dft: sample count is not |det M|");
  const std::int64_t ad = static_cast<std::int64_t>(samples.n.size());
  const auto roots = unit_roots(ad, -1.0);
  const auto rows = phase_rows(mi, samples.n);
  spec.values.assign(spec.k.size(), Complex(0, 0));
  for (std::size_t a = 0; a < spec.k.size(); ++a) {
    std::vector<std::int64_t> k(spec.k[a].size());
    for (std::size_t j = 0; j < k.size(); ++j) k[j] = mod_i64(spec.k[a][j], ad);
    Complex acc(0, 0);
    for (std::size_t b = 0; b < rows.size(); ++b) {
      std::int64_t p = 0;
      for (std::size_t j = 0; j < k.size(); ++j) p = (p + k[j] * rows[b][j]) % ad;
      acc += samples.x[b] * roots[static_cast<std::size_t>(p)];
    }
    spec.values[a] = acc;
  }
  return spec;
}

SeparableDft::SeparableDft(const IntMat& m) : m_(m), s_(smith(m)) {
  u_inv_ = inv_unimodular(s_.U);
  vt_ = s_.V.transpose();
  const std::size_t d = m.rows();
  for (std::size_t j = 0; j < d; ++j) {
    lambda_.push_back(to_i64(s_.Lambda(j, j)));
    size_ *= static_cast<std::size_t>(lambda_.back());
  }
  std::vector<int> dims(lambda_.begin(), lambda_.end());
  std::vector<Complex> a(size_), b(size_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_plan p = fftw_plan_dft(static_cast<int>(d), dims.data(), reinterpret_cast<fftw_complex*>(a.data()),
                              reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) fail(ErrorCode::InvalidArgument, "FFT planning failed");
  plan_ = std::shared_ptr<void>(p, [](void* q) {
    std::lock_guard<std::mutex> l(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(q));
  });
}

std::vector<std::int64_t> SeparableDft::digits_of(const IntVec& v, const IntMat& t) const {
  IntVec y = t * v;
  std::vector<std::int64_t> d(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) d[j] = mod_i64(y[j], lambda_[j]);
  return d;
}

std::size_t SeparableDft::slot_of(const std::vector<std::int64_t>& digits) const {
  std::size_t s = 0;
  for (std::size_t j = 0; j < digits.size(); ++j) s = s * static_cast<std::size_t>(lambda_[j]) + digits[j];
  return s;
}

std::size_t SeparableDft::sample_slot(const IntVec& n) const { return slot_of(digits_of(n, vt_)); }

std::size_t SeparableDft::frequency_slot(const IntVec& k) const { return slot_of(digits_of(k, s_.U)); }

IntVec SeparableDft::frequency_at(std::size_t slot) const {
  const std::size_t d = lambda_.size();
  IntVec a(d);
  for (std::size_t j = d; j-- > 0;) {
    a[j] = static_cast<unsigned long>(slot % static_cast<std::size_t>(lambda_[j]));
    slot /= static_cast<std::size_t>(lambda_[j]);
  }
  return m_.reduce(u_inv_ * a);
}

std::vector<Complex> SeparableDft::tone(const IntVec& f, Complex a) const {
  // Phase on the grid is sum_j c_j b_j / lambda_j with c = U f; lambda_D is a
  // common multiple of all lambda_j by the divisibility chain.
  const std::size_t d = lambda_.size();
  const std::int64_t top = lambda_.back();
  std::vector<std::int64_t> c = digits_of(f, s_.U), scale(d);
  for (std::size_t j = 0; j < d; ++j) scale[j] = (top / lambda_[j]) * c[j] % top;
  const auto roots = unit_roots(top, +1.0);
  std::vector<Complex> out(size_);
  std::vector<std::int64_t> b(d, 0);
  for (std::size_t s = 0; s < size_; ++s) {
    std::int64_t p = 0;
    for (std::size_t j = 0; j < d; ++j) p = (p + scale[j] * b[j]) % top;
    out[s] = a * roots[static_cast<std::size_t>(p)];
    for (std::size_t j = d; j-- > 0;) {
      if (++b[j] < lambda_[j]) break;
      b[j] = 0;
    }
  }
  return out;
}

void SeparableDft::transform(const std::vector<Complex>& in, std::vector<Complex>& out) const {
  if (in.size() != size_) fail(ErrorCode::ShapeMismatch, "separable DFT: input size mismatch");
  out.resize(size_);
  std::vector<Complex> tmp(in);  // FFTW may not preserve the input
  fftw_execute_dft(static_cast<fftw_plan>(plan_.get()), reinterpret_cast<fftw_complex*>(tmp.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

DftSpectrum md_dft_separable(const SampledSignal& samples, const IntMat& mi) {
  if (!(samples.modulus == mi)) fail(ErrorCode::InvalidArgument, "md_dft: samples belong to another modulus");
  SeparableDft plan(mi);
  if (samples.n.size() != plan.size() || samples.x.size() != plan.size())
    fail(ErrorCode::InvalidArgument, "md_dft: sample count is not |det M|");
  std::vector<Complex> grid(plan.size()), out;
  for (std::size_t i = 0; i < samples.n.size(); ++i) grid[plan.sample_slot(samples.n[i])] = samples.x[i];
  plan.transform(grid, out);
  DftSpectrum spec{mi, residue_set(mi), {}};
  spec.values.reserve(spec.k.size());
  for (const auto& k : spec.k) spec.values.push_back(out[plan.frequency_slot(k)]);
  return spec;
}

IntVec detect_remainder(const DftSpectrum& spec) {
  if (spec.values.empty() || spec.values.size() != spec.k.size())
    fail(ErrorCode::InvalidArgument, "detect_remainder: empty or malformed spectrum");
  std::size_t best = 0;
  double mag = std::norm(spec.values[0]);
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    const double m = std::norm(spec.values[i]);
    if (m > mag || (m == mag && spec.k[i] < spec.k[best])) {
      best = i;
      mag = m;
    }
  }
  return spec.k[best];
}

double peak_to_mean(const DftSpectrum& spec) {
  double peak = 0, sum = 0;
  for (const auto& v : spec.values) {
    peak = std::max(peak, std::abs(v));
    sum += std::abs(v);
  }
  return sum > 0 ? peak * static_cast<double>(spec.values.size()) / sum : 0.0;
}

FrequencyEstimate estimate_frequency(const std::vector<DftSpectrum>& specs, const RobustModuli& rm, int algorithm,
                                     const RobustOptions& opts) {
  if (specs.size() != rm.size()) fail(ErrorCode::ShapeMismatch, "estimate_frequency: one spectrum per modulus");
  FrequencyEstimate est;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!(specs[i].modulus == rm.moduli()[i]))
      fail(ErrorCode::InvalidArgument, "estimate_frequency: spectrum modulus mismatch");
    est.remainders.push_back(detect_remainder(specs[i]));
  }
  est.trace = RobustSolver(rm, algorithm, opts).solve(est.remainders);
  if (est.trace.success) est.f = robust_reconstruct(est.trace, est.remainders, rm);
  return est;
}

std::vector<SnrRow> snr_sweep(const SnrConfig& cfg) {
  struct Trial {
    bool success = false, reconstructed = false;
    double rel = 0;
  };
  std::vector<SnrRow> rows;
  double fnorm = 0;
  for (const auto& x : cfg.f) fnorm += x.get_d() * x.get_d();
  fnorm = std::sqrt(fnorm);
  if (fnorm == 0) fail(ErrorCode::InvalidArgument, "snr_sweep: frequency must be nonzero");

  for (std::size_t ci = 0; ci < cfg.cases.size(); ++ci) {
    const RobustModuli& rm = cfg.cases[ci].moduli;
    RobustOptions opts;
    opts.norm = cfg.norm;
    const RobustSolver solver(rm, cfg.algorithm, opts);
    std::vector<SeparableDft> plans;
    std::vector<std::vector<Complex>> tones;
    std::vector<IntVec> folds;
    for (const auto& m : rm.moduli()) {
      plans.emplace_back(m);
      tones.push_back(plans.back().tone(cfg.f, cfg.a));
      folds.push_back(folding_vector(cfg.f, m));
    }
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
      const SignalModel model = SignalModel::from_snr(cfg.f, cfg.a, cfg.snr_db[si]);
      std::vector<Trial> out(cfg.trials);
      parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
        Rng rng(derive_seed(cfg.seed, {ci, si, t}));
        std::vector<IntVec> rtilde;
        std::vector<Complex> grid, spec;
        for (std::size_t i = 0; i < plans.size(); ++i) {
          grid = tones[i];
          if (model.sigma > 0)
            for (auto& g : grid) {
              const double re = rng.normal(), im = rng.normal();
              g += Complex(model.sigma * re, model.sigma * im);
            }
          plans[i].transform(grid, spec);
          std::size_t best = 0;
          double mag = std::norm(spec[0]);
          std::vector<std::size_t> ties{0};
          for (std::size_t s = 1; s < spec.size(); ++s) {
            const double m = std::norm(spec[s]);
            if (m > mag) {
              mag = m;
              best = s;
              ties.assign(1, s);
            } else if (m == mag) {
              ties.push_back(s);
            }
          }
          IntVec k = plans[i].frequency_at(best);
          for (std::size_t s : ties) {
            IntVec kk = plans[i].frequency_at(s);
            if (kk < k) k = kk;
          }
          rtilde.push_back(std::move(k));
        }
        RobustTrace tr = solver.solve(rtilde);
        Trial& r = out[t];
        if (!tr.success) return;
        r.success = tr.folding == folds;
        Reconstruction rec = robust_reconstruct(tr, rtilde, rm);
        double e = 0;
        for (std::size_t j = 0; j < cfg.f.size(); ++j) {
          const double dj = Rat(rec.value[j] - Rat(cfg.f[j])).get_d();
          e += dj * dj;
        }
        r.reconstructed = true;
        r.rel = std::sqrt(e) / fnorm;
      });
      SnrRow row{cfg.cases[ci].name, cfg.snr_db[si]};
      row.trials = cfg.trials;
      std::size_t ok = 0, rec = 0;
      double sum = 0, sum2 = 0;
      for (const auto& t : out) {
        ok += t.success;
        if (t.reconstructed) {
          ++rec;
          sum += t.rel;
          sum2 += t.rel * t.rel;
        }
      }
      const double n = static_cast<double>(cfg.trials);
      row.p_detect = n > 0 ? static_cast<double>(ok) / n : 0.0;
      row.se_detect = n > 0 ? std::sqrt(row.p_detect * (1 - row.p_detect) / n) : 0.0;
      if (rec > 0) {
        const double r = static_cast<double>(rec);
        row.mean_rel_error = sum / r;
        const double var = rec > 1 ? std::max(0.0, (sum2 - sum * sum / r) / (r - 1)) : 0.0;
        row.se_rel_error = std::sqrt(var / r);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace mdcrt
