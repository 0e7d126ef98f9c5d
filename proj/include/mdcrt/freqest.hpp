#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mdcrt/robust.hpp"

namespace mdcrt {

using Complex = std::complex<double>;

struct SignalModel {
  IntVec f;
  Complex a{1.0, 0.0};
  double sigma = 0.0;  // per real component

  double snr_db() const;
  static SignalModel from_snr(IntVec f, Complex a, double snr_db);
};

// Samples over n in N(M^T), in lexicographic order of n.
struct SampledSignal {
  IntMat modulus;
  std::vector<IntVec> n;
  std::vector<Complex> x;
};

// Spectrum over k in N(M), in lexicographic order of k.
struct DftSpectrum {
  IntMat modulus;
  std::vector<IntVec> k;
  std::vector<Complex> values;
};

SampledSignal sample_signal(const SignalModel& model, const IntMat& mi, Rng& rng);
DftSpectrum md_dft(const SampledSignal& samples, const IntMat& mi);
DftSpectrum md_dft_separable(const SampledSignal& samples, const IntMat& mi);
IntVec detect_remainder(const DftSpectrum& spec);
double peak_to_mean(const DftSpectrum& spec);

// The lattice DFT rewritten on the Smith digit grid of M, where it becomes an
// ordinary separable DFT of shape lambda_1 x ... x lambda_D.
class SeparableDft {
 public:
  explicit SeparableDft(const IntMat& m);

  std::size_t size() const { return size_; }
  const std::vector<std::int64_t>& shape() const { return lambda_; }
  std::size_t sample_slot(const IntVec& n) const;      // grid slot of time index n
  std::size_t frequency_slot(const IntVec& k) const;   // grid slot of frequency k
  IntVec frequency_at(std::size_t slot) const;         // k in N(M)
  // Noiseless a * exp(j 2 pi f^T M^{-T} n) written directly on the grid.
  std::vector<Complex> tone(const IntVec& f, Complex a) const;
  void transform(const std::vector<Complex>& in, std::vector<Complex>& out) const;

 private:
  std::vector<std::int64_t> digits_of(const IntVec& v, const IntMat& t) const;
  std::size_t slot_of(const std::vector<std::int64_t>& digits) const;

  Modulus m_;
  SmithForm s_;
  IntMat u_inv_, vt_;
  std::vector<std::int64_t> lambda_;
  std::size_t size_ = 1;
  std::shared_ptr<void> plan_;
};

struct FrequencyEstimate {
  std::vector<IntVec> remainders;
  RobustTrace trace;
  std::optional<Reconstruction> f;
};

FrequencyEstimate estimate_frequency(const std::vector<DftSpectrum>& specs, const RobustModuli& rm,
                                     int algorithm = 1, const RobustOptions& opts = {});

struct SnrConfig {
  std::vector<RobustCase> cases;
  IntVec f;
  Complex a{1.0, 0.0};
  std::vector<double> snr_db;  // +infinity means noiseless
  std::size_t trials = 300;
  std::uint64_t seed = 1;
  int algorithm = 1;
  Norm norm = Norm::L2;
  unsigned threads = 0;
};

struct SnrRow {
  std::string case_name;
  double snr_db = 0;
  double p_detect = 0;
  double mean_rel_error = 0;  // over trials with a reconstruction
  double se_detect = 0;
  double se_rel_error = 0;
  std::size_t trials = 0;
};

std::vector<SnrRow> snr_sweep(const SnrConfig& cfg);

}  // namespace mdcrt
