#pragma once

#include <vector>

#include "mcsense/fft.hpp"
#include "mcsense/siggen.hpp"
#include "mcsense/spectrum_model.hpp"

namespace mcsense {

struct EdConfig {
  ChannelPlan plan;
  int samples = 64;     // M, samples per channel entering the energy estimate
  double p_fa = 0.01;   // target per-channel false-alarm probability
  double sigma2 = 1.0;  // noise power
};

/// Throws InvalidSpec unless 0 < p_fa < 1, M >= 2 and sigma2 > 0.
void validate(const EdConfig& cfg);

/// Gaussian tail Q(z) = P(Z > z).
double q_function(double z);

/// z with Q(z) = prob. Throws OutOfDomain outside (0, 1).
double inverse_q(double prob);

/// eta = sigma^2 (1 + Q^-1(P_fa) / sqrt(M/2)).
double ed_threshold(const EdConfig& cfg);

/// Ideal non-overlapping filter bank: channel r keeps the DFT bins of
/// [rB, (r+1)B), shifted to baseband and decimated by L. Scaled so that the
/// channel energies sum to the record energy.
std::vector<ComplexVector> channelize(const NyquistRecord& record);

struct EdDecision {
  std::vector<double> statistics;  // (1/M) sum |.|^2 per channel
  std::vector<bool> occupied;      // H1 iff statistic > eta
  double threshold = 0.0;

  ActiveChannelSet flagged() const;
};

/// Throws InsufficientSamples when a channel has fewer than cfg.samples samples.
EdDecision energy_detect(const NyquistRecord& record, const EdConfig& cfg);

}  // namespace mcsense
