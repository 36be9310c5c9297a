#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mcsense/fft.hpp"
#include "mcsense/spectrum_model.hpp"

namespace mcsense {

struct MultibandSignalSpec {
  ChannelPlan plan;
  ActiveChannelSet active;
  double snr_db = 0.0;       // in-band SNR, identical for every active channel
  double noise_power = 1.0;  // sigma^2 per complex Nyquist sample
  std::size_t n_samples = 0; // must be a multiple of L
  std::uint64_t seed = 0;
};

/// Complex baseband record on the Nyquist grid (spacing 1/B_max).
struct NyquistRecord {
  ComplexVector samples;
  ChannelPlan plan;
};

/// Synthesizes the multiband record: each active channel carries an
/// independent complex Gaussian process confined to its DFT bin range, scaled
/// so its band power equals snr * sigma^2 / L, plus white noise of variance
/// sigma^2 over the full band.
///
/// Channel r draws from stream (seed ^ (kChannelStreamBase + r)) and noise
/// from (seed ^ kNoiseStream), so adding a channel leaves other draws intact.
/// With noise_power == 0 the SNR is ignored and each channel gets band power 1/L.
NyquistRecord generate(const MultibandSignalSpec& spec);

/// The noise-free part of generate(spec): same draws, no noise term.
NyquistRecord generate_signal(const MultibandSignalSpec& spec);

/// Mean power (1/n) sum |x_r[n]|^2 of the record restricted to the DFT bins
/// of one channel. Summing over all channels gives the total mean power.
double band_power(const NyquistRecord& record, int channel);

struct PsdPoint {
  double frequency_hz;
  double power;
};

/// Welch averaged periodogram (Hann window, 50% overlap), n_fft points on
/// [0, B_max). Used for plotting.
std::vector<PsdPoint> empirical_psd(const NyquistRecord& record, std::size_t n_fft);

}  // namespace mcsense
