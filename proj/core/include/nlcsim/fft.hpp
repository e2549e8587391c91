#pragma once

#include "nlcsim/types.hpp"

namespace nlcsim {

/// Forward DFT in place (unnormalized, e^{-j2pi kn/N} kernel).
void fft_inplace(cvec& v);
/// Inverse DFT in place (normalized by 1/N).
void ifft_inplace(cvec& v);

cvec fft(cvec v);
cvec ifft(cvec v);

/// Baseband frequency of FFT bin k for an N-point transform at rate fs,
/// wrapped to (-fs/2, fs/2].
double fft_bin_freq(std::size_t k, std::size_t n, double fs);

/// Multiply x[n] by exp(+j 2 pi df n / fs) for both polarizations.
void frequency_shift(DualPolWaveform& w, double df);

/// FFT-domain rational resampling (spectrum zero-pad/truncate). The new
/// length N * target_rate / w.sample_rate must be an integer.
DualPolWaveform resample(const DualPolWaveform& w, double target_rate);

/// Zero-phase FFT low-pass filter with raised-cosine transition band.
/// Passband gain 1 for |f| <= cutoff_hz, stopband 0 beyond
/// cutoff_hz + transition_hz.
void fft_lowpass(DualPolWaveform& w, double cutoff_hz, double transition_hz);

/// Linear convolution with centered alignment: output has the input length,
/// group delay (taps-1)/2 removed. Adds (taps-1)/2 to the waveform guard.
cvec filter_same(const cvec& x, const std::vector<double>& taps);

} // namespace nlcsim
