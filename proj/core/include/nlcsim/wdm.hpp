#pragma once

#include "nlcsim/types.hpp"

namespace nlcsim {

/// Shift channel i of an odd-count grid to (i - (Nch-1)/2) * grid_spacing and
/// sum. All channels are resampled to composite_rate first and must end up
/// with equal length.
DualPolWaveform wdm_multiplex(const std::vector<DualPolWaveform>& channels,
                              double grid_spacing, double composite_rate);

/// Shift the selected carrier to baseband, low-pass filter, resample.
/// cutoff_hz/transition_hz <= 0 pick defaults from the grid spacing.
DualPolWaveform wdm_extract(const DualPolWaveform& composite, int channel_index,
                            int channel_count, double grid_spacing,
                            double target_rate, double cutoff_hz = 0.0,
                            double transition_hz = 0.0);

/// Grid offset of channel i in an odd channel_count grid.
double wdm_channel_offset(int channel_index, int channel_count, double grid_spacing);

} // namespace nlcsim
