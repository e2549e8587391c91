#include "nlcsim/wdm.hpp"

#include "nlcsim/fft.hpp"

#include <algorithm>
#include <cmath>

namespace nlcsim {

double wdm_channel_offset(int channel_index, int channel_count, double grid_spacing) {
    if (channel_index < 0 || channel_index >= channel_count)
        throw ParameterError("wdm: channel index out of range");
    return (double(channel_index) - double(channel_count - 1) / 2.0) * grid_spacing;
}

DualPolWaveform wdm_multiplex(const std::vector<DualPolWaveform>& channels,
                              double grid_spacing, double composite_rate) {
    if (channels.empty() || channels.size() % 2 == 0)
        throw ParameterError("wdm_multiplex: channel count must be odd");
    const int nch = int(channels.size());
    // Every carrier plus one channel's worth of spectrum must fit.
    const double needed = double(nch - 1) * grid_spacing +
                          channels.front().sample_rate;
    if (composite_rate < needed && nch > 1)
        throw ConfigError("wdm_multiplex: composite rate too low for grid (aliasing)");

    DualPolWaveform out;
    out.sample_rate = composite_rate;
    out.center_freq_offset = 0.0;
    for (int i = 0; i < nch; ++i) {
        DualPolWaveform ch = resample(channels[i], composite_rate);
        frequency_shift(ch, wdm_channel_offset(i, nch, grid_spacing));
        if (i == 0) {
            out.x = std::move(ch.x);
            out.y = std::move(ch.y);
            out.guard = ch.guard;
        } else {
            if (ch.size() != out.size())
                throw ParameterError("wdm_multiplex: channels must have equal length after resampling");
            for (std::size_t k = 0; k < out.size(); ++k) {
                out.x[k] += ch.x[k];
                out.y[k] += ch.y[k];
            }
            out.guard = std::max(out.guard, ch.guard);
        }
    }
    return out;
}

DualPolWaveform wdm_extract(const DualPolWaveform& composite, int channel_index,
                            int channel_count, double grid_spacing,
                            double target_rate, double cutoff_hz,
                            double transition_hz) {
    const double off = wdm_channel_offset(channel_index, channel_count, grid_spacing);
    DualPolWaveform w = composite;
    frequency_shift(w, -off);
    w.center_freq_offset = 0.0;
    if (cutoff_hz <= 0.0) cutoff_hz = 0.5 * std::min(grid_spacing, 0.9 * target_rate);
    if (transition_hz <= 0.0) transition_hz = 0.25 * cutoff_hz;
    fft_lowpass(w, cutoff_hz, transition_hz);
    return resample(w, target_rate);
}

} // namespace nlcsim
