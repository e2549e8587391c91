#include "nlcsim/fft.hpp"
#include "nlcsim/rng.hpp"
#include "nlcsim/rrc.hpp"
#include "nlcsim/waveform_io.hpp"
#include "nlcsim/wdm.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

using namespace nlcsim;

namespace {

SymbolFrame random_qpsk_frame(std::size_t n, uint64_t seed, double rs = 32e9) {
    SymbolFrame f;
    f.symbol_rate = rs;
    f.x.resize(n);
    f.y.resize(n);
    RandomStream rng(seed, "test-syms");
    const double a = std::sqrt(0.5);
    for (std::size_t k = 0; k < n; ++k) {
        f.x[k] = {a * (rng.uniform() < 0.5 ? 1 : -1), a * (rng.uniform() < 0.5 ? 1 : -1)};
        f.y[k] = {a * (rng.uniform() < 0.5 ? 1 : -1), a * (rng.uniform() < 0.5 ? 1 : -1)};
    }
    return f;
}

/// Direct-convolution oracle: cascade of two tap sets, sampled at symbol
/// instants around the joint center. Returns peak and max ISI magnitude.
void cascade_isi(const std::vector<double>& taps, int sps, double& peak,
                 double& max_isi) {
    const int n = int(taps.size());
    std::vector<double> casc(2 * n - 1, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) casc[i + j] += taps[i] * taps[j];
    const int center = n - 1;
    peak = std::abs(casc[center]);
    max_isi = 0.0;
    for (int k = 1; center + k * sps < int(casc.size()); ++k)
        max_isi = std::max({max_isi, std::abs(casc[center + k * sps]),
                            std::abs(casc[center - k * sps])});
}

} // namespace

TEST_CASE("rrc taps: unit energy, symmetry, singular points") {
    RrcFilterSpec spec;
    spec.rolloff = 1.0;
    spec.num_taps = 3;
    spec.samples_per_symbol = 2;
    const auto h = rrc_taps(spec); // t = -1/2, 0, 1/2: hits the 1/(4 beta) singularity
    REQUIRE(h.size() == 3);
    CHECK(h[0] == doctest::Approx(h[2]));
    CHECK(std::abs(h[1]) > std::abs(h[0]));
    double e = 0;
    for (double v : h) e += v * v;
    CHECK(e == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(rrc_taps({0.0, 401, 16}), ParameterError);
    CHECK_THROWS_AS(rrc_taps({0.5, 400, 16}), ParameterError);
    CHECK_THROWS_AS(rrc_taps({0.5, 401, 1}), ParameterError);
}

TEST_CASE("rrc cascade meets the Nyquist criterion") {
    double peak, isi;
    SUBCASE("rolloff 0.005, 401 taps, 16 sps") {
        cascade_isi(rrc_taps({0.005, 401, 16}), 16, peak, isi);
        CHECK(20.0 * std::log10(peak / isi) > 40.0);
    }
    SUBCASE("rolloff 0.5, 401 taps, 16 sps") {
        cascade_isi(rrc_taps({0.5, 401, 16}), 16, peak, isi);
        CHECK(isi / peak < 1e-3);
    }
}

TEST_CASE("shape_pulses: impulse response, length, power") {
    RrcFilterSpec spec{0.1, 65, 4};
    SymbolFrame f;
    f.symbol_rate = 1e9;
    f.x.assign(64, cplx(0, 0));
    f.y.assign(64, cplx(0, 0));
    f.x[32] = 1.0;
    const DualPolWaveform w = shape_pulses(f, spec);
    CHECK(w.size() == 64 * 4);
    CHECK(w.sample_rate == doctest::Approx(4e9));
    // single unit symbol -> scaled taps centered at sample 32*4
    const auto taps = rrc_taps(spec);
    const double g = std::sqrt(4.0);
    const int c = 32 * 4, mid = 32;
    for (int i = -20; i <= 20; ++i)
        CHECK(w.x[std::size_t(c + i)].real() ==
              doctest::Approx(g * taps[std::size_t(mid + i)]).epsilon(1e-9));

    SymbolFrame big = random_qpsk_frame(21600, 5);
    const DualPolWaveform wb = shape_pulses(big, {0.005, 401, 16});
    CHECK(wb.size() == 345600);
    // mean power equals frame mean symbol power within 1% (edges excluded)
    double sp = 0;
    for (auto v : big.x) sp += std::norm(v);
    for (auto v : big.y) sp += std::norm(v);
    sp /= double(big.size());
    CHECK(wb.mean_power() == doctest::Approx(sp).epsilon(0.01));
}

TEST_CASE("shaped spectrum is confined to (1+rolloff)/2 of the symbol rate") {
    SymbolFrame f = random_qpsk_frame(4096, 9, 1e9);
    RrcFilterSpec spec{0.25, 129, 2};
    DualPolWaveform w = shape_pulses(f, spec);
    cvec spec_x = fft(w.x);
    double in_band = 0, out_band = 0;
    const double edge = 0.5 * (1.0 + spec.rolloff) * 1e9 * 1.02;
    for (std::size_t k = 0; k < spec_x.size(); ++k) {
        const double fr = std::abs(fft_bin_freq(k, spec_x.size(), w.sample_rate));
        (fr <= edge ? in_band : out_band) += std::norm(spec_x[k]);
    }
    CHECK(out_band / in_band < 1e-4);
}

TEST_CASE("matched filter recovers symbols back-to-back") {
    SymbolFrame f = random_qpsk_frame(2048, 11, 32e9);
    RrcFilterSpec spec{0.005, 401, 16};
    DualPolWaveform w = shape_pulses(f, spec);
    DualPolWaveform m = matched_filter(w, 32e9, 0.005);
    double err = 0, pow = 0;
    const std::size_t guard = 64;
    for (std::size_t k = guard; k < f.size() - guard; ++k) {
        err += std::norm(m.x[16 * k] - f.x[k]) + std::norm(m.y[16 * k] - f.y[k]);
        pow += std::norm(f.x[k]) + std::norm(f.y[k]);
    }
    CHECK(err / pow < 1e-4);
}

TEST_CASE("fft resample preserves band-limited signals and total duration") {
    SymbolFrame f = random_qpsk_frame(1024, 13, 1e9);
    DualPolWaveform w = shape_pulses(f, {0.2, 101, 4});
    DualPolWaveform up = resample(w, 8e9);
    CHECK(up.size() == 2 * w.size());
    DualPolWaveform back = resample(up, 4e9);
    double err = 0, pow = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        err += std::norm(back.x[k] - w.x[k]);
        pow += std::norm(w.x[k]);
    }
    CHECK(err / pow < 1e-20);
    CHECK_THROWS_AS(resample(w, 4e9 * 1.0000001), ParameterError);
}

TEST_CASE("linear-phase fft filtering preserves passband energy") {
    SymbolFrame f = random_qpsk_frame(2048, 15, 1e9);
    DualPolWaveform w = shape_pulses(f, {0.1, 101, 4});
    const double e0 = w.mean_power();
    fft_lowpass(w, 0.9e9, 0.2e9); // signal band is ~0.55 GHz: pure passband
    CHECK(w.mean_power() == doctest::Approx(e0).epsilon(1e-9));
}

TEST_CASE("wdm multiplex: identity, grid peaks, power summation") {
    SymbolFrame f = random_qpsk_frame(5400, 17);
    RrcFilterSpec spec{0.005, 401, 16};

    SUBCASE("single channel is resample-only") {
        DualPolWaveform w = shape_pulses(f, spec);
        DualPolWaveform c = wdm_multiplex({w}, 37.5e9, w.sample_rate);
        double err = 0, pow = 0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            err += std::norm(c.x[k] - w.x[k]);
            pow += std::norm(w.x[k]);
        }
        CHECK(err / pow < 1e-24);
    }

    SUBCASE("five carriers appear at -75..+75 GHz") {
        std::vector<DualPolWaveform> chans;
        for (int i = 0; i < 5; ++i)
            chans.push_back(shape_pulses(random_qpsk_frame(5400, 100 + i), spec));
        DualPolWaveform c = wdm_multiplex(chans, 37.5e9, 512e9);
        cvec s = fft(c.x);
        const std::size_t n = s.size();
        std::vector<double> band_power(5, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const double fr = fft_bin_freq(k, n, c.sample_rate);
            for (int i = 0; i < 5; ++i) {
                const double center = (i - 2) * 37.5e9;
                if (std::abs(fr - center) < 16e9) band_power[i] += std::norm(s[k]);
            }
        }
        const double mean = (band_power[0] + band_power[4]) / 2.0;
        for (int i = 0; i < 5; ++i)
            CHECK(band_power[i] == doctest::Approx(mean).epsilon(0.05));
    }

    SUBCASE("three unit-power channels sum to 3x within 0.1 dB") {
        std::vector<DualPolWaveform> chans;
        double single = 0;
        for (int i = 0; i < 3; ++i) {
            auto w = shape_pulses(random_qpsk_frame(5400, 200 + i), spec);
            single = w.mean_power();
            chans.push_back(std::move(w));
        }
        DualPolWaveform c = wdm_multiplex(chans, 37.5e9, 512e9);
        CHECK(std::abs(lin_to_db(c.mean_power() / (3.0 * single))) < 0.1);
    }

    SUBCASE("aliasing grid is a configuration error") {
        DualPolWaveform w = shape_pulses(f, spec);
        std::vector<DualPolWaveform> chans{w, w, w};
        CHECK_THROWS_AS(wdm_multiplex(chans, 200e9, 512e9), ConfigError);
    }
}

TEST_CASE("wdm extract: round trip and leakage bounds") {
    RrcFilterSpec spec{0.005, 401, 16};
    std::vector<SymbolFrame> frames;
    std::vector<DualPolWaveform> chans;
    for (int i = 0; i < 5; ++i) {
        frames.push_back(random_qpsk_frame(5400, 300 + i));
        chans.push_back(shape_pulses(frames.back(), spec));
    }

    SUBCASE("center channel EVM < 1% with silent neighbors") {
        std::vector<DualPolWaveform> silent = chans;
        for (int i = 0; i < 5; ++i) {
            if (i == 2) continue;
            for (auto& v : silent[std::size_t(i)].x) v = 0.0;
            for (auto& v : silent[std::size_t(i)].y) v = 0.0;
        }
        DualPolWaveform c = wdm_multiplex(silent, 37.5e9, 512e9);
        DualPolWaveform e = wdm_extract(c, 2, 5, 37.5e9, 512e9, 16.5e9, 4e9);
        double err = 0, pow = 0;
        const std::size_t g = chans[2].guard + 16;
        for (std::size_t k = g; k < e.size() - g; ++k) {
            err += std::norm(e.x[k] - chans[2].x[k]);
            pow += std::norm(chans[2].x[k]);
        }
        CHECK(std::sqrt(err / pow) < 0.01);
    }

    SUBCASE("pilot-tone leakage below -30 dB for center and edge channels") {
        // neighbors carry pure tones at their carrier centers
        DualPolWaveform tones;
        tones.sample_rate = 512e9;
        tones.x.assign(65536, cplx(0, 0));
        tones.y.assign(65536, cplx(0, 0));
        for (int i = 0; i < 5; ++i) {
            const double off = wdm_channel_offset(i, 5, 37.5e9);
            for (std::size_t k = 0; k < tones.size(); ++k) {
                const cplx r = std::polar(1.0, 2 * M_PI * off * double(k) / 512e9);
                tones.x[k] += r;
            }
        }
        for (int target : {2, 0}) {
            DualPolWaveform e =
                wdm_extract(tones, target, 5, 37.5e9, 128e9, 16.5e9, 4e9);
            cvec s = fft(e.x);
            double inb = 0, leak = 0;
            for (std::size_t k = 0; k < s.size(); ++k) {
                const double fr = std::abs(fft_bin_freq(k, s.size(), e.sample_rate));
                if (fr < 1e9) inb += std::norm(s[k]);
                if (fr > 30e9) leak += std::norm(s[k]);
            }
            CHECK(lin_to_db(leak / inb) < -30.0);
        }
    }

    CHECK_THROWS_AS(wdm_extract(chans[0], 7, 5, 37.5e9, 64e9), ParameterError);
}

TEST_CASE("dpwf waveform file round trip is bit exact") {
    SymbolFrame f = random_qpsk_frame(512, 23, 1e9);
    DualPolWaveform w = shape_pulses(f, {0.3, 33, 2});
    const std::string path = "test_wave.dpwf";
    write_dpwf(path, w, -3.25);
    const DpwfFile r = read_dpwf(path);
    CHECK(r.power_ref_dbm == -3.25);
    CHECK(r.wave.sample_rate == w.sample_rate);
    REQUIRE(r.wave.size() == w.size());
    bool exact = true;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (r.wave.x[k] != w.x[k] || r.wave.y[k] != w.y[k]) exact = false;
    CHECK(exact);

    SUBCASE("truncated file names expected and actual size") {
        FILE* fp = std::fopen(path.c_str(), "rb");
        std::vector<char> buf(200);
        const auto got = std::fread(buf.data(), 1, buf.size(), fp);
        std::fclose(fp);
        fp = std::fopen("test_trunc.dpwf", "wb");
        std::fwrite(buf.data(), 1, got, fp);
        std::fclose(fp);
        CHECK_THROWS_WITH_AS(read_dpwf("test_trunc.dpwf"),
                             doctest::Contains("expected"), IngestError);
    }
    std::remove(path.c_str());
    std::remove("test_trunc.dpwf");
}
