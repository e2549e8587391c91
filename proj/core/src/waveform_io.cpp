#include "nlcsim/waveform_io.hpp"

#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

namespace nlcsim {

namespace {

constexpr char kMagic[4] = {'D', 'P', 'W', 'F'};

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// The format is little-endian; this code targets little-endian hosts and
// writes raw IEEE doubles.
template <typename T>
void put(std::FILE* f, const T& v) {
    if (std::fwrite(&v, sizeof(T), 1, f) != 1)
        throw IngestError("dpwf: short write");
}

template <typename T>
T get(std::FILE* f, const char* what) {
    T v;
    if (std::fread(&v, sizeof(T), 1, f) != 1)
        throw IngestError(std::string("dpwf: truncated header while reading ") + what);
    return v;
}

} // namespace

void write_dpwf(const std::string& path, const DualPolWaveform& w,
                double power_ref_dbm) {
    w.validate();
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IngestError("dpwf: cannot open for writing: " + path);
    std::fwrite(kMagic, 1, 4, f.get());
    put<uint32_t>(f.get(), 1u);
    put<double>(f.get(), w.sample_rate);
    put<uint64_t>(f.get(), w.size());
    put<double>(f.get(), power_ref_dbm);
    std::vector<double> quad(4);
    for (std::size_t i = 0; i < w.size(); ++i) {
        quad[0] = w.x[i].real();
        quad[1] = w.x[i].imag();
        quad[2] = w.y[i].real();
        quad[3] = w.y[i].imag();
        if (std::fwrite(quad.data(), sizeof(double), 4, f.get()) != 4)
            throw IngestError("dpwf: short write");
    }
}

DpwfFile read_dpwf(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw IngestError("dpwf: cannot open: " + path);
    char magic[4];
    if (std::fread(magic, 1, 4, f.get()) != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw IngestError("dpwf: bad magic in " + path);
    DpwfFile out;
    out.version = get<uint32_t>(f.get(), "version");
    if (out.version != 1)
        throw IngestError("dpwf: unsupported version " + std::to_string(out.version));
    out.wave.sample_rate = get<double>(f.get(), "sample_rate");
    const uint64_t len = get<uint64_t>(f.get(), "length");
    out.power_ref_dbm = get<double>(f.get(), "power_ref_dbm");
    out.wave.x.resize(len);
    out.wave.y.resize(len);
    std::vector<double> quad(4);
    for (uint64_t i = 0; i < len; ++i) {
        if (std::fread(quad.data(), sizeof(double), 4, f.get()) != 4) {
            const long at = 28 + long(i) * 32;
            throw IngestError("dpwf: truncated payload in " + path + ": expected " +
                              std::to_string(28 + len * 32) + " bytes, payload ends near byte " +
                              std::to_string(at));
        }
        out.wave.x[i] = {quad[0], quad[1]};
        out.wave.y[i] = {quad[2], quad[3]};
    }
    return out;
}

} // namespace nlcsim
