#include "nlcsim/interleaver.hpp"

namespace nlcsim {

void Interleaver::validate() const {
    if (rows <= 0 || block_len <= 0 || block_len % rows != 0)
        throw ParameterError("interleaver: rows must divide the block length");
}

namespace {

template <typename T>
std::vector<T> permute_blocks(const std::vector<T>& v, int block_len, int rows,
                              bool forward) {
    if (v.empty() || v.size() % std::size_t(block_len) != 0)
        throw ParameterError("interleaver: length must be a positive multiple of the block length");
    const int cols = block_len / rows;
    std::vector<T> out(v.size());
    const std::size_t nblocks = v.size() / std::size_t(block_len);
    for (std::size_t b = 0; b < nblocks; ++b) {
        const T* in = v.data() + b * block_len;
        T* o = out.data() + b * block_len;
        for (int r = 0; r < rows; ++r) {
            for (int cidx = 0; cidx < cols; ++cidx) {
                const int row_major = r * cols + cidx;
                const int col_major = cidx * rows + r;
                if (forward)
                    o[col_major] = in[row_major];
                else
                    o[row_major] = in[col_major];
            }
        }
    }
    return out;
}

} // namespace

std::vector<uint8_t> Interleaver::interleave(const std::vector<uint8_t>& bits) const {
    validate();
    return permute_blocks(bits, block_len, rows, true);
}

std::vector<uint8_t> Interleaver::deinterleave(const std::vector<uint8_t>& bits) const {
    validate();
    return permute_blocks(bits, block_len, rows, false);
}

std::vector<double> Interleaver::interleave_llrs(const std::vector<double>& llrs) const {
    validate();
    return permute_blocks(llrs, block_len, rows, true);
}

std::vector<double> Interleaver::deinterleave_llrs(const std::vector<double>& llrs) const {
    validate();
    return permute_blocks(llrs, block_len, rows, false);
}

} // namespace nlcsim
