#include "hyperspec/walsh_hadamard.hpp"

#include <algorithm>
#include <string>

#include "hyperspec/errors.hpp"

namespace hyperspec {

BitVector::BitVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.size() > kMaxBitDimension) throw InputError("BitVector: dimension too large");
    for (auto b : bits_)
        if (b > 1) throw InputError("BitVector: entries must be 0 or 1");
}

std::size_t BitVector::weight() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::uint64_t BitVector::to_index() const noexcept {
    std::uint64_t i = 0;
    for (auto b : bits_) i = (i << 1) | b;
    return i;
}

BitVector operator^(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) throw InputError("BitVector xor: dimension mismatch");
    std::vector<std::uint8_t> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] ^ b[j];
    return BitVector(std::move(out));
}

BitVector bits(std::uint64_t i, unsigned d) {
    if (d > kMaxBitDimension) throw InputError("bits: dimension exceeds " + std::to_string(kMaxBitDimension));
    if (i >> d != 0) throw InputError("bits: index " + std::to_string(i) + " out of range for d=" + std::to_string(d));
    std::vector<std::uint8_t> out(d);
    for (unsigned j = 0; j < d; ++j) out[j] = static_cast<std::uint8_t>(bit_at(i, d, j));
    return BitVector(std::move(out));
}

double subset_length(std::span<const double> a, std::uint64_t mask) noexcept {
    const auto d = static_cast<unsigned>(a.size());
    double s = 0.0;
    for (unsigned j = 0; j < d; ++j)
        if (bit_at(mask, d, j)) s += a[j];
    return s;
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void fwht_inplace(std::span<double> v) {
    const std::size_t n = v.size();
    if (!is_power_of_two(n))
        throw InputError("fwht: length " + std::to_string(n) + " is not a power of two");
    for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t block = 0; block < n; block += 2 * half) {
            for (std::size_t k = block; k < block + half; ++k) {
                const double x = v[k];
                const double y = v[k + half];
                v[k] = x + y;
                v[k + half] = x - y;
            }
        }
    }
}

std::vector<double> fwht(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    fwht_inplace(out);
    return out;
}

std::vector<int> hadamard_column(std::uint64_t k, unsigned d) {
    if (d > 30) throw CapabilityError("hadamard_dimension_cap", "hadamard_column: d > 30");
    if (k >> d != 0) throw InputError("hadamard_column: column " + std::to_string(k) + " out of range");
    const std::uint64_t n = std::uint64_t{1} << d;
    std::vector<int> col(n);
    for (std::uint64_t i = 0; i < n; ++i) col[i] = hadamard_sign(i, k);
    return col;
}

}  // namespace hyperspec
