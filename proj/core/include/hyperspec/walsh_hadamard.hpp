#pragma once

// Vertex indexing and the fast Walsh-Hadamard transform.
//
// Convention used everywhere in hyperspec: index i in [0, 2^d) encodes the
// bit vector B(i) with bit 0 the MOST significant binary digit, so vertices
// and characters enumerate in lexicographic order.

#include <cstdint>
#include <span>
#include <vector>

namespace hyperspec {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::vector<std::uint8_t> bits);

    std::size_t size() const noexcept { return bits_.size(); }
    std::uint8_t operator[](std::size_t j) const noexcept { return bits_[j]; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    std::size_t weight() const noexcept;

    /// Inverse of bits(i, d).
    std::uint64_t to_index() const noexcept;

    friend BitVector operator^(const BitVector& a, const BitVector& b);
    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

inline constexpr unsigned kMaxBitDimension = 62;

/// B(i) as a d-bit vector, bit 0 most significant. Throws InputError unless
/// 0 <= i < 2^d.
BitVector bits(std::uint64_t i, unsigned d);

/// Bit j (0 = most significant) of index i in a d-bit encoding.
constexpr unsigned bit_at(std::uint64_t i, unsigned d, unsigned j) noexcept {
    return static_cast<unsigned>((i >> (d - 1 - j)) & 1u);
}

/// <B(i), B(j)> mod 2 as a sign: (-1)^popcount(i & j).
constexpr int hadamard_sign(std::uint64_t i, std::uint64_t j) noexcept {
    return (__builtin_popcountll(i & j) & 1) ? -1 : 1;
}

/// <B(mask), a>, summed in ascending j. Every module computes subset lengths
/// through this helper so that identical inputs give bitwise-identical sums.
double subset_length(std::span<const double> a, std::uint64_t mask) noexcept;

bool is_power_of_two(std::size_t n) noexcept;

/// In-place unnormalized transform v <- H_d v. Length must be a power of two.
void fwht_inplace(std::span<double> v);

/// Returns H_d v (unnormalized); fwht(fwht(v)) == 2^d v.
std::vector<double> fwht(std::span<const double> v);

/// Column k of H_d: entry i equals (-1)^<B(i),B(k)>.
std::vector<int> hadamard_column(std::uint64_t k, unsigned d);

}  // namespace hyperspec
