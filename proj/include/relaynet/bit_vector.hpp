#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace relaynet {

// Word-packed binary vector over GF(2).
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t length, bool fill = false)
        : length_(length), words_((length + 63) / 64, fill ? ~0ull : 0ull) {
        trim();
    }

    static BitVector from_bits(const std::vector<int>& bits) {
        BitVector v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) v.set(i, bits[i] != 0);
        return v;
    }

    std::size_t size() const { return length_; }
    bool empty() const { return length_ == 0; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1ull;
    }
    void set(std::size_t i, bool value) {
        uint64_t mask = 1ull << (i & 63);
        if (value) words_[i >> 6] |= mask;
        else       words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= 1ull << (i & 63); }

    BitVector& operator^=(const BitVector& other) {
        if (other.length_ != length_) throw std::invalid_argument("BitVector xor: length mismatch");
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector& b) { a ^= b; return a; }

    bool operator==(const BitVector& other) const {
        return length_ == other.length_ && words_ == other.words_;
    }
    bool operator!=(const BitVector& other) const { return !(*this == other); }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (uint64_t w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    bool all_zero() const {
        for (uint64_t w : words_) if (w != 0) return false;
        return true;
    }

    std::vector<int> to_bits() const {
        std::vector<int> out(length_);
        for (std::size_t i = 0; i < length_; ++i) out[i] = get(i) ? 1 : 0;
        return out;
    }

    const std::vector<uint64_t>& words() const { return words_; }

private:
    void trim() {
        if (length_ % 64 != 0 && !words_.empty())
            words_.back() &= (1ull << (length_ % 64)) - 1ull;
    }

    std::size_t length_ = 0;
    std::vector<uint64_t> words_;
};

} // namespace relaynet
