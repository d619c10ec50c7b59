#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace gapseq {

// Fixed-width bit set over [0, size) with the shift-or update the sumset DP
// is built on. Keeps a conservative [lo, hi] hint of the set-bit range so
// sparse layers cost proportionally less. The word width is an
// implementation detail, not part of any interface.
class BitVec {
  public:
    explicit BitVec(uint64_t size)
        : size_(size), words_((size + 63) / 64, 0),
          last_mask_(size % 64 ? (~uint64_t{0} >> (64 - size % 64)) : ~uint64_t{0}) {}

    uint64_t size() const { return size_; }
    bool empty() const { return lo_hint_ > hi_hint_; }

    bool test(uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    void set(uint64_t i) {
        words_[i >> 6] |= uint64_t{1} << (i & 63);
        lo_hint_ = std::min(lo_hint_, i);
        hi_hint_ = std::max(hi_hint_, i);
    }

    // this |= (src << shift), truncated at size. Safe when &src == this
    // (words are processed top-down, so reads see pre-update values).
    void or_shifted(const BitVec& src, uint64_t shift) {
        if (src.empty() || shift >= size_) return;
        const uint64_t dst_lo = src.lo_hint_ + shift;
        if (dst_lo >= size_) return;
        const uint64_t dst_hi = std::min(src.hi_hint_ + shift, size_ - 1);
        const uint64_t wlo = dst_lo >> 6;
        const uint64_t whi = dst_hi >> 6;
        const uint64_t off = shift >> 6;
        const unsigned b = unsigned(shift & 63);
        const uint64_t* sw = src.words_.data();
        const uint64_t snw = src.words_.size();
        uint64_t* dw = words_.data();
        if (b == 0) {
            for (uint64_t k = whi + 1; k-- > wlo;) dw[k] |= sw[k - off];
        } else {
            const unsigned rb = 64 - b;
            if (whi == off + snw) dw[whi] |= sw[snw - 1] >> rb;
            const uint64_t k_hi = std::min(whi, off + snw - 1);
            const uint64_t k_lo = std::max(wlo, off + 1);
            for (uint64_t k = k_hi + 1; k-- > k_lo;) {
                dw[k] |= (sw[k - off] << b) | (sw[k - off - 1] >> rb);
            }
            if (wlo == off) dw[off] |= sw[0] << b;
        }
        words_.back() &= last_mask_;
        lo_hint_ = std::min(lo_hint_, dst_lo);
        hi_hint_ = std::max(hi_hint_, std::min(dst_hi, size_ - 1));
    }

    uint64_t count() const {
        uint64_t c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    // Population count over the inclusive range [lo, hi].
    uint64_t count_range(uint64_t lo, uint64_t hi) const {
        uint64_t c = 0;
        const uint64_t wlo = lo >> 6, whi = hi >> 6;
        for (uint64_t k = wlo; k <= whi; ++k) {
            uint64_t w = words_[k];
            if (k == wlo) w &= ~uint64_t{0} << (lo & 63);
            if (k == whi && (hi & 63) != 63) w &= ~uint64_t{0} >> (63 - (hi & 63));
            c += std::popcount(w);
        }
        return c;
    }

    // Calls fn(i) for every clear bit in [lo, hi] in increasing order; stops
    // early if fn returns false.
    template <typename Fn>
    void for_each_zero(uint64_t lo, uint64_t hi, Fn&& fn) const {
        const uint64_t wlo = lo >> 6, whi = hi >> 6;
        for (uint64_t k = wlo; k <= whi; ++k) {
            uint64_t w = ~words_[k];
            if (k == wlo) w &= ~uint64_t{0} << (lo & 63);
            if (k == whi && (hi & 63) != 63) w &= ~uint64_t{0} >> (63 - (hi & 63));
            while (w) {
                const uint64_t i = (k << 6) + uint64_t(std::countr_zero(w));
                if (!fn(i)) return;
                w &= w - 1;
            }
        }
    }

    // Largest clear bit in [lo, hi], if any.
    std::optional<uint64_t> last_zero(uint64_t lo, uint64_t hi) const {
        const uint64_t wlo = lo >> 6, whi = hi >> 6;
        for (uint64_t k = whi + 1; k-- > wlo;) {
            uint64_t w = ~words_[k];
            if (k == wlo) w &= ~uint64_t{0} << (lo & 63);
            if (k == whi && (hi & 63) != 63) w &= ~uint64_t{0} >> (63 - (hi & 63));
            if (w) return (k << 6) + 63 - uint64_t(std::countl_zero(w));
        }
        return std::nullopt;
    }

  private:
    uint64_t size_;
    std::vector<uint64_t> words_;
    uint64_t last_mask_;
    uint64_t lo_hint_ = ~uint64_t{0};
    uint64_t hi_hint_ = 0;
};

}  // namespace gapseq
