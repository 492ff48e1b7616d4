#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "landau/dyadic.hpp"

namespace landau
{

/// A symbol of the alphabet {1,2,3,4}, naming a quadrant of a box.
using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

inline void check_symbol(Symbol s)
{
    if (s < 1 || s > 4) {
        fail(ErrorCategory::invalid_symbol, "symbol " + std::to_string(int(s)) + " is not in {1,2,3,4}");
    }
}

inline Word parse_word(std::string_view text)
{
    Word w;
    w.reserve(text.size());
    for (char ch : text) {
        if (ch < '1' || ch > '4') {
            fail(ErrorCategory::invalid_symbol, std::string("character '") + ch + "' is not a symbol");
        }
        w.push_back(static_cast<Symbol>(ch - '0'));
    }
    return w;
}

inline std::string word_string(std::span<const Symbol> w)
{
    std::string s;
    s.reserve(w.size());
    for (Symbol c : w) {
        s.push_back(static_cast<char>('0' + c));
    }
    return s;
}

/// Axis-aligned dyadic rectangle [re_lo, re_hi] x [im_lo, im_hi].
struct Box {
    Dyadic re_lo, re_hi, im_lo, im_hi;

    static Box square(const Dyadic &half_side)
    {
        return {-half_side, half_side, -half_side, half_side};
    }
    ComplexDyadic center() const
    {
        return {(re_lo + re_hi).half(), (im_lo + im_hi).half()};
    }
    Dyadic re_width() const
    {
        return re_hi - re_lo;
    }
    Dyadic im_width() const
    {
        return im_hi - im_lo;
    }
    bool contains(const ComplexDyadic &z) const
    {
        return re_lo <= z.re && z.re <= re_hi && im_lo <= z.im && z.im <= im_hi;
    }
    bool contains(const Box &b) const
    {
        return re_lo <= b.re_lo && b.re_hi <= re_hi && im_lo <= b.im_lo && b.im_hi <= im_hi;
    }
    friend bool operator==(const Box &, const Box &) = default;
};

/// Quadrant child: 1 lower-left, 2 lower-right, 3 upper-right, 4 upper-left.
inline Box box_child(const Box &b, Symbol s)
{
    check_symbol(s);
    const Dyadic cm = (b.re_lo + b.re_hi).half();
    const Dyadic dm = (b.im_lo + b.im_hi).half();
    switch (s) {
    case 1: return {b.re_lo, cm, b.im_lo, dm};
    case 2: return {cm, b.re_hi, b.im_lo, dm};
    case 3: return {cm, b.re_hi, dm, b.im_hi};
    default: return {b.re_lo, cm, dm, b.im_hi};
    }
}

inline Box box_refine(Box b, std::span<const Symbol> w)
{
    for (Symbol s : w) {
        b = box_child(b, s);
    }
    return b;
}

} // namespace landau
