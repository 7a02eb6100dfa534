#pragma once

#include "gdrc/matrix.hpp"

namespace gdrc {

// Norm orders used for core sets and dual-norm caps.
enum class NormOrder { One, Two, Inf };

// 1/p + 1/q = 1 within {1, 2, inf}.
constexpr NormOrder dual_order(NormOrder p) {
    switch (p) {
        case NormOrder::One: return NormOrder::Inf;
        case NormOrder::Inf: return NormOrder::One;
        default: return NormOrder::Two;
    }
}

inline double norm_value(const Vector& v, NormOrder p) {
    switch (p) {
        case NormOrder::One: return norm1(v);
        case NormOrder::Two: return norm2(v);
        default: return norm_inf(v);
    }
}

inline const char* norm_name(NormOrder p) {
    switch (p) {
        case NormOrder::One: return "1";
        case NormOrder::Two: return "2";
        default: return "inf";
    }
}

}  // namespace gdrc
