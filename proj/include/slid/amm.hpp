#pragma once

// Constant-product (x * y = k) reserve math, generic over the number type.
// Use `double` for replay at scale and `Rational` where an exact k-invariant
// is required.

#include <cmath>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "slid/error.hpp"

namespace slid {

using Rational = boost::multiprecision::cpp_rational;

enum class SwapDirection : std::uint8_t {
    BuyPaired,   // base in, paired out
    SellPaired,  // paired in, base out
};

template <typename T>
struct Reserves {
    T paired{};
    T base{};
    T k{};

    static Reserves from_deposit(const T& paired, const T& base) {
        return Reserves{paired, base, paired * base};
    }

    bool operator==(const Reserves&) const = default;
};

template <typename T>
struct SwapResult {
    T amount_out{};
    Reserves<T> reserves{};
};

namespace detail {

template <typename T>
void check_finite(const T& value) {
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            throw Error(ErrorCode::Overflow, "reserve product exceeds representable range");
        }
    }
}

}  // namespace detail

// The reserve on the output side is re-derived from k on every swap, so the
// product never drifts by more than one rounding step in floating mode.
template <typename T>
SwapResult<T> swap_quote(const Reserves<T>& reserves, SwapDirection direction, const T& amount_in) {
    if (reserves.paired <= T{0} || reserves.base <= T{0}) {
        throw Error(ErrorCode::ZeroReserve, "swap against an empty reserve");
    }
    if (!(amount_in > T{0})) {
        throw Error(ErrorCode::PreconditionViolated, "swap amount must be positive");
    }
    detail::check_finite(reserves.k);

    SwapResult<T> result;
    result.reserves.k = reserves.k;
    if (direction == SwapDirection::BuyPaired) {
        const T new_base = reserves.base + amount_in;
        detail::check_finite(new_base);
        const T new_paired = reserves.k / new_base;
        result.amount_out = reserves.paired - new_paired;
        result.reserves.base = new_base;
        result.reserves.paired = new_paired;
    } else {
        const T new_paired = reserves.paired + amount_in;
        detail::check_finite(new_paired);
        const T new_base = reserves.k / new_paired;
        result.amount_out = reserves.base - new_base;
        result.reserves.paired = new_paired;
        result.reserves.base = new_base;
    }
    return result;
}

// Input needed to take `amount_out` from the pool; the exact inverse of
// swap_quote.
template <typename T>
T swap_input_for_output(const Reserves<T>& reserves, SwapDirection direction, const T& amount_out) {
    if (reserves.paired <= T{0} || reserves.base <= T{0}) {
        throw Error(ErrorCode::ZeroReserve, "swap against an empty reserve");
    }
    const T& out_reserve = direction == SwapDirection::BuyPaired ? reserves.paired : reserves.base;
    const T& in_reserve = direction == SwapDirection::BuyPaired ? reserves.base : reserves.paired;
    if (!(amount_out > T{0}) || !(amount_out < out_reserve)) {
        throw Error(ErrorCode::PreconditionViolated, "requested output outside (0, reserve)");
    }
    return reserves.k / (out_reserve - amount_out) - in_reserve;
}

inline Rational to_rational(double value) {
    // Every finite double is a dyadic rational, so this conversion is exact.
    int exponent = 0;
    const double mantissa = std::frexp(value, &exponent);
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    Rational r{scaled};
    const int shift = exponent - 53;
    if (shift >= 0) {
        r *= Rational{boost::multiprecision::cpp_int{1} << shift};
    } else {
        r /= Rational{boost::multiprecision::cpp_int{1} << (-shift)};
    }
    return r;
}

}  // namespace slid
