// Copyright 2026 The hillstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "hillstat/errors.hpp"

namespace hillstat::maps {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Intermediate products use 128-bit integers; a result that does not fit
/// back into 64 bits throws hillstat::Error instead of wrapping.
class Rational
{
  public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n)  // NOLINT(google-explicit-constructor)
        : num_(n)
    {
    }
    Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double to_double() const noexcept
    {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    /// Largest integer <= *this.
    std::int64_t floor() const noexcept
    {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0)
            --q;
        return q;
    }

    std::string str() const
    {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(Rational a, Rational b)
    {
        using W = __int128;
        return make(W(a.num_) * b.den_ + W(b.num_) * a.den_, W(a.den_) * b.den_);
    }
    friend Rational operator-(Rational a, Rational b)
    {
        using W = __int128;
        return make(W(a.num_) * b.den_ - W(b.num_) * a.den_, W(a.den_) * b.den_);
    }
    friend Rational operator*(Rational a, Rational b)
    {
        using W = __int128;
        return make(W(a.num_) * b.num_, W(a.den_) * b.den_);
    }
    friend Rational operator/(Rational a, Rational b)
    {
        using W = __int128;
        if (b.num_ == 0)
            throw DomainError("Rational: division by zero");
        return make(W(a.num_) * b.den_, W(a.den_) * b.num_);
    }
    Rational operator-() const { return make(-static_cast<__int128>(num_), den_); }
    Rational& operator+=(Rational b) { return *this = *this + b; }
    Rational& operator-=(Rational b) { return *this = *this - b; }
    Rational& operator*=(Rational b) { return *this = *this * b; }
    Rational& operator/=(Rational b) { return *this = *this / b; }

    friend bool operator==(Rational a, Rational b) noexcept
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(Rational a, Rational b) noexcept
    {
        using W = __int128;
        W const l = W(a.num_) * b.den_;
        W const r = W(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less
                     : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, Rational r) { return os << r.str(); }

  private:
    static Rational make(__int128 n, __int128 d)
    {
        if (d == 0)
            throw DomainError("Rational: zero denominator");
        if (d < 0)
        {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b != 0)
        {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1)
        {
            n /= a;
            d /= a;
        }
        constexpr __int128 lo = std::numeric_limits<std::int64_t>::min() + 1;
        constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
        if (n < lo || n > hi || d > hi)
            throw Error("Rational: 64-bit overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace hillstat::maps
