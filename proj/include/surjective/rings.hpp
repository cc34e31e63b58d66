#ifndef SURJECTIVE_RINGS_HPP
#define SURJECTIVE_RINGS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "finite_field.hpp"

namespace surjective {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Coefficient ring backed by a finite field descriptor.
struct FieldRing {
    using value_type = Elem;

    const FieldDesc* field;

    explicit FieldRing(const FieldDesc& f) : field(&f) {}

    value_type zero() const noexcept { return 0; }
    value_type one() const noexcept { return 1; }
    value_type from_int(std::int64_t v) const noexcept { return field->from_int(v); }
    bool is_zero(const value_type& a) const noexcept { return a == 0; }
    value_type add(const value_type& a, const value_type& b) const noexcept { return field->add(a, b); }
    value_type sub(const value_type& a, const value_type& b) const noexcept { return field->sub(a, b); }
    value_type neg(const value_type& a) const noexcept { return field->neg(a); }
    value_type mul(const value_type& a, const value_type& b) const noexcept { return field->mul(a, b); }
    value_type inv(const value_type& a) const { return field->inv(a); }
    std::string to_string(const value_type& a) const { return field->to_string(a); }
    bool is_negative(const value_type&) const noexcept { return false; }

    friend bool operator==(const FieldRing& a, const FieldRing& b) noexcept { return *a.field == *b.field; }
};

/// Exact rational numbers.
struct RationalRing {
    using value_type = Rational;

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(std::int64_t v) const { return v; }
    bool is_zero(const value_type& a) const { return a == 0; }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const {
        if (a == 0) throw std::domain_error("inverse of zero rational");
        return 1 / a;
    }
    std::string to_string(const value_type& a) const { return a.str(); }
    bool is_negative(const value_type& a) const { return a < 0; }

    friend bool operator==(const RationalRing&, const RationalRing&) noexcept { return true; }
};

}  // namespace surjective

#endif
