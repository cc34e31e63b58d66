#ifndef SURJECTIVE_FORMS_HPP
#define SURJECTIVE_FORMS_HPP

#include <array>
#include <cctype>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "finite_field.hpp"
#include "mpoly.hpp"
#include "rings.hpp"

namespace surjective {

/// Frozen monomial order for cubic coefficient vectors:
/// x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3.
inline constexpr std::array<std::array<std::uint16_t, 3>, 10> cubic_monomials = {{
    {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {1, 1, 1},
    {1, 0, 2}, {0, 3, 0}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3},
}};

inline constexpr std::array<const char*, 3> xyz_names = {"x", "y", "z"};

inline int cubic_monomial_index(const std::array<std::uint16_t, 3>& e) {
    for (int i = 0; i < 10; ++i)
        if (cubic_monomials[static_cast<std::size_t>(i)] == e) return i;
    return -1;
}

inline Elem from_rational(const FieldRing& r, const Rational& v) {
    const FieldDesc& f = *r.field;
    const auto p = static_cast<std::int64_t>(f.characteristic());
    const BigInt num = numerator(v), den = denominator(v);
    const auto n = static_cast<std::int64_t>(BigInt(((num % p) + p) % p));
    const auto d = static_cast<std::int64_t>(BigInt(((den % p) + p) % p));
    if (d == 0) throw std::invalid_argument("denominator vanishes in GF(" + std::to_string(p) + ")");
    return f.div(f.from_int(n), f.from_int(d));
}

inline Rational from_rational(const RationalRing&, const Rational& v) { return v; }

/// Homogeneous cubic in x, y, z stored as 10 coefficients in the frozen
/// monomial order.
template <class Ring>
class TernaryForm {
   public:
    using Coeff = typename Ring::value_type;
    using Poly = SparsePoly<Ring, 3>;

    explicit TernaryForm(Ring ring) : ring_(std::move(ring)) { c_.fill(ring_.zero()); }
    TernaryForm(Ring ring, const std::array<Coeff, 10>& c) : ring_(std::move(ring)), c_(c) {}

    /// Coefficients given as integers, mapped through Z -> ring.
    static TernaryForm from_integers(const Ring& ring, const std::array<std::int64_t, 10>& c) {
        TernaryForm f(ring);
        for (std::size_t i = 0; i < 10; ++i) f.c_[i] = ring.from_int(c[i]);
        return f;
    }

    static TernaryForm from_poly(const Poly& p) {
        TernaryForm f(p.ring());
        for (const auto& [e, c] : p.terms()) {
            const int idx = cubic_monomial_index(e);
            if (idx < 0) throw std::invalid_argument("polynomial is not a ternary cubic form");
            f.c_[static_cast<std::size_t>(idx)] = c;
        }
        return f;
    }

    const Ring& ring() const noexcept { return ring_; }
    const std::array<Coeff, 10>& coeffs() const noexcept { return c_; }
    const Coeff& operator[](std::size_t i) const { return c_.at(i); }
    Coeff& operator[](std::size_t i) { return c_.at(i); }

    bool is_zero() const {
        for (const auto& c : c_)
            if (!ring_.is_zero(c)) return false;
        return true;
    }

    Poly to_poly() const {
        Poly p(ring_);
        for (std::size_t i = 0; i < 10; ++i) p.add_term(cubic_monomials[i], c_[i]);
        return p;
    }

    friend TernaryForm operator+(TernaryForm a, const TernaryForm& b) {
        for (std::size_t i = 0; i < 10; ++i) a.c_[i] = a.ring_.add(a.c_[i], b.c_[i]);
        return a;
    }

    TernaryForm scaled(const Coeff& s) const {
        TernaryForm r(ring_);
        for (std::size_t i = 0; i < 10; ++i) r.c_[i] = ring_.mul(c_[i], s);
        return r;
    }

    friend bool operator==(const TernaryForm& a, const TernaryForm& b) { return a.c_ == b.c_; }

    /// "c*x^3 + c*x^2*y + ..." with every nonzero coefficient written out.
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < 10; ++i) {
            if (ring_.is_zero(c_[i])) continue;
            Coeff mag = c_[i];
            const bool negative = ring_.is_negative(mag);
            if (negative) mag = ring_.neg(mag);
            if (first)
                os << (negative ? "-" : "");
            else
                os << (negative ? " - " : " + ");
            first = false;
            const std::string cs = ring_.to_string(mag);
            const bool compound = cs.find_first_of("+*") != std::string::npos;
            os << (compound ? "(" + cs + ")" : cs);
            for (std::size_t v = 0; v < 3; ++v) {
                const auto e = cubic_monomials[i][v];
                if (e == 0) continue;
                os << '*' << xyz_names[v];
                if (e > 1) os << '^' << e;
            }
        }
        return first ? "0" : os.str();
    }

    /// Parses the grammar produced by to_string(): a signed sum of terms
    /// "coef*m" or "m" where m is a product of x, y, z with optional ^n and
    /// coef is an integer or p/q. Every term must have degree 3.
    static TernaryForm parse(const Ring& ring, std::string_view text) {
        TernaryForm f(ring);
        std::string s;
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
        if (s.empty()) throw std::invalid_argument("empty form");
        if (s == "0") return f;
        std::size_t i = 0;
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("cannot parse form at offset " + std::to_string(i) + ": " + why);
        };
        auto read_int = [&]() -> BigInt {
            const std::size_t start = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (start == i) fail("expected digits");
            return BigInt(s.substr(start, i - start));
        };
        while (i < s.size()) {
            bool negative = false;
            if (s[i] == '+' || s[i] == '-') {
                negative = s[i] == '-';
                ++i;
            } else if (i != 0) {
                fail("expected '+' or '-'");
            }
            Rational coef = 1;
            if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                BigInt num = read_int();
                BigInt den = 1;
                if (i < s.size() && s[i] == '/') {
                    ++i;
                    den = read_int();
                    if (den == 0) fail("zero denominator");
                }
                coef = Rational(num, den);
                if (i < s.size() && s[i] == '*') ++i;
            }
            std::array<std::uint16_t, 3> e{};
            bool any_var = false;
            while (i < s.size() && (s[i] == 'x' || s[i] == 'y' || s[i] == 'z')) {
                const std::size_t v = static_cast<std::size_t>(s[i] - 'x');
                ++i;
                unsigned k = 1;
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    k = static_cast<unsigned>(read_int());
                }
                e[v] = static_cast<std::uint16_t>(e[v] + k);
                any_var = true;
                if (i < s.size() && s[i] == '*') {
                    ++i;
                    if (i >= s.size() || (s[i] != 'x' && s[i] != 'y' && s[i] != 'z')) fail("expected variable");
                }
            }
            if (!any_var) fail("term without variables");
            const int idx = cubic_monomial_index(e);
            if (idx < 0) fail("term is not of degree 3");
            if (negative) coef = -coef;
            auto& slot = f.c_[static_cast<std::size_t>(idx)];
            slot = ring.add(slot, from_rational(ring, coef));
        }
        return f;
    }

   private:
    Ring ring_;
    std::array<Coeff, 10> c_;
};

using CubicForm = TernaryForm<FieldRing>;
using RationalCubic = TernaryForm<RationalRing>;

inline const FieldDesc& field_of(const CubicForm& f) { return *f.ring().field; }

/// Values of the 10 cubic monomials at (x, y, z), in the frozen order.
inline std::array<Elem, 10> cubic_monomial_values(const FieldDesc& f, const std::array<Elem, 3>& p) {
    const Elem x = p[0], y = p[1], z = p[2];
    const Elem xx = f.mul(x, x), yy = f.mul(y, y), zz = f.mul(z, z), xy = f.mul(x, y);
    return {f.mul(xx, x), f.mul(xx, y), f.mul(xx, z), f.mul(x, yy), f.mul(xy, z),
            f.mul(x, zz), f.mul(yy, y), f.mul(yy, z), f.mul(y, zz), f.mul(zz, z)};
}

inline Elem dot_monomials(const FieldDesc& f, const std::array<Elem, 10>& coeffs, const std::array<Elem, 10>& mono) {
    Elem s = 0;
    for (std::size_t i = 0; i < 10; ++i)
        if (coeffs[i] != 0) s = f.add(s, f.mul(coeffs[i], mono[i]));
    return s;
}

/// Checks that a form's coefficients can be read inside `target`: either the
/// same field, or the prime subfield of target.
inline void require_embeddable(const CubicForm& form, const FieldDesc& target) {
    const FieldDesc& src = field_of(form);
    if (src == target) return;
    if (src.is_prime_field() && src.characteristic() == target.characteristic()) return;
    throw std::logic_error("form over GF(" + std::to_string(src.order()) + ") cannot be evaluated over GF(" +
                           std::to_string(target.order()) + ")");
}

/// Value of f at the normalized representative of pt.
inline Scalar eval_form(const CubicForm& form, const ProjPoint& pt) {
    require_embeddable(form, pt.field());
    const FieldDesc& f = pt.field();
    return {f, dot_monomials(f, form.coeffs(), cubic_monomial_values(f, pt.coords()))};
}

inline Rational eval_form(const RationalCubic& form, const std::array<Rational, 3>& pt) {
    const Rational &x = pt[0], &y = pt[1], &z = pt[2];
    const std::array<Rational, 10> m = {x * x * x, x * x * y, x * x * z, x * y * y, x * y * z,
                                        x * z * z, y * y * y, y * y * z, y * z * z, z * z * z};
    Rational s = 0;
    for (std::size_t i = 0; i < 10; ++i) s += form[i] * m[i];
    return s;
}

/// Linear combination sum coeffs[i] * basis[i].
template <class Ring>
TernaryForm<Ring> combine(std::span<const TernaryForm<Ring>> basis, std::span<const typename Ring::value_type> coeffs) {
    if (basis.empty()) throw std::invalid_argument("combine needs a nonempty basis");
    if (basis.size() != coeffs.size()) throw std::invalid_argument("basis and coefficient lengths differ");
    const Ring& ring = basis.front().ring();
    TernaryForm<Ring> out(ring);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!(basis[i].ring() == ring)) throw std::logic_error("basis forms over different rings");
        out = out + basis[i].scaled(coeffs[i]);
    }
    return out;
}

inline CubicForm combine(const std::vector<CubicForm>& basis, const std::vector<Elem>& coeffs) {
    return combine<FieldRing>(std::span<const CubicForm>(basis), std::span<const Elem>(coeffs));
}

/// gcd of two nonzero forms, normalized to a unit leading coefficient.
template <class Ring>
SparsePoly<Ring, 3> form_gcd(const TernaryForm<Ring>& f, const TernaryForm<Ring>& g) {
    if (f.is_zero() || g.is_zero()) throw std::invalid_argument("gcd of a zero form");
    if (!(f.ring() == g.ring())) throw std::logic_error("forms over different rings");
    return mpoly::gcd(f.to_poly(), g.to_poly());
}

/// True iff f and g share a nonconstant factor (exact gcd through a
/// primitive pseudo-remainder sequence in x over k[y, z]).
template <class Ring>
bool has_common_factor(const TernaryForm<Ring>& f, const TernaryForm<Ring>& g) {
    return form_gcd(f, g).total_degree() > 0;
}

/// True iff all forms share one nonconstant factor.
template <class Ring>
bool common_factor_all(std::span<const TernaryForm<Ring>> forms) {
    std::vector<const TernaryForm<Ring>*> nonzero;
    for (const auto& f : forms)
        if (!f.is_zero()) nonzero.push_back(&f);
    if (nonzero.size() < 2) throw std::invalid_argument("common_factor_all needs at least two nonzero forms");
    auto g = mpoly::gcd(nonzero[0]->to_poly(), nonzero[1]->to_poly());
    for (std::size_t i = 2; i < nonzero.size() && g.total_degree() > 0; ++i) g = mpoly::gcd(g, nonzero[i]->to_poly());
    return g.total_degree() > 0;
}

inline bool common_factor_all(const std::vector<CubicForm>& forms) {
    return common_factor_all<FieldRing>(std::span<const CubicForm>(forms));
}

}  // namespace surjective

#endif
