#ifndef SURJECTIVE_UPOLY_HPP
#define SURJECTIVE_UPOLY_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "finite_field.hpp"

namespace surjective {

/// Dense univariate polynomial with coefficient codes low-to-high. The field
/// is passed to every operation, so a polynomial with prime-field
/// coefficients can be used unchanged inside any extension of that field.
class UPoly {
   public:
    UPoly() = default;
    explicit UPoly(std::vector<Elem> c) : c_(std::move(c)) { trim(); }

    static UPoly constant(Elem c) { return UPoly(std::vector<Elem>{c}); }
    static UPoly x() { return UPoly(std::vector<Elem>{0, 1}); }

    bool is_zero() const noexcept { return c_.empty(); }
    /// Degree, with -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    Elem lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
    Elem operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    const std::vector<Elem>& coeffs() const noexcept { return c_; }

    friend bool operator==(const UPoly&, const UPoly&) = default;

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

   private:
    std::vector<Elem> c_;
};

namespace upoly {

inline UPoly add(const FieldDesc& f, const UPoly& a, const UPoly& b) {
    std::vector<Elem> r(std::max(a.coeffs().size(), b.coeffs().size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.add(a[i], b[i]);
    return UPoly(std::move(r));
}

inline UPoly sub(const FieldDesc& f, const UPoly& a, const UPoly& b) {
    std::vector<Elem> r(std::max(a.coeffs().size(), b.coeffs().size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.sub(a[i], b[i]);
    return UPoly(std::move(r));
}

inline UPoly scale(const FieldDesc& f, const UPoly& a, Elem s) {
    std::vector<Elem> r(a.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.mul(a[i], s);
    return UPoly(std::move(r));
}

inline UPoly mul(const FieldDesc& f, const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Elem> r(a.coeffs().size() + b.coeffs().size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs().size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    }
    return UPoly(std::move(r));
}

/// Quotient and remainder; the divisor must be nonzero.
inline std::pair<UPoly, UPoly> divmod(const FieldDesc& f, const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Elem> r = a.coeffs();
    const int db = b.degree();
    if (a.degree() < db) return {UPoly{}, a};
    std::vector<Elem> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
    const Elem inv_lead = f.inv(b.lead());
    for (int d = a.degree(); d >= db; --d) {
        const Elem c = f.mul(r[static_cast<std::size_t>(d)], inv_lead);
        if (c == 0) continue;
        q[static_cast<std::size_t>(d - db)] = c;
        for (int i = 0; i <= db; ++i) {
            auto& slot = r[static_cast<std::size_t>(d - db + i)];
            slot = f.sub(slot, f.mul(c, b[static_cast<std::size_t>(i)]));
        }
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
}

inline UPoly mod(const FieldDesc& f, const UPoly& a, const UPoly& b) { return divmod(f, a, b).second; }

inline UPoly monic(const FieldDesc& f, const UPoly& a) {
    if (a.is_zero()) return a;
    return scale(f, a, f.inv(a.lead()));
}

/// Monic gcd; gcd(0, 0) = 0.
inline UPoly gcd(const FieldDesc& f, UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = mod(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(f, a);
}

inline UPoly mulmod(const FieldDesc& f, const UPoly& a, const UPoly& b, const UPoly& m) {
    return mod(f, mul(f, a, b), m);
}

inline UPoly powmod(const FieldDesc& f, UPoly base, std::uint64_t e, const UPoly& m) {
    UPoly r = mod(f, UPoly::constant(1), m);
    base = mod(f, base, m);
    while (e) {
        if (e & 1) r = mulmod(f, r, base, m);
        e >>= 1;
        if (e) base = mulmod(f, base, base, m);
    }
    return r;
}

inline Elem eval(const FieldDesc& f, const UPoly& a, Elem x) {
    Elem r = 0;
    for (std::size_t i = a.coeffs().size(); i-- > 0;) r = f.add(f.mul(r, x), a[i]);
    return r;
}

/// Exact quotient; throws if the division leaves a remainder.
inline UPoly exact_div(const FieldDesc& f, const UPoly& a, const UPoly& b) {
    auto [q, r] = divmod(f, a, b);
    if (!r.is_zero()) throw std::logic_error("inexact polynomial division");
    return q;
}

namespace detail {

// Splits a squarefree product of distinct linear factors into its roots.
inline void split_linear(const FieldDesc& f, const UPoly& g, std::vector<Elem>& out) {
    if (g.degree() <= 0) return;
    if (g.degree() == 1) {
        out.push_back(f.neg(f.div(g[0], g[1])));
        return;
    }
    const std::uint64_t p = f.characteristic();
    const std::uint64_t q = f.order();
    auto try_delta = [&](Elem delta) -> bool {
        UPoly h;
        if (p == 2) {
            // Absolute trace of delta*x modulo g.
            UPoly term = mod(f, UPoly(std::vector<Elem>{0, delta}), g);
            UPoly tr = term;
            for (unsigned i = 1; i < f.degree(); ++i) {
                term = mulmod(f, term, term, g);
                tr = add(f, tr, term);
            }
            h = gcd(f, g, tr);
        } else {
            UPoly s = powmod(f, UPoly(std::vector<Elem>{delta, 1}), (q - 1) / 2, g);
            s = sub(f, s, UPoly::constant(1));
            h = gcd(f, g, s);
        }
        if (h.degree() <= 0 || h.degree() >= g.degree()) return false;
        split_linear(f, h, out);
        split_linear(f, exact_div(f, g, h), out);
        return true;
    };
    // The polynomial basis t^j always separates two roots under the trace map
    // in characteristic 2; otherwise walk the field.
    if (p == 2) {
        Elem basis = 1;
        for (unsigned j = 0; j < f.degree(); ++j, basis *= 2)
            if (try_delta(basis)) return;
    }
    for (Elem delta = 0; delta < q; ++delta)
        if (try_delta(delta)) return;
    throw std::logic_error("failed to split a product of linear factors");
}

}  // namespace detail

/// Distinct roots of a (nonzero) polynomial that lie in the given field,
/// sorted by code. Coefficients must be valid codes of that field.
inline std::vector<Elem> roots(const FieldDesc& f, const UPoly& a) {
    if (a.is_zero()) throw std::invalid_argument("roots of the zero polynomial");
    std::vector<Elem> out;
    if (a.degree() <= 0) return out;
    const UPoly m = monic(f, a);
    UPoly xq = powmod(f, UPoly::x(), f.order(), m);
    const UPoly g = gcd(f, m, sub(f, xq, UPoly::x()));
    detail::split_linear(f, g, out);
    std::sort(out.begin(), out.end());
    return out;
}

/// Determinant by fraction-free (Bareiss) elimination over F[y].
inline UPoly bareiss_det(const FieldDesc& f, std::vector<std::vector<UPoly>> m) {
    const std::size_t n = m.size();
    if (n == 0) return UPoly::constant(1);
    UPoly prev = UPoly::constant(1);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t r = k + 1;
            while (r < n && m[r][k].is_zero()) ++r;
            if (r == n) return {};
            std::swap(m[k], m[r]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                UPoly t = sub(f, mul(f, m[k][k], m[i][j]), mul(f, m[i][k], m[k][j]));
                m[i][j] = exact_div(f, t, prev);
            }
        }
        prev = m[k][k];
    }
    UPoly d = m[n - 1][n - 1];
    if (negate) d = scale(f, d, f.neg(1));
    return d;
}

/// Sylvester resultant of A = sum a_i x^i and B = sum b_j x^j whose
/// coefficients are polynomials in y. Formal degrees are the vector lengths
/// minus one; both must be at least 1.
inline UPoly sylvester_resultant(const FieldDesc& f, const std::vector<UPoly>& a, const std::vector<UPoly>& b) {
    const std::size_t m = a.size() - 1, n = b.size() - 1;
    if (m == 0 || n == 0) throw std::invalid_argument("resultant needs positive formal degrees");
    const std::size_t N = m + n;
    std::vector<std::vector<UPoly>> s(N, std::vector<UPoly>(N));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i <= m; ++i) s[r][r + i] = a[m - i];
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j <= n; ++j) s[n + r][r + j] = b[n - j];
    return bareiss_det(f, std::move(s));
}

}  // namespace upoly
}  // namespace surjective

#endif
