#ifndef SURJECTIVE_MPOLY_HPP
#define SURJECTIVE_MPOLY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "rings.hpp"

namespace surjective {

/// Sparse polynomial in N variables over a coefficient ring.
///
/// Terms are kept in a map keyed by exponent tuples and zero coefficients are
/// never stored, so the representation is canonical and equality is
/// structural. Map order is lexicographic with variable 0 most significant;
/// the leading term is the last entry.
template <class Ring, std::size_t N>
class SparsePoly {
   public:
    using Coeff = typename Ring::value_type;
    using Exps = std::array<std::uint16_t, N>;
    using Terms = std::map<Exps, Coeff>;

    explicit SparsePoly(Ring ring = Ring{}) : ring_(std::move(ring)) {}

    static SparsePoly constant(const Ring& ring, const Coeff& c) {
        SparsePoly p(ring);
        p.add_term(Exps{}, c);
        return p;
    }

    static SparsePoly variable(const Ring& ring, std::size_t v) {
        if (v >= N) throw std::out_of_range("variable index");
        Exps e{};
        e[v] = 1;
        SparsePoly p(ring);
        p.add_term(e, ring.one());
        return p;
    }

    static SparsePoly monomial(const Ring& ring, const Exps& e, const Coeff& c) {
        SparsePoly p(ring);
        p.add_term(e, c);
        return p;
    }

    const Ring& ring() const noexcept { return ring_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    void add_term(const Exps& e, const Coeff& c) {
        if (ring_.is_zero(c)) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
            return;
        }
        it->second = ring_.add(it->second, c);
        if (ring_.is_zero(it->second)) terms_.erase(it);
    }

    Coeff coeff(const Exps& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? ring_.zero() : it->second;
    }

    int degree_in(std::size_t v) const noexcept {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[v]));
        return d;
    }

    int total_degree() const noexcept {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (auto x : e) s += x;
            d = std::max(d, s);
        }
        return d;
    }

    bool involves(std::size_t v) const noexcept { return degree_in(v) > 0; }

    /// Coefficient of v^k, as a polynomial not involving v.
    SparsePoly coeff_in(std::size_t v, int k) const {
        SparsePoly r(ring_);
        for (const auto& [e, c] : terms_) {
            if (e[v] != k) continue;
            Exps f = e;
            f[v] = 0;
            r.terms_.emplace(f, c);
        }
        return r;
    }

    SparsePoly lead_coeff_in(std::size_t v) const { return coeff_in(v, degree_in(v)); }

    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) {
        for (const auto& [e, c] : b.terms_) a.add_term(e, c);
        return a;
    }

    friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) {
        for (const auto& [e, c] : b.terms_) a.add_term(e, a.ring_.neg(c));
        return a;
    }

    SparsePoly operator-() const {
        SparsePoly r(ring_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, ring_.neg(c));
        return r;
    }

    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
        SparsePoly r(a.ring_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exps e;
                for (std::size_t i = 0; i < N; ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
                r.add_term(e, a.ring_.mul(ca, cb));
            }
        return r;
    }

    SparsePoly scaled(const Coeff& s) const {
        SparsePoly r(ring_);
        if (ring_.is_zero(s)) return r;
        for (const auto& [e, c] : terms_) r.add_term(e, ring_.mul(c, s));
        return r;
    }

    SparsePoly pow(unsigned n) const {
        SparsePoly r = constant(ring_, ring_.one());
        for (unsigned i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    friend bool operator==(const SparsePoly& a, const SparsePoly& b) { return a.terms_ == b.terms_; }

    /// Replaces variable v by the polynomial s and expands.
    SparsePoly substitute(std::size_t v, const SparsePoly& s) const {
        SparsePoly r(ring_);
        std::map<int, SparsePoly> powers;
        for (const auto& [e, c] : terms_) {
            Exps rest = e;
            const int k = rest[v];
            rest[v] = 0;
            auto it = powers.find(k);
            if (it == powers.end()) it = powers.emplace(k, s.pow(static_cast<unsigned>(k))).first;
            r = r + monomial(ring_, rest, c) * it->second;
        }
        return r;
    }

    /// Evaluates with every variable bound.
    Coeff eval(const std::array<Coeff, N>& at) const {
        Coeff sum = ring_.zero();
        for (const auto& [e, c] : terms_) {
            Coeff t = c;
            for (std::size_t i = 0; i < N; ++i)
                for (unsigned k = 0; k < e[i]; ++k) t = ring_.mul(t, at[i]);
            sum = ring_.add(sum, t);
        }
        return sum;
    }

    std::pair<Exps, Coeff> leading_term() const {
        if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
        return *terms_.rbegin();
    }

    /// Scales so the leading coefficient is one.
    SparsePoly normalized() const {
        if (terms_.empty()) return *this;
        return scaled(ring_.inv(leading_term().second));
    }

    std::string to_string(const std::array<const char*, N>& names) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            Coeff mag = c;
            const bool negative = ring_.is_negative(c);
            if (negative) mag = ring_.neg(c);
            if (first) {
                if (negative) os << '-';
            } else {
                os << (negative ? " - " : " + ");
            }
            first = false;
            bool is_const = true;
            for (auto x : e) is_const = is_const && x == 0;
            const bool unit = mag == ring_.one();
            if (!unit || is_const) os << ring_.to_string(mag);
            bool need_star = !unit || is_const;
            for (std::size_t i = 0; i < N; ++i) {
                if (e[i] == 0) continue;
                if (need_star) os << '*';
                os << names[i];
                if (e[i] > 1) os << '^' << e[i];
                need_star = true;
            }
        }
        return os.str();
    }

   private:
    Ring ring_;
    Terms terms_;
};

namespace mpoly {

/// Exact multivariate division; throws std::logic_error when b does not
/// divide a.
template <class Ring, std::size_t N>
SparsePoly<Ring, N> exact_div(const SparsePoly<Ring, N>& a, const SparsePoly<Ring, N>& b) {
    using P = SparsePoly<Ring, N>;
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    const Ring& ring = a.ring();
    P q(ring), r = a;
    const auto [eb, cb] = b.leading_term();
    const auto inv_cb = ring.inv(cb);
    while (!r.is_zero()) {
        const auto [er, cr] = r.leading_term();
        typename P::Exps e;
        for (std::size_t i = 0; i < N; ++i) {
            if (er[i] < eb[i]) throw std::logic_error("inexact multivariate division");
            e[i] = static_cast<std::uint16_t>(er[i] - eb[i]);
        }
        const P t = P::monomial(ring, e, ring.mul(cr, inv_cb));
        q = q + t;
        r = r - t * b;
    }
    return q;
}

/// Pseudo-remainder of a by b with respect to variable v.
template <class Ring, std::size_t N>
SparsePoly<Ring, N> prem(SparsePoly<Ring, N> a, const SparsePoly<Ring, N>& b, std::size_t v) {
    using P = SparsePoly<Ring, N>;
    const int db = b.degree_in(v);
    const P lb = b.lead_coeff_in(v);
    while (!a.is_zero() && a.degree_in(v) >= db) {
        const int da = a.degree_in(v);
        typename P::Exps e{};
        e[v] = static_cast<std::uint16_t>(da - db);
        const P shift = P::monomial(a.ring(), e, a.ring().one());
        a = lb * a - a.lead_coeff_in(v) * shift * b;
    }
    return a;
}

template <class Ring, std::size_t N>
SparsePoly<Ring, N> gcd_from(const SparsePoly<Ring, N>& a, const SparsePoly<Ring, N>& b, std::size_t v);

/// gcd of the coefficients of a with respect to variable v.
template <class Ring, std::size_t N>
SparsePoly<Ring, N> content_in(const SparsePoly<Ring, N>& a, std::size_t v) {
    SparsePoly<Ring, N> g(a.ring());
    for (int k = 0; k <= a.degree_in(v); ++k) {
        auto c = a.coeff_in(v, k);
        if (c.is_zero()) continue;
        g = gcd_from(g, c, v + 1);
        if (g.total_degree() == 0) break;
    }
    return g;
}

template <class Ring, std::size_t N>
SparsePoly<Ring, N> primitive_part(const SparsePoly<Ring, N>& a, std::size_t v) {
    if (a.is_zero()) return a;
    return exact_div(a, content_in(a, v));
}

/// gcd of polynomials that involve only variables v, v+1, ..., N-1.
/// Recursive primitive remainder sequence; the result is normalized to a
/// unit leading coefficient.
template <class Ring, std::size_t N>
SparsePoly<Ring, N> gcd_from(const SparsePoly<Ring, N>& a, const SparsePoly<Ring, N>& b, std::size_t v) {
    using P = SparsePoly<Ring, N>;
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    if (v >= N) return P::constant(a.ring(), a.ring().one());
    if (!a.involves(v) && !b.involves(v)) return gcd_from(a, b, v + 1);
    const P ca = content_in(a, v), cb = content_in(b, v);
    const P c = gcd_from(ca, cb, v + 1);
    P f = exact_div(a, ca), g = exact_div(b, cb);
    if (f.degree_in(v) < g.degree_in(v)) std::swap(f, g);
    while (!g.is_zero() && g.degree_in(v) > 0) {
        P r = prem(f, g, v);
        f = std::move(g);
        g = r.is_zero() ? r : primitive_part(r, v);
    }
    // g is now zero (f is the gcd) or a nonzero constant in v (coprime).
    P pp = g.is_zero() ? primitive_part(f, v) : P::constant(a.ring(), a.ring().one());
    return (c * pp).normalized();
}

template <class Ring, std::size_t N>
SparsePoly<Ring, N> gcd(const SparsePoly<Ring, N>& a, const SparsePoly<Ring, N>& b) {
    return gcd_from(a, b, 0);
}

}  // namespace mpoly
}  // namespace surjective

#endif
