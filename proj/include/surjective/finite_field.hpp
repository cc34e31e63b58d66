#ifndef SURJECTIVE_FINITE_FIELD_HPP
#define SURJECTIVE_FINITE_FIELD_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace surjective {

/// Element of GF(p^k) encoded as the integer sum c_i p^i of its coordinates
/// in the polynomial basis 1, t, ..., t^{k-1}. Prime-field elements keep
/// the same code in every extension, so GF(p) embeds without conversion.
using Elem = std::uint64_t;

namespace detail {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Dense polynomials over GF(p) with coefficients low-to-high; used only while
// searching for the defining modulus, before any FieldDesc exists.
using ModPoly = std::vector<std::uint64_t>;

inline void trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline ModPoly poly_mod(ModPoly a, const ModPoly& m, std::uint64_t p) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    const std::uint64_t inv_lead = mod_pow(m.back(), p - 2, p);
    while (a.size() > dm) {
        const std::uint64_t c = a.back() * inv_lead % p;
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i)
            a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
        trim(a);
    }
    return a;
}

inline ModPoly poly_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& m, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    ModPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return poly_mod(std::move(r), m, p);
}

inline ModPoly poly_gcd(ModPoly a, ModPoly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        ModPoly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// x^(p^n) mod m by n successive p-th powers.
inline ModPoly frobenius_power_of_x(const ModPoly& m, std::uint64_t p, unsigned n) {
    ModPoly h = poly_mod({0, 1}, m, p);
    for (unsigned i = 0; i < n; ++i) {
        ModPoly acc{1};
        ModPoly base = h;
        std::uint64_t e = p;
        while (e) {
            if (e & 1) acc = poly_mulmod(acc, base, m, p);
            base = poly_mulmod(base, base, m, p);
            e >>= 1;
        }
        h = std::move(acc);
    }
    return h;
}

// Rabin's irreducibility test for a monic polynomial of degree k.
inline bool is_irreducible(const ModPoly& m, std::uint64_t p) {
    const unsigned k = static_cast<unsigned>(m.size() - 1);
    if (k == 1) return true;
    auto x_minus = [&](ModPoly h) {
        if (h.size() < 2) h.resize(2, 0);
        h[1] = (h[1] + p - 1) % p;
        trim(h);
        return h;
    };
    if (!x_minus(frobenius_power_of_x(m, p, k)).empty()) return false;
    for (std::uint64_t r : prime_factors(k)) {
        ModPoly g = poly_gcd(m, x_minus(frobenius_power_of_x(m, p, k / static_cast<unsigned>(r))), p);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace detail

/// Finite field GF(p^k) with a canonical defining modulus.
///
/// The modulus is the monic irreducible of degree k whose lower coefficients,
/// read as the base-p integer sum c_i p^i, are smallest. Two descriptors with
/// the same (p, k) are therefore identical, and build_field() hands out one
/// shared immutable instance per pair.
class FieldDesc {
   public:
    static constexpr unsigned max_degree = 16;
    static constexpr std::uint64_t max_characteristic = (std::uint64_t{1} << 31) - 1;
    static constexpr std::uint64_t table_limit = std::uint64_t{1} << 20;

    FieldDesc(std::uint64_t p, unsigned k) : p_(p), k_(k) {
        if (!detail::is_prime(p) || p > max_characteristic)
            throw std::invalid_argument("characteristic " + std::to_string(p) + " is not a supported prime");
        if (k < 1 || k > max_degree)
            throw std::invalid_argument("extension degree " + std::to_string(k) + " out of range 1..16");
        q_ = 1;
        for (unsigned i = 0; i < k; ++i) {
            if (q_ > (std::uint64_t{1} << 62) / p) throw std::invalid_argument("field order exceeds 2^62");
            q_ *= p;
        }
        pow_p_.resize(k_);
        std::uint64_t w = 1;
        for (unsigned i = 0; i < k_; ++i, w *= p_) pow_p_[i] = w;
        find_modulus();
        if (q_ <= table_limit) build_tables();
    }

    std::uint64_t characteristic() const noexcept { return p_; }
    unsigned degree() const noexcept { return k_; }
    std::uint64_t order() const noexcept { return q_; }
    /// Monic modulus, coefficients low-to-high (length k+1). For k = 1 this is t.
    const std::vector<std::uint64_t>& modulus() const noexcept { return modulus_; }
    bool is_prime_field() const noexcept { return k_ == 1; }
    bool contains_code(Elem a) const noexcept { return a < q_; }
    bool in_prime_field(Elem a) const noexcept { return a < p_; }

    Elem zero() const noexcept { return 0; }
    Elem one() const noexcept { return 1; }

    /// Image of an integer under Z -> GF(p).
    Elem from_int(std::int64_t v) const noexcept {
        const auto p = static_cast<std::int64_t>(p_);
        std::int64_t r = v % p;
        if (r < 0) r += p;
        return static_cast<Elem>(r);
    }

    std::vector<std::uint64_t> coords(Elem a) const {
        std::vector<std::uint64_t> c(k_);
        for (unsigned i = 0; i < k_; ++i) {
            c[i] = a % p_;
            a /= p_;
        }
        return c;
    }

    Elem from_coords(std::span<const std::uint64_t> c) const {
        if (c.size() != k_) throw std::invalid_argument("coordinate vector has wrong length");
        Elem a = 0;
        for (unsigned i = k_; i-- > 0;) {
            if (c[i] >= p_) throw std::invalid_argument("coordinate out of range");
            a = a * p_ + c[i];
        }
        return a;
    }

    Elem add(Elem a, Elem b) const noexcept {
        if (p_ == 2) return a ^ b;
        if (k_ == 1) {
            const Elem s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        Elem r = 0;
        for (unsigned i = 0; i < k_; ++i) {
            Elem s = a % p_ + b % p_;
            if (s >= p_) s -= p_;
            r += s * pow_p_[i];
            a /= p_;
            b /= p_;
        }
        return r;
    }

    Elem neg(Elem a) const noexcept {
        if (p_ == 2) return a;
        if (k_ == 1) return a == 0 ? 0 : p_ - a;
        Elem r = 0;
        for (unsigned i = 0; i < k_; ++i) {
            const Elem d = a % p_;
            r += (d == 0 ? 0 : p_ - d) * pow_p_[i];
            a /= p_;
        }
        return r;
    }

    Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const noexcept {
        if (a == 0 || b == 0) return 0;
        if (!log_.empty()) {
            return exp_[log_[a] + log_[b]];
        }
        if (k_ == 1) return a * b % p_;
        return poly_mul(a, b);
    }

    Elem inv(Elem a) const {
        if (a == 0) throw std::domain_error("inverse of zero in GF(" + std::to_string(q_) + ")");
        if (!log_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
        return pow(a, q_ - 2);
    }

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem pow(Elem a, std::uint64_t e) const noexcept {
        if (e == 0) return 1;
        if (a == 0) return 0;
        if (!log_.empty()) {
            const std::uint64_t m = q_ - 1;
            const unsigned __int128 l = static_cast<unsigned __int128>(log_[a]) * (e % m);
            return exp_[static_cast<std::uint64_t>(l % m)];
        }
        Elem r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    Elem frobenius(Elem a) const noexcept { return k_ == 1 ? a : pow(a, p_); }

    /// Renders prime-field elements as integers, others as polynomials in t.
    std::string to_string(Elem a) const {
        if (k_ == 1) return std::to_string(a);
        if (a == 0) return "0";
        const auto c = coords(a);
        std::ostringstream os;
        bool first = true;
        for (unsigned i = 0; i < k_; ++i) {
            if (c[i] == 0) continue;
            if (!first) os << '+';
            first = false;
            if (i == 0) {
                os << c[i];
                continue;
            }
            if (c[i] != 1) os << c[i] << '*';
            os << 't';
            if (i > 1) os << '^' << i;
        }
        return os.str();
    }

    bool operator==(const FieldDesc& o) const noexcept { return p_ == o.p_ && k_ == o.k_; }

   private:
    void find_modulus() {
        if (k_ == 1) {
            modulus_ = {0, 1};
            return;
        }
        const std::uint64_t lower_count = q_;
        for (std::uint64_t code = 0; code < lower_count; ++code) {
            std::vector<std::uint64_t> m(k_ + 1, 0);
            std::uint64_t c = code;
            for (unsigned i = 0; i < k_; ++i) {
                m[i] = c % p_;
                c /= p_;
            }
            m[k_] = 1;
            if (m[0] == 0) continue;
            if (detail::is_irreducible(m, p_)) {
                modulus_ = std::move(m);
                return;
            }
        }
        throw std::logic_error("no irreducible polynomial found");
    }

    Elem poly_mul(Elem a, Elem b) const noexcept {
        std::array<std::uint64_t, max_degree> ca{}, cb{};
        std::array<std::uint64_t, 2 * max_degree> r{};
        for (unsigned i = 0; i < k_; ++i) {
            ca[i] = a % p_;
            a /= p_;
            cb[i] = b % p_;
            b /= p_;
        }
        for (unsigned i = 0; i < k_; ++i) {
            if (ca[i] == 0) continue;
            for (unsigned j = 0; j < k_; ++j) r[i + j] = (r[i + j] + ca[i] * cb[j]) % p_;
        }
        for (unsigned d = 2 * k_ - 2; d >= k_; --d) {
            const std::uint64_t c = r[d];
            if (c == 0) continue;
            r[d] = 0;
            const std::uint64_t nc = p_ - c;
            for (unsigned i = 0; i < k_; ++i)
                r[d - k_ + i] = (r[d - k_ + i] + nc * modulus_[i]) % p_;
        }
        Elem out = 0;
        for (unsigned i = k_; i-- > 0;) out = out * p_ + r[i];
        return out;
    }

    void build_tables() {
        const std::uint64_t m = q_ - 1;
        const auto factors = detail::prime_factors(m);
        Elem g = 0;
        for (Elem cand = 1; cand < q_; ++cand) {
            bool primitive = true;
            for (std::uint64_t r : factors) {
                if (pow(cand, m / r) == 1) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                g = cand;
                break;
            }
        }
        // exp_ is doubled so products index without a reduction.
        std::vector<std::uint32_t> log(q_, 0);
        std::vector<std::uint32_t> exp(2 * m, 0);
        Elem x = 1;
        for (std::uint64_t i = 0; i < m; ++i) {
            exp[i] = static_cast<std::uint32_t>(x);
            exp[i + m] = static_cast<std::uint32_t>(x);
            log[x] = static_cast<std::uint32_t>(i);
            x = k_ == 1 ? x * g % p_ : poly_mul(x, g);
        }
        log_ = std::move(log);
        exp_ = std::move(exp);
    }

    std::uint64_t p_;
    unsigned k_;
    std::uint64_t q_ = 1;
    std::vector<std::uint64_t> modulus_;
    std::vector<std::uint64_t> pow_p_;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> exp_;
};

/// Shared canonical GF(p^k). Instances live for the whole process and may be
/// used from any thread.
inline const FieldDesc& build_field(std::uint64_t p, unsigned k = 1) {
    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, unsigned>, std::unique_ptr<const FieldDesc>> registry;
    if (!detail::is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
    std::lock_guard lock(mu);
    auto& slot = registry[{p, k}];
    if (!slot) slot = std::make_unique<const FieldDesc>(p, k);
    return *slot;
}

/// A field element that remembers its field. Mixing fields is a programming
/// error and throws std::logic_error.
class Scalar {
   public:
    Scalar(const FieldDesc& f, Elem v) : f_(&f), v_(v) {
        if (!f.contains_code(v)) throw std::invalid_argument("element code out of range");
    }

    static Scalar from_int(const FieldDesc& f, std::int64_t v) { return Scalar(f, f.from_int(v)); }

    const FieldDesc& field() const noexcept { return *f_; }
    Elem code() const noexcept { return v_; }
    std::vector<std::uint64_t> coords() const { return f_->coords(v_); }
    bool is_zero() const noexcept { return v_ == 0; }

    friend Scalar operator+(const Scalar& a, const Scalar& b) { return {a.same(b), a.f_->add(a.v_, b.v_)}; }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return {a.same(b), a.f_->sub(a.v_, b.v_)}; }
    friend Scalar operator*(const Scalar& a, const Scalar& b) { return {a.same(b), a.f_->mul(a.v_, b.v_)}; }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return {a.same(b), a.f_->div(a.v_, b.v_)}; }
    Scalar operator-() const { return {*f_, f_->neg(v_)}; }
    Scalar inv() const { return {*f_, f_->inv(v_)}; }
    Scalar pow(std::uint64_t e) const { return {*f_, f_->pow(v_, e)}; }
    Scalar frobenius() const { return {*f_, f_->frobenius(v_)}; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        a.same(b);
        return a.v_ == b.v_;
    }

    std::string to_string() const { return f_->to_string(v_); }

   private:
    const FieldDesc& same(const Scalar& o) const {
        if (!(*f_ == *o.f_)) throw std::logic_error("operands belong to different fields");
        return *f_;
    }

    const FieldDesc* f_;
    Elem v_;
};

/// Point of P^2 over a finite field, normalized so that the last nonzero
/// coordinate is 1.
class ProjPoint {
   public:
    ProjPoint(const FieldDesc& f, std::array<Elem, 3> raw) : f_(&f), c_(raw) {
        int last = -1;
        for (int i = 0; i < 3; ++i) {
            if (!f.contains_code(c_[i])) throw std::invalid_argument("coordinate code out of range");
            if (c_[i] != 0) last = i;
        }
        if (last < 0) throw std::invalid_argument("[0:0:0] is not a projective point");
        if (c_[last] != 1) {
            const Elem s = f.inv(c_[last]);
            for (auto& c : c_) c = f.mul(c, s);
        }
    }

    const FieldDesc& field() const noexcept { return *f_; }
    const std::array<Elem, 3>& coords() const noexcept { return c_; }
    Scalar operator[](std::size_t i) const { return {*f_, c_.at(i)}; }

    friend bool operator==(const ProjPoint& a, const ProjPoint& b) noexcept {
        return *a.f_ == *b.f_ && a.c_ == b.c_;
    }
    friend bool operator<(const ProjPoint& a, const ProjPoint& b) noexcept { return a.c_ < b.c_; }

    std::string to_string() const {
        return "[" + f_->to_string(c_[0]) + ":" + f_->to_string(c_[1]) + ":" + f_->to_string(c_[2]) + "]";
    }

   private:
    const FieldDesc* f_;
    std::array<Elem, 3> c_;
};

/// All q^2 + q + 1 points of P^2(GF(q)), sorted lexicographically by
/// normalized coordinate codes.
inline std::vector<ProjPoint> enumerate_p2(const FieldDesc& f) {
    const std::uint64_t q = f.order();
    if (q > (std::uint64_t{1} << 12)) throw std::invalid_argument("P^2 enumeration too large for GF(" + std::to_string(q) + ")");
    std::vector<ProjPoint> pts;
    pts.reserve(q * q + q + 1);
    for (Elem x = 0; x < q; ++x)
        for (Elem y = 0; y < q; ++y) pts.emplace_back(f, std::array<Elem, 3>{x, y, 1});
    for (Elem x = 0; x < q; ++x) pts.emplace_back(f, std::array<Elem, 3>{x, 1, 0});
    pts.emplace_back(f, std::array<Elem, 3>{1, 0, 0});
    std::sort(pts.begin(), pts.end());
    return pts;
}

/// Smallest d dividing k such that every coordinate lies in GF(p^d).
inline unsigned minimal_degree(const FieldDesc& f, const std::array<Elem, 3>& normalized) {
    const unsigned k = f.degree();
    if (k == 1) return 1;
    for (unsigned d = 1; d < k; ++d) {
        if (k % d != 0) continue;
        bool fixed = true;
        for (Elem c : normalized) {
            Elem img = c;
            for (unsigned i = 0; i < d; ++i) img = f.frobenius(img);
            if (img != c) {
                fixed = false;
                break;
            }
        }
        if (fixed) return d;
    }
    return k;
}

inline unsigned minimal_degree(const ProjPoint& pt) { return minimal_degree(pt.field(), pt.coords()); }

}  // namespace surjective

#endif
