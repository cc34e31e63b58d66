#ifndef SURJECTIVE_LINSYS_HPP
#define SURJECTIVE_LINSYS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "finite_field.hpp"
#include "forms.hpp"
#include "linear_algebra.hpp"
#include "upoly.hpp"

namespace surjective {

enum class LambdaCase { five_point, six_point };

inline std::string to_string(LambdaCase c) { return c == LambdaCase::five_point ? "five" : "six"; }

/// Up to seven distinct points of P^2 with integer coordinates; they are
/// reduced into whichever field the cubic system is built over.
class PointConfig {
   public:
    using IntPoint = std::array<std::int64_t, 3>;

    explicit PointConfig(std::vector<IntPoint> points) : points_(std::move(points)) {
        if (points_.empty() || points_.size() > 7)
            throw std::invalid_argument("a configuration needs 1..7 points (2 <= delta <= 8), got " +
                                        std::to_string(points_.size()));
        for (const auto& p : points_)
            if (p[0] == 0 && p[1] == 0 && p[2] == 0) throw std::invalid_argument("[0:0:0] is not a point");
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = i + 1; j < points_.size(); ++j)
                if (proportional(points_[i], points_[j]))
                    throw std::invalid_argument("points " + std::to_string(i) + " and " + std::to_string(j) +
                                                " coincide");
    }

    /// One point per line, "a:b:c"; blank lines and '#' comments skipped.
    static PointConfig parse(std::string_view text) {
        std::vector<IntPoint> pts;
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            IntPoint p{};
            char c1 = 0, c2 = 0;
            std::istringstream ls(line);
            if (!(ls >> p[0] >> c1 >> p[1] >> c2 >> p[2]) || c1 != ':' || c2 != ':')
                throw std::invalid_argument("line " + std::to_string(lineno) + ": expected a:b:c");
            std::string rest;
            if (ls >> rest) throw std::invalid_argument("line " + std::to_string(lineno) + ": trailing input");
            pts.push_back(p);
        }
        return PointConfig(std::move(pts));
    }

    const std::vector<IntPoint>& points() const noexcept { return points_; }
    int delta() const noexcept { return 9 - static_cast<int>(points_.size()); }

    /// Collinear triples; the construction does not require general position
    /// but callers may want to warn.
    std::vector<std::array<std::size_t, 3>> collinear_triples() const {
        std::vector<std::array<std::size_t, 3>> out;
        const auto& P = points_;
        for (std::size_t i = 0; i < P.size(); ++i)
            for (std::size_t j = i + 1; j < P.size(); ++j)
                for (std::size_t k = j + 1; k < P.size(); ++k) {
                    const __int128 det = static_cast<__int128>(P[i][0]) * (P[j][1] * P[k][2] - P[j][2] * P[k][1]) -
                                         static_cast<__int128>(P[i][1]) * (P[j][0] * P[k][2] - P[j][2] * P[k][0]) +
                                         static_cast<__int128>(P[i][2]) * (P[j][0] * P[k][1] - P[j][1] * P[k][0]);
                    if (det == 0) out.push_back({i, j, k});
                }
        return out;
    }

    ProjPoint reduced(std::size_t i, const FieldDesc& f) const {
        const auto& p = points_.at(i);
        std::array<Elem, 3> c{f.from_int(p[0]), f.from_int(p[1]), f.from_int(p[2])};
        if (c[0] == 0 && c[1] == 0 && c[2] == 0)
            throw std::invalid_argument("point " + std::to_string(i) + " reduces to [0:0:0] in characteristic " +
                                        std::to_string(f.characteristic()));
        return ProjPoint(f, c);
    }

   private:
    static bool proportional(const IntPoint& a, const IntPoint& b) {
        return static_cast<__int128>(a[0]) * b[1] == static_cast<__int128>(a[1]) * b[0] &&
               static_cast<__int128>(a[0]) * b[2] == static_cast<__int128>(a[2]) * b[0] &&
               static_cast<__int128>(a[1]) * b[2] == static_cast<__int128>(a[2]) * b[1];
    }

    std::vector<IntPoint> points_;
};

enum class Provenance { computed_from_points, listed_basis_5pt, listed_basis_6pt, reduced_from_integer_generators };

/// A linear system of plane cubics over a finite field, given by a basis.
struct CubicSystem {
    const FieldDesc* field;
    std::vector<CubicForm> basis;
    Provenance provenance;

    std::size_t dim() const noexcept { return basis.size(); }
};

inline CubicSystem system_from_rows(const FieldDesc& f, const Matrix& rows, Provenance prov) {
    CubicSystem s{&f, {}, prov};
    for (const auto& r : rows) {
        std::array<Elem, 10> c{};
        std::copy(r.begin(), r.end(), c.begin());
        s.basis.emplace_back(FieldRing(f), c);
    }
    return s;
}

/// Cubics through the configuration: kernel of the evaluation matrix, in
/// reduced row echelon form over the frozen monomial order.
inline CubicSystem vanishing_cubics(const PointConfig& cfg, const FieldDesc& f) {
    Matrix m;
    for (std::size_t i = 0; i < cfg.points().size(); ++i) {
        const auto mono = cubic_monomial_values(f, cfg.reduced(i, f).coords());
        m.emplace_back(mono.begin(), mono.end());
    }
    return system_from_rows(f, kernel(f, m, 10), Provenance::computed_from_points);
}

/// Integer bases listed verbatim for the five- and six-point systems
/// (obtained over GF(2), read back over the integers).
inline std::vector<std::array<std::int64_t, 10>> paper_lambda_integers(LambdaCase c) {
    //                 x3 x2y x2z xy2 xyz xz2 y3 y2z yz2 z3
    if (c == LambdaCase::five_point)
        return {
            {0, 1, 0, 0, 0, 0, 0, 1, 0, 0},  // x^2y + y^2z
            {0, 0, 0, 1, 0, 0, 0, 1, 0, 0},  // xy^2 + y^2z
            {0, 0, 1, 0, 0, 0, 0, 1, 0, 0},  // x^2z + y^2z
            {0, 0, 0, 0, 1, 0, 0, 0, 0, 0},  // xyz
            {0, 0, 0, 0, 0, 1, 0, 0, 1, 0},  // xz^2 + yz^2
        };
    return {
        {0, 1, 0, 0, 0, 1, 0, 1, 1, 0},   // x^2y + y^2z + z^2(x + y)
        {0, 0, 0, 1, 0, 0, 0, -1, 0, 0},  // y^2(x - z)
        {0, 0, 1, 0, 0, 0, 0, 1, 0, 0},   // z(x^2 + y^2)
        {0, 0, 0, 0, 1, 1, 0, 0, 1, 0},   // xyz + xz^2 + yz^2
    };
}

inline CubicSystem paper_lambda(LambdaCase c, const FieldDesc& f) {
    CubicSystem s{&f, {}, c == LambdaCase::five_point ? Provenance::listed_basis_5pt : Provenance::listed_basis_6pt};
    for (const auto& row : paper_lambda_integers(c)) s.basis.push_back(CubicForm::from_integers(FieldRing(f), row));
    return s;
}

/// Integer cubic generators of the ideal of the five points
/// [1:0:0], [0:1:0], [0:0:1], [1:1:1], [2:3:1] over GF(7). Dropping the last
/// generator adds the point [3:2:1].
inline std::vector<std::array<std::int64_t, 10>> integer_generators(LambdaCase c) {
    std::vector<std::array<std::int64_t, 10>> g = {
        //x3 x2y x2z xy2 xyz xz2 y3 y2z yz2 z3
        {0, 1, 0, 0, 0, -1, 0, 3, -3, 0},   // x^2y + 3y^2z - xz^2 - 3yz^2
        {0, 0, 0, 1, 0, -2, 0, 3, -2, 0},   // xy^2 + 3y^2z - 2xz^2 - 2yz^2
        {0, 0, 1, 0, 0, 2, 0, -1, -2, 0},   // x^2z - y^2z + 2xz^2 - 2yz^2
        {0, 0, 0, 0, 1, 3, 0, 0, 3, 0},     // xyz + 3xz^2 + 3yz^2
        {0, 0, -1, 0, 2, -1, 0, -1, 1, 0},  // z(x - y)(y - x - z)
    };
    if (c == LambdaCase::six_point) g.pop_back();
    return g;
}

inline CubicSystem reduce_integer_generators(LambdaCase c, const FieldDesc& f) {
    Matrix m;
    for (const auto& row : integer_generators(c)) {
        std::vector<Elem> r;
        for (auto v : row) r.push_back(f.from_int(v));
        m.push_back(std::move(r));
    }
    return system_from_rows(f, rref(f, std::move(m)).rows, Provenance::reduced_from_integer_generators);
}

/// Row space of a system's basis, as a canonical key for span comparison.
inline Matrix span_key(const CubicSystem& s) {
    Matrix m;
    for (const auto& b : s.basis) m.emplace_back(b.coeffs().begin(), b.coeffs().end());
    return rref(*s.field, std::move(m)).rows;
}

/// Three independent members of a system whose common zero set is finite.
struct Plane {
    const FieldDesc* field;
    std::array<std::vector<Elem>, 3> vectors;  // v, u, t in system coordinates
    std::vector<CubicForm> forms;              // the map [f0 : f1 : f2]
};

enum class PlaneRejection { rank_deficient, common_factor };

inline std::string to_string(PlaneRejection r) {
    return r == PlaneRejection::rank_deficient ? "rank < 3" : "positive-dimensional base locus";
}

inline std::variant<Plane, PlaneRejection> make_plane(const CubicSystem& sys, const std::vector<Elem>& v,
                                                      const std::vector<Elem>& u, const std::vector<Elem>& t) {
    for (const auto* w : {&v, &u, &t})
        if (w->size() != sys.dim())
            throw std::invalid_argument("plane vector has length " + std::to_string(w->size()) + ", system dim is " +
                                        std::to_string(sys.dim()));
    const FieldDesc& f = *sys.field;
    if (rank(f, Matrix{v, u, t}) < 3) return PlaneRejection::rank_deficient;
    Plane pl{&f, {v, u, t}, {combine(sys.basis, v), combine(sys.basis, u), combine(sys.basis, t)}};
    if (common_factor_all(pl.forms)) return PlaneRejection::common_factor;
    return pl;
}

/// A pencil inside a plane, spanned by a.F and b.F where F are the plane's
/// three forms.
struct PencilSpec {
    std::vector<Elem> a, b;
    std::array<CubicForm, 2> forms;
};

inline PencilSpec make_pencil(const Plane& plane, const std::vector<Elem>& a, const std::vector<Elem>& b) {
    if (a.size() != 3 || b.size() != 3) throw std::invalid_argument("pencil coordinates must have length 3");
    return {a, b, {combine(plane.forms, a), combine(plane.forms, b)}};
}

/// Geometric common zeros of a set of forms, grouped by minimal field of
/// definition GF(p^d), d = 1..scan_bound.
struct BaseLocus {
    bool positive_dimensional = false;
    std::map<unsigned, std::vector<ProjPoint>> points_by_degree;
    unsigned scan_bound = 0;

    /// Every geometric point is listed, so conjugates count separately.
    std::size_t geometric_count() const {
        std::size_t n = 0;
        for (const auto& [d, pts] : points_by_degree) n += pts.size();
        return n;
    }

    /// Galois orbits (closed points).
    std::size_t closed_point_count() const {
        std::size_t n = 0;
        for (const auto& [d, pts] : points_by_degree) n += pts.size() / d;
        return n;
    }
};

/// Finds common zeros of prime-field forms inside any extension GF(p^d).
///
/// A coprime pair among the forms (or their prime-field combinations)
/// drives elimination: the resultant in x of the pair, dehomogenized at
/// z = 1, is a nonzero polynomial in y whose roots contain the y-coordinate
/// of every affine common zero. Each candidate line y = y0 is then solved by
/// a univariate gcd over all forms. Lines are swept exhaustively when no
/// coprime pair exists.
class CommonZeroSolver {
   public:
    explicit CommonZeroSolver(std::vector<CubicForm> forms) : forms_(std::move(forms)) {
        if (forms_.size() < 2) throw std::invalid_argument("need at least two forms");
        base_ = &field_of(forms_.front());
        if (!base_->is_prime_field()) throw std::invalid_argument("base locus scan needs forms over a prime field");
        for (const auto& f : forms_)
            if (!(field_of(f) == *base_)) throw std::logic_error("forms over different fields");
        if (auto pair = find_coprime_pair()) eliminant_ = eliminant(pair->first, pair->second);
    }

    /// Every common zero in P^2(ext), sorted.
    std::vector<ProjPoint> points_at_level(const FieldDesc& ext) const {
        if (ext.characteristic() != base_->characteristic()) throw std::logic_error("extension of the wrong field");
        std::vector<ProjPoint> out;
        const FieldDesc& f = ext;
        // [1:0:0]
        bool at_x = true;
        for (const auto& g : forms_) at_x = at_x && g[0] == 0;
        if (at_x) out.emplace_back(f, std::array<Elem, 3>{1, 0, 0});
        // [x:1:0]: restriction to z = 0 has coefficients of x^i y^(3-i).
        for (Elem x0 : line_roots(f, [&](const CubicForm& g) {
                 return UPoly(std::vector<Elem>{g[6], g[3], g[1], g[0]});
             }))
            out.emplace_back(f, std::array<Elem, 3>{x0, 1, 0});
        // [x:y0:1]
        auto affine = [&](Elem y0) {
            for (Elem x0 : line_roots(f, [&](const CubicForm& g) { return restrict_y(f, g, y0); }))
                out.emplace_back(f, std::array<Elem, 3>{x0, y0, 1});
        };
        if (eliminant_) {
            if (eliminant_->degree() > 0)
                for (Elem y0 : upoly::roots(f, *eliminant_)) affine(y0);
        } else {
            for (Elem y0 = 0; y0 < f.order(); ++y0) affine(y0);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool uses_elimination() const noexcept { return eliminant_.has_value(); }

   private:
    // f(x, y0, 1) as a polynomial in x.
    static UPoly restrict_y(const FieldDesc& f, const CubicForm& g, Elem y0) {
        const Elem y2 = f.mul(y0, y0), y3 = f.mul(y2, y0);
        auto lin = [&](Elem c0, Elem c1, Elem c2, Elem c3) {
            return f.add(f.add(c0, f.mul(c1, y0)), f.add(f.mul(c2, y2), f.mul(c3, y3)));
        };
        return UPoly(std::vector<Elem>{lin(g[9], g[8], g[7], g[6]), lin(g[5], g[4], g[3], 0), lin(g[2], g[1], 0, 0),
                                       g[0]});
    }

    template <class Restrict>
    std::vector<Elem> line_roots(const FieldDesc& f, Restrict restrict) const {
        UPoly h;
        for (const auto& g : forms_) {
            h = upoly::gcd(f, h, restrict(g));
            if (h.degree() == 0) return {};
        }
        if (h.is_zero()) throw std::logic_error("forms vanish on a whole line");
        return upoly::roots(f, h);
    }

    std::optional<std::pair<CubicForm, CubicForm>> find_coprime_pair() const {
        for (std::size_t i = 0; i < forms_.size(); ++i)
            for (std::size_t j = i + 1; j < forms_.size(); ++j)
                if (!forms_[i].is_zero() && !forms_[j].is_zero() && !has_common_factor(forms_[i], forms_[j]))
                    return std::pair{forms_[i], forms_[j]};
        // f_i + c f_j against the remaining forms.
        const std::uint64_t p = base_->characteristic();
        const std::uint64_t cap = std::min<std::uint64_t>(p, 64);
        for (std::size_t i = 0; i < forms_.size(); ++i)
            for (std::size_t j = 0; j < forms_.size(); ++j) {
                if (i == j) continue;
                for (Elem c = 1; c < cap; ++c) {
                    const CubicForm g = forms_[i] + forms_[j].scaled(c);
                    if (g.is_zero()) continue;
                    for (std::size_t k = 0; k < forms_.size(); ++k) {
                        if (k == i || k == j || forms_[k].is_zero()) continue;
                        if (!has_common_factor(g, forms_[k])) return std::pair{g, forms_[k]};
                    }
                }
            }
        return std::nullopt;
    }

    // Polynomial in y vanishing at the y-coordinate of every common zero of
    // (F, G) in the chart z = 1. Nonzero because F and G are coprime.
    UPoly eliminant(const CubicForm& F, const CubicForm& G) const {
        const FieldDesc& f = *base_;
        auto columns = [&](const CubicForm& g) {
            // a_i(y) = coefficient of x^i in g(x, y, 1).
            std::vector<UPoly> a = {UPoly(std::vector<Elem>{g[9], g[8], g[7], g[6]}),
                                    UPoly(std::vector<Elem>{g[5], g[4], g[3]}), UPoly(std::vector<Elem>{g[2], g[1]}),
                                    UPoly(std::vector<Elem>{g[0]})};
            while (a.size() > 1 && a.back().is_zero()) a.pop_back();
            return a;
        };
        const auto a = columns(F), b = columns(G);
        UPoly r;
        if (a.size() > 1 && b.size() > 1)
            r = upoly::sylvester_resultant(f, a, b);
        else if (a.size() == 1 && b.size() == 1)
            r = upoly::gcd(f, a[0], b[0]);
        else
            r = a.size() == 1 ? a[0] : b[0];
        if (r.is_zero()) throw std::logic_error("vanishing eliminant for a coprime pair");
        return r;
    }

    std::vector<CubicForm> forms_;
    const FieldDesc* base_ = nullptr;
    std::optional<UPoly> eliminant_;
};

/// Geometric base locus up to points of degree scan_bound over the prime
/// field. Two coprime cubics meet in at most 9 geometric points, so their
/// closed points have degree <= 9 and the default bound is complete.
inline BaseLocus base_locus(const std::vector<CubicForm>& forms, unsigned scan_bound = 9) {
    if (forms.size() < 2) throw std::invalid_argument("base_locus needs at least two forms");
    BaseLocus bl;
    bl.scan_bound = scan_bound;
    bl.positive_dimensional = common_factor_all(forms);
    if (bl.positive_dimensional) return bl;
    const CommonZeroSolver solver(forms);
    const std::uint64_t p = field_of(forms.front()).characteristic();
    for (unsigned d = 1; d <= scan_bound; ++d) {
        const FieldDesc& ext = build_field(p, d);
        for (auto& pt : solver.points_at_level(ext))
            if (minimal_degree(pt) == d) bl.points_by_degree[d].push_back(pt);
    }
    return bl;
}

}  // namespace surjective

#endif
