#ifndef SURJECTIVE_SURJECTIVITY_HPP
#define SURJECTIVE_SURJECTIVITY_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "finite_field.hpp"
#include "forms.hpp"
#include "linear_algebra.hpp"
#include "linsys.hpp"
#include "random.hpp"

namespace surjective {

enum class PencilStatus { unruly, not_unruly, positive_dimensional };

inline std::string to_string(PencilStatus s) {
    switch (s) {
        case PencilStatus::unruly: return "unruly";
        case PencilStatus::not_unruly: return "not_unruly";
        case PencilStatus::positive_dimensional: return "positive_dimensional";
    }
    return "?";
}

/// Outcome of comparing Bs(pencil) with Bs(plane). A witness is a base
/// point of the pencil where some plane form does not vanish.
struct UnrulyVerdict {
    PencilStatus status;
    std::optional<ProjPoint> witness;
};

/// n-th vector of GF(q)^len in lexicographic order of element codes, leftmost
/// coordinate most significant.
inline std::vector<Elem> vector_at(const FieldDesc& f, std::size_t len, std::uint64_t index) {
    std::vector<Elem> v(len, 0);
    for (std::size_t i = len; i-- > 0;) {
        v[i] = index % f.order();
        index /= f.order();
    }
    return v;
}

inline std::uint64_t vector_count(const FieldDesc& f, std::size_t len) {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < len; ++i) n *= f.order();
    return n;
}

inline bool vanishes_on_plane(const Plane& plane, const ProjPoint& pt) {
    for (const auto& g : plane.forms)
        if (!eval_form(g, pt).is_zero()) return false;
    return true;
}

/// Decides whether the pencil spanned by a.F and b.F is unruly, i.e. has the
/// same geometric base points as the plane. Levels GF(p^d) are scanned
/// upward and the first base point off Bs(plane) ends the search.
inline UnrulyVerdict test_pencil(const Plane& plane, const std::vector<Elem>& a, const std::vector<Elem>& b,
                                 unsigned scan_bound = 9) {
    if (a.size() != 3 || b.size() != 3) throw std::invalid_argument("pencil coordinates must have length 3");
    const FieldDesc& f = *plane.field;
    if (rank(f, Matrix{a, b}) < 2) return {PencilStatus::positive_dimensional, std::nullopt};
    const PencilSpec pencil = make_pencil(plane, a, b);
    if (has_common_factor(pencil.forms[0], pencil.forms[1])) return {PencilStatus::positive_dimensional, std::nullopt};
    const CommonZeroSolver solver({pencil.forms[0], pencil.forms[1]});
    for (unsigned d = 1; d <= scan_bound; ++d) {
        const FieldDesc& ext = build_field(f.characteristic(), d);
        for (const auto& pt : solver.points_at_level(ext)) {
            if (minimal_degree(pt) != d) continue;
            if (!vanishes_on_plane(plane, pt)) return {PencilStatus::not_unruly, pt};
        }
    }
    return {PencilStatus::unruly, std::nullopt};
}

struct SurjectivityLabel {
    int value = 1;  // 1: no unruly pencil (surjective onto rational targets), 0: unruly pencil found
    std::vector<PencilSpec> unruly_pencils;
};

/// Scans the GF(q)-rational pencils of the plane. Each pencil is tested
/// once, at its first basis (a, b) in lexicographic order; the verdict does
/// not depend on the basis. Stops at the first unruly pencil unless
/// collect_all is set.
inline SurjectivityLabel label_plane(const Plane& plane, unsigned scan_bound = 9, bool collect_all = false) {
    const FieldDesc& f = *plane.field;
    const std::uint64_t n = vector_count(f, 3);
    std::set<Matrix> seen;
    SurjectivityLabel label;
    for (std::uint64_t ia = 0; ia < n; ++ia) {
        const auto a = vector_at(f, 3, ia);
        for (std::uint64_t ib = 0; ib < n; ++ib) {
            const auto b = vector_at(f, 3, ib);
            auto span = rref(f, Matrix{a, b});
            if (span.pivots.size() < 2) continue;
            if (!seen.insert(span.rows).second) continue;
            const UnrulyVerdict v = test_pencil(plane, a, b, scan_bound);
            if (v.status != PencilStatus::unruly) continue;
            label.value = 0;
            label.unruly_pencils.push_back(make_pencil(plane, a, b));
            if (!collect_all) return label;
        }
    }
    return label;
}

/// Targets in P^2(GF(p)) with no preimage under the plane's map, found by
/// pushing forward every source point of degree <= source_bound. A target
/// whose annihilating pencil has a fixed component counts as covered.
inline std::vector<ProjPoint> forward_oracle(const Plane& plane, unsigned source_bound = 9) {
    const FieldDesc& base = *plane.field;
    if (!base.is_prime_field()) throw std::invalid_argument("forward oracle needs a plane over a prime field");
    const std::uint64_t p = base.characteristic();
    const auto targets = enumerate_p2(base);
    std::vector<std::int64_t> index_of(p * p * p, -1);
    auto flat = [p](const std::array<Elem, 3>& c) { return (c[0] * p + c[1]) * p + c[2]; };
    for (std::size_t i = 0; i < targets.size(); ++i) index_of[flat(targets[i].coords())] = static_cast<std::int64_t>(i);

    std::vector<bool> covered(targets.size(), false);
    std::size_t remaining = targets.size();
    auto cover = [&](std::size_t i) {
        if (!covered[i]) {
            covered[i] = true;
            --remaining;
        }
    };
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto& t = targets[i].coords();
        const Matrix ann = kernel(base, Matrix{{t[0], t[1], t[2]}}, 3);
        const auto pencil = make_pencil(plane, ann[0], ann[1]);
        if (has_common_factor(pencil.forms[0], pencil.forms[1])) cover(i);
    }

    std::array<std::array<Elem, 10>, 3> coeff;
    for (std::size_t j = 0; j < 3; ++j) coeff[j] = plane.forms[j].coeffs();
    for (unsigned d = 1; d <= source_bound && remaining > 0; ++d) {
        const FieldDesc& ext = build_field(p, d);
        const std::uint64_t q = ext.order();
        auto push = [&](const std::array<Elem, 3>& s) {
            const auto mono = cubic_monomial_values(ext, s);
            std::array<Elem, 3> img;
            int last = -1;
            for (int j = 0; j < 3; ++j) {
                img[static_cast<std::size_t>(j)] = dot_monomials(ext, coeff[static_cast<std::size_t>(j)], mono);
                if (img[static_cast<std::size_t>(j)] != 0) last = j;
            }
            if (last < 0) return;  // s is a base point
            const Elem s_inv = ext.inv(img[static_cast<std::size_t>(last)]);
            for (auto& c : img) {
                c = ext.mul(c, s_inv);
                if (c >= p) return;  // image not rational over GF(p)
            }
            cover(static_cast<std::size_t>(index_of[flat(img)]));
        };
        push({1, 0, 0});
        for (Elem x = 0; x < q && remaining > 0; ++x) push({x, 1, 0});
        for (Elem y = 0; y < q && remaining > 0; ++y)
            for (Elem x = 0; x < q; ++x) push({x, y, 1});
    }
    std::vector<ProjPoint> uncovered;
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (!covered[i]) uncovered.push_back(targets[i]);
    return uncovered;
}

/// No three of the reduced points on a line and no six on a conic over f.
inline bool in_general_position(const PointConfig& cfg, const FieldDesc& f) {
    std::vector<std::array<Elem, 3>> P;
    for (std::size_t i = 0; i < cfg.points().size(); ++i) P.push_back(cfg.reduced(i, f).coords());
    const std::size_t n = P.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (P[i] == P[j]) return false;
            for (std::size_t k = j + 1; k < n; ++k)
                if (rank(f, Matrix{{P[i].begin(), P[i].end()}, {P[j].begin(), P[j].end()}, {P[k].begin(), P[k].end()}}) < 3)
                    return false;
        }
    if (n < 6) return true;
    auto conic_row = [&](const std::array<Elem, 3>& p) {
        const Elem x = p[0], y = p[1], z = p[2];
        return std::vector<Elem>{f.mul(x, x), f.mul(x, y), f.mul(x, z), f.mul(y, y), f.mul(y, z), f.mul(z, z)};
    };
    for (std::size_t skip_mask = 0; skip_mask < (std::size_t{1} << n); ++skip_mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(skip_mask)) != 6) continue;
        Matrix m;
        for (std::size_t i = 0; i < n; ++i)
            if (skip_mask >> i & 1) m.push_back(conic_row(P[i]));
        if (rank(f, m) < 6) return false;
    }
    return true;
}

/// Seven points of P^2(f) in general position, drawn uniformly by rejection.
inline PointConfig random_seven_points(const FieldDesc& f, Rng& rng, int max_tries = 10000) {
    if (!f.is_prime_field()) throw std::invalid_argument("random points need a prime field");
    const std::uint64_t p = f.characteristic();
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<PointConfig::IntPoint> pts;
        while (pts.size() < 7) {
            PointConfig::IntPoint c;
            for (auto& v : c) v = static_cast<std::int64_t>(uniform_below(rng, p));
            if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
            pts.push_back(c);
        }
        try {
            PointConfig cfg(pts);
            if (in_general_position(cfg, f)) return cfg;
        } catch (const std::invalid_argument&) {
        }
    }
    throw std::runtime_error("no seven points in general position found");
}

/// Treats the net of cubics through seven points as the plane and returns
/// its first unruly rational pencil, if any. Finite-field configurations need
/// not be general, so an empty result is an observation, not a failure.
inline std::optional<PencilSpec> find_unruly_seven_points(const PointConfig& cfg, const FieldDesc& f,
                                                          unsigned scan_bound = 9) {
    if (cfg.points().size() != 7) throw std::invalid_argument("the seven-point search needs exactly 7 points");
    const CubicSystem sys = vanishing_cubics(cfg, f);
    if (sys.dim() != 3)
        throw std::invalid_argument("configuration too special: the cubics through it span dimension " +
                                    std::to_string(sys.dim()) + ", expected 3");
    auto plane = make_plane(sys, {1, 0, 0}, {0, 1, 0}, {0, 0, 1});
    if (auto* rej = std::get_if<PlaneRejection>(&plane))
        throw std::invalid_argument("configuration too special: " + to_string(*rej));
    const SurjectivityLabel label = label_plane(std::get<Plane>(plane), scan_bound);
    if (label.unruly_pencils.empty()) return std::nullopt;
    return label.unruly_pencils.front();
}

}  // namespace surjective

#endif
