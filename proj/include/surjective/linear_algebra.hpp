#ifndef SURJECTIVE_LINEAR_ALGEBRA_HPP
#define SURJECTIVE_LINEAR_ALGEBRA_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "finite_field.hpp"

namespace surjective {

using Matrix = std::vector<std::vector<Elem>>;

struct EchelonForm {
    Matrix rows;  // nonzero rows of the reduced row echelon form
    std::vector<std::size_t> pivots;
};

inline EchelonForm rref(const FieldDesc& f, Matrix m) {
    EchelonForm out;
    if (m.empty()) return out;
    const std::size_t cols = m.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[r], m[piv]);
        const Elem s = f.inv(m[r][c]);
        for (auto& e : m[r]) e = f.mul(e, s);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Elem k = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] = f.sub(m[i][j], f.mul(k, m[r][j]));
        }
        out.pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

inline std::size_t rank(const FieldDesc& f, const Matrix& m) { return rref(f, m).pivots.size(); }

/// Basis of the right kernel {v : m v = 0}, one vector per free column,
/// returned in reduced row echelon form.
inline Matrix kernel(const FieldDesc& f, const Matrix& m, std::size_t cols) {
    const EchelonForm e = rref(f, m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : e.pivots) is_pivot[c] = true;
    Matrix basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Elem> v(cols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = f.neg(e.rows[i][free]);
        basis.push_back(std::move(v));
    }
    return rref(f, std::move(basis)).rows;
}

}  // namespace surjective

#endif
