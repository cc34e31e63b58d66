#ifndef SURJECTIVE_DATASET_HPP
#define SURJECTIVE_DATASET_HPP

#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "finite_field.hpp"
#include "linear_algebra.hpp"
#include "linsys.hpp"
#include "parallel.hpp"
#include "surjectivity.hpp"

namespace surjective {

/// Vector filter applied to each of v, u, t.
///   norm_only: every vector has sum of squares 1 (what the reference
///              enumeration effectively checked).
///   strict_orthonormal: additionally all pairwise dot products vanish.
///   none: no filter.
enum class FilterMode { norm_only, strict_orthonormal, none };

inline std::string to_string(FilterMode m) {
    switch (m) {
        case FilterMode::norm_only: return "norm";
        case FilterMode::strict_orthonormal: return "strict";
        case FilterMode::none: return "none";
    }
    return "?";
}

struct EnumConfig {
    LambdaCase lambda = LambdaCase::five_point;
    std::optional<CubicSystem> custom;  // overrides `lambda` when set
    std::uint64_t p = 2;
    FilterMode filter = FilterMode::norm_only;
    unsigned scan_bound = 9;
    unsigned jobs = 1;
};

struct DatasetRecord {
    std::array<std::vector<std::uint64_t>, 3> vut;
    int label = 0;

    friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

/// The cubic system a config enumerates over. Over GF(2) the verbatim basis
/// is used; over other primes the integer generators are reduced, since the
/// verbatim basis only describes the system modulo 2.
inline CubicSystem system_for(const EnumConfig& cfg) {
    if (cfg.custom) return *cfg.custom;
    const FieldDesc& f = build_field(cfg.p);
    return cfg.p == 2 ? paper_lambda(cfg.lambda, f) : reduce_integer_generators(cfg.lambda, f);
}

inline Elem dot(const FieldDesc& f, const std::vector<Elem>& a, const std::vector<Elem>& b) {
    Elem s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s = f.add(s, f.mul(a[i], b[i]));
    return s;
}

inline bool passes_filter(const FieldDesc& f, FilterMode mode, const std::array<std::vector<Elem>, 3>& vut) {
    if (mode == FilterMode::none) return true;
    for (const auto& w : vut)
        if (dot(f, w, w) != 1) return false;
    if (mode == FilterMode::norm_only) return true;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (dot(f, vut[i], vut[j]) != 0) return false;
    return true;
}

namespace detail {

// Acceptance and label depend only on the span of (v, u, t), so they are
// memoized per span.
class PlaneCache {
   public:
    struct Entry {
        bool accepted = false;
        std::optional<int> label;
    };

    std::optional<Entry> find(const Matrix& key) const {
        std::lock_guard lock(mu_);
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void store(const Matrix& key, const Entry& e) {
        std::lock_guard lock(mu_);
        map_[key] = e;
    }

   private:
    mutable std::mutex mu_;
    std::map<Matrix, Entry> map_;
};

}  // namespace detail

/// All (v, u, t) in lexicographic order that span an admissible plane and
/// pass the vector filter, each with its surjectivity label. Output is
/// identical for any worker count.
inline std::vector<DatasetRecord> enumerate_triples(const EnumConfig& cfg) {
    const CubicSystem sys = system_for(cfg);
    const FieldDesc& f = *sys.field;
    const std::size_t dim = sys.dim();
    const std::uint64_t n = vector_count(f, dim);
    std::vector<std::vector<Elem>> V;
    V.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) V.push_back(vector_at(f, dim, i));

    detail::PlaneCache cache;
    auto per_v = [&](std::size_t iv) {
        std::vector<DatasetRecord> out;
        for (std::uint64_t iu = 0; iu < n; ++iu)
            for (std::uint64_t it = 0; it < n; ++it) {
                const std::array<std::vector<Elem>, 3> vut = {V[iv], V[iu], V[it]};
                const EchelonForm span = rref(f, Matrix{vut[0], vut[1], vut[2]});
                if (span.pivots.size() < 3) continue;
                auto entry = cache.find(span.rows);
                if (!entry) {
                    entry.emplace();
                    entry->accepted = std::holds_alternative<Plane>(make_plane(sys, vut[0], vut[1], vut[2]));
                    cache.store(span.rows, *entry);
                }
                if (!entry->accepted || !passes_filter(f, cfg.filter, vut)) continue;
                if (!entry->label) {
                    const Plane plane = std::get<Plane>(make_plane(sys, vut[0], vut[1], vut[2]));
                    entry->label = label_plane(plane, cfg.scan_bound).value;
                    cache.store(span.rows, *entry);
                }
                out.push_back({vut, *entry->label});
            }
        return out;
    };
    auto chunks = parallel_map(static_cast<std::size_t>(n), resolve_jobs(cfg.jobs), per_v);
    std::vector<DatasetRecord> records;
    for (auto& c : chunks)
        for (auto& r : c) records.push_back(std::move(r));
    return records;
}

/// "((a, b, ...), (c, d, ...), (e, f, ...)): L" without the newline.
inline std::string format_record(const DatasetRecord& r) {
    std::string s = "(";
    for (std::size_t k = 0; k < 3; ++k) {
        if (k) s += ", ";
        s += '(';
        for (std::size_t i = 0; i < r.vut[k].size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(r.vut[k][i]);
        }
        if (r.vut[k].size() == 1) s += ',';
        s += ')';
    }
    s += "): ";
    s += std::to_string(r.label);
    return s;
}

class ParseError : public std::runtime_error {
   public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

   private:
    std::size_t line_;
};

/// Strict inverse of format_record.
inline DatasetRecord parse_record(std::string_view s, std::size_t lineno) {
    std::size_t i = 0;
    auto expect = [&](std::string_view lit) {
        if (s.substr(i, lit.size()) != lit)
            throw ParseError(lineno, "expected '" + std::string(lit) + "' at column " + std::to_string(i + 1));
        i += lit.size();
    };
    auto number = [&]() -> std::uint64_t {
        const std::size_t start = i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
        if (start == i) throw ParseError(lineno, "expected a digit at column " + std::to_string(i + 1));
        if (i - start > 1 && s[start] == '0') throw ParseError(lineno, "leading zero at column " + std::to_string(start + 1));
        return std::stoull(std::string(s.substr(start, i - start)));
    };
    DatasetRecord r;
    expect("(");
    for (std::size_t k = 0; k < 3; ++k) {
        if (k) expect(", ");
        expect("(");
        r.vut[k].push_back(number());
        while (i < s.size() && s.substr(i, 2) == ", ") {
            i += 2;
            r.vut[k].push_back(number());
        }
        if (r.vut[k].size() == 1) expect(",");
        expect(")");
    }
    expect("): ");
    const auto label = number();
    if (label > 1) throw ParseError(lineno, "label must be 0 or 1");
    r.label = static_cast<int>(label);
    if (i != s.size()) throw ParseError(lineno, "trailing characters at column " + std::to_string(i + 1));
    if (r.vut[1].size() != r.vut[0].size() || r.vut[2].size() != r.vut[0].size())
        throw ParseError(lineno, "tuples of different lengths");
    return r;
}

inline void write_output(const std::vector<DatasetRecord>& records, std::ostream& os) {
    for (const auto& r : records) os << format_record(r) << '\n';
}

inline void write_output(const std::vector<DatasetRecord>& records, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_output(records, os);
    if (!os) throw std::runtime_error("write to " + path + " failed");
}

inline std::vector<DatasetRecord> read_output(std::istream& is) {
    std::vector<DatasetRecord> out;
    std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (content.empty()) return out;
    std::size_t lineno = 0, pos = 0;
    while (pos < content.size()) {
        ++lineno;
        const std::size_t nl = content.find('\n', pos);
        if (nl == std::string::npos) throw ParseError(lineno, "missing trailing newline");
        out.push_back(parse_record(std::string_view(content).substr(pos, nl - pos), lineno));
        pos = nl + 1;
    }
    return out;
}

inline std::vector<DatasetRecord> read_output(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_output(is);
}

struct DatasetStats {
    std::size_t count = 0, positives = 0, negatives = 0;
    double positive_rate = 0.0;
};

inline DatasetStats stats(const std::vector<DatasetRecord>& records) {
    DatasetStats s;
    s.count = records.size();
    for (const auto& r : records) (r.label == 1 ? s.positives : s.negatives)++;
    s.positive_rate = s.count ? static_cast<double>(s.positives) / static_cast<double>(s.count) : 0.0;
    return s;
}

}  // namespace surjective

#endif
