#pragma once

// Root data, finite Weyl groups with Bruhat order and ShortLex reduced words,
// and the extension by a finite-order diagram automorphism.

#include "heckelab/numtypes.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heckelab {

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;  // row-major

inline long long ivec_dot(const IVec& a, const IVec& b) {
    long long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
inline IVec imat_apply(const IMat& m, const IVec& v) {
    IVec r(m.size(), 0);
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
    return r;
}
inline IMat imat_mul(const IMat& a, const IMat& b) {
    size_t n = a.size();
    IMat r(n, IVec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}
inline IMat imat_identity(size_t n) {
    IMat r(n, IVec(n, 0));
    for (size_t i = 0; i < n; ++i) r[i][i] = 1;
    return r;
}
inline IMat imat_transpose(const IMat& m) {
    size_t n = m.size();
    IMat r(n, IVec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) r[j][i] = m[i][j];
    return r;
}

// -------------------------------------------------------------------------
// RootDatum

struct RootDatum {
    int rank = 0;
    std::vector<IVec> simple_roots;    // alpha_i in X = Z^rank
    std::vector<IVec> simple_coroots;  // alpha_i^vee in Y = Z^rank
    IMat cartan;                       // cartan[i][j] = <alpha_j, alpha_i^vee>

    // Full root system, positive roots first, root[i + npos] = -root[i].
    std::vector<IVec> roots;
    std::vector<IVec> coroots;  // coroots[r] pairs with roots[r]
    int npos = 0;

    int num_roots() const { return static_cast<int>(roots.size()); }
    bool is_positive(int r) const { return r < npos; }
    int negate_root(int r) const { return r < npos ? r + npos : r - npos; }

    int root_index(const IVec& a) const {
        auto it = root_lookup.find(a);
        if (it == root_lookup.end()) throw std::invalid_argument("not a root");
        return it->second;
    }
    bool is_root(const IVec& a) const { return root_lookup.count(a) != 0; }

    std::map<IVec, int> root_lookup;
};

namespace detail {

// Finite type test: the Cartan matrix must be symmetrizable with positive
// definite symmetrization.
inline void validate_cartan(const IMat& c) {
    int n = static_cast<int>(c.size());
    for (int i = 0; i < n; ++i) {
        if (c[i][i] != 2) throw std::invalid_argument("Cartan diagonal entry is not 2");
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (c[i][j] > 0) throw std::invalid_argument("positive off-diagonal Cartan entry");
            if ((c[i][j] == 0) != (c[j][i] == 0))
                throw std::invalid_argument("Cartan zero pattern not symmetric");
        }
    }
    // Symmetrizer d_i > 0 with d_i c_ij = d_j c_ji, found by graph propagation.
    std::vector<long long> num(n, 0), den(n, 0);
    std::vector<int> comp(n, -1);
    for (int start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        comp[start] = start;
        num[start] = 1; den[start] = 1;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                if (i == j || c[i][j] == 0) continue;
                // d_j = d_i * c_ij / c_ji
                long long nj = num[i] * c[i][j], dj = den[i] * c[j][i];
                if (nj < 0) { nj = -nj; dj = -dj; }
                if (comp[j] < 0) {
                    comp[j] = start; num[j] = nj; den[j] = dj;
                    stack.push_back(j);
                } else if (num[j] * dj != nj * den[j]) {
                    throw std::invalid_argument("Cartan matrix is not symmetrizable");
                }
            }
        }
    }
    long long L = 1;
    for (int i = 0; i < n; ++i) L = std::lcm(L, den[i] < 0 ? -den[i] : den[i]);
    std::vector<long long> d(n);
    for (int i = 0; i < n; ++i) d[i] = num[i] * (L / den[i]);
    // Positive definiteness of (d_i c_ij) via leading principal minors.
    std::vector<std::vector<Rat>> s(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s[i][j] = Rat(d[i] * c[i][j]);
    for (int k = 1; k <= n; ++k) {
        std::vector<std::vector<Rat>> a(s.begin(), s.begin() + k);
        for (auto& row : a) row.resize(k);
        Rat det = 1;
        for (int col = 0; col < k; ++col) {
            int piv = -1;
            for (int r = col; r < k; ++r)
                if (a[r][col] != 0) { piv = r; break; }
            if (piv < 0) { det = 0; break; }
            if (piv != col) { std::swap(a[piv], a[col]); det = -det; }
            det *= a[col][col];
            for (int r = col + 1; r < k; ++r) {
                Rat f = a[r][col] / a[col][col];
                for (int cc = col; cc < k; ++cc) a[r][cc] -= f * a[col][cc];
            }
        }
        if (det <= 0)
            throw std::invalid_argument("Cartan matrix is not of finite type (minor <= 0)");
    }
}

inline IMat cartan_of_type(const std::string& t) {
    auto tri = [](int n, long long lower, long long upper) {
        IMat c(n, IVec(n, 0));
        for (int i = 0; i < n; ++i) {
            c[i][i] = 2;
            if (i + 1 < n) { c[i][i + 1] = upper; c[i + 1][i] = lower; }
        }
        return c;
    };
    if (t == "A1") return tri(1, 0, 0);
    if (t == "A2") return tri(2, -1, -1);
    if (t == "A3") return tri(3, -1, -1);
    if (t == "A4") return tri(4, -1, -1);
    if (t == "B2" || t == "C2") return tri(2, -2, -1);
    if (t == "B3") { IMat c = tri(3, -1, -1); c[2][1] = -2; return c; }
    if (t == "G2") return tri(2, -3, -1);
    if (t == "A1xA1") { IMat c(2, IVec(2, 0)); c[0][0] = c[1][1] = 2; return c; }
    throw std::invalid_argument("unknown Cartan type label: " + t);
}

}  // namespace detail

// Generates the root/coroot pairs from the simple ones by simple reflections.
inline void generate_roots(RootDatum& d) {
    std::map<IVec, IVec> seen;  // root -> coroot
    std::vector<IVec> queue;
    int ngens = static_cast<int>(d.simple_roots.size());
    for (int i = 0; i < ngens; ++i) {
        seen[d.simple_roots[i]] = d.simple_coroots[i];
        queue.push_back(d.simple_roots[i]);
    }
    const size_t kRootBound = 10000;
    while (!queue.empty()) {
        IVec a = queue.back();
        queue.pop_back();
        IVec av = seen.at(a);
        for (int i = 0; i < ngens; ++i) {
            long long pa = ivec_dot(a, d.simple_coroots[i]);
            long long pv = ivec_dot(d.simple_roots[i], av);
            IVec ra = a, rv = av;
            for (int j = 0; j < d.rank; ++j) {
                ra[j] -= pa * d.simple_roots[i][j];
                rv[j] -= pv * d.simple_coroots[i][j];
            }
            if (!seen.count(ra)) {
                seen[ra] = rv;
                queue.push_back(ra);
                if (seen.size() > kRootBound)
                    throw std::invalid_argument("root system does not close up (not finite type?)");
            }
        }
    }
    // A root is positive iff its expansion over the simple roots has all
    // coefficients >= 0; for a finite system exactly one of a, -a qualifies.
    int n = d.rank;
    int g = static_cast<int>(d.simple_roots.size());
    auto expand_sign = [&](const IVec& a) -> int {
        // returns +1 if all coeffs >= 0, -1 if all <= 0, throws otherwise
        std::vector<std::vector<Rat>> m(n, std::vector<Rat>(g + 1));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < g; ++j) m[i][j] = Rat(d.simple_roots[j][i]);
            m[i][g] = Rat(a[i]);
        }
        int rank = 0;
        std::vector<int> pivcol;
        for (int col = 0; col < g && rank < n; ++col) {
            int piv = -1;
            for (int r = rank; r < n; ++r)
                if (m[r][col] != 0) { piv = r; break; }
            if (piv < 0) continue;
            std::swap(m[piv], m[rank]);
            for (int r = 0; r < n; ++r) {
                if (r == rank || m[r][col] == 0) continue;
                Rat f = m[r][col] / m[rank][col];
                for (int cc = col; cc <= g; ++cc) m[r][cc] -= f * m[rank][cc];
            }
            pivcol.push_back(col);
            ++rank;
        }
        for (int r = rank; r < n; ++r)
            if (m[r][g] != 0) throw std::logic_error("root outside simple-root span");
        bool nonneg = true, nonpos = true;
        for (int r = 0; r < rank; ++r) {
            Rat c = m[r][g] / m[r][pivcol[r]];
            if (c < 0) nonneg = false;
            if (c > 0) nonpos = false;
        }
        if (nonneg) return 1;
        if (nonpos) return -1;
        throw std::logic_error("root with mixed-sign expansion");
    };
    std::vector<std::pair<IVec, IVec>> pos;
    for (auto& [a, av] : seen)
        if (expand_sign(a) > 0) pos.emplace_back(a, av);
    std::sort(pos.begin(), pos.end());
    d.roots.clear();
    d.coroots.clear();
    for (auto& [a, av] : pos) { d.roots.push_back(a); d.coroots.push_back(av); }
    for (auto& [a, av] : pos) {
        IVec na = a, nav = av;
        for (auto& x : na) x = -x;
        for (auto& x : nav) x = -x;
        d.roots.push_back(na);
        d.coroots.push_back(nav);
    }
    d.npos = static_cast<int>(pos.size());
    d.root_lookup.clear();
    for (int i = 0; i < d.num_roots(); ++i) d.root_lookup[d.roots[i]] = i;
    // Closed under negation by construction; simple pairs must pair to 2.
    for (int i = 0; i < ngens; ++i)
        if (ivec_dot(d.simple_roots[i], d.simple_coroots[i]) != 2)
            throw std::invalid_argument("<alpha_i, alpha_i^vee> != 2");
}

// Simply connected convention: coroots are the standard basis of Y and the
// simple roots carry the Cartan pairings.
inline RootDatum build_root_datum(const std::string& type_label) {
    IMat c = detail::cartan_of_type(type_label);
    detail::validate_cartan(c);
    RootDatum d;
    d.rank = static_cast<int>(c.size());
    d.cartan = c;
    for (int j = 0; j < d.rank; ++j) {
        IVec root(d.rank), coroot(d.rank, 0);
        for (int i = 0; i < d.rank; ++i) root[i] = c[i][j];
        coroot[j] = 1;
        d.simple_roots.push_back(root);
        d.simple_coroots.push_back(coroot);
    }
    generate_roots(d);
    return d;
}

inline RootDatum build_root_datum(const std::vector<IVec>& simple_roots,
                                  const std::vector<IVec>& simple_coroots) {
    if (simple_roots.empty() || simple_roots.size() != simple_coroots.size())
        throw std::invalid_argument("need matching nonempty simple root/coroot lists");
    RootDatum d;
    d.rank = static_cast<int>(simple_roots[0].size());
    for (auto& r : simple_roots)
        if (static_cast<int>(r.size()) != d.rank)
            throw std::invalid_argument("simple root of wrong rank");
    for (auto& r : simple_coroots)
        if (static_cast<int>(r.size()) != d.rank)
            throw std::invalid_argument("simple coroot of wrong rank");
    d.simple_roots = simple_roots;
    d.simple_coroots = simple_coroots;
    int m = static_cast<int>(simple_roots.size());
    d.cartan.assign(m, IVec(m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) d.cartan[i][j] = ivec_dot(simple_roots[j], simple_coroots[i]);
    detail::validate_cartan(d.cartan);
    generate_roots(d);
    return d;
}

// -------------------------------------------------------------------------
// WeylGroup: the full enumeration with ShortLex words, Bruhat order, and the
// action on roots. Elements are indices into the enumeration; index 0 is the
// identity and indices follow ShortLex order of the minimal words.

class WeylGroup {
public:
    explicit WeylGroup(RootDatum datum) : datum_(std::move(datum)) { build(); }

    const RootDatum& datum() const { return datum_; }
    int num_gens() const { return static_cast<int>(datum_.simple_roots.size()); }
    int size() const { return static_cast<int>(y_mats_.size()); }

    int identity() const { return 0; }
    int simple_reflection(int s) const { return gen_index_[s]; }
    int mult(int a, int b) const { return mult_[a][b]; }
    int inverse(int a) const { return inv_[a]; }
    int length(int w) const { return static_cast<int>(words_[w].size()); }
    const std::vector<int>& word(int w) const { return words_[w]; }
    const IMat& y_matrix(int w) const { return y_mats_[w]; }

    // Action on the root set (through X).
    int act_on_root(int w, int root) const { return root_action_[w][root]; }

    // Action on Y as a lattice map.
    IVec act_on_y(int w, const IVec& y) const { return imat_apply(y_mats_[w], y); }

    int element_from_word(const std::vector<int>& ws) const {
        int e = 0;
        for (int s : ws) e = mult(e, gen_index_[s]);
        return e;
    }

    // l(w) = |{a in R+ : w(a) in R-}| computed from scratch (oracle-style).
    int inversion_count(int w) const {
        int c = 0;
        for (int r = 0; r < datum_.npos; ++r)
            if (!datum_.is_positive(root_action_[w][r])) ++c;
        return c;
    }

    // Bruhat order through the descent recursion: for a left descent s of w,
    // y <= w iff min(y, sy) <= sw. Equivalent to the subword criterion.
    bool bruhat_leq(int y, int w) const {
        if (length(y) > length(w)) return false;
        if (y == w) return true;
        return bruhat_rec(y, w);
    }

    // Left descent: l(s w) < l(w).
    bool left_descent(int s, int w) const { return length(mult(gen_index_[s], w)) < length(w); }
    bool right_descent(int w, int s) const { return length(mult(w, gen_index_[s])) < length(w); }

    // Unique maximal-length element of the parabolic subgroup W_J.
    int longest_element(const std::vector<int>& J) const {
        auto elems = enumerate(J);
        int best = 0;
        for (int e : elems)
            if (length(e) > length(best)) best = e;
        return best;
    }

    // Elements of W_J in ShortLex order (as global element ids sorted by the
    // ShortLex position of their minimal words, which generation preserves).
    std::vector<int> enumerate(const std::vector<int>& J) const {
        std::vector<char> in(size(), 0);
        std::vector<int> out{0};
        in[0] = 1;
        for (size_t head = 0; head < out.size(); ++head) {
            for (int s : J) {
                int e = mult(out[head], gen_index_[s]);
                if (!in[e]) { in[e] = 1; out.push_back(e); }
            }
        }
        std::sort(out.begin(), out.end());  // element ids are ShortLex-ordered
        return out;
    }
    std::vector<int> enumerate_all() const {
        std::vector<int> all(size());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }

    // Membership in W_J via the support of the canonical reduced word.
    bool in_parabolic(int w, const std::vector<int>& J) const {
        for (int s : words_[w])
            if (std::find(J.begin(), J.end(), s) == J.end()) return false;
        return true;
    }

    int element_of_matrix(const IMat& m) const {
        auto it = mat_lookup_.find(flatten(m));
        if (it == mat_lookup_.end()) throw std::invalid_argument("matrix is not a Weyl group element");
        return it->second;
    }
    bool has_matrix(const IMat& m) const { return mat_lookup_.count(flatten(m)) != 0; }

    // Reflection s_alpha for a root index, as a group element.
    int reflection(int root) const { return reflections_[root]; }

private:
    void build() {
        int n = datum_.rank;
        int g = num_gens();
        std::vector<IMat> gens(g);
        for (int s = 0; s < g; ++s) {
            IMat m = imat_identity(n);
            // s_i(y) = y - <alpha_i, y> alpha_i^vee
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    m[a][b] -= datum_.simple_coroots[s][a] * datum_.simple_roots[s][b];
            gens[s] = m;
        }
        y_mats_.push_back(imat_identity(n));
        words_.push_back({});
        mat_lookup_[flatten(y_mats_[0])] = 0;
        const size_t kGroupBound = 200000;
        for (size_t head = 0; head < y_mats_.size(); ++head) {
            IMat base = y_mats_[head];
            std::vector<int> base_word = words_[head];
            for (int s = 0; s < g; ++s) {
                IMat m = imat_mul(base, gens[s]);
                auto key = flatten(m);
                if (mat_lookup_.count(key)) continue;
                mat_lookup_[key] = static_cast<int>(y_mats_.size());
                y_mats_.push_back(m);
                std::vector<int> w = base_word;
                w.push_back(s);
                words_.push_back(std::move(w));
                if (y_mats_.size() > kGroupBound)
                    throw std::invalid_argument("Weyl group enumeration exceeded bound");
            }
        }
        int N = size();
        gen_index_.resize(g);
        for (int s = 0; s < g; ++s) gen_index_[s] = mat_lookup_.at(flatten(gens[s]));
        mult_.assign(N, std::vector<int>(N));
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                mult_[a][b] = mat_lookup_.at(flatten(imat_mul(y_mats_[a], y_mats_[b])));
        inv_.assign(N, 0);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                if (mult_[a][b] == 0) { inv_[a] = b; break; }
        // Root action via X: w . alpha has <w.alpha, y> = <alpha, w^-1 y>.
        int nr = datum_.num_roots();
        root_action_.assign(N, std::vector<int>(nr));
        for (int a = 0; a < N; ++a) {
            const IMat& minv = y_mats_[inv_[a]];
            IMat mt = imat_transpose(minv);
            for (int r = 0; r < nr; ++r)
                root_action_[a][r] = datum_.root_index(imat_apply(mt, datum_.roots[r]));
        }
        // Word length must equal the inversion count (reduced words).
        for (int a = 0; a < N; ++a)
            if (inversion_count(a) != length(a))
                throw std::logic_error("BFS produced a non-reduced word");
        reflections_.assign(nr, 0);
        for (int r = 0; r < nr; ++r) {
            IMat m = imat_identity(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    m[i][j] -= datum_.coroots[r][i] * datum_.roots[r][j];
            reflections_[r] = element_of_matrix(m);
        }
    }

    bool bruhat_rec(int y, int w) const {
        if (y == 0) return true;
        if (length(y) > length(w)) return false;
        if (w == 0) return y == 0;
        int s = words_[w][0];  // left descent of w
        int sw = mult(gen_index_[s], w);
        int sy = mult(gen_index_[s], y);
        if (length(sy) < length(y)) return bruhat_rec(sy, sw);
        return bruhat_rec(y, sw);
    }

    static std::vector<long long> flatten(const IMat& m) {
        std::vector<long long> f;
        f.reserve(m.size() * m.size());
        for (auto& row : m) f.insert(f.end(), row.begin(), row.end());
        return f;
    }

    RootDatum datum_;
    std::vector<IMat> y_mats_;
    std::vector<std::vector<int>> words_;
    std::vector<int> gen_index_;
    std::vector<std::vector<int>> mult_;
    std::vector<int> inv_;
    std::vector<std::vector<int>> root_action_;
    std::vector<int> reflections_;
    std::map<std::vector<long long>, int> mat_lookup_;
};

// -------------------------------------------------------------------------
// DiagramAut and the extended group W^D = <W, uD>, uD of order k.

struct DiagramAut {
    IMat x_matrix;  // lattice automorphism of X, maps simple roots to simple roots
    IMat y_matrix;  // contragredient action on Y
    std::vector<int> root_permutation;  // induced permutation of I
    int order = 1;

    static DiagramAut identity_aut(const RootDatum& d) {
        DiagramAut a;
        a.x_matrix = imat_identity(d.rank);
        a.y_matrix = imat_identity(d.rank);
        a.root_permutation.resize(d.simple_roots.size());
        std::iota(a.root_permutation.begin(), a.root_permutation.end(), 0);
        a.order = 1;
        return a;
    }

    // The unique nontrivial diagram symmetry for types that have one (taken
    // lex-least if several exist).
    static DiagramAut flip_aut(const RootDatum& d) {
        int g = static_cast<int>(d.simple_roots.size());
        std::vector<int> perm(g);
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end());
        do {
            bool id = true;
            for (int i = 0; i < g; ++i)
                if (perm[i] != i) { id = false; break; }
            if (id) continue;
            bool ok = true;
            for (int i = 0; i < g && ok; ++i)
                for (int j = 0; j < g && ok; ++j)
                    if (d.cartan[perm[i]][perm[j]] != d.cartan[i][j]) ok = false;
            if (ok) return from_permutation(d, perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        throw std::invalid_argument("datum has no nontrivial diagram symmetry");
    }

    // X-map determined by alpha_i -> alpha_{p(i)}; needs the simple roots to
    // span X over Q (true in the conventions used here).
    static DiagramAut from_permutation(const RootDatum& d, const std::vector<int>& perm) {
        int n = d.rank;
        int g = static_cast<int>(d.simple_roots.size());
        if (g != n) throw std::invalid_argument("permutation construction needs rank == #gens");
        // Solve P * alpha_i = alpha_{p(i)} for the matrix P.
        IMat p(n, IVec(n, 0));
        // P A = B with columns of A the simple roots; P = B A^-1.
        std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n)), b(n, std::vector<Rat>(n));
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                a[i][j] = Rat(d.simple_roots[j][i]);
                b[i][j] = Rat(d.simple_roots[perm[j]][i]);
            }
        // invert a
        std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
        for (int i = 0; i < n; ++i) inv[i][i] = 1;
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (a[r][col] != 0) { piv = r; break; }
            if (piv < 0) throw std::invalid_argument("simple roots do not span X");
            std::swap(a[piv], a[col]);
            std::swap(inv[piv], inv[col]);
            Rat f = a[col][col];
            for (int cc = 0; cc < n; ++cc) { a[col][cc] /= f; inv[col][cc] /= f; }
            for (int r = 0; r < n; ++r) {
                if (r == col || a[r][col] == 0) continue;
                Rat fr = a[r][col];
                for (int cc = 0; cc < n; ++cc) {
                    a[r][cc] -= fr * a[col][cc];
                    inv[r][cc] -= fr * inv[col][cc];
                }
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rat e = 0;
                for (int k = 0; k < n; ++k) e += b[i][k] * inv[k][j];
                if (boost::multiprecision::denominator(e) != 1)
                    throw std::invalid_argument("diagram map is not integral on X");
                p[i][j] = static_cast<long long>(boost::multiprecision::numerator(e));
            }
        return from_x_matrix(d, p);
    }

    static DiagramAut from_x_matrix(const RootDatum& d, const IMat& p) {
        DiagramAut a;
        a.x_matrix = p;
        a.y_matrix = inverse_transpose(p);
        int g = static_cast<int>(d.simple_roots.size());
        a.root_permutation.assign(g, -1);
        for (int i = 0; i < g; ++i) {
            IVec im = imat_apply(p, d.simple_roots[i]);
            int found = -1;
            for (int j = 0; j < g; ++j)
                if (d.simple_roots[j] == im) { found = j; break; }
            if (found < 0)
                throw std::invalid_argument("lattice map does not permute the simple roots");
            a.root_permutation[i] = found;
        }
        // compatible on coroots
        for (int i = 0; i < g; ++i)
            if (imat_apply(a.y_matrix, d.simple_coroots[i]) != d.simple_coroots[a.root_permutation[i]])
                throw std::invalid_argument("contragredient map does not permute the simple coroots");
        IMat acc = p;
        a.order = 1;
        IMat id = imat_identity(d.rank);
        while (acc != id) {
            acc = imat_mul(acc, p);
            ++a.order;
            if (a.order > 64) throw std::invalid_argument("lattice map does not have small finite order");
        }
        return a;
    }

private:
    static IMat inverse_transpose(const IMat& p) {
        int n = static_cast<int>(p.size());
        std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n)), inv(n, std::vector<Rat>(n, Rat(0)));
        for (int i = 0; i < n; ++i) {
            inv[i][i] = 1;
            for (int j = 0; j < n; ++j) a[i][j] = Rat(p[i][j]);
        }
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (a[r][col] != 0) { piv = r; break; }
            if (piv < 0) throw std::invalid_argument("lattice map is singular");
            std::swap(a[piv], a[col]);
            std::swap(inv[piv], inv[col]);
            Rat f = a[col][col];
            for (int cc = 0; cc < n; ++cc) { a[col][cc] /= f; inv[col][cc] /= f; }
            for (int r = 0; r < n; ++r) {
                if (r == col || a[r][col] == 0) continue;
                Rat fr = a[r][col];
                for (int cc = 0; cc < n; ++cc) {
                    a[r][cc] -= fr * a[col][cc];
                    inv[r][cc] -= fr * inv[col][cc];
                }
            }
        }
        IMat out(n, IVec(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (boost::multiprecision::denominator(inv[j][i]) != 1)
                    throw std::invalid_argument("lattice map inverse is not integral");
                out[i][j] = static_cast<long long>(boost::multiprecision::numerator(inv[j][i]));
            }
        return out;
    }
};

// Extended Weyl group: elements uD^a w packed as a * |W| + w.
class ExtWeyl {
public:
    ExtWeyl(const WeylGroup& w, DiagramAut aut) : W_(&w), aut_(std::move(aut)) {
        int N = W_->size();
        k_ = aut_.order;
        // eps(w) = uD w uD^-1 via matrices on Y
        eps_.assign(k_, std::vector<int>(N));
        IMat a = imat_identity(w.datum().rank);
        std::vector<IMat> apow(k_ + 1, a);
        for (int i = 1; i <= k_; ++i) apow[i] = imat_mul(apow[i - 1], aut_.y_matrix);
        std::vector<IMat> apow_inv(k_ + 1);
        for (int i = 0; i <= k_; ++i) apow_inv[i] = apow[(k_ - i % k_) % k_];
        for (int p = 0; p < k_; ++p)
            for (int e = 0; e < N; ++e)
                eps_[p][e] = W_->element_of_matrix(
                    imat_mul(imat_mul(apow[p], W_->y_matrix(e)), apow_inv[p]));
        for (int p = 0; p < k_; ++p)
            for (int e = 0; e < N; ++e)
                if (W_->length(eps_[p][e]) != W_->length(e))
                    throw std::logic_error("diagram automorphism does not preserve length");
        // action of uD^a on the root set (through X)
        int nr = w.datum().num_roots();
        aut_roots_.assign(k_, std::vector<int>(nr));
        std::vector<IMat> xpow(k_, imat_identity(w.datum().rank));
        for (int i = 1; i < k_; ++i) xpow[i] = imat_mul(xpow[i - 1], aut_.x_matrix);
        for (int p = 0; p < k_; ++p)
            for (int r = 0; r < nr; ++r)
                aut_roots_[p][r] = w.datum().root_index(imat_apply(xpow[p], w.datum().roots[r]));
        for (int r = 0; r < w.datum().npos; ++r)
            if (!w.datum().is_positive(aut_roots_[1 % k_][r]))
                throw std::invalid_argument("diagram automorphism does not preserve R+");
    }

    const WeylGroup& weyl() const { return *W_; }
    const DiagramAut& aut() const { return aut_; }
    int k() const { return k_; }
    int size() const { return k_ * W_->size(); }

    int make(int a, int w) const { return ((a % k_ + k_) % k_) * W_->size() + w; }
    int aut_power(int g) const { return g / W_->size(); }
    int weyl_part(int g) const { return g % W_->size(); }
    int identity() const { return 0; }

    int eps_pow(int p, int w) const { return eps_[((p % k_) + k_) % k_][w]; }
    int eps(int w) const { return eps_pow(1, w); }
    // eps on an extended element: uD (uD^a w) uD^-1 = uD^a eps(w).
    int eps_ext(int g) const { return make(aut_power(g), eps(weyl_part(g))); }

    // (a,w)(a',w') = (a+a', eps^{-a'}(w) w')
    int mult(int g1, int g2) const {
        int a1 = aut_power(g1), w1 = weyl_part(g1);
        int a2 = aut_power(g2), w2 = weyl_part(g2);
        return make(a1 + a2, W_->mult(eps_pow(-a2, w1), w2));
    }
    int inverse(int g) const {
        int a = aut_power(g), w = weyl_part(g);
        return make(-a, eps_pow(a, W_->inverse(w)));
    }
    int length(int g) const { return W_->length(weyl_part(g)); }

    // Action on the root set.
    int act_on_root(int g, int r) const {
        return aut_roots_[aut_power(g)][W_->act_on_root(weyl_part(g), r)];
    }

    // Extended Bruhat order: comparable only within the same uD-coset.
    bool bruhat_leq(int g1, int g2) const {
        return aut_power(g1) == aut_power(g2) && W_->bruhat_leq(weyl_part(g1), weyl_part(g2));
    }

    std::vector<int> enumerate_all() const {
        std::vector<int> all(size());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }

private:
    const WeylGroup* W_;
    DiagramAut aut_;
    int k_;
    std::vector<std::vector<int>> eps_;        // eps_[p][w] = uD^p w uD^-p
    std::vector<std::vector<int>> aut_roots_;  // root action of uD^p
};

}  // namespace heckelab
