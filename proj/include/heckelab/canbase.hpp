#pragma once

// Canonical basis c_{w,lambda} of H_n^D, structure constants in that basis,
// cells and the a-function, the gamma-ring with its distinguished set D, and
// the homomorphism Phi into the asymptotic ring.

#include "heckelab/hecke.hpp"

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace heckelab {

class CanBasis {
public:
    explicit CanBasis(const HeckeCtx& ctx) : ctx_(&ctx) { compute(); }

    const HeckeCtx& ctx() const { return *ctx_; }
    int size() const { return static_cast<int>(keys_.size()); }
    const std::vector<std::pair<int, int>>& keys() const { return keys_; }
    std::pair<int, int> key(int b) const { return keys_[b]; }
    int id(int g, int lam) const { return index_.at({g, lam}); }
    const HeckeElt& elt(int b) const { return c_[b]; }
    const HeckeElt& elt(int g, int lam) const { return c_[id(g, lam)]; }

    // Expansion of an arbitrary element in the c-basis.
    std::map<int, Laurent> expand(HeckeElt h) const {
        std::map<int, Laurent> out;
        const ExtWeyl& E = ctx_->ext();
        while (!h.is_zero()) {
            // take a term of maximal length (largest key among those)
            auto best = h.terms().begin();
            int best_len = E.length(best->first.first);
            for (auto it = h.terms().begin(); it != h.terms().end(); ++it) {
                int l = E.length(it->first.first);
                if (l > best_len || (l == best_len && it->first > best->first)) {
                    best = it;
                    best_len = l;
                }
            }
            std::pair<int, int> key = best->first;
            Laurent coeff = best->second;
            int b = id(key.first, key.second);
            out[b] = coeff;
            h -= coeff * c_[b];
            if (!h.coeff(key.first, key.second).is_zero())
                throw std::logic_error("c-expansion did not eliminate the leading term");
        }
        return out;
    }

private:
    void compute() {
        const ExtWeyl& E = ctx_->ext();
        const WeylGroup& W = E.weyl();
        int nl = ctx_->num_chars();
        for (int a = 0; a < E.k(); ++a)
            for (int w = 0; w < W.size(); ++w)
                for (int lam = 0; lam < nl; ++lam) {
                    int g = E.make(a, w);
                    index_[{g, lam}] = static_cast<int>(keys_.size());
                    keys_.emplace_back(g, lam);
                }
        c_.resize(keys_.size(), HeckeElt(*ctx_));
        // Per column, by increasing length of the Weyl part (element ids are
        // ShortLex so the natural order works).
        for (int lam = 0; lam < nl; ++lam) {
            for (int a = 0; a < E.k(); ++a) {
                for (int w = 0; w < W.size(); ++w) {
                    int g = E.make(a, w);
                    HeckeElt c = HeckeElt::std_basis(*ctx_, g, lam);
                    while (true) {
                        HeckeElt delta = c.bar() - c;
                        if (delta.is_zero()) break;
                        // maximal-length term of delta
                        auto best = delta.terms().begin();
                        int best_len = E.length(best->first.first);
                        for (auto it = delta.terms().begin(); it != delta.terms().end(); ++it) {
                            int l = E.length(it->first.first);
                            if (l > best_len || (l == best_len && it->first > best->first)) {
                                best = it;
                                best_len = l;
                            }
                        }
                        if (best->first.first == g)
                            throw std::logic_error("bar defect has a diagonal term");
                        if (best_len >= W.length(w))
                            throw std::logic_error("bar defect not strictly below the top term");
                        if (best->second.bar() != -best->second)
                            throw std::logic_error("bar defect coefficient is not antisymmetric");
                        // m with bar(m) - m = -coefficient: the negative part
                        Laurent m = best->second.negative_part();
                        c += m * c_[index_.at(best->first)];
                    }
                    // unitriangularity with coefficients in v^-1 Z[v^-1]
                    for (auto& [key, coeff] : c.terms()) {
                        if (key.first == g) {
                            if (coeff != Laurent::one())
                                throw std::logic_error("canonical basis leading coefficient != 1");
                        } else if (!coeff.in_v_inverse_zvinv()) {
                            throw std::logic_error("canonical basis off-diagonal not in v^-1 Z[v^-1]");
                        } else if (!E.bruhat_leq(key.first, g)) {
                            throw std::logic_error("canonical basis support not Bruhat-below the top");
                        }
                    }
                    c_[index_.at({g, lam})] = std::move(c);
                }
            }
        }
    }

    const HeckeCtx* ctx_;
    std::vector<std::pair<int, int>> keys_;
    std::map<std::pair<int, int>, int> index_;
    std::vector<HeckeElt> c_;
};

// Full structure-constant tensor in the c-basis: r[b1][b2] : b3 -> Laurent.
struct RTensor {
    std::vector<std::vector<std::map<int, Laurent>>> r;

    const std::map<int, Laurent>& at(int b1, int b2) const { return r[b1][b2]; }
    Laurent coeff(int b1, int b2, int b3) const {
        auto it = r[b1][b2].find(b3);
        return it == r[b1][b2].end() ? Laurent::zero() : it->second;
    }
};

inline RTensor r_constants(const CanBasis& cb) {
    int B = cb.size();
    RTensor t;
    t.r.assign(B, std::vector<std::map<int, Laurent>>(B));
    for (int b1 = 0; b1 < B; ++b1)
        for (int b2 = 0; b2 < B; ++b2) {
            HeckeElt prod = cb.elt(b1) * cb.elt(b2);
            if (prod.is_zero()) continue;
            t.r[b1][b2] = cb.expand(std::move(prod));
        }
    return t;
}

struct CellData {
    std::vector<int> two_sided_cell;  // basis id -> cell id (0-based, by min member)
    std::vector<int> left_cell;
    std::vector<int> a_value;
    std::vector<std::vector<char>> reach;  // reach[b][b'] : b' is in the two-sided ideal of b

    bool same_cell(int b1, int b2) const { return two_sided_cell[b1] == two_sided_cell[b2]; }
    // b' strictly below b: b' preceq b but not equivalent.
    bool strictly_below(int bp, int b) const { return reach[b][bp] && !same_cell(bp, b); }
    std::vector<int> cell_members(int b) const {
        std::vector<int> m;
        for (int i = 0; i < static_cast<int>(two_sided_cell.size()); ++i)
            if (two_sided_cell[i] == two_sided_cell[b]) m.push_back(i);
        return m;
    }
    int num_cells() const {
        int mx = -1;
        for (int c : two_sided_cell) mx = std::max(mx, c);
        return mx + 1;
    }
};

inline CellData cells_and_a(const CanBasis& cb, const RTensor& rt) {
    int B = cb.size();
    // Edges b -> b'' whenever b'' appears in x.b or b.x for some basis x.
    std::vector<std::vector<char>> two(B, std::vector<char>(B, 0)),
        left(B, std::vector<char>(B, 0));
    for (int b = 0; b < B; ++b) { two[b][b] = 1; left[b][b] = 1; }
    for (int x = 0; x < B; ++x)
        for (int b = 0; b < B; ++b) {
            for (auto& [b2, c] : rt.at(x, b)) {
                (void)c;
                two[b][b2] = 1;
                left[b][b2] = 1;
            }
            for (auto& [b2, c] : rt.at(b, x)) {
                (void)c;
                two[b][b2] = 1;
            }
        }
    auto closure = [B](std::vector<std::vector<char>>& m) {
        for (int k = 0; k < B; ++k)
            for (int i = 0; i < B; ++i) {
                if (!m[i][k]) continue;
                for (int j = 0; j < B; ++j)
                    if (m[k][j]) m[i][j] = 1;
            }
    };
    closure(two);
    closure(left);
    CellData cd;
    cd.reach = two;
    auto cells_of = [B](const std::vector<std::vector<char>>& m) {
        std::vector<int> cell(B, -1);
        int next = 0;
        for (int i = 0; i < B; ++i) {
            if (cell[i] >= 0) continue;
            cell[i] = next;
            for (int j = i + 1; j < B; ++j)
                if (m[i][j] && m[j][i]) cell[j] = next;
            ++next;
        }
        return cell;
    };
    cd.two_sided_cell = cells_of(two);
    cd.left_cell = cells_of(left);
    cd.a_value.assign(B, 0);
    for (int b = 0; b < B; ++b) {
        int a = 0;
        for (int b1 = 0; b1 < B; ++b1) {
            if (!cd.same_cell(b, b1)) continue;
            for (auto& [b2, c] : rt.at(b, b1)) {
                if (!cd.same_cell(b, b2)) continue;
                if (!c.is_zero()) a = std::max(a, c.degree());
            }
        }
        cd.a_value[b] = a;
    }
    return cd;
}

struct JRingTable {
    // gamma[b][b'] : b'' -> integer, supported on triples in one two-sided cell
    std::vector<std::vector<std::map<int, Int>>> gamma;
    std::vector<char> distinguished;
    std::vector<int> dist_list;
    // phi[b] : b2 -> Laurent coefficient of t_{b2}
    std::vector<std::map<int, Laurent>> phi;
    bool p2_holds = false;
    std::string p2_failure;

    // Product in A tensor H^infty via the gamma constants.
    std::map<int, Laurent> jmul(const std::map<int, Laurent>& x,
                                const std::map<int, Laurent>& y) const {
        std::map<int, Laurent> out;
        for (auto& [b, cx] : x)
            for (auto& [bp, cy] : y) {
                for (auto& [b2, g] : gamma[b][bp]) {
                    Laurent add = cx * cy * Laurent(g);
                    auto it = out.find(b2);
                    if (it == out.end()) out.emplace(b2, add);
                    else {
                        it->second += add;
                        if (it->second.is_zero()) out.erase(it);
                    }
                }
            }
        return out;
    }
    std::map<int, Laurent> unit_element() const {
        std::map<int, Laurent> u;
        for (int d : dist_list) u[d] = Laurent::one();
        return u;
    }
};

// Builds gamma, recovers D from the unit of the gamma-ring, and forms Phi.
inline JRingTable jring(const CanBasis& cb, const RTensor& rt, const CellData& cd) {
    int B = cb.size();
    JRingTable t;
    t.gamma.assign(B, std::vector<std::map<int, Int>>(B));
    for (int b = 0; b < B; ++b)
        for (int b1 = 0; b1 < B; ++b1) {
            if (!cd.same_cell(b, b1)) continue;
            for (auto& [b2, c] : rt.at(b, b1)) {
                if (!cd.same_cell(b, b2)) continue;
                Int g = c.coeff(cd.a_value[b]);
                if (g != 0) t.gamma[b][b1][b2] = g;
            }
        }
    // Solve for a basis-compatible unit: sum_b1 u_{b1} gamma_{b1,b}^{b'} = delta.
    std::vector<std::vector<Rat>> m;  // rows: equations over u, last col = rhs
    for (int b = 0; b < B; ++b)
        for (int bp = 0; bp < B; ++bp) {
            std::vector<Rat> row(B + 1, Rat(0));
            bool nonzero = false;
            for (int b1 = 0; b1 < B; ++b1) {
                auto it = t.gamma[b1][b].find(bp);
                if (it != t.gamma[b1][b].end()) {
                    row[b1] = Rat(it->second);
                    nonzero = true;
                }
            }
            row[B] = Rat(b == bp ? 1 : 0);
            if (nonzero || b == bp) m.push_back(std::move(row));
        }
    // Gaussian elimination.
    std::vector<int> pivot_col;
    size_t rowi = 0;
    for (int col = 0; col < B && rowi < m.size(); ++col) {
        size_t piv = rowi;
        while (piv < m.size() && m[piv][col] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rowi]);
        Rat f = m[rowi][col];
        for (int cc = 0; cc <= B; ++cc) m[rowi][cc] /= f;
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == rowi || m[r][col] == 0) continue;
            Rat fr = m[r][col];
            for (int cc = 0; cc <= B; ++cc) m[r][cc] -= fr * m[rowi][cc];
        }
        pivot_col.push_back(col);
        ++rowi;
    }
    std::vector<Rat> u(B, Rat(0));
    bool consistent = true;
    for (size_t r = rowi; r < m.size(); ++r)
        if (m[r][B] != 0) consistent = false;
    if (pivot_col.size() < static_cast<size_t>(B)) {
        // Undetermined coordinates default to 0; the verification below decides.
    }
    for (size_t r = 0; r < pivot_col.size(); ++r) u[pivot_col[r]] = m[r][B];
    t.distinguished.assign(B, 0);
    if (!consistent) {
        t.p2_holds = false;
        t.p2_failure = "gamma-ring left-unit system inconsistent";
    } else {
        bool zero_one = true;
        for (int b = 0; b < B; ++b) {
            if (u[b] == 1) t.distinguished[b] = 1;
            else if (u[b] != 0) zero_one = false;
        }
        if (!zero_one) {
            t.p2_holds = false;
            t.p2_failure = "gamma-ring unit is not 0/1 on the basis";
        } else {
            for (int b = 0; b < B; ++b)
                if (t.distinguished[b]) t.dist_list.push_back(b);
            // verify two-sided unit
            t.p2_holds = true;
            for (int b = 0; b < B && t.p2_holds; ++b) {
                std::map<int, Laurent> tb{{b, Laurent::one()}};
                auto un = [&] {
                    std::map<int, Laurent> v;
                    for (int d : t.dist_list) v[d] = Laurent::one();
                    return v;
                }();
                if (t.jmul(un, tb) != tb || t.jmul(tb, un) != tb) {
                    t.p2_holds = false;
                    std::ostringstream os;
                    os << "gamma-ring unit fails on basis element " << b;
                    t.p2_failure = os.str();
                }
            }
        }
    }
    if (!t.p2_holds) return t;  // Phi needs D
    t.phi.assign(B, {});
    for (int b = 0; b < B; ++b) {
        for (int b1 : t.dist_list)
            for (auto& [b2, c] : rt.at(b, b1)) {
                if (!cd.same_cell(b1, b2)) continue;
                auto it = t.phi[b].find(b2);
                if (it == t.phi[b].end()) t.phi[b].emplace(b2, c);
                else {
                    it->second += c;
                    if (it->second.is_zero()) t.phi[b].erase(it);
                }
            }
    }
    return t;
}

// Phi applied to an arbitrary element of H_n^D.
inline std::map<int, Laurent> phi_of(const CanBasis& cb, const JRingTable& jt, const HeckeElt& h) {
    std::map<int, Laurent> out;
    for (auto& [b, c] : cb.expand(h))
        for (auto& [b2, p] : jt.phi[b]) {
            Laurent add = c * p;
            auto it = out.find(b2);
            if (it == out.end()) out.emplace(b2, add);
            else {
                it->second += add;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    return out;
}

struct PCheckReport {
    bool p1 = false, p2 = false, p3 = false;
    bool leading_coeff_identity = false;       // one-variable specialization of P3
    bool module_congruence = false; // x b = Phi(x) * b mod A_{< b}
    bool phi_homomorphism = false;
    bool phi_unit = false;
    bool dist_props = false;       // w in W_lambda, w^2 = 1 on D
    bool phi_v1_invertible = false;
    bool ad_compat = false;        // a_D(c_{w,lam}) = c_{eps(w), uD lam}
    bool omega_mult = false;       // c_{w1 w2, lam} = T~_{w1} c_{w2, lam}
    std::vector<std::string> failures;

    bool all() const {
        return p1 && p2 && p3 && leading_coeff_identity && module_congruence && phi_homomorphism &&
               phi_unit && dist_props && phi_v1_invertible && ad_compat && omega_mult;
    }
};

namespace detail {

inline bool rational_matrix_invertible(std::vector<std::vector<Rat>> a) {
    int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) { piv = r; break; }
        if (piv < 0) return false;
        std::swap(a[piv], a[col]);
        for (int r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            Rat f = a[r][col] / a[col][col];
            for (int cc = col; cc < n; ++cc) a[r][cc] -= f * a[col][cc];
        }
    }
    return true;
}

}  // namespace detail

// P1, P2, P3 (two-variable), the leading-coefficient identity, the module
// congruence x b = Phi(x) * b below b, Phi multiplicativity/unitality,
// involutivity of distinguished elements, rank of Phi at v = 1, ad_D
// compatibility, and Omega-part products.
// If max_p3_quadruples > 0, P3 is verified on that many seeded-random
// quadruples instead of exhaustively.
inline PCheckReport check_P1_P2_P3(const CanBasis& cb, const RTensor& rt, const CellData& cd,
                                   const JRingTable& jt, long max_p3_quadruples = 0,
                                   unsigned seed = 12345) {
    const HeckeCtx& ctx = cb.ctx();
    const ExtWeyl& E = ctx.ext();
    int B = cb.size();
    PCheckReport rep;
    auto fail = [&rep](const std::string& s) { rep.failures.push_back(s); };

    rep.p1 = true;
    for (int b = 0; b < B && rep.p1; ++b)
        for (int bp = 0; bp < B; ++bp)
            if (cd.same_cell(b, bp) && cd.a_value[b] != cd.a_value[bp]) {
                rep.p1 = false;
                fail("P1: a not constant on a two-sided cell");
                break;
            }

    rep.p2 = jt.p2_holds;
    if (!rep.p2) fail("P2: " + jt.p2_failure);

    // P3 over Z[v,v^-1,v',v'^-1].
    rep.p3 = true;
    {
        auto check_quad = [&](int b1, int b2, int b3, int b4) -> bool {
            Laurent2 lhs, rhs;
            for (int beta = 0; beta < B; ++beta) {
                if (!cd.same_cell(beta, b2)) continue;
                Laurent r1 = rt.coeff(b1, b2, beta);
                if (!r1.is_zero()) {
                    Laurent r2 = rt.coeff(beta, b3, b4);
                    if (!r2.is_zero())
                        lhs += Laurent2::from_v(r1) * Laurent2::from_vprime(r2);
                }
                Laurent r3 = rt.coeff(b2, b3, beta);
                if (!r3.is_zero()) {
                    Laurent r4 = rt.coeff(b1, beta, b4);
                    if (!r4.is_zero())
                        rhs += Laurent2::from_v(r4) * Laurent2::from_vprime(r3);
                }
            }
            return lhs == rhs;
        };
        if (max_p3_quadruples > 0) {
            std::mt19937 rng(seed);
            std::uniform_int_distribution<int> pick(0, B - 1);
            for (long i = 0; i < max_p3_quadruples && rep.p3; ++i) {
                int b1 = pick(rng), b2 = pick(rng), b3 = pick(rng);
                auto cell = cd.cell_members(b2);
                int b4 = cell[pick(rng) % cell.size()];
                if (!check_quad(b1, b2, b3, b4)) {
                    rep.p3 = false;
                    fail("P3 fails on a sampled quadruple");
                }
            }
        } else {
            for (int b1 = 0; b1 < B && rep.p3; ++b1)
                for (int b2 = 0; b2 < B && rep.p3; ++b2)
                    for (int b3 = 0; b3 < B && rep.p3; ++b3)
                        for (int b4 = 0; b4 < B; ++b4) {
                            if (!cd.same_cell(b2, b4)) continue;
                            if (!check_quad(b1, b2, b3, b4)) {
                                rep.p3 = false;
                                fail("P3 fails on an exhaustive quadruple");
                                break;
                            }
                        }
        }
    }

    // leading-coefficient identity: with b2 ~ b3 ~ b4,
    // sum r^beta_{b1,b2} gamma^{b4}_{beta,b3} = sum r^{b4}_{b1,beta} gamma^beta_{b2,b3}.
    rep.leading_coeff_identity = rep.p2;
    if (rep.p2) {
        for (int b1 = 0; b1 < B && rep.leading_coeff_identity; ++b1)
            for (int b2 = 0; b2 < B && rep.leading_coeff_identity; ++b2)
                for (int b3 = 0; b3 < B && rep.leading_coeff_identity; ++b3) {
                    if (!cd.same_cell(b2, b3)) continue;
                    for (int b4 : cd.cell_members(b2)) {
                        Laurent lhs, rhs;
                        for (int beta : cd.cell_members(b2)) {
                            auto itg = jt.gamma[beta][b3].find(b4);
                            if (itg != jt.gamma[beta][b3].end())
                                lhs += rt.coeff(b1, b2, beta) * Laurent(itg->second);
                            auto itg2 = jt.gamma[b2][b3].find(beta);
                            if (itg2 != jt.gamma[b2][b3].end())
                                rhs += rt.coeff(b1, beta, b4) * Laurent(itg2->second);
                        }
                        if (lhs != rhs) {
                            rep.leading_coeff_identity = false;
                            fail("leading-coefficient identity fails");
                            break;
                        }
                    }
                }
    }

    // Generators as elements (unit omitted; T~_s, 1_lambda, T~_uD).
    std::vector<HeckeElt> gens;
    for (int s = 0; s < ctx.weyl().num_gens(); ++s)
        gens.push_back(HeckeElt::gen(ctx, E.make(0, ctx.weyl().simple_reflection(s))));
    for (int lam = 0; lam < ctx.num_chars(); ++lam) gens.push_back(HeckeElt::idempotent(ctx, lam));
    if (E.k() > 1) gens.push_back(HeckeElt::gen(ctx, E.make(1, ctx.weyl().identity())));

    // module congruence: x b = Phi(x) * b mod A_{< b}, for generators x and basis b.
    rep.module_congruence = rep.p2;
    if (rep.p2) {
        for (auto& x : gens) {
            if (!rep.module_congruence) break;
            auto phix = phi_of(cb, jt, x);
            for (int b = 0; b < B; ++b) {
                auto lhs = cb.expand(x * cb.elt(b));
                // Phi(x) * b in the c-basis via the t-module structure
                std::map<int, Laurent> rhs;
                for (auto& [b2, c] : phix)
                    for (auto& [bpp, g] : jt.gamma[b2][b]) {
                        Laurent add = c * Laurent(g);
                        auto it = rhs.find(bpp);
                        if (it == rhs.end()) rhs.emplace(bpp, add);
                        else {
                            it->second += add;
                            if (it->second.is_zero()) rhs.erase(it);
                        }
                    }
                // difference must be supported strictly below b
                std::map<int, Laurent> diff = lhs;
                for (auto& [bb, c] : rhs) {
                    auto it = diff.find(bb);
                    if (it == diff.end()) diff.emplace(bb, -c);
                    else {
                        it->second -= c;
                        if (it->second.is_zero()) diff.erase(it);
                    }
                }
                for (auto& [bb, c] : diff) {
                    (void)c;
                    if (!cd.strictly_below(bb, b)) {
                        rep.module_congruence = false;
                        fail("module congruence fails");
                        break;
                    }
                }
                if (!rep.module_congruence) break;
            }
        }
    }

    // Phi is a unital homomorphism (generator-by-basis pairs).
    rep.phi_unit = rep.p2;
    rep.phi_homomorphism = rep.p2;
    if (rep.p2) {
        auto phi_unit_elt = phi_of(cb, jt, HeckeElt::unit(ctx));
        if (phi_unit_elt != jt.unit_element()) {
            rep.phi_unit = false;
            fail("Phi(1) != sum of distinguished t_b");
        }
        for (auto& x : gens) {
            if (!rep.phi_homomorphism) break;
            auto phix = phi_of(cb, jt, x);
            for (int b = 0; b < B; ++b) {
                auto lhs = phi_of(cb, jt, x * cb.elt(b));
                auto rhs = jt.jmul(phix, jt.phi[b]);
                if (lhs != rhs) {
                    rep.phi_homomorphism = false;
                    fail("Phi(xy) != Phi(x)Phi(y) on a generator pair");
                    break;
                }
            }
        }
    }

    // distinguished c_{w,lam} have w in W_lambda, w^2 = 1.
    rep.dist_props = rep.p2;
    if (rep.p2) {
        for (int d : jt.dist_list) {
            auto [g, lam] = cb.key(d);
            if (E.aut_power(g) != 0 ||
                !ctx.chars().system(lam).in_w_lambda(E.weyl_part(g)) ||
                ctx.weyl().mult(E.weyl_part(g), E.weyl_part(g)) != ctx.weyl().identity()) {
                rep.dist_props = false;
                fail("distinguished element without w in W_lambda, w^2 = 1");
                break;
            }
        }
    }

    // semisimple-specialization proxy: Phi at v = 1 is invertible over Q.
    rep.phi_v1_invertible = rep.p2;
    if (rep.p2) {
        std::vector<std::vector<Rat>> m(B, std::vector<Rat>(B, Rat(0)));
        for (int b = 0; b < B; ++b)
            for (auto& [b2, c] : jt.phi[b]) m[b2][b] = Rat(c.evaluate_at_unit(1));
        if (!detail::rational_matrix_invertible(std::move(m))) {
            rep.phi_v1_invertible = false;
            fail("Phi at v=1 is singular");
        }
    }

    // a_D(c_{w,lam}) = c_{eps(w), uD lam}.
    rep.ad_compat = true;
    {
        int uD = E.make(1, ctx.weyl().identity());
        for (int b = 0; b < B; ++b) {
            auto [g, lam] = cb.key(b);
            if (cb.elt(b).ad_D() != cb.elt(E.eps_ext(g), ctx.chars().act(uD, lam))) {
                rep.ad_compat = false;
                fail("a_D does not permute the canonical basis as required");
                break;
            }
        }
    }

    // c_{w1 w2, lam} = T~_{w1} c_{w2, lam} for w1 in Omega_lambda^D, w2 in W_lambda.
    rep.omega_mult = true;
    for (int lam = 0; lam < ctx.num_chars() && rep.omega_mult; ++lam) {
        const LambdaSystem& sys = ctx.chars().system(lam);
        for (int w1 : sys.omega) {
            for (int w2 : sys.w_lambda) {
                int prod = E.mult(w1, E.make(0, w2));
                HeckeElt lhs = HeckeElt::std_basis(ctx, w1, ctx.chars().act(E.make(0, w2), lam)) *
                               cb.elt(E.make(0, w2), lam);
                if (lhs != cb.elt(prod, lam)) {
                    rep.omega_mult = false;
                    fail("Omega-part multiplicativity of the canonical basis fails");
                    break;
                }
            }
            if (!rep.omega_mult) break;
        }
    }

    return rep;
}

}  // namespace heckelab
