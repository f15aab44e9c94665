#pragma once

// Simple modules of H_n at v = 1 via the orbit-groupoid decomposition, the
// a_D-twist u -> bar u and the fixed set U^a, module extension with X^k = 1,
// lifting of traces to generic v through Phi, Schur elements f_u^v, the
// twisted orthogonality identities, and the quasi-rationality test.

#include "heckelab/canbase.hpp"
#include "heckelab/chartable.hpp"
#include "heckelab/convtrace.hpp"

#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

namespace heckelab {

struct SimpleModuleTag {
    int orbit_rep = 0;    // lex-least character in the W-orbit
    int char_id = 0;      // row in Irr(Stab_W(orbit_rep))
    int degree = 1;       // chi(1)
    int dim = 1;          // N_lambda * chi(1) = dim E_u
    int bar_u = -1;       // index of the twisted partner
    bool in_U_a = false;  // u = bar u
    int ext_char_id = -1; // for u in U^a: chosen row in Irr(Stab_{W^D}(orbit_rep))
};

class RepLift {
public:
    RepLift(const HeckeCtx& ctx, const CanBasis& cb, const JRingTable& jt)
        : ctx_(&ctx), cb_(&cb), jt_(&jt) {
        if (!jt.p2_holds) throw std::invalid_argument("J-ring data incomplete (P2 failed)");
        build_orbits();
        build_field();
        build_groups();
        build_modules();
        build_phi_inverses();
        build_trace_tables();
    }

    const HeckeCtx& ctx() const { return *ctx_; }
    const std::shared_ptr<const CycloField>& field() const { return field_; }
    const std::vector<SimpleModuleTag>& modules() const { return mods_; }
    int num_modules() const { return static_cast<int>(mods_.size()); }

    // Character of E_u at v = 1 on the standard basis of H_n.
    Cyclo trace_v1_plain(int u, int w, int lam) const {
        const SimpleModuleTag& t = mods_[u];
        if (plain_rep_[lam] != t.orbit_rep) return Cyclo::zero(field_);
        if (ctx_->chars().act(ctx_->ext().make(0, w), lam) != lam) return Cyclo::zero(field_);
        const WeylGroup& W = ctx_->weyl();
        int c = W.mult(W.mult(plain_bracket_[lam], w), W.inverse(plain_bracket_[lam]));
        const CharacterTable& tab = plain_tables_.at(t.orbit_rep);
        return tab.value(t.char_id, plain_group_pos_.at(t.orbit_rep).at(c));
    }

    // Extended character at v = 1: value of the chosen H_n^{D,1}-extension on
    // T~_g 1_lam (g in W^D); defined for u in U^a.
    Cyclo trace_v1_ext(int u, int g, int lam) const {
        const SimpleModuleTag& t = mods_[u];
        if (!t.in_U_a) throw std::invalid_argument("extended trace needs u in U^a");
        if (ext_rep_[lam] != t.orbit_rep) return Cyclo::zero(field_);
        if (ctx_->chars().act(g, lam) != lam) return Cyclo::zero(field_);
        const ExtWeyl& E = ctx_->ext();
        int c = E.mult(E.mult(ext_bracket_[lam], g), E.inverse(ext_bracket_[lam]));
        const CharacterTable& tab = ext_tables_.at(t.orbit_rep);
        return tab.value(t.ext_char_id, ext_group_pos_.at(t.orbit_rep).at(c));
    }

    // tr(T~_w 1_lam, E_u^v) for w in W, any u.
    const CycloLaurent& trace_plain(int u, int w, int lam) const {
        return plain_traces_[u][w * ctx_->num_chars() + lam];
    }
    // tr(T~_g 1_lam, E_u^v) for g in W^D, u in U^a. Covers T~_w 1_lam T~_uD^j.
    const CycloLaurent& trace_ext(int u, int g, int lam) const {
        auto it = ext_traces_.find(u);
        if (it == ext_traces_.end()) throw std::invalid_argument("u is not in U^a");
        return it->second[g * ctx_->num_chars() + lam];
    }
    // tr(h, E_u^v) for h in H_n by linearity.
    CycloLaurent trace_plain_of(int u, const HeckeElt& h) const {
        CycloLaurent out(field_);
        for (auto& [key, c] : h.terms()) {
            if (ctx_->ext().aut_power(key.first) != 0)
                throw std::invalid_argument("element is not in H_n");
            out += CycloLaurent::from_laurent(field_, c) *
                   trace_plain(u, ctx_->ext().weyl_part(key.first), key.second);
        }
        return out;
    }
    CycloLaurent trace_ext_of(int u, const HeckeElt& h) const {
        CycloLaurent out(field_);
        for (auto& [key, c] : h.terms())
            out += CycloLaurent::from_laurent(field_, c) * trace_ext(u, key.first, key.second);
        return out;
    }

    // Schur element: sum_{w,lam} tr(T~_w 1_lam, E_u^v) tr(1_lam T~_{w^-1}, E_u^v)
    // = f_u^v dim E_u; off-diagonal sums must vanish.
    CycloLaurent schur_element(int u) const { return schur_[u]; }

    struct OrthReport {
        bool schur_orthogonality = false;          // plain, at generic v and kappa = 1
        bool trace_conjugation = false;            // sp conjugation swaps the pairing
        bool twisted_schur_orthogonality = false;  // with T~_uD-twisted entries
        bool hermitian_orthogonality = false;      // sp-sesquilinear form of the sum
        bool hermitian_orthogonality_v1 = false;   // its kappa = 1 specialization
        bool schur_nonzero_v1 = false;
        bool specialization = false; // v -> 1 of every entry matches the character
        std::vector<std::string> failures;
        bool all() const {
            return schur_orthogonality && trace_conjugation &&
                   twisted_schur_orthogonality && hermitian_orthogonality &&
                   hermitian_orthogonality_v1 && schur_nonzero_v1 && specialization;
        }
    };
    OrthReport orthogonality_checks() const;

    struct QuasiRationalReport {
        bool eta_constant_on_classes = false;
        bool hypothesis = false;   // tr(.., E_u) in eta Z at v = 1
        bool conclusion = false;   // tr(.., E_u^v) in eta A at generic v
        std::vector<std::string> failures;
    };
    // eta maps standard-basis index pairs to roots of unity; constancy on
    // asim-classes (J = I) is verified. Defaults to eta == 1.
    QuasiRationalReport quasi_rational_check(
        int u, const std::map<std::pair<int, int>, Cyclo>* eta = nullptr) const;

    // Trace of c1 -> c a(c1) c' on H_n^1 against the twisted character sum.
    bool check_twisted_trace_factorization(const HeckeElt& c, const HeckeElt& cprime) const;
    // Dual-basis trace identities at v = 1 with the explicit dual basis
    // coming from the permutation Gram matrix.
    bool check_dual_basis_identities() const;
    // Regular Gram matrix of H_n at v = 1 is nonsingular.
    bool semisimple_gate_v1() const;

    int plain_rep(int lam) const { return plain_rep_[lam]; }

private:
    void build_orbits() {
        int nl = ctx_->num_chars();
        const WeylGroup& W = ctx_->weyl();
        const ExtWeyl& E = ctx_->ext();
        plain_rep_.assign(nl, -1);
        plain_bracket_.assign(nl, 0);
        ext_rep_.assign(nl, -1);
        ext_bracket_.assign(nl, 0);
        // BFS with generators in index order, lex-least representative.
        auto bfs = [&](bool extended) {
            auto& rep = extended ? ext_rep_ : plain_rep_;
            auto& bracket = extended ? ext_bracket_ : plain_bracket_;
            std::vector<int> gens;
            for (int s = 0; s < W.num_gens(); ++s) gens.push_back(E.make(0, W.simple_reflection(s)));
            if (extended)
                for (int j = 1; j < E.k(); ++j) gens.push_back(E.make(j, W.identity()));
            for (int lam0 = 0; lam0 < nl; ++lam0) {
                if (rep[lam0] >= 0) continue;
                if (ctx_->chars().orbit_rep(lam0, extended) != lam0) continue;
                rep[lam0] = lam0;
                bracket[lam0] = E.identity();
                std::vector<int> queue{lam0};
                for (size_t head = 0; head < queue.size(); ++head) {
                    int nu = queue[head];
                    for (int g : gens) {
                        int mu = ctx_->chars().act(E.inverse(g), nu);
                        if (rep[mu] >= 0) continue;
                        rep[mu] = lam0;
                        bracket[mu] = E.mult(bracket[nu], g);  // bracket moves mu to lam0
                        queue.push_back(mu);
                    }
                }
            }
        };
        bfs(false);
        bfs(true);
        for (int lam = 0; lam < nl; ++lam) {
            if (plain_rep_[lam] < 0 || ext_rep_[lam] < 0)
                throw std::logic_error("orbit BFS missed a character");
            if (ctx_->chars().act(plain_bracket_[lam], lam) != plain_rep_[lam])
                throw std::logic_error("plain bracket does not reach the representative");
            if (ctx_->chars().act(ext_bracket_[lam], lam) != ext_rep_[lam])
                throw std::logic_error("extended bracket does not reach the representative");
        }
        // plain brackets have trivial aut part
        for (int lam = 0; lam < nl; ++lam) plain_bracket_[lam] = to_plain(plain_bracket_[lam]);
    }
    int to_plain(int g) const {
        if (ctx_->ext().aut_power(g) != 0) throw std::logic_error("element is not in W");
        return ctx_->ext().weyl_part(g);
    }

    void build_field() {
        // conductor: lcm of the exponents of every stabilizer group in play
        int m = 1;
        const ExtWeyl& E = ctx_->ext();
        for (int lam = 0; lam < ctx_->num_chars(); ++lam) {
            const LambdaSystem& sys = ctx_->chars().system(lam);
            for (int g : sys.stabilizer) {
                int ord = 1, x = g;
                while (x != E.identity()) { x = E.mult(x, g); ++ord; }
                m = std::lcm(m, ord);
            }
        }
        field_ = Cyclo::make_field(m);
    }

    FiniteGroupData group_from(const std::vector<int>& elems, bool extended,
                               std::map<int, int>& pos) const {
        const ExtWeyl& E = ctx_->ext();
        pos.clear();
        for (size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = static_cast<int>(i);
        std::vector<std::vector<int>> t(elems.size(), std::vector<int>(elems.size()));
        for (size_t a = 0; a < elems.size(); ++a)
            for (size_t b = 0; b < elems.size(); ++b) {
                int prod = extended ? E.mult(elems[a], elems[b])
                                    : ctx_->weyl().mult(elems[a], elems[b]);
                t[a][b] = pos.at(prod);
            }
        return FiniteGroupData::from_mult_table(std::move(t));
    }

    void build_groups() {
        const WeylGroup& W = ctx_->weyl();
        for (int lam = 0; lam < ctx_->num_chars(); ++lam) {
            if (plain_rep_[lam] != lam) continue;
            std::vector<int> stab;
            for (int w = 0; w < W.size(); ++w)
                if (ctx_->chars().act(ctx_->ext().make(0, w), lam) == lam) stab.push_back(w);
            std::map<int, int> pos;
            FiniteGroupData g = group_from(stab, false, pos);
            plain_group_pos_[lam] = pos;
            plain_tables_.emplace(lam, char_table(g, field_));
            plain_orbit_size_[lam] = static_cast<int>(ctx_->chars().orbit(lam, false).size());
        }
        for (int lam = 0; lam < ctx_->num_chars(); ++lam) {
            if (ext_rep_[lam] != lam) continue;
            const LambdaSystem& sys = ctx_->chars().system(lam);
            std::map<int, int> pos;
            FiniteGroupData g = group_from(sys.stabilizer, true, pos);
            ext_group_pos_[lam] = pos;
            ext_tables_.emplace(lam, char_table(g, field_));
        }
    }

    void build_modules() {
        const ExtWeyl& E = ctx_->ext();
        int uD = E.make(1, ctx_->weyl().identity());
        for (int lam = 0; lam < ctx_->num_chars(); ++lam) {
            if (plain_rep_[lam] != lam) continue;
            const CharacterTable& tab = plain_tables_.at(lam);
            for (int c = 0; c < tab.num_irreps(); ++c) {
                SimpleModuleTag t;
                t.orbit_rep = lam;
                t.char_id = c;
                t.degree = tab.degree(c);
                t.dim = plain_orbit_size_[lam] * t.degree;
                mods_.push_back(t);
            }
        }
        // Wedderburn: sum of dim^2 equals dim H_n
        {
            Int s = 0;
            for (auto& t : mods_) s += Int(t.dim) * t.dim;
            if (s != ctx_->dim_plain())
                throw std::logic_error("sum of squared module dimensions != dim H_n");
        }
        // bar u by twisted-character matching: chi_{bar u}(w, lam) =
        // chi_u(eps(w), uD lam)
        int nl = ctx_->num_chars();
        auto char_vec = [&](int u) {
            std::vector<Cyclo> vec;
            for (int w = 0; w < ctx_->weyl().size(); ++w)
                for (int lam = 0; lam < nl; ++lam) vec.push_back(trace_v1_plain(u, w, lam));
            return vec;
        };
        std::vector<std::vector<Cyclo>> vecs;
        for (int u = 0; u < num_modules(); ++u) vecs.push_back(char_vec(u));
        for (int u = 0; u < num_modules(); ++u) {
            std::vector<Cyclo> twisted;
            for (int w = 0; w < ctx_->weyl().size(); ++w)
                for (int lam = 0; lam < nl; ++lam)
                    twisted.push_back(
                        trace_v1_plain(u, E.eps(w), ctx_->chars().act(uD, lam)));
            int found = -1;
            for (int u2 = 0; u2 < num_modules(); ++u2)
                if (vecs[u2] == twisted) {
                    if (found >= 0) throw std::logic_error("twisted character matches twice");
                    found = u2;
                }
            if (found < 0) throw std::logic_error("twisted character matches no module");
            mods_[u].bar_u = found;
            mods_[u].in_U_a = found == u;
        }
        // the map u -> bar u must be a permutation compatible with itself
        for (int u = 0; u < num_modules(); ++u)
            if (mods_[mods_[u].bar_u].bar_u != u)
                throw std::logic_error("u -> bar u is not an involution");
        // extensions for u in U^a
        for (auto& t : mods_) {
            if (!t.in_U_a) continue;
            if (ext_rep_[t.orbit_rep] != t.orbit_rep)
                throw std::logic_error("U^a module with unstable orbit");
            const CharacterTable& dtab = ext_tables_.at(t.orbit_rep);
            const CharacterTable& ptab = plain_tables_.at(t.orbit_rep);
            const auto& dpos = ext_group_pos_.at(t.orbit_rep);
            const auto& ppos = plain_group_pos_.at(t.orbit_rep);
            for (int psi = 0; psi < dtab.num_irreps(); ++psi) {
                if (dtab.degree(psi) != t.degree) continue;
                bool restricts = true;
                for (auto& [w, wp] : ppos) {
                    if (dtab.value(psi, dpos.at(ctx_->ext().make(0, w))) !=
                        ptab.value(t.char_id, wp)) {
                        restricts = false;
                        break;
                    }
                }
                if (restricts) { t.ext_char_id = psi; break; }  // table order = canonical
            }
            if (t.ext_char_id < 0)
                throw std::logic_error("no valid extension found for u in U^a");
        }
    }

    void build_phi_inverses() {
        int B = cb_->size();
        // full Phi at v = 1 and its inverse over Q
        phi_v1_inv_ = invert(phi_matrix_v1(cb_->keys(), B));
        // plain sub-block
        plain_ids_.clear();
        for (int b = 0; b < B; ++b)
            if (ctx_->ext().aut_power(cb_->key(b).first) == 0) plain_ids_.push_back(b);
        int Bp = static_cast<int>(plain_ids_.size());
        std::vector<std::vector<Rat>> sub(Bp, std::vector<Rat>(Bp, Rat(0)));
        for (int j = 0; j < Bp; ++j) {
            for (auto& [b2, c] : jt_->phi[plain_ids_[j]]) {
                auto it = std::lower_bound(plain_ids_.begin(), plain_ids_.end(), b2);
                if (it == plain_ids_.end() || *it != b2)
                    throw std::logic_error("Phi of a plain element leaves the plain block");
                sub[static_cast<int>(it - plain_ids_.begin())][j] = Rat(c.evaluate_at_unit(1));
            }
        }
        phi_plain_v1_inv_ = invert(std::move(sub));
    }

    std::vector<std::vector<Rat>> phi_matrix_v1(const std::vector<std::pair<int, int>>& keys,
                                                int B) const {
        (void)keys;
        std::vector<std::vector<Rat>> m(B, std::vector<Rat>(B, Rat(0)));
        for (int b = 0; b < B; ++b)
            for (auto& [b2, c] : jt_->phi[b]) m[b2][b] = Rat(c.evaluate_at_unit(1));
        return m;
    }

    static std::vector<std::vector<Rat>> invert(std::vector<std::vector<Rat>> a) {
        int n = static_cast<int>(a.size());
        std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
        for (int i = 0; i < n; ++i) inv[i][i] = 1;
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (a[r][col] != 0) { piv = r; break; }
            if (piv < 0) throw std::logic_error("Phi at v = 1 is singular");
            std::swap(a[piv], a[col]);
            std::swap(inv[piv], inv[col]);
            Rat f = a[col][col];
            for (int c = 0; c < n; ++c) { a[col][c] /= f; inv[col][c] /= f; }
            for (int r = 0; r < n; ++r) {
                if (r == col || a[r][col] == 0) continue;
                Rat fr = a[r][col];
                for (int c = 0; c < n; ++c) {
                    a[r][c] -= fr * a[col][c];
                    inv[r][c] -= fr * inv[col][c];
                }
            }
        }
        return inv;
    }

    Cyclo char_of_c_basis_v1(int u, int b, bool extended) const {
        Cyclo acc = Cyclo::zero(field_);
        for (auto& [key, c] : cb_->elt(b).terms()) {
            Cyclo val = extended ? trace_v1_ext(u, key.first, key.second)
                                 : trace_v1_plain(u, to_plain(key.first), key.second);
            acc += Cyclo::from_rational(field_, Rat(c.evaluate_at_unit(1))) * val;
        }
        return acc;
    }

    void build_trace_tables() {
        const ExtWeyl& E = ctx_->ext();
        int nl = ctx_->num_chars();
        int B = cb_->size();
        int Bp = static_cast<int>(plain_ids_.size());
        plain_traces_.assign(num_modules(), {});
        for (int u = 0; u < num_modules(); ++u) {
            // theta_u(t_b) for plain b
            std::vector<Cyclo> theta(Bp, Cyclo::zero(field_));
            std::vector<Cyclo> vec1(Bp, Cyclo::zero(field_));
            for (int j = 0; j < Bp; ++j) vec1[j] = char_of_c_basis_v1(u, plain_ids_[j], false);
            for (int j = 0; j < Bp; ++j)
                for (int i = 0; i < Bp; ++i)
                    if (phi_plain_v1_inv_[i][j] != 0)
                        theta[j] += Cyclo::from_rational(field_, phi_plain_v1_inv_[i][j]) * vec1[i];
            auto& table = plain_traces_[u];
            table.assign(ctx_->weyl().size() * nl, CycloLaurent(field_));
            for (int w = 0; w < ctx_->weyl().size(); ++w)
                for (int lam = 0; lam < nl; ++lam) {
                    auto exp = phi_of(*cb_, *jt_, HeckeElt::std_basis(*ctx_, E.make(0, w), lam));
                    CycloLaurent tr(field_);
                    for (auto& [b2, c] : exp) {
                        auto it = std::lower_bound(plain_ids_.begin(), plain_ids_.end(), b2);
                        if (it == plain_ids_.end() || *it != b2)
                            throw std::logic_error("plain Phi image leaves the plain block");
                        int j = static_cast<int>(it - plain_ids_.begin());
                        if (!theta[j].is_zero())
                            tr += CycloLaurent::from_laurent(field_, c) *
                                  CycloLaurent::constant(theta[j]);
                    }
                    table[w * nl + lam] = std::move(tr);
                }
        }
        for (int u = 0; u < num_modules(); ++u) {
            if (!mods_[u].in_U_a) continue;
            std::vector<Cyclo> theta(B, Cyclo::zero(field_));
            std::vector<Cyclo> vec1(B, Cyclo::zero(field_));
            for (int b = 0; b < B; ++b) vec1[b] = char_of_c_basis_v1(u, b, true);
            for (int j = 0; j < B; ++j)
                for (int i = 0; i < B; ++i)
                    if (phi_v1_inv_[i][j] != 0)
                        theta[j] += Cyclo::from_rational(field_, phi_v1_inv_[i][j]) * vec1[i];
            std::vector<CycloLaurent> table(E.size() * nl, CycloLaurent(field_));
            for (int g = 0; g < E.size(); ++g)
                for (int lam = 0; lam < nl; ++lam) {
                    auto exp = phi_of(*cb_, *jt_, HeckeElt::std_basis(*ctx_, g, lam));
                    CycloLaurent tr(field_);
                    for (auto& [b2, c] : exp)
                        if (!theta[b2].is_zero())
                            tr += CycloLaurent::from_laurent(field_, c) *
                                  CycloLaurent::constant(theta[b2]);
                    table[g * nl + lam] = std::move(tr);
                }
            // the extended table restricts to the plain one
            for (int w = 0; w < ctx_->weyl().size(); ++w)
                for (int lam = 0; lam < nl; ++lam)
                    if (table[E.make(0, w) * nl + lam] != plain_traces_[u][w * nl + lam])
                        throw std::logic_error("extended and plain lifted traces disagree");
            ext_traces_.emplace(u, std::move(table));
        }
        // Schur elements from the defining sums; off-diagonal must vanish.
        schur_.assign(num_modules(), CycloLaurent(field_));
        const WeylGroup& W = ctx_->weyl();
        for (int u = 0; u < num_modules(); ++u) {
            for (int u2 = 0; u2 < num_modules(); ++u2) {
                CycloLaurent acc(field_);
                for (int w = 0; w < W.size(); ++w)
                    for (int lam = 0; lam < nl; ++lam) {
                        // 1_lam T~_{w^-1} = T~_{w^-1} 1_{w lam}
                        int wlam = ctx_->chars().act(E.make(0, w), lam);
                        acc += trace_plain(u, w, lam) * trace_plain(u2, W.inverse(w), wlam);
                    }
                if (u == u2) {
                    // divide by dim E_u (a positive integer)
                    CycloLaurent f(field_);
                    Cyclo dinv = Cyclo::from_rational(field_, Rat(1, mods_[u].dim));
                    for (auto& [k, c] : acc.coeffs())
                        f += CycloLaurent::term(c * dinv, k);
                    schur_[u] = f;
                } else if (!acc.is_zero()) {
                    throw std::logic_error("off-diagonal Schur sum is nonzero");
                }
            }
        }
    }

    const HeckeCtx* ctx_;
    const CanBasis* cb_;
    const JRingTable* jt_;
    std::shared_ptr<const CycloField> field_;
    std::vector<int> plain_rep_, ext_rep_;
    std::vector<int> plain_bracket_;              // W element ids
    std::vector<int> ext_bracket_;                // ext element ids
    std::map<int, std::map<int, int>> plain_group_pos_, ext_group_pos_;
    std::map<int, CharacterTable> plain_tables_, ext_tables_;
    std::map<int, int> plain_orbit_size_;
    std::vector<SimpleModuleTag> mods_;
    std::vector<int> plain_ids_;
    std::vector<std::vector<Rat>> phi_v1_inv_, phi_plain_v1_inv_;
    std::vector<std::vector<CycloLaurent>> plain_traces_;
    std::map<int, std::vector<CycloLaurent>> ext_traces_;
    std::vector<CycloLaurent> schur_;
};

inline RepLift::OrthReport RepLift::orthogonality_checks() const {
    OrthReport rep;
    auto fail = [&rep](const std::string& s) { rep.failures.push_back(s); };
    const WeylGroup& W = ctx_->weyl();
    const ExtWeyl& E = ctx_->ext();
    int nl = ctx_->num_chars();
    int uD = E.make(1, W.identity());

    // Schur orthogonality at generic v and at kappa = 1.
    rep.schur_orthogonality = true;
    for (int u = 0; u < num_modules() && rep.schur_orthogonality; ++u)
        for (int u2 = 0; u2 < num_modules(); ++u2) {
            CycloLaurent acc(field_);
            Cyclo acc1 = Cyclo::zero(field_);
            for (int w = 0; w < W.size(); ++w)
                for (int lam = 0; lam < nl; ++lam) {
                    int wlam = ctx_->chars().act(E.make(0, w), lam);
                    CycloLaurent prod =
                        trace_plain(u, w, lam) * trace_plain(u2, W.inverse(w), wlam);
                    acc += prod;
                    acc1 += prod.specialize_v1();
                }
            CycloLaurent expect(field_);
            if (u == u2) {
                Cyclo d = Cyclo::from_rational(field_, Rat(mods_[u].dim));
                for (auto& [k, c] : schur_[u].coeffs())
                    expect += CycloLaurent::term(c * d, k);
            }
            if (acc != expect || acc1 != expect.specialize_v1()) {
                rep.schur_orthogonality = false;
                fail("Schur orthogonality fails");
                break;
            }
        }

    // tr(1_lam T~_{w^-1}, E_u^v) = sp(tr(T~_w 1_lam, E_u^v)) for w in W^D.
    rep.trace_conjugation = true;
    for (int u = 0; u < num_modules() && rep.trace_conjugation; ++u) {
        if (!mods_[u].in_U_a) continue;
        for (int g = 0; g < E.size() && rep.trace_conjugation; ++g)
            for (int lam = 0; lam < nl; ++lam) {
                int glam = ctx_->chars().act(g, lam);
                if (trace_ext(u, E.inverse(g), glam) != trace_ext(u, g, lam).sp_conj()) {
                    rep.trace_conjugation = false;
                    fail("trace conjugation fails");
                    break;
                }
            }
    }

    // Twisted Schur orthogonality with T~_uD-shifted entries.
    rep.twisted_schur_orthogonality = true;
    for (int u = 0; u < num_modules() && rep.twisted_schur_orthogonality; ++u) {
        if (!mods_[u].in_U_a) continue;
        for (int u2 = 0; u2 < num_modules(); ++u2) {
            if (!mods_[u2].in_U_a) continue;
            CycloLaurent acc(field_);
            for (int w = 0; w < W.size(); ++w)
                for (int lam = 0; lam < nl; ++lam) {
                    // T~_w 1_lam T~_uD = T~_{w uD} 1_{uD^-1 lam}... as basis:
                    int g1 = E.mult(E.make(0, w), uD);
                    int lam1 = ctx_->chars().act(E.inverse(uD), lam);
                    // T~_uD^-1 1_lam T~_{w^-1} = T~_{uD^-1 w^-1} 1_{w lam}
                    int g2 = E.mult(E.inverse(uD), E.make(0, W.inverse(w)));
                    int lam2 = ctx_->chars().act(E.make(0, w), lam);
                    acc += trace_ext(u, g1, lam1) * trace_ext(u2, g2, lam2);
                }
            CycloLaurent expect(field_);
            if (u == u2) {
                Cyclo d = Cyclo::from_rational(field_, Rat(mods_[u].dim));
                for (auto& [k, c] : schur_[u].coeffs())
                    expect += CycloLaurent::term(c * d, k);
            }
            if (acc != expect) {
                rep.twisted_schur_orthogonality = false;
                fail("twisted Schur orthogonality fails");
                break;
            }
        }
    }

    // The sp-sesquilinear orthogonality and its kappa = 1 specialization.
    rep.hermitian_orthogonality = true;
    rep.hermitian_orthogonality_v1 = true;
    for (int u = 0; u < num_modules(); ++u) {
        if (!mods_[u].in_U_a) continue;
        for (int u2 = 0; u2 < num_modules(); ++u2) {
            if (!mods_[u2].in_U_a) continue;
            CycloLaurent acc(field_);
            Cyclo acc1 = Cyclo::zero(field_);
            for (int w = 0; w < W.size(); ++w)
                for (int lam = 0; lam < nl; ++lam) {
                    // T~_w 1_{uD lam} T~_uD as a basis element
                    int g1 = E.mult(E.make(0, w), uD);
                    int lam1 = lam;  // uD^-1 (uD lam)
                    CycloLaurent t1 = trace_ext(u, g1, lam1);
                    CycloLaurent t2 = trace_ext(u2, g1, lam1).sp_conj();
                    acc += t1 * t2;
                    acc1 += (t1 * t2).specialize_v1();
                }
            CycloLaurent expect(field_);
            if (u == u2) {
                Cyclo d = Cyclo::from_rational(field_, Rat(mods_[u].dim));
                for (auto& [k, c] : schur_[u].coeffs())
                    expect += CycloLaurent::term(c * d, k);
            }
            if (acc != expect) {
                rep.hermitian_orthogonality = false;
                rep.failures.push_back("hermitian orthogonality fails");
            }
            if (acc1 != expect.specialize_v1()) {
                rep.hermitian_orthogonality_v1 = false;
                rep.failures.push_back("hermitian orthogonality at kappa = 1 fails");
            }
        }
    }

    rep.schur_nonzero_v1 = true;
    for (int u = 0; u < num_modules(); ++u)
        if (schur_[u].specialize_v1().is_zero()) {
            rep.schur_nonzero_v1 = false;
            fail("f_u^1 = 0");
        }

    // v -> 1 specialization matches the direct character values.
    rep.specialization = true;
    for (int u = 0; u < num_modules() && rep.specialization; ++u) {
        for (int w = 0; w < W.size() && rep.specialization; ++w)
            for (int lam = 0; lam < nl; ++lam)
                if (trace_plain(u, w, lam).specialize_v1() != trace_v1_plain(u, w, lam)) {
                    rep.specialization = false;
                    fail("v -> 1 specialization mismatch (plain)");
                    break;
                }
        if (!mods_[u].in_U_a) continue;
        for (int g = 0; g < E.size() && rep.specialization; ++g)
            for (int lam = 0; lam < nl; ++lam)
                if (trace_ext(u, g, lam).specialize_v1() != trace_v1_ext(u, g, lam)) {
                    rep.specialization = false;
                    fail("v -> 1 specialization mismatch (extended)");
                    break;
                }
    }
    return rep;
}

inline RepLift::QuasiRationalReport RepLift::quasi_rational_check(
    int u, const std::map<std::pair<int, int>, Cyclo>* eta_in) const {
    QuasiRationalReport rep;
    const ExtWeyl& E = ctx_->ext();
    int nl = ctx_->num_chars();
    bool ext = mods_[u].in_U_a;
    std::vector<std::pair<int, int>> domain;
    if (ext) {
        for (int g = 0; g < E.size(); ++g)
            for (int lam = 0; lam < nl; ++lam) domain.push_back({g, lam});
    } else {
        for (int w = 0; w < ctx_->weyl().size(); ++w)
            for (int lam = 0; lam < nl; ++lam) domain.push_back({E.make(0, w), lam});
    }
    auto eta_at = [&](std::pair<int, int> key) {
        if (!eta_in) return Cyclo::one(field_);
        auto it = eta_in->find(key);
        return it == eta_in->end() ? Cyclo::one(field_) : it->second;
    };
    // constancy on asim-classes (J = I)
    std::vector<int> I(ctx_->weyl().num_gens());
    std::iota(I.begin(), I.end(), 0);
    rep.eta_constant_on_classes = true;
    if (eta_in) {
        for (auto& x : domain)
            for (auto& y : domain)
                if (asim_equiv(*ctx_, I, x, y) && eta_at(x) != eta_at(y)) {
                    rep.eta_constant_on_classes = false;
                    rep.failures.push_back("eta is not constant on an asim class");
                }
    }
    rep.hypothesis = true;
    for (auto& key : domain) {
        Cyclo val = ext ? trace_v1_ext(u, key.first, key.second)
                        : trace_v1_plain(u, to_plain(key.first), key.second);
        Cyclo scaled = val * eta_at(key).inverse();
        if (!scaled.is_integer()) {
            rep.hypothesis = false;
            rep.failures.push_back("hypothesis not satisfied: value outside eta Z");
            break;
        }
    }
    if (!rep.hypothesis || !rep.eta_constant_on_classes) return rep;
    rep.conclusion = true;
    for (auto& key : domain) {
        const CycloLaurent& tr = ext ? trace_ext(u, key.first, key.second)
                                     : trace_plain(u, to_plain(key.first), key.second);
        Cyclo einv = eta_at(key).inverse();
        for (auto& [k, c] : tr.coeffs()) {
            (void)k;
            if (!(c * einv).is_integer()) {
                rep.conclusion = false;
                rep.failures.push_back("a generic trace falls outside eta A");
                break;
            }
        }
        if (!rep.conclusion) break;
    }
    return rep;
}

inline bool RepLift::check_twisted_trace_factorization(const HeckeElt& c, const HeckeElt& cprime) const {
    const WeylGroup& W = ctx_->weyl();
    const ExtWeyl& E = ctx_->ext();
    int nl = ctx_->num_chars();
    int uD = E.make(1, W.identity());
    HeckeElt tud = HeckeElt::gen(*ctx_, uD);
    HeckeElt tudinv = HeckeElt::gen(*ctx_, E.inverse(uD));
    // trace of c1 -> c a(c1) c' on H_n at v = 1
    Cyclo lhs = Cyclo::zero(field_);
    for (int w = 0; w < W.size(); ++w)
        for (int lam = 0; lam < nl; ++lam) {
            HeckeElt img = c * (tud * HeckeElt::std_basis(*ctx_, E.make(0, w), lam) * tudinv) *
                           cprime;
            lhs += Cyclo::from_rational(field_,
                                        Rat(img.coeff(E.make(0, w), lam).evaluate_at_unit(1)));
        }
    Cyclo rhs = Cyclo::zero(field_);
    for (int u = 0; u < num_modules(); ++u) {
        if (!mods_[u].in_U_a) continue;
        // tr(c a_u, E_u) = theta_u(c T~_uD) at v = 1; tr(a_u^-1 c', E_u) likewise
        Cyclo t1 = trace_ext_of(u, c * tud).specialize_v1();
        Cyclo t2 = trace_ext_of(u, tudinv * cprime).specialize_v1();
        rhs += t1 * t2;
    }
    return lhs == rhs;
}

inline bool RepLift::check_dual_basis_identities() const {
    const WeylGroup& W = ctx_->weyl();
    const ExtWeyl& E = ctx_->ext();
    int nl = ctx_->num_chars();
    int uD = E.make(1, W.identity());
    // (d) with c = 1: dual basis of T~_w 1_lam is T~_{w^-1} 1_{w lam}
    for (int u = 0; u < num_modules(); ++u)
        for (int u2 = 0; u2 < num_modules(); ++u2) {
            Cyclo acc = Cyclo::zero(field_);
            for (int w = 0; w < W.size(); ++w)
                for (int lam = 0; lam < nl; ++lam) {
                    int wlam = ctx_->chars().act(E.make(0, w), lam);
                    acc += trace_v1_plain(u, w, lam) *
                           trace_v1_plain(u2, W.inverse(w), wlam);
                }
            Cyclo expect = Cyclo::zero(field_);
            if (u == u2)
                expect = schur_[u].specialize_v1() *
                         Cyclo::from_rational(field_, Rat(mods_[u].dim));
            if (acc != expect) return false;
        }
    // (e) with the invertible twist acting as a_u
    for (int u = 0; u < num_modules(); ++u) {
        if (!mods_[u].in_U_a) continue;
        for (int u2 = 0; u2 < num_modules(); ++u2) {
            if (!mods_[u2].in_U_a) continue;
            Cyclo acc = Cyclo::zero(field_);
            for (int w = 0; w < W.size(); ++w)
                for (int lam = 0; lam < nl; ++lam) {
                    int wlam = ctx_->chars().act(E.make(0, w), lam);
                    // c_i a_u = T~_w 1_lam T~_uD; a_{u'}^-1 c'_i = T~_uD^-1 T~_{w^-1} 1_{w lam}
                    int g1 = E.mult(E.make(0, w), uD);
                    int l1 = ctx_->chars().act(E.inverse(uD), lam);
                    int g2 = E.mult(E.inverse(uD), E.make(0, W.inverse(w)));
                    acc += trace_v1_ext(u, g1, l1) * trace_v1_ext(u2, g2, wlam);
                }
            Cyclo expect = Cyclo::zero(field_);
            if (u == u2)
                expect = schur_[u].specialize_v1() *
                         Cyclo::from_rational(field_, Rat(mods_[u].dim));
            if (acc != expect) return false;
        }
    }
    return true;
}

inline bool RepLift::semisimple_gate_v1() const {
    const WeylGroup& W = ctx_->weyl();
    const ExtWeyl& E = ctx_->ext();
    int nl = ctx_->num_chars();
    int d = W.size() * nl;
    std::vector<std::vector<Rat>> gram(d, std::vector<Rat>(d, Rat(0)));
    for (int w = 0; w < W.size(); ++w)
        for (int lam = 0; lam < nl; ++lam)
            for (int w2 = 0; w2 < W.size(); ++w2)
                for (int l2 = 0; l2 < nl; ++l2) {
                    Laurent b = bilinear(HeckeElt::std_basis(*ctx_, E.make(0, w), lam),
                                         HeckeElt::std_basis(*ctx_, E.make(0, w2), l2));
                    gram[w * nl + lam][w2 * nl + l2] = Rat(b.evaluate_at_unit(1));
                }
    return detail::rational_matrix_invertible(std::move(gram));
}

}  // namespace heckelab
