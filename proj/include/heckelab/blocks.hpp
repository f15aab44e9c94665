#pragma once

// The per-character algebra H_lambda^D with basis T~^lambda_w (w in W^D_lambda),
// the isomorphism theta_lambda onto 1_lam H_n^D 1_lam, the orbit-matrix algebra
// E_n^D, and the isomorphism Psi.

#include "heckelab/canbase.hpp"
#include "heckelab/hecke.hpp"

#include <map>
#include <vector>

namespace heckelab {

// Element of H_lambda^D: sparse map (ext element of W^D_lambda) -> Laurent.
using HLambdaElt = std::map<int, Laurent>;

class HLambdaAlg {
public:
    HLambdaAlg(const HeckeCtx& ctx, int lam) : ctx_(&ctx), lam_(lam) {
        const LambdaSystem& sys = ctx.chars().system(lam);
        elems_ = sys.stabilizer;
        for (size_t i = 0; i < elems_.size(); ++i) pos_[elems_[i]] = static_cast<int>(i);
        verify_presentation();
        compute_c_basis();
    }

    const HeckeCtx& ctx() const { return *ctx_; }
    int lambda() const { return lam_; }
    const std::vector<int>& elements() const { return elems_; }
    int l_lambda(int g) const { return ctx_->chars().system(lam_).l_lambda[g]; }

    // theta_lambda: T~^lam_w -> T~_w 1_lam.
    HeckeElt theta(const HLambdaElt& x) const {
        HeckeElt out(*ctx_);
        for (auto& [g, c] : x) out.add_coeff(g, lam_, c);
        return out;
    }
    HLambdaElt theta_inv(const HeckeElt& h) const {
        HLambdaElt out;
        for (auto& [key, c] : h.terms()) {
            if (key.second != lam_ || !pos_.count(key.first))
                throw std::logic_error("element is not in the image of theta_lambda");
            out[key.first] = c;
        }
        return out;
    }

    HLambdaElt unit() const { return {{ctx_->ext().identity(), Laurent::one()}}; }
    HLambdaElt basis(int g) const {
        if (!pos_.count(g)) throw std::invalid_argument("element not in W^D_lambda");
        return {{g, Laurent::one()}};
    }

    // Multiplication transported through theta_lambda.
    HLambdaElt mult(const HLambdaElt& a, const HLambdaElt& b) const {
        return theta_inv(theta(a) * theta(b));
    }
    HLambdaElt bar(const HLambdaElt& a) const { return theta_inv(theta(a).bar()); }

    // Canonical basis c^lam_w of H_lambda^D.
    const HLambdaElt& c_basis(int g) const { return c_.at(g); }

private:
    // The defining presentation relations hold in the transported product.
    void verify_presentation() const {
        const LambdaSystem& sys = ctx_->chars().system(lam_);
        const ExtWeyl& E = ctx_->ext();
        Laurent vv = Laurent::v_pow(1) - Laurent::v_pow(-1);
        for (int sig : sys.i_lambda) {
            int g = E.make(0, sig);
            HLambdaElt sq = mult(basis(g), basis(g));
            HLambdaElt expect = unit();
            expect[g] = vv;
            if (sq != expect)
                throw std::logic_error("quadratic relation fails in H_lambda^D");
        }
        for (int g : elems_)
            for (int h : elems_) {
                if (l_lambda(E.mult(g, h)) != l_lambda(g) + l_lambda(h)) continue;
                HLambdaElt prod = mult(basis(g), basis(h));
                HLambdaElt expect{{E.mult(g, h), Laurent::one()}};
                if (prod != expect)
                    throw std::logic_error("l_lambda-additive product is not T~_{ww'}");
            }
    }

    void compute_c_basis() {
        // Elements in increasing l_lambda order; ties in element order.
        std::vector<int> order = elems_;
        std::stable_sort(order.begin(), order.end(),
                         [this](int a, int b) { return l_lambda(a) < l_lambda(b); });
        for (int g : order) {
            HLambdaElt c = basis(g);
            while (true) {
                HLambdaElt delta;
                {
                    HLambdaElt bc = bar(c);
                    for (auto& [h, v] : bc) delta[h] = v;
                    for (auto& [h, v] : c) {
                        delta[h] -= v;
                        if (delta[h].is_zero()) delta.erase(h);
                    }
                }
                if (delta.empty()) break;
                int best = -1;
                for (auto& [h, v] : delta) {
                    (void)v;
                    if (best < 0 || l_lambda(h) > l_lambda(best) ||
                        (l_lambda(h) == l_lambda(best) && h > best))
                        best = h;
                }
                if (best == g || l_lambda(best) >= l_lambda(g))
                    throw std::logic_error("bar defect in H_lambda^D not strictly lower");
                if (delta[best].bar() != -delta[best])
                    throw std::logic_error("bar defect coefficient not antisymmetric");
                Laurent m = delta[best].negative_part();
                for (auto& [h, v] : c_.at(best)) {
                    c[h] += m * v;
                    if (c[h].is_zero()) c.erase(h);
                }
            }
            for (auto& [h, v] : c) {
                if (h == g) {
                    if (v != Laurent::one())
                        throw std::logic_error("c^lam leading coefficient != 1");
                } else if (!v.in_v_inverse_zvinv()) {
                    throw std::logic_error("c^lam off-diagonal not in v^-1 Z[v^-1]");
                }
            }
            c_[g] = std::move(c);
        }
    }

    const HeckeCtx* ctx_;
    int lam_;
    std::vector<int> elems_;
    std::map<int, int> pos_;
    std::map<int, HLambdaElt> c_;
};

// Sequences s_lambda moving each character to its orbit representative, and
// the elements tau_lambda, tau'_lambda.
class SsChoice {
public:
    explicit SsChoice(const HeckeCtx& ctx) : ctx_(&ctx) {
        const ExtWeyl& E = ctx.ext();
        int nl = ctx.num_chars();
        rep_.assign(nl, -1);
        seq_.assign(nl, {});
        // Generator order: s_1 < s_2 < ... < uD < uD^2 < ...
        std::vector<int> gens;
        for (int s = 0; s < ctx.weyl().num_gens(); ++s)
            gens.push_back(E.make(0, ctx.weyl().simple_reflection(s)));
        for (int j = 1; j < E.k(); ++j) gens.push_back(E.make(j, ctx.weyl().identity()));
        for (int lam0 = 0; lam0 < nl; ++lam0) {
            if (ctx.chars().orbit_rep(lam0, true) != lam0) continue;
            // BFS outward from the representative; parent edges give the path
            // lam0 = g_1 (g_2 (... g_r lam)).
            std::map<int, std::pair<int, int>> parent;  // mu -> (nu, gen)
            std::vector<int> queue{lam0};
            rep_[lam0] = lam0;
            for (size_t head = 0; head < queue.size(); ++head) {
                int nu = queue[head];
                for (int g : gens) {
                    int mu = ctx.chars().act(E.inverse(g), nu);
                    if (mu == lam0 || parent.count(mu) || mu == nu) continue;
                    if (rep_[mu] >= 0) continue;
                    parent[mu] = {nu, g};
                    rep_[mu] = lam0;
                    queue.push_back(mu);
                }
            }
            for (auto& [mu, pg] : parent) {
                // path: mu --g--> nu --...--> lam0, sequence applied right-first
                std::vector<int> seq;
                int cur = mu;
                while (cur != lam0) {
                    auto [nu, g] = parent.at(cur);
                    seq.push_back(g);  // g maps cur to nu
                    cur = nu;
                }
                std::reverse(seq.begin(), seq.end());  // s_1 ... s_r with lam0 = s_1...s_r mu
                seq_[mu] = std::move(seq);
            }
        }
        for (int lam = 0; lam < nl; ++lam) {
            if (rep_[lam] < 0) throw std::logic_error("orbit BFS missed a character");
            int br = E.identity();
            for (int g : seq_[lam]) br = E.mult(br, g);
            bracket_.push_back(br);
            if (ctx.chars().act(br, lam) != rep_[lam])
                throw std::logic_error("bracket does not move lambda to its representative");
        }
        verify();
    }

    const HeckeCtx& ctx() const { return *ctx_; }
    int rep(int lam) const { return rep_[lam]; }
    const std::vector<int>& sequence(int lam) const { return seq_[lam]; }
    int bracket(int lam) const { return bracket_[lam]; }

    // tau_lambda = T~_{s_1} ... T~_{s_r}.
    HeckeElt tau(int lam) const {
        HeckeElt e = HeckeElt::unit(*ctx_);
        for (int g : seq_[lam]) e = e * HeckeElt::gen(*ctx_, g);
        return e;
    }
    // tau'_lambda = T~_{s_r^-1} ... T~_{s_1^-1}.
    HeckeElt tau_prime(int lam) const {
        const ExtWeyl& E = ctx_->ext();
        HeckeElt e = HeckeElt::unit(*ctx_);
        for (auto it = seq_[lam].rbegin(); it != seq_[lam].rend(); ++it)
            e = e * HeckeElt::gen(*ctx_, E.inverse(*it));
        return e;
    }

private:
    // Path invertibility against the idempotents, and bar-fixedness.
    void verify() const {
        for (int lam = 0; lam < ctx_->num_chars(); ++lam) {
            HeckeElt t = tau(lam), tp = tau_prime(lam);
            HeckeElt i0 = HeckeElt::idempotent(*ctx_, rep_[lam]);
            HeckeElt il = HeckeElt::idempotent(*ctx_, lam);
            if (i0 * t * tp != i0) throw std::logic_error("1_{lam0} tau tau' != 1_{lam0}");
            if (il * tp * t != il) throw std::logic_error("1_lam tau' tau != 1_lam");
            HeckeElt tl = t * il;
            if (tl.bar() != tl) throw std::logic_error("tau_lambda 1_lambda is not bar-fixed");
            HeckeElt lt = il * tp;
            if (lt.bar() != lt) throw std::logic_error("1_lambda tau'_lambda is not bar-fixed");
        }
    }

    const HeckeCtx* ctx_;
    std::vector<int> rep_;
    std::vector<std::vector<int>> seq_;
    std::vector<int> bracket_;
};

// Element of E_n^D: entries indexed by pairs (lam1, lam2) in one W^D-orbit,
// with entry (lam1, lam2) in 1_{lam0} H_n^D 1_{lam0}.
struct EAlgElt {
    std::map<std::pair<int, int>, HeckeElt> entries;

    friend bool operator==(const EAlgElt& a, const EAlgElt& b) { return a.entries == b.entries; }
    friend bool operator!=(const EAlgElt& a, const EAlgElt& b) { return !(a == b); }
};

class EAlg {
public:
    explicit EAlg(const HeckeCtx& ctx, const SsChoice& ss) : ctx_(&ctx), ss_(&ss) {}

    const HeckeCtx& ctx() const { return *ctx_; }
    const SsChoice& ss() const { return *ss_; }

    EAlgElt unit() const {
        EAlgElt u;
        for (int lam = 0; lam < ctx_->num_chars(); ++lam)
            u.entries[{lam, lam}] = HeckeElt::idempotent(*ctx_, ss_->rep(lam));
        return u;
    }

    // x^{lam1, lam2, w}: single entry T~_w 1_{lam0} at (lam1, lam2).
    EAlgElt x_basis(int lam1, int lam2, int w) const {
        if (ss_->rep(lam1) != ss_->rep(lam2))
            throw std::invalid_argument("x-basis pair not in one orbit");
        int lam0 = ss_->rep(lam1);
        if (ctx_->chars().act(w, lam0) != lam0)
            throw std::invalid_argument("x-basis element must fix the representative");
        EAlgElt e;
        e.entries[{lam1, lam2}] = HeckeElt::std_basis(*ctx_, w, lam0);
        return e;
    }

    EAlgElt mult(const EAlgElt& x, const EAlgElt& y) const {
        EAlgElt out;
        for (auto& [k1, h1] : x.entries)
            for (auto& [k2, h2] : y.entries) {
                if (k1.second != k2.first) continue;
                HeckeElt prod = h1 * h2;
                if (prod.is_zero()) continue;
                auto key = std::make_pair(k1.first, k2.second);
                auto it = out.entries.find(key);
                if (it == out.entries.end()) out.entries.emplace(key, std::move(prod));
                else {
                    it->second += prod;
                    if (it->second.is_zero()) out.entries.erase(it);
                }
            }
        return out;
    }

    EAlgElt bar(const EAlgElt& x) const {
        EAlgElt out;
        for (auto& [k, h] : x.entries) {
            HeckeElt b = h.bar();
            if (!b.is_zero()) out.entries.emplace(k, std::move(b));
        }
        return out;
    }

    // Psi(h)_{lam1,lam2} = tau_{lam1} 1_{lam1} h 1_{lam2} tau'_{lam2}.
    EAlgElt psi(const HeckeElt& h) const {
        EAlgElt out;
        for (int lam1 = 0; lam1 < ctx_->num_chars(); ++lam1) {
            for (int lam2 = 0; lam2 < ctx_->num_chars(); ++lam2) {
                if (ss_->rep(lam1) != ss_->rep(lam2)) continue;
                HeckeElt entry = ss_->tau(lam1) * HeckeElt::idempotent(*ctx_, lam1) * h *
                                 HeckeElt::idempotent(*ctx_, lam2) * ss_->tau_prime(lam2);
                if (!entry.is_zero()) out.entries.emplace(std::make_pair(lam1, lam2), std::move(entry));
            }
        }
        return out;
    }

    // Psi_0(w, lam) = (w lam, lam, [s_{w lam}] w [s_lam]^-1).
    std::tuple<int, int, int> psi0(int g, int lam) const {
        const ExtWeyl& E = ctx_->ext();
        int wl = ctx_->chars().act(g, lam);
        int w = E.mult(E.mult(ss_->bracket(wl), g), E.inverse(ss_->bracket(lam)));
        return {wl, lam, w};
    }
    // Inverse: (lam1, lam2, w) -> ([s_{lam1}]^-1 w [s_{lam2}], lam2).
    std::pair<int, int> psi0_inv(int lam1, int lam2, int w) const {
        const ExtWeyl& E = ctx_->ext();
        int g = E.mult(E.mult(E.inverse(ss_->bracket(lam1)), w), ss_->bracket(lam2));
        return {g, lam2};
    }

private:
    const HeckeCtx* ctx_;
    const SsChoice* ss_;
};

}  // namespace heckelab
