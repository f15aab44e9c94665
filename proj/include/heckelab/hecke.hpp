#pragma once

// The extended unipotent Hecke algebra H_n^D: free A-module on T~_g 1_lambda
// (g in W^D, lambda in s_n) with the quadratic/braid/idempotent relations,
// the bar involution, the flat antiautomorphism, the twist ad_D, the linear
// involution Omega, and the trace form tau.

#include "heckelab/charlat.hpp"
#include "heckelab/laurent.hpp"
#include "heckelab/weyl.hpp"

#include <functional>
#include <map>
#include <memory>
#include <vector>

namespace heckelab {

class HeckeCtx {
public:
    HeckeCtx(RootDatum datum, DiagramAut aut, int n)
        : datum_(std::move(datum)),
          W_(std::make_unique<WeylGroup>(datum_)),
          ext_(std::make_unique<ExtWeyl>(*W_, std::move(aut))),
          chars_(std::make_unique<CharCtx>(*ext_, n)) {}

    HeckeCtx(const HeckeCtx&) = delete;
    HeckeCtx& operator=(const HeckeCtx&) = delete;

    const RootDatum& datum() const { return W_->datum(); }
    const WeylGroup& weyl() const { return *W_; }
    const ExtWeyl& ext() const { return *ext_; }
    const CharCtx& chars() const { return *chars_; }
    int n() const { return chars_->n(); }
    int k() const { return ext_->k(); }
    int num_chars() const { return chars_->count(); }
    // Dimension of H_n^D as a free A-module.
    int dim() const { return ext_->size() * chars_->count(); }
    int dim_plain() const { return W_->size() * chars_->count(); }

    // index of the simple generator s twisted by uD^p: eps^p(s_i) = s_{perm^p(i)}
    int perm_pow(int p, int s) const {
        const auto& perm = ext_->aut().root_permutation;
        int k = ext_->k();
        p = ((p % k) + k) % k;
        int r = s;
        for (int i = 0; i < p; ++i) r = perm[r];
        return r;
    }

private:
    RootDatum datum_;  // kept alive for W_
    std::unique_ptr<WeylGroup> W_;
    std::unique_ptr<ExtWeyl> ext_;
    std::unique_ptr<CharCtx> chars_;
};

class HeckeElt {
public:
    using Key = std::pair<int, int>;  // (extended element id, lambda id)

    HeckeElt() : ctx_(nullptr) {}
    explicit HeckeElt(const HeckeCtx& ctx) : ctx_(&ctx) {}

    static HeckeElt zero(const HeckeCtx& ctx) { return HeckeElt(ctx); }
    // T~_1 = sum_lambda 1_lambda, the unit.
    static HeckeElt unit(const HeckeCtx& ctx) {
        HeckeElt e(ctx);
        for (int lam = 0; lam < ctx.num_chars(); ++lam)
            e.terms_[{ctx.ext().identity(), lam}] = Laurent::one();
        return e;
    }
    static HeckeElt idempotent(const HeckeCtx& ctx, int lam) {
        HeckeElt e(ctx);
        e.terms_[{ctx.ext().identity(), lam}] = Laurent::one();
        return e;
    }
    // The basis element T~_g 1_lambda.
    static HeckeElt std_basis(const HeckeCtx& ctx, int g, int lam) {
        HeckeElt e(ctx);
        e.terms_[{g, lam}] = Laurent::one();
        return e;
    }
    // T_g 1_lambda = v^{l(g)} T~_g 1_lambda.
    static HeckeElt std_basis_T(const HeckeCtx& ctx, int g, int lam) {
        HeckeElt e(ctx);
        e.terms_[{g, lam}] = Laurent::v_pow(ctx.ext().length(g));
        return e;
    }
    // T~_g summed over all lambda.
    static HeckeElt gen(const HeckeCtx& ctx, int g) {
        HeckeElt e(ctx);
        for (int lam = 0; lam < ctx.num_chars(); ++lam) e.terms_[{g, lam}] = Laurent::one();
        return e;
    }

    const HeckeCtx& ctx() const { return *ctx_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, Laurent>& terms() const { return terms_; }
    Laurent coeff(int g, int lam) const {
        auto it = terms_.find({g, lam});
        return it == terms_.end() ? Laurent::zero() : it->second;
    }
    void set_coeff(int g, int lam, const Laurent& c) {
        if (c.is_zero()) terms_.erase({g, lam});
        else terms_[{g, lam}] = c;
    }
    void add_coeff(int g, int lam, const Laurent& c) {
        if (c.is_zero()) return;
        auto it = terms_.find({g, lam});
        if (it == terms_.end()) terms_.emplace(Key{g, lam}, c);
        else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    HeckeElt& operator+=(const HeckeElt& o) {
        check_ctx(o);
        for (auto& [k, c] : o.terms_) add_coeff(k.first, k.second, c);
        return *this;
    }
    HeckeElt& operator-=(const HeckeElt& o) {
        check_ctx(o);
        for (auto& [k, c] : o.terms_) add_coeff(k.first, k.second, -c);
        return *this;
    }
    friend HeckeElt operator+(HeckeElt a, const HeckeElt& b) { a += b; return a; }
    friend HeckeElt operator-(HeckeElt a, const HeckeElt& b) { a -= b; return a; }
    HeckeElt operator-() const {
        HeckeElt r(*ctx_);
        for (auto& [k, c] : terms_) r.terms_[k] = -c;
        return r;
    }
    friend HeckeElt operator*(const Laurent& s, const HeckeElt& e) {
        HeckeElt r(*e.ctx_);
        if (s.is_zero()) return r;
        for (auto& [k, c] : e.terms_) r.terms_[k] = s * c;
        return r;
    }
    friend bool operator==(const HeckeElt& a, const HeckeElt& b) {
        a.check_ctx(b);
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const HeckeElt& a, const HeckeElt& b) { return !(a == b); }

    // Left multiplication by the generator T~_s, s a simple-reflection index.
    // T~_s T~_w 1_lam = T~_{sw} 1_lam                        if l(sw) > l(w),
    //                 = T~_{sw} 1_lam + (v - v^-1) [s' in W_{sw.lam}] T~_w 1_lam
    // with s' the uD^a-twist of s acting on the Weyl part.
    HeckeElt left_mult_gen(int s) const {
        const ExtWeyl& E = ctx_->ext();
        const WeylGroup& W = E.weyl();
        HeckeElt r(*ctx_);
        Laurent vv = Laurent::v_pow(1) - Laurent::v_pow(-1);
        for (auto& [key, c] : terms_) {
            auto [g, lam] = key;
            int a = E.aut_power(g), x = E.weyl_part(g);
            int sp = ctx_->perm_pow(-a, s);
            int sx = W.mult(W.simple_reflection(sp), x);
            int sg = E.make(a, sx);
            r.add_coeff(sg, lam, c);
            if (W.length(sx) < W.length(x)) {
                int mu = ctx_->chars().act(E.make(0, sx), lam);  // (sw) lam up to uD^a-twist
                if (ctx_->chars().simple_in_w_lambda(sp, mu)) r.add_coeff(g, lam, vv * c);
            }
        }
        return r;
    }

    // Left multiplication by T~_s^{-1} = T~_s - (v - v^-1) sum_{mu : s in W_mu} 1_mu.
    HeckeElt left_mult_gen_inv(int s) const {
        HeckeElt r = left_mult_gen(s);
        Laurent vv = Laurent::v_pow(1) - Laurent::v_pow(-1);
        for (auto& [key, c] : terms_) {
            auto [g, lam] = key;
            int left = ctx_->chars().act(g, lam);
            if (ctx_->chars().simple_in_w_lambda(s, left)) r.add_coeff(g, lam, -(vv * c));
        }
        return r;
    }

    // Left multiplication by T~_{uD}^p.
    HeckeElt left_mult_aut(int p) const {
        const ExtWeyl& E = ctx_->ext();
        HeckeElt r(*ctx_);
        for (auto& [key, c] : terms_) {
            auto [g, lam] = key;
            r.add_coeff(E.make(E.aut_power(g) + p, E.weyl_part(g)), lam, c);
        }
        return r;
    }

    friend HeckeElt operator*(const HeckeElt& A, const HeckeElt& B) {
        A.check_ctx(B);
        const HeckeCtx& ctx = *A.ctx_;
        const ExtWeyl& E = ctx.ext();
        HeckeElt out(ctx);
        for (auto& [key, c] : A.terms_) {
            auto [g, lam] = key;
            // 1_lam B: keep terms whose left character matches lam
            HeckeElt tmp(ctx);
            for (auto& [k2, c2] : B.terms_) {
                if (ctx.chars().act(k2.first, k2.second) == lam) tmp.terms_[k2] = c2;
            }
            if (tmp.is_zero()) continue;
            const std::vector<int>& word = E.weyl().word(E.weyl_part(g));
            for (int i = static_cast<int>(word.size()) - 1; i >= 0; --i)
                tmp = tmp.left_mult_gen(word[i]);
            int a = E.aut_power(g);
            if (a != 0) tmp = tmp.left_mult_aut(a);
            out += c * tmp;
        }
        return out;
    }
    HeckeElt& operator*=(const HeckeElt& o) { *this = *this * o; return *this; }

    // Ring involution with bar(v) = v^-1, bar(T~_g) = T~_{g^-1}^{-1}.
    HeckeElt bar() const {
        const ExtWeyl& E = ctx_->ext();
        HeckeElt out(*ctx_);
        for (auto& [key, c] : terms_) {
            auto [g, lam] = key;
            HeckeElt e = idempotent(*ctx_, lam);
            const std::vector<int>& word = E.weyl().word(E.weyl_part(g));
            for (int i = static_cast<int>(word.size()) - 1; i >= 0; --i)
                e = e.left_mult_gen_inv(word[i]);
            int a = E.aut_power(g);
            if (a != 0) e = e.left_mult_aut(a);
            out += c.bar() * e;
        }
        return out;
    }

    // A-linear antiautomorphism: T~_g 1_lam -> 1_lam T~_{g^-1}; coefficients fixed.
    HeckeElt flat() const {
        const ExtWeyl& E = ctx_->ext();
        HeckeElt out(*ctx_);
        for (auto& [key, c] : terms_) {
            auto [g, lam] = key;
            out.add_coeff(E.inverse(g), ctx_->chars().act(g, lam), c);
        }
        return out;
    }

    // The algebra automorphism a_D : h -> T~_uD h T~_uD^-1.
    HeckeElt ad_D() const {
        const ExtWeyl& E = ctx_->ext();
        int uD = E.make(1, E.weyl().identity());
        HeckeElt out(*ctx_);
        for (auto& [key, c] : terms_) {
            auto [g, lam] = key;
            out.add_coeff(E.eps_ext(g), ctx_->chars().act(uD, lam), c);
        }
        return out;
    }

    // The linear involution Omega: T_w 1_lam -> 1_{-lam} T_{w^-1}.
    HeckeElt omega_invol() const {
        const ExtWeyl& E = ctx_->ext();
        HeckeElt out(*ctx_);
        for (auto& [key, c] : terms_) {
            auto [g, lam] = key;
            int gi = E.inverse(g);
            int neg = ctx_->chars().negate(lam);
            // 1_{-lam} T~_{g^-1} = T~_{g^-1} 1_{g(-lam)}
            out.add_coeff(gi, ctx_->chars().act(g, neg), c);
        }
        return out;
    }

    // tau(T~_w 1_lam) = delta_{w,1}; defined on H_n (no uD-part allowed).
    Laurent tau() const {
        const ExtWeyl& E = ctx_->ext();
        Laurent out;
        for (auto& [key, c] : terms_) {
            if (E.aut_power(key.first) != 0)
                throw std::invalid_argument("tau is defined on H_n only");
            if (key.first == E.identity()) out += c;
        }
        return out;
    }
    friend Laurent bilinear(const HeckeElt& a, const HeckeElt& b) { return (a * b).tau(); }

    // True iff all terms have aut_power 0 (the element lies in H_n).
    bool in_plain_subalgebra() const {
        for (auto& [key, c] : terms_) {
            (void)c;
            if (ctx_->ext().aut_power(key.first) != 0) return false;
        }
        return true;
    }

    // Expansion in the T-normalization: coefficient of T_g 1_lam.
    Laurent coeff_T(int g, int lam) const {
        return coeff(g, lam) * Laurent::v_pow(-ctx_->ext().length(g));
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        const ExtWeyl& E = ctx_->ext();
        for (auto& [key, c] : terms_) {
            if (!s.empty()) s += "  +  ";
            s += "(" + c.to_string() + ")*";
            int a = E.aut_power(key.first);
            if (a != 0) s += "uD^" + std::to_string(a) + ".";
            s += "T[";
            bool first = true;
            for (int g : E.weyl().word(E.weyl_part(key.first))) {
                if (!first) s += ".";
                first = false;
                s += "s" + std::to_string(g + 1);
            }
            if (first) s += "1";
            s += "]1_{";
            auto lam = ctx_->chars().char_of(key.second);
            for (size_t i = 0; i < lam.values.size(); ++i)
                s += (i ? "," : "") + std::to_string(lam.values[i]);
            s += "}";
        }
        return s;
    }

private:
    void check_ctx(const HeckeElt& o) const {
        if (ctx_ != o.ctx_) throw std::invalid_argument("Hecke elements from different contexts");
    }

    const HeckeCtx* ctx_;
    std::map<Key, Laurent> terms_;
};

}  // namespace heckelab
