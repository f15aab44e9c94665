#pragma once

// The finite character set s_n = Hom(Y, Z/n) with its W^D-action, and the
// per-character combinatorics R_lambda, W_lambda, l_lambda, Omega_lambda^D.

#include "heckelab/weyl.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace heckelab {

struct CharModN {
    int n = 1;
    std::vector<int> values;  // lambda on the standard basis of Y, entries in [0, n)
};

struct LambdaSystem {
    std::vector<int> r_lambda;       // root indices with lambda(alpha^vee) = 0
    std::vector<int> r_lambda_plus;  // the positive ones
    std::vector<int> pi_lambda;      // simple roots of R_lambda inside R_lambda^+
    std::vector<int> i_lambda;       // reflections s_alpha, alpha in Pi_lambda (W ids)
    std::vector<int> w_lambda;       // the subgroup W_lambda, sorted W ids
    std::vector<int> l_lambda;       // l_lambda(g) for every extended element g
    std::vector<int> stabilizer;     // W^D_lambda = {g : g lambda = lambda}, sorted ext ids
    std::vector<int> omega;          // Omega^D_lambda = {g in stab : l_lambda(g) = 0}
    std::map<int, std::vector<int>> coxeter_words;  // W id -> word over i_lambda

    bool in_w_lambda(int w) const {
        return std::binary_search(w_lambda.begin(), w_lambda.end(), w);
    }
    bool in_stabilizer(int g) const {
        return std::binary_search(stabilizer.begin(), stabilizer.end(), g);
    }
    bool in_omega(int g) const {
        return std::binary_search(omega.begin(), omega.end(), g);
    }
};

// All of s_n for a fixed extended Weyl group; characters are indexed by their
// value vector in lexicographic order.
class CharCtx {
public:
    CharCtx(const ExtWeyl& ext, int n) : ext_(&ext), n_(n) {
        if (n < 1) throw std::invalid_argument("n must be positive");
        rank_ = ext.weyl().datum().rank;
        count_ = 1;
        for (int i = 0; i < rank_; ++i) count_ *= n_;
        build_action();
    }

    const ExtWeyl& ext() const { return *ext_; }
    const WeylGroup& weyl() const { return ext_->weyl(); }
    int n() const { return n_; }
    int count() const { return count_; }

    int index_of(const CharModN& lam) const {
        if (lam.n != n_ || static_cast<int>(lam.values.size()) != rank_)
            throw std::invalid_argument("character has wrong modulus or rank");
        int idx = 0;
        for (int i = 0; i < rank_; ++i) {
            int v = ((lam.values[i] % n_) + n_) % n_;
            idx = idx * n_ + v;
        }
        return idx;
    }
    CharModN char_of(int idx) const {
        CharModN lam;
        lam.n = n_;
        lam.values.assign(rank_, 0);
        for (int i = rank_ - 1; i >= 0; --i) {
            lam.values[i] = idx % n_;
            idx /= n_;
        }
        return lam;
    }

    // lambda(alpha^vee) for a root index.
    int evaluate(int lam, int root) const {
        CharModN c = char_of(lam);
        const IVec& cv = weyl().datum().coroots[root];
        long long s = 0;
        for (int i = 0; i < rank_; ++i) s += c.values[i] * cv[i];
        return static_cast<int>(((s % n_) + n_) % n_);
    }

    // (g . lambda)(y) = lambda(g^-1 y).
    int act(int g, int lam) const { return action_[g][lam]; }

    int negate(int lam) const {
        CharModN c = char_of(lam);
        for (auto& v : c.values) v = (n_ - v) % n_;
        return index_of(c);
    }

    // s in W_lambda for a simple generator, i.e. lambda(alpha_s^vee) = 0.
    bool simple_in_w_lambda(int s, int lam) const { return simple_zero_[s][lam]; }

    const LambdaSystem& system(int lam) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = systems_.find(lam);
        if (it != systems_.end()) return it->second;
        return systems_.emplace(lam, compute_system(lam)).first->second;
    }

    // Lexicographically least character in the W^D-orbit (resp. W-orbit).
    int orbit_rep(int lam, bool extended = true) const {
        int best = lam;
        if (extended) {
            for (int g = 0; g < ext_->size(); ++g) best = std::min(best, act(g, lam));
        } else {
            for (int w = 0; w < weyl().size(); ++w) best = std::min(best, act(ext_->make(0, w), lam));
        }
        return best;
    }
    std::vector<int> orbit(int lam, bool extended = true) const {
        std::vector<char> seen(count_, 0);
        std::vector<int> out;
        if (extended) {
            for (int g = 0; g < ext_->size(); ++g) {
                int m = act(g, lam);
                if (!seen[m]) { seen[m] = 1; out.push_back(m); }
            }
        } else {
            for (int w = 0; w < weyl().size(); ++w) {
                int m = act(ext_->make(0, w), lam);
                if (!seen[m]) { seen[m] = 1; out.push_back(m); }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    // Orbit representatives (lex-least), sorted.
    std::vector<int> orbit_reps(bool extended = true) const {
        std::vector<int> reps;
        for (int lam = 0; lam < count_; ++lam)
            if (orbit_rep(lam, extended) == lam) reps.push_back(lam);
        return reps;
    }

private:
    void build_action() {
        int ne = ext_->size();
        action_.assign(ne, std::vector<int>(count_));
        for (int g = 0; g < ne; ++g) {
            int ginv = ext_->inverse(g);
            // y-matrix of g^-1, transposed, applied to value vectors mod n
            IMat m = imat_identity(rank_);
            {
                int a = ext_->aut_power(ginv);
                const IMat& wy = weyl().y_matrix(ext_->weyl_part(ginv));
                IMat apow = imat_identity(rank_);
                for (int i = 0; i < a; ++i) apow = imat_mul(apow, ext_->aut().y_matrix);
                m = imat_mul(apow, wy);
            }
            IMat mt = imat_transpose(m);
            for (int lam = 0; lam < count_; ++lam) {
                CharModN c = char_of(lam);
                IVec vals(c.values.begin(), c.values.end());
                IVec nv = imat_apply(mt, vals);
                CharModN out;
                out.n = n_;
                out.values.resize(rank_);
                for (int i = 0; i < rank_; ++i)
                    out.values[i] = static_cast<int>(((nv[i] % n_) + n_) % n_);
                action_[g][lam] = index_of(out);
            }
        }
        int gens = weyl().num_gens();
        simple_zero_.assign(gens, std::vector<char>(count_, 0));
        for (int s = 0; s < gens; ++s) {
            int root = weyl().datum().root_index(weyl().datum().simple_roots[s]);
            for (int lam = 0; lam < count_; ++lam)
                simple_zero_[s][lam] = evaluate(lam, root) == 0;
        }
    }

    LambdaSystem compute_system(int lam) const {
        const RootDatum& d = weyl().datum();
        LambdaSystem sys;
        for (int r = 0; r < d.num_roots(); ++r)
            if (evaluate(lam, r) == 0) sys.r_lambda.push_back(r);
        for (int r : sys.r_lambda)
            if (d.is_positive(r)) sys.r_lambda_plus.push_back(r);
        // Simple roots of R_lambda: positive elements not expressible as a sum
        // of two elements of R_lambda^+.
        for (int r : sys.r_lambda_plus) {
            bool decomposable = false;
            for (int a : sys.r_lambda_plus) {
                for (int b : sys.r_lambda_plus) {
                    IVec sum = d.roots[a];
                    for (int i = 0; i < rank_; ++i) sum[i] += d.roots[b][i];
                    if (sum == d.roots[r]) { decomposable = true; break; }
                }
                if (decomposable) break;
            }
            if (!decomposable) sys.pi_lambda.push_back(r);
        }
        for (int r : sys.pi_lambda) sys.i_lambda.push_back(weyl().reflection(r));
        // W_lambda generated by all s_alpha, alpha in R_lambda.
        {
            std::vector<char> in(weyl().size(), 0);
            std::vector<int> stack{0};
            in[0] = 1;
            while (!stack.empty()) {
                int w = stack.back();
                stack.pop_back();
                for (int r : sys.r_lambda) {
                    int e = weyl().mult(w, weyl().reflection(r));
                    if (!in[e]) { in[e] = 1; stack.push_back(e); }
                }
            }
            for (int w = 0; w < weyl().size(); ++w)
                if (in[w]) sys.w_lambda.push_back(w);
            // must agree with the group generated by I_lambda
            std::vector<char> in2(weyl().size(), 0);
            std::vector<int> st2{0};
            in2[0] = 1;
            while (!st2.empty()) {
                int w = st2.back();
                st2.pop_back();
                for (int g : sys.i_lambda) {
                    int e = weyl().mult(w, g);
                    if (!in2[e]) { in2[e] = 1; st2.push_back(e); }
                }
            }
            for (int w = 0; w < weyl().size(); ++w)
                if (static_cast<bool>(in[w]) != static_cast<bool>(in2[w]))
                    throw std::logic_error("W_lambda differs from <I_lambda>");
        }
        // Every positive R_lambda root must be an N-combination of Pi_lambda;
        // equivalent inductive form: non-simple ones split as a sum of two.
        for (int r : sys.r_lambda_plus) {
            if (std::find(sys.pi_lambda.begin(), sys.pi_lambda.end(), r) != sys.pi_lambda.end())
                continue;
            bool splits = false;
            for (int a : sys.r_lambda_plus) {
                for (int b : sys.r_lambda_plus) {
                    IVec sum = d.roots[a];
                    for (int i = 0; i < rank_; ++i) sum[i] += d.roots[b][i];
                    if (sum == d.roots[r]) { splits = true; break; }
                }
                if (splits) break;
            }
            if (!splits) throw std::logic_error("R_lambda^+ not generated by Pi_lambda");
        }
        sys.l_lambda.assign(ext_->size(), 0);
        for (int g = 0; g < ext_->size(); ++g) {
            int c = 0;
            for (int r : sys.r_lambda_plus)
                if (!d.is_positive(ext_->act_on_root(g, r))) ++c;
            sys.l_lambda[g] = c;
        }
        for (int g = 0; g < ext_->size(); ++g)
            if (act(g, lam) == lam) sys.stabilizer.push_back(g);
        for (int g : sys.stabilizer)
            if (sys.l_lambda[g] == 0) sys.omega.push_back(g);
        // the stabilizer is the internal semidirect product Omega . W_lambda
        for (int g : sys.stabilizer) {
            int factorizations = 0;
            for (int om : sys.omega)
                for (int w : sys.w_lambda)
                    if (ext_->mult(om, ext_->make(0, w)) == g) ++factorizations;
            if (factorizations != 1)
                throw std::logic_error("W^D_lambda is not Omega x| W_lambda");
        }
        // ShortLex words of W_lambda over I_lambda (generator order = pi order).
        sys.coxeter_words[0] = {};
        std::vector<int> frontier{0};
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int w : frontier) {
                for (size_t gi = 0; gi < sys.i_lambda.size(); ++gi) {
                    int e = weyl().mult(w, sys.i_lambda[gi]);
                    if (sys.coxeter_words.count(e)) continue;
                    auto word = sys.coxeter_words[w];
                    word.push_back(static_cast<int>(gi));
                    sys.coxeter_words[e] = std::move(word);
                    next.push_back(e);
                }
            }
            frontier = std::move(next);
        }
        return sys;
    }

    const ExtWeyl* ext_;
    int n_;
    int rank_;
    int count_;
    std::vector<std::vector<int>> action_;       // [ext elt][lambda]
    std::vector<std::vector<char>> simple_zero_; // [s][lambda]
    mutable std::mutex mu_;
    mutable std::map<int, LambdaSystem> systems_;
};

}  // namespace heckelab
