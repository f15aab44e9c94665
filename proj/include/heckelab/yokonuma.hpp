#pragma once

// The concrete finite realization for GL_2 over a tiny prime field: the
// convolution algebra of U,U-biinvariant functions on GL_2(F_q)^F with its
// k_nu basis, the characters theta^lambda_F, the embedded Hecke elements
// T_w 1_lambda, the isomorphism with H_{q-1} at v^2 = q, and the twisted
// conjugation identity on the coset space P.

#include "heckelab/cyclo.hpp"
#include "heckelab/hecke.hpp"

#include <array>
#include <map>
#include <optional>
#include <vector>

namespace heckelab {

class FiniteGL {
public:
    explicit FiniteGL(int q) : q_(q) {
        if (q != 2 && q != 3 && q != 5)
            throw std::invalid_argument("finite model supports prime q in {2, 3, 5}");
        build_elements();
        build_subgroups();
        build_cosets();
        field_ = Cyclo::make_field(std::lcm(4, q_ - 1));
        build_theta();
    }

    int q() const { return q_; }
    int size() const { return static_cast<int>(elems_.size()); }
    const std::shared_ptr<const CycloField>& field() const { return field_; }

    int mult(int a, int b) const { return mult_[a][b]; }
    int inverse(int a) const { return inv_[a]; }
    int unit() const { return unit_; }

    const std::vector<int>& torus() const { return torus_; }
    const std::vector<int>& unipotent() const { return unipotent_; }
    const std::vector<int>& monomials() const { return monomials_; }  // (N_{G0} T)^F
    int monomial_index(int g) const {
        auto it = mono_pos_.find(g);
        if (it == mono_pos_.end()) throw std::invalid_argument("element is not monomial");
        return it->second;
    }
    int double_coset_of(int g) const { return dcoset_of_[g]; }

    // pinning
    int x_s(int a) const { return index_of({1, mod(a), 0, 1}); }
    int coroot_s(int a) const { return index_of({mod(a), 0, 0, mod_inv(a)}); }
    int torus_elt(int t1, int t2) const { return index_of({mod(t1), 0, 0, mod(t2)}); }
    int s_dot() const { return sdot_; }

    // theta^lambda_F on T^F, for lambda in (Z/(q-1))^2 via the fixed generator.
    Cyclo theta(const std::vector<int>& lam, int t) const {
        auto [t1, t2] = diag_entries(t);
        int n = q_ - 1;
        long e = (static_cast<long>(lam[0]) * dlog_[t1] + static_cast<long>(lam[1]) * dlog_[t2]) % n;
        return Cyclo::root_of_unity(field_, field_->m / n * e);
    }
    int generator() const { return gen_; }

    // outer automorphism g -> J (g^T)^-1 J^-1 with J = [[0,1],[-1,0]]
    int sigma(int g) const { return sigma_[g]; }
    // t_{d,w} = ((eps_D(w)) dot)^-1 d wdot d^-1 for the outer component; here
    // eps_D is trivial on W and d = sigma.
    int t_d_w_outer(int w_is_s) const {
        int wd = w_is_s ? sdot_ : unit_;
        return mult(inv_[wd], sigma_[wd]);
    }

    // left U-cosets (the space P is functions on them)
    int num_left_cosets() const { return static_cast<int>(coset_reps_.size()); }
    int left_coset_of(int g) const { return lcoset_of_[g]; }
    int left_coset_rep(int i) const { return coset_reps_[i]; }

    // Borel subgroups (parabolic type J = empty), as sorted element sets
    const std::vector<std::vector<int>>& borels() const { return borels_; }

private:
    int mod(long a) const { return static_cast<int>(((a % q_) + q_) % q_); }
    int mod_inv(long a) const {
        int am = mod(a);
        if (am == 0) throw std::invalid_argument("not invertible");
        for (int b = 1; b < q_; ++b)
            if (am * b % q_ == 1) return b;
        throw std::logic_error("inverse not found");
    }

    int index_of(const std::array<int, 4>& m) const {
        auto it = pos_.find(m);
        if (it == pos_.end()) throw std::invalid_argument("matrix is not invertible");
        return it->second;
    }

    std::pair<int, int> diag_entries(int t) const {
        const auto& m = elems_[t];
        if (m[1] != 0 || m[2] != 0) throw std::invalid_argument("element is not in T");
        return {m[0], m[3]};
    }

    void build_elements() {
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b)
                for (int c = 0; c < q_; ++c)
                    for (int d = 0; d < q_; ++d) {
                        if (mod(a * d - b * c) == 0) continue;
                        std::array<int, 4> m{a, b, c, d};
                        pos_[m] = static_cast<int>(elems_.size());
                        elems_.push_back(m);
                    }
        int n = size();
        mult_.assign(n, std::vector<int>(n));
        for (int x = 0; x < n; ++x) {
            const auto& a = elems_[x];
            for (int y = 0; y < n; ++y) {
                const auto& b = elems_[y];
                std::array<int, 4> p{mod(a[0] * b[0] + a[1] * b[2]), mod(a[0] * b[1] + a[1] * b[3]),
                                     mod(a[2] * b[0] + a[3] * b[2]), mod(a[2] * b[1] + a[3] * b[3])};
                mult_[x][y] = pos_.at(p);
            }
        }
        unit_ = index_of({1, 0, 0, 1});
        inv_.assign(n, -1);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (mult_[x][y] == unit_) inv_[x] = y;
        sigma_.assign(n, -1);
        int J = index_of({0, 1, mod(-1), 0});
        for (int x = 0; x < n; ++x) {
            const auto& m = elems_[x];
            int det_inv = mod_inv(m[0] * m[3] - m[1] * m[2]);
            // (m^T)^-1 = det^-1 [[d, -c], [-b, a]]^T entries
            std::array<int, 4> ti{mod(m[3] * det_inv), mod(-m[2] * det_inv),
                                  mod(-m[1] * det_inv), mod(m[0] * det_inv)};
            sigma_[x] = mult_[mult_[J][pos_.at(ti)]][inv_[J]];
        }
    }

    void build_subgroups() {
        for (int t1 = 1; t1 < q_; ++t1)
            for (int t2 = 1; t2 < q_; ++t2) torus_.push_back(torus_elt(t1, t2));
        std::sort(torus_.begin(), torus_.end());
        for (int a = 0; a < q_; ++a) unipotent_.push_back(x_s(a));
        std::sort(unipotent_.begin(), unipotent_.end());
        for (int x = 0; x < size(); ++x) {
            const auto& m = elems_[x];
            bool diag = m[1] == 0 && m[2] == 0;
            bool anti = m[0] == 0 && m[3] == 0;
            if (diag || anti) monomials_.push_back(x);
        }
        std::sort(monomials_.begin(), monomials_.end());
        for (size_t i = 0; i < monomials_.size(); ++i) mono_pos_[monomials_[i]] = static_cast<int>(i);
        // s dot = x_s(1) y x_s(1) with y in the opposite root subgroup; solve
        // for the unique y making the product monomial.
        sdot_ = -1;
        for (int c = 1; c < q_; ++c) {
            int y = index_of({1, 0, c, 1});
            int cand = mult_[mult_[x_s(1)][y]][x_s(1)];
            if (mono_pos_.count(cand)) {
                if (sdot_ >= 0) throw std::logic_error("s dot is not unique");
                sdot_ = cand;
            }
        }
        if (sdot_ < 0) throw std::logic_error("no monomial x_s(1) y x_s(1)");
        // expected sizes
        if (static_cast<int>(unipotent_.size()) != q_) throw std::logic_error("|U| != q");
        if (static_cast<int>(torus_.size()) != (q_ - 1) * (q_ - 1))
            throw std::logic_error("|T^F| != (q-1)^2");
        if (static_cast<int>(monomials_.size()) != 2 * (q_ - 1) * (q_ - 1))
            throw std::logic_error("|N T| != 2 (q-1)^2");
    }

    void build_cosets() {
        int n = size();
        dcoset_of_.assign(n, -1);
        for (size_t i = 0; i < monomials_.size(); ++i)
            for (int u1 : unipotent_)
                for (int u2 : unipotent_) {
                    int g = mult_[mult_[u1][monomials_[i]]][u2];
                    if (dcoset_of_[g] >= 0 && dcoset_of_[g] != static_cast<int>(i))
                        throw std::logic_error("double cosets are not disjoint");
                    dcoset_of_[g] = static_cast<int>(i);
                }
        for (int g = 0; g < n; ++g)
            if (dcoset_of_[g] < 0) throw std::logic_error("element missed by the Bruhat cells");
        lcoset_of_.assign(n, -1);
        for (int g = 0; g < n; ++g) {
            if (lcoset_of_[g] >= 0) continue;
            int id = static_cast<int>(coset_reps_.size());
            coset_reps_.push_back(g);
            for (int u : unipotent_) lcoset_of_[mult_[g][u]] = id;
        }
        // Borel subgroups: conjugates of upper-triangular B*
        std::vector<int> bstar;
        for (int x = 0; x < size(); ++x)
            if (elems_[x][2] == 0) bstar.push_back(x);
        std::sort(bstar.begin(), bstar.end());
        std::vector<std::vector<int>> seen;
        for (int g = 0; g < size(); ++g) {
            std::vector<int> conj;
            for (int b : bstar) conj.push_back(mult_[mult_[g][b]][inv_[g]]);
            std::sort(conj.begin(), conj.end());
            if (std::find(seen.begin(), seen.end(), conj) == seen.end()) seen.push_back(conj);
        }
        std::sort(seen.begin(), seen.end());
        borels_ = std::move(seen);
    }

    void build_theta() {
        // least primitive root of F_q^*
        int n = q_ - 1;
        gen_ = 1;
        for (int g = 1; g < q_; ++g) {
            int ord = 1, x = g;
            while (x != 1) { x = x * g % q_; ++ord; }
            if (ord == n) { gen_ = g; break; }
        }
        dlog_.assign(q_, 0);
        int x = 1;
        for (int e = 0; e < n; ++e) {
            dlog_[x] = e;
            x = x * gen_ % q_;
        }
    }

    int q_;
    std::vector<std::array<int, 4>> elems_;
    std::map<std::array<int, 4>, int> pos_;
    std::vector<std::vector<int>> mult_;
    std::vector<int> inv_, sigma_;
    int unit_ = 0, sdot_ = -1, gen_ = 1;
    std::vector<int> torus_, unipotent_, monomials_;
    std::map<int, int> mono_pos_;
    std::vector<int> dcoset_of_, lcoset_of_, coset_reps_;
    std::vector<std::vector<int>> borels_;
    std::vector<int> dlog_;
    std::shared_ptr<const CycloField> field_;
};

// Function on G^{0F} constant on U,U double cosets: coefficients on k_nu.
class DoubleCosetFn {
public:
    explicit DoubleCosetFn(const FiniteGL& model)
        : model_(&model), coeff_(model.monomials().size(), Cyclo::zero(model.field())) {}

    static DoubleCosetFn k_basis(const FiniteGL& m, int nu_index) {
        DoubleCosetFn f(m);
        f.coeff_[nu_index] = Cyclo::one(m.field());
        return f;
    }
    static DoubleCosetFn unit(const FiniteGL& m) {
        return k_basis(m, m.monomial_index(m.unit()));
    }

    const FiniteGL& model() const { return *model_; }
    const std::vector<Cyclo>& coeffs() const { return coeff_; }
    Cyclo& at(int nu) { return coeff_[nu]; }
    const Cyclo& at(int nu) const { return coeff_[nu]; }
    bool is_zero() const {
        for (auto& c : coeff_)
            if (!c.is_zero()) return false;
        return true;
    }

    friend DoubleCosetFn operator+(DoubleCosetFn a, const DoubleCosetFn& b) {
        for (size_t i = 0; i < a.coeff_.size(); ++i) a.coeff_[i] += b.coeff_[i];
        return a;
    }
    friend DoubleCosetFn operator-(DoubleCosetFn a, const DoubleCosetFn& b) {
        for (size_t i = 0; i < a.coeff_.size(); ++i) a.coeff_[i] -= b.coeff_[i];
        return a;
    }
    friend DoubleCosetFn operator*(const Cyclo& s, DoubleCosetFn f) {
        for (auto& c : f.coeff_) c *= s;
        return f;
    }
    friend bool operator==(const DoubleCosetFn& a, const DoubleCosetFn& b) {
        return a.coeff_ == b.coeff_;
    }
    friend bool operator!=(const DoubleCosetFn& a, const DoubleCosetFn& b) { return !(a == b); }

    // value at a group element
    Cyclo value(int g) const { return coeff_[model_->double_coset_of(g)]; }

    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < coeff_.size(); ++i) {
            if (coeff_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += coeff_[i].to_string() + "*k[" + std::to_string(i) + "]";
        }
        return s.empty() ? "0" : s;
    }

private:
    const FiniteGL* model_;
    std::vector<Cyclo> coeff_;
};

// Convolution with the |U|^-1 normalization; structure constants are cached
// integers (their integrality is checked once).
class Convolver {
public:
    explicit Convolver(const FiniteGL& m) : model_(&m) {
        int nn = static_cast<int>(m.monomials().size());
        table_.assign(nn, std::vector<std::map<int, long>>(nn));
        int usz = static_cast<int>(m.unipotent().size());
        // members of each double coset
        std::vector<std::vector<int>> members(nn);
        for (int g = 0; g < m.size(); ++g) members[m.double_coset_of(g)].push_back(g);
        for (int n1 = 0; n1 < nn; ++n1)
            for (int n2 = 0; n2 < nn; ++n2) {
                std::map<int, long> counts;  // target coset -> #pairs landing on its rep
                for (int n3 = 0; n3 < nn; ++n3) {
                    int rep = m.monomials()[n3];
                    long cnt = 0;
                    for (int g1 : members[n1])
                        if (m.double_coset_of(m.mult(m.inverse(g1), rep)) == n2) ++cnt;
                    if (cnt != 0) {
                        if (cnt % usz != 0)
                            throw std::logic_error("convolution structure constant not integral");
                        counts[n3] = cnt / usz;
                    }
                }
                table_[n1][n2] = std::move(counts);
            }
    }

    DoubleCosetFn convolve(const DoubleCosetFn& a, const DoubleCosetFn& b) const {
        DoubleCosetFn out(*model_);
        int nn = static_cast<int>(model_->monomials().size());
        for (int n1 = 0; n1 < nn; ++n1) {
            if (a.at(n1).is_zero()) continue;
            for (int n2 = 0; n2 < nn; ++n2) {
                if (b.at(n2).is_zero()) continue;
                Cyclo prod = a.at(n1) * b.at(n2);
                for (auto& [n3, c] : table_[n1][n2])
                    out.at(n3) += prod * Cyclo::from_rational(model_->field(), Rat(c));
            }
        }
        return out;
    }

private:
    const FiniteGL* model_;
    std::vector<std::vector<std::map<int, long>>> table_;
};

// The embedded Hecke elements.
class YokonumaEmbedding {
public:
    YokonumaEmbedding(const FiniteGL& m, const Convolver& conv) : model_(&m), conv_(&conv) {}

    int n() const { return model_->q() - 1; }
    // characters indexed lexicographically as (lam1, lam2) in (Z/(q-1))^2
    int num_chars() const { return n() * n(); }
    std::vector<int> char_of(int idx) const { return {idx / n(), idx % n()}; }

    // 1_lambda = |T^F|^-1 sum_t theta^lambda(t) k_t
    DoubleCosetFn one_lam(int lam_idx) const {
        auto lam = char_of(lam_idx);
        DoubleCosetFn f(*model_);
        Cyclo norm = Cyclo::from_rational(model_->field(),
                                          Rat(1, static_cast<long>(model_->torus().size())));
        for (int t : model_->torus())
            f.at(model_->monomial_index(t)) += norm * model_->theta(lam, t);
        return f;
    }

    // sqrt of theta^lambda(coroot(-1)): only 1 and -1 occur; sqrt(-1) = zeta_4.
    Cyclo sqrt_theta_coroot_m1(int lam_idx) const {
        auto lam = char_of(lam_idx);
        Cyclo val = model_->theta(lam, model_->coroot_s(-1));
        auto F = model_->field();
        if (val == Cyclo::one(F)) return Cyclo::one(F);
        if (val == -Cyclo::one(F)) return Cyclo::primitive_root(F, 4);
        throw std::logic_error("theta(coroot(-1)) is not +-1");
    }

    // T_w for w in {1, s}; T_s = k_sdot sum_lam sqrt(theta(coroot(-1))) 1_lam.
    DoubleCosetFn T_w(bool is_s) const {
        if (!is_s) return DoubleCosetFn::unit(*model_);
        DoubleCosetFn acc(*model_);
        for (int lam = 0; lam < num_chars(); ++lam)
            acc = acc + sqrt_theta_coroot_m1(lam) * one_lam(lam);
        return conv_->convolve(DoubleCosetFn::k_basis(*model_, model_->monomial_index(model_->s_dot())),
                               acc);
    }
    DoubleCosetFn T_w_one_lam(bool is_s, int lam_idx) const {
        return conv_->convolve(T_w(is_s), one_lam(lam_idx));
    }

    // s lambda = (lam2, lam1); uD lambda = (-lam2, -lam1) for the outer twist.
    int s_char(int lam_idx) const {
        auto lam = char_of(lam_idx);
        return lam[1] * n() + lam[0];
    }
    int uD_char(int lam_idx) const {
        auto lam = char_of(lam_idx);
        int a = (n() - lam[1]) % n(), b = (n() - lam[0]) % n();
        return a * n() + b;
    }

private:
    const FiniteGL* model_;
    const Convolver* conv_;
};

// Operators on the coset space P (functions on G/U) over the cyclotomic field.
class CosetOperators {
public:
    explicit CosetOperators(const FiniteGL& m) : model_(&m), dim_(m.num_left_cosets()) {}

    using Matrix = std::vector<std::vector<Cyclo>>;

    Matrix zero() const {
        return Matrix(dim_, std::vector<Cyclo>(dim_, Cyclo::zero(model_->field())));
    }
    // (c f)(x) = |U|^-1 sum_{x'} c(x') f(x x')
    Matrix action(const DoubleCosetFn& c) const {
        Matrix M = zero();
        Cyclo norm = Cyclo::from_rational(model_->field(),
                                          Rat(1, static_cast<long>(model_->unipotent().size())));
        for (int i = 0; i < dim_; ++i) {
            int xi = model_->left_coset_rep(i);
            for (int g = 0; g < model_->size(); ++g) {
                Cyclo cv = c.value(g);
                if (cv.is_zero()) continue;
                int j = model_->left_coset_of(model_->mult(xi, g));
                M[i][j] += norm * cv;
            }
        }
        return M;
    }
    // rho_{g,g'} f (x) = f(g^-1 x g') is a coset permutation when g, g'
    // normalize U; store it as p with (rho f)(x_i) = f(x_{p(i)}).
    std::vector<int> perm_outer() const {
        std::vector<int> p(dim_);
        for (int i = 0; i < dim_; ++i)
            p[i] = model_->left_coset_of(model_->sigma(model_->left_coset_rep(i)));
        return p;
    }
    std::vector<int> perm_torus(int t) const {
        std::vector<int> p(dim_);
        for (int i = 0; i < dim_; ++i)
            p[i] = model_->left_coset_of(
                model_->mult(model_->mult(model_->inverse(t), model_->left_coset_rep(i)), t));
        return p;
    }
    // the same permutations as explicit 0/1 matrices
    Matrix perm_matrix(const std::vector<int>& p) const {
        Matrix M = zero();
        for (int i = 0; i < dim_; ++i) M[i][p[i]] = Cyclo::one(model_->field());
        return M;
    }
    Matrix rho_outer() const { return perm_matrix(perm_outer()); }
    Matrix rho_torus(int t) const { return perm_matrix(perm_torus(t)); }

    // rho_p . A . rho_p2 in index form: [i][j] = A[p(i)][p2^-1(j)].
    Matrix conjugate(const Matrix& A, const std::vector<int>& p,
                     const std::vector<int>& p2) const {
        std::vector<int> p2inv(dim_);
        for (int l = 0; l < dim_; ++l) p2inv[p2[l]] = l;
        Matrix M = zero();
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) M[i][j] = A[p[i]][p2inv[j]];
        return M;
    }

    // Borel containing the coset: the index of x B* x^-1 among the Borels.
    int borel_of_coset(int i) const {
        int x = model_->left_coset_rep(i);
        std::vector<int> conj;
        for (int t : model_->torus())
            for (int u : model_->unipotent())
                conj.push_back(model_->mult(model_->mult(x, model_->mult(t, u)),
                                            model_->inverse(x)));
        std::sort(conj.begin(), conj.end());
        for (size_t q = 0; q < model_->borels().size(); ++q)
            if (model_->borels()[q] == conj) return static_cast<int>(q);
        throw std::logic_error("coset Borel not found");
    }
    // pr_Q for a Borel Q: diagonal indicator of x B* x^-1 = Q.
    Matrix pr_borel(const std::vector<int>& Q) const {
        Matrix M = zero();
        for (int i = 0; i < dim_; ++i)
            if (model_->borels()[borel_of_coset(i)] == Q) M[i][i] = Cyclo::one(model_->field());
        return M;
    }
    // sum over Borels Q of pr_Q A pr_Q: mask to entries in a common Borel.
    Matrix borel_block_diagonal(const Matrix& A) const {
        std::vector<int> bo(dim_);
        for (int i = 0; i < dim_; ++i) bo[i] = borel_of_coset(i);
        Matrix M = zero();
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                if (bo[i] == bo[j]) M[i][j] = A[i][j];
        return M;
    }

    // f then g: (g . f)(v) = g(f(v)) as matrices acting on row index
    Matrix compose(const Matrix& A, const Matrix& B) const {
        // our convention: M[i][j] = coefficient of basis j in image of basis-eval
        // at coset i; operator composition (A then B) is matrix product A * B.
        Matrix M = zero();
        for (int i = 0; i < dim_; ++i)
            for (int k = 0; k < dim_; ++k) {
                if (A[i][k].is_zero()) continue;
                for (int j = 0; j < dim_; ++j)
                    if (!B[k][j].is_zero()) M[i][j] += A[i][k] * B[k][j];
            }
        return M;
    }
    int dim() const { return dim_; }

private:
    const FiniteGL* model_;
    int dim_;
};

struct YokonumaReport {
    bool sizes = false;          // |G|, |U|, |T|, |N|, Bruhat cell count
    bool k_relations = false;    // quadratic + length-additive k products
    bool associativity = false;  // exhaustive triples on the k-basis
    bool idempotents = false;    // 1_lam orthogonal, summing to k_1
    bool commutation = false;    // T_w 1_lam = 1_{w lam} T_w
    bool quadratic_T = false;    // T_s^2 = q + (q-1) sum T_s 1_lam
    bool full_rank = false;      // embedded T_w 1_lam span T
    bool structure_match = false;  // products match H_{q-1} at v^2 = q
    bool faithful = false;       // the action on P is injective
    std::vector<std::string> failures;
    bool all() const {
        return sizes && k_relations && associativity && idempotents && commutation &&
               quadratic_T && full_rank && structure_match && faithful;
    }
};

namespace detail {

// Gaussian elimination rank over the cyclotomic field.
inline int cyclo_rank(std::vector<std::vector<Cyclo>> m) {
    if (m.empty()) return 0;
    int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (!m[r][col].is_zero()) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(m[piv], m[rank]);
        Cyclo inv = m[rank][col].inverse();
        for (int c = col; c < cols; ++c) m[rank][c] *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][col].is_zero()) continue;
            Cyclo f = m[r][col];
            for (int c = col; c < cols; ++c)
                if (!m[rank][c].is_zero()) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

// Inverse of a square matrix over the field.
inline std::vector<std::vector<Cyclo>> cyclo_invert(std::vector<std::vector<Cyclo>> a,
                                                    const std::shared_ptr<const CycloField>& F) {
    int n = static_cast<int>(a.size());
    std::vector<std::vector<Cyclo>> inv(n, std::vector<Cyclo>(n, Cyclo::zero(F)));
    for (int i = 0; i < n; ++i) inv[i][i] = Cyclo::one(F);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!a[r][col].is_zero()) { piv = r; break; }
        if (piv < 0) throw std::logic_error("singular system");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Cyclo f = a[col][col].inverse();
        for (int c = 0; c < n; ++c) {
            a[col][c] *= f;
            inv[col][c] *= f;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            Cyclo fr = a[r][col];
            for (int c = 0; c < n; ++c) {
                if (!a[col][c].is_zero()) a[r][c] -= fr * a[col][c];
                if (!inv[col][c].is_zero()) inv[r][c] -= fr * inv[col][c];
            }
        }
    }
    return inv;
}

}  // namespace detail

// The root datum of GL_2: X = Y = Z^2, alpha = alpha^vee = (1, -1).
inline RootDatum gl2_root_datum() {
    return build_root_datum({{1, -1}}, {{1, -1}});
}

// The Yokonuma relations and the isomorphism with H_{q-1} at v^2 = q, by
// direct convolution against a Hecke context on the GL_2 root datum.
inline YokonumaReport yokonuma_checks(const FiniteGL& m, const Convolver& conv,
                                      const HeckeCtx& hctx) {
    YokonumaReport rep;
    auto fail = [&rep](const std::string& s) { rep.failures.push_back(s); };
    int q = m.q();
    auto F = m.field();
    YokonumaEmbedding emb(m, conv);

    rep.sizes = m.size() == (q * q - 1) * (q * q - q) &&
                static_cast<int>(m.unipotent().size()) == q &&
                static_cast<int>(m.torus().size()) == (q - 1) * (q - 1) &&
                static_cast<int>(m.monomials().size()) == 2 * (q - 1) * (q - 1);
    if (!rep.sizes) fail("group/subgroup sizes are off");

    // k_sdot^2 = q k_{coroot(-1)} + sum_a k_{sdot coroot(a)}
    {
        int sd = m.monomial_index(m.s_dot());
        DoubleCosetFn lhs = conv.convolve(DoubleCosetFn::k_basis(m, sd),
                                          DoubleCosetFn::k_basis(m, sd));
        DoubleCosetFn rhs(m);
        rhs.at(m.monomial_index(m.coroot_s(-1))) = Cyclo::from_rational(F, Rat(q));
        for (int a = 1; a < q; ++a)
            rhs.at(m.monomial_index(m.mult(m.s_dot(), m.coroot_s(a)))) += Cyclo::one(F);
        rep.k_relations = lhs == rhs;
        // k_nu k_nu' = k_{nu nu'} when lengths add (one factor diagonal)
        for (size_t i = 0; i < m.monomials().size() && rep.k_relations; ++i)
            for (size_t j = 0; j < m.monomials().size(); ++j) {
                int ni = m.monomials()[i], nj = m.monomials()[j];
                bool diag_i =
                    std::find(m.torus().begin(), m.torus().end(), ni) != m.torus().end();
                bool diag_j =
                    std::find(m.torus().begin(), m.torus().end(), nj) != m.torus().end();
                if (!diag_i && !diag_j) continue;
                DoubleCosetFn prod = conv.convolve(DoubleCosetFn::k_basis(m, static_cast<int>(i)),
                                                   DoubleCosetFn::k_basis(m, static_cast<int>(j)));
                if (prod != DoubleCosetFn::k_basis(m, m.monomial_index(m.mult(ni, nj)))) {
                    rep.k_relations = false;
                    fail("length-additive k product fails");
                    break;
                }
            }
        if (!rep.k_relations && rep.failures.empty()) fail("Yokonuma quadratic relation fails");
    }

    // associativity, exhaustive on the k-basis
    {
        rep.associativity = true;
        int nn = static_cast<int>(m.monomials().size());
        for (int a = 0; a < nn && rep.associativity; ++a)
            for (int b = 0; b < nn && rep.associativity; ++b)
                for (int c = 0; c < nn; ++c) {
                    DoubleCosetFn ka = DoubleCosetFn::k_basis(m, a), kb = DoubleCosetFn::k_basis(m, b),
                                  kc = DoubleCosetFn::k_basis(m, c);
                    if (conv.convolve(conv.convolve(ka, kb), kc) !=
                        conv.convolve(ka, conv.convolve(kb, kc))) {
                        rep.associativity = false;
                        fail("convolution is not associative");
                        break;
                    }
                }
        // unit
        for (int a = 0; a < nn && rep.associativity; ++a) {
            DoubleCosetFn ka = DoubleCosetFn::k_basis(m, a);
            if (conv.convolve(DoubleCosetFn::unit(m), ka) != ka ||
                conv.convolve(ka, DoubleCosetFn::unit(m)) != ka) {
                rep.associativity = false;
                fail("k_1 is not the unit");
            }
        }
    }

    // idempotents
    {
        rep.idempotents = true;
        DoubleCosetFn sum(m);
        for (int lam = 0; lam < emb.num_chars(); ++lam) {
            DoubleCosetFn e = emb.one_lam(lam);
            sum = sum + e;
            for (int mu = 0; mu < emb.num_chars(); ++mu) {
                DoubleCosetFn prod = conv.convolve(e, emb.one_lam(mu));
                DoubleCosetFn expect = lam == mu ? e : DoubleCosetFn(m);
                if (prod != expect) {
                    rep.idempotents = false;
                    fail("1_lam are not orthogonal idempotents");
                }
            }
        }
        if (sum != DoubleCosetFn::unit(m)) {
            rep.idempotents = false;
            fail("sum of 1_lam is not k_1");
        }
    }

    // T_w 1_lam = 1_{w lam} T_w
    {
        rep.commutation = true;
        for (int lam = 0; lam < emb.num_chars(); ++lam)
            for (bool is_s : {false, true}) {
                DoubleCosetFn lhs = conv.convolve(emb.T_w(is_s), emb.one_lam(lam));
                int wl = is_s ? emb.s_char(lam) : lam;
                DoubleCosetFn rhs = conv.convolve(emb.one_lam(wl), emb.T_w(is_s));
                if (lhs != rhs) {
                    rep.commutation = false;
                    fail("T_w 1_lam != 1_{w lam} T_w");
                }
            }
    }

    // T_s^2 = q + (q-1) sum_{lam : theta coroot = 1} T_s 1_lam
    {
        DoubleCosetFn ts = emb.T_w(true);
        DoubleCosetFn lhs = conv.convolve(ts, ts);
        DoubleCosetFn rhs = Cyclo::from_rational(F, Rat(q)) * DoubleCosetFn::unit(m);
        for (int lam = 0; lam < emb.num_chars(); ++lam) {
            auto lv = emb.char_of(lam);
            if ((lv[0] - lv[1]) % (q - 1) != 0) continue;  // theta^lam coroot != 1
            rhs = rhs + Cyclo::from_rational(F, Rat(q - 1)) * emb.T_w_one_lam(true, lam);
        }
        rep.quadratic_T = lhs == rhs;
        if (!rep.quadratic_T) fail("T_s^2 relation fails");
        // per-lambda versions
        for (int lam = 0; lam < emb.num_chars() && rep.quadratic_T; ++lam) {
            auto lv = emb.char_of(lam);
            DoubleCosetFn l = conv.convolve(ts, emb.T_w_one_lam(true, lam));
            DoubleCosetFn r = Cyclo::from_rational(F, Rat(q)) * emb.one_lam(lam);
            if ((lv[0] - lv[1]) % (q - 1) == 0)
                r = r + Cyclo::from_rational(F, Rat(q - 1)) * emb.T_w_one_lam(true, lam);
            if (l != r) {
                rep.quadratic_T = false;
                fail("per-lambda T_s^2 relation fails");
            }
        }
    }

    // embedded basis: full rank, and structure constants match H_{q-1} at v^2 = q
    {
        int nl = emb.num_chars();
        int dim = 2 * nl;
        int nn = static_cast<int>(m.monomials().size());
        if (dim != nn) throw std::logic_error("dim T != |W| (q-1)^2");
        std::vector<std::vector<Cyclo>> E(nn, std::vector<Cyclo>(dim, Cyclo::zero(F)));
        std::vector<DoubleCosetFn> basis;
        for (int w = 0; w < 2; ++w)
            for (int lam = 0; lam < nl; ++lam) basis.push_back(emb.T_w_one_lam(w == 1, lam));
        for (int j = 0; j < dim; ++j)
            for (int nu = 0; nu < nn; ++nu) E[nu][j] = basis[j].at(nu);
        rep.full_rank = detail::cyclo_rank(E) == dim;
        if (!rep.full_rank) fail("embedded T_w 1_lam do not span");

        const WeylGroup& W = hctx.weyl();
        const ExtWeyl& X = hctx.ext();
        int s = W.simple_reflection(0);
        auto to_cyclo_vsq_q = [&](const Laurent& p) {
            // even-exponent Laurent polynomial evaluated at v^2 = q
            Cyclo acc = Cyclo::zero(F);
            for (auto& [k, c] : p.coeffs()) {
                if (k % 2 != 0) throw std::logic_error("coefficient is not Laurent in v^2");
                Rat val(1);
                for (int i = 0; i < std::abs(k) / 2; ++i) val *= q;
                if (k < 0) val = Rat(1) / val;
                acc += Cyclo::from_rational(F, Rat(c) * val);
            }
            return acc;
        };
        rep.structure_match = true;
        auto Einv = detail::cyclo_invert(E, F);
        for (int w1 = 0; w1 < 2 && rep.structure_match; ++w1)
            for (int l1 = 0; l1 < nl && rep.structure_match; ++l1)
                for (int w2 = 0; w2 < 2 && rep.structure_match; ++w2)
                    for (int l2 = 0; l2 < nl; ++l2) {
                        HeckeElt h = HeckeElt::std_basis_T(hctx, X.make(0, w1 == 1 ? s : 0), l1) *
                                     HeckeElt::std_basis_T(hctx, X.make(0, w2 == 1 ? s : 0), l2);
                        DoubleCosetFn t = conv.convolve(basis[w1 * nl + l1], basis[w2 * nl + l2]);
                        std::vector<Cyclo> coords(dim, Cyclo::zero(F));
                        for (int nu = 0; nu < nn; ++nu) {
                            if (t.at(nu).is_zero()) continue;
                            for (int j = 0; j < dim; ++j)
                                if (!Einv[j][nu].is_zero()) coords[j] += Einv[j][nu] * t.at(nu);
                        }
                        for (int w3 = 0; w3 < 2 && rep.structure_match; ++w3)
                            for (int l3 = 0; l3 < nl; ++l3) {
                                Cyclo expect =
                                    to_cyclo_vsq_q(h.coeff_T(X.make(0, w3 == 1 ? s : 0), l3));
                                if (coords[w3 * nl + l3] != expect) {
                                    rep.structure_match = false;
                                    fail("structure constants differ from H_{q-1} at v^2 = q");
                                    break;
                                }
                            }
                    }
    }

    // the action on P is faithful
    {
        CosetOperators ops(m);
        int nn = static_cast<int>(m.monomials().size());
        int d2 = ops.dim() * ops.dim();
        std::vector<std::vector<Cyclo>> flat(nn, std::vector<Cyclo>(d2, Cyclo::zero(F)));
        for (int nu = 0; nu < nn; ++nu) {
            auto M = ops.action(DoubleCosetFn::k_basis(m, nu));
            for (int i = 0; i < ops.dim(); ++i)
                for (int j = 0; j < ops.dim(); ++j) flat[nu][i * ops.dim() + j] = M[i][j];
        }
        rep.faithful = detail::cyclo_rank(flat) == nn;
        if (!rep.faithful) fail("the action on P is not faithful");
    }

    return rep;
}

struct TwistedReport {
    bool t_dw_in_torus = false;
    bool twisted_conjugation = false;  // for all w, lambda_1 (outer d)
    bool inner_case = false;       // d in T^F
    bool parabolic_projection = false;   // J in {empty, I}
    std::vector<std::string> failures;
    bool all() const {
        return t_dw_in_torus && twisted_conjugation && inner_case && parabolic_projection;
    }
};

// Twisted conjugation and the parabolic projection identity on the coset
// space P for the outer-twisted model.
inline TwistedReport twisted_conjugation_check(const FiniteGL& m, const Convolver& conv) {
    TwistedReport rep;
    auto fail = [&rep](const std::string& s) { rep.failures.push_back(s); };
    auto F = m.field();
    YokonumaEmbedding emb(m, conv);
    CosetOperators ops(m);

    // t_{d,w} lies in T^F for w in {1, s}
    {
        rep.t_dw_in_torus = true;
        for (bool is_s : {false, true}) {
            int t = m.t_d_w_outer(is_s);
            if (std::find(m.torus().begin(), m.torus().end(), t) == m.torus().end()) {
                rep.t_dw_in_torus = false;
                fail("t_{d,w} is not in T^F");
            }
        }
    }

    // action matrices of every T_w 1_lam, shared by the checks below
    std::vector<CosetOperators::Matrix> acts[2];
    for (int is_s = 0; is_s < 2; ++is_s)
        for (int lam = 0; lam < emb.num_chars(); ++lam)
            acts[is_s].push_back(ops.action(emb.T_w_one_lam(is_s == 1, lam)));

    // rho_{d,d} (T_w 1_lam) rho_{d^-1,d^-1} = theta^{lam}(d^-1 t_{d,w} d)^-1
    //                                         T_{eps(w)} 1_{uD lam}
    {
        rep.twisted_conjugation = true;
        auto p = ops.perm_outer();  // d = sigma has order 2: both rhos agree
        for (int is_s = 0; is_s < 2; ++is_s)
            for (int lam = 0; lam < emb.num_chars() && rep.twisted_conjugation; ++lam) {
                auto lhs = ops.conjugate(acts[is_s][lam], p, p);
                int t = m.t_d_w_outer(is_s == 1);
                Cyclo scalar = m.theta(emb.char_of(lam), m.sigma(t)).inverse();
                auto rhs = acts[is_s][emb.uD_char(lam)];
                for (auto& row : rhs)
                    for (auto& e : row) e *= scalar;
                if (lhs != rhs) {
                    rep.twisted_conjugation = false;
                    fail("twisted conjugation fails for the outer twist");
                }
            }
        // the permuted form agrees with the literal operator product once
        if (rep.twisted_conjugation) {
            auto rho = ops.rho_outer();
            if (ops.conjugate(acts[1][0], p, p) !=
                ops.compose(rho, ops.compose(acts[1][0], rho))) {
                rep.twisted_conjugation = false;
                fail("permutation conjugation disagrees with the matrix product");
            }
        }
    }

    // inner case: d in T^F
    {
        rep.inner_case = true;
        for (int d : m.torus()) {
            auto p = ops.perm_torus(d);
            auto p_inv = ops.perm_torus(m.inverse(d));
            for (int is_s = 0; is_s < 2; ++is_s)
                for (int lam = 0; lam < emb.num_chars() && rep.inner_case; ++lam) {
                    auto lhs = ops.conjugate(acts[is_s][lam], p, p_inv);
                    // t_{d,w} = (w dot)^-1 d (w dot) d^-1
                    int wd = is_s == 1 ? m.s_dot() : m.unit();
                    int t = m.mult(m.mult(m.inverse(wd), m.mult(d, wd)), m.inverse(d));
                    Cyclo scalar = m.theta(emb.char_of(lam), t).inverse();
                    auto rhs = acts[is_s][lam];
                    for (auto& row : rhs)
                        for (auto& e : row) e *= scalar;
                    if (lhs != rhs) {
                        rep.inner_case = false;
                        fail("twisted conjugation fails for an inner torus twist");
                    }
                }
            if (!rep.inner_case) break;
        }
    }

    // sum_Q pr_Q phi pr_Q = Theta^J(phi) for J = empty and J = I
    {
        rep.parabolic_projection = true;
        for (int is_s = 0; is_s < 2; ++is_s)
            for (int lam = 0; lam < emb.num_chars() && rep.parabolic_projection; ++lam) {
                // J = I: the single parabolic is G^0, pr = identity
                // J = empty: Theta kills T_s terms
                auto acc = ops.borel_block_diagonal(acts[is_s][lam]);
                auto expect = is_s == 1 ? ops.zero() : acts[is_s][lam];
                if (acc != expect) {
                    rep.parabolic_projection = false;
                    fail("parabolic projection fails for J = empty");
                }
            }
        // the block-diagonal mask agrees with the literal projector sum once
        if (rep.parabolic_projection) {
            auto acc = ops.zero();
            for (auto& Q : m.borels()) {
                auto pr = ops.pr_borel(Q);
                auto piece = ops.compose(pr, ops.compose(acts[0][0], pr));
                for (int i = 0; i < ops.dim(); ++i)
                    for (int j = 0; j < ops.dim(); ++j) acc[i][j] += piece[i][j];
            }
            if (acc != ops.borel_block_diagonal(acts[0][0])) {
                rep.parabolic_projection = false;
                fail("projector mask disagrees with the literal projector sum");
            }
        }
    }

    return rep;
}

}  // namespace heckelab
