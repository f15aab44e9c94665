#pragma once

// Character tables of small finite groups over a cyclotomic field, by the
// Dixon variant of Burnside's class-matrix method: common eigenvectors of the
// class matrices over F_p (p = 1 mod exponent), lifted to exact values in
// Q(zeta_m) through discrete logarithms.

#include "heckelab/cyclo.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace heckelab {

// A finite group given by its multiplication table (indices 0..n-1, 0 = id).
struct FiniteGroupData {
    std::vector<std::vector<int>> mult;
    std::vector<int> inverse;
    std::vector<int> cls;                   // element -> class index
    std::vector<std::vector<int>> classes;  // class -> sorted members
    std::vector<int> class_rep;             // class -> least member
    int exponent = 1;

    int size() const { return static_cast<int>(mult.size()); }
    int num_classes() const { return static_cast<int>(classes.size()); }

    static FiniteGroupData from_mult_table(std::vector<std::vector<int>> table) {
        FiniteGroupData g;
        g.mult = std::move(table);
        int n = g.size();
        if (n == 0) throw std::invalid_argument("empty group");
        for (int a = 0; a < n; ++a)
            if (g.mult[0][a] != a || g.mult[a][0] != a)
                throw std::invalid_argument("index 0 is not the identity");
        g.inverse.assign(n, -1);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (g.mult[a][b] == 0) g.inverse[a] = b;
        for (int a = 0; a < n; ++a)
            if (g.inverse[a] < 0) throw std::invalid_argument("not a group: missing inverse");
        // conjugacy classes
        g.cls.assign(n, -1);
        for (int a = 0; a < n; ++a) {
            if (g.cls[a] >= 0) continue;
            int id = g.num_classes();
            std::vector<int> members;
            for (int x = 0; x < n; ++x) {
                int c = g.mult[g.mult[x][a]][g.inverse[x]];
                if (g.cls[c] < 0) {
                    g.cls[c] = id;
                    members.push_back(c);
                }
            }
            std::sort(members.begin(), members.end());
            g.classes.push_back(members);
            g.class_rep.push_back(members.front());
        }
        g.exponent = 1;
        for (int a = 0; a < n; ++a) {
            int ord = 1, x = a;
            while (x != 0) { x = g.mult[x][a]; ++ord; }
            g.exponent = std::lcm(g.exponent, ord);
        }
        return g;
    }

    int order_of(int a) const {
        int ord = 1, x = a;
        while (x != 0) { x = mult[x][a]; ++ord; }
        return ord;
    }
    int power(int a, int e) const {
        int r = 0;
        for (int i = 0; i < e; ++i) r = mult[r][a];
        return r;
    }
};

// The table: one row per irreducible character, values on class representatives.
struct CharacterTable {
    FiniteGroupData group;
    std::shared_ptr<const CycloField> field;
    std::vector<std::vector<Cyclo>> rows;  // rows[chi][class]

    int num_irreps() const { return static_cast<int>(rows.size()); }
    int degree(int chi) const {
        return static_cast<int>(rows[chi][group.cls[0]].rational_value());
    }
    const Cyclo& value(int chi, int element) const { return rows[chi][group.cls[element]]; }
};

namespace detail {

inline long mod_pow(long b, long e, long p) {
    long r = 1;
    b %= p;
    for (; e > 0; e >>= 1) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
    }
    return r;
}
inline long mod_inv(long a, long p) { return mod_pow(((a % p) + p) % p, p - 2, p); }

}  // namespace detail

// Complete irreducible character table; throws if |G| exceeds the bound.
inline CharacterTable char_table(const FiniteGroupData& g,
                                 std::shared_ptr<const CycloField> field,
                                 int size_bound = 10000) {
    int n = g.size();
    if (n > size_bound) throw std::invalid_argument("group exceeds the configured size bound");
    int m = g.exponent;
    if (field->m % m != 0)
        throw std::invalid_argument("field conductor is not divisible by the group exponent");
    int k = g.num_classes();

    // prime p = 1 mod m with p > 2n
    long p = 0;
    for (long cand = ((2L * n + 2) / m + 1) * m + 1;; cand += m) {
        bool prime = cand > 1;
        for (long d = 2; d * d <= cand && prime; ++d)
            if (cand % d == 0) prime = false;
        if (prime) { p = cand; break; }
    }
    // element of order m in F_p^*
    long omega = 0;
    for (long c = 2; c < p; ++c) {
        if (detail::mod_pow(c, m, p) != 1) continue;
        bool primitive = true;
        for (int d = 1; d < m; ++d)
            if (m % d == 0 && detail::mod_pow(c, d, p) == 1) { primitive = false; break; }
        if (primitive) { omega = c; break; }
    }
    if (omega == 0 && m > 1) throw std::logic_error("no element of order m mod p");
    if (m == 1) omega = 1;

    // class matrices: (M_i)_{t,j} = #{x in C_i : x * rep(C_j) in C_t}
    std::vector<std::vector<std::vector<long>>> M(
        k, std::vector<std::vector<long>>(k, std::vector<long>(k, 0)));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int x : g.classes[i]) M[i][g.cls[g.mult[x][g.class_rep[j]]]][j] += 1;

    // split the common eigenspaces over F_p
    std::vector<std::vector<std::vector<long>>> spaces;  // list of bases (rows)
    {
        std::vector<std::vector<long>> full(k, std::vector<long>(k, 0));
        for (int i = 0; i < k; ++i) full[i][i] = 1;
        spaces.push_back(full);
    }
    for (int i = 0; i < k; ++i) {
        std::vector<std::vector<std::vector<long>>> next;
        for (auto& basis : spaces) {
            if (basis.size() == 1) { next.push_back(basis); continue; }
            // restrict M_i to the subspace: compute images and eigenvalues
            // via brute force over candidate eigenvalues in F_p: eigenvalues
            // of M_i are lambda = |C_i| chi(g_i) / chi(1) mod p; they are
            // roots of det(M_i - t I) but scanning all p would be slow, so
            // use the action on the subspace and factor by kernel splitting:
            // for each candidate eigenvalue found from an element vector.
            // Simpler: compute the matrix A of M_i on the basis, then for
            // each t in F_p with ker(A - tI) nonzero, split.
            int d = static_cast<int>(basis.size());
            // solve basis * M_i^T ... we act on row vectors: (v M_i)_t
            auto act = [&](const std::vector<long>& v) {
                std::vector<long> out(k, 0);
                for (int t = 0; t < k; ++t)
                    for (int j = 0; j < k; ++j)
                        out[j] = (out[j] + v[t] * M[i][t][j]) % p;
                return out;
            };
            // matrix of the action in the basis coordinates: need to express
            // act(basis_r) in the basis; the subspace is M_i-invariant.
            std::vector<std::vector<long>> A(d, std::vector<long>(d, 0));
            {
                // Gaussian data for expressing vectors in the basis
                std::vector<std::vector<long>> ext;  // basis rows + identity cols
                for (int r = 0; r < d; ++r) ext.push_back(basis[r]);
                for (int r = 0; r < d; ++r) {
                    std::vector<long> img = act(basis[r]);
                    // solve sum_c x_c basis[c] = img by elimination
                    std::vector<std::vector<long>> mat;
                    for (int c = 0; c < d; ++c) mat.push_back(basis[c]);
                    mat.push_back(img);
                    // transpose-solve: coordinates via least pivot columns
                    std::vector<long> x(d, 0);
                    {
                        // build k x (d+1) system
                        std::vector<std::vector<long>> sys(k, std::vector<long>(d + 1, 0));
                        for (int col = 0; col < d; ++col)
                            for (int row = 0; row < k; ++row) sys[row][col] = basis[col][row] % p;
                        for (int row = 0; row < k; ++row) sys[row][d] = img[row] % p;
                        int rank = 0;
                        std::vector<int> piv;
                        for (int col = 0; col < d && rank < k; ++col) {
                            int sel = -1;
                            for (int row = rank; row < k; ++row)
                                if (sys[row][col] % p != 0) { sel = row; break; }
                            if (sel < 0) throw std::logic_error("basis not independent");
                            std::swap(sys[sel], sys[rank]);
                            long inv = detail::mod_inv(sys[rank][col], p);
                            for (int c2 = 0; c2 <= d; ++c2)
                                sys[rank][c2] = sys[rank][c2] * inv % p;
                            for (int row = 0; row < k; ++row) {
                                if (row == rank || sys[row][col] % p == 0) continue;
                                long f = sys[row][col] % p;
                                for (int c2 = 0; c2 <= d; ++c2)
                                    sys[row][c2] = ((sys[row][c2] - f * sys[rank][c2]) % p + p) % p;
                            }
                            piv.push_back(col);
                            ++rank;
                        }
                        for (int r2 = rank; r2 < k; ++r2)
                            if (sys[r2][d] % p != 0)
                                throw std::logic_error("subspace not invariant under class matrix");
                        for (int r2 = 0; r2 < rank; ++r2) x[piv[r2]] = sys[r2][d];
                    }
                    for (int c = 0; c < d; ++c) A[r][c] = x[c];
                }
            }
            // find eigenvalues by scanning candidates lambda = eigenvalue of A
            // (p is small; d is tiny). ker(A^T - t I) over F_p.
            std::vector<char> used(d, 0);
            std::vector<std::vector<std::vector<long>>> pieces;
            for (long t = 0; t < p; ++t) {
                // kernel of (A - t I) acting on coordinate rows: rows y with
                // y A = t y  (row eigenvectors)
                std::vector<std::vector<long>> mat(d, std::vector<long>(d));
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c)
                        mat[r][c] = ((A[r][c] - (r == c ? t : 0)) % p + p) % p;
                // kernel of mat^T x = 0 -> row vectors y with y*mat = 0
                // compute left null space = null space of transpose
                std::vector<std::vector<long>> tr(d, std::vector<long>(d));
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c) tr[r][c] = mat[c][r];
                // null space of tr
                std::vector<int> pivcol(d, -1);
                int rank = 0;
                for (int col = 0; col < d && rank < d; ++col) {
                    int sel = -1;
                    for (int row = rank; row < d; ++row)
                        if (tr[row][col] != 0) { sel = row; break; }
                    if (sel < 0) continue;
                    std::swap(tr[sel], tr[rank]);
                    long inv = detail::mod_inv(tr[rank][col], p);
                    for (int c2 = 0; c2 < d; ++c2) tr[rank][c2] = tr[rank][c2] * inv % p;
                    for (int row = 0; row < d; ++row) {
                        if (row == rank || tr[row][col] == 0) continue;
                        long f = tr[row][col];
                        for (int c2 = 0; c2 < d; ++c2)
                            tr[row][c2] = ((tr[row][c2] - f * tr[rank][c2]) % p + p) % p;
                    }
                    pivcol[rank] = col;
                    ++rank;
                }
                if (rank == d) continue;  // no kernel
                std::vector<std::vector<long>> kern;
                std::vector<char> ispiv(d, 0);
                for (int r2 = 0; r2 < rank; ++r2) ispiv[pivcol[r2]] = 1;
                for (int freec = 0; freec < d; ++freec) {
                    if (ispiv[freec]) continue;
                    std::vector<long> y(d, 0);
                    y[freec] = 1;
                    for (int r2 = 0; r2 < rank; ++r2)
                        y[pivcol[r2]] = ((-tr[r2][freec]) % p + p) % p;
                    kern.push_back(y);
                }
                // lift kernel coordinate rows to k-dim vectors
                std::vector<std::vector<long>> lifted;
                for (auto& y : kern) {
                    std::vector<long> v(k, 0);
                    for (int c = 0; c < d; ++c)
                        for (int col = 0; col < k; ++col)
                            v[col] = (v[col] + y[c] * basis[c][col]) % p;
                    lifted.push_back(v);
                }
                pieces.push_back(lifted);
            }
            size_t total = 0;
            for (auto& pc : pieces) total += pc.size();
            if (total != static_cast<size_t>(d))
                throw std::logic_error("class matrix failed to act semisimply mod p");
            for (auto& pc : pieces) next.push_back(pc);
        }
        spaces = std::move(next);
        bool all1 = true;
        for (auto& s : spaces) all1 = all1 && s.size() == 1;
        if (all1) break;
    }
    if (spaces.size() != static_cast<size_t>(k))
        throw std::logic_error("could not split the class algebra into lines");

    // characters mod p from the eigenvector lines
    // eigenvalues: lambda_i = |C_i| chi(g_i) / chi(1); recover chi(1) then chi.
    std::vector<std::vector<long>> chis;  // chi(class rep) mod p
    for (auto& line : spaces) {
        const std::vector<long>& v = line[0];
        // normalize so that the identity-class coordinate corresponds to 1:
        // eigenvector v with v M_i = lambda_i v; the identity class has index
        // cls[0]; lambda_i = v'_i / v'_{id} in the dual normalization. The
        // standard recipe: lambda_i = (v M_i)_j / v_j for any j with v_j != 0.
        std::vector<long> lambda(k, 0);
        int j0 = -1;
        for (int j = 0; j < k; ++j)
            if (v[j] % p != 0) { j0 = j; break; }
        for (int i = 0; i < k; ++i) {
            std::vector<long> out(k, 0);
            for (int t = 0; t < k; ++t)
                for (int j = 0; j < k; ++j) out[j] = (out[j] + v[t] * M[i][t][j]) % p;
            lambda[i] = out[j0] * detail::mod_inv(v[j0], p) % p;
        }
        // 1/chi(1)^2 = (1/|G|) sum_i lambda_i lambda_{i*} / |C_i|
        std::vector<int> istar(k);
        for (int i = 0; i < k; ++i) istar[i] = g.cls[g.inverse[g.class_rep[i]]];
        long acc = 0;
        for (int i = 0; i < k; ++i)
            acc = (acc + lambda[i] % p * (lambda[istar[i]] % p) % p *
                             detail::mod_inv(static_cast<long>(g.classes[i].size()), p)) % p;
        acc = acc * detail::mod_inv(n % p, p) % p;
        long d2 = detail::mod_inv(acc, p);  // = chi(1)^2 mod p
        long deg = 0;
        for (long c = 1; c * c <= n; ++c)
            if (c * c % p == d2) { deg = c; break; }
        if (deg == 0) throw std::logic_error("character degree not recovered");
        std::vector<long> chi(k);
        for (int i = 0; i < k; ++i)
            chi[i] = lambda[i] * deg % p *
                     detail::mod_inv(static_cast<long>(g.classes[i].size()), p) % p;
        chis.push_back(chi);
    }

    // lift to Q(zeta_m): chi(g) = sum_t a_t zeta_m^t with
    // a_t = (1/m) sum_{e} chi(g^e) omega^{-et} mod p, each a_t in [0, deg].
    CharacterTable table;
    table.group = g;
    table.field = field;
    long minv = detail::mod_inv(m, p);
    for (auto& chi : chis) {
        std::vector<Cyclo> row;
        for (int j = 0; j < k; ++j) {
            int rep = g.class_rep[j];
            Cyclo val = Cyclo::zero(field);
            for (int t = 0; t < m; ++t) {
                long a = 0;
                for (int e = 0; e < m; ++e) {
                    long om = detail::mod_pow(omega, static_cast<long>(e) * t % m, p);
                    a = (a + chi[g.cls[g.power(rep, e)]] * detail::mod_inv(om, p)) % p;
                }
                a = a * minv % p;
                if (a > n) throw std::logic_error("character lift out of range");
                if (a != 0)
                    val += Cyclo::from_rational(field, Rat(a)) *
                           Cyclo::root_of_unity(field, static_cast<long>(field->m / m) * t);
            }
            row.push_back(val);
        }
        table.rows.push_back(std::move(row));
    }

    // deterministic order: by degree, then by canonical value vectors
    std::sort(table.rows.begin(), table.rows.end(),
              [&](const std::vector<Cyclo>& a, const std::vector<Cyclo>& b) {
                  const Cyclo& da = a[g.cls[0]];
                  const Cyclo& db = b[g.cls[0]];
                  if (da != db) return da < db;
                  for (int j = 0; j < k; ++j)
                      if (a[j] != b[j]) return a[j] < b[j];
                  return false;
              });

    // orthogonality and the degree sum
    {
        Int sum_sq = 0;
        for (int c = 0; c < table.num_irreps(); ++c) sum_sq += Int(table.degree(c)) * table.degree(c);
        if (sum_sq != n) throw std::logic_error("sum of squared degrees != |G|");
        Cyclo nn = Cyclo::from_rational(field, Rat(n));
        for (int c1 = 0; c1 < k; ++c1)
            for (int c2 = 0; c2 < k; ++c2) {
                Cyclo acc = Cyclo::zero(field);
                for (int j = 0; j < k; ++j) {
                    Cyclo term = table.rows[c1][j] * table.rows[c2][g.cls[g.inverse[g.class_rep[j]]]];
                    acc += Cyclo::from_rational(field, Rat(static_cast<long>(g.classes[j].size()))) * term;
                }
                Cyclo expect = c1 == c2 ? nn : Cyclo::zero(field);
                if (acc != expect) throw std::logic_error("character table fails orthogonality");
            }
    }
    return table;
}

}  // namespace heckelab
