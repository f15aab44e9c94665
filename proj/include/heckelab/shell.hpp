#pragma once

// Job configuration, deterministic JSON/CSV artifact emission, and the
// content-hash result cache backing the command-line tool.

#include "heckelab/blocks.hpp"
#include "heckelab/canbase.hpp"
#include "heckelab/convtrace.hpp"
#include "heckelab/replift.hpp"
#include "heckelab/yokonuma.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace heckelab {

using Json = nlohmann::ordered_json;

inline constexpr int kCacheVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitIdentityFailure = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct JobConfig {
    std::string type;  // Cartan label, or empty when matrices are given
    std::vector<IVec> simple_roots, simple_coroots;
    int n = 2;
    std::string aut = "trivial";  // trivial | flip
    IMat aut_x_matrix;            // explicit lattice map on X when aut == "matrix"
    std::string task = "verify-all";
    std::vector<int> J, ss, ss2;
    std::vector<int> lambda, lambda2;
    int d_pow = 1, d2_pow = -1;  // conv components; d2 defaults to -d
    int q = 3;
    long p3_samples = 0;
    unsigned seed = 12345;
    int jobs = 1;
    std::string out, cache_dir;

    static JobConfig from_json(const Json& j);
    Json to_json() const;
};

inline JobConfig JobConfig::from_json(const Json& j) {
    JobConfig c;
    try {
        if (j.contains("type")) c.type = j.at("type").get<std::string>();
        if (j.contains("matrices")) {
            const Json& m = j.at("matrices");
            for (auto& row : m.at("simple_roots")) c.simple_roots.push_back(row.get<IVec>());
            for (auto& row : m.at("simple_coroots")) c.simple_coroots.push_back(row.get<IVec>());
        }
        if (c.type.empty() && c.simple_roots.empty())
            throw ConfigError("config needs a Cartan type or explicit matrices");
        if (j.contains("n")) c.n = j.at("n").get<int>();
        if (c.n < 1) throw ConfigError("n must be positive");
        if (j.contains("aut")) {
            if (j.at("aut").is_string()) c.aut = j.at("aut").get<std::string>();
            else {
                c.aut = "matrix";
                for (auto& row : j.at("aut")) c.aut_x_matrix.push_back(row.get<IVec>());
            }
        }
        if (j.contains("task")) c.task = j.at("task").get<std::string>();
        for (const char* key : {"J", "ss", "ss2", "lambda", "lambda2"}) {
            if (!j.contains(key)) continue;
            std::vector<int> v = j.at(key).get<std::vector<int>>();
            if (std::string(key) == "J") c.J = v;
            else if (std::string(key) == "ss") c.ss = v;
            else if (std::string(key) == "ss2") c.ss2 = v;
            else if (std::string(key) == "lambda") c.lambda = v;
            else c.lambda2 = v;
        }
        if (j.contains("d")) c.d_pow = j.at("d").get<int>();
        if (j.contains("d2")) c.d2_pow = j.at("d2").get<int>();
        if (j.contains("q")) c.q = j.at("q").get<int>();
        if (j.contains("p3_samples")) c.p3_samples = j.at("p3_samples").get<long>();
        if (j.contains("seed")) c.seed = j.at("seed").get<unsigned>();
        if (j.contains("jobs")) c.jobs = j.at("jobs").get<int>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("cache_dir")) c.cache_dir = j.at("cache_dir").get<std::string>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return c;
}

inline Json JobConfig::to_json() const {
    Json j;
    if (!type.empty()) j["type"] = type;
    if (!simple_roots.empty()) {
        j["matrices"]["simple_roots"] = simple_roots;
        j["matrices"]["simple_coroots"] = simple_coroots;
    }
    j["n"] = n;
    if (aut == "matrix") j["aut"] = aut_x_matrix;
    else j["aut"] = aut;
    j["task"] = task;
    if (!J.empty()) j["J"] = J;
    if (!ss.empty()) j["ss"] = ss;
    if (!ss2.empty()) j["ss2"] = ss2;
    if (!lambda.empty()) j["lambda"] = lambda;
    if (!lambda2.empty()) j["lambda2"] = lambda2;
    j["d"] = d_pow;
    j["d2"] = d2_pow;
    j["q"] = q;
    j["p3_samples"] = p3_samples;
    j["seed"] = seed;
    return j;
}

// FNV-1a over the canonical config dump; stable across platforms.
inline std::string content_hash(const Json& j) {
    std::string s = j.dump();
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

// ---------------------------------------------------------------------------
// element serialization

// Laurent polynomials serialize as exponent -> coefficient maps, ascending.
inline Json laurent_to_json(const Laurent& p) {
    Json j = Json::object();
    for (auto& [k, c] : p.coeffs()) j[std::to_string(k)] = c.str();
    return j;
}
inline Laurent laurent_from_json(const Json& j) {
    Laurent p;
    for (auto& [k, c] : j.items())
        p += Laurent::term(Int(c.get<std::string>()), std::stoi(k));
    return p;
}

inline Json hecke_elt_to_json(const HeckeElt& h) {
    Json terms = Json::array();
    const ExtWeyl& E = h.ctx().ext();
    for (auto& [key, c] : h.terms()) {
        Json t;
        t["aut_power"] = E.aut_power(key.first);
        t["word"] = E.weyl().word(E.weyl_part(key.first));
        t["lambda"] = h.ctx().chars().char_of(key.second).values;
        t["coeff"] = laurent_to_json(c);
        terms.push_back(std::move(t));
    }
    return terms;
}

struct BuiltCtx {
    std::unique_ptr<HeckeCtx> ctx;
    std::string datum_label;
};

inline BuiltCtx build_ctx(const JobConfig& cfg) {
    RootDatum d;
    try {
        d = cfg.type.empty() ? build_root_datum(cfg.simple_roots, cfg.simple_coroots)
                             : build_root_datum(cfg.type);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid root datum: ") + e.what());
    }
    DiagramAut a;
    try {
        if (cfg.aut == "trivial") a = DiagramAut::identity_aut(d);
        else if (cfg.aut == "flip") a = DiagramAut::flip_aut(d);
        else if (cfg.aut == "matrix") a = DiagramAut::from_x_matrix(d, cfg.aut_x_matrix);
        else throw ConfigError("unknown automorphism spec: " + cfg.aut);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid automorphism: ") + e.what());
    }
    BuiltCtx b;
    b.datum_label = cfg.type.empty() ? "explicit" : cfg.type;
    b.ctx = std::make_unique<HeckeCtx>(std::move(d), std::move(a), cfg.n);
    return b;
}

struct RunResult {
    int exit_code = kExitOk;
    Json artifact;
    std::string csv;
};

namespace detail {

inline Json basis_key_json(const HeckeCtx& ctx, std::pair<int, int> key) {
    Json j;
    j["aut_power"] = ctx.ext().aut_power(key.first);
    j["word"] = ctx.weyl().word(ctx.ext().weyl_part(key.first));
    j["lambda"] = ctx.chars().char_of(key.second).values;
    return j;
}

inline std::string word_str(const std::vector<int>& w) {
    std::string s;
    for (int g : w) s += (s.empty() ? "" : ".") + std::string("s") + std::to_string(g + 1);
    return s.empty() ? "1" : s;
}

}  // namespace detail

inline RunResult run_basis(const JobConfig& cfg) {
    BuiltCtx b = build_ctx(cfg);
    CanBasis cb(*b.ctx);
    RunResult r;
    Json list = Json::array();
    for (int i = 0; i < cb.size(); ++i) {
        Json e;
        e["index"] = i;
        e["key"] = detail::basis_key_json(*b.ctx, cb.key(i));
        e["element"] = hecke_elt_to_json(cb.elt(i));
        list.push_back(std::move(e));
    }
    r.artifact["canonical_basis"] = std::move(list);
    return r;
}

inline RunResult run_cells(const JobConfig& cfg) {
    BuiltCtx b = build_ctx(cfg);
    CanBasis cb(*b.ctx);
    RTensor rt = r_constants(cb);
    CellData cd = cells_and_a(cb, rt);
    RunResult r;
    Json list = Json::array();
    std::ostringstream csv;
    csv << "index,aut_power,word,lambda,a,cell,left_cell\n";
    for (int i = 0; i < cb.size(); ++i) {
        Json e;
        e["index"] = i;
        e["key"] = detail::basis_key_json(*b.ctx, cb.key(i));
        e["a"] = cd.a_value[i];
        e["cell"] = cd.two_sided_cell[i];
        e["left_cell"] = cd.left_cell[i];
        list.push_back(std::move(e));
        auto [g, lam] = cb.key(i);
        csv << i << "," << b.ctx->ext().aut_power(g) << ","
            << detail::word_str(b.ctx->weyl().word(b.ctx->ext().weyl_part(g))) << ",\"";
        auto vals = b.ctx->chars().char_of(lam).values;
        for (size_t k = 0; k < vals.size(); ++k) csv << (k ? " " : "") << vals[k];
        csv << "\"," << cd.a_value[i] << "," << cd.two_sided_cell[i] << ","
            << cd.left_cell[i] << "\n";
    }
    r.artifact["cells"] = std::move(list);
    r.csv = csv.str();
    return r;
}

inline RunResult run_jring(const JobConfig& cfg) {
    BuiltCtx b = build_ctx(cfg);
    CanBasis cb(*b.ctx);
    RTensor rt = r_constants(cb);
    CellData cd = cells_and_a(cb, rt);
    JRingTable jt = jring(cb, rt, cd);
    RunResult r;
    if (!jt.p2_holds) {
        r.exit_code = kExitIdentityFailure;
        r.artifact["error"] = "P2 failed: " + jt.p2_failure;
        return r;
    }
    Json dist = Json::array();
    for (int d : jt.dist_list) dist.push_back(detail::basis_key_json(*b.ctx, cb.key(d)));
    r.artifact["distinguished"] = std::move(dist);
    Json gammas = Json::array();
    for (int b1 = 0; b1 < cb.size(); ++b1)
        for (int b2 = 0; b2 < cb.size(); ++b2)
            for (auto& [b3, g] : jt.gamma[b1][b2]) {
                Json t;
                t["b1"] = b1;
                t["b2"] = b2;
                t["b3"] = b3;
                t["gamma"] = g.str();
                gammas.push_back(std::move(t));
            }
    r.artifact["gamma"] = std::move(gammas);
    Json phi = Json::array();
    for (int b1 = 0; b1 < cb.size(); ++b1) {
        Json col = Json::array();
        for (auto& [b2, c] : jt.phi[b1]) {
            Json t;
            t["t_basis"] = b2;
            t["coeff"] = c.to_string();
            col.push_back(std::move(t));
        }
        Json e;
        e["b"] = b1;
        e["phi"] = std::move(col);
        phi.push_back(std::move(e));
    }
    r.artifact["phi"] = std::move(phi);
    PCheckReport rep = check_P1_P2_P3(cb, rt, cd, jt, cfg.p3_samples, cfg.seed);
    r.artifact["checks"] = Json{{"P1", rep.p1},
                                {"P2", rep.p2},
                                {"P3", rep.p3},
                                {"leading_coeff_identity", rep.leading_coeff_identity},
                                {"module_congruence", rep.module_congruence},
                                {"phi_homomorphism", rep.phi_homomorphism},
                                {"phi_unit", rep.phi_unit},
                                {"distinguished_props", rep.dist_props},
                                {"phi_v1_invertible", rep.phi_v1_invertible},
                                {"ad_compatible", rep.ad_compat},
                                {"omega_multiplicativity", rep.omega_mult}};
    if (!rep.all()) {
        r.exit_code = kExitIdentityFailure;
        r.artifact["failures"] = rep.failures;
    }
    std::ostringstream csv;
    csv << "basis,a_value,distinguished\n";
    for (int i = 0; i < cb.size(); ++i)
        csv << i << "," << cd.a_value[i] << "," << (jt.distinguished[i] ? 1 : 0) << "\n";
    r.csv = csv.str();
    return r;
}

inline RunResult run_blocks(const JobConfig& cfg) {
    BuiltCtx b = build_ctx(cfg);
    CanBasis cb(*b.ctx);
    SsChoice ss(*b.ctx);
    EAlg E(*b.ctx, ss);
    RunResult r;
    // the constructors of HLambdaAlg / SsChoice already assert their laws;
    // verify theta and Psi match canonical bases and emit the Psi_0 table
    Json table = Json::array();
    for (int lam = 0; lam < b.ctx->num_chars(); ++lam) {
        HLambdaAlg alg(*b.ctx, lam);
        for (int g : alg.elements())
            if (alg.theta(alg.c_basis(g)) != cb.elt(g, lam))
                throw std::logic_error("theta_lambda does not match canonical bases");
    }
    for (int g = 0; g < b.ctx->ext().size(); ++g)
        for (int lam = 0; lam < b.ctx->num_chars(); ++lam) {
            auto [l1, l2, w] = E.psi0(g, lam);
            if (E.psi(cb.elt(g, lam)) != [&] {
                    EAlgElt e;
                    e.entries[{l1, l2}] = cb.elt(w, ss.rep(lam));
                    return e;
                }())
                throw std::logic_error("Psi does not match canonical bases");
            Json t;
            t["g"] = detail::basis_key_json(*b.ctx, {g, lam})["word"];
            t["aut_power"] = b.ctx->ext().aut_power(g);
            t["lambda"] = b.ctx->chars().char_of(lam).values;
            t["lambda1"] = b.ctx->chars().char_of(l1).values;
            t["lambda2"] = b.ctx->chars().char_of(l2).values;
            t["w_aut_power"] = b.ctx->ext().aut_power(w);
            t["w_word"] = b.ctx->weyl().word(b.ctx->ext().weyl_part(w));
            table.push_back(std::move(t));
        }
    r.artifact["psi0"] = std::move(table);
    Json reps = Json::array();
    for (int lam = 0; lam < b.ctx->num_chars(); ++lam)
        if (ss.rep(lam) == lam) reps.push_back(b.ctx->chars().char_of(lam).values);
    r.artifact["orbit_representatives"] = std::move(reps);
    return r;
}

inline RunResult run_conv(const JobConfig& cfg) {
    BuiltCtx b = build_ctx(cfg);
    ConvConfig cc;
    cc.ctx = b.ctx.get();
    cc.J = cfg.J;
    cc.ss = cfg.ss;
    cc.ss2 = cfg.ss2;
    for (int s : cfg.ss)
        if (s < 0 || s >= b.ctx->weyl().num_gens()) throw ConfigError("ss entry out of range");
    for (int s : cfg.ss2)
        if (s < 0 || s >= b.ctx->weyl().num_gens()) throw ConfigError("ss2 entry out of range");
    for (int s : cfg.J)
        if (s < 0 || s >= b.ctx->weyl().num_gens()) throw ConfigError("J entry out of range");
    CharModN l1{cfg.n, cfg.lambda.empty() ? std::vector<int>(b.ctx->datum().rank, 0) : cfg.lambda};
    CharModN l2{cfg.n, cfg.lambda2.empty() ? std::vector<int>(b.ctx->datum().rank, 0) : cfg.lambda2};
    try {
        cc.lam = b.ctx->chars().index_of(l1);
        cc.lam2 = b.ctx->chars().index_of(l2);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    cc.d_pow = ((cfg.d_pow % b.ctx->k()) + b.ctx->k()) % b.ctx->k();
    cc.d2_pow = cfg.d2_pow < 0 ? (b.ctx->k() - cc.d_pow) % b.ctx->k()
                               : cfg.d2_pow % b.ctx->k();
    RunResult r;
    if (!cc.admissible()) {
        r.exit_code = kExitBadConfig;
        r.artifact["error"] = "configuration is not admissible";
        return r;
    }
    ConvReport rep = check_identities(cc);
    r.artifact["config"] = cfg.to_json();
    r.artifact["identities"] = Json{{"left_expansion", rep.expansion_left},
                                    {"right_expansion", rep.expansion_right},
                                    {"flat_reversal", rep.flat_reversal},
                                    {"subset_formula", rep.subset_formula},
                                    {"sandwich_expansion", rep.sandwich_expansion},
                                    {"phi_basis_formula", rep.phi_basis_formula},
                                    {"trace_diagonal_sum", rep.trace_diagonal_sum},
                                    {"trace_symmetry", rep.trace_symmetry},
                                    {"operator_identities", rep.op_identities},
                                    {"trace_positivity", rep.positivity},
                                    {"composite_trivial", rep.composite_trivial}};
    r.artifact["trace_phi_prime"] = rep.trace_phi_p.to_string();
    r.artifact["trace_phi_double_prime"] = rep.trace_phi_pp.to_string();
    r.artifact["s0_sum"] = rep.s0_sum.to_string();
    Json seqs = Json::array();
    for (auto& a : enumerate_S(cc)) {
        Json e;
        Json words = Json::array();
        for (int w : a.a) words.push_back(b.ctx->weyl().word(w));
        e["a"] = std::move(words);
        e["N"] = a.weight;
        seqs.push_back(std::move(e));
    }
    r.artifact["S"] = std::move(seqs);
    if (!rep.all()) {
        r.exit_code = kExitIdentityFailure;
        r.artifact["failures"] = rep.failures;
    }
    return r;
}

inline RunResult run_replift(const JobConfig& cfg) {
    BuiltCtx b = build_ctx(cfg);
    CanBasis cb(*b.ctx);
    RTensor rt = r_constants(cb);
    CellData cd = cells_and_a(cb, rt);
    JRingTable jt = jring(cb, rt, cd);
    RunResult r;
    if (!jt.p2_holds) {
        r.exit_code = kExitIdentityFailure;
        r.artifact["error"] = "P2 failed: " + jt.p2_failure;
        return r;
    }
    RepLift rl(*b.ctx, cb, jt);
    Json mods = Json::array();
    std::ostringstream csv;
    csv << "u,orbit,char,degree,dim,in_U_a,bar_u,f_u_v\n";
    for (int u = 0; u < rl.num_modules(); ++u) {
        const SimpleModuleTag& t = rl.modules()[u];
        Json e;
        e["u"] = u;
        e["orbit_rep"] = b.ctx->chars().char_of(t.orbit_rep).values;
        e["char_id"] = t.char_id;
        e["degree"] = t.degree;
        e["dim"] = t.dim;
        e["in_U_a"] = t.in_U_a;
        e["bar_u"] = t.bar_u;
        e["schur"] = rl.schur_element(u).to_string();
        mods.push_back(std::move(e));
        csv << u << ",\"";
        auto vals = b.ctx->chars().char_of(t.orbit_rep).values;
        for (size_t k = 0; k < vals.size(); ++k) csv << (k ? " " : "") << vals[k];
        csv << "\"," << t.char_id << "," << t.degree << "," << t.dim << ","
            << (t.in_U_a ? 1 : 0) << "," << t.bar_u << ","
            << rl.schur_element(u).to_string() << "\n";
    }
    r.artifact["modules"] = std::move(mods);
    // full lifted trace table
    Json table = Json::array();
    for (int u = 0; u < rl.num_modules(); ++u) {
        Json rows = Json::array();
        for (int w = 0; w < b.ctx->weyl().size(); ++w)
            for (int lam = 0; lam < b.ctx->num_chars(); ++lam) {
                const CycloLaurent& tr = rl.trace_plain(u, w, lam);
                if (tr.is_zero()) continue;
                Json e;
                e["word"] = b.ctx->weyl().word(w);
                e["lambda"] = b.ctx->chars().char_of(lam).values;
                e["trace"] = tr.to_string();
                rows.push_back(std::move(e));
            }
        table.push_back(std::move(rows));
    }
    r.artifact["lifted_traces"] = std::move(table);
    csv << "\n" << "u,word,lambda,trace\n";
    for (int u = 0; u < rl.num_modules(); ++u)
        for (int w = 0; w < b.ctx->weyl().size(); ++w)
            for (int lam = 0; lam < b.ctx->num_chars(); ++lam) {
                const CycloLaurent& tr = rl.trace_plain(u, w, lam);
                if (tr.is_zero()) continue;
                csv << u << "," << detail::word_str(b.ctx->weyl().word(w)) << ",\"";
                auto vals = b.ctx->chars().char_of(lam).values;
                for (size_t k = 0; k < vals.size(); ++k) csv << (k ? " " : "") << vals[k];
                csv << "\"," << tr.to_string() << "\n";
            }
    auto rep = rl.orthogonality_checks();
    r.artifact["orthogonality"] = Json{{"schur_orthogonality", rep.schur_orthogonality},
                                       {"trace_conjugation", rep.trace_conjugation},
                                       {"twisted_schur_orthogonality", rep.twisted_schur_orthogonality},
                                       {"hermitian_orthogonality", rep.hermitian_orthogonality},
                                       {"hermitian_orthogonality_kappa1", rep.hermitian_orthogonality_v1},
                                       {"schur_nonzero_v1", rep.schur_nonzero_v1},
                                       {"specialization", rep.specialization}};
    // quasi-rationality, report only (eta == 1)
    {
        Json qr = Json::array();
        for (int u = 0; u < rl.num_modules(); ++u) {
            auto q = rl.quasi_rational_check(u);
            Json e;
            e["u"] = u;
            e["hypothesis"] = q.hypothesis;
            e["conclusion"] = q.hypothesis ? Json(q.conclusion) : Json("hypothesis not satisfied");
            qr.push_back(std::move(e));
        }
        r.artifact["quasi_rational"] = std::move(qr);
    }
    r.csv = csv.str();
    if (!rep.all()) {
        r.exit_code = kExitIdentityFailure;
        r.artifact["failures"] = rep.failures;
    }
    return r;
}

inline RunResult run_finite_model(const JobConfig& cfg) {
    RunResult r;
    std::unique_ptr<FiniteGL> m;
    try {
        m = std::make_unique<FiniteGL>(cfg.q);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    Convolver conv(*m);
    RootDatum d = gl2_root_datum();
    DiagramAut triv = DiagramAut::identity_aut(d);
    HeckeCtx hctx(std::move(d), std::move(triv), cfg.q - 1);
    YokonumaReport rep = yokonuma_checks(*m, conv, hctx);
    TwistedReport trep = twisted_conjugation_check(*m, conv);
    r.artifact["q"] = cfg.q;
    r.artifact["dim_T"] = static_cast<int>(m->monomials().size());
    r.artifact["checks"] = Json{{"sizes", rep.sizes},
                                {"k_relations", rep.k_relations},
                                {"associativity", rep.associativity},
                                {"idempotents", rep.idempotents},
                                {"commutation", rep.commutation},
                                {"quadratic_T", rep.quadratic_T},
                                {"full_rank", rep.full_rank},
                                {"structure_match", rep.structure_match},
                                {"faithful", rep.faithful},
                                {"t_dw_in_torus", trep.t_dw_in_torus},
                                {"twisted_conjugation", trep.twisted_conjugation},
                                {"inner_case", trep.inner_case},
                                {"parabolic_projection", trep.parabolic_projection}};
    // structure constants of the k-basis
    Json sc = Json::array();
    int nn = static_cast<int>(m->monomials().size());
    for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) {
            DoubleCosetFn prod = conv.convolve(DoubleCosetFn::k_basis(*m, i),
                                               DoubleCosetFn::k_basis(*m, j));
            for (int k = 0; k < nn; ++k) {
                if (prod.at(k).is_zero()) continue;
                Json e;
                e["i"] = i;
                e["j"] = j;
                e["k"] = k;
                e["c"] = prod.at(k).to_string();
                sc.push_back(std::move(e));
            }
        }
    r.artifact["structure_constants"] = std::move(sc);
    if (!rep.all() || !trep.all()) {
        r.exit_code = kExitIdentityFailure;
        Json f = Json::array();
        for (auto& s : rep.failures) f.push_back(s);
        for (auto& s : trep.failures) f.push_back(s);
        r.artifact["failures"] = std::move(f);
    }
    return r;
}

inline RunResult run_verify_all(const JobConfig& cfg) {
    BuiltCtx b = build_ctx(cfg);
    const HeckeCtx& ctx = *b.ctx;
    RunResult r;
    Json checks;
    std::vector<std::string> failures;

    // presentation sanity: unit, bar^2, T~_s T~_s^-1, sampled associativity
    {
        bool ok = true;
        Laurent vv = Laurent::v_pow(1) - Laurent::v_pow(-1);
        for (int s = 0; s < ctx.weyl().num_gens() && ok; ++s) {
            int g = ctx.ext().make(0, ctx.weyl().simple_reflection(s));
            HeckeElt ts = HeckeElt::gen(ctx, g);
            HeckeElt tsinv = ts;
            for (int lam = 0; lam < ctx.num_chars(); ++lam)
                if (ctx.chars().simple_in_w_lambda(s, lam))
                    tsinv -= vv * HeckeElt::idempotent(ctx, lam);
            ok = ok && ts * tsinv == HeckeElt::unit(ctx) && tsinv * ts == HeckeElt::unit(ctx);
        }
        std::mt19937 rng(cfg.seed);
        std::uniform_int_distribution<int> pg(0, ctx.ext().size() - 1),
            pl(0, ctx.num_chars() - 1);
        for (int i = 0; i < 100 && ok; ++i) {
            HeckeElt x = HeckeElt::std_basis(ctx, pg(rng), pl(rng));
            HeckeElt y = HeckeElt::std_basis(ctx, pg(rng), pl(rng));
            HeckeElt z = HeckeElt::std_basis(ctx, pg(rng), pl(rng));
            ok = ok && (x * y) * z == x * (y * z) && x.bar().bar() == x;
        }
        checks["presentation"] = ok;
        if (!ok) failures.push_back("presentation sanity failed");
    }

    CanBasis cb(ctx);
    RTensor rt = r_constants(cb);
    CellData cd = cells_and_a(cb, rt);
    JRingTable jt = jring(cb, rt, cd);
    {
        PCheckReport rep = check_P1_P2_P3(cb, rt, cd, jt, cfg.p3_samples, cfg.seed);
        checks["P1"] = rep.p1;
        checks["P2"] = rep.p2;
        checks["P3"] = rep.p3;
        checks["module_congruence"] = rep.module_congruence;
        checks["phi_homomorphism"] = rep.phi_homomorphism && rep.phi_unit;
        checks["distinguished_involutions"] = rep.dist_props;
        checks["ad_D_compatible"] = rep.ad_compat;
        if (!rep.all()) {
            failures.insert(failures.end(), rep.failures.begin(), rep.failures.end());
        }
    }
    {
        bool ok = true;
        try {
            SsChoice ss(ctx);
            EAlg E(ctx, ss);
            for (int lam = 0; lam < ctx.num_chars(); ++lam) {
                HLambdaAlg alg(ctx, lam);
                for (int g : alg.elements())
                    if (alg.theta(alg.c_basis(g)) != cb.elt(g, lam)) ok = false;
            }
            for (int g = 0; g < ctx.ext().size() && ok; ++g)
                for (int lam = 0; lam < ctx.num_chars(); ++lam) {
                    auto [l1, l2, w] = E.psi0(g, lam);
                    EAlgElt expect;
                    expect.entries[{l1, l2}] = cb.elt(w, ss.rep(lam));
                    if (E.psi(cb.elt(g, lam)) != expect) { ok = false; break; }
                }
        } catch (const std::logic_error& e) {
            ok = false;
            failures.push_back(e.what());
        }
        checks["block_isomorphisms"] = ok;
        if (!ok) failures.push_back("block isomorphisms failed");
    }
    {
        bool ok = true;
        try {
            RepLift rl(ctx, cb, jt);
            auto rep = rl.orthogonality_checks();
            ok = rep.all();
            if (!ok) failures.insert(failures.end(), rep.failures.begin(), rep.failures.end());
        } catch (const std::logic_error& e) {
            ok = false;
            failures.push_back(e.what());
        }
        checks["replift_orthogonality"] = ok;
    }
    {
        // a small sweep of admissible convolution configs with r + r' <= 2
        bool ok = true;
        int count = 0;
        std::vector<std::vector<int>> seqs{{}};
        for (int s = 0; s < ctx.weyl().num_gens(); ++s) seqs.push_back({s});
        std::vector<std::vector<int>> Js{{}};
        {
            std::vector<int> all(ctx.weyl().num_gens());
            std::iota(all.begin(), all.end(), 0);
            Js.push_back(all);
        }
        for (auto& s1 : seqs)
            for (auto& s2 : seqs)
                for (auto& J : Js)
                    for (int l1 = 0; l1 < ctx.num_chars(); ++l1)
                        for (int l2 = 0; l2 < ctx.num_chars(); ++l2) {
                            ConvConfig cc;
                            cc.ctx = &ctx;
                            cc.J = J;
                            cc.ss = s1;
                            cc.ss2 = s2;
                            cc.lam = l1;
                            cc.lam2 = l2;
                            cc.d_pow = 1 % ctx.k();
                            cc.d2_pow = (ctx.k() - 1) % ctx.k();
                            if (!cc.admissible()) continue;
                            ConvReport rep = check_identities(cc);
                            ++count;
                            if (!rep.all()) {
                                ok = false;
                                failures.insert(failures.end(), rep.failures.begin(),
                                                rep.failures.end());
                            }
                        }
        checks["conv_identities"] = ok;
        checks["conv_configs_checked"] = count;
    }
    r.artifact["datum"] = b.datum_label;
    r.artifact["n"] = cfg.n;
    r.artifact["aut"] = cfg.aut;
    r.artifact["checks"] = std::move(checks);
    if (!failures.empty()) {
        r.exit_code = kExitIdentityFailure;
        r.artifact["failures"] = failures;
    }
    return r;
}

inline RunResult run_job_uncached(const JobConfig& cfg) {
    if (cfg.task == "basis") return run_basis(cfg);
    if (cfg.task == "cells") return run_cells(cfg);
    if (cfg.task == "jring") return run_jring(cfg);
    if (cfg.task == "blocks") return run_blocks(cfg);
    if (cfg.task == "conv") return run_conv(cfg);
    if (cfg.task == "replift") return run_replift(cfg);
    if (cfg.task == "finite-model") return run_finite_model(cfg);
    if (cfg.task == "verify-all") return run_verify_all(cfg);
    throw ConfigError("unknown task: " + cfg.task);
}

// Disk cache keyed by the content hash of (config minus output paths, cache
// version); hits are verified by re-hashing the stored config echo.
inline RunResult run_job(const JobConfig& cfg) {
    Json key_cfg = cfg.to_json();
    key_cfg["cache_version"] = kCacheVersion;
    std::string key = content_hash(key_cfg);
    std::filesystem::path cache_file;
    if (!cfg.cache_dir.empty()) {
        cache_file = std::filesystem::path(cfg.cache_dir) / ("heckelab-" + key + ".json");
        if (std::filesystem::exists(cache_file)) {
            std::ifstream in(cache_file);
            Json stored = Json::parse(in, nullptr, false);
            if (!stored.is_discarded() && stored.contains("config_echo") &&
                stored.contains("cache_version") &&
                stored.at("cache_version").get<int>() == kCacheVersion) {
                Json echo = stored.at("config_echo");
                echo["cache_version"] = kCacheVersion;
                if (content_hash(echo) == key) {
                    RunResult r;
                    r.exit_code = stored.at("exit_code").get<int>();
                    r.artifact = stored.at("artifact");
                    if (stored.contains("csv")) r.csv = stored.at("csv").get<std::string>();
                    return r;
                }
            }
        }
    }
    RunResult r = run_job_uncached(cfg);
    if (!cfg.cache_dir.empty() && r.exit_code == kExitOk) {
        std::filesystem::create_directories(cfg.cache_dir);
        Json stored;
        stored["cache_version"] = kCacheVersion;
        stored["config_echo"] = cfg.to_json();
        stored["exit_code"] = r.exit_code;
        stored["artifact"] = r.artifact;
        if (!r.csv.empty()) stored["csv"] = r.csv;
        std::ofstream out(cache_file);
        out << stored.dump(2) << "\n";
    }
    return r;
}

}  // namespace heckelab
