#include "aihs/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aihs/halfspace.hpp"
#include "aihs/perturbation.hpp"
#include "aihs/quasinilpotent_bridge.hpp"
#include "aihs/structure_analysis.hpp"
#include "aihs/toml_lite.hpp"

namespace aihs {

namespace {

class Stopwatch {
  public:
    Stopwatch() : start_(clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
    }

  private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_;
};

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> defaults = {
        {"inveq", 1e-8},        {"invariance", 1e-8},   {"biorthogonality", 1e-8},
        {"unit_pairing", 1e-8}, {"four_term", 1e-8},    {"riesz", 1e-8},
        {"defect_gap_inverse", 1e-4},                   {"sigma_alpha_gap", 1e-10},
        {"annihilation", 1e-10},
    };
    return defaults;
}

[[noreturn]] void fail_field(const std::string& field, const std::string& msg) {
    throw ConfigInvalid("config field '" + field + "': " + msg);
}

double require_positive(double v, const std::string& field) {
    if (!(v > 0.0) || !std::isfinite(v)) fail_field(field, "must be positive and finite");
    return v;
}

ZooParams zoo_params(const ScenarioConfig& cfg) {
    ZooParams p;
    p.dim = cfg.dim;
    p.seed = cfg.seed;
    p.extra = cfg.operator_extra;
    return p;
}

CVector resolve_estar(const ScenarioConfig& cfg, const OperatorRep& T,
                      VerificationReport& rep) {
    if (cfg.estar != "auto") return named_estar_profile(cfg.estar, cfg.dim, cfg.seed);
    std::vector<CVector> cands;
    std::vector<std::string> names =
        cfg.estar_candidates.empty()
            ? std::vector<std::string>{"e1", "invk", "pow34", "uniform", "gaussian"}
            : cfg.estar_candidates;
    cands.reserve(names.size());
    for (const auto& n : names) cands.push_back(named_estar_profile(n, cfg.dim, cfg.seed));
    Index which = -1;
    const CVector e = select_estar(T, cfg.boundary, cfg.schedule, cands, {}, {}, &which);
    rep.set_object("estar_selected", names[static_cast<size_t>(which)]);
    return e;
}

// Structural (zoo) answer when available, otherwise flagged numerical-only.
void check_boundary_hypothesis(const ScenarioConfig& cfg, VerificationReport& rep) {
    const ZooEntry* entry = zoo_find(cfg.operator_kind);
    const auto verdict = entry->boundary_not_eigenvalue_adjoint(cfg.boundary, zoo_params(cfg));
    if (!verdict.has_value()) {
        rep.set_hypothesis("boundary_not_eigenvalue",
                           "numerical (no structural facts; truncation cannot certify)");
        return;
    }
    if (!*verdict)
        throw HypothesisFailed("boundary point is an eigenvalue (structural fact for " +
                               cfg.operator_kind + ")");
    rep.set_hypothesis("boundary_not_eigenvalue", "structural");
}

void record_family(const ResolventFamily& fam, VerificationReport& rep) {
    rep.set_object("family_norms", VerificationReport::number_list(fam.norms));
    std::vector<double> lre, lim;
    for (Complex l : fam.lambdas) {
        lre.push_back(l.real());
        lim.push_back(l.imag());
    }
    rep.set_object("family_lambda_re", VerificationReport::number_list(lre));
    rep.set_object("family_lambda_im", VerificationReport::number_list(lim));
    rep.set_object("family_truncation_tail",
                   VerificationReport::number_list(fam.truncation_tail));
    std::vector<double> lognorms;
    for (double n : fam.norms) lognorms.push_back(std::log(n));
    rep.set_object("family_log_norms", VerificationReport::number_list(lognorms));
}

void pipeline_defect_one(const ScenarioConfig& cfg, VerificationReport& rep) {
    Stopwatch total;
    const OperatorRep T = zoo_build(cfg.operator_kind, zoo_params(cfg));
    check_boundary_hypothesis(cfg, rep);
    const CVector estar = resolve_estar(cfg, T, rep);

    Stopwatch sw_family;
    FamilyOptions fopts;
    fopts.tol_inveq = cfg.tol("inveq");
    const ResolventFamily fam = build_family(T, cfg.boundary, cfg.schedule, estar, fopts);
    rep.set_timing("family", sw_family.ms());
    record_family(fam, rep);
    rep.add_residual("inveq_max", fam.max_inveq_residual(), cfg.tol("inveq"));

    Stopwatch sw_z;
    const HalfSpaceRep Z = preannihilator(fam.x_stars, cfg.dim);
    rep.set_timing("preannihilator", sw_z.ms());
    rep.add_residual("annihilation", Z.annihilation_residual(), cfg.tol("annihilation"));
    rep.set_object("halfspace_dim", static_cast<std::int64_t>(Z.dim));
    rep.set_object("halfspace_codim", static_cast<std::int64_t>(Z.codim_in_truncation));
    rep.set_object("halfspace_proxy_flag", Z.halfspace_proxy_flag);

    Stopwatch sw_c;
    DefectOneOptions dopts;
    dopts.tol_residual = cfg.tol("invariance");
    const DefectOneResult res = defect_one_construction(T, fam, Z, dopts);
    rep.set_timing("construction", sw_c.ms());

    rep.set_object("already_invariant", res.already_invariant);
    rep.set_object("max_estar_on_basis", VerificationReport::number(res.max_estar_on_basis));
    rep.add_residual("invariance", res.invariance, cfg.tol("invariance"));
    if (!res.already_invariant) {
        rep.add_residual("four_term", res.four_term_max, cfg.tol("four_term"));
        rep.set_object("z0_index", static_cast<std::int64_t>(res.z0_index));
        rep.set_object("perturbation_norm", VerificationReport::number(res.F->norm));
    }
    rep.set_object("defect", static_cast<std::int64_t>(res.defect.defect));
    rep.set_object("defect_spectrum",
                   VerificationReport::number_list(res.defect.residual_spectrum));
    rep.add_residual("defect_leq_one", static_cast<double>(res.defect.defect), 1.0);
    if (!res.already_invariant)
        rep.add_residual("defect_gap_inverse",
                         res.defect.gap > 0.0 ? 1.0 / res.defect.gap : 1.0,
                         cfg.tol("defect_gap_inverse"));
    rep.set_timing("total", total.ms());
}

void pipeline_small_norm(const ScenarioConfig& cfg, VerificationReport& rep) {
    Stopwatch total;
    const OperatorRep T = zoo_build(cfg.operator_kind, zoo_params(cfg));
    check_boundary_hypothesis(cfg, rep);
    const CVector estar = resolve_estar(cfg, T, rep);

    Stopwatch sw_family;
    FamilyOptions fopts;
    fopts.tol_inveq = cfg.tol("inveq");
    const ResolventFamily fam = build_family(T, cfg.boundary, cfg.schedule, estar, fopts);
    rep.set_timing("family", sw_family.ms());
    record_family(fam, rep);
    rep.add_residual("inveq_max", fam.max_inveq_residual(), cfg.tol("inveq"));

    const GrowthDiagnostic growth = growth_diagnostic(fam);
    rep.set_object("growth_rate", VerificationReport::number(growth.rate));
    rep.set_object("growth_ratio", VerificationReport::number(growth.last_first_ratio));
    rep.set_object("growing", growth.growing);

    const WstarDecayReport wstar = wstar_decay_diagnostic(fam, 4);
    rep.set_object("wstar_tail_max", VerificationReport::number_list(wstar.tail_max));

    Stopwatch sw_bio;
    const BiorthogonalSystem bio = biorthogonalize(fam, cfg.selection);
    rep.set_timing("biorthogonal", sw_bio.ms());
    {
        std::vector<double> idx;
        for (Index i : bio.indices) idx.push_back(static_cast<double>(i + 1));
        rep.set_object("selected_indices", VerificationReport::number_list(idx));
    }
    rep.set_object("gram_cond", VerificationReport::number(bio.gram_cond));
    rep.set_object("m_bound", VerificationReport::number(bio.m_bound));
    rep.add_residual("biorthogonality", bio.max_pairing_residual, cfg.tol("biorthogonality"));

    Stopwatch sw_c;
    SmallNormOptions sopts;
    sopts.tol_pairing = cfg.tol("unit_pairing");
    const SmallNormResult res = small_norm_rank_one(T, fam, bio, cfg.eps, sopts);
    rep.set_timing("construction", sw_c.ms());

    {
        std::vector<double> tail;
        for (Index i : res.tail)
            tail.push_back(static_cast<double>(bio.indices[static_cast<size_t>(i)] + 1));
        rep.set_object("tail_indices", VerificationReport::number_list(tail));
    }
    rep.set_object("tail_sum", VerificationReport::number(res.tail_sum));
    rep.set_object("budget_rhs", VerificationReport::number(res.budget_rhs));
    rep.set_object("halfspace_dim", static_cast<std::int64_t>(res.Z.dim));
    rep.set_object("halfspace_codim", static_cast<std::int64_t>(res.Z.codim_in_truncation));
    rep.set_object("halfspace_proxy_flag", res.Z.halfspace_proxy_flag);

    rep.add_residual("norm_budget", res.F.norm, cfg.eps);
    rep.add_residual("unit_pairing", res.max_unit_pairing_error, cfg.tol("unit_pairing"));
    rep.add_residual("invariance", res.invariance, cfg.tol("invariance"));
    rep.add_residual("annihilation", res.Z.annihilation_residual(), cfg.tol("annihilation"));

    const DefectReport defect = defect_estimate(T, res.Z);
    rep.set_object("defect", static_cast<std::int64_t>(defect.defect));
    rep.add_residual("defect_leq_one", static_cast<double>(defect.defect), 1.0);
    rep.set_timing("total", total.ms());
}

void pipeline_bridge(const ScenarioConfig& cfg, VerificationReport& rep) {
    Stopwatch total;
    const OperatorRep T = zoo_build(cfg.operator_kind, zoo_params(cfg));

    AssembleOptions aopts;
    aopts.schedule = cfg.schedule;
    aopts.selection = cfg.selection;

    AssembleResult res = [&] {
        if (!cfg.bridge_declared_asymmetric) return assemble_small_norm(T, cfg.eps, aopts);
        // Structural index data for the split-chain entry: both chain ends
        // are genuine kernel directions, only the leading corange vector is
        // declared.
        const auto it = cfg.operator_extra.find("break_index");
        const Index b = it == cfg.operator_extra.end()
                            ? cfg.dim / 2
                            : static_cast<Index>(it->second);
        std::vector<CVector> kernel{CVector::Unit(cfg.dim, b - 1),
                                    CVector::Unit(cfg.dim, cfg.dim - 1)};
        std::vector<CVector> corange{CVector::Unit(cfg.dim, 0)};
        const KernelRangeData kr =
            kernel_range_declared(T, std::move(kernel), std::move(corange));
        return assemble_small_norm(T, kr, cfg.eps, aopts);
    }();

    const BridgeCertificate& c = res.certificate;
    rep.set_hypothesis("quasinilpotent", c.hypothesis);
    rep.set_object("n", static_cast<std::int64_t>(c.n));
    rep.set_object("m", static_cast<std::int64_t>(c.m));
    rep.set_object("alpha", VerificationReport::number(c.alpha));
    rep.set_object("sigma_min_perturbed", VerificationReport::number(c.sigma_min_perturbed));
    rep.set_object("sigma_min_adjusted", VerificationReport::number(c.sigma_min_adjusted));
    rep.set_object("rank_F", static_cast<std::int64_t>(c.rank_F));
    rep.set_object("f0_produced", c.f0_produced);
    if (!c.f0_note.empty()) rep.set_hypothesis("f0_step", c.f0_note);

    rep.add_residual("alpha_g_norm", c.alpha_g_norm, cfg.eps / 2.0);
    if (c.n == c.m)
        rep.add_residual("sigma_alpha_gap", std::abs(c.sigma_min_perturbed - c.alpha),
                         cfg.tol("sigma_alpha_gap"));
    // dense-range / injectivity proxy past the declared index deficiency
    rep.add_residual("sigma_adjusted_deficit",
                     std::max(0.0, c.alpha / 2.0 - c.sigma_min_adjusted), 0.0);
    const Index rank_cap = std::min(c.n, c.m) + 1;
    rep.add_residual("rank_excess",
                     static_cast<double>(std::max<Index>(c.rank_F - rank_cap, 0)), 0.0);
    rep.add_residual("total_norm", res.F.norm, cfg.eps);
    if (c.f0_produced) {
        rep.add_residual("f0_norm", c.f0_norm, cfg.eps / 2.0);
        rep.add_residual("f0_invariance", res.f0_detail->invariance, cfg.tol("invariance"));
        rep.add_residual("f0_unit_pairing", res.f0_detail->max_unit_pairing_error,
                         cfg.tol("unit_pairing"));
    }
    rep.set_timing("total", total.ms());
}

void pipeline_structure(const ScenarioConfig& cfg, VerificationReport& rep) {
    Stopwatch total;
    const OperatorRep T = zoo_build(cfg.operator_kind, zoo_params(cfg));
    const StructureConfig& sc = cfg.structure;
    bool ran_any = false;

    if (!sc.orbit_vector.empty() && sc.orbit_horizon > 0) {
        ran_any = true;
        Stopwatch sw;
        const CVector z = named_estar_profile(sc.orbit_vector, cfg.dim, cfg.seed);
        OrbitOptions oopts;
        oopts.delta = sc.orbit_delta;
        const OrbitReport orb = orbit_minimality(T, z, sc.orbit_horizon, oopts);
        rep.set_timing("orbit", sw.ms());
        rep.set_object("orbit_minimal", orb.minimal);
        rep.set_object("orbit_distances", VerificationReport::number_list(orb.distances));
        if (orb.failing_index)
            rep.set_object("orbit_failing_index",
                           static_cast<std::int64_t>(*orb.failing_index));
        if (orb.collapsed_at)
            rep.set_object("orbit_collapsed_at", static_cast<std::int64_t>(*orb.collapsed_at));
        if (sc.expect_minimal)
            rep.add_residual("orbit_expectation", orb.minimal == *sc.expect_minimal ? 0.0 : 1.0,
                             0.0);
        if (sc.expect_failing_index) {
            const bool ok = orb.failing_index && *orb.failing_index == *sc.expect_failing_index;
            rep.add_residual("orbit_failing_index_expectation", ok ? 0.0 : 1.0, 0.0);
        }
        if (orb.failing_index && orb.later_span_residual) {
            // Lemma-type refinement: at the smallest failing index the orbit
            // vector already lies in the span of the later vectors.
            const double scale =
                orb.orbit_norms[static_cast<size_t>(*orb.failing_index)];
            rep.add_residual("orbit_refinement", *orb.later_span_residual,
                             sc.orbit_delta * std::max(scale, 1e-300));
        }
    }

    if (sc.chain_max_steps > 0) {
        ran_any = true;
        Stopwatch sw;
        ChainOptions copts;
        copts.max_steps = sc.chain_max_steps;
        const ChainReport chain = dense_range_chain(T, copts);
        rep.set_timing("chain", sw.ms());
        {
            std::vector<double> codims;
            for (Index c : chain.codims) codims.push_back(static_cast<double>(c));
            rep.set_object("chain_codims", VerificationReport::number_list(codims));
        }
        rep.set_object("chain_degenerate", chain.degenerate);
        rep.set_object("chain_truncation_artifact", chain.truncation_artifact);
        if (chain.stabilized_at)
            rep.set_object("chain_stabilized_at",
                           static_cast<std::int64_t>(*chain.stabilized_at));
        if (chain.restriction)
            rep.set_object("chain_restriction_sigma_min",
                           VerificationReport::number(chain.restriction_sigma_min));
        if (sc.expect_chain_artifact)
            rep.add_residual("chain_expectation",
                             chain.truncation_artifact == *sc.expect_chain_artifact ? 0.0 : 1.0,
                             0.0);
    }

    if (!sc.contours.empty()) {
        ran_any = true;
        Stopwatch sw;
        RieszOptions ropts;
        ropts.nodes = sc.riesz_nodes;
        ropts.max_nodes = sc.riesz_max_nodes;
        const auto family = riesz_family(T, sc.contours, ropts);
        rep.set_timing("riesz", sw.ms());
        const double tnorm = operator_norm(T);
        double worst_idem = 0.0, worst_comm = 0.0;
        std::vector<double> nodes;
        for (const auto& rd : family) {
            const double pnorm = std::max(rd.P.norm(), 1e-300);
            worst_idem = std::max(worst_idem, rd.idempotency / pnorm);
            worst_comm = std::max(worst_comm, rd.commutation / (tnorm * pnorm));
            nodes.push_back(static_cast<double>(rd.nodes));
        }
        rep.set_object("riesz_nodes", VerificationReport::number_list(nodes));
        rep.add_residual("riesz_idempotency", worst_idem, cfg.tol("riesz"));
        rep.add_residual("riesz_commutation", worst_comm, cfg.tol("riesz"));
        if (!family.empty() && family.front().partition)
            rep.add_residual("riesz_partition", *family.front().partition, cfg.tol("riesz"));
    }

    if (!sc.eigen_select.empty()) {
        ran_any = true;
        const auto* diag = std::get_if<DiagonalTag>(&T.structure());
        if (!diag)
            fail_field("structure.eigen_select",
                       "eigen half-space selection needs a diagonal operator");
        std::vector<std::pair<Complex, CVector>> pairs;
        for (Index pos : sc.eigen_select) {
            if (pos < 0 || pos >= cfg.dim)
                fail_field("structure.eigen_select", "position out of range");
            pairs.emplace_back(diag->entries(pos), CVector::Unit(cfg.dim, pos));
        }
        const HalfSpaceRep hs = eigen_halfspace(T, pairs);
        const DefectReport defect = defect_estimate(T, hs);
        rep.set_object("eigen_halfspace_dim", static_cast<std::int64_t>(hs.dim));
        rep.add_residual("eigen_halfspace_defect", static_cast<double>(defect.defect), 0.0);
        rep.add_residual("eigen_halfspace_invariance", invariance_residual(T, hs),
                         cfg.tol("invariance"));
        // reported, never asserted: cancellation degrades near degeneracies
        const Eigen::MatrixXd cross = eigen_cross_pairing(T, pairs);
        double offdiag = 0.0;
        for (Index i = 0; i < cross.rows(); ++i)
            for (Index j = 0; j < cross.cols(); ++j)
                if (i != j) offdiag = std::max(offdiag, cross(i, j));
        rep.set_object("eigen_cross_pairing_offdiag", VerificationReport::number(offdiag));
    }

    if (!ran_any)
        fail_field("structure", "structure pipeline selected but no analysis configured");
    rep.set_timing("total", total.ms());
}

}  // namespace

double ScenarioConfig::tol(const std::string& key) const {
    const auto it = tolerances.find(key);
    if (it == tolerances.end()) fail_field("tolerances." + key, "missing");
    return it->second;
}

ScenarioConfig parse_scenario_config(const std::string& text, const std::string& origin) {
    const toml::Document doc = toml::parse_string(text, origin);
    ScenarioConfig cfg;

    const auto get = [&](const std::string& table, const std::string& key) {
        return doc.find(table, key);
    };

    // [scenario]
    if (const auto* v = get("scenario", "name")) cfg.name = v->as_string();
    if (cfg.name.empty()) fail_field("scenario.name", "missing or empty");
    if (const auto* v = get("scenario", "pipeline")) cfg.pipeline = v->as_string();
    if (cfg.pipeline != "defect_one" && cfg.pipeline != "small_norm" &&
        cfg.pipeline != "bridge" && cfg.pipeline != "structure")
        fail_field("scenario.pipeline",
                   "must be one of defect_one, small_norm, bridge, structure");
    if (const auto* v = get("scenario", "seed")) cfg.seed = static_cast<std::uint64_t>(v->as_int());

    // [operator]
    if (const auto* v = get("operator", "kind")) cfg.operator_kind = v->as_string();
    if (!zoo_find(cfg.operator_kind))
        fail_field("operator.kind", "unknown zoo operator '" + cfg.operator_kind + "'");
    if (const auto* v = get("operator", "dim")) cfg.dim = static_cast<Index>(v->as_int());
    if (cfg.dim < 16) fail_field("operator.dim", "must be >= 16");
    if (const toml::Table* t = doc.find_table("operator")) {
        for (const auto& [k, v] : *t) {
            if (k == "kind" || k == "dim") continue;
            if (!v.is_number()) fail_field("operator." + k, "must be numeric");
            cfg.operator_extra[k] = v.as_double();
        }
    }

    // [family]
    if (const auto* v = get("family", "boundary_re"))
        cfg.boundary = Complex(v->as_double(), cfg.boundary.imag());
    if (const auto* v = get("family", "boundary_im"))
        cfg.boundary = Complex(cfg.boundary.real(), v->as_double());
    if (const auto* v = get("family", "q"))
        cfg.schedule.q = require_positive(v->as_double(), "family.q");
    if (const auto* v = get("family", "r")) {
        cfg.schedule.r = v->as_double();
        if (!(cfg.schedule.r > 0.0 && cfg.schedule.r < 1.0))
            fail_field("family.r", "must lie in (0, 1)");
    }
    if (const auto* v = get("family", "count"))
        cfg.schedule.count = static_cast<Index>(v->as_int());
    if (cfg.schedule.count < 1) fail_field("family.count", "must be >= 1");
    // the family functionals define the proxy half-space in these pipelines
    if (cfg.pipeline != "structure" && cfg.schedule.count > cfg.dim / 8)
        fail_field("family.count", "half-space proxy requires count <= dim / 8");
    if (const auto* v = get("family", "estar")) cfg.estar = v->as_string();
    if (const auto* v = get("family", "candidates")) {
        for (const auto& c : v->as_array()) cfg.estar_candidates.push_back(c.as_string());
    }

    // [budget]
    if (const auto* v = get("budget", "eps"))
        cfg.eps = require_positive(v->as_double(), "budget.eps");

    // [selection]
    if (const auto* v = get("selection", "kappa_max"))
        cfg.selection.kappa_max = require_positive(v->as_double(), "selection.kappa_max");
    if (const auto* v = get("selection", "gamma_growth"))
        cfg.selection.gamma_growth =
            require_positive(v->as_double(), "selection.gamma_growth");

    // [bridge]
    if (const auto* v = get("bridge", "declared_asymmetric"))
        cfg.bridge_declared_asymmetric = v->as_bool();
    if (cfg.bridge_declared_asymmetric && cfg.operator_kind != "jordan_chain_pair")
        fail_field("bridge.declared_asymmetric",
                   "only supported for operator 'jordan_chain_pair'");

    // [structure]
    if (const toml::Table* t = doc.find_table("structure")) {
        StructureConfig& sc = cfg.structure;
        for (const auto& [k, v] : *t) {
            if (k == "orbit_vector") sc.orbit_vector = v.as_string();
            else if (k == "orbit_horizon") sc.orbit_horizon = static_cast<Index>(v.as_int());
            else if (k == "orbit_delta") sc.orbit_delta = require_positive(v.as_double(), "structure.orbit_delta");
            else if (k == "expect_minimal") sc.expect_minimal = v.as_bool();
            else if (k == "expect_failing_index") sc.expect_failing_index = static_cast<Index>(v.as_int());
            else if (k == "chain_max_steps") sc.chain_max_steps = static_cast<Index>(v.as_int());
            else if (k == "expect_chain_artifact") sc.expect_chain_artifact = v.as_bool();
            else if (k == "riesz_nodes") sc.riesz_nodes = static_cast<Index>(v.as_int());
            else if (k == "riesz_max_nodes") sc.riesz_max_nodes = static_cast<Index>(v.as_int());
            else if (k == "contour_centers_re") {
                for (const auto& c : v.as_array()) {
                    sc.contours.emplace_back(Complex(c.as_double(), 0.0), 0.0);
                }
            } else if (k == "contour_radii") {
                // matched against centers below
            } else if (k == "eigen_select") {
                for (const auto& c : v.as_array())
                    sc.eigen_select.push_back(static_cast<Index>(c.as_int()));
            } else {
                fail_field("structure." + k, "unknown key");
            }
        }
        if (const auto* rad = get("structure", "contour_radii")) {
            const auto& arr = rad->as_array();
            if (arr.size() != sc.contours.size())
                fail_field("structure.contour_radii",
                           "length must match contour_centers_re");
            for (size_t i = 0; i < arr.size(); ++i) {
                sc.contours[i].second =
                    require_positive(arr[i].as_double(), "structure.contour_radii");
            }
        } else if (!sc.contours.empty()) {
            fail_field("structure.contour_radii", "missing while centers are present");
        }
    }

    // [tolerances]
    cfg.tolerances = default_tolerances();
    if (const toml::Table* t = doc.find_table("tolerances")) {
        for (const auto& [k, v] : *t) {
            if (!v.is_number()) fail_field("tolerances." + k, "must be numeric");
            cfg.tolerances[k] = require_positive(v.as_double(), "tolerances." + k);
        }
    }
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_config(ss.str(), path);
}

void apply_overrides(ScenarioConfig& cfg, const ScenarioOverrides& ovr) {
    if (ovr.dim) {
        if (*ovr.dim < 16) fail_field("--dim", "must be >= 16");
        cfg.dim = *ovr.dim;
    }
    if (ovr.eps) cfg.eps = require_positive(*ovr.eps, "--eps");
    if (ovr.seed) cfg.seed = *ovr.seed;
    for (const auto& [key, val] : ovr.tol_overrides)
        cfg.tolerances[key] = require_positive(val, "--tol-override " + key);
    if (cfg.pipeline != "structure" && cfg.schedule.count > cfg.dim / 8)
        fail_field("family.count", "half-space proxy requires count <= dim / 8");
}

VerificationReport run_scenario(const ScenarioConfig& cfg) {
    VerificationReport rep(cfg.name);
    try {
        if (cfg.pipeline == "defect_one") pipeline_defect_one(cfg, rep);
        else if (cfg.pipeline == "small_norm") pipeline_small_norm(cfg, rep);
        else if (cfg.pipeline == "bridge") pipeline_bridge(cfg, rep);
        else if (cfg.pipeline == "structure") pipeline_structure(cfg, rep);
        else fail_field("scenario.pipeline", "unknown pipeline " + cfg.pipeline);
    } catch (const Error& e) {
        rep.note_error(e.kind(), e.what());
    } catch (const std::exception& e) {
        rep.note_error("InternalError", e.what());
    }
    return rep;
}

std::string zoo_listing(const std::string& filter) {
    std::ostringstream out;
    for (const auto& e : zoo_entries()) {
        if (!filter.empty() && e.name.find(filter) == std::string::npos) continue;
        out << e.name << "\n  " << e.description << "\n  facts: " << e.spectral_facts << "\n";
    }
    return out.str();
}

}  // namespace aihs
