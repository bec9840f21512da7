#include "squidflux/app.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "squidflux/csv.hpp"
#include "squidflux/figures.hpp"
#include "squidflux/planner.hpp"
#include "squidflux/stability.hpp"
#include "squidflux/tdm.hpp"
#include "squidflux/thermal.hpp"

namespace squidflux::app {

namespace {

namespace fs = std::filesystem;
using csv::num;
using nlohmann::ordered_json;

struct CommonOpts {
    std::string config_path;
    std::string out = "";
    std::string format = "csv";
    std::uint64_t seed = 20240901;
    int threads = 0;

    [[nodiscard]] int effective_threads() const {
        if (threads > 0) return threads;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? static_cast<int>(hw) : 1;
    }
};

void add_common(CLI::App* sub, CommonOpts& opts, bool needs_config = true) {
    auto* cfg = sub->add_option("--config", opts.config_path, "circuit parameter file");
    if (needs_config) cfg->required();
    sub->add_option("--out", opts.out, "output path");
    sub->add_option("--format", opts.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", opts.seed, "random seed for stochastic models");
    sub->add_option("--threads", opts.threads, "worker threads (default: hardware)");
}

void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opts.out);
        if (!out) throw ConfigError("cannot write '" + opts.out + "'");
        out << text;
    }
}

std::string kv_text(const std::vector<std::pair<std::string, std::string>>& fields,
                    const std::string& format) {
    if (format == "json") {
        ordered_json j;
        for (const auto& [k, v] : fields) {
            try {
                std::size_t pos = 0;
                const double d = std::stod(v, &pos);
                if (pos == v.size()) {
                    j[k] = d;
                    continue;
                }
            } catch (const std::exception&) {
            }
            j[k] = v;
        }
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, _] : fields) {
        out << (first ? "" : ",") << k;
        first = false;
    }
    out << "\n";
    first = true;
    for (const auto& [_, v] : fields) {
        out << (first ? "" : ",") << v;
        first = false;
    }
    out << "\n";
    return out.str();
}

// ---------------------------------------------------------------------- cmds

int cmd_derive(const CommonOpts& opts, double ir_ua) {
    const CircuitConfig cfg = load_circuit_config(opts.config_path);
    SquidParams p = cfg.squid;
    double q = 0.0;
    if (ir_ua > 0.0) {
        const IvFitResult fit = fit_from_iv({p.ic, ir_ua * 1e-6, p.r}, p.l);
        p = fit.params;
        q = fit.q;
    }
    const DerivedParams d = derive_params(p);
    const DampingClass damping = classify_damping(d);
    std::vector<std::pair<std::string, std::string>> fields{
        {"beta_e", num(d.beta_e)},
        {"beta", num(d.beta)},
        {"beta_c", num(d.beta_c)},
        {"damping_ratio", num(damping.ratio)},
        {"regime", damping.underdamped() ? "underdamped" : "critical-or-overdamped"},
        {"omega_p0_over_2pi_GHz", num(d.omega_p0 / kTwoPi / 1e9)},
        {"tau0_ps", num(d.tau0 * 1e12)},
        {"c_pF", num(p.c * 1e12)},
    };
    if (q > 0.0) fields.emplace_back("q_from_iv", num(q));
    emit(opts, kv_text(fields, opts.format));
    return 0;
}

int cmd_wells(const CommonOpts& opts, double xe) {
    const CircuitConfig cfg = load_circuit_config(opts.config_path);
    const WellCensus census = enumerate_wells(cfg.squid, xe);
    csv::Writer w(opts.out.empty() ? "wells.csv" : opts.out, "n,phi_phi0,current_uA,depth_ej");
    for (const WellState& well : census.wells) {
        w.row({std::to_string(well.index), num(well.flux), num(well.current * 1e6),
               num(well.depth)});
    }
    std::cout << census.wells.size() << " wells ("
              << (census.regime == WellRegime::Hysteretic ? "hysteretic" : "single-valued")
              << ")\n";
    return 0;
}

int cmd_hysteresis(const CommonOpts& opts, double lo, double hi, int points, double env,
                   bool dynamic_jumps) {
    const CircuitConfig cfg = load_circuit_config(opts.config_path);
    JumpPolicy policy;
    if (dynamic_jumps) policy = damping_jump_policy(cfg.squid);
    const HysteresisCurve curve = hysteresis_curve(cfg.squid, lo, hi, points, env, policy);
    csv::Writer w(opts.out.empty() ? "hysteresis.csv" : opts.out, "phi_e_phi0,phi_phi0,branch");
    for (std::size_t i = 0; i < curve.up.xe.size(); ++i) {
        w.row({num(curve.up.xe[i]), num(curve.up.x[i]), "up"});
    }
    for (std::size_t i = 0; i < curve.down.xe.size(); ++i) {
        w.row({num(curve.down.xe[i]), num(curve.down.x[i]), "down"});
    }
    return 0;
}

int cmd_simulate(const CommonOpts& opts, int start_well, double amplitude, double duration_tau,
                 double rise_tau, double horizon_tau) {
    const CircuitConfig cfg = load_circuit_config(opts.config_path);
    const DerivedParams d = derive_params(cfg.squid);
    const FluxPulse pulse = make_pulse_tau(d, amplitude, duration_tau, rise_tau, 5.0);
    IntegratorControls ctl;
    ctl.max_horizon = horizon_tau;
    const TransitionResult tr = pulse_transition(cfg.squid, start_well, pulse, ctl);
    csv::Writer w(opts.out.empty() ? "trajectory.csv" : opts.out, "tau,x_phi0,dxdtau,xe_phi0");
    const Trajectory& traj = *tr.trajectory;
    for (std::size_t i = 0; i < traj.tau.size(); ++i) {
        w.row({num(traj.tau[i]), num(traj.x[i]), num(traj.dxdtau[i]), num(traj.xe[i])});
    }
    ordered_json j;
    j["initial_well"] = tr.initial_index;
    j["final_well"] = tr.final_index;
    j["delta_phi_phi0"] = tr.delta_phi;
    j["settled"] = tr.settled;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const CommonOpts& opts, bool fig1e, double ratio, int start_well,
              std::vector<double> amplitudes) {
    SquidParams p{};
    if (fig1e) {
        const double ic = 100e-6, l = 1e-9, c = 2e-12;
        p = {ic, l, c, shunt_for_damping_ratio(ic, l, c, ratio)};
    } else {
        p = load_circuit_config(opts.config_path).squid;
    }
    const DerivedParams d = derive_params(p);
    if (amplitudes.empty()) {
        for (int n = 0; n <= 10; ++n) amplitudes.push_back(d.alpha() + n);
    }
    const SweepResult sweep = transition_sweep(p, start_well, amplitudes);
    csv::Writer w(opts.out.empty() ? "sweep.csv" : opts.out,
                  "amplitude_phi0,delta_phi_phi0,final_n,settled");
    for (std::size_t i = 0; i < sweep.transitions.size(); ++i) {
        const TransitionResult& tr = sweep.transitions[i];
        w.row({num(sweep.amplitudes[i]), num(tr.delta_phi), std::to_string(tr.final_index),
               tr.settled ? "1" : "0"});
    }
    ordered_json j;
    j["slope"] = sweep.fit.slope;
    j["intercept"] = sweep.fit.intercept;
    j["points"] = sweep.fit.points;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_plan(const CommonOpts& opts, int from, int to, double basic, double precomp,
             bool use_env) {
    const CircuitConfig cfg = load_circuit_config(opts.config_path);
    const DerivedParams d = derive_params(cfg.squid);
    PlanConfig plan_cfg;
    plan_cfg.env_offset = use_env ? cfg.env_flux : 0.0;
    plan_cfg.precomp = precomp;
    plan_cfg.basic_transition = basic;

    PulsePlan plan;
    if (classify_damping(d).underdamped()) {
        if (plan_cfg.basic_transition == 0.0) {
            const CalibrationResult cal = calibrate_basic_transition(cfg.squid, from);
            if (!cal.calibrated) {
                throw std::runtime_error("plan: basic-transition calibration failed");
            }
            plan_cfg.basic_transition = cal.basic_transition;
        }
        plan = plan_underdamped(from, to, cfg.squid, plan_cfg);
    } else {
        plan = plan_overdamped(from, to, cfg.squid, plan_cfg);
    }
    emit(opts, plan_to_json(plan, d));
    return 0;
}

int cmd_verify(const CommonOpts& opts, const std::string& plan_path, bool use_env,
               double line_loss) {
    const CircuitConfig cfg = load_circuit_config(opts.config_path);
    const DerivedParams d = derive_params(cfg.squid);
    std::ifstream in(plan_path);
    if (!in) throw ConfigError("verify: cannot open plan '" + plan_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const PulsePlan plan = plan_from_json(buffer.str(), d);

    PlanConfig plan_cfg;
    plan_cfg.env_offset = use_env ? cfg.env_flux : 0.0;
    const VerifyResult vr = verify_plan(plan, cfg.squid, plan_cfg, {}, line_loss);
    ordered_json j;
    j["reached"] = vr.reached;
    j["target_well"] = plan.target_index;
    j["achieved_well"] = vr.achieved_index;
    j["path"] = vr.path;
    emit(opts, j.dump(2) + "\n");
    return 0;
}

int cmd_qubit_census(const CommonOpts& opts) {
    const CircuitConfig cfg = load_circuit_config(opts.config_path);
    const auto rows = qubit_census(cfg.squid, cfg.coupling, cfg.transmon);
    csv::Writer w(opts.out.empty() ? "qubit_census.csv" : opts.out,
                  "n,squid_phi_phi0,qubit_flux_phi0,f01_GHz");
    for (const CensusRow& row : rows) {
        w.row({std::to_string(row.index), num(row.squid_flux), num(row.qubit_flux),
               num(row.f01)});
    }
    return 0;
}

int cmd_thermal(const CommonOpts& opts) {
    const CircuitConfig cfg = load_circuit_config(opts.config_path);
    const SquidParams& p = cfg.squid;
    const double ili = p.l * p.ic / PhysicalConstants::phi0;
    csv::Writer w(opts.out.empty() ? "thermal.csv" : opts.out,
                  "n,i,log10_rate_20mK,log10_rate_100mK,log10_lifetime_s");
    for (const WellState& well : enumerate_wells(p, 0.0).wells) {
        const double i = std::abs(well.flux) / ili;
        const EscapeResult cold = escape_rate({i, 0.020}, p);
        const EscapeResult warm = escape_rate({i, 0.100}, p);
        w.row({std::to_string(well.index), num(i), num(cold.log10_rate), num(warm.log10_rate),
               num(lifetime_log10_s(cold))});
    }
    const MaxRate cold = max_rate_over_wells(p, 0.020);
    ordered_json j;
    j["argmax_well"] = cold.index;
    j["log10_rate_20mK"] = cold.result.log10_rate;
    j["log10_lifetime_s_20mK"] = lifetime_log10_s(cold.result);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_stability(const CommonOpts& opts, const std::string& trace_path, double kv,
                  double offset_phi0, double f01_measured, const DacModel& dac, bool use_dac,
                  double duration, double period) {
    const CircuitConfig cfg = load_circuit_config(opts.config_path);
    VoltageTrace trace;
    if (use_dac) {
        trace = dac_noise_trace(dac, duration, period, opts.seed);
    } else if (!trace_path.empty()) {
        trace = load_trace_csv(trace_path);
    } else {
        throw ConfigError("stability: provide --trace or --dac");
    }
    const FluxSeries flux = transduce(trace, kv);
    if (f01_measured > 0.0) {
        offset_phi0 = infer_squid_state(f01_measured, cfg.transmon, cfg.coupling).qubit_flux;
    }
    const FluxNoiseStats stats = flux_stats(flux.samples, offset_phi0);
    if (!opts.out.empty()) {
        csv::Writer w(opts.out, "t_s,flux_uphi0");
        for (std::size_t i = 0; i < flux.samples.size(); ++i) {
            w.row({num(static_cast<double>(i) * flux.period), num(flux.samples[i])});
        }
    }
    ordered_json j;
    j["p2p_uphi0"] = stats.p2p;
    j["std_uphi0"] = stats.std_dev;
    if (stats.rsd_ppm) {
        j["rsd_ppm"] = *stats.rsd_ppm;
    } else {
        j["rsd_ppm"] = nullptr;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_tdm(const CommonOpts& opts, long qubits, long couplers, bool campaign) {
    const Fabric fabric = build_fabric(qubits, couplers);
    const CableCount cables = cable_count(fabric.n_qubits, fabric.n_couplers);
    if (!opts.out.empty()) {
        const TruthTable table = truth_table(fabric);
        csv::Writer w(opts.out, "code,channel,kind");
        for (const TruthTableRow& row : table.used) {
            w.row({row.code, std::to_string(row.channel),
                   row.kind == ChannelKind::Qubit ? "qubit" : "coupler"});
        }
    }
    ordered_json j;
    j["qubits"] = fabric.n_qubits;
    j["couplers"] = fabric.n_couplers;
    j["channels"] = fabric.n_channels;
    j["depth"] = fabric.depth;
    j["classical_cables"] = cables.classical;
    j["tdm_cables"] = cables.tdm;
    if (campaign) {
        FluxPulse pulse;
        pulse.amplitude = 1.0;
        pulse.duration = 1e-9;
        pulse.rise_time = 0.0;
        const CampaignReport report = address_campaign(fabric, pulse);
        j["campaign"] = {{"deliveries", report.deliveries},
                         {"each_exactly_once", report.each_exactly_once},
                         {"cables_used", report.cables_used}};
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_reproduce(const CommonOpts& opts, const std::string& tag) {
    const CircuitConfig cfg = load_circuit_config(opts.config_path);
    const std::string outdir = opts.out.empty() ? ("fig" + tag) : opts.out;

    std::vector<std::string> tags;
    if (tag == "all") {
        tags = figure_tags();
    } else {
        tags.push_back(tag);
    }
    bool all_ok = true;
    for (const std::string& t : tags) {
        const FigureOutput out =
            reproduce_figure(t, cfg, outdir, opts.seed, opts.effective_threads());
        for (const CheckRecord& c : out.checks) {
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.check << " (expected "
                      << num(c.expected) << ", got " << num(c.got) << ", tolerance "
                      << num(c.tolerance) << ")\n";
            all_ok = all_ok && c.pass;
        }
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"rf-SQUID flux-bias simulation and pulse-planning toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;

    // derive
    auto* derive = app.add_subcommand("derive", "derived dimensionless parameters");
    add_common(derive, opts);
    double ir_ua = 0.0;
    derive->add_option("--ir-uA", ir_ua, "retrapping current; fits C from the I-V curve");

    // wells
    auto* wells = app.add_subcommand("wells", "metastable well census");
    add_common(wells, opts);
    double wells_xe = 0.0;
    wells->add_option("--xe", wells_xe, "external flux, phi0");

    // hysteresis
    auto* hyst = app.add_subcommand("hysteresis", "quasi-static hysteresis sweep");
    add_common(hyst, opts);
    double hyst_lo = -150.0, hyst_hi = 150.0, hyst_env = 0.0;
    int hyst_points = 1501;
    bool hyst_dynamic = false;
    hyst->add_option("--min", hyst_lo, "sweep start, phi0");
    hyst->add_option("--max", hyst_hi, "sweep end, phi0");
    hyst->add_option("--points", hyst_points, "samples per branch");
    hyst->add_option("--env", hyst_env, "environmental flux offset, phi0");
    hyst->add_flag("--dynamic-jumps", hyst_dynamic, "resolve jumps through the dynamics");

    // simulate
    auto* sim = app.add_subcommand("simulate", "single pulse-driven trajectory");
    add_common(sim, opts);
    int sim_well = 0;
    double sim_amp = 0.0, sim_dur = 400.0, sim_rise = 5.0, sim_horizon = 40000.0;
    sim->add_option("--start-well", sim_well, "initial well index");
    sim->add_option("--amplitude", sim_amp, "pulse amplitude, phi0")->required();
    sim->add_option("--duration-tau", sim_dur, "pulse duration, tau units");
    sim->add_option("--rise-tau", sim_rise, "edge ramp, tau units");
    sim->add_option("--horizon-tau", sim_horizon, "ring-down cutoff, tau units");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "transition sweep and linear fit");
    add_common(sweep, opts, false);
    bool sweep_fig1e = false;
    double sweep_ratio = 1.0;
    int sweep_well = 0;
    std::vector<double> sweep_amps;
    sweep->add_flag("--fig1e", sweep_fig1e, "use the reference simulation circuit");
    sweep->add_option("--ratio", sweep_ratio, "damping ratio beta/beta_c for --fig1e");
    sweep->add_option("--start-well", sweep_well, "initial well index");
    sweep->add_option("--amplitudes", sweep_amps, "explicit amplitude list, phi0");

    // plan
    auto* plan = app.add_subcommand("plan", "compute a pulse plan");
    add_common(plan, opts);
    int plan_from = 0, plan_to = 0;
    double plan_basic = 0.0, plan_precomp = 0.0;
    bool plan_env = false;
    plan->add_option("--from", plan_from, "initial well index")->required();
    plan->add_option("--to", plan_to, "target well index")->required();
    plan->add_option("--basic", plan_basic, "calibrated basic transition, phi0");
    plan->add_option("--precomp", plan_precomp, "precompensation, phi0");
    plan->add_flag("--env", plan_env, "apply the config's environmental offset");

    // verify
    auto* verify = app.add_subcommand("verify", "execute a plan through the dynamics");
    add_common(verify, opts);
    std::string verify_plan_path;
    bool verify_env = false;
    double verify_loss = 0.0;
    verify->add_option("--plan", verify_plan_path, "plan JSON file")->required();
    verify->add_flag("--env", verify_env, "apply the config's environmental offset");
    verify->add_option("--line-loss", verify_loss, "delivered-amplitude loss, phi0");

    // qubit-census
    auto* census = app.add_subcommand("qubit-census", "well-to-frequency census");
    add_common(census, opts);

    // thermal
    auto* thermal = app.add_subcommand("thermal", "thermal escape rates per well");
    add_common(thermal, opts);

    // stability
    auto* stability = app.add_subcommand("stability", "flux-noise transduction stats");
    add_common(stability, opts);
    std::string stab_trace;
    double stab_kv = kFluxPerVoltDefault, stab_offset = 0.0, stab_f01 = 0.0;
    bool stab_dac = false;
    DacModel dac;
    double stab_duration = 200.0 * 120.0, stab_period = 120.0;
    stability->add_option("--trace", stab_trace, "voltage trace CSV (t_s,v_rel_V)");
    stability->add_option("--kv", stab_kv, "flux per volt, phi0/V");
    stability->add_option("--offset-phi0", stab_offset, "mean qubit flux offset, phi0");
    stability->add_option("--f01-GHz", stab_f01, "infer the offset from a measured f01");
    stability->add_flag("--dac", stab_dac, "synthesize a DAC noise trace");
    stability->add_option("--dac-bits", dac.bits, "DAC resolution");
    stability->add_option("--dac-fullscale", dac.fullscale, "DAC full scale, V");
    stability->add_option("--dac-noise-p2p", dac.noise_p2p, "jitter peak-to-peak, V");
    stability->add_option("--dac-setpoint", dac.setpoint, "DAC setpoint, V");
    stability->add_option("--duration", stab_duration, "trace duration, s");
    stability->add_option("--period", stab_period, "sample period, s");

    // tdm
    auto* tdm = app.add_subcommand("tdm", "switch-tree control fabric");
    add_common(tdm, opts, false);
    long tdm_qubits = 64, tdm_couplers = -1;
    bool tdm_campaign = false;
    tdm->add_option("--qubits", tdm_qubits, "qubit count");
    tdm->add_option("--couplers", tdm_couplers, "coupler count (default 2x qubits)");
    tdm->add_flag("--campaign", tdm_campaign, "address every channel once");

    // reproduce
    auto* repro = app.add_subcommand("reproduce", "regenerate figure data with checks");
    add_common(repro, opts);
    std::string repro_tag;
    repro->add_option("--tag", repro_tag, "figure tag (1c..3, or 'all')")->required();

    std::vector<const char*> argv;
    argv.push_back("squidflux");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (derive->parsed()) return cmd_derive(opts, ir_ua);
        if (wells->parsed()) return cmd_wells(opts, wells_xe);
        if (hyst->parsed()) {
            return cmd_hysteresis(opts, hyst_lo, hyst_hi, hyst_points, hyst_env, hyst_dynamic);
        }
        if (sim->parsed()) {
            return cmd_simulate(opts, sim_well, sim_amp, sim_dur, sim_rise, sim_horizon);
        }
        if (sweep->parsed()) {
            if (!sweep_fig1e && opts.config_path.empty()) {
                throw ConfigError("sweep: provide --config or --fig1e");
            }
            return cmd_sweep(opts, sweep_fig1e, sweep_ratio, sweep_well, sweep_amps);
        }
        if (plan->parsed()) {
            return cmd_plan(opts, plan_from, plan_to, plan_basic, plan_precomp, plan_env);
        }
        if (verify->parsed()) return cmd_verify(opts, verify_plan_path, verify_env, verify_loss);
        if (census->parsed()) return cmd_qubit_census(opts);
        if (thermal->parsed()) return cmd_thermal(opts);
        if (stability->parsed()) {
            return cmd_stability(opts, stab_trace, stab_kv, stab_offset, stab_f01, dac,
                                 stab_dac, stab_duration, stab_period);
        }
        if (tdm->parsed()) return cmd_tdm(opts, tdm_qubits, tdm_couplers, tdm_campaign);
        if (repro->parsed()) return cmd_reproduce(opts, repro_tag);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace squidflux::app
