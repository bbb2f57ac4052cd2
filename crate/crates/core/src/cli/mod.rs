//! Command-line front end behind the `jcgraph` binary.

pub mod config;

use std::ffi::OsString;
use std::f64::consts::TAU;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code_construction::{
    decompose, dmin_sweep, minimal_k0, minimal_m0, resonant_sweep, write_sweep_csv, CodeSpec, GridAxis,
};
use crate::format::round_sig;
use crate::gk_states::{
    builtin_family, dump_family, jc_families, max_safe_x, verify_resolution, verify_temporal_stability, JcFamilies,
    WeightFamily,
};
use crate::graph_verify::{
    generator, leaked_state, random_code_state, random_combinations, transmit_demo, verify_anticlique,
    verify_identity_membership, CheckRecord, VerificationReport,
};
use crate::hilbert::{outer, QuadratureRule, StateVector, TruncationConfig, C64};
use crate::jc_spectrum::{spectrum_diagnostics, JcParams};
use config::FileConfig;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Minimum gap between the code cut K₀ and the photon cutoff N.
pub const HEADROOM: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "jcgraph", version, about = "Jaynes-Cummings operator-graph codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print M0, K0*, the minimal code dimension and dim H3 as JSON.
    Mindim(RunArgs),
    /// Write the minimal code dimension over a grid of coupling rates as CSV.
    Sweep(SweepArgs),
    /// Run the full verification suite and emit a JSON report.
    Verify(RunArgs),
    /// Send a code state through the projective channel and print its fidelity.
    Demo(DemoArgs),
    /// Dump the coefficients of a coherent-state family as JSON.
    GkDump(DumpArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Field frequency (rad/s, or Hz with --hz). Reference scale when rates are given.
    #[arg(long)]
    pub omega_f: Option<f64>,
    /// Qubit frequency.
    #[arg(long)]
    pub omega_s: Option<f64>,
    /// Coupling constant.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Coupling rate kappa / omega_f.
    #[arg(long)]
    pub gamma_f: Option<f64>,
    /// Coupling rate kappa / omega_s.
    #[arg(long)]
    pub gamma_s: Option<f64>,
    /// Frequencies are given in Hz; multiply by 2π.
    #[arg(long)]
    pub hz: bool,
    /// Code cut K0 (defaults to K0*).
    #[arg(long)]
    pub k0: Option<usize>,
    /// Photon-number cutoff N.
    #[arg(long)]
    pub n_fock: Option<usize>,
    /// Weight family of the J coherent states.
    #[arg(long)]
    pub family1: Option<String>,
    /// Weight family of the S coherent states.
    #[arg(long)]
    pub family2: Option<String>,
    /// Quadrature nodes.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Tolerance for the anticlique checks.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for sampled checks and random states.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.5)]
    pub gamma_f_min: f64,
    #[arg(long, default_value_t = 16.0)]
    pub gamma_f_max: f64,
    #[arg(long, default_value_t = 50)]
    pub gamma_f_steps: usize,
    #[arg(long, default_value_t = 0.5)]
    pub gamma_s_min: f64,
    #[arg(long, default_value_t = 16.0)]
    pub gamma_s_max: f64,
    #[arg(long, default_value_t = 50)]
    pub gamma_s_steps: usize,
    /// Only the resonant line gamma_s = gamma_f.
    #[arg(long)]
    pub resonant: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Evolution time of the channel.
    #[arg(long = "t", default_value_t = 1e-3)]
    pub t: f64,
    /// Coherent-state label of the channel projectors.
    #[arg(long = "x", default_value_t = 0.7)]
    pub x: f64,
    /// basis:<i>, random:<seed> or uniform.
    #[arg(long, default_value = "uniform")]
    pub state: String,
    /// Mix part of |1,+⟩ into the input instead of refusing it.
    #[arg(long)]
    pub allow_leak: bool,
    /// Weight of the leaked component.
    #[arg(long, default_value_t = 0.5)]
    pub leak: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// j (the J family over H1) or s (the S family over H2).
    #[arg(long, default_value = "j")]
    pub which: String,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0])]
    pub xs: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0])]
    pub ys: Vec<f64>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: JcParams,
    pub k0: Option<usize>,
    pub n_fock: usize,
    pub family1: WeightFamily,
    pub family2: WeightFamily,
    pub nodes: usize,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub const DEFAULT_N: usize = 60;
    pub const DEFAULT_TOL: f64 = 1e-8;

    pub fn resolve(args: &RunArgs) -> Result<Self, String> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let p = &file.params;
        let scale = if args.hz || p.hz.unwrap_or(false) { TAU } else { 1.0 };
        let omega_f = args.omega_f.or(p.omega_f);
        let omega_s = args.omega_s.or(p.omega_s);
        let kappa = args.kappa.or(p.kappa);
        let gamma_f = args.gamma_f.or(p.gamma_f);
        let gamma_s = args.gamma_s.or(p.gamma_s);

        let rates = gamma_f.is_some() || gamma_s.is_some();
        let triple = omega_s.is_some() || kappa.is_some();
        let params = match (rates, triple) {
            (true, true) => {
                return Err("give either --omega-f/--omega-s/--kappa or --gamma-f/--gamma-s, not both".into())
            }
            (true, false) => {
                let (Some(gf), Some(gs)) = (gamma_f, gamma_s) else {
                    return Err("the rate pair needs both --gamma-f and --gamma-s".into());
                };
                JcParams::from_rates(gf, gs, omega_f.unwrap_or(1.0) * scale)
            }
            (false, _) => {
                let (Some(wf), Some(ws), Some(k)) = (omega_f, omega_s, kappa) else {
                    return Err("missing parameters: give --omega-f, --omega-s and --kappa, or --gamma-f and --gamma-s"
                        .into());
                };
                JcParams::new(wf * scale, ws * scale, k * scale)
            }
        }
        .map_err(|e| e.to_string())?;

        let family = |flag: &Option<String>, file: &Option<String>| -> Result<WeightFamily, String> {
            match flag.as_ref().or(file.as_ref()) {
                Some(name) => builtin_family(name).map_err(|e| e.to_string()),
                None => Ok(WeightFamily::Factorial),
            }
        };
        let nodes = args.nodes.or(file.gk.nodes).unwrap_or(QuadratureRule::DEFAULT_NODES);
        if nodes < 2 {
            return Err(format!("--nodes must be at least 2 (got {nodes})"));
        }
        let tol = args.tol.or(file.verify.tol).unwrap_or(Self::DEFAULT_TOL);
        if !(tol > 0.0) {
            return Err(format!("--tol must be positive (got {tol})"));
        }
        Ok(Self {
            params,
            k0: args.k0.or(file.code.k0),
            n_fock: args.n_fock.or(file.code.n_fock).unwrap_or(Self::DEFAULT_N),
            family1: family(&args.family1, &file.gk.family1)?,
            family2: family(&args.family2, &file.gk.family2)?,
            nodes,
            tol,
            out: args.out.clone().or(file.output.out),
            seed: args.seed.or(file.verify.seed).unwrap_or(0),
        })
    }

    pub fn m0(&self) -> usize {
        minimal_m0(&self.params)
    }

    /// The requested cut, or K₀* when none was given.
    pub fn k0(&self) -> usize {
        self.k0.unwrap_or_else(|| minimal_k0(self.m0()))
    }

    /// Truncation with the K₀ + 10 headroom enforced.
    pub fn truncation(&self) -> Result<TruncationConfig, String> {
        let k0 = self.k0();
        if self.n_fock < k0 + HEADROOM {
            return Err(format!("--n-fock {} leaves no headroom above K0 = {k0}; need N >= {}", self.n_fock, k0 + HEADROOM));
        }
        TruncationConfig::with_cutoff(self.n_fock).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MindimOutput {
    pub m0: usize,
    pub k0_star: usize,
    pub d_min: usize,
    pub dim_h3: usize,
}

pub fn mindim(params: &JcParams, k0: Option<usize>) -> MindimOutput {
    let m0 = minimal_m0(params);
    let k0_star = minimal_k0(m0);
    MindimOutput { m0, k0_star, d_min: k0_star - 1, dim_h3: k0.unwrap_or(k0_star) }
}

/// Time scale for sampled evolution times: 1/κ, or 1/ω_f without coupling.
fn time_scale(params: &JcParams) -> f64 {
    1.0 / if params.kappa() > 0.0 { params.kappa() } else { params.omega_f() }
}

fn failed(report: &mut VerificationReport, name: &str, err: impl std::fmt::Display, log: &mut dyn Write) {
    let _ = writeln!(log, "check {name} failed: {err}");
    report.push(CheckRecord::failed(name));
}

/// Spectrum, coherent-state, identity-membership, anticlique and channel
/// checks for one configuration. Checks that cannot run are recorded as
/// failures and explained on `log`.
pub fn verify_suite(cfg: &RunConfig, trunc: &TruncationConfig, log: &mut dyn Write) -> VerificationReport {
    let mut report = VerificationReport::default();
    let params = &cfg.params;

    // Absolute residuals are taken in units of ω_f.
    match params.rescaled(params.omega_f()).and_then(|p| spectrum_diagnostics(&p, trunc)) {
        Ok(d) => {
            report.push(CheckRecord::new("spectrum.eigen_residual", d.max_eigen_residual, 1e-10));
            report.push(CheckRecord::new("spectrum.gram_deviation", d.gram_deviation, 1e-10));
            report.push(CheckRecord::boolean("spectrum.j_increasing", d.min_j_gap > 0.0));
        }
        Err(e) => failed(&mut report, "spectrum", e, log),
    }

    let k0 = cfg.k0();
    let families = match jc_families(params, k0, cfg.family1, cfg.family2, trunc) {
        Ok(f) => f,
        Err(e) => {
            failed(&mut report, "jc_families", e, log);
            return report;
        }
    };
    let code = match decompose(params, k0, trunc) {
        Ok(c) => c,
        Err(e) => {
            failed(&mut report, "decompose", e, log);
            return report;
        }
    };

    for spec in [&families.j, &families.s] {
        let name = format!("gk.{}.{}", spec.label, spec.family);
        match spec.family.default_rule(cfg.nodes).and_then(|rule| verify_resolution(spec, &rule)) {
            Ok(r) => {
                report.push(CheckRecord::new(format!("{name}.moments"), r.max_diag_residual, 1e-8));
                report.push(CheckRecord::new(format!("{name}.resolution"), r.max_projector_residual, 1e-6));
            }
            Err(e) => failed(&mut report, &format!("{name}.resolution"), e, log),
        }
        let x_max = max_safe_x(spec.family, spec.len() - 1, trunc.tail_tol());
        let mut worst: f64 = 0.0;
        let mut error = None;
        for i in 0..3 {
            for j in 0..3 {
                let x = x_max * i as f64 / 3.0;
                let t = 0.37 * j as f64 * time_scale(params);
                match verify_temporal_stability(spec, params, x, t, trunc) {
                    Ok(f) => worst = worst.max((1.0 - f).abs()),
                    Err(e) => error = Some(e),
                }
            }
        }
        match error {
            Some(e) => failed(&mut report, &format!("{name}.temporal_stability"), e, log),
            None => report.push(CheckRecord::new(format!("{name}.temporal_stability"), worst, 1e-9)),
        }
    }

    membership_checks(cfg, &code, trunc, &mut report, log);
    anticlique_checks(cfg, &code, &families, trunc, &mut report, log);
    channel_checks(cfg, &code, &families, trunc, &mut report, log);
    report
}

fn membership_checks(
    cfg: &RunConfig,
    code: &CodeSpec,
    trunc: &TruncationConfig,
    report: &mut VerificationReport,
    log: &mut dyn Write,
) {
    let u = WeightFamily::UniformMoment;
    let result = jc_families(&cfg.params, code.k0, u, u, trunc).and_then(|fams| {
        let rule = u.default_rule(cfg.nodes)?;
        verify_identity_membership(code, &fams, &rule, trunc)
    });
    match result {
        Ok(r) => {
            report.push(CheckRecord::new("identity_membership", r.residual, 1e-6));
            report.push(CheckRecord::new("identity_membership.h3_block", r.h3_residual, 1e-10));
        }
        Err(e) => failed(report, "identity_membership", e, log),
    }
}

fn anticlique_checks(
    cfg: &RunConfig,
    code: &CodeSpec,
    families: &JcFamilies,
    trunc: &TruncationConfig,
    report: &mut VerificationReport,
    log: &mut dyn Write,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let x1 = max_safe_x(families.j.family, families.j.len() - 1, trunc.tail_tol());
    let x2 = max_safe_x(families.s.family, families.s.len() - 1, trunc.tail_tol());
    let scale = time_scale(&cfg.params);
    let mut generators = Vec::new();
    for _ in 0..30 {
        let j: u8 = rng.random_range(1..=3);
        let x = rng.random_range(0.0..=1.0) * if j == 2 { x2 } else { x1 };
        let t = rng.random_range(0.0..10.0) * scale;
        match generator(&cfg.params, code, families, j, x, t, trunc) {
            Ok(g) => generators.push(g),
            Err(e) => return failed(report, "anticlique", e, log),
        }
    }
    let mut samples: Vec<_> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| (format!("generator[{i}] j={}", g.j), g.operator.clone()))
        .collect();
    samples.extend(random_combinations(&generators, 5, &mut rng));

    for (name, p) in [("anticlique.h3", &code.p3), ("anticlique.code", &code.code_projector)] {
        match verify_anticlique(p, &samples, cfg.tol) {
            Ok(r) => {
                let worst = r.checks.iter().map(|c| c.residual).fold(0.0, f64::max);
                report.push(CheckRecord::new(name, worst, cfg.tol));
                // Generators from the two coherent families must be annihilated.
                let alpha = r
                    .checks
                    .iter()
                    .skip(1)
                    .zip(&generators)
                    .filter(|(_, g)| g.j != 3)
                    .filter_map(|(c, _)| c.alpha)
                    .map(|a| a.norm())
                    .fold(0.0, f64::max);
                report.push(CheckRecord::new(format!("{name}.alpha_zero"), alpha, cfg.tol));
                let id_alpha = r.checks[0].alpha.map_or(f64::INFINITY, |a| (a - C64::new(1.0, 0.0)).norm());
                report.push(CheckRecord::new(format!("{name}.alpha_identity"), id_alpha, cfg.tol));
            }
            Err(e) => failed(report, name, e, log),
        }
    }
}

fn channel_checks(
    cfg: &RunConfig,
    code: &CodeSpec,
    families: &JcFamilies,
    trunc: &TruncationConfig,
    report: &mut VerificationReport,
    log: &mut dyn Write,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let x1 = max_safe_x(families.j.family, families.j.len() - 1, trunc.tail_tol());
    let x2 = max_safe_x(families.s.family, families.s.len() - 1, trunc.tail_tol());
    let scale = time_scale(&cfg.params);
    let (mut fid, mut tr, mut neg) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..3 {
        let x = rng.random_range(0.0..=1.0) * x1.min(x2);
        let t = rng.random_range(0.0..10.0) * scale;
        for _ in 0..3 {
            let psi = random_code_state(code, &mut rng);
            match transmit_demo(&cfg.params, code, families, x, t, &outer(&psi, &psi), false, trunc) {
                Ok(out) => {
                    fid = fid.max(1.0 - out.fidelity);
                    tr = tr.max(out.trace_error);
                    neg = neg.max(-out.min_eigenvalue);
                }
                Err(e) => return failed(report, "channel", e, log),
            }
        }
    }
    report.push(CheckRecord::new("channel.fidelity", fid, 1e-8));
    report.push(CheckRecord::new("channel.trace", tr, 1e-10));
    report.push(CheckRecord::new("channel.positivity", neg.max(0.0), 1e-9));
}

/// Parse `basis:<i>`, `random:<seed>` or `uniform` into a code state.
pub fn parse_state(spec: &str, code: &CodeSpec) -> Result<StateVector, String> {
    let basis = code.code_basis();
    if spec == "uniform" {
        let v = basis.iter().fold(StateVector::zeros(basis[0].len()), |acc, b| acc + b);
        let n = v.norm();
        return Ok(v / C64::new(n, 0.0));
    }
    if let Some(i) = spec.strip_prefix("basis:") {
        let i: usize = i.parse().map_err(|_| format!("bad basis index in '{spec}'"))?;
        return basis
            .get(i)
            .cloned()
            .ok_or_else(|| format!("basis index {i} outside the {}-dimensional code", basis.len()));
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed.parse().map_err(|_| format!("bad seed in '{spec}'"))?;
        return Ok(random_code_state(code, &mut ChaCha8Rng::seed_from_u64(seed)));
    }
    Err(format!("unknown state '{spec}' (expected basis:<i>, random:<seed> or uniform)"))
}

enum Failure {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(Failure::from),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Mindim(args) => {
            let cfg = RunConfig::resolve(&args).map_err(Failure::Usage)?;
            emit(&cfg.out, &to_json(&mindim(&cfg.params, cfg.k0)), stdout)?;
            Ok(EXIT_PASS)
        }
        Command::Sweep(args) => {
            let gf = GridAxis::new(args.gamma_f_min, args.gamma_f_max, args.gamma_f_steps)?;
            let rows = if args.resonant {
                resonant_sweep(&gf)
            } else {
                dmin_sweep(&gf, &GridAxis::new(args.gamma_s_min, args.gamma_s_max, args.gamma_s_steps)?)
            };
            let mut buf = Vec::new();
            write_sweep_csv(&rows, &mut buf)?;
            emit(&args.out, &String::from_utf8(buf)?, stdout)?;
            Ok(EXIT_PASS)
        }
        Command::Verify(args) => {
            let cfg = RunConfig::resolve(&args).map_err(Failure::Usage)?;
            let trunc = cfg.truncation().map_err(Failure::Usage)?;
            let report = verify_suite(&cfg, &trunc, stderr);
            let mut text = report.to_json();
            text.push('\n');
            emit(&cfg.out, &text, stdout)?;
            Ok(if report.overall_pass() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Demo(args) => {
            let cfg = RunConfig::resolve(&args.run).map_err(Failure::Usage)?;
            let trunc = cfg.truncation().map_err(Failure::Usage)?;
            let code = decompose(&cfg.params, cfg.k0(), &trunc)?;
            let families = jc_families(&cfg.params, cfg.k0(), cfg.family1, cfg.family2, &trunc)?;
            let mut psi = parse_state(&args.state, &code).map_err(Failure::Usage)?;
            if args.allow_leak {
                psi = leaked_state(&psi, &cfg.params, args.leak, &trunc)?;
            }
            let out =
                transmit_demo(&cfg.params, &code, &families, args.x, args.t, &outer(&psi, &psi), args.allow_leak, &trunc)?;
            emit(&cfg.out, &format!("fidelity: {:.12}\n", out.fidelity), stdout)?;
            Ok(if out.fidelity >= 1.0 - 1e-8 { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::GkDump(args) => {
            let cfg = RunConfig::resolve(&args.run).map_err(Failure::Usage)?;
            let trunc = cfg.truncation().map_err(Failure::Usage)?;
            let families = jc_families(&cfg.params, cfg.k0(), cfg.family1, cfg.family2, &trunc)?;
            let spec = match args.which.as_str() {
                "j" => &families.j,
                "s" => &families.s,
                other => return Err(Failure::Usage(format!("--which must be j or s (got '{other}')"))),
            };
            let points: Vec<(f64, f64)> =
                args.xs.iter().flat_map(|&x| args.ys.iter().map(move |&y| (x, y))).collect();
            let mut dump = dump_family(spec, &points)?;
            dump.h.iter_mut().for_each(|h| *h = round_sig(*h, 12));
            for rec in &mut dump.coefficients {
                rec.re.iter_mut().chain(rec.im.iter_mut()).for_each(|v| *v = round_sig(*v, 12));
            }
            emit(&cfg.out, &to_json(&dump), stdout)?;
            Ok(EXIT_PASS)
        }
    }
}
