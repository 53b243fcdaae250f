//! `charshift`: run the hidden shift solvers from the command line.
//!
//! Exit codes: 0 success, 2 bad parameters, 3 verification failure,
//! 4 capacity exceeded.

mod report;

use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use charshift::finfield::{FieldCtx, MultCharFF};
use charshift::homocrypt::{break_cryptosystem, homo_new};
use charshift::numtheory::euler_phi;
use charshift::oracles::{brute_force_shift, brute_force_shift_approx, run_suite};
use charshift::qsim::GroupSpec;
use charshift::ringchar::RingChar;
use charshift::rng::{below, Seed};
use charshift::shiftalgos::{
    character_spectrum, gauss_identity_residual, solve_hidden_coset, solve_shift_ff, solve_shift_ring,
    solve_shift_unknown_n, HcpInstance, Mode, RingInstance, ShiftInstanceFF, ShiftSolution,
};
use charshift::{CharValue, Complex64, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use report::{format_complex, RunReport};

#[derive(Parser, Debug)]
#[command(name = "charshift", version, about = "Hidden shift problems for multiplicative characters")]
struct Cli {
    /// Master seed; trial t uses stream t of this seed.
    #[arg(long, global = true, env = "CHARSHIFT_SEED", default_value_t = 0)]
    seed: u64,
    /// Emit the full JSON report instead of one line.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shifted multiplicative character over F_q.
    SolveFf {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Character index k: chi(g^l) = exp(2 pi i k l / (q - 1)).
        #[arg(long)]
        char_index: u64,
        #[command(flatten)]
        shift: ShiftArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Shifted multiplicative character over Z/nZ.
    SolveRing {
        #[arg(long)]
        n: u64,
        /// `2-torsion` (alias `quadratic`), `jacobi`, or component indices `k1,k2,...`.
        #[arg(long = "char")]
        character: CharSpec,
        #[command(flatten)]
        shift: ShiftArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Shifted character on Z whose modulus is hidden; only a bound on the period is given.
    SolveUnknownN {
        /// Hidden modulus used to build the oracle.
        #[arg(long)]
        n: u64,
        #[arg(long = "char")]
        character: CharSpec,
        #[command(flatten)]
        shift: ShiftArg,
        /// Upper bound on the period.
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
    /// Hidden coset problem on a preset instance.
    SolveHcp {
        #[arg(long, value_enum)]
        preset: HcpPreset,
        /// Field characteristic (preset `field`).
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Character index (preset `field`).
        #[arg(long)]
        k: Option<u64>,
        /// Modulus (preset `ring`).
        #[arg(long)]
        n: Option<u64>,
        #[arg(long = "char")]
        character: Option<CharSpec>,
        #[command(flatten)]
        shift: ShiftArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Recover the secret of the toy homomorphic cryptosystem.
    BreakHomo {
        #[arg(long)]
        p: u64,
        /// Secret plaintext; drawn from the seed when omitted.
        #[arg(long)]
        secret: Option<u64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Sampled)]
        mode: ModeArg,
    },
    /// Character transform chi_hat(y) and the residual of chi_hat(y) = conj(chi(y)) chi_hat(1).
    GaussTable {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long = "char")]
        character: Option<CharSpec>,
    },
    /// Run the brute-force cross-check suite.
    Verify,
}

#[derive(Args, Debug)]
struct ShiftArg {
    #[arg(long, conflicts_with = "random_shift", required_unless_present = "random_shift")]
    shift: Option<u64>,
    /// Draw the shift from the seed.
    #[arg(long)]
    random_shift: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    trials: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    Exact,
    Sampled,
}

impl ModeArg {
    fn name(self) -> &'static str {
        match self {
            ModeArg::Exact => "exact",
            ModeArg::Sampled => "sampled",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum HcpPreset {
    /// Z_8, alpha = 3/4, beta = 1/2.
    Z8,
    /// Z_4 x Z_4 with a flat spectrum.
    Z4x4,
    /// g = chi on F_q.
    Field,
    /// g = chi on Z_n.
    Ring,
}

#[derive(Clone, Debug)]
enum CharSpec {
    Quadratic,
    Jacobi,
    Indices(Vec<u64>),
}

impl FromStr for CharSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "2-torsion" | "quadratic" => Ok(CharSpec::Quadratic),
            "jacobi" => Ok(CharSpec::Jacobi),
            list => list
                .split(',')
                .map(|k| k.trim().parse::<u64>().map_err(|e| format!("bad index {k:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()
                .map(CharSpec::Indices),
        }
    }
}

impl CharSpec {
    fn build(&self, n: u64) -> charshift::Result<RingChar> {
        match self {
            CharSpec::Quadratic => RingChar::quadratic(n),
            CharSpec::Jacobi => RingChar::jacobi(n),
            CharSpec::Indices(k) => RingChar::new(n, k),
        }
    }

    fn label(&self) -> String {
        match self {
            CharSpec::Quadratic => "2-torsion".into(),
            CharSpec::Jacobi => "jacobi".into(),
            CharSpec::Indices(k) => k.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
        }
    }
}

/// A CLI failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::PromiseViolation(_) => 2,
            Error::Miss(_) | Error::Unresolved(_) => 3,
            Error::Capacity(_) => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult<T> = Result<T, Failure>;

/// Stream reserved for drawing random shifts and secrets, apart from trials.
const SETUP_STREAM: u64 = u64::MAX;

fn pick_shift(arg: &ShiftArg, seed: u64, modulus: u64) -> CliResult<u64> {
    match arg.shift {
        Some(s) if s >= modulus => Err(usage(format!("shift {s} must be below {modulus}"))),
        Some(s) => Ok(s),
        None => Ok(below(&mut Seed { master: seed, stream: SETUP_STREAM }.rng(), modulus)),
    }
}

fn check_trials(trials: u64) -> CliResult<()> {
    if trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    Ok(())
}

/// Runs `trial(t)` for `t < trials` in parallel; results stay in index order.
fn run_trials<T: Send>(trials: u64, trial: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    (0..trials).into_par_iter().map(trial).collect()
}

/// Records empirical success next to the theoretical rate.
fn record_sampled(report: &mut RunReport, successes: usize, trials: u64, theoretical: f64) {
    let rate = successes as f64 / trials as f64;
    let sigma = (theoretical * (1.0 - theoretical) / trials as f64).sqrt();
    report
        .result("trials", trials)
        .result("successes", successes)
        .result("empirical_success", rate)
        .result("theoretical_success", theoretical)
        .result("sigma", sigma);
}

fn first_verified<R>(results: &[charshift::Result<R>], ok: impl Fn(&R) -> bool) -> (usize, Option<&R>) {
    let good: Vec<&R> = results.iter().filter_map(|r| r.as_ref().ok()).filter(|r| ok(r)).collect();
    (good.len(), good.first().copied())
}

fn set_solution(report: &mut RunReport, sol: &ShiftSolution, truth: &[usize]) {
    let set = sol.solution_set();
    report.verified = set == truth && sol.subgroup_is_closed();
    report.result("subgroup", json!(sol.subgroup));
    report.solution = Some(set);
}

fn solve_ff(seed: u64, p: u64, r: u32, k: u64, shift: &ShiftArg, run: &RunArgs) -> CliResult<RunReport> {
    check_trials(run.trials)?;
    let ctx = FieldCtx::new(p, r)?;
    let q = ctx.q();
    let chi = MultCharFF::new(ctx.clone(), k)?;
    if chi.is_trivial() {
        return Err(usage("the trivial character (index 0) hides no shift"));
    }
    let s = pick_shift(shift, seed, q)?;
    let instance = ShiftInstanceFF::planted(chi.clone(), ctx.element(s)?);
    let group = GroupSpec::field(ctx.clone());
    let g = chi.values();
    let f: Vec<CharValue> = (0..q as usize).map(|x| g[group.add(x, s as usize)]).collect();
    let truth = brute_force_shift(&group, &f, &g);
    let theoretical = (1.0 - 1.0 / q as f64).powi(2);

    let mut report = RunReport::new("solve-ff", seed, run.mode.name());
    report.param("p", p).param("r", r).param("q", q).param("char_index", k).param("shift", s);
    match run.mode {
        ModeArg::Exact => {
            let out = solve_shift_ff(&instance, Mode::Exact)?;
            report
                .result("success_probability", out.success_probability)
                .result("theoretical_success", theoretical)
                .result("p_minus_s", out.distribution[out.measured]);
            set_solution(&mut report, &out.solution, &truth);
        }
        ModeArg::Sampled => {
            let results = run_trials(run.trials, |t| solve_shift_ff(&instance, Mode::Sampled(Seed::trial(seed, t))));
            let (successes, first) = first_verified(&results, |o| o.solution.solution_set() == truth);
            record_sampled(&mut report, successes, run.trials, theoretical);
            if let Some(o) = first {
                set_solution(&mut report, &o.solution, &truth);
            }
        }
    }
    Ok(report)
}

fn ring_truth(chi: &RingChar, s: u64) -> Vec<usize> {
    let n = chi.modulus() as usize;
    let g = chi.values();
    let f: Vec<CharValue> = (0..n).map(|x| g[(x + s as usize) % n]).collect();
    brute_force_shift(&GroupSpec::Cyclic(n), &f, &g)
}

fn solve_ring(seed: u64, n: u64, spec: &CharSpec, shift: &ShiftArg, run: &RunArgs) -> CliResult<RunReport> {
    check_trials(run.trials)?;
    let chi = spec.build(n)?;
    let s = pick_shift(shift, seed, n)?;
    let instance = RingInstance::planted(chi.clone(), s);
    let truth = ring_truth(&chi, s);
    let l = chi.period();
    let theoretical = (euler_phi(n)? as f64 / n as f64) * (euler_phi(l)? as f64 / l as f64).powi(2);

    let mut report = RunReport::new("solve-ring", seed, run.mode.name());
    report
        .param("n", n)
        .param("char", spec.label())
        .param("indices", json!(chi.indices()))
        .param("shift", s);
    match run.mode {
        ModeArg::Exact => {
            let out = solve_shift_ring(&instance, Mode::Exact)?;
            report
                .result("period", out.period)
                .result("success_probability", out.success_probability)
                .result("theoretical_success", theoretical);
            set_solution(&mut report, &out.solution, &truth);
        }
        ModeArg::Sampled => {
            let results = run_trials(run.trials, |t| solve_shift_ring(&instance, Mode::Sampled(Seed::trial(seed, t))));
            let (successes, first) = first_verified(&results, |o| o.solution.solution_set() == truth);
            record_sampled(&mut report, successes, run.trials, theoretical);
            if let Some(o) = first {
                report.result("period", o.period);
                set_solution(&mut report, &o.solution, &truth);
            }
        }
    }
    Ok(report)
}

fn solve_unknown(
    seed: u64,
    n: u64,
    spec: &CharSpec,
    shift: &ShiftArg,
    bound: u64,
    eps: f64,
    trials: u64,
) -> CliResult<RunReport> {
    check_trials(trials)?;
    let chi = spec.build(n)?;
    if !chi.is_completely_nontrivial() {
        return Err(usage("the character must be nontrivial on every prime-power component"));
    }
    let s = pick_shift(shift, seed, n)?;
    let true_period = chi.period();
    let restricted = chi.restrict_to_period()?;
    let family = |l: u64| -> charshift::Result<RingChar> {
        match spec {
            CharSpec::Indices(_) if l == restricted.modulus() => Ok(restricted.as_ring_char().clone()),
            CharSpec::Indices(_) => Err(Error::Domain(format!("no character of the family has modulus {l}"))),
            _ => RingChar::quadratic(l),
        }
    };
    let f = |x: u64| chi.value(x + s);
    let results = run_trials(trials, |t| solve_shift_unknown_n(&f, &family, bound, eps, Seed::trial(seed, t)));
    if let Some(Err(e)) = results.iter().find(|r| matches!(r, Err(Error::Domain(_) | Error::Capacity(_)))) {
        return Err(e.clone().into());
    }

    let mut report = RunReport::new("solve-unknown-n", seed, "sampled");
    report
        .param("n", n)
        .param("char", spec.label())
        .param("shift", s)
        .param("bound", bound)
        .param("eps", eps);
    let correct = |o: &charshift::shiftalgos::UnknownNRun| {
        o.period == true_period && o.solution.representative as u64 == s % true_period
    };
    let (successes, first) = first_verified(&results, correct);
    report
        .result("trials", trials)
        .result("successes", successes)
        .result("empirical_success", successes as f64 / trials as f64);
    if let Some(o) = first {
        report
            .result("period", o.period)
            .result("m", o.m)
            .result("q_len", o.q_len)
            .result("rounds", o.rounds)
            .result("stage_two_attempts", o.stage_two_attempts);
        report.solution = Some(o.solution.solution_set());
        report.verified = true;
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn solve_hcp(
    seed: u64,
    preset: HcpPreset,
    p: Option<u64>,
    r: u32,
    k: Option<u64>,
    n: Option<u64>,
    spec: Option<&CharSpec>,
    shift: &ShiftArg,
    run: &RunArgs,
) -> CliResult<RunReport> {
    check_trials(run.trials)?;
    let mut report = RunReport::new("solve-hcp", seed, run.mode.name());
    let dim = match preset {
        HcpPreset::Z8 => 8,
        HcpPreset::Z4x4 => 16,
        HcpPreset::Field => FieldCtx::new(p.ok_or_else(|| usage("preset field needs --p"))?, r)?.q(),
        HcpPreset::Ring => n.ok_or_else(|| usage("preset ring needs --n"))?,
    };
    let s = pick_shift(shift, seed, dim)? as usize;
    let instance = match preset {
        HcpPreset::Z8 => HcpInstance::z8(s)?,
        HcpPreset::Z4x4 => HcpInstance::z4_squared(s)?,
        HcpPreset::Field => {
            let ctx = FieldCtx::new(p.expect("checked"), r)?;
            let k = k.ok_or_else(|| usage("preset field needs --k"))?;
            report.param("p", ctx.p()).param("r", r).param("k", k);
            HcpInstance::from_field_char(&MultCharFF::new(ctx, k)?, s)?
        }
        HcpPreset::Ring => {
            let spec = spec.ok_or_else(|| usage("preset ring needs --char"))?;
            let n = n.expect("checked");
            report.param("n", n).param("char", spec.label());
            HcpInstance::from_ring_char(&spec.build(n)?, s)?
        }
    };
    report
        .param("preset", format!("{preset:?}").to_lowercase())
        .param("shift", s);
    let f: Vec<Complex64> = (0..instance.group().dim()).map(|x| instance.query(x)).collect();
    let truth = brute_force_shift_approx(instance.group(), &f, instance.g(), 1e-9);

    match run.mode {
        ModeArg::Exact => {
            let out = solve_hidden_coset(&instance, Mode::Exact)?;
            report
                .result("alpha", out.alpha)
                .result("beta", out.beta)
                .result("success_probability", out.success_probability)
                .result("theoretical_success", out.alpha * out.beta);
            set_solution(&mut report, &out.solution, &truth);
        }
        ModeArg::Sampled => {
            let results = run_trials(run.trials, |t| solve_hidden_coset(&instance, Mode::Sampled(Seed::trial(seed, t))));
            // alpha and beta come from the promise check, which the exact path performs
            let exact = solve_hidden_coset(&instance, Mode::Exact)?;
            let (successes, first) = first_verified(&results, |o| o.solution.solution_set() == truth);
            report.result("alpha", exact.alpha).result("beta", exact.beta);
            record_sampled(&mut report, successes, run.trials, exact.alpha * exact.beta);
            if let Some(o) = first {
                set_solution(&mut report, &o.solution, &truth);
            }
        }
    }
    Ok(report)
}

fn break_homo(seed: u64, p: u64, secret: Option<u64>, mode: ModeArg) -> CliResult<RunReport> {
    let secret = match secret {
        Some(s) => s,
        None if p >= 3 => below(&mut Seed { master: seed, stream: SETUP_STREAM }.rng(), p),
        None => return Err(usage(format!("modulus must be an odd prime, got {p}"))),
    };
    let (oracle, es) = homo_new(p, secret, Seed::new(seed))?;
    let attack_mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Sampled => Mode::Sampled(Seed::trial(seed, 1)),
    };
    let out = break_cryptosystem(&oracle, es, attack_mode)?;
    let mut report = RunReport::new("break-homo", seed, mode.name());
    report.param("p", p).param("secret", secret);
    let log_p = (p as f64).log2();
    report
        .result("recovered", out.secret)
        .result("preparations", out.preparations)
        .result("logical_queries", out.logical_queries)
        .result("calls_add", out.counts.add)
        .result("calls_mul", out.counts.mul)
        .result("calls_zero_test", out.counts.zero_test)
        .result("calls_total", out.counts.total())
        .result("calls_setup", out.setup_calls)
        .result("calls_evaluation", out.evaluation_calls)
        .result("calls_verification", out.verification_calls)
        .result("max_calls_per_point", out.max_calls_per_point)
        .result("per_point_bound", 8.0 * log_p);
    report.solution = Some(vec![out.secret as usize]);
    report.verified = out.secret == secret && (out.max_calls_per_point as f64) <= 8.0 * log_p;
    Ok(report)
}

fn gauss_table(
    seed: u64,
    p: Option<u64>,
    r: u32,
    k: Option<u64>,
    n: Option<u64>,
    spec: Option<&CharSpec>,
) -> CliResult<(RunReport, Vec<String>)> {
    let mut report = RunReport::new("gauss-table", seed, "exact");
    let (group, chi, one) = match (p, n) {
        (Some(p), None) => {
            let ctx = FieldCtx::new(p, r)?;
            let k = k.ok_or_else(|| usage("--p needs --k"))?;
            let chi = MultCharFF::new(ctx.clone(), k)?;
            if chi.is_trivial() {
                return Err(usage("the identity needs a nontrivial character"));
            }
            report.param("p", p).param("r", r).param("k", k);
            (GroupSpec::field(ctx.clone()), chi.values(), ctx.one().index())
        }
        (None, Some(n)) => {
            let spec = spec.ok_or_else(|| usage("--n needs --char"))?;
            let chi = spec.build(n)?;
            if !chi.is_primitive() {
                return Err(usage(format!("character mod {n} is not primitive (period {})", chi.period())));
            }
            report.param("n", n).param("char", spec.label());
            (GroupSpec::cyclic(n as usize)?, chi.values(), 1)
        }
        _ => return Err(usage("give either --p/--k or --n/--char")),
    };
    let hat = character_spectrum(&group, &chi)?;
    let (residual, magnitude) = gauss_identity_residual(&chi, &hat, one);
    let chi_c: Vec<Complex64> = chi.iter().map(|c| c.to_complex()).collect();
    report
        .result("residual", residual)
        .result("chi_hat_one_magnitude", magnitude)
        .complex_series("chi", &chi_c)
        .complex_series("chi_hat", &hat);
    report.verified = residual < 1e-9 && (magnitude - 1.0).abs() < 1e-9;
    let rows = (0..hat.len())
        .map(|y| format!("y={y} chi={} chi_hat={}", format_complex(chi_c[y]), format_complex(hat[y])))
        .collect();
    Ok((report, rows))
}

fn verify_suite(seed: u64) -> CliResult<(RunReport, Vec<String>)> {
    let reports = run_suite()?;
    let mut report = RunReport::new("verify", seed, "exact");
    let rows = reports
        .iter()
        .map(|r| {
            format!(
                "{} quantity=\"{}\" brute_force={} algorithm={} difference={:e} tolerance={:e}",
                if r.pass { "PASS" } else { "FAIL" },
                r.quantity,
                r.brute_force,
                r.algorithm,
                r.difference,
                r.tolerance
            )
        })
        .collect();
    report.checks = reports
        .iter()
        .map(|r| {
            json!({
                "quantity": r.quantity,
                "brute_force": r.brute_force,
                "algorithm": r.algorithm,
                "difference": r.difference,
                "tolerance": r.tolerance,
                "pass": r.pass,
            })
        })
        .collect();
    let passed = reports.iter().filter(|r| r.pass).count();
    report.result("passed", passed).result("total", reports.len());
    report.verified = passed == reports.len();
    Ok((report, rows))
}

fn dispatch(cli: &Cli) -> CliResult<(RunReport, Vec<String>)> {
    let seed = cli.seed;
    let single = |r: CliResult<RunReport>| r.map(|r| (r, Vec::new()));
    match &cli.command {
        Command::SolveFf { p, r, char_index, shift, run } => single(solve_ff(seed, *p, *r, *char_index, shift, run)),
        Command::SolveRing { n, character, shift, run } => single(solve_ring(seed, *n, character, shift, run)),
        Command::SolveUnknownN { n, character, shift, bound, eps, trials } => {
            single(solve_unknown(seed, *n, character, shift, *bound, *eps, *trials))
        }
        Command::SolveHcp { preset, p, r, k, n, character, shift, run } => {
            single(solve_hcp(seed, *preset, *p, *r, *k, *n, character.as_ref(), shift, run))
        }
        Command::BreakHomo { p, secret, mode } => single(break_homo(seed, *p, *secret, *mode)),
        Command::GaussTable { p, r, k, n, character } => gauss_table(seed, *p, *r, *k, *n, character.as_ref()),
        Command::Verify => verify_suite(seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match dispatch(&cli) {
        Ok((mut report, rows)) => {
            if cli.timing {
                report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            if cli.json {
                println!("{}", report.to_json());
            } else {
                for row in rows {
                    println!("{row}");
                }
                println!("{}", report.to_line());
            }
            if report.verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("charshift: result did not pass verification");
                ExitCode::from(3)
            }
        }
        Err(f) => {
            eprintln!("charshift: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
