//! Command implementations behind the `ligodunov` binary.
//!
//! Exit codes: 0 all assertions passed, 1 an assertion failed, 2 usage or
//! configuration error, 3 the computation aborted.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::io::{self, ArtifactMeta, IoError, RunConfig};
use crate::model::{BalanceLaw, IsothermalModel, SyntheticModel};
use crate::scheme::{run, Simulation};
use crate::state::StateVec;
use crate::verify::{self, check_average_bound, lemma_ode_average_study, step_average, RiemannCell};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ABORT: i32 = 3;

pub const DEFAULT_SEED: u64 = 20_240_611;
pub const DEFAULT_CHECK_COUNT: usize = 100_000;

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutcome {
    pub code: i32,
    pub lines: Vec<String>,
    pub artifacts: Vec<PathBuf>,
}

impl CommandOutcome {
    fn fail(code: i32, line: String) -> Self {
        Self { code, lines: vec![line], artifacts: Vec::new() }
    }
}

fn config_failure(e: IoError) -> CommandOutcome {
    let code = match e {
        IoError::NotFound(_) | IoError::Parse { .. } | IoError::Invalid { .. } => EXIT_USAGE,
        _ => EXIT_ABORT,
    };
    CommandOutcome::fail(code, format!("error: {e}"))
}

/// Overrides shared by `run` and `study`.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub no_correction: bool,
}

fn load(path: &Path, o: &Overrides) -> Result<(RunConfig, PathBuf), CommandOutcome> {
    let mut cfg = io::load_config(path).map_err(config_failure)?;
    if o.no_correction {
        cfg.metric.correction = false;
    }
    let out = o.out.clone().unwrap_or_else(|| cfg.output_dir());
    Ok((cfg, out))
}

fn meta(cfg: &RunConfig, model: &dyn BalanceLaw) -> ArtifactMeta {
    ArtifactMeta {
        config_hash: cfg.hash(),
        model_id: model.id().to_string(),
        mesh: cfg.mesh,
        state_dim: model.state_dim(),
        metric_dim: model.metric_dim(),
    }
}

/// Runs one simulation and persists its trajectory.
pub fn cmd_run(config: &Path, overrides: &Overrides) -> CommandOutcome {
    let (cfg, out) = match load(config, overrides) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let model = cfg.model.build();
    let setup = cfg
        .initial
        .cell_averages(&cfg.mesh)
        .and_then(|u0| Simulation::new(model.clone(), cfg.mesh, cfg.options(), cfg.metric.boundary, u0));
    let sim = match setup {
        Ok(s) => s,
        Err(e) => return CommandOutcome::fail(EXIT_USAGE, format!("error: {e}")),
    };
    let meta = meta(&cfg, model.as_ref());
    let (traj, failure) = match run(sim, cfg.output.cadence) {
        Ok(t) => (t, None),
        Err(f) => (f.partial, Some(f.error)),
    };
    let mut artifacts = match io::write_trajectory(&out, &meta, &traj, cfg.output.csv) {
        Ok(a) => a,
        Err(e) => return CommandOutcome::fail(EXIT_ABORT, format!("error: writing output: {e}")),
    };
    let summary = io::run_summary(&traj.report, meta.config_hash);
    let summary_path = out.join("run_summary.txt");
    if let Err(e) = fs::write(&summary_path, &summary) {
        return CommandOutcome::fail(EXIT_ABORT, format!("error: writing output: {e}"));
    }
    artifacts.push(summary_path);
    let r = &traj.report;
    let mut lines = vec![
        format!("steps: {}", r.steps),
        format!("final time: {}", r.final_time),
        format!("dt (min CFL step): {:.6e}", r.dt_min),
        format!("C = max dt_j / dt: {:.6}", r.dt_ratio),
        format!("max TV: {:.6e}", r.max_total_variation),
        format!("snapshots: {} in {}", traj.snapshots.len(), out.display()),
        format!("wall time: {:.3} s", r.wall_time.as_secs_f64()),
    ];
    let code = match failure {
        None => EXIT_PASS,
        Some(e) => {
            lines.push(format!("error: run aborted: {e}"));
            EXIT_ABORT
        }
    };
    CommandOutcome { code, lines, artifacts }
}

/// Runs the refinement study of the config's `[study]` section.
pub fn cmd_study(config: &Path, overrides: &Overrides, threshold: Option<f64>) -> CommandOutcome {
    let (cfg, out) = match load(config, overrides) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let Some(setup) = cfg.study_setup() else {
        return CommandOutcome::fail(EXIT_USAGE, "error: invalid study: the config has no [study] section".into());
    };
    let threshold = threshold.unwrap_or(cfg.study.as_ref().map_or(io::DEFAULT_THRESHOLD, |s| s.threshold));
    let report = match verify::convergence_study(&setup) {
        Ok(r) => r,
        Err(f) => {
            let mut lines = vec![format!("error: {f}")];
            lines.extend(f.completed.iter().map(|l| format!("completed level n = {}", l.n)));
            return CommandOutcome { code: EXIT_ABORT, lines, artifacts: Vec::new() };
        }
    };
    let artifacts = match io::write_study(&out, &report, threshold, cfg.hash()) {
        Ok(a) => a,
        Err(e) => return CommandOutcome::fail(EXIT_ABORT, format!("error: writing output: {e}")),
    };
    let mut lines: Vec<String> = io::study_table(&report).lines().map(str::to_string).collect();
    let pass = report.meets(threshold);
    lines.push(format!(
        "correction term: {}",
        if setup.options.correction { "on" } else { "off" }
    ));
    lines.push(format!("threshold {threshold}: {}", if pass { "pass" } else { "FAIL" }));
    CommandOutcome { code: if pass { EXIT_PASS } else { EXIT_ASSERTION }, lines, artifacts }
}

/// Options of `check`.
#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub seed: u64,
    pub count: usize,
    /// Replace each true average with a wrong one, to prove the check can fail.
    pub corrupt_average: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, count: DEFAULT_CHECK_COUNT, corrupt_average: false }
    }
}

/// Randomized lemma checks and model oracles.
pub fn cmd_check(opts: &CheckOptions) -> CommandOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut lines = Vec::new();
    let mut ok = true;

    // average versus samples
    let mut failures = 0usize;
    for k in 0..opts.count {
        let len = rng.random_range(1..=32);
        let values: Vec<f64> = (0..len).map(|_| rng.random_range(-10.0..10.0)).collect();
        let widths: Vec<f64> = (0..len).map(|_| rng.random_range(0.01..1.0)).collect();
        let mut avg = step_average(&values, Some(&widths));
        if opts.corrupt_average {
            let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(*v), h.max(*v)));
            avg = 2.0 * hi - lo + 1.0;
        }
        let c = check_average_bound(&values, avg);
        if !c.passed {
            if failures == 0 {
                lines.push(format!(
                    "lemma 2.3 counterexample #{k}: |avg - u[{}]| = {:.6e}, sup|u(a)-u(b)| = {:.6e}, TV = {:.6e}, samples {:?}",
                    c.witness, c.deviation, c.oscillation, c.total_variation, values
                ));
            }
            failures += 1;
        }
    }
    if opts.count == 0 {
        lines.push("lemma 2.3: 0 checked (vacuous pass)".into());
    } else if failures == 0 {
        lines.push(format!("lemma 2.3: {} pass", opts.count));
    } else {
        lines.push(format!("lemma 2.3: {failures} of {} FAIL", opts.count));
        ok = false;
    }

    // ODE step of the average versus of the fan, on a shocked cell
    let model = SyntheticModel::new(0.1, 1.0);
    let (a, u_l, u_r) = (1.2, 1.0, 0.2);
    let cell = RiemannCell {
        metric: StateVec::scalar(a),
        slope: StateVec::scalar(0.1 * a * u_l * u_l),
        center: 0.5,
        dx: 0.04,
        left: StateVec::scalar(u_l),
        right: StateVec::scalar(u_r),
        cfl: 0.45,
        correction: true,
    };
    let phi = |x: f64| (1.0 + 2.0 * x) * (-x * x).exp();
    let dxs = [0.04, 0.02, 0.01, 0.005];
    match lemma_ode_average_study(&model, &cell, &dxs, phi, 3.0) {
        Ok(s) => {
            let cs: Vec<String> = s.levels.iter().map(|l| format!("{:.4}", l.constant)).collect();
            lines.push(format!(
                "lemma 2.2: C = [{}], max/median {:.3}, monotone growth {}: {}",
                cs.join(", "),
                s.max_over_median,
                s.monotone_growth,
                if s.passed { "pass" } else { "FAIL" }
            ));
            ok &= s.passed;
        }
        Err(e) => {
            lines.push(format!("lemma 2.2: error {e}"));
            ok = false;
        }
    }

    // model oracles
    let models: [Arc<dyn BalanceLaw>; 2] =
        [Arc::new(SyntheticModel::new(0.1, 1.0)), Arc::new(IsothermalModel { kappa: 0.2, source_coupling: 1.0, ..IsothermalModel::new(0.5) })];
    let oracle_count = opts.count.min(1000);
    for model in &models {
        let mut grad_fail = 0;
        let mut eig_fail = 0;
        for _ in 0..oracle_count {
            let (a, u) = random_state(&mut rng, model.as_ref());
            if let Some(msg) = gradient_mismatch(model.as_ref(), &a, &u) {
                if grad_fail == 0 {
                    lines.push(format!("{} gradient counterexample: {msg}", model.id()));
                }
                grad_fail += 1;
            }
            if let Some(msg) = eigen_mismatch(model.as_ref(), &a, &u) {
                if eig_fail == 0 {
                    lines.push(format!("{} eigen counterexample: {msg}", model.id()));
                }
                eig_fail += 1;
            }
        }
        let verdict = |f: usize| if f == 0 { "pass".to_string() } else { format!("{f} FAIL") };
        lines.push(format!(
            "{} flux gradient: {oracle_count} {}; wave speeds: {oracle_count} {}",
            model.id(),
            verdict(grad_fail),
            verdict(eig_fail)
        ));
        ok &= grad_fail == 0 && eig_fail == 0;
    }

    CommandOutcome { code: if ok { EXIT_PASS } else { EXIT_ASSERTION }, lines, artifacts: Vec::new() }
}

fn random_state(rng: &mut ChaCha8Rng, model: &dyn BalanceLaw) -> (StateVec, StateVec) {
    let a = StateVec::scalar(rng.random_range(0.2..3.0));
    let u = if model.state_dim() == 1 {
        StateVec::scalar(rng.random_range(-3.0..3.0))
    } else {
        let rho: f64 = rng.random_range(0.05..5.0);
        StateVec::pair(rho, rho * rng.random_range(-2.0..2.0))
    };
    (a, u)
}

fn gradient_mismatch(model: &dyn BalanceLaw, a: &StateVec, u: &StateVec) -> Option<String> {
    let grad = model.flux_grad_metric(a, u).ok()?;
    let eps = 1e-6;
    for k in 0..a.len() {
        let mut ap = *a;
        let mut am = *a;
        ap[k] += eps;
        am[k] -= eps;
        let fd = (model.flux(&ap, u).ok()? - model.flux(&am, u).ok()?) * (0.5 / eps);
        let exact = grad.column(k);
        let err = (fd - exact).norm_inf();
        if err > 1e-6 * exact.norm_inf().max(1.0) {
            return Some(format!("A = {a}, u = {u}: analytic {exact}, central difference {fd}"));
        }
    }
    None
}

fn eigen_mismatch(model: &dyn BalanceLaw, a: &StateVec, u: &StateVec) -> Option<String> {
    let speeds = model.wave_speeds(a, u).ok()?;
    let speeds = speeds.as_slice();
    let j = model.flux_jacobian(a, u).ok()?;
    if speeds.windows(2).any(|w| w[1] < w[0]) {
        return Some(format!("speeds {speeds:?} not sorted"));
    }
    let scale = speeds.iter().fold(1.0f64, |m, s| m.max(s.abs()));
    for &lam in speeds {
        let v = if j.rows() == 1 {
            StateVec::scalar(1.0)
        } else if j.get(0, 1) != 0.0 {
            StateVec::pair(j.get(0, 1), lam - j.get(0, 0))
        } else {
            StateVec::pair(lam - j.get(1, 1), j.get(1, 0))
        };
        let v = v * (1.0 / v.norm_inf().max(f64::MIN_POSITIVE));
        let r = (j.mul_vec(&v) - v * lam).norm_inf();
        if r > 1e-10 * scale {
            return Some(format!("A = {a}, u = {u}, λ = {lam}: residual {r:e}"));
        }
    }
    None
}
