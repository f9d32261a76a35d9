//! Validation and dispatch of one command to the library.

use serde_json::json;
use tongues_core::asymptotics::compare_asymptotic;
use tongues_core::delta_kick::{gap_mode, lambda_required, solve_delta, spectral_flow, DEFAULT_DELTA_TOL};
use tongues_core::finite_kick::{extrapolate_zero_width, match_periods, solve_bvp, width_sweep, ShootingProblem};
use tongues_core::floquet::{decaying_mode, gap_edges, gap_index, stability_chart};
use tongues_core::roots::linspace;
use tongues_core::{Direction, Error, GapMode, KickSpec, MathieuParams};

use crate::args::*;
use crate::figures;
use crate::table::{Cell, Table};

/// Epsilon used to report the degenerate tongues of the free oscillator.
pub const ZERO_EPSILON_PROXY: f64 = 1e-4;

#[derive(Debug)]
pub enum RunError {
    /// Arguments violate a precondition; nothing was computed.
    Usage(String),
    Compute(Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Compute(e)
    }
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Usage(_) => 2,
            RunError::Compute(_) => 1,
        }
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        let value = match self {
            RunError::Usage(msg) => json!({ "error": { "kind": "usage", "message": msg } }),
            RunError::Compute(e) => {
                let mut inner = json!({ "kind": e.kind(), "message": e.to_string() });
                if let Error::RootNotFound { scan, .. } = e {
                    inner["scan"] = json!(scan
                        .iter()
                        .map(|&(d, r)| json!({ "delta": d, "residual": if r.is_finite() { json!(r) } else { json!(null) } }))
                        .collect::<Vec<_>>());
                }
                json!({ "error": inner })
            }
        };
        value.to_string()
    }
}

pub type RunResult = Result<Table, RunError>;

fn usage(msg: String) -> RunError {
    RunError::Usage(msg)
}

pub(crate) fn finite(name: &str, v: f64) -> Result<(), RunError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be finite, got {v}")))
    }
}

pub(crate) fn positive(name: &str, v: f64) -> Result<(), RunError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

pub(crate) fn non_negative(name: &str, v: f64) -> Result<(), RunError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be non-negative, got {v}")))
    }
}

pub(crate) fn gap_number(n: u32) -> Result<(), RunError> {
    if n >= 1 {
        Ok(())
    } else {
        Err(usage("--gap must be at least 1".into()))
    }
}

fn ascending(name: &str, values: &[f64]) -> Result<(), RunError> {
    if values.is_empty() {
        return Err(usage(format!("--{name} needs at least one value")));
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(usage(format!("--{name} must be strictly ascending")));
    }
    Ok(())
}

fn opt(v: Option<f64>) -> Cell {
    v.map(Cell::Num).unwrap_or(Cell::Empty)
}

/// Runs `command`, recording `invocation` in the metadata.
pub fn run(command: &Command, invocation: &str) -> RunResult {
    let mut table = match command {
        Command::Chart(a) => chart(a),
        Command::Edges(a) => edges(a),
        Command::Lambda(a) => lambda(a),
        Command::Solve(a) => solve(a),
        Command::Profile(a) => profile(a),
        Command::Flow(a) => flow(a),
        Command::Asym(a) => asym(a),
        Command::Bvp(a) => bvp(a),
        Command::WidthSweep(a) => sweep(a),
        Command::Figure(a) => figures::figure(a.name),
    }?;
    let mut head = vec![
        ("tongues".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("command".to_string(), invocation.to_string()),
    ];
    head.append(&mut table.meta);
    table.meta = head;
    Ok(table)
}

fn chart(a: &ChartArgs) -> RunResult {
    for (name, v) in [("delta-min", a.delta_min), ("delta-max", a.delta_max)] {
        finite(name, v)?;
    }
    non_negative("epsilon-min", a.epsilon_min)?;
    non_negative("epsilon-max", a.epsilon_max)?;
    positive("edge-tol", a.edge_tol)?;
    if a.delta_min > a.delta_max || a.epsilon_min > a.epsilon_max {
        return Err(usage("range minimum exceeds maximum".into()));
    }
    if a.nd == 0 || a.ne == 0 {
        return Err(usage("--nd and --ne must be positive".into()));
    }
    let points = stability_chart(
        (a.delta_min, a.delta_max),
        (a.epsilon_min, a.epsilon_max),
        (a.nd, a.ne),
        a.edge_tol,
    )?;
    let mut t = Table::new(&["delta", "epsilon", "class", "gap", "trace"]);
    t.meta("delta_range", format!("[{}, {}] x {}", a.delta_min, a.delta_max, a.nd))
        .meta(
            "epsilon_range",
            format!("[{}, {}] x {}", a.epsilon_min, a.epsilon_max, a.ne),
        )
        .meta("edge_tol", a.edge_tol);
    for p in points {
        let gap = p.class.gap_index().map(Cell::from).unwrap_or(Cell::Empty);
        t.push(vec![
            p.delta.into(),
            p.epsilon.into(),
            p.class.label().into(),
            gap,
            p.trace.into(),
        ]);
    }
    Ok(t)
}

fn edges(a: &EdgesArgs) -> RunResult {
    non_negative("epsilon", a.epsilon)?;
    for &n in &a.gap {
        gap_number(n)?;
    }
    let eps = if a.epsilon == 0.0 {
        ZERO_EPSILON_PROXY
    } else {
        a.epsilon
    };
    let mut t = Table::new(&["gap", "epsilon", "lower", "upper", "width"]);
    t.meta("epsilon", a.epsilon);
    if a.epsilon == 0.0 {
        t.meta(
            "note",
            format!("tongues are degenerate at epsilon = 0; edges evaluated at epsilon = {ZERO_EPSILON_PROXY}"),
        );
    }
    for &n in &a.gap {
        let (lo, hi) = gap_edges(eps, n, 1e-13)?;
        t.push(vec![n.into(), eps.into(), lo.into(), hi.into(), (hi - lo).into()]);
    }
    Ok(t)
}

fn lambda(a: &PointArgs) -> RunResult {
    non_negative("delta", a.delta)?;
    positive("epsilon", a.epsilon)?;
    let params = MathieuParams::new(a.delta, a.epsilon)?;
    let required = lambda_required(&params)?;
    let mu = decaying_mode(&params, Direction::Plus)?.multiplier;
    let mut t = Table::new(&["delta", "epsilon", "gap", "lambda_required", "multiplier"]);
    t.push(vec![
        a.delta.into(),
        a.epsilon.into(),
        gap_index(&params)?.into(),
        required.into(),
        mu.into(),
    ]);
    Ok(t)
}

fn solve(a: &SolveArgs) -> RunResult {
    positive("lambda", a.lambda)?;
    positive("epsilon", a.epsilon)?;
    gap_number(a.gap)?;
    let delta = solve_delta(a.lambda, a.epsilon, a.gap, DEFAULT_DELTA_TOL)?;
    let mode = decaying_mode(&MathieuParams::new(delta, a.epsilon)?, Direction::Plus)?;
    let mut t = Table::new(&[
        "lambda",
        "epsilon",
        "gap",
        "delta",
        "delta1",
        "multiplier",
        "decay_rate",
    ]);
    t.meta("delta_tol", DEFAULT_DELTA_TOL);
    let delta1 = (a.gap == 1).then(|| (delta - 0.25) / a.epsilon);
    t.push(vec![
        a.lambda.into(),
        a.epsilon.into(),
        a.gap.into(),
        delta.into(),
        opt(delta1),
        mode.multiplier.into(),
        (-mode.exponent).into(),
    ]);
    Ok(t)
}

/// Writes the standard description of a gap mode into the metadata.
pub(crate) fn describe_mode(t: &mut Table, mode: &GapMode) {
    t.meta("kick", mode.kick.name())
        .meta("lambda", mode.lambda)
        .meta("epsilon", mode.params.epsilon)
        .meta("gap", mode.gap_index)
        .meta("delta", crate::table::format_num(mode.params.delta))
        .meta("multiplier", crate::table::format_num(mode.multiplier))
        .meta("x0", crate::table::format_num(mode.origin.x))
        .meta("slope_jump", crate::table::format_num(mode.origin.jump()))
        .meta("parity_defect", crate::table::format_num(mode.profile.parity_defect()));
    if let Some(rate) = mode.measured_decay {
        t.meta("fitted_decay_rate", crate::table::format_num(rate));
    }
}

pub(crate) fn profile_rows(t: &mut Table, mode: &GapMode, prefix: &[Cell]) {
    for (time, x) in mode.profile.iter() {
        let mut row = prefix.to_vec();
        row.push(time.into());
        row.push(x.into());
        t.push(row);
    }
}

fn profile(a: &ProfileArgs) -> RunResult {
    positive("lambda", a.lambda)?;
    positive("epsilon", a.epsilon)?;
    gap_number(a.gap)?;
    positive("half-window", a.half_window)?;
    if a.samples < 3 {
        return Err(usage("--samples must be at least 3".into()));
    }
    let mode = gap_mode(a.lambda, a.epsilon, a.gap, a.half_window, a.samples)?;
    let mut t = Table::new(&["t", "x"]);
    describe_mode(&mut t, &mode);
    t.meta("half_window", a.half_window).meta("samples", a.samples);
    profile_rows(&mut t, &mode, &[]);
    Ok(t)
}

fn flow(a: &FlowArgs) -> RunResult {
    positive("epsilon", a.epsilon)?;
    gap_number(a.gap)?;
    let grid = match &a.lambdas {
        Some(list) => list.clone(),
        None => {
            positive("lambda-min", a.lambda_min)?;
            positive("lambda-max", a.lambda_max)?;
            if a.steps == 0 {
                return Err(usage("--steps must be positive".into()));
            }
            linspace(a.lambda_min, a.lambda_max, a.steps)
        }
    };
    for &l in &grid {
        positive("lambdas", l)?;
    }
    ascending("lambdas", &grid)?;
    let rows = spectral_flow(a.epsilon, a.gap, &grid)?;
    let (lo, hi) = gap_edges(a.epsilon, a.gap, 1e-13)?;
    let mut t = Table::new(&["lambda", "delta", "delta1", "fraction_of_gap"]);
    t.meta("epsilon", a.epsilon)
        .meta("gap", a.gap)
        .meta("lower_edge", crate::table::format_num(lo))
        .meta("upper_edge", crate::table::format_num(hi));
    for (l, d) in rows {
        let delta1 = (a.gap == 1).then(|| (d - 0.25) / a.epsilon);
        t.push(vec![l.into(), d.into(), opt(delta1), ((d - lo) / (hi - lo)).into()]);
    }
    Ok(t)
}

fn asym(a: &AsymArgs) -> RunResult {
    if a.epsilons.is_empty() || a.lambdas.is_empty() {
        return Err(usage("--epsilons and --lambdas need at least one value".into()));
    }
    for &e in &a.epsilons {
        positive("epsilons", e)?;
        if e > 0.1 {
            return Err(usage(format!(
                "--epsilons must not exceed 0.1 for the small-epsilon law, got {e}"
            )));
        }
    }
    for &l in &a.lambdas {
        positive("lambdas", l)?;
    }
    let rows = compare_asymptotic(&a.epsilons, &a.lambdas)?;
    let mut t = Table::new(&["epsilon", "lambda", "delta1_numeric", "delta1_formula", "error"]);
    t.meta("formula", "delta1 = (lambda^2 - 1) / (2 (1 + lambda^2))");
    for r in rows {
        t.push(vec![
            r.epsilon.into(),
            r.lambda.into(),
            r.delta1_numeric.into(),
            r.delta1_formula.into(),
            r.error.into(),
        ]);
    }
    Ok(t)
}

pub(crate) fn kick_of(a: &BvpArgs) -> Result<KickSpec, RunError> {
    match a.kick {
        KickKind::Gaussian | KickKind::Lorentzian => {
            positive("strength", a.strength)?;
            let width = a
                .width
                .ok_or_else(|| usage("--width is required for this kick".into()))?;
            positive("width", width)?;
            Ok(if a.kick == KickKind::Gaussian {
                KickSpec::Gaussian {
                    strength: a.strength,
                    width,
                }
            } else {
                KickSpec::Lorentzian {
                    strength: a.strength,
                    width,
                }
            })
        }
        KickKind::Tae => {
            let shear = a
                .shear
                .ok_or_else(|| usage("--shear is required for the tae kick".into()))?;
            positive("shear", shear)?;
            Ok(KickSpec::TaeShear { shear })
        }
    }
}

fn bvp(a: &BvpArgs) -> RunResult {
    let kick = kick_of(a)?;
    positive("epsilon", a.epsilon)?;
    gap_number(a.gap)?;
    if let Some(h) = a.half_window {
        positive("half-window", h)?;
    }
    if a.samples < 3 {
        return Err(usage("--samples must be at least 3".into()));
    }
    let mut problem = ShootingProblem::new(a.epsilon, kick)?;
    if let Some(h) = a.half_window {
        problem = problem.with_profile(h, a.samples);
    } else {
        problem.samples = a.samples;
    }
    let mode = solve_bvp(&problem, a.gap)?;
    let lambda_eff = kick.effective_strength();
    let dirac = solve_delta(lambda_eff, a.epsilon, a.gap, DEFAULT_DELTA_TOL).ok();
    if a.profile {
        let mut t = Table::new(&["t", "x"]);
        describe_mode(&mut t, &mode);
        t.meta("match_periods", problem.periods);
        profile_rows(&mut t, &mode, &[]);
        return Ok(t);
    }
    let mut t = Table::new(&[
        "kick",
        "width",
        "lambda_eff",
        "epsilon",
        "gap",
        "delta",
        "delta_dirac",
        "multiplier",
        "match_periods",
    ]);
    t.push(vec![
        kick.name().into(),
        opt(kick.width()),
        lambda_eff.into(),
        a.epsilon.into(),
        a.gap.into(),
        mode.params.delta.into(),
        opt(dirac),
        mode.multiplier.into(),
        match_periods(&kick).into(),
    ]);
    Ok(t)
}

fn sweep(a: &WidthSweepArgs) -> RunResult {
    positive("epsilon", a.epsilon)?;
    positive("lambda", a.lambda)?;
    gap_number(a.gap)?;
    if a.widths.is_empty() {
        return Err(usage("--widths needs at least one value".into()));
    }
    for &w in &a.widths {
        positive("widths", w)?;
    }
    if a.widths.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(usage("--widths must be strictly descending".into()));
    }
    width_sweep_table(a.epsilon, a.lambda, a.gap, &a.widths)
}

pub(crate) fn width_sweep_table(epsilon: f64, lambda: f64, n: u32, widths: &[f64]) -> RunResult {
    let rows = width_sweep(epsilon, lambda, n, widths)?;
    let dirac = solve_delta(lambda, epsilon, n, DEFAULT_DELTA_TOL)?;
    let mut t = Table::new(&["width", "delta", "delta_dirac", "difference"]);
    t.meta("kick", "gaussian")
        .meta("epsilon", epsilon)
        .meta("lambda", lambda)
        .meta("gap", n);
    if let Ok(limit) = extrapolate_zero_width(&rows) {
        t.meta("zero_width_extrapolation", crate::table::format_num(limit))
            .meta("extrapolation_error", crate::table::format_num(limit - dirac));
    }
    for (w, d) in rows {
        t.push(vec![w.into(), d.into(), dirac.into(), (d - dirac).into()]);
    }
    Ok(t)
}
