//! Data behind each figure, one table per figure.
//!
//! Figures that leave epsilon unspecified use [`FIGURE_EPSILON`], and every
//! table records the parameters it was built with.

use tongues_core::asymptotics::compare_asymptotic;
use tongues_core::delta_kick::{build_profile, decay_window, gap_mode, solve_delta, DEFAULT_DELTA_TOL};
use tongues_core::finite_kick::{solve_bvp, ShootingProblem};
use tongues_core::floquet::{decaying_mode, gap_edges};
use tongues_core::ode::Propagator;
use tongues_core::profile::Profile;
use tongues_core::roots::linspace;
use tongues_core::{Direction, Error, KickSpec, MathieuParams, State, DEFAULT_TOL};

use crate::args::Figure;
use crate::run::{describe_mode, profile_rows, width_sweep_table, RunResult};
use crate::table::{format_num, Cell, Table};

pub const FIGURE_EPSILON: f64 = 0.5;

const FIG1_LAMBDA: f64 = 0.7;
const FIG1_HALF_WINDOW: f64 = 125.6;
const FIG1_SAMPLES: usize = 4000;
const FIG3_DECADES: f64 = 3.0;
const FIG3_SPACING: f64 = 0.25;

pub fn figure(which: Figure) -> RunResult {
    let mut t = match which {
        Figure::Fig1 => fig1()?,
        Figure::Fig2 => fig2()?,
        Figure::Fig3 => fig3()?,
        Figure::Fig4 => fig4()?,
        Figure::Fig5 => width_sweep_table(FIGURE_EPSILON, 1.0, 1, &[0.4, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05, 0.025])?,
        Figure::D1curve => d1curve()?,
    };
    let mut head = Table::default();
    head.meta("figure", which.name());
    if which != Figure::D1curve {
        head.meta(
            "epsilon_choice",
            format!("epsilon = {FIGURE_EPSILON} (not given for the figure)"),
        );
    }
    head.meta.append(&mut t.meta);
    t.meta = head.meta;
    Ok(t)
}

fn fig1() -> RunResult {
    let mode = gap_mode(FIG1_LAMBDA, FIGURE_EPSILON, 1, FIG1_HALF_WINDOW, FIG1_SAMPLES)?;
    let mut t = Table::new(&["t", "x"]);
    describe_mode(&mut t, &mode);
    profile_rows(&mut t, &mode, &[]);
    Ok(t)
}

/// The fig1 mode next to an unkicked even solution just below the first
/// tongue, which stays bounded but never decays.
fn fig2() -> RunResult {
    let mode = gap_mode(FIG1_LAMBDA, FIGURE_EPSILON, 1, FIG1_HALF_WINDOW, FIG1_SAMPLES)?;
    let (lower, _) = gap_edges(FIGURE_EPSILON, 1, 1e-13)?;
    let delta_q = lower - 0.01;
    let params = MathieuParams::new(delta_q, FIGURE_EPSILON)?;
    let mut prop = Propagator::new(params, KickSpec::None, State::new(1.0, 0.0, 0.0), DEFAULT_TOL)?;
    // Even initial data in an even potential: x(-t) = x(t).
    let times: Vec<f64> = mode.profile.t.clone();
    let mut x = vec![0.0; times.len()];
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&i, &j| times[i].abs().total_cmp(&times[j].abs()));
    for i in order {
        x[i] = prop.advance_to(times[i].abs())?.x;
    }
    let mut quasi = Profile::new(times, x);
    quasi.normalize_peak();

    let mut t = Table::new(&["series", "t", "x"]);
    describe_mode(&mut t, &mode);
    t.meta("quasiperiodic_delta", format_num(delta_q)).meta(
        "quasiperiodic_start",
        "x(0) = 1, x'(0) = 0, no kick; delta = lower edge - 0.01",
    );
    profile_rows(&mut t, &mode, &["gap-mode".into()]);
    for (time, value) in quasi.iter() {
        t.push(vec!["quasiperiodic".into(), time.into(), value.into()]);
    }
    Ok(t)
}

fn fig3() -> RunResult {
    let lambda = 1.0;
    let mut t = Table::new(&["gap", "t", "x"]);
    t.meta("lambda", lambda)
        .meta("window", format!("{FIG3_DECADES} decades of decay per side"))
        .meta("sample_spacing", FIG3_SPACING);
    for n in 1..=3u32 {
        let delta = match solve_delta(lambda, FIGURE_EPSILON, n, DEFAULT_DELTA_TOL) {
            Ok(d) => d,
            Err(Error::RootNotFound { scan, .. }) => {
                let required: Vec<f64> = scan
                    .iter()
                    .map(|&(_, r)| r + lambda)
                    .filter(|r| r.is_finite())
                    .collect();
                let lo = required.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = required.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                t.meta(
                    &format!("gap{n}"),
                    format!(
                        "no mode at lambda = {lambda}; lambda_required spans [{}, {}] across the tongue",
                        format_num(lo),
                        format_num(hi)
                    ),
                );
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let mu = decaying_mode(&MathieuParams::new(delta, FIGURE_EPSILON)?, Direction::Plus)?.multiplier;
        let window = decay_window(mu, FIG3_DECADES);
        let samples = 2 * (window / FIG3_SPACING).ceil() as usize + 1;
        let mode = build_profile(delta, FIGURE_EPSILON, lambda, window, samples)?;
        t.meta(
            &format!("gap{n}"),
            format!("delta = {}, half_window = {}", format_num(delta), format_num(window)),
        );
        profile_rows(&mut t, &mode, &[n.into()]);
    }
    Ok(t)
}

fn fig4() -> RunResult {
    let (lambda, width, n) = (1.0, 0.25, 1);
    let dirac = solve_delta(lambda, FIGURE_EPSILON, n, DEFAULT_DELTA_TOL)?;
    let (lo, hi) = gap_edges(FIGURE_EPSILON, n, 1e-13)?;
    let mut t = Table::new(&[
        "kick",
        "width",
        "lambda",
        "delta",
        "delta_dirac",
        "difference",
        "fraction_of_gap",
    ]);
    t.meta("gap", n)
        .meta("lower_edge", format_num(lo))
        .meta("upper_edge", format_num(hi))
        .meta(
            "width_convention",
            "gaussian standard deviation; lorentzian half width at half maximum",
        );
    for kick in [
        KickSpec::Gaussian {
            strength: lambda,
            width,
        },
        KickSpec::Lorentzian {
            strength: lambda,
            width,
        },
    ] {
        let mode = solve_bvp(&ShootingProblem::new(FIGURE_EPSILON, kick)?, n)?;
        let d = mode.params.delta;
        t.push(vec![
            kick.name().into(),
            width.into(),
            lambda.into(),
            d.into(),
            dirac.into(),
            (d - dirac).into(),
            ((d - lo) / (hi - lo)).into(),
        ]);
    }
    t.push(vec![
        "dirac".into(),
        0.0.into(),
        lambda.into(),
        dirac.into(),
        dirac.into(),
        0.0.into(),
        ((dirac - lo) / (hi - lo)).into(),
    ]);
    Ok(t)
}

fn d1curve() -> RunResult {
    let epsilons = [0.01, 0.02, 0.05];
    let lambdas: Vec<f64> = linspace(-1.0, 1.0, 41).into_iter().map(|p| 10f64.powf(p)).collect();
    let rows = compare_asymptotic(&epsilons, &lambdas)?;
    let mut t = Table::new(&["epsilon", "lambda", "delta1_numeric", "delta1_formula", "error"]);
    t.meta("formula", "delta1 = (lambda^2 - 1) / (2 (1 + lambda^2))");
    for r in rows {
        t.push(vec![
            Cell::from(r.epsilon),
            r.lambda.into(),
            r.delta1_numeric.into(),
            r.delta1_formula.into(),
            r.error.into(),
        ]);
    }
    Ok(t)
}
