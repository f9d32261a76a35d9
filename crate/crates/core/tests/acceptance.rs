//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::{rngs::StdRng, Rng, SeedableRng};
use tongues_core::asymptotics::{compare_asymptotic, decay_rate, delta1_of_lambda, fit_envelope};
use tongues_core::delta_kick::{decay_window, gap_mode, lambda_required, solve_delta, spectral_flow};
use tongues_core::finite_kick::{extrapolate_zero_width, solve_bvp, width_sweep, ShootingProblem};
use tongues_core::floquet::{gap_edges, monodromy};
use tongues_core::roots::linspace;
use tongues_core::{Error, KickSpec, MathieuParams, Matrix2};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(delta: f64, epsilon: f64) -> Result<MathieuParams, String> {
    MathieuParams::new(delta, epsilon).map_err(|e| e.to_string())
}

fn edges(epsilon: f64, n: u32) -> Result<(f64, f64), String> {
    gap_edges(epsilon, n, 1e-13).map_err(|e| format!("gap_edges(eps={epsilon}, n={n}): {e}"))
}

fn monodromy_validity() -> Outcome {
    let deltas = linspace(0.0, 2.5, 50);
    let epsilons = linspace(0.0, 0.5, 20);
    let mut worst_det = 0.0f64;
    let mut worst_free = 0.0f64;
    for &e in &epsilons {
        for &d in &deltas {
            let mono = monodromy(&params(d, e)?).map_err(|e| e.to_string())?;
            worst_det = worst_det.max((mono.matrix.det() - 1.0).abs());
            if e == 0.0 {
                worst_free = worst_free.max(mono.matrix.max_abs_diff(&Matrix2(common::free_rotation(d))));
            }
        }
    }
    let detail = format!("max |det M - 1| = {worst_det:.2e}, max free-rotation error = {worst_free:.2e}");
    if worst_det <= 1e-8 && worst_free <= 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn gap_openings() -> Outcome {
    let epsilons = [0.1, 0.05, 0.01];
    let mut notes = Vec::new();
    for n in 1..=3u32 {
        let center = (n * n) as f64 / 4.0;
        let mut previous_spread = f64::INFINITY;
        for &e in &epsilons {
            let (lo, hi) = edges(e, n)?;
            if !(lo < hi) {
                return Err(format!("n={n} eps={e}: empty interval [{lo}, {hi}]"));
            }
            let spread = (lo - center).abs().max((hi - center).abs());
            if spread > e {
                return Err(format!(
                    "n={n} eps={e}: edges [{lo}, {hi}] farther than eps from {center}"
                ));
            }
            if spread >= previous_spread {
                return Err(format!("n={n} eps={e}: interval does not shrink toward {center}"));
            }
            previous_spread = spread;
            if n == 1 {
                let (dl, dh) = ((lo - (0.25 - e / 2.0)).abs(), (hi - (0.25 + e / 2.0)).abs());
                if dl > 2.0 * e * e || dh > 2.0 * e * e {
                    return Err(format!("n=1 eps={e}: edge offsets {dl:.2e}, {dh:.2e} exceed 2 eps^2"));
                }
            }
        }
        let (lo, hi) = edges(0.01, n)?;
        notes.push(format!("n={n} at eps=0.01: [{lo:.9}, {hi:.9}]"));
    }
    Ok(notes.join("; "))
}

fn delta1_law() -> Outcome {
    let epsilons = [0.01, 0.02, 0.05];
    let lambdas = [0.5, 1.0, 2.0, 4.0];
    let rows = compare_asymptotic(&epsilons, &lambdas).map_err(|e| e.to_string())?;
    let error = |ei: usize, li: usize| rows[ei * lambdas.len() + li].error;
    let mut worst = 0.0f64;
    for (ei, &e) in epsilons.iter().enumerate() {
        for (li, &l) in lambdas.iter().enumerate() {
            let err = error(ei, li);
            worst = worst.max(err / e);
            if err > 3.0 * e {
                return Err(format!("eps={e} lambda={l}: error {err:.3e} > 3 eps"));
            }
        }
    }
    // First-order convergence: the error scales like epsilon, so consecutive
    // errors should grow by the epsilon ratio (2 and 2.5 here) within 30%.
    let mut ratios = Vec::new();
    for ei in 0..epsilons.len() - 1 {
        let expected = epsilons[ei + 1] / epsilons[ei];
        for (li, &l) in lambdas.iter().enumerate() {
            let ratio = error(ei + 1, li) / error(ei, li);
            if (ratio / expected - 1.0).abs() > 0.3 {
                return Err(format!(
                    "lambda={l}: error ratio {ratio:.3} between eps {} and {} not within 30% of {expected}",
                    epsilons[ei],
                    epsilons[ei + 1]
                ));
            }
            ratios.push(ratio);
        }
    }
    // The variant without the factor 1/2 predicts a different delta1; it
    // must be clearly rejected at the smallest epsilon.
    let d = solve_delta(1.0, 0.01, 1, 1e-13).map_err(|e| e.to_string())?;
    let numeric = (d - 0.25) / 0.01;
    let dropped_half = {
        // lambda = 2 sqrt((1 + 2 d) / (1 - 2 d)) = 1 gives (1 + 2 d) / (1 - 2 d) = 1/4.
        let r = 0.25f64;
        (r - 1.0) / (2.0 * (1.0 + r))
    };
    if (numeric - dropped_half).abs() < 3.0 * 0.01 {
        return Err(format!("numeric delta1 {numeric:.4} cannot tell the two forms apart"));
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    Ok(format!(
        "max error/eps = {worst:.3}; error ratios in [{lo:.3}, {hi:.3}]; delta1(lambda=1) = {numeric:.5} vs {:.1} (law) and {dropped_half:.2} (without 1/2)",
        delta1_of_lambda(1.0).unwrap()
    ))
}

fn mode_structure() -> Outcome {
    let (lambda, epsilon) = (0.7, 0.5);
    let (lo, hi) = edges(epsilon, 1)?;
    let mode = gap_mode(lambda, epsilon, 1, 125.6, 4001).map_err(|e| e.to_string())?;
    let delta = mode.params.delta;
    let mut failures = Vec::new();
    if !(lo < delta && delta < hi) {
        failures.push(format!("delta {delta} outside ({lo}, {hi})"));
    }
    let parity = mode.profile.parity_defect();
    if parity > 1e-6 {
        failures.push(format!("parity defect {parity:.2e}"));
    }
    let jump_defect = (mode.origin.jump() - lambda * mode.origin.x).abs();
    if jump_defect > 1e-6 {
        failures.push(format!("jump defect {jump_defect:.2e}"));
    }
    let mut found = Vec::new();
    for n in 1..=3u32 {
        match gap_mode(1.0, epsilon, n, 200.0, 4001) {
            Ok(m) => found.push(format!("n={n}: delta={:.6}", m.params.delta)),
            Err(Error::RootNotFound { scan, .. }) => {
                let (min, max) = scan.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &(_, r)| {
                    (a.min(r + 1.0), b.max(r + 1.0))
                });
                failures.push(format!(
                    "no lambda=1 mode in tongue {n}: lambda_required spans [{min:.4}, {max:.4}] there"
                ));
            }
            Err(e) => failures.push(format!("n={n}: {e}")),
        }
    }
    let detail = format!(
        "fig1 delta={delta:.6} parity={parity:.1e} jump defect={jump_defect:.1e}; {}",
        found.join(", ")
    );
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", failures.join("; ")))
    }
}

fn decay_rate_check() -> Outcome {
    let (lambda, epsilon) = (1.0, 0.05);
    let delta = solve_delta(lambda, epsilon, 1, 1e-13).map_err(|e| e.to_string())?;
    let mu = tongues_core::floquet::decaying_mode(&params(delta, epsilon)?, tongues_core::Direction::Plus)
        .map_err(|e| e.to_string())?
        .multiplier;
    let half_window = decay_window(mu, 6.0);
    let mode = gap_mode(lambda, epsilon, 1, half_window, 16001).map_err(|e| e.to_string())?;
    let fit = fit_envelope(&mode.profile).map_err(|e| e.to_string())?;
    let predicted = decay_rate(lambda, epsilon).map_err(|e| e.to_string())?;
    let rel = (fit.rate - predicted).abs() / predicted;
    let detail = format!(
        "fitted {:.5} vs predicted {predicted:.5} (relative error {rel:.2e})",
        fit.rate
    );
    if rel <= 0.1 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn spectral_flow_check() -> Outcome {
    let epsilon = 0.01;
    let grid: Vec<f64> = (1..=100).map(|k| k as f64 / 10.0).collect();
    let flow = spectral_flow(epsilon, 1, &grid).map_err(|e| e.to_string())?;
    if let Some(w) = flow.windows(2).find(|w| w[1].1 <= w[0].1) {
        return Err(format!("delta not increasing between lambda={} and {}", w[0].0, w[1].0));
    }
    let (lo, hi) = edges(epsilon, 1)?;
    let width = hi - lo;
    let bottom = (flow[0].1 - lo) / width;
    let top = (hi - flow[flow.len() - 1].1) / width;
    let detail = format!("endpoint gaps {bottom:.4} and {top:.4} of the gap width");
    if bottom <= 0.1 && top <= 0.1 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn positive_strengths() -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for &epsilon in &[0.05, 0.3] {
        for n in 1..=3u32 {
            let (lo, hi) = edges(epsilon, n)?;
            let mut range = (f64::INFINITY, f64::NEG_INFINITY);
            let mut bad = 0;
            for k in 0..100 {
                let delta = lo + (k as f64 + 0.5) / 100.0 * (hi - lo);
                match lambda_required(&params(delta, epsilon)?) {
                    Ok(l) => {
                        range = (range.0.min(l), range.1.max(l));
                        if !(l > 0.0) {
                            bad += 1;
                        }
                    }
                    Err(e) => {
                        failures.push(format!("eps={epsilon} n={n} delta={delta}: {e}"));
                        bad += 1;
                    }
                }
            }
            let summary = format!("eps={epsilon} n={n}: lambda in [{:.4e}, {:.4e}]", range.0, range.1);
            if bad > 0 {
                failures.push(format!("{summary} ({bad}/100 not positive)"));
            } else {
                notes.push(summary);
            }
        }
    }
    for lambda in [0.0, -0.5, -1.0] {
        if !matches!(solve_delta(lambda, 0.3, 1, 1e-12), Err(Error::NoGapMode { .. })) {
            failures.push(format!("solve_delta accepted lambda={lambda}"));
        }
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{}; passing: {}", failures.join("; "), notes.join("; ")))
    }
}

fn dirac_limit() -> Outcome {
    let (epsilon, lambda) = (0.5, 1.0);
    let widths = [0.4, 0.2, 0.1, 0.05, 0.025];
    let dirac = solve_delta(lambda, epsilon, 1, 1e-13).map_err(|e| e.to_string())?;
    let sweep = width_sweep(epsilon, lambda, 1, &widths).map_err(|e| e.to_string())?;
    let diffs: Vec<f64> = sweep.iter().map(|&(_, d)| (d - dirac).abs()).collect();
    let extrapolated = extrapolate_zero_width(&sweep).map_err(|e| e.to_string())?;
    let listed: Vec<String> = diffs.iter().map(|d| format!("{d:.2e}")).collect();
    let detail = format!(
        "|delta(w) - delta_dirac| = [{}]; linear extrapolation to w=0 is off by {:.1e}",
        listed.join(", "),
        (extrapolated - dirac).abs()
    );
    let monotone = diffs.windows(2).all(|w| w[1] < w[0]);
    let last = diffs[diffs.len() - 1];
    if monotone && last <= 1e-3 {
        Ok(detail)
    } else if !monotone {
        Err(format!("not monotone: {detail}"))
    } else {
        Err(format!("smallest width misses 1e-3: {detail}"))
    }
}

fn kick_form_insensitivity() -> Outcome {
    let epsilon = 0.5;
    let (lo, hi) = edges(epsilon, 1)?;
    let solve = |kick| -> Result<f64, String> {
        let problem = ShootingProblem::new(epsilon, kick).map_err(|e| e.to_string())?;
        let mode = solve_bvp(&problem, 1).map_err(|e| format!("{}: {e}", kick.name()))?;
        Ok(mode.params.delta)
    };
    let dg = solve(KickSpec::Gaussian {
        strength: 1.0,
        width: 0.25,
    })?;
    let dl = solve(KickSpec::Lorentzian {
        strength: 1.0,
        width: 0.25,
    })?;
    for d in [dg, dl] {
        if !(lo < d && d < hi) {
            return Err(format!("delta {d} outside the first tongue ({lo}, {hi})"));
        }
    }
    let allowed = 0.2 * (hi - lo);
    let detail = format!(
        "gaussian {dg:.6}, lorentzian {dl:.6}, |diff| {:.4} vs allowed {allowed:.4}",
        (dg - dl).abs()
    );
    if (dg - dl).abs() <= allowed {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20_261_014);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let n = rng.gen_range(1..=2u32);
        let epsilon = rng.gen_range(0.1..0.6);
        let s = rng.gen_range(0.1..0.9);
        let (lo, hi) = edges(epsilon, n)?;
        let delta = lo + s * (hi - lo);
        let ours = lambda_required(&params(delta, epsilon)?).map_err(|e| e.to_string())?;
        let oracle = common::shooting_lambda(delta, epsilon);
        let diff = (ours - oracle).abs();
        if diff > 1e-6 {
            return Err(format!(
                "n={n} eps={epsilon:.4} delta={delta:.6}: {ours} vs oracle {oracle}"
            ));
        }
        worst = worst.max(diff);
    }
    Ok(format!("max |difference| = {worst:.2e} over 10 points"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("monodromy validity", monodromy_validity),
        ("gap openings", gap_openings),
        ("asymptotic delta1 law", delta1_law),
        ("mode structure", mode_structure),
        ("decay rate", decay_rate_check),
        ("spectral flow", spectral_flow_check),
        ("no non-positive strengths", positive_strengths),
        ("dirac limit", dirac_limit),
        ("kick-form insensitivity", kick_form_insensitivity),
        ("oracle equivalence", oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
