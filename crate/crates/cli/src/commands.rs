use anharmonic_core::bogoliubov::{
    apply_bogoliubov, default_r_grid, harmonic_squeeze_from_energy, linear_squeeze_min_overlap,
    linear_squeeze_misfit, log_log_slope, scan_linear_squeeze, weak_coupling_errors,
    weak_coupling_roots, weak_coupling_squeeze,
};
use anharmonic_core::closed_form::{turning_points, GaussianTrajectory};
use anharmonic_core::dynamics::{
    integrate_width_at, superposition_residual, uniform_grid, IntegratorConfig, ModeFunction,
};
use anharmonic_core::fock::{ground_energy, spectrum, FockSpace};
use anharmonic_core::{energy, solve_gap_equation, Error, OscillatorParams, Result};

use crate::args::{Command, Method, Physics};
use crate::report::{Report, Value};

/// Relative eigenvalue change tolerated when counting converged levels.
const SPECTRUM_TOL: f64 = 1e-9;
/// Time samples per period in the squeeze misfit scans.
const MISFIT_TIMES: usize = 400;

fn invalid(msg: &str) -> Error {
    Error::InvalidParameter(msg.into())
}

fn params(p: &Physics) -> Result<OscillatorParams> {
    OscillatorParams::new(p.omega, p.lambda)
}

fn check_span(tmax: f64) -> Result<()> {
    if !(tmax.is_finite() && tmax > 0.0) {
        return Err(invalid("tmax must be positive"));
    }
    Ok(())
}

pub fn run(command: &Command) -> Result<Report> {
    match command {
        Command::Gap { physics, .. } => gap(physics),
        Command::Trajectory {
            physics,
            epsilon,
            tmax,
            samples,
            method,
            ..
        } => trajectory(physics, *epsilon, *tmax, *samples, *method),
        Command::Roots {
            physics, epsilon, ..
        } => roots(physics, *epsilon),
        Command::Squeeze {
            physics, epsilon, ..
        } => squeeze(physics, *epsilon),
        Command::Spectrum {
            physics,
            dim,
            count,
            ..
        } => spectrum_table(physics, *dim, *count),
        Command::Weakcheck {
            omega,
            epsilon,
            lambda_grid,
            ..
        } => weakcheck(*omega, *epsilon, lambda_grid),
        Command::Nonlinearity {
            physics,
            epsilon,
            r,
            tmax,
            samples,
            ..
        } => nonlinearity(physics, *epsilon, *r, *tmax, *samples),
    }
}

fn gap(physics: &Physics) -> Result<Report> {
    let p = params(physics)?;
    let vac = solve_gap_equation(&p);
    let mut report = Report::new("gap");
    report.set("omega", p.omega());
    report.set("lambda", p.lambda());
    report.set("omega_g", vac.omega_g);
    report.set("epsilon_min", vac.epsilon_min);
    report.set("width_squared", vac.width_squared());
    report.set("residual", vac.gap_residual(&p));
    Ok(report)
}

fn trajectory(
    physics: &Physics,
    epsilon: f64,
    tmax: f64,
    samples: usize,
    method: Method,
) -> Result<Report> {
    let p = params(physics)?;
    check_span(tmax)?;
    let traj = GaussianTrajectory::new(&p, epsilon)?;
    let times = uniform_grid(0.0, tmax, samples)?;
    let closed: Option<Vec<f64>> = (method != Method::Ode)
        .then(|| times.iter().map(|&t| traj.chi_squared_at(t)).collect());
    let ode: Option<Vec<f64>> = if method == Method::Closed {
        None
    } else {
        let run = integrate_width_at(
            &p,
            traj.state_at(0.0),
            0.0,
            times.clone(),
            &IntegratorConfig::default(),
        )?;
        Some(run.chi_squared().collect())
    };

    let mut report = Report::new("trajectory").with_columns(&["t", "y_closed", "y_ode", "abs_diff"]);
    let mut max_diff: f64 = 0.0;
    for (i, &t) in times.iter().enumerate() {
        let yc = closed.as_ref().map(|v| v[i]);
        let yo = ode.as_ref().map(|v| v[i]);
        let diff = yc.zip(yo).map(|(a, b)| (a - b).abs());
        if let Some(d) = diff {
            max_diff = max_diff.max(d);
        }
        report.push_row(vec![t.into(), yc.into(), yo.into(), diff.into()]);
    }
    report.set("omega", p.omega());
    report.set("lambda", p.lambda());
    report.set("epsilon", epsilon);
    report.set("epsilon_min", solve_gap_equation(&p).epsilon_min);
    report.set("period", traj.period());
    if method == Method::Both {
        report.set("max_abs_diff", max_diff);
    }
    Ok(report)
}

fn roots(physics: &Physics, epsilon: f64) -> Result<Report> {
    let p = params(physics)?;
    let mut report = Report::new("roots");
    report.set("omega", p.omega());
    report.set("lambda", p.lambda());
    report.set("epsilon", epsilon);
    if p.is_harmonic() {
        let traj = GaussianTrajectory::new(&p, epsilon)?;
        let w2 = p.omega() * p.omega();
        let s = (1.0 - w2 / (4.0 * epsilon * epsilon)).max(0.0).sqrt();
        report.set("y1", epsilon / w2 * (1.0 - s));
        report.set("y2", epsilon / w2 * (1.0 + s));
        report.set("y3", Value::Missing);
        report.set("modulus", 0.0);
        report.set("period", traj.period());
    } else {
        let r = turning_points(&p, epsilon)?;
        report.set("y1", r.y1);
        report.set("y2", r.y2);
        report.set("y3", r.y3);
        report.set("modulus", r.modulus());
        let traj = GaussianTrajectory::new(&p, epsilon)?;
        report.set("period", traj.period());
    }
    if epsilon > 0.5 * p.omega() {
        let w = weak_coupling_roots(p.omega(), p.lambda(), epsilon)?;
        report.set("weak_y1", w.y1);
        report.set("weak_y2", w.y2);
        report.set("weak_y3", w.y3);
    }
    Ok(report)
}

fn squeeze(physics: &Physics, epsilon: f64) -> Result<Report> {
    let p = params(physics)?;
    let (branch, s) = if p.is_harmonic() {
        ("harmonic", harmonic_squeeze_from_energy(p.omega(), epsilon)?)
    } else {
        let floor = solve_gap_equation(&p).epsilon_min;
        if !(epsilon >= floor) {
            return Err(Error::BelowFloor { epsilon, floor });
        }
        ("weak_coupling", weak_coupling_squeeze(p.omega(), p.lambda(), epsilon)?)
    };
    let mut report = Report::new("squeeze");
    report.set("omega", p.omega());
    report.set("lambda", p.lambda());
    report.set("epsilon", epsilon);
    report.set("branch", branch);
    report.set("r", s.r);
    report.set("cosh_r", s.cosh_r);
    report.set("sinh_r", s.sinh_r);
    report.set("omega_eff", s.omega_eff);
    report.set("normalization_defect", s.normalization_defect());
    report.set("exact", p.is_harmonic());
    Ok(report)
}

fn spectrum_table(physics: &Physics, dim: usize, count: usize) -> Result<Report> {
    let p = params(physics)?;
    if count == 0 {
        return Err(invalid("count must be at least 1"));
    }
    let space = FockSpace::gap_basis(&p, dim)?;
    let levels = spectrum(&p, &space, SPECTRUM_TOL)?;
    let vac = solve_gap_equation(&p);
    let mut report = Report::new("spectrum").with_columns(&["n", "energy", "converged"]);
    for (n, &e) in levels.eigenvalues.iter().take(count).enumerate() {
        report.push_row(vec![n.into(), e.into(), (n < levels.converged_count).into()]);
    }
    let e0 = levels.eigenvalues[0];
    let ground_converged = match ground_energy(&p, &space) {
        Ok(_) => true,
        Err(Error::NotConverged(msg)) => {
            report.warnings.push(msg);
            false
        }
        Err(e) => return Err(e),
    };
    if levels.converged_count < count.min(dim) {
        report.warnings.push(format!(
            "only {} of {} requested levels converged at dim {dim}",
            levels.converged_count,
            count.min(dim)
        ));
    }
    report.set("omega", p.omega());
    report.set("lambda", p.lambda());
    report.set("dim", dim);
    report.set("omega_g", vac.omega_g);
    report.set("epsilon_min", vac.epsilon_min);
    report.set("ground_energy", e0);
    report.set("gap", vac.epsilon_min - e0);
    report.set("converged_count", levels.converged_count);
    report.set("ground_converged", ground_converged);
    Ok(report)
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let grid = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| invalid("lambda grid must hold numbers")))
        .collect::<Result<Vec<_>>>()?;
    if grid.is_empty() {
        return Err(invalid("lambda grid is empty"));
    }
    Ok(grid)
}

fn weakcheck(omega: f64, epsilon: f64, grid: &str) -> Result<Report> {
    let lambdas = parse_grid(grid)?;
    let rows = lambdas
        .iter()
        .map(|&l| weak_coupling_errors(omega, l, epsilon))
        .collect::<Result<Vec<_>>>()?;
    let mut report =
        Report::new("weakcheck").with_columns(&["lambda", "root_err", "freq_err", "norm_defect"]);
    for e in &rows {
        report.push_row(vec![
            e.lambda.into(),
            e.root_err.into(),
            e.freq_err.into(),
            e.norm_defect.into(),
        ]);
    }
    let slope = |pick: fn(&anharmonic_core::bogoliubov::WeakCouplingErrors) -> f64| {
        let ys: Vec<f64> = rows.iter().map(pick).collect();
        log_log_slope(&lambdas, &ys).ok()
    };
    report.set("omega", omega);
    report.set("epsilon", epsilon);
    report.set("root_slope", slope(|e| e.root_err));
    report.set("freq_slope", slope(|e| e.freq_err));
    report.set("defect_slope", slope(|e| e.norm_defect));
    Ok(report)
}

fn nonlinearity(
    physics: &Physics,
    epsilon: Option<f64>,
    r: Option<f64>,
    tmax: f64,
    samples: usize,
) -> Result<Report> {
    let p = params(physics)?;
    check_span(tmax)?;
    let times = uniform_grid(0.0, tmax, samples)?;
    let omega_g = solve_gap_equation(&p).omega_g;
    let epsilon = match (epsilon, r) {
        (Some(e), None) => e,
        (None, Some(r)) => {
            if !(r.is_finite() && r >= 0.0) {
                return Err(invalid("r must be non-negative"));
            }
            let start = apply_bogoliubov(&ModeFunction::plane_wave(omega_g, 0.0), r);
            energy(&p, &start.width_state()?)
        }
        _ => return Err(invalid("give exactly one of epsilon or r")),
    };
    let scan = scan_linear_squeeze(&p, epsilon, &default_r_grid(), MISFIT_TIMES)?;
    let r_used = r.unwrap_or(scan.best_r);

    let mut report = Report::new("nonlinearity");
    report.set("omega", p.omega());
    report.set("lambda", p.lambda());
    report.set("epsilon", epsilon);
    report.set("r", r_used);
    report.set("meanfield_residual_max", superposition_residual(&p, r_used, &times));
    report.set("misfit_at_r", linear_squeeze_misfit(&p, epsilon, r_used, MISFIT_TIMES)?);
    report.set("best_r", scan.best_r);
    report.set("best_misfit", scan.best_misfit);
    report.set(
        "min_overlap",
        linear_squeeze_min_overlap(&p, epsilon, r_used, MISFIT_TIMES)?,
    );
    Ok(report)
}
