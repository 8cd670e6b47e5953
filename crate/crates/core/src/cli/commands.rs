use rayon::prelude::*;

use super::config::{Command, ExperimentConfig};
use super::presets::{parse_function, parse_metric, parse_perturbation, parse_symbol};
use super::table::{Cell, Table};
use crate::bergman::{dd_identity, isometry_fit};
use crate::error::{Error, Result};
use crate::hilb::{hilb_sweep, MetricField};
use crate::manifolds::{cosphere_quadrature, EigenBasis, Grid, ManifoldKind, ManifoldModel};
use crate::metspace::{induced_norm_closed, induced_norm_trace, szego_trace};
use crate::operators::{
    assemble_kohn_nirenberg, assemble_multiplication, basis_bandwidth, grid_for_degree, multiplication_tail_defect,
    theorem_a_check, Symbol, SMOOTH_MARGIN,
};
use crate::sphereband::{cumulative_band_sum, sphere_band_check, takahashi_check, takahashi_constant};

/// Result of a `--check` evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub check: CheckOutcome,
    /// Extra lines for stderr.
    pub notes: Vec<String>,
}

fn outcome(passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { passed, detail }
}

fn sample_grid(cfg: &ExperimentConfig) -> Result<Grid> {
    let model = cfg.model;
    let (res, shift) = match model.kind() {
        ManifoldKind::Circle => (48, 0.05),
        ManifoldKind::Torus2 => (6, 0.05),
        ManifoldKind::Sphere2 => (4, 0.3),
    };
    Grid::product_shifted(model, cfg.grid_res.unwrap_or(res), shift)
}

fn key_cell(cfg: &ExperimentConfig, basis: &EigenBasis) -> Cell {
    match cfg.sweep {
        super::config::Sweep::Levels(_) => basis.top_level().index.into(),
        super::config::Sweep::MuSq(_) => basis.top_level().mu_sq.into(),
    }
}

fn key_header(cfg: &ExperimentConfig) -> &'static str {
    cfg.sweep.key()
}

fn top_basis(cfg: &ExperimentConfig) -> EigenBasis {
    let top = *cfg.sweep.levels(cfg.model).last().expect("validated non-empty sweep");
    EigenBasis::new(cfg.model, top)
}

/// Non-increasing over the last three values, allowing one uptick of at most 10%.
pub fn trend_ok(values: &[f64]) -> bool {
    let tail = &values[values.len().saturating_sub(3)..];
    let mut upticks = 0;
    for w in tail.windows(2) {
        if w[1] > w[0] {
            if w[1] > 1.1 * w[0] {
                return false;
            }
            upticks += 1;
        }
    }
    upticks <= 1
}

fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

pub fn run_command(cfg: &ExperimentConfig) -> Result<Report> {
    match cfg.command {
        Command::Spectra => spectra(cfg),
        Command::Isometry => isometry(cfg),
        Command::Bergman => bergman(cfg),
        Command::TailDefect => tail(cfg),
        Command::HilbApprox => hilb(cfg),
        Command::MetNorm => met_norm(cfg),
        Command::Szego => szego(cfg),
        Command::SphereBand => sphere_band(cfg),
        Command::SphereCumulative => sphere_cumulative(cfg),
        Command::Takahashi => takahashi(cfg),
        Command::ListPresets => Err(Error::Input("list-presets produces no table".into())),
    }
}

fn spectra(cfg: &ExperimentConfig) -> Result<Report> {
    let model = cfg.model;
    let grid = sample_grid(cfg)?;
    let tol = cfg.tol.unwrap_or(1e-10);
    let mut t = Table::new(&[
        key_header(cfg),
        "mu_sq",
        "multiplicity",
        "dim",
        "weyl_count",
        "pullback",
        "identity_value",
        "rel_dev",
    ]);
    let mut worst = 0.0f64;
    for c in cfg.sweep.cutoffs() {
        let basis = EigenBasis::with_cutoff(model, c);
        // Σ_levels μ² d_level / (n Vol): the trace identity for homogeneous models
        let value: f64 = basis.levels().iter().map(|l| l.mu_sq as f64 * l.multiplicity as f64).sum::<f64>()
            / (model.dim() as f64 * model.volume());
        let field = dd_identity(&basis, grid.points())?;
        let dev = field
            .values()
            .iter()
            .zip(grid.points())
            .map(|(v, p)| (*v - *p.g0() * value).norm_wrt(p.g0()) / value)
            .fold(0.0, f64::max);
        worst = worst.max(dev);
        let top = basis.top_level();
        t.push(vec![
            key_cell(cfg, &basis),
            top.mu_sq.into(),
            top.multiplicity.into(),
            basis.len().into(),
            model.weyl_count(basis.mu_top()).into(),
            field.sup_norm().into(),
            value.into(),
            dev.into(),
        ]);
    }
    let check = outcome(worst <= tol, format!("max pullback deviation {worst:.3e} (tol {tol:.1e})"));
    Ok(Report { table: t, check, notes: vec![] })
}

fn isometry(cfg: &ExperimentConfig) -> Result<Report> {
    let fit = isometry_fit(cfg.model, &cfg.sweep.cutoffs(), cfg.grid_res.unwrap_or(8))?;
    let tol = cfg.tol.unwrap_or(0.05);
    let mut t = Table::new(&[key_header(cfg), "mu", "measured_coeff", "theory_coeff", "rel_err"]);
    for (s, c) in fit.samples.iter().zip(cfg.sweep.cutoffs()) {
        let basis = EigenBasis::with_cutoff(cfg.model, c);
        t.push(vec![
            key_cell(cfg, &basis),
            s.mu.into(),
            s.scaled.into(),
            fit.theory.into(),
            ((s.scaled - fit.theory).abs() / fit.theory).into(),
        ]);
    }
    let note = format!(
        "fitted coefficient {:.16e} (theory {:.16e}, rel err {:.3e}, subleading {:.6e})",
        fit.coefficient, fit.theory, fit.rel_err, fit.subleading
    );
    let check = outcome(fit.rel_err <= tol, format!("fitted coefficient rel err {:.3e} (tol {tol})", fit.rel_err));
    Ok(Report { table: t, check, notes: vec![note] })
}

fn default_symbol(model: ManifoldModel) -> &'static str {
    match model.kind() {
        ManifoldKind::Circle => "e-cos-theta",
        ManifoldKind::Torus2 => "xi1-sq",
        ManifoldKind::Sphere2 => "one-plus-half-x3sq",
    }
}

fn bergman(cfg: &ExperimentConfig) -> Result<Report> {
    let model = cfg.model;
    let spec = cfg.symbol.as_deref().unwrap_or(default_symbol(model));
    let symbol = parse_symbol(spec, model)?;
    let basis = top_basis(cfg);
    let b = match model.kind() {
        ManifoldKind::Torus2 => assemble_kohn_nirenberg(symbol.as_ref(), &basis, &cfg.kn_options())?,
        _ => {
            let f = parse_function(spec, model).map_err(|_| {
                Error::Unsupported(format!("{} supports multiplication symbols only, got '{spec}'", model.kind()))
            })?;
            let degree = 2 * basis_bandwidth(&basis) + f.bandwidth().unwrap_or(SMOOTH_MARGIN);
            assemble_multiplication(&f, &basis, &grid_for_degree(model, degree)?)?
        }
    };
    let grid = sample_grid(cfg)?;
    let rows = theorem_a_check(&b, &basis, symbol.as_ref(), &cfg.sweep.levels(model), &grid, cfg.fiber_res)?;
    let tol = cfg.tol.unwrap_or(0.10);
    let mut t = Table::new(&[key_header(cfg), "mu", "dim", "sup_rel_err", "l2_rel_err", "pd_shift"]);
    for (r, c) in rows.iter().zip(cfg.sweep.cutoffs()) {
        t.push(vec![
            key_cell(cfg, &EigenBasis::with_cutoff(model, c)),
            r.mu.into(),
            r.dim.into(),
            r.sup_rel_err.into(),
            r.l2_rel_err.into(),
            r.shift.into(),
        ]);
    }
    let errs: Vec<f64> = rows.iter().map(|r| r.sup_rel_err).collect();
    let last = *errs.last().unwrap();
    let check = outcome(
        last <= tol && trend_ok(&errs),
        format!("final sup rel err {last:.3e} (tol {tol}), trend {}", if trend_ok(&errs) { "ok" } else { "violated" }),
    );
    Ok(Report { table: t, check, notes: vec![] })
}

fn tail(cfg: &ExperimentConfig) -> Result<Report> {
    let model = cfg.model;
    let default = match model.kind() {
        ManifoldKind::Circle => "e-cos-theta",
        ManifoldKind::Torus2 => "e-0.3cos-x1",
        ManifoldKind::Sphere2 => "one-plus-half-x3sq",
    };
    let f = parse_function(cfg.function.as_deref().unwrap_or(default), model)?;
    let grid = sample_grid(cfg)?;
    let levels = cfg.sweep.levels(model);
    if levels[0] == 0 {
        return Err(Error::Input("tail-defect needs levels ≥ 1".into()));
    }
    let defects = levels
        .iter()
        .map(|&l| multiplication_tail_defect(&f, model, l, grid.points()))
        .collect::<Result<Vec<_>>>()?;
    let tol = cfg.tol.unwrap_or(0.20);
    let mut t = Table::new(&[key_header(cfg), "mu", "defect", "ratio_to_first"]);
    for (d, c) in defects.iter().zip(cfg.sweep.cutoffs()) {
        let basis = EigenBasis::with_cutoff(model, c);
        t.push(vec![key_cell(cfg, &basis), basis.mu_top().into(), (*d).into(), (d / defects[0]).into()]);
    }
    let ratio = defects.last().unwrap() / defects[0];
    let check = outcome(levels.len() >= 2 && ratio <= tol, format!("last/first defect ratio {ratio:.3e} (tol {tol})"));
    Ok(Report { table: t, check, notes: vec![] })
}

fn default_metric(model: ManifoldModel) -> &'static str {
    match model.kind() {
        ManifoldKind::Circle => "conformal:u=cos(theta)",
        ManifoldKind::Torus2 => "aniso-diag:0.3,0.3",
        ManifoldKind::Sphere2 => "conformal:u=0.3z",
    }
}

fn metric(cfg: &ExperimentConfig) -> Result<MetricField> {
    parse_metric(cfg.metric.as_deref().unwrap_or(default_metric(cfg.model)), cfg.model)
}

fn hilb(cfg: &ExperimentConfig) -> Result<Report> {
    let model = cfg.model;
    let g = metric(cfg)?;
    let grid = sample_grid(cfg)?;
    let rows = hilb_sweep(&g, &top_basis(cfg), &cfg.sweep.levels(model), &grid, &cfg.kn_options())?;
    let tol = cfg.tol.unwrap_or(if model.kind() == ManifoldKind::Circle { 0.05 } else { 0.10 });
    let mut t = Table::new(&[key_header(cfg), "sup_rel_err", "l2_rel_err", "pd_shift"]);
    for (r, c) in rows.iter().zip(cfg.sweep.cutoffs()) {
        t.push(vec![
            key_cell(cfg, &EigenBasis::with_cutoff(model, c)),
            r.sup_rel_err.into(),
            r.l2_rel_err.into(),
            r.shift.into(),
        ]);
    }
    let errs: Vec<f64> = rows.iter().map(|r| r.sup_rel_err).collect();
    let pd = rows.iter().all(|r| r.min_eigenvalue > 0.0);
    let last = *errs.last().unwrap();
    let ok = last <= tol && strictly_decreasing(&errs) && pd;
    let check = outcome(
        ok,
        format!("final sup rel err {last:.3e} (tol {tol}), decreasing {}, pointwise SPD {pd}", strictly_decreasing(&errs)),
    );
    Ok(Report { table: t, check, notes: vec![] })
}

fn closed_quadrature(cfg: &ExperimentConfig) -> Result<crate::manifolds::CosphereQuadrature> {
    match cfg.model.kind() {
        ManifoldKind::Circle => cosphere_quadrature(cfg.model, 64, 4),
        _ => cosphere_quadrature(cfg.model, 32, cfg.fiber_res),
    }
}

fn met_norm(cfg: &ExperimentConfig) -> Result<Report> {
    let model = cfg.model;
    if model.kind() == ManifoldKind::Sphere2 {
        return Err(Error::Unsupported("met-norm runs on circle and torus2 only".into()));
    }
    let g = parse_metric(cfg.metric.as_deref().unwrap_or("reference"), model)?;
    let default = if model.kind() == ManifoldKind::Circle { "cos-theta" } else { "cos-x1-dx1dx1" };
    let gdot = parse_perturbation(cfg.gdot.as_deref().unwrap_or(default), model)?;
    let closed = induced_norm_closed(&g, &gdot, &closed_quadrature(cfg)?)?;
    let tol = cfg.tol.unwrap_or(0.10);
    let mut t = Table::new(&[key_header(cfg), "trace_norm", "closed_form", "ratio"]);
    let mut gaps = Vec::new();
    for c in cfg.sweep.cutoffs() {
        let basis = EigenBasis::with_cutoff(model, c);
        let tr = induced_norm_trace(&g, &gdot, &basis, &cfg.kn_options())?;
        gaps.push((tr / closed - 1.0).abs());
        t.push(vec![key_cell(cfg, &basis), tr.into(), closed.into(), (tr / closed).into()]);
    }
    let last = *gaps.last().unwrap();
    let converging = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let check = outcome(
        last <= tol && converging,
        format!("final |ratio − 1| {last:.3e} (tol {tol}), converging {converging}"),
    );
    Ok(Report { table: t, check, notes: vec![] })
}

fn szego(cfg: &ExperimentConfig) -> Result<Report> {
    let model = cfg.model;
    if model.kind() == ManifoldKind::Sphere2 {
        return Err(Error::Unsupported("szego runs on circle and torus2 only".into()));
    }
    let spec = cfg.symbol.as_deref().unwrap_or("one");
    let symbols = spec.split('*').map(|s| parse_symbol(s, model)).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&dyn Symbol> = symbols.iter().map(|s| s.as_ref()).collect();
    let quad = match model.kind() {
        ManifoldKind::Circle => cosphere_quadrature(model, 256, 4)?,
        _ => cosphere_quadrature(model, 32, cfg.fiber_res)?,
    };
    let tol = cfg.tol.unwrap_or(0.05);
    let mut t = Table::new(&[key_header(cfg), "measured", "predicted", "ratio"]);
    let mut last = f64::NAN;
    for c in cfg.sweep.cutoffs() {
        let basis = EigenBasis::with_cutoff(model, c);
        let s = szego_trace(&refs, &basis, &cfg.kn_options(), &quad)?;
        last = s.ratio;
        t.push(vec![key_cell(cfg, &basis), s.measured.into(), s.predicted.into(), s.ratio.into()]);
    }
    let gap = (last - 1.0).abs();
    let check = outcome(gap <= tol, format!("final |ratio − 1| {gap:.3e} (tol {tol})"));
    Ok(Report { table: t, check, notes: vec![] })
}

fn sphere_function(cfg: &ExperimentConfig) -> Result<crate::operators::ScalarField> {
    let default = if cfg.k % 2 == 0 { "one-plus-half-x3sq" } else { "x3" };
    parse_function(cfg.function.as_deref().unwrap_or(default), cfg.model)
}

fn sphere_band(cfg: &ExperimentConfig) -> Result<Report> {
    let a = sphere_function(cfg)?;
    let grid = sample_grid(cfg)?;
    let levels = cfg.sweep.levels(cfg.model);
    let rows = sphere_band_check(&a, &levels, cfg.k, grid.points(), cfg.fiber_res, cfg.t_res)?;
    let tol = cfg.tol.unwrap_or(if cfg.k == 0 { 0.10 } else { 0.15 });
    let mut t = Table::new(&["N", "k", "rel_err", "actual_sup", "predicted_sup"]);
    for r in &rows {
        t.push(vec![r.level.into(), r.k.into(), r.rel_err.into(), r.actual_sup.into(), r.predicted_sup.into()]);
    }
    let errs: Vec<f64> = rows.iter().map(|r| r.rel_err).collect();
    let within = errs.iter().all(|&e| e <= tol);
    let rate = errs.windows(2).all(|w| w[1] <= 0.7 * w[0]);
    let check = outcome(within && rate, format!("max rel err {:.3e} (tol {tol}), successive ratio ≤ 0.7 {rate}", errs.iter().cloned().fold(0.0, f64::max)));
    Ok(Report { table: t, check, notes: vec![] })
}

fn sphere_cumulative(cfg: &ExperimentConfig) -> Result<Report> {
    let a = sphere_function(cfg)?;
    let grid = sample_grid(cfg)?;
    let levels = cfg.sweep.levels(cfg.model);
    let rows = cumulative_band_sum(&a, &levels, grid.points(), cfg.fiber_res)?;
    // slack on the O(1/N) rate: err(N₂)/err(N₁) ≤ slack · N₁/N₂
    let slack = cfg.tol.unwrap_or(1.25);
    let mut t = Table::new(&["N", "mu", "rel_err"]);
    for r in &rows {
        t.push(vec![r.level.into(), r.mu.into(), r.rel_err.into()]);
    }
    let rate = rows.windows(2).all(|w| w[1].rel_err <= slack * w[0].rel_err * w[0].level as f64 / w[1].level as f64);
    let check = outcome(rows.len() >= 2 && rate, format!("O(1/N) trend {rate} (slack {slack})"));
    Ok(Report { table: t, check, notes: vec![] })
}

fn takahashi(cfg: &ExperimentConfig) -> Result<Report> {
    let grid = sample_grid(cfg)?;
    let levels = cfg.sweep.levels(cfg.model);
    let tol = cfg.tol.unwrap_or(1e-8);
    let devs = levels.par_iter().map(|&l| takahashi_check(l, grid.points())).collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["N", "c_n", "deviation"]);
    for (&l, &d) in levels.iter().zip(&devs) {
        t.push(vec![l.into(), takahashi_constant(l).into(), d.into()]);
    }
    let worst = devs.iter().cloned().fold(0.0, f64::max);
    let check = outcome(worst <= tol, format!("max deviation {worst:.3e} (tol {tol:.1e})"));
    Ok(Report { table: t, check, notes: vec![] })
}
