//! Data tables behind each published figure, on fixed grids.

use std::f64::consts::PI;

use num_complex::Complex64;
use ptlattice::bound::{find_bound_states, pt_norm, real_root_count};
use ptlattice::pt_scattering::pt_current;
use ptlattice::scattering::{perfect_transmission, solve_scattering};
use ptlattice::spectrum::{ric_gammas, solve_discrete_spectrum, sweep_spectrum, RicGamma};
use ptlattice::{Axis, Direction, ModelParams, StateClass};

use crate::config::{linspace, FigureId};
use crate::table::{Cell, Column, Table};
use crate::CliError;

/// Points on the Γ axis of the spectrum figures.
pub const SPECTRUM_POINTS: usize = 600;
pub const FIG8_K_POINTS: usize = 200;
pub const FIG8_GAMMA_POINTS: usize = 100;

pub fn figure_data(which: FigureId) -> Result<Table, CliError> {
    match which {
        FigureId::Fig3 => fig3(),
        FigureId::Fig4 => fig4(),
        FigureId::Fig5 => fig5(),
        FigureId::Fig6 => fig6(),
        FigureId::Fig7 => fig7(),
        FigureId::Fig8 => fig8(),
    }
}

fn spectrum_columns() -> Vec<Column> {
    ["gamma", "branch", "ReE", "ImE", "Rek", "Imk"].map(Column::real).into()
}

fn push_sweep(table: &mut Table, base: &ModelParams, prefix: &[Cell]) -> Result<(), CliError> {
    let grid = linspace(0.0, 3.0, SPECTRUM_POINTS);
    for row in sweep_spectrum(base, Axis::Gamma, &grid)? {
        let mut cells = prefix.to_vec();
        cells.extend([
            row.value.into(),
            row.branch.into(),
            row.point.energy.re.into(),
            row.point.energy.im.into(),
            row.point.k.re.into(),
            row.point.k.im.into(),
        ]);
        table.push(cells);
    }
    Ok(())
}

/// Spectrum against Γ at ε₀ = ε₁ = 0.
fn fig3() -> Result<Table, CliError> {
    let mut table = Table::new("fig3", spectrum_columns());
    push_sweep(&mut table, &ModelParams::gain_loss(0.0)?, &[])?;
    Ok(table)
}

/// Spectrum against Γ at ε₀ = 0 for two values of ε₁.
fn fig4() -> Result<Table, CliError> {
    let mut columns = vec![Column::real("eps1")];
    columns.extend(spectrum_columns());
    let mut table = Table::new("fig4", columns);
    for eps1 in [0.2, 0.6] {
        push_sweep(&mut table, &ModelParams::new(0.0, eps1, 0.0)?, &[eps1.into()])?;
    }
    Ok(table)
}

/// RIC wavenumbers at `Γ_RIC^±(ε₁)` for ε₁ ∈ [0, 1.5], ε₀ = 0.
///
/// The plus branch starts at k = π/4 and the minus branch at 3π/4, so where
/// both couplings coincide the smaller `Re k` belongs to the plus branch.
/// While the minus branch is flagged invalid its two real roots nearest the
/// upper band edge (the bound/virtual pair it split into) are reported
/// instead. No rows exist once `Γ_RIC^−` itself stops being real.
fn fig5() -> Result<Table, CliError> {
    let mut table = Table::new(
        "fig5",
        ["eps1", "sign", "gamma", "valid", "class", "Rek", "Imk"].map(Column::real).into(),
    );
    for eps1 in linspace(0.0, 1.5, 301) {
        let gammas = ric_gammas(eps1);
        for (sign, ric) in [("+", gammas.plus), ("-", gammas.minus)] {
            for (class, k) in ric_wavenumbers(eps1, ric, sign == "+")? {
                table.push(vec![
                    eps1.into(),
                    sign.into(),
                    ric.gamma.into(),
                    ric.valid.into(),
                    class.to_string().into(),
                    k.re.into(),
                    k.im.into(),
                ]);
            }
        }
    }
    Ok(table)
}

fn ric_wavenumbers(eps1: f64, ric: RicGamma, plus: bool) -> Result<Vec<(StateClass, Complex64)>, CliError> {
    if !ric.gamma.is_finite() {
        return Ok(Vec::new());
    }
    let points = solve_discrete_spectrum(&ModelParams::new(0.0, eps1, ric.gamma)?)?;
    if ric.valid {
        let rics = points.iter().filter(|p| p.class == StateClass::Ric && p.k.re > 0.0);
        let pick = if plus {
            rics.min_by(|a, b| a.k.re.total_cmp(&b.k.re))
        } else {
            rics.max_by(|a, b| a.k.re.total_cmp(&b.k.re))
        };
        return Ok(pick.map(|p| (p.class, p.k)).into_iter().collect());
    }
    let mut split: Vec<_> = points
        .iter()
        .filter(|p| matches!(p.class, StateClass::Bound | StateClass::VirtualBound) && p.lambda.re < 0.0)
        .collect();
    split.sort_by(|a, b| (a.lambda.re + 1.0).abs().total_cmp(&(b.lambda.re + 1.0).abs()));
    Ok(split.iter().take(2).map(|p| (p.class, p.k)).collect())
}

/// Roots, real-root count and PT norms along Γ for ε₀ = 0.05, ε₁ = −1.1.
fn fig6() -> Result<Table, CliError> {
    let mut table = Table::new(
        "fig6",
        [
            "gamma",
            "branch",
            "lambda_re",
            "lambda_im",
            "class",
            "real_roots",
            "unbroken",
            "pt_norm",
        ]
        .map(Column::real)
        .into(),
    );
    let base = ModelParams::new(0.05, -1.1, 0.0)?;
    let grid: Vec<f64> = (1..=SPECTRUM_POINTS)
        .map(|i| 0.6 * i as f64 / SPECTRUM_POINTS as f64)
        .collect();
    let rows = sweep_spectrum(&base, Axis::Gamma, &grid)?;
    let mut start = 0;
    while start < rows.len() {
        let len = rows[start..].iter().take_while(|r| r.value == rows[start].value).count();
        let group = &rows[start..start + len];
        start += len;
        let params = base.with_gamma(group[0].value)?;
        let real_roots = real_root_count(&params)?;
        let bound = find_bound_states(&params)?.bound;
        for row in group {
            let lambda = row.point.lambda;
            let norm = match bound.iter().find(|s| (Complex64::new(s.lambda, 0.0) - lambda).norm() < 1e-9) {
                Some(s) => pt_norm(s)?.n_pt,
                None => f64::NAN,
            };
            table.push(vec![
                row.value.into(),
                row.branch.into(),
                lambda.re.into(),
                lambda.im.into(),
                row.point.class.to_string().into(),
                real_roots.into(),
                (real_roots == 4).into(),
                norm.into(),
            ]);
        }
    }
    Ok(table)
}

/// Perfect-transmission wavenumbers against Γ with the discrete `Re k_j`
/// as background, for the four captioned cases.
fn fig7() -> Result<Table, CliError> {
    let cases = [
        ("a", 0.0, 0.0, Direction::LeftToRight),
        ("b", 0.0, 0.0, Direction::RightToLeft),
        ("c", 0.0, 0.08, Direction::LeftToRight),
        ("d", -0.1, 0.0, Direction::LeftToRight),
    ];
    let mut table = Table::new(
        "fig7",
        ["case", "direction", "series", "gamma", "k", "gamma_independent"]
            .map(Column::real)
            .into(),
    );
    for (case, eps0, eps1, direction) in cases {
        for gamma in linspace(-3.0, 3.0, SPECTRUM_POINTS) {
            let params = ModelParams::new(eps0, eps1, gamma)?;
            let set = perfect_transmission(&params, direction)?;
            let mut rows: Vec<(&str, f64, bool)> = set
                .ktildes
                .iter()
                .map(|&k| ("perfect", k, set.gamma_independent.iter().any(|g| (g - k).abs() < 1e-9)))
                .collect();
            if set.all_k {
                rows.push(("all_k", f64::NAN, true));
            }
            for p in solve_discrete_spectrum(&params)? {
                rows.push(("spectrum", p.k.re, false));
            }
            for (series, k, fixed) in rows {
                table.push(vec![
                    case.into(),
                    direction.to_string().into(),
                    series.into(),
                    gamma.into(),
                    k.into(),
                    fixed.into(),
                ]);
            }
        }
    }
    Ok(table)
}

/// `j_PT / |B|²` for left incidence at ε₀ = ε₁ = 0 over k ∈ (−π, π),
/// Γ ∈ (0, 5]; NaN at poles.
fn fig8() -> Result<Table, CliError> {
    let mut table = Table::new(
        "fig8",
        vec![Column::real("k"), Column::real("gamma"), Column::complex("jpt_over_b2")],
    );
    let step = 2.0 * PI / FIG8_K_POINTS as f64;
    for j in 1..=FIG8_GAMMA_POINTS {
        let gamma = 5.0 * j as f64 / FIG8_GAMMA_POINTS as f64;
        let params = ModelParams::gain_loss(gamma)?;
        for i in 0..FIG8_K_POINTS {
            let k = -PI + (i as f64 + 0.5) * step;
            let value = match solve_scattering(&params, k, Direction::LeftToRight) {
                Ok(s) if s.b.norm_sqr() > 0.0 => pt_current(&s.wave(), 1) / s.b.norm_sqr(),
                _ => Complex64::new(f64::NAN, f64::NAN),
            };
            table.push(vec![k.into(), gamma.into(), value.into()]);
        }
    }
    Ok(table)
}
