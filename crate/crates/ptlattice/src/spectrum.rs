//! Discrete spectrum from the Siegert (purely outgoing) condition.
//!
//! With `ψ(x) ∝ λ^{|x|}` on both leads the three defect equations have a
//! non-trivial solution iff
//! `P(λ) = (ε₁²+Γ²)λ⁴ + ε₀(ε₁²+Γ²)λ³ − (1−ε₁²−2ε₀ε₁−Γ²)λ² + (ε₀+2ε₁)λ + 1`
//! vanishes. Each root is one discrete state.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, Matrix3};
use crate::model::{
    classify_sheet, energy_of_lambda, wavenumber_of_lambda, ModelError, ModelParams,
    PiecewiseWave, PlaneWave, SpectralPoint, StateClass, SHEET_TOL,
};
use crate::poly::{self, RootError};

/// Tolerance used to decide reality of λ and the RIC/band-edge classes.
pub const CLASS_TOL: f64 = 1e-8;
/// Leading coefficients below this are treated as zero.
pub const DEGENERATE_TOL: f64 = 1e-14;
/// Acceptance threshold for `|P(λ)|`, relative to the largest coefficient.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("root λ = {lambda} has residual {residual:e} above tolerance")]
    Residual { lambda: Complex64, residual: f64 },
    #[error("closed-form roots need Γ ≠ 0")]
    ZeroGamma,
    #[error("Region-IV asymptotics need Γ > 2, got {0}")]
    OutOfRegime(f64),
    #[error("sweep grid must be non-empty, finite and sorted")]
    BadGrid,
    #[error("λ = {0} does not solve the Siegert quartic")]
    NotARoot(Complex64),
}

/// Coefficients of `P(λ)` in descending degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoeffs {
    pub a4: f64,
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl QuarticCoeffs {
    pub fn descending(&self) -> [f64; 5] {
        [self.a4, self.a3, self.a2, self.a1, self.a0]
    }

    /// True when the quartic term vanishes (`Γ = ε₁ = 0`).
    pub fn is_degenerate(&self) -> bool {
        self.a4.abs() < DEGENERATE_TOL
    }

    /// Coefficients with vanishing leading terms removed; the missing roots
    /// sit at `λ = ∞`.
    pub fn reduced(&self) -> Vec<f64> {
        let all = self.descending();
        let start = all
            .iter()
            .position(|a| a.abs() >= DEGENERATE_TOL)
            .unwrap_or(all.len());
        all[start..].to_vec()
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        poly::eval_real(&self.descending(), lambda)
    }

    pub fn max_abs(&self) -> f64 {
        self.descending().iter().fold(0.0, |m, a| m.max(a.abs()))
    }
}

pub fn quartic_coefficients(params: &ModelParams) -> QuarticCoeffs {
    let (e0, e1, g) = (params.eps0(), params.eps1(), params.gamma());
    let a4 = e1 * e1 + g * g;
    QuarticCoeffs {
        a4,
        a3: e0 * a4,
        a2: -(1.0 - e1 * e1 - 2.0 * e0 * e1 - g * g),
        a1: e0 + 2.0 * e1,
        a0: 1.0,
    }
}

/// Class of a discrete solution from its λ and E.
pub fn classify_state(point: &SpectralPoint, tol: f64) -> StateClass {
    let lambda = point.lambda;
    let modulus = lambda.norm();
    let real_lambda = lambda.im.abs() < tol * modulus.max(1.0);
    if (modulus - 1.0).abs() < tol {
        if real_lambda {
            StateClass::BandEdge
        } else {
            StateClass::Ric
        }
    } else if real_lambda {
        if modulus < 1.0 {
            StateClass::Bound
        } else {
            StateClass::VirtualBound
        }
    } else if modulus < 1.0 {
        StateClass::ComplexLocalized
    } else if point.energy.im < 0.0 {
        StateClass::Resonance
    } else {
        StateClass::AntiResonance
    }
}

/// Builds the full record for a root λ.
pub fn point_from_lambda(lambda: Complex64) -> Result<SpectralPoint, ModelError> {
    let mut point = SpectralPoint {
        lambda,
        k: wavenumber_of_lambda(lambda)?,
        energy: energy_of_lambda(lambda)?,
        sheet: classify_sheet(lambda, SHEET_TOL),
        class: StateClass::Bound,
    };
    point.class = classify_state(&point, CLASS_TOL);
    Ok(point)
}

fn sort_key(p: &SpectralPoint) -> (i64, i64) {
    let q = |x: f64| (x * 1e10).round() as i64;
    (q(p.energy.re), q(p.energy.im))
}

/// Deterministic order: by (Re E, Im E) at 1e−10 resolution, then by k.
pub fn sort_points(points: &mut [SpectralPoint]) {
    points.sort_by(|a, b| {
        sort_key(a)
            .cmp(&sort_key(b))
            .then(a.k.re.total_cmp(&b.k.re))
            .then(a.k.im.total_cmp(&b.k.im))
    });
}

/// Enforces exact conjugate symmetry of the roots of a real polynomial.
fn symmetrize_conjugates(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut paired = vec![false; n];
    for i in 0..n {
        if paired[i] {
            continue;
        }
        let z = roots[i];
        if z.im.abs() <= 1e-14 * z.norm().max(1.0) {
            roots[i].im = 0.0;
            paired[i] = true;
            continue;
        }
        let partner = (0..n)
            .filter(|&j| j != i && !paired[j])
            .min_by(|&a, &b| {
                (roots[a] - z.conj())
                    .norm()
                    .total_cmp(&(roots[b] - z.conj()).norm())
            });
        if let Some(j) = partner {
            if (roots[j] - z.conj()).norm() < 1e-6 * z.norm().max(1.0) {
                let mean = (z + roots[j].conj()) * 0.5;
                roots[i] = mean;
                roots[j] = mean.conj();
                paired[j] = true;
            }
        }
        paired[i] = true;
    }
}

/// Roots of the Siegert quartic (fewer when degree-degenerate).
pub fn siegert_roots(params: &ModelParams) -> Result<Vec<Complex64>, SpectrumError> {
    let q = quartic_coefficients(params);
    let coeffs: Vec<Complex64> = q.reduced().iter().map(|&a| Complex64::new(a, 0.0)).collect();
    let mut roots = poly::roots(&coeffs)?;
    symmetrize_conjugates(&mut roots);
    let scale = q.max_abs();
    for &lambda in &roots {
        let residual = poly::normalized_residual(&coeffs, lambda) / scale;
        if residual >= ROOT_RESIDUAL_TOL {
            return Err(SpectrumError::Residual { lambda, residual });
        }
    }
    Ok(roots)
}

/// All discrete states, sorted by energy.
pub fn solve_discrete_spectrum(params: &ModelParams) -> Result<Vec<SpectralPoint>, SpectrumError> {
    let mut points = siegert_roots(params)?
        .into_iter()
        .map(point_from_lambda)
        .collect::<Result<Vec<_>, _>>()?;
    sort_points(&mut points);
    Ok(points)
}

/// The four roots at `ε₀ = ε₁ = 0` in closed form, ordered `[λ₁, λ₂, λ₃, λ₄]`.
pub fn closed_form_lambdas(gamma: f64) -> Result<[Complex64; 4], SpectrumError> {
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(SpectrumError::ZeroGamma);
    }
    let g2 = gamma * gamma;
    let root_disc = Complex64::new(1.0 - 6.0 * g2 + g2 * g2, 0.0).sqrt();
    let scale = 1.0 / (2f64.sqrt() * gamma.abs());
    let outer = (Complex64::new(1.0 - g2, 0.0) + root_disc).sqrt() * scale;
    let inner = (Complex64::new(1.0 - g2, 0.0) - root_disc).sqrt() * scale;
    Ok([outer, inner, -inner, -outer])
}

/// The three-site outgoing matrix `M(λ) − E(λ)` acting on `(ψ(−1), ψ(0), ψ(1))`.
fn outgoing_matrix(params: &ModelParams, lambda: Complex64) -> Result<Matrix3, ModelError> {
    let e = energy_of_lambda(lambda)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok([
        [-lambda + params.potential(-1) - e, -one, zero],
        [-one, params.potential(0) - e, -one],
        [zero, -one, -lambda + params.potential(1) - e],
    ])
}

/// The purely outgoing eigenfunction belonging to a root λ, normalized to
/// `ψ(0) = 1` (or to unit largest component when `ψ(0)` vanishes).
pub fn siegert_state(params: &ModelParams, lambda: Complex64) -> Result<PiecewiseWave, SpectrumError> {
    let q = quartic_coefficients(params);
    let residual = q.eval(lambda).norm() / (q.max_abs() * lambda.norm().max(1.0).powi(4));
    if residual > 1e-8 {
        return Err(SpectrumError::NotARoot(lambda));
    }
    let m = outgoing_matrix(params, lambda)?;
    let v = linalg::null_vector(&m);
    let largest = v.iter().fold(0.0, |acc: f64, a| acc.max(a.norm()));
    let norm = if v[1].norm() > 1e-12 * largest {
        v[1]
    } else {
        v.iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(Complex64::new(1.0, 0.0))
    };
    let [u, w, y] = v.map(|a| a / norm);
    let k = wavenumber_of_lambda(lambda)?;
    Ok(PiecewiseWave::new(
        vec![PlaneWave::new(u / lambda, -k)],
        w,
        vec![PlaneWave::new(y / lambda, k)],
    ))
}

/// `(ψ(−1)/ψ(0), ψ(1)/ψ(0))` for an outgoing state, from the first and
/// third defect equations.
pub fn defect_site_ratios(
    params: &ModelParams,
    lambda: Complex64,
) -> Result<(Complex64, Complex64), ModelError> {
    let e = energy_of_lambda(lambda)?;
    Ok((
        (-lambda + params.potential(-1) - e).inv(),
        (-lambda + params.potential(1) - e).inv(),
    ))
}

/// One branch of the RIC coupling `Γ_RIC^±(ε₁)` at `ε₀ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicGamma {
    /// NaN when the radicand is negative.
    pub gamma: f64,
    /// False once the RIC has left the continuum through a band edge.
    pub valid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicGammas {
    pub plus: RicGamma,
    pub minus: RicGamma,
}

/// `Γ_RIC^± = sqrt(1 ± |ε₁|·sqrt(2 + ε₁²))` for `ε₀ = 0`.
///
/// The minus branch reaches the band edge `λ = −1` (or `+1` for negative ε₁)
/// at `|ε₁| = 1/2` and is flagged invalid beyond it.
pub fn ric_gammas(eps1: f64) -> RicGammas {
    let spread = eps1.abs() * (2.0 + eps1 * eps1).sqrt();
    let minus_radicand = 1.0 - spread;
    RicGammas {
        plus: RicGamma {
            gamma: (1.0 + spread).sqrt(),
            valid: true,
        },
        minus: RicGamma {
            gamma: if minus_radicand >= 0.0 {
                minus_radicand.sqrt()
            } else {
                f64::NAN
            },
            valid: minus_radicand >= 0.0 && eps1.abs() <= 0.5,
        },
    }
}

/// RICs present in a spectrum, listed by their `Re k > 0` representative.
#[derive(Debug, Clone, PartialEq)]
pub struct RicRecord {
    pub gamma: f64,
    pub energies: Vec<f64>,
    pub wavenumbers: Vec<f64>,
    pub count: usize,
}

pub fn ric_record(params: &ModelParams) -> Result<Option<RicRecord>, SpectrumError> {
    let mut rics: Vec<(f64, f64)> = solve_discrete_spectrum(params)?
        .iter()
        .filter(|p| p.class == StateClass::Ric && p.k.re > 0.0 && p.energy.im.abs() < CLASS_TOL)
        .map(|p| (p.energy.re, p.k.re))
        .collect();
    if rics.is_empty() {
        return Ok(None);
    }
    rics.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(Some(RicRecord {
        gamma: params.gamma(),
        count: rics.len(),
        energies: rics.iter().map(|r| r.0).collect(),
        wavenumbers: rics.iter().map(|r| r.1).collect(),
    }))
}

/// Which of the two RIC energies at `Γ = 1`, `ε₀ = ε₁ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RicSign {
    /// `E = +√2`, `k = 3π/4`.
    PlusSqrt2,
    /// `E = −√2`, `k = π/4`.
    MinusSqrt2,
}

impl RicSign {
    pub fn wavenumber(self) -> f64 {
        match self {
            RicSign::PlusSqrt2 => 3.0 * PI / 4.0,
            RicSign::MinusSqrt2 => PI / 4.0,
        }
    }
}

/// Exact RIC eigenfunction at `Γ = 1`, `ε₀ = ε₁ = 0`, with `ψ(0) = 1/√3`.
///
/// The two lead amplitudes differ (gain side larger); their squares add up
/// to `2|ψ(0)|² = 2/3`.
pub fn ric_wavefunction(sign: RicSign) -> Result<PiecewiseWave, SpectrumError> {
    let params = ModelParams::gain_loss(1.0)?;
    let lambda = Complex64::from_polar(1.0, sign.wavenumber());
    let wave = siegert_state(&params, lambda)?;
    Ok(wave.scaled(Complex64::new(1.0 / 3f64.sqrt(), 0.0)))
}

/// Large-Γ expansions of the `ε₀ = ε₁ = 0` spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionIvAsymptotics {
    /// `+i(Γ − 2/Γ)`; the partner is its conjugate.
    pub e14: Complex64,
    /// `+2i/Γ²`; the partner is its conjugate.
    pub e23: Complex64,
    pub loc_length_14: f64,
    pub loc_length_23: f64,
    /// Time below which the small-Im E pair behaves as bound.
    pub qbic_timescale: f64,
}

pub fn region_iv_asymptotics(gamma: f64) -> Result<RegionIvAsymptotics, SpectrumError> {
    if gamma.is_nan() || gamma <= 2.0 {
        return Err(SpectrumError::OutOfRegime(gamma));
    }
    let g2 = gamma * gamma;
    Ok(RegionIvAsymptotics {
        e14: Complex64::new(0.0, gamma - 2.0 / gamma),
        e23: Complex64::new(0.0, 2.0 / g2),
        loc_length_14: 1.0 / gamma.ln(),
        loc_length_23: g2 / 2.0,
        qbic_timescale: g2 / 4.0,
    })
}

/// Parameter varied in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Gamma,
    Eps0,
    Eps1,
}

impl Axis {
    pub fn apply(self, base: &ModelParams, value: f64) -> Result<ModelParams, ModelError> {
        match self {
            Axis::Gamma => base.with_gamma(value),
            Axis::Eps0 => base.with_eps0(value),
            Axis::Eps1 => base.with_eps1(value),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Gamma => "gamma",
            Axis::Eps0 => "eps0",
            Axis::Eps1 => "eps1",
        })
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gamma" => Ok(Axis::Gamma),
            "eps0" => Ok(Axis::Eps0),
            "eps1" => Ok(Axis::Eps1),
            other => Err(format!("unknown axis '{other}' (expected gamma, eps0 or eps1)")),
        }
    }
}

/// One `(grid value, branch)` row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub branch: usize,
    pub point: SpectralPoint,
}

/// Distance on the Riemann sphere, finite for roots running off to infinity.
fn chordal(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// For each current root, the index of the previous root it continues.
fn match_branches(prev: &[Complex64], cur: &[Complex64]) -> Vec<Option<usize>> {
    let m = prev.len().max(cur.len());
    let mut best: Option<(f64, Vec<usize>)> = None;
    for perm in permutations(m) {
        let cost: f64 = (0..cur.len())
            .filter(|&i| perm[i] < prev.len())
            .map(|i| chordal(cur[i], prev[perm[i]]))
            .sum();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, perm));
        }
    }
    let perm = best.map(|b| b.1).unwrap_or_default();
    (0..cur.len())
        .map(|i| (perm[i] < prev.len()).then_some(perm[i]))
        .collect()
}

/// Spectrum along one parameter axis, with branches followed by optimal
/// nearest-λ assignment between consecutive grid points.
pub fn sweep_spectrum(
    base: &ModelParams,
    axis: Axis,
    grid: &[f64],
) -> Result<Vec<SweepRow>, SpectrumError> {
    if grid.is_empty()
        || grid.iter().any(|v| !v.is_finite())
        || grid.windows(2).any(|w| w[1] < w[0])
    {
        return Err(SpectrumError::BadGrid);
    }
    let mut rows = Vec::new();
    let mut prev: Vec<(usize, Complex64)> = Vec::new();
    let mut next_branch = 0;
    for &value in grid {
        let points = solve_discrete_spectrum(&axis.apply(base, value)?)?;
        let lambdas: Vec<Complex64> = points.iter().map(|p| p.lambda).collect();
        let prev_lambdas: Vec<Complex64> = prev.iter().map(|p| p.1).collect();
        let matches = match_branches(&prev_lambdas, &lambdas);
        let mut current = Vec::with_capacity(points.len());
        for (point, matched) in points.iter().zip(matches) {
            let branch = match matched {
                Some(j) => prev[j].0,
                None => {
                    next_branch += 1;
                    next_branch - 1
                }
            };
            current.push((branch, point.lambda));
            rows.push(SweepRow {
                value,
                branch,
                point: *point,
            });
        }
        prev = current;
    }
    Ok(rows)
}
