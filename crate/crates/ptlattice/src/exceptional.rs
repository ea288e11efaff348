//! Exceptional points: closed forms for the pure gain/loss defect and a
//! discriminant search for general on-site energies.
//!
//! An EP is a value Γ̄ where two roots λ of the Siegert quartic coalesce.
//! It is of type A when the coalescing pair has real energies on one side
//! of Γ̄ and a complex-conjugate pair on the other, and of type B when the
//! pair is complex on both sides.

use std::f64::consts::SQRT_2;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{energy_of_lambda, ModelError, ModelParams};
use crate::poly::{self, Dual};
use crate::spectrum::{self, SpectrumError};

/// Offsets from Γ̄ at which the pair reality is sampled.
const CLASSIFY_OFFSETS: [f64; 2] = [1e-3, 1e-4];
/// Two roots closer than this (relative to `max(1, |λ|)`) have coalesced.
pub const COALESCENCE_TOL: f64 = 1e-5;
/// An energy is real when `|Im E|` is below this (relative to `max(1, |E|)`).
const REAL_ENERGY_TOL: f64 = 1e-8;
const FIT_POINTS: usize = 10;
const FIT_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EpError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("grid needs at least two points, got {0}")]
    GridTooSmall(usize),
    #[error("invalid Γ range ({0}, {1}]")]
    BadRange(f64, f64),
    #[error("discriminant vanishes identically near Γ = {0}")]
    Degenerate(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpKind {
    /// Real pair on one side, complex-conjugate pair on the other.
    Ep2A,
    /// Complex pair on both sides.
    Ep2B,
}

impl fmt::Display for EpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpKind::Ep2A => "EP2A",
            EpKind::Ep2B => "EP2B",
        })
    }
}

/// One coalescing pair at an EP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coalescence {
    pub lambda: Complex64,
    pub energy: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpRecord {
    pub gamma_bar: f64,
    /// Coalescence energy of the primary pair.
    pub e_bar: Complex64,
    pub kind: EpKind,
    /// `c` in `E ≈ Ē ± c·sqrt(Γ² − Γ̄²)`, normalized so `Im c > 0`
    /// (or `Re c > 0` when real).
    pub puiseux_coeff: Complex64,
    /// Sign of `Ē` along its non-zero axis (real part first).
    pub branch_sign: i8,
    /// Every pair coalescing at Γ̄, ordered by energy; the first is primary.
    pub coalescences: Vec<Coalescence>,
}

/// `p(E) = c4 E⁴ + c2 E² + c0`, the quartic in E at `ε₀ = ε₁ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyQuartic {
    pub c4: f64,
    pub c2: f64,
    pub c0: f64,
}

impl EnergyQuartic {
    pub fn eval(&self, e: Complex64) -> Complex64 {
        let e2 = e * e;
        e2 * e2 * self.c4 + e2 * self.c2 + self.c0
    }

    /// Roots as `±sqrt` of the two roots in `E²` (two roots when `c4 = 0`).
    pub fn roots(&self) -> Vec<Complex64> {
        let squares = if self.c4 == 0.0 {
            vec![Complex64::new(-self.c0 / self.c2, 0.0)]
        } else {
            let disc = Complex64::new(self.c2 * self.c2 - 4.0 * self.c4 * self.c0, 0.0).sqrt();
            vec![
                (-disc - self.c2) / (2.0 * self.c4),
                (disc - self.c2) / (2.0 * self.c4),
            ]
        };
        squares
            .into_iter()
            .flat_map(|s| {
                let r = s.sqrt();
                [-r, r]
            })
            .collect()
    }
}

pub fn energy_polynomial(gamma: f64) -> EnergyQuartic {
    let g2 = gamma * gamma;
    EnergyQuartic {
        c4: g2,
        c2: g2 * g2 - 4.0 * g2 - 1.0,
        c0: 4.0,
    }
}

fn sign_of(e: Complex64) -> i8 {
    let axis = if e.re.abs() > 1e-12 { e.re } else { e.im };
    if axis < 0.0 {
        -1
    } else {
        1
    }
}

/// The four EPs of the pure gain/loss defect, by energy sign:
/// type A at `Γ̄ = √2 − 1` with `Ē = ∓sqrt(2(1+√2))`, type B at
/// `Γ̄ = √2 + 1` with `Ē = ∓i·sqrt(2(√2−1))`.
pub fn ep_locations_pure_imag() -> [EpRecord; 4] {
    let quarter = 2f64.powf(0.25);
    let alpha = Complex64::new(0.0, 1.0 / (quarter * (SQRT_2 - 1.0).sqrt()));
    let beta = Complex64::new(0.0, 1.0 / (quarter * (SQRT_2 + 1.0).sqrt()));
    let gamma_a = SQRT_2 - 1.0;
    let gamma_b = SQRT_2 + 1.0;
    let e_a = (2.0 * (1.0 + SQRT_2)).sqrt();
    let e_b = (2.0 * (SQRT_2 - 1.0)).sqrt();
    // λ̄² = (1 − Γ̄²)/(2Γ̄²) where the inner square root vanishes.
    let lambda_a = ((1.0 - gamma_a * gamma_a) / (2.0 * gamma_a * gamma_a)).sqrt();
    let lambda_b = ((gamma_b * gamma_b - 1.0) / (2.0 * gamma_b * gamma_b)).sqrt();

    let record = |gamma_bar: f64, e_bar: Complex64, lambda: Complex64, kind, coeff| EpRecord {
        gamma_bar,
        e_bar,
        kind,
        puiseux_coeff: coeff,
        branch_sign: sign_of(e_bar),
        coalescences: vec![Coalescence { lambda, energy: e_bar }],
    };
    [
        record(gamma_a, Complex64::new(-e_a, 0.0), Complex64::new(lambda_a, 0.0), EpKind::Ep2A, alpha),
        record(gamma_a, Complex64::new(e_a, 0.0), Complex64::new(-lambda_a, 0.0), EpKind::Ep2A, alpha),
        record(gamma_b, Complex64::new(0.0, -e_b), Complex64::new(0.0, -lambda_b), EpKind::Ep2B, beta),
        record(gamma_b, Complex64::new(0.0, e_b), Complex64::new(0.0, lambda_b), EpKind::Ep2B, beta),
    ]
}

/// Leading-order energies `Ē ± c·sqrt(Γ² − Γ̄²)` (principal square root).
///
/// With `c` on the imaginary axis this is real on the `Γ < Γ̄` side of a
/// type-A point and complex beyond it.
pub fn puiseux_predict(ep: &EpRecord, gamma: f64) -> (Complex64, Complex64) {
    let s = Complex64::new(gamma * gamma - ep.gamma_bar * ep.gamma_bar, 0.0).sqrt();
    (ep.e_bar + ep.puiseux_coeff * s, ep.e_bar - ep.puiseux_coeff * s)
}

/// Discriminant of `P(λ)` and its Γ-derivative.
pub fn discriminant_with_slope(eps0: f64, eps1: f64, gamma: f64) -> Dual {
    let e12 = eps1 * eps1;
    let a4 = Dual::new(e12 + gamma * gamma, 2.0 * gamma);
    let coeffs = [
        a4,
        Dual::constant(eps0) * a4,
        Dual::new(-(1.0 - e12 - 2.0 * eps0 * eps1) + gamma * gamma, 2.0 * gamma),
        Dual::constant(eps0 + 2.0 * eps1),
        Dual::constant(1.0),
    ];
    poly::discriminant(&coeffs)
}

/// Discriminant of the Siegert quartic (requires a non-degenerate quartic).
pub fn discriminant(params: &ModelParams) -> f64 {
    poly::discriminant(&spectrum::quartic_coefficients(params).descending())
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn chordal(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
}

/// The two roots closest to `target` at coupling Γ.
fn nearest_pair(eps0: f64, eps1: f64, gamma: f64, target: Complex64) -> Result<[Complex64; 2], EpError> {
    let mut roots = spectrum::siegert_roots(&ModelParams::new(eps0, eps1, gamma)?)?;
    roots.sort_by(|a, b| chordal(*a, target).total_cmp(&chordal(*b, target)));
    Ok([roots[0], roots[1]])
}

fn pair_is_real(eps0: f64, eps1: f64, gamma: f64, target: Complex64) -> Result<bool, EpError> {
    let pair = nearest_pair(eps0, eps1, gamma, target)?;
    let mut real = true;
    for lambda in pair {
        let e = energy_of_lambda(lambda)?;
        real &= e.im.abs() < REAL_ENERGY_TOL * e.norm().max(1.0);
    }
    Ok(real)
}

fn classify(eps0: f64, eps1: f64, gamma_bar: f64, lambda_bar: Complex64) -> Result<Option<EpKind>, EpError> {
    for delta in CLASSIFY_OFFSETS {
        let below = pair_is_real(eps0, eps1, gamma_bar - delta, lambda_bar)?;
        let above = pair_is_real(eps0, eps1, gamma_bar + delta, lambda_bar)?;
        match (below, above) {
            (true, false) | (false, true) => return Ok(Some(EpKind::Ep2A)),
            (false, false) => return Ok(Some(EpKind::Ep2B)),
            (true, true) => continue,
        }
    }
    Ok(None)
}

/// Fits `c` in `(E₊ − E₋)/2 = c·s + b·s²`, `s = sqrt(Γ² − Γ̄²)`, over ten
/// couplings just beyond |Γ̄|.
pub fn fit_puiseux_coeff(
    eps0: f64,
    eps1: f64,
    gamma_bar: f64,
    lambda_bar: Complex64,
) -> Result<Complex64, EpError> {
    let direction = if gamma_bar < 0.0 { -1.0 } else { 1.0 };
    let step = FIT_STEP * gamma_bar.abs().max(1.0);
    let (mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (mut r1, mut r2) = (zero, zero);
    let mut previous: Option<Complex64> = None;
    for j in 1..=FIT_POINTS {
        let gamma = gamma_bar + direction * step * j as f64;
        let s = (gamma * gamma - gamma_bar * gamma_bar).sqrt();
        let [l1, l2] = nearest_pair(eps0, eps1, gamma, lambda_bar)?;
        let mut d = (energy_of_lambda(l1)? - energy_of_lambda(l2)?) * 0.5;
        if let Some(p) = previous {
            if (d * p.conj()).re < 0.0 {
                d = -d;
            }
        }
        previous = Some(d);
        s2 += s * s;
        s3 += s * s * s;
        s4 += s * s * s * s;
        r1 += d * s;
        r2 += d * s * s;
    }
    let det = s2 * s4 - s3 * s3;
    let mut c = (r1 * s4 - r2 * s3) / det;
    if c.im < 0.0 || (c.im == 0.0 && c.re < 0.0) {
        c = -c;
    }
    Ok(c)
}

/// Coalescing pairs among the roots at Γ, ordered by energy.
/// Polishes a double root of `P` as a simple root of `P′`, which the root
/// finder alone only resolves to about `sqrt(ε)`.
fn polish_double_root(slope_coeffs: &[Complex64], start: Complex64) -> Complex64 {
    let mut z = start;
    for _ in 0..20 {
        let (value, slope) = poly::eval_with_derivative(slope_coeffs, z);
        if slope == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = value / slope;
        z -= step;
        if step.norm() < 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    if (z - start).norm() < COALESCENCE_TOL * start.norm().max(1.0) {
        z
    } else {
        start
    }
}

fn coalescences_at(eps0: f64, eps1: f64, gamma: f64) -> Result<Vec<Coalescence>, EpError> {
    let params = ModelParams::new(eps0, eps1, gamma)?;
    let roots = spectrum::siegert_roots(&params)?;
    let coeffs = spectrum::quartic_coefficients(&params).descending();
    let degree = coeffs.len() - 1;
    let slope_coeffs: Vec<Complex64> = coeffs[..degree]
        .iter()
        .enumerate()
        .map(|(i, &a)| Complex64::new(a * (degree - i) as f64, 0.0))
        .collect();
    let mut found = Vec::new();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if used[i] || used[j] {
                continue;
            }
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() < COALESCENCE_TOL * scale {
                used[i] = true;
                used[j] = true;
                let lambda = polish_double_root(&slope_coeffs, (roots[i] + roots[j]) * 0.5);
                found.push(Coalescence {
                    lambda,
                    energy: energy_of_lambda(lambda)?,
                });
            }
        }
    }
    found.sort_by(|a, b| {
        a.energy
            .re
            .total_cmp(&b.energy.re)
            .then(a.energy.im.total_cmp(&b.energy.im))
    });
    Ok(found)
}

/// Candidate zeros of the discriminant on `(lo, hi]`: sign changes of D
/// and, for touching zeros, sign changes of dD/dΓ.
fn discriminant_zeros(eps0: f64, eps1: f64, lo: f64, hi: f64, grid_n: usize) -> Result<Vec<f64>, EpError> {
    let e12 = eps1 * eps1;
    let samples: Vec<(f64, Dual)> = (0..grid_n)
        .map(|i| lo + (hi - lo) * i as f64 / (grid_n - 1) as f64)
        .filter(|&g| e12 + g * g >= spectrum::DEGENERATE_TOL)
        .map(|g| (g, discriminant_with_slope(eps0, eps1, g)))
        .collect();

    let scale = |g: f64| {
        let q = spectrum::quartic_coefficients(&ModelParams::new(eps0, eps1, g).unwrap_or(
            ModelParams::gain_loss(0.0).expect("finite"),
        ));
        q.max_abs().powi(6)
    };
    let mut flat_run = 0;
    for (g, d) in &samples {
        if d.value.abs() <= 1e-13 * scale(*g) && d.slope.abs() <= 1e-13 * scale(*g) {
            flat_run += 1;
            if flat_run >= 3 {
                return Err(EpError::Degenerate(*g));
            }
        } else {
            flat_run = 0;
        }
    }

    let value = |g: f64| discriminant_with_slope(eps0, eps1, g).value;
    let slope = |g: f64| discriminant_with_slope(eps0, eps1, g).slope;
    let mut zeros = Vec::new();
    for w in samples.windows(2) {
        let ((g0, d0), (g1, d1)) = (w[0], w[1]);
        if d0.value == 0.0 {
            zeros.push(g0);
        }
        if (d0.value < 0.0) != (d1.value < 0.0) && d1.value != 0.0 && d0.value != 0.0 {
            zeros.push(bisect(value, g0, g1));
        } else if (d0.slope < 0.0) != (d1.slope < 0.0) {
            let turn = bisect(slope, g0, g1);
            let d_turn = value(turn);
            if d_turn != 0.0 && (d_turn < 0.0) != (d0.value < 0.0) {
                zeros.push(bisect(value, g0, turn));
                zeros.push(bisect(value, turn, g1));
            } else {
                zeros.push(turn);
            }
        }
    }
    if let Some((g, d)) = samples.last() {
        if d.value == 0.0 {
            zeros.push(*g);
        }
    }
    zeros.sort_by(f64::total_cmp);
    zeros.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Ok(zeros)
}

/// Exceptional points with `Γ̄ ∈ (lo, hi]`.
///
/// Zeros of the discriminant are bracketed on a `grid_n`-point grid, refined
/// by bisection to machine precision and kept only if two roots of `P`
/// actually coalesce there.
pub fn find_eps_general(
    eps0: f64,
    eps1: f64,
    gamma_range: (f64, f64),
    grid_n: usize,
) -> Result<Vec<EpRecord>, EpError> {
    let (lo, hi) = gamma_range;
    if grid_n < 2 {
        return Err(EpError::GridTooSmall(grid_n));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(EpError::BadRange(lo, hi));
    }
    ModelParams::new(eps0, eps1, lo)?;
    let pure = eps0 == 0.0 && eps1 == 0.0;
    let mut records = Vec::new();
    for gamma_bar in discriminant_zeros(eps0, eps1, lo, hi, grid_n)? {
        if gamma_bar <= lo {
            continue;
        }
        let coalescences = coalescences_at(eps0, eps1, gamma_bar)?;
        let Some(primary) = coalescences.first().copied() else {
            continue;
        };
        let Some(kind) = classify(eps0, eps1, gamma_bar, primary.lambda)? else {
            continue;
        };
        let puiseux_coeff = if pure {
            closed_form_coeff(kind)
        } else {
            fit_puiseux_coeff(eps0, eps1, gamma_bar, primary.lambda)?
        };
        records.push(EpRecord {
            gamma_bar,
            e_bar: primary.energy,
            kind,
            puiseux_coeff,
            branch_sign: sign_of(primary.energy),
            coalescences,
        });
    }
    Ok(records)
}

fn closed_form_coeff(kind: EpKind) -> Complex64 {
    let records = ep_locations_pure_imag();
    match kind {
        EpKind::Ep2A => records[0].puiseux_coeff,
        EpKind::Ep2B => records[2].puiseux_coeff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_polynomial_examples() {
        let p = energy_polynomial(1.0);
        assert_eq!((p.c4, p.c2, p.c0), (1.0, -4.0, 4.0));
        for e in p.roots() {
            assert!((e.norm() - SQRT_2).abs() < 1e-7);
        }

        let p = energy_polynomial(SQRT_2 - 1.0);
        let mut re: Vec<f64> = p.roots().iter().map(|e| e.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 2.197368).abs() < 1e-6 && (re[1] + 2.197368).abs() < 1e-6);

        for e in energy_polynomial(0.1).roots() {
            assert_eq!(e.im, 0.0);
        }
    }

    #[test]
    fn energy_polynomial_matches_spectrum() {
        for gamma in [0.1, 0.3, 0.7, 1.3, 2.0, 4.5] {
            let p = energy_polynomial(gamma);
            let points = spectrum::solve_discrete_spectrum(&ModelParams::gain_loss(gamma).unwrap()).unwrap();
            for point in points {
                let scale = 1.0 + point.energy.norm().powi(4) * gamma * gamma;
                assert!(p.eval(point.energy).norm() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn closed_form_records() {
        let eps = ep_locations_pure_imag();
        assert!((eps[0].gamma_bar - 0.41421356).abs() < 1e-8);
        assert!((eps[0].e_bar.norm() - 2.19736823).abs() < 1e-8);
        assert!((eps[2].gamma_bar - 2.41421356).abs() < 1e-8);
        assert!((eps[2].e_bar.norm() - 0.91017972).abs() < 1e-8);
        assert!((eps[0].puiseux_coeff.im - 1.306563).abs() < 1e-6);
        assert!((eps[2].puiseux_coeff.im - 0.541196).abs() < 1e-6);
        for ep in &eps {
            let g2 = ep.gamma_bar * ep.gamma_bar;
            let e2 = (1.0 + 4.0 * g2 - g2 * g2) / (2.0 * g2);
            assert!((ep.e_bar * ep.e_bar - e2).norm() < 1e-12);
            let lambda = ep.coalescences[0].lambda;
            assert!((energy_of_lambda(lambda).unwrap() - ep.e_bar).norm() < 1e-12);
        }
    }

    #[test]
    fn puiseux_examples() {
        let ep = &ep_locations_pure_imag()[0];
        let (a, b) = puiseux_predict(ep, ep.gamma_bar);
        assert_eq!(a, ep.e_bar);
        assert_eq!(b, ep.e_bar);
        let (a, b) = puiseux_predict(ep, 0.40);
        assert_eq!(a.im, 0.0);
        let mut pair = [a.re, b.re];
        pair.sort_by(f64::total_cmp);
        assert!((pair[0] - (-2.197368 - 0.140557)).abs() < 1e-6);
        assert!((pair[1] - (-2.197368 + 0.140557)).abs() < 1e-6);

        let ep = &ep_locations_pure_imag()[3];
        let s = (2.5f64 * 2.5 - ep.gamma_bar * ep.gamma_bar).sqrt();
        let (a, _) = puiseux_predict(ep, 2.5);
        assert!((a - Complex64::new(0.0, 0.910180 + 0.541196 * s)).norm() < 1e-6);
    }

    #[test]
    fn finds_pure_gain_loss_eps() {
        let eps = find_eps_general(0.0, 0.0, (0.0, 3.0), 601).unwrap();
        assert_eq!(eps.len(), 2);
        assert_eq!(eps[0].kind, EpKind::Ep2A);
        assert_eq!(eps[1].kind, EpKind::Ep2B);
        assert!((eps[0].gamma_bar - (SQRT_2 - 1.0)).abs() < 1e-9);
        assert!((eps[1].gamma_bar - (SQRT_2 + 1.0)).abs() < 1e-9);
        assert_eq!(eps[0].coalescences.len(), 2);
    }

    #[test]
    fn unit_gamma_is_not_an_ep() {
        let d = discriminant(&ModelParams::gain_loss(1.0).unwrap());
        assert!(d.abs() > 1e-3);
        let eps = find_eps_general(0.0, 0.0, (0.9, 1.1), 41).unwrap();
        assert!(eps.is_empty());
    }

    #[test]
    fn fitted_coefficient_matches_closed_form() {
        let closed = ep_locations_pure_imag();
        let fit_a = fit_puiseux_coeff(0.0, 0.0, closed[0].gamma_bar, closed[0].coalescences[0].lambda).unwrap();
        assert!((fit_a - closed[0].puiseux_coeff).norm() < 1e-3, "{fit_a}");
        let fit_b = fit_puiseux_coeff(0.0, 0.0, closed[2].gamma_bar, closed[2].coalescences[0].lambda).unwrap();
        assert!((fit_b - closed[2].puiseux_coeff).norm() < 1e-3, "{fit_b}");
    }

    #[test]
    fn eps1_removes_type_b() {
        let eps = find_eps_general(0.0, 0.2, (0.0, 3.0), 601).unwrap();
        assert!(!eps.is_empty());
        assert!(eps.iter().all(|e| e.kind == EpKind::Ep2A));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(find_eps_general(0.0, 0.0, (0.0, 3.0), 1), Err(EpError::GridTooSmall(1)));
        assert!(matches!(find_eps_general(0.0, 0.0, (3.0, 0.0), 10), Err(EpError::BadRange(..))));
    }
}
