//! Scattering through the defect: amplitudes, PT relations between the two
//! incidence directions, RIC poles on the real-k axis and perfect
//! transmission.
//!
//! Left incidence uses `A e^{ikx} + B e^{−ikx}` on the left lead and
//! `C e^{ikx}` on the right. Right incidence uses `B e^{−ikx}` on the left and
//! `C e^{ikx} + D e^{−ikx}` on the right. The incoming amplitude is fixed to 1.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, Matrix3};
use crate::model::{ModelError, ModelParams, PiecewiseWave, PlaneWave};
use crate::poly::{self, RootError};
use crate::spectrum::{self, SpectrumError};

/// A system is treated as singular when `|det| < POLE_TOL · ‖M‖∞`.
pub const POLE_TOL: f64 = 1e-10;
/// Largest `||λ| − 1|` for which a root counts as real-k.
pub const UNIT_CIRCLE_TOL: f64 = 1e-7;
const MULTIPLE_ROOT_TOL: f64 = 1e-4;
const DEDUP_TOL: f64 = 1e-6;
const INVISIBLE_TOL: f64 = 1e-10;
const PERFECT_TOL: f64 = 1e-9;
const COINCIDENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatteringError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("k = {0} is a band edge or outside (−π, π)")]
    BandEdge(f64),
    #[error("scattering pole (RIC) at k = {k}, Γ = {gamma}: |det| = {determinant:e}")]
    Pole { k: f64, gamma: f64, determinant: f64 },
    #[error("k = {k} is not perfectly transmitting (|r| = {reflection:e}, |t| = {transmission})")]
    NotPerfectlyTransmitting { k: f64, reflection: f64, transmission: f64 },
    #[error("edge λ = {edge}: Γ = {gamma} zeroes P but leaves M = {residual:e}")]
    CoincidenceMismatch { edge: f64, gamma: f64, residual: f64 },
}

/// Side the incoming wave arrives from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LeftToRight => "lr",
            Direction::RightToLeft => "rl",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lr" | "LtoR" | "left" => Ok(Direction::LeftToRight),
            "rl" | "RtoL" | "right" => Ok(Direction::RightToLeft),
            other => Err(format!("unknown direction `{other}`, expected lr or rl")),
        }
    }
}

/// A solved scattering state with incoming amplitude 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringSolution {
    pub direction: Direction,
    pub k: f64,
    /// Incoming amplitude on the left, present for left incidence.
    pub a: Option<Complex64>,
    /// Left-lead `e^{−ikx}` amplitude.
    pub b: Complex64,
    /// Right-lead `e^{ikx}` amplitude.
    pub c: Complex64,
    /// Incoming amplitude on the right, present for right incidence.
    pub d: Option<Complex64>,
    pub psi0: Complex64,
    pub t: Complex64,
    pub r: Complex64,
    pub transmission: f64,
    pub reflection: f64,
}

impl ScatteringSolution {
    pub fn energy(&self) -> f64 {
        -2.0 * self.k.cos()
    }

    pub fn incoming(&self) -> Complex64 {
        self.a.or(self.d).unwrap_or(Complex64::new(1.0, 0.0))
    }

    pub fn wave(&self) -> PiecewiseWave {
        let k = Complex64::new(self.k, 0.0);
        let mut left = Vec::with_capacity(2);
        let mut right = Vec::with_capacity(2);
        if let Some(a) = self.a {
            left.push(PlaneWave::new(a, k));
        }
        left.push(PlaneWave::new(self.b, -k));
        right.push(PlaneWave::new(self.c, k));
        if let Some(d) = self.d {
            right.push(PlaneWave::new(d, -k));
        }
        PiecewiseWave::new(left, self.psi0, right)
    }
}

fn check_wavenumber(k: f64) -> Result<(), ScatteringError> {
    if !k.is_finite() || k.abs() >= PI || k.sin().abs() < 1e-12 {
        return Err(ScatteringError::BandEdge(k));
    }
    Ok(())
}

/// Matching system in the unknowns `(B, ψ₀, C)`.
fn matching_system(params: &ModelParams, k: f64, direction: Direction) -> (Matrix3, [Complex64; 3]) {
    let lambda = Complex64::from_polar(1.0, k);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (gain, loss) = (params.potential(-1), params.potential(1));
    let centre = params.eps0() + lambda + lambda.inv();
    let m = [
        [one + gain * lambda, -one, zero],
        [-lambda, centre, -lambda],
        [zero, -one, one + loss * lambda],
    ];
    let rhs = match direction {
        Direction::LeftToRight => [-(one + gain / lambda), lambda.inv(), zero],
        Direction::RightToLeft => [zero, lambda.inv(), -(one + loss / lambda)],
    };
    (m, rhs)
}

/// Solves the three defect equations for a plane wave of wavenumber
/// `k ∈ (−π, π) \ {0}` incident from `direction`. Negative `k` is accepted
/// as the formal continuation used by the parity relations.
pub fn solve_scattering(
    params: &ModelParams,
    k: f64,
    direction: Direction,
) -> Result<ScatteringSolution, ScatteringError> {
    check_wavenumber(k)?;
    let (m, rhs) = matching_system(params, k, direction);
    let det = linalg::determinant(&m);
    let pole = ScatteringError::Pole {
        k,
        gamma: params.gamma(),
        determinant: det.norm(),
    };
    if det.norm() < POLE_TOL * linalg::norm_inf(&m) {
        return Err(pole);
    }
    let [b, psi0, c] = linalg::solve(&m, rhs).ok_or(pole)?;
    let one = Complex64::new(1.0, 0.0);
    let (a, d, t, r) = match direction {
        Direction::LeftToRight => (Some(one), None, c, b),
        Direction::RightToLeft => (None, Some(one), b, c),
    };
    Ok(ScatteringSolution {
        direction,
        k,
        a,
        b,
        c,
        d,
        psi0,
        t,
        r,
        transmission: t.norm_sqr(),
        reflection: r.norm_sqr(),
    })
}

/// Deviations from the PT scattering relations at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryResiduals {
    /// `|t_l(k) − t_r(k)|`.
    pub t_direction: f64,
    /// `|t(−k) − t(k)*|`.
    pub t_parity: f64,
    /// `|r_l(−k) − r_r(k)*|`.
    pub r_swap: f64,
    /// `||t|² + s·|r_l r_r| − 1|`.
    pub pseudo_unitarity: f64,
    /// `s = sign(1 − T)`, taken as +1 at `T = 1`.
    pub sign: i8,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.t_direction
            .max(self.t_parity)
            .max(self.r_swap)
            .max(self.pseudo_unitarity)
    }
}

/// PT relations between `k` and `−k`. Reversing `k` is accompanied by
/// complex conjugation, as the PT image of a scattering state requires.
pub fn symmetry_residuals(params: &ModelParams, k: f64) -> Result<SymmetryResiduals, ScatteringError> {
    let left = solve_scattering(params, k, Direction::LeftToRight)?;
    let right = solve_scattering(params, k, Direction::RightToLeft)?;
    let left_mirror = solve_scattering(params, -k, Direction::LeftToRight)?;
    let sign: i8 = if left.transmission <= 1.0 { 1 } else { -1 };
    Ok(SymmetryResiduals {
        t_direction: (left.t - right.t).norm(),
        t_parity: (left_mirror.t - left.t.conj()).norm(),
        r_swap: (left_mirror.r - right.r.conj()).norm(),
        pseudo_unitarity: (left.transmission + f64::from(sign) * (left.r * right.r).norm() - 1.0).abs(),
        sign,
    })
}

/// A real-k pole of the scattering amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicPole {
    /// Non-negative coupling; `−Γ` gives the same pole.
    pub gamma: f64,
    pub k: f64,
    pub energy: f64,
}

/// The Siegert quartic splits as `Q(λ) + Γ² R(λ)`; returns `(Q, R)` in
/// descending order.
fn coupling_split(eps0: f64, eps1: f64) -> ([f64; 5], [f64; 5]) {
    let e1sq = eps1 * eps1;
    (
        [e1sq, eps0 * e1sq, -1.0 + e1sq + 2.0 * eps0 * eps1, eps0 + 2.0 * eps1, 1.0],
        [1.0, eps0, 1.0, 0.0, 0.0],
    )
}

/// `Γ²` that places a Siegert root at `e^{ik}`; complex in general.
fn coupling_squared(eps0: f64, eps1: f64, k: f64) -> Complex64 {
    let (q, r) = coupling_split(eps0, eps1);
    let lambda = Complex64::from_polar(1.0, k);
    -poly::eval_real(&q, lambda) / poly::eval_real(&r, lambda)
}

/// Locates RIC poles for fixed `(ε₀, ε₁)`: wavenumbers in `k_grid` where
/// the coupling `Γ²` needed for a unit-modulus Siegert root is real and
/// non-negative. Sign changes of its imaginary part are bisected.
pub fn ric_pole_scan(eps0: f64, eps1: f64, k_grid: &[f64]) -> Result<Vec<RicPole>, ScatteringError> {
    ModelParams::new(eps0, eps1, 0.0)?;
    let im = |k: f64| coupling_squared(eps0, eps1, k).im;
    let mut poles: Vec<RicPole> = Vec::new();
    let mut push = |k: f64| -> Result<(), ScatteringError> {
        if check_wavenumber(k).is_err() {
            return Ok(());
        }
        let g = coupling_squared(eps0, eps1, k);
        if !g.re.is_finite() || g.re < 0.0 || g.im.abs() > 1e-9 * (1.0 + g.re) {
            return Ok(());
        }
        let gamma = g.re.sqrt();
        let q = spectrum::quartic_coefficients(&ModelParams::new(eps0, eps1, gamma)?);
        let lambda = Complex64::from_polar(1.0, k);
        if q.eval(lambda).norm() > 1e-8 * q.max_abs() {
            return Ok(());
        }
        if poles.iter().all(|p| (p.k - k).abs() > DEDUP_TOL) {
            poles.push(RicPole {
                gamma,
                k,
                energy: -2.0 * k.cos(),
            });
        }
        Ok(())
    };
    for pair in k_grid.windows(2) {
        let (mut lo, mut hi) = (pair[0], pair[1]);
        let (mut f_lo, f_hi) = (im(lo), im(hi));
        if f_lo == 0.0 {
            push(lo)?;
            continue;
        }
        if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f_mid = im(mid);
            if f_mid == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if f_mid.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        push(0.5 * (lo + hi))?;
    }
    if let Some(&last) = k_grid.last() {
        if im(last) == 0.0 {
            push(last)?;
        }
    }
    poles.sort_by(|a, b| a.k.total_cmp(&b.k));
    Ok(poles)
}

/// Coefficients (descending) of the quartic whose unit-circle roots are
/// the reflectionless wavenumbers for the given incidence direction.
pub fn perfect_transmission_polynomial(params: &ModelParams, direction: Direction) -> [Complex64; 5] {
    let (e0, e1) = (params.eps0(), params.eps1());
    let g = match direction {
        Direction::LeftToRight => params.gamma(),
        Direction::RightToLeft => -params.gamma(),
    };
    let strength = e1 * e1 + g * g;
    let lead = Complex64::new(e1, -g);
    [
        lead,
        strength + e0 * lead,
        Complex64::new(e0 * (1.0 + strength), 0.0),
        strength + e0 * lead.conj(),
        lead.conj(),
    ]
}

/// Reflectionless wavenumbers for one incidence direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfectTransmissionSet {
    pub direction: Direction,
    /// Sorted ascending in `(−π, π]`.
    pub ktildes: Vec<f64>,
    /// Members that do not move with Γ (`±π/2` for the pure gain/loss defect).
    pub gamma_independent: Vec<f64>,
    /// Uniform chain: every k transmits perfectly.
    pub all_k: bool,
}

/// `d`-th derivative in `k` of `λ⁻²M(λ)` on the unit circle, which is real
/// because `M` is self-inversive.
fn unit_circle_value(coeffs: &[Complex64; 5], k: f64, order: u32) -> f64 {
    let z = Complex64::from_polar(1.0, k);
    let i = Complex64::i();
    let constant = if order == 0 { coeffs[2].re } else { 0.0 };
    constant + 2.0 * (coeffs[1] * i.powu(order) * z).re + 2.0 * (coeffs[0] * (2.0 * i).powu(order) * z * z).re
}

/// Locates a zero of multiplicity `m` near `k` by bisecting the `(m−1)`-th
/// derivative, whose zero there is simple.
fn refine_multiple(coeffs: &[Complex64; 5], k: f64, multiplicity: usize) -> f64 {
    let half_width = 10.0 * MULTIPLE_ROOT_TOL;
    let (lo, hi) = (k - half_width, k + half_width);
    for order in (0..multiplicity.min(4) as u32).rev() {
        let f = |x: f64| unit_circle_value(coeffs, x, order);
        if f(lo) * f(hi) < 0.0 {
            return bisect(f, lo, hi);
        }
    }
    k
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn perfect_transmission(
    params: &ModelParams,
    direction: Direction,
) -> Result<PerfectTransmissionSet, ScatteringError> {
    let coeffs = perfect_transmission_polynomial(params, direction);
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut set = PerfectTransmissionSet {
        direction,
        ktildes: Vec::new(),
        gamma_independent: Vec::new(),
        all_k: scale == 0.0,
    };
    if set.all_k {
        return Ok(set);
    }
    let trimmed = poly::trim_leading(&coeffs, 1e-14 * scale);
    let candidates: Vec<Complex64> = if trimmed.len() > 1 { poly::roots(trimmed)? } else { Vec::new() }
        .into_iter()
        .filter(|l| (l.norm() - 1.0).abs() < MULTIPLE_ROOT_TOL)
        .collect();
    for cluster in clusters(candidates) {
        let centre = cluster.iter().sum::<Complex64>() / cluster.len() as f64;
        // A multiple root comes back as a cluster scattered by ~ε^{1/m}.
        // Its centroid is refined on the circle and accepted if M vanishes.
        let (k, accept) = if cluster.len() == 1 {
            (centre.arg(), (centre.norm() - 1.0).abs() < UNIT_CIRCLE_TOL)
        } else {
            let k = refine_multiple(&coeffs, centre.arg(), cluster.len());
            (k, unit_circle_value(&coeffs, k, 0).abs() < 1e-10 * scale)
        };
        if accept {
            set.ktildes.push(if k <= -PI { k + 2.0 * PI } else { k });
        }
    }
    set.ktildes.sort_by(f64::total_cmp);
    if params.is_pure_gain_loss() {
        set.gamma_independent = set
            .ktildes
            .iter()
            .copied()
            .filter(|k| (k.abs() - PI / 2.0).abs() < DEDUP_TOL)
            .collect();
    }
    Ok(set)
}

/// Groups roots lying within [`MULTIPLE_ROOT_TOL`] of one another.
fn clusters(roots: Vec<Complex64>) -> Vec<Vec<Complex64>> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for lambda in roots {
        match groups
            .iter_mut()
            .find(|g| g.iter().any(|m| (m - lambda).norm() < MULTIPLE_ROOT_TOL))
        {
            Some(g) => g.push(lambda),
            None => groups.push(vec![lambda]),
        }
    }
    groups
}


/// Outcome of testing a reflectionless wavenumber for invisibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvisibilityRecord {
    /// `t = 1` exactly, i.e. no transmission phase shift.
    pub invisible: bool,
    pub phase_shift: f64,
    /// `ψ(0)` divided by the incoming amplitude.
    pub response: Complex64,
}

pub fn invisibility_check(
    params: &ModelParams,
    ktilde: f64,
    direction: Direction,
) -> Result<InvisibilityRecord, ScatteringError> {
    let sol = solve_scattering(params, ktilde, direction)?;
    if sol.r.norm() > PERFECT_TOL || (sol.t.norm() - 1.0).abs() > PERFECT_TOL {
        return Err(ScatteringError::NotPerfectlyTransmitting {
            k: ktilde,
            reflection: sol.r.norm(),
            transmission: sol.t.norm(),
        });
    }
    Ok(InvisibilityRecord {
        invisible: (sol.t - 1.0).norm() < INVISIBLE_TOL,
        phase_shift: sol.t.arg(),
        response: sol.psi0 / sol.incoming(),
    })
}

/// A coupling at which a band-edge Siegert root and a band-edge
/// reflectionless state appear together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coincidence {
    /// Non-negative coupling; `−Γ` gives the same point.
    pub gamma: f64,
    /// `+1` (lower band edge, `E = −2`) or `−1` (upper, `E = 2`).
    pub edge: f64,
    /// Largest of `|M_L(edge)|`, `|M_R(edge)|` relative to the coefficient scale.
    pub residual: f64,
}

/// Real couplings solving `P(±1) = 0`, each confirmed to zero both
/// reflectionless quartics at the same band edge.
pub fn delocalization_coincidence(eps0: f64, eps1: f64) -> Result<Vec<Coincidence>, ScatteringError> {
    let (q, r) = coupling_split(eps0, eps1);
    let mut found = Vec::new();
    for edge in [1.0, -1.0] {
        let lambda = Complex64::new(edge, 0.0);
        let denom = poly::eval_real(&r, lambda).re;
        if denom.abs() < 1e-14 {
            continue;
        }
        let g = -poly::eval_real(&q, lambda).re / denom;
        if g < 0.0 {
            continue;
        }
        let gamma = g.sqrt();
        let params = ModelParams::new(eps0, eps1, gamma)?;
        let residual = [Direction::LeftToRight, Direction::RightToLeft]
            .iter()
            .map(|&dir| {
                let m = perfect_transmission_polynomial(&params, dir);
                let scale = m.iter().map(|c| c.norm()).fold(1.0, f64::max);
                poly::eval(&m, lambda).norm() / scale
            })
            .fold(0.0, f64::max);
        if residual > COINCIDENCE_TOL {
            return Err(ScatteringError::CoincidenceMismatch { edge, gamma, residual });
        }
        found.push(Coincidence { gamma, edge, residual });
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::schrodinger_residual;
    use std::f64::consts::FRAC_PI_4;

    fn params(e0: f64, e1: f64, g: f64) -> ModelParams {
        ModelParams::new(e0, e1, g).unwrap()
    }

    /// Closed forms for the pure gain/loss defect, left incidence.
    fn closed_form(gamma: f64, k: f64) -> (Complex64, Complex64, Complex64) {
        let (s, c) = k.sin_cos();
        let i = Complex64::i();
        let g2 = gamma * gamma;
        let den = i * s - g2 * (2.0 * i * k).exp() * c;
        let t = i * s / den;
        let r_l = (gamma + 2.0 * s) * gamma * c / den;
        let r_r = (gamma - 2.0 * s) * gamma * c / den;
        (t, r_l, r_r)
    }

    #[test]
    fn uniform_chain_is_transparent() {
        let p = params(0.0, 0.0, 0.0);
        for k in [0.3, 1.0, 2.5, -1.2] {
            for dir in [Direction::LeftToRight, Direction::RightToLeft] {
                let s = solve_scattering(&p, k, dir).unwrap();
                assert!((s.t - 1.0).norm() < 1e-14 && s.r.norm() < 1e-14);
            }
        }
        assert!(perfect_transmission(&p, Direction::LeftToRight).unwrap().all_k);
    }

    #[test]
    fn matches_closed_forms() {
        for gamma in [0.3, 0.7, -1.3, 2.5] {
            for k in [0.2, 1.0, 2.0, 2.9, -0.6, -2.2] {
                let (t, r_l, r_r) = closed_form(gamma, k);
                let p = params(0.0, 0.0, gamma);
                let l = solve_scattering(&p, k, Direction::LeftToRight).unwrap();
                let r = solve_scattering(&p, k, Direction::RightToLeft).unwrap();
                assert!((l.t - t).norm() < 1e-12, "{gamma} {k}");
                assert!((l.r - r_l).norm() < 1e-12);
                assert!((r.t - t).norm() < 1e-12);
                assert!((r.r - r_r).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn waves_solve_the_lattice_equation() {
        let p = params(0.1, 0.05, 0.3);
        for dir in [Direction::LeftToRight, Direction::RightToLeft] {
            let s = solve_scattering(&p, 2.0, dir).unwrap();
            let r = schrodinger_residual(&p, Complex64::new(s.energy(), 0.0), &s.wave(), -6..=6);
            assert!(r < 1e-12, "{r}");
        }
    }

    #[test]
    fn reflection_vanishes_at_quarter_period() {
        let s = solve_scattering(&params(0.0, 0.0, 0.5), PI / 2.0, Direction::LeftToRight).unwrap();
        assert!((s.t - 1.0).norm() < 1e-14 && s.r.norm() < 1e-14);
    }

    #[test]
    fn pole_and_band_edge_errors() {
        let p = params(0.0, 0.0, 1.0);
        assert!(matches!(
            solve_scattering(&p, FRAC_PI_4, Direction::LeftToRight),
            Err(ScatteringError::Pole { .. })
        ));
        let near = solve_scattering(&p, FRAC_PI_4 + 1e-5, Direction::LeftToRight).unwrap();
        assert!(near.transmission > 1e8);
        for k in [0.0, PI, -PI, 4.0] {
            assert!(matches!(
                solve_scattering(&p, k, Direction::LeftToRight),
                Err(ScatteringError::BandEdge(_))
            ));
        }
    }

    #[test]
    fn symmetry_examples() {
        let r = symmetry_residuals(&params(0.0, 0.0, 0.7), 1.0).unwrap();
        assert!(r.max() < 1e-12, "{r:?}");
        let r = symmetry_residuals(&params(0.1, 0.05, 0.3), 2.0).unwrap();
        assert!(r.max() < 1e-10, "{r:?}");
        // 1 − T changes sign where sin k = Γ/2.
        let p = params(0.0, 0.0, 0.7);
        let flip = (0.35f64).asin();
        assert!((flip - 0.35757).abs() < 1e-5);
        let below = symmetry_residuals(&p, flip - 1e-3).unwrap().sign;
        let above = symmetry_residuals(&p, flip + 1e-3).unwrap().sign;
        assert_ne!(below, above);
    }

    #[test]
    fn hermitian_limit_is_unitary() {
        let p = params(0.4, -0.3, 0.0);
        for k in [0.3, 1.1, 2.7] {
            let l = solve_scattering(&p, k, Direction::LeftToRight).unwrap();
            let r = solve_scattering(&p, k, Direction::RightToLeft).unwrap();
            assert!((l.transmission + l.reflection - 1.0).abs() < 1e-12);
            assert!((l.r - r.r).norm() < 1e-12);
        }
    }

    fn grid(n: usize) -> Vec<f64> {
        (0..=n).map(|j| 1e-3 + (PI - 2e-3) * j as f64 / n as f64).collect()
    }

    #[test]
    fn ric_poles_pure_gain_loss() {
        let poles = ric_pole_scan(0.0, 0.0, &grid(400)).unwrap();
        assert_eq!(poles.len(), 2, "{poles:?}");
        assert!((poles[0].k - FRAC_PI_4).abs() < 1e-10);
        assert!((poles[1].k - 3.0 * FRAC_PI_4).abs() < 1e-10);
        assert!(poles.iter().all(|p| (p.gamma - 1.0).abs() < 1e-10));
    }

    #[test]
    fn ric_poles_match_spectrum() {
        for (e0, e1) in [(0.7, 0.0), (0.0, 0.2), (0.3, -0.2)] {
            let poles = ric_pole_scan(e0, e1, &grid(600)).unwrap();
            assert!(!poles.is_empty(), "{e0} {e1}");
            for pole in poles {
                let roots = spectrum::siegert_roots(&params(e0, e1, pole.gamma)).unwrap();
                let target = Complex64::from_polar(1.0, pole.k);
                let nearest = roots.iter().map(|l| (l - target).norm()).fold(f64::INFINITY, f64::min);
                assert!(nearest < 1e-8, "{e0} {e1} {pole:?} {nearest}");
            }
        }
        let gammas = spectrum::ric_gammas(0.2);
        let poles = ric_pole_scan(0.0, 0.2, &grid(600)).unwrap();
        for branch in [gammas.plus, gammas.minus] {
            assert!(poles.iter().any(|p| (p.gamma - branch.gamma).abs() < 1e-8), "{poles:?}");
        }
    }

    fn assert_set(found: &[f64], expected: &[f64]) {
        assert_eq!(found.len(), expected.len(), "{found:?}");
        for (a, b) in found.iter().zip(expected) {
            assert!((a - b).abs() < 1e-9, "{found:?}");
        }
    }

    #[test]
    fn perfect_transmission_examples() {
        let p = params(0.0, 0.0, 1.0);
        let lr = perfect_transmission(&p, Direction::LeftToRight).unwrap();
        assert_set(&lr.ktildes, &[-5.0 * PI / 6.0, -PI / 2.0, -PI / 6.0, PI / 2.0]);
        assert_set(&lr.gamma_independent, &[-PI / 2.0, PI / 2.0]);
        let rl = perfect_transmission(&p, Direction::RightToLeft).unwrap();
        assert_set(&rl.ktildes, &[-PI / 2.0, PI / 6.0, PI / 2.0, 5.0 * PI / 6.0]);
        let wide = perfect_transmission(&params(0.0, 0.0, 3.0), Direction::LeftToRight).unwrap();
        assert_set(&wide.ktildes, &[-PI / 2.0, PI / 2.0]);
        // Tangency: the Γ-dependent pair merges into −π/2.
        let tangent = perfect_transmission(&params(0.0, 0.0, 2.0), Direction::LeftToRight).unwrap();
        assert_set(&tangent.ktildes, &[-PI / 2.0, PI / 2.0]);
    }

    #[test]
    fn reflectionless_states_transmit() {
        for p in [params(0.0, 0.0, 1.0), params(0.2, 0.1, 0.8), params(-0.1, 0.0, 1.4)] {
            for dir in [Direction::LeftToRight, Direction::RightToLeft] {
                for k in perfect_transmission(&p, dir).unwrap().ktildes {
                    let s = solve_scattering(&p, k, dir).unwrap();
                    assert!(s.reflection.sqrt() < 1e-9 && (s.transmission - 1.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn invisibility_examples() {
        for gamma in [0.3, 1.0, 1.7] {
            let p = params(0.0, 0.0, gamma);
            for (k, sign) in [(PI / 2.0, 1.0), (-PI / 2.0, -1.0)] {
                let lr = invisibility_check(&p, k, Direction::LeftToRight).unwrap();
                let rl = invisibility_check(&p, k, Direction::RightToLeft).unwrap();
                assert!(lr.invisible && rl.invisible);
                assert!((lr.response - (1.0 + sign * gamma)).norm() < 1e-12);
                assert!((rl.response - (1.0 - sign * gamma)).norm() < 1e-12);
            }
        }
        let shifted = invisibility_check(&params(0.0, 0.0, 1.0), -PI / 6.0, Direction::LeftToRight).unwrap();
        assert!(!shifted.invisible && shifted.phase_shift.abs() > 1e-3);
        let switch = params(0.0, 0.0, -1.0);
        let off = invisibility_check(&switch, PI / 2.0, Direction::LeftToRight).unwrap();
        let on = invisibility_check(&switch, PI / 2.0, Direction::RightToLeft).unwrap();
        assert!(off.response.norm() < 1e-14 && (on.response - 2.0).norm() < 1e-14);
        assert!(matches!(
            invisibility_check(&params(0.0, 0.0, 1.0), 1.0, Direction::LeftToRight),
            Err(ScatteringError::NotPerfectlyTransmitting { .. })
        ));
    }

    #[test]
    fn coincidence_examples() {
        let found = delocalization_coincidence(0.0, 0.08).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].edge, -1.0);
        assert!((found[0].gamma - (0.08f64 - 0.0064).sqrt()).abs() < 1e-14);
        assert!((found[0].gamma - 0.271293).abs() < 1e-6);
        let trivial = delocalization_coincidence(0.0, 0.0).unwrap();
        assert!(trivial.iter().all(|c| c.gamma == 0.0));
        let shifted = delocalization_coincidence(-0.1, 0.0).unwrap();
        assert_eq!(shifted.len(), 1);
        assert!((shifted[0].gamma - (0.1f64 / 1.9).sqrt()).abs() < 1e-14);
        assert_eq!(shifted[0].edge, 1.0);
    }
}
