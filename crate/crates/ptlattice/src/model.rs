//! Defect parameters, the λ ↔ k ↔ E maps and the lattice Schrödinger residual.
//!
//! The chain has unit hopping everywhere. The only non-zero on-site energies
//! sit on the three defect sites: `ε₁ + iΓ` (gain) at x = −1, `ε₀` at x = 0
//! and `ε₁ − iΓ` (loss) at x = +1.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use thiserror::Error;

/// Default tolerance on `|λ| − 1` used to decide the Riemann sheet.
pub const SHEET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ModelError {
    #[error("parameter {name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("λ = 0 has no energy or wavenumber")]
    ZeroLambda,
}

/// The three real defect parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    eps0: f64,
    eps1: f64,
    gamma: f64,
}

impl ModelParams {
    pub fn new(eps0: f64, eps1: f64, gamma: f64) -> Result<Self, ModelError> {
        for (name, value) in [("eps0", eps0), ("eps1", eps1), ("gamma", gamma)] {
            if !value.is_finite() {
                return Err(ModelError::NonFinite { name, value });
            }
        }
        Ok(Self { eps0, eps1, gamma })
    }

    /// Pure gain/loss defect, `ε₀ = ε₁ = 0`.
    pub fn gain_loss(gamma: f64) -> Result<Self, ModelError> {
        Self::new(0.0, 0.0, gamma)
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_eps0(&self, eps0: f64) -> Result<Self, ModelError> {
        Self::new(eps0, self.eps1, self.gamma)
    }

    pub fn with_eps1(&self, eps1: f64) -> Result<Self, ModelError> {
        Self::new(self.eps0, eps1, self.gamma)
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self, ModelError> {
        Self::new(self.eps0, self.eps1, gamma)
    }

    /// True when only the gain/loss term is present.
    pub fn is_pure_gain_loss(&self) -> bool {
        self.eps0 == 0.0 && self.eps1 == 0.0
    }

    /// On-site potential at lattice site `x`.
    pub fn potential(&self, x: i64) -> Complex64 {
        match x {
            -1 => Complex64::new(self.eps1, self.gamma),
            0 => Complex64::new(self.eps0, 0.0),
            1 => Complex64::new(self.eps1, -self.gamma),
            _ => Complex64::new(0.0, 0.0),
        }
    }
}

/// Riemann sheet of the two-sheeted energy surface `E(λ) = −(λ + 1/λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sheet {
    /// `|λ| < 1`: normalizable on the leads.
    First,
    /// `|λ| > 1`: growing on the leads.
    Second,
    /// `|λ| = 1`: real wavenumber, on the continuum.
    BranchCut,
}

impl fmt::Display for Sheet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sheet::First => "First",
            Sheet::Second => "Second",
            Sheet::BranchCut => "BranchCut",
        })
    }
}

/// Physical character of a discrete solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateClass {
    Bound,
    VirtualBound,
    Resonance,
    AntiResonance,
    ComplexLocalized,
    /// Resonance in the continuum: real E, real k, purely outgoing.
    Ric,
    BandEdge,
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateClass::Bound => "Bound",
            StateClass::VirtualBound => "VirtualBound",
            StateClass::Resonance => "Resonance",
            StateClass::AntiResonance => "AntiResonance",
            StateClass::ComplexLocalized => "ComplexLocalized",
            StateClass::Ric => "RIC",
            StateClass::BandEdge => "BandEdge",
        })
    }
}

/// One root of the Siegert quartic together with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub lambda: Complex64,
    pub k: Complex64,
    pub energy: Complex64,
    pub sheet: Sheet,
    pub class: StateClass,
}

/// `E = −(λ + 1/λ)`.
pub fn energy_of_lambda(lambda: Complex64) -> Result<Complex64, ModelError> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(ModelError::ZeroLambda);
    }
    Ok(-(lambda + lambda.inv()))
}

/// `k = −i log λ` with `Re k ∈ (−π, π]`.
pub fn wavenumber_of_lambda(lambda: Complex64) -> Result<Complex64, ModelError> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(ModelError::ZeroLambda);
    }
    let mut re = lambda.arg();
    if re <= -PI {
        re += 2.0 * PI;
    }
    Ok(Complex64::new(re, -lambda.norm().ln()))
}

pub fn classify_sheet(lambda: Complex64, tol: f64) -> Sheet {
    let modulus = lambda.norm();
    if modulus < 1.0 - tol {
        Sheet::First
    } else if modulus > 1.0 + tol {
        Sheet::Second
    } else {
        Sheet::BranchCut
    }
}

/// A single lead term `amplitude · e^{i k x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub amplitude: Complex64,
    pub wavenumber: Complex64,
}

impl PlaneWave {
    pub fn new(amplitude: Complex64, wavenumber: Complex64) -> Self {
        Self { amplitude, wavenumber }
    }

    pub fn eval(&self, x: i64) -> Complex64 {
        self.amplitude * (Complex64::i() * self.wavenumber * x as f64).exp()
    }
}

/// A wave function given by lead expressions on `x ≤ −1` and `x ≥ 1` and an
/// explicit value at the centre site.
///
/// Each lead carries at most two plane-wave terms in every construction in
/// this crate.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseWave {
    pub left: Vec<PlaneWave>,
    pub psi0: Complex64,
    pub right: Vec<PlaneWave>,
}

impl PiecewiseWave {
    pub fn new(left: Vec<PlaneWave>, psi0: Complex64, right: Vec<PlaneWave>) -> Self {
        Self { left, psi0, right }
    }

    pub fn eval(&self, x: i64) -> Complex64 {
        match x {
            0 => self.psi0,
            x if x < 0 => self.left.iter().map(|w| w.eval(x)).sum(),
            x => self.right.iter().map(|w| w.eval(x)).sum(),
        }
    }

    /// The PT image `ψ(−x)*`, again in closed form.
    pub fn pt_image(&self) -> Self {
        let mirror = |terms: &[PlaneWave]| {
            terms
                .iter()
                .map(|w| PlaneWave::new(w.amplitude.conj(), w.wavenumber.conj()))
                .collect()
        };
        Self::new(mirror(&self.right), self.psi0.conj(), mirror(&self.left))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let scale = |terms: &[PlaneWave]| {
            terms
                .iter()
                .map(|w| PlaneWave::new(w.amplitude * factor, w.wavenumber))
                .collect()
        };
        Self::new(scale(&self.left), self.psi0 * factor, scale(&self.right))
    }

    /// Sum of two waves with terms of equal wavenumber merged.
    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            merge_terms(self.left.iter().chain(&other.left)),
            self.psi0 + other.psi0,
            merge_terms(self.right.iter().chain(&other.right)),
        )
    }

    /// Amplitude of the term with wavenumber `k` on the given side, zero if absent.
    pub fn coefficient(&self, right_lead: bool, k: Complex64) -> Complex64 {
        let terms = if right_lead { &self.right } else { &self.left };
        terms
            .iter()
            .filter(|w| (w.wavenumber - k).norm() < 1e-12)
            .map(|w| w.amplitude)
            .sum()
    }
}

fn merge_terms<'a>(terms: impl Iterator<Item = &'a PlaneWave>) -> Vec<PlaneWave> {
    let mut merged: Vec<PlaneWave> = Vec::new();
    for term in terms {
        match merged
            .iter_mut()
            .find(|m| (m.wavenumber - term.wavenumber).norm() < 1e-12)
        {
            Some(m) => m.amplitude += term.amplitude,
            None => merged.push(*term),
        }
    }
    merged
}

/// Largest violation of `−ψ(x−1) − ψ(x+1) + V(x)ψ(x) = Eψ(x)` over `window`.
///
/// The window is widened to cover at least `−2..=2` so that the three
/// defect equations are always checked.
pub fn schrodinger_residual(
    params: &ModelParams,
    energy: Complex64,
    wave: &PiecewiseWave,
    window: RangeInclusive<i64>,
) -> f64 {
    let lo = (*window.start()).min(-2);
    let hi = (*window.end()).max(2);
    (lo..=hi)
        .map(|x| {
            let lhs = -wave.eval(x - 1) - wave.eval(x + 1) + params.potential(x) * wave.eval(x);
            (lhs - energy * wave.eval(x)).norm()
        })
        .fold(0.0, f64::max)
}

/// [`schrodinger_residual`] divided by the largest `|ψ|` seen in the widened
/// window, for waves that grow on a lead.
pub fn relative_schrodinger_residual(
    params: &ModelParams,
    energy: Complex64,
    wave: &PiecewiseWave,
    window: RangeInclusive<i64>,
) -> f64 {
    let lo = (*window.start()).min(-2) - 1;
    let hi = (*window.end()).max(2) + 1;
    let scale = (lo..=hi).map(|x| wave.eval(x).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    schrodinger_residual(params, energy, wave, window) / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn energy_examples() {
        assert!(energy_of_lambda(c(0.0, 1.0)).unwrap().norm() < 1e-15);
        let e = energy_of_lambda(Complex64::from_polar(1.0, PI / 4.0)).unwrap();
        assert!((e - c(-2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(energy_of_lambda(c(2.0, 0.0)).unwrap(), c(-2.5, 0.0));
        assert_eq!(energy_of_lambda(c(0.0, 0.0)), Err(ModelError::ZeroLambda));
    }

    #[test]
    fn wavenumber_examples() {
        assert_eq!(wavenumber_of_lambda(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(wavenumber_of_lambda(c(-1.0, 0.0)).unwrap().re, PI);
        assert_eq!(wavenumber_of_lambda(c(-1.0, -0.0)).unwrap().re, PI);
        let k = wavenumber_of_lambda(c(0.0, 0.1)).unwrap();
        assert!((k - c(PI / 2.0, 10f64.ln())).norm() < 1e-15);
        assert!((k.im - std::f64::consts::LN_10).abs() < 1e-12);
    }

    #[test]
    fn sheet_examples() {
        assert_eq!(classify_sheet(c(0.5, 0.0), SHEET_TOL), Sheet::First);
        assert_eq!(classify_sheet(c(2.0, 0.0), SHEET_TOL), Sheet::Second);
        let on_circle = Complex64::from_polar(1.0, PI / 4.0);
        assert_eq!(classify_sheet(on_circle, SHEET_TOL), Sheet::BranchCut);
    }

    #[test]
    fn potential_is_pt_symmetric() {
        let p = ModelParams::new(0.3, -0.7, 1.1).unwrap();
        for x in -3..=3 {
            assert_eq!(p.potential(x).conj(), p.potential(-x));
        }
        assert_eq!(p.potential(-1), c(-0.7, 1.1));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            ModelParams::new(f64::NAN, 0.0, 0.0),
            Err(ModelError::NonFinite { name: "eps0", .. })
        ));
        assert!(ModelParams::new(0.0, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn plane_wave_solves_uniform_chain() {
        let p = ModelParams::gain_loss(0.0).unwrap();
        let k = 0.83;
        let wave = PiecewiseWave::new(
            vec![PlaneWave::new(c(1.0, 0.0), c(k, 0.0))],
            c(1.0, 0.0),
            vec![PlaneWave::new(c(1.0, 0.0), c(k, 0.0))],
        );
        let e = c(-2.0 * k.cos(), 0.0);
        assert!(schrodinger_residual(&p, e, &wave, -6..=6) < 1e-14);

        let mut perturbed = wave.clone();
        perturbed.psi0 += 1e-3;
        assert!(schrodinger_residual(&p, e, &perturbed, -6..=6) > 1e-4);
    }

    #[test]
    fn pt_image_matches_definition() {
        let wave = PiecewiseWave::new(
            vec![
                PlaneWave::new(c(0.3, 1.2), c(0.7, 0.1)),
                PlaneWave::new(c(-0.4, 0.2), c(-0.7, 0.0)),
            ],
            c(0.1, -0.9),
            vec![PlaneWave::new(c(1.5, -0.5), c(0.4, -0.2))],
        );
        let image = wave.pt_image();
        for x in -5..=5 {
            assert!((image.eval(x) - wave.eval(-x).conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn add_merges_equal_wavenumbers() {
        let a = PiecewiseWave::new(
            vec![PlaneWave::new(c(1.0, 0.0), c(0.5, 0.0))],
            c(1.0, 0.0),
            vec![],
        );
        let b = PiecewiseWave::new(
            vec![PlaneWave::new(c(0.0, 2.0), c(0.5, 0.0))],
            c(0.0, 1.0),
            vec![PlaneWave::new(c(1.0, 0.0), c(0.5, 0.0))],
        );
        let sum = a.add(&b);
        assert_eq!(sum.left.len(), 1);
        assert_eq!(sum.left[0].amplitude, c(1.0, 2.0));
        assert_eq!(sum.coefficient(true, c(0.5, 0.0)), c(1.0, 0.0));
        for x in -4..=4 {
            assert!((sum.eval(x) - a.eval(x) - b.eval(x)).norm() < 1e-14);
        }
    }
}
