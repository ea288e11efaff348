//! Real-energy localized states, their PT phase and PT norm, and the
//! unbroken-PT region.
//!
//! A bound state has real `λ = e^{ik}` with `0 < |λ| < 1` and
//! `k = iκ + δπ` (`δ = 0` below the band, `δ = 1` above). Virtual bound
//! states have `|λ| > 1`, i.e. `κ < 0`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{ModelError, ModelParams, PiecewiseWave, PlaneWave, StateClass};
use crate::spectrum::{self, SpectrumError, CLASS_TOL};

/// Sites on which the PT phase is verified.
pub const PT_WINDOW: RangeInclusive<i64> = -10..=10;
const PT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("defect coupling is singular at λ = {0}")]
    Singular(f64),
    #[error("state is not PT-symmetric (mismatch {0:e})")]
    NotPtSymmetric(f64),
    #[error("PT norm diverges for κ = {0} ≤ 0")]
    DivergentNorm(f64),
}

/// Closed form `ψ(x) = Bλ^{|x|}` (x ≤ −1), `ψ₀`, `Cλ^{x}` (x ≥ 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundStateForm {
    pub lambda: f64,
    /// `−ln|λ|`; negative for a virtual bound state.
    pub kappa: f64,
    /// 0 below the lower band edge, 1 above the upper one.
    pub delta: u8,
    pub energy: f64,
    pub psi0: Complex64,
    pub b_coeff: Complex64,
    pub c_coeff: Complex64,
    /// PT eigenphase for the stored coefficients.
    pub theta: f64,
}

impl BoundStateForm {
    pub fn is_virtual(&self) -> bool {
        self.kappa < 0.0
    }

    /// `k = iκ + δπ`.
    pub fn wavenumber(&self) -> Complex64 {
        Complex64::new(f64::from(self.delta) * PI, self.kappa)
    }

    pub fn wave(&self) -> PiecewiseWave {
        let k = self.wavenumber();
        PiecewiseWave::new(
            vec![PlaneWave::new(self.b_coeff, -k)],
            self.psi0,
            vec![PlaneWave::new(self.c_coeff, k)],
        )
    }
}

/// Bound states and, separately, the virtual bound states.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundStates {
    pub bound: Vec<BoundStateForm>,
    pub virtual_states: Vec<BoundStateForm>,
}

/// Lead coefficient `B = ψ₀ / (1 + (ε₁ + iΓ)λ)` for `θ = 0`; the right lead
/// carries `C = B*`.
pub fn bound_coefficient(params: &ModelParams, lambda: f64, psi0: Complex64) -> Result<Complex64, BoundError> {
    let shifted = 1.0 + params.eps1() * lambda;
    let gl = params.gamma() * lambda;
    let den = shifted * shifted + gl * gl;
    if lambda == 0.0 || den < 1e-14 {
        return Err(BoundError::Singular(lambda));
    }
    Ok(psi0 * Complex64::new(shifted, -gl) / den)
}

fn form(params: &ModelParams, lambda: f64, energy: f64) -> Result<BoundStateForm, BoundError> {
    let (psi0, b) = match bound_coefficient(params, lambda, Complex64::new(1.0, 0.0)) {
        Ok(b) => (Complex64::new(1.0, 0.0), b),
        // u = 1 + (ε₁ + iΓ)λ near zero, so ψ₀ = Bu carries no usable phase.
        // Take Im B = 1 and fix Re B from the centre equation
        // 2λ Re B = (ε₀ − E)ψ₀ instead. At u = 0 this is the odd state of a
        // Hermitian defect: ψ₀ = 0, B = i.
        Err(BoundError::Singular(_)) if lambda != 0.0 => {
            let u = Complex64::new(1.0 + params.eps1() * lambda, params.gamma() * lambda);
            let detuning = params.eps0() - energy;
            let re = -u.im * detuning / (2.0 * lambda - u.re * detuning);
            let b = Complex64::new(re, 1.0);
            (Complex64::new((b * u).re, 0.0), b)
        }
        Err(e) => return Err(e),
    };
    Ok(BoundStateForm {
        lambda,
        kappa: -lambda.abs().ln(),
        delta: u8::from(lambda < 0.0),
        energy,
        psi0,
        b_coeff: b,
        c_coeff: b.conj(),
        theta: 0.0,
    })
}

pub fn find_bound_states(params: &ModelParams) -> Result<BoundStates, BoundError> {
    let mut states = BoundStates {
        bound: Vec::new(),
        virtual_states: Vec::new(),
    };
    for point in spectrum::solve_discrete_spectrum(params)? {
        let target = match point.class {
            StateClass::Bound => &mut states.bound,
            StateClass::VirtualBound => &mut states.virtual_states,
            _ => continue,
        };
        target.push(form(params, point.lambda.re, point.energy.re)?);
    }
    Ok(states)
}

/// Phase θ with `ψ(−x)* = e^{iθ}ψ(x)` on `window`, if one exists.
///
/// The mismatch is measured relative to the largest `|ψ|` in the window so
/// that growing (virtual) states are judged on the same footing.
pub fn pt_phase_of_wave(wave: &PiecewiseWave, window: RangeInclusive<i64>) -> Result<f64, BoundError> {
    let image = wave.pt_image();
    let (anchor, scale) = window
        .clone()
        .map(|x| (x, wave.eval(x).norm()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 0.0));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let phase = image.eval(anchor) / wave.eval(anchor);
    let phase = phase / phase.norm();
    let mismatch = window
        .map(|x| (image.eval(x) - phase * wave.eval(x)).norm())
        .fold(0.0, f64::max)
        / scale;
    if mismatch > PT_TOL || !mismatch.is_finite() {
        return Err(BoundError::NotPtSymmetric(mismatch));
    }
    Ok(phase.arg())
}

/// PT eigenphase of a bound or virtual state, verified on [`PT_WINDOW`].
pub fn pt_phase_check(state: &BoundStateForm, params: &ModelParams) -> Result<f64, BoundError> {
    let wave = state.wave();
    let residual = crate::model::relative_schrodinger_residual(
        params,
        Complex64::new(state.energy, 0.0),
        &wave,
        PT_WINDOW,
    );
    if residual > PT_TOL {
        return Err(BoundError::NotPtSymmetric(residual));
    }
    pt_phase_of_wave(&wave, PT_WINDOW)
}

/// PT norm `Σ ψ(−x)* ψ(x)` and the sign that serves as C-eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtNormRecord {
    pub n_pt: f64,
    pub c_eigenvalue: i8,
}

/// Closed-form geometric sum of the PT norm.
pub fn pt_norm(state: &BoundStateForm) -> Result<PtNormRecord, BoundError> {
    if state.kappa <= 0.0 {
        return Err(BoundError::DivergentNorm(state.kappa));
    }
    let cross = (state.b_coeff.conj() * state.c_coeff).re;
    let n_pt = state.psi0.norm_sqr() + 2.0 * cross / (2.0 * state.kappa).exp_m1();
    Ok(PtNormRecord {
        n_pt,
        c_eigenvalue: if n_pt < 0.0 { -1 } else { 1 },
    })
}

/// Number of real roots of `P` (bound, virtual or band-edge states).
pub fn real_root_count(params: &ModelParams) -> Result<usize, BoundError> {
    Ok(spectrum::siegert_roots(params)?
        .iter()
        .filter(|l| l.im.abs() < CLASS_TOL * l.norm().max(1.0))
        .count())
}

/// True when every root of `P` is real. A resonance pair that survives
/// from the Hermitian limit therefore counts as broken.
pub fn is_unbroken(params: &ModelParams) -> Result<bool, BoundError> {
    Ok(real_root_count(params)? == 4)
}

/// Axes of an `(ε₀, ε₁, Γ)` scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    pub eps0: Vec<f64>,
    pub eps1: Vec<f64>,
    pub gamma: Vec<f64>,
}

/// Unbroken flags in `eps0`-major, `gamma`-minor order.
#[derive(Debug, Clone, PartialEq)]
pub struct UnbrokenMap {
    pub grid: ParamGrid,
    pub cells: Vec<bool>,
}

impl UnbrokenMap {
    pub fn get(&self, i_eps0: usize, i_eps1: usize, i_gamma: usize) -> bool {
        let (n1, ng) = (self.grid.eps1.len(), self.grid.gamma.len());
        self.cells[(i_eps0 * n1 + i_eps1) * ng + i_gamma]
    }
}

pub fn unbroken_region_scan(grid: &ParamGrid) -> Result<UnbrokenMap, BoundError> {
    let mut cells = Vec::with_capacity(grid.eps0.len() * grid.eps1.len() * grid.gamma.len());
    for &e0 in &grid.eps0 {
        for &e1 in &grid.eps1 {
            for &g in &grid.gamma {
                cells.push(is_unbroken(&ModelParams::new(e0, e1, g)?)?);
            }
        }
    }
    Ok(UnbrokenMap {
        grid: grid.clone(),
        cells,
    })
}
