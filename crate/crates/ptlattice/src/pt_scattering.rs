//! PT-symmetric scattering states and the currents that characterize them.
//!
//! Two constructions are offered: symmetrizing a solved scattering state,
//! `φ = ψ + PTψ`, and superposing the two Jost solutions of the pure
//! gain/loss defect so that the centre-site equation holds.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{ModelError, ModelParams, PiecewiseWave, PlaneWave};
use crate::scattering::{Direction, ScatteringError, ScatteringSolution};

const SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PtScatteringError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error("reflected amplitude vanishes at k = {0}; the phase reference is undefined")]
    SingularCombination(f64),
    #[error("symmetrized wave vanishes at the centre site (k = {0})")]
    Normalization(f64),
    #[error("both Jost functions vanish at k = {k}, Γ = {gamma}")]
    Underdetermined { k: f64, gamma: f64 },
    #[error("k = {0} is a band edge or outside (−π, π)")]
    BandEdge(f64),
}

/// Returns `ψ + PTψ` normalized to 1 at the centre site, after rotating `ψ`
/// so that its reflected amplitude is real and positive.
pub fn pt_symmetrize(solution: &ScatteringSolution) -> Result<PiecewiseWave, PtScatteringError> {
    if solution.r.norm() < SINGULAR_TOL {
        return Err(PtScatteringError::SingularCombination(solution.k));
    }
    let reflected = match solution.direction {
        Direction::LeftToRight => solution.b,
        Direction::RightToLeft => solution.c,
    };
    let wave = solution.wave().scaled(reflected.norm() / reflected);
    let symmetric = wave.add(&wave.pt_image());
    let centre = symmetric.psi0;
    if centre.norm() < SINGULAR_TOL * wave.psi0.norm().max(1.0) {
        return Err(PtScatteringError::Normalization(solution.k));
    }
    Ok(symmetric.scaled(centre.inv()))
}

/// Ingredients of the Jost construction for the pure gain/loss defect.
/// Every quantity except the `α` normalizations is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostData {
    /// `1 + iΓe^{−ik}`, right-lead amplitude of the `e^{ikx}` solution.
    pub alpha_plus: Complex64,
    /// `1 + iΓe^{ik}`, right-lead amplitude of the `e^{−ikx}` solution.
    pub alpha_minus: Complex64,
    /// Centre values `1 ± 2Γ sin k + Γ²`.
    pub f0_plus: f64,
    pub f0_minus: f64,
    /// Centre-site residuals `2Γ(Γ ± 2 sin k) cos k`.
    pub jost_plus: f64,
    pub jost_minus: f64,
    /// Superposition weights with `A₊F₊ + A₋F₋ = 0` and `φ(0) = 1`.
    pub a_plus: f64,
    pub a_minus: f64,
}

/// A Jost solution: it satisfies every lattice equation except the one at
/// the centre site.
fn jost_solution(alpha: Complex64, k: f64, f0: f64) -> PiecewiseWave {
    let k = Complex64::new(k, 0.0);
    PiecewiseWave::new(
        vec![PlaneWave::new(alpha.conj(), k)],
        Complex64::new(f0, 0.0),
        vec![PlaneWave::new(alpha, k)],
    )
}

/// Centre-site residual `−f(−1) − f(1) − E f(0)` of a Jost solution.
fn centre_residual(wave: &PiecewiseWave, k: f64) -> f64 {
    let energy = -2.0 * k.cos();
    (-wave.eval(-1) - wave.eval(1) - energy * wave.eval(0)).re
}

/// PT-symmetric scattering state of the pure gain/loss defect built from
/// Jost solutions, normalized to `φ(0) = 1`.
pub fn jost_pt_state(gamma: f64, k: f64) -> Result<(JostData, PiecewiseWave), PtScatteringError> {
    ModelParams::gain_loss(gamma)?;
    if !k.is_finite() || k.abs() >= std::f64::consts::PI || k.sin().abs() < 1e-12 {
        return Err(PtScatteringError::BandEdge(k));
    }
    let i = Complex64::i();
    let phase = Complex64::from_polar(1.0, k);
    let alpha_plus = 1.0 + i * gamma * phase.conj();
    let alpha_minus = 1.0 + i * gamma * phase;
    let f0_plus = alpha_plus.norm_sqr();
    let f0_minus = alpha_minus.norm_sqr();
    let plus = jost_solution(alpha_plus, k, f0_plus);
    let minus = jost_solution(alpha_minus, -k, f0_minus);
    let jost_plus = centre_residual(&plus, k);
    let jost_minus = centre_residual(&minus, k);
    let det = jost_minus * f0_plus - jost_plus * f0_minus;
    let scale = f0_plus.max(f0_minus);
    if jost_plus.abs().max(jost_minus.abs()) < 1e-12 * scale || det.abs() < 1e-12 * scale {
        return Err(PtScatteringError::Underdetermined { k, gamma });
    }
    let a_plus = jost_minus / det;
    let a_minus = -jost_plus / det;
    let wave = plus
        .scaled(Complex64::new(a_plus, 0.0))
        .add(&minus.scaled(Complex64::new(a_minus, 0.0)));
    Ok((
        JostData {
            alpha_plus,
            alpha_minus,
            f0_plus,
            f0_minus,
            jost_plus,
            jost_minus,
            a_plus,
            a_minus,
        },
        wave,
    ))
}

/// Probability current `Im(ψ(x)* ψ(x+1))` across the bond `(x, x+1)`.
pub fn standard_current(wave: &PiecewiseWave, bond: i64) -> f64 {
    (wave.eval(bond).conj() * wave.eval(bond + 1)).im
}

/// PT current `½(ψ(x)* ψ(−x−1) − ψ(−x) ψ(x+1)*)` for the bond `(x, x+1)`.
pub fn pt_current(wave: &PiecewiseWave, bond: i64) -> Complex64 {
    0.5 * (wave.eval(bond).conj() * wave.eval(-bond - 1) - wave.eval(-bond) * wave.eval(bond + 1).conj())
}

/// Both currents on one bond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtCurrentValue {
    pub bond: i64,
    pub j_pt: Complex64,
    pub j_std: f64,
}

pub fn current_profile(wave: &PiecewiseWave, bonds: RangeInclusive<i64>) -> Vec<PtCurrentValue> {
    bonds
        .map(|bond| PtCurrentValue {
            bond,
            j_pt: pt_current(wave, bond),
            j_std: standard_current(wave, bond),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::schrodinger_residual;
    use crate::scattering::solve_scattering;
    use std::f64::consts::PI;

    fn solve(e0: f64, e1: f64, g: f64, k: f64, dir: Direction) -> ScatteringSolution {
        solve_scattering(&ModelParams::new(e0, e1, g).unwrap(), k, dir).unwrap()
    }

    fn pt_mismatch(wave: &PiecewiseWave) -> f64 {
        (-10..=10)
            .map(|x| (wave.eval(-x).conj() - wave.eval(x)).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn symmetrized_left_incidence_matches_closed_form() {
        let (gamma, k) = (0.5, 1.0);
        let phi = pt_symmetrize(&solve(0.0, 0.0, gamma, k, Direction::LeftToRight)).unwrap();
        let s = k.sin();
        let kc = Complex64::new(k, 0.0);
        let forward = -gamma / (2.0 * s) * Complex64::from_polar(1.0, 2.0 * k);
        let backward = Complex64::new(1.0 + gamma / (2.0 * s), 0.0);
        assert!((phi.coefficient(false, kc) - forward).norm() < 1e-12);
        assert!((phi.coefficient(false, -kc) - backward).norm() < 1e-12);
        assert!((phi.psi0 - 1.0).norm() < 1e-15);
        assert!(pt_mismatch(&phi) < 1e-12);
    }

    #[test]
    fn symmetrized_waves_solve_the_lattice_equation() {
        for (e0, e1, g, k) in [(0.0, 0.0, 0.5, 1.0), (0.2, -0.1, 0.8, 2.3), (0.0, 0.3, 0.0, 0.7)] {
            let p = ModelParams::new(e0, e1, g).unwrap();
            for dir in [Direction::LeftToRight, Direction::RightToLeft] {
                let phi = pt_symmetrize(&solve(e0, e1, g, k, dir)).unwrap();
                let energy = Complex64::new(-2.0 * k.cos(), 0.0);
                assert!(schrodinger_residual(&p, energy, &phi, -8..=8) < 1e-12);
                assert!(pt_mismatch(&phi) < 1e-12);
            }
        }
    }

    #[test]
    fn reflectionless_input_is_rejected() {
        let sol = solve(0.0, 0.0, 0.5, PI / 2.0, Direction::LeftToRight);
        assert!(matches!(pt_symmetrize(&sol), Err(PtScatteringError::SingularCombination(_))));
    }

    #[test]
    fn jost_examples() {
        let (data, wave) = jost_pt_state(1.0, PI / 3.0).unwrap();
        let r3 = 3f64.sqrt();
        assert!((data.jost_plus - (1.0 + r3)).abs() < 1e-12);
        assert!((data.jost_minus - (1.0 - r3)).abs() < 1e-12);
        assert!((data.a_plus / data.a_minus - 0.267949).abs() < 1e-6);
        assert!((data.f0_plus - (2.0 + r3)).abs() < 1e-12);
        assert!((data.a_plus * data.jost_plus + data.a_minus * data.jost_minus).abs() < 1e-12);
        assert!((wave.psi0 - 1.0).norm() < 1e-12);
        let p = ModelParams::gain_loss(1.0).unwrap();
        let energy = Complex64::new(-2.0 * (PI / 3.0).cos(), 0.0);
        assert!(schrodinger_residual(&p, energy, &wave, -8..=8) < 1e-12);
        assert!(pt_mismatch(&wave) < 1e-12);
    }

    #[test]
    fn jost_matches_combination_of_symmetrized_states() {
        for (gamma, k) in [(0.5, 1.0), (1.3, -2.2), (-0.7, 0.4)] {
            let (_, phi) = jost_pt_state(gamma, k).unwrap();
            let left = pt_symmetrize(&solve(0.0, 0.0, gamma, k, Direction::LeftToRight)).unwrap();
            let right = pt_symmetrize(&solve(0.0, 0.0, gamma, k, Direction::RightToLeft)).unwrap();
            let w = gamma / (2.0 * k.sin());
            let combo = right
                .scaled(Complex64::new(0.5 * (1.0 + w), 0.0))
                .add(&left.scaled(Complex64::new(0.5 * (1.0 - w), 0.0)));
            let gap = (-8..=8).map(|x| (phi.eval(x) - combo.eval(x)).norm()).fold(0.0, f64::max);
            assert!(gap < 1e-12, "{gamma} {k} {gap}");
        }
    }

    #[test]
    fn jost_degenerate_at_quarter_period() {
        assert!(matches!(
            jost_pt_state(0.8, PI / 2.0),
            Err(PtScatteringError::Underdetermined { .. })
        ));
        assert!(matches!(jost_pt_state(0.8, 0.0), Err(PtScatteringError::BandEdge(_))));
    }

    #[test]
    fn current_examples() {
        let wave = PiecewiseWave::new(
            vec![PlaneWave::new(Complex64::new(0.6, 0.8), Complex64::new(0.9, 0.0))],
            Complex64::new(0.6, 0.8),
            vec![PlaneWave::new(Complex64::new(0.6, 0.8), Complex64::new(0.9, 0.0))],
        );
        for bond in [-5, 0, 4] {
            assert!((standard_current(&wave, bond) - 0.9f64.sin()).abs() < 1e-14);
        }
        let (gamma, k) = (0.5, 1.0);
        let sol = solve(0.0, 0.0, gamma, k, Direction::LeftToRight);
        let (s, c) = k.sin_cos();
        let expected = sol.b.norm_sqr() * s * s / ((gamma + 2.0 * s) * gamma * c);
        let wave = sol.wave();
        for bond in [-7, -4, -2, 1, 3, 6] {
            assert!((pt_current(&wave, bond) - expected).norm() < 1e-12, "{bond}");
        }
        assert!((standard_current(&wave, 3) - sol.c.norm_sqr() * s).abs() < 1e-12);
        assert!((standard_current(&wave, -4) - (1.0 - sol.b.norm_sqr()) * s).abs() < 1e-12);
        let phi = pt_symmetrize(&sol).unwrap();
        assert!(current_profile(&phi, -6..=6).iter().all(|v| v.j_pt.norm() < 1e-12));
    }
}
