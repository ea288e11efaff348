//! Low-degree polynomial tools: evaluation, simultaneous root iteration and
//! the discriminant via a Sylvester determinant.
//!
//! Coefficients are always stored in descending degree.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Iteration cap for the simultaneous root iteration.
pub const MAX_ITERATIONS: usize = 200;
/// Relative update size at which a root is considered converged.
pub const UPDATE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RootError {
    #[error("polynomial has a zero leading coefficient")]
    ZeroLeading,
    #[error("root iteration did not converge after {iterations} steps (best residual {best_residual:e})")]
    NonConvergence { iterations: usize, best_residual: f64 },
}

pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

pub fn eval_real(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Value and first derivative by a two-row Horner scheme.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    coeffs.iter().fold((zero, zero), |(p, dp), &a| (p * z + a, dp * z + p))
}

/// Upper bound on the rounding error of Horner evaluation at `z`.
fn rounding_bound(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let n = coeffs.len() as f64;
    let magnitude = coeffs.iter().fold(0.0, |acc, a| acc * r + a.norm());
    8.0 * n * f64::EPSILON * magnitude
}

/// `|P(z)| / max(1, |z|)^deg`, the scale-free residual used for acceptance.
pub fn normalized_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let degree = coeffs.len().saturating_sub(1) as i32;
    eval(coeffs, z).norm() / z.norm().max(1.0).powi(degree)
}

/// Drops leading coefficients whose magnitude is at most `tol`.
pub fn trim_leading(coeffs: &[Complex64], tol: f64) -> &[Complex64] {
    let start = coeffs
        .iter()
        .position(|a| a.norm() > tol)
        .unwrap_or(coeffs.len());
    &coeffs[start..]
}

/// All roots of a polynomial with non-zero leading coefficient.
///
/// Aberth iteration in Gauss–Seidel form from the fixed starting points
/// `(0.4 + 0.9i)^m`, followed by one Newton step per root that is kept only
/// if it lowers `|P|`. A root stops moving once its update is below
/// [`UPDATE_TOL`] relative to `max(1, |z|)` or `|P(z)|` is at rounding level,
/// which keeps multiple roots from wandering.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, RootError> {
    let lead = *coeffs.first().ok_or(RootError::ZeroLeading)?;
    if lead.norm() == 0.0 {
        return Err(RootError::ZeroLeading);
    }
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|&a| a / lead).collect();
    if degree == 1 {
        return Ok(vec![-monic[1]]);
    }

    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (1..=degree as i32).map(|m| seed.powi(m)).collect();
    let mut frozen = vec![false; degree];
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        for i in 0..degree {
            if frozen[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm() <= rounding_bound(&monic, z[i]) {
                frozen[i] = true;
                continue;
            }
            let ratio = if dp.norm() == 0.0 { p } else { p / dp };
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= UPDATE_TOL * z[i].norm().max(1.0) {
                frozen[i] = true;
            }
        }
        if frozen.iter().all(|&f| f) {
            converged = true;
            break;
        }
    }

    for zi in z.iter_mut() {
        let (p, dp) = eval_with_derivative(&monic, *zi);
        if dp.norm() > 0.0 {
            let candidate = *zi - p / dp;
            if candidate.is_finite() && eval(&monic, candidate).norm() < p.norm() {
                *zi = candidate;
            }
        }
    }

    if !converged {
        let best_residual = z
            .iter()
            .map(|&zi| normalized_residual(&monic, zi))
            .fold(0.0, f64::max);
        if best_residual > 1e-11 {
            return Err(RootError::NonConvergence {
                iterations: MAX_ITERATIONS,
                best_residual,
            });
        }
    }
    Ok(z)
}

/// Coefficients of `∏ (x − rᵢ)`.
pub fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = coeffs.clone();
        next.push(Complex64::new(0.0, 0.0));
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// Arithmetic needed by the Sylvester determinant.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn from_f64(x: f64) -> Self;
    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

/// Forward-mode dual number `value + slope·ε`, `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub value: f64,
    pub slope: f64,
}

impl Dual {
    pub fn new(value: f64, slope: f64) -> Self {
        Self { value, slope }
    }

    pub fn constant(value: f64) -> Self {
        Self { value, slope: 0.0 }
    }
}

impl Add for Dual {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.slope + rhs.slope)
    }
}

impl Sub for Dual {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.slope - rhs.slope)
    }
}

impl Mul for Dual {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.value * rhs.value,
            self.value * rhs.slope + self.slope * rhs.value,
        )
    }
}

impl Div for Dual {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        Self::new(
            self.value / rhs.value,
            (self.slope * rhs.value - self.value * rhs.slope) / (rhs.value * rhs.value),
        )
    }
}

impl Neg for Dual {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.slope)
    }
}

impl Scalar for Dual {
    fn zero() -> Self {
        Self::constant(0.0)
    }
    fn from_f64(x: f64) -> Self {
        Self::constant(x)
    }
    fn magnitude(&self) -> f64 {
        self.value.abs()
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    let mut det = T::from_f64(1.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].magnitude().total_cmp(&m[b][col].magnitude()))
            .unwrap_or(col);
        if m[pivot][col].magnitude() == 0.0 {
            return T::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det = det * p;
        for row in col + 1..n {
            let factor = m[row][col] / p;
            let (upper, lower) = m.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x = *x - factor * *p;
            }
        }
    }
    det
}

/// Discriminant `(−1)^{n(n−1)/2} · Res(P, P′) / aₙ` of a polynomial of
/// degree `n ≥ 2` with real (or dual) coefficients.
pub fn discriminant<T: Scalar>(coeffs: &[T]) -> T {
    let n = coeffs.len() - 1;
    let derivative: Vec<T> = coeffs[..n]
        .iter()
        .enumerate()
        .map(|(i, &a)| a * T::from_f64((n - i) as f64))
        .collect();
    let size = 2 * n - 1;
    let mut sylvester = vec![vec![T::zero(); size]; size];
    // n−1 shifted copies of P, then n shifted copies of P′.
    for row in 0..n - 1 {
        for (j, &a) in coeffs.iter().enumerate() {
            sylvester[row][row + j] = a;
        }
    }
    for row in 0..n {
        for (j, &a) in derivative.iter().enumerate() {
            sylvester[n - 1 + row][row + j] = a;
        }
    }
    let resultant = determinant(sylvester);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    resultant * T::from_f64(sign) / coeffs[0]
}
