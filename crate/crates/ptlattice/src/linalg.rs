//! Dense 3×3 complex systems, the size of every defect matching problem.

use num_complex::Complex64;

pub type Matrix3 = [[Complex64; 3]; 3];

pub fn determinant(m: &Matrix3) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Maximum absolute row sum.
pub fn norm_inf(m: &Matrix3) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|a| a.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `m·x = rhs` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot is exactly zero.
pub fn solve(m: &Matrix3, rhs: [Complex64; 3]) -> Option<[Complex64; 3]> {
    let mut a = *m;
    let mut b = rhs;
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap_or(col);
        if a[pivot][col].norm() == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let factor = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= factor * p;
            }
            let v = b[col];
            b[row] -= factor * v;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 3];
    for row in (0..3).rev() {
        let tail: Complex64 = (row + 1..3).map(|j| a[row][j] * x[j]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// A null vector of a (numerically) singular matrix: the largest cross
/// product of two rows, which is annihilated by both rows.
pub fn null_vector(m: &Matrix3) -> [Complex64; 3] {
    let cross = |u: &[Complex64; 3], v: &[Complex64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let size = |v: &[Complex64; 3]| v.iter().map(|a| a.norm_sqr()).sum::<f64>();
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross(&m[i], &m[j]))
        .max_by(|a, b| size(a).total_cmp(&size(b)))
        .unwrap_or([Complex64::new(0.0, 0.0); 3])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn apply(m: &Matrix3, x: &[Complex64; 3]) -> [Complex64; 3] {
        let mut y = [c(0.0, 0.0); 3];
        for i in 0..3 {
            y[i] = (0..3).map(|j| m[i][j] * x[j]).sum();
        }
        y
    }

    #[test]
    fn solves_pivoting_system() {
        let m = [
            [c(0.0, 0.0), c(1.0, 1.0), c(2.0, 0.0)],
            [c(3.0, -1.0), c(0.5, 0.0), c(0.0, 1.0)],
            [c(1.0, 0.0), c(0.0, -2.0), c(1.0, 1.0)],
        ];
        let x = [c(1.0, 2.0), c(-0.5, 0.0), c(0.3, -0.7)];
        let b = apply(&m, &x);
        let solved = solve(&m, b).unwrap();
        for i in 0..3 {
            assert!((solved[i] - x[i]).norm() < 1e-14);
        }
        let det = determinant(&m);
        assert!(det.norm() > 0.0);
    }

    #[test]
    fn null_vector_of_rank_two() {
        let m = [
            [c(1.0, 0.0), c(2.0, 1.0), c(0.0, 1.0)],
            [c(0.0, 1.0), c(1.0, 0.0), c(3.0, 0.0)],
            [c(1.0, 1.0), c(3.0, 1.0), c(3.0, 1.0)],
        ];
        assert!(determinant(&m).norm() < 1e-14);
        let v = null_vector(&m);
        let y = apply(&m, &v);
        assert!(y.iter().all(|a| a.norm() < 1e-13));
        assert!(v.iter().any(|a| a.norm() > 0.1));
    }

    #[test]
    fn singular_solve_returns_none() {
        let zero = [[c(0.0, 0.0); 3]; 3];
        assert!(solve(&zero, [c(1.0, 0.0); 3]).is_none());
    }
}
