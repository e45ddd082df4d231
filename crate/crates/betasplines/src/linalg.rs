//! Small dense linear solvers: exact Gaussian elimination over a quadratic
//! field, a pivoted floating-point variant, and a Jacobi eigenvalue sweep
//! for symmetric matrices. Everything here is sized for the model's tiny
//! systems (tens of unknowns), so clarity beats asymptotics.

use crate::error::{Error, Result};
use crate::quadfield::QuadRat;

/// Outcome of eliminating a consistent, possibly underdetermined system.
#[derive(Debug, Clone)]
pub(crate) struct GeneralSolution {
    /// A particular solution with every free variable set to zero.
    pub solution: Vec<QuadRat>,
    pub rank: usize,
    /// Columns that received no pivot.
    pub free_columns: Vec<usize>,
}

/// Solves `A x = b` exactly, allowing rectangular and rank-deficient `A` as
/// long as the system is consistent. Free variables are pinned to zero.
pub(crate) fn solve_consistent(a: &[Vec<QuadRat>], b: &[QuadRat]) -> Result<GeneralSolution> {
    let nrows = a.len();
    if nrows == 0 || b.len() != nrows {
        return Err(Error::InvalidArgument(
            "system needs at least one row and matching right-hand side".into(),
        ));
    }
    let ncols = a[0].len();
    if a.iter().any(|row| row.len() != ncols) {
        return Err(Error::InvalidArgument("ragged coefficient matrix".into()));
    }
    let field = b[0].field();
    let mut m: Vec<Vec<QuadRat>> = a.to_vec();
    let mut rhs: Vec<QuadRat> = b.to_vec();

    let mut pivot_of_row: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(src) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, src);
        rhs.swap(row, src);
        for r in (row + 1)..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].checked_div(&m[row][col])?;
            for c in col..ncols {
                let delta = &factor * &m[row][c];
                m[r][c] = &m[r][c] - &delta;
            }
            let delta = &factor * &rhs[row];
            rhs[r] = &rhs[r] - &delta;
        }
        pivot_of_row.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    let rank = pivot_of_row.len();
    for r in rank..nrows {
        if !rhs[r].is_zero() {
            return Err(Error::NotInSpan(
                "right-hand side is outside the column span".into(),
            ));
        }
    }

    let mut x = vec![QuadRat::zero(field); ncols];
    for r in (0..rank).rev() {
        let col = pivot_of_row[r];
        let mut acc = rhs[r].clone();
        for c in (col + 1)..ncols {
            if !m[r][c].is_zero() && !x[c].is_zero() {
                let t = &m[r][c] * &x[c];
                acc = &acc - &t;
            }
        }
        x[col] = acc.checked_div(&m[r][col])?;
    }
    let mut is_pivot = vec![false; ncols];
    for &c in &pivot_of_row {
        is_pivot[c] = true;
    }
    let free_columns = (0..ncols).filter(|&c| !is_pivot[c]).collect();
    Ok(GeneralSolution {
        solution: x,
        rank,
        free_columns,
    })
}

/// Solves a square nonsingular system exactly.
pub(crate) fn solve_square(a: &[Vec<QuadRat>], b: &[QuadRat]) -> Result<Vec<QuadRat>> {
    let n = a.len();
    match solve_consistent(a, b) {
        Ok(sol) if sol.rank == n => Ok(sol.solution),
        Ok(sol) => Err(Error::SingularSystem(format!(
            "square system of size {n} has rank {}",
            sol.rank
        ))),
        Err(Error::NotInSpan(_)) => Err(Error::SingularSystem(format!(
            "square system of size {n} is singular and inconsistent"
        ))),
        Err(e) => Err(e),
    }
}

/// Floating-point Gaussian elimination with partial pivoting.
pub(crate) fn solve_square_f64(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    if n == 0 || b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("malformed square system".into()));
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs: Vec<f64> = b.to_vec();
    let scale: f64 = m
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0, f64::max)
        .max(1.0);
    for col in 0..n {
        let (best, best_abs) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if best_abs <= f64::EPSILON * scale * 16.0 {
            return Err(Error::SingularSystem(format!(
                "pivot {best_abs:.3e} too small at column {col}"
            )));
        }
        m.swap(col, best);
        rhs.swap(col, best);
        for r in (col + 1)..n {
            let factor = m[r][col] / m[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                m[r][c] -= factor * m[col][c];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = rhs[r];
        for c in (r + 1)..n {
            acc -= m[r][c] * x[c];
        }
        x[r] = acc / m[r][r];
    }
    Ok(x)
}

/// Floating-point elimination for a square positive-semidefinite system that
/// may be rank deficient: columns without a usable pivot are pinned to zero
/// instead of failing. Intended for windowed Gram systems whose
/// boundary-clipped members can be linearly dependent.
pub(crate) fn solve_semidefinite_f64(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    if n == 0 || b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("malformed square system".into()));
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs: Vec<f64> = b.to_vec();
    let scale: f64 = m
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0, f64::max)
        .max(1.0);
    let tol = 1e-12 * scale;
    let mut pivot_of_row: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        let (best, best_abs) = (row..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if best_abs <= tol {
            continue;
        }
        m.swap(row, best);
        rhs.swap(row, best);
        for r in (row + 1)..n {
            let factor = m[r][col] / m[row][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                m[r][c] -= factor * m[row][c];
            }
            rhs[r] -= factor * rhs[row];
        }
        pivot_of_row.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..pivot_of_row.len()).rev() {
        let col = pivot_of_row[r];
        let mut acc = rhs[r];
        for c in (col + 1)..n {
            acc -= m[r][c] * x[c];
        }
        x[col] = acc / m[r][col];
    }
    Ok(x)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, returned in
/// increasing order.
pub(crate) fn symmetric_eigenvalues(mut m: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("malformed symmetric matrix".into()));
    }
    for p in 0..n {
        for q in (p + 1)..n {
            let asym = (m[p][q] - m[q][p]).abs();
            let scale = m[p][q].abs().max(m[q][p].abs()).max(1.0);
            if asym > 1e-12 * scale {
                return Err(Error::InvalidArgument(format!(
                    "matrix is not symmetric at ({p}, {q})"
                )));
            }
        }
    }
    let off = |m: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += m[p][q] * m[p][q];
                }
            }
        }
        s.sqrt()
    };
    let frob: f64 = m
        .iter()
        .flat_map(|row| row.iter().map(|v| v * v))
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let tol = 1e-14 * frob;
    let mut sweeps = 0;
    while off(&m) > tol {
        sweeps += 1;
        if sweeps > 100 {
            return Err(Error::InvalidArgument(
                "Jacobi iteration failed to converge in 100 sweeps".into(),
            ));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() <= tol / (n as f64) {
                    continue;
                }
                // Rotation angle zeroing m[p][q].
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::FieldSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(p: i64, q_: i64) -> QuadRat {
        QuadRat::from_pq_int(FieldSpec::golden(), p, q_)
    }

    #[test]
    fn exact_solver_recovers_known_solution() {
        // Rows of a 3x3 system with solution (tau, 1 - tau, 2).
        let truth = [q(0, 1), q(1, -1), q(2, 0)];
        let a = vec![
            vec![q(1, 0), q(0, 1), q(2, 0)],
            vec![q(0, 1), q(1, 1), q(0, 0)],
            vec![q(1, 1), q(0, 0), q(-1, 2)],
        ];
        let b: Vec<QuadRat> = a
            .iter()
            .map(|row| {
                let mut acc = q(0, 0);
                for (coef, x) in row.iter().zip(truth.iter()) {
                    acc = &acc + &(coef * x);
                }
                acc
            })
            .collect();
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, truth.to_vec());
    }

    #[test]
    fn exact_solver_flags_singular_and_inconsistent_systems() {
        let a = vec![
            vec![q(1, 0), q(2, 0)],
            vec![q(2, 0), q(4, 0)],
        ];
        let consistent = vec![q(1, 0), q(2, 0)];
        let sol = solve_consistent(&a, &consistent).unwrap();
        assert_eq!(sol.rank, 1);
        assert_eq!(sol.free_columns, vec![1]);
        assert_eq!(sol.solution, vec![q(1, 0), q(0, 0)]);
        let inconsistent = vec![q(1, 0), q(3, 0)];
        assert!(matches!(
            solve_consistent(&a, &inconsistent),
            Err(Error::NotInSpan(_))
        ));
        assert!(matches!(
            solve_square(&a, &consistent),
            Err(Error::SingularSystem(_))
        ));
    }

    #[test]
    fn float_solver_tracks_exact_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let a: Vec<Vec<QuadRat>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| q(rng.gen_range(-9..=9), rng.gen_range(-9..=9)))
                        .collect()
                })
                .collect();
            let b: Vec<QuadRat> = (0..n)
                .map(|_| q(rng.gen_range(-9..=9), rng.gen_range(-9..=9)))
                .collect();
            let exact = match solve_square(&a, &b) {
                Ok(x) => x,
                Err(_) => continue,
            };
            let af: Vec<Vec<f64>> = a
                .iter()
                .map(|row| row.iter().map(QuadRat::to_f64).collect())
                .collect();
            let bf: Vec<f64> = b.iter().map(QuadRat::to_f64).collect();
            let float = solve_square_f64(&af, &bf).unwrap();
            for (xe, xf) in exact.iter().zip(float.iter()) {
                assert!(
                    (xe.to_f64() - xf).abs() <= 1e-6 * (1.0 + xf.abs()),
                    "float {xf} drifts from exact {xe}"
                );
            }
        }
    }

    #[test]
    fn jacobi_eigenvalues_of_small_matrices() {
        let eigs = symmetric_eigenvalues(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
        // Diagonal matrices come back sorted.
        let eigs =
            symmetric_eigenvalues(vec![vec![5.0, 0.0], vec![0.0, -2.0]]).unwrap();
        assert_eq!(eigs, vec![-2.0, 5.0]);
        // A Gram matrix of two nearly parallel vectors has a tiny eigenvalue.
        let g = vec![vec![1.0, 0.999], vec![0.999, 1.0]];
        let eigs = symmetric_eigenvalues(g).unwrap();
        assert!((eigs[0] - 0.001).abs() < 1e-12);
        assert!((eigs[1] - 1.999).abs() < 1e-12);
        assert!(matches!(
            symmetric_eigenvalues(vec![vec![0.0, 1.0], vec![0.0, 0.0]]),
            Err(Error::InvalidArgument(_))
        ));
    }
}
