//! Independent brute-force reference solvers, used to certify minimality
//! on small instances. Both search monic connection polynomials by
//! ascending degree, so the first hit is the minimum; searching a fixed
//! degree with a fixed monic leading term avoids accepting lower-degree
//! witnesses of a relaxed system that are not actual solutions.

use std::fmt;

use crate::ff::{Field, Poly};
use crate::instance::{MgLfsrInstance, Solution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub budget: u64,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "enumeration budget of {} candidates exceeded",
            self.budget
        )
    }
}

impl std::error::Error for BudgetExceeded {}

/// Generous default search cap: the product of the moduli is always a
/// solution, plus slack for weight skew.
pub fn default_degree_cap(inst: &MgLfsrInstance) -> usize {
    let nu = inst.profile().nu();
    let w0 = inst.profile().weight(0);
    let g_sum: usize = (1..=inst.ell())
        .map(|i| inst.modulus(i).degree().finite().unwrap())
        .sum();
    let skew = (1..=inst.ell())
        .map(|i| {
            let w = inst.profile().weight(i);
            w.saturating_sub(w0).div_ceil(nu)
        })
        .max()
        .unwrap_or(0);
    g_sum + skew + 1
}

/// Finds the minimal solution degree by posing, for each candidate degree
/// D in ascending order, the affine linear system over GF(p) that forces
/// every too-large coefficient of `lambda * S_i mod G_i` to vanish for a
/// monic lambda of degree exactly D, and solving it by Gaussian
/// elimination. Returns the first solvable degree with a witness.
pub fn minimal_degree_by_linear_algebra(
    inst: &MgLfsrInstance,
    degree_cap: usize,
) -> Option<(usize, Solution)> {
    let field = inst.field();
    let profile = inst.profile();
    let nu = profile.nu();
    let w0 = profile.weight(0);
    let ell = inst.ell();

    // shifted[i][j] = x^j * S_{i+1} mod G_{i+1}, grown on demand.
    let mut shifted: Vec<Vec<Poly>> = (1..=ell).map(|i| vec![inst.sequence(i).clone()]).collect();

    for degree in 0..=degree_cap {
        for (i, table) in shifted.iter_mut().enumerate() {
            while table.len() <= degree {
                let next = table.last().unwrap().shift(1).rem(inst.modulus(i + 1));
                table.push(next);
            }
        }

        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut rhs: Vec<u64> = Vec::new();
        for i in 1..=ell {
            let w = profile.weight(i);
            let dg = inst.modulus(i).degree().finite().unwrap();
            for d in 0..dg {
                if nu * d + w < nu * degree + w0 {
                    continue;
                }
                let row = (0..degree).map(|j| shifted[i - 1][j].coeff(d)).collect();
                rows.push(row);
                rhs.push(field.neg(shifted[i - 1][degree].coeff(d)));
            }
        }

        if let Some(tail) = solve_affine(field, rows, rhs, degree) {
            let mut coeffs = tail;
            coeffs.push(1);
            let lambda = Poly::new(field, coeffs);
            let omegas = (1..=ell)
                .map(|i| lambda.mul(inst.sequence(i)).rem(inst.modulus(i)))
                .collect();
            let sol = Solution { lambda, omegas };
            debug_assert!(inst.is_solution(&sol.as_vector()));
            return Some((degree, sol));
        }
    }
    None
}

/// Gaussian elimination over GF(p) for `rows * x = rhs`; free variables
/// are pinned to zero. Returns `None` on an inconsistent system.
fn solve_affine(
    field: Field,
    mut rows: Vec<Vec<u64>>,
    mut rhs: Vec<u64>,
    ncols: usize,
) -> Option<Vec<u64>> {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut used = 0usize;
    for col in 0..ncols {
        let Some(pivot) = (used..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(used, pivot);
        rhs.swap(used, pivot);
        let inv = field.inv(rows[used][col]);
        for cell in rows[used][col..].iter_mut() {
            *cell = field.mul(*cell, inv);
        }
        rhs[used] = field.mul(rhs[used], inv);
        let pivot_row = rows[used].clone();
        let pivot_rhs = rhs[used];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != used && row[col] != 0 {
                let factor = row[col];
                for (cell, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *cell = field.sub(*cell, field.mul(factor, p));
                }
                rhs[r] = field.sub(rhs[r], field.mul(factor, pivot_rhs));
            }
        }
        pivot_of_col[col] = Some(used);
        used += 1;
    }
    // Any leftover row must have vanished entirely.
    if rhs[used..].iter().any(|&v| v != 0) {
        return None;
    }
    let mut x = vec![0u64; ncols];
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pivot {
            x[col] = rhs[*r];
        }
    }
    Some(x)
}

/// Enumerates every monic candidate by ascending degree and tests the
/// solution predicate directly. `budget` caps the total number of
/// candidates examined.
pub fn exhaustive_enumerate(
    inst: &MgLfsrInstance,
    degree_cap: usize,
    budget: u64,
) -> Result<Option<(usize, Solution)>, BudgetExceeded> {
    let field = inst.field();
    let p = field.modulus();
    let mut examined = 0u64;
    for degree in 0..=degree_cap {
        let mut tail = vec![0u64; degree];
        loop {
            examined += 1;
            if examined > budget {
                return Err(BudgetExceeded { budget });
            }
            let mut coeffs = tail.clone();
            coeffs.push(1);
            let lambda = Poly::new(field, coeffs);
            let omegas: Vec<Poly> = (1..=inst.ell())
                .map(|i| lambda.mul(inst.sequence(i)).rem(inst.modulus(i)))
                .collect();
            let sol = Solution { lambda, omegas };
            if inst.is_solution(&sol.as_vector()) {
                return Ok(Some((degree, sol)));
            }
            // Advance the base-p counter over the low coefficients.
            let mut carry = true;
            for c in tail.iter_mut() {
                *c += 1;
                if *c == p {
                    *c = 0;
                } else {
                    carry = false;
                    break;
                }
            }
            if carry {
                break;
            }
        }
    }
    Ok(None)
}
