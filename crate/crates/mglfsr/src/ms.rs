//! The Mulders-Storjohann reducer: apply row reductions until the basis
//! is in weak Popov form. Also the modulo-reduced variant that keeps the
//! replaced row's trailing entries reduced by the instance moduli, which
//! caps entry degrees without changing correctness or the reduction
//! bound.

use crate::ff::Poly;
use crate::polymat::{PolyMatrix, PolyVector, WeightProfile};

/// Instrumentation from one reducer run: how many row reductions were
/// performed, and the a-priori bound they must stay within.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionStats {
    pub row_reductions: usize,
    pub bound: usize,
}

/// Upper bound on the number of row reductions needed to bring a basis of
/// orthogonality defect `defect` to weak Popov form:
/// `ceil((l+1) * defect / nu) + 2l + 1`.
pub fn reduction_bound(defect: usize, ell: usize, nu: usize) -> usize {
    ((ell + 1) * defect).div_ceil(nu) + 2 * ell + 1
}

/// Reduces `basis` to weak Popov form in place by repeated row
/// reductions, using the deterministic conflict schedule of
/// [`PolyMatrix::find_conflict`].
pub fn reduce_to_weak_popov(basis: &mut PolyMatrix, profile: &WeightProfile) -> ReductionStats {
    reduce_inner(basis, profile, None)
}

/// The modulo-reduced variant: after each row reduction, entries 1..=l of
/// the replaced row are reduced modulo the corresponding modulus. The
/// first entry is never touched.
pub fn reduce_to_weak_popov_mod(
    basis: &mut PolyMatrix,
    profile: &WeightProfile,
    moduli: &[Poly],
) -> ReductionStats {
    assert_eq!(
        moduli.len() + 1,
        basis.dim(),
        "need one modulus per trailing position"
    );
    reduce_inner(basis, profile, Some(moduli))
}

fn reduce_inner(
    basis: &mut PolyMatrix,
    profile: &WeightProfile,
    moduli: Option<&[Poly]>,
) -> ReductionStats {
    let ell = basis.dim() - 1;
    let bound = reduction_bound(basis.orthogonality_defect(profile), ell, profile.nu());
    let mut count = 0;
    while let Some((source, target)) = basis.find_conflict(profile) {
        basis.row_reduce_step(source, target, profile);
        if let Some(moduli) = moduli {
            reduce_row_mod(basis, target, moduli);
        }
        count += 1;
        assert!(
            count <= bound,
            "row reduction count {count} exceeded bound {bound}"
        );
    }
    ReductionStats {
        row_reductions: count,
        bound,
    }
}

fn reduce_row_mod(basis: &mut PolyMatrix, row: usize, moduli: &[Poly]) {
    let old = basis.row(row);
    let mut entries = Vec::with_capacity(old.len());
    entries.push(old.entry(0).clone());
    for (i, g) in moduli.iter().enumerate() {
        entries.push(old.entry(i + 1).rem(g));
    }
    basis.set_row(row, PolyVector::new(entries));
}
