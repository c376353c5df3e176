//! Vectors and square matrices over F[x] interpreted under a weight
//! profile, with the leading-position calculus, the value function, the
//! weak Popov predicate, orthogonality defect, and the elementary row
//! reduction.
//!
//! A weight profile (nu, w_0..w_l) assigns entry j the weighted degree
//! `nu * deg + w_j`. All algorithms run on plain polynomials with this
//! bookkeeping; the weighted shift in a row reduction is always an exact
//! multiple of nu because both entries share a position.

use std::fmt;

use crate::ff::{Degree, Field, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileError {
    ZeroNu,
    Empty,
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::ZeroNu => write!(f, "nu must be at least 1"),
            ProfileError::Empty => write!(f, "weight profile needs at least one position"),
        }
    }
}

impl std::error::Error for ProfileError {}

/// The weight data (nu, w_0..w_l) of an instance; position 0 weights the
/// connection polynomial, positions 1..=l weight the sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    nu: usize,
    weights: Vec<usize>,
}

impl WeightProfile {
    pub fn new(nu: usize, weights: Vec<usize>) -> Result<WeightProfile, ProfileError> {
        if nu == 0 {
            return Err(ProfileError::ZeroNu);
        }
        if weights.is_empty() {
            return Err(ProfileError::Empty);
        }
        Ok(WeightProfile { nu, weights })
    }

    /// The unweighted profile: nu = 1, all weights zero.
    pub fn trivial(len: usize) -> WeightProfile {
        WeightProfile::new(1, vec![0; len]).expect("trivial profile")
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of sequence positions (profile length minus one).
    pub fn ell(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weight(&self, position: usize) -> usize {
        self.weights[position]
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Weighted degree `nu * deg p + w_position` of one entry.
    pub fn entry_degree(&self, position: usize, p: &Poly) -> Degree {
        p.degree().affine(self.nu, self.weights[position])
    }
}

/// A fixed-length vector over F[x].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVector {
    entries: Vec<Poly>,
}

impl PolyVector {
    pub fn new(entries: Vec<Poly>) -> PolyVector {
        assert!(!entries.is_empty(), "empty vector");
        let f = entries[0].field();
        assert!(
            entries.iter().all(|e| e.field() == f),
            "mixed fields in vector"
        );
        PolyVector { entries }
    }

    pub fn zero(field: Field, len: usize) -> PolyVector {
        PolyVector::new(vec![Poly::zero(field); len])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entry(&self, j: usize) -> &Poly {
        &self.entries[j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn field(&self) -> Field {
        self.entries[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    fn check_profile(&self, profile: &WeightProfile) {
        assert!(
            profile.len() == self.entries.len(),
            "profile length {} does not match vector length {}",
            profile.len(),
            self.entries.len()
        );
    }

    /// Weighted degree of the vector: the maximum entry weighted degree,
    /// minus infinity for the zero vector.
    pub fn phi_degree(&self, profile: &WeightProfile) -> Degree {
        self.check_profile(profile);
        self.entries
            .iter()
            .enumerate()
            .map(|(j, p)| profile.entry_degree(j, p))
            .max()
            .unwrap()
    }

    /// Rightmost position attaining the weighted degree.
    ///
    /// Panics on the zero vector.
    pub fn phi_leading_position(&self, profile: &WeightProfile) -> usize {
        let d = self.phi_degree(profile);
        assert!(d.is_finite(), "leading position of zero vector");
        self.entries
            .iter()
            .enumerate()
            .rev()
            .find(|(j, p)| profile.entry_degree(*j, p) == d)
            .map(|(j, _)| j)
            .unwrap()
    }

    /// The value function `(l+1) * phi_degree + leading_position`.
    ///
    /// Panics on the zero vector.
    pub fn value(&self, profile: &WeightProfile) -> usize {
        let d = self
            .phi_degree(profile)
            .finite()
            .expect("value of zero vector");
        self.len() * d + self.phi_leading_position(profile)
    }

    pub fn scale(&self, c: u64) -> PolyVector {
        PolyVector::new(self.entries.iter().map(|p| p.scale(c)).collect())
    }

    pub fn add(&self, other: &PolyVector) -> PolyVector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        PolyVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    /// `self - c * x^k * other`, entry-wise.
    pub fn sub_scaled_shift(&self, other: &PolyVector, c: u64, k: usize) -> PolyVector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        PolyVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub_scaled_shift(b, c, k))
                .collect(),
        )
    }
}

/// A square matrix over F[x]; rows are [`PolyVector`]s of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: Vec<PolyVector>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<PolyVector>) -> PolyMatrix {
        assert!(!rows.is_empty(), "empty matrix");
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "matrix must be square ({n} rows)"
        );
        let f = rows[0].field();
        assert!(
            rows.iter().all(|r| r.field() == f),
            "mixed fields in matrix"
        );
        PolyMatrix { rows }
    }

    pub fn identity(field: Field, n: usize) -> PolyMatrix {
        let rows = (0..n)
            .map(|i| {
                let mut entries = vec![Poly::zero(field); n];
                entries[i] = Poly::one(field);
                PolyVector::new(entries)
            })
            .collect();
        PolyMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &PolyVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[PolyVector] {
        &self.rows
    }

    pub fn set_row(&mut self, i: usize, row: PolyVector) {
        assert_eq!(row.len(), self.dim(), "row length mismatch");
        self.rows[i] = row;
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        self.rows.swap(i, j);
    }

    pub fn field(&self) -> Field {
        self.rows[0].field()
    }

    /// Largest plain degree over all entries; minus infinity for the zero
    /// matrix. Exposed for inspection only.
    pub fn maxdeg(&self) -> Degree {
        self.rows
            .iter()
            .flat_map(|r| r.entries().iter())
            .map(Poly::degree)
            .max()
            .unwrap()
    }

    /// Largest weighted degree over all entries.
    pub fn maxdeg_phi(&self, profile: &WeightProfile) -> Degree {
        self.rows
            .iter()
            .map(|r| {
                if r.is_zero() {
                    Degree::NegInf
                } else {
                    r.phi_degree(profile)
                }
            })
            .max()
            .unwrap()
    }

    /// Sum of row weighted degrees. Panics if any row is zero.
    pub fn phi_degree_sum(&self, profile: &WeightProfile) -> usize {
        self.rows
            .iter()
            .map(|r| {
                r.phi_degree(profile)
                    .finite()
                    .expect("zero row in degree sum")
            })
            .sum()
    }

    /// True when all rows have pairwise-distinct weighted leading
    /// positions. Panics on a zero row: the bases handled here are free of
    /// full rank, so a zero row indicates a bug upstream.
    pub fn is_weak_popov(&self, profile: &WeightProfile) -> bool {
        let mut seen = vec![false; self.dim()];
        for row in &self.rows {
            assert!(!row.is_zero(), "zero row in weak Popov check");
            let lp = row.phi_leading_position(profile);
            if seen[lp] {
                return false;
            }
            seen[lp] = true;
        }
        true
    }

    /// Deterministic conflict selection: scan positions left to right,
    /// take the two lowest row indices sharing that leading position, and
    /// order the pair so the first row has the smaller (degree, index).
    /// Returns `None` exactly when the matrix is in weak Popov form.
    pub fn find_conflict(&self, profile: &WeightProfile) -> Option<(usize, usize)> {
        let mut first_at: Vec<Option<usize>> = vec![None; self.dim()];
        let mut best: Option<(usize, usize)> = None;
        for (idx, row) in self.rows.iter().enumerate() {
            assert!(!row.is_zero(), "zero row in conflict scan");
            let lp = row.phi_leading_position(profile);
            match first_at[lp] {
                None => first_at[lp] = Some(idx),
                Some(prev) => {
                    if best.is_none_or(|(h, _)| lp < h) {
                        best = Some((lp, prev * self.dim() + idx));
                    }
                    // Keep the earliest partner for this position.
                }
            }
        }
        let (_, packed) = best?;
        let (a, b) = (packed / self.dim(), packed % self.dim());
        let da = self.rows[a].phi_degree(profile);
        let db = self.rows[b].phi_degree(profile);
        // Equal degrees reduce the larger row index.
        if da <= db {
            Some((a, b))
        } else {
            Some((b, a))
        }
    }

    /// One elementary row reduction: replaces row `target` with
    /// `row_target - alpha * x^shift * row_source`, cancelling the leading
    /// term of the shared leading position.
    ///
    /// Panics unless `source != target`, both rows lead at the same
    /// position, and the source degree does not exceed the target degree.
    pub fn row_reduce_step(&mut self, source: usize, target: usize, profile: &WeightProfile) {
        assert!(source != target, "row reduction needs two distinct rows");
        let h = self.rows[source].phi_leading_position(profile);
        assert_eq!(
            h,
            self.rows[target].phi_leading_position(profile),
            "rows do not share a leading position"
        );
        assert!(
            self.rows[source].phi_degree(profile) <= self.rows[target].phi_degree(profile),
            "source row degree exceeds target row degree"
        );
        let (alpha, shift) = reduction_coefficients(&self.rows[source], &self.rows[target], h);
        let reduced = self.rows[target].sub_scaled_shift(&self.rows[source], alpha, shift);
        self.rows[target] = reduced;
    }

    /// Ring product over F[x].
    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.dim(), other.dim(), "matrix size mismatch");
        let n = self.dim();
        let f = self.field();
        let rows = (0..n)
            .map(|i| {
                let entries = (0..n)
                    .map(|j| {
                        let mut acc = Poly::zero(f);
                        for k in 0..n {
                            let term = self.rows[i].entry(k).mul(other.rows[k].entry(j));
                            acc = acc.add(&term);
                        }
                        acc
                    })
                    .collect();
                PolyVector::new(entries)
            })
            .collect();
        PolyMatrix { rows }
    }

    /// Applies the matrix to a vector: `self * v` as a column.
    pub fn apply(&self, v: &PolyVector) -> PolyVector {
        assert_eq!(self.dim(), v.len(), "dimension mismatch");
        let f = self.field();
        PolyVector::new(
            (0..self.dim())
                .map(|i| {
                    let mut acc = Poly::zero(f);
                    for k in 0..self.dim() {
                        acc = acc.add(&self.rows[i].entry(k).mul(v.entry(k)));
                    }
                    acc
                })
                .collect(),
        )
    }

    fn is_upper_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.entries()[..i].iter().all(Poly::is_zero))
    }

    /// Exact determinant by cofactor expansion, with a shortcut for the
    /// upper-triangular bases this library constructs. Exponential in the
    /// dimension; fine for the small matrices of this problem family.
    pub fn determinant(&self) -> Poly {
        if self.is_upper_triangular() {
            let mut acc = Poly::one(self.field());
            for (i, r) in self.rows.iter().enumerate() {
                acc = acc.mul(r.entry(i));
            }
            return acc;
        }
        determinant_cofactor(&self.rows, &(0..self.dim()).collect::<Vec<_>>())
    }

    /// Orthogonality defect of the weighted matrix: sum of row weighted
    /// degrees minus the weighted determinant degree. Zero exactly in weak
    /// Popov form; panics on singular input.
    pub fn orthogonality_defect(&self, profile: &WeightProfile) -> usize {
        let det = self.determinant();
        let det_deg = det
            .degree()
            .finite()
            .expect("orthogonality defect of singular matrix");
        let weight_sum: usize = profile.weights().iter().sum();
        let det_phi = profile.nu() * det_deg + weight_sum;
        let row_sum = self.phi_degree_sum(profile);
        assert!(
            row_sum >= det_phi,
            "row degree sum below determinant degree"
        );
        row_sum - det_phi
    }
}

fn determinant_cofactor(rows: &[PolyVector], cols: &[usize]) -> Poly {
    let f = rows[0].field();
    if cols.len() == 1 {
        return rows[rows.len() - cols.len()].entry(cols[0]).clone();
    }
    let row = &rows[rows.len() - cols.len()];
    let mut acc = Poly::zero(f);
    for (k, &c) in cols.iter().enumerate() {
        let cell = row.entry(c);
        if cell.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&other| other != c).collect();
        let minor = determinant_cofactor(rows, &rest);
        let term = cell.mul(&minor);
        if k % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}

/// The scalar and shift `(alpha, delta)` that cancel the leading term of
/// the target's entry at position `h` against the source's.
pub(crate) fn reduction_coefficients(
    source: &PolyVector,
    target: &PolyVector,
    h: usize,
) -> (u64, usize) {
    let f = source.field();
    let src = source.entry(h);
    let tgt = target.entry(h);
    let ds = src.degree().finite().expect("zero source leading entry");
    let dt = tgt.degree().finite().expect("zero target leading entry");
    debug_assert!(ds <= dt);
    let alpha = f.div(tgt.leading_coeff(), src.leading_coeff());
    (alpha, dt - ds)
}
