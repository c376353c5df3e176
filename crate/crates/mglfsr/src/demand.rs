//! The demand-driven solver: tracks only the first column of the basis
//! and asks for other coefficients when a probe needs them, following a
//! strictly decreasing schedule of (degree, position) slots.
//!
//! The internal representation is unweighted: every tracked weighted
//! degree is congruent to its position's weight modulo nu, so the
//! divisions by nu in shifts are exact and the weighted initial entry
//! never has to be materialised.

use crate::ff::{Degree, Poly};
use crate::instance::MgLfsrInstance;
use crate::polymat::{PolyMatrix, PolyVector, WeightProfile};

/// A modulus shape picked once per position; monomial and few-term moduli
/// get cheaper coefficient queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ModulusShape {
    /// `c * x^m`: reduction is free, one convolution sum per query.
    Monomial(usize),
    /// At most [`SPARSE_TERM_LIMIT`] nonzero terms: long division that
    /// only touches the nonzero divisor terms.
    Sparse,
    /// Anything else: full multiply and remainder.
    Dense,
}

const SPARSE_TERM_LIMIT: usize = 4;

fn classify(g: &Poly) -> ModulusShape {
    let terms = g.coeffs().iter().filter(|&&c| c != 0).count();
    if terms == 1 {
        ModulusShape::Monomial(g.degree().finite().expect("modulus is nonzero"))
    } else if terms <= SPARSE_TERM_LIMIT {
        ModulusShape::Sparse
    } else {
        ModulusShape::Dense
    }
}

/// Remainder by a divisor with few nonzero terms; only those terms are
/// touched per elimination step.
fn rem_sparse(a: &Poly, g: &Poly) -> Poly {
    let f = a.field();
    let dg = g.degree().finite().expect("sparse divisor is nonzero");
    let Some(da) = a.degree().finite() else {
        return Poly::zero(f);
    };
    if da < dg {
        return a.clone();
    }
    let terms: Vec<(usize, u64)> = g
        .coeffs()
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(d, &c)| (d, c))
        .collect();
    let lead_inv = f.inv(g.leading_coeff());
    let mut rem: Vec<u64> = a.coeffs().to_vec();
    for top in (dg..=da).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        let q = f.mul(c, lead_inv);
        for &(d, gc) in &terms {
            rem[top - dg + d] = f.sub(rem[top - dg + d], f.mul(q, gc));
        }
    }
    rem.truncate(dg);
    Poly::new(f, rem)
}

/// Coefficient of `x^{(theta - w_pos)/nu}` in `lambda0 * S_pos mod G_pos`,
/// routed through the shape-appropriate path.
///
/// Panics when `theta` is not congruent to `w_pos` modulo nu.
pub fn coefficient_query(inst: &MgLfsrInstance, lambda0: &Poly, pos: usize, theta: usize) -> u64 {
    let shape = classify(inst.modulus(pos));
    query_with_shape(inst, lambda0, pos, theta, shape)
}

/// The general path: full multiply, dense remainder, then one
/// coefficient. Kept as the reference for the shaped paths.
pub fn coefficient_query_general(
    inst: &MgLfsrInstance,
    lambda0: &Poly,
    pos: usize,
    theta: usize,
) -> u64 {
    let Some(d) = unweighted_probe(inst.profile(), pos, theta) else {
        return 0;
    };
    lambda0
        .mul(inst.sequence(pos))
        .rem(inst.modulus(pos))
        .coeff(d)
}

/// Maps a weighted probe degree to the plain one. Degrees below the
/// position weight carry no coefficient at all; a residue mismatch is a
/// caller bug.
fn unweighted_probe(profile: &WeightProfile, pos: usize, theta: usize) -> Option<usize> {
    let w = profile.weight(pos);
    let nu = profile.nu();
    assert!(
        theta % nu == w % nu,
        "probe degree {theta} not admissible at position {pos}"
    );
    if theta < w {
        None
    } else {
        Some((theta - w) / nu)
    }
}

fn query_with_shape(
    inst: &MgLfsrInstance,
    lambda0: &Poly,
    pos: usize,
    theta: usize,
    shape: ModulusShape,
) -> u64 {
    let Some(d) = unweighted_probe(inst.profile(), pos, theta) else {
        return 0;
    };
    let s = inst.sequence(pos);
    match shape {
        ModulusShape::Monomial(m) => {
            if d >= m {
                return 0;
            }
            // Coefficient d of the product; the reduction cannot reach it.
            let f = inst.field();
            let lc = lambda0.coeffs();
            let sc = s.coeffs();
            let mut acc = 0;
            let lo = (d + 1).saturating_sub(sc.len());
            let hi = d.min(lc.len().saturating_sub(1));
            for j in lo..=hi.min(d) {
                if j < lc.len() && d - j < sc.len() {
                    acc = f.add(acc, f.mul(lc[j], sc[d - j]));
                }
            }
            acc
        }
        ModulusShape::Sparse => rem_sparse(&lambda0.mul(s), inst.modulus(pos)).coeff(d),
        ModulusShape::Dense => coefficient_query_general(inst, lambda0, pos, theta),
    }
}

/// The greatest admissible slot strictly below `(theta, pos)` in value
/// order: maximise `(l+1)*theta' + pos'` subject to being below the
/// current value and `theta' = w_{pos'} (mod nu)`. Returns `None` when no
/// admissible predecessor exists.
pub fn previous(theta: usize, pos: usize, profile: &WeightProfile) -> Option<(usize, usize)> {
    let n = profile.len();
    let nu = profile.nu();
    let cur = n * theta + pos;
    if cur == 0 {
        return None;
    }
    let target = cur - 1;
    let mut best: Option<(usize, usize, usize)> = None;
    for q in 0..n {
        if q > target {
            continue;
        }
        let r = profile.weight(q) % nu;
        let cap = (target - q) / n;
        if cap < r {
            continue;
        }
        let tq = cap - ((cap - r) % nu);
        let val = n * tq + q;
        if best.is_none_or(|(bv, _, _)| val > bv) {
            best = Some((val, tq, q));
        }
    }
    best.map(|(_, t, q)| (t, q))
}

/// Snapshot of the solver state, exposed to observers.
#[derive(Debug, Clone)]
pub struct DemandState {
    lambdas: Vec<Poly>,
    lead: Vec<(u64, usize)>,
    cursor: (usize, usize),
}

impl DemandState {
    /// First-column entries; index 0 is the working connection polynomial.
    pub fn lambdas(&self) -> &[Poly] {
        &self.lambdas
    }

    /// Tracked leading monomial `(coefficient, weighted degree)` for
    /// position `i >= 1`.
    pub fn lead(&self, i: usize) -> (u64, usize) {
        self.lead[i - 1]
    }

    pub fn cursor(&self) -> (usize, usize) {
        self.cursor
    }
}

/// What one loop iteration did: the probed slot, the coefficient found
/// there, and whether a swap and a reduction happened.
#[derive(Debug, Clone, Copy)]
pub struct Probe {
    pub theta: usize,
    pub pos: usize,
    pub alpha: u64,
    pub swapped: bool,
    pub reduced: bool,
}

/// Hook called after every loop iteration, with the post-update state and
/// the probe that drove it.
pub trait DemandObserver {
    fn after_iteration(&mut self, state: &DemandState, probe: &Probe);
}

struct NoopObserver;

impl DemandObserver for NoopObserver {
    fn after_iteration(&mut self, _state: &DemandState, _probe: &Probe) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DemandStats {
    /// Iterations where a nonzero probe triggered an update; each one
    /// corresponds to one row reduction of the reference reducer.
    pub reductions: usize,
    /// Total loop iterations (cursor slots visited).
    pub iterations: usize,
}

/// Runs the demand-driven solver and returns an unnormalized minimal
/// connection polynomial.
pub fn demand_solve(inst: &MgLfsrInstance) -> Poly {
    demand_solve_observed(inst, &mut NoopObserver).0
}

/// As [`demand_solve`], also reporting the reduction count.
pub fn demand_solve_counted(inst: &MgLfsrInstance) -> (Poly, usize) {
    let (lambda, stats) = demand_solve_observed(inst, &mut NoopObserver);
    (lambda, stats.reductions)
}

/// The full loop with an observer hook.
pub fn demand_solve_observed(
    inst: &MgLfsrInstance,
    observer: &mut dyn DemandObserver,
) -> (Poly, DemandStats) {
    let field = inst.field();
    let profile = inst.profile();
    let nu = profile.nu();
    let ell = inst.ell();

    // Initial slot: degree and leading position of (1, S_1, .., S_l)
    // under the weight profile.
    let mut first = Vec::with_capacity(ell + 1);
    first.push(Poly::one(field));
    first.extend(inst.sequences().iter().cloned());
    let initial = PolyVector::new(first);
    let start_pos = initial.phi_leading_position(profile);
    if start_pos == 0 {
        // The trivial solution applies; nothing to scan.
        return (Poly::one(field), DemandStats::default());
    }
    let start_theta = initial.phi_degree(profile).finite().unwrap();

    let shapes: Vec<ModulusShape> = (1..=ell).map(|i| classify(inst.modulus(i))).collect();
    let mut state = DemandState {
        lambdas: {
            let mut l = vec![Poly::zero(field); ell + 1];
            l[0] = Poly::one(field);
            l
        },
        lead: (1..=ell)
            .map(|i| {
                let g = inst.modulus(i);
                let dg = g.degree().finite().unwrap();
                (g.leading_coeff(), nu * dg + profile.weight(i))
            })
            .collect(),
        cursor: (start_theta, start_pos),
    };
    let mut stats = DemandStats::default();

    loop {
        let (theta, pos) = state.cursor;
        let lambda_wdeg = profile.entry_degree(0, &state.lambdas[0]);
        if lambda_wdeg > Degree::Finite(theta) {
            break;
        }

        let alpha = query_with_shape(inst, &state.lambdas[0], pos, theta, shapes[pos - 1]);
        let reduced = alpha != 0;
        let mut swapped = false;
        let mut cur_theta = theta;
        if reduced {
            let (lead_a, lead_t) = state.lead[pos - 1];
            let mut cur_alpha = alpha;
            if cur_theta < lead_t {
                state.lambdas.swap(0, pos);
                state.lead[pos - 1] = (cur_alpha, cur_theta);
                cur_alpha = lead_a;
                cur_theta = lead_t;
                swapped = true;
            }
            let (pivot_a, pivot_t) = state.lead[pos - 1];
            let shift = (cur_theta - pivot_t) / nu;
            let scale = field.div(cur_alpha, pivot_a);
            let source = state.lambdas[pos].clone();
            state.lambdas[0] = state.lambdas[0].sub_scaled_shift(&source, scale, shift);
            assert!(
                !state.lambdas[0].is_zero(),
                "working connection polynomial vanished"
            );
            stats.reductions += 1;
        }
        state.cursor = (cur_theta, pos);
        stats.iterations += 1;
        observer.after_iteration(
            &state,
            &Probe {
                theta,
                pos,
                alpha,
                swapped,
                reduced,
            },
        );

        let Some(mut next) = previous(cur_theta, pos, profile) else {
            break;
        };
        if next.1 == 0 {
            // Position 0 is never probed; skip past it.
            match previous(next.0, next.1, profile) {
                Some(n) => next = n,
                None => break,
            }
        }
        state.cursor = next;
    }

    (state.lambdas[0].clone(), stats)
}

/// Mirrors a demand run against the modulo-reduced reference reducer and
/// asserts the loop invariants at every iteration: each nonzero probe is
/// one genuine row reduction, the tracked column equals the matrix's
/// first column, the tracked leading monomials match the trailing rows,
/// and the working row's value never exceeds the cursor value.
pub struct ShadowChecker<'a> {
    inst: &'a MgLfsrInstance,
    basis: PolyMatrix,
    reductions: usize,
}

impl<'a> ShadowChecker<'a> {
    pub fn new(inst: &'a MgLfsrInstance) -> ShadowChecker<'a> {
        ShadowChecker {
            inst,
            basis: inst.build_basis(),
            reductions: 0,
        }
    }

    pub fn reductions(&self) -> usize {
        self.reductions
    }

    fn mod_reduce_row(&mut self, row: usize) {
        let old = self.basis.row(row);
        let mut entries = vec![old.entry(0).clone()];
        for i in 1..=self.inst.ell() {
            entries.push(old.entry(i).rem(self.inst.modulus(i)));
        }
        self.basis.set_row(row, PolyVector::new(entries));
    }

    fn finish(&self, lambda: &Poly) {
        let profile = self.inst.profile();
        assert!(self.basis.is_weak_popov(profile), "shadow not weak Popov");
        assert_eq!(
            self.basis.row(0).phi_leading_position(profile),
            0,
            "shadow working row does not lead at position 0"
        );
        assert_eq!(self.basis.row(0).entry(0), lambda, "shadow lambda mismatch");
    }
}

impl DemandObserver for ShadowChecker<'_> {
    fn after_iteration(&mut self, state: &DemandState, probe: &Probe) {
        let profile = self.inst.profile();
        let n = profile.len();
        let nu = profile.nu();

        // Invariant 4 on entry: val(row 0) <= val(cursor).
        let v0_value = self.basis.row(0).value(profile);
        assert!(
            v0_value <= n * probe.theta + probe.pos,
            "working row value {v0_value} above cursor"
        );

        // The probe must equal the true coefficient of the canonical
        // entry at the probed slot.
        let w = profile.weight(probe.pos);
        let expected = if probe.theta >= w && (probe.theta - w).is_multiple_of(nu) {
            self.basis
                .row(0)
                .entry(probe.pos)
                .coeff((probe.theta - w) / nu)
        } else {
            0
        };
        assert_eq!(probe.alpha, expected, "probe disagrees with shadow matrix");

        if probe.reduced {
            // Invariant 1: this iteration is one row reduction on (0, pos).
            assert_eq!(
                self.basis.row(0).phi_leading_position(profile),
                probe.pos,
                "conflict position mismatch"
            );
            assert_eq!(
                self.basis.row(probe.pos).phi_leading_position(profile),
                probe.pos,
                "trailing row lost its leading position"
            );
            let d0 = self.basis.row(0).phi_degree(profile);
            let dp = self.basis.row(probe.pos).phi_degree(profile);
            if probe.swapped {
                assert!(d0 < dp, "swap without a degree gap");
                self.basis.swap_rows(0, probe.pos);
            } else {
                assert!(dp <= d0, "missing swap");
            }
            self.basis.row_reduce_step(probe.pos, 0, profile);
            self.mod_reduce_row(0);
            self.reductions += 1;
        }

        // Invariant 2: tracked column equals the matrix first column.
        for (r, lambda) in state.lambdas().iter().enumerate() {
            assert_eq!(
                lambda,
                self.basis.row(r).entry(0),
                "first column mismatch at row {r}"
            );
        }

        // Invariant 3: tracked leading monomials match the trailing rows.
        for j in 1..=self.inst.ell() {
            let entry = self.basis.row(j).entry(j);
            let (a, t) = state.lead(j);
            assert_eq!(a, entry.leading_coeff(), "lead coefficient drift at {j}");
            assert_eq!(
                t,
                nu * entry.degree().finite().unwrap() + profile.weight(j),
                "lead degree drift at {j}"
            );
        }
    }
}

/// Runs the solver with the shadow checker attached; panics on any
/// invariant violation.
pub fn demand_solve_shadowed(inst: &MgLfsrInstance) -> (Poly, DemandStats) {
    let mut shadow = ShadowChecker::new(inst);
    let (lambda, stats) = demand_solve_observed(inst, &mut shadow);
    if stats.iterations > 0 {
        shadow.finish(&lambda);
        assert_eq!(shadow.reductions(), stats.reductions);
    }
    (lambda, stats)
}
