//! The shift-register problem model: validation and normalization, the
//! module basis, the solution predicate, extraction of a minimal solution
//! from a weak Popov basis, and the solver dispatch.
//!
//! An instance asks for a lowest-degree `lambda` such that for every i,
//! `lambda * S_i = omega_i (mod G_i)` with
//! `nu*deg lambda + w_0 > nu*deg omega_i + w_i`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::alekhnovich;
use crate::demand;
use crate::ff::{Degree, Field, Poly};
use crate::ms::{self, ReductionStats};
use crate::polymat::{PolyMatrix, PolyVector, WeightProfile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    NoSequences,
    LengthMismatch {
        sequences: usize,
        moduli: usize,
        profile: usize,
    },
    ConstantModulus(usize),
    FieldMismatch,
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::NoSequences => write!(f, "instance needs at least one sequence"),
            InstanceError::LengthMismatch {
                sequences,
                moduli,
                profile,
            } => write!(
                f,
                "length mismatch: {sequences} sequences, {moduli} moduli, profile of {profile}"
            ),
            InstanceError::ConstantModulus(i) => {
                write!(f, "modulus {i} must have degree at least 1")
            }
            InstanceError::FieldMismatch => write!(f, "polynomials from different fields"),
        }
    }
}

impl std::error::Error for InstanceError {}

/// A validated, normalized problem instance. Sequences are stored reduced
/// modulo their moduli; that admits exactly the same solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MgLfsrInstance {
    field: Field,
    sequences: Vec<Poly>,
    moduli: Vec<Poly>,
    profile: WeightProfile,
}

/// A solution vector `(lambda, omega_1..omega_l)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub lambda: Poly,
    pub omegas: Vec<Poly>,
}

impl Solution {
    pub fn as_vector(&self) -> PolyVector {
        let mut entries = Vec::with_capacity(self.omegas.len() + 1);
        entries.push(self.lambda.clone());
        entries.extend(self.omegas.iter().cloned());
        PolyVector::new(entries)
    }

    /// Degree of the connection polynomial.
    pub fn degree(&self) -> Degree {
        self.lambda.degree()
    }
}

/// Solver selection for [`MgLfsrInstance::solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ms,
    MsMod,
    Alekhnovich,
    Demand,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Ms,
        Algorithm::MsMod,
        Algorithm::Alekhnovich,
        Algorithm::Demand,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ms => "ms",
            Algorithm::MsMod => "ms_mod",
            Algorithm::Alekhnovich => "alekhnovich",
            Algorithm::Demand => "demand",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Algorithm, String> {
        match s {
            "ms" => Ok(Algorithm::Ms),
            "ms_mod" => Ok(Algorithm::MsMod),
            "alekhnovich" => Ok(Algorithm::Alekhnovich),
            "demand" => Ok(Algorithm::Demand),
            other => Err(format!(
                "unknown algorithm `{other}` (expected ms, ms_mod, alekhnovich or demand)"
            )),
        }
    }
}

impl MgLfsrInstance {
    /// Validates and normalizes an instance. Sequences are replaced by
    /// their remainders modulo the corresponding modulus.
    pub fn new(
        field: Field,
        sequences: Vec<Poly>,
        moduli: Vec<Poly>,
        profile: WeightProfile,
    ) -> Result<MgLfsrInstance, InstanceError> {
        if sequences.is_empty() {
            return Err(InstanceError::NoSequences);
        }
        if sequences.len() != moduli.len() || profile.len() != sequences.len() + 1 {
            return Err(InstanceError::LengthMismatch {
                sequences: sequences.len(),
                moduli: moduli.len(),
                profile: profile.len(),
            });
        }
        if sequences
            .iter()
            .chain(moduli.iter())
            .any(|p| p.field() != field)
        {
            return Err(InstanceError::FieldMismatch);
        }
        for (i, g) in moduli.iter().enumerate() {
            if g.degree() < Degree::Finite(1) {
                return Err(InstanceError::ConstantModulus(i + 1));
            }
        }
        let sequences = sequences
            .iter()
            .zip(&moduli)
            .map(|(s, g)| s.rem(g))
            .collect();
        Ok(MgLfsrInstance {
            field,
            sequences,
            moduli,
            profile,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of sequences.
    pub fn ell(&self) -> usize {
        self.sequences.len()
    }

    /// Sequence for vector position `i` (1-based, like the weights).
    pub fn sequence(&self, i: usize) -> &Poly {
        &self.sequences[i - 1]
    }

    pub fn sequences(&self) -> &[Poly] {
        &self.sequences
    }

    /// Modulus for vector position `i` (1-based).
    pub fn modulus(&self, i: usize) -> &Poly {
        &self.moduli[i - 1]
    }

    pub fn moduli(&self) -> &[Poly] {
        &self.moduli
    }

    pub fn profile(&self) -> &WeightProfile {
        &self.profile
    }

    /// The size parameter `max_i(deg G_i + w_i/nu)` as an exact rational,
    /// used for reporting and iteration bounds.
    pub fn m(&self) -> Ratio<u64> {
        let nu = self.profile.nu() as u64;
        (1..=self.ell())
            .map(|i| {
                let dg = self.modulus(i).degree().finite().unwrap() as u64;
                let w = self.profile.weight(i) as u64;
                Ratio::new(dg * nu + w, nu)
            })
            .max()
            .unwrap()
    }

    /// Orthogonality defect of the weighted module basis, read off the
    /// triangular structure: `max(0, max_i(nu*deg S_i + w_i) - w_0)`.
    pub fn orthogonality_defect(&self) -> usize {
        let w0 = self.profile.weight(0);
        let top = (1..=self.ell())
            .map(|i| self.profile.entry_degree(i, self.sequence(i)))
            .max()
            .unwrap();
        match top {
            Degree::NegInf => 0,
            Degree::Finite(d) => d.saturating_sub(w0),
        }
    }

    /// Returns `(1, S_1..S_l)` when that vector already satisfies the
    /// strict degree inequalities, i.e. when `w_0 > nu*deg S_i + w_i` for
    /// every i (in particular when all sequences vanish).
    pub fn has_trivial_solution(&self) -> Option<Solution> {
        let w0 = Degree::Finite(self.profile.weight(0));
        let trivial = (1..=self.ell()).all(|i| self.profile.entry_degree(i, self.sequence(i)) < w0);
        trivial.then(|| Solution {
            lambda: Poly::one(self.field),
            omegas: self.sequences.clone(),
        })
    }

    /// The module basis: row 0 is `(1, S_1..S_l)`, row i is `G_i * e_i`.
    pub fn build_basis(&self) -> PolyMatrix {
        let n = self.ell() + 1;
        let f = self.field;
        let mut rows = Vec::with_capacity(n);
        let mut first = Vec::with_capacity(n);
        first.push(Poly::one(f));
        first.extend(self.sequences.iter().cloned());
        rows.push(PolyVector::new(first));
        for i in 1..n {
            let mut entries = vec![Poly::zero(f); n];
            entries[i] = self.moduli[i - 1].clone();
            rows.push(PolyVector::new(entries));
        }
        PolyMatrix::from_rows(rows)
    }

    /// Membership in the instance module: `v_0 * S_i = v_i (mod G_i)` for
    /// every i.
    pub fn is_member(&self, v: &PolyVector) -> bool {
        if v.len() != self.ell() + 1 {
            return false;
        }
        (1..=self.ell()).all(|i| {
            v.entry(0)
                .mul(self.sequence(i))
                .sub(v.entry(i))
                .rem(self.modulus(i))
                .is_zero()
        })
    }

    /// The solution predicate: membership, nonzero first entry, and
    /// weighted leading position 0 (equivalently the strict degree
    /// inequalities of the problem statement).
    pub fn is_solution(&self, v: &PolyVector) -> bool {
        if v.is_zero() || v.entry(0).is_zero() {
            return false;
        }
        self.is_member(v) && v.phi_leading_position(&self.profile) == 0
    }

    /// Pulls the unique leading-position-0 row out of a weak Popov basis
    /// and rescales it so lambda is monic.
    ///
    /// Panics when no such row exists, which cannot happen for a full-rank
    /// weak Popov basis and therefore signals a bug.
    pub fn extract_minimal(&self, basis: &PolyMatrix) -> Solution {
        let row = basis
            .rows()
            .iter()
            .find(|r| r.phi_leading_position(&self.profile) == 0)
            .expect("weak Popov basis without a leading-position-0 row");
        let scaled = row.scale(self.field.inv(row.entry(0).leading_coeff()));
        Solution {
            lambda: scaled.entry(0).clone(),
            omegas: (1..=self.ell()).map(|i| scaled.entry(i).clone()).collect(),
        }
    }

    /// Solves the instance with the chosen algorithm, short-circuiting
    /// through the trivial solution when it applies.
    pub fn solve(&self, algorithm: Algorithm) -> Solution {
        self.solve_with_stats(algorithm).0
    }

    /// As [`solve`](Self::solve), also returning the row-reduction counter
    /// and its bound.
    pub fn solve_with_stats(&self, algorithm: Algorithm) -> (Solution, ReductionStats) {
        let bound = ms::reduction_bound(self.orthogonality_defect(), self.ell(), self.profile.nu());
        if let Some(sol) = self.has_trivial_solution() {
            return (
                sol,
                ReductionStats {
                    row_reductions: 0,
                    bound,
                },
            );
        }
        match algorithm {
            Algorithm::Ms => {
                let mut basis = self.build_basis();
                let stats = ms::reduce_to_weak_popov(&mut basis, &self.profile);
                (self.extract_minimal(&basis), stats)
            }
            Algorithm::MsMod => {
                let mut basis = self.build_basis();
                let stats = ms::reduce_to_weak_popov_mod(&mut basis, &self.profile, &self.moduli);
                (self.extract_minimal(&basis), stats)
            }
            Algorithm::Alekhnovich => {
                let (basis, reductions) =
                    alekhnovich::reduce_full_counted(self.build_basis(), &self.profile);
                (
                    self.extract_minimal(&basis),
                    ReductionStats {
                        row_reductions: reductions,
                        bound,
                    },
                )
            }
            Algorithm::Demand => {
                let (lambda, reductions) = demand::demand_solve_counted(self);
                let lambda = lambda.monic();
                let omegas = (1..=self.ell())
                    .map(|i| lambda.mul(self.sequence(i)).rem(self.modulus(i)))
                    .collect();
                (
                    Solution { lambda, omegas },
                    ReductionStats {
                        row_reductions: reductions,
                        bound,
                    },
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Parses the line-oriented instance format:
///
/// ```text
/// p <prime>
/// ell <l>
/// nu <nu>
/// w <w_0> ... <w_l>
/// S <i> <coeffs ascending>   (l lines, any order with G)
/// G <i> <coeffs ascending>   (l lines)
/// ```
///
/// `#` starts a comment; coefficients are decimal residues.
pub fn parse_instance(text: &str) -> Result<MgLfsrInstance, ParseError> {
    let mut field: Option<Field> = None;
    let mut ell: Option<usize> = None;
    let mut nu: Option<usize> = None;
    let mut weights: Option<Vec<usize>> = None;
    let mut seqs: Vec<Option<Poly>> = Vec::new();
    let mut mods: Vec<Option<Poly>> = Vec::new();
    let mut total_lines = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        total_lines = lineno;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let key = tokens.next().unwrap();
        let rest: Vec<&str> = tokens.collect();
        match key {
            "p" => {
                if field.is_some() {
                    return Err(err(lineno, "duplicate p line"));
                }
                let p: u64 = parse_int(&rest, 0, lineno, "prime modulus")?;
                field = Some(Field::new(p).map_err(|e| err(lineno, e.to_string()))?);
            }
            "ell" => {
                if ell.is_some() {
                    return Err(err(lineno, "duplicate ell line"));
                }
                let l: usize = parse_int(&rest, 0, lineno, "ell")?;
                if l == 0 {
                    return Err(err(lineno, "ell must be at least 1"));
                }
                ell = Some(l);
                seqs = vec![None; l];
                mods = vec![None; l];
            }
            "nu" => {
                if nu.is_some() {
                    return Err(err(lineno, "duplicate nu line"));
                }
                let n: usize = parse_int(&rest, 0, lineno, "nu")?;
                if n == 0 {
                    return Err(err(lineno, "nu must be at least 1"));
                }
                nu = Some(n);
            }
            "w" => {
                if weights.is_some() {
                    return Err(err(lineno, "duplicate w line"));
                }
                let l = ell.ok_or_else(|| err(lineno, "w line before ell line"))?;
                if rest.len() != l + 1 {
                    return Err(err(
                        lineno,
                        format!("expected {} weights, found {}", l + 1, rest.len()),
                    ));
                }
                let mut ws = Vec::with_capacity(l + 1);
                for tok in &rest {
                    ws.push(
                        tok.parse::<usize>()
                            .map_err(|_| err(lineno, format!("bad weight `{tok}`")))?,
                    );
                }
                weights = Some(ws);
            }
            "S" | "G" => {
                let f = field.ok_or_else(|| err(lineno, "S/G line before p line"))?;
                let l = ell.ok_or_else(|| err(lineno, "S/G line before ell line"))?;
                let i: usize = parse_int(&rest, 0, lineno, "index")?;
                if i == 0 || i > l {
                    return Err(err(lineno, format!("index {i} out of range 1..={l}")));
                }
                let mut coeffs = Vec::with_capacity(rest.len().saturating_sub(1));
                for tok in &rest[1..] {
                    coeffs.push(
                        tok.parse::<u64>()
                            .map_err(|_| err(lineno, format!("bad coefficient `{tok}`")))?,
                    );
                }
                let poly = Poly::new(f, coeffs);
                let slot = if key == "S" {
                    &mut seqs[i - 1]
                } else {
                    &mut mods[i - 1]
                };
                if slot.is_some() {
                    return Err(err(lineno, format!("duplicate {key} {i} line")));
                }
                if key == "G" && poly.degree() < Degree::Finite(1) {
                    return Err(err(lineno, format!("G {i} must have degree at least 1")));
                }
                *slot = Some(poly);
            }
            other => return Err(err(lineno, format!("unknown line key `{other}`"))),
        }
    }

    let eof = total_lines + 1;
    let field = field.ok_or_else(|| err(eof, "missing p line"))?;
    let ell = ell.ok_or_else(|| err(eof, "missing ell line"))?;
    let nu = nu.ok_or_else(|| err(eof, "missing nu line"))?;
    let weights = weights.ok_or_else(|| err(eof, "missing w line"))?;
    let mut sequences = Vec::with_capacity(ell);
    let mut moduli = Vec::with_capacity(ell);
    for i in 1..=ell {
        sequences.push(
            seqs[i - 1]
                .take()
                .ok_or_else(|| err(eof, format!("missing S {i} line")))?,
        );
        moduli.push(
            mods[i - 1]
                .take()
                .ok_or_else(|| err(eof, format!("missing G {i} line")))?,
        );
    }
    let profile = WeightProfile::new(nu, weights).map_err(|e| err(eof, e.to_string()))?;
    MgLfsrInstance::new(field, sequences, moduli, profile).map_err(|e| err(eof, e.to_string()))
}

fn parse_int<T: FromStr>(
    rest: &[&str],
    pos: usize,
    lineno: usize,
    what: &str,
) -> Result<T, ParseError> {
    let tok = rest
        .get(pos)
        .ok_or_else(|| err(lineno, format!("missing {what}")))?;
    tok.parse::<T>()
        .map_err(|_| err(lineno, format!("bad {what} `{tok}`")))
}

/// Renders an instance in the format accepted by [`parse_instance`].
/// Sequences print in their normalized (reduced) form.
pub fn format_instance(inst: &MgLfsrInstance) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "p {}", inst.field().modulus()).unwrap();
    writeln!(out, "ell {}", inst.ell()).unwrap();
    writeln!(out, "nu {}", inst.profile().nu()).unwrap();
    let ws: Vec<String> = inst
        .profile()
        .weights()
        .iter()
        .map(|w| w.to_string())
        .collect();
    writeln!(out, "w {}", ws.join(" ")).unwrap();
    for i in 1..=inst.ell() {
        writeln!(out, "S {} {}", i, inst.sequence(i)).unwrap();
    }
    for i in 1..=inst.ell() {
        writeln!(out, "G {} {}", i, inst.modulus(i)).unwrap();
    }
    out
}

/// Renders a solution as `lambda <coeffs>` followed by one `omega`
/// line per sequence.
pub fn format_solution(sol: &Solution) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "lambda {}", sol.lambda).unwrap();
    for (i, omega) in sol.omegas.iter().enumerate() {
        writeln!(out, "omega {} {}", i + 1, omega).unwrap();
    }
    out
}
