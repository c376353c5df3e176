//! Power-Gao decoding of (simple) generalised Reed-Solomon codes: the
//! received word is interpolated once, its powers feed a key-equation
//! instance with staircase weights, and the minimal connection polynomial
//! plays the error locator. A decode is only reported when the recovered
//! message re-encodes to within exactly `deg lambda` positions of the
//! received word, so wrong messages surface as failures, never as
//! miscorrections.

use std::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::ff::{Degree, Field, Poly};
use crate::instance::{Algorithm, MgLfsrInstance};
use crate::polymat::WeightProfile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RsError {
    BadDimensions { n: usize, k: usize, p: u64 },
    RepeatedPoint(u64),
    TooManyErrors { tau: usize, n: usize },
    WordLength { expected: usize, found: usize },
}

impl fmt::Display for RsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RsError::BadDimensions { n, k, p } => {
                write!(f, "need 1 <= k < n <= p, got n={n} k={k} p={p}")
            }
            RsError::RepeatedPoint(x) => write!(f, "repeated evaluation point {x}"),
            RsError::TooManyErrors { tau, n } => {
                write!(f, "cannot place {tau} errors in a word of length {n}")
            }
            RsError::WordLength { expected, found } => {
                write!(f, "expected word of length {expected}, found {found}")
            }
        }
    }
}

impl std::error::Error for RsError {}

/// An [n, k] evaluation code over GF(p) with pairwise-distinct evaluation
/// points and all column multipliers one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrsCode {
    field: Field,
    n: usize,
    k: usize,
    points: Vec<u64>,
}

impl GrsCode {
    pub fn new(field: Field, k: usize, points: Vec<u64>) -> Result<GrsCode, RsError> {
        let n = points.len();
        if k == 0 || k >= n || n as u64 > field.modulus() {
            return Err(RsError::BadDimensions {
                n,
                k,
                p: field.modulus(),
            });
        }
        let points: Vec<u64> = points.into_iter().map(|x| field.elem(x)).collect();
        for (i, &x) in points.iter().enumerate() {
            if points[i + 1..].contains(&x) {
                return Err(RsError::RepeatedPoint(x));
            }
        }
        Ok(GrsCode {
            field,
            n,
            k,
            points,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    /// Minimum distance `n - k + 1`.
    pub fn distance(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    /// Evaluates a message polynomial at every point.
    ///
    /// Panics when `deg f >= k`.
    pub fn encode(&self, f: &Poly) -> Vec<u64> {
        assert!(
            f.degree() < Degree::Finite(self.k),
            "message degree must be below {}",
            self.k
        );
        self.points.iter().map(|&x| f.eval(x)).collect()
    }

    /// The vanishing polynomial of the evaluation points.
    pub fn vanishing_poly(&self) -> Poly {
        let f = self.field;
        let mut g = Poly::one(f);
        for &x in &self.points {
            g = g.mul(&Poly::new(f, [f.neg(x), 1]));
        }
        g
    }
}

/// Monic polynomial vanishing exactly at the evaluation points of the
/// given word positions.
pub fn error_locator(code: &GrsCode, positions: &[usize]) -> Poly {
    let f = code.field();
    let mut acc = Poly::one(f);
    for &j in positions {
        acc = acc.mul(&Poly::new(f, [f.neg(code.points()[j]), 1]));
    }
    acc
}

/// Builds the key-equation instance for a received word: all moduli are
/// the vanishing polynomial, sequence i is the i-th power of the
/// interpolated word reduced by it, and the weights form the staircase
/// `w_0 = l(k-1)+1`, `w_i = (l-i)(k-1)`.
pub fn build_key_equation(code: &GrsCode, received: &[u64], ell: usize) -> MgLfsrInstance {
    assert!(ell >= 1, "need at least one power");
    assert_eq!(received.len(), code.length(), "word length mismatch");
    let f = code.field();
    let g = code.vanishing_poly();
    let points: Vec<(u64, u64)> = code
        .points()
        .iter()
        .copied()
        .zip(received.iter().copied())
        .collect();
    let r = Poly::interpolate(f, &points).expect("distinct evaluation points");
    let base = r.rem(&g);
    let mut sequences = Vec::with_capacity(ell);
    let mut power = base.clone();
    sequences.push(power.clone());
    for _ in 1..ell {
        power = power.mul(&base).rem(&g);
        sequences.push(power.clone());
    }
    let k = code.dimension();
    let mut weights = Vec::with_capacity(ell + 1);
    weights.push(ell * (k - 1) + 1);
    for i in 1..=ell {
        weights.push((ell - i) * (k - 1));
    }
    let profile = WeightProfile::new(1, weights).expect("valid profile");
    MgLfsrInstance::new(f, sequences, vec![g; ell], profile).expect("valid key equation")
}

/// The largest error weight strictly below the non-uniqueness onset
/// `l/(l+1) * (n-1) - l(k-1)/2`. Negative when even zero errors sit past
/// the onset.
pub fn radius(code: &GrsCode, ell: usize) -> i64 {
    let n = code.length() as i64;
    let k = code.dimension() as i64;
    let l = ell as i64;
    let bound = Ratio::new(l * (n - 1), l + 1) - Ratio::new(l * (k - 1), 2);
    if bound.is_integer() {
        bound.to_integer() - 1
    } else {
        bound.floor().to_integer()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Decoded,
    Failure,
}

/// Result of a decode attempt. `message` is present exactly for
/// [`DecodeStatus::Decoded`]; `lambda` is always the minimal connection
/// polynomial that was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub message: Option<Poly>,
    pub lambda: Poly,
}

impl DecodeOutcome {
    pub fn is_decoded(&self) -> bool {
        self.status == DecodeStatus::Decoded
    }

    /// Number of errors the locator claims, `deg lambda`.
    pub fn errors_located(&self) -> usize {
        self.lambda.degree().finite().unwrap_or(0)
    }
}

/// Decodes a received word with `ell` powers: solve the key equation,
/// divide the first witness by the locator, and accept only when the
/// division is exact, the message degree fits, and re-encoding differs
/// from the received word in exactly `deg lambda` positions.
pub fn decode(code: &GrsCode, received: &[u64], ell: usize, algorithm: Algorithm) -> DecodeOutcome {
    let inst = build_key_equation(code, received, ell);
    let sol = inst.solve(algorithm);
    let lambda = sol.lambda.clone();
    let failure = DecodeOutcome {
        status: DecodeStatus::Failure,
        message: None,
        lambda: lambda.clone(),
    };
    let (candidate, rem) = sol.omegas[0].divmod(&lambda);
    if !rem.is_zero() {
        return failure;
    }
    if candidate.degree() >= Degree::Finite(code.dimension()) {
        return failure;
    }
    let reencoded = code.encode(&candidate);
    let distance = hamming(received, &reencoded);
    if distance != lambda.degree().finite().unwrap_or(0) {
        return failure;
    }
    DecodeOutcome {
        status: DecodeStatus::Decoded,
        message: Some(candidate),
        lambda,
    }
}

pub fn hamming(a: &[u64], b: &[u64]) -> usize {
    assert_eq!(a.len(), b.len(), "words of different length");
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Replaces exactly `tau` positions, chosen uniformly without
/// replacement, by uniformly random different symbols. Deterministic per
/// seed.
pub fn corrupt(field: Field, word: &[u64], tau: usize, seed: u64) -> Result<Vec<u64>, RsError> {
    if tau > word.len() {
        return Err(RsError::TooManyErrors { tau, n: word.len() });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = word.to_vec();
    let p = field.modulus();
    for pos in rand::seq::index::sample(&mut rng, word.len(), tau) {
        let offset = rng.random_range(1..p);
        out[pos] = field.add(out[pos], offset);
    }
    Ok(out)
}
