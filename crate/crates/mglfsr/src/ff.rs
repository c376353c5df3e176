//! Exact arithmetic in prime fields GF(p) and for dense univariate
//! polynomials over them.
//!
//! Field elements are canonical residues stored as `u64`; all operations
//! go through a [`Field`] handle carrying the modulus. Polynomials are
//! dense ascending coefficient vectors, always normalized (no trailing
//! zeros; the empty vector is the zero polynomial).

use std::fmt;

/// Largest supported modulus. Keeps `a + b` of two residues inside `u64`.
const MAX_MODULUS: u64 = 1 << 62;

/// Polynomial sizes below this multiply by schoolbook convolution;
/// larger products go through Karatsuba.
const KARATSUBA_CUTOFF: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    TooLarge(u64),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::TooLarge(p) => write!(f, "modulus {p} exceeds 2^62"),
        }
    }
}

impl std::error::Error for FieldError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    RepeatedPoint(u64),
    EmptyInterpolation,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::RepeatedPoint(x) => write!(f, "repeated interpolation point {x}"),
            PolyError::EmptyInterpolation => write!(f, "no interpolation points given"),
        }
    }
}

impl std::error::Error for PolyError {}

/// The degree of a polynomial: a finite integer, or the distinguished
/// minus-infinity of the zero polynomial, which compares below every
/// finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// `nu * deg + w`, absorbing into minus infinity for the zero polynomial.
    /// This is the weighted-degree map used throughout the weight profile
    /// bookkeeping.
    pub fn affine(self, nu: usize, w: usize) -> Degree {
        match self {
            Degree::NegInf => Degree::NegInf,
            Degree::Finite(d) => Degree::Finite(nu * d + w),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A prime field GF(p) with machine-word modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
}

impl Field {
    /// Builds GF(p), rejecting composite or oversized moduli.
    pub fn new(p: u64) -> Result<Field, FieldError> {
        if p > MAX_MODULUS {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical residue of an arbitrary integer.
    pub fn elem(&self, x: u64) -> u64 {
        x % self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    ///
    /// Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in GF({})", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all u64 inputs with this
/// witness set.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A dense univariate polynomial over GF(p), coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u64>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, reducing each
    /// into canonical residues and trimming trailing zeros.
    pub fn new(field: Field, coeffs: impl IntoIterator<Item = u64>) -> Poly {
        let coeffs = coeffs.into_iter().map(|c| field.elem(c)).collect();
        let mut p = Poly { field, coeffs };
        p.normalize();
        p
    }

    pub fn zero(field: Field) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn constant(field: Field, c: u64) -> Poly {
        Poly::new(field, [c])
    }

    /// `c * x^d`.
    pub fn monomial(field: Field, c: u64, d: usize) -> Poly {
        let c = field.elem(c);
        if c == 0 {
            return Poly::zero(field);
        }
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Poly { field, coeffs }
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Finite(self.coeffs.len() - 1)
        }
    }

    /// Coefficient at degree `d` (zero beyond the degree).
    pub fn coeff(&self, d: usize) -> u64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    /// Leading coefficient; panics on the zero polynomial.
    pub fn leading_coeff(&self) -> u64 {
        *self
            .coeffs
            .last()
            .expect("leading coefficient of zero polynomial")
    }

    fn check_field(&self, other: &Poly) {
        assert!(
            self.field == other.field,
            "field mismatch: GF({}) vs GF({})",
            self.field.p,
            other.field.p
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        let mut p = Poly { field: f, coeffs };
        p.normalize();
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        let mut p = Poly { field: f, coeffs };
        p.normalize();
        p
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly {
            field: f,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: u64) -> Poly {
        let f = self.field;
        let c = f.elem(c);
        if c == 0 {
            return Poly::zero(f);
        }
        Poly {
            field: f,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly {
            field: self.field,
            coeffs,
        }
    }

    /// `self - c * x^k * other`, the elementary row-reduction update.
    pub fn sub_scaled_shift(&self, other: &Poly, c: u64, k: usize) -> Poly {
        self.check_field(other);
        let f = self.field;
        let c = f.elem(c);
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let n = self.coeffs.len().max(other.coeffs.len() + k);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, 0);
        for (i, &b) in other.coeffs.iter().enumerate() {
            coeffs[i + k] = f.sub(coeffs[i + k], f.mul(c, b));
        }
        let mut p = Poly { field: f, coeffs };
        p.normalize();
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let coeffs = if self.coeffs.len().min(other.coeffs.len()) < KARATSUBA_CUTOFF {
            mul_schoolbook(self.field, &self.coeffs, &other.coeffs)
        } else {
            mul_karatsuba(self.field, &self.coeffs, &other.coeffs)
        };
        let mut p = Poly {
            field: self.field,
            coeffs,
        };
        p.normalize();
        p
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    ///
    /// Panics when the divisor is the zero polynomial.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        self.check_field(divisor);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let f = self.field;
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let dlen = divisor.coeffs.len();
        let lead_inv = f.inv(divisor.leading_coeff());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dlen + 1];
        for i in (0..quot.len()).rev() {
            let top = rem[i + dlen - 1];
            if top == 0 {
                continue;
            }
            let q = f.mul(top, lead_inv);
            quot[i] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(q, dc));
            }
        }
        rem.truncate(dlen - 1);
        let mut q = Poly {
            field: f,
            coeffs: quot,
        };
        let mut r = Poly {
            field: f,
            coeffs: rem,
        };
        q.normalize();
        r.normalize();
        (q, r)
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divmod(divisor).1
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, x0: u64) -> u64 {
        let f = self.field;
        let x0 = f.elem(x0);
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x0), c);
        }
        acc
    }

    /// Rescales so the leading coefficient is one. Panics on zero.
    pub fn monic(&self) -> Poly {
        self.scale(self.field.inv(self.leading_coeff()))
    }

    /// The unique polynomial of degree `< n` through `n` points with
    /// pairwise-distinct abscissas.
    pub fn interpolate(field: Field, points: &[(u64, u64)]) -> Result<Poly, PolyError> {
        if points.is_empty() {
            return Err(PolyError::EmptyInterpolation);
        }
        let f = field;
        let xs: Vec<u64> = points.iter().map(|&(x, _)| f.elem(x)).collect();
        for (i, &x) in xs.iter().enumerate() {
            if xs[i + 1..].contains(&x) {
                return Err(PolyError::RepeatedPoint(x));
            }
        }
        // Full vanishing product, then one synthetic division per point.
        let mut z = Poly::one(f);
        for &x in &xs {
            z = z.mul(&Poly::new(f, [f.neg(x), 1]));
        }
        let mut acc = Poly::zero(f);
        for (&x, &(_, y)) in xs.iter().zip(points.iter()) {
            let y = f.elem(y);
            if y == 0 {
                continue;
            }
            let basis = synthetic_div(&z, x);
            let denom = basis.eval(x);
            acc = acc.add(&basis.scale(f.div(y, denom)));
        }
        Ok(acc)
    }
}

/// Divides by the exact linear factor `x - root`; remainder is known zero.
fn synthetic_div(p: &Poly, root: u64) -> Poly {
    let f = p.field;
    let n = p.coeffs.len();
    let mut out = vec![0u64; n - 1];
    let mut carry = 0u64;
    for i in (0..n - 1).rev() {
        carry = f.add(p.coeffs[i + 1], f.mul(carry, root));
        out[i] = carry;
    }
    Poly {
        field: f,
        coeffs: out,
    }
}

fn mul_schoolbook(f: Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(ai, bj));
        }
    }
    out
}

fn mul_karatsuba(f: Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.len().min(b.len()) < KARATSUBA_CUTOFF {
        return mul_schoolbook(f, a, b);
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(a.len().min(half));
    let (b0, b1) = b.split_at(b.len().min(half));

    let low = mul_karatsuba(f, a0, b0);
    let high = if a1.is_empty() || b1.is_empty() {
        Vec::new()
    } else {
        mul_karatsuba(f, a1, b1)
    };

    let a_sum = add_slices(f, a0, a1);
    let b_sum = add_slices(f, b0, b1);
    let mid = mul_karatsuba(f, &a_sum, &b_sum);

    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &c) in low.iter().enumerate() {
        out[i] = f.add(out[i], c);
    }
    for (i, &c) in high.iter().enumerate() {
        out[i + 2 * half] = f.add(out[i + 2 * half], c);
    }
    // mid - low - high goes at the half offset
    for (i, &c) in mid.iter().enumerate() {
        let mut v = c;
        if i < low.len() {
            v = f.sub(v, low[i]);
        }
        if i < high.len() {
            v = f.sub(v, high[i]);
        }
        out[i + half] = f.add(out[i + half], v);
    }
    out
}

fn add_slices(f: Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            f.add(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
            )
        })
        .collect()
}

impl fmt::Display for Poly {
    /// Space-separated ascending residues; the zero polynomial prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
