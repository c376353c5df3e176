//! Seeded random instance generation for cross-checking the solvers
//! against the oracle and for benchmarking.

use std::ops::RangeInclusive;

use rand::Rng;

use crate::ff::{Field, Poly};
use crate::instance::MgLfsrInstance;
use crate::polymat::WeightProfile;

/// Parameter ranges for [`random_instance`]. The default covers small
/// primes, one to three sequences, both stride values, moduli degrees up
/// to 8 and weights up to 4.
#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub primes: Vec<u64>,
    pub ell: RangeInclusive<usize>,
    pub nu: RangeInclusive<usize>,
    pub modulus_degree: RangeInclusive<usize>,
    pub weight: RangeInclusive<usize>,
    /// When set, every modulus is the pure power `x^deg` instead of a
    /// random monic polynomial.
    pub monomial_moduli: bool,
}

impl Default for SampleConfig {
    fn default() -> SampleConfig {
        SampleConfig {
            primes: vec![2, 3, 5, 13, 17],
            ell: 1..=3,
            nu: 1..=2,
            modulus_degree: 1..=8,
            weight: 0..=4,
            monomial_moduli: false,
        }
    }
}

/// Uniform polynomial of degree strictly below `degree_bound` (possibly
/// zero, including the zero polynomial).
pub fn random_poly(field: Field, degree_bound: usize, rng: &mut impl Rng) -> Poly {
    let coeffs: Vec<u64> = (0..degree_bound)
        .map(|_| rng.random_range(0..field.modulus()))
        .collect();
    Poly::new(field, coeffs)
}

/// Uniform monic polynomial of exact degree `degree`.
pub fn random_monic(field: Field, degree: usize, rng: &mut impl Rng) -> Poly {
    let mut coeffs: Vec<u64> = (0..degree)
        .map(|_| rng.random_range(0..field.modulus()))
        .collect();
    coeffs.push(1);
    Poly::new(field, coeffs)
}

/// Draws an instance from the configured ranges.
pub fn random_instance(cfg: &SampleConfig, rng: &mut impl Rng) -> MgLfsrInstance {
    let p = cfg.primes[rng.random_range(0..cfg.primes.len())];
    let field = Field::new(p).expect("sample primes must be prime");
    let ell = rng.random_range(cfg.ell.clone());
    let nu = rng.random_range(cfg.nu.clone());
    let weights: Vec<usize> = (0..=ell)
        .map(|_| rng.random_range(cfg.weight.clone()))
        .collect();
    let mut sequences = Vec::with_capacity(ell);
    let mut moduli = Vec::with_capacity(ell);
    for _ in 0..ell {
        let dg = rng.random_range(cfg.modulus_degree.clone()).max(1);
        let g = if cfg.monomial_moduli {
            Poly::monomial(field, 1, dg)
        } else {
            random_monic(field, dg, rng)
        };
        sequences.push(random_poly(field, dg, rng));
        moduli.push(g);
    }
    let profile = WeightProfile::new(nu, weights).expect("valid profile");
    MgLfsrInstance::new(field, sequences, moduli, profile).expect("sampled instance is valid")
}
