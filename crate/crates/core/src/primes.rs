//! Rational primes and their factorization into prime ideals.
//!
//! Splitting data comes from factoring the defining polynomial mod p; in a
//! Galois field all irreducible factors share one degree, so the residue
//! degree is the order of Frobenius and complete splitting is a single
//! congruence test on x^p mod (f, p).

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{Field, FieldElement, IdealLattice};
use crate::error::{Error, Result};
use crate::intmath;
use crate::linalg::{self, Col};
use crate::poly::{self, ModPoly};

/// A prime ideal above p with residue-field data and its HNF lattice.
#[derive(Debug, Clone)]
pub struct PrimeIdealData {
    pub p: u64,
    /// residue degree
    pub f: usize,
    /// ramification exponent (1 for the unramified primes the experiments use)
    pub e: usize,
    /// monic irreducible factor of the defining polynomial mod p (ascending);
    /// for f = 1 this is x - c
    pub g_factor: Vec<u64>,
    pub lattice: IdealLattice,
    /// position within the sorted Galois orbit
    pub orbit_index: usize,
    /// basis-to-theta-power conversion mod p, for non-power bases
    pub to_theta_mod_p: Option<Vec<u64>>,
}

impl PrimeIdealData {
    /// Norm p^f of the ideal.
    pub fn norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.f as u32)
    }

    /// The root of the defining polynomial mod p, when f = 1.
    pub fn root(&self) -> Option<u64> {
        if self.f == 1 {
            Some((self.p - self.g_factor[0] % self.p) % self.p)
        } else {
            None
        }
    }
}

/// Element of the residue field F_{p^f} as a polynomial residue mod
/// (p, g_factor).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueFieldElement {
    pub p: u64,
    pub f: usize,
    pub coeffs: Vec<u64>,
}

impl ResidueFieldElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn one(p: u64, f: usize) -> Self {
        let mut coeffs = vec![0; f];
        coeffs[0] = 1;
        ResidueFieldElement { p, f, coeffs }
    }
}

fn ideal_from_factor(field: &Field, p: u64, g: &ModPoly) -> IdealLattice {
    let n = field.degree();
    let pb = BigInt::from(p);
    let mut cols: Vec<Col> = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut c = vec![BigInt::zero(); n];
        c[j] = pb.clone();
        cols.push(c);
    }
    let g_int: Vec<BigInt> = g.coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let g_elem = field.element_from_poly(&g_int);
    for j in 0..n {
        let mut ej = FieldElement::zero(n);
        ej.coords[j] = num_traits::One::one();
        cols.push(field.mul(&g_elem, &ej).coords);
    }
    IdealLattice::from_hnf(linalg::hnf_full_rank(n, &cols))
}

/// Factor an odd unramified rational prime into its Galois orbit of prime
/// ideals, sorted by HNF key.
pub fn factor_rational_prime(field: &Field, p: u64) -> Result<Vec<PrimeIdealData>> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if (&field.spec.discriminant % BigInt::from(p)).is_zero() {
        return Err(Error::RamifiedPrime(p));
    }
    factor_prime_allow_ramified(field, p)
}

/// Internal factorization that also accepts odd ramified primes (residue
/// symbols at odd primes are defined regardless of ramification).
pub fn factor_prime_allow_ramified(field: &Field, p: u64) -> Result<Vec<PrimeIdealData>> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let n = field.degree();
    let fpoly = &field.spec.defining_polynomial;
    let (fdeg, squarefree) = poly::frobenius_degree(fpoly, p);
    let factors: Vec<ModPoly> = if squarefree {
        if fdeg == n {
            vec![ModPoly::from_bigint(p, fpoly)]
        } else if fdeg == 1 {
            poly::roots_mod_p(fpoly, p)
                .into_iter()
                .map(|c| ModPoly::new(p, vec![(p - c) % p, 1]))
                .collect()
        } else {
            poly::equal_degree_factors(fpoly, p, fdeg)
        }
    } else {
        // ramified: the radical factors into equal-degree irreducibles
        let fp = ModPoly::from_bigint(p, fpoly);
        let radical = squarefree_radical(&fp);
        let rad_int: Vec<BigInt> = radical.coeffs.iter().map(|&c| BigInt::from(c)).collect();
        let (rdeg, _) = poly::frobenius_degree(&rad_int, p);
        if rdeg == radical.deg() {
            vec![radical]
        } else if rdeg == 1 {
            poly::roots_mod_p(&rad_int, p)
                .into_iter()
                .map(|c| ModPoly::new(p, vec![(p - c) % p, 1]))
                .collect()
        } else {
            poly::equal_degree_factors(&rad_int, p, rdeg)
        }
    };
    let g = factors.len();
    let fdeg = factors[0].deg();
    let e = n / (g * fdeg);
    let to_theta = field.basis_to_theta_mod_p(p);
    let mut ideals: Vec<PrimeIdealData> = factors
        .into_iter()
        .map(|gf| {
            let lattice = ideal_from_factor(field, p, &gf);
            PrimeIdealData {
                p,
                f: fdeg,
                e,
                g_factor: gf.coeffs.clone(),
                lattice,
                orbit_index: 0,
                to_theta_mod_p: to_theta.clone(),
            }
        })
        .collect();
    ideals.sort_by(|a, b| a.lattice.key().cmp(&b.lattice.key()));
    for (i, ideal) in ideals.iter_mut().enumerate() {
        ideal.orbit_index = i;
    }
    debug_assert_eq!(g * fdeg * e, n);
    Ok(ideals)
}

fn squarefree_radical(f: &ModPoly) -> ModPoly {
    let p = f.p;
    let d = f.deg();
    let mut deriv = vec![0u64; d.max(1)];
    for i in 1..=d {
        deriv[i - 1] = ((f.coeffs[i] as u128 * (i as u128 % p as u128)) % p as u128) as u64;
    }
    let deriv = ModPoly::new(p, deriv);
    if deriv.is_zero() {
        // f(x) = g(x^p) = g(x)^p over F_p: recurse on the p-th root
        let mut g = Vec::with_capacity(d / p as usize + 1);
        let mut i = 0usize;
        while i <= d {
            g.push(f.coeffs[i]);
            i += p as usize;
        }
        return squarefree_radical(&ModPoly::new(p, g));
    }
    let gc = f.gcd(&deriv);
    let (q, _) = f.divmod(&gc);
    // q = product of distinct factors whose multiplicity is prime to p;
    // pick up factors hidden in gc as well
    let missing = {
        let mut acc = gc.clone();
        let mut extra = ModPoly::one(p);
        loop {
            let shared = acc.gcd(&q);
            if shared.deg() > 0 {
                let (next, _) = acc.divmod(&shared);
                acc = next;
                continue;
            }
            if acc.deg() == 0 {
                break;
            }
            // residual repeated part with p | multiplicity
            extra = squarefree_radical(&acc);
            break;
        }
        extra
    };
    let combined = q.mul(&missing);
    let lead = *combined.coeffs.last().unwrap();
    combined.scale(crate::poly::mod_inverse(lead, p))
}

/// Factorization with a process-wide cache, for the symbol paths that hit
/// the same small primes over and over.
pub fn factor_prime_cached(field: &Field, p: u64) -> Result<std::sync::Arc<Vec<PrimeIdealData>>> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Arc<Vec<PrimeIdealData>>>>> =
        OnceLock::new();
    let key = (field_fingerprint(field), p);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = std::sync::Arc::new(factor_prime_allow_ramified(field, p)?);
    cache.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

fn field_fingerprint(field: &Field) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    field.spec.name.hash(&mut h);
    field.spec.discriminant.hash(&mut h);
    field.spec.defining_polynomial.hash(&mut h);
    h.finish()
}

/// Valuation of (a) at an unramified degree-one prime with a known upper
/// bound, via Hensel lifting of the root: v = v_p of the theta-polynomial
/// of a evaluated at the lifted root.
pub fn valuation_deg1_hensel(
    field: &Field,
    a: &FieldElement,
    prime: &PrimeIdealData,
    bound: u32,
) -> u32 {
    debug_assert!(prime.f == 1 && prime.e == 1);
    if bound == 0 {
        return 0;
    }
    let p = prime.p;
    let pb = BigInt::from(p);
    let k = bound + 1;
    let modulus = pb.pow(k);
    // Newton-lift the root of the defining polynomial
    let fpoly = &field.spec.defining_polynomial;
    let deriv = crate::poly::zpoly_derivative(fpoly);
    let mut c = BigInt::from(prime.root().unwrap());
    let mut prec = 1u32;
    while prec < k {
        prec = (prec * 2).min(k);
        let m = pb.pow(prec);
        let fc = num_integer::Integer::mod_floor(&crate::poly::zpoly_eval(fpoly, &c), &m);
        let dc = num_integer::Integer::mod_floor(&crate::poly::zpoly_eval(&deriv, &c), &m);
        let dinv = modular_inverse(&dc, &m).expect("simple root stays simple");
        c = num_integer::Integer::mod_floor(&(&c - fc * dinv), &m);
    }
    // theta-power coefficients of a mod p^k
    let coeffs: Vec<BigInt> = match &field.power_change {
        None => a
            .coords
            .iter()
            .map(|x| num_integer::Integer::mod_floor(x, &modulus))
            .collect(),
        Some(change) => {
            let det_inv = modular_inverse(
                &num_integer::Integer::mod_floor(&change.det, &modulus),
                &modulus,
            )
            .expect("odd modulus, 2-power determinant");
            (0..field.degree())
                .map(|i| {
                    let mut acc = BigInt::zero();
                    for (j, x) in a.coords.iter().enumerate() {
                        if !change.adj[i][j].is_zero() {
                            acc += &change.adj[i][j] * x;
                        }
                    }
                    num_integer::Integer::mod_floor(&(acc * &det_inv), &modulus)
                })
                .collect()
        }
    };
    let mut x = BigInt::zero();
    for coeff in coeffs.iter().rev() {
        x = num_integer::Integer::mod_floor(&(x * &c + coeff), &modulus);
    }
    let mut v = 0u32;
    while v < bound {
        let (q, r) = num_integer::Integer::div_rem(&x, &pb);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
        if x.is_zero() {
            // exact zero at full precision: the bound caps the answer
            return bound;
        }
    }
    v
}

fn modular_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = num_integer::Integer::extended_gcd(a, m);
    if e.gcd != BigInt::from(1) {
        return None;
    }
    Some(num_integer::Integer::mod_floor(&e.x, m))
}

/// Reduce an element into the residue field O_K / P.
pub fn residue_map(field: &Field, a: &FieldElement, prime: &PrimeIdealData) -> ResidueFieldElement {
    let p = prime.p;
    let pb = BigInt::from(p);
    let mut coords: Vec<u64> = a
        .coords
        .iter()
        .map(|c| {
            num_integer::Integer::mod_floor(c, &pb)
                .to_u64()
                .expect("residue fits")
        })
        .collect();
    // non-power bases: convert to theta-power coefficients mod p first
    if let Some(mat) = &prime.to_theta_mod_p {
        let n = coords.len();
        let mut conv = vec![0u64; n];
        for (i, cv) in conv.iter_mut().enumerate() {
            let mut acc = 0u128;
            for j in 0..n {
                acc += mat[i * n + j] as u128 * coords[j] as u128 % p as u128;
            }
            *cv = (acc % p as u128) as u64;
        }
        coords = conv;
    }
    let _ = field;
    if prime.f == 1 {
        let c = prime.root().unwrap();
        // Horner at theta -> c
        let mut value = 0u64;
        for coord in coords.iter().rev() {
            value = (((value as u128) * (c as u128) + *coord as u128) % p as u128) as u64;
        }
        ResidueFieldElement {
            p,
            f: 1,
            coeffs: vec![value],
        }
    } else {
        let g = ModPoly::new(p, prime.g_factor.clone());
        let a_poly = ModPoly::new(p, coords);
        let r = a_poly.rem(&g);
        let mut coeffs = r.coeffs;
        coeffs.resize(prime.f, 0);
        ResidueFieldElement {
            p,
            f: prime.f,
            coeffs,
        }
    }
}

/// Does p split completely (all residue degrees 1, unramified)?
pub fn splits_completely(field: &Field, p: u64) -> Result<bool> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if (&field.spec.discriminant % BigInt::from(p)).is_zero() {
        return Err(Error::RamifiedPrime(p));
    }
    let (fdeg, squarefree) = poly::frobenius_degree(&field.spec.defining_polynomial, p);
    Ok(squarefree && fdeg == 1)
}

/// Odd unramified completely split primes p <= bound with their orbits,
/// in increasing order of p. Cloneable and independently advanceable.
pub struct SplitPrimeStream<'a> {
    field: &'a Field,
    primes: Vec<u64>,
    pos: usize,
}

impl<'a> Clone for SplitPrimeStream<'a> {
    fn clone(&self) -> Self {
        SplitPrimeStream {
            field: self.field,
            primes: self.primes.clone(),
            pos: self.pos,
        }
    }
}

impl<'a> SplitPrimeStream<'a> {
    pub fn new(field: &'a Field, bound: u64) -> Self {
        let primes = split_primes_up_to(field, bound);
        SplitPrimeStream {
            field,
            primes,
            pos: 0,
        }
    }
}

impl<'a> Iterator for SplitPrimeStream<'a> {
    type Item = (u64, Vec<PrimeIdealData>);

    fn next(&mut self) -> Option<Self::Item> {
        let p = *self.primes.get(self.pos)?;
        self.pos += 1;
        let orbit = factor_rational_prime(self.field, p).expect("stream primes are unramified");
        Some((p, orbit))
    }
}

/// The list of completely split odd unramified primes up to the bound.
pub fn split_primes_up_to(field: &Field, bound: u64) -> Vec<u64> {
    let disc = &field.spec.discriminant;
    intmath::primes_up_to(bound)
        .into_iter()
        .filter(|&p| {
            p > 2
                && !(disc % BigInt::from(p)).is_zero()
                && splits_completely(field, p).unwrap_or(false)
        })
        .collect()
}
