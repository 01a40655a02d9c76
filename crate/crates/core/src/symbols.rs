//! Quadratic residue symbols over the ring of integers, the Hilbert symbol
//! at the infinite places, and the empirically derived mod-8 reciprocity
//! table.
//!
//! The 2-adic factor mu_2 is never computed from local theory: reciprocity
//! guarantees it only depends on the arguments mod 8, so the table is built
//! by sampling and every cell is asserted constant. A disagreement inside a
//! cell falsifies the symbol implementation, not the table.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::algebra::{Field, FieldElement, IdealLattice, Modulus8Class};
use crate::error::{Error, Result};
use crate::intmath;
use crate::primes::{
    factor_prime_allow_ramified, factor_prime_cached, residue_map, valuation_deg1_hensel,
    PrimeIdealData,
};

pub use crate::intmath::{jacobi, legendre};

/// (a / P) for a prime ideal P of odd norm, via Euler's criterion in the
/// residue field.
pub fn residue_symbol_prime(field: &Field, a: &FieldElement, prime: &PrimeIdealData) -> i8 {
    let r = residue_map(field, a, prime);
    if r.is_zero() {
        return 0;
    }
    if prime.f == 1 {
        return legendre(&BigInt::from(r.coeffs[0]), &BigInt::from(prime.p))
            .expect("odd prime modulus");
    }
    // r^((p^f - 1)/2) in F_{p^f}
    let g = crate::poly::ModPoly::new(prime.p, prime.g_factor.clone());
    let base = crate::poly::ModPoly::new(prime.p, r.coeffs.clone());
    let exp = (BigInt::from(prime.p).pow(prime.f as u32) - BigInt::one()) / BigInt::from(2);
    let pw = base.powmod_big(&exp, &g);
    if pw.deg() == 0 && pw.coeffs[0] == 1 {
        1
    } else {
        -1
    }
}

/// Valuation of the ideal (a) at the prime P.
pub fn valuation_at(field: &Field, a: &FieldElement, prime: &PrimeIdealData) -> u32 {
    let mut v = 0u32;
    let mut power = prime.lattice.clone();
    while power.contains_element(a) {
        v += 1;
        power = field.ideal_mul(&power, &prime.lattice);
    }
    v
}

fn odd_norm_or_err(field: &Field, b: &FieldElement) -> Result<BigInt> {
    let nb = field.norm(b);
    if nb.is_even() || nb.is_zero() {
        return Err(Error::EvenArgument(nb));
    }
    Ok(nb)
}

/// (a / b) for elements, via the prime ideal factorization of (b).
pub fn residue_symbol(field: &Field, a: &FieldElement, b: &FieldElement) -> Result<i8> {
    let nb = odd_norm_or_err(field, b)?;
    let nb_abs = nb.abs();
    if nb_abs.is_one() {
        return Ok(1);
    }
    // degree-one fast path: |N(b)| an odd unramified prime
    if let Some(p) = to_u64(&nb_abs) {
        if intmath::is_prime_u64(p) && !(&field.spec.discriminant % BigInt::from(p)).is_zero() {
            if field.power_change.is_none() {
                let roots = crate::poly::roots_mod_p(&field.spec.defining_polynomial, p);
                for c in roots {
                    if eval_coords_mod_p(b, c, p) == 0 {
                        let av = eval_coords_mod_p(a, c, p);
                        return Ok(legendre(&BigInt::from(av), &BigInt::from(p)).unwrap());
                    }
                }
                unreachable!("norm p element must vanish at some root");
            }
            // non-power basis: locate the prime ideal dividing (b) directly
            let ideals = factor_prime_cached(field, p)?;
            for prime in ideals.iter() {
                if residue_map(field, b, prime).is_zero() {
                    return Ok(residue_symbol_prime(field, a, prime));
                }
            }
            unreachable!("norm p element must lie in some prime above p");
        }
    }
    let factors = intmath::factor_bigint(&nb_abs)?;
    let mut acc: i8 = 1;
    for (pb, pe) in &factors {
        let p = to_u64(pb).ok_or_else(|| {
            Error::FactoringBudgetExceeded(format!("prime {pb} exceeds the desk-scale range"))
        })?;
        let ideals = factor_prime_cached(field, p)?;
        let mut seen = 0u32;
        for prime in ideals.iter() {
            let v = if prime.f == 1 && prime.e == 1 {
                valuation_deg1_hensel(field, b, prime, *pe)
            } else {
                valuation_at(field, b, prime)
            };
            if v == 0 {
                continue;
            }
            seen += v * prime.f as u32;
            let s = residue_symbol_prime(field, a, prime);
            if s == 0 {
                return Ok(0);
            }
            if v % 2 == 1 {
                acc *= s;
            }
        }
        debug_assert_eq!(seen, *pe, "norm valuation bookkeeping at p = {p}");
    }
    Ok(acc)
}

/// (a / L) for an odd ideal L, multiplicative over its prime factorization.
pub fn residue_symbol_ideal(field: &Field, a: &FieldElement, l: &IdealLattice) -> Result<i8> {
    if l.norm.is_even() {
        return Err(Error::EvenArgument(l.norm.clone()));
    }
    if l.norm.clone().abs().is_one() {
        return Ok(1);
    }
    let factors = intmath::factor_bigint(&l.norm)?;
    let mut acc: i8 = 1;
    for (pb, _) in &factors {
        let p = to_u64(pb).ok_or_else(|| {
            Error::FactoringBudgetExceeded(format!("prime {pb} exceeds the desk-scale range"))
        })?;
        let ideals = factor_prime_cached(field, p)?;
        for prime in ideals.iter() {
            let mut v = 0u32;
            let mut power = prime.lattice.clone();
            while power.divides(l) {
                v += 1;
                power = field.ideal_mul(&power, &prime.lattice);
            }
            if v == 0 {
                continue;
            }
            let s = residue_symbol_prime(field, a, prime);
            if s == 0 {
                return Ok(0);
            }
            if v % 2 == 1 {
                acc *= s;
            }
        }
    }
    Ok(acc)
}

fn to_u64(b: &BigInt) -> Option<u64> {
    num_traits::ToPrimitive::to_u64(b)
}

fn eval_coords_mod_p(a: &FieldElement, c: u64, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut acc = 0u64;
    for coord in a.coords.iter().rev() {
        let r = num_integer::Integer::mod_floor(coord, &pb);
        let r = num_traits::ToPrimitive::to_u64(&r).unwrap();
        acc = (((acc as u128) * (c as u128) + r as u128) % p as u128) as u64;
    }
    acc
}

/// Product of the Hilbert symbols at the real places: each place contributes
/// -1 exactly when both arguments are negative there. Identically +1 for
/// totally complex fields.
pub fn hilbert_infinity(field: &Field, a: &FieldElement, b: &FieldElement) -> Result<i8> {
    if field.is_totally_complex() {
        return Ok(1);
    }
    let sa = field.real_signs(&a.coords)?;
    let sb = field.real_signs(&b.coords)?;
    let mut acc = 1i8;
    for (x, y) in sa.iter().zip(&sb) {
        if *x < 0 && *y < 0 {
            acc = -acc;
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// mu_2 table
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Cell {
    value: i8,
    samples: u32,
}

/// Empirical table of mu_2(alpha, beta) keyed by the congruence classes of
/// the arguments mod 8.
#[derive(Debug, Clone)]
pub struct ReciprocityTable {
    cells: HashMap<(Modulus8Class, Modulus8Class), Cell>,
    pub min_samples: u32,
}

#[derive(Serialize, Deserialize)]
struct TableFileCell {
    alpha: String,
    beta: String,
    value: i8,
    samples: u32,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    min_samples: u32,
    cells: Vec<TableFileCell>,
}

impl ReciprocityTable {
    pub fn new(min_samples: u32) -> Self {
        ReciprocityTable {
            cells: HashMap::new(),
            min_samples,
        }
    }

    /// Record one observation m for the cell of (alpha, beta).
    pub fn record(&mut self, a: &FieldElement, b: &FieldElement, m: i8) -> Result<()> {
        let key = (Modulus8Class::of(a), Modulus8Class::of(b));
        match self.cells.get_mut(&key) {
            None => {
                self.cells.insert(
                    key,
                    Cell {
                        value: m,
                        samples: 1,
                    },
                );
            }
            Some(cell) => {
                if cell.value != m {
                    return Err(Error::InconsistentCell(format!(
                        "({} ; {})",
                        key.0.key(),
                        key.1.key()
                    )));
                }
                cell.samples += 1;
            }
        }
        Ok(())
    }

    /// mu_2 value for a populated cell (>= min_samples observations).
    pub fn lookup(&self, a: &FieldElement, b: &FieldElement) -> Result<i8> {
        let key = (Modulus8Class::of(a), Modulus8Class::of(b));
        match self.cells.get(&key) {
            Some(cell) if cell.samples >= self.min_samples => Ok(cell.value),
            _ => Err(Error::UnpopulatedCell(format!(
                "({} ; {})",
                key.0.key(),
                key.1.key()
            ))),
        }
    }

    pub fn populated_cells(&self) -> usize {
        self.cells
            .values()
            .filter(|c| c.samples >= self.min_samples)
            .count()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn to_json(&self) -> String {
        let mut cells: Vec<TableFileCell> = self
            .cells
            .iter()
            .map(|((a, b), c)| TableFileCell {
                alpha: a.key(),
                beta: b.key(),
                value: c.value,
                samples: c.samples,
            })
            .collect();
        cells.sort_by(|x, y| (&x.alpha, &x.beta).cmp(&(&y.alpha, &y.beta)));
        serde_json::to_string_pretty(&TableFile {
            min_samples: self.min_samples,
            cells,
        })
        .unwrap()
    }
}

/// A random element with coordinates in [-spread, spread].
pub fn random_element(rng: &mut ChaCha8Rng, n: usize, spread: i64) -> FieldElement {
    FieldElement::from_i64(
        &(0..n)
            .map(|_| rng.gen_range(-spread..=spread))
            .collect::<Vec<_>>(),
    )
}

/// A random pair of odd elements with coprime norms.
pub fn random_coprime_odd_pair(
    field: &Field,
    rng: &mut ChaCha8Rng,
    spread: i64,
) -> (FieldElement, FieldElement) {
    let n = field.degree();
    loop {
        let a = random_element(rng, n, spread);
        let b = random_element(rng, n, spread);
        let na = field.norm(&a);
        let nb = field.norm(&b);
        if na.is_zero() || nb.is_zero() || na.is_even() || nb.is_even() {
            continue;
        }
        if num_integer::Integer::gcd(&na, &nb).is_one() {
            return (a, b);
        }
    }
}

/// The reciprocity defect m = (a/b) * (b/a) * mu_inf(a, b) of one coprime
/// odd pair; by reciprocity this equals mu_2(a, b).
pub fn reciprocity_defect(field: &Field, a: &FieldElement, b: &FieldElement) -> Result<i8> {
    let ab = residue_symbol(field, a, b)?;
    let ba = residue_symbol(field, b, a)?;
    if ab == 0 || ba == 0 {
        return Err(Error::ZeroSymbolEncountered);
    }
    Ok(ab * ba * hilbert_infinity(field, a, b)?)
}

/// Derive the mu_2 table by sampling `samples` lifts in each of `cells`
/// random mod-8 cells. Per-cell constancy is asserted; a violation is an
/// implementation bug, not bad data.
pub fn derive_mu2_table(
    field: &Field,
    cells: usize,
    samples: u32,
    rng: &mut ChaCha8Rng,
) -> Result<ReciprocityTable> {
    let mut table = ReciprocityTable::new(samples.min(20).max(20));
    let n = field.degree();
    for _ in 0..cells {
        let (a0, b0) = random_coprime_odd_pair(field, rng, 3);
        let mut taken = 0u32;
        let mut attempts = 0u32;
        while taken < samples && attempts < samples * 50 {
            attempts += 1;
            let xi = random_element(rng, n, 2);
            let eta = random_element(rng, n, 2);
            let a = FieldElement::new(
                a0.coords
                    .iter()
                    .zip(&xi.coords)
                    .map(|(c, d)| c + d * 8)
                    .collect(),
            );
            let b = FieldElement::new(
                b0.coords
                    .iter()
                    .zip(&eta.coords)
                    .map(|(c, d)| c + d * 8)
                    .collect(),
            );
            let na = field.norm(&a);
            let nb = field.norm(&b);
            if na.is_zero() || nb.is_zero() || na.is_even() || nb.is_even() {
                continue;
            }
            if !num_integer::Integer::gcd(&na, &nb).is_one() {
                continue;
            }
            let m = reciprocity_defect(field, &a, &b)?;
            table.record(&a, &b, m)?;
            taken += 1;
        }
    }
    Ok(table)
}

/// Check (a/b) = mu_2 * mu_inf * (b/a) against a derived table.
pub fn check_reciprocity(
    field: &Field,
    a: &FieldElement,
    b: &FieldElement,
    table: &ReciprocityTable,
) -> Result<bool> {
    let mu2 = table.lookup(a, b)?;
    let ab = residue_symbol(field, a, b)?;
    let ba = residue_symbol(field, b, a)?;
    let mu_inf = hilbert_infinity(field, a, b)?;
    Ok(ab == mu2 * mu_inf * ba)
}

#[derive(Debug, Clone)]
pub struct ReciprocitySuiteReport {
    pub populated_cells: usize,
    pub checked_pairs: usize,
    pub failures: usize,
}

fn lift_pair(
    field: &Field,
    rng: &mut ChaCha8Rng,
    a0: &FieldElement,
    b0: &FieldElement,
) -> Option<(FieldElement, FieldElement)> {
    let n = field.degree();
    let xi = random_element(rng, n, 2);
    let eta = random_element(rng, n, 2);
    let a = FieldElement::new(
        a0.coords
            .iter()
            .zip(&xi.coords)
            .map(|(c, d)| c + d * 8)
            .collect(),
    );
    let b = FieldElement::new(
        b0.coords
            .iter()
            .zip(&eta.coords)
            .map(|(c, d)| c + d * 8)
            .collect(),
    );
    let na = field.norm(&a);
    let nb = field.norm(&b);
    if na.is_zero() || nb.is_zero() || na.is_even() || nb.is_even() {
        return None;
    }
    if !num_integer::Integer::gcd(&na, &nb).is_one() {
        return None;
    }
    Some((a, b))
}

/// Derive a mu_2 table from lifts in `cells` random mod-8 cells, then verify
/// the reciprocity law on `check_pairs` fresh coprime odd lifts drawn from
/// the same cells. Cell inconsistency during either phase is an error.
pub fn run_reciprocity_suite(
    field: &Field,
    cells: usize,
    samples: u32,
    check_pairs: usize,
    rng: &mut ChaCha8Rng,
) -> Result<ReciprocitySuiteReport> {
    let bases: Vec<(FieldElement, FieldElement)> = (0..cells)
        .map(|_| random_coprime_odd_pair(field, rng, 3))
        .collect();
    let mut table = ReciprocityTable::new(20);
    for (a0, b0) in &bases {
        let mut taken = 0u32;
        let mut attempts = 0u32;
        while taken < samples && attempts < samples * 50 {
            attempts += 1;
            if let Some((a, b)) = lift_pair(field, rng, a0, b0) {
                let m = reciprocity_defect(field, &a, &b)?;
                table.record(&a, &b, m)?;
                taken += 1;
            }
        }
    }
    let mut checked = 0usize;
    let mut failures = 0usize;
    let mut attempts = 0usize;
    while checked < check_pairs && attempts < check_pairs * 50 {
        attempts += 1;
        let (a0, b0) = &bases[attempts % bases.len()];
        if let Some((a, b)) = lift_pair(field, rng, a0, b0) {
            match check_reciprocity(field, &a, &b, &table) {
                Ok(true) => checked += 1,
                Ok(false) => {
                    failures += 1;
                    checked += 1;
                }
                Err(Error::UnpopulatedCell(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(ReciprocitySuiteReport {
        populated_cells: table.populated_cells(),
        checked_pairs: checked,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn symbol_zero_on_members() {
        let field = presets::cubic_field();
        let prime = &crate::primes::factor_rational_prime(&field, 17).unwrap()[0];
        let member = FieldElement::new(prime.lattice.hnf[1].clone());
        assert_eq!(residue_symbol_prime(&field, &member, prime), 0);
    }

    #[test]
    fn symbol_one_on_squares() {
        let field = presets::cubic_field();
        let mut r = rng(5);
        let prime = &crate::primes::factor_rational_prime(&field, 19).unwrap()[0];
        for _ in 0..50 {
            let a = random_element(&mut r, 3, 20);
            let sq = field.mul(&a, &a);
            let s = residue_symbol_prime(&field, &sq, prime);
            assert!(s == 0 || s == 1);
        }
    }

    #[test]
    fn prime_symbol_agrees_with_legendre_on_degree_one() {
        let field = presets::cubic_field();
        let mut r = rng(7);
        for &p in &[17u64, 19, 37, 53] {
            let ideals = crate::primes::factor_rational_prime(&field, p).unwrap();
            for prime in &ideals {
                for _ in 0..20 {
                    let a = random_element(&mut r, 3, 40);
                    let s = residue_symbol_prime(&field, &a, prime);
                    let res = residue_map(&field, &a, prime).coeffs[0];
                    let l = legendre(&BigInt::from(res), &BigInt::from(p)).unwrap();
                    assert_eq!(s, l);
                }
            }
        }
    }

    #[test]
    fn general_symbol_multiplicative_in_both_arguments() {
        let field = presets::cubic_field();
        let mut r = rng(13);
        for _ in 0..60 {
            let (a1, b) = random_coprime_odd_pair(&field, &mut r, 4);
            let (a2, _) = random_coprime_odd_pair(&field, &mut r, 4);
            let lhs = residue_symbol(&field, &field.mul(&a1, &a2), &b).unwrap();
            let rhs = residue_symbol(&field, &a1, &b).unwrap()
                * residue_symbol(&field, &a2, &b).unwrap();
            assert_eq!(lhs, rhs);
        }
        // denominator multiplicativity
        let mut done = 0;
        while done < 40 {
            let (a, b1) = random_coprime_odd_pair(&field, &mut r, 3);
            let (_, b2) = random_coprime_odd_pair(&field, &mut r, 3);
            let lhs = residue_symbol(&field, &a, &field.mul(&b1, &b2)).unwrap();
            let rhs =
                residue_symbol(&field, &a, &b1).unwrap() * residue_symbol(&field, &a, &b2).unwrap();
            assert_eq!(lhs, rhs);
            done += 1;
        }
    }

    #[test]
    fn symbol_invariant_under_lattice_shifts() {
        let field = presets::cubic_field();
        let mut r = rng(17);
        for _ in 0..50 {
            let (a, b) = random_coprime_odd_pair(&field, &mut r, 4);
            let shift = field.mul(&b, &random_element(&mut r, 3, 5));
            let a2 = field.add(&a, &shift);
            assert_eq!(
                residue_symbol(&field, &a, &b).unwrap(),
                residue_symbol(&field, &a2, &b).unwrap()
            );
        }
    }

    #[test]
    fn unit_square_invariance_in_numerator() {
        let field = presets::cubic_field();
        let mut r = rng(23);
        let theta = FieldElement::from_i64(&[0, 1, 0]);
        let u2 = field.mul(&theta, &theta);
        for _ in 0..50 {
            let (a, b) = random_coprime_odd_pair(&field, &mut r, 4);
            let lhs = residue_symbol(&field, &field.mul(&u2, &a), &b).unwrap();
            assert_eq!(lhs, residue_symbol(&field, &a, &b).unwrap());
        }
    }

    #[test]
    fn galois_equivariance() {
        let field = presets::cubic_field();
        let mut r = rng(29);
        for &p in &[17u64, 19, 37] {
            let ideals = crate::primes::factor_rational_prime(&field, p).unwrap();
            for prime in &ideals {
                let a = random_element(&mut r, 3, 30);
                let s = residue_symbol_prime(&field, &a, prime);
                let sa = field.apply_automorphism(1, &a);
                let sp = field.ideal_apply_automorphism(1, &prime.lattice);
                let target = ideals
                    .iter()
                    .find(|q| q.lattice.key() == sp.key())
                    .expect("conjugate in orbit");
                assert_eq!(residue_symbol_prime(&field, &sa, target), s);
            }
        }
    }

    #[test]
    fn hilbert_infinity_cases() {
        let field = presets::cubic_field();
        let minus_one = FieldElement::from_i64(&[-1, 0, 0]);
        // both arguments -1: all three real places contribute -1
        assert_eq!(
            hilbert_infinity(&field, &minus_one, &minus_one).unwrap(),
            -1
        );
        // totally positive second argument: always +1
        let mut r = rng(31);
        for _ in 0..30 {
            let a = random_element(&mut r, 3, 10);
            if a.is_zero() {
                continue;
            }
            let b = FieldElement::from_i64(&[7, 0, 0]);
            assert_eq!(hilbert_infinity(&field, &a, &b).unwrap(), 1);
        }
    }

    #[test]
    fn rational_cells_reproduce_classical_reciprocity() {
        // for odd degree, (a/b)_K of rational integers collapses to the
        // Jacobi symbol, so the defect must match (-1)^((a-1)(b-1)/4)
        let field = presets::cubic_field();
        let mut r = rng(41);
        let mut done = 0;
        while done < 60 {
            let a_int = r.gen_range(1i64..60) * 2 + 1;
            let b_int = r.gen_range(1i64..60) * 2 + 1;
            if num_integer::Integer::gcd(&a_int, &b_int) != 1 {
                continue;
            }
            let a = FieldElement::rational(3, BigInt::from(a_int));
            let b = FieldElement::rational(3, BigInt::from(b_int));
            let m = reciprocity_defect(&field, &a, &b).unwrap();
            let expect = if (a_int % 4 == 3) && (b_int % 4 == 3) {
                -1
            } else {
                1
            };
            assert_eq!(m, expect, "a={a_int} b={b_int}");
            done += 1;
        }
    }

    #[test]
    fn derived_table_round_trips() {
        let field = presets::cubic_field();
        let mut r = rng(43);
        let table = derive_mu2_table(&field, 8, 20, &mut r).unwrap();
        assert!(table.populated_cells() > 0);
        let json = table.to_json();
        assert!(json.contains("min_samples"));
        // unpopulated cells error out
        let one = FieldElement::from_i64(&[5, 8, 8]);
        let other = FieldElement::from_i64(&[3, 8, 16]);
        if table
            .lookup(&one, &other)
            .is_err()
        {
            assert!(matches!(
                table.lookup(&one, &other),
                Err(Error::UnpopulatedCell(_))
            ));
        }
    }

    #[test]
    fn reciprocity_suite_holds_on_cubic() {
        let field = presets::cubic_field();
        let mut r = rng(47);
        let report = run_reciprocity_suite(&field, 6, 20, 100, &mut r).unwrap();
        assert!(report.populated_cells > 0);
        assert_eq!(report.failures, 0);
        assert!(report.checked_pairs >= 50, "{} checked", report.checked_pairs);
    }

    #[test]
    fn character_sum_over_residues_vanishes() {
        // sum over residues xi mod (b) of (xi / b) is 0 when (b) is a
        // non-square squarefree odd ideal (here: a degree-one prime)
        let field = presets::cubic_field();
        let b = FieldElement::from_i64(&[-3, 1, 0]);
        let nb = field.norm(&b).abs();
        assert!(nb.is_odd());
        let l = field.ideal_from_element(&b);
        let d0 = num_traits::ToPrimitive::to_i64(&l.hnf[0][0]).unwrap();
        let d1 = num_traits::ToPrimitive::to_i64(&l.hnf[1][1]).unwrap();
        let d2 = num_traits::ToPrimitive::to_i64(&l.hnf[2][2]).unwrap();
        let mut sum = 0i64;
        for x0 in 0..d0 {
            for x1 in 0..d1 {
                for x2 in 0..d2 {
                    let xi = FieldElement::from_i64(&[x0, x1, x2]);
                    sum += residue_symbol(&field, &xi, &b).unwrap() as i64;
                }
            }
        }
        assert_eq!(sum, 0);
    }
}
