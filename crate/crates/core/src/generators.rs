//! Generators of principal ideals and unit-domain reduction.
//!
//! A generator is found by LLL-reducing the ideal lattice under the
//! Minkowski quadratic form and enumerating short vectors with a growing
//! radius until an element of the right norm appears; exactness comes from
//! verifying the integer norm, never from the floats. Domain reduction
//! places the log vector inside the half-open fundamental parallelepiped of
//! the acting unit lattice (squares of units in the totally real
//! unit-condition case), with a canonical torsion pick for complex fields.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use std::collections::HashMap;

use crate::algebra::{Field, FieldElement, IdealLattice};
use crate::error::{Error, Result};
use crate::lll;

/// Element reduced into the unit fundamental domain.
#[derive(Debug, Clone)]
pub struct DomainReducedElement {
    pub element: FieldElement,
    /// coordinates in the acting unit-lattice basis, each in [0, 1)
    pub log_vector: Vec<f64>,
}

/// Enumeration budgets for generator search and box enumeration.
#[derive(Debug, Clone)]
pub struct EnumerationBudget {
    pub radius_doublings: u32,
    pub nodes_per_round: usize,
    pub max_box_points: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            radius_doublings: 6,
            nodes_per_round: 2_000_000,
            max_box_points: 1_250_000_000,
        }
    }
}

fn minkowski_row(field: &Field, coords: &[BigInt]) -> Vec<f64> {
    let vals = field.embed_vals(coords);
    let (r1, r2) = field.spec.signature;
    let mut row = Vec::with_capacity(field.degree());
    for v in vals.iter().take(r1) {
        row.push(v.re);
    }
    let s = 2f64.sqrt();
    for k in 0..r2 {
        let z = vals[r1 + 2 * k];
        row.push(s * z.re);
        row.push(s * z.im);
    }
    row
}

/// Find alpha with (alpha) = L, assuming L is principal. The element is
/// returned as found; callers needing a canonical generator compose with
/// `make_totally_positive` / `reduce_to_domain`.
pub fn short_generator(field: &Field, l: &IdealLattice) -> Result<FieldElement> {
    short_generator_with(field, l, &EnumerationBudget::default())
}

pub fn short_generator_with(
    field: &Field,
    l: &IdealLattice,
    budget: &EnumerationBudget,
) -> Result<FieldElement> {
    let n = field.degree();
    let target = l.norm.clone();
    if target.is_one() {
        return Ok(FieldElement::one(n));
    }
    let basis_elems: Vec<FieldElement> = l
        .hnf
        .iter()
        .map(|c| FieldElement::new(c.clone()))
        .collect();
    let rows: Vec<Vec<f64>> = basis_elems
        .iter()
        .map(|e| minkowski_row(field, &e.coords))
        .collect();
    let (reduced, transform) = lll::lll_reduce_f64(&rows, 0.99);
    let reduced_elems: Vec<FieldElement> = transform
        .iter()
        .map(|trow| {
            let mut acc = FieldElement::zero(n);
            for (j, &t) in trow.iter().enumerate() {
                if t != 0 {
                    for k in 0..n {
                        acc.coords[k] += &basis_elems[j].coords[k] * t;
                    }
                }
            }
            acc
        })
        .collect();
    // AM-GM floor for the Minkowski norm of a generator, and the first
    // reduced vector as a starting scale
    let nf = target.to_f64().unwrap_or(f64::MAX);
    let amgm = n as f64 * nf.powf(2.0 / n as f64);
    let first: f64 = reduced[0].iter().map(|x| x * x).sum();
    let mut radius = first.max(amgm) * 1.05;
    for _ in 0..budget.radius_doublings {
        let mut found: Option<FieldElement> = None;
        lll::enumerate_short_vectors(&reduced, radius, budget.nodes_per_round, &mut |coeffs| {
            if found.is_some() {
                return;
            }
            let mut cand = FieldElement::zero(n);
            for (i, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    for k in 0..n {
                        cand.coords[k] += &reduced_elems[i].coords[k] * c;
                    }
                }
            }
            if field.norm(&cand).abs() == target {
                found = Some(cand);
            }
        });
        if let Some(g) = found {
            return Ok(g);
        }
        radius *= 4.0;
    }
    Err(Error::GeneratorNotFound(target))
}

/// Multiply by the unique unit square class making the element totally
/// positive (totally real unit-condition fields). Identity for totally
/// complex fields, and for elements that are already totally positive.
pub fn make_totally_positive(field: &Field, a: &FieldElement) -> Result<FieldElement> {
    if field.is_totally_complex() {
        return Ok(a.clone());
    }
    let signs = field.real_signs(&a.coords)?;
    if signs.iter().all(|&s| s == 1) {
        return Ok(a.clone());
    }
    for (unit, usigns) in &field.sign_classes {
        if usigns
            .iter()
            .zip(&signs)
            .all(|(u, s)| u * s == 1)
        {
            return Ok(field.mul(unit, a));
        }
    }
    Err(Error::NotAchievable)
}

/// Reduce by the acting unit lattice into the half-open fundamental
/// parallelepiped; idempotent, and invariant under multiplying the argument
/// by squares of units.
pub fn reduce_to_domain(field: &Field, a: &FieldElement) -> Result<DomainReducedElement> {
    assert!(!a.is_zero(), "cannot reduce zero");
    let rank = field.unit_rank;
    if rank == 0 {
        return Ok(DomainReducedElement {
            element: canonical_torsion_pick(field, a),
            log_vector: Vec::new(),
        });
    }
    // Coordinates within 2^-20 of an integer are snapped to it: multiplying
    // the argument by lattice units shifts lambda by exact integers, so the
    // snap decision is identical across a unit orbit and the reduction stays
    // canonical; the half-open convention keeps exact boundary points at 0.
    let snap = 2f64.powi(-20);
    let mut out = a.clone();
    let mut lam = domain_coordinates(field, &out)?;
    let mut settled = false;
    for _ in 0..6 {
        let mut any = false;
        for i in 0..rank {
            if !lam[i].is_finite() {
                return Err(Error::PrecisionExhausted(
                    "log vector is not finite".into(),
                ));
            }
            let rounded = lam[i].round();
            let k = if (lam[i] - rounded).abs() < snap {
                rounded as i64
            } else {
                lam[i].floor() as i64
            };
            if k == 0 {
                continue;
            }
            any = true;
            let (base, times) = if k > 0 {
                (&field.acting_units_inv[i], k)
            } else {
                (&field.acting_units[i], -k)
            };
            for _ in 0..times {
                out = field.mul(&out, base);
            }
        }
        if !any {
            settled = true;
            break;
        }
        lam = domain_coordinates(field, &out)?;
    }
    if !settled {
        return Err(Error::PrecisionExhausted(
            "domain reduction did not settle".into(),
        ));
    }
    for l in lam.iter_mut() {
        if (*l - l.round()).abs() < snap {
            *l = 0.0;
        }
    }
    let element = canonical_torsion_pick(field, &out);
    Ok(DomainReducedElement {
        element,
        log_vector: lam,
    })
}

/// The centered variant: coefficients reduced into [-1/2, 1/2). This yields
/// the most balanced generator of an ideal, the one the coordinate-box
/// constant is calibrated for.
pub fn reduce_to_domain_centered(field: &Field, a: &FieldElement) -> Result<FieldElement> {
    assert!(!a.is_zero(), "cannot reduce zero");
    let rank = field.unit_rank;
    if rank == 0 {
        return Ok(a.clone());
    }
    let mut out = a.clone();
    for _ in 0..6 {
        let lam = domain_coordinates(field, &out)?;
        let mut any = false;
        for (i, l) in lam.iter().enumerate() {
            let k = l.round() as i64;
            if k == 0 {
                continue;
            }
            any = true;
            let (base, times) = if k > 0 {
                (&field.acting_units_inv[i], k)
            } else {
                (&field.acting_units[i], -k)
            };
            for _ in 0..times {
                out = field.mul(&out, base);
            }
        }
        if !any {
            return Ok(out);
        }
    }
    Err(Error::PrecisionExhausted(
        "centered reduction did not settle".into(),
    ))
}

/// Coordinates of the projected log vector in the acting-lattice basis.
fn domain_coordinates(field: &Field, a: &FieldElement) -> Result<Vec<f64>> {
    let rank = field.unit_rank;
    let vals = field.embed_vals(&a.coords);
    let logs = field.log_places(&vals);
    let n = field.degree() as f64;
    let norm_log = field.norm(a).abs().to_f64().map(|v| v.ln()).ok_or_else(|| {
        Error::PrecisionExhausted("norm too large for the float domain".into())
    })?;
    let (r1, _r2) = field.spec.signature;
    let centered: Vec<f64> = logs
        .iter()
        .enumerate()
        .take(rank)
        .map(|(v, lg)| {
            let w = if v < r1 { 1.0 } else { 2.0 };
            lg - w * norm_log / n
        })
        .collect();
    let inv = &field.acting_log_inv;
    // lambda = centered * inv (basis rows): solve row-vector system
    let mut lam = vec![0.0f64; rank];
    for (j, l) in lam.iter_mut().enumerate() {
        let mut acc = 0.0;
        for i in 0..rank {
            acc += centered[i] * inv[i][j];
        }
        *l = acc;
    }
    Ok(lam)
}

/// For totally complex fields, the generators in the domain form one torsion
/// orbit; pick the lexicographically smallest coordinate vector. Totally
/// real fields keep the element untouched (the positive representative).
fn canonical_torsion_pick(field: &Field, a: &FieldElement) -> FieldElement {
    if !field.is_totally_complex() {
        return a.clone();
    }
    field
        .torsion_elements
        .iter()
        .map(|t| field.mul(t, a))
        .min_by(|x, y| x.coords.cmp(&y.coords))
        .unwrap()
}

/// Every principal odd ideal of norm in [3, X] found by enumerating the
/// coordinate box |a_i| <= C X^(1/n), deduplicated by HNF key; one canonical
/// generator per ideal. Partitioned by leading-coordinate slabs.
pub fn enumerate_principal_odd_ideals(
    field: &Field,
    x: u64,
    budget: &EnumerationBudget,
) -> Result<Vec<(IdealLattice, FieldElement)>> {
    let n = field.degree();
    let bound = (field.box_constant * (x as f64).powf(1.0 / n as f64)).ceil() as i64;
    let width = 2 * bound + 1;
    let points = (width as f64).powi(n as i32);
    if points > budget.max_box_points as f64 {
        return Err(Error::CeilingExceeded(format!(
            "box of {points:.3e} points exceeds the {} ceiling",
            budget.max_box_points
        )));
    }
    let slabs: Vec<i64> = (-bound..=bound).collect();
    let maps: Vec<HashMap<Vec<BigInt>, FieldElement>> = slabs
        .par_iter()
        .map(|&a0| {
            let mut local: HashMap<Vec<BigInt>, FieldElement> = HashMap::new();
            let mut coords = vec![0i64; n];
            coords[0] = a0;
            scan_box(field, &mut coords, 1, bound, x, &mut local);
            local
        })
        .collect();
    let mut merged: HashMap<Vec<BigInt>, FieldElement> = HashMap::new();
    for m in maps {
        for (k, v) in m {
            // commutative merge: keep the lexicographically smaller generator
            merged
                .entry(k)
                .and_modify(|old| {
                    if v.coords < old.coords {
                        *old = v.clone();
                    }
                })
                .or_insert(v);
        }
    }
    let mut out: Vec<(IdealLattice, FieldElement)> = merged
        .into_iter()
        .map(|(_, gen)| {
            let lat = field.ideal_from_element(&gen);
            let canonical = canonicalize_generator(field, &gen);
            (lat, canonical)
        })
        .collect();
    out.sort_by(|a, b| (a.0.norm.clone(), a.0.key()).cmp(&(b.0.norm.clone(), b.0.key())));
    Ok(out)
}

fn scan_box(
    field: &Field,
    coords: &mut Vec<i64>,
    depth: usize,
    bound: i64,
    x: u64,
    out: &mut HashMap<Vec<BigInt>, FieldElement>,
) {
    let n = coords.len();
    if depth == n {
        if coords.iter().all(|&c| c == 0) {
            return;
        }
        let nrm = match field.norm_i64(coords) {
            Some(v) => v,
            None => field
                .norm(&FieldElement::from_i64(coords))
                .to_i128()
                .expect("desk-scale norm"),
        };
        let abs = nrm.unsigned_abs();
        if abs < 3 || abs > x as u128 || abs % 2 == 0 {
            return;
        }
        let elem = FieldElement::from_i64(coords);
        let key = field.ideal_from_element(&elem).key();
        out.entry(key)
            .and_modify(|old| {
                if elem.coords < old.coords {
                    *old = elem.clone();
                }
            })
            .or_insert(elem);
        return;
    }
    for v in -bound..=bound {
        coords[depth] = v;
        scan_box(field, coords, depth + 1, bound, x, out);
    }
    coords[depth] = 0;
}

/// Canonical generator of an ideal: totally positive (real case) and
/// domain-reduced with the canonical torsion pick.
pub fn canonicalize_generator(field: &Field, gen: &FieldElement) -> FieldElement {
    let positive = make_totally_positive(field, gen).unwrap_or_else(|_| gen.clone());
    match reduce_to_domain(field, &positive) {
        Ok(r) => r.element,
        Err(_) => positive,
    }
}

/// All prime ideals of odd norm <= X (including odd ramified primes), each
/// with a canonical generator, sorted by (norm, key).
pub fn prime_ideals_with_generators(
    field: &Field,
    x: u64,
) -> Result<Vec<(IdealLattice, FieldElement, u64, usize)>> {
    let primes = crate::intmath::primes_up_to(x);
    let chunks: Vec<Result<Vec<(IdealLattice, FieldElement, u64, usize)>>> = primes
        .par_iter()
        .filter(|&&p| p > 2)
        .map(|&p| {
            let mut out = Vec::new();
            let ideals = crate::primes::factor_prime_allow_ramified(field, p)?;
            for prime in ideals {
                if prime.norm() > BigInt::from(x) {
                    continue;
                }
                let gen = short_generator(field, &prime.lattice)?;
                let gen = canonicalize_generator(field, &gen);
                out.push((prime.lattice, gen, p, prime.f));
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for c in chunks {
        all.extend(c?);
    }
    all.sort_by(|a, b| (a.0.norm.clone(), a.0.key()).cmp(&(b.0.norm.clone(), b.0.key())));
    Ok(all)
}

/// Stream of every principal odd ideal of norm in [3, X] built
/// multiplicatively from prime ideals (unique factorization gives each ideal
/// exactly once), with generator products reduced as they grow. Sorted by
/// (norm, key). For the h = 1 preset fields this is exactly the set the box
/// enumeration produces, at much larger X.
pub fn principal_odd_ideal_stream(
    field: &Field,
    x: u64,
) -> Result<Vec<(u64, IdealLattice, FieldElement)>> {
    let primes = prime_ideals_with_generators(field, x)?;
    let norms: Vec<u64> = primes
        .iter()
        .map(|(l, _, _, _)| l.norm.to_u64().expect("prime power fits"))
        .collect();
    let mut out: Vec<(u64, FieldElement)> = Vec::new();
    let one = FieldElement::one(field.degree());
    let mut stack: Vec<(usize, u64, FieldElement)> = vec![(0, 1, one)];
    while let Some((start, nrm, gen)) = stack.pop() {
        if nrm >= 3 {
            out.push((nrm, gen.clone()));
        }
        for i in start..primes.len() {
            let q = norms[i];
            // prime ideals are sorted by norm, so the first overflow ends the row
            if nrm.saturating_mul(q) > x {
                break;
            }
            let mut cur = nrm * q;
            let mut g = field.mul(&gen, &primes[i].1);
            let mut work: Vec<(usize, u64, FieldElement)> = Vec::new();
            loop {
                let reduced = maybe_reduce(field, &g);
                work.push((i + 1, cur, reduced.clone()));
                if cur.saturating_mul(q) > x {
                    break;
                }
                cur *= q;
                g = field.mul(&reduced, &primes[i].1);
            }
            stack.extend(work);
        }
    }
    let mut full: Vec<(u64, IdealLattice, FieldElement)> = out
        .into_par_iter()
        .map(|(nrm, gen)| {
            let lat = field.ideal_from_element(&gen);
            (nrm, lat, canonicalize_generator(field, &gen))
        })
        .collect();
    full.sort_by(|a, b| (a.0, a.1.key()).cmp(&(b.0, b.1.key())));
    Ok(full)
}

fn maybe_reduce(field: &Field, gen: &FieldElement) -> FieldElement {
    let big = gen.coords.iter().any(|c| c.bits() > 48);
    if big {
        canonicalize_generator(field, gen)
    } else {
        gen.clone()
    }
}

/// Independent ideal-count oracle: the number of odd ideals of norm in
/// [3, X], computed purely from splitting types (no lattices, no
/// enumeration). For h = 1 fields every ideal is principal.
pub fn odd_ideal_count_oracle(field: &Field, x: u64) -> Result<u64> {
    let primes = crate::intmath::primes_up_to(x);
    // per prime: list of residue degrees of the primes above it
    let mut norm_lists: Vec<Vec<u64>> = Vec::new();
    for &p in &primes {
        if p == 2 {
            continue;
        }
        let ideals = crate::primes::factor_prime_allow_ramified(field, p)?;
        let degs: Vec<u64> = ideals
            .iter()
            .map(|i| i.norm().to_u64().unwrap_or(u64::MAX))
            .filter(|&q| q <= x)
            .collect();
        if !degs.is_empty() {
            norm_lists.push(degs);
        }
    }
    // count multiplicative combinations with norm <= x
    fn count(lists: &[Vec<u64>], idx: usize, budget: u64) -> u64 {
        if idx == lists.len() {
            return 1;
        }
        // skip entirely
        let mut total = count(lists, idx + 1, budget);
        // choose exponents for each ideal above this prime
        fn choose(degs: &[u64], j: usize, budget: u64) -> Vec<u64> {
            // returns multiset of achievable norm contributions > 1? simpler:
            // recursively accumulate contributions
            if j == degs.len() {
                return vec![1];
            }
            let rest = choose(degs, j + 1, budget);
            let mut out = Vec::new();
            for r in rest {
                let mut q = r;
                loop {
                    out.push(q);
                    match q.checked_mul(degs[j]) {
                        Some(next) if next <= budget => q = next,
                        _ => break,
                    }
                }
            }
            out
        }
        let contribs = choose(&lists[idx], 0, budget);
        for c in contribs {
            if c > 1 && c <= budget {
                total += count(lists, idx + 1, budget / c);
            }
        }
        total
    }
    // subtract 1 for the unit ideal, which the convention excludes
    Ok(count(&norm_lists, 0, x) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generator_of_rational_ideal() {
        let field = presets::cubic_field();
        let l = field.ideal_rational(&BigInt::from(7));
        let g = short_generator(&field, &l).unwrap();
        assert_eq!(field.norm(&g).abs(), BigInt::from(343));
        assert!(l.contains_element(&g));
        // unit multiple of 7: ideal equality
        assert_eq!(field.ideal_from_element(&g).key(), l.key());
    }

    #[test]
    fn generators_for_split_primes() {
        let field = presets::cubic_field();
        for &p in &[17u64, 19, 37, 53, 71, 73] {
            for prime in crate::primes::factor_rational_prime(&field, p).unwrap() {
                let g = short_generator(&field, &prime.lattice).unwrap();
                assert_eq!(field.norm(&g).abs(), BigInt::from(p));
                assert!(prime.lattice.contains_element(&g));
            }
        }
    }

    #[test]
    fn make_totally_positive_fixes_signs() {
        let field = presets::cubic_field();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let a = crate::symbols::random_element(&mut rng, 3, 25);
            if a.is_zero() {
                continue;
            }
            let pos = make_totally_positive(&field, &a).unwrap();
            let signs = field.real_signs(&pos.coords).unwrap();
            assert_eq!(signs, vec![1, 1, 1]);
            // same ideal
            assert_eq!(
                field.ideal_from_element(&a).key(),
                field.ideal_from_element(&pos).key()
            );
        }
    }

    #[test]
    fn totally_negative_odd_degree_uses_minus_one() {
        let field = presets::cubic_field();
        let a = FieldElement::from_i64(&[-7, 0, 0]);
        let pos = make_totally_positive(&field, &a).unwrap();
        assert_eq!(pos, FieldElement::from_i64(&[7, 0, 0]));
    }

    #[test]
    fn reduce_is_idempotent_and_square_invariant() {
        let field = presets::cubic_field();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let a = crate::symbols::random_element(&mut rng, 3, 20);
            if a.is_zero() {
                continue;
            }
            let pos = make_totally_positive(&field, &a).unwrap();
            let red = reduce_to_domain(&field, &pos).unwrap();
            let red2 = reduce_to_domain(&field, &red.element).unwrap();
            assert_eq!(red.element, red2.element);
            for x in &red.log_vector {
                assert!((0.0..1.0).contains(x));
            }
            // multiplying by a random even unit power does not move the output
            let e1 = rng.gen_range(-2i64..=2);
            let mut shifted = pos.clone();
            let u = &field.acting_units[0];
            let ui = &field.acting_units_inv[0];
            for _ in 0..e1.unsigned_abs() {
                shifted = field.mul(&shifted, if e1 > 0 { u } else { ui });
            }
            let red3 = reduce_to_domain(&field, &shifted).unwrap();
            assert_eq!(red.element, red3.element);
        }
    }

    #[test]
    fn reduce_unit_input_has_zero_log_vector() {
        let field = presets::cubic_field();
        // acting unit = square of a fundamental unit: reduces to 1
        let u = field.acting_units[0].clone();
        let red = reduce_to_domain(&field, &u).unwrap();
        assert_eq!(red.element, FieldElement::one(3));
        for x in &red.log_vector {
            assert!(x.abs() < 1e-9);
        }
    }

    #[test]
    fn box_enumeration_matches_counting_oracle() {
        let field = presets::cubic_field();
        let x = 1000u64;
        let found = enumerate_principal_odd_ideals(&field, x, &EnumerationBudget::default())
            .unwrap();
        let expected = odd_ideal_count_oracle(&field, x).unwrap();
        assert_eq!(found.len() as u64, expected);
        // no ideal appears twice
        let mut keys: Vec<_> = found.iter().map(|(l, _)| l.key()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), found.len());
        // emitted generators regenerate their lattice, and the centered
        // representative of every ideal lands inside the coordinate box
        let bound = field.box_constant * (x as f64).powf(1.0 / 3.0);
        for (l, g) in &found {
            assert_eq!(field.ideal_from_element(g).key(), l.key());
            let centered = reduce_to_domain_centered(&field, g).unwrap();
            for c in &centered.coords {
                let cf = c.to_f64().unwrap();
                assert!(cf.abs() <= bound + 0.5, "coord {cf} vs bound {bound}");
            }
        }
    }

    #[test]
    fn stream_route_agrees_with_box_route() {
        let field = presets::cubic_field();
        let x = 1000u64;
        let by_box = enumerate_principal_odd_ideals(&field, x, &EnumerationBudget::default())
            .unwrap();
        let by_stream = principal_odd_ideal_stream(&field, x).unwrap();
        assert_eq!(by_box.len(), by_stream.len());
        for ((l1, g1), (nrm, l2, g2)) in by_box.iter().zip(by_stream.iter()) {
            assert_eq!(l1.key(), l2.key());
            assert_eq!(l1.norm.to_u64().unwrap(), *nrm);
            assert_eq!(g1, g2, "canonical generators differ at norm {nrm}");
        }
    }

    #[test]
    fn norm_one_input_returns_empty() {
        let field = presets::cubic_field();
        let found =
            enumerate_principal_odd_ideals(&field, 1, &EnumerationBudget::default()).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn nonprincipal_style_budget_exhaustion_errors() {
        // a lattice that is not an ideal (and in particular not principal):
        // the search must fail cleanly rather than loop
        let field = presets::cubic_field();
        let cols = vec![
            vec![BigInt::from(4), BigInt::zero(), BigInt::zero()],
            vec![BigInt::zero(), BigInt::from(1), BigInt::zero()],
            vec![BigInt::zero(), BigInt::zero(), BigInt::from(1)],
        ];
        let l = IdealLattice::from_hnf(cols);
        let budget = EnumerationBudget {
            radius_doublings: 2,
            nodes_per_round: 10_000,
            max_box_points: 1_000_000,
        };
        assert!(matches!(
            short_generator_with(&field, &l, &budget),
            Err(Error::GeneratorNotFound(_))
        ));
    }
}
