//! Exact arithmetic in an explicitly presented Galois number field.
//!
//! A field is shipped as pure data (`FieldSpec`): structure constants of the
//! integral basis, automorphism matrices, unit and torsion data, class
//! number, discriminant. Nothing is trusted: `Field::new` re-derives every
//! claimed invariant before the spec is usable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::intmath;
use crate::linalg::{self, Col};
use crate::numeric::{Cplx, Embeddings};
use crate::poly;

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// Integer coordinate vector with respect to the integral basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coords: Vec<BigInt>,
}

impl FieldElement {
    pub fn new(coords: Vec<BigInt>) -> Self {
        FieldElement { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        FieldElement {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        FieldElement {
            coords: vec![BigInt::zero(); n],
        }
    }

    pub fn one(n: usize) -> Self {
        let mut coords = vec![BigInt::zero(); n];
        coords[0] = BigInt::one();
        FieldElement { coords }
    }

    pub fn rational(n: usize, value: BigInt) -> Self {
        let mut coords = vec![BigInt::zero(); n];
        coords[0] = value;
        FieldElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Residue class modulo 8 of an element (one residue in [0,8) per coordinate).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus8Class(pub Vec<u8>);

impl Modulus8Class {
    pub fn of(a: &FieldElement) -> Self {
        Modulus8Class(
            a.coords
                .iter()
                .map(|c| c.mod_floor(&BigInt::from(8)).to_u8().unwrap())
                .collect(),
        )
    }

    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

// ---------------------------------------------------------------------------
// Ideal lattices
// ---------------------------------------------------------------------------

/// Full-rank sublattice of the ring of integers in Hermite normal form.
/// The HNF is unique, so `key()` is a canonical dedup token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealLattice {
    pub hnf: Vec<Col>,
    pub norm: BigInt,
}

impl IdealLattice {
    pub fn from_hnf(hnf: Vec<Col>) -> Self {
        let norm = linalg::hnf_det(&hnf);
        IdealLattice { hnf, norm }
    }

    pub fn whole_ring(n: usize) -> Self {
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut c = vec![BigInt::zero(); n];
            c[j] = BigInt::one();
            cols.push(c);
        }
        IdealLattice::from_hnf(cols)
    }

    pub fn key(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for c in &self.hnf {
            out.extend(c.iter().cloned());
        }
        out
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        linalg::hnf_contains(&self.hnf, v)
    }

    pub fn contains_element(&self, a: &FieldElement) -> bool {
        self.contains(&a.coords)
    }

    /// Does `self` divide `other`, i.e. other ⊆ self?
    pub fn divides(&self, other: &IdealLattice) -> bool {
        other.hnf.iter().all(|c| self.contains(c))
    }

    pub fn is_odd(&self) -> bool {
        self.norm.is_odd()
    }
}

// ---------------------------------------------------------------------------
// Spec data
// ---------------------------------------------------------------------------

/// Description of one class representative: a degree-one prime (p, theta - c)
/// or more generally (p, g(theta)) for an irreducible factor g of the
/// defining polynomial mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRepSpec {
    pub p: u64,
    pub g_factor: Vec<BigInt>,
}

/// A Galois number field presented by integer structure constants.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    pub name: String,
    pub degree: usize,
    pub defining_polynomial: Vec<BigInt>,
    /// mult_table[i][j] = coordinates of basis_i * basis_j
    pub mult_table: Vec<Vec<Vec<BigInt>>>,
    /// row-major matrices acting on coordinate vectors; index 0 is identity
    pub automorphisms: Vec<Vec<Vec<BigInt>>>,
    pub signature: (usize, usize),
    pub torsion_order: u32,
    pub torsion_generator: Vec<BigInt>,
    pub fundamental_units: Vec<Vec<BigInt>>,
    pub class_number: u32,
    pub discriminant: BigInt,
    pub class_reps: Option<Vec<ClassRepSpec>>,
    pub unit_condition_flag: bool,
    /// coordinates of the root of the defining polynomial in the shipped
    /// basis; None means the basis is the power basis of that root. When the
    /// basis is not a power basis the change-of-basis index must be a power
    /// of 2, so that every odd-prime computation stays exact.
    pub generator_coords: Option<Vec<BigInt>>,
}

impl FieldSpec {
    /// Build structure constants and automorphism matrices for a monogenic
    /// field: basis (1, theta, ..., theta^(n-1)), automorphisms given by the
    /// coordinate vectors of the images of theta.
    pub fn from_power_basis(
        name: &str,
        poly: Vec<BigInt>,
        sigma_images: Vec<Vec<BigInt>>,
        signature: (usize, usize),
        torsion_order: u32,
        torsion_generator: Vec<BigInt>,
        fundamental_units: Vec<Vec<BigInt>>,
        class_number: u32,
        discriminant: BigInt,
        class_reps: Option<Vec<ClassRepSpec>>,
        unit_condition_flag: bool,
    ) -> FieldSpec {
        let n = poly::zpoly_deg(&poly);
        let mult_table = power_basis_mult_table(&poly);
        let automorphisms = sigma_images
            .iter()
            .map(|img| automorphism_matrix(&poly, img))
            .collect();
        FieldSpec {
            name: name.to_string(),
            degree: n,
            defining_polynomial: poly,
            mult_table,
            automorphisms,
            signature,
            torsion_order,
            torsion_generator,
            fundamental_units,
            class_number,
            discriminant,
            class_reps,
            unit_condition_flag,
            generator_coords: None,
        }
    }
}

/// Structure constants of the power basis of Z[x]/(poly).
pub fn power_basis_mult_table(poly: &[BigInt]) -> Vec<Vec<Vec<BigInt>>> {
    let n = poly::zpoly_deg(poly);
    // theta^m reduced, for m <= 2n-2
    let mut pows: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n - 1);
    let mut cur = vec![BigInt::zero(); n];
    cur[0] = BigInt::one();
    pows.push(cur.clone());
    for _ in 1..(2 * n - 1) {
        // multiply by theta: shift, then reduce the overflow with poly
        let mut next = vec![BigInt::zero(); n + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] = c.clone();
        }
        let top = next.pop().unwrap();
        if !top.is_zero() {
            for i in 0..n {
                let t = &next[i] - &top * &poly[i];
                next[i] = t;
            }
        }
        cur = next;
        pows.push(cur.clone());
    }
    (0..n)
        .map(|i| (0..n).map(|j| pows[i + j].clone()).collect())
        .collect()
}

/// Matrix of the ring map theta -> image on the power basis.
pub fn automorphism_matrix(poly: &[BigInt], image: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = poly::zpoly_deg(poly);
    let table = power_basis_mult_table(poly);
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai * bj;
                for (k, t) in table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &prod * t;
                    }
                }
            }
        }
        out
    };
    // columns: image^j
    let mut col = vec![BigInt::zero(); n];
    col[0] = BigInt::one();
    let mut mat = vec![vec![BigInt::zero(); n]; n];
    for j in 0..n {
        for i in 0..n {
            mat[i][j] = col[i].clone();
        }
        if j + 1 < n {
            col = mul(&col, image);
        }
    }
    mat
}

// ---------------------------------------------------------------------------
// Validation report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ValidationCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
    /// verdict of the totally-positive-unit enumeration (true = every totally
    /// positive unit class is trivial; vacuously true for totally complex)
    pub unit_condition_verdict: bool,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ValidationCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}{}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", c.detail)
                }
            )?;
        }
        writeln!(f, "unit condition verdict: {}", self.unit_condition_verdict)
    }
}

// ---------------------------------------------------------------------------
// The validated field
// ---------------------------------------------------------------------------

/// Constant F = 2^(2h+3) * f * |D_K| attached to the class representatives.
#[derive(Debug, Clone)]
pub struct BigFConstant {
    pub value: BigInt,
    pub two_power: BigInt,
    pub f: BigInt,
    pub disc_abs: BigInt,
}

impl BigFConstant {
    pub fn assemble(two_power: BigInt, f: BigInt, disc_abs: BigInt) -> Self {
        let value = &two_power * &f * &disc_abs;
        BigFConstant {
            value,
            two_power,
            f,
            disc_abs,
        }
    }
}

/// Change of basis between the shipped integral basis and the power basis
/// of the defining polynomial's root. adj * P = det * I exactly.
pub struct PowerChange {
    /// columns: basis coordinates of theta^k
    pub p_cols: Vec<Vec<BigInt>>,
    pub det: BigInt,
    /// adjugate of the column matrix [theta^k]_i, row-major
    pub adj: Vec<Vec<BigInt>>,
}

/// A `FieldSpec` that has survived validation, with derived caches.
pub struct Field {
    pub spec: FieldSpec,
    pub emb: Embeddings,
    pub report: ValidationReport,
    /// basis-to-power-basis data when the shipped basis is not a power basis
    pub power_change: Option<PowerChange>,
    /// embedding rows of the shipped basis: basis_emb[v][i] = iota_v(e_i)
    pub basis_emb: Vec<Vec<Cplx>>,
    // group structure of the automorphisms
    pub auto_compose: Vec<Vec<usize>>,
    pub auto_inverse: Vec<usize>,
    pub auto_order: Vec<u32>,
    /// lowest index of a generator when the group is cyclic
    pub cyclic_generator: Option<usize>,
    // unit machinery
    pub unit_rank: usize,
    /// basis elements of the lattice acting in domain reduction
    /// (squares of units in the totally real unit-condition case)
    pub acting_units: Vec<FieldElement>,
    pub acting_units_inv: Vec<FieldElement>,
    pub acting_log_basis: Vec<Vec<f64>>,
    pub acting_log_inv: Vec<Vec<f64>>,
    /// representatives of the unit square classes V/V^2 (2^rank products)
    pub unit_square_classes: Vec<FieldElement>,
    /// torsion elements t^0..t^(|T|-1)
    pub torsion_elements: Vec<FieldElement>,
    /// (unit, certified sign vector) for +-1 times square-free unit products
    pub sign_classes: Vec<(FieldElement, Vec<i8>)>,
    /// coordinate box constant: reduced elements of norm <= X satisfy
    /// |a_i| <= box_constant * X^(1/n)
    pub box_constant: f64,
    pub class_rep_ideals: Vec<(ClassRepSpec, IdealLattice)>,
    pub big_f: Option<BigFConstant>,
    mult_i64: Option<Vec<i64>>,
}

fn identity_matrix(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field> {
        let emb = Embeddings::build(&spec.defining_polynomial)?;
        let power_change = build_power_change(&spec)?;
        let basis_emb = basis_embedding_rows(&spec, &emb, &power_change);
        let (report, derived) = validate(&spec, &emb, &power_change, &basis_emb)?;
        if let Some(fail) = report.first_failure() {
            return Err(Error::StructuralFailure(format!(
                "{}: {}",
                fail.name, fail.detail
            )));
        }
        if spec.unit_condition_flag && !report.unit_condition_verdict {
            return Err(Error::UnitConditionFailed(
                "claimed flag refuted by sign enumeration".into(),
            ));
        }
        let mut field = Field {
            auto_compose: derived.auto_compose,
            auto_inverse: derived.auto_inverse,
            auto_order: derived.auto_order,
            cyclic_generator: derived.cyclic_generator,
            unit_rank: derived.unit_rank,
            acting_units: Vec::new(),
            acting_units_inv: Vec::new(),
            acting_log_basis: Vec::new(),
            acting_log_inv: Vec::new(),
            unit_square_classes: Vec::new(),
            torsion_elements: Vec::new(),
            sign_classes: derived.sign_classes,
            box_constant: 0.0,
            class_rep_ideals: Vec::new(),
            big_f: None,
            mult_i64: None,
            spec,
            emb,
            report,
            power_change,
            basis_emb,
        };
        field.build_unit_caches()?;
        field.build_class_rep_caches()?;
        field.build_fast_tables();
        Ok(field)
    }

    /// The root of the defining polynomial as an element of the basis.
    pub fn theta_element(&self) -> FieldElement {
        match &self.spec.generator_coords {
            Some(c) => FieldElement::new(c.clone()),
            None => {
                let mut t = FieldElement::zero(self.spec.degree);
                t.coords[1] = BigInt::one();
                t
            }
        }
    }

    /// Numeric embeddings of an element of the shipped basis (all n places,
    /// conjugate pairs adjacent).
    pub fn embed_vals(&self, coords: &[BigInt]) -> Vec<Cplx> {
        let cf: Vec<f64> = coords.iter().map(|c| c.to_f64().unwrap()).collect();
        self.basis_emb
            .iter()
            .map(|row| {
                let mut acc = Cplx::zero();
                for (i, &c) in cf.iter().enumerate() {
                    if c != 0.0 {
                        acc = acc.add(row[i].scale(c));
                    }
                }
                acc
            })
            .collect()
    }

    /// Certified signs at the real places.
    pub fn real_signs(&self, coords: &[BigInt]) -> Result<Vec<i8>> {
        match &self.power_change {
            None => self.emb.real_signs(coords),
            Some(change) => {
                // theta-power coefficients scaled by |det|: sign-preserving
                let scaled = theta_coeffs_scaled(change, coords);
                self.emb.real_signs(&scaled)
            }
        }
    }

    /// Row-major matrix converting basis coordinates to theta-power
    /// coefficients mod the odd prime p; None for power bases.
    pub fn basis_to_theta_mod_p(&self, p: u64) -> Option<Vec<u64>> {
        let change = self.power_change.as_ref()?;
        let n = self.spec.degree;
        let pb = BigInt::from(p);
        let det_mod = change.det.mod_floor(&pb).to_u64().unwrap();
        let det_inv = crate::poly::mod_inverse(det_mod, p);
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let a = change.adj[i][j].mod_floor(&pb).to_u64().unwrap();
                out[i * n + j] = ((a as u128 * det_inv as u128) % p as u128) as u64;
            }
        }
        Some(out)
    }

    pub fn degree(&self) -> usize {
        self.spec.degree
    }

    pub fn is_totally_real(&self) -> bool {
        self.spec.signature.1 == 0
    }

    pub fn is_totally_complex(&self) -> bool {
        self.spec.signature.0 == 0
    }

    // -- ring operations ----------------------------------------------------

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x + y)
                .collect(),
        )
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x - y)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement::new(a.coords.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.spec.degree;
        let mut out = vec![BigInt::zero(); n];
        for (i, ai) in a.coords.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coords.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai * bj;
                for (k, t) in self.spec.mult_table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &prod * t;
                    }
                }
            }
        }
        FieldElement::new(out)
    }

    pub fn pow(&self, a: &FieldElement, e: u32) -> FieldElement {
        let mut acc = FieldElement::one(self.spec.degree);
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Multiplication-by-a matrix, rows over the basis.
    pub fn mult_matrix(&self, a: &FieldElement) -> Vec<Vec<BigInt>> {
        let n = self.spec.degree;
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for j in 0..n {
            let mut ej = FieldElement::zero(n);
            ej.coords[j] = BigInt::one();
            let prod = self.mul(a, &ej);
            for i in 0..n {
                m[i][j] = prod.coords[i].clone();
            }
        }
        m
    }

    /// Field norm: determinant of the multiplication matrix.
    pub fn norm(&self, a: &FieldElement) -> BigInt {
        if let Some(v) = self.norm_i128(a) {
            return BigInt::from(v);
        }
        linalg::det_bareiss(&self.mult_matrix(a))
    }

    fn norm_i128(&self, a: &FieldElement) -> Option<i128> {
        let table = self.mult_i64.as_ref()?;
        let n = self.spec.degree;
        let mut coords = Vec::with_capacity(n);
        for c in &a.coords {
            coords.push(c.to_i64()?);
        }
        self.norm_i64_coords(table, &coords)
    }

    /// Norm of small-coordinate elements without heap allocation, or None on
    /// overflow (callers fall back to the exact BigInt path).
    pub fn norm_i64(&self, coords: &[i64]) -> Option<i128> {
        let table = self.mult_i64.as_ref()?;
        self.norm_i64_coords(table, coords)
    }

    fn norm_i64_coords(&self, table: &[i64], coords: &[i64]) -> Option<i128> {
        let n = self.spec.degree;
        if n > 8 {
            return None;
        }
        let mut m = [[0i128; 8]; 8];
        for (i, &ai) in coords.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let base = i * n * n;
            for j in 0..n {
                for k in 0..n {
                    let t = table[base + j * n + k];
                    if t != 0 {
                        let add = (ai as i128).checked_mul(t as i128)?;
                        m[k][j] = m[k][j].checked_add(add)?;
                    }
                }
            }
        }
        linalg::det_i128_stack(&mut m, n)
    }

    pub fn trace(&self, a: &FieldElement) -> BigInt {
        let m = self.mult_matrix(a);
        (0..self.spec.degree).fold(BigInt::zero(), |acc, i| acc + &m[i][i])
    }

    pub fn apply_automorphism(&self, i: usize, a: &FieldElement) -> FieldElement {
        let m = &self.spec.automorphisms[i];
        let n = self.spec.degree;
        let mut out = vec![BigInt::zero(); n];
        for (r, row) in m.iter().enumerate() {
            let mut acc = BigInt::zero();
            for (c, entry) in row.iter().enumerate() {
                if !entry.is_zero() {
                    acc += entry * &a.coords[c];
                }
            }
            out[r] = acc;
        }
        FieldElement::new(out)
    }

    /// Inverse of a unit: product of its nontrivial conjugates over the norm.
    pub fn unit_inverse(&self, u: &FieldElement) -> FieldElement {
        let nrm = self.norm(u);
        assert!(
            nrm.clone().abs().is_one(),
            "unit_inverse requires a unit, norm was {nrm}"
        );
        let mut prod = FieldElement::one(self.spec.degree);
        for i in 1..self.spec.automorphisms.len() {
            prod = self.mul(&prod, &self.apply_automorphism(i, u));
        }
        if nrm.is_negative() {
            prod = self.neg(&prod);
        }
        prod
    }

    pub fn reduce_mod(&self, a: &FieldElement, m: &BigInt) -> FieldElement {
        FieldElement::new(a.coords.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Numeric embeddings with an exact-norm cross check at the requested
    /// precision. Only the native f64 working precision is supported.
    pub fn embed_checked(&self, a: &FieldElement, precision: u32) -> Result<Vec<Cplx>> {
        if precision < 53 {
            return Err(Error::PrecisionExhausted(
                "precision below 53 bits is not meaningful here".into(),
            ));
        }
        if precision > 53 {
            return Err(Error::PrecisionExhausted(format!(
                "requested {precision} bits, working precision is 53"
            )));
        }
        let vals = self.embed_vals(&a.coords);
        let mut prod = Cplx::one();
        for v in &vals {
            prod = prod.mul(*v);
        }
        let nrm = self.norm(a).to_f64().unwrap();
        let tol = 2f64.powf(1.0 - precision.min(53) as f64 / 2.0);
        let denom = nrm.abs().max(1.0);
        if ((prod.re - nrm).abs() + prod.im.abs()) / denom > tol {
            return Err(Error::PrecisionExhausted(format!(
                "embedding product {} vs exact norm {}",
                prod.re, nrm
            )));
        }
        Ok(vals)
    }

    // -- ideals ---------------------------------------------------------------

    pub fn ideal_from_element(&self, a: &FieldElement) -> IdealLattice {
        let n = self.spec.degree;
        let cols: Vec<Col> = (0..n)
            .map(|j| {
                let mut ej = FieldElement::zero(n);
                ej.coords[j] = BigInt::one();
                self.mul(a, &ej).coords
            })
            .collect();
        IdealLattice::from_hnf(linalg::hnf_full_rank(n, &cols))
    }

    pub fn ideal_mul(&self, a: &IdealLattice, b: &IdealLattice) -> IdealLattice {
        let n = self.spec.degree;
        let mut cols = Vec::with_capacity(n * n);
        for x in &a.hnf {
            for y in &b.hnf {
                cols.push(
                    self.mul(&FieldElement::new(x.clone()), &FieldElement::new(y.clone()))
                        .coords,
                );
            }
        }
        IdealLattice::from_hnf(linalg::hnf_full_rank(n, &cols))
    }

    pub fn ideal_pow(&self, a: &IdealLattice, e: u32) -> IdealLattice {
        let mut acc = IdealLattice::whole_ring(self.spec.degree);
        for _ in 0..e {
            acc = self.ideal_mul(&acc, a);
        }
        acc
    }

    pub fn ideal_rational(&self, m: &BigInt) -> IdealLattice {
        let n = self.spec.degree;
        let cols: Vec<Col> = (0..n)
            .map(|j| {
                let mut c = vec![BigInt::zero(); n];
                c[j] = m.abs();
                c
            })
            .collect();
        IdealLattice::from_hnf(cols)
    }

    /// Image of an ideal under an automorphism.
    pub fn ideal_apply_automorphism(&self, i: usize, l: &IdealLattice) -> IdealLattice {
        let n = self.spec.degree;
        let cols: Vec<Col> = l
            .hnf
            .iter()
            .map(|c| {
                self.apply_automorphism(i, &FieldElement::new(c.clone()))
                    .coords
            })
            .collect();
        IdealLattice::from_hnf(linalg::hnf_full_rank(n, &cols))
    }

    // -- F constant -----------------------------------------------------------

    /// F = 2^(2h+3) * f * |D_K| from the class representatives.
    pub fn compute_big_f(&self) -> Result<BigFConstant> {
        let reps = self
            .spec
            .class_reps
            .as_ref()
            .ok_or_else(|| Error::StructuralFailure("class representatives absent".into()))?;
        let mut f = BigInt::one();
        for (rep, ideal) in &self.class_rep_ideals {
            if ideal.norm.is_one() {
                return Err(Error::StructuralFailure(format!(
                    "class representative above {} is not a proper ideal",
                    rep.p
                )));
            }
            f *= &ideal.norm;
        }
        if !intmath::is_squarefree_bigint(&f)? {
            return Err(Error::FNotSquarefree(f));
        }
        let two_power = BigInt::one() << (2 * self.spec.class_number as u64 + 3);
        let _ = reps;
        Ok(BigFConstant::assemble(
            two_power,
            f,
            self.spec.discriminant.abs(),
        ))
    }

    // -- cache construction ---------------------------------------------------

    fn build_fast_tables(&mut self) {
        let n = self.spec.degree;
        let mut flat = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    match self.spec.mult_table[i][j][k].to_i64() {
                        Some(v) => flat.push(v),
                        None => return,
                    }
                }
            }
        }
        self.mult_i64 = Some(flat);
    }

    fn build_unit_caches(&mut self) -> Result<()> {
        let n = self.spec.degree;
        let rank = self.unit_rank;
        let units: Vec<FieldElement> = self
            .spec
            .fundamental_units
            .iter()
            .map(|c| FieldElement::new(c.clone()))
            .collect();
        // torsion powers
        let t = FieldElement::new(self.spec.torsion_generator.clone());
        let mut torsion = Vec::with_capacity(self.spec.torsion_order as usize);
        let mut acc = FieldElement::one(n);
        for _ in 0..self.spec.torsion_order {
            torsion.push(acc.clone());
            acc = self.mul(&acc, &t);
        }
        self.torsion_elements = torsion;
        // unit square class representatives: products over subsets
        let mut classes = Vec::with_capacity(1 << rank);
        for mask in 0u32..(1 << rank) {
            let mut u = FieldElement::one(n);
            for (i, unit) in units.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    u = self.mul(&u, unit);
                }
            }
            classes.push(u);
        }
        self.unit_square_classes = classes;
        // acting lattice for domain reduction: log vectors of units,
        // doubled in the totally real unit-condition case (action by squares)
        let scale = if self.is_totally_real() { 2.0 } else { 1.0 };
        let log_rows: Vec<Vec<f64>> = units.iter().map(|u| self.unit_log_vector(u)).collect();
        // LLL-reduce the log lattice so the fundamental parallelepiped is fat
        let (reduced_rows, transform) = crate::lll::lll_reduce_f64(&log_rows, 0.99);
        let mut acting_units = Vec::with_capacity(rank);
        for row in &transform {
            let mut u = FieldElement::one(n);
            for (i, &e) in row.iter().enumerate() {
                let mut base = units[i].clone();
                let mut exp = e;
                if exp < 0 {
                    base = self.unit_inverse(&base);
                    exp = -exp;
                }
                for _ in 0..exp {
                    u = self.mul(&u, &base);
                }
            }
            if self.is_totally_real() {
                u = self.mul(&u.clone(), &u);
            }
            acting_units.push(u);
        }
        let acting_log_basis: Vec<Vec<f64>> = reduced_rows
            .iter()
            .map(|r| r.iter().map(|v| v * scale).collect())
            .collect();
        self.acting_units_inv = acting_units.iter().map(|u| self.unit_inverse(u)).collect();
        self.acting_units = acting_units;
        self.acting_log_inv = invert_f64(&acting_log_basis)
            .ok_or_else(|| Error::StructuralFailure("unit log matrix is singular".into()))?;
        self.acting_log_basis = acting_log_basis;
        self.box_constant = self.compute_box_constant();
        Ok(())
    }

    /// Log-embedding of a unit restricted to the first r_K places, weighting
    /// complex places by 2.
    pub fn unit_log_vector(&self, u: &FieldElement) -> Vec<f64> {
        let vals = self.embed_vals(&u.coords);
        self.log_places(&vals)[..self.unit_rank].to_vec()
    }

    /// Full place-wise weighted log vector (r1 + r2 entries).
    pub fn log_places(&self, vals: &[Cplx]) -> Vec<f64> {
        let (r1, r2) = self.spec.signature;
        let mut out = Vec::with_capacity(r1 + r2);
        for v in 0..r1 {
            out.push(vals[v].abs().ln());
        }
        for k in 0..r2 {
            out.push(2.0 * vals[r1 + 2 * k].abs().ln());
        }
        out
    }

    fn compute_box_constant(&self) -> f64 {
        let n = self.spec.degree as f64;
        // worst-case log excess per place over the centered parallelepiped
        // (coefficients in [-1/2, 1/2)); box enumeration only needs the
        // centered representative of each ideal to fit
        let (r1, r2) = self.spec.signature;
        let places = r1 + r2;
        let mut excess = vec![0.0f64; places];
        for unit in &self.acting_units {
            let vals = self.embed_vals(&unit.coords);
            let logs = self.log_places(&vals);
            for (v, excess_v) in excess.iter_mut().enumerate() {
                // complex places carry weight 2 in log_places; convert back
                let w = if v < r1 { 1.0 } else { 2.0 };
                *excess_v += (logs[v] / w).abs() / 2.0;
            }
        }
        let max_embedding_factor = excess.iter().fold(0.0f64, |a, &b| a.max(b)).exp();
        // row norm of the inverse embedding matrix
        let w: Vec<Vec<Cplx>> = self.basis_emb.clone();
        let winv = invert_complex_f64(&w).expect("embedding matrix invertible");
        let row_norm = winv
            .iter()
            .map(|row| row.iter().map(|z| z.abs()).sum::<f64>())
            .fold(0.0f64, |a, b| a.max(b));
        let _ = n;
        max_embedding_factor * row_norm * 1.1 + 0.5
    }

    fn build_class_rep_caches(&mut self) -> Result<()> {
        if let Some(reps) = self.spec.class_reps.clone() {
            let n = self.spec.degree;
            for rep in reps {
                let p = BigInt::from(rep.p);
                let mut cols: Vec<Col> = Vec::new();
                for j in 0..n {
                    let mut c = vec![BigInt::zero(); n];
                    c[j] = p.clone();
                    cols.push(c);
                }
                // columns g(theta) * theta^j
                let g_elem = self.element_from_poly(&rep.g_factor);
                for j in 0..n {
                    let mut ej = FieldElement::zero(n);
                    ej.coords[j] = BigInt::one();
                    cols.push(self.mul(&g_elem, &ej).coords);
                }
                let ideal = IdealLattice::from_hnf(linalg::hnf_full_rank(n, &cols));
                self.class_rep_ideals.push((rep, ideal));
            }
            self.big_f = Some(self.compute_big_f()?);
        }
        Ok(())
    }

    /// Element from polynomial-in-theta coefficients (length <= degree).
    pub fn element_from_poly(&self, coeffs: &[BigInt]) -> FieldElement {
        let n = self.spec.degree;
        let mut out = vec![BigInt::zero(); n];
        let mut theta_pow = FieldElement::one(n);
        let theta = self.theta_element();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                for k in 0..n {
                    out[k] += c * &theta_pow.coords[k];
                }
            }
            if i + 1 < coeffs.len() {
                theta_pow = self.mul(&theta_pow, &theta);
            }
        }
        FieldElement::new(out)
    }
}

fn invert_f64(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.iter().map(|r| {
        let mut row = r.clone();
        row.extend((0..n).map(|_| 0.0));
        row
    }).collect();
    for i in 0..n {
        a[i][n + i] = 1.0;
    }
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        let d = a[col][col];
        for v in a[col].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0.0 {
                let factor = a[r][col];
                for c in 0..2 * n {
                    a[r][c] -= factor * a[col][c];
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn invert_complex_f64(m: &[Vec<Cplx>]) -> Option<Vec<Vec<Cplx>>> {
    let n = m.len();
    let mut a: Vec<Vec<Cplx>> = m
        .iter()
        .map(|r| {
            let mut row = r.clone();
            row.extend((0..n).map(|_| Cplx::zero()));
            row
        })
        .collect();
    for i in 0..n {
        a[i][n + i] = Cplx::one();
    }
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        let d = a[col][col];
        for v in a[col].iter_mut() {
            *v = v.div(d);
        }
        for r in 0..n {
            if r != col && a[r][col].abs() != 0.0 {
                let factor = a[r][col];
                for c in 0..2 * n {
                    let t = a[r][c].sub(factor.mul(a[col][c]));
                    a[r][c] = t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct DerivedGroupData {
    auto_compose: Vec<Vec<usize>>,
    auto_inverse: Vec<usize>,
    auto_order: Vec<u32>,
    cyclic_generator: Option<usize>,
    unit_rank: usize,
    sign_classes: Vec<(FieldElement, Vec<i8>)>,
}

/// Build the basis-to-power-basis change data when the spec declares a
/// non-power basis. The change index must be a power of two, so odd-prime
/// arithmetic is unaffected by the basis choice.
fn build_power_change(spec: &FieldSpec) -> Result<Option<PowerChange>> {
    let coords = match &spec.generator_coords {
        None => return Ok(None),
        Some(c) => c.clone(),
    };
    let n = spec.degree;
    let table_mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai * bj;
                for (k, t) in spec.mult_table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &prod * t;
                    }
                }
            }
        }
        out
    };
    let mut p_cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut cur = vec![BigInt::zero(); n];
    cur[0] = BigInt::one();
    for _ in 0..n {
        p_cols.push(cur.clone());
        cur = table_mul(&cur, &coords);
    }
    // cur now holds theta^n; verify the defining polynomial vanishes
    let mut acc = cur;
    for (k, c) in spec.defining_polynomial.iter().take(n).enumerate() {
        if !c.is_zero() {
            for i in 0..n {
                acc[i] += c * &p_cols[k][i];
            }
        }
    }
    if acc.iter().any(|x| !x.is_zero()) {
        return Err(Error::StructuralFailure(
            "generator element is not a root of the defining polynomial".into(),
        ));
    }
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|k| p_cols[k][i].clone()).collect())
        .collect();
    let det = linalg::det_bareiss(&m);
    let mut d = det.abs();
    while d.is_even() {
        d >>= 1;
    }
    if !d.is_one() {
        return Err(Error::StructuralFailure(format!(
            "power-basis change index {det} is not a power of two"
        )));
    }
    // adjugate via cofactors; adj * M = det * I
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let mut cof = linalg::det_bareiss(&minor);
            if (i + j) % 2 == 1 {
                cof = -cof;
            }
            adj[i][j] = cof;
        }
    }
    Ok(Some(PowerChange { p_cols, det, adj }))
}

/// theta-power coefficients of an element scaled by |det|, sign-true.
fn theta_coeffs_scaled(change: &PowerChange, coords: &[BigInt]) -> Vec<BigInt> {
    let n = coords.len();
    let mut out = vec![BigInt::zero(); n];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = BigInt::zero();
        for j in 0..n {
            if !change.adj[i][j].is_zero() {
                acc += &change.adj[i][j] * &coords[j];
            }
        }
        *o = acc;
    }
    if change.det.is_negative() {
        for o in out.iter_mut() {
            *o = -std::mem::take(o);
        }
    }
    out
}

/// Embedding rows iota_v(e_i) for the shipped basis.
fn basis_embedding_rows(
    spec: &FieldSpec,
    emb: &Embeddings,
    change: &Option<PowerChange>,
) -> Vec<Vec<Cplx>> {
    let n = spec.degree;
    match change {
        None => emb.powers.clone(),
        Some(ch) => {
            let det = ch.det.to_f64().unwrap();
            (0..n)
                .map(|v| {
                    (0..n)
                        .map(|i| {
                            // e_i = (1/det) sum_k adj[k][i] theta^k
                            let mut acc = Cplx::zero();
                            for k in 0..n {
                                let a = ch.adj[k][i].to_f64().unwrap();
                                if a != 0.0 {
                                    acc = acc.add(emb.powers[v][k].scale(a));
                                }
                            }
                            acc.scale(1.0 / det)
                        })
                        .collect()
                })
                .collect()
        }
    }
}

/// Run every structural invariant of a `FieldSpec`. Returns the full report;
/// hard inconsistencies short-circuit into errors.
pub fn validate_field_spec(spec: &FieldSpec) -> Result<ValidationReport> {
    let emb = Embeddings::build(&spec.defining_polynomial)?;
    let change = build_power_change(spec)?;
    let basis_emb = basis_embedding_rows(spec, &emb, &change);
    let (report, _) = validate(spec, &emb, &change, &basis_emb)?;
    if let Some(fail) = report.first_failure() {
        return Err(Error::StructuralFailure(format!(
            "{}: {}",
            fail.name, fail.detail
        )));
    }
    if spec.unit_condition_flag && !report.unit_condition_verdict {
        return Err(Error::UnitConditionFailed(
            "claimed flag refuted by sign enumeration".into(),
        ));
    }
    Ok(report)
}

fn validate(
    spec: &FieldSpec,
    emb: &Embeddings,
    change: &Option<PowerChange>,
    basis_emb: &[Vec<Cplx>],
) -> Result<(ValidationReport, DerivedGroupData)> {
    let n = spec.degree;
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(ValidationCheck {
            name: name.to_string(),
            passed,
            detail,
        });
    };

    // polynomial shape
    let dp = poly::zpoly_deg(&spec.defining_polynomial);
    push(
        "defining polynomial monic of the stated degree",
        dp == n && spec.defining_polynomial[n].abs().is_one(),
        format!("degree {dp}"),
    );

    // a scratch multiplier on raw coordinate vectors
    let table_mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai * bj;
                for (k, t) in spec.mult_table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &prod * t;
                    }
                }
            }
        }
        out
    };
    let basis = |j: usize| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); n];
        v[j] = BigInt::one();
        v
    };

    // identity element
    let mut identity_ok = true;
    for j in 0..n {
        if table_mul(&basis(0), &basis(j)) != basis(j) {
            identity_ok = false;
        }
    }
    push(
        "first basis vector is the ring identity",
        identity_ok,
        String::new(),
    );

    // commutativity / associativity
    let mut comm = true;
    for i in 0..n {
        for j in 0..n {
            if spec.mult_table[i][j] != spec.mult_table[j][i] {
                comm = false;
            }
        }
    }
    push("multiplication table commutative", comm, String::new());
    let mut assoc = true;
    'assoc: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let left = table_mul(&table_mul(&basis(i), &basis(j)), &basis(k));
                let right = table_mul(&basis(i), &table_mul(&basis(j), &basis(k)));
                if left != right {
                    assoc = false;
                    break 'assoc;
                }
            }
        }
    }
    push("multiplication table associative", assoc, String::new());

    // automorphisms: ring maps forming a group of order n
    let apply = |m: &Vec<Vec<BigInt>>, v: &[BigInt]| -> Vec<BigInt> {
        (0..n)
            .map(|r| {
                let mut acc = BigInt::zero();
                for c in 0..n {
                    if !m[r][c].is_zero() {
                        acc += &m[r][c] * &v[c];
                    }
                }
                acc
            })
            .collect()
    };
    push(
        "automorphism count matches degree",
        spec.automorphisms.len() == n,
        format!("{} matrices", spec.automorphisms.len()),
    );
    push(
        "automorphism 0 is the identity",
        spec.automorphisms[0] == identity_matrix(n),
        String::new(),
    );
    let mut ring_maps = true;
    for m in &spec.automorphisms {
        if apply(m, &basis(0)) != basis(0) {
            ring_maps = false;
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = apply(m, &table_mul(&basis(i), &basis(j)));
                let rhs = table_mul(&apply(m, &basis(i)), &apply(m, &basis(j)));
                if lhs != rhs {
                    ring_maps = false;
                }
            }
        }
    }
    push(
        "automorphisms are ring homomorphisms",
        ring_maps,
        String::new(),
    );
    let mut compose = vec![vec![usize::MAX; n]; n];
    let mut closed = true;
    for i in 0..n {
        for j in 0..n {
            let prod = mat_mul(&spec.automorphisms[i], &spec.automorphisms[j]);
            match spec.automorphisms.iter().position(|m| *m == prod) {
                Some(k) => compose[i][j] = k,
                None => closed = false,
            }
        }
    }
    push("automorphism set closed under composition", closed, String::new());
    let mut inverse = vec![usize::MAX; n];
    let mut orders = vec![0u32; n];
    let mut group_ok = closed;
    if closed {
        for i in 0..n {
            match (0..n).find(|&j| compose[i][j] == 0) {
                Some(j) => inverse[i] = j,
                None => group_ok = false,
            }
            let mut k = i;
            let mut ord = 1u32;
            while k != 0 {
                k = compose[k][i];
                ord += 1;
                if ord as usize > n + 1 {
                    break;
                }
            }
            orders[i] = ord;
            if n as u32 % ord != 0 {
                group_ok = false;
            }
        }
    }
    push(
        "automorphisms form a group; element orders divide n",
        group_ok,
        format!("orders {orders:?}"),
    );
    let cyclic_generator = orders.iter().position(|&o| o as usize == n);

    // discriminant from the trace form
    let basis_traces: Vec<BigInt> = (0..n)
        .map(|k| {
            // trace of e_k = sum_i coeff_i of e_k * e_i
            let mut tr = BigInt::zero();
            for i in 0..n {
                tr += &spec.mult_table[k][i][i];
            }
            tr
        })
        .collect();
    let mut gram = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = BigInt::zero();
            for k in 0..n {
                acc += &spec.mult_table[i][j][k] * &basis_traces[k];
            }
            gram[i][j] = acc;
        }
    }
    let disc = linalg::det_bareiss(&gram);
    push(
        "discriminant equals trace form determinant",
        disc == spec.discriminant,
        format!("trace form det {disc}"),
    );

    // signature
    let (r1, r2) = spec.signature;
    push(
        "signature matches real root count",
        emb.r1 == r1 && emb.r2 == r2 && r1 + 2 * r2 == n,
        format!("found ({}, {})", emb.r1, emb.r2),
    );

    // torsion
    let torsion = FieldElement::new(spec.torsion_generator.clone());
    let mut torsion_ok = spec.torsion_order >= 2;
    {
        let mut acc = torsion.coords.clone();
        for _ in 1..spec.torsion_order {
            if acc == basis(0) {
                torsion_ok = false; // order smaller than claimed
            }
            acc = table_mul(&acc, &torsion.coords);
        }
        if acc != basis(0) {
            torsion_ok = false;
        }
        if r1 > 0 && spec.torsion_order != 2 {
            torsion_ok = false;
        }
    }
    push(
        "torsion generator has the claimed exact order",
        torsion_ok,
        format!("order {}", spec.torsion_order),
    );

    // units
    let unit_rank = r1 + r2 - 1;
    push(
        "fundamental unit count equals the unit rank",
        spec.fundamental_units.len() == unit_rank,
        format!("rank {unit_rank}"),
    );
    let norm_of = |v: &[BigInt]| -> BigInt {
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for j in 0..n {
            let col = table_mul(v, &basis(j));
            for i in 0..n {
                m[i][j] = col[i].clone();
            }
        }
        linalg::det_bareiss(&m)
    };
    let mut units_are_units = true;
    for u in &spec.fundamental_units {
        if !norm_of(u).abs().is_one() {
            units_are_units = false;
        }
    }
    push(
        "fundamental units have norm +-1",
        units_are_units,
        String::new(),
    );
    if !units_are_units {
        // no point continuing into log-lattice checks with a non-unit
        let report = ValidationReport {
            checks,
            unit_condition_verdict: false,
        };
        return Ok((
            report,
            DerivedGroupData {
                auto_compose: compose,
                auto_inverse: inverse,
                auto_order: orders,
                cyclic_generator,
                unit_rank,
                sign_classes: Vec::new(),
            },
        ));
    }
    // regulator bounded away from zero
    let embed_basis = |coords: &[BigInt]| -> Vec<Cplx> {
        let cf: Vec<f64> = coords.iter().map(|c| c.to_f64().unwrap()).collect();
        basis_emb
            .iter()
            .map(|row| {
                let mut acc = Cplx::zero();
                for (i, &c) in cf.iter().enumerate() {
                    if c != 0.0 {
                        acc = acc.add(row[i].scale(c));
                    }
                }
                acc
            })
            .collect()
    };
    let signs_of = |coords: &[BigInt]| -> Result<Vec<i8>> {
        match change {
            None => emb.real_signs(coords),
            Some(ch) => emb.real_signs(&theta_coeffs_scaled(ch, coords)),
        }
    };
    let log_rows: Vec<Vec<f64>> = spec
        .fundamental_units
        .iter()
        .map(|u| {
            let vals = embed_basis(u);
            let mut out = Vec::with_capacity(unit_rank);
            for v in 0..r1 {
                out.push(vals[v].abs().ln());
            }
            for k in 0..r2 {
                out.push(2.0 * vals[r1 + 2 * k].abs().ln());
            }
            out[..unit_rank].to_vec()
        })
        .collect();
    let reg = det_f64(&log_rows).abs();
    push(
        "unit log matrix has full rank",
        reg > 1e-8 || unit_rank == 0,
        format!("regulator-scale determinant {reg:.6}"),
    );

    // sign classes and the totally-positive-unit condition
    let mut sign_classes: Vec<(FieldElement, Vec<i8>)> = Vec::new();
    let mut verdict = true;
    if r1 > 0 {
        let mut positive_classes = 0usize;
        for mask in 0u32..(1 << (unit_rank + 1)) {
            let mut u = basis(0);
            if mask & 1 != 0 {
                u = u.iter().map(|c| -c).collect();
            }
            for (i, fu) in spec.fundamental_units.iter().enumerate() {
                if mask & (1 << (i + 1)) != 0 {
                    u = table_mul(&u, fu);
                }
            }
            let el = FieldElement::new(u);
            let signs = signs_of(&el.coords)?;
            if signs.iter().all(|&s| s == 1) {
                positive_classes += 1;
            }
            sign_classes.push((el, signs));
        }
        verdict = positive_classes == 1;
        push(
            "totally positive unit classes enumerated",
            true,
            format!(
                "{positive_classes} of {} classes totally positive",
                1 << (unit_rank + 1)
            ),
        );
    }

    // class representatives
    if let Some(reps) = &spec.class_reps {
        let mut reps_ok = reps.len() == 2 * spec.class_number as usize;
        let mut norm_product = BigInt::one();
        let mut seen_p = Vec::new();
        for rep in reps {
            if rep.p % 2 == 0 {
                reps_ok = false;
            }
            let deg = poly::zpoly_deg(&rep.g_factor);
            // the factor must divide the defining polynomial mod p
            let fp = poly::ModPoly::from_bigint(rep.p, &spec.defining_polynomial);
            let gp = poly::ModPoly::from_bigint(rep.p, &rep.g_factor);
            if !fp.rem(&gp).is_zero() {
                reps_ok = false;
            }
            // squarefree norm product needs distinct degree-one primes
            if deg != 1 {
                reps_ok = false;
            }
            if seen_p.contains(&rep.p) {
                reps_ok = false;
            }
            seen_p.push(rep.p);
            norm_product *= BigInt::from(rep.p).pow(deg as u32);
        }
        let squarefree = intmath::is_squarefree_bigint(&norm_product).unwrap_or(false);
        push(
            "class representatives are odd degree-one primes with squarefree norm product",
            reps_ok && squarefree,
            format!("f = {norm_product}"),
        );
    }

    let report = ValidationReport {
        checks,
        unit_condition_verdict: verdict,
    };
    Ok((
        report,
        DerivedGroupData {
            auto_compose: compose,
            auto_inverse: inverse,
            auto_order: orders,
            cyclic_generator,
            unit_rank,
            sign_classes,
        },
    ))
}

fn det_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0f64;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

// ---------------------------------------------------------------------------
// JSON spec files (integers as decimal strings)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TorsionFile {
    order: u32,
    generator: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ClassRepFile {
    p: String,
    factor: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FieldSpecFile {
    name: String,
    degree: usize,
    poly: Vec<String>,
    mult_table: Vec<Vec<Vec<String>>>,
    automorphisms: Vec<Vec<Vec<String>>>,
    signature: (usize, usize),
    torsion: TorsionFile,
    units: Vec<Vec<String>>,
    class_number: u32,
    discriminant: String,
    unit_condition: bool,
    #[serde(default)]
    class_reps: Option<Vec<ClassRepFile>>,
    #[serde(default)]
    generator: Option<Vec<String>>,
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse::<BigInt>()
        .map_err(|_| Error::SpecFile(format!("bad integer literal: {s}")))
}

fn parse_vec(v: &[String]) -> Result<Vec<BigInt>> {
    v.iter().map(|s| parse_int(s)).collect()
}

impl FieldSpec {
    pub fn to_json(&self) -> String {
        let s = |b: &BigInt| b.to_string();
        let file = FieldSpecFile {
            name: self.name.clone(),
            degree: self.degree,
            poly: self.defining_polynomial.iter().map(s).collect(),
            mult_table: self
                .mult_table
                .iter()
                .map(|r| r.iter().map(|c| c.iter().map(s).collect()).collect())
                .collect(),
            automorphisms: self
                .automorphisms
                .iter()
                .map(|m| m.iter().map(|row| row.iter().map(s).collect()).collect())
                .collect(),
            signature: self.signature,
            torsion: TorsionFile {
                order: self.torsion_order,
                generator: self.torsion_generator.iter().map(s).collect(),
            },
            units: self
                .fundamental_units
                .iter()
                .map(|u| u.iter().map(s).collect())
                .collect(),
            class_number: self.class_number,
            discriminant: s(&self.discriminant),
            unit_condition: self.unit_condition_flag,
            class_reps: self.class_reps.as_ref().map(|reps| {
                reps.iter()
                    .map(|r| ClassRepFile {
                        p: r.p.to_string(),
                        factor: r.g_factor.iter().map(s).collect(),
                    })
                    .collect()
            }),
            generator: self
                .generator_coords
                .as_ref()
                .map(|g| g.iter().map(s).collect()),
        };
        serde_json::to_string_pretty(&file).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<FieldSpec> {
        let file: FieldSpecFile =
            serde_json::from_str(text).map_err(|e| Error::SpecFile(e.to_string()))?;
        let mult_table = file
            .mult_table
            .iter()
            .map(|r| r.iter().map(|c| parse_vec(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let automorphisms = file
            .automorphisms
            .iter()
            .map(|m| m.iter().map(|row| parse_vec(row)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let class_reps = match &file.class_reps {
            None => None,
            Some(reps) => Some(
                reps.iter()
                    .map(|r| {
                        Ok(ClassRepSpec {
                            p: r.p
                                .parse::<u64>()
                                .map_err(|_| Error::SpecFile(format!("bad prime {}", r.p)))?,
                            g_factor: parse_vec(&r.factor)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(FieldSpec {
            name: file.name,
            degree: file.degree,
            defining_polynomial: parse_vec(&file.poly)?,
            mult_table,
            automorphisms,
            signature: file.signature,
            torsion_order: file.torsion.order,
            torsion_generator: parse_vec(&file.torsion.generator)?,
            fundamental_units: file
                .units
                .iter()
                .map(|u| parse_vec(u))
                .collect::<Result<Vec<_>>>()?,
            class_number: file.class_number,
            discriminant: parse_int(&file.discriminant)?,
            class_reps,
            unit_condition_flag: file.unit_condition,
            generator_coords: match &file.generator {
                None => None,
                Some(g) => Some(parse_vec(g)?),
            },
        })
    }
}

// ---------------------------------------------------------------------------
// Preset cache
// ---------------------------------------------------------------------------

static PRESET_CACHE: OnceLock<Mutex<HashMap<String, Arc<Field>>>> = OnceLock::new();

/// Load and validate a shipped preset ("cubic", "quintic11", "e8") or a spec
/// file path. Validated fields are cached per name.
pub fn preset(name: &str) -> Result<Arc<Field>> {
    let cache = PRESET_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some(f) = guard.get(name) {
            return Ok(f.clone());
        }
    }
    let spec = match name {
        "cubic" => crate::presets::cubic_spec(),
        "quintic11" | "quintic" => crate::presets::quintic11_spec(),
        "e8" | "E" => FieldSpec::from_json(include_str!("../presets/e8.json"))?,
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::SpecFile(format!("cannot read {path}: {e}")))?;
            FieldSpec::from_json(&text)?
        }
    };
    let field = Arc::new(Field::new(spec)?);
    let mut guard = cache.lock().unwrap();
    guard.insert(name.to_string(), field.clone());
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn cubic_mult_table_relations() {
        let field = presets::cubic_field();
        let theta = FieldElement::from_i64(&[0, 1, 0]);
        let theta2 = FieldElement::from_i64(&[0, 0, 1]);
        // theta * theta^2 = 3 theta + 1
        assert_eq!(
            field.mul(&theta, &theta2),
            FieldElement::from_i64(&[1, 3, 0])
        );
        // identity
        let one = FieldElement::one(3);
        assert_eq!(field.mul(&one, &theta), theta);
    }

    #[test]
    fn cubic_norms() {
        let field = presets::cubic_field();
        assert_eq!(field.norm(&FieldElement::one(3)), b(1));
        assert_eq!(field.norm(&FieldElement::from_i64(&[0, 1, 0])), b(1));
        assert_eq!(field.norm(&FieldElement::from_i64(&[2, 0, 0])), b(8));
        // theta - 1 generates the ramified prime above 3
        assert_eq!(field.norm(&FieldElement::from_i64(&[-1, 1, 0])), b(3));
    }

    #[test]
    fn automorphism_preserves_norm_and_has_order_three() {
        let field = presets::cubic_field();
        let a = FieldElement::from_i64(&[3, -2, 5]);
        let sa = field.apply_automorphism(1, &a);
        assert_eq!(field.norm(&a), field.norm(&sa));
        let back = field.apply_automorphism(
            1,
            &field.apply_automorphism(1, &field.apply_automorphism(1, &a)),
        );
        assert_eq!(back, a);
        assert_eq!(field.auto_order[1], 3);
    }

    #[test]
    fn validation_rejects_non_unit() {
        let mut spec = presets::cubic_spec();
        spec.fundamental_units[0] = vec![b(2), b(0), b(0)];
        assert!(matches!(
            validate_field_spec(&spec),
            Err(Error::StructuralFailure(_))
        ));
    }

    #[test]
    fn unit_inverse_is_inverse() {
        let field = presets::cubic_field();
        let u = FieldElement::from_i64(&[0, 1, 0]);
        let inv = field.unit_inverse(&u);
        assert_eq!(field.mul(&u, &inv), FieldElement::one(3));
        // theta^{-1} = theta^2 - 3
        assert_eq!(inv, FieldElement::from_i64(&[-3, 0, 1]));
    }

    #[test]
    fn ideal_from_element_norm() {
        let field = presets::cubic_field();
        let a = FieldElement::from_i64(&[-1, 1, 0]);
        let l = field.ideal_from_element(&a);
        assert_eq!(l.norm, b(3));
        assert!(l.contains_element(&a));
        assert!(l.contains_element(&field.mul(&a, &FieldElement::from_i64(&[7, -1, 2]))));
    }

    #[test]
    fn big_f_for_cubic() {
        let field = presets::cubic_field();
        let f = field.compute_big_f().unwrap();
        assert_eq!(f.two_power, b(32));
        assert_eq!(f.f, b(17 * 19));
        assert_eq!(f.disc_abs, b(81));
        assert_eq!(f.value, b(32) * b(323) * b(81));
        // h = 1 presets always produce F divisible by 32
        assert!((&f.value % b(32)).is_zero());
    }

    #[test]
    fn big_f_assemble_example() {
        let f = BigFConstant::assemble(b(32), b(35), b(81));
        assert_eq!(f.value, b(90720));
    }

    #[test]
    fn json_round_trip() {
        let spec = presets::cubic_spec();
        let text = spec.to_json();
        let back = FieldSpec::from_json(&text).unwrap();
        assert_eq!(back.mult_table, spec.mult_table);
        assert_eq!(back.automorphisms, spec.automorphisms);
        assert_eq!(back.discriminant, spec.discriminant);
    }

    #[test]
    fn embed_checked_matches_norm() {
        let field = presets::cubic_field();
        let a = FieldElement::from_i64(&[4, -7, 2]);
        let vals = field.embed_checked(&a, 53).unwrap();
        assert_eq!(vals.len(), 3);
        assert!(vals.iter().all(|z| z.im == 0.0));
        assert!(field.embed_checked(&a, 54).is_err());
    }

    #[test]
    fn element_from_poly_matches_powers() {
        let field = presets::cubic_field();
        // theta^2 + 2 theta + 5
        let e = field.element_from_poly(&[b(5), b(2), b(1)]);
        assert_eq!(e, FieldElement::from_i64(&[5, 2, 1]));
    }
}
