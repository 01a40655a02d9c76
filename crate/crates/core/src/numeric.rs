//! Numeric embeddings of number field elements.
//!
//! Floating point is only used for domain reduction and search radii; every
//! quantity that feeds an exact decision (signs at real places, norms) is
//! either cross-checked against exact integer arithmetic or certified by
//! dyadic interval refinement of the isolated real roots.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{sturm_real_root_count, zpoly_deg, zpoly_eval_dyadic_scaled};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl Cplx {
    pub fn new(re: f64, im: f64) -> Self {
        Cplx { re, im }
    }
    pub fn zero() -> Self {
        Cplx { re: 0.0, im: 0.0 }
    }
    pub fn one() -> Self {
        Cplx { re: 1.0, im: 0.0 }
    }
    pub fn add(self, o: Cplx) -> Cplx {
        Cplx::new(self.re + o.re, self.im + o.im)
    }
    pub fn sub(self, o: Cplx) -> Cplx {
        Cplx::new(self.re - o.re, self.im - o.im)
    }
    pub fn mul(self, o: Cplx) -> Cplx {
        Cplx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    pub fn scale(self, k: f64) -> Cplx {
        Cplx::new(self.re * k, self.im * k)
    }
    pub fn div(self, o: Cplx) -> Cplx {
        let d = o.re * o.re + o.im * o.im;
        Cplx::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    pub fn conj(self) -> Cplx {
        Cplx::new(self.re, -self.im)
    }
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Isolating dyadic interval (lo/2^e, hi/2^e) around a simple real root.
#[derive(Debug, Clone)]
pub struct RealRootInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub e: u32,
}

impl RealRootInterval {
    pub fn midpoint_f64(&self) -> f64 {
        let two = 2f64.powi(self.e as i32);
        let lo = self.lo.to_f64().unwrap();
        let hi = self.hi.to_f64().unwrap();
        (lo + hi) / (2.0 * two)
    }
}

fn sturm_variations_at(chain: &[Vec<BigInt>], m: &BigInt, e: u32) -> usize {
    let mut count = 0usize;
    let mut prev: Option<i8> = None;
    for q in chain {
        let v = zpoly_eval_dyadic_scaled(q, m, e);
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1i8
        } else {
            -1
        };
        if s == 0 {
            continue;
        }
        if let Some(p) = prev {
            if p != s {
                count += 1;
            }
        }
        prev = Some(s);
    }
    count
}

/// Isolate all real roots of a squarefree integer polynomial into disjoint
/// dyadic intervals (one root each), sorted ascending.
pub fn isolate_real_roots(p: &[BigInt]) -> Vec<RealRootInterval> {
    let total = sturm_real_root_count(p);
    if total == 0 {
        return Vec::new();
    }
    let chain = crate::poly::sturm_chain(p);
    let d = zpoly_deg(p);
    // Cauchy bound: 1 + max |c_i| / |c_d|
    let lead = p[d].abs();
    let mut maxc = BigInt::zero();
    for c in &p[..d] {
        if c.abs() > maxc {
            maxc = c.abs();
        }
    }
    let bound: BigInt = (&maxc / &lead) + 2;
    let mut out = Vec::new();
    let mut stack = vec![(-&bound, bound.clone(), 0u32)];
    while let Some((lo, hi, e)) = stack.pop() {
        let count =
            sturm_variations_at(&chain, &lo, e).saturating_sub(sturm_variations_at(&chain, &hi, e));
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(RealRootInterval { lo, hi, e });
            continue;
        }
        let lo2 = &lo << 1u32;
        let hi2 = &hi << 1u32;
        let mid2 = (lo2.clone() + hi2.clone()) >> 1u32;
        stack.push((lo2, mid2.clone(), e + 1));
        stack.push((mid2, hi2, e + 1));
    }
    // lo_a / 2^{e_a} < lo_b / 2^{e_b}  <=>  lo_a << e_b < lo_b << e_a
    out.sort_by(|a, b| (&a.lo << b.e).cmp(&(&b.lo << a.e)));
    debug_assert_eq!(out.len(), total);
    out
}

/// Shrink an isolating interval by bisection until its width is <= 2^-bits.
/// Uses exact sign evaluation; the polynomial must not vanish at dyadic points
/// (true for irreducible polynomials of degree >= 2).
pub fn refine_root(p: &[BigInt], iv: &RealRootInterval, bits: u32) -> RealRootInterval {
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    let mut e = iv.e;
    let sign_at = |m: &BigInt, e: u32| -> i8 {
        let v = zpoly_eval_dyadic_scaled(p, m, e);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    };
    let mut slo = sign_at(&lo, e);
    // widen a hair if the endpoint sign is ambiguous at the boundary of an isolation box
    if slo == 0 {
        lo -= 1;
        slo = sign_at(&lo, e);
    }
    // bisection halves the real width each step while the integer width stays
    // fixed; real width <= 2^(width_bits - e)
    let width_bits = (&hi - &lo).bits() as u32;
    while e < bits.saturating_add(width_bits) {
        lo <<= 1;
        hi <<= 1;
        e += 1;
        let mid = (&lo + &hi) >> 1u32;
        let sm = sign_at(&mid, e);
        if sm == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RealRootInterval { lo, hi, e }
}

/// Durand-Kerner iteration for all complex roots of a monic real polynomial.
fn durand_kerner(coeffs: &[f64]) -> Vec<Cplx> {
    let n = coeffs.len() - 1;
    let eval = |z: Cplx| -> Cplx {
        let mut acc = Cplx::zero();
        for &c in coeffs.iter().rev() {
            acc = acc.mul(z).add(Cplx::new(c, 0.0));
        }
        acc
    };
    let mut zs: Vec<Cplx> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.35;
            let r = 1.3f64;
            Cplx::new(r * angle.cos(), r * angle.sin())
        })
        .collect();
    for _ in 0..600 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let mut denom = Cplx::one();
            for j in 0..n {
                if j != k {
                    denom = denom.mul(zs[k].sub(zs[j]));
                }
            }
            let step = eval(zs[k]).div(denom);
            zs[k] = zs[k].sub(step);
            max_step = max_step.max(step.abs());
        }
        if max_step < 1e-14 {
            break;
        }
    }
    // Newton polish
    let dcoeffs: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect();
    let deval = |z: Cplx| -> Cplx {
        let mut acc = Cplx::zero();
        for &c in dcoeffs.iter().rev() {
            acc = acc.mul(z).add(Cplx::new(c, 0.0));
        }
        acc
    };
    for z in zs.iter_mut() {
        for _ in 0..4 {
            let fz = eval(*z);
            let dz = deval(*z);
            if dz.abs() > 0.0 {
                *z = z.sub(fz.div(dz));
            }
        }
    }
    zs
}

/// Root data and embedding matrices for a monic irreducible integer polynomial.
#[derive(Debug, Clone)]
pub struct Embeddings {
    pub poly: Vec<BigInt>,
    pub degree: usize,
    pub r1: usize,
    pub r2: usize,
    /// all n roots: real ones ascending, then conjugate pairs (upper, lower)
    pub roots: Vec<Cplx>,
    /// powers[v][i] = roots[v]^i for i < degree
    pub powers: Vec<Vec<Cplx>>,
    /// isolating intervals for the real roots, matching roots[..r1]
    pub real_intervals: Vec<RealRootInterval>,
}

impl Embeddings {
    pub fn build(poly: &[BigInt]) -> Result<Embeddings> {
        let degree = zpoly_deg(poly);
        let lead = &poly[degree];
        if lead.abs() != BigInt::from(1) {
            return Err(Error::StructuralFailure(
                "defining polynomial must be monic".into(),
            ));
        }
        let real_intervals: Vec<RealRootInterval> = isolate_real_roots(poly)
            .into_iter()
            .map(|iv| refine_root(poly, &iv, 80))
            .collect();
        let r1 = real_intervals.len();
        if (degree - r1) % 2 != 0 {
            return Err(Error::PrecisionExhausted(
                "real root count does not match parity".into(),
            ));
        }
        let r2 = (degree - r1) / 2;
        let fcoeffs: Vec<f64> = poly[..=degree]
            .iter()
            .map(|c| c.to_f64().unwrap())
            .collect();
        let all = durand_kerner(&fcoeffs);
        // split into near-real and complex, replacing near-real with certified midpoints
        let mut complex: Vec<Cplx> = Vec::new();
        let mut used = vec![false; all.len()];
        let mut reals: Vec<f64> = real_intervals.iter().map(|iv| iv.midpoint_f64()).collect();
        reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // mark the r1 roots closest to certified real midpoints as consumed
        for &rv in &reals {
            let mut best = usize::MAX;
            let mut bestd = f64::INFINITY;
            for (i, z) in all.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let d = (z.re - rv).abs() + z.im.abs();
                if d < bestd {
                    bestd = d;
                    best = i;
                }
            }
            used[best] = true;
        }
        for (i, z) in all.iter().enumerate() {
            if !used[i] {
                complex.push(*z);
            }
        }
        let mut upper: Vec<Cplx> = complex.iter().filter(|z| z.im > 0.0).cloned().collect();
        upper.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        if upper.len() != r2 {
            return Err(Error::PrecisionExhausted(format!(
                "found {} conjugate pairs, expected {}",
                upper.len(),
                r2
            )));
        }
        let mut roots: Vec<Cplx> = reals.iter().map(|&r| Cplx::new(r, 0.0)).collect();
        for z in &upper {
            roots.push(*z);
            roots.push(z.conj());
        }
        let powers: Vec<Vec<Cplx>> = roots
            .iter()
            .map(|&z| {
                let mut row = Vec::with_capacity(degree);
                let mut acc = Cplx::one();
                for _ in 0..degree {
                    row.push(acc);
                    acc = acc.mul(z);
                }
                row
            })
            .collect();
        Ok(Embeddings {
            poly: poly.to_vec(),
            degree,
            r1,
            r2,
            roots,
            powers,
            real_intervals,
        })
    }

    /// All n embeddings of the element with the given power-basis coordinates.
    pub fn embed(&self, coords: &[BigInt]) -> Vec<Cplx> {
        let cf: Vec<f64> = coords.iter().map(|c| c.to_f64().unwrap()).collect();
        self.powers
            .iter()
            .map(|row| {
                let mut acc = Cplx::zero();
                for (i, &c) in cf.iter().enumerate() {
                    acc = acc.add(row[i].scale(c));
                }
                acc
            })
            .collect()
    }

    /// Certified sign (+1/-1) of the v-th real embedding of a nonzero element.
    pub fn real_sign(&self, coords: &[BigInt], v: usize) -> Result<i8> {
        // fast path: f64 with a conservative error bound
        let row = &self.powers[v];
        let mut acc = 0.0f64;
        let mut mag = 0.0f64;
        for (i, c) in coords.iter().enumerate() {
            let cf = c.to_f64().unwrap();
            acc += cf * row[i].re;
            mag += cf.abs() * row[i].re.abs();
        }
        let err = mag * 1e-11 + 1e-280;
        if acc.abs() > err {
            return Ok(if acc > 0.0 { 1 } else { -1 });
        }
        // exact fallback: interval Horner over a shrinking root interval
        let mut iv = self.real_intervals[v].clone();
        for _ in 0..12 {
            if let Some(sign) = interval_poly_sign(coords, &iv) {
                return Ok(sign);
            }
            iv = refine_root(&self.poly, &iv, iv.e + 40);
        }
        Err(Error::PrecisionExhausted(
            "real embedding sign undecidable".into(),
        ))
    }

    /// Signs at all real places.
    pub fn real_signs(&self, coords: &[BigInt]) -> Result<Vec<i8>> {
        (0..self.r1).map(|v| self.real_sign(coords, v)).collect()
    }
}

/// Exact sign of sum coords[i] * t^i over the dyadic interval t in [lo, hi]/2^e,
/// or None if the interval evaluation straddles zero.
fn interval_poly_sign(coords: &[BigInt], iv: &RealRootInterval) -> Option<i8> {
    // interval Horner with endpoints scaled by 2^e per multiplication
    let e = iv.e;
    let mut lo_acc = BigInt::zero();
    let mut hi_acc = BigInt::zero();
    let mut scale_bits: u64 = 0;
    for c in coords.iter().rev() {
        // multiply accumulator interval by [lo, hi]/2^e
        let products = [
            &lo_acc * &iv.lo,
            &lo_acc * &iv.hi,
            &hi_acc * &iv.lo,
            &hi_acc * &iv.hi,
        ];
        let mut new_lo = products[0].clone();
        let mut new_hi = products[0].clone();
        for p in &products[1..] {
            if p < &new_lo {
                new_lo = p.clone();
            }
            if p > &new_hi {
                new_hi = p.clone();
            }
        }
        scale_bits += e as u64;
        let c_scaled = c << scale_bits;
        lo_acc = new_lo + &c_scaled;
        hi_acc = new_hi + c_scaled;
    }
    if lo_acc.is_positive() {
        Some(1)
    } else if hi_acc.is_negative() {
        Some(-1)
    } else {
        None
    }
}
