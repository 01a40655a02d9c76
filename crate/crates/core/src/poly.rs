//! Dense integer polynomials and polynomial arithmetic over F_p.
//!
//! The integer side covers what field validation needs (Sturm counts,
//! resultants as a norm oracle); the F_p side carries prime splitting:
//! Frobenius powers mod the defining polynomial and Cantor-Zassenhaus
//! equal-degree factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

// ---------------------------------------------------------------------------
// Integer polynomials (dense, ascending coefficients)
// ---------------------------------------------------------------------------

pub fn zpoly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

pub fn zpoly_deg(p: &[BigInt]) -> usize {
    let mut d = p.len();
    while d > 1 && p[d - 1].is_zero() {
        d -= 1;
    }
    d - 1
}

pub fn zpoly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    zpoly_trim(&mut out);
    out
}

pub fn zpoly_eval(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Evaluate p at the dyadic rational m / 2^e, scaled by 2^(deg * e) so the
/// result is an exact integer with the same sign as p(m / 2^e).
pub fn zpoly_eval_dyadic_scaled(p: &[BigInt], m: &BigInt, e: u32) -> BigInt {
    let d = zpoly_deg(p);
    let mut acc = BigInt::zero();
    let mut m_pow = BigInt::one();
    for (i, c) in p[..=d].iter().enumerate() {
        acc += c * &m_pow << (e as u64 * (d - i) as u64);
        m_pow *= m;
    }
    acc
}

pub fn zpoly_derivative(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() <= 1 {
        return vec![BigInt::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

fn zpoly_content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
    }
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

/// Sign-true pseudo-remainder of a by b: a positive rational multiple of
/// (a mod b), primitive-part reduced. Each elimination step scales by the
/// square of the divisor's leading coefficient so the sign is preserved,
/// which Sturm chains require.
fn zpoly_prem_primitive(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = zpoly_deg(b);
    let lb = b[db].clone();
    let lb2 = &lb * &lb;
    let mut r: Vec<BigInt> = a.to_vec();
    zpoly_trim(&mut r);
    while zpoly_deg(&r) >= db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = zpoly_deg(&r);
        let lead = r[dr].clone();
        // r = lb^2 * r - (lb * lead) * x^(dr-db) * b
        let mut nr = vec![BigInt::zero(); dr + 1];
        for (i, c) in r.iter().enumerate() {
            nr[i] = c * &lb2;
        }
        let scale = &lb * &lead;
        for (i, c) in b.iter().enumerate().take(db + 1) {
            nr[i + dr - db] -= c * &scale;
        }
        zpoly_trim(&mut nr);
        r = nr;
        if zpoly_deg(&r) == 0 && r[0].is_zero() {
            break;
        }
    }
    let cont = zpoly_content(&r);
    if !cont.is_one() {
        for c in r.iter_mut() {
            *c = &*c / &cont;
        }
    }
    r
}

/// Sturm chain of a squarefree integer polynomial (content-normalized,
/// sign-true pseudo-remainders).
pub fn sturm_chain(p: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut chain: Vec<Vec<BigInt>> = vec![p.to_vec(), zpoly_derivative(p)];
    loop {
        let last = &chain[chain.len() - 1];
        if zpoly_deg(last) == 0 && last[0].is_zero() {
            chain.pop();
            break;
        }
        if zpoly_deg(last) == 0 {
            break;
        }
        let prev = &chain[chain.len() - 2];
        let mut rem = zpoly_prem_primitive(prev, last);
        for c in rem.iter_mut() {
            *c = -std::mem::take(c);
        }
        if rem.iter().all(|c| c.is_zero()) {
            break;
        }
        chain.push(rem);
    }
    chain
}

/// Number of distinct real roots of a squarefree integer polynomial, by the
/// Sturm chain evaluated at -inf / +inf.
pub fn sturm_real_root_count(p: &[BigInt]) -> usize {
    let chain = sturm_chain(p);
    let sign_at_inf = |q: &[BigInt], pos: bool| -> i8 {
        let d = zpoly_deg(q);
        let lead = &q[d];
        let mut s = if lead.is_positive() { 1i8 } else { -1i8 };
        if !pos && d % 2 == 1 {
            s = -s;
        }
        if lead.is_zero() {
            0
        } else {
            s
        }
    };
    let variations = |pos: bool| -> usize {
        let mut count = 0;
        let mut prev: Option<i8> = None;
        for q in &chain {
            let s = sign_at_inf(q, pos);
            if s == 0 {
                continue;
            }
            if let Some(ps) = prev {
                if ps != s {
                    count += 1;
                }
            }
            prev = Some(s);
        }
        count
    };
    variations(false) - variations(true)
}

/// Resultant Res(a, b) over the integers, as the Sylvester matrix
/// determinant. Degrees here stay tiny, so the dense route is fine.
pub fn zpoly_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut a: Vec<BigInt> = a.to_vec();
    let mut b: Vec<BigInt> = b.to_vec();
    zpoly_trim(&mut a);
    zpoly_trim(&mut b);
    let da = zpoly_deg(&a);
    let db = zpoly_deg(&b);
    if da == 0 {
        return a[0].pow(db as u32);
    }
    if db == 0 {
        return b[0].pow(da as u32);
    }
    let n = da + db;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..db {
        for (k, c) in a.iter().enumerate() {
            m[i][i + da - k] = c.clone();
        }
    }
    for i in 0..da {
        for (k, c) in b.iter().enumerate() {
            m[db + i][i + db - k] = c.clone();
        }
    }
    crate::linalg::det_bareiss(&m)
}

// ---------------------------------------------------------------------------
// Polynomials over F_p (u64 prime modulus, coefficients ascending)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ModPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

fn mp_mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut out = ModPoly { p, coeffs };
        out.trim();
        out
    }

    pub fn from_bigint(p: u64, coeffs: &[BigInt]) -> Self {
        let pb = BigInt::from(p);
        let v: Vec<u64> = coeffs
            .iter()
            .map(|c| {
                let m = c.mod_floor(&pb);
                // m in [0, p)
                m.to_string().parse::<u64>().unwrap()
            })
            .collect();
        ModPoly::new(p, v)
    }

    pub fn zero(p: u64) -> Self {
        ModPoly {
            p,
            coeffs: vec![0],
        }
    }

    pub fn one(p: u64) -> Self {
        ModPoly {
            p,
            coeffs: vec![1],
        }
    }

    pub fn x(p: u64) -> Self {
        ModPoly {
            p,
            coeffs: vec![0, 1],
        }
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == 0 {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = *self.coeffs.get(i).unwrap_or(&0);
            let b = *other.coeffs.get(i).unwrap_or(&0);
            out[i] = (a + b) % p;
        }
        ModPoly::new(p, out)
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = *self.coeffs.get(i).unwrap_or(&0);
            let b = *other.coeffs.get(i).unwrap_or(&0);
            out[i] = (a + p - b % p) % p;
        }
        ModPoly::new(p, out)
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mp_mulmod(a, b, p)) % p;
            }
        }
        ModPoly::new(p, out)
    }

    pub fn scale(&self, k: u64) -> ModPoly {
        let p = self.p;
        ModPoly::new(p, self.coeffs.iter().map(|&c| mp_mulmod(c, k, p)).collect())
    }

    /// (quotient, remainder) by a nonzero divisor.
    pub fn divmod(&self, div: &ModPoly) -> (ModPoly, ModPoly) {
        let p = self.p;
        assert!(!div.is_zero());
        let dd = div.deg();
        let lead_inv = mod_inverse(div.coeffs[dd], p);
        let mut rem = self.coeffs.clone();
        if self.deg() < dd || self.is_zero() {
            return (ModPoly::zero(p), self.clone());
        }
        let mut quot = vec![0u64; self.deg() - dd + 1];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = mp_mulmod(c, lead_inv, p);
            quot[i - dd] = q;
            for (j, &dc) in div.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + p - mp_mulmod(q, dc, p)) % p;
            }
        }
        (ModPoly::new(p, quot), ModPoly::new(p, rem))
    }

    pub fn rem(&self, div: &ModPoly) -> ModPoly {
        self.divmod(div).1
    }

    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = *a.coeffs.last().unwrap();
        a.scale(mod_inverse(lead, a.p))
    }

    /// self^e mod (modulus); square and multiply.
    pub fn powmod_u64(&self, mut e: u64, modulus: &ModPoly) -> ModPoly {
        let mut base = self.rem(modulus);
        let mut acc = ModPoly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// self^e mod modulus with a big exponent given as BigInt >= 0.
    pub fn powmod_big(&self, e: &BigInt, modulus: &ModPoly) -> ModPoly {
        let base = self.rem(modulus);
        let mut acc = ModPoly::one(self.p);
        let mut i = e.bits();
        while i > 0 {
            i -= 1;
            acc = acc.mul(&acc).rem(modulus);
            if e.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
        }
        acc
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mp_mulmod(acc, x % p, p) + c) % p;
        }
        acc
    }
}

pub fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime and a nonzero mod p
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not invertible");
    (t.rem_euclid(p as i128)) as u64
}

/// Residue degree of p relative to the monic integer polynomial f:
/// the least k with x^(p^k) = x mod (f, p). For unramified p (f squarefree
/// mod p) this is the common degree of all irreducible factors when the
/// splitting is equal-degree. Returns (k, squarefree).
pub fn frobenius_degree(f_int: &[BigInt], p: u64) -> (usize, bool) {
    let f = ModPoly::from_bigint(p, f_int);
    let n = f.deg();
    let fp = f.clone();
    let deriv = {
        let mut d = vec![0u64; n];
        for i in 1..=n {
            d[i - 1] = mp_mulmod(f.coeffs[i], (i as u64) % p, p);
        }
        ModPoly::new(p, d)
    };
    let squarefree = f.gcd(&deriv).deg() == 0;
    let x = ModPoly::x(p);
    let frob = x.powmod_u64(p, &fp); // x^p
    let mut k = 1usize;
    let mut cur = frob.clone();
    while !cur.sub(&x).rem(&fp).is_zero() {
        cur = compose_mod(&cur, &frob, &fp);
        k += 1;
        if k > n {
            break;
        }
    }
    (k, squarefree)
}

/// g(h) mod f over F_p, by Horner on the coefficients of g.
pub fn compose_mod(g: &ModPoly, h: &ModPoly, f: &ModPoly) -> ModPoly {
    let p = g.p;
    let mut acc = ModPoly::zero(p);
    for &c in g.coeffs.iter().rev() {
        acc = acc.mul(h).rem(f);
        acc = acc.add(&ModPoly::new(p, vec![c]));
    }
    acc
}

/// All roots of f mod p (each exactly once), sorted ascending.
/// Cantor-Zassenhaus splitting on gcd(x^p - x, f) with deterministic shifts.
pub fn roots_mod_p(f_int: &[BigInt], p: u64) -> Vec<u64> {
    let f = ModPoly::from_bigint(p, f_int);
    if p == 2 {
        return (0..2).filter(|&x| f.eval(x) == 0).collect();
    }
    let x = ModPoly::x(p);
    let xp = x.powmod_u64(p, &f);
    let lin = f.gcd(&xp.sub(&x));
    let mut roots = Vec::new();
    let mut stack = vec![lin];
    let mut shift = 0u64;
    while let Some(g) = stack.pop() {
        if g.deg() == 0 {
            continue;
        }
        if g.deg() == 1 {
            // monic x + c -> root = -c
            let c = g.coeffs[0];
            roots.push((p - c) % p);
            continue;
        }
        // split with gcd(g, (x + shift)^((p-1)/2) - 1)
        loop {
            shift += 1;
            let base = ModPoly::new(p, vec![shift % p, 1]);
            let pw = base.powmod_u64((p - 1) / 2, &g);
            let cand = g.gcd(&pw.sub(&ModPoly::one(p)));
            if cand.deg() > 0 && cand.deg() < g.deg() {
                let (q, _r) = g.divmod(&cand);
                stack.push(cand);
                stack.push(q);
                break;
            }
        }
    }
    roots.sort_unstable();
    roots
}

/// Factor f mod p into distinct monic irreducible factors of the common
/// degree d (equal-degree situation), sorted by coefficient vector.
pub fn equal_degree_factors(f_int: &[BigInt], p: u64, d: usize) -> Vec<ModPoly> {
    let f = ModPoly::from_bigint(p, f_int);
    let lead_inv = mod_inverse(*f.coeffs.last().unwrap(), p);
    let f = f.scale(lead_inv);
    let mut out = Vec::new();
    let mut stack = vec![f];
    let mut shift = 0u64;
    while let Some(g) = stack.pop() {
        if g.deg() == 0 {
            continue;
        }
        if g.deg() == d {
            out.push(g);
            continue;
        }
        let exp_num = (BigInt::from(p).pow(d as u32) - 1) / 2;
        loop {
            shift += 1;
            let base = ModPoly::new(p, vec![shift % p, 1, 1]); // x^2 + x + shift
            let pw = base.powmod_big(&exp_num, &g);
            let cand = g.gcd(&pw.sub(&ModPoly::one(p)));
            if cand.deg() > 0 && cand.deg() < g.deg() {
                let (q, _r) = g.divmod(&cand);
                stack.push(cand);
                stack.push(q);
                break;
            }
        }
    }
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
    out
}
