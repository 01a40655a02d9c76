//! Rational integer utilities: primality, sieves, factoring, Jacobi symbols.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Bit-sieve of Eratosthenes; returns all primes `<= bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::with_capacity(n / 10 + 16);
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Smallest-prime-factor table up to `SPF_BOUND`, built once on first use.
pub const SPF_BOUND: u64 = 1 << 21;

fn spf_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = SPF_BOUND as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        spf
    })
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    a %= m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u64, seed: u64) -> Option<u64> {
    let c = 1 + seed % (n - 1);
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let mut x = 2 + seed % (n - 3);
    let mut y = x;
    let mut d = 1u64;
    let mut count = 0u64;
    while d == 1 {
        x = f(x);
        y = f(f(y));
        d = x.abs_diff(y).gcd(&n);
        count += 1;
        if count > 1 << 22 {
            return None;
        }
    }
    if d != n {
        Some(d)
    } else {
        None
    }
}

/// Factor a u64 into (prime, exponent) pairs, ascending.
/// Uses the SPF table when possible, trial division and Brent's rho otherwise.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| {
        if let Some(last) = out.last_mut() {
            if last.0 == p {
                last.1 += 1;
                return;
            }
        }
        out.push((p, 1));
    };
    let mut stack = vec![n];
    let mut found: Vec<u64> = Vec::new();
    while let Some(mut m) = stack.pop() {
        if m <= 1 {
            continue;
        }
        if m <= SPF_BOUND {
            let spf = spf_table();
            while m > 1 {
                let p = spf[m as usize] as u64;
                found.push(p);
                m /= p;
            }
            continue;
        }
        if is_prime_u64(m) {
            found.push(m);
            continue;
        }
        // small trial factors first so rho only sees semiprime-ish cofactors
        let mut reduced = false;
        for p in [2u64, 3, 5, 7, 11, 13] {
            if m % p == 0 {
                found.push(p);
                stack.push(m / p);
                reduced = true;
                break;
            }
        }
        if reduced {
            continue;
        }
        let mut split = None;
        for round in 0..30u64 {
            if let Some(d) = pollard_brent(m, round.wrapping_mul(0x9e3779b97f4a7c15) | 1) {
                split = Some(d);
                break;
            }
        }
        let d = split.expect("rho failed on u64 input");
        stack.push(d);
        stack.push(m / d);
    }
    found.sort_unstable();
    for p in found {
        push(p, &mut out);
    }
    out
}

/// Factor |n| for a BigInt, with a bounded budget of trial division plus rho rounds.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    let mut m = n.abs();
    if m.is_zero() {
        return Err(Error::FactoringBudgetExceeded("cannot factor zero".into()));
    }
    if let Some(u) = m.to_u64() {
        return Ok(factor_u64(u)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect());
    }
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    // trial division by sieved primes
    for p in primes_up_to(1_000_000) {
        let pb = BigInt::from(p);
        if (&pb * &pb) > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&pb);
            if r.is_zero() {
                m = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            out.push((pb, e));
        }
        if let Some(u) = m.to_u64() {
            for (p, e) in factor_u64(u) {
                out.push((BigInt::from(p), e));
            }
            out.sort();
            return Ok(merge_exponents(out));
        }
    }
    // remaining cofactor is large; rho with a fixed round budget
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(u) = m.to_u64() {
            for (p, e) in factor_u64(u) {
                out.push((BigInt::from(p), e));
            }
            continue;
        }
        if is_prime_bigint(&m) {
            out.push((m, 1));
            continue;
        }
        let d = rho_bigint(&m, 30).ok_or_else(|| {
            Error::FactoringBudgetExceeded(format!("rho budget exhausted on {m}"))
        })?;
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    Ok(merge_exponents(out))
}

fn merge_exponents(sorted: Vec<(BigInt, u32)>) -> Vec<(BigInt, u32)> {
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for (p, e) in sorted {
        if let Some(last) = out.last_mut() {
            if last.0 == p {
                last.1 += e;
                continue;
            }
        }
        out.push((p, e));
    }
    out
}

/// Miller-Rabin on BigInt with fixed witness set (probabilistic beyond u64 range,
/// ample for desk-scale norms).
pub fn is_prime_bigint(n: &BigInt) -> bool {
    if let Some(u) = n.to_u64() {
        return is_prime_u64(u);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let ab = BigInt::from(a);
        let mut x = ab.modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_bigint(n: &BigInt, rounds: u32) -> Option<BigInt> {
    let one = BigInt::one();
    for round in 0..rounds {
        let c = BigInt::from(round as u64 + 1);
        let mut x = BigInt::from(2u32 + round);
        let mut y = x.clone();
        for _ in 0..200_000u32 {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let d = (&x - &y).abs().gcd(n);
            if d > one && &d < n {
                return Some(d);
            }
            if d == *n {
                break;
            }
        }
    }
    None
}

/// Jacobi symbol (a/m) for odd positive m; errors on even or non-positive m.
pub fn jacobi(a: &BigInt, m: &BigInt) -> Result<i8> {
    if m.is_even() || !m.is_positive() {
        return Err(Error::EvenModulus(m.clone()));
    }
    let mut num = a.mod_floor(m);
    let mut den = m.clone();
    let mut acc: i8 = 1;
    loop {
        num = num.mod_floor(&den);
        if num.is_zero() {
            return Ok(if den.is_one() { acc } else { 0 });
        }
        // pull out factors of two: (2/den) = -1 iff den = 3,5 mod 8
        let mut twos = 0u64;
        while num.is_even() {
            num >>= 1;
            twos += 1;
        }
        if twos % 2 == 1 {
            let d8 = (&den % 8u32).to_u8().unwrap();
            if d8 == 3 || d8 == 5 {
                acc = -acc;
            }
        }
        if num.is_one() {
            return Ok(acc);
        }
        // reciprocity flip
        let n4 = (&num % 4u32).to_u8().unwrap();
        let d4 = (&den % 4u32).to_u8().unwrap();
        if n4 == 3 && d4 == 3 {
            acc = -acc;
        }
        std::mem::swap(&mut num, &mut den);
    }
}

/// Legendre symbol via Euler's criterion; p must be an odd prime.
pub fn legendre(a: &BigInt, p: &BigInt) -> Result<i8> {
    if p.is_even() || !p.is_positive() {
        return Err(Error::EvenModulus(p.clone()));
    }
    let am = a.mod_floor(p);
    if am.is_zero() {
        return Ok(0);
    }
    let e = (p - BigInt::one()) >> 1;
    let r = am.modpow(&e, p);
    if r.is_one() {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Integer part of the n-th root.
pub fn nth_root_floor(x: u64, n: u32) -> u64 {
    if x == 0 {
        return 0;
    }
    let mut r = (x as f64).powf(1.0 / n as f64).floor() as u64;
    while r > 0 && r.checked_pow(n).map(|v| v > x).unwrap_or(true) {
        r -= 1;
    }
    while (r + 1).checked_pow(n).map(|v| v <= x).unwrap_or(false) {
        r += 1;
    }
    r
}

/// True if every prime factor of n appears with exponent >= 2 (1 is squarefull).
pub fn is_squarefull_u64(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e >= 2)
}

pub fn is_squarefree_u64(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_squarefree_bigint(n: &BigInt) -> Result<bool> {
    Ok(factor_bigint(n)?.iter().all(|&(_, e)| e == 1))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_rabin() {
        let ps = primes_up_to(2000);
        for n in 0..2000u64 {
            assert_eq!(ps.binary_search(&n).is_ok(), is_prime_u64(n), "n = {n}");
        }
    }

    #[test]
    fn factor_small() {
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(97), vec![(97, 1)]);
    }

    #[test]
    fn factor_bigint_product_of_primes() {
        let n = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64);
        let f = factor_bigint(&n).unwrap();
        assert_eq!(
            f,
            vec![
                (BigInt::from(1_000_003u64), 1),
                (BigInt::from(998_244_353u64), 1)
            ]
        );
    }

    #[test]
    fn legendre_two_mod_seven() {
        // oracle: squares mod 7 by brute force
        let squares: Vec<u64> = (1..7u64).map(|x| x * x % 7).collect();
        let expected = if squares.contains(&2) { 1 } else { -1 };
        assert_eq!(
            legendre(&BigInt::from(2), &BigInt::from(7)).unwrap(),
            expected
        );
        assert_eq!(expected, 1);
        assert_eq!(legendre(&BigInt::from(0), &BigInt::from(7)).unwrap(), 0);
    }

    #[test]
    fn jacobi_rejects_even() {
        assert!(jacobi(&BigInt::from(2), &BigInt::from(4)).is_err());
        assert!(jacobi(&BigInt::from(2), &BigInt::from(-3)).is_err());
    }

    #[test]
    fn jacobi_wikipedia_example() {
        assert_eq!(
            jacobi(&BigInt::from(1001), &BigInt::from(9907)).unwrap(),
            -1
        );
    }

    #[test]
    fn jacobi_matches_factored_legendre() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let a = BigInt::from(rng.gen_range(-10_000i64..10_000));
            let m_raw = rng.gen_range(3u64..50_000) | 1;
            let m = BigInt::from(m_raw);
            let mut expect: i8 = 1;
            for (p, e) in factor_u64(m_raw) {
                let l = legendre(&a, &BigInt::from(p)).unwrap();
                for _ in 0..e {
                    expect = expect.saturating_mul(l);
                }
            }
            assert_eq!(jacobi(&a, &m).unwrap(), expect, "a={a} m={m}");
        }
    }

    #[test]
    fn nth_root_edges() {
        assert_eq!(nth_root_floor(0, 3), 0);
        assert_eq!(nth_root_floor(26, 3), 2);
        assert_eq!(nth_root_floor(27, 3), 3);
        assert_eq!(nth_root_floor(1 << 40, 2), 1 << 20);
    }

    #[test]
    fn squarefull_classifier() {
        assert!(is_squarefull_u64(72)); // 8 * 9
        assert!(!is_squarefull_u64(12));
        assert!(is_squarefull_u64(1));
        assert!(is_squarefree_u64(30));
        assert!(!is_squarefree_u64(18));
    }
}
