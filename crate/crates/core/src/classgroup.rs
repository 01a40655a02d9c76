//! Binary quadratic form class groups of negative fundamental discriminants.
//!
//! Class numbers are exact counts of reduced primitive forms; the group law
//! is Gauss composition with reduction. For the discriminants -4p with
//! p = 1 mod 4 studied here the 2-Sylow subgroup is cyclic (genus theory:
//! one odd prime divisor), so the 2^k-rank collapses to the divisibility
//! 2^k | h, with a compose-based structural check on demand.
//!
//! Everything here is deliberately independent of the number-field pipeline:
//! these ranks are the oracle the spin experiments are correlated against.

use num_integer::Integer;

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::intmath;
use crate::primes::splits_completely;

/// Primitive positive-definite binary quadratic form a x^2 + b xy + c y^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        if !(b.abs() <= a && a <= c) {
            return false;
        }
        if (b.abs() == a || a == c) && b < 0 {
            return false;
        }
        true
    }

    /// Canonical reduced representative of the class.
    pub fn reduce(&self) -> QuadForm {
        let d = self.discriminant();
        debug_assert!(d < 0, "definite forms only");
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        if a < 0 {
            a = -a;
            c = -c;
        }
        loop {
            if c < a {
                std::mem::swap(&mut a, &mut c);
                b = -b;
            }
            if b.abs() > a {
                let two_a = 2 * a;
                let k = (b + a).div_euclid(two_a);
                let old_b = b;
                b = old_b - k * two_a;
                c = ((b as i128 * b as i128 - d as i128) / (4 * a as i128)) as i64;
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                b = -b;
                continue;
            }
            break;
        }
        QuadForm { a, b, c }
    }

    /// Identity form of the discriminant.
    pub fn identity(d: i64) -> QuadForm {
        if d.rem_euclid(4) == 0 {
            QuadForm::new(1, 0, -d / 4)
        } else {
            QuadForm::new(1, 1, (1 - d) / 4)
        }
    }

    pub fn inverse(&self) -> QuadForm {
        QuadForm::new(self.a, -self.b, self.c).reduce()
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        return (a.abs(), s, 0);
    }
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Gauss composition followed by reduction.
pub fn compose(f1: &QuadForm, f2: &QuadForm) -> Result<QuadForm> {
    let d = f1.discriminant();
    if d != f2.discriminant() {
        return Err(Error::DiscriminantMismatch(d.into(), f2.discriminant().into()));
    }
    let (a1, b1, c1) = (f1.a as i128, f1.b as i128, f1.c as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let _ = c1;
    let s = (b1 + b2) / 2;
    // g = gcd(a1, a2, s) = u a1 + v a2 + w s
    let (g0, u0, v0) = ext_gcd(a1, a2);
    let (g, z, w) = ext_gcd(g0, s);
    let u = u0 * z;
    let v = v0 * z;
    debug_assert_eq!(g, u * a1 + v * a2 + w * s);
    let a3 = (a1 / g) * (a2 / g);
    let half_diff = (b1 - b2) / 2;
    let inner = v * half_diff - w * c2;
    let b_raw = b2 + 2 * (a2 / g) * inner;
    let two_a = 2 * a3;
    let b3 = b_raw.rem_euclid(two_a);
    let b3 = if b3 > a3 { b3 - two_a } else { b3 };
    let c3 = (b3 * b3 - d as i128) / (4 * a3);
    Ok(QuadForm::new(a3 as i64, b3 as i64, c3 as i64).reduce())
}

pub fn form_pow(f: &QuadForm, mut e: u64) -> Result<QuadForm> {
    let d = f.discriminant();
    let mut acc = QuadForm::identity(d);
    let mut base = *f;
    while e > 0 {
        if e & 1 == 1 {
            acc = compose(&acc, &base)?;
        }
        base = compose(&base, &base)?;
        e >>= 1;
    }
    Ok(acc)
}

/// Multiplicative order of a class, given a multiple of it (the class
/// number): strip prime factors that keep the power trivial.
pub fn form_order(f: &QuadForm, h: u64) -> Result<u64> {
    let identity = QuadForm::identity(f.discriminant());
    let mut order = h;
    for (p, e) in intmath::factor_u64(h) {
        for _ in 0..e {
            if form_pow(f, order / p)? == identity {
                order /= p;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

fn check_fundamental(d: i64) -> Result<()> {
    if d >= 0 {
        return Err(Error::NotFundamental(d.into()));
    }
    let r = d.rem_euclid(4);
    if r == 1 {
        if !intmath::is_squarefree_u64(d.unsigned_abs()) {
            return Err(Error::NotFundamental(d.into()));
        }
        Ok(())
    } else if r == 0 {
        let m = d / 4;
        let mr = m.rem_euclid(4);
        if (mr == 2 || mr == 3) && intmath::is_squarefree_u64(m.unsigned_abs()) {
            Ok(())
        } else {
            Err(Error::NotFundamental(d.into()))
        }
    } else {
        Err(Error::NotFundamental(d.into()))
    }
}

/// Exact class number of a fundamental discriminant d < 0, by counting
/// reduced primitive forms: loop a <= sqrt(|d|/3) and solve b^2 = d mod 4a.
pub fn class_number(d: i64) -> Result<u64> {
    check_fundamental(d)?;
    Ok(count_reduced_forms(d, false).0)
}

/// (count, forms): forms are collected only when requested, for the
/// exhaustive group-law oracles.
fn count_reduced_forms(d: i64, collect: bool) -> (u64, Vec<QuadForm>) {
    let mut h = 0u64;
    let mut forms = Vec::new();
    let a_max = ((d.unsigned_abs() as f64 / 3.0).sqrt() as i64) + 1;
    let parity = d.rem_euclid(2);
    for a in 1..=a_max {
        let mut b = parity;
        while b <= a {
            let t = b as i128 * b as i128 - d as i128;
            let four_a = 4 * a as i128;
            if t % four_a == 0 {
                let c = (t / four_a) as i64;
                if c >= a && a.gcd(&b).gcd(&c) == 1 {
                    let boundary = b == 0 || b == a || a == c;
                    h += if boundary { 1 } else { 2 };
                    if collect {
                        forms.push(QuadForm::new(a, b, c));
                        if !boundary {
                            forms.push(QuadForm::new(a, -b, c));
                        }
                    }
                }
            }
            b += 2;
        }
    }
    (h, forms)
}

/// All reduced primitive forms of the discriminant.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    check_fundamental(d)?;
    let (_, mut forms) = count_reduced_forms(d, true);
    forms.sort();
    Ok(forms)
}

/// Per-prime class group data for the discriminant -4p.
#[derive(Debug, Clone)]
pub struct ClassData {
    pub p: u64,
    pub h: u64,
    /// largest power of two dividing h
    pub two_part: u64,
    /// rk_2, rk_4, rk_8, rk_16 (each 0 or 1 here: the 2-Sylow is cyclic)
    pub ranks: [u8; 4],
    pub split_in_e: Option<bool>,
}

/// Class data of disc -4p for p = 1 mod 4.
pub fn class_data(p: u64) -> Result<ClassData> {
    if p % 4 != 1 || !intmath::is_prime_u64(p) {
        return Err(Error::WrongResidueClass(p));
    }
    let d = -4 * p as i64;
    let h = class_number(d)?;
    let v = h.trailing_zeros();
    let two_part = 1u64 << v;
    let ranks = [
        u8::from(h % 2 == 0),
        u8::from(h % 4 == 0),
        u8::from(h % 8 == 0),
        u8::from(h % 16 == 0),
    ];
    Ok(ClassData {
        p,
        h,
        two_part,
        ranks,
        split_in_e: None,
    })
}

/// rk_{2^k} of Cl(-4p) for k in 1..=4.
pub fn two_power_rank(p: u64, k: u32) -> Result<u8> {
    if !(1..=4).contains(&k) {
        return Err(Error::WrongResidueClass(p));
    }
    Ok(class_data(p)?.ranks[(k - 1) as usize])
}

/// Structural confirmation that the 2-Sylow subgroup is cyclic of the order
/// the counting formula claims: the ambiguous classes number exactly two
/// (2-rank one) and some class has full 2-power order.
pub fn sylow_two_structure_check(p: u64) -> Result<bool> {
    let data = class_data(p)?;
    let d = -4 * p as i64;
    let forms = reduced_forms(d)?;
    let ambiguous = forms
        .iter()
        .filter(|f| f.b == 0 || f.b == f.a || f.a == f.c)
        .count();
    if ambiguous != 2 {
        return Ok(false);
    }
    if data.two_part == 1 {
        return Ok(true);
    }
    let odd_part = data.h / data.two_part;
    for f in &forms {
        let g = form_pow(f, odd_part)?;
        if form_order(&g, data.two_part)? == data.two_part {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The two bits of the 8-rank governing law: does p split completely in the
/// degree-8 field, and does 8 divide h(-4p)?
pub fn eight_rank_governing_check(field_e: &Field, p: u64) -> Result<(bool, bool)> {
    let split = splits_completely(field_e, p)?;
    let eight = two_power_rank(p, 3)? == 1;
    Ok((split, eight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_class_numbers() {
        // disc -20: (1,0,5), (2,2,3)
        assert_eq!(class_number(-20).unwrap(), 2);
        assert_eq!(class_number(-4).unwrap(), 1);
        assert_eq!(class_number(-68).unwrap(), 4);
        assert_eq!(class_number(-23).unwrap(), 3);
    }

    #[test]
    fn fundamental_checks() {
        assert!(matches!(class_number(-12), Err(Error::NotFundamental(_))));
        assert!(matches!(class_number(-16), Err(Error::NotFundamental(_))));
        assert!(matches!(class_number(-45), Err(Error::NotFundamental(_))));
        assert!(matches!(class_number(20), Err(Error::NotFundamental(_))));
        // -4p for p = 3 mod 4 is not fundamental
        assert!(matches!(class_number(-28), Err(Error::NotFundamental(_))));
        assert!(matches!(class_data(7), Err(Error::WrongResidueClass(7))));
    }

    #[test]
    fn identity_and_inverse_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let p = loop {
                let c = rng.gen_range(3u64..2000) | 1;
                if intmath::is_prime_u64(c) && c % 4 == 1 {
                    break c;
                }
            };
            let d = -4 * p as i64;
            let forms = reduced_forms(d).unwrap();
            let f = forms[rng.gen_range(0..forms.len())];
            let id = QuadForm::identity(d);
            assert_eq!(compose(&id, &f).unwrap(), f);
            assert_eq!(compose(&f, &f.inverse()).unwrap(), id);
        }
    }

    #[test]
    fn associativity_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = loop {
                let c = rng.gen_range(3u64..2500) | 1;
                if intmath::is_prime_u64(c) && c % 4 == 1 {
                    break c;
                }
            };
            let d = -4 * p as i64;
            let forms = reduced_forms(d).unwrap();
            let pick = |rng: &mut ChaCha8Rng| forms[rng.gen_range(0..forms.len())];
            let (f, g, k) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let left = compose(&compose(&f, &g).unwrap(), &k).unwrap();
            let right = compose(&f, &compose(&g, &k).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn order_divides_class_number() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = loop {
                let c = rng.gen_range(3u64..3000) | 1;
                if intmath::is_prime_u64(c) && c % 4 == 1 {
                    break c;
                }
            };
            let d = -4 * p as i64;
            let h = class_number(d).unwrap();
            let forms = reduced_forms(d).unwrap();
            let f = forms[rng.gen_range(0..forms.len())];
            assert_eq!(form_pow(&f, h).unwrap(), QuadForm::identity(d));
            let ord = form_order(&f, h).unwrap();
            assert_eq!(h % ord, 0);
        }
    }

    #[test]
    fn closure_generates_whole_group() {
        // exhaustive closure of the reduced forms equals the counted h
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let p = loop {
                let c = rng.gen_range(3u64..2500) | 1;
                if intmath::is_prime_u64(c) && c % 4 == 1 {
                    break c;
                }
            };
            let d = -4 * p as i64;
            let forms = reduced_forms(d).unwrap();
            let h = class_number(d).unwrap();
            assert_eq!(forms.len() as u64, h);
            let mut seen: std::collections::HashSet<QuadForm> =
                forms.iter().cloned().collect();
            assert_eq!(seen.len() as u64, h);
            // closure under composition stays inside
            for f in &forms {
                for g in &forms {
                    let fg = compose(f, g).unwrap();
                    assert!(seen.contains(&fg));
                }
            }
            seen.clear();
        }
    }

    #[test]
    fn genus_theory_two_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let p = loop {
                let c = rng.gen_range(3u64..20_000) | 1;
                if intmath::is_prime_u64(c) && c % 4 == 1 {
                    break c;
                }
            };
            let data = class_data(p).unwrap();
            assert_eq!(data.ranks[0], 1, "2 must divide h(-4p) at p = {p}");
            // monotone ranks
            for k in 0..3 {
                assert!(data.ranks[k] >= data.ranks[k + 1]);
            }
        }
    }

    #[test]
    fn five_has_rank_four_zero() {
        let data = class_data(5).unwrap();
        assert_eq!(data.h, 2);
        assert_eq!(data.ranks, [1, 0, 0, 0]);
        assert_eq!(two_power_rank(5, 2).unwrap(), 0);
    }

    #[test]
    fn sylow_structure_confirms_cyclicity() {
        for p in [5u64, 13, 17, 29, 41, 113, 257, 1009] {
            if p % 4 != 1 {
                continue;
            }
            assert!(
                sylow_two_structure_check(p).unwrap(),
                "cyclic 2-Sylow check failed at p = {p}"
            );
        }
    }

    #[test]
    fn rank_densities_sanity() {
        // among p = 1 mod 4 up to 100000: 4 | h about 1/2, 8 | h about 1/4,
        // 16 | h about 1/8
        let mut counts = [0u64; 4];
        let mut total = 0u64;
        for p in intmath::primes_up_to(100_000) {
            if p % 4 != 1 {
                continue;
            }
            let data = class_data(p).unwrap();
            total += 1;
            for k in 0..4 {
                counts[k] += data.ranks[k] as u64;
            }
        }
        let f4 = counts[1] as f64 / total as f64;
        let f8 = counts[2] as f64 / total as f64;
        let f16 = counts[3] as f64 / total as f64;
        assert!((f4 - 0.5).abs() < 0.02, "4|h frequency {f4}");
        assert!((f8 - 0.25).abs() < 0.02, "8|h frequency {f8}");
        assert!((f16 - 0.125).abs() < 0.02, "16|h frequency {f16}");
    }
}
