//! Shipped field presets.
//!
//! The cubic and quintic presets are monogenic real cyclic fields whose unit
//! systems are classical cyclotomic units, so their entire spec derives
//! exactly from the defining polynomial in a few lines; the JSON files under
//! presets/ are generated from these constructors. The degree-8 field is
//! shipped as data (see presets/e8.json) and revalidated on every load.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Arc;

use crate::algebra::{preset, ClassRepSpec, Field, FieldSpec};
use crate::poly::roots_mod_p;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn smallest_root_rep(poly: &[BigInt], p: u64) -> ClassRepSpec {
    let roots = roots_mod_p(poly, p);
    let c = *roots.first().expect("prime must split");
    ClassRepSpec {
        p,
        g_factor: vec![-BigInt::from(c), BigInt::one()],
    }
}

/// The totally real cyclic cubic field of conductor 9, presented by
/// x^3 - 3x - 1. Units: theta and its conjugate 2 - theta^2.
pub fn cubic_spec() -> FieldSpec {
    let poly = vec![b(-1), b(-3), b(0), b(1)];
    let reps = vec![smallest_root_rep(&poly, 17), smallest_root_rep(&poly, 19)];
    FieldSpec::from_power_basis(
        "cubic",
        poly,
        vec![
            vec![b(0), b(1), b(0)],
            vec![b(2), b(0), b(-1)],
            vec![b(-2), b(-1), b(1)],
        ],
        (3, 0),
        2,
        vec![b(-1), b(0), b(0)],
        vec![vec![b(0), b(1), b(0)], vec![b(2), b(0), b(-1)]],
        1,
        b(81),
        Some(reps),
        true,
    )
}

/// The totally real cyclic quintic field of conductor 11, presented by the
/// minimal polynomial of 2cos(2pi/11). The Galois orbit and the cyclotomic
/// units are Dickson polynomials in the generator, so everything is exact.
pub fn quintic11_spec() -> FieldSpec {
    let poly = vec![b(1), b(3), b(-3), b(-4), b(1), b(1)];
    let n = 5usize;
    let table = crate::algebra::power_basis_mult_table(&poly);
    let mul = |a: &[BigInt], c: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, cj) in c.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let prod = ai * cj;
                for (k, t) in table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &prod * t;
                    }
                }
            }
        }
        out
    };
    let sub = |a: &[BigInt], c: &[BigInt]| -> Vec<BigInt> {
        a.iter().zip(c).map(|(x, y)| x - y).collect()
    };
    let scale = |a: &[BigInt], k: i64| -> Vec<BigInt> { a.iter().map(|x| x * k).collect() };
    let theta: Vec<BigInt> = vec![b(0), b(1), b(0), b(0), b(0)];
    let one: Vec<BigInt> = vec![b(1), b(0), b(0), b(0), b(0)];
    // Dickson polynomials: D_0 = 2, D_1 = theta, D_{m+1} = theta*D_m - D_{m-1};
    // D_m(2cos t) = 2cos(mt), so D_m(theta) runs over the conjugates.
    let mut dickson: Vec<Vec<BigInt>> = vec![scale(&one, 2), theta.clone()];
    for m in 2..=5usize {
        let next = sub(&mul(&theta, &dickson[m - 1]), &dickson[m - 2]);
        dickson.push(next);
    }
    // Frobenius orbit: 2 generates (Z/11)^*/{+-1}; 2^k mod 11 folded into [1,5]
    let images: Vec<Vec<BigInt>> = [1usize, 2, 4, 3, 5]
        .iter()
        .map(|&m| dickson[m].clone())
        .collect();
    // cyclotomic units sin(a pi/11)/sin(pi/11) written in c5 = D_5(theta)
    let c5 = dickson[5].clone();
    let c5_2 = mul(&c5, &c5);
    let c5_3 = mul(&c5_2, &c5);
    let c5_4 = mul(&c5_2, &c5_2);
    let xi2 = scale(&c5, -1);
    let xi3 = sub(&c5_2, &one);
    let xi4 = sub(&scale(&c5, 2), &c5_3);
    let xi5 = {
        let t = sub(&c5_4, &scale(&c5_2, 3));
        t.iter()
            .zip(&one)
            .map(|(x, y)| x + y)
            .collect::<Vec<BigInt>>()
    };
    let reps = vec![smallest_root_rep(&poly, 23), smallest_root_rep(&poly, 43)];
    FieldSpec::from_power_basis(
        "quintic11",
        poly,
        images,
        (5, 0),
        2,
        vec![b(-1), b(0), b(0), b(0), b(0)],
        vec![xi2, xi3, xi4, xi5],
        1,
        b(14641),
        Some(reps),
        true,
    )
}

pub fn cubic_field() -> Arc<Field> {
    preset("cubic").expect("cubic preset must validate")
}

pub fn quintic_field() -> Arc<Field> {
    preset("quintic11").expect("quintic preset must validate")
}

pub fn e8_field() -> Arc<Field> {
    preset("e8").expect("e8 preset must validate")
}
