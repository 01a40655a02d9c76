use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

type BVec = Vec<BigInt>;

fn zero() -> BVec { vec![BigInt::zero(); 8] }
fn mono_mul(a: usize, bb: usize, c: usize, d: usize) -> BVec {
    let mut out = zero();
    let mut reduced: Vec<(usize, usize, BigInt)> = Vec::new();
    let (za, mb) = (a + c, bb + d);
    if mb >= 2 {
        reduced.push((za, mb - 2, BigInt::one()));
        reduced.push((za + 2, mb - 2, BigInt::one()));
    } else {
        reduced.push((za, mb, BigInt::one()));
    }
    for (za, mb, coeff) in reduced {
        let mut z = za;
        let mut cc = coeff;
        while z >= 4 { z -= 4; cc = -cc; }
        out[z + 4 * mb] += cc;
    }
    out
}
fn mul(x: &BVec, y: &BVec) -> BVec {
    let mut out = zero();
    for i in 0..8 {
        if x[i].is_zero() { continue; }
        for j in 0..8 {
            if y[j].is_zero() { continue; }
            let mono = mono_mul(i % 4, i / 4, j % 4, j / 4);
            let prod = &x[i] * &y[j];
            for k in 0..8 {
                if !mono[k].is_zero() { out[k] += &prod * &mono[k]; }
            }
        }
    }
    out
}
fn pow(x: &BVec, e: u32) -> BVec {
    let mut acc = zero(); acc[0] = BigInt::one();
    for _ in 0..e { acc = mul(&acc, x); }
    acc
}

fn main() {
    // candidates as coordinate vectors in basis zeta^a mu^b, index a + 4b
    let mk = |entries: &[(usize, i64)]| -> BVec {
        let mut v = zero();
        for &(i, c) in entries { v[i] = BigInt::from(c); }
        v
    };
    let candidates: Vec<(&str, BVec)> = vec![
        ("zeta + mu", mk(&[(1, 1), (4, 1)])),
        ("zeta - mu", mk(&[(1, 1), (4, -1)])),
        ("zeta + zeta*mu", mk(&[(1, 1), (5, 1)])),
        ("zeta + zeta^2*mu", mk(&[(1, 1), (6, 1)])),
        ("zeta + zeta^3*mu", mk(&[(1, 1), (7, 1)])),
        ("zeta^2 + mu", mk(&[(2, 1), (4, 1)])),
        ("zeta^3 + mu", mk(&[(3, 1), (4, 1)])),
        ("1 + zeta + mu", mk(&[(0, 1), (1, 1), (4, 1)])),
        ("zeta + mu + zeta*mu", mk(&[(1, 1), (4, 1), (5, 1)])),
        ("mu + zeta*mu", mk(&[(4, 1), (5, 1)])),
        ("zeta + 2mu", mk(&[(1, 1), (4, 2)])),
        ("zeta + mu + zeta^2*mu", mk(&[(1, 1), (4, 1), (6, 1)])),
        ("zeta + mu - zeta^3*mu", mk(&[(1, 1), (4, 1), (7, -1)])),
        ("zeta^2 + zeta + mu", mk(&[(2, 1), (1, 1), (4, 1)])),
        ("mu*(1+zeta) + zeta^2", mk(&[(4, 1), (5, 1), (2, 1)])),
    ];
    for (name, eta) in candidates {
        let mut powers: Vec<BVec> = Vec::with_capacity(9);
        for k in 0..=8u32 {
            powers.push(pow(&eta, k));
        }
        let rows: Vec<Vec<BigInt>> = (0..8)
            .map(|coord| (0..=8).map(|k| powers[k as usize][coord].clone()).collect())
            .collect();
        let kernel = spinlab_core::linalg::integer_kernel(&rows, 9);
        if kernel.len() != 1 {
            println!("{name}: degree < 8 (kernel dim {})", kernel.len());
            continue;
        }
        let p_mat: Vec<Vec<BigInt>> = (0..8)
            .map(|coord| (0..8).map(|k| powers[k][coord].clone()).collect())
            .collect();
        let det = spinlab_core::linalg::det_bareiss(&p_mat);
        let mut pl = kernel[0].clone();
        if pl[8].is_negative() { for c in pl.iter_mut() { *c = -std::mem::take(c); } }
        println!("{name}: det P = {det}, minpoly = {:?}", pl);
    }
}
