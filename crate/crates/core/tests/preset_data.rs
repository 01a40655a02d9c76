//! Preset data files: regeneration (ignored; writes into presets/) and a
//! consistency check that the shipped files match the in-code constructors.
//!
//! The degree-8 governing field is assembled from first principles here: its
//! ring of integers is presented on the basis zeta8^a mu^b with mu^2 = 1 + i,
//! which is stable under all eight automorphisms; the defining polynomial is
//! the minimal polynomial of eta = zeta8 + mu. Units are 2-saturated by an
//! exact square-root search. The result goes through the same validator as
//! any user-supplied spec file.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use spinlab_core::algebra::{invert_complex_f64, ClassRepSpec, Field, FieldElement, FieldSpec};
use spinlab_core::numeric::Cplx;
use spinlab_core::poly::roots_mod_p;
use spinlab_core::presets;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

// ---------------------------------------------------------------------------
// exact arithmetic on the basis zeta^a mu^b (index a + 4b), mu^2 = 1 + zeta^2
// ---------------------------------------------------------------------------

type BVec = Vec<BigInt>;

fn bz() -> BVec {
    vec![BigInt::zero(); 8]
}

fn bone() -> BVec {
    let mut v = bz();
    v[0] = BigInt::one();
    v
}

fn bzeta() -> BVec {
    let mut v = bz();
    v[1] = BigInt::one();
    v
}

fn bmu() -> BVec {
    let mut v = bz();
    v[4] = BigInt::one();
    v
}

fn mono_mul(a: usize, bb: usize, c: usize, d: usize) -> BVec {
    let mut out = bz();
    let mut reduced: Vec<(usize, usize, BigInt)> = Vec::new();
    let (za, mb) = (a + c, bb + d);
    if mb >= 2 {
        // mu^2 = 1 + zeta^2
        reduced.push((za, mb - 2, BigInt::one()));
        reduced.push((za + 2, mb - 2, BigInt::one()));
    } else {
        reduced.push((za, mb, BigInt::one()));
    }
    for (za, mb, coeff) in reduced {
        let mut z = za;
        let mut cc = coeff;
        while z >= 4 {
            z -= 4;
            cc = -cc;
        }
        out[z + 4 * mb] += cc;
    }
    out
}

fn bmul(x: &BVec, y: &BVec) -> BVec {
    let mut out = bz();
    for i in 0..8 {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..8 {
            if y[j].is_zero() {
                continue;
            }
            let mono = mono_mul(i % 4, i / 4, j % 4, j / 4);
            let prod = &x[i] * &y[j];
            for k in 0..8 {
                if !mono[k].is_zero() {
                    out[k] += &prod * &mono[k];
                }
            }
        }
    }
    out
}

fn badd(x: &BVec, y: &BVec) -> BVec {
    x.iter().zip(y).map(|(a, c)| a + c).collect()
}

fn bpow(x: &BVec, e: u32) -> BVec {
    let mut acc = bone();
    for _ in 0..e {
        acc = bmul(&acc, x);
    }
    acc
}

/// zeta -> zeta^a (a odd); mu -> s*mu when i is fixed (a = 1 mod 4), else
/// s*zeta^3*mu, since (zeta^3 mu)^2 = -i(1+i) = 1 - i.
fn bauto(x: &BVec, a: usize, s: i8) -> BVec {
    let mut out = bz();
    for i in 0..8 {
        if x[i].is_zero() {
            continue;
        }
        let za = i % 4;
        let mb = i / 4;
        let mut term = bone();
        for _ in 0..za {
            let mut zimg = bz();
            let mut zz = a;
            let mut sign = BigInt::one();
            while zz >= 4 {
                zz -= 4;
                sign = -sign;
            }
            zimg[zz] = sign;
            term = bmul(&term, &zimg);
        }
        if mb == 1 {
            let mut mimg = bz();
            let idx = if a % 4 == 1 { 4 } else { 3 + 4 };
            mimg[idx] = if s < 0 { -BigInt::one() } else { BigInt::one() };
            term = bmul(&term, &mimg);
        }
        for k in 0..8 {
            if !term[k].is_zero() {
                out[k] += &x[i] * &term[k];
            }
        }
    }
    out
}

fn mat_key(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    m.iter().flatten().cloned().collect()
}

fn mat_mul(a: &[Vec<BigInt>], c: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &c[k][j];
            }
        }
    }
    out
}

fn matrix_order(m: &[Vec<BigInt>], identity: &[Vec<BigInt>]) -> u32 {
    let mut acc = m.to_vec();
    let mut ord = 1;
    while acc != *identity {
        acc = mat_mul(&acc, m);
        ord += 1;
        assert!(ord <= 16, "runaway order");
    }
    ord
}

/// Square root search inside a validated field: solve the embedding system
/// for each conjugate-consistent sign pattern, round, verify exactly.
fn sqrt_in_field(field: &Field, target: &FieldElement) -> Option<FieldElement> {
    let n = field.degree();
    let vals = field.embed_vals(&target.coords);
    let winv = invert_complex_f64(&field.basis_emb)?;
    let npairs = field.emb.r2;
    let r1 = field.emb.r1;
    for pattern in 0u32..(1 << npairs) {
        let mut w = vec![Cplx::zero(); n];
        let mut ok = true;
        for v in 0..r1 {
            if vals[v].re < 0.0 {
                ok = false;
                break;
            }
            w[v] = Cplx::new(vals[v].re.sqrt(), 0.0);
        }
        if !ok {
            continue;
        }
        for k in 0..npairs {
            let z = vals[r1 + 2 * k];
            let r = z.abs().sqrt();
            let phi = z.im.atan2(z.re) / 2.0;
            let mut s = Cplx::new(r * phi.cos(), r * phi.sin());
            if pattern & (1 << k) != 0 {
                s = Cplx::new(-s.re, -s.im);
            }
            w[r1 + 2 * k] = s;
            w[r1 + 2 * k + 1] = s.conj();
        }
        let mut coords = Vec::with_capacity(n);
        let mut integral = true;
        for row in &winv {
            let mut acc = Cplx::zero();
            for (j, wv) in w.iter().enumerate() {
                acc = acc.add(row[j].mul(*wv));
            }
            if acc.im.abs() > 1e-5 || (acc.re - acc.re.round()).abs() > 1e-5 {
                integral = false;
                break;
            }
            coords.push(BigInt::from(acc.re.round() as i64));
        }
        if !integral {
            continue;
        }
        let cand = FieldElement::new(coords);
        if field.mul(&cand, &cand) == *target {
            return Some(cand);
        }
    }
    None
}

/// Class number h(-4p) by counting reduced forms; used only to sanity-check
/// the preset against the classical 8-rank law.
fn h_minus_4p(p: u64) -> u64 {
    let mut h = 0u64;
    let a_max = (4.0 * p as f64 / 3.0).sqrt() as u64 + 1;
    for a in 1..=a_max {
        for beta in 0..=(a / 2) {
            let num = beta * beta + p;
            if num % a != 0 {
                continue;
            }
            let c = num / a;
            let bq = 2 * beta;
            if c < a || bq > a {
                continue;
            }
            if gcd3(a, bq, c) != 1 {
                continue;
            }
            if bq == 0 || bq == a || a == c {
                h += 1;
            } else {
                h += 2;
            }
        }
    }
    h
}

fn gcd3(a: u64, bq: u64, c: u64) -> u64 {
    use num_integer::Integer;
    a.gcd(&bq).gcd(&c)
}

fn assemble_e8_spec(units: Vec<Vec<BigInt>>) -> FieldSpec {
    let n = 8usize;
    // structure constants of the two-generator basis
    let mult_table: Vec<Vec<Vec<BigInt>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| mono_mul(i % 4, i / 4, j % 4, j / 4))
                .collect()
        })
        .collect();
    // minimal polynomial of eta = zeta + mu
    let eta = badd(&bzeta(), &bmu());
    let powers: Vec<BVec> = (0..=8u32).map(|k| bpow(&eta, k)).collect();
    let rows: Vec<Vec<BigInt>> = (0..8)
        .map(|coord| (0..=8).map(|k| powers[k as usize][coord].clone()).collect())
        .collect();
    let kernel = spinlab_core::linalg::integer_kernel(&rows, 9);
    assert_eq!(kernel.len(), 1, "eta must generate a degree-8 field");
    let mut poly = kernel[0].clone();
    if poly[8].is_negative() {
        for c in poly.iter_mut() {
            *c = -std::mem::take(c);
        }
    }
    assert!(poly[8].is_one(), "minimal polynomial must be monic");

    // all eight automorphism matrices on the basis, ordered: identity, then
    // the lexicographically smallest 4-cycle r with its powers, then the
    // involutions sorted by entries
    let basis_vec = |i: usize| -> BVec {
        let mut v = bz();
        v[i] = BigInt::one();
        v
    };
    let mut mats: Vec<Vec<Vec<BigInt>>> = Vec::new();
    for a in [1usize, 3, 5, 7] {
        for s in [1i8, -1] {
            let mut m = vec![vec![BigInt::zero(); n]; n];
            for (j, col) in (0..n).map(|j| bauto(&basis_vec(j), a, s)).enumerate() {
                for i in 0..n {
                    m[i][j] = col[i].clone();
                }
            }
            mats.push(m);
        }
    }
    let identity: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    assert!(mats.contains(&identity));
    let mut order4: Vec<usize> = (0..8)
        .filter(|&i| mats[i] != identity && matrix_order(&mats[i], &identity) == 4)
        .collect();
    assert_eq!(order4.len(), 2, "dihedral group of order 8 has two 4-cycles");
    order4.sort_by(|&x, &y| mat_key(&mats[x]).cmp(&mat_key(&mats[y])));
    let r = mats[order4[0]].clone();
    let r2 = mat_mul(&r, &r);
    let r3 = mat_mul(&r2, &r);
    let mut rest: Vec<Vec<Vec<BigInt>>> = mats
        .iter()
        .filter(|m| **m != identity && **m != r && **m != r2 && **m != r3)
        .cloned()
        .collect();
    rest.sort_by(|x, y| mat_key(x).cmp(&mat_key(y)));
    assert_eq!(rest.len(), 4);
    let automorphisms: Vec<Vec<Vec<BigInt>>> = [identity, r, r2, r3].into_iter().chain(rest).collect();

    // discriminant of this basis via the trace form
    let trace_of = |v: &BVec| -> BigInt {
        let mut tr = BigInt::zero();
        for i in 0..n {
            let prod = bmul(v, &basis_vec(i));
            tr += &prod[i];
        }
        tr
    };
    let mut gram = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = trace_of(&bmul(&basis_vec(i), &basis_vec(j)));
        }
    }
    let disc = spinlab_core::linalg::det_bareiss(&gram);

    // class representatives: the two smallest completely split primes
    let mut reps: Vec<ClassRepSpec> = Vec::new();
    let mut p = 3u64;
    while reps.len() < 2 {
        p += 2;
        if !spinlab_core::intmath::is_prime_u64(p) {
            continue;
        }
        let (deg, squarefree) = spinlab_core::poly::frobenius_degree(&poly, p);
        if squarefree && deg == 1 {
            let root = roots_mod_p(&poly, p)[0];
            reps.push(ClassRepSpec {
                p,
                g_factor: vec![-BigInt::from(root), BigInt::one()],
            });
        }
    }

    FieldSpec {
        name: "e8".into(),
        degree: n,
        defining_polynomial: poly,
        mult_table,
        automorphisms,
        signature: (0, 4),
        torsion_order: 8,
        torsion_generator: bzeta(),
        fundamental_units: units,
        class_number: 1,
        discriminant: disc,
        class_reps: Some(reps),
        unit_condition_flag: true,
        generator_coords: Some(eta),
    }
}

fn build_e8_spec() -> FieldSpec {
    // starting units: 1 + sqrt2 from the zeta8 subfield, and the conjugate
    // quartic units 1 + mu, 1 + zeta^3 mu
    let sqrt2 = {
        let mut v = bz();
        v[1] = BigInt::one();
        v[3] = -BigInt::one();
        v
    };
    assert_eq!(bmul(&sqrt2, &sqrt2), {
        let mut two = bz();
        two[0] = b(2);
        two
    });
    let u1 = badd(&bone(), &sqrt2);
    let u2 = badd(&bone(), &bmu());
    let u3 = {
        let mut z3mu = bz();
        z3mu[3 + 4] = BigInt::one();
        badd(&bone(), &z3mu)
    };
    let mut units: Vec<Vec<BigInt>> = vec![u1, u2, u3];
    // 2-saturate: while some product of torsion and unit classes is a square,
    // replace a participating unit by the square root and revalidate
    loop {
        let spec = assemble_e8_spec(units.clone());
        let field = Field::new(spec.clone()).expect("generated e8 spec must validate");
        let mut replaced = false;
        'mask: for mask in 1u32..16 {
            let mut t = FieldElement::one(8);
            if mask & 1 != 0 {
                t = field.mul(&t, &FieldElement::new(bzeta()));
            }
            for (i, u) in units.iter().enumerate() {
                if mask & (1 << (i + 1)) != 0 {
                    t = field.mul(&t, &FieldElement::new(u.clone()));
                }
            }
            if let Some(s) = sqrt_in_field(&field, &t) {
                let unit_bits = mask >> 1;
                assert!(
                    unit_bits != 0,
                    "a torsion class was a square; torsion data is wrong"
                );
                let replace = unit_bits.trailing_zeros() as usize;
                units[replace] = s.coords;
                replaced = true;
                break 'mask;
            }
        }
        if !replaced {
            return spec;
        }
    }
}

#[test]
#[ignore = "regenerates the preset data files in crates/core/presets/"]
fn regenerate_preset_files() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("presets");
    let cubic = presets::cubic_spec();
    std::fs::write(dir.join("cubic.json"), cubic.to_json()).unwrap();
    let quintic = presets::quintic11_spec();
    std::fs::write(dir.join("quintic11.json"), quintic.to_json()).unwrap();
    let e8 = build_e8_spec();
    Field::new(e8.clone()).expect("generated e8 spec must validate");
    std::fs::write(dir.join("e8.json"), e8.to_json()).unwrap();
    println!("preset files written to {}", dir.display());
}

#[test]
fn shipped_files_match_constructors() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("presets");
    let cubic_file =
        FieldSpec::from_json(&std::fs::read_to_string(dir.join("cubic.json")).unwrap()).unwrap();
    let cubic = presets::cubic_spec();
    assert_eq!(cubic_file.mult_table, cubic.mult_table);
    assert_eq!(cubic_file.automorphisms, cubic.automorphisms);
    assert_eq!(cubic_file.fundamental_units, cubic.fundamental_units);
    let quintic_file =
        FieldSpec::from_json(&std::fs::read_to_string(dir.join("quintic11.json")).unwrap())
            .unwrap();
    let quintic = presets::quintic11_spec();
    assert_eq!(quintic_file.mult_table, quintic.mult_table);
    assert_eq!(quintic_file.automorphisms, quintic.automorphisms);
    assert_eq!(quintic_file.fundamental_units, quintic.fundamental_units);
}

#[test]
fn e8_spec_regenerates_identically() {
    let generated = build_e8_spec();
    let shipped = presets::e8_field();
    assert_eq!(
        generated.defining_polynomial,
        shipped.spec.defining_polynomial
    );
    assert_eq!(generated.mult_table, shipped.spec.mult_table);
    assert_eq!(generated.automorphisms, shipped.spec.automorphisms);
    assert_eq!(generated.fundamental_units, shipped.spec.fundamental_units);
    assert_eq!(generated.class_reps, shipped.spec.class_reps);
    assert_eq!(generated.discriminant, shipped.spec.discriminant);
    assert_eq!(generated.generator_coords, shipped.spec.generator_coords);
}

#[test]
fn e8_splitting_matches_eight_rank_of_class_number() {
    // the degree-8 preset is a governing field for the 8-rank: p splits
    // completely exactly when 8 divides h(-4p)
    let field = presets::e8_field();
    for p in (5u64..5000).step_by(2) {
        if !spinlab_core::intmath::is_prime_u64(p) || p % 4 != 1 {
            continue;
        }
        let split = spinlab_core::primes::splits_completely(&field, p).unwrap();
        let h = h_minus_4p(p);
        assert_eq!(
            split,
            h % 8 == 0,
            "8-rank law fails at p = {p} (h = {h}, split = {split})"
        );
    }
}
