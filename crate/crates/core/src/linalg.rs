//! Integer matrix kernel: Hermite normal form, determinants, membership tests.
//!
//! Matrices are dense, column-major vectors of `BigInt` columns. A lattice is
//! the column span. HNF here is lower-triangular with positive diagonal and
//! off-diagonal entries reduced into [0, diag); that form is unique, so the
//! serialized HNF doubles as a dedup key for ideals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Col = Vec<BigInt>;

/// Column-style HNF of the lattice spanned by `cols` (each of length `n`).
/// Returns `n` columns forming a lower-triangular basis; panics if the span
/// has rank < n (ideal lattices are always full rank).
pub fn hnf_full_rank(n: usize, cols: &[Col]) -> Vec<Col> {
    let mut work: Vec<Col> = cols.to_vec();
    let mut basis: Vec<Col> = Vec::with_capacity(n);
    for row in 0..n {
        // eliminate row `row` from all but one column by gcd steps
        loop {
            let mut pivot: Option<usize> = None;
            for (j, c) in work.iter().enumerate() {
                if !c[row].is_zero() {
                    match pivot {
                        None => pivot = Some(j),
                        Some(pj) => {
                            if c[row].abs() < work[pj][row].abs() {
                                pivot = Some(j);
                            }
                        }
                    }
                }
            }
            let pj = match pivot {
                Some(p) => p,
                None => panic!("lattice rank deficient at row {row}"),
            };
            let mut others = false;
            let pivot_col = work[pj].clone();
            for (j, c) in work.iter_mut().enumerate() {
                if j == pj || c[row].is_zero() {
                    continue;
                }
                others = true;
                let q = c[row].div_floor(&pivot_col[row]);
                for i in row..n {
                    let t = &c[i] - &q * &pivot_col[i];
                    c[i] = t;
                }
            }
            if !others {
                let mut col = work.swap_remove(pj);
                if col[row].is_negative() {
                    for v in col.iter_mut() {
                        *v = -std::mem::take(v);
                    }
                }
                basis.push(col);
                break;
            }
        }
    }
    // reduce above-diagonal entries into [0, diag)
    for j in (0..n).rev() {
        for i in (j + 1)..n {
            let d = basis[i][i].clone();
            let q = basis[j][i].div_floor(&d);
            if q.is_zero() {
                continue;
            }
            let sub = basis[i].clone();
            for r in 0..n {
                let t = &basis[j][r] - &q * &sub[r];
                basis[j][r] = t;
            }
        }
    }
    basis
}

/// Column-style HNF of a possibly rank-deficient column span: returns one
/// basis column per pivot row, in pivot-row order.
pub fn hnf_columns(n: usize, cols: &[Col]) -> Vec<Col> {
    let mut work: Vec<Col> = cols
        .iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut basis: Vec<Col> = Vec::new();
    for row in 0..n {
        loop {
            let mut pivot: Option<usize> = None;
            for (j, c) in work.iter().enumerate() {
                if !c[row].is_zero() && c[..row].iter().all(|x| x.is_zero()) {
                    match pivot {
                        None => pivot = Some(j),
                        Some(pj) => {
                            if c[row].abs() < work[pj][row].abs() {
                                pivot = Some(j);
                            }
                        }
                    }
                }
            }
            let pj = match pivot {
                Some(p) => p,
                None => break,
            };
            let mut others = false;
            let pivot_col = work[pj].clone();
            for (j, c) in work.iter_mut().enumerate() {
                if j == pj || c[row].is_zero() || !c[..row].iter().all(|x| x.is_zero()) {
                    continue;
                }
                others = true;
                let q = c[row].div_floor(&pivot_col[row]);
                for i in row..n {
                    let t = &c[i] - &q * &pivot_col[i];
                    c[i] = t;
                }
            }
            if !others {
                let mut col = work.swap_remove(pj);
                if col[row].is_negative() {
                    for v in col.iter_mut() {
                        *v = -std::mem::take(v);
                    }
                }
                basis.push(col);
                break;
            }
        }
    }
    basis
}

/// Determinant of an HNF basis (product of the diagonal).
pub fn hnf_det(basis: &[Col]) -> BigInt {
    basis
        .iter()
        .enumerate()
        .fold(BigInt::one(), |acc, (i, c)| acc * &c[i])
}

/// Does `v` lie in the lattice with lower-triangular basis `basis`?
pub fn hnf_contains(basis: &[Col], v: &[BigInt]) -> bool {
    let n = basis.len();
    let mut rem: Vec<BigInt> = v.to_vec();
    for i in 0..n {
        if rem[i].is_zero() {
            continue;
        }
        let (q, r) = rem[i].div_rem(&basis[i][i]);
        if !r.is_zero() {
            return false;
        }
        for k in i..n {
            let t = &rem[k] - &q * &basis[i][k];
            rem[k] = t;
        }
    }
    rem.iter().all(|x| x.is_zero())
}

/// Coordinates of `v` in the HNF basis, if `v` lies in the lattice.
pub fn hnf_coordinates(basis: &[Col], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = basis.len();
    let mut rem: Vec<BigInt> = v.to_vec();
    let mut coords = vec![BigInt::zero(); n];
    for i in 0..n {
        if rem[i].is_zero() {
            continue;
        }
        let (q, r) = rem[i].div_rem(&basis[i][i]);
        if !r.is_zero() {
            return None;
        }
        for k in i..n {
            let t = &rem[k] - &q * &basis[i][k];
            rem[k] = t;
        }
        coords[i] = q;
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// Exact determinant of a square matrix (rows of BigInt) by fraction-free
/// Bareiss elimination.
pub fn det_bareiss(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = mat.to_vec();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = &num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// i128 determinant with overflow checking; None if any step overflows.
pub fn det_i128_checked(mat: &[Vec<i128>]) -> Option<i128> {
    let n = mat.len();
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = mat.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| a[i][k] != 0);
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = a[i][j].checked_mul(a[k][k])?;
                let t2 = a[i][k].checked_mul(a[k][j])?;
                a[i][j] = t1.checked_sub(t2)? / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Allocation-free i128 determinant on a stack buffer (dimension <= 8),
/// for hot enumeration loops. None on overflow.
pub fn det_i128_stack(a: &mut [[i128; 8]; 8], n: usize) -> Option<i128> {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| a[i][k] != 0);
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = a[i][j].checked_mul(a[k][k])?;
                let t2 = a[i][k].checked_mul(a[k][j])?;
                a[i][j] = t1.checked_sub(t2)? / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Basis of the integer kernel {x : M x = 0} for an integer matrix given by
/// rows. Standard HNF-of-transpose trick: column-reduce [M; I] stacked.
pub fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let nrows = rows.len();
    // columns of the working matrix: images stacked over identity tail
    let mut cols: Vec<Col> = (0..ncols)
        .map(|j| {
            let mut c: Col = (0..nrows).map(|i| rows[i][j].clone()).collect();
            let mut tail = vec![BigInt::zero(); ncols];
            tail[j] = BigInt::one();
            c.extend(tail);
            c
        })
        .collect();
    // eliminate the image block
    for row in 0..nrows {
        loop {
            let mut pivot: Option<usize> = None;
            for (j, c) in cols.iter().enumerate() {
                if !c[row].is_zero() && c[..row].iter().all(|x| x.is_zero()) {
                    match pivot {
                        None => pivot = Some(j),
                        Some(pj) => {
                            if c[row].abs() < cols[pj][row].abs() {
                                pivot = Some(j);
                            }
                        }
                    }
                }
            }
            let pj = match pivot {
                Some(p) => p,
                None => break,
            };
            let mut done = true;
            let pivot_col = cols[pj].clone();
            for (j, c) in cols.iter_mut().enumerate() {
                if j == pj || c[row].is_zero() || !c[..row].iter().all(|x| x.is_zero()) {
                    continue;
                }
                done = false;
                let q = c[row].div_floor(&pivot_col[row]);
                for i in 0..c.len() {
                    let t = &c[i] - &q * &pivot_col[i];
                    c[i] = t;
                }
            }
            if done {
                break;
            }
        }
    }
    cols.into_iter()
        .filter(|c| c[..nrows].iter().all(|x| x.is_zero()))
        .map(|c| c[nrows..].to_vec())
        .filter(|t| t.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Multiply two column-major integer matrices: (a * b) where a is n x m and b is m x k.
pub fn mat_mul_vec(a: &[Vec<i64>], v: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let mut out = vec![BigInt::zero(); n];
    for (i, row) in a.iter().enumerate() {
        let mut acc = BigInt::zero();
        for (j, &m) in row.iter().enumerate() {
            if m != 0 {
                acc += &v[j] * m;
            }
        }
        out[i] = acc;
    }
    out
}
