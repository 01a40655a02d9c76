//! Floating-point LLL with a tracked unimodular transform, plus bounded
//! short-vector enumeration on the reduced basis.

/// LLL-reduce the rows of `basis` (linearly independent vectors in R^d).
/// Returns the reduced rows and the integer transform T with
/// reduced[i] = sum_j T[i][j] * basis[j].
pub fn lll_reduce_f64(basis: &[Vec<f64>], delta: f64) -> (Vec<Vec<f64>>, Vec<Vec<i64>>) {
    let k = basis.len();
    if k == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut b: Vec<Vec<f64>> = basis.to_vec();
    let mut t: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();
    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, c)| a * c).sum() };
    let mut star: Vec<Vec<f64>> = vec![vec![]; k];
    let mut mu = vec![vec![0.0f64; k]; k];
    let mut norms = vec![0.0f64; k];
    let gso = |b: &Vec<Vec<f64>>,
               star: &mut Vec<Vec<f64>>,
               mu: &mut Vec<Vec<f64>>,
               norms: &mut Vec<f64>| {
        for i in 0..k {
            let mut v = b[i].clone();
            for j in 0..i {
                mu[i][j] = dot(&b[i], &star[j]) / norms[j];
                for (x, s) in v.iter_mut().zip(&star[j]) {
                    *x -= mu[i][j] * s;
                }
            }
            norms[i] = dot(&v, &v);
            star[i] = v;
        }
    };
    gso(&b, &mut star, &mut mu, &mut norms);
    let mut i = 1usize;
    let mut guard = 0u32;
    while i < k {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        for j in (0..i).rev() {
            if mu[i][j].abs() > 0.5 {
                let q = mu[i][j].round();
                for c in 0..b[0].len() {
                    let s = b[j][c];
                    b[i][c] -= q * s;
                }
                for c in 0..k {
                    t[i][c] -= (q as i64) * t[j][c];
                }
                gso(&b, &mut star, &mut mu, &mut norms);
            }
        }
        if norms[i] >= (delta - mu[i][i - 1] * mu[i][i - 1]) * norms[i - 1] {
            i += 1;
        } else {
            b.swap(i, i - 1);
            t.swap(i, i - 1);
            gso(&b, &mut star, &mut mu, &mut norms);
            i = i.max(2) - 1;
        }
    }
    (b, t)
}

/// Enumerate all integer combinations x of the rows with |sum x_i rows_i|^2
/// <= radius_sq, invoking `visit` with the coefficient vector. The zero
/// vector is skipped. Returns false if the node budget was exhausted.
pub fn enumerate_short_vectors(
    rows: &[Vec<f64>],
    radius_sq: f64,
    node_budget: usize,
    visit: &mut dyn FnMut(&[i64]),
) -> bool {
    let k = rows.len();
    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, c)| a * c).sum() };
    // Gram-Schmidt data
    let mut star: Vec<Vec<f64>> = vec![vec![]; k];
    let mut mu = vec![vec![0.0f64; k]; k];
    let mut norms = vec![0.0f64; k];
    for i in 0..k {
        let mut v = rows[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&rows[i], &star[j]) / norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * s;
            }
        }
        norms[i] = dot(&v, &v);
        star[i] = v;
    }
    let slack = 1.0 + 1e-9;
    let mut coeff = vec![0i64; k];
    let mut centers = vec![0.0f64; k];
    let mut partial = vec![0.0f64; k + 1];
    let mut nodes = 0usize;
    // depth-first over levels k-1 .. 0
    fn descend(
        level: usize,
        k: usize,
        radius_sq: f64,
        slack: f64,
        mu: &Vec<Vec<f64>>,
        norms: &Vec<f64>,
        coeff: &mut Vec<i64>,
        centers: &mut Vec<f64>,
        partial: &mut Vec<f64>,
        nodes: &mut usize,
        node_budget: usize,
        visit: &mut dyn FnMut(&[i64]),
    ) -> bool {
        // center for this level given choices above
        let mut c = 0.0f64;
        for j in (level + 1)..k {
            c += mu[j][level] * coeff[j] as f64;
        }
        centers[level] = c;
        let remaining = radius_sq * slack - partial[level + 1];
        if remaining < 0.0 {
            return true;
        }
        let half_width = (remaining / norms[level]).sqrt();
        let lo = (-c - half_width).ceil() as i64;
        let hi = (-c + half_width).floor() as i64;
        for x in lo..=hi {
            *nodes += 1;
            if *nodes > node_budget {
                return false;
            }
            coeff[level] = x;
            let d = x as f64 + c;
            partial[level] = partial[level + 1] + d * d * norms[level];
            if level == 0 {
                if coeff.iter().any(|&v| v != 0) && partial[0] <= radius_sq * slack {
                    visit(coeff);
                }
            } else if !descend(
                level - 1,
                k,
                radius_sq,
                slack,
                mu,
                norms,
                coeff,
                centers,
                partial,
                nodes,
                node_budget,
                visit,
            ) {
                return false;
            }
        }
        coeff[level] = 0;
        true
    }
    descend(
        k - 1,
        k,
        radius_sq,
        slack,
        &mu,
        &norms,
        &mut coeff,
        &mut centers,
        &mut partial,
        &mut nodes,
        node_budget,
        visit,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_skewed_basis() {
        let basis = vec![vec![1.0, 0.0], vec![0.99, 0.01]];
        let (red, t) = lll_reduce_f64(&basis, 0.99);
        // transform is unimodular: |det| = 1
        let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
        assert_eq!(det.abs(), 1);
        let n0: f64 = red[0].iter().map(|x| x * x).sum();
        assert!(n0 < 0.5, "first vector still long: {n0}");
    }

    #[test]
    fn transform_reproduces_rows() {
        let basis = vec![vec![3.0, 1.0, 0.5], vec![0.0, 2.0, 0.25], vec![0.0, 0.0, 1.5]];
        let (red, t) = lll_reduce_f64(&basis, 0.99);
        for i in 0..3 {
            for c in 0..3 {
                let rebuilt: f64 = (0..3).map(|j| t[i][j] as f64 * basis[j][c]).sum();
                assert!((rebuilt - red[i][c]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn enumeration_finds_lattice_points() {
        // Z^2: points with norm^2 <= 2 are (+-1,0),(0,+-1),(+-1,+-1)
        let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let mut found = Vec::new();
        let ok = enumerate_short_vectors(&rows, 2.0, 10_000, &mut |c| {
            found.push((c[0], c[1]));
        });
        assert!(ok);
        assert_eq!(found.len(), 8);
    }
}
