//! Exact linear algebra over `Q` and `Z`: row reduction, cone membership by
//! simplicial decomposition, and Smith normal form.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::poly::Q;

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
pub fn rref(mut m: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows.to_vec()).1.len()
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect()
}

/// Solve `sum_j lambda_j * cols[j] = target` when the columns are linearly
/// independent. `None` if they are dependent or the system is inconsistent.
pub fn solve_columns(cols: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let k = cols.len();
    let n = target.len();
    // augmented matrix: n rows, k + 1 columns
    let m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (red, piv) = rref(m);
    if piv.len() != k || piv.contains(&k) {
        return None;
    }
    Some((0..k).map(|j| red[j][k].clone()).collect())
}

/// Inverse of a square matrix.
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (red, piv) = rref(aug);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Basis of the right null space `{x : m x = 0}`.
pub fn nullspace(m: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    if m.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
    }
    let (red, piv) = rref(m.to_vec());
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Q::zero(); ncols];
            x[f] = Q::one();
            for (r, &p) in piv.iter().enumerate() {
                x[p] = -red[r][f].clone();
            }
            x
        })
        .collect()
}

/// All index subsets of `0..n` with at most `k` elements, as bitmasks.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, left: usize, cur: u64, out: &mut Vec<u64>) {
        out.push(cur);
        if left == 0 {
            return;
        }
        for i in start..n {
            rec(i + 1, n, left - 1, cur | (1 << i), out);
        }
    }
    rec(0, n, k, 0, &mut out);
    out
}

pub fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

/// Decide whether `target` lies in the closed cone spanned by `vectors` and
/// return nonnegative coefficients if so (Carathéodory: some linearly
/// independent subfamily suffices).
pub fn cone_contains(vectors: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    if target.iter().all(|x| x.is_zero()) {
        return Some(vec![Q::zero(); vectors.len()]);
    }
    let dim = target.len();
    for mask in subsets_up_to(vectors.len(), dim) {
        if mask == 0 {
            continue;
        }
        let idx = mask_indices(mask);
        let cols: Vec<Vec<Q>> = idx.iter().map(|&i| vectors[i].clone()).collect();
        if let Some(lam) = solve_columns(&cols, target) {
            if lam.iter().all(|l| !l.is_negative()) {
                let mut full = vec![Q::zero(); vectors.len()];
                for (i, l) in idx.into_iter().zip(lam) {
                    full[i] = l;
                }
                return Some(full);
            }
        }
    }
    None
}

/// A nonzero nonnegative vector `w` with `sum_j w_j * vectors[j] = 0`, if one exists.
pub fn nonnegative_dependency(vectors: &[Vec<Q>]) -> Option<Vec<Q>> {
    for (z, v) in vectors.iter().enumerate() {
        let neg: Vec<Q> = v.iter().map(|x| -x.clone()).collect();
        if let Some(mut lam) = cone_contains(vectors, &neg) {
            lam[z] += Q::one();
            return Some(lam);
        }
    }
    None
}

/// Nonzero diagonal entries of the Smith normal form of an integer matrix.
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pick the smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        let mut done = false;
        while !done {
            done = true;
            for i in t + 1..rows {
                let f = a[i][t].div_floor(&a[t][t]);
                if !f.is_zero() {
                    for j in t..cols {
                        let v = &a[t][j] * &f;
                        a[i][j] -= v;
                    }
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    done = false;
                }
            }
            for j in t + 1..cols {
                let f = a[t][j].div_floor(&a[t][t]);
                if !f.is_zero() {
                    for r in a.iter_mut().skip(t) {
                        let v = &r[t] * &f;
                        r[j] -= v;
                    }
                }
                if !a[t][j].is_zero() {
                    for r in a.iter_mut() {
                        r.swap(t, j);
                    }
                    done = false;
                }
            }
            if done {
                // the pivot must divide the whole remaining block
                'outer: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            for jj in t..cols {
                                let v = a[i][jj].clone();
                                a[t][jj] += v;
                            }
                            done = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Exponent (largest invariant factor) of the cokernel `Z^r / span(columns)`,
/// `None` when the columns do not span `Q^r`.
pub fn cokernel_exponent(columns: &[Vec<i64>], r: usize) -> Option<BigInt> {
    let m: Vec<Vec<i64>> = (0..r).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    let inv = smith_invariants(&m);
    if inv.len() < r {
        return None;
    }
    Some(inv.into_iter().fold(BigInt::one(), |acc, d| acc.lcm(&d)))
}
