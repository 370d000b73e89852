//! Brute-force oracles shared by integration tests. Everything here is
//! independent of the library's kernel: plain `i128` arithmetic, fraction-free
//! elimination, and exhaustive subset enumeration.
#![allow(dead_code)]

use std::collections::BTreeSet;

use corrpoly::Rational;
use num_bigint::BigInt;

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divides by the gcd of all entries (sign kept).
pub fn primitive(v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

/// Rank by fraction-free Gaussian elimination.
pub fn rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                let row: Vec<i128> = (0..cols).map(|j| a * m[i][j] - b * m[r][j]).collect();
                m[i] = primitive(row);
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Determinant by Bareiss elimination.
pub fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// For `rows` of length `n` with rank `n - 1`, the generator of their null
/// space via signed maximal minors (Cramer). Requires exactly `n - 1` rows.
pub fn null_vector(rows: &[Vec<i128>]) -> Vec<i128> {
    let n = rows[0].len();
    assert_eq!(rows.len(), n - 1);
    let v: Vec<i128> = (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                .collect();
            let d = det(minor);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    primitive(v)
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of the pointed cone `{x : A x >= 0}` (`A` of full column
/// rank), found by trying every (d-1)-subset of rows as the tight set.
pub fn extreme_rays(rows: &[Vec<i128>], d: usize) -> BTreeSet<Vec<i128>> {
    let mut rays = BTreeSet::new();
    if d == 1 {
        // The half-lines of R^1 that survive.
        for r in [vec![1], vec![-1]] {
            if rows.iter().all(|a| dot(a, &r) >= 0) {
                rays.insert(r);
            }
        }
        return rays;
    }
    for_each_subset(rows.len(), d - 1, |subset| {
        let tight: Vec<Vec<i128>> = subset.iter().map(|&i| rows[i].clone()).collect();
        if rank(&tight) != d - 1 {
            return;
        }
        let r = null_vector(&tight);
        for cand in [r.clone(), r.iter().map(|x| -x).collect()] {
            if rows.iter().all(|a| dot(a, &cand) >= 0) {
                rays.insert(cand);
            }
        }
    });
    rays
}

/// Facets `(b, a)` (primitive, `b + a.x >= 0`) of a full-dimensional
/// polytope, by fitting a hyperplane through every affinely independent
/// `d`-subset of points and keeping the valid ones.
pub fn facets(points: &[Vec<i128>]) -> BTreeSet<Vec<i128>> {
    let d = points[0].len();
    let homog: Vec<Vec<i128>> = points
        .iter()
        .map(|p| std::iter::once(1).chain(p.iter().copied()).collect())
        .collect();
    let mut out = BTreeSet::new();
    for_each_subset(points.len(), d, |subset| {
        let rows: Vec<Vec<i128>> = subset.iter().map(|&i| homog[i].clone()).collect();
        if rank(&rows) != d {
            return;
        }
        let h = null_vector(&rows);
        let values: Vec<i128> = homog.iter().map(|p| dot(p, &h)).collect();
        if values.iter().all(|&v| v >= 0) {
            out.insert(h);
        } else if values.iter().all(|&v| v <= 0) {
            out.insert(h.iter().map(|x| -x).collect());
        }
    });
    out
}

pub fn to_i128(x: &BigInt) -> i128 {
    i128::try_from(x).expect("fits in i128")
}

pub fn rational_to_i128(x: &Rational) -> i128 {
    assert!(x.is_integer(), "{x} is not an integer");
    to_i128(x.numer())
}

pub fn rationals(v: &[i128]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x as i64)).collect()
}

/// Primitive integer `(b, a)` of a constraint row.
pub fn row_key(row: &corrpoly::ConstraintRow) -> Vec<i128> {
    let ints = corrpoly::rational::primitive_integer_vector(&row.homogeneous());
    ints.iter().map(to_i128).collect()
}
