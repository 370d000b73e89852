//! Double description kernel.
//!
//! A [`DdPair`] describes the cone `{x : A x >= 0}` cut out by the processed
//! constraint rows `A`, both as the rows themselves and as generators: a
//! lineality basis plus the extreme rays modulo that lineality space. Rows
//! are inserted one at a time. A row that is not identically zero on the
//! lineality space pivots one lineality vector into a ray; otherwise rays
//! are split by sign and each adjacent (positive, negative) pair yields a
//! new ray on the row's hyperplane.
//!
//! All coordinates are primitive integer vectors, so every comparison is
//! exact.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bitset::ActiveSet;
use super::linalg;
use crate::error::{Error, Result};
use crate::rational::{make_primitive, primitive_integer_vector, Rational};

pub const DEFAULT_RAY_CAP: usize = 5_000_000;

/// Order in which constraint rows are fed to the kernel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InsertionOrder {
    #[default]
    LexMin,
    Given,
    Random(u64),
}

impl InsertionOrder {
    pub fn permutation(&self, rows: &[Vec<Rational>]) -> Vec<usize> {
        let mut order: Vec<usize> = (0..rows.len()).collect();
        match *self {
            InsertionOrder::Given => {}
            InsertionOrder::LexMin => order.sort_by(|&a, &b| rows[a].cmp(&rows[b]).then(a.cmp(&b))),
            InsertionOrder::Random(seed) => order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        }
        order
    }
}

impl fmt::Display for InsertionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InsertionOrder::LexMin => f.write_str("lexmin"),
            InsertionOrder::Given => f.write_str("given"),
            InsertionOrder::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for InsertionOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lexmin" => Ok(InsertionOrder::LexMin),
            "given" => Ok(InsertionOrder::Given),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(InsertionOrder::Random)
                .ok_or_else(|| {
                    Error::parse(format!(
                        "unknown insertion order {s:?} (expected lexmin, given or random:<seed>)"
                    ))
                }),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DdProgress {
    pub processed: usize,
    pub total: usize,
    pub rays: usize,
    pub lineality: usize,
}

pub type ProgressFn = Arc<dyn Fn(DdProgress) + Send + Sync>;

#[derive(Clone)]
pub struct DdOptions {
    pub order: InsertionOrder,
    pub ray_cap: usize,
    /// Confirm every combinatorial adjacency decision with an exact rank
    /// computation. Slow; meant for small problems in debug builds.
    pub cross_check: bool,
    pub progress: Option<ProgressFn>,
}

impl Default for DdOptions {
    fn default() -> Self {
        DdOptions {
            order: InsertionOrder::LexMin,
            ray_cap: DEFAULT_RAY_CAP,
            cross_check: false,
            progress: None,
        }
    }
}

impl fmt::Debug for DdOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DdOptions")
            .field("order", &self.order)
            .field("ray_cap", &self.ray_cap)
            .field("cross_check", &self.cross_check)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    coords: Vec<BigInt>,
    active: ActiveSet,
}

impl Ray {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Indices (insertion positions) of processed rows this ray is tight on.
    pub fn active(&self) -> &ActiveSet {
        &self.active
    }
}

#[derive(Clone, Debug)]
pub struct DdPair {
    dim: usize,
    constraints: Vec<Vec<BigInt>>,
    lineality: Vec<Vec<BigInt>>,
    rays: Vec<Ray>,
    ray_cap: usize,
    cross_check: bool,
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// `alpha * u + beta * v`, made primitive.
fn combine(alpha: &BigInt, u: &[BigInt], beta: &BigInt, v: &[BigInt]) -> Vec<BigInt> {
    make_primitive(u.iter().zip(v).map(|(x, y)| alpha * x + beta * y).collect())
}

fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().cloned().map(Rational::from_integer).collect()
}

impl DdPair {
    /// The whole space: no rows, lineality spanned by the unit vectors.
    pub fn free_cone(dim: usize) -> Self {
        let lineality = (0..dim)
            .map(|i| {
                let mut e = vec![BigInt::zero(); dim];
                e[i] = BigInt::from(1);
                e
            })
            .collect();
        DdPair {
            dim,
            constraints: Vec::new(),
            lineality,
            rays: Vec::new(),
            ray_cap: DEFAULT_RAY_CAP,
            cross_check: false,
        }
    }

    pub fn with_ray_cap(mut self, cap: usize) -> Self {
        self.ray_cap = cap;
        self
    }

    pub fn with_cross_check(mut self, on: bool) -> Self {
        self.cross_check = on;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn processed(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[Vec<BigInt>] {
        &self.constraints
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<BigInt>] {
        &self.lineality
    }

    /// A conic generating set: rays plus both orientations of every
    /// lineality vector.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = self.rays.iter().map(|r| r.coords.clone()).collect();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(l.iter().map(|x| -x).collect());
        }
        out
    }

    /// Adds the row `h . x >= 0`.
    pub fn insert(&mut self, row: &[Rational]) -> Result<()> {
        if row.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: row.len(),
            });
        }
        let h = primitive_integer_vector(row);
        let k = self.constraints.len();

        let pivot = self
            .lineality
            .iter()
            .position(|l| !int_dot(&h, l).is_zero());
        if let Some(i0) = pivot {
            self.pivot_lineality(&h, k, i0);
        } else {
            self.split_rays(&h, k)?;
        }
        self.constraints.push(h);
        Ok(())
    }

    fn pivot_lineality(&mut self, h: &[BigInt], k: usize, i0: usize) {
        let mut l0 = self.lineality.remove(i0);
        let mut s0 = int_dot(h, &l0);
        if s0.is_negative() {
            for x in &mut l0 {
                *x = -&*x;
            }
            s0 = -s0;
        }
        for l in &mut self.lineality {
            let t = int_dot(h, l);
            if !t.is_zero() {
                *l = combine(&s0, l, &-t, &l0);
            }
        }
        for r in &mut self.rays {
            let t = int_dot(h, &r.coords);
            if !t.is_zero() {
                r.coords = combine(&s0, &r.coords, &-t, &l0);
            }
            r.active.insert(k);
        }
        self.rays.push(Ray {
            coords: l0,
            active: (0..k).collect(),
        });
    }

    fn split_rays(&mut self, h: &[BigInt], k: usize) -> Result<()> {
        let values: Vec<BigInt> = self
            .rays
            .par_iter()
            .map(|r| int_dot(h, &r.coords))
            .collect();
        let positive: Vec<usize> = (0..self.rays.len()).filter(|&i| values[i].is_positive()).collect();
        let negative: Vec<usize> = (0..self.rays.len()).filter(|&i| values[i].is_negative()).collect();

        if negative.is_empty() {
            for (r, v) in self.rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.active.insert(k);
                }
            }
            return Ok(());
        }

        // A face spanned by two adjacent rays has dimension lineality + 2,
        // so the rows tight on both must have rank dim - lineality - 2.
        let min_common = self.dim.saturating_sub(self.lineality.len() + 2);
        let rays = &self.rays;
        let adjacency_checks: Vec<Vec<(usize, usize, bool)>> = positive
            .par_iter()
            .map(|&p| {
                let mut found = Vec::new();
                for &n in &negative {
                    let common = rays[p].active.intersection(&rays[n].active);
                    let adjacent = common.len() >= min_common
                        && !rays.iter().enumerate().any(|(i, r)| {
                            i != p && i != n && common.is_subset(&r.active)
                        });
                    if adjacent || self.cross_check {
                        found.push((p, n, adjacent));
                    }
                }
                found
            })
            .collect();

        let mut pairs = Vec::new();
        for (p, n, adjacent) in adjacency_checks.into_iter().flatten() {
            if self.cross_check {
                let algebraic = self.algebraic_adjacency(p, n, min_common);
                if algebraic != adjacent {
                    return Err(Error::Invariant(format!(
                        "adjacency tests disagree for rays {p} and {n} at row {k}"
                    )));
                }
            }
            if adjacent {
                pairs.push((p, n));
            }
        }

        let kept = self.rays.len() - negative.len();
        let total = kept + pairs.len();
        if total > self.ray_cap {
            return Err(Error::Capacity {
                what: "intermediate rays",
                count: total as u128,
                cap: self.ray_cap as u128,
            });
        }

        let new_rays: Vec<Ray> = pairs
            .par_iter()
            .map(|&(p, n)| {
                let (rp, rn) = (&rays[p], &rays[n]);
                let coords = combine(&values[p], &rn.coords, &-&values[n], &rp.coords);
                let mut active = rp.active.intersection(&rn.active);
                active.insert(k);
                Ray { coords, active }
            })
            .collect();

        let old = std::mem::take(&mut self.rays);
        let mut next = Vec::with_capacity(total);
        for (mut r, v) in old.into_iter().zip(&values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.active.insert(k);
            }
            next.push(r);
        }
        next.extend(new_rays);
        self.rays = next;
        Ok(())
    }

    fn algebraic_adjacency(&self, p: usize, n: usize, min_common: usize) -> bool {
        let common = self.rays[p].active.intersection(&self.rays[n].active);
        let rows: Vec<Vec<Rational>> = common
            .iter()
            .map(|i| to_rational(&self.constraints[i]))
            .collect();
        linalg::rank(&rows) == min_common && self.dim >= self.lineality.len() + 2
    }

    /// Exact recomputation of every ray's active set against the processed
    /// rows, plus feasibility of all generators.
    pub fn check_invariant(&self) -> Result<()> {
        for (i, r) in self.rays.iter().enumerate() {
            for (j, h) in self.constraints.iter().enumerate() {
                let v = int_dot(h, &r.coords);
                if v.is_negative() {
                    return Err(Error::Invariant(format!("ray {i} violates row {j}")));
                }
                if v.is_zero() != r.active.contains(j) {
                    return Err(Error::Invariant(format!(
                        "ray {i} has a stale active bit for row {j}"
                    )));
                }
            }
        }
        for (i, l) in self.lineality.iter().enumerate() {
            if self.constraints.iter().any(|h| !int_dot(h, l).is_zero()) {
                return Err(Error::Invariant(format!(
                    "lineality vector {i} is not in the null space"
                )));
            }
        }
        Ok(())
    }

    /// Canonical basis of the lineality space, each vector primitive with a
    /// positive leading entry. See [`LinealityReducer`].
    pub fn canonical_lineality(&self) -> Vec<Vec<BigInt>> {
        LinealityReducer::new(&self.lineality).basis()
    }

    /// All extreme rays in canonical form, sorted.
    pub fn canonical_rays(&self) -> Vec<Vec<BigInt>> {
        let reducer = LinealityReducer::new(&self.lineality);
        let mut out: Vec<Vec<BigInt>> = self.rays.iter().map(|r| reducer.reduce(&r.coords)).collect();
        out.sort();
        out
    }
}

/// Picks canonical representatives modulo a lineality space.
///
/// The space is brought to reduced echelon form with pivots taken from the
/// last coordinate backwards; a vector is reduced by zeroing those pivot
/// coordinates. Leading coordinates (the homogenizing ones) are therefore
/// eliminated last.
#[derive(Clone, Debug)]
pub struct LinealityReducer {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl LinealityReducer {
    pub fn new(lineality: &[Vec<BigInt>]) -> Self {
        let reversed: Vec<Vec<Rational>> = lineality
            .iter()
            .map(|l| l.iter().rev().cloned().map(Rational::from_integer).collect())
            .collect();
        let (reduced, pivots) = linalg::rref(&reversed);
        let width = lineality.first().map_or(0, |l| l.len());
        LinealityReducer {
            rows: reduced
                .into_iter()
                .map(|mut r| {
                    r.reverse();
                    r
                })
                .collect(),
            pivots: pivots.into_iter().map(|p| width - 1 - p).collect(),
        }
    }

    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = primitive_integer_vector(r);
                if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                    for x in &mut v {
                        *x = -&*x;
                    }
                }
                v
            })
            .collect();
        out.sort();
        out
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        if self.rows.is_empty() {
            return v.to_vec();
        }
        let mut w = to_rational(v);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = w[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        primitive_integer_vector(&w)
    }
}

/// Functional form of [`DdPair::insert`].
pub fn dd_insert(mut state: DdPair, row: &[Rational]) -> Result<DdPair> {
    state.insert(row)?;
    Ok(state)
}

/// Runs the double description method on `{x in R^dim : row . x >= 0}`.
///
/// Returns the final pair and the insertion order used: active-set bit `k`
/// of a ray refers to `rows[order[k]]`.
pub fn run(dim: usize, rows: &[Vec<Rational>], options: &DdOptions) -> Result<(DdPair, Vec<usize>)> {
    if let Some(r) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: r.len(),
        });
    }
    let mut state = DdPair::free_cone(dim)
        .with_ray_cap(options.ray_cap)
        .with_cross_check(options.cross_check);
    let order = options.order.permutation(rows);
    for (step, &i) in order.iter().enumerate() {
        state.insert(&rows[i])?;
        if let Some(progress) = &options.progress {
            progress(DdProgress {
                processed: step + 1,
                total: rows.len(),
                rays: state.rays.len(),
                lineality: state.lineality.len(),
            });
        }
    }
    Ok((state, order))
}
