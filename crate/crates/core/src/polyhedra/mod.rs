//! Exact polyhedral conversions built on the double description kernel.
//!
//! * [`hull`]: generators to the minimal system of facets (and equations).
//! * [`enumerate_vertices`]: inequalities to vertices and rays.
//! * [`verify_facet`] and [`contains`]: cheap checks that need no conversion.

pub mod bitset;
pub mod dd;
pub mod linalg;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::rational::{dot, primitive_integer_vector, Rational};
use crate::vertices::{Generator, VRepresentation};

use bitset::ActiveSet;
use dd::LinealityReducer;

pub use dd::{dd_insert, DdOptions, DdPair, DdProgress, InsertionOrder, ProgressFn};

/// The constraint `b + a . x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintRow {
    pub b: Rational,
    pub a: Vec<Rational>,
}

impl ConstraintRow {
    pub fn new(b: Rational, a: Vec<Rational>) -> Self {
        ConstraintRow { b, a }
    }

    /// From the cdd layout `(b, a_1, ..., a_d)`.
    pub fn from_homogeneous(row: &[Rational]) -> Self {
        ConstraintRow {
            b: row[0].clone(),
            a: row[1..].to_vec(),
        }
    }

    pub fn homogeneous(&self) -> Vec<Rational> {
        std::iter::once(self.b.clone()).chain(self.a.iter().cloned()).collect()
    }

    pub fn dimension(&self) -> usize {
        self.a.len()
    }

    /// `b + a . x`.
    pub fn slack(&self, point: &[Rational]) -> Rational {
        &self.b + &dot(&self.a, point)
    }

    /// `b * lead + a . coords`, the value on a homogenized generator.
    pub fn evaluate(&self, g: &Generator) -> Rational {
        let d = dot(&self.a, &g.coords);
        if g.is_vertex() {
            &self.b + &d
        } else {
            d
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    /// Positive rescaling to primitive integers.
    pub fn normalized(&self) -> ConstraintRow {
        let ints = primitive_integer_vector(&self.homogeneous());
        let q: Vec<Rational> = ints.into_iter().map(Rational::from_integer).collect();
        ConstraintRow::from_homogeneous(&q)
    }

    pub fn negated(&self) -> ConstraintRow {
        ConstraintRow {
            b: -&self.b,
            a: self.a.iter().map(|x| -x).collect(),
        }
    }
}

/// Constraint description of a polyhedron. Rows listed in `linearity` are
/// equations `b + a . x = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HRepresentation {
    dimension: usize,
    rows: Vec<ConstraintRow>,
    linearity: BTreeSet<usize>,
    config: Option<Configuration>,
}

impl HRepresentation {
    pub fn new(
        dimension: usize,
        rows: Vec<ConstraintRow>,
        linearity: BTreeSet<usize>,
    ) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.a.len() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: r.a.len(),
            });
        }
        if rows.iter().any(|r| r.b.is_zero() && r.is_trivial()) {
            return Err(Error::InvalidArgument("all-zero constraint row".into()));
        }
        if let Some(&i) = linearity.iter().find(|&&i| i >= rows.len()) {
            return Err(Error::InvalidArgument(format!(
                "linearity index {} beyond {} rows",
                i + 1,
                rows.len()
            )));
        }
        Ok(HRepresentation {
            dimension,
            rows,
            linearity,
            config: None,
        })
    }

    pub fn inequalities(dimension: usize, rows: Vec<ConstraintRow>) -> Result<Self> {
        HRepresentation::new(dimension, rows, BTreeSet::new())
    }

    pub fn with_config(mut self, config: Configuration) -> Result<Self> {
        if config.event_count() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: config.event_count(),
                found: self.dimension,
            });
        }
        self.config = Some(config);
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    pub fn linearity(&self) -> &BTreeSet<usize> {
        &self.linearity
    }

    pub fn is_linearity(&self, row: usize) -> bool {
        self.linearity.contains(&row)
    }

    pub fn config(&self) -> Option<&Configuration> {
        self.config.as_ref()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of rows that are inequalities (facets, for a minimal system).
    pub fn facet_count(&self) -> usize {
        self.rows.len() - self.linearity.len()
    }
}

fn int_row(v: Vec<BigInt>) -> Vec<Rational> {
    v.into_iter().map(Rational::from_integer).collect()
}

/// Facet description of the convex hull of `vrep`.
///
/// The dual cone `{(b, a) : b + a . v >= 0 for all vertices v, a . r >= 0 for
/// all rays r}` is computed by double description; its lineality space gives
/// the equations of the affine hull and its extreme rays the facets. Rows
/// come out primitive-integral, equations first, each block sorted in
/// descending lexicographic order of `(b, a)`.
pub fn hull(vrep: &VRepresentation, options: &DdOptions) -> Result<HRepresentation> {
    if vrep.vertices().next().is_none() {
        return Err(Error::EmptyInput("hull needs at least one vertex"));
    }
    let dim = vrep.dimension();
    let rows: Vec<Vec<Rational>> = vrep.generators().iter().map(|g| g.homogenized()).collect();
    let (state, order) = dd::run(dim + 1, &rows, options)?;

    // Rays tight on no vertex define the empty face: the tautology 1 >= 0.
    let vertex_positions: ActiveSet = order
        .iter()
        .enumerate()
        .filter(|(_, &i)| vrep.generators()[i].is_vertex())
        .map(|(pos, _)| pos)
        .collect();
    let reducer = LinealityReducer::new(state.lineality());
    let mut equations = reducer.basis();
    equations.sort_by(|a, b| b.cmp(a));
    let mut facets: Vec<Vec<BigInt>> = state
        .rays()
        .iter()
        .filter(|r| !r.active().intersection(&vertex_positions).is_empty())
        .map(|r| reducer.reduce(r.coords()))
        .filter(|r| r[1..].iter().any(|x| !x.is_zero()))
        .collect();
    facets.sort_by(|a, b| b.cmp(a));

    let linearity: BTreeSet<usize> = (0..equations.len()).collect();
    let rows: Vec<ConstraintRow> = equations
        .into_iter()
        .chain(facets)
        .map(|r| ConstraintRow::from_homogeneous(&int_row(r)))
        .collect();
    let h = HRepresentation::new(dim, rows, linearity)?;
    match vrep.config() {
        Some(c) => h.with_config(c.clone()),
        None => Ok(h),
    }
}

/// Vertices and rays of `{x : b + a . x >= 0}` (equations for linearity
/// rows). An infeasible system yields a representation with no generators.
/// Lines are returned as two opposite rays.
pub fn enumerate_vertices(hrep: &HRepresentation, options: &DdOptions) -> Result<VRepresentation> {
    if hrep.is_empty() {
        return Err(Error::EmptyInput("vertex enumeration needs at least one row"));
    }
    let dim = hrep.dimension();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(hrep.len() + 1);
    // Homogenizing coordinate t >= 0.
    let mut t = vec![Rational::zero(); dim + 1];
    t[0] = Rational::one();
    rows.push(t);
    for (i, r) in hrep.rows().iter().enumerate() {
        rows.push(r.homogeneous());
        if hrep.is_linearity(i) {
            rows.push(r.negated().homogeneous());
        }
    }
    let (state, _) = dd::run(dim + 1, &rows, options)?;

    let mut generators = Vec::new();
    let mut has_vertex = false;
    for r in state.canonical_rays() {
        if r[0].is_positive() {
            has_vertex = true;
            let lead = Rational::from_integer(r[0].clone());
            let coords = r[1..]
                .iter()
                .map(|x| Rational::from_integer(x.clone()) / &lead)
                .collect();
            generators.push(Generator::vertex(coords));
        } else {
            generators.push(Generator::ray(int_row(r[1..].to_vec())));
        }
    }
    if !has_vertex {
        // The cone lives in t = 0: the polyhedron itself is empty.
        return VRepresentation::new(dim, Vec::new());
    }
    for l in state.canonical_lineality() {
        let line = int_row(l[1..].to_vec());
        generators.push(Generator::ray(line.iter().map(|x| -x).collect()));
        generators.push(Generator::ray(line));
    }
    generators.sort();
    let v = VRepresentation::new(dim, generators)?;
    match hrep.config() {
        Some(c) => v.with_config(c.clone()),
        None => Ok(v),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FacetReport {
    pub valid: bool,
    pub tight_count: usize,
    pub is_facet: bool,
}

/// Checks `row` against every generator and, if valid, whether the tight
/// generators span a face of dimension `dim - 1`.
pub fn verify_facet(row: &ConstraintRow, vrep: &VRepresentation) -> Result<FacetReport> {
    if row.dimension() != vrep.dimension() {
        return Err(Error::DimensionMismatch {
            expected: vrep.dimension(),
            found: row.dimension(),
        });
    }
    let mut valid = true;
    let mut tight = Vec::new();
    for g in vrep.generators() {
        let v = row.evaluate(g);
        if v.is_negative() {
            valid = false;
        } else if v.is_zero() {
            tight.push(g.homogenized());
        }
    }
    // Affine rank of the tight set = rank of its homogenized rows - 1.
    let is_facet = valid && !tight.is_empty() && linalg::rank(&tight) == vrep.dimension();
    Ok(FacetReport {
        valid,
        tight_count: tight.len(),
        is_facet,
    })
}

/// Whether `point` satisfies every row (linearity rows exactly as equations).
pub fn contains(hrep: &HRepresentation, point: &[Rational]) -> Result<bool> {
    if point.len() != hrep.dimension() {
        return Err(Error::DimensionMismatch {
            expected: hrep.dimension(),
            found: point.len(),
        });
    }
    Ok(hrep.rows().iter().enumerate().all(|(i, r)| {
        let s = r.slack(point);
        if hrep.is_linearity(i) {
            s.is_zero()
        } else {
            !s.is_negative()
        }
    }))
}
