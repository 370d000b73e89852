//! Truth-table vertices of correlation polytopes.

use serde::{Deserialize, Serialize};

use crate::config::{enumerate_events, Configuration};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_VERTEX_CAP: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    Vertex,
    Ray,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub coords: Vec<Rational>,
}

impl Generator {
    pub fn vertex(coords: Vec<Rational>) -> Self {
        Generator {
            kind: GeneratorKind::Vertex,
            coords,
        }
    }

    pub fn ray(coords: Vec<Rational>) -> Self {
        Generator {
            kind: GeneratorKind::Ray,
            coords,
        }
    }

    pub fn is_vertex(&self) -> bool {
        self.kind == GeneratorKind::Vertex
    }

    /// Coordinates with the leading 1 (vertex) or 0 (ray) prepended.
    pub fn homogenized(&self) -> Vec<Rational> {
        let lead = if self.is_vertex() {
            Rational::one()
        } else {
            Rational::zero()
        };
        std::iter::once(lead).chain(self.coords.iter().cloned()).collect()
    }
}

/// Generator description of a polyhedron.
#[derive(Clone, Debug, PartialEq)]
pub struct VRepresentation {
    dimension: usize,
    generators: Vec<Generator>,
    config: Option<Configuration>,
}

impl VRepresentation {
    pub fn new(dimension: usize, generators: Vec<Generator>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.coords.len() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: g.coords.len(),
            });
        }
        Ok(VRepresentation {
            dimension,
            generators,
            config: None,
        })
    }

    pub fn from_vertices(dimension: usize, vertices: Vec<Vec<Rational>>) -> Result<Self> {
        VRepresentation::new(dimension, vertices.into_iter().map(Generator::vertex).collect())
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

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn config(&self) -> Option<&Configuration> {
        self.config.as_ref()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Generator> {
        self.generators.iter().filter(|g| g.is_vertex())
    }

    pub fn rays(&self) -> impl Iterator<Item = &Generator> {
        self.generators.iter().filter(|g| !g.is_vertex())
    }

    /// True for the empty polyhedron (no generators at all).
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    /// Generators sorted (vertices first, then lexicographically).
    pub fn sorted(mut self) -> Self {
        self.generators.sort();
        self
    }
}

/// Vertex for one assignment of outcomes to the elementary propositions.
///
/// `outcomes` holds one bit per (particle, setting), particle-major. Joint
/// event coordinates are the AND of their constituents.
pub fn vertex_for_assignment(config: &Configuration, outcomes: &[bool]) -> Result<Vec<Rational>> {
    if outcomes.len() != config.proposition_count() {
        return Err(Error::DimensionMismatch {
            expected: config.proposition_count(),
            found: outcomes.len(),
        });
    }
    Ok(assignment_row(config, &enumerate_events(config), outcomes)
        .into_iter()
        .map(|b| Rational::from_integer(b as i64))
        .collect())
}

fn assignment_row(
    config: &Configuration,
    events: &[crate::config::EventLabel],
    outcomes: &[bool],
) -> Vec<bool> {
    events
        .iter()
        .map(|e| {
            e.terms()
                .iter()
                .all(|&(p, s)| outcomes[config.proposition_index(p, s)])
        })
        .collect()
}

/// All `2^(sum m_k)` truth-table rows. Row `r` sets proposition `j` to bit `j`
/// of `r`, so the first particle's first setting varies fastest.
pub fn truth_table(config: &Configuration) -> Result<VRepresentation> {
    truth_table_with_cap(config, DEFAULT_VERTEX_CAP)
}

pub fn truth_table_with_cap(config: &Configuration, cap: u128) -> Result<VRepresentation> {
    let props = config.proposition_count();
    let count: u128 = if props >= 127 { u128::MAX } else { 1u128 << props };
    if count > cap {
        return Err(Error::Capacity {
            what: "truth-table vertices",
            count,
            cap,
        });
    }
    let events = enumerate_events(config);
    let zero = Rational::zero();
    let one = Rational::one();
    let generators = (0..count as u64)
        .map(|r| {
            let bits: Vec<bool> = (0..props).map(|j| (r >> j) & 1 == 1).collect();
            let coords = assignment_row(config, &events, &bits)
                .into_iter()
                .map(|b| if b { one.clone() } else { zero.clone() })
                .collect();
            Generator::vertex(coords)
        })
        .collect();
    VRepresentation::new(events.len(), generators)?.with_config(config.clone())
}
