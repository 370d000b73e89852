//! Correlation polytopes of multi-particle, multi-setting experiments, exact
//! conversion between their vertex and facet descriptions, and scans of the
//! resulting Boole-Bell inequalities under quantum probability models.

pub mod config;
pub mod error;
pub mod inequalities;
pub mod io;
pub mod polyhedra;
pub mod quantum;
pub mod rational;
pub mod vertices;

pub use config::{enumerate_events, event_count, Configuration, EventLabel, ProbabilityVector};
pub use error::{Error, Result};
pub use inequalities::{parse_text, to_text, Inequality};
pub use polyhedra::{
    contains, enumerate_vertices, hull, verify_facet, ConstraintRow, DdOptions, FacetReport,
    HRepresentation, InsertionOrder,
};
pub use quantum::{
    builtin_model, probability_vector, sample_violation_curve, sample_violation_grid,
    scan_violations, AngleAssignment, AngleExpression, ProbabilityModel, RowRange, SampleRange,
    ViolationReport,
};
pub use rational::Rational;
pub use vertices::{truth_table, vertex_for_assignment, Generator, GeneratorKind, VRepresentation};
