//! Probability models, detector angles, and violation scans.
//!
//! Probabilities are evaluated in `f64`; exactness is reserved for the
//! polytope side. Comparisons against a threshold use an absolute guard of
//! [`VIOLATION_EPSILON`] so that amounts like 1/8 are reported crisply.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{enumerate_events, Configuration, EventLabel, ProbabilityVector};
use crate::error::{Error, Result};
use crate::inequalities::{from_hrep_indexed, Inequality};
use crate::polyhedra::HRepresentation;

pub const VIOLATION_EPSILON: f64 = 1e-9;

/// Slack allowed on model outputs before they count as leaving [0, 1].
const RANGE_TOLERANCE: f64 = 1e-12;

pub type ProbabilityFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A probability law per event arity. Each law receives the angles of the
/// event's settings, in particle order.
#[derive(Clone)]
pub struct ProbabilityModel {
    name: String,
    laws: BTreeMap<usize, ProbabilityFn>,
}

impl fmt::Debug for ProbabilityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProbabilityModel")
            .field("name", &self.name)
            .field("arities", &self.laws.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl ProbabilityModel {
    pub fn new(name: impl Into<String>) -> Self {
        ProbabilityModel {
            name: name.into(),
            laws: BTreeMap::new(),
        }
    }

    /// Registers (or replaces) the law for events of `arity` particles.
    pub fn with_law<F>(mut self, arity: usize, law: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.laws.insert(arity, Arc::new(law));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.laws.keys().copied()
    }

    pub fn supports(&self, arity: usize) -> bool {
        self.laws.contains_key(&arity)
    }

    /// Errors if some event arity of `config` has no law.
    pub fn check_covers(&self, config: &Configuration) -> Result<()> {
        for arity in 1..=config.particle_count() {
            if !self.supports(arity) {
                return Err(Error::Model(format!(
                    "model {:?} has no law for {arity}-particle events",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn probability(&self, angles: &[f64]) -> Result<f64> {
        let law = self.laws.get(&angles.len()).ok_or_else(|| {
            Error::Model(format!(
                "model {:?} has no law for {}-particle events",
                self.name,
                angles.len()
            ))
        })?;
        let p = law(angles);
        if !(-RANGE_TOLERANCE..=1.0 + RANGE_TOLERANCE).contains(&p) {
            return Err(Error::Model(format!(
                "model {:?} produced {p} at angles {angles:?}",
                self.name
            )));
        }
        Ok(p.clamp(0.0, 1.0))
    }

    /// Builds a model from a declarative table such as
    /// `1:const(0.5);2:sin2diff(0.5);3:oneminussinsum(0.125)`.
    ///
    /// Forms: `const(c)`, `sin2diff(c)` = c sin²((x-y)/2),
    /// `cos2diff(c)` = c cos²((x-y)/2), `oneminussinsum(c)` = c(1 - sin(Σ)),
    /// `oneminuscossum(c)` = c(1 - cos(Σ)).
    pub fn from_table(table: &str) -> Result<Self> {
        let mut model = ProbabilityModel::new("table");
        for entry in table.split(';').map(str::trim).filter(|e| !e.is_empty()) {
            let (arity, form) = entry
                .split_once(':')
                .ok_or_else(|| Error::parse(format!("expected 'arity:form(c)', got {entry:?}")))?;
            let arity: usize = arity
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad arity in {entry:?}")))?;
            if arity == 0 {
                return Err(Error::parse("arity must be at least 1"));
            }
            let form = form.trim();
            let (kind, arg) = form
                .strip_suffix(')')
                .and_then(|f| f.split_once('('))
                .ok_or_else(|| Error::parse(format!("expected 'form(c)', got {form:?}")))?;
            let c: f64 = arg
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad parameter in {form:?}")))?;
            let in_unit = |max: f64| {
                if (0.0..=max).contains(&c) {
                    Ok(())
                } else {
                    Err(Error::Model(format!("{form} can leave [0, 1]")))
                }
            };
            model = match kind.trim() {
                "const" => {
                    in_unit(1.0)?;
                    model.with_law(arity, move |_| c)
                }
                "sin2diff" | "cos2diff" => {
                    if arity != 2 {
                        return Err(Error::Model(format!("{kind} needs arity 2")));
                    }
                    in_unit(1.0)?;
                    if kind.trim() == "sin2diff" {
                        model.with_law(2, move |a| c * ((a[0] - a[1]) / 2.0).sin().powi(2))
                    } else {
                        model.with_law(2, move |a| c * ((a[0] - a[1]) / 2.0).cos().powi(2))
                    }
                }
                "oneminussinsum" => {
                    in_unit(0.5)?;
                    model.with_law(arity, move |a| c * (1.0 - a.iter().sum::<f64>().sin()))
                }
                "oneminuscossum" => {
                    in_unit(0.5)?;
                    model.with_law(arity, move |a| c * (1.0 - a.iter().sum::<f64>().cos()))
                }
                other => return Err(Error::Model(format!("unknown law form {other:?}"))),
            };
        }
        if model.laws.is_empty() {
            return Err(Error::parse("empty model table"));
        }
        Ok(model)
    }
}

/// `singlet`, `ghz3` or `uniform`.
pub fn builtin_model(name: &str) -> Result<ProbabilityModel> {
    match name {
        "singlet" => Ok(ProbabilityModel::new("singlet")
            .with_law(1, |_| 0.5)
            .with_law(2, |a| 0.5 * ((a[0] - a[1]) / 2.0).sin().powi(2))),
        "ghz3" => Ok(ProbabilityModel::new("ghz3")
            .with_law(1, |_| 0.5)
            .with_law(2, |_| 0.25)
            .with_law(3, |a| 0.125 * (1.0 - (a[0] + a[1] + a[2]).sin()))),
        "uniform" => {
            let mut model = ProbabilityModel::new("uniform");
            for k in 1..=crate::config::MAX_PARTICLES {
                model = model.with_law(k, move |_| 0.5f64.powi(k as i32));
            }
            Ok(model)
        }
        other => Err(Error::Model(format!(
            "unknown model {other:?} (expected singlet, ghz3 or uniform)"
        ))),
    }
}

/// `constant + x_coeff * x + y_coeff * y`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize)]
pub struct AngleExpression {
    pub constant: f64,
    pub x: f64,
    pub y: f64,
}

impl AngleExpression {
    pub fn constant(value: f64) -> Self {
        AngleExpression {
            constant: value,
            ..Default::default()
        }
    }

    pub fn has_x(&self) -> bool {
        self.x != 0.0
    }

    pub fn has_y(&self) -> bool {
        self.y != 0.0
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut v = self.constant;
        if self.has_x() {
            v += self.x * x;
        }
        if self.has_y() {
            v += self.y * y;
        }
        v
    }

    fn is_constant(&self) -> bool {
        !self.has_x() && !self.has_y()
    }

    fn add(self, o: Self, sign: f64) -> Self {
        AngleExpression {
            constant: self.constant + sign * o.constant,
            x: self.x + sign * o.x,
            y: self.y + sign * o.y,
        }
    }

    fn scale(self, k: f64) -> Self {
        AngleExpression {
            constant: self.constant * k,
            x: self.x * k,
            y: self.y * k,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum AngleToken {
    Num(f64),
    Pi,
    X,
    Y,
    Op(char),
    Open,
    Close,
}

fn tokenize_angle(s: &str) -> Result<Vec<AngleToken>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' | '*' | '/' => {
                out.push(AngleToken::Op(c));
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(AngleToken::Op('-'));
                i += 1;
            }
            '(' => {
                out.push(AngleToken::Open);
                i += 1;
            }
            ')' => {
                out.push(AngleToken::Close);
                i += 1;
            }
            'π' => {
                out.push(AngleToken::Pi);
                i += 1;
            }
            'x' => {
                out.push(AngleToken::X);
                i += 1;
            }
            'y' => {
                out.push(AngleToken::Y);
                i += 1;
            }
            'p' if bytes.get(i + 1) == Some(&'i') => {
                out.push(AngleToken::Pi);
                i += 2;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().collect();
                let v = text
                    .parse()
                    .map_err(|_| Error::parse(format!("bad number {text:?} in angle {s:?}")))?;
                out.push(AngleToken::Num(v));
            }
            other => {
                return Err(Error::parse(format!("unexpected {other:?} in angle {s:?}")));
            }
        }
    }
    Ok(out)
}

struct AngleParser<'a> {
    tokens: Vec<AngleToken>,
    pos: usize,
    source: &'a str,
}

impl AngleParser<'_> {
    fn peek(&self) -> Option<&AngleToken> {
        self.tokens.get(self.pos)
    }

    fn error(&self, what: &str) -> Error {
        Error::parse(format!("{what} in angle {:?}", self.source))
    }

    fn expr(&mut self) -> Result<AngleExpression> {
        let mut acc = self.term()?;
        while let Some(AngleToken::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.add(rhs, if op == '+' { 1.0 } else { -1.0 });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<AngleExpression> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(AngleToken::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.product(acc, rhs)?;
                }
                Some(AngleToken::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if !rhs.is_constant() {
                        return Err(self.error("division by a variable"));
                    }
                    if rhs.constant == 0.0 {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale(1.0 / rhs.constant);
                }
                // Implicit multiplication: "2pi", "2x", "3(x+1)".
                Some(AngleToken::Num(_) | AngleToken::Pi | AngleToken::X | AngleToken::Y)
                | Some(AngleToken::Open) => {
                    let rhs = self.primary()?;
                    acc = self.product(acc, rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&self, a: AngleExpression, b: AngleExpression) -> Result<AngleExpression> {
        if a.is_constant() {
            Ok(b.scale(a.constant))
        } else if b.is_constant() {
            Ok(a.scale(b.constant))
        } else {
            Err(self.error("product of variables (only affine forms are allowed)"))
        }
    }

    fn unary(&mut self) -> Result<AngleExpression> {
        match self.peek() {
            Some(AngleToken::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.scale(-1.0))
            }
            Some(AngleToken::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<AngleExpression> {
        let token = self.peek().cloned().ok_or_else(|| self.error("unexpected end"))?;
        self.pos += 1;
        Ok(match token {
            AngleToken::Num(v) => AngleExpression::constant(v),
            AngleToken::Pi => AngleExpression::constant(PI),
            AngleToken::X => AngleExpression {
                x: 1.0,
                ..Default::default()
            },
            AngleToken::Y => AngleExpression {
                y: 1.0,
                ..Default::default()
            },
            AngleToken::Open => {
                let inner = self.expr()?;
                if self.peek() != Some(&AngleToken::Close) {
                    return Err(self.error("missing ')'"));
                }
                self.pos += 1;
                inner
            }
            AngleToken::Op(op) => return Err(self.error(&format!("unexpected {op:?}"))),
            AngleToken::Close => return Err(self.error("unexpected ')'")),
        })
    }
}

impl FromStr for AngleExpression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize_angle(s)?;
        if tokens.is_empty() {
            return Err(Error::parse("empty angle expression"));
        }
        let mut parser = AngleParser {
            tokens,
            pos: 0,
            source: s,
        };
        let e = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(e)
    }
}

/// One angle expression per (particle, setting).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleAssignment {
    angles: Vec<Vec<AngleExpression>>,
}

impl AngleAssignment {
    pub fn new(angles: Vec<Vec<AngleExpression>>) -> Self {
        AngleAssignment { angles }
    }

    pub fn from_values(values: Vec<Vec<f64>>) -> Self {
        AngleAssignment::new(
            values
                .into_iter()
                .map(|p| p.into_iter().map(AngleExpression::constant).collect())
                .collect(),
        )
    }

    /// `"0,2pi/3,4pi/3;0,2pi/3,4pi/3"`: particles separated by `;`, settings
    /// by `,`.
    pub fn parse(s: &str) -> Result<Self> {
        let angles = s
            .split(';')
            .map(|particle| {
                particle
                    .split(',')
                    .map(|e| e.trim().parse())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AngleAssignment { angles })
    }

    pub fn angles(&self) -> &[Vec<AngleExpression>] {
        &self.angles
    }

    pub fn has_x(&self) -> bool {
        self.angles.iter().flatten().any(AngleExpression::has_x)
    }

    pub fn has_y(&self) -> bool {
        self.angles.iter().flatten().any(AngleExpression::has_y)
    }

    pub fn is_concrete(&self) -> bool {
        !self.has_x() && !self.has_y()
    }

    pub fn check_shape(&self, config: &Configuration) -> Result<()> {
        let shape: Vec<usize> = self.angles.iter().map(Vec::len).collect();
        if shape != config.settings_per_particle() {
            return Err(Error::Angles(format!(
                "angle shape {shape:?} does not match configuration {config}"
            )));
        }
        Ok(())
    }

    pub fn eval(&self, x: f64, y: f64) -> Vec<Vec<f64>> {
        self.angles
            .iter()
            .map(|p| p.iter().map(|e| e.eval(x, y)).collect())
            .collect()
    }
}

impl FromStr for AngleAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AngleAssignment::parse(s)
    }
}

fn probabilities(
    model: &ProbabilityModel,
    events: &[EventLabel],
    angles: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let mut tuple = Vec::with_capacity(4);
    events
        .iter()
        .map(|e| {
            tuple.clear();
            tuple.extend(e.terms().iter().map(|&(p, s)| angles[p][s]));
            model.probability(&tuple)
        })
        .collect()
}

/// Model probabilities of every event at concrete angles.
pub fn probability_vector(
    model: &ProbabilityModel,
    config: &Configuration,
    angles: &AngleAssignment,
) -> Result<ProbabilityVector> {
    angles.check_shape(config)?;
    if !angles.is_concrete() {
        return Err(Error::Angles(
            "angles contain a free variable; use the curve or grid sampler".into(),
        ));
    }
    model.check_covers(config)?;
    let values = probabilities(model, &enumerate_events(config), &angles.eval(0.0, 0.0))?;
    ProbabilityVector::new(config.clone(), values)
}

/// Which rows to scan: everything, or a 1-based inclusive range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RowRange {
    #[default]
    All,
    Rows { min: usize, max: usize },
}

impl RowRange {
    /// Zero-based half-open index range, validated against `rows`.
    pub fn resolve(&self, rows: usize) -> Result<std::ops::Range<usize>> {
        match *self {
            RowRange::All => Ok(0..rows),
            RowRange::Rows { min, max } => {
                if min == 0 || min > max || max > rows {
                    Err(Error::RowRange { min, max, rows })
                } else {
                    Ok(min - 1..max)
                }
            }
        }
    }
}

impl FromStr for RowRange {
    type Err = Error;

    /// `all`, `MIN:MAX` or a single row number.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(RowRange::All);
        }
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(format!("bad row range {s:?} (expected all or MIN:MAX)")))
        };
        match s.split_once(':') {
            Some((a, b)) => Ok(RowRange::Rows {
                min: num(a)?,
                max: num(b)?,
            }),
            None => {
                let n = num(s)?;
                Ok(RowRange::Rows { min: n, max: n })
            }
        }
    }
}

impl fmt::Display for RowRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowRange::All => f.write_str("all"),
            RowRange::Rows { min, max } => write!(f, "{min}:{max}"),
        }
    }
}

/// One violated inequality. `row` is the 1-based row number in the source
/// H-representation; `amount` is `lhs(p) - rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolationReport {
    pub row: usize,
    pub inequality: Inequality,
    pub amount: f64,
}

/// Selects the inequalities of `hrep` whose row numbers fall in `rows`,
/// skipping linearity rows. Each is paired with its 1-based row number.
pub fn select_rows(
    hrep: &HRepresentation,
    config: &Configuration,
    rows: RowRange,
) -> Result<Vec<(usize, Inequality)>> {
    let range = rows.resolve(hrep.len())?;
    Ok(from_hrep_indexed(hrep, config)?
        .into_iter()
        .filter(|(i, _)| range.contains(i))
        .map(|(i, ineq)| (i + 1, ineq))
        .collect())
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "threshold must be non-negative, got {threshold}"
        )));
    }
    Ok(())
}

/// Dense-to-sparse coefficient form for fast floating evaluation.
struct Compiled {
    terms: Vec<(usize, f64)>,
    rhs: f64,
}

impl Compiled {
    fn new(ineq: &Inequality) -> Self {
        Compiled {
            terms: ineq
                .coefficients()
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(i, c)| (i, num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)))
                .collect(),
            rhs: num_traits::ToPrimitive::to_f64(ineq.rhs()).unwrap_or(f64::NAN),
        }
    }

    fn violation(&self, p: &[f64]) -> f64 {
        self.terms.iter().map(|&(i, c)| c * p[i]).sum::<f64>() - self.rhs
    }
}

fn check_inequalities(rows: &[(usize, Inequality)], config: &Configuration) -> Result<()> {
    if rows.iter().any(|(_, i)| i.config() != config) {
        return Err(Error::InvalidArgument(
            "inequality belongs to a different configuration".into(),
        ));
    }
    Ok(())
}

/// Reports every row whose violation exceeds `threshold` (plus the guard),
/// sorted by descending amount, then row number.
pub fn scan_inequalities(
    rows: &[(usize, Inequality)],
    model: &ProbabilityModel,
    config: &Configuration,
    angles: &AngleAssignment,
    threshold: f64,
) -> Result<Vec<ViolationReport>> {
    check_threshold(threshold)?;
    check_inequalities(rows, config)?;
    let p = probability_vector(model, config, angles)?;
    let mut reports: Vec<ViolationReport> = rows
        .par_iter()
        .filter_map(|(row, ineq)| {
            let amount = Compiled::new(ineq).violation(p.values());
            (amount > threshold + VIOLATION_EPSILON).then(|| ViolationReport {
                row: *row,
                inequality: ineq.clone(),
                amount,
            })
        })
        .collect();
    // Amounts equal up to the guard tie, so rounding noise cannot reorder rows.
    let key = |r: &ViolationReport| (r.amount / VIOLATION_EPSILON).round() as i64;
    reports.sort_by(|a, b| key(b).cmp(&key(a)).then(a.row.cmp(&b.row)));
    Ok(reports)
}

/// [`scan_inequalities`] over the rows of an H-representation.
pub fn scan_violations(
    hrep: &HRepresentation,
    model: &ProbabilityModel,
    config: &Configuration,
    angles: &AngleAssignment,
    rows: RowRange,
    threshold: f64,
) -> Result<Vec<ViolationReport>> {
    check_threshold(threshold)?;
    let selected = select_rows(hrep, config, rows)?;
    scan_inequalities(&selected, model, config, angles, threshold)
}

/// Inclusive, equally spaced sample points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleRange {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl SampleRange {
    pub fn new(min: f64, max: f64, samples: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(Error::InvalidArgument(format!("empty sample range [{min}, {max}]")));
        }
        if samples < 2 {
            return Err(Error::InvalidArgument("need at least 2 samples".into()));
        }
        Ok(SampleRange { min, max, samples })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| {
                if i + 1 == self.samples {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

/// `f(x) = lhs(p(x)) - rhs` sampled for one inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curve {
    pub row: usize,
    pub inequality: Inequality,
    pub values: Vec<f64>,
}

impl Curve {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveSet {
    pub xs: Vec<f64>,
    pub curves: Vec<Curve>,
}

/// `f(x, y)` on a grid, row-major with x varying fastest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub row: usize,
    pub inequality: Inequality,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSet {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub grids: Vec<Grid>,
}

impl GridSet {
    pub fn value(&self, grid: usize, ix: usize, iy: usize) -> f64 {
        self.grids[grid].values[iy * self.xs.len() + ix]
    }
}

/// Violation values of all rows at each sample point (outer index = sample).
fn sample_points(
    rows: &[(usize, Inequality)],
    model: &ProbabilityModel,
    config: &Configuration,
    angles: &AngleAssignment,
    points: &[(f64, f64)],
) -> Result<Vec<Vec<f64>>> {
    angles.check_shape(config)?;
    model.check_covers(config)?;
    check_inequalities(rows, config)?;
    let events = enumerate_events(config);
    let compiled: Vec<Compiled> = rows.iter().map(|(_, i)| Compiled::new(i)).collect();
    points
        .par_iter()
        .map(|&(x, y)| {
            let p = probabilities(model, &events, &angles.eval(x, y))?;
            Ok(compiled.iter().map(|c| c.violation(&p)).collect())
        })
        .collect()
}

/// Samples `f(x)` for each row. With `threshold = Some(t)` only rows whose
/// sampled maximum exceeds `t` are kept; `None` keeps every row.
pub fn sample_violation_curve(
    rows: &[(usize, Inequality)],
    model: &ProbabilityModel,
    config: &Configuration,
    angles: &AngleAssignment,
    range: &SampleRange,
    threshold: Option<f64>,
) -> Result<CurveSet> {
    if angles.has_y() {
        return Err(Error::Angles(
            "curve sampling takes one free variable x; y found".into(),
        ));
    }
    let range = SampleRange::new(range.min, range.max, range.samples)?;
    let xs = range.points();
    let points: Vec<(f64, f64)> = xs.iter().map(|&x| (x, 0.0)).collect();
    let table = sample_points(rows, model, config, angles, &points)?;
    let curves = rows
        .iter()
        .enumerate()
        .map(|(k, (row, ineq))| Curve {
            row: *row,
            inequality: ineq.clone(),
            values: table.iter().map(|sample| sample[k]).collect(),
        })
        .filter(|c| threshold.is_none_or(|t| c.max() > t + VIOLATION_EPSILON))
        .collect();
    Ok(CurveSet { xs, curves })
}

/// Samples `f(x, y)` on the product grid of both ranges.
pub fn sample_violation_grid(
    rows: &[(usize, Inequality)],
    model: &ProbabilityModel,
    config: &Configuration,
    angles: &AngleAssignment,
    x_range: &SampleRange,
    y_range: &SampleRange,
    threshold: Option<f64>,
) -> Result<GridSet> {
    let xs = SampleRange::new(x_range.min, x_range.max, x_range.samples)?.points();
    let ys = SampleRange::new(y_range.min, y_range.max, y_range.samples)?.points();
    let points: Vec<(f64, f64)> = ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
        .collect();
    let table = sample_points(rows, model, config, angles, &points)?;
    let grids = rows
        .iter()
        .enumerate()
        .map(|(k, (row, ineq))| Grid {
            row: *row,
            inequality: ineq.clone(),
            values: table.iter().map(|sample| sample[k]).collect(),
        })
        .filter(|g| threshold.is_none_or(|t| g.max() > t + VIOLATION_EPSILON))
        .collect();
    Ok(GridSet { xs, ys, grids })
}
