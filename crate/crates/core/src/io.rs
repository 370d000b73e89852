//! cdd `.ext`/`.ine` files, CSV reports and SVG plots.
//!
//! A cdd file looks like
//!
//! ```text
//! V-representation
//! begin
//! 4 4 integer
//! 1 0 0 0
//! 1 1 0 0
//! 1 0 1 0
//! 1 1 1 1
//! end
//! ```
//!
//! H rows `b a1 ... ad` mean `b + a.x >= 0`. A `linearity k i1 ... ik` line
//! before `begin` marks equality rows (1-based). Lines starting with `*` are
//! comments; lines after `end` are options and are kept verbatim.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyhedra::{ConstraintRow, HRepresentation};
use crate::quantum::{CurveSet, GridSet, ViolationReport};
use crate::rational::Rational;
use crate::vertices::{Generator, VRepresentation};

/// Largest denominator kept when reading `real` entries.
pub const REAL_DENOMINATOR_LIMIT: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RepresentationKind {
    V,
    H,
}

impl RepresentationKind {
    fn header(self) -> &'static str {
        match self {
            RepresentationKind::V => "V-representation",
            RepresentationKind::H => "H-representation",
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            RepresentationKind::V => "ext",
            RepresentationKind::H => "ine",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NumberType {
    Integer,
    Rational,
    Real,
}

impl fmt::Display for NumberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NumberType::Integer => "integer",
            NumberType::Rational => "rational",
            NumberType::Real => "real",
        })
    }
}

impl FromStr for NumberType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "integer" => Ok(NumberType::Integer),
            "rational" => Ok(NumberType::Rational),
            "real" => Ok(NumberType::Real),
            other => Err(Error::parse(format!("unknown number type {other:?}"))),
        }
    }
}

/// The raw content of a cdd file.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedraFile {
    pub kind: RepresentationKind,
    pub name: Option<String>,
    /// Zero-based indices of linearity rows.
    pub linearity: BTreeSet<usize>,
    pub number_type: NumberType,
    pub columns: usize,
    pub rows: Vec<Vec<Rational>>,
    /// Lines after `end`, verbatim.
    pub options: Vec<String>,
}

fn parse_entry(token: &str, number_type: NumberType) -> Result<Rational> {
    let value: Rational = token
        .parse()
        .map_err(|_| Error::parse(format!("non-numeric entry {token:?}")))?;
    match number_type {
        NumberType::Integer if !value.is_integer() => {
            Err(Error::parse(format!("non-integer entry {token:?} in integer file")))
        }
        NumberType::Real if !value.is_integer() && !token.contains('/') => {
            Ok(value.limit_denominator(&BigInt::from(REAL_DENOMINATOR_LIMIT)))
        }
        _ => Ok(value),
    }
}

impl PolyhedraFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('*'));

        let mut kind = None;
        let mut name = None;
        let mut linearity = BTreeSet::new();
        loop {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse("missing 'begin' line"))?;
            let lower = line.to_ascii_lowercase();
            if lower == "begin" {
                break;
            } else if lower == "v-representation" {
                kind = Some(RepresentationKind::V);
            } else if lower == "h-representation" {
                kind = Some(RepresentationKind::H);
            } else if lower.starts_with("linearity") {
                let nums = line["linearity".len()..]
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::parse(format!("bad linearity line {line:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let (&count, indices) = nums
                    .split_first()
                    .ok_or_else(|| Error::parse(format!("bad linearity line {line:?}")))?;
                if count != indices.len() || indices.contains(&0) {
                    return Err(Error::parse(format!("bad linearity line {line:?}")));
                }
                linearity = indices.iter().map(|i| i - 1).collect();
            } else if kind.is_none() && name.is_none() {
                name = Some(line.to_string());
            } else {
                return Err(Error::parse(format!("unexpected header line {line:?}")));
            }
        }
        // cdd treats a file without a representation line as an H-representation.
        let kind = kind.unwrap_or(RepresentationKind::H);

        let size_line = lines.next().ok_or_else(|| Error::parse("missing size line"))?;
        let size: Vec<&str> = size_line.split_whitespace().collect();
        let [m, n, number_type] = size[..] else {
            return Err(Error::parse(format!("malformed size line {size_line:?}")));
        };
        let m: usize = m
            .parse()
            .map_err(|_| Error::parse(format!("malformed size line {size_line:?}")))?;
        let columns: usize = n
            .parse()
            .map_err(|_| Error::parse(format!("malformed size line {size_line:?}")))?;
        if columns == 0 {
            return Err(Error::parse("a file needs at least one column"));
        }
        let number_type: NumberType = number_type.parse()?;

        let mut tokens = Vec::with_capacity(m * columns);
        let mut ended = false;
        for line in lines.by_ref() {
            if line.eq_ignore_ascii_case("end") {
                ended = true;
                break;
            }
            tokens.extend(line.split_whitespace());
        }
        if !ended {
            return Err(Error::parse("missing 'end' line"));
        }
        if tokens.len() != m * columns {
            return Err(Error::parse(format!(
                "expected {m} rows of {columns} entries, found {} entries",
                tokens.len()
            )));
        }
        let rows = tokens
            .chunks(columns)
            .map(|row| row.iter().map(|t| parse_entry(t, number_type)).collect())
            .collect::<Result<Vec<Vec<Rational>>>>()?;
        if let Some(&i) = linearity.iter().find(|&&i| i >= m) {
            return Err(Error::parse(format!("linearity row {} beyond {m} rows", i + 1)));
        }
        let options = lines.map(str::to_string).collect();
        Ok(PolyhedraFile {
            kind,
            name,
            linearity,
            number_type,
            columns,
            rows,
            options,
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(name);
            out.push('\n');
        }
        out.push_str(self.kind.header());
        out.push('\n');
        if !self.linearity.is_empty() {
            out.push_str("linearity ");
            out.push_str(&self.linearity.len().to_string());
            for i in &self.linearity {
                let _ = write!(out, " {}", i + 1);
            }
            out.push('\n');
        }
        out.push_str("begin\n");
        let _ = writeln!(out, "{} {} {}", self.rows.len(), self.columns, self.number_type);
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out.push_str("end\n");
        for option in &self.options {
            out.push_str(option);
            out.push('\n');
        }
        out
    }

    fn number_type_for(rows: &[Vec<Rational>]) -> NumberType {
        if rows.iter().flatten().all(Rational::is_integer) {
            NumberType::Integer
        } else {
            NumberType::Rational
        }
    }

    pub fn from_vrep(vrep: &VRepresentation) -> Self {
        let rows: Vec<Vec<Rational>> = vrep.generators().iter().map(Generator::homogenized).collect();
        PolyhedraFile {
            kind: RepresentationKind::V,
            name: None,
            linearity: BTreeSet::new(),
            number_type: Self::number_type_for(&rows),
            columns: vrep.dimension() + 1,
            rows,
            options: Vec::new(),
        }
    }

    pub fn from_hrep(hrep: &HRepresentation) -> Self {
        let rows: Vec<Vec<Rational>> = hrep.rows().iter().map(ConstraintRow::homogeneous).collect();
        PolyhedraFile {
            kind: RepresentationKind::H,
            name: None,
            linearity: hrep.linearity().clone(),
            number_type: Self::number_type_for(&rows),
            columns: hrep.dimension() + 1,
            rows,
            options: Vec::new(),
        }
    }

    /// Generators of a V file. Rows with a positive leading entry are
    /// vertices (scaled so the lead is 1), zero leads are rays; linearity
    /// rows become a pair of opposite rays.
    pub fn to_vrep(&self) -> Result<VRepresentation> {
        if self.kind != RepresentationKind::V {
            return Err(Error::parse("expected a V-representation"));
        }
        let mut generators = Vec::with_capacity(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let lead = &row[0];
            let coords: Vec<Rational> = row[1..].to_vec();
            if lead.is_zero() {
                if self.linearity.contains(&i) {
                    generators.push(Generator::ray(coords.iter().map(|x| -x.clone()).collect()));
                }
                generators.push(Generator::ray(coords));
            } else if lead.is_positive() && !self.linearity.contains(&i) {
                let scaled = if *lead == Rational::one() {
                    coords
                } else {
                    coords.iter().map(|x| x / lead).collect()
                };
                generators.push(Generator::vertex(scaled));
            } else {
                return Err(Error::parse(format!(
                    "row {}: V rows must lead with a non-negative value (vertices may not be linearity rows)",
                    i + 1
                )));
            }
        }
        VRepresentation::new(self.columns - 1, generators)
    }

    pub fn to_hrep(&self) -> Result<HRepresentation> {
        if self.kind != RepresentationKind::H {
            return Err(Error::parse("expected an H-representation"));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| ConstraintRow::from_homogeneous(r))
            .collect();
        HRepresentation::new(self.columns - 1, rows, self.linearity.clone())
            .map_err(|e| Error::parse(e.to_string()))
    }
}

impl fmt::Display for PolyhedraFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for PolyhedraFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolyhedraFile::parse(s)
    }
}

/// `path` with `.ext`/`.ine` appended unless it already ends that way.
pub fn with_suffix(path: &Path, kind: RepresentationKind) -> PathBuf {
    if path.extension().is_some_and(|e| e == kind.suffix()) {
        path.to_path_buf()
    } else {
        let mut s = path.as_os_str().to_owned();
        s.push(".");
        s.push(kind.suffix());
        PathBuf::from(s)
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

pub fn read_polyhedra_file(path: &Path) -> Result<PolyhedraFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    PolyhedraFile::parse(&text)
}

/// Writes a `.ext` file (suffix appended if absent) and returns its path.
pub fn write_ext(vrep: &VRepresentation, path: &Path, options: &[String]) -> Result<PathBuf> {
    let path = with_suffix(path, RepresentationKind::V);
    let mut file = PolyhedraFile::from_vrep(vrep);
    file.options = options.to_vec();
    write_file(&path, &file.render())?;
    Ok(path)
}

pub fn read_ext(path: &Path) -> Result<VRepresentation> {
    read_polyhedra_file(path)?.to_vrep()
}

/// Writes a `.ine` file (suffix appended if absent) and returns its path.
pub fn write_ine(hrep: &HRepresentation, path: &Path) -> Result<PathBuf> {
    let path = with_suffix(path, RepresentationKind::H);
    write_file(&path, &PolyhedraFile::from_hrep(hrep).render())?;
    Ok(path)
}

pub fn read_ine(path: &Path) -> Result<HRepresentation> {
    read_polyhedra_file(path)?.to_hrep()
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Columns `row,inequality,violation`.
pub fn write_violation_csv(reports: &[ViolationReport], path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["row", "inequality", "violation"])?;
    for r in reports {
        w.write_record([r.row.to_string(), r.inequality.to_text(), r.amount.to_string()])?;
    }
    finish(w, path)
}

/// Column label for an inequality in curve output.
pub fn curve_column(row: usize) -> String {
    format!("row{row}")
}

/// Column `x`, then one column per curve labelled by its row number.
pub fn write_curve_csv(set: &CurveSet, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    let header: Vec<String> = std::iter::once("x".to_string())
        .chain(set.curves.iter().map(|c| curve_column(c.row)))
        .collect();
    w.write_record(&header)?;
    for (i, x) in set.xs.iter().enumerate() {
        let record: Vec<String> = std::iter::once(x.to_string())
            .chain(set.curves.iter().map(|c| c.values[i].to_string()))
            .collect();
        w.write_record(&record)?;
    }
    finish(w, path)
}

/// Long form `x,y,f` for grid number `index` of `set`, x varying fastest.
pub fn write_grid_csv(set: &GridSet, index: usize, path: &Path) -> Result<()> {
    let grid = set
        .grids
        .get(index)
        .ok_or_else(|| Error::InvalidArgument(format!("no grid {index}")))?;
    let mut w = csv_writer(path)?;
    w.write_record(["x", "y", "f"])?;
    for (iy, y) in set.ys.iter().enumerate() {
        for (ix, x) in set.xs.iter().enumerate() {
            let f = grid.values[iy * set.xs.len() + ix];
            w.write_record([x.to_string(), y.to_string(), f.to_string()])?;
        }
    }
    finish(w, path)
}

/// What to draw.
#[derive(Clone, Copy, Debug)]
pub enum Plot<'a> {
    Curves(&'a CurveSet),
    Grid(&'a GridSet, usize),
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn svg_open(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
}

fn svg_curves(set: &CurveSet) -> String {
    let (x0, x1) = bounds(set.xs.iter().copied());
    let (y0, y1) = bounds(
        set.curves
            .iter()
            .flat_map(|c| c.values.iter().copied())
            .chain([0.0]),
    );
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    svg_open(&mut out);
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="gray" stroke-dasharray="4 3"/>"#,
        WIDTH - MARGIN,
        y = sy(0.0)
    );
    for (k, curve) in set.curves.iter().enumerate() {
        let points: Vec<String> = set
            .xs
            .iter()
            .zip(&curve.values)
            .map(|(x, y)| format!("{:.3},{:.3}", sx(*x), sy(*y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"><title>row {}: {}</title></polyline>"#,
            PALETTE[k % PALETTE.len()],
            points.join(" "),
            curve.row,
            escape(&curve.inequality.to_text())
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-size="12">x from {x0} to {x1}; f from {y0:.4} to {y1:.4}</text>"#,
        HEIGHT - 12.0
    );
    out.push_str("</svg>\n");
    out
}

fn svg_grid(set: &GridSet, index: usize) -> Result<String> {
    let grid = set
        .grids
        .get(index)
        .ok_or_else(|| Error::InvalidArgument(format!("no grid {index}")))?;
    let (nx, ny) = (set.xs.len(), set.ys.len());
    let (lo, hi) = bounds(grid.values.iter().copied());
    let cw = (WIDTH - 2.0 * MARGIN) / nx as f64;
    let ch = (HEIGHT - 2.0 * MARGIN) / ny as f64;

    let mut out = String::new();
    svg_open(&mut out);
    let _ = writeln!(
        out,
        "<title>row {}: {}</title>",
        grid.row,
        escape(&grid.inequality.to_text())
    );
    for iy in 0..ny {
        for ix in 0..nx {
            let f = grid.values[iy * nx + ix];
            // Darker cells mean larger violation.
            let level = (255.0 * (1.0 - (f - lo) / (hi - lo))).round().clamp(0.0, 255.0) as u8;
            let _ = writeln!(
                out,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="rgb({level},{level},{level})"/>"#,
                MARGIN + ix as f64 * cw,
                HEIGHT - MARGIN - (iy + 1) as f64 * ch,
                cw,
                ch
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-size="12">f from {lo:.4} (white) to {hi:.4} (black)</text>"#,
        HEIGHT - 12.0
    );
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn svg_string(plot: Plot<'_>) -> Result<String> {
    match plot {
        Plot::Curves(set) => Ok(svg_curves(set)),
        Plot::Grid(set, index) => svg_grid(set, index),
    }
}

pub fn render_svg(plot: Plot<'_>, path: &Path) -> Result<()> {
    write_file(path, &svg_string(plot)?)
}
