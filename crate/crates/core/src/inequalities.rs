//! Boole-Bell inequalities in readable integer form.
//!
//! An H-row `b + a . p >= 0` is presented as `sum(c_e * p_e) <= rhs` with
//! `c = -a` and `rhs = b`, scaled to coprime integers. The text form lists
//! terms ordered by their event tokens (`a1`, `a1b1`, `a1b2`, `a2`, ...),
//! elides unit coefficients, and uses `<=`:
//!
//! ```text
//! a1 - a1b1 + b1 <= 1
//! -3 a1 + 2 a1b1 + a1b1c1 <= 0
//! ```
//!
//! The parser also accepts `≤`, `>=`, `≥`, the Unicode minus sign and an
//! optional `*` between coefficient and event.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::config::{enumerate_events, Configuration, EventLabel};
use crate::error::{Error, Result};
use crate::polyhedra::{ConstraintRow, HRepresentation};
use crate::rational::{primitive_integer_vector, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    coefficients: Vec<BigInt>,
    rhs: BigInt,
    config: Configuration,
}

impl Inequality {
    /// Builds `coefficients . p <= rhs`, rescaled so that all integers are
    /// coprime.
    pub fn new(config: Configuration, coefficients: Vec<BigInt>, rhs: BigInt) -> Result<Self> {
        if coefficients.len() != config.event_count() {
            return Err(Error::DimensionMismatch {
                expected: config.event_count(),
                found: coefficients.len(),
            });
        }
        if coefficients.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidArgument("inequality has no terms".into()));
        }
        let g = coefficients.iter().fold(rhs.clone(), |acc, c| acc.gcd(c));
        let (coefficients, rhs) = if g.is_one() {
            (coefficients, rhs)
        } else {
            (coefficients.into_iter().map(|c| c / &g).collect(), rhs / &g)
        };
        Ok(Inequality {
            coefficients,
            rhs,
            config,
        })
    }

    /// The H-row `b + a . p >= 0` read as `-a . p <= b`.
    pub fn from_row(row: &ConstraintRow, config: &Configuration) -> Result<Self> {
        if row.dimension() != config.event_count() {
            return Err(Error::DimensionMismatch {
                expected: config.event_count(),
                found: row.dimension(),
            });
        }
        let mut ints = primitive_integer_vector(&row.homogeneous());
        let rhs = ints.remove(0);
        let coefficients = ints.into_iter().map(|x| -x).collect();
        Inequality::new(config.clone(), coefficients, rhs)
    }

    pub fn to_row(&self) -> ConstraintRow {
        ConstraintRow::new(
            Rational::from_integer(self.rhs.clone()),
            self.coefficients
                .iter()
                .map(|c| Rational::from_integer(-c))
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn rhs(&self) -> &BigInt {
        &self.rhs
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    /// `sum(c_e * p_e)` for probabilities in canonical event order.
    pub fn lhs(&self, probabilities: &[f64]) -> f64 {
        self.coefficients
            .iter()
            .zip(probabilities)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, p)| c.to_f64().unwrap_or(f64::NAN) * p)
            .sum()
    }

    /// `lhs - rhs`: positive when the inequality is violated.
    pub fn violation(&self, probabilities: &[f64]) -> f64 {
        self.lhs(probabilities) - self.rhs.to_f64().unwrap_or(f64::NAN)
    }

    pub fn violation_exact(&self, probabilities: &[Rational]) -> Rational {
        let mut acc = -Rational::from_integer(self.rhs.clone());
        for (c, p) in self.coefficients.iter().zip(probabilities) {
            if !c.is_zero() {
                acc += &(Rational::from_integer(c.clone()) * p);
            }
        }
        acc
    }

    pub fn to_text(&self) -> String {
        to_text(self)
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_text(self))
    }
}

impl Serialize for Inequality {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

/// One inequality per non-linearity row, in row order.
pub fn from_hrep(hrep: &HRepresentation, config: &Configuration) -> Result<Vec<Inequality>> {
    Ok(from_hrep_indexed(hrep, config)?
        .into_iter()
        .map(|(_, ineq)| ineq)
        .collect())
}

/// Like [`from_hrep`], paired with each inequality's zero-based row index.
pub fn from_hrep_indexed(
    hrep: &HRepresentation,
    config: &Configuration,
) -> Result<Vec<(usize, Inequality)>> {
    if hrep.dimension() != config.event_count() {
        return Err(Error::DimensionMismatch {
            expected: config.event_count(),
            found: hrep.dimension(),
        });
    }
    hrep.rows()
        .iter()
        .enumerate()
        .filter(|(i, _)| !hrep.is_linearity(*i))
        .map(|(i, row)| Ok((i, Inequality::from_row(row, config)?)))
        .collect()
}

/// Re-embeds inequalities as an inequality-only H-representation.
pub fn to_hrep(inequalities: &[Inequality], config: &Configuration) -> Result<HRepresentation> {
    let rows = inequalities
        .iter()
        .map(|i| {
            if i.config() != config {
                return Err(Error::InvalidArgument("inequality for a different configuration".into()));
            }
            Ok(i.to_row())
        })
        .collect::<Result<Vec<_>>>()?;
    HRepresentation::inequalities(config.event_count(), rows)?.with_config(config.clone())
}

pub fn to_text(ineq: &Inequality) -> String {
    let events = enumerate_events(&ineq.config);
    let mut terms: Vec<(&EventLabel, &BigInt)> = events
        .iter()
        .zip(&ineq.coefficients)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    // Token order: a1, a1b1, a1b1c1, ..., a2, ..., b1, ...
    terms.sort_by(|x, y| x.0.cmp(y.0));

    let mut out = String::new();
    for (i, (event, c)) in terms.iter().enumerate() {
        let magnitude = c.abs();
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if !magnitude.is_one() {
            out.push_str(&magnitude.to_string());
            out.push(' ');
        }
        out.push_str(&event.to_string());
    }
    out.push_str(" <= ");
    out.push_str(&ineq.rhs.to_string());
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Int(BigInt),
    Event(String),
    Le,
    Ge,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(i, ch)) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                tokens.push(Token::Plus);
            }
            '-' | '\u{2212}' => {
                chars.next();
                tokens.push(Token::Minus);
            }
            '*' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '≤' => {
                chars.next();
                tokens.push(Token::Le);
            }
            '≥' => {
                chars.next();
                tokens.push(Token::Ge);
            }
            '<' | '>' => {
                chars.next();
                match chars.next() {
                    Some((_, '=')) => tokens.push(if ch == '<' { Token::Le } else { Token::Ge }),
                    _ => return Err(Error::parse(format!("expected '=' after {ch:?} at {i}"))),
                }
            }
            c if c.is_ascii_digit() => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                tokens.push(Token::Int(s[i..end].parse().expect("digits")));
            }
            c if c.is_ascii_lowercase() => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if !(d.is_ascii_lowercase() || d.is_ascii_digit()) {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                tokens.push(Token::Event(s[i..end].to_string()));
            }
            other => return Err(Error::parse(format!("unexpected character {other:?} at {i}"))),
        }
    }
    Ok(tokens)
}

/// Parses the text form back into an [`Inequality`] over `config`.
pub fn parse_text(s: &str, config: &Configuration) -> Result<Inequality> {
    let tokens = tokenize(s)?;
    let relation = tokens
        .iter()
        .position(|t| matches!(t, Token::Le | Token::Ge))
        .ok_or_else(|| Error::parse(format!("missing relation in {s:?}")))?;
    let events = enumerate_events(config);
    let mut coefficients = vec![BigInt::zero(); events.len()];

    let lhs = &tokens[..relation];
    if lhs.is_empty() {
        return Err(Error::parse(format!("empty left-hand side in {s:?}")));
    }
    let mut i = 0;
    while i < lhs.len() {
        let mut sign = BigInt::one();
        match &lhs[i] {
            Token::Plus => i += 1,
            Token::Minus => {
                sign = -sign;
                i += 1;
            }
            _ if i > 0 => return Err(Error::parse(format!("expected '+' or '-' in {s:?}"))),
            _ => {}
        }
        let mut magnitude = BigInt::one();
        if let Some(Token::Int(n)) = lhs.get(i) {
            magnitude = n.clone();
            i += 1;
            if lhs.get(i) == Some(&Token::Star) {
                i += 1;
            }
        }
        let Some(Token::Event(name)) = lhs.get(i) else {
            return Err(Error::parse(format!("malformed term in {s:?}")));
        };
        let label = EventLabel::parse(name, config)?;
        let idx = events
            .iter()
            .position(|e| *e == label)
            .ok_or_else(|| Error::parse(format!("unknown event token {name:?}")))?;
        coefficients[idx] += sign * magnitude;
        i += 1;
    }

    let rhs_tokens = &tokens[relation + 1..];
    let rhs = match rhs_tokens {
        [Token::Int(n)] => n.clone(),
        [Token::Minus, Token::Int(n)] => -n.clone(),
        [Token::Plus, Token::Int(n)] => n.clone(),
        _ => return Err(Error::parse(format!("right-hand side must be an integer in {s:?}"))),
    };
    let (coefficients, rhs) = if tokens[relation] == Token::Ge {
        (coefficients.into_iter().map(|c| -c).collect(), -rhs)
    } else {
        (coefficients, rhs)
    };
    Inequality::new(config.clone(), coefficients, rhs)
}
