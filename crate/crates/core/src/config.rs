//! Experiment layouts and the event coordinate system.
//!
//! Particles are lettered `a`, `b`, `c`, ... and settings numbered from 1, so
//! the joint event "particle a at its first setting and particle b at its
//! second" renders as `a1b2`. Internally both indices are zero-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Particles are labelled by a single lowercase letter.
pub const MAX_PARTICLES: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    settings: Vec<usize>,
}

impl Configuration {
    /// `settings_per_particle[k]` is the number of measurement directions for
    /// particle `k`.
    pub fn new(settings_per_particle: Vec<usize>) -> Result<Self> {
        if settings_per_particle.is_empty() {
            return Err(Error::InvalidConfiguration("at least one particle is required".into()));
        }
        if settings_per_particle.len() > MAX_PARTICLES {
            return Err(Error::InvalidConfiguration(format!(
                "at most {MAX_PARTICLES} particles are supported"
            )));
        }
        if let Some(k) = settings_per_particle.iter().position(|&m| m == 0) {
            return Err(Error::InvalidConfiguration(format!(
                "particle {} has no settings",
                particle_letter(k)
            )));
        }
        Ok(Configuration {
            settings: settings_per_particle,
        })
    }

    /// `particles` particles with `settings` directions each.
    pub fn uniform(particles: usize, settings: usize) -> Result<Self> {
        Configuration::new(vec![settings; particles])
    }

    pub fn particle_count(&self) -> usize {
        self.settings.len()
    }

    pub fn settings_per_particle(&self) -> &[usize] {
        &self.settings
    }

    pub fn settings_of(&self, particle: usize) -> usize {
        self.settings[particle]
    }

    /// Number of elementary propositions, i.e. the sum of all settings.
    pub fn proposition_count(&self) -> usize {
        self.settings.iter().sum()
    }

    /// Position of proposition (particle, setting) in particle-major order.
    pub fn proposition_index(&self, particle: usize, setting: usize) -> usize {
        self.settings[..particle].iter().sum::<usize>() + setting
    }

    /// Number of single and joint events: `prod(m_k + 1) - 1`.
    pub fn event_count(&self) -> usize {
        self.settings.iter().map(|m| m + 1).product::<usize>() - 1
    }

    /// All events in canonical order.
    pub fn events(&self) -> Vec<EventLabel> {
        enumerate_events(self)
    }

    /// Index of `event` in canonical order.
    pub fn event_index(&self, event: &EventLabel) -> Option<usize> {
        // Cheap for the sizes in play; parsing is not a hot path.
        self.events().iter().position(|e| e == event)
    }

    pub fn is_uniform(&self) -> bool {
        self.settings.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_uniform() {
            write!(f, "({},{})", self.particle_count(), self.settings[0])
        } else {
            let parts: Vec<String> = self.settings.iter().map(|m| m.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

/// Comma separated settings per particle, e.g. `"2,2,3"`.
impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let settings = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(format!("bad settings count {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(settings)
    }
}

pub fn particle_letter(particle: usize) -> char {
    (b'a' + particle as u8) as char
}

/// A single or joint detection event: one chosen setting for each particle in
/// the support, particles in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EventLabel {
    terms: Vec<(usize, usize)>,
}

impl EventLabel {
    /// `terms` are (particle, setting) pairs, zero-based.
    pub fn new(mut terms: Vec<(usize, usize)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("event needs at least one particle".into()));
        }
        terms.sort_unstable();
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(
                "event chooses two settings for one particle".into(),
            ));
        }
        Ok(EventLabel { terms })
    }

    pub fn single(particle: usize, setting: usize) -> Self {
        EventLabel {
            terms: vec![(particle, setting)],
        }
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    pub fn terms(&self) -> &[(usize, usize)] {
        &self.terms
    }

    /// The single events this event is the conjunction of.
    pub fn constituents(&self) -> impl Iterator<Item = EventLabel> + '_ {
        self.terms.iter().map(|&(p, s)| EventLabel::single(p, s))
    }

    pub fn is_valid_for(&self, config: &Configuration) -> bool {
        self.terms
            .iter()
            .all(|&(p, s)| p < config.particle_count() && s < config.settings_of(p))
    }

    /// Parses `a1b2`-style tokens against a configuration.
    pub fn parse(token: &str, config: &Configuration) -> Result<Self> {
        let label: EventLabel = token.parse()?;
        if !label.is_valid_for(config) {
            return Err(Error::parse(format!(
                "event {token:?} is not part of configuration {config}"
            )));
        }
        Ok(label)
    }
}

impl fmt::Display for EventLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(p, s) in &self.terms {
            write!(f, "{}{}", particle_letter(p), s + 1)?;
        }
        Ok(())
    }
}

impl FromStr for EventLabel {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let bad = || Error::parse(format!("unknown event token {token:?}"));
        let bytes = token.as_bytes();
        let mut terms = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let letter = bytes[i];
            if !letter.is_ascii_lowercase() {
                return Err(bad());
            }
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let setting: usize = token[start..i].parse().map_err(|_| bad())?;
            if setting == 0 {
                return Err(bad());
            }
            let particle = (letter - b'a') as usize;
            // Particles must appear in ascending order, as rendered.
            if terms.last().is_some_and(|&(p, _)| p >= particle) {
                return Err(bad());
            }
            terms.push((particle, setting - 1));
        }
        EventLabel::new(terms).map_err(|_| bad())
    }
}

/// Canonical event order: by arity, then by particle subset, then by settings,
/// each lexicographically.
pub fn enumerate_events(config: &Configuration) -> Vec<EventLabel> {
    let n = config.particle_count();
    let mut out = Vec::with_capacity(config.event_count());
    for k in 1..=n {
        for subset in combinations(n, k) {
            let radices: Vec<usize> = subset.iter().map(|&p| config.settings_of(p)).collect();
            let mut digits = vec![0usize; k];
            'odometer: loop {
                out.push(EventLabel {
                    terms: subset.iter().copied().zip(digits.iter().copied()).collect(),
                });
                // Last particle varies fastest.
                for pos in (0..k).rev() {
                    digits[pos] += 1;
                    if digits[pos] < radices[pos] {
                        continue 'odometer;
                    }
                    digits[pos] = 0;
                }
                break;
            }
        }
    }
    out
}

pub fn event_count(config: &Configuration) -> usize {
    config.event_count()
}

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        let mut i = k;
        while i > 0 && current[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        current[i - 1] += 1;
        for j in i..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// One probability per event, in canonical order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityVector {
    config: Configuration,
    values: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(config: Configuration, values: Vec<f64>) -> Result<Self> {
        if values.len() != config.event_count() {
            return Err(Error::DimensionMismatch {
                expected: config.event_count(),
                found: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Model(format!("probability {v} outside [0, 1]")));
        }
        Ok(ProbabilityVector { config, values })
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, event: &EventLabel) -> Option<f64> {
        self.config.event_index(event).map(|i| self.values[i])
    }
}
