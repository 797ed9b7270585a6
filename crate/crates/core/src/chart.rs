//! Coordinate charts and deterministic point sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::Func;

pub const DEFAULT_POINTS: usize = 32;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChartError {
    #[error("chart must have at least one coordinate")]
    Empty,
    #[error("invalid coordinate name `{0}`")]
    BadName(String),
    #[error("duplicate coordinate name `{0}`")]
    Duplicate(String),
    #[error("box has {got} intervals, chart has dimension {dim}")]
    BoxDimension { dim: usize, got: usize },
    #[error("empty sampling interval [{lo}, {hi}] for coordinate `{coord}`")]
    EmptyInterval { coord: String, lo: f64, hi: f64 },
}

/// A single coordinate patch: names, a sampling box and an optional
/// exclusion margin around the coordinate hyperplanes.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    coords: Vec<String>,
    bounds: Vec<(f64, f64)>,
    avoid_zero_margin: f64,
}

fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
        && Func::from_name(name).is_none()
}

impl Chart {
    /// Chart with the default box `[-1, 1]^dim`.
    pub fn new<S: AsRef<str>>(coords: &[S]) -> Result<Self, ChartError> {
        let bounds = vec![(-1.0, 1.0); coords.len()];
        Self::with_box(coords, bounds)
    }

    pub fn with_box<S: AsRef<str>>(
        coords: &[S],
        bounds: Vec<(f64, f64)>,
    ) -> Result<Self, ChartError> {
        if coords.is_empty() {
            return Err(ChartError::Empty);
        }
        let mut names: Vec<String> = Vec::with_capacity(coords.len());
        for c in coords {
            let c = c.as_ref();
            if !valid_ident(c) {
                return Err(ChartError::BadName(c.to_string()));
            }
            if names.iter().any(|n| n == c) {
                return Err(ChartError::Duplicate(c.to_string()));
            }
            names.push(c.to_string());
        }
        if bounds.len() != names.len() {
            return Err(ChartError::BoxDimension {
                dim: names.len(),
                got: bounds.len(),
            });
        }
        for (name, &(lo, hi)) in names.iter().zip(&bounds) {
            if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(ChartError::EmptyInterval {
                    coord: name.clone(),
                    lo,
                    hi,
                });
            }
        }
        Ok(Chart {
            coords: names,
            bounds,
            avoid_zero_margin: 0.0,
        })
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.avoid_zero_margin = margin.max(0.0);
        self
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn avoid_zero_margin(&self) -> f64 {
        self.avoid_zero_margin
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }
}

/// Seeded sampler over a chart's box.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampler {
    pub chart: Chart,
    pub count: usize,
    pub seed: u64,
}

impl Sampler {
    pub fn new(chart: Chart) -> Self {
        Sampler {
            chart,
            count: DEFAULT_POINTS,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn points(&self) -> Result<Vec<Vec<f64>>, ChartError> {
        sample_points(self)
    }
}

/// Draws `count` points uniformly from the box, skipping coordinates that
/// fall inside the zero margin. Same sampler, same points.
pub fn sample_points(s: &Sampler) -> Result<Vec<Vec<f64>>, ChartError> {
    let margin = s.chart.avoid_zero_margin;
    for (name, &(lo, hi)) in s.chart.coords.iter().zip(&s.chart.bounds) {
        // Interval entirely swallowed by the excluded band.
        if margin > 0.0 && lo > -margin && hi < margin {
            return Err(ChartError::EmptyInterval {
                coord: name.clone(),
                lo,
                hi,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut pts = Vec::with_capacity(s.count);
    for _ in 0..s.count {
        let p = s
            .chart
            .bounds
            .iter()
            .map(|&(lo, hi)| loop {
                let v = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
                if margin == 0.0 || v.abs() >= margin {
                    break v;
                }
            })
            .collect();
        pts.push(p);
    }
    Ok(pts)
}
