//! Turning identities into numbers.
//!
//! Every identity the library checks is written as two sides, or as an
//! already-subtracted defect field. Both are evaluated at the sampler's
//! points; the largest absolute value is the defect.

use rayon::prelude::*;

use crate::chart::{ChartError, Sampler};
use crate::expr::{EvalError, ScalarField, Tape};

#[derive(Debug, Clone, thiserror::Error)]
pub enum DefectError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("evaluation failed at point {point:?}: {source}")]
    Eval {
        point: Vec<f64>,
        #[source]
        source: EvalError,
    },
    #[error("side lengths differ: {lhs} vs {rhs}")]
    SideMismatch { lhs: usize, rhs: usize },
}

/// Pass rule: `defect <= abs + rel * scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-9,
            rel: 1e-9,
        }
    }
}

impl Tolerance {
    /// Same threshold for both terms.
    pub fn uniform(t: f64) -> Self {
        Tolerance { abs: t, rel: t }
    }

    pub fn passes(&self, m: &Measurement) -> bool {
        m.max_abs_defect <= self.abs + self.rel * m.scale
    }
}

/// Result of evaluating one identity over a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub max_abs_defect: f64,
    /// Largest magnitude of either compared side.
    pub scale: f64,
}

impl Measurement {
    pub fn exact_zero() -> Self {
        Measurement {
            max_abs_defect: 0.0,
            scale: 0.0,
        }
    }

    /// Combines two measurements of parts of the same check.
    pub fn max(self, other: Measurement) -> Measurement {
        Measurement {
            max_abs_defect: nan_max(self.max_abs_defect, other.max_abs_defect),
            scale: nan_max(self.scale, other.scale),
        }
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn eval_all(
    fields: &[ScalarField],
    points: &[Vec<f64>],
) -> Result<Vec<Vec<f64>>, DefectError> {
    fields
        .par_iter()
        .map(|f| {
            let tape: Tape = f.compile();
            let mut regs = Vec::with_capacity(tape.len());
            points
                .iter()
                .map(|p| {
                    tape.eval_with(p, &mut regs).map_err(|source| DefectError::Eval {
                        point: p.clone(),
                        source,
                    })
                })
                .collect()
        })
        .collect()
}

/// Values of each field at each sample point, `[field][point]`.
pub fn evaluate_fields(
    fields: &[ScalarField],
    s: &Sampler,
) -> Result<Vec<Vec<f64>>, DefectError> {
    let points = s.points()?;
    eval_all(fields, &points)
}

/// Largest `|f(p)|` over fields and sample points; NaN if any value is NaN.
pub fn max_defect(fields: &[ScalarField], s: &Sampler) -> Result<f64, DefectError> {
    let values = evaluate_fields(fields, s)?;
    Ok(values
        .iter()
        .flatten()
        .fold(0.0, |acc, v| nan_max(acc, v.abs())))
}

/// Measures `lhs[k] == rhs[k]` for all k.
pub fn measure_sides(
    lhs: &[ScalarField],
    rhs: &[ScalarField],
    s: &Sampler,
) -> Result<Measurement, DefectError> {
    if lhs.len() != rhs.len() {
        return Err(DefectError::SideMismatch {
            lhs: lhs.len(),
            rhs: rhs.len(),
        });
    }
    let points = s.points()?;
    let mut all = lhs.to_vec();
    all.extend_from_slice(rhs);
    let values = eval_all(&all, &points)?;
    let (l, r) = values.split_at(lhs.len());
    let mut m = Measurement::exact_zero();
    for (lv, rv) in l.iter().zip(r) {
        for (a, b) in lv.iter().zip(rv) {
            m = m.max(Measurement {
                max_abs_defect: (a - b).abs(),
                scale: a.abs().max(b.abs()),
            });
        }
    }
    Ok(m)
}

/// Measures a defect field with an explicit list of fields setting the scale.
pub fn measure_defect(
    defect: &[ScalarField],
    scale_from: &[ScalarField],
    s: &Sampler,
) -> Result<Measurement, DefectError> {
    let max_abs_defect = max_defect(defect, s)?;
    let scale = max_defect(scale_from, s)?;
    Ok(Measurement {
        max_abs_defect,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;

    fn sampler() -> Sampler {
        Sampler::new(Chart::new(&["x", "y"]).unwrap())
    }

    #[test]
    fn constants() {
        assert_eq!(max_defect(&[ScalarField::zero()], &sampler()).unwrap(), 0.0);
        assert_eq!(max_defect(&[ScalarField::one()], &sampler()).unwrap(), 1.0);
        assert_eq!(max_defect(&[], &sampler()).unwrap(), 0.0);
    }

    #[test]
    fn coordinate_bounded_by_box() {
        let s = sampler();
        let d = max_defect(&[ScalarField::var(0)], &s).unwrap();
        let expect = s
            .points()
            .unwrap()
            .iter()
            .map(|p| p[0].abs())
            .fold(0.0, f64::max);
        assert_eq!(d, expect);
        assert!(d <= 1.0 && d > 0.0);
    }

    #[test]
    fn nan_and_domain_errors_fail() {
        let s = sampler();
        let nan = ScalarField::var(0).powi(2).add(&ScalarField::int(-4)).sqrt();
        assert!(max_defect(&[nan], &s).is_err());
        let m = Measurement {
            max_abs_defect: f64::NAN,
            scale: 1.0,
        };
        assert!(!Tolerance::default().passes(&m));
    }

    #[test]
    fn sides_scale_with_magnitude() {
        let s = sampler();
        let big = ScalarField::var(0).exp().mul(&ScalarField::int(1_000_000_000));
        let m = measure_sides(&[big.clone()], &[big], &s).unwrap();
        assert_eq!(m.max_abs_defect, 0.0);
        assert!(m.scale > 1e8);
        assert!(Tolerance::default().passes(&Measurement {
            max_abs_defect: 1e-3,
            scale: 1e9
        }));
    }
}
