//! Affine bounds `δ ↦ mδ + b` and their pointwise minimum.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Which coefficient data produced a truncation or cap intercept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InterceptSource {
    /// `2 Σ_{|n|>N} |a_n|` (or `2 Σ |a_n|` for a cap).
    CoefficientTail,
    /// `2 min_λ ‖h − λ‖∞` of the actual remainder.
    Oscillation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Truncation {
        degree: usize,
        intercept: InterceptSource,
        /// The intercept that lost the comparison, when both were available.
        alternative: Option<f64>,
    },
    Folk,
    Split,
    PowerSeries { degree: usize },
    Pedersen { degree: usize },
    Tangent { a: f64 },
    ConstantCap { source: InterceptSource },
    Range,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = |s: &InterceptSource| match s {
            InterceptSource::CoefficientTail => "tail",
            InterceptSource::Oscillation => "oscillation",
        };
        match self {
            Provenance::Truncation {
                degree, intercept, ..
            } => write!(f, "truncation:N={degree}:{}", src(intercept)),
            Provenance::Folk => f.write_str("folk"),
            Provenance::Split => f.write_str("split"),
            Provenance::PowerSeries { degree } => write!(f, "power_series:N={degree}"),
            Provenance::Pedersen { degree } => write!(f, "pedersen:N={degree}"),
            Provenance::Tangent { a } => write!(f, "tangent:a={a:.12e}"),
            Provenance::ConstantCap { source } => write!(f, "cap:{}", src(source)),
            Provenance::Range => f.write_str("range"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundLine {
    pub slope: f64,
    pub intercept: f64,
    pub delta_max: f64,
    pub provenance: Provenance,
}

impl BoundLine {
    pub fn new(slope: f64, intercept: f64, delta_max: f64, provenance: Provenance) -> Result<Self> {
        if !(slope >= 0.0 && intercept >= 0.0 && slope.is_finite() && intercept.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bound line needs finite m >= 0, b >= 0 (got m={slope}, b={intercept})"
            )));
        }
        if !(delta_max > 0.0 && delta_max <= 2.0) {
            return Err(Error::InvalidArgument(format!(
                "bound line domain [0, {delta_max}] outside [0, 2]"
            )));
        }
        Ok(Self {
            slope,
            intercept,
            delta_max,
            provenance,
        })
    }

    #[inline]
    pub fn evaluate(&self, delta: f64) -> f64 {
        self.slope * delta + self.intercept
    }
}

/// One piece of the lower envelope, active on `[delta_start, delta_end]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub delta_start: f64,
    pub delta_end: f64,
    #[serde(rename = "m")]
    pub slope: f64,
    #[serde(rename = "b")]
    pub intercept: f64,
    pub provenance: Provenance,
}

/// Produces the best member of a continuous line family for a given δ.
pub type LineFamily = Arc<dyn Fn(f64) -> Option<BoundLine> + Send + Sync>;

/// Pointwise minimum of a set of bound lines on `[0, delta_max]`.
///
/// Queries above `delta_max` are clamped to `delta_max`.
#[derive(Clone)]
pub struct BoundCurve {
    lines: Vec<BoundLine>,
    delta_max: f64,
    family: Option<LineFamily>,
    segments: Vec<Segment>,
}

impl fmt::Debug for BoundCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundCurve")
            .field("lines", &self.lines.len())
            .field("delta_max", &self.delta_max)
            .field("family", &self.family.is_some())
            .field("segments", &self.segments.len())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub provenance: Provenance,
    /// The query was above the curve's domain and was clamped.
    pub clamped: bool,
}

impl BoundCurve {
    pub fn new(lines: Vec<BoundLine>, delta_max: f64) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::InvalidArgument("bound curve needs at least one line".into()));
        }
        if lines.iter().any(|l| l.delta_max < delta_max) {
            return Err(Error::InvalidArgument(
                "every line must cover the curve's domain".into(),
            ));
        }
        let segments = lower_envelope(&lines, delta_max);
        Ok(Self {
            lines,
            delta_max,
            family: None,
            segments,
        })
    }

    /// Attach a continuous family whose per-query optimum joins the minimum.
    pub fn with_family(mut self, family: LineFamily) -> Self {
        self.family = Some(family);
        self
    }

    pub fn lines(&self) -> &[BoundLine] {
        &self.lines
    }

    pub fn delta_max(&self) -> f64 {
        self.delta_max
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Minimum over the stored lines only, ignoring any attached family.
    pub fn evaluate_stored(&self, delta: f64) -> f64 {
        let d = delta.min(self.delta_max);
        self.lines
            .iter()
            .map(|l| l.evaluate(d))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn evaluate(&self, delta: f64) -> f64 {
        self.evaluate_detailed(delta).value
    }

    pub fn evaluate_detailed(&self, delta: f64) -> Evaluation {
        let clamped = delta > self.delta_max;
        let d = delta.min(self.delta_max);
        let mut best = 0;
        let mut value = f64::INFINITY;
        for (i, l) in self.lines.iter().enumerate() {
            let v = l.evaluate(d);
            if v < value {
                value = v;
                best = i;
            }
        }
        let mut provenance = self.lines[best].provenance.clone();
        if let Some(line) = self.family.as_ref().and_then(|fam| fam(d)) {
            let v = line.evaluate(d);
            if v < value {
                value = v;
                provenance = line.provenance;
            }
        }
        Evaluation {
            value,
            provenance,
            clamped,
        }
    }

    /// Evaluate through the breakpoint segmentation (stored lines only).
    pub fn evaluate_segments(&self, delta: f64) -> f64 {
        let d = delta.min(self.delta_max);
        let idx = self
            .segments
            .partition_point(|s| s.delta_end < d)
            .min(self.segments.len() - 1);
        let s = &self.segments[idx];
        s.slope * d + s.intercept
    }

    pub fn segments_json(&self) -> String {
        serde_json::to_string_pretty(&self.segments).expect("segments serialize")
    }
}

/// Lower envelope of `lines` restricted to `[0, delta_max]`, by slope-sorted sweep.
pub fn lower_envelope(lines: &[BoundLine], delta_max: f64) -> Vec<Segment> {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    // slopes descending; for equal slopes the lowest intercept first
    order.sort_by(|&i, &j| {
        lines[j]
            .slope
            .total_cmp(&lines[i].slope)
            .then(lines[i].intercept.total_cmp(&lines[j].intercept))
    });
    order.dedup_by(|next, kept| lines[*next].slope == lines[*kept].slope);

    let cross = |i: usize, j: usize| -> f64 {
        // δ where line j (smaller slope) takes over from line i
        (lines[j].intercept - lines[i].intercept) / (lines[i].slope - lines[j].slope)
    };

    let mut hull: Vec<usize> = Vec::with_capacity(order.len());
    for &k in &order {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if cross(a, k) <= cross(a, b) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }

    let mut segments = Vec::new();
    for (pos, &k) in hull.iter().enumerate() {
        let start = if pos == 0 {
            f64::NEG_INFINITY
        } else {
            cross(hull[pos - 1], k)
        };
        let end = if pos + 1 == hull.len() {
            f64::INFINITY
        } else {
            cross(k, hull[pos + 1])
        };
        let (s, e) = (start.max(0.0), end.min(delta_max));
        if e > s {
            segments.push(Segment {
                delta_start: s,
                delta_end: e,
                slope: lines[k].slope,
                intercept: lines[k].intercept,
                provenance: lines[k].provenance.clone(),
            });
        }
    }
    if segments.is_empty() {
        // every crossing lies outside the domain: the line lowest on it wins throughout
        let k = hull
            .iter()
            .copied()
            .min_by(|&i, &j| {
                lines[i]
                    .evaluate(delta_max / 2.0)
                    .total_cmp(&lines[j].evaluate(delta_max / 2.0))
            })
            .expect("non-empty hull");
        segments.push(Segment {
            delta_start: 0.0,
            delta_end: delta_max,
            slope: lines[k].slope,
            intercept: lines[k].intercept,
            provenance: lines[k].provenance.clone(),
        });
    }
    segments
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(m: f64, b: f64) -> BoundLine {
        BoundLine::new(m, b, 2.0, Provenance::Split).unwrap()
    }

    #[test]
    fn rejects_negative_parameters() {
        assert!(BoundLine::new(-1.0, 0.0, 2.0, Provenance::Folk).is_err());
        assert!(BoundLine::new(1.0, -0.1, 2.0, Provenance::Folk).is_err());
        assert!(BoundLine::new(1.0, 0.0, 2.5, Provenance::Folk).is_err());
        assert!(BoundCurve::new(vec![], 2.0).is_err());
    }

    #[test]
    fn envelope_of_three_lines() {
        let c = BoundCurve::new(vec![line(2.0, 0.0), line(0.5, 0.3), line(0.0, 0.9)], 2.0).unwrap();
        let s = c.segments();
        assert_eq!(s.len(), 3);
        assert!((s[0].delta_end - 0.2).abs() < 1e-15);
        assert!((s[1].delta_end - 1.2).abs() < 1e-14);
        assert_eq!(c.evaluate(0.1), 0.2);
        assert_eq!(c.evaluate(1.9), 0.9);
    }

    #[test]
    fn dominated_line_is_pruned() {
        let c = BoundCurve::new(vec![line(1.0, 0.0), line(0.5, 1.0), line(0.0, 1.0)], 2.0).unwrap();
        assert_eq!(c.segments().len(), 2);
    }

    #[test]
    fn clamps_above_domain() {
        let c = BoundCurve::new(vec![line(1.0, 0.0)], 1.0).unwrap();
        let e = c.evaluate_detailed(1.5);
        assert!(e.clamped);
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn family_joins_minimum() {
        let fam: LineFamily = Arc::new(|d| {
            (d > 0.5).then(|| BoundLine::new(0.0, 0.1, 2.0, Provenance::Range).unwrap())
        });
        let c = BoundCurve::new(vec![line(1.0, 0.0)], 2.0).unwrap().with_family(fam);
        assert_eq!(c.evaluate(0.4), 0.4);
        let e = c.evaluate_detailed(1.0);
        assert_eq!(e.value, 0.1);
        assert_eq!(e.provenance, Provenance::Range);
        assert_eq!(c.evaluate_stored(1.0), 1.0);
    }

    proptest! {
        #[test]
        fn segments_reproduce_pointwise_min(
            params in prop::collection::vec((0.0f64..5.0, 0.0f64..3.0), 1..40),
        ) {
            let lines: Vec<_> = params.iter().map(|&(m, b)| line(m, b)).collect();
            let c = BoundCurve::new(lines.clone(), 2.0).unwrap();
            for i in 0..=2000 {
                let d = 2.0 * i as f64 / 2000.0;
                let brute = lines.iter().map(|l| l.evaluate(d)).fold(f64::INFINITY, f64::min);
                prop_assert_eq!(c.evaluate(d), brute);
                prop_assert!((c.evaluate_segments(d) - brute).abs() <= 1e-12);
            }
        }
    }
}
