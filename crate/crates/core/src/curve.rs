//! Piecewise-linear curves (Lorenz and thermo-majorisation curves).

use crate::error::{Error, Result};

/// A piecewise-linear curve through its breakpoints.
///
/// Breakpoint abscissas are strictly increasing; points sharing an abscissa
/// (up to `1e-15` relative) are collapsed keeping the last one.
#[derive(Debug, Clone, PartialEq)]
pub struct PLCurve {
    points: Vec<(f64, f64)>,
}

impl PLCurve {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("curve has no points".into()));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidInput("curve has non-finite points".into()));
        }
        if points.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(Error::InvalidInput("curve abscissas must be non-decreasing".into()));
        }
        let mut dedup: Vec<(f64, f64)> = Vec::with_capacity(points.len());
        for p in points {
            match dedup.last_mut() {
                Some(last) if p.0 - last.0 <= 1e-15 * last.0.abs().max(p.0.abs()) => *last = p,
                _ => dedup.push(p),
            }
        }
        Ok(Self { points: dedup })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn x_max(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    /// Linear interpolation; constant extension outside the breakpoint range.
    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.points;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        let last = pts[pts.len() - 1];
        if x >= last.0 {
            return last.1;
        }
        // first index with abscissa > x
        let k = pts.partition_point(|p| p.0 <= x);
        let (x0, y0) = pts[k - 1];
        let (x1, y1) = pts[k];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Slopes of consecutive segments.
    pub fn slopes(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }

    /// Slopes non-increasing within `tol`.
    pub fn is_concave(&self, tol: f64) -> bool {
        self.slopes().windows(2).all(|s| s[1] <= s[0] + tol)
    }

    /// Smallest value of `self - other` over the union of both breakpoint sets.
    ///
    /// Exact for piecewise-linear curves: the difference is linear between
    /// consecutive abscissas of the union.
    pub fn min_gap(&self, other: &PLCurve) -> f64 {
        self.points
            .iter()
            .chain(other.points.iter())
            .map(|&(x, _)| self.eval(x) - other.eval(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// `self` lies nowhere below `other` minus `eps`.
    pub fn dominates(&self, other: &PLCurve, eps: f64) -> bool {
        self.min_gap(other) >= -eps
    }

    /// Curve with every abscissa multiplied by `factor`.
    pub fn scale_x(&self, factor: f64) -> PLCurve {
        PLCurve {
            points: self.points.iter().map(|&(x, y)| (x * factor, y)).collect(),
        }
    }

    /// Same curve keeping only the elbows: interior points where the slope
    /// changes by more than `tol`.
    pub fn elbows(&self, tol: f64) -> PLCurve {
        let slopes = self.slopes();
        let mut points = vec![self.points[0]];
        for k in 1..self.points.len().saturating_sub(1) {
            if (slopes[k - 1] - slopes[k]).abs() > tol {
                points.push(self.points[k]);
            }
        }
        if self.points.len() > 1 {
            points.push(self.points[self.points.len() - 1]);
        }
        PLCurve { points }
    }

    /// Largest vertical distance between the curves over both breakpoint sets.
    pub fn max_vertical_distance(&self, other: &PLCurve) -> f64 {
        self.points
            .iter()
            .chain(other.points.iter())
            .map(|&(x, _)| (self.eval(x) - other.eval(x)).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_interpolates_and_extends() {
        let c = PLCurve::new(vec![(0.0, 0.0), (1.0, 0.5), (3.0, 1.0)]).unwrap();
        assert_eq!(c.eval(0.5), 0.25);
        assert_eq!(c.eval(2.0), 0.75);
        assert_eq!(c.eval(5.0), 1.0);
        assert_eq!(c.eval(-1.0), 0.0);
        assert!(c.is_concave(0.0));
    }

    #[test]
    fn elbows_drop_collinear_points() {
        let c = PLCurve::new(vec![(0.0, 0.0), (1.0, 0.5), (2.0, 1.0), (3.0, 1.0)]).unwrap();
        assert_eq!(c.elbows(1e-12).points(), &[(0.0, 0.0), (2.0, 1.0), (3.0, 1.0)]);
        let single = PLCurve::new(vec![(0.0, 0.0)]).unwrap();
        assert_eq!(single.elbows(0.0), single);
    }

    #[test]
    fn duplicate_abscissas_collapse() {
        let c = PLCurve::new(vec![(0.0, 0.0), (1.0, 0.2), (1.0, 0.4), (2.0, 1.0)]).unwrap();
        assert_eq!(c.points().len(), 3);
        assert_eq!(c.eval(1.0), 0.4);
    }

    #[test]
    fn crossing_curves_do_not_dominate() {
        let a = PLCurve::new(vec![(0.0, 0.0), (1.0, 0.8), (2.0, 1.0)]).unwrap();
        let b = PLCurve::new(vec![(0.0, 0.0), (0.5, 0.5), (1.5, 1.0), (2.0, 1.0)]).unwrap();
        assert!(!a.dominates(&b, 1e-12));
        assert!(!b.dominates(&a, 1e-12));
        assert!(a.dominates(&a, 0.0));
    }

    #[test]
    fn rejects_decreasing_abscissas() {
        assert!(PLCurve::new(vec![(1.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(PLCurve::new(vec![]).is_err());
    }
}
