//! Points of `P^N` and evaluation data for a pair `(z, zeta)`.

use crate::error::KernelError;
use crate::scalar::{Coeff, C64, MAX_COORDS};

/// A point of `P^N` in homogeneous coordinates, normalized so that the chart
/// coordinate equals 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    coords: Vec<C64>,
    chart: usize,
}

impl ChartPoint {
    /// Normalizes in the chart of the largest coordinate.
    pub fn new(coords: Vec<C64>) -> Result<Self, KernelError> {
        let chart = coords
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .ok_or_else(|| KernelError::InvalidPoint("no coordinates".into()))?;
        Self::in_chart(coords, chart)
    }

    pub fn in_chart(coords: Vec<C64>, chart: usize) -> Result<Self, KernelError> {
        if coords.len() < 2 || coords.len() > MAX_COORDS {
            return Err(KernelError::InvalidPoint(format!("{} homogeneous coordinates", coords.len())));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(KernelError::InvalidPoint("non-finite coordinate".into()));
        }
        let c = *coords.get(chart).ok_or_else(|| KernelError::InvalidPoint("chart out of range".into()))?;
        if c.norm() == 0.0 {
            return Err(KernelError::InvalidPoint(format!("coordinate {chart} vanishes")));
        }
        let mut coords: Vec<C64> = coords.into_iter().map(|x| x / c).collect();
        coords[chart] = C64::new(1.0, 0.0);
        Ok(ChartPoint { coords, chart })
    }

    /// The point with affine coordinates `t` in chart `chart`.
    pub fn affine(chart: usize, t: &[C64]) -> Result<Self, KernelError> {
        let mut coords = t.to_vec();
        if chart > coords.len() {
            return Err(KernelError::InvalidPoint("chart out of range".into()));
        }
        coords.insert(chart, C64::new(1.0, 0.0));
        Self::in_chart(coords, chart)
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    /// `N`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// `z` as plain values; `zeta` and `zeta_bar` as coefficients of type `S`,
/// so that with jets the antiholomorphic dependence on `zeta` is tracked.
#[derive(Clone, Debug)]
pub struct Pair<S> {
    pub z: Vec<C64>,
    pub zeta: Vec<S>,
    pub zeta_bar: Vec<S>,
}

impl<S: Coeff> Pair<S> {
    pub fn new(z: &[C64], zeta: &[C64]) -> Self {
        assert_eq!(z.len(), zeta.len(), "points in different spaces");
        Pair {
            z: z.to_vec(),
            zeta: zeta.iter().map(|&c| S::constant(c)).collect(),
            zeta_bar: zeta.iter().enumerate().map(|(k, c)| S::coordinate_bar(k, c.conj())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// `|zeta|^2`.
    pub fn zeta_norm2(&self) -> S {
        self.zeta
            .iter()
            .zip(&self.zeta_bar)
            .fold(S::constant(C64::new(0.0, 0.0)), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// `z . zeta_bar`.
    pub fn z_dot_zeta_bar(&self) -> S {
        self.z.iter().zip(&self.zeta_bar).fold(S::constant(C64::new(0.0, 0.0)), |acc, (z, b)| acc + b.scale(*z))
    }

    pub fn zeta_values(&self) -> Vec<C64> {
        self.zeta.iter().map(Coeff::value).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_in_largest_chart() {
        let p = ChartPoint::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 4.0)]).unwrap();
        assert_eq!(p.chart(), 1);
        assert_eq!(p.coords()[1], C64::new(1.0, 0.0));
        assert!((p.coords()[0] - C64::new(0.0, -0.25)).norm() < 1e-16);
    }

    #[test]
    fn rejects_zero_chart_coordinate() {
        assert!(ChartPoint::in_chart(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)], 0).is_err());
        assert!(ChartPoint::new(vec![C64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn affine_inserts_unit() {
        let p = ChartPoint::affine(1, &[C64::new(2.0, 0.0), C64::new(3.0, 0.0)]).unwrap();
        assert_eq!(p.coords(), &[C64::new(2.0, 0.0), C64::new(1.0, 0.0), C64::new(3.0, 0.0)]);
    }
}
