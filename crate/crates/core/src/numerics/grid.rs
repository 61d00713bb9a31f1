use std::ops::{Index, IndexMut};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of intervals in one closed Newton–Cotes panel.
pub const PANEL: usize = 5;

pub const DEFAULT_NODES_PER_UNIT: usize = 2500;

/// Grid parameters as they appear in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    #[serde(default = "default_nodes_per_unit")]
    pub nodes_per_unit: usize,
}

fn default_nodes_per_unit() -> usize {
    DEFAULT_NODES_PER_UNIT
}

impl GridSpec {
    pub fn build(&self) -> Result<Arc<Grid>> {
        Grid::new(self.x_min, self.x_max, self.nodes_per_unit).map(Arc::new)
    }
}

/// Uniform mesh on `[x_min, x_max]` that contains `x = 0` and splits into
/// whole six-point panels.
#[derive(Debug, Clone)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    nodes_per_unit: usize,
    first: i64,
    nodes: Vec<f64>,
    h: f64,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.first == other.first
            && self.nodes.len() == other.nodes.len()
            && self.nodes_per_unit == other.nodes_per_unit
    }
}

fn as_mesh_index(x: f64, nodes_per_unit: usize) -> Option<i64> {
    let scaled = x * nodes_per_unit as f64;
    let rounded = scaled.round();
    ((scaled - rounded).abs() <= 1e-9 * scaled.abs().max(1.0)).then_some(rounded as i64)
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, nodes_per_unit: usize) -> Result<Self> {
        if nodes_per_unit == 0 {
            return Err(Error::GridShape("nodes_per_unit must be positive".into()));
        }
        if !(x_min < 0.0 && 0.0 < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::GridShape(format!(
                "need x_min < 0 < x_max, got [{x_min}, {x_max}]"
            )));
        }
        let (first, last) = match (
            as_mesh_index(x_min, nodes_per_unit),
            as_mesh_index(x_max, nodes_per_unit),
        ) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::GridShape(format!(
                    "endpoints [{x_min}, {x_max}] are not multiples of 1/{nodes_per_unit}"
                )))
            }
        };
        let intervals = (last - first) as usize;
        if !intervals.is_multiple_of(PANEL) {
            return Err(Error::GridShape(format!(
                "{intervals} intervals do not split into {PANEL}-interval panels"
            )));
        }
        let npu = nodes_per_unit as f64;
        let nodes = (first..=last).map(|i| i as f64 / npu).collect();
        Ok(Self {
            x_min,
            x_max,
            nodes_per_unit,
            first,
            nodes,
            h: 1.0 / npu,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn nodes_per_unit(&self) -> usize {
        self.nodes_per_unit
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panels(&self) -> usize {
        (self.nodes.len() - 1) / PANEL
    }

    /// Index of the node at `x`, if `x` is (to rounding) a mesh point.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let i = as_mesh_index(x, self.nodes_per_unit)? - self.first;
        (0..self.nodes.len() as i64).contains(&i).then_some(i as usize)
    }

    pub fn zero_index(&self) -> usize {
        (-self.first) as usize
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            x_min: self.x_min,
            x_max: self.x_max,
            nodes_per_unit: self.nodes_per_unit,
        }
    }
}

/// Complex samples of an x-dependent quantity, one per grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidInput(format!(
                "non-finite value at x = {}",
                grid.nodes()[i]
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, values }
    }

    /// Wraps values produced internally on `grid`; length is checked, finiteness is not.
    pub(crate) fn from_parts(grid: Arc<Grid>, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for ComplexField {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.values[i]
    }
}

impl IndexMut<usize> for ComplexField {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.values[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_spacing_and_panels() {
        let g = Grid::new(-35.0, 35.0, 2500).unwrap();
        assert_eq!(g.len(), 175_001);
        assert_eq!((g.len() - 1) % PANEL, 0);
        assert_eq!(g.nodes()[g.zero_index()], 0.0);
        let h = g.h();
        for w in g.nodes().windows(2).step_by(997) {
            assert!(((w[1] - w[0]) - h).abs() <= 1e-13);
        }
        assert_eq!(g.index_of(-35.0), Some(0));
        assert_eq!(g.index_of(35.0), Some(g.len() - 1));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(Grid::new(-1.0, 1.2, 10), Err(Error::GridShape(_))));
        assert!(matches!(Grid::new(0.0, 1.0, 10), Err(Error::GridShape(_))));
        assert!(matches!(Grid::new(-1.05, 1.0, 10), Err(Error::GridShape(_))));
        assert!(Grid::new(-1.0, 1.5, 10).is_ok());
    }

    #[test]
    fn field_length_checked() {
        let g = Arc::new(Grid::new(-1.0, 1.0, 5).unwrap());
        assert!(ComplexField::new(g.clone(), vec![Complex64::new(0.0, 0.0); 3]).is_err());
        assert!(ComplexField::new(g.clone(), vec![Complex64::new(0.0, 0.0); 11]).is_ok());
    }
}
