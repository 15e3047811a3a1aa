//! Uniform main and auxiliary (half-node) meshes with the averaging and
//! difference operators of a symmetric three-point stencil.

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

/// Uniform mesh on `[x_min, x_max]` with `n` cells.
///
/// Main nodes are `x_i = x_min + i h`, `i = 0..=n`; half nodes are
/// `x_{i+1/2} = x_min + (i + 1/2) h`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    x_min: f64,
    x_max: f64,
    n: usize,
    h: f64,
}

impl Mesh {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!("mesh needs at least 2 cells, got {n}")));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "mesh bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n,
            h: (x_max - x_min) / n as f64,
        })
    }

    /// Mesh on `[-x_half_extent, x_half_extent]`.
    pub fn symmetric(x_half_extent: f64, n: usize) -> Result<Self> {
        Self::new(-x_half_extent, x_half_extent, n)
    }

    pub fn n_cells(&self) -> usize {
        self.n
    }

    pub fn n_nodes(&self) -> usize {
        self.n + 1
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn x_half_extent(&self) -> f64 {
        0.5 * self.length()
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.h
    }

    pub fn half_node(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.h
    }

    pub fn nodes(&self) -> NodeField {
        NodeField((0..=self.n).map(|i| self.node(i)).collect())
    }

    pub fn half_nodes(&self) -> HalfField {
        HalfField((0..self.n).map(|i| self.half_node(i)).collect())
    }

    pub fn node_field(&self, value: f64) -> NodeField {
        NodeField(vec![value; self.n + 1])
    }

    pub fn half_field(&self, value: f64) -> HalfField {
        HalfField(vec![value; self.n])
    }

    pub fn check_node(&self, v: &NodeField) -> Result<()> {
        check_len(self.n + 1, v.len())
    }

    pub fn check_half(&self, w: &HalfField) -> Result<()> {
        check_len(self.n, w.len())
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}

/// Values on the main mesh (`n + 1` entries).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeField(pub Vec<f64>);

/// Values on the half-node mesh (`n` entries).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HalfField(pub Vec<f64>);

macro_rules! field_impls {
    ($t:ident) => {
        impl Deref for $t {
            type Target = [f64];
            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl DerefMut for $t {
            fn deref_mut(&mut self) -> &mut [f64] {
                &mut self.0
            }
        }

        impl From<Vec<f64>> for $t {
            fn from(v: Vec<f64>) -> Self {
                $t(v)
            }
        }

        impl $t {
            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }
        }
    };
}

field_impls!(NodeField);
field_impls!(HalfField);

/// `[v]_{i+1/2} = (v_i + v_{i+1}) / 2`.
pub fn avg(mesh: &Mesh, v: &NodeField) -> Result<HalfField> {
    mesh.check_node(v)?;
    Ok(HalfField(v.windows(2).map(|p| 0.5 * (p[0] + p[1])).collect()))
}

/// `δv_{i+1/2} = (v_{i+1} - v_i) / h`.
pub fn delta(mesh: &Mesh, v: &NodeField) -> Result<HalfField> {
    mesh.check_node(v)?;
    let h = mesh.h();
    Ok(HalfField(v.windows(2).map(|p| (p[1] - p[0]) / h).collect()))
}

/// `[w]*_i = (w_{i-1/2} + w_{i+1/2}) / 2` at interior nodes; boundary slots are 0.
pub fn avg_star(mesh: &Mesh, w: &HalfField) -> Result<NodeField> {
    mesh.check_half(w)?;
    let mut out = vec![0.0; mesh.n_nodes()];
    for (o, p) in out[1..mesh.n_cells()].iter_mut().zip(w.windows(2)) {
        *o = 0.5 * (p[0] + p[1]);
    }
    Ok(NodeField(out))
}

/// `δ*w_i = (w_{i+1/2} - w_{i-1/2}) / h` at interior nodes; boundary slots are 0.
pub fn delta_star(mesh: &Mesh, w: &HalfField) -> Result<NodeField> {
    mesh.check_half(w)?;
    let h = mesh.h();
    let mut out = vec![0.0; mesh.n_nodes()];
    for (o, p) in out[1..mesh.n_cells()].iter_mut().zip(w.windows(2)) {
        *o = (p[1] - p[0]) / h;
    }
    Ok(NodeField(out))
}

/// `v_0 := v_1`, `v_N := v_{N-1}`.
pub fn fill_copy_boundary(v: &mut NodeField) {
    let n = v.len();
    if n >= 3 {
        v[0] = v[1];
        v[n - 1] = v[n - 2];
    }
}
