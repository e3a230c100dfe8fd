use crate::error::{Error, Result};
use crate::spline::{SplineCoeffs, MAX_SPACING};

/// Uniform grid `a = x_1 < ... < x_N = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    h: f64,
    nodes: Vec<f64>,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Domain(format!("grid needs at least 4 nodes, got {n}")));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
        }
        let h = (b - a) / (n - 1) as f64;
        if h >= MAX_SPACING {
            return Err(Error::Domain(format!(
                "spacing {h} too coarse for the spline basis (must be < 2π/3)"
            )));
        }
        let mut nodes: Vec<f64> = (0..n).map(|i| a + i as f64 * h).collect();
        nodes[n - 1] = b;
        Ok(Self { a, b, h, nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn coeffs(&self) -> Result<SplineCoeffs> {
        SplineCoeffs::new(self.h)
    }

    /// Index of the node closest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let k = ((x - self.a) / self.h).round();
        k.clamp(0.0, (self.len() - 1) as f64) as usize
    }
}

/// Tensor-product grid on `[a, b] × [c, d]`. Fields are stored row-major
/// with the x index major: entry `(i, j)` lives at `i * ny + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Self {
        Self { x, y }
    }

    pub fn square(a: f64, b: f64, n: usize) -> Result<Self> {
        let g = Grid1D::new(a, b, n)?;
        Ok(Self { x: g.clone(), y: g })
    }

    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn ny(&self) -> usize {
        self.y.len()
    }

    pub fn len(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.ny() + j
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.nx() || j + 1 == self.ny()
    }

    /// Samples `f(x, y)` on every node.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for &x in self.x.nodes() {
            for &y in self.y.nodes() {
                out.push(f(x, y));
            }
        }
        out
    }
}
