//! Composite problems `f = g + h` with a smooth `g` and `h = λ‖·‖₁`.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, input, Result};
use crate::error_models::fixed_point::FixedPointFormat;
use crate::linalg;

/// Smooth convex part of a composite problem.
pub trait SmoothFn {
    fn dim(&self) -> usize;
    fn value(&self, x: &DVector<f64>) -> f64;
    fn grad(&self, x: &DVector<f64>) -> DVector<f64>;
    /// Lipschitz constant of the gradient.
    fn lipschitz(&self) -> f64;

    /// Gradient evaluated in fixed-point arithmetic, when supported.
    fn quantized_grad(&self, _fmt: &FixedPointFormat, _x: &DVector<f64>) -> Option<DVector<f64>> {
        None
    }

    /// `(H, b)` with `∇g(x) = Hx − b`, for quadratic `g`.
    fn normal_equations(&self) -> Option<(DMatrix<f64>, DVector<f64>)> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Scale {
    /// `g(x) = ‖Mx − v‖²`
    Unscaled,
    /// `g(x) = ½‖Mx − v‖²`
    Half,
}

impl Scale {
    pub fn factor(self) -> f64 {
        match self {
            Scale::Unscaled => 1.0,
            Scale::Half => 0.5,
        }
    }
}

/// Least-squares term `c‖Mx − v‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSmooth {
    m: DMatrix<f64>,
    v: DVector<f64>,
    scale: Scale,
    lipschitz: f64,
}

impl QuadraticSmooth {
    /// Builds the term and computes `L` by power iteration.
    pub fn new(m: DMatrix<f64>, v: DVector<f64>, scale: Scale) -> Result<Self> {
        check_dim(m.nrows(), v.len())?;
        if m.ncols() == 0 {
            return input("matrix has no columns");
        }
        if m.iter().chain(v.iter()).any(|a| !a.is_finite()) {
            return input("non-finite matrix or vector entry");
        }
        let lipschitz = 2.0 * scale.factor() * linalg::sigma_max_sq(&m);
        Ok(QuadraticSmooth { m, v, scale, lipschitz })
    }

    /// Builds the term with a caller-supplied Lipschitz constant.
    pub fn with_lipschitz(m: DMatrix<f64>, v: DVector<f64>, scale: Scale, lipschitz: f64) -> Result<Self> {
        check_dim(m.nrows(), v.len())?;
        if !(lipschitz > 0.0) || !lipschitz.is_finite() {
            return input("Lipschitz constant must be positive");
        }
        Ok(QuadraticSmooth { m, v, scale, lipschitz })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn target(&self) -> &DVector<f64> {
        &self.v
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }
}

impl SmoothFn for QuadraticSmooth {
    fn dim(&self) -> usize {
        self.m.ncols()
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        let r = &self.m * x - &self.v;
        self.scale.factor() * r.norm_squared()
    }

    fn grad(&self, x: &DVector<f64>) -> DVector<f64> {
        let r = &self.m * x - &self.v;
        self.m.tr_mul(&r) * (2.0 * self.scale.factor())
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn quantized_grad(&self, fmt: &FixedPointFormat, x: &DVector<f64>) -> Option<DVector<f64>> {
        let qm = self.m.map(|a| fmt.quantize(a));
        let qv = self.v.map(|a| fmt.quantize(a));
        let qx = x.map(|a| fmt.quantize(a));
        let r = (&qm * qx - qv).map(|a| fmt.quantize(a));
        let g = qm.tr_mul(&r) * (2.0 * self.scale.factor());
        Some(g.map(|a| fmt.quantize(a)))
    }

    fn normal_equations(&self) -> Option<(DMatrix<f64>, DVector<f64>)> {
        let c = 2.0 * self.scale.factor();
        Some((self.m.tr_mul(&self.m) * c, self.m.tr_mul(&self.v) * c))
    }
}

/// `h(x) = λ‖x‖₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct L1Term {
    pub lambda: f64,
}

impl L1Term {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return input("λ must be finite and nonnegative");
        }
        Ok(L1Term { lambda })
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        self.lambda * x.iter().map(|a| a.abs()).sum::<f64>()
    }

    /// Soft thresholding at level `sλ`.
    pub fn prox(&self, s: f64, y: &DVector<f64>) -> Result<DVector<f64>> {
        if !(s > 0.0) {
            return input("prox step must be positive");
        }
        let t = s * self.lambda;
        Ok(y.map(|a| soft_threshold(a, t)))
    }
}

pub fn soft_threshold(a: f64, t: f64) -> f64 {
    if a > t {
        a - t
    } else if a < -t {
        a + t
    } else {
        0.0
    }
}

/// A known minimizer and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub x: DVector<f64>,
    pub f: f64,
}

/// `f = g + h`.
#[derive(Debug, Clone)]
pub struct CompositeProblem<G: SmoothFn = QuadraticSmooth> {
    pub g: G,
    pub h: L1Term,
    pub optimum: Option<Optimum>,
}

impl<G: SmoothFn> CompositeProblem<G> {
    pub fn new(g: G, h: L1Term) -> Self {
        CompositeProblem { g, h, optimum: None }
    }

    pub fn with_optimum(mut self, optimum: Optimum) -> Self {
        self.optimum = Some(optimum);
        self
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn lipschitz(&self) -> f64 {
        self.g.lipschitz()
    }

    /// Exact gradient of `g`.
    pub fn grad(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok(self.g.grad(x))
    }

    /// Exact prox of `s·h`.
    pub fn prox_exact(&self, s: f64, y: &DVector<f64>) -> Result<DVector<f64>> {
        check_dim(self.dim(), y.len())?;
        self.h.prox(s, y)
    }

    pub fn f_value(&self, x: &DVector<f64>) -> f64 {
        self.g.value(x) + self.h.value(x)
    }
}

/// Serialized form `{n, M (row-major), v, scale, lambda, L}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ProblemDoc {
    pub n: usize,
    #[cfg_attr(feature = "serde", serde(rename = "M"))]
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub scale: Scale,
    pub lambda: f64,
    #[cfg_attr(feature = "serde", serde(rename = "L", default))]
    pub lipschitz: Option<f64>,
}

impl ProblemDoc {
    pub fn from_problem(p: &CompositeProblem<QuadraticSmooth>) -> Self {
        let m = p.g.matrix();
        let mut rows = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                rows.push(m[(i, j)]);
            }
        }
        ProblemDoc {
            n: m.ncols(),
            m: rows,
            v: p.g.target().iter().cloned().collect(),
            scale: p.g.scale(),
            lambda: p.h.lambda,
            lipschitz: Some(p.lipschitz()),
        }
    }

    pub fn into_problem(self) -> Result<CompositeProblem<QuadraticSmooth>> {
        if self.n == 0 || self.m.len() % self.n != 0 {
            return input("matrix length is not a multiple of n");
        }
        let rows = self.m.len() / self.n;
        check_dim(rows, self.v.len())?;
        let m = DMatrix::from_row_slice(rows, self.n, &self.m);
        let v = DVector::from_vec(self.v);
        let g = match self.lipschitz {
            Some(l) => QuadraticSmooth::with_lipschitz(m, v, self.scale, l)?,
            None => QuadraticSmooth::new(m, v, self.scale)?,
        };
        Ok(CompositeProblem::new(g, L1Term::new(self.lambda)?))
    }
}
