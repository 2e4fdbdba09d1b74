//! Unconstrained MPC condensed into an ℓ1-regularized least squares.

use alloc::boxed::Box;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, failure, input, Error, Result};
use crate::linalg::{lambda_max_sym, sym_sqrt_pair};
use crate::problem::{CompositeProblem, L1Term, QuadraticSmooth, Scale};
use crate::rng::trial_seed;
use crate::solver::{run, RunTrace, SolverConfig};

/// `x(k+1) = A x(k) + B u(k)`, `y(k) = C x(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceModel {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
}

impl StateSpaceModel {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>) -> Result<Self> {
        if !a.is_square() {
            return input("A must be square");
        }
        check_dim(a.nrows(), b.nrows())?;
        check_dim(a.ncols(), c.ncols())?;
        Ok(StateSpaceModel { a, b, c })
    }

    /// Linearized spacecraft attitude model with a reaction wheel (7 states, 4 inputs, C = I).
    pub fn spacecraft() -> Self {
        #[rustfmt::skip]
        let a = DMatrix::from_row_slice(7, 7, &[
            0.0, 0.0, 0.8416, 0.0, -1.267, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0, 0.0, -0.8107, 0.0,
            -0.9763, 0.0, 0.0, 0.0, 0.0, 0.0, -0.04749,
            0.0, 0.0, 0.0, 0.0, 0.0, 0.8107, 0.0,
            0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0,
        ]);
        #[rustfmt::skip]
        let b = DMatrix::from_row_slice(7, 4, &[
            0.2353, 0.0, 0.0, 0.0,
            0.0, 0.2306, 0.0, -0.2306,
            0.0, 0.0, 0.2729, 0.0,
            0.0, -0.2306, 0.0, 25000.0,
            0.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0,
        ]);
        StateSpaceModel { a, b, c: DMatrix::identity(7, 7) }
    }

    /// Per-step output and input weights of the spacecraft experiment.
    pub fn spacecraft_weights() -> (Vec<f64>, Vec<f64>) {
        (alloc::vec![500.0, 500.0, 500.0, 1e-7, 1.0, 1.0, 1.0], alloc::vec![200.0, 200.0, 200.0, 1.0])
    }

    pub fn nx(&self) -> usize {
        self.a.nrows()
    }

    pub fn nu(&self) -> usize {
        self.b.ncols()
    }

    pub fn ny(&self) -> usize {
        self.c.nrows()
    }

    pub fn step(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        &self.a * x + &self.b * u
    }
}

pub const SPACECRAFT_LAMBDA: f64 = 16.79;

#[derive(Debug, Clone, PartialEq)]
pub struct MpcSpec {
    pub model: StateSpaceModel,
    /// Prediction horizon N_p.
    pub np: usize,
    /// Control horizon N_c ≤ N_p.
    pub nc: usize,
    /// Output weights for one step, tiled over the horizon.
    pub q_diag: Vec<f64>,
    /// Input weights for one step, tiled over the control horizon.
    pub r_diag: Vec<f64>,
    /// Stacked output reference of length `ny·N_p`; zero when absent.
    pub setpoint: Option<DVector<f64>>,
    pub lambda: f64,
    /// Current state x(k).
    pub x: DVector<f64>,
}

impl MpcSpec {
    /// Spacecraft regulator with the experiment's weights and λ.
    pub fn spacecraft(np: usize, nc: usize, x: DVector<f64>) -> Self {
        let (q, r) = StateSpaceModel::spacecraft_weights();
        MpcSpec {
            model: StateSpaceModel::spacecraft(),
            np,
            nc,
            q_diag: q,
            r_diag: r,
            setpoint: None,
            lambda: SPACECRAFT_LAMBDA,
            x,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.np == 0 || self.nc == 0 {
            return input("horizons must be positive");
        }
        if self.nc > self.np {
            return input("control horizon N_c must not exceed N_p");
        }
        check_dim(self.model.ny(), self.q_diag.len())?;
        check_dim(self.model.nu(), self.r_diag.len())?;
        check_dim(self.model.nx(), self.x.len())?;
        if let Some(r) = &self.setpoint {
            check_dim(self.model.ny() * self.np, r.len())?;
        }
        if self.q_diag.iter().chain(&self.r_diag).any(|w| !(*w >= 0.0)) {
            return input("weights must be nonnegative");
        }
        Ok(())
    }

    fn q_stack(&self) -> DVector<f64> {
        let n = self.np * self.q_diag.len();
        DVector::from_iterator(n, self.q_diag.iter().cycle().take(n).cloned())
    }

    fn r_stack(&self) -> DVector<f64> {
        let n = self.nc * self.r_diag.len();
        DVector::from_iterator(n, self.r_diag.iter().cycle().take(n).cloned())
    }

    fn setpoint_or_zero(&self) -> DVector<f64> {
        self.setpoint.clone().unwrap_or_else(|| DVector::zeros(self.model.ny() * self.np))
    }
}

/// `Y = Ψ x(k) + Φ U`: Ψ stacks `C A^l` (l = 1..N_p), Φ has block `(i, j) = C A^{i−j} B` for `i ≥ j`.
pub fn build_prediction_matrices(spec: &MpcSpec) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    spec.validate()?;
    let m = &spec.model;
    let (ny, nu, nx) = (m.ny(), m.nu(), m.nx());
    let mut psi = DMatrix::zeros(ny * spec.np, nx);
    let mut phi = DMatrix::zeros(ny * spec.np, nu * spec.nc);
    // powers[l] = C A^l
    let mut ca = Vec::with_capacity(spec.np + 1);
    let mut apow = DMatrix::<f64>::identity(nx, nx);
    for _ in 0..=spec.np {
        ca.push(&m.c * &apow);
        apow = &m.a * apow;
    }
    for i in 0..spec.np {
        psi.view_mut((i * ny, 0), (ny, nx)).copy_from(&ca[i + 1]);
        for j in 0..spec.nc.min(i + 1) {
            let block = &ca[i - j] * &m.b;
            phi.view_mut((i * ny, j * nu), (ny, nu)).copy_from(&block);
        }
    }
    Ok((psi, phi))
}

/// The condensed problem together with the pieces needed to map back.
#[derive(Debug, Clone)]
pub struct CondensedMpc {
    pub problem: CompositeProblem<QuadraticSmooth>,
    pub psi: DMatrix<f64>,
    pub phi: DMatrix<f64>,
    /// `H = ΦᵀQΦ + R`
    pub hessian: DMatrix<f64>,
    /// `b = ΦᵀQ(R_s − Ψx)`
    pub linear: DVector<f64>,
    /// MPC objective minus the condensed `g`, independent of `U`.
    pub offset: f64,
}

/// `g(U) = ‖H^{½}U − H^{−½}b‖²`, `h(U) = λ‖U‖₁`, with `L = 2λ_max(H)`.
pub fn mpc_to_lasso(spec: &MpcSpec) -> Result<CondensedMpc> {
    let (psi, phi) = build_prediction_matrices(spec)?;
    let q = spec.q_stack();
    let qphi = DMatrix::from_fn(phi.nrows(), phi.ncols(), |i, j| q[i] * phi[(i, j)]);
    let mut hessian = phi.tr_mul(&qphi);
    for (i, r) in spec.r_stack().iter().enumerate() {
        hessian[(i, i)] += r;
    }
    let resid = spec.setpoint_or_zero() - &psi * &spec.x;
    let linear = qphi.tr_mul(&resid);
    let (root, inv_root) = sym_sqrt_pair(&hessian)?;
    let target = &inv_root * &linear;
    let l = 2.0 * lambda_max_sym(&hessian);
    let offset = resid.component_mul(&q).dot(&resid) - target.norm_squared();
    let g = QuadraticSmooth::with_lipschitz(root, target, Scale::Unscaled, l)?;
    Ok(CondensedMpc {
        problem: CompositeProblem::new(g, L1Term::new(spec.lambda)?),
        psi,
        phi,
        hessian,
        linear,
        offset,
    })
}

/// MPC cost by forward simulation: `Σ‖r − y‖²_Q + Σ‖u‖²_R + λ‖U‖₁`.
/// Inputs beyond the control horizon are zero.
pub fn rollout_objective(spec: &MpcSpec, u: &DVector<f64>) -> Result<f64> {
    spec.validate()?;
    let m = &spec.model;
    let nu = m.nu();
    check_dim(nu * spec.nc, u.len())?;
    let r = spec.setpoint_or_zero();
    let mut x = spec.x.clone();
    let mut cost = 0.0;
    for t in 0..spec.np {
        let ut = if t < spec.nc { u.rows(t * nu, nu).into_owned() } else { DVector::zeros(nu) };
        x = m.step(&x, &ut);
        let e = r.rows(t * m.ny(), m.ny()) - &m.c * &x;
        cost += e.iter().zip(&spec.q_diag).map(|(v, w)| w * v * v).sum::<f64>();
        if t < spec.nc {
            cost += ut.iter().zip(&spec.r_diag).map(|(v, w)| w * v * v).sum::<f64>();
        }
    }
    Ok(cost + spec.lambda * u.iter().map(|v| v.abs()).sum::<f64>())
}

/// Unregularized optimum `U = (ΦᵀQΦ + R)⁻¹ΦᵀQ(R_s − Ψx)`.
pub fn lqr_closed_form(spec: &MpcSpec) -> Result<DVector<f64>> {
    let c = mpc_to_lasso(spec)?;
    match c.hessian.clone().cholesky() {
        Some(ch) => Ok(ch.solve(&c.linear)),
        None => failure("normal matrix is singular"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopReport {
    /// x(0), x(1), ...
    pub states: Vec<DVector<f64>>,
    pub controls: Vec<DVector<f64>>,
    pub state_norms: Vec<f64>,
    pub traces: Vec<RunTrace>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("closed loop aborted at step {}: {error}", report.controls.len())]
pub struct ClosedLoopFailure {
    pub error: Error,
    pub report: ClosedLoopReport,
}

/// Receding-horizon loop: solve, apply the first move, advance, warm-start from the
/// shifted previous solution.
pub fn mpc_closed_loop(
    spec: &MpcSpec,
    config: &SolverConfig,
    steps: usize,
) -> core::result::Result<ClosedLoopReport, Box<ClosedLoopFailure>> {
    let mut report = ClosedLoopReport {
        states: alloc::vec![spec.x.clone()],
        controls: Vec::new(),
        state_norms: alloc::vec![spec.x.norm()],
        traces: Vec::new(),
    };
    let nu = spec.model.nu();
    let mut spec = spec.clone();
    let mut warm = DVector::zeros(nu * spec.nc);
    for t in 0..steps {
        let condensed = match mpc_to_lasso(&spec) {
            Ok(c) => c,
            Err(error) => return Err(Box::new(ClosedLoopFailure { error, report })),
        };
        let mut cfg = config.clone();
        cfg.seed = trial_seed(config.seed, t as u64);
        let trace = match run(&condensed.problem, &cfg, &warm) {
            Ok(tr) => tr,
            Err(f) => {
                report.traces.push(f.trace);
                return Err(Box::new(ClosedLoopFailure { error: f.error, report }));
            }
        };
        let u_opt = trace.last().clone();
        let u0 = u_opt.rows(0, nu).into_owned();
        spec.x = spec.model.step(&spec.x, &u0);
        warm = DVector::zeros(u_opt.len());
        if u_opt.len() > nu {
            warm.rows_mut(0, u_opt.len() - nu).copy_from(&u_opt.rows(nu, u_opt.len() - nu));
        }
        report.states.push(spec.x.clone());
        report.state_norms.push(spec.x.norm());
        report.controls.push(u0);
        report.traces.push(trace);
    }
    Ok(report)
}
