//! Initial value problem integrators: classic fixed-step RK4 and an adaptive
//! Dormand-Prince 5(4) embedded pair with PI step control.
//!
//! Both integrators march a `const N`-dimensional first-order system from
//! `span.0` to `span.1` and always land on the right endpoint exactly (the
//! last step is shortened as needed). State is `[f64; N]` on the stack; only
//! the recorded trajectory allocates.

use alloc::vec::Vec;

use crate::num::{abs, powf, sqrt};

/// A first-order ODE system du/deta = rhs(eta, u) of fixed dimension N.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, eta: f64, u: &[f64; N]) -> [f64; N];
}

/// Plain closures work as systems, which keeps tests and one-off probes terse.
impl<F, const N: usize> OdeSystem<N> for F
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    #[inline]
    fn rhs(&self, eta: f64, u: &[f64; N]) -> [f64; N] {
        self(eta, u)
    }
}

/// Which marching scheme to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Classic fourth-order Runge-Kutta with a fixed step.
    FixedRk4,
    /// Dormand-Prince 5(4) with embedded error estimate and PI control.
    Adaptive,
}

/// Integration settings. `step` drives the fixed method; the tolerances
/// drive the adaptive one. `max_steps` bounds both.
#[derive(Clone, Copy, Debug)]
pub struct IntegratorConfig {
    pub method: Method,
    pub step: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::FixedRk4,
            step: 0.01,
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    /// Adaptive configuration with equal absolute and relative tolerance.
    pub fn adaptive(tol: f64) -> Self {
        IntegratorConfig {
            method: Method::Adaptive,
            abs_tol: tol,
            rel_tol: tol,
            ..IntegratorConfig::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<(), IntegrateError> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(IntegrateError::InvalidConfig("step must be positive and finite"));
        }
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(IntegrateError::InvalidConfig("tolerances must be positive"));
        }
        if self.max_steps == 0 {
            return Err(IntegrateError::InvalidConfig("max_steps must be nonzero"));
        }
        Ok(())
    }
}

/// Which nodes the returned trajectory keeps. The first and last nodes are
/// always present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Keep only the initial and final nodes.
    EndpointOnly,
    /// Keep every accepted step.
    Dense,
    /// Keep every k-th accepted step (k >= 1), plus the endpoints.
    EveryK(usize),
}

/// Recorded solution nodes, ordered by eta.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub nodes: Vec<(f64, [f64; N])>,
}

impl<const N: usize> Trajectory<N> {
    pub fn final_eta(&self) -> f64 {
        self.nodes.last().expect("trajectory has at least two nodes").0
    }

    pub fn final_state(&self) -> &[f64; N] {
        &self.nodes.last().expect("trajectory has at least two nodes").1
    }
}

/// Why an integration stopped before reaching the right endpoint.
#[derive(Clone, Debug, PartialEq)]
pub enum IntegrateError {
    /// The step budget ran out at the reported eta.
    BudgetExceeded { eta: f64, max_steps: usize },
    /// A state component left the finite range at the reported eta.
    NonFinite { eta: f64 },
    /// The adaptive controller drove the step below the resolvable width,
    /// which in practice means the solution is blowing up at the reported eta.
    StepUnderflow { eta: f64 },
    InvalidConfig(&'static str),
}

impl core::fmt::Display for IntegrateError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            IntegrateError::BudgetExceeded { eta, max_steps } => {
                write!(f, "step budget of {max_steps} exhausted at eta = {eta}")
            }
            IntegrateError::NonFinite { eta } => {
                write!(f, "state became non-finite near eta = {eta}")
            }
            IntegrateError::StepUnderflow { eta } => {
                write!(f, "step size underflowed near eta = {eta} (solution blowing up)")
            }
            IntegrateError::InvalidConfig(what) => write!(f, "invalid integrator config: {what}"),
        }
    }
}

impl core::error::Error for IntegrateError {}

/// Integrate `system` from `(span.0, u0)` to `span.1`.
///
/// The returned trajectory starts at the initial node and ends exactly at
/// `span.1`. A zero-width span returns the two coincident endpoints without
/// calling the right-hand side.
pub fn integrate<S: OdeSystem<N>, const N: usize>(
    system: &S,
    u0: [f64; N],
    span: (f64, f64),
    cfg: &IntegratorConfig,
    sampling: Sampling,
) -> Result<Trajectory<N>, IntegrateError> {
    cfg.validate()?;
    let (t0, t1) = span;
    if !(t1 >= t0) {
        return Err(IntegrateError::InvalidConfig("span must satisfy start <= end"));
    }
    if let Sampling::EveryK(0) = sampling {
        return Err(IntegrateError::InvalidConfig("EveryK stride must be nonzero"));
    }
    if t1 == t0 {
        let mut nodes = Vec::with_capacity(2);
        nodes.push((t0, u0));
        nodes.push((t1, u0));
        return Ok(Trajectory { nodes });
    }
    match cfg.method {
        Method::FixedRk4 => rk4_fixed(system, u0, t0, t1, cfg, sampling),
        Method::Adaptive => dopri5(system, u0, t0, t1, cfg, sampling),
    }
}

fn keep<const N: usize>(
    nodes: &mut Vec<(f64, [f64; N])>,
    sampling: Sampling,
    accepted: usize,
    last: bool,
    eta: f64,
    u: &[f64; N],
) {
    let record = match sampling {
        Sampling::EndpointOnly => last,
        Sampling::Dense => true,
        Sampling::EveryK(k) => last || accepted % k == 0,
    };
    if record {
        nodes.push((eta, *u));
    }
}

fn rk4_fixed<S: OdeSystem<N>, const N: usize>(
    system: &S,
    u0: [f64; N],
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
    sampling: Sampling,
) -> Result<Trajectory<N>, IntegrateError> {
    let span = t1 - t0;
    // The fuzz term keeps spans that are an exact multiple of the step from
    // picking up a stray final micro-step.
    let n_raw = span / cfg.step;
    let n = ceil_steps(n_raw - 1e-9).max(1);
    if n > cfg.max_steps {
        return Err(IntegrateError::BudgetExceeded {
            eta: t0 + cfg.max_steps as f64 * cfg.step,
            max_steps: cfg.max_steps,
        });
    }
    let mut nodes = Vec::new();
    nodes.push((t0, u0));
    let mut u = u0;
    for k in 0..n {
        let eta = t0 + k as f64 * cfg.step;
        let h = if k < n - 1 { cfg.step } else { t1 - eta };
        u = rk4_step(system, eta, &u, h);
        if !all_finite(&u) {
            return Err(IntegrateError::NonFinite { eta });
        }
        let last = k == n - 1;
        let eta_next = if last { t1 } else { t0 + (k + 1) as f64 * cfg.step };
        keep(&mut nodes, sampling, k + 1, last, eta_next, &u);
    }
    Ok(Trajectory { nodes })
}

fn rk4_step<S: OdeSystem<N>, const N: usize>(
    system: &S,
    t: f64,
    u: &[f64; N],
    h: f64,
) -> [f64; N] {
    let k1 = system.rhs(t, u);
    let mut us = [0.0; N];
    for i in 0..N {
        us[i] = u[i] + h / 2.0 * k1[i];
    }
    let k2 = system.rhs(t + h / 2.0, &us);
    for i in 0..N {
        us[i] = u[i] + h / 2.0 * k2[i];
    }
    let k3 = system.rhs(t + h / 2.0, &us);
    for i in 0..N {
        us[i] = u[i] + h * k3[i];
    }
    let k4 = system.rhs(t + h, &us);
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = u[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn all_finite<const N: usize>(u: &[f64; N]) -> bool {
    u.iter().all(|x| x.is_finite())
}

fn ceil_steps(x: f64) -> usize {
    if x <= 0.0 {
        return 0;
    }
    let t = x as usize;
    if t as f64 >= x {
        t
    } else {
        t + 1
    }
}

// Dormand-Prince 5(4) tableau. Stage 7 evaluates at the accepted endpoint
// state, so the pair is FSAL: the last stage of an accepted step is reused
// as the first stage of the next.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

// PI controller parameters after Hairer, Norsett and Wanner.
const PI_ALPHA: f64 = 0.17;
const PI_BETA: f64 = 0.04;
const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 1.0 / 5.0;
const FAC_MAX: f64 = 10.0;

fn dopri5<S: OdeSystem<N>, const N: usize>(
    system: &S,
    u0: [f64; N],
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
    sampling: Sampling,
) -> Result<Trajectory<N>, IntegrateError> {
    let mut nodes = Vec::new();
    nodes.push((t0, u0));
    let mut u = u0;
    let mut t = t0;
    let f0 = system.rhs(t, &u);
    if !all_finite(&f0) {
        return Err(IntegrateError::NonFinite { eta: t });
    }
    let mut h = initial_step(&u, &f0, t0, t1, cfg);
    let mut k1 = f0;
    let mut facold = 1e-4;
    let mut steps = 0usize;
    let mut accepted = 0usize;
    while t < t1 {
        steps += 1;
        if steps > cfg.max_steps {
            return Err(IntegrateError::BudgetExceeded { eta: t, max_steps: cfg.max_steps });
        }
        if h < 4.0 * f64::EPSILON * abs(t).max(1.0) {
            return Err(IntegrateError::StepUnderflow { eta: t });
        }
        let mut last = false;
        if t + h >= t1 {
            h = t1 - t;
            last = true;
        }
        let mut ks = [[0.0; N]; 7];
        ks[0] = k1;
        let mut bad = false;
        for s in 1..7 {
            let mut us = [0.0; N];
            for i in 0..N {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += DP_A[s][j] * ks[j][i];
                }
                us[i] = u[i] + h * acc;
            }
            ks[s] = system.rhs(t + DP_C[s] * h, &us);
            if !all_finite(&ks[s]) {
                bad = true;
                break;
            }
        }
        let mut u_new = [0.0; N];
        if !bad {
            for i in 0..N {
                let mut acc = 0.0;
                for j in 0..7 {
                    acc += DP_B5[j] * ks[j][i];
                }
                u_new[i] = u[i] + h * acc;
            }
            if !all_finite(&u_new) {
                bad = true;
            }
        }
        if bad {
            // A stage left the finite range: retreat hard and restart the
            // controller memory rather than trusting a poisoned estimate.
            h *= 0.1;
            facold = 1e-4;
            continue;
        }
        let mut err = 0.0;
        for i in 0..N {
            let sk = cfg.abs_tol + cfg.rel_tol * abs(u[i]).max(abs(u_new[i]));
            let mut acc = 0.0;
            for j in 0..7 {
                acc += (DP_B5[j] - DP_B4[j]) * ks[j][i];
            }
            let e = h * acc;
            err += (e / sk) * (e / sk);
        }
        err = sqrt(err / N as f64);
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            k1 = ks[6];
            u = u_new;
            accepted += 1;
            keep(&mut nodes, sampling, accepted, last, t, &u);
            let fac11 = if err > 0.0 { powf(err, PI_ALPHA) } else { 1e-10 };
            let fac = fac11 / powf(facold, PI_BETA);
            let fac = FAC_MIN.max(FAC_MAX.min(1.0 / (fac / SAFETY).max(1e-10)));
            h *= fac;
            facold = err.max(1e-4);
        } else {
            let fac11 = powf(err, PI_ALPHA);
            h *= FAC_MIN.max(SAFETY / fac11);
        }
    }
    Ok(Trajectory { nodes })
}

/// Starting step from the standard curvature-free heuristic: small enough
/// that the first explicit Euler move stays well inside tolerance.
fn initial_step<const N: usize>(
    u: &[f64; N],
    f0: &[f64; N],
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> f64 {
    let mut d0: f64 = 0.0;
    let mut d1: f64 = 0.0;
    for i in 0..N {
        let sk = cfg.abs_tol + cfg.rel_tol * abs(u[i]);
        d0 = d0.max(abs(u[i]) / sk);
        d1 = d1.max(abs(f0[i]) / sk);
    }
    let mut h = if d1 > 1e-300 && d0 > 1e-300 {
        0.01 * (d0 / d1)
    } else {
        1e-6 * (t1 - t0)
    };
    h = h.min(t1 - t0);
    h.max(1e-12 * (t1 - t0))
}

/// Endpoint errors of the fixed-step RK4 scheme against a fine-step
/// reference, one `(step, error)` pair per requested step. The error is the
/// Euclidean norm of the endpoint state difference. Halving the step should
/// shrink the error by about 2^4 for a fourth-order scheme.
pub fn order_check<S: OdeSystem<N>, const N: usize>(
    system: &S,
    u0: [f64; N],
    span: (f64, f64),
    steps: &[f64],
    ref_step: f64,
) -> Result<Vec<(f64, f64)>, IntegrateError> {
    let base = IntegratorConfig { method: Method::FixedRk4, ..IntegratorConfig::default() };
    let reference = integrate(
        system,
        u0,
        span,
        &IntegratorConfig { step: ref_step, ..base },
        Sampling::EndpointOnly,
    )?;
    let u_ref = reference.final_state();
    let mut out = Vec::with_capacity(steps.len());
    for &step in steps {
        let traj = integrate(
            system,
            u0,
            span,
            &IntegratorConfig { step, ..base },
            Sampling::EndpointOnly,
        )?;
        let u_end = traj.final_state();
        let mut acc = 0.0;
        for i in 0..N {
            let d = u_end[i] - u_ref[i];
            acc += d * d;
        }
        out.push((step, sqrt(acc)));
    }
    Ok(out)
}
