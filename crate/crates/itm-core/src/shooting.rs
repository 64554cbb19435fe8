//! Classic shooting on the untransformed problem, kept as an independent
//! cross-check. The unknown is s = f''(0); the residual is f'(eta_inf),
//! which the true solution sends to zero. None of the scaling machinery is
//! involved, so agreement with the iterative transformation solver is
//! evidence about the method rather than about shared plumbing.

use crate::model::{ModelError, ModelParams};
use crate::ode::{self, IntegratorConfig, Method, Sampling};
use crate::root::{self, Evaluation, RootProblem, RootTrace, RootError};

/// Default residual tolerance. Looser than the Gamma tolerance because the
/// two live on different scales; 1e-8 on f'(eta_inf) already pins f''(0)
/// well below the cross-check threshold.
pub const SHOOT_TOL_DEFAULT: f64 = 1e-8;

/// Default curvature guess, a round number near the beta range of interest.
pub const S0_DEFAULT: f64 = -0.6;

/// Probe rounds away from s0 (two candidates per round), mirroring the
/// solver's seed probe.
const PROBE_DEPTH: usize = 20;

/// Step budget for probe shots, for the same reason as the solver's: a
/// candidate too stiff to integrate cheaply is no seed at all.
const PROBE_MAX_STEPS: usize = 20_000;

#[derive(Clone, Copy, Debug)]
pub struct ShootConfig {
    pub beta: f64,
    /// Truncation of the physical domain.
    pub eta_inf: f64,
    /// Convergence threshold on |f'(eta_inf)|.
    pub tol: f64,
    /// Initial guess for f''(0).
    pub s0: f64,
    pub integrator: IntegratorConfig,
}

impl ShootConfig {
    pub fn new(beta: f64) -> Self {
        ShootConfig {
            beta,
            eta_inf: 5.0,
            tol: SHOOT_TOL_DEFAULT,
            s0: S0_DEFAULT,
            integrator: IntegratorConfig::default(),
        }
    }

    fn validate(&self) -> Result<ModelParams, ShootError> {
        let params = ModelParams::new(self.beta).map_err(ShootError::Model)?;
        if !(self.eta_inf > 0.0) || !self.eta_inf.is_finite() {
            return Err(ShootError::InvalidConfig("eta_inf must be positive and finite"));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(ShootError::InvalidConfig("tol must be positive and finite"));
        }
        if !self.s0.is_finite() {
            return Err(ShootError::InvalidConfig("s0 must be finite"));
        }
        self.integrator.validate().map_err(|_| {
            ShootError::InvalidConfig("invalid integrator configuration")
        })?;
        Ok(params)
    }
}

/// A converged shot.
#[derive(Clone, Debug, PartialEq)]
pub struct ShootOutcome {
    /// The wall curvature f''(0) that satisfies the far-field condition.
    pub s: f64,
    /// Guess candidates tried beyond s0 before the residual first evaluated.
    pub seed_probes: usize,
    pub trace: RootTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ShootError {
    InvalidConfig(&'static str),
    Model(ModelError),
    /// The residual evaluated out of domain at s0 and at every probe.
    SeedOutOfDomain { s0: f64, probes: usize },
    Root(RootError),
}

impl core::fmt::Display for ShootError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ShootError::InvalidConfig(msg) => write!(f, "invalid shooting configuration: {msg}"),
            ShootError::Model(e) => write!(f, "{e}"),
            ShootError::SeedOutOfDomain { s0, probes } => write!(
                f,
                "the shot blows up at s0 = {s0} and at all {probes} probed guesses"
            ),
            ShootError::Root(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ShootError {}

fn residual_inner(s: f64, params: &ModelParams, cfg: &ShootConfig) -> Option<f64> {
    if !s.is_finite() {
        return None;
    }
    let traj = ode::integrate(
        &params.base_system(),
        [0.0, 1.0, s],
        (0.0, cfg.eta_inf),
        &cfg.integrator,
        Sampling::EndpointOnly,
    )
    .ok()?;
    Some(traj.final_state()[1])
}

/// Integrate the base system from (0, 1, s) and return f'(eta_inf).
///
/// `Ok(None)` marks a shot whose trajectory does not survive to eta_inf
/// (blow-up, step underflow, budget); root-finders treat it as out of
/// domain and halve back.
pub fn shoot_residual(s: f64, cfg: &ShootConfig) -> Result<Option<f64>, ShootError> {
    let params = cfg.validate()?;
    Ok(residual_inner(s, &params, cfg))
}

fn probe_seed(params: &ModelParams, cfg: &ShootConfig) -> Result<(f64, usize), ShootError> {
    let mut probe_cfg = *cfg;
    if probe_cfg.integrator.method == Method::Adaptive {
        probe_cfg.integrator.max_steps = cfg.integrator.max_steps.min(PROBE_MAX_STEPS);
    }
    if residual_inner(cfg.s0, params, &probe_cfg).is_some() {
        return Ok((cfg.s0, 0));
    }
    let mut probes = 0;
    let mut up = cfg.s0;
    let mut down = cfg.s0;
    for _ in 0..PROBE_DEPTH {
        up *= 2.0;
        probes += 1;
        if residual_inner(up, params, &probe_cfg).is_some() {
            return Ok((up, probes));
        }
        down *= 0.5;
        probes += 1;
        if residual_inner(down, params, &probe_cfg).is_some() {
            return Ok((down, probes));
        }
    }
    Err(ShootError::SeedOutOfDomain { s0: cfg.s0, probes })
}

/// Drive the residual to |f'(eta_inf)| < tol by secant iteration on s.
pub fn shoot_solve(cfg: &ShootConfig) -> Result<ShootOutcome, ShootError> {
    let params = cfg.validate()?;
    let (seed, seed_probes) = probe_seed(&params, cfg)?;
    let f = |s: f64| residual_inner(s, &params, cfg).map(Evaluation::plain);
    let mut problem = RootProblem::new(f, seed);
    problem.tol = cfg.tol;
    let trace = root::secant(problem).map_err(ShootError::Root)?;
    Ok(ShootOutcome { s: trace.root, seed_probes, trace })
}
