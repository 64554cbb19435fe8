//! Full method orchestration: drives a root-finder over Gamma(h*) where each
//! evaluation integrates the augmented initial value problem once, then maps
//! the converged starred solution back to physical variables.
//!
//! One solve is a short sequence of initial value problems. The seed h0* is
//! first probed for evaluability (Gamma is undefined wherever the rescale
//! fails), the chosen engine iterates on h*, and the converged (h*, lambda)
//! pair yields f''(0) = -lambda^-3 algebraically. Nothing is re-integrated
//! in physical variables; profiles are rescaled star trajectories.

use alloc::vec::Vec;

use crate::model::{self, ModelError, ModelParams, SIGMA_DEFAULT};
use crate::num::{abs, powf};
use crate::ode::{self, IntegrateError, IntegratorConfig, Method, Sampling, Trajectory};
use crate::root::{self, Evaluation, RootProblem, RootTrace, RootError};

/// Default truncation of the starred domain.
pub const ETA_INF_STAR_DEFAULT: f64 = 5.0;

/// Default root-finder seed for h*.
pub const H0_STAR_DEFAULT: f64 = 1.75;

/// How many doubling/halving rounds the seed probe walks away from h0*
/// before giving up (two candidates per round).
const PROBE_DEPTH: usize = 20;

/// Step budgets for the solver's internal adaptive Gamma evaluations.
///
/// Starred trajectories at far-out h* can be stiff enough that the adaptive
/// integrator crawls through its entire budget before failing; at default
/// tolerances a genuine evaluation finishes in a few thousand steps, so
/// anything beyond these bounds is treated as out of domain rather than
/// paid for. Probes are throwaway reconnaissance and get the tight budget;
/// root-loop evaluations keep an order of magnitude of headroom (enough
/// for spans well past any tabulated truncation). Pathological configs
/// (very long spans at the tightest tolerances) should supply a manual
/// seed or bracket instead.
const PROBE_MAX_STEPS: usize = 5_000;
const EVAL_MAX_STEPS: usize = 50_000;

/// Root-finding engine selection. Newton consumes the analytic
/// dGamma/dh* carried by each evaluation; the other two are derivative-free.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMethod {
    Newton,
    Secant,
    Bisection,
}

/// Everything a solve needs. Build with [`SolverConfig::new`] or
/// [`SolverConfig::for_beta`] and override fields as needed.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub params: ModelParams,
    /// Truncated right end of the starred domain, eta_inf* > 0.
    pub eta_inf_star: f64,
    /// Convergence threshold on |Gamma|.
    pub tol: f64,
    /// Root-finder seed; ignored by bisection, which works from `bracket`.
    pub h0_star: f64,
    pub max_iter: usize,
    pub method: RootMethod,
    /// Required by bisection; optional seed pair for secant.
    pub bracket: Option<(f64, f64)>,
    pub integrator: IntegratorConfig,
    /// Physical profile resolution; 0 skips the profile entirely.
    pub profile_samples: usize,
}

impl SolverConfig {
    /// Defaults: eta_inf* = 5, tol = 1e-9, h0* = 1.75, Newton, and a tight
    /// adaptive integrator. The adaptive default (rather than the fixed-step
    /// integrator default) keeps extreme-beta runs alive: near beta = -1 the
    /// root wanders through h* values whose starred trajectories a fixed
    /// 0.01 step cannot survive.
    pub fn new(params: ModelParams) -> Self {
        SolverConfig {
            params,
            eta_inf_star: ETA_INF_STAR_DEFAULT,
            tol: root::TOL_DEFAULT,
            h0_star: H0_STAR_DEFAULT,
            max_iter: root::MAX_ITER_DEFAULT,
            method: RootMethod::Newton,
            bracket: None,
            integrator: IntegratorConfig::adaptive(1e-12),
            profile_samples: 0,
        }
    }

    /// Defaults at the given beta and sigma = 4.
    pub fn for_beta(beta: f64) -> Result<Self, ModelError> {
        Ok(SolverConfig::new(ModelParams::new(beta)?))
    }

    fn validate(&self) -> Result<(), SolveError> {
        if !(self.eta_inf_star > 0.0) || !self.eta_inf_star.is_finite() {
            return Err(SolveError::InvalidConfig("eta_inf_star must be positive and finite"));
        }
        if !(self.h0_star > 0.0) || !self.h0_star.is_finite() {
            return Err(SolveError::InvalidConfig("h0_star must be positive and finite"));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(SolveError::InvalidConfig("tol must be positive and finite"));
        }
        if self.max_iter == 0 {
            return Err(SolveError::InvalidConfig("max_iter must be nonzero"));
        }
        if let Some((lo, hi)) = self.bracket {
            if !(lo < hi) {
                return Err(SolveError::InvalidConfig("bracket must satisfy lo < hi"));
            }
        }
        if self.method == RootMethod::Bisection && self.bracket.is_none() {
            return Err(SolveError::InvalidConfig("bisection requires a bracket"));
        }
        self.integrator.validate().map_err(|e| match e {
            IntegrateError::InvalidConfig(msg) => SolveError::InvalidConfig(msg),
            _ => SolveError::InvalidConfig("invalid integrator configuration"),
        })
    }
}

/// Boundary-condition defects of a converged solve, all absolute values.
///
/// lambda is defined by lambda^2 = u2*(end) + h*^(2/sigma), which makes the
/// outer slope the exact mirror of the wall defect:
/// f'(lambda eta_inf*) = 1 - lambda^-2 h*^(2/sigma) = -(f'(0) - 1).
/// Both vanish together as Gamma -> 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    /// |Gamma| at the accepted root.
    pub gamma_abs: f64,
    /// |f'(0) - 1|.
    pub wall_slope: f64,
    /// |f'(lambda eta_inf*)|, the truncated far-field condition.
    pub outer_slope: f64,
}

/// A converged solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub beta: f64,
    pub h_star: f64,
    pub lambda: f64,
    /// The recovered missing initial condition f''(0) = -lambda^-3.
    pub fpp0: f64,
    /// Seed candidates tried beyond h0* before Gamma first evaluated.
    pub seed_probes: usize,
    pub trace: RootTrace,
    pub residuals: Residuals,
    /// Physical (eta, f, f', f'') nodes, present when profile_samples > 0.
    pub profile: Option<Trajectory<3>>,
}

impl SolveResult {
    pub fn iterations(&self) -> usize {
        self.trace.iterations()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveError {
    InvalidConfig(&'static str),
    Model(ModelError),
    /// Gamma evaluated out of domain at the seed and at every probe.
    SeedOutOfDomain { h0_star: f64, probes: usize },
    Root(RootError),
    /// The post-convergence profile integration failed; the root itself
    /// converged, but no trajectory survives at the requested resolution.
    ProfileIntegration(IntegrateError),
}

impl core::fmt::Display for SolveError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SolveError::InvalidConfig(msg) => write!(f, "invalid solver configuration: {msg}"),
            SolveError::Model(e) => write!(f, "{e}"),
            SolveError::SeedOutOfDomain { h0_star, probes } => write!(
                f,
                "Gamma is undefined at h0* = {h0_star} and at all {probes} probed seeds"
            ),
            SolveError::Root(e) => write!(f, "{e}"),
            SolveError::ProfileIntegration(e) => write!(f, "profile integration failed: {e}"),
        }
    }
}

impl core::error::Error for SolveError {}

/// Evaluate Gamma at one h* candidate: integrate the augmented system over
/// the starred domain and read the scaling outcome off the endpoint.
///
/// Returns None out of domain. The configuration is validated before the
/// root loop starts, so any integration failure here is a genuine runtime
/// one (blow-up, step underflow, budget) and marks the candidate as
/// unusable rather than aborting the solve; the root-finders halve back
/// toward their last good iterate.
fn gamma_at(cfg: &SolverConfig, h_star: f64) -> Option<Evaluation> {
    if !(h_star > 0.0) || !h_star.is_finite() {
        return None;
    }
    let u0 = model::initial_state(h_star, &cfg.params).ok()?;
    let system = cfg.params.augmented_system();
    let traj = ode::integrate(
        &system,
        u0,
        (0.0, cfg.eta_inf_star),
        &cfg.integrator,
        Sampling::EndpointOnly,
    )
    .ok()?;
    let end = traj.final_state();
    let out = model::scaling_outcome(end[1], end[4], h_star, &cfg.params).ok()?;
    Some(Evaluation { value: out.gamma, derivative: out.gamma_prime, aux: Some(out.lambda) })
}

/// Find an evaluable seed, fanning out from h0* by alternating doublings
/// and halvings so windows on either side of the seed are both reachable.
///
/// Probes run under a reduced step budget; a candidate accepted here is
/// re-evaluated by the root loop under the caller's full budget, which can
/// only succeed again since the adaptive step sequence is identical.
fn probe_seed(cfg: &SolverConfig) -> Result<(f64, usize), SolveError> {
    let mut probe_cfg = cfg.clone();
    if probe_cfg.integrator.method == Method::Adaptive {
        // Fixed-step runs have a deterministic step count that must not be
        // capped, and they abort promptly on blow-up anyway.
        probe_cfg.integrator.max_steps = cfg.integrator.max_steps.min(PROBE_MAX_STEPS);
    }
    if gamma_at(&probe_cfg, cfg.h0_star).is_some() {
        return Ok((cfg.h0_star, 0));
    }
    let mut probes = 0;
    let mut up = cfg.h0_star;
    let mut down = cfg.h0_star;
    for _ in 0..PROBE_DEPTH {
        up *= 2.0;
        probes += 1;
        if gamma_at(&probe_cfg, up).is_some() {
            return Ok((up, probes));
        }
        down *= 0.5;
        probes += 1;
        if gamma_at(&probe_cfg, down).is_some() {
            return Ok((down, probes));
        }
    }
    Err(SolveError::SeedOutOfDomain { h0_star: cfg.h0_star, probes })
}

/// Solve the truncated boundary value problem at cfg.params.
///
/// Newton is only meaningful with the analytic dGamma/dh*, which is
/// specialized to sigma = 4; other sigma silently run secant instead so a
/// sigma sweep does not need per-value method plumbing.
pub fn solve(cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    cfg.validate()?;
    let method = match cfg.method {
        RootMethod::Newton if cfg.params.sigma() != SIGMA_DEFAULT => RootMethod::Secant,
        m => m,
    };
    // Bisection works from the bracket alone, and secant seeds off the
    // bracket when one is supplied; only seed-driven runs get probed.
    let (seed, seed_probes) = match method {
        RootMethod::Bisection => (cfg.h0_star, 0),
        RootMethod::Secant if cfg.bracket.is_some() => (cfg.h0_star, 0),
        _ => probe_seed(cfg)?,
    };

    let mut eval_cfg = cfg.clone();
    if eval_cfg.integrator.method == Method::Adaptive {
        eval_cfg.integrator.max_steps = cfg.integrator.max_steps.min(EVAL_MAX_STEPS);
    }
    let trace = {
        let f = |h: f64| gamma_at(&eval_cfg, h);
        let mut problem = RootProblem::new(f, seed);
        problem.bracket = cfg.bracket;
        problem.tol = cfg.tol;
        problem.max_iter = cfg.max_iter;
        match method {
            RootMethod::Newton => root::newton(problem),
            RootMethod::Secant => root::secant(problem),
            RootMethod::Bisection => root::bisection(problem),
        }
        .map_err(SolveError::Root)?
    };

    let h_star = trace.root;
    let lambda = trace
        .final_aux()
        .ok_or(SolveError::InvalidConfig("root trace carries no scaling data"))?;
    let fpp0 = model::rescale_missing_ic(lambda);

    let slope0 = powf(lambda, -2.0) * powf(h_star, 2.0 / cfg.params.sigma());
    let residuals = Residuals {
        gamma_abs: abs(trace.final_fx()),
        wall_slope: abs(slope0 - 1.0),
        outer_slope: abs(1.0 - slope0),
    };

    let profile = if cfg.profile_samples > 0 {
        // Uniform star grid; the rescale maps it to a uniform physical one.
        let step = cfg.eta_inf_star / cfg.profile_samples as f64;
        let pcfg = IntegratorConfig { method: Method::FixedRk4, step, ..cfg.integrator };
        let u0 = model::initial_state(h_star, &cfg.params).map_err(SolveError::Model)?;
        let star = ode::integrate(
            &cfg.params.base_system(),
            [u0[0], u0[1], u0[2]],
            (0.0, cfg.eta_inf_star),
            &pcfg,
            Sampling::Dense,
        )
        .map_err(SolveError::ProfileIntegration)?;
        Some(model::rescale_profile(&star, lambda))
    } else {
        None
    };

    Ok(SolveResult {
        beta: cfg.params.beta(),
        h_star,
        lambda,
        fpp0,
        seed_probes,
        trace,
        residuals,
        profile,
    })
}

/// One sweep entry; failures stay per-entry so a sweep never aborts early.
#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub beta: f64,
    pub outcome: Result<SolveResult, SolveError>,
}

/// Solve each beta in order, reusing the previous converged h* as the next
/// seed. Roots move continuously in beta, so the warm seed usually lands
/// inside the Newton basin even where the cold default would not.
pub fn sweep(betas: &[f64], cfg: &SolverConfig) -> Vec<SweepEntry> {
    let mut out = Vec::with_capacity(betas.len());
    let mut warm: Option<f64> = None;
    for &beta in betas {
        let outcome = sweep_entry(beta, cfg, &mut warm);
        out.push(SweepEntry { beta, outcome });
    }
    out
}

fn sweep_entry(
    beta: f64,
    cfg: &SolverConfig,
    warm: &mut Option<f64>,
) -> Result<SolveResult, SolveError> {
    let params = ModelParams::with_sigma(beta, cfg.params.sigma()).map_err(SolveError::Model)?;
    let mut entry_cfg = cfg.clone();
    entry_cfg.params = params;
    let cold = cfg.h0_star;
    let seed = warm.unwrap_or(cold);
    entry_cfg.h0_star = seed;
    let first = solve(&entry_cfg);
    let outcome = match first {
        // A stale warm seed can strand the engine when consecutive roots sit
        // orders of magnitude apart (beta = -1 next to beta = -0.9); retry
        // once from the configured seed before recording a failure.
        Err(_) if seed != cold && cfg.method != RootMethod::Bisection => {
            entry_cfg.h0_star = cold;
            solve(&entry_cfg)
        }
        other => other,
    };
    if let Ok(res) = &outcome {
        *warm = Some(res.h_star);
    }
    outcome
}

/// Solve the same beta across several truncations. Entries run cold from
/// cfg.h0_star: truncations are independent problems and their roots can
/// sit far apart, so chaining seeds would help some and strand others.
pub fn boundary_study(
    beta: f64,
    eta_list: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<(f64, SolveResult)>, SolveError> {
    let params = ModelParams::with_sigma(beta, cfg.params.sigma()).map_err(SolveError::Model)?;
    let mut out = Vec::with_capacity(eta_list.len());
    for &eta in eta_list {
        let mut entry_cfg = cfg.clone();
        entry_cfg.params = params;
        entry_cfg.eta_inf_star = eta;
        out.push((eta, solve(&entry_cfg)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_beta(beta: f64) -> SolverConfig {
        SolverConfig::for_beta(beta).unwrap()
    }

    #[test]
    fn beta0_converges_in_four_newton_iterations() {
        let res = solve(&cfg_beta(0.0)).unwrap();
        assert_eq!(res.iterations(), 4);
        assert_eq!(res.seed_probes, 0);
        assert!(abs(res.h_star - 1.8575867) < 1e-6);
        assert!(abs(res.lambda - 1.1674474) < 1e-6);
        assert!(abs(res.fpp0 + 0.62847525) < 1e-6);
        assert!(res.residuals.gamma_abs < 1e-9);
        assert!(res.residuals.wall_slope < 1e-8);
        assert!(res.residuals.outer_slope < 1e-8);
        assert!(res.profile.is_none());
    }

    #[test]
    fn beta0_trace_matches_golden_iterates() {
        let res = solve(&cfg_beta(0.0)).unwrap();
        let rec = &res.trace.records;
        assert_eq!(rec[0].x, 1.75);
        assert!(abs(rec[0].fx - 0.158719908) < 1e-7);
        assert!(abs(rec[1].x - 1.837475) < 1e-5);
        assert!(abs(rec[2].x - 1.856888) < 1e-5);
        assert!(abs(rec[1].aux.unwrap() - 1.157106) < 1e-5);
    }

    #[test]
    fn methods_agree_on_the_beta0_root() {
        let newton = solve(&cfg_beta(0.0)).unwrap();
        let mut cfg = cfg_beta(0.0);
        cfg.method = RootMethod::Secant;
        let secant = solve(&cfg).unwrap();
        cfg.method = RootMethod::Bisection;
        cfg.bracket = Some((1.6, 2.5));
        cfg.max_iter = 200;
        let bisect = solve(&cfg).unwrap();
        assert!(abs(secant.h_star - newton.h_star) < 1e-7);
        assert!(abs(bisect.h_star - newton.h_star) < 1e-7);
    }

    #[test]
    fn nonstandard_sigma_falls_back_to_secant() {
        let mut cfg = SolverConfig::new(ModelParams::with_sigma(0.0, 3.0).unwrap());
        cfg.method = RootMethod::Newton;
        let res = solve(&cfg).unwrap();
        assert!(res.trace.converged);
        // Secant actually ran: no evaluation carried a derivative.
        assert!(res.trace.records.iter().all(|r| r.derivative.is_none()));
        assert!(res.residuals.gamma_abs < 1e-9);
        // Same physical problem, slightly different effective truncation.
        assert!(res.fpp0 > -0.64 && res.fpp0 < -0.62);
    }

    #[test]
    fn bisection_without_bracket_is_rejected() {
        let mut cfg = cfg_beta(0.0);
        cfg.method = RootMethod::Bisection;
        assert!(matches!(solve(&cfg), Err(SolveError::InvalidConfig(_))));
    }

    #[test]
    fn invalid_truncation_is_rejected() {
        let mut cfg = cfg_beta(0.0);
        cfg.eta_inf_star = 0.0;
        assert!(matches!(solve(&cfg), Err(SolveError::InvalidConfig(_))));
    }

    #[test]
    fn seed_probe_recovers_beta2() {
        // The evaluable window at beta = 2 sits below both default seeds;
        // the first halving (0.875) lands inside it.
        let res = solve(&cfg_beta(2.0)).unwrap();
        assert_eq!(res.seed_probes, 2);
        assert!(res.residuals.gamma_abs < 1e-9);
    }

    #[test]
    fn sweep_singleton_is_bit_identical_to_solve() {
        let cfg = cfg_beta(0.0);
        let entries = sweep(&[0.0], &cfg);
        assert_eq!(entries.len(), 1);
        let swept = entries[0].outcome.as_ref().unwrap();
        assert_eq!(*swept, solve(&cfg).unwrap());
    }

    #[test]
    fn sweep_recovers_from_a_stale_warm_seed() {
        // beta = -1 converges to h* of order 1e12; the warm seed it leaves
        // behind is useless for beta = -0.9 and the cold retry must kick in.
        let entries = sweep(&[-1.0, -0.9], &cfg_beta(0.0));
        let first = entries[0].outcome.as_ref().unwrap();
        let second = entries[1].outcome.as_ref().unwrap();
        assert!(abs(first.fpp0) < 1e-6);
        assert!(first.h_star > 1e9);
        assert!(abs(second.fpp0 + 0.089014) < 1e-4);
    }

    #[test]
    fn boundary_study_runs_cold_per_truncation() {
        let mut cfg = cfg_beta(1.0);
        cfg.h0_star = 1.0;
        let rows = boundary_study(1.0, &[5.0, 10.0], &cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(abs(rows[0].1.fpp0 + 1.0013997) < 1e-5);
        assert!(abs(rows[1].1.fpp0 + 1.0000084) < 1e-5);
    }

    #[test]
    fn profile_is_uniform_and_rescaled() {
        let mut cfg = cfg_beta(0.0);
        cfg.profile_samples = 50;
        let res = solve(&cfg).unwrap();
        let profile = res.profile.as_ref().unwrap();
        assert_eq!(profile.nodes.len(), 51);
        let (eta0, u0) = &profile.nodes[0];
        assert_eq!(*eta0, 0.0);
        assert_eq!(u0[0], 0.0);
        assert!(abs(u0[1] - 1.0) < 1e-8);
        assert!(abs(u0[2] - res.fpp0) < 1e-12);
        let (eta_end, _) = profile.nodes.last().unwrap();
        assert!(abs(eta_end - res.lambda * 5.0) < 1e-12);
        // f' decays monotonically toward the far boundary.
        for w in profile.nodes.windows(2) {
            assert!(w[1].1[1] <= w[0].1[1]);
        }
    }
}
