//! The Liao-Pop similarity equation, its variational (sensitivity) extension,
//! and the scaling-group algebra that turns one starred IVP integration into
//! a Gamma evaluation.
//!
//! The extended scaling group is
//!
//! ```text
//!     f* = lambda f,   eta* = lambda^delta eta,   h* = lambda^sigma h,
//! ```
//!
//! where h is the free boundary datum of the embedded problem family and the
//! target problem corresponds to h = 1. Requiring invariance of the equation
//! and of the wall conditions forces delta = -1; sigma is free and only fixes
//! the parametrization of the group orbit, with sigma = 4 the conventional
//! choice. One integration of the starred system from
//! `initial_state(h_star)` over `[0, eta_inf_star]` determines
//!
//! ```text
//!     lambda = [u2*(end) + h*^(2/sigma)]^(1/2),
//!     Gamma(h*) = lambda^(-sigma) h* - 1,
//! ```
//!
//! and Gamma = 0 exactly when the rescaled starred solution satisfies the
//! physical outer boundary condition. The last three components of the
//! augmented state carry d(u1,u2,u3)/dh*, so a Newton derivative of Gamma
//! comes out of the same integration.

use crate::num::{powf, sqrt};
use crate::ode::{OdeSystem, Trajectory};

use alloc::vec::Vec;

/// Group exponent delta. Invariance of the wall conditions under the
/// extended group holds only for delta = -1, so it is not configurable.
pub const DELTA: f64 = -1.0;

/// Conventional group exponent sigma.
pub const SIGMA_DEFAULT: f64 = 4.0;

/// Physical parameter beta and group exponent sigma.
///
/// Constructors reject beta <= -2: the problem has no solution there, the
/// admissible range being -2 < beta < infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    beta: f64,
    sigma: f64,
}

impl ModelParams {
    /// Parameters with the conventional sigma = 4.
    pub fn new(beta: f64) -> Result<Self, ModelError> {
        Self::with_sigma(beta, SIGMA_DEFAULT)
    }

    pub fn with_sigma(beta: f64, sigma: f64) -> Result<Self, ModelError> {
        if !beta.is_finite() || beta <= -2.0 {
            return Err(ModelError::BetaOutOfRange { beta });
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(ModelError::InvalidSigma { sigma });
        }
        Ok(ModelParams { beta, sigma })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// The base starred system as an integrable three-dimensional ODE.
    pub fn base_system(&self) -> BaseSystem {
        BaseSystem { params: *self }
    }

    /// Base system plus its h*-sensitivity as a six-dimensional ODE.
    pub fn augmented_system(&self) -> AugmentedSystem {
        AugmentedSystem { params: *self }
    }
}

/// Starred state extended by its derivative with respect to h*:
/// (u1, u2, u3) = (f*, f*', f*'') and (u4, u5, u6) = d(u1, u2, u3)/dh*.
pub type AugmentedState = [f64; 6];

/// Everything the root-finder needs from one starred integration at h*.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingOutcome {
    pub lambda: f64,
    pub h_star: f64,
    pub gamma: f64,
    /// dGamma/dh*. Present only for sigma = 4, where the analytic formula
    /// applies; other sigma use derivative-free root-finding.
    pub gamma_prime: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelError {
    /// beta <= -2: the boundary value problem has no solution.
    BetaOutOfRange { beta: f64 },
    InvalidSigma { sigma: f64 },
    /// Fractional powers of h* require h* > 0.
    NonPositiveHStar { h_star: f64 },
    /// u2*(end) + h*^(2/sigma) <= 0: lambda would be nonreal, which tells
    /// the root-finder this h* is outside the usable domain.
    RescaleUndefined { arg: f64 },
    /// The analytic Gamma derivative is specialized to sigma = 4.
    UnsupportedSigma { sigma: f64 },
}

impl core::fmt::Display for ModelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ModelError::BetaOutOfRange { beta } => {
                write!(f, "beta = {beta} rejected: no solution exists for beta <= -2")
            }
            ModelError::InvalidSigma { sigma } => {
                write!(f, "sigma = {sigma} rejected: group exponent must be positive and finite")
            }
            ModelError::NonPositiveHStar { h_star } => {
                write!(f, "h* = {h_star} rejected: starred initial data needs h* > 0")
            }
            ModelError::RescaleUndefined { arg } => {
                write!(f, "rescale undefined: u2*(end) + h*^(2/sigma) = {arg} is not positive")
            }
            ModelError::UnsupportedSigma { sigma } => {
                write!(f, "analytic Gamma derivative requires sigma = 4, got {sigma}")
            }
        }
    }
}

impl core::error::Error for ModelError {}

/// Right-hand side of the base starred system
/// (u1', u2', u3') = (u2, u3, beta u2^2 - u1 u3).
pub fn rhs_base(_eta: f64, u: &[f64; 3], p: &ModelParams) -> [f64; 3] {
    [u[1], u[2], p.beta * u[1] * u[1] - u[0] * u[2]]
}

/// Base system plus the sensitivity block
/// (u4', u5', u6') = (u5, u6, 2 beta u2 u5 - u4 u3 - u1 u6),
/// obtained by differentiating the base right-hand side along the state.
pub fn rhs_augmented(_eta: f64, u: &[f64; 6], p: &ModelParams) -> [f64; 6] {
    [
        u[1],
        u[2],
        p.beta * u[1] * u[1] - u[0] * u[2],
        u[4],
        u[5],
        2.0 * p.beta * u[1] * u[4] - u[3] * u[2] - u[0] * u[5],
    ]
}

#[derive(Clone, Copy, Debug)]
pub struct BaseSystem {
    pub params: ModelParams,
}

impl OdeSystem<3> for BaseSystem {
    #[inline]
    fn rhs(&self, eta: f64, u: &[f64; 3]) -> [f64; 3] {
        rhs_base(eta, u, &self.params)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AugmentedSystem {
    pub params: ModelParams,
}

impl OdeSystem<6> for AugmentedSystem {
    #[inline]
    fn rhs(&self, eta: f64, u: &[f64; 6]) -> [f64; 6] {
        rhs_augmented(eta, u, &self.params)
    }
}

/// Starred initial data at eta* = 0 for a candidate h*:
/// (0, h*^(2/sigma), -1, 0, (2/sigma) h*^(2/sigma - 1), 0).
///
/// The curvature seed u3 = -1 is what makes the missing physical curvature
/// come out as -lambda^-3; the sensitivity seeds are the exact h*-derivatives
/// of the first three.
pub fn initial_state(h_star: f64, p: &ModelParams) -> Result<AugmentedState, ModelError> {
    if !(h_star > 0.0) || !h_star.is_finite() {
        return Err(ModelError::NonPositiveHStar { h_star });
    }
    let e = 2.0 / p.sigma;
    Ok([0.0, powf(h_star, e), -1.0, 0.0, e * powf(h_star, e - 1.0), 0.0])
}

/// Group parameter from the endpoint slope: lambda = [u2*(end) + h*^(2/sigma)]^(1/2).
pub fn compute_lambda(u2_end: f64, h_star: f64, p: &ModelParams) -> Result<f64, ModelError> {
    if !(h_star > 0.0) || !h_star.is_finite() {
        return Err(ModelError::NonPositiveHStar { h_star });
    }
    let arg = u2_end + powf(h_star, 2.0 / p.sigma);
    if !(arg > 0.0) {
        return Err(ModelError::RescaleUndefined { arg });
    }
    Ok(sqrt(arg))
}

/// Transformation function Gamma(h*) = lambda^(-sigma) h* - 1.
///
/// Gamma = 0 means the group orbit through the starred solution passes
/// through h = 1, i.e. the rescaled profile satisfies the outer boundary
/// condition of the original problem.
pub fn gamma(u2_end: f64, h_star: f64, p: &ModelParams) -> Result<f64, ModelError> {
    let lambda = compute_lambda(u2_end, h_star, p)?;
    Ok(powf(lambda, -p.sigma) * h_star - 1.0)
}

/// Analytic dGamma/dh* for sigma = 4, using the endpoint sensitivity u5*:
///
/// ```text
///     dGamma/dh* = a^-2 { 1 - 2 [u5*(end) + (1/2) h*^(-1/2)] h* / a },
///     a = u2*(end) + h*^(1/2).
/// ```
///
/// This is the exact derivative of Gamma under the chain rule, with
/// d(h*^(1/2))/dh* supplying the second term in the bracket.
pub fn gamma_derivative(
    u2_end: f64,
    u5_end: f64,
    h_star: f64,
    p: &ModelParams,
) -> Result<f64, ModelError> {
    if p.sigma != SIGMA_DEFAULT {
        return Err(ModelError::UnsupportedSigma { sigma: p.sigma });
    }
    if !(h_star > 0.0) || !h_star.is_finite() {
        return Err(ModelError::NonPositiveHStar { h_star });
    }
    let a = u2_end + sqrt(h_star);
    if !(a > 0.0) {
        return Err(ModelError::RescaleUndefined { arg: a });
    }
    Ok(powf(a, -2.0) * (1.0 - 2.0 * (u5_end + 0.5 / sqrt(h_star)) * h_star / a))
}

/// lambda, Gamma and (for sigma = 4) dGamma/dh* from one endpoint state.
pub fn scaling_outcome(
    u2_end: f64,
    u5_end: f64,
    h_star: f64,
    p: &ModelParams,
) -> Result<ScalingOutcome, ModelError> {
    let lambda = compute_lambda(u2_end, h_star, p)?;
    let gamma = powf(lambda, -p.sigma) * h_star - 1.0;
    let gamma_prime = if p.sigma == SIGMA_DEFAULT {
        Some(gamma_derivative(u2_end, u5_end, h_star, p)?)
    } else {
        None
    };
    Ok(ScalingOutcome { lambda, h_star, gamma, gamma_prime })
}

/// Missing physical curvature f''(0) = lambda^-3 f*''(0) = -lambda^-3,
/// since the starred seed fixes f*''(0) = -1.
pub fn rescale_missing_ic(lambda: f64) -> f64 {
    -powf(lambda, -3.0)
}

/// Map a starred base trajectory onto the physical one:
/// (eta, f, f', f'') = (lambda eta*, lambda^-1 u1, lambda^-2 u2, lambda^-3 u3).
///
/// The rescaling is exact, so the physical profile inherits the starred
/// integration accuracy without a second integration pass.
pub fn rescale_profile(star: &Trajectory<3>, lambda: f64) -> Trajectory<3> {
    let inv = 1.0 / lambda;
    let inv2 = inv * inv;
    let inv3 = inv2 * inv;
    let mut nodes = Vec::with_capacity(star.nodes.len());
    for (eta, u) in &star.nodes {
        nodes.push((lambda * eta, [inv * u[0], inv2 * u[1], inv3 * u[2]]));
    }
    Trajectory { nodes }
}

/// Drop the sensitivity block of an augmented trajectory.
pub fn strip_sensitivities(star: &Trajectory<6>) -> Trajectory<3> {
    let mut nodes = Vec::with_capacity(star.nodes.len());
    for (eta, u) in &star.nodes {
        nodes.push((*eta, [u[0], u[1], u[2]]));
    }
    Trajectory { nodes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(beta: f64) -> ModelParams {
        ModelParams::new(beta).unwrap()
    }

    #[test]
    fn beta_at_or_below_minus_two_is_rejected() {
        assert!(matches!(
            ModelParams::new(-2.0),
            Err(ModelError::BetaOutOfRange { .. })
        ));
        assert!(matches!(
            ModelParams::new(-2.5),
            Err(ModelError::BetaOutOfRange { .. })
        ));
        assert!(ModelParams::new(-1.999).is_ok());
        assert!(ModelParams::new(100.0).is_ok());
    }

    #[test]
    fn base_rhs_direct_substitution() {
        assert_eq!(rhs_base(0.0, &[0.0, 1.0, -1.0], &params(0.0)), [1.0, -1.0, 0.0]);
        assert_eq!(rhs_base(0.0, &[0.0, 1.0, -1.0], &params(1.0)), [1.0, -1.0, 1.0]);
    }

    #[test]
    fn base_rhs_vanishes_on_crane_solution() {
        // beta = 1: f = 1 - exp(-eta) solves the equation exactly, so the
        // third rhs component must equal f''' = exp(-eta) pointwise.
        let p = params(1.0);
        for k in 0..=1000 {
            let eta = 5.0 * k as f64 / 1000.0;
            let em = (-eta).exp();
            let out = rhs_base(eta, &[1.0 - em, em, -em], &p);
            assert!((out[2] - em).abs() < 1e-15, "residual at eta = {eta}");
        }
    }

    #[test]
    fn base_rhs_vanishes_on_tanh_solution() {
        // beta = -1: f = sqrt(2) tanh(eta / sqrt(2)) is exact.
        let p = params(-1.0);
        let s = core::f64::consts::SQRT_2;
        for k in 0..=1000 {
            let eta = 5.0 * k as f64 / 1000.0;
            let t = (eta / s).tanh();
            let sech2 = 1.0 - t * t;
            let f = s * t;
            let fp = sech2;
            let fpp = -s * t * sech2;
            let fppp = (3.0 * t * t - 1.0) * sech2;
            let out = rhs_base(eta, &[f, fp, fpp], &p);
            assert!((out[2] - fppp).abs() < 1e-14, "residual at eta = {eta}");
        }
    }

    #[test]
    fn augmented_rhs_direct_substitution() {
        let out = rhs_augmented(0.0, &[0.0, 1.0, -1.0, 0.0, 0.5, 0.0], &params(0.0));
        assert_eq!(out, [1.0, -1.0, 0.0, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn zero_sensitivity_is_invariant() {
        let out = rhs_augmented(0.0, &[0.3, 0.7, -0.2, 0.0, 0.0, 0.0], &params(0.5));
        assert_eq!(&out[3..], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn initial_state_at_unit_h() {
        let u = initial_state(1.0, &params(0.0)).unwrap();
        assert_eq!(u, [0.0, 1.0, -1.0, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn initial_state_matches_square_roots() {
        let u = initial_state(1.75, &params(0.0)).unwrap();
        assert!((u[1] - 1.75f64.sqrt()).abs() < 1e-15);
        assert!((u[4] - 0.5 / 1.75f64.sqrt()).abs() < 1e-15);
        let u = initial_state(1.857587, &params(0.0)).unwrap();
        assert!((u[1] - 1.857587f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn initial_state_rejects_nonpositive_h() {
        assert!(matches!(
            initial_state(0.0, &params(0.0)),
            Err(ModelError::NonPositiveHStar { .. })
        ));
        assert!(matches!(
            initial_state(-1.0, &params(0.0)),
            Err(ModelError::NonPositiveHStar { .. })
        ));
    }

    #[test]
    fn lambda_is_one_when_slope_balances() {
        // u2_end = 1 - sqrt(h*) makes the bracket exactly 1 for sigma = 4.
        let p = params(0.0);
        for h in [0.25f64, 1.0, 1.75, 3.0] {
            let lam = compute_lambda(1.0 - h.sqrt(), h, &p).unwrap();
            assert!((lam - 1.0).abs() < 1e-15);
        }
        assert_eq!(compute_lambda(0.0, 1.0, &p).unwrap(), 1.0);
    }

    #[test]
    fn nonreal_lambda_is_a_typed_error() {
        let p = params(0.0);
        assert!(matches!(
            compute_lambda(-2.0, 1.0, &p),
            Err(ModelError::RescaleUndefined { .. })
        ));
    }

    #[test]
    fn gamma_zero_at_the_group_identity() {
        let p = params(0.0);
        let g = gamma(0.0, 1.0, &p).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn gamma_derivative_trivial_case() {
        // u5 = -(1/2) h^(-1/2) kills the bracketed sensitivity term and
        // u2 = 1 - sqrt(h) makes the prefactor 1.
        let p = params(0.0);
        for h in [0.5f64, 1.0, 2.0] {
            let u2 = 1.0 - h.sqrt();
            let u5 = -0.5 / h.sqrt();
            let d = gamma_derivative(u2, u5, h, &p).unwrap();
            assert!((d - 1.0).abs() < 1e-14, "h = {h}, d = {d}");
        }
    }

    #[test]
    fn gamma_derivative_requires_sigma_four() {
        let p = ModelParams::with_sigma(0.0, 2.0).unwrap();
        assert!(matches!(
            gamma_derivative(0.0, 0.5, 1.0, &p),
            Err(ModelError::UnsupportedSigma { .. })
        ));
        let outcome = scaling_outcome(0.0, 0.5, 1.0, &p).unwrap();
        assert!(outcome.gamma_prime.is_none());
    }

    #[test]
    fn missing_ic_rescale() {
        assert_eq!(rescale_missing_ic(1.0), -1.0);
        let fpp0 = rescale_missing_ic(1.167447);
        assert!((fpp0 - (-0.62848)).abs() < 1e-5, "fpp0 = {fpp0}");
    }

    #[test]
    fn unit_lambda_profile_rescale_is_identity() {
        let star = Trajectory { nodes: alloc::vec![(0.0, [0.0, 1.0, -1.0]), (5.0, [1.2, 0.1, -0.05])] };
        let phys = rescale_profile(&star, 1.0);
        assert_eq!(phys, star);
    }

    #[test]
    fn profile_rescale_scales_each_order() {
        let star = Trajectory { nodes: alloc::vec![(2.0, [8.0, 4.0, 2.0])] };
        let phys = rescale_profile(&star, 2.0);
        let (eta, u) = phys.nodes[0];
        assert_eq!(eta, 4.0);
        assert_eq!(u, [4.0, 1.0, 0.25]);
    }
}
