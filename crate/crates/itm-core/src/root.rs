//! Scalar root-finding engines with full iteration tracing: Newton with a
//! caller-supplied derivative, secant, and bisection.
//!
//! The function under search returns `Option<Evaluation>`: `None` marks an
//! out-of-domain argument (for the transformation function Gamma that means
//! h* <= 0, a nonreal group parameter, or a starred trajectory that blew up
//! before the right endpoint). Newton and secant treat out-of-domain as
//! recoverable and halve the step back toward the last good iterate;
//! bisection refuses it, since a sign-change bracket is meaningless across a
//! domain hole.
//!
//! One evaluation bundles value, optional derivative, and an optional
//! auxiliary quantity. This shape exists because Gamma, dGamma/dh* and
//! lambda all fall out of the same starred integration; splitting them into
//! separate callbacks would double the integration work for no benefit.

use alloc::vec::Vec;

use crate::num::abs;

/// Default convergence tolerance on |f|.
pub const TOL_DEFAULT: f64 = 1e-9;
/// Default iteration budget.
pub const MAX_ITER_DEFAULT: usize = 50;
/// How often an out-of-domain step is halved back toward the last good
/// iterate before giving up.
const MAX_HALVINGS: usize = 30;

/// One function evaluation. `derivative` feeds Newton; `aux` is carried into
/// the trace untouched (the solver stores lambda there).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub derivative: Option<f64>,
    pub aux: Option<f64>,
}

impl Evaluation {
    pub fn plain(value: f64) -> Self {
        Evaluation { value, derivative: None, aux: None }
    }

    pub fn with_derivative(value: f64, derivative: f64) -> Self {
        Evaluation { value, derivative: Some(derivative), aux: None }
    }
}

/// A scalar root-finding problem. `f` returns `None` out of domain.
pub struct RootProblem<F> {
    pub f: F,
    pub x0: f64,
    /// Required by bisection; supplies the second seed for secant.
    pub bracket: Option<(f64, f64)>,
    pub tol: f64,
    pub max_iter: usize,
}

impl<F> RootProblem<F>
where
    F: FnMut(f64) -> Option<Evaluation>,
{
    pub fn new(f: F, x0: f64) -> Self {
        RootProblem { f, x0, bracket: None, tol: TOL_DEFAULT, max_iter: MAX_ITER_DEFAULT }
    }

    fn validate(&self) -> Result<(), RootError> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(RootError::InvalidProblem("tol must be positive and finite"));
        }
        if self.max_iter == 0 {
            return Err(RootError::InvalidProblem("max_iter must be nonzero"));
        }
        if let Some((lo, hi)) = self.bracket {
            if !(lo < hi) {
                return Err(RootError::InvalidProblem("bracket must satisfy lo < hi"));
            }
        }
        Ok(())
    }
}

/// One row of the iteration history.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub x: f64,
    pub fx: f64,
    pub derivative: Option<f64>,
    pub aux: Option<f64>,
}

/// Full iteration history. `converged` implies |f(root)| < tol; a trace with
/// `converged == false` only reaches the caller inside a
/// [`RootError::MaxIterations`].
#[derive(Clone, Debug, PartialEq)]
pub struct RootTrace {
    pub records: Vec<IterationRecord>,
    pub converged: bool,
    pub root: f64,
}

impl RootTrace {
    /// Iteration count, i.e. the index of the last record.
    pub fn iterations(&self) -> usize {
        self.records.last().map(|r| r.iteration).unwrap_or(0)
    }

    pub fn final_fx(&self) -> f64 {
        self.records.last().map(|r| r.fx).unwrap_or(f64::NAN)
    }

    pub fn final_aux(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.aux)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RootError {
    /// The starting point (or a bracket endpoint) evaluated out of domain.
    SeedOutOfDomain { x: f64 },
    /// Newton was asked to run on evaluations that carry no derivative.
    MissingDerivative { x: f64 },
    /// The Newton or secant update is not a finite number.
    DerivativeDegenerate { x: f64 },
    /// Step halving could not re-enter the domain.
    NoProgress { x: f64 },
    /// Iteration budget exhausted; the trace is preserved for diagnosis.
    MaxIterations(RootTrace),
    /// Bisection endpoints do not straddle a sign change.
    InvalidBracket { lo: f64, hi: f64 },
    /// Bisection hit an out-of-domain midpoint, which it does not tolerate.
    MidpointOutOfDomain { x: f64 },
    InvalidProblem(&'static str),
}

impl core::fmt::Display for RootError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RootError::SeedOutOfDomain { x } => write!(f, "seed x = {x} is out of domain"),
            RootError::MissingDerivative { x } => {
                write!(f, "newton needs a derivative, none supplied at x = {x}")
            }
            RootError::DerivativeDegenerate { x } => {
                write!(f, "update degenerate at x = {x} (derivative zero or step non-finite)")
            }
            RootError::NoProgress { x } => {
                write!(f, "could not re-enter the domain near x = {x} after step halving")
            }
            RootError::MaxIterations(trace) => write!(
                f,
                "no convergence within {} iterations, final |f| = {:e}",
                trace.iterations(),
                abs(trace.final_fx())
            ),
            RootError::InvalidBracket { lo, hi } => {
                write!(f, "no sign change over bracket [{lo}, {hi}]")
            }
            RootError::MidpointOutOfDomain { x } => {
                write!(f, "bracket midpoint x = {x} is out of domain")
            }
            RootError::InvalidProblem(what) => write!(f, "invalid root problem: {what}"),
        }
    }
}

impl core::error::Error for RootError {}

fn record(iteration: usize, x: f64, ev: &Evaluation) -> IterationRecord {
    IterationRecord { iteration, x, fx: ev.value, derivative: ev.derivative, aux: ev.aux }
}

/// Newton iteration x_{k+1} = x_k - f(x_k)/f(x_k)'.
///
/// Out-of-domain trial points are halved back toward the last good iterate.
/// The degeneracy guard rejects a zero or non-finite derivative and a
/// non-finite update, but deliberately not a merely tiny derivative: near
/// flat asymptotes (Gamma for beta -> -1) the derivative underflows towards
/// zero while the update f/f' stays finite and meaningful.
pub fn newton<F>(mut p: RootProblem<F>) -> Result<RootTrace, RootError>
where
    F: FnMut(f64) -> Option<Evaluation>,
{
    p.validate()?;
    let mut ev = (p.f)(p.x0).ok_or(RootError::SeedOutOfDomain { x: p.x0 })?;
    let mut records = Vec::new();
    records.push(record(0, p.x0, &ev));
    let mut x = p.x0;
    for k in 1..=p.max_iter {
        if abs(ev.value) < p.tol {
            return Ok(RootTrace { records, converged: true, root: x });
        }
        let d = ev.derivative.ok_or(RootError::MissingDerivative { x })?;
        if d == 0.0 || !d.is_finite() || !(ev.value / d).is_finite() {
            return Err(RootError::DerivativeDegenerate { x });
        }
        let mut x_new = x - ev.value / d;
        let mut trial = (p.f)(x_new);
        let mut halvings = 0;
        while trial.is_none() && halvings < MAX_HALVINGS {
            x_new = 0.5 * (x_new + x);
            trial = (p.f)(x_new);
            halvings += 1;
        }
        let Some(next) = trial else {
            return Err(RootError::NoProgress { x: x_new });
        };
        x = x_new;
        ev = next;
        records.push(record(k, x, &ev));
    }
    if abs(ev.value) < p.tol {
        return Ok(RootTrace { records, converged: true, root: x });
    }
    Err(RootError::MaxIterations(RootTrace { records, converged: false, root: x }))
}

/// Secant iteration on the last two iterates. The second seed is
/// x0 * (1 + 1e-4) unless a bracket supplies one, in which case the bracket
/// endpoints seed the method.
pub fn secant<F>(mut p: RootProblem<F>) -> Result<RootTrace, RootError>
where
    F: FnMut(f64) -> Option<Evaluation>,
{
    p.validate()?;
    let (x0, x1) = match p.bracket {
        Some((lo, hi)) => (lo, hi),
        None => {
            let x0 = p.x0;
            let x1 = if x0 != 0.0 { x0 * (1.0 + 1e-4) } else { 1e-4 };
            (x0, x1)
        }
    };
    let e0 = (p.f)(x0).ok_or(RootError::SeedOutOfDomain { x: x0 })?;
    let e1 = (p.f)(x1).ok_or(RootError::SeedOutOfDomain { x: x1 })?;
    let mut records = Vec::new();
    records.push(record(0, x0, &e0));
    records.push(record(1, x1, &e1));
    let (mut x_prev, mut f_prev) = (x0, e0.value);
    let mut x = x1;
    let mut ev = e1;
    for k in 2..=p.max_iter + 1 {
        if abs(ev.value) < p.tol {
            return Ok(RootTrace { records, converged: true, root: x });
        }
        let den = ev.value - f_prev;
        if abs(den) < 1e-300 {
            return Err(RootError::DerivativeDegenerate { x });
        }
        let mut x_new = x - ev.value * (x - x_prev) / den;
        let mut trial = (p.f)(x_new);
        let mut halvings = 0;
        while trial.is_none() && halvings < MAX_HALVINGS {
            x_new = 0.5 * (x_new + x);
            trial = (p.f)(x_new);
            halvings += 1;
        }
        let Some(next) = trial else {
            return Err(RootError::NoProgress { x: x_new });
        };
        x_prev = x;
        f_prev = ev.value;
        x = x_new;
        ev = next;
        records.push(record(k, x, &ev));
    }
    if abs(ev.value) < p.tol {
        return Ok(RootTrace { records, converged: true, root: x });
    }
    Err(RootError::MaxIterations(RootTrace { records, converged: false, root: x }))
}

/// Interval halving on a sign-change bracket.
///
/// Convergence means |f(mid)| < tol, keeping the trace invariant exact; the
/// interval width collapsing to rounding level without that is reported as
/// no-progress rather than dressed up as success.
pub fn bisection<F>(mut p: RootProblem<F>) -> Result<RootTrace, RootError>
where
    F: FnMut(f64) -> Option<Evaluation>,
{
    p.validate()?;
    let Some((mut lo, mut hi)) = p.bracket else {
        return Err(RootError::InvalidProblem("bisection requires a bracket"));
    };
    let elo = (p.f)(lo).ok_or(RootError::SeedOutOfDomain { x: lo })?;
    let ehi = (p.f)(hi).ok_or(RootError::SeedOutOfDomain { x: hi })?;
    let mut records = Vec::new();
    records.push(record(0, lo, &elo));
    records.push(record(1, hi, &ehi));
    if abs(elo.value) < p.tol {
        return Ok(RootTrace { records, converged: true, root: lo });
    }
    if abs(ehi.value) < p.tol {
        return Ok(RootTrace { records, converged: true, root: hi });
    }
    let mut flo = elo.value;
    if flo * ehi.value > 0.0 {
        return Err(RootError::InvalidBracket { lo, hi });
    }
    let mut mid = 0.5 * (lo + hi);
    for k in 2..=p.max_iter + 1 {
        mid = 0.5 * (lo + hi);
        let em = (p.f)(mid).ok_or(RootError::MidpointOutOfDomain { x: mid })?;
        records.push(record(k, mid, &em));
        if abs(em.value) < p.tol {
            return Ok(RootTrace { records, converged: true, root: mid });
        }
        if (hi - lo) < 4.0 * f64::EPSILON * abs(mid).max(1.0) {
            return Err(RootError::NoProgress { x: mid });
        }
        if flo * em.value <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = em.value;
        }
    }
    Err(RootError::MaxIterations(RootTrace { records, converged: false, root: mid }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(x: f64) -> Option<Evaluation> {
        Some(Evaluation::with_derivative(x * x - 4.0, 2.0 * x))
    }

    #[test]
    fn newton_on_quadratic() {
        let trace = newton(RootProblem::new(quadratic, 3.0)).unwrap();
        assert!(trace.converged);
        assert!((trace.root - 2.0).abs() < 1e-9);
        assert!(trace.iterations() <= 6);
        assert_eq!(trace.records[0].x, 3.0);
    }

    #[test]
    fn newton_on_linear_is_one_step() {
        let f = |x: f64| Some(Evaluation::with_derivative(x - 1.0, 1.0));
        let trace = newton(RootProblem::new(f, 5.0)).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.root, 1.0);
        assert_eq!(trace.iterations(), 1);
    }

    #[test]
    fn newton_halves_back_into_domain() {
        // Domain capped at x < 10; the first full step from 0.1 lands at
        // 20.05 and must be halved back in before iteration continues.
        let f = |x: f64| if x >= 10.0 { None } else { quadratic(x) };
        let trace = newton(RootProblem::new(f, 0.1)).unwrap();
        assert!(trace.converged);
        assert!((trace.root - 2.0).abs() < 1e-9);
        assert!(trace.records.iter().all(|r| r.x < 10.0));
    }

    #[test]
    fn newton_zero_derivative_is_degenerate() {
        let f = |x: f64| Some(Evaluation::with_derivative(x * x + 1.0, 2.0 * x));
        let err = newton(RootProblem::new(f, 0.0)).unwrap_err();
        assert!(matches!(err, RootError::DerivativeDegenerate { .. }));
    }

    #[test]
    fn newton_without_derivative_errors() {
        let f = |x: f64| Some(Evaluation::plain(x - 1.0));
        let err = newton(RootProblem::new(f, 5.0)).unwrap_err();
        assert!(matches!(err, RootError::MissingDerivative { .. }));
    }

    #[test]
    fn newton_out_of_domain_seed_errors() {
        let f = |_: f64| -> Option<Evaluation> { None };
        let err = newton(RootProblem::new(f, 1.0)).unwrap_err();
        assert!(matches!(err, RootError::SeedOutOfDomain { .. }));
    }

    #[test]
    fn newton_max_iterations_carries_trace() {
        // Cube root basin from very far away: each step only shrinks x by
        // 2/3, so 50 iterations cannot reach |f| < 1e-9 from 1e9.
        let f = |x: f64| Some(Evaluation::with_derivative(x * x * x, 3.0 * x * x));
        let err = newton(RootProblem::new(f, 1e9)).unwrap_err();
        match err {
            RootError::MaxIterations(trace) => {
                assert!(!trace.converged);
                assert_eq!(trace.iterations(), MAX_ITER_DEFAULT);
            }
            other => panic!("expected max-iterations, got {other:?}"),
        }
    }

    #[test]
    fn secant_on_quadratic() {
        let trace = secant(RootProblem::new(quadratic, 3.0)).unwrap();
        assert!(trace.converged);
        assert!((trace.root - 2.0).abs() < 1e-9);
    }

    #[test]
    fn secant_uses_bracket_as_seeds() {
        let f = |x: f64| Some(Evaluation::plain(x - 0.5));
        let mut p = RootProblem::new(f, 0.0);
        p.bracket = Some((0.0, 1.0));
        let trace = secant(p).unwrap();
        assert!(trace.converged);
        assert!((trace.root - 0.5).abs() < 1e-9);
        assert_eq!(trace.records[0].x, 0.0);
        assert_eq!(trace.records[1].x, 1.0);
    }

    #[test]
    fn bisection_on_quadratic() {
        let f = |x: f64| Some(Evaluation::plain(x * x - 4.0));
        let mut p = RootProblem::new(f, 0.0);
        p.bracket = Some((0.0, 5.0));
        let trace = bisection(p).unwrap();
        assert!(trace.converged);
        assert!((trace.root - 2.0).abs() < 1e-9);
    }

    #[test]
    fn bisection_on_identity() {
        let f = |x: f64| Some(Evaluation::plain(x));
        let mut p = RootProblem::new(f, 0.0);
        p.bracket = Some((-1.0, 2.0));
        let trace = bisection(p).unwrap();
        assert!(trace.converged);
        assert!(trace.root.abs() < 1e-9);
    }

    #[test]
    fn bisection_rejects_same_sign_bracket() {
        let f = |x: f64| Some(Evaluation::plain(x * x - 4.0));
        let mut p = RootProblem::new(f, 0.0);
        p.bracket = Some((3.0, 5.0));
        assert!(matches!(bisection(p), Err(RootError::InvalidBracket { .. })));
    }

    #[test]
    fn bisection_requires_bracket() {
        let f = |x: f64| Some(Evaluation::plain(x));
        assert!(matches!(
            bisection(RootProblem::new(f, 0.0)),
            Err(RootError::InvalidProblem(_))
        ));
    }

    #[test]
    fn bisection_refuses_domain_holes() {
        let f = |x: f64| if (0.9..1.1).contains(&x) { None } else { Some(Evaluation::plain(x - 1.0)) };
        let mut p = RootProblem::new(f, 0.0);
        p.bracket = Some((0.0, 2.0));
        assert!(matches!(bisection(p), Err(RootError::MidpointOutOfDomain { .. })));
    }

    #[test]
    fn converged_trace_satisfies_tolerance() {
        for x0 in [3.0, 10.0, 2.5, 0.1] {
            let trace = newton(RootProblem::new(quadratic, x0)).unwrap();
            assert!(trace.converged);
            let reeval = quadratic(trace.root).unwrap().value;
            assert!(reeval.abs() < TOL_DEFAULT);
        }
    }

    #[test]
    fn invalid_tol_is_rejected() {
        let mut p = RootProblem::new(quadratic, 3.0);
        p.tol = -1.0;
        assert!(matches!(newton(p), Err(RootError::InvalidProblem(_))));
    }
}
