//! Single-pair amplitude dynamics.
//!
//! A two-level emitter coupled to a lossy reservoir with a Lorentzian coupling
//! spectrum has an exactly solvable excited-state amplitude `nu(t)`. Everything
//! downstream (evolved registers, reduced states, entanglement curves) is a
//! function of that one complex amplitude, so this module is the numerical
//! bedrock of the crate: the closed-form amplitude, its derivative, the
//! time-local decay rate, the memory kernel and spectral density it derives
//! from, and an independent integro-differential integrator used to
//! cross-check the closed form.
//!
//! All rates are expressed in units of inverse time; the natural time unit of
//! the crate is `1/gamma0`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `|chi|` below this fraction of `lambda` is treated as the degenerate
/// (double-root) limit of the amplitude solution.
pub const DEGENERATE_CHI_FRACTION: f64 = 1e-9;

/// `|nu|^2` below this threshold makes the decay rate undefined (it diverges
/// at zeros of `nu`).
pub const NU_ZERO_THRESHOLD: f64 = 1e-10;

/// Round-off slack allowed on the physicality bound `|nu|^2 <= 1`.
pub const NU_SQ_SLACK: f64 = 1e-12;

/// Stability bound for the fixed-step integrator: `h * max_rate` must not
/// exceed this.
pub const ORACLE_STEP_BOUND: f64 = 0.01;

/// Physical constants of one emitter-reservoir pair.
///
/// `gamma0` sets the relaxation scale (`tau_R = 1/gamma0`), `lambda` the
/// spectral width of the reservoir coupling (`tau_B = 1/lambda`), and `delta`
/// the detuning of the spectral peak from the transition frequency. The
/// absolute transition frequency `omega_a` is only needed to place the
/// spectral density on an absolute frequency axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirParams {
    pub gamma0: f64,
    pub lambda: f64,
    pub delta: f64,
    pub omega_a: Option<f64>,
}

impl ReservoirParams {
    /// Validated constructor. `gamma0 >= 0` (zero coupling is the trivial
    /// no-decay limit), `lambda > 0`, `delta` any finite real.
    pub fn new(gamma0: f64, lambda: f64, delta: f64) -> Result<Self> {
        if !gamma0.is_finite() || gamma0 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma0 must be finite and nonnegative, got {gamma0}"
            )));
        }
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "lambda must be finite and positive, got {lambda}"
            )));
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParams(format!("delta must be finite, got {delta}")));
        }
        Ok(Self { gamma0, lambda, delta, omega_a: None })
    }

    /// Attach an absolute transition frequency (needed only by
    /// [`spectral_density`]).
    pub fn with_omega_a(mut self, omega_a: f64) -> Self {
        self.omega_a = Some(omega_a);
        self
    }

    /// Reservoir correlation time `1/lambda`.
    pub fn correlation_time(&self) -> f64 {
        1.0 / self.lambda
    }

    /// Relaxation time `1/gamma0` (infinite at zero coupling).
    pub fn relaxation_time(&self) -> f64 {
        1.0 / self.gamma0
    }

    /// `lambda - i delta`, the complex pole of the memory kernel.
    fn pole(&self) -> Complex64 {
        Complex64::new(self.lambda, -self.delta)
    }
}

/// The complex parameter governing every qualitative feature of the dynamics:
/// its real part controls the decay envelope, its imaginary part the
/// oscillation frequency of revivals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiParam {
    pub chi: Complex64,
    /// Set when `|chi|` is small enough that the double-root limit applies.
    pub degenerate: bool,
}

/// The amplitude pair at one instant: `nu` is the excited-state survival
/// amplitude, `mu = sqrt(1 - |nu|^2)` the collective-mode amplitude of the
/// reservoir. The pair always satisfies `|nu|^2 + mu^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeState {
    pub t: f64,
    pub nu: Complex64,
    pub mu: f64,
}

impl AmplitudeState {
    /// Build from a survival amplitude, deriving `mu`. Rejects `|nu|^2`
    /// above 1 beyond round-off slack; clamps `mu` at 0 inside the slack.
    pub fn from_nu(t: f64, nu: Complex64) -> Result<Self> {
        let nu_sq = nu.norm_sqr();
        if !nu_sq.is_finite() || nu_sq > 1.0 + NU_SQ_SLACK {
            return Err(Error::NonPhysicalAmplitude { nu_sq });
        }
        let mu = (1.0 - nu_sq).max(0.0).sqrt();
        Ok(Self { t, nu, mu })
    }

    /// Excited-state population `|nu|^2`.
    pub fn nu_abs2(&self) -> f64 {
        self.nu.norm_sqr()
    }
}

/// `chi = sqrt((lambda - i delta)^2 - 2 gamma0 lambda)`, principal branch.
///
/// Every consumer below is an even function of `chi`, so the branch choice is
/// free of physical consequence.
pub fn chi(params: &ReservoirParams) -> ChiParam {
    let p = params.pole();
    let chi = (p * p - 2.0 * params.gamma0 * params.lambda).sqrt();
    ChiParam { chi, degenerate: chi.norm() < DEGENERATE_CHI_FRACTION * params.lambda }
}

/// `sinh(z)/z`, continued through `z = 0`.
fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-8 {
        1.0 + z * z / 6.0
    } else {
        z.sinh() / z
    }
}

fn guard_time(t: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// Survival amplitude at time `t >= 0`, with `nu(0) = 1`.
///
/// Evaluates
/// `nu(t) = exp(-(lambda - i delta) t / 2) [cosh(chi t/2) + (lambda - i delta) (t/2) sinhc(chi t/2)]`,
/// which is finite through the double root `chi = 0` where it reduces to
/// `exp(-(lambda - i delta) t/2) (1 + (lambda - i delta) t/2)`. For large
/// `Re(chi) t` the cosh overflows before the prefactor restores scale, so the
/// evaluation switches to the regrouped two-exponential form whose exponents
/// `(-(lambda - i delta) +- chi)/2` both have nonpositive real part.
pub fn nu(t: f64, params: &ReservoirParams) -> Result<AmplitudeState> {
    guard_time(t)?;
    AmplitudeState::from_nu(t, nu_with_chi(t, params, chi(params).chi))
}

/// Amplitude evaluated with an explicitly supplied root of `chi^2`; exposed to
/// the crate so the branch invariance `nu(+chi) == nu(-chi)` is testable.
pub(crate) fn nu_with_chi(t: f64, params: &ReservoirParams, chi: Complex64) -> Complex64 {
    let p = params.pole();
    let half_t = 0.5 * t;
    let z = chi * half_t;
    if z.re.abs() <= 350.0 {
        (-p * half_t).exp() * (z.cosh() + p * half_t * sinhc(z))
    } else {
        let ratio = p / chi;
        let c_plus = 0.5 * (1.0 + ratio);
        let c_minus = 0.5 * (1.0 - ratio);
        c_plus * ((chi - p) * half_t).exp() + c_minus * ((-chi - p) * half_t).exp()
    }
}

/// Time derivative of the survival amplitude,
/// `d nu/dt = -(gamma0 lambda) (t/2) exp(-(lambda - i delta) t/2) sinhc(chi t/2)`.
pub fn nu_dot(t: f64, params: &ReservoirParams) -> Result<Complex64> {
    guard_time(t)?;
    let p = params.pole();
    let x = chi(params).chi;
    let half_t = 0.5 * t;
    let z = x * half_t;
    let g = params.gamma0 * params.lambda;
    if z.re.abs() <= 350.0 {
        Ok(-g * half_t * (-p * half_t).exp() * sinhc(z))
    } else {
        Ok(-(g / x) * 0.5 * (((x - p) * half_t).exp() - ((-x - p) * half_t).exp()))
    }
}

/// Time-local decay rate `gamma(t) = -2 Re(nu_dot / nu)`.
///
/// Returns `None` where `|nu|^2` falls below [`NU_ZERO_THRESHOLD`]: the rate
/// diverges at zeros of `nu`, which occur on resonance deep in the
/// memory-dominated regime; the missing value is a signal, not an error.
pub fn decay_rate(t: f64, params: &ReservoirParams) -> Result<Option<f64>> {
    let amp = nu(t, params)?;
    if amp.nu_abs2() < NU_ZERO_THRESHOLD {
        return Ok(None);
    }
    let nd = nu_dot(t, params)?;
    Ok(Some(-2.0 * (nd / amp.nu).re))
}

/// Long-time envelope rate `lambda - |Re chi|` of the amplitude.
pub fn decay_exponent(params: &ReservoirParams) -> f64 {
    params.lambda - chi(params).chi.re.abs()
}

/// Memory kernel `f(tau) = (gamma0 lambda / 2) exp((i delta - lambda) tau)`,
/// the Fourier transform of the Lorentzian spectral density against
/// `exp(i (omega_a - omega) tau)`.
pub fn kernel(tau: f64, params: &ReservoirParams) -> Result<Complex64> {
    if !(tau >= 0.0) {
        return Err(Error::NegativeTime(tau));
    }
    let amp = 0.5 * params.gamma0 * params.lambda;
    Ok(amp * (Complex64::new(-params.lambda, params.delta) * tau).exp())
}

/// Lorentzian coupling spectrum
/// `J(omega) = (1/2pi) gamma0 lambda^2 / ((omega_a - delta - omega)^2 + lambda^2)`.
///
/// Needs `omega_a` on the parameters to anchor the absolute frequency axis.
pub fn spectral_density(omega: f64, params: &ReservoirParams) -> Result<f64> {
    let omega_a = params.omega_a.ok_or(Error::MissingOmegaA)?;
    if !omega.is_finite() {
        return Err(Error::OutOfRange(format!("omega must be finite, got {omega}")));
    }
    let x = omega_a - params.delta - omega;
    Ok(params.gamma0 * params.lambda * params.lambda
        / (2.0 * std::f64::consts::PI * (x * x + params.lambda * params.lambda)))
}

/// Independent check of the closed-form amplitude: integrates the memory
/// equation `nu'(t) = -int_0^t f(t - s) nu(s) ds` on a uniform grid.
///
/// The exponential kernel makes the equation equivalent to the local system
/// `nu' = -z`, `z' = (gamma0 lambda / 2) nu + (i delta - lambda) z` with
/// `nu(0) = 1`, `z(0) = 0`, which is stepped with the classical fourth-order
/// Runge-Kutta method. The grid must start at 0, be uniform, and satisfy
/// `h * max(lambda, |delta|, gamma0, |Im chi|) <= 0.01`.
pub fn volterra_oracle(params: &ReservoirParams, t_grid: &[f64]) -> Result<Vec<Complex64>> {
    if t_grid.len() < 2 {
        return Err(Error::InvalidGrid("need at least two grid points".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(Error::InvalidGrid(format!("grid must start at 0, got {}", t_grid[0])));
    }
    let h = t_grid[1] - t_grid[0];
    if !(h > 0.0) {
        return Err(Error::InvalidGrid("grid must be strictly ascending".into()));
    }
    let span = t_grid[t_grid.len() - 1].abs().max(1.0);
    for (i, &t) in t_grid.iter().enumerate() {
        if (t - i as f64 * h).abs() > 1e-9 * span {
            return Err(Error::InvalidGrid(format!("nonuniform spacing near index {i}")));
        }
    }
    let rate = params
        .lambda
        .max(params.delta.abs())
        .max(params.gamma0)
        .max(chi(params).chi.im.abs());
    if h * rate > ORACLE_STEP_BOUND * (1.0 + 1e-9) {
        return Err(Error::GridTooCoarse(h * rate));
    }

    let half_pump = Complex64::from(0.5 * params.gamma0 * params.lambda);
    let drift = Complex64::new(-params.lambda, params.delta);
    let deriv = |nu: Complex64, z: Complex64| (-z, half_pump * nu + drift * z);

    let mut nu = Complex64::new(1.0, 0.0);
    let mut z = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(nu);
    for _ in 1..t_grid.len() {
        let (k1n, k1z) = deriv(nu, z);
        let (k2n, k2z) = deriv(nu + 0.5 * h * k1n, z + 0.5 * h * k1z);
        let (k3n, k3z) = deriv(nu + 0.5 * h * k2n, z + 0.5 * h * k2z);
        let (k4n, k4z) = deriv(nu + h * k3n, z + h * k3z);
        nu += h / 6.0 * (k1n + 2.0 * k2n + 2.0 * k3n + k4n);
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        out.push(nu);
    }
    Ok(out)
}

/// Uniform grid of `n >= 2` points spanning `[0, t_max]`.
pub fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    let step = t_max / (n - 1) as f64;
    (0..n).map(|i| i as f64 * step).collect()
}

/// A grid refinement of `time_grid(t_max, n)` fine enough for
/// [`volterra_oracle`]: every coarse point lands exactly on the refined grid.
pub fn oracle_grid(params: &ReservoirParams, t_max: f64, n: usize) -> Vec<f64> {
    let h = t_max / (n - 1) as f64;
    let rate = params
        .lambda
        .max(params.delta.abs())
        .max(params.gamma0)
        .max(chi(params).chi.im.abs());
    let refine = (h * rate / ORACLE_STEP_BOUND).ceil().max(1.0) as usize;
    time_grid(t_max, (n - 1) * refine + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(gamma0: f64, lambda: f64, delta: f64) -> ReservoirParams {
        ReservoirParams::new(gamma0, lambda, delta).unwrap()
    }

    #[test]
    fn chi_markovian_is_real() {
        let c = chi(&params(1.0, 10.0, 0.0));
        assert_abs_diff_eq!(c.chi.re, 80f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(c.chi.im, 0.0, epsilon = 1e-12);
        assert!(!c.degenerate);
    }

    #[test]
    fn chi_zero_coupling_reduces_to_pole() {
        let c = chi(&params(0.0, 3.0, 1.5));
        assert_abs_diff_eq!(c.chi.re, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.chi.im, -1.5, epsilon = 1e-12);
    }

    #[test]
    fn chi_non_markovian_is_imaginary() {
        let c = chi(&params(1.0, 0.1, 0.0));
        assert_abs_diff_eq!(c.chi.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.chi.im.abs(), 0.19f64.sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(c.chi.im.abs(), 0.435_890, epsilon = 1e-6);
    }

    #[test]
    fn chi_degenerate_at_boundary() {
        let c = chi(&params(1.0, 2.0, 0.0));
        assert!(c.chi.norm() < 1e-12);
        assert!(c.degenerate);
    }

    #[test]
    fn chi_squared_identity() {
        for &(g, l, d) in &[(1.0, 10.0, 0.0), (0.7, 0.3, 2.1), (2.0, 0.01, -0.08)] {
            let p = params(g, l, d);
            let c = chi(&p).chi;
            let expect = Complex64::new(l, -d).powi(2) - 2.0 * g * l;
            assert!((c * c - expect).norm() <= 1e-12 * expect.norm().max(1.0));
        }
    }

    #[test]
    fn nu_starts_at_one() {
        for &(g, l, d) in &[(1.0, 10.0, 0.0), (1.0, 0.01, 0.08), (0.5, 2.0, -1.0)] {
            let a = nu(0.0, &params(g, l, d)).unwrap();
            assert_abs_diff_eq!(a.nu.re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(a.nu.im, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(a.mu, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn nu_zero_coupling_never_decays() {
        let p = params(0.0, 0.5, 0.3);
        for &t in &[0.0, 0.5, 3.0, 50.0, 400.0] {
            let a = nu(t, &p).unwrap();
            assert!((a.nu - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn nu_degenerate_double_root() {
        // lambda = 2 gamma0 on resonance: nu(t) = e^{-t lambda/2} (1 + t lambda/2).
        let a = nu(1.0, &params(1.0, 2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(a.nu.re, 2.0 * (-1.0f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(a.nu.re, 0.735_759, epsilon = 1e-6);
        assert_abs_diff_eq!(a.nu.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn nu_rejects_negative_time() {
        assert!(matches!(nu(-0.1, &params(1.0, 1.0, 0.0)), Err(Error::NegativeTime(_))));
        assert!(matches!(nu_dot(-2.0, &params(1.0, 1.0, 0.0)), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn nu_matches_oracle_weak_non_markovian() {
        let p = params(1.0, 0.1, 0.0);
        let grid = time_grid(10.0, 2001); // h = 0.005, h * gamma0 <= 0.01
        let oracle = volterra_oracle(&p, &grid).unwrap();
        let closed = nu(10.0, &p).unwrap().nu;
        assert!((closed - oracle[2000]).norm() < 1e-6);
    }

    #[test]
    fn nu_finite_at_extreme_markovian_times() {
        // Large Re(chi) t exercises the regrouped evaluation path.
        let p = params(1.0, 20.0, 0.0);
        let a = nu(100.0, &p).unwrap();
        assert!(a.nu.norm() < 1e-12);
        assert!(a.nu.re.is_finite() && a.nu.im.is_finite());
        let d = nu_dot(100.0, &p).unwrap();
        assert!(d.norm().is_finite());
    }

    #[test]
    fn nu_dot_zero_at_origin_and_zero_coupling() {
        assert_eq!(nu_dot(0.0, &params(1.0, 10.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        for &t in &[0.3, 2.0, 17.0] {
            assert!(nu_dot(t, &params(0.0, 1.0, 0.7)).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn nu_dot_matches_central_differences() {
        let h = 1e-6;
        for &(g, l, d, t) in &[
            (1.0, 10.0, 0.0, 0.35),
            (1.0, 0.1, 0.0, 7.0),
            (1.0, 0.01, 0.08, 30.0),
            (0.8, 2.0, -0.6, 1.2),
        ] {
            let p = params(g, l, d);
            let fd = (nu(t + h, &p).unwrap().nu - nu(t - h, &p).unwrap().nu) / (2.0 * h);
            let an = nu_dot(t, &p).unwrap();
            assert!((an - fd).norm() <= 1e-6 * an.norm().max(1e-3), "params {g} {l} {d} t {t}");
        }
    }

    #[test]
    fn decay_rate_zero_at_origin() {
        assert_eq!(decay_rate(0.0, &params(1.0, 10.0, 0.0)).unwrap(), Some(0.0));
    }

    #[test]
    fn decay_rate_approaches_decay_exponent() {
        let p = params(1.0, 10.0, 0.0);
        let g = decay_rate(5.0, &p).unwrap().unwrap();
        let limit = 10.0 - 80f64.sqrt();
        assert_abs_diff_eq!(g, limit, epsilon = 1e-3);
        assert_abs_diff_eq!(limit, 1.055_728, epsilon = 1e-6);
    }

    #[test]
    fn decay_rate_goes_negative_in_memory_regime() {
        let p = params(1.0, 0.01, 0.0);
        let negative = time_grid(50.0, 2001)
            .into_iter()
            .filter_map(|t| decay_rate(t, &p).unwrap())
            .any(|g| g < 0.0);
        assert!(negative);
    }

    #[test]
    fn decay_rate_undefined_at_amplitude_zero() {
        // On resonance nu is real; bisect its first sign change.
        let p = params(1.0, 0.01, 0.0);
        let f = |t: f64| nu(t, &p).unwrap().nu.re;
        let (mut lo, mut hi) = (20.0, 25.0);
        assert!(f(lo) > 0.0 && f(hi) < 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t_zero = 0.5 * (lo + hi);
        assert_eq!(decay_rate(t_zero, &p).unwrap(), None);
    }

    #[test]
    fn decay_exponent_examples() {
        assert_abs_diff_eq!(decay_exponent(&params(1.0, 10.0, 0.0)), 10.0 - 80f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(decay_exponent(&params(1.0, 0.1, 0.0)), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn decay_exponent_decreases_with_detuning() {
        let mut prev = f64::INFINITY;
        for k in 0..=16 {
            let delta = 0.08 * k as f64 / 16.0;
            let e = decay_exponent(&params(1.0, 0.01, delta));
            assert!(e < prev, "not strictly decreasing at delta = {delta}");
            prev = e;
        }
    }

    #[test]
    fn kernel_peak_and_sample() {
        let p = params(1.0, 1.0, 0.0);
        assert_abs_diff_eq!(kernel(0.0, &p).unwrap().re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(kernel(1.0, &p).unwrap().re, 0.5 * (-1.0f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(kernel(1.0, &p).unwrap().re, 0.183_940, epsilon = 1e-6);
        assert!(matches!(kernel(-1.0, &p), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn kernel_magnitude_independent_of_detuning() {
        for &tau in &[0.2, 1.0, 3.5] {
            let m0 = kernel(tau, &params(1.3, 0.7, 0.0)).unwrap().norm();
            let m1 = kernel(tau, &params(1.3, 0.7, 2.4)).unwrap().norm();
            assert_abs_diff_eq!(m0, m1, epsilon = 1e-14);
        }
    }

    /// One-time quadrature check of the closed-form kernel against its
    /// defining integral `f(tau) = int dw J(w) exp(i (omega_a - w) tau)`.
    /// Substituting `omega_a - delta - w = lambda tan(theta)` maps the
    /// integral onto `(gamma0 lambda / 2pi) int exp(i (delta + lambda tan
    /// theta) tau) dtheta` over `(-pi/2, pi/2)`, which composite Simpson
    /// handles to well below the comparison tolerance.
    #[test]
    fn kernel_matches_quadrature_of_spectral_density() {
        let p = params(1.0, 1.0, 0.4);
        let n = 1_000_000usize;
        let h = std::f64::consts::PI / n as f64;
        for &tau in &[0.0, 0.7, 1.3] {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..=n {
                let theta = -0.5 * std::f64::consts::PI + i as f64 * h;
                let weight = if i == 0 || i == n {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                let freq = p.delta + p.lambda * theta.tan();
                acc += weight * (Complex64::new(0.0, freq * tau)).exp();
            }
            let quad = acc * h / 3.0 * p.gamma0 * p.lambda / (2.0 * std::f64::consts::PI);
            let closed = kernel(tau, &p).unwrap();
            assert!(
                (quad - closed).norm() <= 1e-3 * closed.norm(),
                "tau {tau}: quad {quad} closed {closed}"
            );
        }
    }

    #[test]
    fn spectral_density_peak_and_half_width() {
        let p = params(2.0, 0.5, 0.3).with_omega_a(10.0);
        let center = 10.0 - 0.3;
        let peak = spectral_density(center, &p).unwrap();
        assert_abs_diff_eq!(peak, 2.0 / (2.0 * std::f64::consts::PI), epsilon = 1e-14);
        for &w in &[center - 0.5, center + 0.5] {
            assert_abs_diff_eq!(spectral_density(w, &p).unwrap(), 0.5 * peak, epsilon = 1e-14);
        }
        assert!(matches!(
            spectral_density(1.0, &params(2.0, 0.5, 0.3)),
            Err(Error::MissingOmegaA)
        ));
    }

    #[test]
    fn spectral_density_integrates_to_kernel_at_zero() {
        let p = params(1.7, 0.9, -0.2).with_omega_a(5.0);
        let center = 5.0 + 0.2;
        let half_span = 2000.0 * p.lambda;
        let n = 200_000usize;
        let h = 2.0 * half_span / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let w = center - half_span + i as f64 * h;
            let weight = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += weight * spectral_density(w, &p).unwrap();
        }
        let integral = acc * h / 3.0;
        let expect = kernel(0.0, &p).unwrap().re;
        assert!((integral - expect).abs() <= 1e-3 * expect);
    }

    #[test]
    fn oracle_zero_coupling_is_identity() {
        let p = params(0.0, 1.0, 0.5);
        let grid = time_grid(5.0, 501);
        for v in volterra_oracle(&p, &grid).unwrap() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn oracle_rejects_coarse_or_malformed_grids() {
        let p = params(1.0, 10.0, 0.0);
        assert!(matches!(
            volterra_oracle(&p, &time_grid(5.0, 100)),
            Err(Error::GridTooCoarse(_))
        ));
        assert!(matches!(volterra_oracle(&p, &[0.0]), Err(Error::InvalidGrid(_))));
        assert!(matches!(volterra_oracle(&p, &[0.5, 1.0]), Err(Error::InvalidGrid(_))));
        assert!(matches!(
            volterra_oracle(&p, &[0.0, 0.001, 0.0021, 0.004]),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn oracle_agrees_with_closed_form_across_regimes() {
        for &(l, d, t_max) in &[(10.0, 0.0, 5.0), (0.01, 0.08, 100.0)] {
            let p = params(1.0, l, d);
            let grid = oracle_grid(&p, t_max, 201);
            let oracle = volterra_oracle(&p, &grid).unwrap();
            let worst = grid
                .iter()
                .zip(&oracle)
                .map(|(&t, &o)| (nu(t, &p).unwrap().nu - o).norm())
                .fold(0.0, f64::max);
            assert!(worst < 1e-6, "lambda {l} delta {d}: max error {worst:.3e}");
        }
    }

    #[test]
    fn nu_is_invariant_under_chi_sign_flip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0xC41);
        for _ in 0..200 {
            let p = params(
                rng.random_range(0.05..5.0),
                rng.random_range(0.01..15.0),
                rng.random_range(-8.0..8.0),
            );
            let t = rng.random_range(0.0..20.0);
            let x = chi(&p).chi;
            let plus = nu_with_chi(t, &p, x);
            let minus = nu_with_chi(t, &p, -x);
            assert!(
                (plus - minus).norm() <= 1e-12 * plus.norm().max(1.0),
                "branch dependence at t = {t}, params {p:?}"
            );
        }
    }

    #[test]
    fn params_validation() {
        assert!(ReservoirParams::new(-1.0, 1.0, 0.0).is_err());
        assert!(ReservoirParams::new(1.0, 0.0, 0.0).is_err());
        assert!(ReservoirParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(ReservoirParams::new(0.0, 1.0, -3.0).is_ok());
    }

    #[test]
    fn amplitude_state_physicality() {
        assert!(AmplitudeState::from_nu(0.0, Complex64::new(1.0, 3e-7)).is_ok());
        assert!(AmplitudeState::from_nu(0.0, Complex64::new(1.1, 0.0)).is_err());
        let a = AmplitudeState::from_nu(0.0, Complex64::new(0.6, 0.0)).unwrap();
        assert_abs_diff_eq!(a.mu, 0.8, epsilon = 1e-15);
    }
}
