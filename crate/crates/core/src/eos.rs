//! Stiffened-gas closure for a binary one-velocity, one-temperature mixture.
//!
//! The mixture is described by the partial densities `rho1`, `rho2` and the
//! internal energy density `rho_eps`. The common pressure is the larger root
//! of a quadratic whose coefficients depend only on those three numbers, so
//! volume fractions never have to be evolved.
//!
//! Everything here is in SI units and every function is a pure function of
//! its arguments.

use crate::error::{Error, Result};

/// Residual of the rational pressure equation above which a closure is
/// reported as suspect (see [`Closure::is_suspect`]).
pub const RESIDUAL_WARN: f64 = 1e-8;

/// Stiffened-gas constants of one component:
/// `p = R r θ - p_star`, `ε = c_V θ + p_star / r + ε0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    gamma: f64,
    cv: f64,
    p_star: f64,
    eps0: f64,
    r_gas: f64,
    cp: f64,
}

impl GasParams {
    pub fn new(gamma: f64, cv: f64, p_star: f64, eps0: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidGas(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(cv > 0.0) || !cv.is_finite() {
            return Err(Error::InvalidGas(format!("cv must be positive, got {cv}")));
        }
        if !(p_star >= 0.0) || !p_star.is_finite() {
            return Err(Error::InvalidGas(format!("p_star must be non-negative, got {p_star}")));
        }
        if !eps0.is_finite() {
            return Err(Error::InvalidGas(format!("eps0 must be finite, got {eps0}")));
        }
        Ok(Self {
            gamma,
            cv,
            p_star,
            eps0,
            r_gas: (gamma - 1.0) * cv,
            cp: gamma * cv,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn cv(&self) -> f64 {
        self.cv
    }

    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    /// `R = (γ - 1) c_V`.
    pub fn r_gas(&self) -> f64 {
        self.r_gas
    }

    /// `c_p = γ c_V`.
    pub fn cp(&self) -> f64 {
        self.cp
    }

    /// Phase density at pressure `p` and temperature `theta`.
    pub fn phase_density(&self, p: f64, theta: f64) -> f64 {
        (p + self.p_star) / (self.r_gas * theta)
    }

    /// Squared single-phase speed of sound `γ (γ - 1) c_V θ`.
    pub fn sound_speed2(&self, theta: f64) -> f64 {
        self.gamma * self.r_gas * theta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasPair {
    pub g1: GasParams,
    pub g2: GasParams,
}

impl GasPair {
    pub fn new(g1: GasParams, g2: GasParams) -> Self {
        Self { g1, g2 }
    }

    /// Component by 1-based index.
    pub fn component(&self, k: usize) -> &GasParams {
        match k {
            1 => &self.g1,
            2 => &self.g2,
            _ => panic!("component index must be 1 or 2, got {k}"),
        }
    }

    /// `p_star2 - p_star1`.
    pub fn delta_p_star(&self) -> f64 {
        self.g2.p_star - self.g1.p_star
    }
}

/// Per-node vector of evolved unknowns `(ρ1, ρ2, ρu, E)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedState {
    pub rho1: f64,
    pub rho2: f64,
    pub mom: f64,
    pub etot: f64,
}

impl ConservedState {
    pub fn rho(&self) -> f64 {
        self.rho1 + self.rho2
    }

    pub fn velocity(&self) -> f64 {
        self.mom / self.rho()
    }

    /// Internal energy density `E - ρu²/2`.
    pub fn rho_eps(&self) -> f64 {
        self.etot - 0.5 * self.mom * self.mom / self.rho()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureCoeffs {
    pub rho: f64,
    pub r_mix: f64,
    pub cv_mix: f64,
    /// `γ c_V`, equal to `<c_pk ρ_k> / ρ`.
    pub cp_mix: f64,
    pub gamma_mix: f64,
    pub eps0_mix: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

pub fn mixture_coefficients(rho1: f64, rho2: f64, gases: &GasPair) -> Result<MixtureCoeffs> {
    if !(rho1 >= 0.0) {
        return Err(Error::NegativePartialDensity {
            component: 1,
            value: rho1,
        });
    }
    if !(rho2 >= 0.0) {
        return Err(Error::NegativePartialDensity {
            component: 2,
            value: rho2,
        });
    }
    coefficients_unchecked_sign(rho1, rho2, gases)
}

/// Mixture coefficients without the sign check on the partial densities;
/// only the total density and the heat capacity `ρ c_V` must be positive.
fn coefficients_unchecked_sign(rho1: f64, rho2: f64, gases: &GasPair) -> Result<MixtureCoeffs> {
    let rho = rho1 + rho2;
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::ZeroDensity { rho1, rho2 });
    }
    let (g1, g2) = (&gases.g1, &gases.g2);
    let rho_r = g1.r_gas * rho1 + g2.r_gas * rho2;
    let rho_cv = g1.cv * rho1 + g2.cv * rho2;
    if !(rho_cv > 0.0) {
        return Err(Error::ZeroDensity { rho1, rho2 });
    }
    let r_mix = rho_r / rho;
    let cv_mix = rho_cv / rho;
    let gamma_mix = rho_r / rho_cv + 1.0;
    Ok(MixtureCoeffs {
        rho,
        r_mix,
        cv_mix,
        cp_mix: gamma_mix * cv_mix,
        gamma_mix,
        eps0_mix: (g1.eps0 * rho1 + g2.eps0 * rho2) / rho,
        sigma1: g1.r_gas * rho1 / rho_cv,
        sigma2: g2.r_gas * rho2 / rho_cv,
    })
}

/// Coefficients and roots of `p² - b p - c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureSolution {
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub sqrt_d: f64,
    pub p_plus: f64,
    pub p_minus: f64,
}

/// The per-component terms `a_k = σ_k (ρ(ε - ε0) - p_star_k)`.
fn a_terms(coeffs: &MixtureCoeffs, rho_e: f64, gases: &GasPair) -> (f64, f64) {
    (
        coeffs.sigma1 * (rho_e - gases.g1.p_star),
        coeffs.sigma2 * (rho_e - gases.g2.p_star),
    )
}

fn solve_quadratic(coeffs: &MixtureCoeffs, rho_eps: f64, gases: &GasPair) -> Result<PressureSolution> {
    let (ps1, ps2) = (gases.g1.p_star, gases.g2.p_star);
    let rho_e = rho_eps - coeffs.rho * coeffs.eps0_mix;
    let (a1, a2) = a_terms(coeffs, rho_e, gases);
    let (b1, b2) = (a1 - ps1, a2 - ps2);
    let b = b1 + b2;
    let c = a1 * ps2 + a2 * ps1 - ps1 * ps2;
    let d = (b1 - b2) * (b1 - b2) + 4.0 * a1 * a2;
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::NegativeDiscriminant { d });
    }
    let sqrt_d = d.sqrt();
    // Product form avoids cancellation in b + sqrt(d) when b < 0.
    let p_plus = if b >= 0.0 {
        0.5 * (b + sqrt_d)
    } else {
        2.0 * c / (sqrt_d - b)
    };
    if !(p_plus > 0.0) || !p_plus.is_finite() {
        return Err(Error::NonpositivePressure { p: p_plus });
    }
    let p_minus = -c / p_plus;
    Ok(PressureSolution {
        b,
        c,
        d,
        sqrt_d,
        p_plus,
        p_minus,
    })
}

pub fn pressure_quadratic(rho1: f64, rho2: f64, rho_eps: f64, gases: &GasPair) -> Result<PressureSolution> {
    let coeffs = mixture_coefficients(rho1, rho2, gases)?;
    solve_quadratic(&coeffs, rho_eps, gases)
}

/// `<σ_k (ρ(ε - ε0) - p_star_k) / (p + p_star_k)> - 1`; zero at the physical root.
pub fn rational_residual(p: f64, rho1: f64, rho2: f64, rho_eps: f64, gases: &GasPair) -> Result<f64> {
    let coeffs = mixture_coefficients(rho1, rho2, gases)?;
    rational_residual_with(p, &coeffs, rho_eps, gases)
}

fn rational_residual_with(p: f64, coeffs: &MixtureCoeffs, rho_eps: f64, gases: &GasPair) -> Result<f64> {
    let rho_e = rho_eps - coeffs.rho * coeffs.eps0_mix;
    let (a1, a2) = a_terms(coeffs, rho_e, gases);
    let den1 = p + gases.g1.p_star;
    let den2 = p + gases.g2.p_star;
    if den1 == 0.0 {
        return Err(Error::PoleAtP { p, component: 1 });
    }
    if den2 == 0.0 {
        return Err(Error::PoleAtP { p, component: 2 });
    }
    Ok(a1 / den1 + a2 / den2 - 1.0)
}

/// Squared speed of sound `γ (p+ + p*1)(p+ + p*2) / (ρ √d)`.
pub fn speed_of_sound(sol: &PressureSolution, coeffs: &MixtureCoeffs, gases: &GasPair) -> Result<f64> {
    if !(sol.sqrt_d > 0.0) {
        return Err(Error::NegativeDiscriminant { d: sol.d });
    }
    let p = sol.p_plus;
    Ok(coeffs.gamma_mix * (p + gases.g1.p_star) * (p + gases.g2.p_star) / (coeffs.rho * sol.sqrt_d))
}

/// Radical-free form `c_s² = (γ/ρ) <a_k / (p+ + p*k)²>⁻¹`.
pub fn speed_of_sound_alt(p_plus: f64, rho1: f64, rho2: f64, rho_eps: f64, gases: &GasPair) -> Result<f64> {
    let coeffs = mixture_coefficients(rho1, rho2, gases)?;
    let rho_e = rho_eps - coeffs.rho * coeffs.eps0_mix;
    let (a1, a2) = a_terms(&coeffs, rho_e, gases);
    let den1 = p_plus + gases.g1.p_star;
    let den2 = p_plus + gases.g2.p_star;
    if !(den1 > 0.0) {
        return Err(Error::PoleAtP {
            p: p_plus,
            component: 1,
        });
    }
    if !(den2 > 0.0) {
        return Err(Error::PoleAtP {
            p: p_plus,
            component: 2,
        });
    }
    let harmonic = a1 / (den1 * den1) + a2 / (den2 * den2);
    Ok(coeffs.gamma_mix / (coeffs.rho * harmonic))
}

/// Everything derived from one conserved node state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closure {
    pub p: f64,
    pub theta: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub r1: f64,
    pub r2: f64,
    pub cs2: f64,
    pub velocity: f64,
    pub rho_eps: f64,
    pub coeffs: MixtureCoeffs,
    pub pressure: PressureSolution,
    /// Rational-equation residual at `p`, kept as a validity diagnostic.
    pub residual: f64,
}

impl Closure {
    pub fn rho(&self) -> f64 {
        self.coeffs.rho
    }

    pub fn cs(&self) -> f64 {
        self.cs2.sqrt()
    }

    /// Mass fraction of component 1.
    pub fn y1(&self, state: &ConservedState) -> f64 {
        state.rho1 / self.coeffs.rho
    }

    pub fn is_suspect(&self) -> bool {
        !(self.residual.abs() <= RESIDUAL_WARN)
    }
}

pub fn closure(state: &ConservedState, gases: &GasPair) -> Result<Closure> {
    let coeffs = mixture_coefficients(state.rho1, state.rho2, gases)?;
    close_with(state, coeffs, gases)
}

/// Same as [`closure`] but accepts a slightly negative partial density as
/// long as the total density, the pressure root, `p + p_star_k` and the
/// temperature stay positive. The negative component then carries a negative
/// volume fraction. Schemes without limiters produce such undershoots next
/// to near-pure contacts.
pub fn closure_lenient(state: &ConservedState, gases: &GasPair) -> Result<Closure> {
    let coeffs = coefficients_unchecked_sign(state.rho1, state.rho2, gases)?;
    close_with(state, coeffs, gases)
}

fn close_with(state: &ConservedState, coeffs: MixtureCoeffs, gases: &GasPair) -> Result<Closure> {
    let velocity = state.mom / coeffs.rho;
    let rho_eps = state.etot - 0.5 * state.mom * velocity;
    let sol = solve_quadratic(&coeffs, rho_eps, gases)?;
    let (g1, g2) = (&gases.g1, &gases.g2);
    let p = sol.p_plus;
    let den1 = p + g1.p_star;
    let den2 = p + g2.p_star;
    let inv_theta = g1.r_gas * state.rho1 / den1 + g2.r_gas * state.rho2 / den2;
    let theta = 1.0 / inv_theta;
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::NonpositiveTemperature { theta });
    }
    let alpha1 = g1.r_gas * state.rho1 * theta / den1;
    let alpha2 = g2.r_gas * state.rho2 * theta / den2;
    let cs2 = speed_of_sound(&sol, &coeffs, gases)?;
    if !(cs2 > 0.0) || !cs2.is_finite() {
        return Err(Error::NonpositiveSoundSpeed { cs2 });
    }
    let residual = rational_residual_with(p, &coeffs, rho_eps, gases).unwrap_or(f64::NAN);
    Ok(Closure {
        p,
        theta,
        alpha1,
        alpha2,
        r1: den1 / (g1.r_gas * theta),
        r2: den2 / (g2.r_gas * theta),
        cs2,
        velocity,
        rho_eps,
        coeffs,
        pressure: sol,
        residual,
    })
}

/// Temperature from `ρ(ε - ε0) + p = γ c_V ρ θ`; an alternative to the
/// harmonic form used by [`closure`].
pub fn temperature_from_energy(cl: &Closure) -> f64 {
    let c = &cl.coeffs;
    let rho_e = cl.rho_eps - c.rho * c.eps0_mix;
    (rho_e + cl.p) / (c.cp_mix * c.rho)
}

/// Closed forms of both roots in terms of the closed state:
/// `p+ = Rρθ - <α_k p*k>`, `p- = -(α1 p*2 + α2 p*1 + α1 α2 Δ*² / (c_V ρ θ))`.
pub fn explicit_roots(cl: &Closure, gases: &GasPair) -> (f64, f64) {
    let c = &cl.coeffs;
    let (ps1, ps2) = (gases.g1.p_star, gases.g2.p_star);
    let dps = gases.delta_p_star();
    let cv_rho_theta = c.cv_mix * c.rho * cl.theta;
    let p_plus = c.r_mix * c.rho * cl.theta - (cl.alpha1 * ps1 + cl.alpha2 * ps2);
    let p_minus = -(cl.alpha1 * ps2 + cl.alpha2 * ps1 + cl.alpha1 * cl.alpha2 * dps * dps / cv_rho_theta);
    (p_plus, p_minus)
}

/// The discriminant written as a quadratic polynomial in `Δ* = p*2 - p*1`,
/// evaluated from closed-state quantities.
pub fn discriminant_delta_form(cl: &Closure, gases: &GasPair) -> f64 {
    discriminant_delta_terms(cl, gases).iter().sum()
}

/// Sum of the magnitudes of the three terms of [`discriminant_delta_form`];
/// its round-off error is a small multiple of `ε` times this value.
pub fn discriminant_delta_scale(cl: &Closure, gases: &GasPair) -> f64 {
    discriminant_delta_terms(cl, gases).iter().map(|t| t.abs()).sum()
}

fn discriminant_delta_terms(cl: &Closure, gases: &GasPair) -> [f64; 3] {
    let c = &cl.coeffs;
    let dps = gases.delta_p_star();
    let (s1, s2) = (c.sigma1, c.sigma2);
    let (a1, a2) = (cl.alpha1, cl.alpha2);
    let cv_rho_theta = c.cv_mix * c.rho * cl.theta;
    let skew = a2 * s1 - a1 * s2;
    let quad = skew * skew + 2.0 * (a1 * s2 + a2 * s1) + 1.0;
    let lin = 2.0 * cv_rho_theta * (skew * (c.gamma_mix - 1.0) + s1 - s2);
    let free = (c.gamma_mix - 1.0) * cv_rho_theta;
    [quad * dps * dps, lin * dps, free * free]
}

/// Partial derivatives of `p+` with respect to `(ρ1, ρ2, ρε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureDifferential {
    pub p1: f64,
    pub p2: f64,
    pub p: f64,
    /// `<(ρ_k/ρ) P_k> + ((ρε + p+)/ρ) P`, which equals `c_s²`.
    pub abgrall_cs2: f64,
}

pub fn pressure_differential(rho1: f64, rho2: f64, rho_eps: f64, gases: &GasPair) -> Result<PressureDifferential> {
    let coeffs = mixture_coefficients(rho1, rho2, gases)?;
    let sol = solve_quadratic(&coeffs, rho_eps, gases)?;
    let (g1, g2) = (&gases.g1, &gases.g2);
    let p = sol.p_plus;
    let rho = coeffs.rho;
    let rho_e = rho_eps - rho * coeffs.eps0_mix;
    let p_coef = ((coeffs.gamma_mix - 1.0) * p + coeffs.sigma1 * g2.p_star + coeffs.sigma2 * g1.p_star) / sol.sqrt_d;
    let h1 = (rho_e - g1.p_star) * (p + g2.p_star);
    let h2 = (rho_e - g2.p_star) * (p + g1.p_star);
    let rho_cv = g1.cv * rho1 + g2.cv * rho2;
    // dσ1 = -dσ2·(R1 cV2)/(R2 cV1) ∝ (ρ2 dρ1 - ρ1 dρ2)
    let rcal = (g1.r_gas * g2.cv * h1 - g2.r_gas * g1.cv * h2) / (rho_cv * rho_cv);
    let p1 = rcal * rho2 / sol.sqrt_d - p_coef * g1.eps0;
    let p2 = -rcal * rho1 / sol.sqrt_d - p_coef * g2.eps0;
    let abgrall_cs2 = (rho1 * p1 + rho2 * p2) / rho + (rho_eps + p) / rho * p_coef;
    Ok(PressureDifferential {
        p1,
        p2,
        p: p_coef,
        abgrall_cs2,
    })
}

/// Terms of the relation between `c_s²` and the Wood speed of sound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WoodRelation {
    pub cs_wood2: f64,
    /// `1/(ρ c_s²)`.
    pub inv_rho_cs2: f64,
    /// `1/(ρ c_sW²) = <α_k / (r_k c_sk²)>`.
    pub inv_rho_cw2: f64,
    pub correction: f64,
    /// `1/(ρ c_s²) - 1/(ρ c_sW²) - correction`.
    pub residual: f64,
}

/// Wood speed and the non-negative correction separating it from `c_s`.
///
/// For a single-phase state the correction is zero and `c_sW = c_s` up to
/// round-off; no special casing is needed because the absent phase enters
/// with `α_k = 0`.
pub fn wood_relation(cl: &Closure, gases: &GasPair) -> WoodRelation {
    let (g1, g2) = (&gases.g1, &gases.g2);
    let theta = cl.theta;
    let rho = cl.coeffs.rho;
    let c1 = g1.sound_speed2(theta);
    let c2 = g2.sound_speed2(theta);
    let inv_rho_cw2 = cl.alpha1 / (cl.r1 * c1) + cl.alpha2 / (cl.r2 * c2);
    let m1 = g1.cp * cl.alpha1 * cl.r1;
    let m2 = g2.cp * cl.alpha2 * cl.r2;
    let rho_cp = m1 + m2;
    let dz = 1.0 / (g1.cp * cl.r1) - 1.0 / (g2.cp * cl.r2);
    let correction = m1 * m2 * dz * dz / (theta * rho_cp);
    let inv_rho_cs2 = 1.0 / (rho * cl.cs2);
    WoodRelation {
        cs_wood2: 1.0 / (rho * inv_rho_cw2),
        inv_rho_cs2,
        inv_rho_cw2,
        correction,
        residual: inv_rho_cs2 - inv_rho_cw2 - correction,
    }
}

/// Three squared sound speeds in ascending theoretical order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedBounds {
    pub cs2: f64,
    /// `γ (γ - 1) c_V θ` with mixture coefficients.
    pub mixture_frozen: f64,
    /// `<(ρ_k/ρ) c_sk²>`.
    pub mass_weighted: f64,
}

impl SpeedBounds {
    /// Smallest relative slack of the two inequalities (negative when violated).
    pub fn min_relative_slack(&self) -> f64 {
        let s1 = (self.mixture_frozen - self.cs2) / self.mixture_frozen;
        let s2 = (self.mass_weighted - self.mixture_frozen) / self.mass_weighted;
        s1.min(s2)
    }
}

pub fn speed_bounds(cl: &Closure, gases: &GasPair) -> SpeedBounds {
    let c = &cl.coeffs;
    let theta = cl.theta;
    let (g1, g2) = (&gases.g1, &gases.g2);
    let rho1 = cl.alpha1 * cl.r1;
    let rho2 = cl.alpha2 * cl.r2;
    let w = rho1 + rho2;
    SpeedBounds {
        cs2: cl.cs2,
        mixture_frozen: c.gamma_mix * c.r_mix * theta,
        mass_weighted: (rho1 * g1.sound_speed2(theta) + rho2 * g2.sound_speed2(theta)) / w,
    }
}

/// Volume fraction of component 1 from its mass fraction at pressure `p`.
pub fn volume_fraction_from_mass(y1: f64, p: f64, gases: &GasPair) -> Result<f64> {
    if !(0.0..=1.0).contains(&y1) {
        return Err(Error::InvalidPrimitive(format!(
            "mass fraction must lie in [0, 1], got {y1}"
        )));
    }
    let den1 = p + gases.g1.p_star;
    let den2 = p + gases.g2.p_star;
    if !(den1 > 0.0) {
        return Err(Error::PoleAtP { p, component: 1 });
    }
    if !(den2 > 0.0) {
        return Err(Error::PoleAtP { p, component: 2 });
    }
    let g = den2 / den1 * (gases.g1.r_gas / gases.g2.r_gas);
    Ok(g * y1 / (g * y1 + 1.0 - y1))
}

/// Conserved node state from pressure, velocity, temperature and volume fraction.
pub fn primitive_to_conserved(p: f64, u: f64, theta: f64, alpha1: f64, gases: &GasPair) -> Result<ConservedState> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::InvalidPrimitive(format!(
            "temperature must be positive, got {theta}"
        )));
    }
    if !(0.0..=1.0).contains(&alpha1) {
        return Err(Error::InvalidPrimitive(format!(
            "volume fraction must lie in [0, 1], got {alpha1}"
        )));
    }
    if !u.is_finite() {
        return Err(Error::InvalidPrimitive(format!("velocity must be finite, got {u}")));
    }
    let (g1, g2) = (&gases.g1, &gases.g2);
    if !(p + g1.p_star > 0.0) || !(p + g2.p_star > 0.0) || !p.is_finite() {
        return Err(Error::InvalidPrimitive(format!(
            "p + p_star must be positive for both components, got p = {p}"
        )));
    }
    let alpha2 = 1.0 - alpha1;
    let rho1 = alpha1 * g1.phase_density(p, theta);
    let rho2 = alpha2 * g2.phase_density(p, theta);
    let rho = rho1 + rho2;
    let rho_eps = (g1.cv * rho1 + g2.cv * rho2) * theta
        + alpha1 * g1.p_star
        + alpha2 * g2.p_star
        + g1.eps0 * rho1
        + g2.eps0 * rho2;
    let mom = rho * u;
    Ok(ConservedState {
        rho1,
        rho2,
        mom,
        etot: 0.5 * mom * u + rho_eps,
    })
}
