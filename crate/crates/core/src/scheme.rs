//! Explicit two-level, symmetric three-point QGD and QHD schemes for the
//! 1D mixture equations on a uniform mesh.
//!
//! One step computes all half-node fluxes from the current level, updates the
//! interior nodes in conservation form, fills the boundary and re-closes every
//! node. There are no limiters: a node that cannot be closed aborts the step.

use std::fmt;
use std::str::FromStr;

use crate::eos::{closure_lenient, ConservedState, GasPair};
use crate::error::{Error, Result};
use crate::grid::{HalfField, Mesh, NodeField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularization {
    Qgd,
    Qhd,
}

impl FromStr for Regularization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qgd" => Ok(Self::Qgd),
            "qhd" => Ok(Self::Qhd),
            other => Err(Error::InvalidConfig(format!(
                "regularization must be qgd or qhd, got '{other}'"
            ))),
        }
    }
}

impl fmt::Display for Regularization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Qgd => "qgd",
            Self::Qhd => "qhd",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `φ_0 = φ_1`, `φ_N = φ_{N-1}` for `ρ1, ρ2, u, ρε`.
    Copy,
    /// Node `N` is identified with node `0`.
    Periodic,
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "copy" => Ok(Self::Copy),
            "periodic" => Ok(Self::Periodic),
            other => Err(Error::InvalidConfig(format!(
                "boundary must be copy or periodic, got '{other}'"
            ))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Copy => "copy",
            Self::Periodic => "periodic",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub reg: Regularization,
    /// Factor in `τ = a h / (c_s + i_τ |u|)`.
    pub a: f64,
    /// Courant-type factor of the time step.
    pub beta: f64,
    /// Schmidt number in `ν = a_S [τ][p]`.
    pub a_s: f64,
    /// The reported inverse-Prandtl knob `r`; the heat conductivity uses `1/r`.
    pub prandtl_inv_reported: f64,
    /// Include `|u|` in the denominator of `τ`.
    pub i_tau: bool,
    /// Heat source per node, W/m³. `None` means zero.
    pub q_source: Option<NodeField>,
    pub boundary: Boundary,
    /// Add `ν δu` to the QHD stress (off by default).
    pub qhd_viscosity: bool,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            reg: Regularization::Qgd,
            a: 0.5,
            beta: 0.1,
            a_s: 1.0,
            prandtl_inv_reported: 1.0,
            i_tau: false,
            q_source: None,
            boundary: Boundary::Copy,
            qhd_viscosity: false,
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::InvalidConfig(format!("{what} is out of range: {v}")));
        if !(self.a > 0.0) || !self.a.is_finite() {
            return bad("a", self.a);
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return bad("beta", self.beta);
        }
        if !(self.a_s >= 0.0) || !self.a_s.is_finite() {
            return bad("schmidt", self.a_s);
        }
        if !(self.prandtl_inv_reported > 0.0) || !self.prandtl_inv_reported.is_finite() {
            return bad("prandtl_inv", self.prandtl_inv_reported);
        }
        if let Some(q) = &self.q_source {
            if q.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidConfig("heat source must be finite".into()));
            }
        }
        Ok(())
    }

    /// Heat conductivity factor `a_Pr = 1 / r`.
    pub fn a_pr(&self) -> f64 {
        1.0 / self.prandtl_inv_reported
    }

    fn validate_for(&self, mesh: &Mesh) -> Result<()> {
        self.validate()?;
        if let Some(q) = &self.q_source {
            mesh.check_node(q)?;
        }
        Ok(())
    }
}

/// Conserved unknowns on the main mesh together with the closed quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshState {
    pub mesh: Mesh,
    pub gases: GasPair,
    pub t: f64,
    pub rho1: NodeField,
    pub rho2: NodeField,
    pub mom: NodeField,
    pub etot: NodeField,
    pub u: NodeField,
    pub p: NodeField,
    pub theta: NodeField,
    pub cs: NodeField,
    pub cs2: NodeField,
    pub alpha1: NodeField,
    pub alpha2: NodeField,
    /// `γ c_V` of the mixture.
    pub cp: NodeField,
    pub rho_eps: NodeField,
}

impl MeshState {
    /// Builds a state from conserved fields and closes every node.
    pub fn from_conserved(
        mesh: Mesh,
        gases: GasPair,
        t: f64,
        rho1: NodeField,
        rho2: NodeField,
        mom: NodeField,
        etot: NodeField,
    ) -> Result<Self> {
        for f in [&rho1, &rho2, &mom, &etot] {
            mesh.check_node(f)?;
        }
        let n = mesh.n_nodes();
        let mut st = Self {
            mesh,
            gases,
            t,
            rho1,
            rho2,
            mom,
            etot,
            u: mesh.node_field(0.0),
            p: mesh.node_field(0.0),
            theta: mesh.node_field(0.0),
            cs: mesh.node_field(0.0),
            cs2: mesh.node_field(0.0),
            alpha1: mesh.node_field(0.0),
            alpha2: mesh.node_field(0.0),
            cp: mesh.node_field(0.0),
            rho_eps: mesh.node_field(0.0),
        };
        for i in 0..n {
            st.close_node(i)?;
        }
        Ok(st)
    }

    /// Builds a state from per-node conserved vectors.
    pub fn from_nodes(mesh: Mesh, gases: GasPair, t: f64, nodes: &[ConservedState]) -> Result<Self> {
        if nodes.len() != mesh.n_nodes() {
            return Err(Error::LengthMismatch {
                expected: mesh.n_nodes(),
                got: nodes.len(),
            });
        }
        Self::from_conserved(
            mesh,
            gases,
            t,
            NodeField(nodes.iter().map(|s| s.rho1).collect()),
            NodeField(nodes.iter().map(|s| s.rho2).collect()),
            NodeField(nodes.iter().map(|s| s.mom).collect()),
            NodeField(nodes.iter().map(|s| s.etot).collect()),
        )
    }

    fn close_node(&mut self, i: usize) -> Result<()> {
        let s = self.node(i);
        for (v, name) in [
            (s.rho1, "rho1"),
            (s.rho2, "rho2"),
            (s.mom, "momentum"),
            (s.etot, "total energy"),
        ] {
            if !v.is_finite() {
                return Err(Error::StateBlowup {
                    node: i,
                    time: self.t,
                    quantity: name,
                });
            }
        }
        let cl = closure_lenient(&s, &self.gases).map_err(|e| Error::AdmissibilityLost {
            node: i,
            time: self.t,
            cause: Box::new(e),
        })?;
        self.u[i] = cl.velocity;
        self.p[i] = cl.p;
        self.theta[i] = cl.theta;
        self.cs2[i] = cl.cs2;
        self.cs[i] = cl.cs2.sqrt();
        self.alpha1[i] = cl.alpha1;
        self.alpha2[i] = cl.alpha2;
        self.cp[i] = cl.coeffs.cp_mix;
        self.rho_eps[i] = cl.rho_eps;
        Ok(())
    }

    pub fn node(&self, i: usize) -> ConservedState {
        ConservedState {
            rho1: self.rho1[i],
            rho2: self.rho2[i],
            mom: self.mom[i],
            etot: self.etot[i],
        }
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.rho1[i] + self.rho2[i]
    }

    pub fn y1(&self, i: usize) -> f64 {
        self.rho1[i] / self.rho(i)
    }

    /// Nodes that carry independent values: `0..=N` for copy, `0..N` for periodic.
    pub fn owned_nodes(&self, boundary: Boundary) -> std::ops::Range<usize> {
        match boundary {
            Boundary::Copy => 0..self.mesh.n_nodes(),
            Boundary::Periodic => 0..self.mesh.n_cells(),
        }
    }

    /// `Σ y_i h` over owned nodes for `ρ1, ρ2, ρu, E`.
    pub fn totals(&self, boundary: Boundary) -> Totals {
        let h = self.mesh.h();
        let r = self.owned_nodes(boundary);
        let sum = |f: &NodeField| f[r.clone()].iter().sum::<f64>() * h;
        Totals {
            mass1: sum(&self.rho1),
            mass2: sum(&self.rho2),
            momentum: sum(&self.mom),
            energy: sum(&self.etot),
        }
    }

    /// `Σ |y_i| h` over owned nodes, the magnitude against which totals are compared.
    pub fn abs_totals(&self, boundary: Boundary) -> Totals {
        let h = self.mesh.h();
        let r = self.owned_nodes(boundary);
        let sum = |f: &NodeField| f[r.clone()].iter().map(|v| v.abs()).sum::<f64>() * h;
        Totals {
            mass1: sum(&self.rho1),
            mass2: sum(&self.rho2),
            momentum: sum(&self.mom),
            energy: sum(&self.etot),
        }
    }

    pub fn max_signal_speed(&self) -> f64 {
        self.cs
            .iter()
            .zip(self.u.iter())
            .map(|(c, u)| c + u.abs())
            .fold(0.0, f64::max)
    }

    /// Mirror image `x -> -x`, `u -> -u` on a mesh symmetric about its centre.
    pub fn mirrored(&self) -> Result<Self> {
        let rev = |f: &NodeField| NodeField(f.iter().rev().copied().collect());
        let neg_rev = |f: &NodeField| NodeField(f.iter().rev().map(|v| -v).collect());
        Self::from_conserved(
            self.mesh,
            self.gases,
            self.t,
            rev(&self.rho1),
            rev(&self.rho2),
            neg_rev(&self.mom),
            rev(&self.etot),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Totals {
    pub mass1: f64,
    pub mass2: f64,
    pub momentum: f64,
    pub energy: f64,
}

impl Totals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.mass1, self.mass2, self.momentum, self.energy]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub tau: NodeField,
    pub nu: HalfField,
    pub kappa: HalfField,
}

pub fn coefficients(state: &MeshState, cfg: &SchemeConfig) -> Result<Coefficients> {
    cfg.validate()?;
    let mesh = &state.mesh;
    let tau = NodeField((0..mesh.n_nodes()).map(|i| node_tau(state, cfg, i)).collect());
    let a_pr = cfg.a_pr();
    let mut nu = Vec::with_capacity(mesh.n_cells());
    let mut kappa = Vec::with_capacity(mesh.n_cells());
    for i in 0..mesh.n_cells() {
        let (l, r) = (i, i + 1);
        let t = 0.5 * (tau[l] + tau[r]);
        let p = 0.5 * (state.p[l] + state.p[r]);
        let cp = 0.5 * (state.cp[l] + state.cp[r]);
        nu.push(cfg.a_s * t * p);
        kappa.push(a_pr * t * cp * p);
    }
    Ok(Coefficients {
        tau,
        nu: HalfField(nu),
        kappa: HalfField(kappa),
    })
}

#[inline]
fn node_tau(state: &MeshState, cfg: &SchemeConfig, i: usize) -> f64 {
    let speed = if cfg.i_tau {
        state.cs[i] + state.u[i].abs()
    } else {
        state.cs[i]
    };
    cfg.a * state.mesh.h() / speed
}

/// Half-node quantities shared by the update, the regularizer report and the
/// balance identities.
#[derive(Debug, Clone, Copy, Default)]
struct Half {
    rho1: f64,
    rho2: f64,
    rho: f64,
    u: f64,
    /// `u_- u_+`.
    uu: f64,
    p: f64,
    rho_eps: f64,
    du: f64,
    dp: f64,
    /// `[ρ_k] w_k`.
    m1: f64,
    m2: f64,
    w_hat: f64,
    w: f64,
    pi: f64,
    q: f64,
    /// `[ρ]([u] - w)`.
    j: f64,
    f1: f64,
    f2: f64,
    fm: f64,
    fe: f64,
}

#[inline]
fn half_terms(state: &MeshState, cfg: &SchemeConfig, a_pr: f64, l: usize, r: usize) -> Half {
    let h = state.mesh.h();
    let inv_h = 1.0 / h;
    let s = state;
    let avg = |f: &NodeField| 0.5 * (f[l] + f[r]);
    let dif = |f: &NodeField| (f[r] - f[l]) * inv_h;

    let rho_l = s.rho1[l] + s.rho2[l];
    let rho_r = s.rho1[r] + s.rho2[r];
    let rho1 = avg(&s.rho1);
    let rho2 = avg(&s.rho2);
    let rho = 0.5 * (rho_l + rho_r);
    let (ul, ur) = (s.u[l], s.u[r]);
    let u = 0.5 * (ul + ur);
    let p = avg(&s.p);
    let rho_eps = avg(&s.rho_eps);
    let du = (ur - ul) * inv_h;
    let dp = dif(&s.p);
    let dtheta = dif(&s.theta);
    let tau = 0.5 * (node_tau(s, cfg, l) + node_tau(s, cfg, r));
    let cp = avg(&s.cp);
    let nu = cfg.a_s * tau * p;
    let kappa = a_pr * tau * cp * p;
    let qs = cfg.q_source.as_ref().map_or(0.0, |q| 0.5 * (q[l] + q[r]));

    let w_hat = tau / rho * (rho * u * du + dp);
    let (m1, m2, pi, q);
    match cfg.reg {
        Regularization::Qgd => {
            let d1 = (s.rho1[r] * ur - s.rho1[l] * ul) * inv_h;
            let d2 = (s.rho2[r] * ur - s.rho2[l] * ul) * inv_h;
            m1 = tau * u * d1 + rho1 * w_hat;
            m2 = tau * u * d2 + rho2 * w_hat;
            let rho_cs2 = 0.5 * (rho_l * s.cs2[l] + rho_r * s.cs2[r]);
            let cs2 = avg(&s.cs2);
            let theta = avg(&s.theta);
            pi = nu * du + u * rho * w_hat + tau * (u * dp + rho_cs2 * du - cs2 / (cp * theta) * qs);
            let drho = (rho_r - rho_l) * inv_h;
            let drho_eps = dif(&s.rho_eps);
            let minus_q = kappa * dtheta + tau * ((drho_eps - (rho_eps + p) / rho * drho) * u * u - qs * u);
            q = -minus_q;
        }
        Regularization::Qhd => {
            m1 = rho1 * w_hat;
            m2 = rho2 * w_hat;
            let visc = if cfg.qhd_viscosity { nu * du } else { 0.0 };
            pi = visc + u * rho * w_hat;
            q = -kappa * dtheta;
        }
    }
    let f1 = rho1 * u - m1;
    let f2 = rho2 * u - m2;
    let j = f1 + f2;
    let drift = j / rho;
    let w = u - drift;
    let fm = j * u + p - pi;
    let fe = (0.5 * rho * ul * ur + rho_eps + p) * drift - 0.25 * h * h * dp * du + q - pi * u;
    Half {
        rho1,
        rho2,
        rho,
        u,
        uu: ul * ur,
        p,
        rho_eps,
        du,
        dp,
        m1,
        m2,
        w_hat,
        w,
        pi,
        q,
        j,
        f1,
        f2,
        fm,
        fe,
    }
}

/// Right neighbour index of half node `i`, honouring the periodic identification.
#[inline]
fn right_of(i: usize, n_cells: usize, boundary: Boundary) -> usize {
    if boundary == Boundary::Periodic && i + 1 == n_cells {
        0
    } else {
        i + 1
    }
}

fn all_half_terms(state: &MeshState, cfg: &SchemeConfig) -> Vec<Half> {
    let n = state.mesh.n_cells();
    let a_pr = cfg.a_pr();
    (0..n)
        .map(|i| half_terms(state, cfg, a_pr, i, right_of(i, n, cfg.boundary)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regularizers {
    pub w1: HalfField,
    pub w2: HalfField,
    pub w: HalfField,
    pub w_hat: HalfField,
    pub pi: HalfField,
    /// Heat flux `q` (the scheme adds `+q` to the energy flux).
    pub q: HalfField,
}

pub fn regularizers(state: &MeshState, cfg: &SchemeConfig) -> Result<Regularizers> {
    cfg.validate_for(&state.mesh)?;
    let halves = all_half_terms(state, cfg);
    let n = halves.len();
    let mut out = Regularizers {
        w1: HalfField(Vec::with_capacity(n)),
        w2: HalfField(Vec::with_capacity(n)),
        w: HalfField(Vec::with_capacity(n)),
        w_hat: HalfField(Vec::with_capacity(n)),
        pi: HalfField(Vec::with_capacity(n)),
        q: HalfField(Vec::with_capacity(n)),
    };
    for (i, hv) in halves.iter().enumerate() {
        let wk = |m: f64, rk: f64, k: usize| -> Result<f64> {
            match cfg.reg {
                Regularization::Qhd => Ok(hv.w_hat),
                Regularization::Qgd if rk == 0.0 => Err(Error::ZeroAveragedDensity {
                    component: k,
                    half_node: i,
                }),
                Regularization::Qgd => Ok(m / rk),
            }
        };
        out.w1.0.push(wk(hv.m1, hv.rho1, 1)?);
        out.w2.0.push(wk(hv.m2, hv.rho2, 2)?);
        out.w.0.push(hv.w);
        out.w_hat.0.push(hv.w_hat);
        out.pi.0.push(hv.pi);
        out.q.0.push(hv.q);
    }
    Ok(out)
}

/// `β h / max_i (c_s + |u|)`, the unclipped step.
pub fn time_step(state: &MeshState, cfg: &SchemeConfig) -> f64 {
    cfg.beta * state.mesh.h() / state.max_signal_speed()
}

/// Advances one step of length `dt`.
pub fn step(state: &MeshState, cfg: &SchemeConfig, dt: f64) -> Result<MeshState> {
    cfg.validate_for(&state.mesh)?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidConfig(format!("time step must be positive, got {dt}")));
    }
    let mesh = state.mesh;
    let n = mesh.n_cells();
    let halves = all_half_terms(state, cfg);
    let r = dt / mesh.h();

    let mut rho1 = state.rho1.clone();
    let mut rho2 = state.rho2.clone();
    let mut mom = state.mom.clone();
    let mut etot = state.etot.clone();
    let (first, last) = match cfg.boundary {
        Boundary::Copy => (1, n - 1),
        Boundary::Periodic => (0, n - 1),
    };
    for i in first..=last {
        let fl = &halves[if i == 0 { n - 1 } else { i - 1 }];
        let fr = &halves[i];
        rho1[i] -= r * (fr.f1 - fl.f1);
        rho2[i] -= r * (fr.f2 - fl.f2);
        mom[i] -= r * (fr.fm - fl.fm);
        etot[i] -= r * (fr.fe - fl.fe);
        if let Some(q) = &cfg.q_source {
            let ql = 0.5 * (q[if i == 0 { n - 1 } else { i - 1 }] + q[i]);
            let qr = 0.5 * (q[i] + q[i + 1]);
            etot[i] += dt * 0.5 * (ql + qr);
        }
    }
    match cfg.boundary {
        Boundary::Copy => {
            for (b, src) in [(0, 1), (n, n - 1)] {
                let rho_src = rho1[src] + rho2[src];
                let u = mom[src] / rho_src;
                let rho_eps = etot[src] - 0.5 * mom[src] * u;
                rho1[b] = rho1[src];
                rho2[b] = rho2[src];
                let rho_b = rho1[b] + rho2[b];
                mom[b] = rho_b * u;
                etot[b] = 0.5 * rho_b * u * u + rho_eps;
            }
        }
        Boundary::Periodic => {
            rho1[n] = rho1[0];
            rho2[n] = rho2[0];
            mom[n] = mom[0];
            etot[n] = etot[0];
        }
    }
    MeshState::from_conserved(mesh, state.gases, state.t + dt, rho1, rho2, mom, etot)
}

/// Per-node residuals of the discrete mass, kinetic-energy and internal-energy
/// balances between two consecutive levels, with matching magnitude scales.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResiduals {
    pub mass: NodeField,
    pub kinetic: NodeField,
    pub internal: NodeField,
    pub mass_scale: NodeField,
    pub kinetic_scale: NodeField,
    pub internal_scale: NodeField,
}

impl IdentityResiduals {
    /// Largest `|residual| / scale` over nodes with a non-zero scale, for
    /// (mass, kinetic, internal).
    pub fn max_relative(&self) -> (f64, f64, f64) {
        let m = |r: &NodeField, s: &NodeField| {
            r.iter()
                .zip(s.iter())
                .filter(|(_, &s)| s > 0.0)
                .map(|(r, s)| r.abs() / s)
                .fold(0.0, f64::max)
        };
        (
            m(&self.mass, &self.mass_scale),
            m(&self.kinetic, &self.kinetic_scale),
            m(&self.internal, &self.internal_scale),
        )
    }
}

/// Residuals of the mixture mass, kinetic and internal energy balances at
/// interior nodes `1..N-1`; boundary slots are zero.
pub fn energy_identity_residuals(
    state: &MeshState,
    next: &MeshState,
    cfg: &SchemeConfig,
    dt: f64,
) -> Result<IdentityResiduals> {
    cfg.validate_for(&state.mesh)?;
    if next.mesh != state.mesh {
        return Err(Error::InvalidConfig("levels live on different meshes".into()));
    }
    let mesh = state.mesh;
    let n = mesh.n_cells();
    let h = mesh.h();
    let halves = all_half_terms(state, cfg);
    let zeros = || mesh.node_field(0.0);
    let mut res = IdentityResiduals {
        mass: zeros(),
        kinetic: zeros(),
        internal: zeros(),
        mass_scale: zeros(),
        kinetic_scale: zeros(),
        internal_scale: zeros(),
    };
    for i in 1..n {
        let (a, b) = (&halves[i - 1], &halves[i]);
        let dstar = |f: fn(&Half) -> f64| (f(b) - f(a)) / h;
        let dstar_abs = |f: fn(&Half) -> f64| (f(b).abs() + f(a).abs()) / h;
        let rho = state.rho(i);
        let rho_hat = next.rho(i);
        let (u, u_hat) = (state.u[i], next.u[i]);
        let dtu = (u_hat - u) / dt;
        let p = state.p[i];
        let qs = cfg
            .q_source
            .as_ref()
            .map_or(0.0, |q| 0.25 * (q[i - 1] + 2.0 * q[i] + q[i + 1]));

        let t_rho = (rho_hat - rho) / dt;
        res.mass[i] = t_rho + dstar(|x| x.j);
        res.mass_scale[i] = (rho_hat.abs() + rho.abs()) / dt + dstar_abs(|x| x.j);

        let k_hat = rho_hat * u_hat * u_hat;
        let k = rho * u * u;
        let t_kin = 0.5 * (k_hat - k) / dt;
        let t_acc = 0.5 * dt * rho_hat * dtu * dtu;
        let t_conv = 0.5 * dstar(|x| x.j * x.uu);
        let t_p = dstar(|x| x.p) * u;
        let t_pi = dstar(|x| x.pi) * u;
        res.kinetic[i] = t_kin - t_acc + t_conv + t_p - t_pi;
        res.kinetic_scale[i] = 0.5 * (k_hat.abs() + k.abs()) / dt
            + t_acc.abs()
            + 0.5 * dstar_abs(|x| x.j * x.uu)
            + dstar_abs(|x| x.p) * u.abs()
            + dstar_abs(|x| x.pi) * u.abs();

        let (e_hat, e) = (next.rho_eps[i], state.rho_eps[i]);
        let t_int = (e_hat - e) / dt;
        let t_jeps = dstar(|x| x.j * x.rho_eps / x.rho);
        let t_q = dstar(|x| x.q);
        let t_pidu = 0.5 * (a.pi * a.du + b.pi * b.du);
        let t_work = p * dstar(|x| x.u - x.w);
        let t_wdp = 0.5 * (a.w * a.dp + b.w * b.dp);
        res.internal[i] = t_int + t_acc + t_jeps + t_q - t_pidu + t_work - t_wdp - qs;
        res.internal_scale[i] = (e_hat.abs() + e.abs()) / dt
            + t_acc.abs()
            + dstar_abs(|x| x.j * x.rho_eps / x.rho)
            + dstar_abs(|x| x.q)
            + 0.5 * ((a.pi * a.du).abs() + (b.pi * b.du).abs())
            + p.abs() * dstar_abs(|x| x.u - x.w)
            + 0.5 * ((a.w * a.dp).abs() + (b.w * b.dp).abs())
            + qs.abs();
    }
    Ok(res)
}

/// Summary of one recorded step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDiagnostics {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub totals: Totals,
    /// Largest relative residuals of the mass, kinetic and internal balances.
    pub mass_res: f64,
    pub kinetic_res: f64,
    pub internal_res: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub alpha1_min: f64,
    pub alpha1_max: f64,
    pub rho1_min: f64,
    pub rho2_min: f64,
    /// Nodes whose closure residual exceeds the warning threshold.
    pub suspect_nodes: usize,
}

fn min_max(f: &NodeField) -> (f64, f64) {
    f.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    })
}

fn diagnose(prev: &MeshState, next: &MeshState, cfg: &SchemeConfig, dt: f64, step: usize) -> Result<StepDiagnostics> {
    let ids = energy_identity_residuals(prev, next, cfg, dt)?;
    let (mass_res, kinetic_res, internal_res) = ids.max_relative();
    let (p_min, p_max) = min_max(&next.p);
    let (theta_min, theta_max) = min_max(&next.theta);
    let (alpha1_min, alpha1_max) = min_max(&next.alpha1);
    let (rho1_min, _) = min_max(&next.rho1);
    let (rho2_min, _) = min_max(&next.rho2);
    let suspect_nodes = (0..next.mesh.n_nodes())
        .filter(|&i| {
            closure_lenient(&next.node(i), &next.gases)
                .map(|c| c.is_suspect())
                .unwrap_or(true)
        })
        .count();
    Ok(StepDiagnostics {
        step,
        t: next.t,
        dt,
        totals: next.totals(cfg.boundary),
        mass_res,
        kinetic_res,
        internal_res,
        p_min,
        p_max,
        theta_min,
        theta_max,
        alpha1_min,
        alpha1_max,
        rho1_min,
        rho2_min,
        suspect_nodes,
    })
}

/// Running minima over every state of a run, including the initial one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes {
    pub rho1_min: f64,
    pub rho2_min: f64,
    pub theta_min: f64,
    /// Smallest `p + p_{*k}` over both components.
    pub shifted_p_min: f64,
}

impl Extremes {
    fn of(state: &MeshState) -> Self {
        let (rho1_min, _) = min_max(&state.rho1);
        let (rho2_min, _) = min_max(&state.rho2);
        let (theta_min, _) = min_max(&state.theta);
        let (p_min, _) = min_max(&state.p);
        let ps = state.gases.g1.p_star().min(state.gases.g2.p_star());
        Self {
            rho1_min,
            rho2_min,
            theta_min,
            shifted_p_min: p_min + ps,
        }
    }

    fn merge(self, o: Self) -> Self {
        Self {
            rho1_min: self.rho1_min.min(o.rho1_min),
            rho2_min: self.rho2_min.min(o.rho2_min),
            theta_min: self.theta_min.min(o.theta_min),
            shifted_p_min: self.shifted_p_min.min(o.shifted_p_min),
        }
    }

    pub fn partial_density_min(&self) -> f64 {
        self.rho1_min.min(self.rho2_min)
    }

    /// `ρ_k ≥ 0`, `θ > 0` and `p + p_{*k} > 0` held throughout.
    pub fn admissible(&self) -> bool {
        self.partial_density_min() >= 0.0 && self.theta_min > 0.0 && self.shifted_p_min > 0.0
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_state: MeshState,
    pub history: Vec<StepDiagnostics>,
    pub steps: usize,
    pub extremes: Extremes,
}

/// Advances `initial` to `t_fin`, recording diagnostics every `stride` steps
/// and after the last step (`stride == 0` records only the last step).
pub fn run(initial: &MeshState, cfg: &SchemeConfig, t_fin: f64, stride: usize) -> Result<RunResult> {
    run_with(initial, cfg, t_fin, stride, |_, _| Ok(()))
}

/// Like [`run`], calling `observe` with each recorded state and its diagnostics.
pub fn run_with<F>(
    initial: &MeshState,
    cfg: &SchemeConfig,
    t_fin: f64,
    stride: usize,
    mut observe: F,
) -> Result<RunResult>
where
    F: FnMut(&MeshState, &StepDiagnostics) -> Result<()>,
{
    cfg.validate_for(&initial.mesh)?;
    if !(t_fin >= 0.0) || !t_fin.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "final time must be non-negative, got {t_fin}"
        )));
    }
    let mut state = initial.clone();
    state.t = 0.0;
    let mut history = Vec::new();
    let mut steps = 0;
    let mut extremes = Extremes::of(&state);
    while state.t < t_fin {
        let candidate = time_step(&state, cfg);
        let remaining = t_fin - state.t;
        let is_last = candidate >= remaining;
        let dt = if is_last { remaining } else { candidate };
        let mut next = step(&state, cfg, dt)?;
        if is_last {
            next.t = t_fin;
        }
        steps += 1;
        extremes = extremes.merge(Extremes::of(&next));
        if is_last || (stride > 0 && steps % stride == 0) {
            let d = diagnose(&state, &next, cfg, dt, steps)?;
            observe(&next, &d)?;
            history.push(d);
        }
        state = next;
    }
    Ok(RunResult {
        final_state: state,
        history,
        steps,
        extremes,
    })
}
