//! Shared test oracles: random admissible states, a bisection root finder for
//! the rational pressure equation and an independent perfect-gas QGD step.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgmix::cases::{make_case, CaseId};
use sgmix::eos::{closure, primitive_to_conserved, Closure, ConservedState, GasPair};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gas pairs of all benchmark cases.
pub fn benchmark_pairs() -> Vec<(CaseId, GasPair)> {
    CaseId::ALL.iter().map(|&id| (id, make_case(id).gases)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub case: CaseId,
    pub gases: GasPair,
    pub p: f64,
    pub u: f64,
    pub theta: f64,
    pub alpha1: f64,
    pub state: ConservedState,
    pub closure: Closure,
}

/// `α1 ∈ [1e-6, 1 - 1e-6]`, `p ∈ [1e4, 1e10]` log-uniform, `θ ∈ [250, 1500]`,
/// gas pair cycling through the benchmark cases.
pub fn random_sample(r: &mut ChaCha8Rng, index: usize) -> Sample {
    let pairs = benchmark_pairs();
    let (case, gases) = pairs[index % pairs.len()];
    loop {
        let alpha1 = r.random_range(1e-6..1.0 - 1e-6);
        let p = 10f64.powf(r.random_range(4.0..10.0));
        let theta = r.random_range(250.0..1500.0);
        let u = r.random_range(-300.0..300.0);
        let Ok(state) = primitive_to_conserved(p, u, theta, alpha1, &gases) else {
            continue;
        };
        let Ok(cl) = closure(&state, &gases) else {
            continue;
        };
        return Sample {
            case,
            gases,
            p,
            u,
            theta,
            alpha1,
            state,
            closure: cl,
        };
    }
}

pub fn random_samples(seed: u64, count: usize) -> Vec<Sample> {
    let mut r = rng(seed);
    (0..count).map(|i| random_sample(&mut r, i)).collect()
}

/// `Σ a_k / (p + p*k) - 1` built from the gas constants alone.
pub fn rational(p: f64, rho1: f64, rho2: f64, rho_eps: f64, gases: &GasPair) -> f64 {
    let (g1, g2) = (&gases.g1, &gases.g2);
    let rho_cv = rho1 * g1.cv() + rho2 * g2.cv();
    let s1 = rho1 * (g1.gamma() - 1.0) * g1.cv() / rho_cv;
    let s2 = rho2 * (g2.gamma() - 1.0) * g2.cv() / rho_cv;
    let rho_e = rho_eps - (rho1 * g1.eps0() + rho2 * g2.eps0());
    s1 * (rho_e - g1.p_star()) / (p + g1.p_star()) + s2 * (rho_e - g2.p_star()) / (p + g2.p_star()) - 1.0
}

/// Root of the rational equation on `p > -min p*k` by bisection.
pub fn bisect_pressure(rho1: f64, rho2: f64, rho_eps: f64, gases: &GasPair) -> f64 {
    let f = |p: f64| rational(p, rho1, rho2, rho_eps, gases);
    let mut lo = -gases.g1.p_star().min(gases.g2.p_star());
    let mut hi = lo.abs().max(1.0);
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Conserved fields on `n + 1` nodes.
#[derive(Debug, Clone)]
pub struct PlainFields {
    pub rho1: Vec<f64>,
    pub rho2: Vec<f64>,
    pub mom: Vec<f64>,
    pub etot: Vec<f64>,
}

/// Parameters of the reference perfect-gas step.
#[derive(Debug, Clone, Copy)]
pub struct PlainParams {
    pub gamma: [f64; 2],
    pub cv: [f64; 2],
    pub a: f64,
    pub a_s: f64,
    pub a_pr: f64,
    pub h: f64,
}

/// One QGD step for a mixture of two perfect polytropic gases with copy
/// boundaries, written directly from the homogeneous-mixture formulas.
pub fn perfect_gas_qgd_step(f: &PlainFields, prm: &PlainParams, dt: f64) -> PlainFields {
    let n = f.rho1.len() - 1;
    let h = prm.h;
    let r_gas = [(prm.gamma[0] - 1.0) * prm.cv[0], (prm.gamma[1] - 1.0) * prm.cv[1]];
    let nodes = n + 1;
    let (mut rho, mut u, mut p, mut theta, mut cs2, mut cp, mut reps, mut tau) = (
        vec![0.0; nodes],
        vec![0.0; nodes],
        vec![0.0; nodes],
        vec![0.0; nodes],
        vec![0.0; nodes],
        vec![0.0; nodes],
        vec![0.0; nodes],
        vec![0.0; nodes],
    );
    for i in 0..nodes {
        rho[i] = f.rho1[i] + f.rho2[i];
        u[i] = f.mom[i] / rho[i];
        reps[i] = f.etot[i] - 0.5 * rho[i] * u[i] * u[i];
        let cv = (f.rho1[i] * prm.cv[0] + f.rho2[i] * prm.cv[1]) / rho[i];
        let rg = (f.rho1[i] * r_gas[0] + f.rho2[i] * r_gas[1]) / rho[i];
        let gamma = 1.0 + rg / cv;
        theta[i] = reps[i] / (rho[i] * cv);
        p[i] = rho[i] * rg * theta[i];
        cs2[i] = gamma * p[i] / rho[i];
        cp[i] = gamma * cv;
        tau[i] = prm.a * h / cs2[i].sqrt();
    }
    let av = |v: &[f64], i: usize| 0.5 * (v[i] + v[i + 1]);
    let df = |v: &[f64], i: usize| (v[i + 1] - v[i]) / h;
    let mut fl = vec![[0.0; 4]; n];
    for i in 0..n {
        let t = av(&tau, i);
        let rh = av(&rho, i);
        let uh = av(&u, i);
        let ph = av(&p, i);
        let nu = prm.a_s * t * ph;
        let kappa = prm.a_pr * t * av(&cp, i) * ph;
        let w_hat = t / rh * (rh * uh * df(&u, i) + df(&p, i));
        let ru1: Vec<f64> = [i, i + 1].iter().map(|&k| f.rho1[k] * u[k]).collect();
        let ru2: Vec<f64> = [i, i + 1].iter().map(|&k| f.rho2[k] * u[k]).collect();
        let flux1 = av(&f.rho1, i) * uh - t * uh * (ru1[1] - ru1[0]) / h - av(&f.rho1, i) * w_hat;
        let flux2 = av(&f.rho2, i) * uh - t * uh * (ru2[1] - ru2[0]) / h - av(&f.rho2, i) * w_hat;
        let w = uh - (flux1 + flux2) / rh;
        let rcs2 = 0.5 * (rho[i] * cs2[i] + rho[i + 1] * cs2[i + 1]);
        let pi = nu * df(&u, i) + uh * rh * w_hat + t * (uh * df(&p, i) + rcs2 * df(&u, i));
        let minus_q = kappa * df(&theta, i) + t * (df(&reps, i) - (av(&reps, i) + ph) / rh * df(&rho, i)) * uh * uh;
        let fm = rh * (uh - w) * uh + ph - pi;
        let fe = (0.5 * rh * u[i] * u[i + 1] + av(&reps, i) + ph) * (uh - w)
            - 0.25 * h * h * df(&p, i) * df(&u, i)
            - minus_q
            - pi * uh;
        fl[i] = [flux1, flux2, fm, fe];
    }
    let mut out = f.clone();
    for i in 1..n {
        let d = |k: usize| dt / h * (fl[i][k] - fl[i - 1][k]);
        out.rho1[i] -= d(0);
        out.rho2[i] -= d(1);
        out.mom[i] -= d(2);
        out.etot[i] -= d(3);
    }
    for (b, s) in [(0, 1), (n, n - 1)] {
        let rs = out.rho1[s] + out.rho2[s];
        let us = out.mom[s] / rs;
        let es = out.etot[s] - 0.5 * rs * us * us;
        out.rho1[b] = out.rho1[s];
        out.rho2[b] = out.rho2[s];
        out.mom[b] = rs * us;
        out.etot[b] = 0.5 * rs * us * us + es;
    }
    out
}

/// Worst errors of the closure identities over a set of samples.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosureSuite {
    pub count: usize,
    /// `|rational(p+)|`.
    pub rational_residual: f64,
    /// `|p+ + p- - b| / (|p+| + |p-|)`.
    pub root_sum: f64,
    /// `|p+ p- + c| / |p+ p-|`.
    pub root_product: f64,
    /// Disagreement of the three discriminant forms, each relative to the
    /// magnitude of its own terms.
    pub discriminant_forms: f64,
    /// The same disagreement relative to `d` itself.
    pub discriminant_vs_d: f64,
    pub sound_speed_forms: f64,
    pub wood_residual: f64,
    /// Largest `(c_s² - c_sW²) / c_sW²` (must be ≤ 0 up to round-off).
    pub wood_excess: f64,
    /// Smallest slack of the speed ordering.
    pub ordering_slack: f64,
    pub explicit_roots: f64,
    pub temperature_forms: f64,
}

pub fn closure_suite(samples: &[Sample]) -> ClosureSuite {
    use sgmix::eos::{
        discriminant_delta_form, discriminant_delta_scale, explicit_roots, pressure_differential, rational_residual,
        speed_bounds, speed_of_sound_alt, temperature_from_energy, wood_relation,
    };
    let mut s = ClosureSuite {
        count: samples.len(),
        ordering_slack: f64::INFINITY,
        wood_excess: f64::NEG_INFINITY,
        ..Default::default()
    };
    for smp in samples {
        let cl = &smp.closure;
        let g = &smp.gases;
        let st = &smp.state;
        let sol = &cl.pressure;
        let (pp, pm) = (sol.p_plus, sol.p_minus);
        let res = rational_residual(pp, st.rho1, st.rho2, cl.rho_eps, g).unwrap();
        s.rational_residual = s.rational_residual.max(res.abs());
        s.root_sum = s.root_sum.max((pp + pm - sol.b).abs() / (pp.abs() + pm.abs()));
        s.root_product = s.root_product.max((pp * pm + sol.c).abs() / (pp * pm).abs());
        let d_plain = sol.b * sol.b + 4.0 * sol.c;
        let d_delta = discriminant_delta_form(cl, g);
        let delta_scale = discriminant_delta_scale(cl, g);
        let d_scale = sol.b * sol.b + 4.0 * sol.c.abs();
        s.discriminant_forms = s
            .discriminant_forms
            .max((sol.d - d_plain).abs() / d_scale)
            .max((sol.d - d_delta).abs() / delta_scale.max(d_scale));
        s.discriminant_vs_d = s
            .discriminant_vs_d
            .max((sol.d - d_plain).abs() / sol.d)
            .max((sol.d - d_delta).abs() / sol.d);
        let alt = speed_of_sound_alt(pp, st.rho1, st.rho2, cl.rho_eps, g).unwrap();
        let abg = pressure_differential(st.rho1, st.rho2, cl.rho_eps, g)
            .unwrap()
            .abgrall_cs2;
        s.sound_speed_forms = s.sound_speed_forms.max(rel(cl.cs2, alt)).max(rel(cl.cs2, abg));
        let w = wood_relation(cl, g);
        let w_scale = w.inv_rho_cs2.abs() + w.inv_rho_cw2.abs() + w.correction.abs();
        s.wood_residual = s.wood_residual.max(w.residual.abs() / w_scale);
        s.wood_excess = s.wood_excess.max((cl.cs2 - w.cs_wood2) / w.cs_wood2);
        s.ordering_slack = s.ordering_slack.min(speed_bounds(cl, g).min_relative_slack());
        let (ep, em) = explicit_roots(cl, g);
        let r_scale = pp.abs() + pm.abs();
        s.explicit_roots = s
            .explicit_roots
            .max((ep - pp).abs() / r_scale)
            .max((em - pm).abs() / r_scale);
        s.temperature_forms = s.temperature_forms.max(rel(temperature_from_energy(cl), cl.theta));
    }
    s
}

/// Largest relative deviation of `(P1, P2, P)` from central differences of
/// `p+`. Each derivative is Richardson-extrapolated on a ladder of steps and
/// the estimate taken where three consecutive rungs agree best, since near-stiff
/// states vary on a scale much shorter than the variable itself.
pub fn gradient_error(smp: &Sample) -> f64 {
    use sgmix::eos::{pressure_differential, pressure_quadratic};
    let st = &smp.state;
    let g = &smp.gases;
    let re = smp.closure.rho_eps;
    let an = pressure_differential(st.rho1, st.rho2, re, g).unwrap();
    let p_of = |x: [f64; 3]| pressure_quadratic(x[0], x[1], x[2], g).map_or(f64::NAN, |s| s.p_plus);
    let x0 = [st.rho1, st.rho2, re];
    let mut worst: f64 = 0.0;
    for (k, exact) in [an.p1, an.p2, an.p].into_iter().enumerate() {
        let central = |e: f64| {
            let (mut a, mut b) = (x0, x0);
            a[k] += e;
            b[k] -= e;
            (p_of(a) - p_of(b)) / (2.0 * e)
        };
        let ladder: Vec<f64> = (0..12)
            .map(|j| {
                let e = 1e-2 * x0[k].abs() * 0.25f64.powi(j);
                (4.0 * central(0.5 * e) - central(e)) / 3.0
            })
            .collect();
        let best = ladder
            .windows(3)
            .filter(|w| w.iter().all(|v| v.is_finite()))
            .map(|w| ((w[0] - w[1]).abs().max((w[1] - w[2]).abs()), w[1]))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, v)| v)
            .unwrap();
        worst = worst.max(rel(exact, best));
    }
    worst
}

/// Largest `|p_bisect - p+| / max(1, |p+|)`.
pub fn bisection_error(samples: &[Sample]) -> f64 {
    samples
        .iter()
        .map(|s| {
            let pb = bisect_pressure(s.state.rho1, s.state.rho2, s.closure.rho_eps, &s.gases);
            (pb - s.closure.p).abs() / s.closure.p.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Largest relative deviation, per conserved field, between one library QGD
/// step and [`perfect_gas_qgd_step`] on a random perfect-gas mesh state.
pub fn perfect_gas_deviation(seed: u64) -> f64 {
    use sgmix::eos::GasParams;
    use sgmix::grid::{Mesh, NodeField};
    use sgmix::scheme::{step, time_step, MeshState, SchemeConfig};

    let mut r = rng(seed);
    let gamma = [r.random_range(1.05..1.7), r.random_range(1.05..3.0)];
    let cv = [r.random_range(300.0..3000.0), r.random_range(300.0..3000.0)];
    let gases = GasPair::new(
        GasParams::new(gamma[0], cv[0], 0.0, 0.0).unwrap(),
        GasParams::new(gamma[1], cv[1], 0.0, 0.0).unwrap(),
    );
    let n = 24;
    let mesh = Mesh::new(-1.0, 2.0, n).unwrap();
    let mut f = PlainFields {
        rho1: vec![0.0; n + 1],
        rho2: vec![0.0; n + 1],
        mom: vec![0.0; n + 1],
        etot: vec![0.0; n + 1],
    };
    for i in 0..=n {
        let rho1 = r.random_range(0.05..5.0);
        let rho2 = r.random_range(0.05..5.0);
        let u = r.random_range(-80.0..80.0);
        let theta = r.random_range(250.0..1500.0);
        let rho_eps = theta * (rho1 * cv[0] + rho2 * cv[1]);
        f.rho1[i] = rho1;
        f.rho2[i] = rho2;
        f.mom[i] = (rho1 + rho2) * u;
        f.etot[i] = 0.5 * (rho1 + rho2) * u * u + rho_eps;
    }
    let cfg = SchemeConfig {
        a: r.random_range(0.2..2.0),
        beta: 0.1,
        a_s: r.random_range(0.0..2.0),
        prandtl_inv_reported: r.random_range(0.1..1.5),
        ..SchemeConfig::default()
    };
    let state = MeshState::from_conserved(
        mesh,
        gases,
        0.0,
        NodeField(f.rho1.clone()),
        NodeField(f.rho2.clone()),
        NodeField(f.mom.clone()),
        NodeField(f.etot.clone()),
    )
    .unwrap();
    let dt = time_step(&state, &cfg);
    let lib = step(&state, &cfg, dt).unwrap();
    let prm = PlainParams {
        gamma,
        cv,
        a: cfg.a,
        a_s: cfg.a_s,
        a_pr: 1.0 / cfg.prandtl_inv_reported,
        h: mesh.h(),
    };
    let plain = perfect_gas_qgd_step(&f, &prm, dt);
    let dev = |a: &[f64], b: &[f64]| {
        let scale = b.iter().map(|v| v.abs()).fold(0.0, f64::max);
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
    };
    dev(&lib.rho1, &plain.rho1)
        .max(dev(&lib.rho2, &plain.rho2))
        .max(dev(&lib.mom, &plain.mom))
        .max(dev(&lib.etot, &plain.etot))
}

/// Largest relative change of the four conserved totals over `steps` steps
/// of a smooth random periodic state.
pub fn periodic_totals_drift(case: CaseId, n: usize, steps: usize, seed: u64) -> f64 {
    use sgmix::scheme::{step, time_step, Boundary, MeshState};
    use std::f64::consts::PI;

    let spec = make_case(case);
    let mesh = spec.mesh(n).unwrap();
    let mut r = rng(seed);
    let (phase, amp) = (r.random_range(0.0..2.0 * PI), r.random_range(0.05..0.2));
    let base = spec.left;
    let a1 = spec.alpha1_for(true).unwrap().clamp(0.05, 0.9);
    let nodes: Vec<_> = (0..=n)
        .map(|i| {
            let s = (2.0 * PI * (i % n) as f64 / n as f64 + phase).sin();
            primitive_to_conserved(
                base.p * (1.0 + amp * s),
                30.0 * s,
                base.theta * (1.0 - 0.5 * amp * s),
                a1 * (1.0 + 0.5 * amp * s),
                &spec.gases,
            )
            .unwrap()
        })
        .collect();
    let mut cfg = spec.scheme_config();
    cfg.boundary = Boundary::Periodic;
    let mut st = MeshState::from_nodes(mesh, spec.gases, 0.0, &nodes).unwrap();
    let t0 = st.totals(Boundary::Periodic).as_array();
    let scale = st.abs_totals(Boundary::Periodic).as_array();
    for _ in 0..steps {
        let dt = time_step(&st, &cfg);
        st = step(&st, &cfg, dt).unwrap();
    }
    let t1 = st.totals(Boundary::Periodic).as_array();
    (0..4).map(|k| (t1[k] - t0[k]).abs() / scale[k]).fold(0.0, f64::max)
}
