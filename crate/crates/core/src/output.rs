//! CSV rendering of mesh states and step diagnostics.

use std::fmt::Write as _;

use crate::scheme::{MeshState, StepDiagnostics};

pub const STATE_HEADER: &str = "x,rho1,rho2,rho,y1,alpha1,alpha2,p,u,theta,cs";

pub const DIAGNOSTICS_HEADER: &str = "step,t,dt,mass1,mass2,momentum,energy,mass_res,kinetic_res,\
internal_res,p_min,p_max,theta_min,theta_max,alpha1_min,alpha1_max,rho1_min,rho2_min,suspect_nodes";

/// One row per main node, full precision.
pub fn state_csv(s: &MeshState) -> String {
    let mut out = String::with_capacity(200 * s.mesh.n_nodes());
    out.push_str(STATE_HEADER);
    out.push('\n');
    for i in 0..s.mesh.n_nodes() {
        let row = [
            s.mesh.node(i),
            s.rho1[i],
            s.rho2[i],
            s.rho(i),
            s.y1(i),
            s.alpha1[i],
            s.alpha2[i],
            s.p[i],
            s.u[i],
            s.theta[i],
            s.cs[i],
        ];
        push_row(&mut out, &row);
    }
    out
}

/// Diagnostics row without trailing newline handling beyond one `\n`.
pub fn diagnostics_row(d: &StepDiagnostics) -> String {
    let mut out = format!("{},", d.step);
    let row = [
        d.t,
        d.dt,
        d.totals.mass1,
        d.totals.mass2,
        d.totals.momentum,
        d.totals.energy,
        d.mass_res,
        d.kinetic_res,
        d.internal_res,
        d.p_min,
        d.p_max,
        d.theta_min,
        d.theta_max,
        d.alpha1_min,
        d.alpha1_max,
        d.rho1_min,
        d.rho2_min,
    ];
    for v in row {
        let _ = write!(out, "{v:.16e},");
    }
    let _ = writeln!(out, "{}", d.suspect_nodes);
    out
}

fn push_row(out: &mut String, row: &[f64]) {
    for (k, v) in row.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v:.16e}");
    }
    out.push('\n');
}
