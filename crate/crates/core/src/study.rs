//! Mesh-refinement study: scaled L¹ errors against a fine-mesh reference
//! and practical orders `log₂(e_{N/2} / e_N)`.

use std::fmt::Write as _;

use crate::cases::{build_initial, CaseSpec};
use crate::error::{Error, Result};
use crate::scheme::{run, MeshState, SchemeConfig};

/// Fields compared in the study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyField {
    Rho,
    Y1,
    Alpha1,
    P,
    U,
    Theta,
}

impl StudyField {
    pub const ALL: [StudyField; 6] = [
        StudyField::Rho,
        StudyField::Y1,
        StudyField::Alpha1,
        StudyField::P,
        StudyField::U,
        StudyField::Theta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StudyField::Rho => "rho",
            StudyField::Y1 => "y1",
            StudyField::Alpha1 => "alpha1",
            StudyField::P => "p",
            StudyField::U => "u",
            StudyField::Theta => "theta",
        }
    }

    /// Divisor used in the text table.
    pub fn table_scale(self) -> f64 {
        match self {
            StudyField::Rho | StudyField::Theta => 1e2,
            StudyField::P => 1e7,
            StudyField::U => 1e1,
            StudyField::Y1 | StudyField::Alpha1 => 1.0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn values(self, s: &MeshState) -> Vec<f64> {
        let n = s.mesh.n_nodes();
        match self {
            StudyField::Rho => (0..n).map(|i| s.rho(i)).collect(),
            StudyField::Y1 => (0..n).map(|i| s.y1(i)).collect(),
            StudyField::Alpha1 => s.alpha1.to_vec(),
            StudyField::P => s.p.to_vec(),
            StudyField::U => s.u.to_vec(),
            StudyField::Theta => s.theta.to_vec(),
        }
    }
}

pub type FieldErrors = [f64; 6];

/// `e_N(r) = (1/L) Σ_i |r_i − r_ref(x_i)| h` over the coarse nodes, which
/// coincide with every `(N_ref/N)`-th reference node.
pub fn l1_errors(coarse: &MeshState, reference: &MeshState) -> Result<FieldErrors> {
    let (n, n_ref) = (coarse.mesh.n_cells(), reference.mesh.n_cells());
    if n_ref % n != 0 {
        return Err(Error::NonNestedMesh { n, n_ref });
    }
    let (cm, rm) = (&coarse.mesh, &reference.mesh);
    let tol = 1e-12 * cm.length();
    if (cm.x_min() - rm.x_min()).abs() > tol || (cm.x_max() - rm.x_max()).abs() > tol {
        return Err(Error::InvalidConfig(format!(
            "meshes cover different intervals: [{}, {}] vs [{}, {}]",
            cm.x_min(),
            cm.x_max(),
            rm.x_min(),
            rm.x_max()
        )));
    }
    let ratio = n_ref / n;
    let h = cm.h();
    let mut out = [0.0; 6];
    for f in StudyField::ALL {
        let c = f.values(coarse);
        let r = f.values(reference);
        let sum: f64 = c.iter().enumerate().map(|(i, v)| (v - r[i * ratio]).abs()).sum();
        out[f.index()] = sum * h / cm.length();
    }
    Ok(out)
}

/// Errors per coarse mesh, in increasing `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub n_ref: usize,
    pub ns: Vec<usize>,
    pub errors: Vec<FieldErrors>,
}

impl ErrorReport {
    pub fn new(n_ref: usize, rows: Vec<(usize, FieldErrors)>) -> Self {
        let mut rows = rows;
        rows.sort_by_key(|r| r.0);
        let (ns, errors) = rows.into_iter().unzip();
        Self { n_ref, ns, errors }
    }

    pub fn error(&self, row: usize, f: StudyField) -> f64 {
        self.errors[row][f.index()]
    }

    /// `log₂(e_{N/2} / e_N)` when row `N/2` is present and both errors are positive.
    pub fn order(&self, row: usize, f: StudyField) -> Option<f64> {
        let n = self.ns[row];
        if !n.is_multiple_of(2) {
            return None;
        }
        let half = self.ns.iter().position(|&m| m == n / 2)?;
        let (coarse, fine) = (self.error(half, f), self.error(row, f));
        (coarse > 0.0 && fine > 0.0).then(|| (coarse / fine).log2())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,n_ref");
        for f in StudyField::ALL {
            let _ = write!(s, ",e_{0},o_{0}", f.name());
        }
        s.push('\n');
        for (row, n) in self.ns.iter().enumerate() {
            let _ = write!(s, "{n},{}", self.n_ref);
            for f in StudyField::ALL {
                let o = self.order(row, f).map(|o| format!("{o:.16e}")).unwrap_or_default();
                let _ = write!(s, ",{:.16e},{o}", self.error(row, f));
            }
            s.push('\n');
        }
        s
    }

    /// Aligned table with `ρ, θ` divided by 1e2, `p` by 1e7 and `u` by 1e1.
    pub fn to_table(&self) -> String {
        let mut s = format!("reference N = {}\n{:>6}", self.n_ref, "N");
        for f in StudyField::ALL {
            let x = f.table_scale();
            let head = if x == 1.0 {
                format!("e({})", f.name())
            } else {
                format!("e({})/{x:.0e}", f.name())
            };
            let _ = write!(s, " {head:>16} {:>6}", "o");
        }
        s.push('\n');
        for (row, n) in self.ns.iter().enumerate() {
            let _ = write!(s, "{n:>6}");
            for f in StudyField::ALL {
                let o = self
                    .order(row, f)
                    .map(|o| format!("{o:.3}"))
                    .unwrap_or_else(|| "-".into());
                let _ = write!(s, " {:>16.4E} {o:>6}", self.error(row, f) / f.table_scale());
            }
            s.push('\n');
        }
        s
    }
}

/// Runs `spec` with `cfg` at `n_ref` and every `N` in `ns` (concurrently) and
/// compares the final states.
pub fn error_study(spec: &CaseSpec, cfg: &SchemeConfig, ns: &[usize], n_ref: usize) -> Result<ErrorReport> {
    if ns.is_empty() {
        return Err(Error::InvalidConfig("error study needs at least one mesh size".into()));
    }
    for &n in ns {
        if n == 0 || !n_ref.is_multiple_of(n) {
            return Err(Error::NonNestedMesh { n, n_ref });
        }
    }
    let solve = |n: usize| -> Result<MeshState> {
        let mesh = spec.mesh(n)?;
        let init = build_initial(spec, &mesh)?;
        Ok(run(&init, cfg, spec.t_fin, 0)?.final_state)
    };
    let (reference, coarse) = std::thread::scope(|sc| {
        let r = sc.spawn(|| solve(n_ref));
        let hs: Vec<_> = ns.iter().map(|&n| sc.spawn(move || solve(n))).collect();
        let coarse: Vec<_> = hs
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect();
        (r.join().expect("solver thread panicked"), coarse)
    });
    let reference = reference?;
    let mut rows = Vec::with_capacity(ns.len());
    for (&n, c) in ns.iter().zip(coarse) {
        rows.push((n, l1_errors(&c?, &reference)?));
    }
    Ok(ErrorReport::new(n_ref, rows))
}
