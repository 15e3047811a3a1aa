//! The seven benchmark shock-tube configurations and initial-state builder.
//!
//! A [`CaseSpec`] round-trips through a plain `key = value` text format so
//! custom cases can be derived from the built-in ones.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::eos::{primitive_to_conserved, volume_fraction_from_mass, GasPair, GasParams};
use crate::error::{Error, Result};
use crate::grid::Mesh;
use crate::scheme::{MeshState, Regularization, SchemeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CaseId {
    pub const ALL: [CaseId; 7] = [
        CaseId::A,
        CaseId::B,
        CaseId::C,
        CaseId::D,
        CaseId::E,
        CaseId::F,
        CaseId::G,
    ];

    pub fn title(&self) -> &'static str {
        match self {
            CaseId::A => "air-to-water shock tube",
            CaseId::B => "water-to-air shock tube",
            CaseId::C => "mixture containing mainly water vapor",
            CaseId::D => "vanishing liquid phase",
            CaseId::E => "mixture containing mainly liquid water",
            CaseId::F => "dodecane vapor-to-liquid shock tube",
            CaseId::G => "carbon dioxide depressurization",
        }
    }
}

impl FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CaseId::A),
            "B" => Ok(CaseId::B),
            "C" => Ok(CaseId::C),
            "D" => Ok(CaseId::D),
            "E" => Ok(CaseId::E),
            "F" => Ok(CaseId::F),
            "G" => Ok(CaseId::G),
            _ => Err(Error::UnknownCase(s.trim().to_string())),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Pressure, velocity and temperature on one side of the jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideState {
    pub p: f64,
    pub u: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FractionSpec {
    /// Volume fraction of component 1 on each side.
    Alpha { left: f64, right: f64 },
    /// Uniform mass fraction of component 1; volume fractions follow the local pressure.
    MassFraction { y1: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseDefaults {
    pub reg: Regularization,
    pub n_coarse: usize,
    pub n_fine: usize,
    pub a: f64,
    pub beta: f64,
    pub a_s: f64,
    pub prandtl_inv_reported: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub id: CaseId,
    pub gases: GasPair,
    pub x_min: f64,
    pub x_max: f64,
    pub x_disc: f64,
    pub left: SideState,
    pub right: SideState,
    pub fraction: FractionSpec,
    pub t_fin: f64,
    pub defaults: CaseDefaults,
}

fn gas(gamma: f64, cv: f64, p_star: f64, eps0: f64) -> GasParams {
    GasParams::new(gamma, cv, p_star, eps0).expect("tabulated gas parameters are valid")
}

fn side(p: f64, theta: f64) -> SideState {
    SideState { p, u: 0.0, theta }
}

fn defaults(
    reg: Regularization,
    n_coarse: usize,
    n_fine: usize,
    a: f64,
    beta: f64,
    prandtl_inv_reported: f64,
) -> CaseDefaults {
    CaseDefaults {
        reg,
        n_coarse,
        n_fine,
        a,
        beta,
        a_s: 1.0,
        prandtl_inv_reported,
    }
}

pub fn make_case(id: CaseId) -> CaseSpec {
    use Regularization::{Qgd, Qhd};
    let vapor_water = GasPair::new(gas(1.43, 1040.0, 0.0, 2030e3), gas(2.35, 1816.0, 1e9, -1167e3));
    match id {
        CaseId::A => CaseSpec {
            id,
            gases: GasPair::new(gas(1.4, 717.5, 0.0, 0.0), gas(2.8, 1495.0, 8.5e8, 0.0)),
            x_min: -5.0,
            x_max: 5.0,
            x_disc: 0.0,
            left: side(1e9, 308.15),
            right: side(1e5, 308.15),
            fraction: FractionSpec::Alpha {
                left: 1.0 - 1e-5,
                right: 1e-5,
            },
            t_fin: 2e-3,
            defaults: defaults(Qgd, 300, 2000, 0.3, 0.2, 1.0),
        },
        CaseId::B => CaseSpec {
            id,
            gases: GasPair::new(gas(1.4, 720.0, 0.0, 0.0), gas(2.8, 1495.0, 8.5e8, 0.0)),
            x_min: -5.0,
            x_max: 5.0,
            x_disc: 0.0,
            left: side(2e7, 308.15),
            right: side(1e7, 308.15),
            fraction: FractionSpec::Alpha {
                left: 0.25,
                right: 0.75,
            },
            t_fin: 6e-3,
            defaults: defaults(Qgd, 500, 2500, 2.0, 0.1, 1.0),
        },
        CaseId::C => CaseSpec {
            id,
            gases: vapor_water,
            x_min: -0.5,
            x_max: 0.5,
            x_disc: 0.0,
            left: side(2e5, 394.2489),
            right: side(1e5, 372.8827),
            fraction: FractionSpec::MassFraction { y1: 0.8 },
            t_fin: 0.8e-3,
            defaults: defaults(Qhd, 200, 500, 0.8, 0.2, 1.0),
        },
        CaseId::D => CaseSpec {
            id,
            gases: vapor_water,
            x_min: -0.5,
            x_max: 0.5,
            x_disc: 0.0,
            left: side(2e5, 395.0),
            right: side(1e5, 375.0),
            fraction: FractionSpec::MassFraction { y1: 1.0 - 0.01 },
            t_fin: 0.5e-3,
            defaults: defaults(Qgd, 100, 500, 0.2, 0.2, 1.0),
        },
        CaseId::E => CaseSpec {
            id,
            gases: vapor_water,
            x_min: -0.5,
            x_max: 0.5,
            x_disc: 0.0,
            left: side(2e5, 395.0),
            right: side(1e5, 375.0),
            fraction: FractionSpec::MassFraction { y1: 1.0 - 0.8 },
            t_fin: 1.5e-3,
            defaults: defaults(Qhd, 500, 1500, 0.8, 0.3, 1.0),
        },
        CaseId::F => CaseSpec {
            id,
            gases: GasPair::new(gas(1.025, 1956.0, 0.0, -237e3), gas(2.35, 1077.0, 4e8, -755e3)),
            x_min: -5.0,
            x_max: 5.0,
            x_disc: -2.0,
            left: side(1e10, 308.15),
            right: side(1e5, 308.15),
            fraction: FractionSpec::Alpha { left: 1.0, right: 0.0 },
            t_fin: 5e-3,
            defaults: defaults(Qgd, 500, 2000, 0.9, 0.1, 0.2),
        },
        CaseId::G => CaseSpec {
            id,
            gases: GasPair::new(gas(1.06, 2410.0, 8.86e5, -3.01e5), gas(1.23, 2440.0, 1.32e8, -6.23e5)),
            x_min: -40.0,
            x_max: 40.0,
            x_disc: 10.0,
            left: side(6e6, 283.13),
            right: side(1e6, 283.13),
            fraction: FractionSpec::Alpha {
                left: 1e-6,
                right: 1.0 - 1e-6,
            },
            t_fin: 0.08,
            defaults: defaults(Qgd, 1200, 4000, 0.8, 0.1, 0.1),
        },
    }
}

pub fn make_case_str(id: &str) -> Result<CaseSpec> {
    Ok(make_case(id.parse()?))
}

impl CaseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_disc && self.x_disc < self.x_max) {
            return Err(Error::InvalidConfig(format!(
                "need x_min < x_disc < x_max, got {} {} {}",
                self.x_min, self.x_disc, self.x_max
            )));
        }
        if !(self.t_fin >= 0.0) || !self.t_fin.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "t_fin must be non-negative, got {}",
                self.t_fin
            )));
        }
        for (is_left, s) in [(true, self.left), (false, self.right)] {
            let a = self.alpha1_for(is_left)?;
            primitive_to_conserved(s.p, s.u, s.theta, a, &self.gases)?;
        }
        Ok(())
    }

    /// Volume fraction of component 1 for a node on the given side.
    pub fn alpha1_for(&self, is_left: bool) -> Result<f64> {
        let s = if is_left { self.left } else { self.right };
        match self.fraction {
            FractionSpec::Alpha { left, right } => Ok(if is_left { left } else { right }),
            FractionSpec::MassFraction { y1 } => volume_fraction_from_mass(y1, s.p, &self.gases),
        }
    }

    pub fn mesh(&self, n: usize) -> Result<Mesh> {
        Mesh::new(self.x_min, self.x_max, n)
    }

    /// Scheme configuration from the case defaults, copy boundary.
    pub fn scheme_config(&self) -> SchemeConfig {
        SchemeConfig {
            reg: self.defaults.reg,
            a: self.defaults.a,
            beta: self.defaults.beta,
            a_s: self.defaults.a_s,
            prandtl_inv_reported: self.defaults.prandtl_inv_reported,
            ..SchemeConfig::default()
        }
    }
}

/// Initial mesh state: nodes with `x_i < x_disc` take the left state, the rest the right.
pub fn build_initial(spec: &CaseSpec, mesh: &Mesh) -> Result<MeshState> {
    let left = {
        let a = spec.alpha1_for(true)?;
        primitive_to_conserved(spec.left.p, spec.left.u, spec.left.theta, a, &spec.gases)?
    };
    let right = {
        let a = spec.alpha1_for(false)?;
        primitive_to_conserved(spec.right.p, spec.right.u, spec.right.theta, a, &spec.gases)?
    };
    let nodes: Vec<_> = (0..mesh.n_nodes())
        .map(|i| if mesh.node(i) < spec.x_disc { left } else { right })
        .collect();
    MeshState::from_nodes(*mesh, spec.gases, 0.0, &nodes)
}

/// One `key = value` entry with its 1-based line number.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEntry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Parses `key = value` lines. `#` starts a comment; `-` in keys reads as `_`.
pub fn parse_key_values(text: &str) -> Result<Vec<ConfigEntry>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            msg: format!("expected key = value, got '{line}'"),
        })?;
        let key = k.trim().replace('-', "_").to_ascii_lowercase();
        if key.is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                msg: "empty key".into(),
            });
        }
        out.push(ConfigEntry {
            line: idx + 1,
            key,
            value: v.trim().to_string(),
        });
    }
    Ok(out)
}

fn num(e: &ConfigEntry) -> Result<f64> {
    e.value.parse::<f64>().map_err(|_| Error::Parse {
        line: e.line,
        msg: format!("'{}' is not a number for key '{}'", e.value, e.key),
    })
}

fn count(e: &ConfigEntry) -> Result<usize> {
    e.value.parse::<usize>().map_err(|_| Error::Parse {
        line: e.line,
        msg: format!("'{}' is not a cell count for key '{}'", e.value, e.key),
    })
}

impl CaseSpec {
    /// Applies one entry. Returns `Ok(false)` when the key is not a case key.
    pub fn apply(&mut self, e: &ConfigEntry) -> Result<bool> {
        let parse_err = |msg: String| Error::Parse { line: e.line, msg };
        let mut set_gas = |k: usize, field: &str| -> Result<()> {
            let g = if k == 1 { self.gases.g1 } else { self.gases.g2 };
            let (mut gamma, mut cv, mut ps, mut e0) = (g.gamma(), g.cv(), g.p_star(), g.eps0());
            let v = num(e)?;
            match field {
                "gamma" => gamma = v,
                "cv" => cv = v,
                "p_star" => ps = v,
                "eps0" => e0 = v,
                _ => unreachable!(),
            }
            let g = GasParams::new(gamma, cv, ps, e0).map_err(|err| parse_err(err.to_string()))?;
            if k == 1 {
                self.gases.g1 = g;
            } else {
                self.gases.g2 = g;
            }
            Ok(())
        };
        match e.key.as_str() {
            "gas1.gamma" => set_gas(1, "gamma")?,
            "gas1.cv" => set_gas(1, "cv")?,
            "gas1.p_star" => set_gas(1, "p_star")?,
            "gas1.eps0" => set_gas(1, "eps0")?,
            "gas2.gamma" => set_gas(2, "gamma")?,
            "gas2.cv" => set_gas(2, "cv")?,
            "gas2.p_star" => set_gas(2, "p_star")?,
            "gas2.eps0" => set_gas(2, "eps0")?,
            "x_min" => self.x_min = num(e)?,
            "x_max" => self.x_max = num(e)?,
            "x_disc" => self.x_disc = num(e)?,
            "left.p" => self.left.p = num(e)?,
            "left.u" => self.left.u = num(e)?,
            "left.theta" => self.left.theta = num(e)?,
            "right.p" => self.right.p = num(e)?,
            "right.u" => self.right.u = num(e)?,
            "right.theta" => self.right.theta = num(e)?,
            "alpha1_left" | "alpha1_right" => {
                let v = num(e)?;
                let (mut l, mut r) = match self.fraction {
                    FractionSpec::Alpha { left, right } => (left, right),
                    FractionSpec::MassFraction { .. } => (v, v),
                };
                if e.key == "alpha1_left" {
                    l = v;
                } else {
                    r = v;
                }
                self.fraction = FractionSpec::Alpha { left: l, right: r };
            }
            "y1" => self.fraction = FractionSpec::MassFraction { y1: num(e)? },
            "t_fin" => self.t_fin = num(e)?,
            "reg" => self.defaults.reg = e.value.parse().map_err(|err: Error| parse_err(err.to_string()))?,
            "n" => self.defaults.n_coarse = count(e)?,
            "n_fine" => self.defaults.n_fine = count(e)?,
            "a" => self.defaults.a = num(e)?,
            "beta" => self.defaults.beta = num(e)?,
            "schmidt" => self.defaults.a_s = num(e)?,
            "prandtl_inv" => self.defaults.prandtl_inv_reported = num(e)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Parses a config text. The optional `case` key selects the base case
    /// (default A); every other key overrides it.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let entries = parse_key_values(text)?;
        let (spec, rest) = spec_from_entries(&entries)?;
        if let Some(e) = rest.first() {
            return Err(Error::Parse {
                line: e.line,
                msg: format!("unknown key '{}'", e.key),
            });
        }
        Ok(spec)
    }

    /// Full `key = value` description; parsing it back yields an equal spec.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let g = |s: &mut String, k: usize, g: &GasParams| {
            let _ = writeln!(s, "gas{k}.gamma = {:?}", g.gamma());
            let _ = writeln!(s, "gas{k}.cv = {:?}", g.cv());
            let _ = writeln!(s, "gas{k}.p_star = {:?}", g.p_star());
            let _ = writeln!(s, "gas{k}.eps0 = {:?}", g.eps0());
        };
        let _ = writeln!(s, "# {}", self.id.title());
        let _ = writeln!(s, "case = {}", self.id);
        g(&mut s, 1, &self.gases.g1);
        g(&mut s, 2, &self.gases.g2);
        let _ = writeln!(s, "x_min = {:?}", self.x_min);
        let _ = writeln!(s, "x_max = {:?}", self.x_max);
        let _ = writeln!(s, "x_disc = {:?}", self.x_disc);
        for (name, st) in [("left", self.left), ("right", self.right)] {
            let _ = writeln!(s, "{name}.p = {:?}", st.p);
            let _ = writeln!(s, "{name}.u = {:?}", st.u);
            let _ = writeln!(s, "{name}.theta = {:?}", st.theta);
        }
        match self.fraction {
            FractionSpec::Alpha { left, right } => {
                let _ = writeln!(s, "alpha1_left = {left:?}");
                let _ = writeln!(s, "alpha1_right = {right:?}");
            }
            FractionSpec::MassFraction { y1 } => {
                let _ = writeln!(s, "y1 = {y1:?}");
            }
        }
        let d = &self.defaults;
        let _ = writeln!(s, "t_fin = {:?}", self.t_fin);
        let _ = writeln!(s, "reg = {}", d.reg);
        let _ = writeln!(s, "n = {}", d.n_coarse);
        let _ = writeln!(s, "n_fine = {}", d.n_fine);
        let _ = writeln!(s, "a = {:?}", d.a);
        let _ = writeln!(s, "beta = {:?}", d.beta);
        let _ = writeln!(s, "schmidt = {:?}", d.a_s);
        let _ = writeln!(s, "prandtl_inv = {:?}", d.prandtl_inv_reported);
        s
    }
}

/// Builds a spec from parsed entries and returns the entries it did not consume.
pub fn spec_from_entries(entries: &[ConfigEntry]) -> Result<(CaseSpec, Vec<ConfigEntry>)> {
    let mut spec = make_case(CaseId::A);
    if let Some(e) = entries.iter().find(|e| e.key == "case") {
        spec = make_case(e.value.parse().map_err(|err: Error| Error::Parse {
            line: e.line,
            msg: err.to_string(),
        })?);
    }
    let mut rest = Vec::new();
    for e in entries.iter().filter(|e| e.key != "case") {
        if !spec.apply(e)? {
            rest.push(e.clone());
        }
    }
    spec.validate()?;
    Ok((spec, rest))
}
