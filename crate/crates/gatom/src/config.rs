//! Key/value config files with `[physical]` and `[material]` sections.
//!
//! Lines are `key = value`; `#` starts a comment. Material values are base SI
//! units; the physical section is in natural units (λ = 1, T = 1). Unknown
//! sections and keys are rejected.
//!
//! ```text
//! [physical]
//! gamma1_rel = 3.14159e-5
//! n = 75
//!
//! [material]
//! rho = 5307
//! q_re = 0.5
//! q_im = 0.48
//! ...
//! ```

use num_complex::Complex64;

use crate::dynamics::SimulationGrid;
use crate::error::{Error, Result};
use crate::params::{MaterialInput, PhysicalConfig};

/// `[physical]` section contents; everything optional so the CLI can layer
/// defaults underneath.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhysicalSection {
    pub gamma1_rel: Option<f64>,
    pub n: Option<f64>,
    pub k_cut: Option<f64>,
    pub dk: Option<f64>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
}

impl PhysicalSection {
    /// Natural-unit config with defaults γ₁ = π×10⁻⁵ν, N = 1.
    pub fn physical_config(&self) -> Result<PhysicalConfig> {
        PhysicalConfig::natural(
            self.gamma1_rel.unwrap_or(1e-5 * std::f64::consts::PI),
            self.n.unwrap_or(1.0),
        )
    }

    /// Simulation grid over the published defaults.
    pub fn grid(&self) -> Result<SimulationGrid> {
        let d = SimulationGrid::default_paper();
        SimulationGrid::new(
            self.k_cut.unwrap_or(d.k_cut),
            self.dk.unwrap_or(d.dk),
            self.dt.unwrap_or(d.dt),
            self.t_final.unwrap_or(d.t_final),
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub physical: PhysicalSection,
    pub material: Option<MaterialInput>,
}

#[derive(Default)]
struct MaterialBuilder {
    fields: std::collections::BTreeMap<&'static str, f64>,
}

const MATERIAL_KEYS: [&str; 13] = [
    "rho", "c11", "c12", "c44", "e14", "q_re", "q_im", "r_re", "r_im", "phi", "width", "c_sigma",
    "nu_si",
];

impl MaterialBuilder {
    fn set(&mut self, key: &str, value: f64) -> Result<()> {
        match MATERIAL_KEYS.iter().find(|&&k| k == key) {
            Some(&k) => {
                if self.fields.insert(k, value).is_some() {
                    return Err(Error::ConfigParse(format!(
                        "duplicate material key '{key}'"
                    )));
                }
                Ok(())
            }
            None => Err(Error::ConfigParse(format!(
                "unknown key '{key}' in [material]"
            ))),
        }
    }

    fn build(self) -> Result<Option<MaterialInput>> {
        if self.fields.is_empty() {
            return Ok(None);
        }
        let get = |k: &str| {
            self.fields
                .get(k)
                .copied()
                .ok_or_else(|| Error::ConfigParse(format!("missing material key '{k}'")))
        };
        Ok(Some(MaterialInput {
            rho: get("rho")?,
            c11: get("c11")?,
            c12: get("c12")?,
            c44: get("c44")?,
            e14: get("e14")?,
            q: Complex64::new(get("q_re")?, get("q_im")?),
            r: Complex64::new(get("r_re")?, get("r_im")?),
            phi: get("phi")?,
            width: get("width")?,
            c_sigma: get("c_sigma")?,
            nu_si: get("nu_si")?,
        }))
    }
}

/// Parse a config file. Unknown sections or keys are errors.
pub fn parse(text: &str) -> Result<ConfigFile> {
    enum Section {
        None,
        Physical,
        Material,
    }
    let mut section = Section::None;
    let mut phys = PhysicalSection::default();
    let mut mat = MaterialBuilder::default();
    let mut seen_phys: Vec<String> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = match name.trim() {
                "physical" => Section::Physical,
                "material" => Section::Material,
                other => {
                    return Err(Error::ConfigParse(format!(
                        "unknown section '[{other}]' on line {}",
                        lineno + 1
                    )))
                }
            };
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::ConfigParse(format!("expected 'key = value' on line {}", lineno + 1))
        })?;
        let key = key.trim();
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::ConfigParse(format!(
                "bad number '{}' on line {}",
                value.trim(),
                lineno + 1
            ))
        })?;
        match section {
            Section::None => {
                return Err(Error::ConfigParse(format!(
                    "key '{key}' outside any section on line {}",
                    lineno + 1
                )))
            }
            Section::Physical => {
                if seen_phys.iter().any(|k| k == key) {
                    return Err(Error::ConfigParse(format!(
                        "duplicate physical key '{key}'"
                    )));
                }
                let slot = match key {
                    "gamma1_rel" => &mut phys.gamma1_rel,
                    "n" => &mut phys.n,
                    "k_cut" => &mut phys.k_cut,
                    "dk" => &mut phys.dk,
                    "dt" => &mut phys.dt,
                    "t_final" => &mut phys.t_final,
                    other => {
                        return Err(Error::ConfigParse(format!(
                            "unknown key '{other}' in [physical]"
                        )))
                    }
                };
                *slot = Some(value);
                seen_phys.push(key.to_string());
            }
            Section::Material => mat.set(key, value)?,
        }
    }
    Ok(ConfigFile {
        physical: phys,
        material: mat.build()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAAS: &str = "\
# GaAs on the published transducer geometry
[material]
rho = 5307        # kg/m^3
c11 = 12.26e10
c12 = 5.71e10
c44 = 6.00e10
e14 = 0.157
q_re = 0.5
q_im = 0.48
r_re = -0.68
r_im = 1.16
phi = 1.05
width = 50e-6
c_sigma = 2.5e-11
nu_si = 5e9
";

    #[test]
    fn parses_material_section() {
        let cfg = parse(GAAS).unwrap();
        let m = cfg.material.unwrap();
        assert_eq!(m, crate::params::MaterialInput::gaas());
    }

    #[test]
    fn parses_physical_with_defaults() {
        let cfg = parse("[physical]\nn = 75\n").unwrap();
        assert_eq!(cfg.physical.n, Some(75.0));
        let pc = cfg.physical.physical_config().unwrap();
        assert_eq!(pc.n_size, 75.0);
        assert!((pc.gamma1_rel() - 1e-5 * std::f64::consts::PI).abs() < 1e-18);
        let grid = cfg.physical.grid().unwrap();
        assert_eq!(grid, crate::dynamics::SimulationGrid::default_paper());
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(parse("[physical]\nbogus = 1\n").is_err());
        assert!(parse("[material]\nrho = 1\nbogus = 2\n").is_err());
        assert!(parse("[weird]\n").is_err());
        assert!(parse("n = 75\n").is_err(), "keys need a section");
        assert!(
            parse("[physical]\nn = 75\nn = 76\n").is_err(),
            "duplicates rejected"
        );
        assert!(parse("[physical]\nn : 75\n").is_err());
        assert!(parse("[physical]\nn = abc\n").is_err());
    }

    #[test]
    fn incomplete_material_is_an_error() {
        assert!(parse("[material]\nrho = 5307\n").is_err());
    }
}
