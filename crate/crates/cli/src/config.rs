//! Flat `key = value` study configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use polyvem::constitutive::{HenckyParams, J2Params, Law, NeoHookeanVariant};
use polyvem::mesh::StructuredKind;
use polyvem::solver::{AlphaMode, NewtonOptions};
use polyvem::studies::{check_refinements, BlockSettings, MeshFamily};
use polyvem::vem::AlphaNorm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StudyKind {
    Convergence,
    Strip,
    Block,
    Solve,
}

impl FromStr for StudyKind {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convergence" => Ok(StudyKind::Convergence),
            "strip" | "plasticity_strip" => Ok(StudyKind::Strip),
            "block" | "finite_strain_block" => Ok(StudyKind::Block),
            "solve" | "single_solve" => Ok(StudyKind::Solve),
            other => bail!("unknown study `{other}`"),
        }
    }
}

impl fmt::Display for StudyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StudyKind::Convergence => "convergence",
            StudyKind::Strip => "strip",
            StudyKind::Block => "block",
            StudyKind::Solve => "solve",
        })
    }
}

const KEYS: &[&str] = &[
    "study",
    "case",
    "family",
    "refinements",
    "mesh_file",
    "law",
    "lambda",
    "mu",
    "mu_a",
    "mu_b",
    "lambda_c",
    "lambda_d",
    "young",
    "poisson",
    "sigma_y0",
    "h_iso",
    "h_kin",
    "variant",
    "steps",
    "tol_rel",
    "tol_abs",
    "max_iterations",
    "line_search",
    "alpha",
    "alpha_norm",
    "delta",
    "reference",
    "force",
    "clamp",
    "seed",
];

/// A parsed configuration file. Every key is optional; study runners supply defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub study: Option<StudyKind>,
    pub case: Option<String>,
    pub family: MeshFamily,
    pub refinements: Option<Vec<usize>>,
    pub mesh_file: Option<PathBuf>,
    pub law: Option<String>,
    pub variant: NeoHookeanVariant,
    pub steps: Option<usize>,
    pub alpha: AlphaMode,
    pub alpha_norm: AlphaNorm,
    pub tol_rel: Option<f64>,
    pub tol_abs: Option<f64>,
    pub max_iterations: Option<usize>,
    pub line_search: Option<bool>,
    pub delta: Option<f64>,
    pub reference: bool,
    pub force: Option<[f64; 2]>,
    pub clamp: Vec<String>,
    pub seed: u64,
    params: BTreeMap<String, f64>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            study: None,
            case: None,
            family: MeshFamily::Structured(StructuredKind::Square),
            refinements: None,
            mesh_file: None,
            law: None,
            variant: NeoHookeanVariant::Standard,
            steps: None,
            alpha: AlphaMode::Updated,
            alpha_norm: AlphaNorm::MaxEntry,
            tol_rel: None,
            tol_abs: None,
            max_iterations: None,
            line_search: None,
            delta: None,
            reference: false,
            force: None,
            clamp: Vec::new(),
            seed: 1,
            params: BTreeMap::new(),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| anyhow!("`{key}`: cannot parse `{value}`: {e}"))
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| parse(key, v.trim())).collect()
}

impl StudyConfig {
    /// Parses the text of a configuration file; relative `mesh_file` paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = StudyConfig::default();
        let mut seen = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(a, b)| (a.trim(), b.trim()))
                .ok_or_else(|| anyhow!("line {line_no}: expected `key = value`"))?;
            if !KEYS.contains(&key) {
                bail!("line {line_no}: unknown key `{key}`");
            }
            if let Some(first) = seen.insert(key.to_string(), line_no) {
                bail!("line {line_no}: `{key}` already set on line {first}");
            }
            cfg.set(key, value, base).with_context(|| format!("line {line_no}"))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).with_context(|| format!("in {}", path.display()))
    }

    fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        match key {
            "study" => self.study = Some(value.parse()?),
            "case" => self.case = Some(value.to_string()),
            "family" => self.family = parse(key, value)?,
            "refinements" => {
                let levels = list(key, value)?;
                check_refinements(&levels)?;
                self.refinements = Some(levels);
            }
            "mesh_file" => {
                let path = base.join(value);
                if !path.is_file() {
                    bail!("mesh file {} does not exist", path.display());
                }
                self.mesh_file = Some(path);
            }
            "law" => self.law = Some(value.to_string()),
            "variant" => self.variant = parse(key, value)?,
            "steps" => self.steps = Some(parse(key, value)?),
            "alpha" => self.alpha = parse(key, value)?,
            "alpha_norm" => self.alpha_norm = parse(key, value)?,
            "tol_rel" => self.tol_rel = Some(parse(key, value)?),
            "tol_abs" => self.tol_abs = Some(parse(key, value)?),
            "max_iterations" => self.max_iterations = Some(parse(key, value)?),
            "line_search" => self.line_search = Some(parse(key, value)?),
            "delta" => self.delta = Some(parse(key, value)?),
            "reference" => self.reference = parse(key, value)?,
            "force" => match list::<f64>(key, value)?.as_slice() {
                &[fx, fy] => self.force = Some([fx, fy]),
                _ => bail!("`force` needs two components"),
            },
            "clamp" => self.clamp = value.split(',').map(|s| s.trim().to_string()).collect(),
            "seed" => self.seed = parse(key, value)?,
            _ => {
                self.params.insert(key.to_string(), parse(key, value)?);
            }
        }
        Ok(())
    }

    fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    pub fn newton(&self, line_search_default: bool) -> NewtonOptions {
        let d = NewtonOptions::default();
        NewtonOptions {
            tol_rel: self.tol_rel.unwrap_or(d.tol_rel),
            tol_abs: self.tol_abs.unwrap_or(d.tol_abs),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            line_search: self.line_search.unwrap_or(line_search_default),
        }
    }

    pub fn j2_params(&self) -> J2Params {
        let d = J2Params::default();
        J2Params {
            young: self.param("young").unwrap_or(d.young),
            poisson: self.param("poisson").unwrap_or(d.poisson),
            sigma_y0: self.param("sigma_y0").unwrap_or(d.sigma_y0),
            h_iso: self.param("h_iso").unwrap_or(d.h_iso),
            h_kin: self.param("h_kin").unwrap_or(d.h_kin),
        }
    }

    /// The law named by `law`, if any, with its parameters.
    pub fn law(&self) -> Result<Option<Law>> {
        let Some(name) = self.law.as_deref() else {
            return Ok(None);
        };
        let block = BlockSettings::default();
        let law = match name {
            "linear" => Law::LinearElastic {
                lambda: self.param("lambda").unwrap_or(1.0),
                mu: self.param("mu").unwrap_or(1.0),
            },
            "benchmark" => Law::Benchmark,
            "hencky" => {
                let d = HenckyParams::default();
                Law::HenckyVonMises(HenckyParams {
                    mu_a: self.param("mu_a").unwrap_or(d.mu_a),
                    mu_b: self.param("mu_b").unwrap_or(d.mu_b),
                    lambda_c: self.param("lambda_c").unwrap_or(d.lambda_c),
                    lambda_d: self.param("lambda_d").unwrap_or(d.lambda_d),
                })
            }
            "neo_hookean" => Law::NeoHookean {
                lambda: self.param("lambda").unwrap_or(block.lambda),
                mu: self.param("mu").unwrap_or(block.mu),
                variant: self.variant,
            },
            "j2" => Law::J2(self.j2_params()),
            other => bail!("unknown law `{other}` (linear, benchmark, hencky, neo_hookean, j2)"),
        };
        Ok(Some(law))
    }

    pub fn block_settings(&self) -> BlockSettings {
        let d = BlockSettings::default();
        BlockSettings {
            mu: self.param("mu").unwrap_or(d.mu),
            lambda: self.param("lambda").unwrap_or(d.lambda),
            variant: self.variant,
            force: self.force.unwrap_or(d.force),
            steps: self.steps.unwrap_or(d.steps),
            alpha_mode: self.alpha,
            alpha_norm: self.alpha_norm,
            newton: self.newton(false),
        }
    }
}
