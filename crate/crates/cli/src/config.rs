//! Configuration resolution: flat `key=value` text or a JSON object, merged
//! with inline flag overrides. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "family",
    "scheme",
    "n",
    "alpha",
    "beta",
    "gamma",
    "k",
    "degree",
    "tolerance",
    "oc_ordering",
    "oa_style",
    "output_dir",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Circulant,
    Tridiagonal,
    Sym2x2,
    Ebtree,
    Walk,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "circulant" => Ok(Family::Circulant),
            "tridiagonal" => Ok(Family::Tridiagonal),
            "sym2x2" => Ok(Family::Sym2x2),
            "ebtree" => Ok(Family::Ebtree),
            "walk" => Ok(Family::Walk),
            other => Err(CliError::Usage(format!("unknown family '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Circulant => "circulant",
            Family::Tridiagonal => "tridiagonal",
            Family::Sym2x2 => "sym2x2",
            Family::Ebtree => "ebtree",
            Family::Walk => "walk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Standard,
    Hermitian,
}

impl Scheme {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "standard" => Ok(Scheme::Standard),
            "hermitian" => Ok(Scheme::Hermitian),
            other => Err(CliError::Usage(format!("unknown scheme '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Standard => "standard",
            Scheme::Hermitian => "hermitian",
        }
    }
}

/// Fully resolved configuration for build/verify/walk.
#[derive(Debug, Clone)]
pub struct Config {
    pub family: Family,
    pub scheme: Scheme,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: Option<f64>,
    pub k: usize,
    pub tolerance: f64,
    pub oc_ordering: blockenc_core::sparse::OcOrdering,
    pub oa_style: blockenc_core::sparse::OaStyle,
    pub output_dir: Option<PathBuf>,
}

fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let trimmed = text.trim_start();
    let mut map = BTreeMap::new();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("config JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| CliError::Usage("config JSON must be an object".into()))?;
        for (k, v) in obj {
            let rendered = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                other => {
                    return Err(CliError::Usage(format!(
                        "config key '{k}' has unsupported value {other}"
                    )))
                }
            };
            map.insert(k.clone(), rendered);
        }
    } else {
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line without '=': {line}")))?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    for key in map.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown config key '{key}'")));
        }
    }
    Ok(map)
}

pub fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_key_values(&text)
}

/// Inline flag values to be merged over the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub family: Option<String>,
    pub scheme: Option<String>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub k: Option<usize>,
    pub tolerance: Option<f64>,
    pub oc_ordering: Option<String>,
    pub oa_style: Option<String>,
    pub output_dir: Option<PathBuf>,
}

fn get_f64(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>, CliError> {
    map.get(key)
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| CliError::Usage(format!("config key '{key}': {e}")))
        })
        .transpose()
}

fn get_usize(map: &BTreeMap<String, String>, key: &str) -> Result<Option<usize>, CliError> {
    map.get(key)
        .map(|s| {
            s.parse::<usize>()
                .map_err(|e| CliError::Usage(format!("config key '{key}': {e}")))
        })
        .transpose()
}

pub fn resolve(
    config_path: Option<&Path>,
    over: &Overrides,
) -> Result<Config, CliError> {
    let map = match config_path {
        Some(p) => load_config_file(p)?,
        None => BTreeMap::new(),
    };
    let family_text = over
        .family
        .clone()
        .or_else(|| map.get("family").cloned())
        .ok_or_else(|| CliError::Usage("missing required key 'family'".into()))?;
    let family = Family::parse(&family_text)?;
    let scheme = match over.scheme.clone().or_else(|| map.get("scheme").cloned()) {
        Some(s) => Scheme::parse(&s)?,
        None => Scheme::Standard,
    };
    let n = over
        .n
        .or(get_usize(&map, "n")?)
        .unwrap_or(if family == Family::Sym2x2 { 1 } else { 3 });
    let alpha = over
        .alpha
        .or(get_f64(&map, "alpha")?)
        .ok_or_else(|| CliError::Usage("missing required key 'alpha'".into()))?;
    let beta = over
        .beta
        .or(get_f64(&map, "beta")?)
        .ok_or_else(|| CliError::Usage("missing required key 'beta'".into()))?;
    let gamma = over.gamma.or(get_f64(&map, "gamma")?);
    let k = over.k.or(get_usize(&map, "k")?).unwrap_or(1);
    let tolerance = over
        .tolerance
        .or(get_f64(&map, "tolerance")?)
        .or_else(|| {
            std::env::var("BLOCKENC_TOL")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(1e-10);
    let oc_ordering = match over
        .oc_ordering
        .clone()
        .or_else(|| map.get("oc_ordering").cloned())
        .as_deref()
    {
        None | Some("diag-first") => blockenc_core::sparse::OcOrdering::DiagFirst,
        Some("superdiag-first") => blockenc_core::sparse::OcOrdering::SuperdiagFirst,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown oc_ordering '{other}' (expected diag-first or superdiag-first)"
            )))
        }
    };
    let oa_style = match over
        .oa_style
        .clone()
        .or_else(|| map.get("oa_style").cloned())
        .as_deref()
    {
        None | Some("uniformly-controlled") => blockenc_core::sparse::OaStyle::UniformlyControlled,
        Some("multi-controlled") => blockenc_core::sparse::OaStyle::MultiControlled,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown oa_style '{other}' (expected uniformly-controlled or multi-controlled)"
            )))
        }
    };
    let output_dir = over
        .output_dir
        .clone()
        .or_else(|| map.get("output_dir").map(PathBuf::from));
    Ok(Config {
        family,
        scheme,
        n,
        alpha,
        beta,
        gamma,
        k,
        tolerance,
        oc_ordering,
        oa_style,
        output_dir,
    })
}
