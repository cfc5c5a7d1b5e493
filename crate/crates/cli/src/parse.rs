//! Parsing of space descriptors, metric weight lists, root labels, and the
//! tangent-vector expression syntax.

use std::collections::BTreeMap;
use std::path::Path;

use flagvar_core::{Algebra, Error, Family, FlagSpace, InvariantMetric, MVector, Result, Root};

/// Space-selection flags shared by most commands.
#[derive(Debug, Clone, clap::Args)]
pub struct SpaceArgs {
    /// Shorthand space name: `cp` (with --n) or `su3-maxflag`.
    #[arg(long)]
    pub space: Option<String>,
    /// Summand label n for the projective space ℂP^{2n+1}.
    #[arg(long)]
    pub n: Option<usize>,
    /// Root-system family (A or C) for the generic descriptor.
    #[arg(long)]
    pub family: Option<String>,
    /// Root-system rank for the generic descriptor.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Comma-separated 1-based simple-root indices spanning Θ (empty for the
    /// maximal flag).
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    pub theta: Option<String>,
}

impl SpaceArgs {
    /// Resolve the flags into a flag space.
    pub fn resolve(&self, config: &ConfigMap) -> Result<FlagSpace> {
        if let Some(name) = &self.space {
            return match name.as_str() {
                "cp" => {
                    let n = self
                        .n
                        .or_else(|| config.get_usize("n"))
                        .ok_or_else(|| Error::Usage("--space cp requires --n".into()))?;
                    FlagSpace::projective_space(n)
                }
                "su3-maxflag" => FlagSpace::su3_maximal(),
                other => Err(Error::Usage(format!(
                    "unknown space `{other}` (expected `cp` or `su3-maxflag`)"
                ))),
            };
        }
        let family = match self
            .family
            .as_deref()
            .or_else(|| config.get_str("family"))
        {
            Some("A") | Some("a") => Family::A,
            Some("C") | Some("c") => Family::C,
            Some(other) => {
                return Err(Error::Usage(format!(
                    "unknown family `{other}` (expected A or C)"
                )))
            }
            None => {
                return Err(Error::Usage(
                    "select a space with --space or --family/--rank/--theta".into(),
                ))
            }
        };
        let rank = self
            .rank
            .or_else(|| config.get_usize("rank"))
            .ok_or_else(|| Error::Usage("--family requires --rank".into()))?;
        let alg = Algebra::shared(family, rank)?;
        let theta_spec = self
            .theta
            .clone()
            .or_else(|| config.get_str("theta").map(str::to_string))
            .unwrap_or_default();
        let indices = parse_index_list(&theta_spec)?;
        FlagSpace::from_simple_indices(alg, &indices)
    }
}

/// Parse "1,3,4" into indices; empty input is the empty set.
pub fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::Usage(format!("bad index `{tok}` in list `{s}`")))
        })
        .collect()
}

/// Parse "1.0,2.5" into metric weights for the flag's components.
pub fn parse_metric(flag: &FlagSpace, spec: Option<&str>) -> Result<InvariantMetric> {
    match spec {
        None => Ok(flag.normal_metric()),
        Some(s) => {
            let lambdas: Vec<f64> = s
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Usage(format!("bad metric weight `{tok}`")))
                })
                .collect::<Result<_>>()?;
            flag.metric(lambdas)
        }
    }
}

/// Parse a root label such as `a13`, `a13+`, `a[1,13]`, or `a+[1,3]`.
pub fn parse_root(flag: &FlagSpace, label: &str) -> Result<Root> {
    flag.algebra().root_system().parse_label(label.trim())
}

/// Parse a tangent-vector expression.
///
/// Terms are separated by whitespace or commas. Each term is
/// `[coef*]KIND`, where KIND is `A` or `S` followed by a root body:
/// `A12`, `S12+`, `A[1,13]`, `A+[1,2]`, optionally prefixed by `-`.
pub fn parse_vector(flag: &FlagSpace, expr: &str) -> Result<MVector> {
    let rs = flag.algebra().root_system();
    let mut acc = flag.zero_m();
    let mut any = false;
    for raw in expr.split([' ', ',', ';']) {
        let term = raw.trim();
        if term.is_empty() {
            continue;
        }
        any = true;
        let (sign, term) = match term.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, term),
        };
        let (coef, name) = match term.split_once('*') {
            Some((c, n)) => (
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Usage(format!("bad coefficient in `{raw}`")))?,
                n.trim(),
            ),
            None => (1.0, term),
        };
        let mut chars = name.chars();
        let kind = chars.next().ok_or_else(|| Error::Usage(format!("empty term `{raw}`")))?;
        let body = chars.as_str();
        let label = format!("a{body}");
        let root = rs.parse_label(&label)?;
        let part = match kind {
            'A' | 'a' => flag.a_vector(&root)?,
            'S' | 's' => flag.s_vector(&root)?,
            other => {
                return Err(Error::Usage(format!(
                    "unknown direction `{other}` in `{raw}` (expected A or S)"
                )))
            }
        };
        acc = acc.add(&part.scale(sign * coef));
    }
    if !any {
        return Err(Error::Usage("empty vector expression".into()));
    }
    Ok(acc)
}

/// Defaults loaded from a plain `key = value` file; flags override these.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    map: BTreeMap<String, String>,
}

impl ConfigMap {
    /// Load from a file; `#` starts a comment.
    pub fn load(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for line in body.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Usage(format!("config line without `=`: `{line}`"))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigMap { map })
    }

    /// Raw string lookup.
    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    /// Float lookup.
    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.map.get(key).and_then(|v| v.parse().ok())
    }

    /// Integer lookup.
    pub fn get_usize(&self, key: &str) -> Option<usize> {
        self.map.get(key).and_then(|v| v.parse().ok())
    }
}

/// Flag-then-config-then-default resolution for floats.
pub fn resolve_f64(flag: Option<f64>, config: &ConfigMap, key: &str, default: f64) -> f64 {
    flag.or_else(|| config.get_f64(key)).unwrap_or(default)
}

/// Flag-then-config-then-default resolution for integers.
pub fn resolve_usize(flag: Option<usize>, config: &ConfigMap, key: &str, default: usize) -> usize {
    flag.or_else(|| config.get_usize(key)).unwrap_or(default)
}
