use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde_json::Value;
use shearer_core::{Dist, Family, Graph, ParamVec, Scalar, VertexSubset};

use crate::CliError;

/// Exactly one graph source.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct GraphArgs {
    /// Named family, e.g. `path:n=3`, `kfuzz:k=2,n=9`, `grid:N=4`.
    #[arg(long)]
    pub family: Option<String>,
    /// Graph file: JSON `{"n", "edges"}` or text edge list.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

/// At most one graph source.
#[derive(Args, Debug, Clone, Default)]
#[group(required = false, multiple = false)]
pub struct OptGraphArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

impl GraphArgs {
    pub fn load(&self) -> Result<Graph, CliError> {
        load_graph(self.family.as_deref(), self.graph.as_deref())
    }

    pub fn describe(&self) -> String {
        describe(self.family.as_deref(), self.graph.as_deref())
    }
}

impl OptGraphArgs {
    pub fn load(&self) -> Result<Option<Graph>, CliError> {
        if self.family.is_none() && self.graph.is_none() {
            return Ok(None);
        }
        load_graph(self.family.as_deref(), self.graph.as_deref()).map(Some)
    }

    pub fn require(&self, what: &str) -> Result<Graph, CliError> {
        self.load()?
            .ok_or_else(|| CliError::Usage(format!("{what} needs --family or --graph")))
    }

    pub fn describe(&self) -> String {
        describe(self.family.as_deref(), self.graph.as_deref())
    }
}

fn describe(family: Option<&str>, file: Option<&Path>) -> String {
    match (family, file) {
        (Some(f), _) => f.to_string(),
        (None, Some(p)) => p.display().to_string(),
        (None, None) => String::new(),
    }
}

fn load_graph(family: Option<&str>, file: Option<&Path>) -> Result<Graph, CliError> {
    match (family, file) {
        (Some(name), None) => Ok(Family::from_str(name)?.build()?),
        (None, Some(path)) => Ok(Graph::parse(&read(path)?)?),
        _ => Err(CliError::Usage("give exactly one of --family or --graph".into())),
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_dist<S: Scalar>(path: &Path) -> Result<Dist<S>, CliError> {
    Ok(Dist::from_json(&read(path)?)?)
}

/// A scalar (homogeneous) or a JSON array of per-vertex values. Decimal
/// input is exact in the rational backend.
pub fn parse_values<S: Scalar>(text: &str, n: usize) -> Result<Vec<S>, CliError> {
    let text = text.trim();
    if !text.starts_with('[') {
        return Ok(vec![S::parse_value(text)?; n]);
    }
    let raw: Vec<Value> =
        serde_json::from_str(text).map_err(|e| CliError::Core(shearer_core::Error::Parse(e.to_string())))?;
    if raw.len() != n {
        return Err(shearer_core::Error::DimensionMismatch { left: raw.len(), right: n }.into());
    }
    raw.iter()
        .map(|v| match v {
            Value::Number(x) => Ok(S::parse_value(&x.to_string())?),
            Value::String(s) => Ok(S::parse_value(s)?),
            other => Err(shearer_core::Error::Parse(format!("bad value {other}")).into()),
        })
        .collect()
}

pub fn parse_params<S: Scalar>(text: &str, n: usize) -> Result<ParamVec<S>, CliError> {
    Ok(ParamVec::new(parse_values(text, n)?)?)
}

pub fn parse_f64s(text: &str, n: usize) -> Result<Vec<f64>, CliError> {
    parse_values::<f64>(text, n)
}

/// `"0,2,5"`; empty means the empty set.
pub fn parse_subset(text: &str) -> Result<VertexSubset, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Core(shearer_core::Error::Parse(format!("bad vertex '{s}'"))))
        })
        .collect()
}

/// `"3,3,3"`.
pub fn parse_triple(text: &str) -> Result<(usize, usize, usize), CliError> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| shearer_core::Error::Parse(format!("expected n,k,l, got '{text}'")))?;
    match parts.as_slice() {
        [a, b, c] => Ok((*a, *b, *c)),
        _ => Err(shearer_core::Error::Parse(format!("expected n,k,l, got '{text}'")).into()),
    }
}
