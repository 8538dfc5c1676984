//! JSON model configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::model::{build_mass_spring_chain, Commensurable, CouplingGraph, Edge, OscillatorModel};

/// One edge as written in a config file, with 1-based indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub i: usize,
    pub j: usize,
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommensurableConfig {
    #[serde(rename = "C_d")]
    pub c_d: Vec<Vec<f64>>,
    #[serde(rename = "C_r", default, skip_serializing_if = "Option::is_none")]
    pub c_r: Option<Vec<Vec<f64>>>,
    pub d: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub masses: Vec<f64>,
    pub springs: Vec<f64>,
}

/// File schema. Exactly one of (`M`, `K`) or `chain` describes the oscillator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub q: usize,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<Vec<f64>>>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dissipative: Vec<EdgeConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restorative: Vec<EdgeConfig>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commensurable: Option<CommensurableConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainConfig>,
}

fn default_epsilon() -> f64 {
    1.0
}

/// Reads and validates a config file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<(OscillatorModel, CouplingGraph)> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_str(&text)
}

/// Parses config text; every validation problem is reported, not just the first.
pub fn parse_config_str(text: &str) -> Result<(OscillatorModel, CouplingGraph)> {
    let cfg: Config = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    build(&cfg)
}

fn matrix(name: &str, rows: &[Vec<f64>], errors: &mut Vec<String>) -> Option<RealMatrix> {
    if rows.is_empty() {
        errors.push(format!("{name} is empty"));
        return None;
    }
    match RealMatrix::from_rows(rows) {
        Ok(m) => Some(m),
        Err(e) => {
            errors.push(format!("{name}: {e}"));
            None
        }
    }
}

fn edges(kind: &str, list: &[EdgeConfig], q: usize, errors: &mut Vec<String>) -> Vec<Edge> {
    let mut out = Vec::new();
    for (idx, e) in list.iter().enumerate() {
        let label = format!("{kind}[{idx}] ({},{})", e.i, e.j);
        if e.i == 0 || e.j == 0 || e.i > q || e.j > q {
            errors.push(format!(
                "{label}: indices are 1-based and must lie in 1..={q}"
            ));
            continue;
        }
        if let Some(w) = matrix(&format!("{label} W"), &e.w, errors) {
            out.push(Edge::new(e.i - 1, e.j - 1, w));
        }
    }
    out
}

fn collect<T>(r: Result<T>, errors: &mut Vec<String>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(Error::InvalidModel(v)) => {
            errors.extend(v);
            None
        }
        Err(e) => {
            errors.push(e.to_string());
            None
        }
    }
}

/// Validates a parsed config into model objects.
pub fn build(cfg: &Config) -> Result<(OscillatorModel, CouplingGraph)> {
    let mut errors = Vec::new();
    let model = match (&cfg.m, &cfg.k, &cfg.chain) {
        (Some(m), Some(k), None) => {
            let m = matrix("M", m, &mut errors);
            let k = matrix("K", k, &mut errors);
            match (m, k) {
                (Some(m), Some(k)) => collect(OscillatorModel::new(m, k), &mut errors),
                _ => None,
            }
        }
        (None, None, Some(chain)) => collect(
            build_mass_spring_chain(&chain.masses, &chain.springs),
            &mut errors,
        ),
        (_, _, Some(_)) => {
            errors.push("give either M and K or chain, not both".into());
            None
        }
        _ => {
            errors.push("the oscillator needs both M and K, or a chain".into());
            None
        }
    };
    if let (Some(model), Some(n)) = (&model, cfg.n) {
        if model.n() != n {
            errors.push(format!(
                "n = {n} but the oscillator has {} degrees of freedom",
                model.n()
            ));
        }
    }
    let n = model.as_ref().map(OscillatorModel::n).or(cfg.n);

    let graph = match &cfg.commensurable {
        Some(c) => {
            if !cfg.dissipative.is_empty() || !cfg.restorative.is_empty() {
                errors.push(
                    "commensurable coupling replaces the explicit edge lists; give one or the other"
                        .into(),
                );
            }
            let c_d = matrix("C_d", &c.c_d, &mut errors);
            let c_r = c.c_r.as_ref().and_then(|m| matrix("C_r", m, &mut errors));
            let d = matrix("d", &c.d, &mut errors);
            let r = match &c.r {
                Some(r) => matrix("r", r, &mut errors),
                None => Some(RealMatrix::zeros(cfg.q, cfg.q)),
            };
            if c.c_r.is_none() && c.r.is_some() {
                errors.push("r is given without C_r".into());
            }
            match (c_d, d, r) {
                (Some(c_d), Some(d), Some(r)) => {
                    if let Some(n) = n {
                        if c_d.cols() != n {
                            errors
                                .push(format!("C_d has {} columns, expected n = {n}", c_d.cols()));
                        }
                    }
                    collect(
                        CouplingGraph::commensurable(
                            cfg.q,
                            Commensurable { c_d, c_r, d, r },
                            cfg.epsilon,
                        ),
                        &mut errors,
                    )
                }
                _ => None,
            }
        }
        None => {
            let diss = edges("dissipative", &cfg.dissipative, cfg.q, &mut errors);
            let rest = edges("restorative", &cfg.restorative, cfg.q, &mut errors);
            match n {
                Some(n) => collect(
                    CouplingGraph::new(cfg.q, n, diss, rest, cfg.epsilon),
                    &mut errors,
                ),
                None => None,
            }
        }
    };
    match (model, graph) {
        (Some(m), Some(g)) if errors.is_empty() => Ok((m, g)),
        _ => Err(Error::InvalidModel(errors)),
    }
}

/// Config describing `(model, graph)` with explicit `M`, `K`.
pub fn to_config(model: &OscillatorModel, graph: &CouplingGraph) -> Config {
    let edge = |e: &Edge| EdgeConfig {
        i: e.i + 1,
        j: e.j + 1,
        w: e.weight.to_rows(),
    };
    let (dissipative, restorative, commensurable) = match graph.commensurable_data() {
        Some(c) => (
            Vec::new(),
            Vec::new(),
            Some(CommensurableConfig {
                c_d: c.c_d.to_rows(),
                c_r: c.c_r.as_ref().map(RealMatrix::to_rows),
                d: c.d.to_rows(),
                r: c.c_r.as_ref().map(|_| c.r.to_rows()),
            }),
        ),
        None => (
            graph.dissipative().iter().map(edge).collect(),
            graph.restorative().iter().map(edge).collect(),
            None,
        ),
    };
    Config {
        n: Some(model.n()),
        q: graph.q(),
        m: Some(model.mass().to_rows()),
        k: Some(model.stiffness().to_rows()),
        dissipative,
        restorative,
        epsilon: graph.epsilon(),
        commensurable,
        chain: None,
    }
}

/// Serializes `(model, graph)`; floats use shortest round-trip form.
pub fn write_config(model: &OscillatorModel, graph: &CouplingGraph) -> String {
    serde_json::to_string_pretty(&to_config(model, graph)).expect("config is serializable")
}
