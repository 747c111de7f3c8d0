//! Experiment config documents: flat `key = value` lines, `#` comments,
//! repeated keys forming lists. The grammar is documented in
//! `docs/config.md`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;

use log::warn;
use num_complex::Complex64;

use crate::interaction::{preset_tfim, GroundStateConfig, Interaction, LocalTerm};
use crate::lattice::{Site, Spin, Volume, DEFAULT_MAX_QUBITS};
use crate::linalg::CMatrix;
use crate::typicality::HRefPolicy;

/// Defaults are applied when a key is absent.
pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_LLN_T: f64 = 1.0;
pub const DEFAULT_RATE_OFFSET: f64 = 0.2;
pub const DEFAULT_GROUND_PERIOD: usize = 2;
pub const DEFAULT_DECOMPOSITION_FACTOR: usize = 2;
pub const DEFAULT_OUT: &str = "out";

/// One problem found while reading a config document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}, field `{}`: {}", self.field, self.message),
            None => write!(f, "field `{}`: {}", self.field, self.message),
        }
    }
}

/// Every diagnostic from one validation pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, d) in self.0.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Tfim { coupling: f64, field: f64 },
    Generic { terms: Vec<TermSpec> },
}

/// A user-defined translation-invariant term.
#[derive(Clone, Debug, PartialEq)]
pub struct TermSpec {
    pub name: String,
    pub support: Vec<Site>,
    pub classical: Vec<f64>,
    /// `(row, col, value)` entries of the off-diagonal part.
    pub entries: Vec<(usize, usize, Complex64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VolumeSpec {
    /// `[-n, n]^d`.
    Cube(u32),
    /// Sites `0..len` of a d = 1 chain.
    Chain(usize),
}

impl VolumeSpec {
    pub fn n_sites(&self, dim: usize) -> usize {
        match *self {
            VolumeSpec::Cube(n) => (2 * n as usize + 1).saturating_pow(dim as u32),
            VolumeSpec::Chain(len) => len,
        }
    }

    pub fn shape(&self) -> &'static str {
        match self {
            VolumeSpec::Cube(_) => "cube",
            VolumeSpec::Chain(_) => "chain",
        }
    }

    /// `n` for a cube, the length for a chain.
    pub fn parameter(&self) -> usize {
        match *self {
            VolumeSpec::Cube(n) => n as usize,
            VolumeSpec::Chain(len) => len,
        }
    }

    pub fn build(&self, dim: usize, max_qubits: usize) -> crate::Result<Volume> {
        match *self {
            VolumeSpec::Cube(n) => Volume::hypercube(n, dim, max_qubits),
            VolumeSpec::Chain(len) => Volume::chain(len, max_qubits),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundarySpec {
    AllUp,
    AllDown,
    /// The `k`-th periodic ground state in canonical order.
    Ground(usize),
    Cell(GroundStateConfig),
}

impl fmt::Display for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundarySpec::AllUp => f.write_str("all-up"),
            BoundarySpec::AllDown => f.write_str("all-down"),
            BoundarySpec::Ground(k) => write!(f, "ground:{k}"),
            BoundarySpec::Cell(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionKind {
    Eigen,
    Random,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub dim: usize,
    pub lambda: f64,
    pub norm_constant: f64,
    pub beta: f64,
    pub volumes: Vec<VolumeSpec>,
    pub deltas: Vec<f64>,
    pub boundary: BoundarySpec,
    pub ground_period: usize,
    pub h_ref: HRefPolicy,
    pub lln_t: Vec<f64>,
    pub rates: Vec<f64>,
    pub rate_offsets: Vec<f64>,
    pub seed: u64,
    pub max_qubits: usize,
    pub out: PathBuf,
    pub decomposition: DecompositionKind,
    pub decomposition_factor: usize,
}

impl ExperimentConfig {
    pub fn interaction(&self) -> crate::Result<Interaction> {
        match &self.model {
            ModelSpec::Tfim { coupling, field } => preset_tfim(*coupling, *field, self.lambda),
            ModelSpec::Generic { terms } => {
                let built = terms
                    .iter()
                    .map(|t| {
                        let size = 1usize << t.support.len();
                        let mut q = CMatrix::zeros(size, size);
                        for &(r, c, v) in &t.entries {
                            q[(r, c)] += v;
                        }
                        LocalTerm::new(t.support.clone(), t.classical.clone(), q)
                    })
                    .collect::<crate::Result<Vec<_>>>()?;
                Interaction::new(self.dim, built, self.lambda, self.norm_constant)
            }
        }
    }

    /// The boundary condition, searching ground states when asked to.
    pub fn boundary_condition(&self, phi: &Interaction) -> crate::Result<GroundStateConfig> {
        match &self.boundary {
            BoundarySpec::AllUp => Ok(GroundStateConfig::all_up(self.dim)),
            BoundarySpec::AllDown => Ok(GroundStateConfig::all_down(self.dim)),
            BoundarySpec::Cell(c) => Ok(c.clone()),
            BoundarySpec::Ground(k) => {
                let found = phi.find_periodic_ground_states(self.ground_period)?;
                found.get(*k).cloned().ok_or_else(|| {
                    crate::Error::Domain(format!("ground:{k} requested but only {} ground states found", found.len()))
                })
            }
        }
    }
}

/// Key occurrences in document order, with line numbers.
type Entries = BTreeMap<String, Vec<(usize, String)>>;

const SCALAR_KEYS: &[&str] = &[
    "model",
    "d",
    "J",
    "h_field",
    "lambda",
    "c",
    "beta",
    "boundary",
    "ground_period",
    "h_ref",
    "seed",
    "max_qubits",
    "out",
    "decomposition",
    "decomposition_factor",
];
const LIST_KEYS: &[&str] = &["volume", "chain", "delta", "lln_t", "rate", "rate_offset"];

struct Reader {
    entries: Entries,
    diags: Vec<Diagnostic>,
}

impl Reader {
    fn fail(&mut self, line: Option<usize>, field: &str, message: impl Into<String>) {
        self.diags.push(Diagnostic { line, field: field.to_string(), message: message.into() });
    }

    fn scalar(&mut self, key: &str) -> Option<(usize, String)> {
        let values = self.entries.get(key)?.clone();
        if values.len() > 1 {
            self.fail(Some(values[1].0), key, "given more than once");
        }
        values.into_iter().next()
    }

    fn parse_scalar<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Option<(usize, T)> {
        let (line, raw) = self.scalar(key)?;
        match raw.parse::<T>() {
            Ok(v) => Some((line, v)),
            Err(_) => {
                self.fail(Some(line), key, format!("expected {what}, got {raw:?}"));
                None
            }
        }
    }

    fn float(&mut self, key: &str, default: f64) -> f64 {
        match self.parse_scalar::<f64>(key, "a number") {
            Some((line, v)) if !v.is_finite() => {
                self.fail(Some(line), key, "must be finite");
                default
            }
            Some((_, v)) => v,
            None => default,
        }
    }

    fn float_list(&mut self, key: &str) -> Vec<(usize, f64)> {
        let values = self.entries.get(key).cloned().unwrap_or_default();
        let mut out = Vec::new();
        for (line, raw) in values {
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => out.push((line, v)),
                Ok(_) => self.fail(Some(line), key, "must be finite"),
                Err(_) => self.fail(Some(line), key, format!("expected a number, got {raw:?}")),
            }
        }
        out
    }
}

/// Splits a document into key occurrences.
fn tokenize(text: &str, diags: &mut Vec<Diagnostic>) -> Entries {
    let mut entries = Entries::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            diags.push(Diagnostic { line: Some(line), field: content.to_string(), message: "expected `key = value`".into() });
            continue;
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            diags.push(Diagnostic { line: Some(line), field: String::new(), message: "missing key".into() });
            continue;
        }
        let known = SCALAR_KEYS.contains(&key) || LIST_KEYS.contains(&key) || term_field(key).is_some();
        if !known {
            diags.push(Diagnostic { line: Some(line), field: key.to_string(), message: "unknown key".into() });
            continue;
        }
        entries.entry(key.to_string()).or_default().push((line, value.to_string()));
    }
    entries
}

/// `term.<name>.<field>` split into name and field.
fn term_field(key: &str) -> Option<(&str, &str)> {
    let rest = key.strip_prefix("term.")?;
    let (name, field) = rest.rsplit_once('.')?;
    (!name.is_empty() && matches!(field, "support" | "classical" | "entry")).then_some((name, field))
}

/// Reads and fully validates a config document.
pub fn validate_config(text: &str) -> Result<ExperimentConfig, Diagnostics> {
    let mut diags = Vec::new();
    let entries = tokenize(text, &mut diags);
    let mut r = Reader { entries, diags };

    let dim = match r.parse_scalar::<usize>("d", "a positive integer") {
        Some((line, 0)) => {
            r.fail(Some(line), "d", "must be at least 1");
            1
        }
        Some((_, d)) => d,
        None => 1,
    };

    let lambda_given = r.entries.contains_key("lambda");
    let lambda = r.float("lambda", 0.0);
    if lambda < 0.0 {
        let line = r.entries["lambda"][0].0;
        r.fail(Some(line), "lambda", "must be non-negative");
    }
    let norm_constant = r.float("c", 1.0);
    if norm_constant < 0.0 {
        let line = r.entries["c"][0].0;
        r.fail(Some(line), "c", "must be non-negative");
    }

    let model_name = r.scalar("model").unwrap_or((0, "tfim".into()));
    let model = match model_name.1.as_str() {
        "tfim" => {
            for key in r.entries.keys().filter(|k| k.starts_with("term.")).cloned().collect::<Vec<_>>() {
                let line = r.entries[&key][0].0;
                r.fail(Some(line), &key, "term definitions need `model = generic`");
            }
            ModelSpec::Tfim { coupling: r.float("J", 1.0), field: r.float("h_field", 0.0) }
        }
        "generic" => {
            for key in ["J", "h_field"] {
                if let Some(v) = r.entries.get(key) {
                    let line = v[0].0;
                    r.fail(Some(line), key, "only meaningful for `model = tfim`");
                }
            }
            let terms = parse_terms(&mut r, dim);
            if terms.is_empty() {
                r.fail(Some(model_name.0), "model", "a generic model needs at least one term");
            }
            if lambda_given && terms.iter().all(|t| t.entries.is_empty()) {
                warn!("lambda is set but the generic model has no quantum term");
            }
            ModelSpec::Generic { terms }
        }
        other => {
            r.fail(Some(model_name.0), "model", format!("expected `tfim` or `generic`, got {other:?}"));
            ModelSpec::Tfim { coupling: 1.0, field: 0.0 }
        }
    };

    let beta = match r.parse_scalar::<f64>("beta", "a number") {
        Some((line, b)) if !(b.is_finite() && b > 0.0) => {
            r.fail(Some(line), "beta", "must be positive and finite");
            1.0
        }
        Some((_, b)) => b,
        None => {
            r.fail(None, "beta", "required");
            1.0
        }
    };

    let volumes = parse_volumes(&mut r, dim);

    let mut deltas = Vec::new();
    for (line, d) in r.float_list("delta") {
        if d <= 0.0 {
            r.fail(Some(line), "delta", "must be positive");
        } else {
            deltas.push(d);
        }
    }
    if deltas.is_empty() && !r.entries.contains_key("delta") {
        deltas.push(DEFAULT_DELTA);
    }

    let boundary = match r.scalar("boundary") {
        None => BoundarySpec::AllUp,
        Some((line, raw)) => match parse_boundary(&raw, dim) {
            Ok(b) => b,
            Err(msg) => {
                r.fail(Some(line), "boundary", msg);
                BoundarySpec::AllUp
            }
        },
    };
    let ground_period = match r.parse_scalar::<usize>("ground_period", "a positive integer") {
        Some((line, 0)) => {
            r.fail(Some(line), "ground_period", "must be at least 1");
            DEFAULT_GROUND_PERIOD
        }
        Some((_, p)) => p,
        None => DEFAULT_GROUND_PERIOD,
    };

    let h_ref = match r.scalar("h_ref") {
        None => HRefPolicy::PerVolume,
        Some((_, raw)) if raw == "per-volume" => HRefPolicy::PerVolume,
        Some((line, raw)) => match raw.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => HRefPolicy::Fixed(v),
            _ => {
                r.fail(Some(line), "h_ref", format!("expected `per-volume` or a non-negative number, got {raw:?}"));
                HRefPolicy::PerVolume
            }
        },
    };

    let mut lln_t: Vec<f64> = r.float_list("lln_t").into_iter().map(|(_, t)| t).collect();
    if lln_t.is_empty() && !r.entries.contains_key("lln_t") {
        lln_t.push(DEFAULT_LLN_T);
    }
    let mut rates = Vec::new();
    for (line, v) in r.float_list("rate") {
        if v < 0.0 {
            r.fail(Some(line), "rate", "must be non-negative");
        } else {
            rates.push(v);
        }
    }
    let mut rate_offsets: Vec<f64> = r.float_list("rate_offset").into_iter().map(|(_, v)| v).collect();
    if rate_offsets.is_empty() && !r.entries.contains_key("rate_offset") && rates.is_empty() {
        rate_offsets.push(DEFAULT_RATE_OFFSET);
    }

    let seed = r.parse_scalar::<u64>("seed", "an unsigned integer").map_or(0, |(_, s)| s);
    let max_qubits = match r.parse_scalar::<usize>("max_qubits", "a positive integer") {
        Some((line, 0)) => {
            r.fail(Some(line), "max_qubits", "must be at least 1");
            DEFAULT_MAX_QUBITS
        }
        Some((_, q)) => q,
        None => DEFAULT_MAX_QUBITS,
    };
    let out = r.scalar("out").map_or_else(|| PathBuf::from(DEFAULT_OUT), |(_, p)| PathBuf::from(p));
    let decomposition = match r.scalar("decomposition") {
        None => DecompositionKind::Random,
        Some((_, raw)) if raw == "random" => DecompositionKind::Random,
        Some((_, raw)) if raw == "eigen" => DecompositionKind::Eigen,
        Some((line, raw)) => {
            r.fail(Some(line), "decomposition", format!("expected `random` or `eigen`, got {raw:?}"));
            DecompositionKind::Random
        }
    };
    let decomposition_factor = match r.parse_scalar::<usize>("decomposition_factor", "a positive integer") {
        Some((line, 0)) => {
            r.fail(Some(line), "decomposition_factor", "must be at least 1");
            DEFAULT_DECOMPOSITION_FACTOR
        }
        Some((_, f)) => f,
        None => DEFAULT_DECOMPOSITION_FACTOR,
    };

    if !r.diags.is_empty() {
        r.diags.sort_by_key(|d| d.line.unwrap_or(usize::MAX));
        return Err(Diagnostics(r.diags));
    }
    Ok(ExperimentConfig {
        model,
        dim,
        lambda,
        norm_constant,
        beta,
        volumes,
        deltas,
        boundary,
        ground_period,
        h_ref,
        lln_t,
        rates,
        rate_offsets,
        seed,
        max_qubits,
        out,
        decomposition,
        decomposition_factor,
    })
}

fn parse_volumes(r: &mut Reader, dim: usize) -> Vec<VolumeSpec> {
    let mut found: Vec<(usize, &'static str, VolumeSpec)> = Vec::new();
    for (key, is_cube) in [("volume", true), ("chain", false)] {
        for (line, raw) in r.entries.get(key).cloned().unwrap_or_default() {
            match raw.parse::<usize>() {
                Ok(v) if is_cube => match u32::try_from(v) {
                    Ok(n) => found.push((line, "volume", VolumeSpec::Cube(n))),
                    Err(_) => r.fail(Some(line), key, "too large"),
                },
                Ok(0) => r.fail(Some(line), key, "chain length must be at least 1"),
                Ok(v) if dim == 1 => found.push((line, "chain", VolumeSpec::Chain(v))),
                Ok(_) => r.fail(Some(line), key, "chains need d = 1"),
                Err(_) => r.fail(Some(line), key, format!("expected a non-negative integer, got {raw:?}")),
            }
        }
    }
    if found.is_empty() && !r.entries.contains_key("volume") && !r.entries.contains_key("chain") {
        r.fail(None, "volume", "at least one `volume` or `chain` line is required");
    }
    found.sort_by_key(|&(line, _, _)| line);
    for pair in found.windows(2) {
        if pair[1].2.n_sites(dim) <= pair[0].2.n_sites(dim) {
            let (line, key, _) = pair[1];
            r.fail(Some(line), key, "volumes must be strictly increasing in site count");
        }
    }
    found.into_iter().map(|(_, _, v)| v).collect()
}

/// `all-up`, `all-down`, `ground:K`, or `cell:P1xP2:spins`.
fn parse_boundary(raw: &str, dim: usize) -> Result<BoundarySpec, String> {
    match raw {
        "all-up" => return Ok(BoundarySpec::AllUp),
        "all-down" => return Ok(BoundarySpec::AllDown),
        _ => {}
    }
    if let Some(k) = raw.strip_prefix("ground:") {
        return k.parse().map(BoundarySpec::Ground).map_err(|_| format!("bad ground-state index {k:?}"));
    }
    let Some(rest) = raw.strip_prefix("cell:") else {
        return Err(format!("expected all-up, all-down, ground:K or cell:P:spins, got {raw:?}"));
    };
    let (periods, spins) = rest.split_once(':').ok_or("cell needs `cell:P1xP2:spins`")?;
    let periods = periods
        .split('x')
        .map(|p| p.parse::<usize>().map_err(|_| format!("bad period {p:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if periods.len() != dim {
        return Err(format!("cell has {} periods but d = {dim}", periods.len()));
    }
    let cell = spins
        .chars()
        .map(|c| match c {
            '+' => Ok(Spin::Up),
            '-' => Ok(Spin::Down),
            _ => Err(format!("spin symbols are `+` and `-`, got {c:?}")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroundStateConfig::new(periods, cell).map(BoundarySpec::Cell).map_err(|e| e.to_string())
}

fn parse_site(raw: &str, dim: usize) -> Result<Site, String> {
    let coords = raw
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|_| format!("bad coordinate {c:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != dim {
        return Err(format!("site {raw:?} has {} coordinates but d = {dim}", coords.len()));
    }
    Ok(Site::new(coords))
}

/// First line, support, classical values and entries seen for one term.
type TermSlot = (usize, Option<Vec<Site>>, Option<Vec<f64>>, Vec<(usize, usize, Complex64)>);

fn parse_terms(r: &mut Reader, dim: usize) -> Vec<TermSpec> {
    let mut by_name: HashMap<String, TermSlot> = HashMap::new();
    let keys: Vec<String> = r.entries.keys().filter(|k| k.starts_with("term.")).cloned().collect();
    for key in keys {
        let (name, field) = term_field(&key).expect("tokenizer only admits term fields");
        let name = name.to_string();
        let occurrences = r.entries[&key].clone();
        let first_line = occurrences[0].0;
        let slot = by_name.entry(name.clone()).or_insert((first_line, None, None, Vec::new()));
        slot.0 = slot.0.min(first_line);
        match field {
            "support" | "classical" if occurrences.len() > 1 => {
                r.fail(Some(occurrences[1].0), &key, "given more than once");
            }
            "support" => {
                let (line, raw) = &occurrences[0];
                match raw.split(';').map(|s| parse_site(s, dim)).collect::<Result<Vec<_>, _>>() {
                    Ok(sites) => by_name.get_mut(&name).expect("inserted").1 = Some(sites),
                    Err(msg) => r.fail(Some(*line), &key, msg),
                }
            }
            "classical" => {
                let (line, raw) = &occurrences[0];
                match raw.split(',').map(|v| v.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>() {
                    Ok(vals) if vals.iter().all(|v| v.is_finite()) => {
                        by_name.get_mut(&name).expect("inserted").2 = Some(vals)
                    }
                    _ => r.fail(Some(*line), &key, "expected comma-separated finite numbers"),
                }
            }
            _ => {
                for (line, raw) in occurrences {
                    let parts: Vec<&str> = raw.split_whitespace().collect();
                    let parsed = (parts.len() == 4)
                        .then(|| {
                            Some((
                                parts[0].parse::<usize>().ok()?,
                                parts[1].parse::<usize>().ok()?,
                                Complex64::new(parts[2].parse().ok()?, parts[3].parse().ok()?),
                            ))
                        })
                        .flatten();
                    match parsed {
                        Some(e) if e.2.re.is_finite() && e.2.im.is_finite() => {
                            by_name.get_mut(&name).expect("inserted").3.push(e)
                        }
                        _ => r.fail(Some(line), &key, "expected `row col re im`"),
                    }
                }
            }
        }
    }
    let mut terms = Vec::new();
    let mut names: Vec<_> = by_name.into_iter().collect();
    names.sort_by_key(|(_, v)| v.0);
    for (name, (line, support, classical, entries)) in names {
        let support_key = format!("term.{name}.support");
        let Some(support) = support else {
            r.fail(Some(line), &support_key, "required");
            continue;
        };
        let size = support.len();
        if size > crate::interaction::MAX_TERM_SUPPORT {
            r.fail(Some(line), &support_key, format!("at most {} sites", crate::interaction::MAX_TERM_SUPPORT));
            continue;
        }
        let dim_local = 1usize << size;
        let classical = classical.unwrap_or_else(|| vec![0.0; dim_local]);
        if classical.len() != dim_local {
            r.fail(Some(line), &format!("term.{name}.classical"), format!("needs {dim_local} values"));
            continue;
        }
        if entries.iter().any(|&(a, b, _)| a >= dim_local || b >= dim_local) {
            r.fail(Some(line), &format!("term.{name}.entry"), format!("indices must be below {dim_local}"));
            continue;
        }
        // ordering and Hermiticity are checked by LocalTerm
        let mut q = CMatrix::zeros(dim_local, dim_local);
        for &(a, b, v) in &entries {
            q[(a, b)] += v;
        }
        if let Err(e) = LocalTerm::new(support.clone(), classical.clone(), q) {
            r.fail(Some(line), &format!("term.{name}"), e.to_string());
            continue;
        }
        terms.push(TermSpec { name, support, classical, entries });
    }
    terms
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_uses_defaults() {
        let cfg = validate_config("beta = 1\nvolume = 1\n").unwrap();
        assert_eq!(cfg.model, ModelSpec::Tfim { coupling: 1.0, field: 0.0 });
        assert_eq!(cfg.dim, 1);
        assert_eq!(cfg.lambda, 0.0);
        assert_eq!(cfg.norm_constant, 1.0);
        assert_eq!(cfg.deltas, vec![DEFAULT_DELTA]);
        assert_eq!(cfg.boundary, BoundarySpec::AllUp);
        assert_eq!(cfg.h_ref, HRefPolicy::PerVolume);
        assert_eq!(cfg.lln_t, vec![DEFAULT_LLN_T]);
        assert_eq!(cfg.rate_offsets, vec![DEFAULT_RATE_OFFSET]);
        assert_eq!(cfg.max_qubits, DEFAULT_MAX_QUBITS);
        assert_eq!(cfg.decomposition, DecompositionKind::Random);
    }

    #[test]
    fn lists_and_comments() {
        let doc = "# exhibit\nbeta = 2 # inverse temperature\nchain = 4\nchain = 6\ndelta = 0.1\ndelta = 0.2\nboundary = cell:2:+-\nh_ref = 0.5\n";
        let cfg = validate_config(doc).unwrap();
        assert_eq!(cfg.volumes, vec![VolumeSpec::Chain(4), VolumeSpec::Chain(6)]);
        assert_eq!(cfg.deltas, vec![0.1, 0.2]);
        assert_eq!(cfg.h_ref, HRefPolicy::Fixed(0.5));
        assert_eq!(cfg.boundary.to_string(), "cell:2:+-");
    }

    #[test]
    fn negative_beta_names_line_and_field() {
        let err = validate_config("volume = 1\nbeta = -1\n").unwrap_err();
        assert_eq!(err.0.len(), 1);
        assert_eq!(err.0[0].line, Some(2));
        assert_eq!(err.0[0].field, "beta");
        assert!(err.to_string().contains("line 2, field `beta`"));
    }

    #[test]
    fn volumes_out_of_order() {
        let err = validate_config("beta = 1\nvolume = 2\nvolume = 1\n").unwrap_err();
        assert_eq!(err.0[0].field, "volume");
        assert_eq!(err.0[0].line, Some(3));
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = validate_config("beta = 1\nvolume = 1\ntemperature = 3\n").unwrap_err();
        assert_eq!(err.0[0].field, "temperature");
        assert!(validate_config("beta = 1\nvolume = 1\nno equals sign\n").is_err());
    }

    #[test]
    fn generic_model_terms() {
        let doc = "model = generic\nbeta = 1\nchain = 2\nterm.zz.support = 0;1\nterm.zz.classical = -1, 1, 1, -1\nterm.x.support = 0\nterm.x.entry = 0 1 -0.1 0\nterm.x.entry = 1 0 -0.1 0\nlambda = 0.1\n";
        let cfg = validate_config(doc).unwrap();
        let ModelSpec::Generic { terms } = &cfg.model else { panic!("generic") };
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].name, "zz");
        let phi = cfg.interaction().unwrap();
        assert!(phi.has_quantum_part());
        // quantum part must be Hermitian
        let bad = doc.replace("1 0 -0.1 0", "1 0 0.3 0");
        assert!(validate_config(&bad).is_err());
    }

    #[test]
    fn lambda_without_quantum_term_is_only_a_warning() {
        let doc = "model = generic\nbeta = 1\nchain = 2\nterm.zz.support = 0;1\nterm.zz.classical = -1, 1, 1, -1\nlambda = 0.3\n";
        assert!(validate_config(doc).is_ok());
    }

    #[test]
    fn bad_boundaries() {
        for b in ["cell:3:+-", "cell:2x2:+-+-", "sideways", "ground:x"] {
            let err = validate_config(&format!("beta = 1\nvolume = 1\nboundary = {b}\n")).unwrap_err();
            assert_eq!(err.0[0].field, "boundary", "{b}");
        }
    }
}
