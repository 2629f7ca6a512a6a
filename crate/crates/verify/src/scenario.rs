//! Line-oriented scenario files.
//!
//! ```text
//! # comment
//! algebra gl 2                  # gl N | so3 | poincare2 | abelian K | file PATH
//! pairing symtrace n=1          # symtrace n=N | custom PATH
//! dim 5
//! degree 2
//! terms 3
//! seed 7
//! connection c0 random degree=2 terms=3
//! connection c1 file conn.txt
//! connection c2 zero
//! descent p=0,1,2
//! gauge pairs=2
//! corrupt curvature
//! spotcheck 3
//! suite all
//! ```
//!
//! Connection files hold `A i dx poly` and `B i dx poly` lines, where `i` is a
//! 1-based basis index, `dx` a comma-separated list of 1-based coordinate
//! indices and `poly` the rest of the line, e.g. `A 2 3 x1^2 - 1/2*x4`.

use std::fmt;
use std::path::{Path, PathBuf};

use hgauge::algebra::{builtin, parse_crossed_module, parse_pairing, DifferentialCrossedModule, InvariantPolynomial};
use hgauge::forms::{BiGradedForm, ValueKind};
use hgauge::gauge::{GaugePair, TwoConnection};
use hgauge::random::{random_connection, random_constant_gauge, random_unipotent_gauge, rng, PolyShape};
use hgauge::{parse_poly, Registry, VarRegistry};

/// Largest supported spacetime dimension.
pub const MAX_DIM: usize = 16;

const GAUGE_STREAM: u64 = 0x6761_7567_6500_0001;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioError {
    pub path: String,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ScenarioError {
    fn at(path: &str, line: usize, col: usize, msg: impl Into<String>) -> Self {
        ScenarioError { path: path.to_string(), line, col, msg: msg.into() }
    }

    fn from_core(path: &str, line: usize, col: usize, e: hgauge::Error) -> Self {
        match e {
            hgauge::Error::Parse { path: p, line: l, col: c, msg } if !p.is_empty() => ScenarioError { path: p, line: l, col: c, msg },
            other => ScenarioError::at(path, line, col, other.to_string()),
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.path, self.line, self.col, self.msg)
    }
}

impl std::error::Error for ScenarioError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Validate,
    Bianchi,
    Closedness,
    ChernWeil,
    Chsas,
    Triangle,
    Cartan,
    Descent,
    Gauge,
    GradedRelations,
    StokesSelfcal,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Validate,
        Suite::Bianchi,
        Suite::Closedness,
        Suite::ChernWeil,
        Suite::Chsas,
        Suite::Triangle,
        Suite::Cartan,
        Suite::Descent,
        Suite::Gauge,
        Suite::GradedRelations,
        Suite::StokesSelfcal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Validate => "validate",
            Suite::Bianchi => "bianchi",
            Suite::Closedness => "closedness",
            Suite::ChernWeil => "chern-weil",
            Suite::Chsas => "chsas",
            Suite::Triangle => "triangle",
            Suite::Cartan => "cartan",
            Suite::Descent => "descent",
            Suite::Gauge => "gauge",
            Suite::GradedRelations => "graded-relations",
            Suite::StokesSelfcal => "stokes-selfcal",
        }
    }

    /// Parses one suite name; `all` expands to every suite.
    pub fn parse(s: &str) -> Option<Vec<Suite>> {
        if s == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|x| x.name() == s).map(|x| vec![*x])
    }

    fn connections_needed(self, levels: &[usize]) -> usize {
        match self {
            Suite::Validate | Suite::StokesSelfcal => 0,
            Suite::Bianchi | Suite::Closedness | Suite::Chsas | Suite::Gauge => 1,
            Suite::ChernWeil | Suite::Cartan | Suite::GradedRelations => 2,
            Suite::Triangle => 3,
            Suite::Descent => levels.iter().max().map_or(0, |p| p + 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraChoice {
    Gl(usize),
    So3,
    Poincare2,
    Abelian(usize),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairingChoice {
    Symtrace(usize),
    Custom(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionSource {
    Random { degree: Option<u32>, terms: Option<usize> },
    File(PathBuf),
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionDecl {
    pub name: String,
    pub source: ConnectionSource,
    pub line: usize,
}

/// A parsed but unresolved scenario; overrides apply at this stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub path: String,
    pub algebra: AlgebraChoice,
    pub algebra_line: usize,
    pub pairing: PairingChoice,
    pub pairing_line: usize,
    pub dim: usize,
    pub degree: u32,
    pub terms: usize,
    pub seed: Option<u64>,
    pub connections: Vec<ConnectionDecl>,
    pub suites: Vec<Suite>,
    pub levels: Vec<usize>,
    pub gauge_pairs: usize,
    pub corrupt_curvature: bool,
    pub spot_points: usize,
}

/// Command-line adjustments applied before resolution.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub dim: Option<usize>,
    pub degree: Option<u32>,
    pub n: Option<usize>,
    pub suites: Vec<Suite>,
    pub levels: Option<Vec<usize>>,
    pub spot_points: Option<usize>,
}

struct Line<'a> {
    path: &'a str,
    no: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> ScenarioError {
        ScenarioError::at(self.path, self.no, col, msg)
    }

    fn arity(&self, min: usize, max: usize) -> Result<(), ScenarioError> {
        let got = self.tokens.len() - 1;
        if got < min {
            let col = self.tokens.last().map_or(1, |t| t.0 + t.1.len());
            return Err(self.err(col, format!("`{}` expects at least {min} argument(s)", self.tokens[0].1)));
        }
        if got > max {
            return Err(self.err(self.tokens[max + 1].0, format!("unexpected argument `{}`", self.tokens[max + 1].1)));
        }
        Ok(())
    }

    fn int<T: std::str::FromStr>(&self, k: usize) -> Result<T, ScenarioError> {
        let (col, tok) = self.tokens[k];
        tok.parse().map_err(|_| self.err(col, format!("expected a non-negative integer, found `{tok}`")))
    }

    fn option<T: std::str::FromStr>(&self, k: usize, key: &str) -> Result<T, ScenarioError> {
        let (col, tok) = self.tokens[k];
        let Some(v) = tok.strip_prefix(key).and_then(|r| r.strip_prefix('=')) else {
            return Err(self.err(col, format!("expected `{key}=<value>`, found `{tok}`")));
        };
        v.parse().map_err(|_| self.err(col + key.len() + 1, format!("invalid value `{v}` for `{key}`")))
    }

    /// The untokenized remainder starting at token `k`.
    fn rest(&self, raw: &'a str, k: usize) -> &'a str {
        raw[self.tokens[k].0 - 1..].trim_end()
    }
}

fn tokenize<'a>(path: &'a str, no: usize, body: &'a str) -> Option<Line<'a>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (pos, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(pos),
            (true, Some(s)) => {
                tokens.push((s + 1, &body[s..pos]));
                start = None;
            }
            _ => {}
        }
    }
    (!tokens.is_empty()).then_some(Line { path, no, tokens })
}

fn parse_levels(line: &Line, k: usize) -> Result<Vec<usize>, ScenarioError> {
    let (col, tok) = line.tokens[k];
    let body = tok.strip_prefix("p=").ok_or_else(|| line.err(col, format!("expected `p=<list>`, found `{tok}`")))?;
    parse_level_list(body).map_err(|m| line.err(col + 2, m))
}

/// Parses `0,1,2`.
pub fn parse_level_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let v: usize = part.trim().parse().map_err(|_| format!("invalid level `{part}`"))?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort_unstable();
    Ok(out)
}

impl ScenarioSpec {
    /// Parses scenario text; `path` labels diagnostics.
    pub fn parse(path: &str, text: &str) -> Result<ScenarioSpec, ScenarioError> {
        let mut algebra: Option<(AlgebraChoice, usize)> = None;
        let mut pairing: Option<(PairingChoice, usize)> = None;
        let mut spec = ScenarioSpec {
            path: path.to_string(),
            algebra: AlgebraChoice::Gl(2),
            algebra_line: 0,
            pairing: PairingChoice::Symtrace(1),
            pairing_line: 0,
            dim: 5,
            degree: 2,
            terms: 3,
            seed: None,
            connections: Vec::new(),
            suites: Vec::new(),
            levels: vec![0, 1, 2],
            gauge_pairs: 2,
            corrupt_curvature: false,
            spot_points: 0,
        };
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("");
            let Some(line) = tokenize(path, i + 1, body) else { continue };
            let (col0, head) = line.tokens[0];
            match head {
                "algebra" => {
                    line.arity(1, 2)?;
                    if algebra.is_some() {
                        return Err(line.err(col0, "`algebra` given twice"));
                    }
                    let (col, kind) = line.tokens[1];
                    let choice = match kind {
                        "gl" => {
                            line.arity(2, 2)?;
                            let k: usize = line.int(2)?;
                            if !(1..=4).contains(&k) {
                                return Err(line.err(line.tokens[2].0, "gl size must be between 1 and 4"));
                            }
                            AlgebraChoice::Gl(k)
                        }
                        "abelian" => {
                            line.arity(2, 2)?;
                            let k: usize = line.int(2)?;
                            if !(1..=8).contains(&k) {
                                return Err(line.err(line.tokens[2].0, "abelian dimension must be between 1 and 8"));
                            }
                            AlgebraChoice::Abelian(k)
                        }
                        "so3" => {
                            line.arity(1, 1)?;
                            AlgebraChoice::So3
                        }
                        "poincare2" => {
                            line.arity(1, 1)?;
                            AlgebraChoice::Poincare2
                        }
                        "file" => {
                            line.arity(2, 2)?;
                            AlgebraChoice::File(PathBuf::from(line.tokens[2].1))
                        }
                        other => return Err(line.err(col, format!("unknown algebra `{other}`"))),
                    };
                    algebra = Some((choice, line.no));
                }
                "pairing" => {
                    line.arity(2, 2)?;
                    if pairing.is_some() {
                        return Err(line.err(col0, "`pairing` given twice"));
                    }
                    let choice = match line.tokens[1].1 {
                        "symtrace" => {
                            let n: usize = line.option(2, "n")?;
                            if !(1..=3).contains(&n) {
                                return Err(line.err(line.tokens[2].0, "symtrace n must be between 1 and 3"));
                            }
                            PairingChoice::Symtrace(n)
                        }
                        "custom" => PairingChoice::Custom(PathBuf::from(line.tokens[2].1)),
                        other => return Err(line.err(line.tokens[1].0, format!("unknown pairing `{other}`"))),
                    };
                    pairing = Some((choice, line.no));
                }
                "dim" => {
                    line.arity(1, 1)?;
                    spec.dim = line.int(1)?;
                    if spec.dim == 0 || spec.dim > MAX_DIM {
                        return Err(line.err(line.tokens[1].0, format!("dim must be between 1 and {MAX_DIM}")));
                    }
                }
                "degree" => {
                    line.arity(1, 1)?;
                    spec.degree = line.int(1)?;
                }
                "terms" => {
                    line.arity(1, 1)?;
                    spec.terms = line.int(1)?;
                }
                "seed" => {
                    line.arity(1, 1)?;
                    spec.seed = Some(line.int(1)?);
                }
                "connection" => {
                    line.arity(2, 4)?;
                    let (col, name) = line.tokens[1];
                    if spec.connections.iter().any(|c| c.name == name) {
                        return Err(line.err(col, format!("connection `{name}` declared twice")));
                    }
                    let source = match line.tokens[2].1 {
                        "random" => {
                            let mut degree = None;
                            let mut terms = None;
                            for k in 3..line.tokens.len() {
                                if line.tokens[k].1.starts_with("degree=") {
                                    degree = Some(line.option(k, "degree")?);
                                } else {
                                    terms = Some(line.option(k, "terms")?);
                                }
                            }
                            ConnectionSource::Random { degree, terms }
                        }
                        "file" => {
                            line.arity(3, 3)?;
                            ConnectionSource::File(PathBuf::from(line.tokens[3].1))
                        }
                        "zero" => {
                            line.arity(2, 2)?;
                            ConnectionSource::Zero
                        }
                        other => {
                            return Err(line.err(line.tokens[2].0, format!("unknown connection source `{other}`")));
                        }
                    };
                    spec.connections.push(ConnectionDecl { name: name.to_string(), source, line: line.no });
                }
                "suite" => {
                    line.arity(1, 1)?;
                    let (col, name) = line.tokens[1];
                    let suites = Suite::parse(name).ok_or_else(|| line.err(col, format!("unknown suite `{name}`")))?;
                    for s in suites {
                        if !spec.suites.contains(&s) {
                            spec.suites.push(s);
                        }
                    }
                }
                "descent" => {
                    line.arity(1, 1)?;
                    spec.levels = parse_levels(&line, 1)?;
                }
                "gauge" => {
                    line.arity(1, 1)?;
                    spec.gauge_pairs = line.option(1, "pairs")?;
                }
                "corrupt" => {
                    line.arity(1, 1)?;
                    if line.tokens[1].1 != "curvature" {
                        return Err(line.err(line.tokens[1].0, format!("unknown fixture `{}`", line.tokens[1].1)));
                    }
                    spec.corrupt_curvature = true;
                }
                "spotcheck" => {
                    line.arity(1, 1)?;
                    spec.spot_points = line.int(1)?;
                }
                other => return Err(line.err(col0, format!("unknown directive `{other}`"))),
            }
        }
        let (a, al) = algebra.ok_or_else(|| ScenarioError::at(path, 0, 0, "missing `algebra` directive"))?;
        spec.algebra = a;
        spec.algebra_line = al;
        if let Some((p, pl)) = pairing {
            spec.pairing = p;
            spec.pairing_line = pl;
        }
        if spec.suites.is_empty() {
            spec.suites = Suite::ALL.to_vec();
        }
        Ok(spec)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ScenarioError> {
        if let Some(s) = o.seed {
            self.seed = Some(s);
        }
        if let Some(d) = o.dim {
            if d == 0 || d > MAX_DIM {
                return Err(ScenarioError::at(&self.path, 0, 0, format!("dim must be between 1 and {MAX_DIM}")));
            }
            self.dim = d;
        }
        if let Some(d) = o.degree {
            self.degree = d;
        }
        if let Some(n) = o.n {
            match self.pairing {
                PairingChoice::Symtrace(_) => self.pairing = PairingChoice::Symtrace(n),
                PairingChoice::Custom(_) => {
                    return Err(ScenarioError::at(&self.path, self.pairing_line, 1, "--n cannot override a custom pairing"));
                }
            }
        }
        if !o.suites.is_empty() {
            self.suites = o.suites.clone();
        }
        if let Some(l) = &o.levels {
            self.levels = l.clone();
        }
        if let Some(s) = o.spot_points {
            self.spot_points = s;
        }
        Ok(())
    }

    /// Normalized directive listing, used for hashing.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        let alg = match &self.algebra {
            AlgebraChoice::Gl(k) => format!("gl {k}"),
            AlgebraChoice::So3 => "so3".into(),
            AlgebraChoice::Poincare2 => "poincare2".into(),
            AlgebraChoice::Abelian(k) => format!("abelian {k}"),
            AlgebraChoice::File(p) => format!("file {}", p.display()),
        };
        out += &format!("algebra {alg}\n");
        match &self.pairing {
            PairingChoice::Symtrace(n) => out += &format!("pairing symtrace n={n}\n"),
            PairingChoice::Custom(p) => out += &format!("pairing custom {}\n", p.display()),
        }
        out += &format!("dim {}\ndegree {}\nterms {}\n", self.dim, self.degree, self.terms);
        if let Some(s) = self.seed {
            out += &format!("seed {s}\n");
        }
        for c in &self.connections {
            let src = match &c.source {
                ConnectionSource::Random { degree, terms } => format!(
                    "random degree={} terms={}",
                    degree.unwrap_or(self.degree),
                    terms.unwrap_or(self.terms)
                ),
                ConnectionSource::File(p) => format!("file {}", p.display()),
                ConnectionSource::Zero => "zero".into(),
            };
            out += &format!("connection {} {src}\n", c.name);
        }
        let levels: Vec<String> = self.levels.iter().map(usize::to_string).collect();
        out += &format!("descent p={}\ngauge pairs={}\n", levels.join(","), self.gauge_pairs);
        if self.corrupt_curvature {
            out += "corrupt curvature\n";
        }
        out += &format!("spotcheck {}\n", self.spot_points);
        for s in &self.suites {
            out += &format!("suite {}\n", s.name());
        }
        out
    }

    fn n(&self) -> Option<usize> {
        match self.pairing {
            PairingChoice::Symtrace(n) => Some(n),
            PairingChoice::Custom(_) => None,
        }
    }

    /// Loads files, builds the algebra and pairing, and draws random fixtures.
    pub fn resolve(&self, base: &Path) -> Result<Scenario, ScenarioError> {
        let path = self.path.as_str();
        let mut hashed_files = String::new();
        let mut read = |p: &Path, line: usize| -> Result<(String, String), ScenarioError> {
            let full = base.join(p);
            let label = full.display().to_string();
            let text = std::fs::read_to_string(&full).map_err(|e| ScenarioError::at(path, line, 1, format!("cannot read `{label}`: {e}")))?;
            hashed_files += &format!("--- {}\n{text}", p.display());
            Ok((label, text))
        };
        let at_alg = |e: hgauge::Error| ScenarioError::from_core(path, self.algebra_line, 1, e);
        let cm = match &self.algebra {
            AlgebraChoice::Gl(k) => builtin::adjoint_module(builtin::gl(*k)).map_err(at_alg)?,
            AlgebraChoice::So3 => builtin::adjoint_module(builtin::so3()).map_err(at_alg)?,
            AlgebraChoice::Abelian(k) => builtin::adjoint_module(builtin::abelian(*k)).map_err(at_alg)?,
            AlgebraChoice::Poincare2 => builtin::poincare2(),
            AlgebraChoice::File(p) => {
                let (label, text) = read(p, self.algebra_line)?;
                parse_crossed_module(&label, &text).map_err(at_alg)?
            }
        };
        let at_pair = |e: hgauge::Error| ScenarioError::from_core(path, self.pairing_line, 1, e);
        let pairing = match &self.pairing {
            PairingChoice::Symtrace(n) => InvariantPolynomial::from_trace(&cm, *n).map_err(at_pair)?,
            PairingChoice::Custom(p) => {
                let (label, text) = read(p, self.pairing_line)?;
                parse_pairing(&label, &text, &cm).map_err(at_pair)?
            }
        };
        let n = pairing.arity();
        if let Some(declared) = self.n() {
            debug_assert_eq!(declared, n);
        }
        let mut warnings = Vec::new();
        if self.dim < 2 * n + 3 {
            warnings.push(format!(
                "dim {} is below 2n+3 = {}: top-degree forms vanish identically, so several checks pass trivially",
                self.dim,
                2 * n + 3
            ));
        }
        let reg = VarRegistry::spacetime(self.dim);
        let mut connections = Vec::new();
        let mut stream = self.seed.map(rng);
        for decl in &self.connections {
            let c = match &decl.source {
                ConnectionSource::Zero => TwoConnection::zero(&cm, &reg),
                ConnectionSource::Random { degree, terms } => {
                    let r = stream
                        .as_mut()
                        .ok_or_else(|| ScenarioError::at(path, decl.line, 1, "seed required for random connections"))?;
                    let shape = PolyShape::new(degree.unwrap_or(self.degree), terms.unwrap_or(self.terms));
                    random_connection(r, &cm, &reg, shape).map_err(|e| ScenarioError::from_core(path, decl.line, 1, e))?
                }
                ConnectionSource::File(p) => {
                    let (label, text) = read(p, decl.line)?;
                    parse_connection(&label, &text, &cm, &reg)?
                }
            };
            connections.push((decl.name.clone(), c));
        }
        let needed = self.suites.iter().map(|s| s.connections_needed(&self.levels)).max().unwrap_or(0);
        if connections.len() < needed {
            let Some(r) = stream.as_mut() else {
                return Err(ScenarioError::at(
                    path,
                    0,
                    0,
                    format!("the selected suites need {needed} connections but {} are declared and no seed is set", connections.len()),
                ));
            };
            let shape = PolyShape::new(self.degree, self.terms);
            for k in connections.len()..needed {
                let name = format!("aux{k}");
                warnings.push(format!("connection pool extended with random `{name}`"));
                let c = random_connection(r, &cm, &reg, shape).map_err(|e| ScenarioError::from_core(path, 0, 0, e))?;
                connections.push((name, c));
            }
        }
        let mut gauge_pairs = Vec::new();
        if self.suites.contains(&Suite::Gauge) {
            if !cm.supports_conjugation() {
                warnings.push(format!("gauge suite skipped: `{}` does not act on h by matrix conjugation", cm.name()));
            } else if self.gauge_pairs > 0 {
                let seed = self.seed.ok_or_else(|| ScenarioError::at(path, 0, 0, "seed required for random gauge pairs"))?;
                let mut r = rng(seed ^ GAUGE_STREAM);
                let shape = PolyShape::new(1, 2);
                let mut unipotent_ok = true;
                for k in 0..self.gauge_pairs {
                    let core = |e: hgauge::Error| ScenarioError::from_core(path, 0, 0, e);
                    let (kind, gp) = if k % 2 == 1 && unipotent_ok {
                        match random_unipotent_gauge(&mut r, &cm, &reg, shape, true) {
                            Ok(gp) => ("unipotent", gp),
                            Err(hgauge::Error::UnsupportedAction(msg)) => {
                                unipotent_ok = false;
                                warnings.push(format!("{msg}; using constant gauge elements only"));
                                ("constant", random_constant_gauge(&mut r, &cm, &reg, shape, true).map_err(core)?)
                            }
                            Err(e) => return Err(core(e)),
                        }
                    } else {
                        ("constant", random_constant_gauge(&mut r, &cm, &reg, shape, true).map_err(core)?)
                    };
                    gauge_pairs.push((format!("{kind}{k}"), gp));
                }
            }
        }
        Ok(Scenario {
            spec: self.clone(),
            cm,
            pairing,
            n,
            reg,
            connections,
            gauge_pairs,
            warnings,
            hashed_files,
        })
    }
}

/// A resolved scenario ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    pub cm: DifferentialCrossedModule,
    pub pairing: InvariantPolynomial,
    pub n: usize,
    pub reg: Registry,
    pub connections: Vec<(String, TwoConnection)>,
    pub gauge_pairs: Vec<(String, GaugePair)>,
    pub warnings: Vec<String>,
    hashed_files: String,
}

impl Scenario {
    /// The normalized scenario followed by the text of every file it read.
    pub fn hash_input(&self) -> String {
        format!("{}{}", self.spec.canonical(), self.hashed_files)
    }
}

/// Parses and resolves in one step; files are looked up relative to `base`.
pub fn parse_scenario(path: &str, text: &str, base: &Path) -> Result<Scenario, ScenarioError> {
    ScenarioSpec::parse(path, text)?.resolve(base)
}

/// Parses a connection file over `reg`.
pub fn parse_connection(
    path: &str,
    text: &str,
    cm: &DifferentialCrossedModule,
    reg: &Registry,
) -> Result<TwoConnection, ScenarioError> {
    let mut a = BiGradedForm::zero(reg, ValueKind::G, cm.g().dim());
    let mut b = BiGradedForm::zero(reg, ValueKind::H, cm.h().dim());
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let Some(line) = tokenize(path, i + 1, body) else { continue };
        line.arity(3, usize::MAX - 1)?;
        let (col0, head) = line.tokens[0];
        let (kind, dim, degree) = match head {
            "A" => (ValueKind::G, cm.g().dim(), 1),
            "B" => (ValueKind::H, cm.h().dim(), 2),
            other => return Err(line.err(col0, format!("expected `A` or `B`, found `{other}`"))),
        };
        let comp: usize = line.int(1)?;
        if comp == 0 || comp > dim {
            return Err(line.err(line.tokens[1].0, format!("basis index {comp} out of range 1..={dim}")));
        }
        let (dcol, dtok) = line.tokens[2];
        let mut dx = Vec::new();
        for part in dtok.split(',') {
            let v: usize = part.parse().map_err(|_| line.err(dcol, format!("invalid coordinate list `{dtok}`")))?;
            if v == 0 || v > reg.nx() {
                return Err(line.err(dcol, format!("coordinate {v} out of range 1..={}", reg.nx())));
            }
            dx.push(v - 1);
        }
        if dx.len() != degree {
            return Err(line.err(dcol, format!("`{head}` components take {degree} coordinate(s)")));
        }
        let pcol = line.tokens[3].0;
        let poly = parse_poly(reg, line.rest(body, 3)).map_err(|e| match e {
            hgauge::Error::Parse { col, msg, .. } => line.err(pcol + col - 1, msg),
            other => line.err(pcol, other.to_string()),
        })?;
        let mut coeffs = vec![hgauge::Poly::zero(reg); dim];
        coeffs[comp - 1] = poly;
        let term = BiGradedForm::monomial(reg, kind, &[], &dx, coeffs).map_err(|e| line.err(dcol, e.to_string()))?;
        match head {
            "A" => a = a.add(&term).expect("same registry"),
            _ => b = b.add(&term).expect("same registry"),
        }
    }
    TwoConnection::new(cm, a, b).map_err(|e| ScenarioError::at(path, 0, 0, e.to_string()))
}
