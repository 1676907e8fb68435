//! Factorization schemes: ordered drift / kick / gradient-kick steps.
//!
//! A scheme approximates one step `e^{ε(T+V)}` of the split Hamiltonian
//! `H = T + V`. Steps are listed in the order they act on the phase-space
//! point: the first step is applied first.

use std::env;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for the first-order consistency sums.
pub const CONSISTENCY_TOL: f64 = 1e-12;

/// Environment variable naming the directory that holds the M and BM
/// coefficient files.
pub const DATA_DIR_ENV: &str = "SYMPHASE_DATA_DIR";

const DEFAULT_DATA_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: malformed scheme file: {message}")]
    Parse { path: String, message: String },
    #[error("step {index}: unknown step kind {kind:?} (expected drift, kick or gkick)")]
    UnknownKind { index: usize, kind: String },
    #[error("step {index}: {reason}")]
    InvalidStep { index: usize, reason: String },
    #[error("{kind} coefficients sum to {sum}, expected 1")]
    Consistency { kind: &'static str, sum: f64 },
    #[error("invalid scheme metadata: {0}")]
    Metadata(String),
    #[error("unknown scheme {0:?}")]
    NotFound(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Drift,
    Kick,
    GradientKick,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Drift => "drift",
            StepKind::Kick => "kick",
            StepKind::GradientKick => "gkick",
        }
    }

    fn is_force(self) -> bool {
        !matches!(self, StepKind::Drift)
    }
}

/// One factor of a scheme.
///
/// `c` is the fraction of `ε` carried by the factor. A gradient kick also
/// carries `u`, the coefficient of its `ε³ω⁴` force-gradient term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    kind: StepKind,
    c: f64,
    u: Option<f64>,
}

impl Step {
    pub fn drift(c: f64) -> Self {
        Self {
            kind: StepKind::Drift,
            c,
            u: None,
        }
    }

    pub fn kick(c: f64) -> Self {
        Self {
            kind: StepKind::Kick,
            c,
            u: None,
        }
    }

    pub fn gradient_kick(c: f64, u: f64) -> Self {
        Self {
            kind: StepKind::GradientKick,
            c,
            u: Some(u),
        }
    }

    pub fn kind(&self) -> StepKind {
        self.kind
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Gradient coefficient; zero for plain drifts and kicks.
    pub fn u(&self) -> f64 {
        self.u.unwrap_or(0.0)
    }

    /// A step whose coefficients all vanish is the identity map.
    pub fn is_identity(&self) -> bool {
        self.c == 0.0 && self.u() == 0.0
    }

    fn approx_eq(&self, other: &Step) -> bool {
        fn close(a: f64, b: f64) -> bool {
            (a - b).abs() <= 1e-14 * a.abs().max(b.abs()).max(1.0)
        }
        self.kind == other.kind && close(self.c, other.c) && close(self.u(), other.u())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    name: String,
    steps: Vec<Step>,
    order: u32,
    force_evals: u32,
    citation: String,
}

impl Scheme {
    /// Validates the steps and metadata.
    pub fn new(
        name: impl Into<String>,
        steps: Vec<Step>,
        order: u32,
        force_evals: u32,
        citation: impl Into<String>,
    ) -> Result<Self, SchemeError> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(SchemeError::Metadata("empty scheme name".into()));
        }
        if order == 0 {
            return Err(SchemeError::Metadata("order must be positive".into()));
        }
        if force_evals == 0 {
            return Err(SchemeError::Metadata("force_evals must be positive".into()));
        }
        for (index, st) in steps.iter().enumerate() {
            if !st.c.is_finite() {
                return Err(SchemeError::InvalidStep {
                    index,
                    reason: format!("coefficient c = {} is not finite", st.c),
                });
            }
            match (st.kind, st.u) {
                (StepKind::GradientKick, None) => {
                    return Err(SchemeError::InvalidStep {
                        index,
                        reason: "gkick step needs a gradient coefficient u".into(),
                    })
                }
                (StepKind::GradientKick, Some(u)) if !u.is_finite() => {
                    return Err(SchemeError::InvalidStep {
                        index,
                        reason: format!("gradient coefficient u = {u} is not finite"),
                    })
                }
                (StepKind::Drift | StepKind::Kick, Some(_)) => {
                    return Err(SchemeError::InvalidStep {
                        index,
                        reason: format!("{} step cannot carry u", st.kind.as_str()),
                    })
                }
                _ => {}
            }
        }
        let drift_sum: f64 = steps
            .iter()
            .filter(|s| !s.kind.is_force())
            .map(|s| s.c)
            .sum();
        if (drift_sum - 1.0).abs() > CONSISTENCY_TOL {
            return Err(SchemeError::Consistency {
                kind: "drift",
                sum: drift_sum,
            });
        }
        let kick_sum: f64 = steps.iter().filter(|s| s.kind.is_force()).map(|s| s.c).sum();
        if (kick_sum - 1.0).abs() > CONSISTENCY_TOL {
            return Err(SchemeError::Consistency {
                kind: "kick",
                sum: kick_sum,
            });
        }
        Ok(Self {
            name,
            steps,
            order,
            force_evals,
            citation: citation.into(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Steps that act nontrivially.
    pub fn active_steps(&self) -> impl Iterator<Item = &Step> + '_ {
        self.steps.iter().filter(|s| !s.is_identity())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn force_evals(&self) -> u32 {
        self.force_evals
    }

    pub fn citation(&self) -> &str {
        &self.citation
    }

    /// True iff the active steps read the same forward and backward.
    pub fn is_symmetric(&self) -> bool {
        let active: Vec<&Step> = self.active_steps().collect();
        active
            .iter()
            .zip(active.iter().rev())
            .all(|(a, b)| a.approx_eq(b))
    }

    /// The scheme with its step list reversed.
    pub fn adjoint(&self) -> Scheme {
        let mut steps = self.steps.clone();
        steps.reverse();
        Scheme {
            name: format!("{}*", self.name),
            steps,
            ..self.clone()
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn to_file(&self) -> SchemeFile {
        SchemeFile {
            name: self.name.clone(),
            order: self.order,
            force_evals: self.force_evals,
            citation: self.citation.clone(),
            steps: self
                .steps
                .iter()
                .map(|s| StepRecord {
                    kind: s.kind.as_str().to_string(),
                    c: s.c,
                    u: s.u,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("scheme serializes")
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.name)?;
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match s.u {
                Some(u) => write!(f, "{}({}, {})", s.kind.as_str(), s.c, u)?,
                None => write!(f, "{}({})", s.kind.as_str(), s.c)?,
            }
        }
        write!(f, "]")
    }
}

/// On-disk JSON layout of a scheme.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeFile {
    pub name: String,
    pub order: u32,
    pub force_evals: u32,
    #[serde(default)]
    pub citation: String,
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepRecord {
    pub kind: String,
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
}

impl SchemeFile {
    pub fn into_scheme(self) -> Result<Scheme, SchemeError> {
        let mut steps = Vec::with_capacity(self.steps.len());
        for (index, rec) in self.steps.into_iter().enumerate() {
            let step = match rec.kind.as_str() {
                "drift" => Step {
                    kind: StepKind::Drift,
                    c: rec.c,
                    u: rec.u,
                },
                "kick" => Step {
                    kind: StepKind::Kick,
                    c: rec.c,
                    u: rec.u,
                },
                "gkick" => Step {
                    kind: StepKind::GradientKick,
                    c: rec.c,
                    u: rec.u,
                },
                other => {
                    return Err(SchemeError::UnknownKind {
                        index,
                        kind: other.to_string(),
                    })
                }
            };
            steps.push(step);
        }
        Scheme::new(self.name, steps, self.order, self.force_evals, self.citation)
    }
}

pub fn parse_scheme(text: &str, origin: &str) -> Result<Scheme, SchemeError> {
    let file: SchemeFile = serde_json::from_str(text).map_err(|e| SchemeError::Parse {
        path: origin.to_string(),
        message: e.to_string(),
    })?;
    file.into_scheme()
}

/// Reads and validates a scheme file.
pub fn load_scheme(path: impl AsRef<Path>) -> Result<Scheme, SchemeError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SchemeError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_scheme(&text, &path.display().to_string())
}

/// Directory holding the data-file schemes: `$SYMPHASE_DATA_DIR` when set,
/// otherwise the `data/` directory shipped with this crate.
pub fn data_dir() -> PathBuf {
    env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_DATA_DIR))
}

pub fn stormer_verlet() -> Scheme {
    Scheme::new(
        "SV",
        vec![Step::kick(0.5), Step::drift(1.0), Step::kick(0.5)],
        2,
        1,
        "Stormer/Verlet, kick-drift-kick",
    )
    .expect("valid built-in scheme")
}

/// First-order drift-then-kick scheme.
pub fn first_order() -> Scheme {
    Scheme::new(
        "LF1",
        vec![Step::drift(1.0), Step::kick(1.0)],
        1,
        1,
        "first-order splitting, drift then kick",
    )
    .expect("valid built-in scheme")
}

/// First-order kick-then-drift scheme (adjoint of [`first_order`]).
pub fn first_order_transposed() -> Scheme {
    first_order().adjoint().with_name("LF1T")
}

/// Forest-Ruth fourth-order scheme, drift-outermost form.
pub fn forest_ruth() -> Scheme {
    let th = 1.0 / (2.0 - 2f64.cbrt());
    Scheme::new(
        "FR",
        vec![
            Step::drift(th / 2.0),
            Step::kick(th),
            Step::drift((1.0 - th) / 2.0),
            Step::kick(1.0 - 2.0 * th),
            Step::drift((1.0 - th) / 2.0),
            Step::kick(th),
            Step::drift(th / 2.0),
        ],
        4,
        3,
        "Forest & Ruth (1990); Creutz & Gocksch (1989); Yoshida (1990)",
    )
    .expect("valid built-in scheme")
}

/// Forward fourth-order algorithm C: three force evaluations and one
/// force-gradient evaluation, all coefficients positive.
///
/// The middle factor is `e^{(ε/4)(V + (ε²/48)[V,[T,V]])}`; on the
/// oscillator the commutator term turns into the kick correction
/// `u = -1/96`.
pub fn forward_c() -> Scheme {
    Scheme::new(
        "C",
        vec![
            Step::drift(1.0 / 6.0),
            Step::kick(3.0 / 8.0),
            Step::drift(1.0 / 3.0),
            Step::gradient_kick(1.0 / 4.0, -1.0 / 96.0),
            Step::drift(1.0 / 3.0),
            Step::kick(3.0 / 8.0),
            Step::drift(1.0 / 6.0),
        ],
        4,
        4,
        "forward fourth-order algorithm C, Phys. Lett. A 226 (1997) 344",
    )
    .expect("valid built-in scheme")
}

/// File names of the data-file schemes, keyed by registry name.
pub const DATA_SCHEMES: [(&str, &str); 2] = [("M", "mclachlan4.json"), ("BM", "blanes_moan6.json")];

#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub name: String,
    pub scheme: Result<Scheme, SchemeError>,
}

/// The built-in schemes plus the data-file schemes, whose load errors are
/// kept per entry.
#[derive(Debug, Clone)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
}

impl Registry {
    pub fn load_from(dir: &Path) -> Self {
        let mut entries: Vec<RegistryEntry> = [
            stormer_verlet(),
            first_order(),
            first_order_transposed(),
            forest_ruth(),
            forward_c(),
        ]
        .into_iter()
        .map(|s| RegistryEntry {
            name: s.name().to_string(),
            scheme: Ok(s),
        })
        .collect();
        for (name, file) in DATA_SCHEMES {
            let scheme = load_scheme(dir.join(file)).and_then(|s| {
                if s.name() == name {
                    Ok(s)
                } else {
                    Err(SchemeError::Metadata(format!(
                        "{file} declares scheme {:?}, expected {name:?}",
                        s.name()
                    )))
                }
            });
            entries.push(RegistryEntry {
                name: name.to_string(),
                scheme,
            });
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    /// Schemes that loaded successfully, in registry order.
    pub fn available(&self) -> impl Iterator<Item = &Scheme> + '_ {
        self.entries.iter().filter_map(|e| e.scheme.as_ref().ok())
    }

    pub fn get(&self, name: &str) -> Result<&Scheme, SchemeError> {
        let entry = self
            .entries
            .iter()
            .find(|e| e.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| SchemeError::NotFound(name.to_string()))?;
        entry.scheme.as_ref().map_err(Clone::clone)
    }
}

/// Registry loaded from [`data_dir`].
pub fn registry() -> Registry {
    Registry::load_from(&data_dir())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry_of_built_ins() {
        assert!(stormer_verlet().is_symmetric());
        assert!(!first_order().is_symmetric());
        assert!(forest_ruth().is_symmetric());
        assert!(forward_c().is_symmetric());
    }

    #[test]
    fn zero_steps_are_ignored_by_symmetry() {
        let s = Scheme::new(
            "padded",
            vec![
                Step::drift(0.0),
                Step::kick(0.5),
                Step::drift(1.0),
                Step::kick(0.5),
            ],
            2,
            1,
            "",
        )
        .unwrap();
        assert!(s.is_symmetric());
        assert_eq!(s.steps().len(), 4);
    }

    #[test]
    fn adjoint_examples() {
        let sv = stormer_verlet();
        assert_eq!(sv.adjoint().steps(), sv.steps());
        assert_eq!(
            first_order().adjoint().steps(),
            &[Step::kick(1.0), Step::drift(1.0)]
        );
        assert_eq!(forest_ruth().adjoint().adjoint().steps(), forest_ruth().steps());
    }

    #[test]
    fn consistency_sums() {
        for s in [stormer_verlet(), first_order(), forest_ruth(), forward_c()] {
            let d: f64 = s.steps().iter().filter(|x| x.kind() == StepKind::Drift).map(|x| x.c()).sum();
            let k: f64 = s.steps().iter().filter(|x| x.kind() != StepKind::Drift).map(|x| x.c()).sum();
            assert!((d - 1.0).abs() <= 1e-12, "{}", s.name());
            assert!((k - 1.0).abs() <= 1e-12, "{}", s.name());
        }
        let err = Scheme::new("bad", vec![Step::drift(1.0), Step::kick(0.9)], 1, 1, "").unwrap_err();
        assert!(matches!(err, SchemeError::Consistency { kind: "kick", .. }));
        assert!(err.to_string().contains("0.9"));
    }

    #[test]
    fn step_validation() {
        let err = Scheme::new(
            "bad",
            vec![Step::drift(1.0), Step::kick(f64::NAN)],
            1,
            1,
            "",
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::InvalidStep { index: 1, .. }));
        assert!(Scheme::new("x", vec![Step::drift(1.0), Step::kick(1.0)], 0, 1, "").is_err());
        assert!(Scheme::new("x", vec![Step::drift(1.0), Step::kick(1.0)], 1, 0, "").is_err());
    }

    #[test]
    fn file_round_trip() {
        let sv = stormer_verlet();
        let back = parse_scheme(&sv.to_json(), "mem").unwrap();
        assert_eq!(back, sv);
        let c = forward_c();
        assert_eq!(parse_scheme(&c.to_json(), "mem").unwrap(), c);
    }

    #[test]
    fn file_errors_name_the_step() {
        let text = r#"{"name":"x","order":1,"force_evals":1,"citation":"",
            "steps":[{"kind":"drift","c":1.0},{"kind":"push","c":1.0}]}"#;
        let err = parse_scheme(text, "mem").unwrap_err();
        assert_eq!(
            err,
            SchemeError::UnknownKind {
                index: 1,
                kind: "push".into()
            }
        );
        let text = r#"{"name":"x","order":1,"force_evals":1,
            "steps":[{"kind":"drift","c":1.0},{"kind":"gkick","c":1.0}]}"#;
        let err = parse_scheme(text, "mem").unwrap_err();
        assert!(matches!(err, SchemeError::InvalidStep { index: 1, .. }));
        let text = r#"{"name":"x","order":1,"force_evals":1,
            "steps":[{"kind":"drift","c":1.0,"u":0.1},{"kind":"kick","c":1.0}]}"#;
        assert!(matches!(
            parse_scheme(text, "mem").unwrap_err(),
            SchemeError::InvalidStep { index: 0, .. }
        ));
        assert!(matches!(
            parse_scheme("{not json", "mem").unwrap_err(),
            SchemeError::Parse { .. }
        ));
    }

    #[test]
    fn registry_lists_everything() {
        let reg = registry();
        for name in ["SV", "LF1", "LF1T", "FR", "C", "M", "BM"] {
            assert!(reg.get(name).is_ok(), "{name}");
        }
        assert_eq!(reg.get("SV").unwrap().steps().len(), 3);
        assert!(matches!(reg.get("nope"), Err(SchemeError::NotFound(_))));
    }

    #[test]
    fn missing_data_dir_degrades_per_entry() {
        let reg = Registry::load_from(Path::new("/nonexistent/symphase-data"));
        assert!(reg.get("SV").is_ok());
        assert!(matches!(reg.get("M"), Err(SchemeError::Io { .. })));
        assert!(matches!(reg.get("BM"), Err(SchemeError::Io { .. })));
        assert_eq!(reg.entries().len(), 7);
    }
}
