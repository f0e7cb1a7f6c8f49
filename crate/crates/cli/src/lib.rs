//! Commands behind the `nilscalars` binary. Each returns the text it would
//! print, so the same code serves the binary and the tests.

mod analyze;

pub use analyze::{cmd_analyze, AnalysisReport};

use std::path::Path;

use nilscalars::eqlang::{
    center_edef, center_quotient, chain_to_text, default_commutator_width, int_interpretation_class2, maxnilp_edef,
    parse_chain, parse_system, quotient_interpretation, scalar_interpretation, translate_system, EInterpretation,
    EquationSystem, QuotientModel, SourceKind,
};
use nilscalars::pcgroup::{parse_presentation, PcError, PcPresentation};
use nilscalars::scalars::{commutator_bilinear_map, is_c_small, largest_ring_of_scalars};
use nilscalars::verify::{check_correspondence, solve, Carrier, GroupCarrier, Limits, Scale, VerifyError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error("{0}")]
    Precondition(String),
    #[error("verification failed\n{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Inconsistent(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Mismatch(_) => 5,
        }
    }
}

impl From<PcError> for CliError {
    fn from(e: PcError) -> Self {
        match e {
            PcError::Inconsistent(_) => CliError::Inconsistent(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

fn precondition(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

fn verify_error(e: VerifyError) -> CliError {
    match e {
        VerifyError::Decode(_) | VerifyError::Recheck(_) => CliError::Mismatch(e.to_string()),
        other => CliError::Precondition(other.to_string()),
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Parses and validates a presentation file.
pub fn load_group(text: &str) -> Result<PcPresentation, CliError> {
    let data = parse_presentation(text).map_err(|e| CliError::Parse(format!("line {}: {}", e.line, e.message)))?;
    Ok(PcPresentation::new(data)?)
}

pub fn load_chain(text: &str) -> Result<EInterpretation, CliError> {
    parse_chain(text).map_err(|e| CliError::Parse(e.to_string()))
}

fn load_system(text: &str, host: Option<&PcPresentation>) -> Result<EquationSystem, CliError> {
    parse_system(text, host).map_err(|e| CliError::Parse(format!("line {} col {}: {}", e.line, e.col, e.message)))
}

/// The system read against the source of `i`.
fn load_source_system(i: &EInterpretation, text: &str) -> Result<EquationSystem, CliError> {
    match &i.source {
        SourceKind::Group { model: Some(m), .. } => load_system(text, Some(m)),
        _ => load_system(text, None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdefKind {
    Center,
    Verbal,
    Maxnilp,
}

#[derive(Clone, Debug, Default)]
pub struct EdefOptions {
    /// Verbal width; defaults to the class-2 commutator width.
    pub width: Option<usize>,
    /// Verbal word as a group term; defaults to `[u,v]`.
    pub word: Option<String>,
    /// Nilpotency class for `maxnilp`; defaults to the class of the group.
    pub class: Option<u32>,
}

pub fn cmd_emit_edef(kind: EdefKind, group: &str, opts: &EdefOptions) -> Result<String, CliError> {
    let p = load_group(group)?;
    let s = match kind {
        EdefKind::Center => center_edef(&p),
        EdefKind::Verbal => {
            let word_text = opts.word.clone().unwrap_or_else(|| "[u,v]".into());
            let probe = format!("system word\nsort group {}\nvar {}\neq {word_text} = 1\n", p.name(), word_letters(&word_text).join(" "));
            let w = load_system(&probe, Some(&p))?;
            let width = match opts.width {
                Some(n) => n,
                None => default_commutator_width(&p).map_err(precondition)?,
            };
            nilscalars::eqlang::verbal_edef(&w.equations[0].lhs, &w.vars, width, &p).map_err(precondition)?
        }
        EdefKind::Maxnilp => {
            let gens: Vec<_> = (0..p.ngens()).filter(|&g| p.weight(g) == 1).map(|g| p.generator(g)).collect();
            maxnilp_edef(&p, &gens, opts.class.unwrap_or(p.class()))
        }
    };
    Ok(s.to_string())
}

/// Identifiers of a word that are not generator names are its variables;
/// the parser sorts out the rest.
fn word_letters(word: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for tok in word.split(|c: char| !(c.is_alphanumeric() || c == '_')) {
        if tok.starts_with(|c: char| c.is_alphabetic() || c == '_') && !out.iter().any(|t| t == tok) {
            out.push(tok.to_string());
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Int,
    Scalars,
    Quotient,
}

/// First pair of weight-1 generators that are both c-small and do not commute.
fn coding_pair(p: &PcPresentation) -> Result<(usize, usize), CliError> {
    let low: Vec<usize> = (0..p.ngens()).filter(|&g| p.weight(g) == 1).collect();
    for (k, &a) in low.iter().enumerate() {
        for &b in &low[k + 1..] {
            let (x, y) = (p.generator(a), p.generator(b));
            if p.is_identity(&p.comm(&x, &y)) {
                continue;
            }
            if is_c_small(p, &x).map_err(precondition)? && is_c_small(p, &y).map_err(precondition)? {
                return Ok((a, b));
            }
        }
    }
    Err(CliError::Precondition("no pair of non-commuting c-small generators".into()))
}

pub fn cmd_interpret(group: &str, target: Target, pair: Option<(&str, &str)>) -> Result<String, CliError> {
    let p = load_group(group)?;
    let i = match target {
        Target::Int => {
            let (a, b) = match pair {
                Some((a, b)) => (p.gen_named(a)?, p.gen_named(b)?),
                None => {
                    if p.class() != 2 {
                        return Err(CliError::Precondition(format!("class must be 2, found {}", p.class())));
                    }
                    let (a, b) = coding_pair(&p)?;
                    (p.generator(a), p.generator(b))
                }
            };
            int_interpretation_class2(&p, &a, &b).map_err(precondition)?
        }
        Target::Scalars => {
            if p.class() != 2 {
                return Err(CliError::Precondition(format!("class must be 2, found {}", p.class())));
            }
            let cm = commutator_bilinear_map(&p).map_err(precondition)?;
            let ring = largest_ring_of_scalars(&cm.map).map_err(precondition)?;
            scalar_interpretation(&p, &cm, &ring).map_err(precondition)?
        }
        Target::Quotient if p.class() == 2 => center_quotient(&p).map_err(precondition)?,
        Target::Quotient => quotient_interpretation(&p, &center_edef(&p), QuotientModel::Generic).map_err(precondition)?,
    };
    Ok(chain_to_text(&i))
}

pub fn cmd_translate(chain: &str, system: &str) -> Result<String, CliError> {
    let i = load_chain(chain)?;
    let s = load_source_system(&i, system)?;
    let t = translate_system(&i, &s).map_err(precondition)?;
    Ok(t.system.to_string())
}

pub fn cmd_verify(chain: &str, system: &str, scale: Scale, json: bool) -> Result<String, CliError> {
    let i = load_chain(chain)?;
    let s = load_source_system(&i, system)?;
    let r = check_correspondence(&i, &s, scale, &Limits::default()).map_err(verify_error)?;
    let text = if json { serde_json::to_string_pretty(&r).expect("report serializes") + "\n" } else { r.to_string() };
    if r.is_equal() {
        Ok(text)
    } else {
        Err(CliError::Mismatch(text))
    }
}

pub fn cmd_solve(group: &str, system: &str, scale: Scale, json: bool) -> Result<String, CliError> {
    let p = load_group(group)?;
    let s = load_system(system, Some(&p))?;
    let (carrier, witness_bound) = match scale {
        Scale::Mod(m) => (GroupCarrier::Finite(nilscalars::pcgroup::finite_quotient(&p, m)?), None),
        Scale::Box(b) => {
            if !p.is_torsion_free_presentation() {
                return Err(CliError::Precondition(format!("{} has generators of finite order", p.name())));
            }
            (GroupCarrier::Box { group: p.clone(), bound: b }, Some(b * b))
        }
    };
    let r = solve(&s, &Carrier::Group(carrier), witness_bound, &Limits::default()).map_err(verify_error)?;
    Ok(if json { serde_json::to_string_pretty(&r).expect("report serializes") + "\n" } else { r.to_string() })
}
