//! Brute-force oracles: solvers over finite groups and rings, bounded
//! solvers over torsion-free groups, and solution correspondence for
//! interpretations.

mod carrier;
mod correspond;
mod decode;
mod search;

pub use carrier::{FiniteRing, GroupCarrier, RingCarrier, Value};
pub use correspond::{check_correspondence, CorrespondenceReport, Scale, Verdict};
pub use decode::Decoder;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::eqlang::{eval_group, eval_ring, EquationSystem, InterpError, Term};
use crate::pcgroup::{GroupElement, PcError, PcPresentation};
use search::{ring_search, GroupSearch};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("carrier is not finite: {0}")]
    NotFinite(String),
    #[error("a {system} system cannot be solved in a {carrier}")]
    SortMismatch { system: String, carrier: String },
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("undeclared variable `{0}`")]
    Undeclared(String),
    #[error("term not allowed here: {0}")]
    BadTerm(String),
    #[error("decoding failed (interpretation bug): {0}")]
    Decode(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("reported solution fails re-evaluation: {0}")]
    Recheck(String),
    #[error(transparent)]
    Presentation(#[from] PcError),
    #[error(transparent)]
    Interpretation(#[from] InterpError),
}

/// Resource caps for a search.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Search nodes visited.
    pub max_nodes: u64,
    /// Candidates enumerated for a single variable.
    pub max_domain: u128,
    /// Largest candidate list filtered ahead of choosing a variable.
    pub filter_limit: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_nodes: 1_000_000_000, max_domain: 10_000_000, filter_limit: 5_000 }
    }
}

/// What to search in.
#[derive(Clone, Debug)]
pub enum Carrier {
    Group(GroupCarrier),
    Ring(RingCarrier),
}

impl Carrier {
    pub fn describe(&self) -> String {
        match self {
            Carrier::Group(g) => g.describe(),
            Carrier::Ring(r) => r.describe(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Carrier::Group(g) => g.is_finite(),
            Carrier::Ring(r) => r.is_finite(),
        }
    }

    /// Every value of the carrier, in order.
    pub fn values(&self) -> Vec<Value> {
        match self {
            Carrier::Group(g) => g.elements(None, false).into_iter().map(|x| x.0).collect(),
            Carrier::Ring(r) => r.values(),
        }
    }

    pub fn render(&self, v: &[i64]) -> String {
        match self {
            Carrier::Group(g) => g.format(&GroupElement(v.to_vec())),
            Carrier::Ring(_) if v.len() == 1 => v[0].to_string(),
            Carrier::Ring(_) => format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")),
        }
    }
}

/// Solutions of a system, projected to its free variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub system: String,
    pub carrier: String,
    /// Set when the carrier is an exponent box: nothing is claimed outside.
    pub box_relative: bool,
    pub variables: Vec<String>,
    /// Sorted, without repetitions.
    pub solutions: Vec<Vec<Value>>,
    pub rendered: Vec<Vec<String>>,
    pub count: usize,
    pub nodes: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system {}", self.system)?;
        writeln!(f, "carrier {}", self.carrier)?;
        writeln!(f, "box_relative {}", self.box_relative)?;
        writeln!(f, "variables {}", self.variables.join(" "))?;
        writeln!(f, "count {}", self.count)?;
        for s in &self.rendered {
            let parts: Vec<String> = self.variables.iter().zip(s).map(|(v, x)| format!("{v}={x}")).collect();
            writeln!(f, "solution {}", parts.join(" "))?;
        }
        Ok(())
    }
}

fn cartesian(choices: &[Vec<GroupElement>]) -> Vec<Vec<GroupElement>> {
    choices.iter().fold(vec![Vec::new()], |acc, c| {
        acc.iter()
            .flat_map(|prefix| {
                c.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect()
    })
}

fn recheck_group(p: &GroupCarrier, sigma: &EquationSystem, names: &[String], values: &[GroupElement]) -> Result<(), VerifyError> {
    let env: BTreeMap<&str, &GroupElement> = names.iter().map(String::as_str).zip(values).collect();
    let look = |v: &str| env.get(v).map(|x| (*x).clone());
    for e in &sigma.equations {
        let ev = |t: &Term| eval_group(p.presentation(), t, &look).map_err(|err| VerifyError::Recheck(err.to_string()));
        if p.canon(ev(&e.lhs)?) != p.canon(ev(&e.rhs)?) {
            let at: Vec<String> = names.iter().zip(values).map(|(n, x)| format!("{n}={}", p.format(x))).collect();
            return Err(VerifyError::Recheck(format!("{} = {} at {}", e.lhs, e.rhs, at.join(" "))));
        }
    }
    Ok(())
}

/// Solves `sigma` in `carrier`. Free variables range over the carrier (its
/// box for a `Box`); searched witnesses over `witness_bound` when given.
pub fn solve(
    sigma: &EquationSystem,
    carrier: &Carrier,
    witness_bound: Option<i64>,
    limits: &Limits,
) -> Result<SolveReport, VerifyError> {
    let start = Instant::now();
    let names: Vec<String> = sigma.all_vars().cloned().collect();
    let nfree = sigma.vars.len();
    let eqs: Vec<(Term, Term)> = sigma.equations.iter().map(|e| (e.lhs.clone(), e.rhs.clone())).collect();
    let mismatch = || VerifyError::SortMismatch { system: sigma.sort.to_string(), carrier: carrier.describe() };
    let (solutions, nodes): (Vec<Vec<Value>>, u64) = match carrier {
        Carrier::Group(g) => {
            if !sigma.sort.is_group() {
                return Err(mismatch());
            }
            let out = GroupSearch::new(g, &names, nfree, &eqs, witness_bound, limits)?.run()?;
            let tops = g.top_elements();
            let mut set = BTreeSet::new();
            for (proj, full) in &out.solutions {
                let choices: Vec<Vec<GroupElement>> = proj
                    .iter()
                    .zip(&out.reduced)
                    .map(|(x, &red)| if red { tops.iter().map(|z| g.shift(x, z)).collect() } else { vec![x.clone()] })
                    .collect();
                for combo in cartesian(&choices) {
                    let mut all = combo.clone();
                    all.extend_from_slice(&full[nfree..]);
                    recheck_group(g, sigma, &names, &all)?;
                    set.insert(combo.into_iter().map(|x| x.0).collect::<Vec<Value>>());
                }
            }
            (set.into_iter().collect(), out.nodes)
        }
        Carrier::Ring(r) => {
            if sigma.sort.is_group() {
                return Err(mismatch());
            }
            let out = ring_search(r, &names[..], nfree, &eqs, limits)?;
            if nfree == names.len() {
                let modulus = match r {
                    RingCarrier::Integers { .. } => Some(None),
                    RingCarrier::Finite(f) => f.modulus().map(|m| Some(BigInt::from(m))),
                };
                if let Some(m) = modulus {
                    for s in &out.solutions {
                        let env: BTreeMap<&str, BigInt> = names.iter().map(String::as_str).zip(s.iter().map(|v| BigInt::from(v[0]))).collect();
                        let look = |v: &str| env.get(v).cloned();
                        for e in &sigma.equations {
                            let ev = |t: &Term| eval_ring(t, &look, m.as_ref()).map_err(|err| VerifyError::Recheck(err.to_string()));
                            if ev(&e.lhs)? != ev(&e.rhs)? {
                                return Err(VerifyError::Recheck(format!("{} = {}", e.lhs, e.rhs)));
                            }
                        }
                    }
                }
            }
            (out.solutions, out.nodes)
        }
    };
    let rendered = solutions.iter().map(|s| s.iter().map(|v| carrier.render(v)).collect()).collect();
    Ok(SolveReport {
        system: sigma.name.clone(),
        carrier: carrier.describe(),
        box_relative: !carrier.is_finite(),
        variables: sigma.vars.clone(),
        count: solutions.len(),
        solutions,
        rendered,
        nodes,
        elapsed: start.elapsed(),
    })
}

/// Exhaustive search in a finite group or ring.
pub fn solve_finite(sigma: &EquationSystem, carrier: &Carrier, limits: &Limits) -> Result<SolveReport, VerifyError> {
    if !carrier.is_finite() {
        return Err(VerifyError::NotFinite(carrier.describe()));
    }
    solve(sigma, carrier, None, limits)
}

/// Search with every exponent of the free variables in `[-bound, bound]`
/// and searched witnesses in `[-bound², bound²]`.
pub fn solve_bounded(sigma: &EquationSystem, p: &PcPresentation, bound: i64, limits: &Limits) -> Result<SolveReport, VerifyError> {
    if !p.is_torsion_free_presentation() {
        return Err(VerifyError::Unsupported(format!("{} has generators of finite order", p.name())));
    }
    solve(sigma, &Carrier::Group(GroupCarrier::Box { group: p.clone(), bound }), Some(bound * bound), limits)
}
