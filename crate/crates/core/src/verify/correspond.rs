use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::carrier::{GroupCarrier, RingCarrier, Value};
use super::{solve, Carrier, Decoder, Limits, VerifyError};
use crate::eqlang::{translate_system, EInterpretation, EquationSystem};
use crate::pcgroup::{finite_quotient, GroupElement};

/// Where both sides are solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scale {
    /// The host modulo `m`-th powers of its generators.
    Mod(i64),
    /// Host exponents of free variables in `[-B, B]`, searched witnesses in
    /// `[-B², B²]`; the source in the same box.
    Box(i64),
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Mod(m) => write!(f, "mod {m}"),
            Scale::Box(b) => write!(f, "box {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    /// `missing`: source solutions no host solution decodes to; `extra`:
    /// decoded host solutions that do not solve the source system.
    Mismatch { missing: Vec<Vec<Value>>, extra: Vec<Vec<Value>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub interpretation: String,
    pub system: String,
    pub scale: Scale,
    pub host_carrier: String,
    pub source_carrier: String,
    pub variables: Vec<String>,
    pub source_solutions: Vec<Vec<Value>>,
    pub decoded_solutions: Vec<Vec<Value>>,
    /// Decoding maps the domain set onto the source carrier.
    pub onto: bool,
    pub verdict: Verdict,
    pub rendered: Vec<Vec<String>>,
}

impl CorrespondenceReport {
    pub fn is_equal(&self) -> bool {
        self.verdict == Verdict::Equal && self.onto
    }
}

impl CorrespondenceReport {
    fn assignment(&self, s: &[Value]) -> String {
        let coords = |x: &Value| match x.as_slice() {
            [v] => v.to_string(),
            xs => format!("({})", xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",")),
        };
        self.variables.iter().zip(s).map(|(v, x)| format!("{v}={}", coords(x))).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for CorrespondenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "interpretation {}", self.interpretation)?;
        writeln!(f, "system {}", self.system)?;
        writeln!(f, "scale {}", self.scale)?;
        writeln!(f, "host {}", self.host_carrier)?;
        writeln!(f, "source {}", self.source_carrier)?;
        writeln!(f, "source_count {}", self.source_solutions.len())?;
        writeln!(f, "decoded_count {}", self.decoded_solutions.len())?;
        writeln!(f, "onto {}", self.onto)?;
        for s in &self.rendered {
            let parts: Vec<String> = self.variables.iter().zip(s).map(|(v, x)| format!("{v}={x}")).collect();
            writeln!(f, "solution {}", parts.join(" "))?;
        }
        match &self.verdict {
            Verdict::Equal => writeln!(f, "verdict equal"),
            Verdict::Mismatch { missing, extra } => {
                writeln!(f, "verdict mismatch")?;
                for m in missing {
                    writeln!(f, "missing {}", self.assignment(m))?;
                }
                for e in extra {
                    writeln!(f, "extra {}", self.assignment(e))?;
                }
                Ok(())
            }
        }
    }
}

/// Solves `sigma` in the source and its translation in the host, decodes the
/// host solutions and compares the two sets; also checks that the domain
/// decodes onto the source carrier.
pub fn check_correspondence(
    i: &EInterpretation,
    sigma: &EquationSystem,
    scale: Scale,
    limits: &Limits,
) -> Result<CorrespondenceReport, VerifyError> {
    let (host, witness_bound) = match scale {
        Scale::Mod(m) => (GroupCarrier::Finite(finite_quotient(&i.host, m)?), None),
        Scale::Box(b) => {
            if !i.host.is_torsion_free_presentation() {
                return Err(VerifyError::Unsupported(format!("{} has generators of finite order", i.host.name())));
            }
            (GroupCarrier::Box { group: i.host.clone(), bound: b }, Some(b * b))
        }
    };
    let decoder = Decoder::new(i, &host, limits)?;
    let source = solve(sigma, &decoder.source, witness_bound, limits)?;
    let t = translate_system(i, sigma)?;
    let host_c = Carrier::Group(host.clone());
    let translated = solve(&t.system, &host_c, witness_bound, limits)?;
    let m = i.code_dim;
    let mut decoded = BTreeSet::new();
    for s in &translated.solutions {
        let elems: Vec<GroupElement> = s.iter().map(|v| GroupElement(v.clone())).collect();
        let tuple = elems.chunks(m).map(|code| decoder.decode(&host, code)).collect::<Result<Vec<Value>, _>>()?;
        decoded.insert(tuple);
    }
    let source_set: BTreeSet<Vec<Value>> = source.solutions.iter().cloned().collect();
    let verdict = if decoded == source_set {
        Verdict::Equal
    } else {
        Verdict::Mismatch {
            missing: source_set.difference(&decoded).cloned().collect(),
            extra: decoded.difference(&source_set).cloned().collect(),
        }
    };
    let domain = solve(&i.domain.system, &host_c, witness_bound, limits)?;
    let mut image = BTreeSet::new();
    for s in &domain.solutions {
        let code: Vec<GroupElement> = s.iter().map(|v| GroupElement(v.clone())).collect();
        image.insert(decoder.decode(&host, &code)?);
    }
    let all: BTreeSet<Value> = decoder.source.values().into_iter().collect();
    let onto = match &decoder.source {
        Carrier::Ring(RingCarrier::Integers { .. }) | Carrier::Group(GroupCarrier::Box { .. }) => all.is_subset(&image),
        _ => all == image,
    };
    let rendered = source.solutions.iter().map(|s| s.iter().map(|v| decoder.source.render(v)).collect()).collect();
    Ok(CorrespondenceReport {
        interpretation: i.id.clone(),
        system: sigma.name.clone(),
        scale,
        host_carrier: host.describe(),
        source_carrier: decoder.source.describe(),
        variables: sigma.vars.clone(),
        source_solutions: source.solutions,
        decoded_solutions: decoded.into_iter().collect(),
        onto,
        verdict,
        rendered,
    })
}
