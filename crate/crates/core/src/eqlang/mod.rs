//! Systems of equations over groups and rings, explicit e-definitions and
//! e-interpretations, and the translation of systems through them.

mod chain;
mod edefs;
mod interp;
mod parse;
mod translate;

pub use chain::{chain_to_text, parse_chain, ChainError};
pub use edefs::{center_edef, default_commutator_width, maxnilp_edef, verbal_edef};
pub use interp::{
    center_quotient, identity_interpretation, int_interpretation_class2, quotient_interpretation, scalar_interpretation, Codec,
    EInterpretation, Formula, InterpError, OpKind, QuotientModel, SourceKind,
};
pub use parse::{parse_system, ParseError};
pub use translate::{compose, translate_system, Translation};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::pcgroup::{GroupElement, PcPresentation};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    /// Elements of the named presentation.
    Group(String),
    /// The integers.
    RingZ,
    /// `ℤ/m`.
    RingMod(BigInt),
}

impl Sort {
    pub fn is_group(&self) -> bool {
        matches!(self, Sort::Group(_))
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Group(g) => write!(f, "group {g}"),
            Sort::RingZ => write!(f, "ring Z"),
            Sort::RingMod(m) => write!(f, "ring mod {m}"),
        }
    }
}

/// Terms of either sort. Group terms use `Int(1)` for the identity,
/// `Mul`, `Pow` and `Comm`; ring terms use integer literals, `Add`, `Sub`,
/// `Neg`, `Mul` and nonnegative `Pow`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Int(BigInt),
    Var(String),
    /// A named generator of the host presentation.
    Const(String),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Pow(Box<Term>, i64),
    /// Left-normed commutator `[t₁, t₂, …, t_k]`, `k ≥ 2`.
    Comm(Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn int(n: i64) -> Term {
        Term::Int(BigInt::from(n))
    }

    pub fn one() -> Term {
        Term::int(1)
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Term, k: i64) -> Term {
        Term::Pow(Box::new(a), k)
    }

    pub fn inv(a: Term) -> Term {
        Term::pow(a, -1)
    }

    pub fn comm(a: Term, b: Term) -> Term {
        Term::Comm(vec![a, b])
    }

    /// Product of the terms, `1` when empty.
    pub fn product(ts: impl IntoIterator<Item = Term>) -> Term {
        ts.into_iter().reduce(Term::mul).unwrap_or_else(Term::one)
    }

    /// The normal form of `x` as a product of generator powers.
    pub fn element(p: &PcPresentation, x: &GroupElement) -> Term {
        Term::product(x.word().into_iter().map(|(g, e)| {
            let c = Term::Const(p.gens()[g].name.clone());
            if e == 1 {
                c
            } else {
                Term::pow(c, e)
            }
        }))
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Int(_) | Term::Const(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Term::Neg(a) | Term::Pow(a, _) => a.vars(out),
            Term::Comm(ts) => ts.iter().for_each(|t| t.vars(out)),
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        let s = |t: &Term| Box::new(t.substitute(map));
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Int(_) | Term::Const(_) => self.clone(),
            Term::Add(a, b) => Term::Add(s(a), s(b)),
            Term::Sub(a, b) => Term::Sub(s(a), s(b)),
            Term::Mul(a, b) => Term::Mul(s(a), s(b)),
            Term::Neg(a) => Term::Neg(s(a)),
            Term::Pow(a, k) => Term::Pow(s(a), *k),
            Term::Comm(ts) => Term::Comm(ts.iter().map(|t| t.substitute(map)).collect()),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Const(_) | Term::Int(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn vars(&self, out: &mut Vec<String>) {
        self.lhs.vars(out);
        self.rhs.vars(out);
    }

    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Equation {
        Equation { lhs: self.lhs.substitute(map), rhs: self.rhs.substitute(map) }
    }
}

/// A finite conjunction of equations. `vars` are the free variables whose
/// values form the solution set; `witnesses` are existentially quantified.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquationSystem {
    pub name: String,
    pub sort: Sort,
    pub vars: Vec<String>,
    pub witnesses: Vec<String>,
    pub equations: Vec<Equation>,
}

impl EquationSystem {
    pub fn new(name: &str, sort: Sort) -> Self {
        EquationSystem { name: name.into(), sort, vars: Vec::new(), witnesses: Vec::new(), equations: Vec::new() }
    }

    pub fn all_vars(&self) -> impl Iterator<Item = &String> {
        self.vars.iter().chain(&self.witnesses)
    }

    pub fn equation(mut self, lhs: Term, rhs: Term) -> Self {
        self.equations.push(Equation::new(lhs, rhs));
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("unknown generator `{0}`")]
    UnknownConstant(String),
    #[error("term is not of the expected sort: {0}")]
    SortMismatch(String),
}

/// Evaluates a group term; `env` supplies variable values.
pub fn eval_group(
    p: &PcPresentation,
    t: &Term,
    env: &dyn Fn(&str) -> Option<GroupElement>,
) -> Result<GroupElement, EvalError> {
    let ev = |t: &Term| eval_group(p, t, env);
    Ok(match t {
        Term::Int(n) if n.is_one() => p.identity(),
        Term::Var(v) => env(v).ok_or_else(|| EvalError::Unbound(v.clone()))?,
        Term::Const(c) => p.gen_named(c).map_err(|_| EvalError::UnknownConstant(c.clone()))?,
        Term::Mul(a, b) => p.mul(&ev(a)?, &ev(b)?),
        Term::Pow(a, k) => p.pow(&ev(a)?, *k),
        Term::Comm(ts) => p.comm_many(&ts.iter().map(ev).collect::<Result<Vec<_>, _>>()?),
        other => return Err(EvalError::SortMismatch(format!("`{other}` in a group term"))),
    })
}

/// Evaluates a ring term over `ℤ`, or over `ℤ/m` when a modulus is given
/// (results in `[0, m)`).
pub fn eval_ring(t: &Term, env: &dyn Fn(&str) -> Option<BigInt>, modulus: Option<&BigInt>) -> Result<BigInt, EvalError> {
    let ev = |t: &Term| eval_ring(t, env, modulus);
    let v = match t {
        Term::Int(n) => n.clone(),
        Term::Var(v) => env(v).ok_or_else(|| EvalError::Unbound(v.clone()))?,
        Term::Add(a, b) => ev(a)? + ev(b)?,
        Term::Sub(a, b) => ev(a)? - ev(b)?,
        Term::Neg(a) => -ev(a)?,
        Term::Mul(a, b) => ev(a)? * ev(b)?,
        Term::Pow(a, k) if *k >= 0 => num_traits::pow(ev(a)?, *k as usize),
        other => return Err(EvalError::SortMismatch(format!("`{other}` in a ring term"))),
    };
    Ok(match modulus {
        Some(m) if !m.is_zero() => v.mod_floor(m),
        _ => v,
    })
}

/// Canonical `ℤ/m` representative, or the integer itself for `m = 0`.
pub fn ring_canonical(v: &BigInt, modulus: Option<&BigInt>) -> BigInt {
    match modulus {
        Some(m) if !m.is_zero() => v.mod_floor(m),
        _ => v.clone(),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::print_term(self))
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::print_system(self))
    }
}
