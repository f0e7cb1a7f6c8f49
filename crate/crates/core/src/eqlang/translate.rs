//! Pushing systems through an interpretation.
//!
//! Each source variable becomes a tuple of host variables constrained by the
//! domain system. Every equation is unnested into atoms `z = x op y` and
//! `x = y`, introducing one fresh code tuple per internal node (numbered in
//! post-order), and every atom is replaced by the matching defining system
//! with freshly named witnesses. When one side of an equation is a variable
//! or constant, it serves directly as the output of the other side's top
//! operation.

use std::collections::{BTreeMap, BTreeSet};

use super::interp::InterpError;
use super::{Codec, EInterpretation, Equation, EquationSystem, Formula, OpKind, QuotientModel, Sort, SourceKind, Term};
use crate::pcgroup::GroupElement;

/// A translated system with the code variables of each source variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    pub system: EquationSystem,
    /// `(source variable, host code variables)` for the free variables.
    pub codes: Vec<(String, Vec<String>)>,
}

/// A code tuple: host variables or constant elements.
type Operand = Vec<Term>;

struct Compiler<'a> {
    interp: &'a EInterpretation,
    used: BTreeSet<String>,
    counter: usize,
    witnesses: Vec<String>,
    equations: Vec<Equation>,
    codes: BTreeMap<String, Vec<String>>,
}

impl Compiler<'_> {
    fn fresh(&mut self, base: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("{base}{}", self.counter);
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }

    fn reserve(&mut self, name: &str) -> String {
        let mut candidate = name.to_string();
        while !self.used.insert(candidate.clone()) {
            candidate.push('_');
        }
        candidate
    }

    /// Code variables for a source variable.
    fn code_vars(&mut self, v: &str) -> Vec<String> {
        let m = self.interp.code_dim;
        if m == 1 {
            vec![self.reserve(v)]
        } else {
            (1..=m).map(|i| self.reserve(&format!("{v}_{i}"))).collect()
        }
    }

    fn constant(&self, code: &[GroupElement]) -> Operand {
        code.iter().map(|x| Term::element(&self.interp.host, x)).collect()
    }

    /// Adds an instance of `f` with its parameters bound to `args`.
    fn instance(&mut self, f: &Formula, args: &[Operand]) {
        let mut map = BTreeMap::new();
        for (tuple, arg) in f.params.iter().zip(args) {
            for (name, t) in tuple.iter().zip(arg) {
                map.insert(name.clone(), t.clone());
            }
        }
        for w in &f.system.witnesses {
            let fresh = self.fresh("_w");
            self.witnesses.push(fresh.clone());
            map.insert(w.clone(), Term::Var(fresh));
        }
        for e in &f.system.equations {
            self.equations.push(e.substitute(&map));
        }
    }

    fn fresh_tuple(&mut self) -> Operand {
        let m = self.interp.code_dim;
        let base = self.fresh("_t");
        let names: Vec<String> = if m == 1 {
            vec![base]
        } else {
            (1..=m).map(|i| self.reserve(&format!("{base}_{i}"))).collect()
        };
        self.witnesses.extend(names.iter().cloned());
        let tuple: Operand = names.iter().map(|n| Term::Var(n.clone())).collect();
        let domain = self.interp.domain.clone();
        self.instance(&domain, std::slice::from_ref(&tuple));
        tuple
    }

    fn op(&mut self, kind: OpKind, x: Operand, y: Operand, out: Option<Operand>) -> Result<Operand, InterpError> {
        let f = self
            .interp
            .op(kind)
            .cloned()
            .ok_or_else(|| InterpError::Unsupported(format!("operation {} in {}", kind.name(), self.interp.source.describe())))?;
        let z = match out {
            Some(z) => z,
            None => self.fresh_tuple(),
        };
        self.instance(&f, &[x, y, z.clone()]);
        Ok(z)
    }

    fn equal(&mut self, x: Operand, y: Operand) {
        let f = self.interp.equality.clone();
        self.instance(&f, &[x, y]);
    }

    fn unit(&self) -> Operand {
        self.constant(&self.interp.unit)
    }

    fn atom(&self, t: &Term) -> Result<Option<Operand>, InterpError> {
        Ok(Some(match t {
            Term::Var(v) => self.codes[v].iter().map(|n| Term::Var(n.clone())).collect(),
            Term::Int(n) if self.interp.source.is_ring() => {
                let k = i64::try_from(n).map_err(|_| InterpError::Unsupported(format!("literal {n}")))?;
                self.constant(&self.interp.int_code(k))
            }
            Term::Int(_) => self.unit(),
            Term::Const(c) => {
                let code = self.interp.constants.get(c).ok_or_else(|| InterpError::UnknownConstant(c.clone()))?;
                self.constant(code)
            }
            _ => return Ok(None),
        }))
    }

    /// `a⁻¹` in a group source, as the solution of `a·s = 1`.
    fn inverse(&mut self, a: Operand, out: Option<Operand>) -> Result<Operand, InterpError> {
        let one = self.unit();
        let s = match out {
            Some(s) => s,
            None => self.fresh_tuple(),
        };
        self.op(OpKind::Mul, a, s.clone(), Some(one))?;
        Ok(s)
    }

    fn power(&mut self, a: Operand, k: i64, out: Option<Operand>) -> Result<Operand, InterpError> {
        let ring = self.interp.source.is_ring();
        let base = if k < 0 {
            if ring {
                return Err(InterpError::Unsupported("negative power in a ring term".into()));
            }
            self.inverse(a, if k == -1 { out.clone() } else { None })?
        } else {
            a
        };
        let n = k.unsigned_abs();
        if n == 1 && k < 0 {
            return Ok(base);
        }
        if n == 0 || n == 1 {
            let value = if n == 0 { self.unit() } else { base };
            return Ok(match out {
                Some(o) => {
                    self.equal(value, o.clone());
                    o
                }
                None => value,
            });
        }
        let mut acc = base.clone();
        for i in 1..n {
            let target = if i + 1 == n { out.clone() } else { None };
            acc = self.op(OpKind::Mul, acc, base.clone(), target)?;
        }
        Ok(acc)
    }

    /// Unnests `t`, writing the value of its top operation into `out` when
    /// given.
    fn unnest(&mut self, t: &Term, out: Option<Operand>) -> Result<Operand, InterpError> {
        if let Some(a) = self.atom(t)? {
            return Ok(match out {
                Some(o) => {
                    self.equal(o.clone(), a);
                    o
                }
                None => a,
            });
        }
        let ring = self.interp.source.is_ring();
        match t {
            Term::Add(a, b) if ring => {
                let (x, y) = (self.unnest(a, None)?, self.unnest(b, None)?);
                self.op(OpKind::Add, x, y, out)
            }
            Term::Sub(a, b) if ring => {
                // a − b = t  ⇔  b + t = a
                let (x, y) = (self.unnest(a, None)?, self.unnest(b, None)?);
                let t = match out {
                    Some(o) => o,
                    None => self.fresh_tuple(),
                };
                self.op(OpKind::Add, y, t.clone(), Some(x))?;
                Ok(t)
            }
            Term::Neg(a) if ring => {
                let x = self.unnest(a, None)?;
                let zero = self.constant(&self.interp.int_code(0));
                let t = match out {
                    Some(o) => o,
                    None => self.fresh_tuple(),
                };
                self.op(OpKind::Add, x, t.clone(), Some(zero))?;
                Ok(t)
            }
            Term::Mul(a, b) => {
                let (x, y) = (self.unnest(a, None)?, self.unnest(b, None)?);
                self.op(OpKind::Mul, x, y, out)
            }
            Term::Pow(a, k) => {
                let x = self.unnest(a, None)?;
                self.power(x, *k, out)
            }
            Term::Comm(ts) if !ring => {
                let mut acc = self.unnest(&ts[0], None)?;
                for (idx, t) in ts[1..].iter().enumerate() {
                    let y = self.unnest(t, None)?;
                    let xi = self.inverse(acc.clone(), None)?;
                    let yi = self.inverse(y.clone(), None)?;
                    let p1 = self.op(OpKind::Mul, xi, yi, None)?;
                    let p2 = self.op(OpKind::Mul, p1, acc, None)?;
                    let target = if idx + 2 == ts.len() { out.clone() } else { None };
                    acc = self.op(OpKind::Mul, p2, y, target)?;
                }
                Ok(acc)
            }
            other => Err(InterpError::Unsupported(other.to_string())),
        }
    }

    fn equation(&mut self, e: &Equation) -> Result<(), InterpError> {
        match (self.atom(&e.lhs)?, self.atom(&e.rhs)?) {
            (Some(x), Some(y)) => self.equal(x, y),
            (None, Some(y)) => {
                self.unnest(&e.lhs, Some(y))?;
            }
            (Some(x), None) => {
                self.unnest(&e.rhs, Some(x))?;
            }
            (None, None) => {
                let x = self.unnest(&e.lhs, None)?;
                let y = self.unnest(&e.rhs, None)?;
                self.equal(x, y);
            }
        }
        Ok(())
    }
}

fn check_sort(i: &EInterpretation, s: &Sort) -> Result<(), InterpError> {
    let ok = match (&i.source, s) {
        (SourceKind::Integers | SourceKind::Scalars(_), Sort::RingZ | Sort::RingMod(_)) => true,
        (SourceKind::Group { name, .. }, Sort::Group(g)) => name == g,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(InterpError::SortMismatch { expected: i.source.describe(), found: s.to_string() })
    }
}

pub fn translate_system(i: &EInterpretation, sigma: &EquationSystem) -> Result<Translation, InterpError> {
    check_sort(i, &sigma.sort)?;
    let mut c = Compiler {
        interp: i,
        used: i.host.gens().iter().map(|g| g.name.clone()).collect(),
        counter: 0,
        witnesses: Vec::new(),
        equations: Vec::new(),
        codes: BTreeMap::new(),
    };
    let mut vars = Vec::new();
    let mut codes = Vec::new();
    for v in &sigma.vars {
        let cv = c.code_vars(v);
        vars.extend(cv.iter().cloned());
        codes.push((v.clone(), cv.clone()));
        c.codes.insert(v.clone(), cv);
    }
    let mut wit = Vec::new();
    for v in &sigma.witnesses {
        let cv = c.code_vars(v);
        wit.extend(cv.iter().cloned());
        c.codes.insert(v.clone(), cv);
    }
    let domain = i.domain.clone();
    for v in sigma.vars.iter().chain(&sigma.witnesses) {
        let tuple: Operand = c.codes[v].iter().map(|n| Term::Var(n.clone())).collect();
        c.instance(&domain, &[tuple]);
    }
    for e in &sigma.equations {
        c.equation(e)?;
    }
    wit.extend(c.witnesses);
    let mut system = EquationSystem::new(&format!("{}_via_{}", sigma.name, i.id), Sort::Group(i.host.name().into()));
    system.vars = vars;
    system.witnesses = wit;
    system.equations = c.equations;
    Ok(Translation { system, codes })
}

/// Lifts an element of the middle group to a host code.
fn lift(inner: &EInterpretation, x: &GroupElement) -> Result<Vec<GroupElement>, InterpError> {
    match &inner.codec {
        Codec::Identity | Codec::Quotient { model: QuotientModel::Trivial, .. } => Ok(vec![x.clone()]),
        Codec::Quotient { model: QuotientModel::Truncation { .. }, .. } => {
            let mut exps = x.exps().to_vec();
            exps.resize(inner.host.ngens(), 0);
            Ok(vec![inner.host.from_exps(&exps)])
        }
        _ => Err(InterpError::Precondition("constants of the middle group cannot be lifted to the host".into())),
    }
}

fn translate_formula(inner: &EInterpretation, f: &Formula) -> Result<Formula, InterpError> {
    let mut sys = f.system.clone();
    sys.sort = match &inner.source {
        SourceKind::Group { name, .. } => Sort::Group(name.clone()),
        _ => return Err(InterpError::Precondition("the middle structure must be a group".into())),
    };
    let t = translate_system(inner, &sys)?;
    let codes: BTreeMap<&String, &Vec<String>> = t.codes.iter().map(|(v, c)| (v, c)).collect();
    let params = f.params.iter().map(|tuple| tuple.iter().flat_map(|v| codes[v].iter().cloned()).collect()).collect();
    let mut system = t.system;
    system.name = f.system.name.clone();
    Ok(Formula { params, system })
}

/// `outer` (source in `B`) composed with `inner` (`B` in the host).
pub fn compose(outer: &EInterpretation, inner: &EInterpretation) -> Result<EInterpretation, InterpError> {
    match &inner.source {
        SourceKind::Group { name, .. } if name == outer.host.name() => {}
        other => {
            return Err(InterpError::SortMismatch { expected: format!("group {}", outer.host.name()), found: other.describe() })
        }
    }
    if outer.codec == Codec::Identity {
        return Ok(inner.clone());
    }
    if inner.codec == Codec::Identity {
        return Ok(outer.clone());
    }
    let lift_all = |code: &[GroupElement]| -> Result<Vec<GroupElement>, InterpError> {
        Ok(code.iter().map(|x| lift(inner, x)).collect::<Result<Vec<_>, _>>()?.concat())
    };
    let constants = outer
        .constants
        .iter()
        .map(|(k, v)| Ok((k.clone(), lift_all(v)?)))
        .collect::<Result<BTreeMap<_, _>, InterpError>>()?;
    Ok(EInterpretation {
        id: format!("{}_in_{}", outer.id, inner.id),
        source: outer.source.clone(),
        host: inner.host.clone(),
        code_dim: outer.code_dim * inner.code_dim,
        domain: translate_formula(inner, &outer.domain)?,
        equality: translate_formula(inner, &outer.equality)?,
        ops: outer
            .ops
            .iter()
            .map(|(k, f)| Ok((*k, translate_formula(inner, f)?)))
            .collect::<Result<Vec<_>, InterpError>>()?,
        unit: lift_all(&outer.unit)?,
        constants,
        codec: Codec::Composed { outer: Box::new(outer.clone()), inner: Box::new(inner.clone()) },
        notes: outer.notes.iter().chain(&inner.notes).cloned().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqlang::{identity_interpretation, int_interpretation_class2, parse_system};
    use crate::pcgroup::catalog::heisenberg;

    #[test]
    fn worked_example_shape() {
        let h = heisenberg();
        let i = int_interpretation_class2(&h, &h.generator(0), &h.generator(1)).unwrap();
        let s = parse_system("system s\nsort ring Z\nvar x y\neq x + y = 5\n", None).unwrap();
        let t = translate_system(&i, &s).unwrap();
        assert_eq!(t.system.vars, vec!["x", "y"]);
        // two domain instances and one addition graph with output c^5
        assert_eq!(t.system.equations.len(), 5);
        assert_eq!(t.system.equations[4].to_string_pair(), ("c^5".into(), "x*y".into()));
        let text = t.system.to_string();
        assert_eq!(parse_system(&text, Some(&h)).unwrap(), t.system);
    }

    #[test]
    fn trivial_equation() {
        let h = heisenberg();
        let i = int_interpretation_class2(&h, &h.generator(0), &h.generator(1)).unwrap();
        let s = parse_system("system s\nsort ring Z\nvar x\neq x = x\n", None).unwrap();
        let t = translate_system(&i, &s).unwrap();
        assert_eq!(t.system.equations.last().unwrap().to_string_pair(), ("x".into(), "x".into()));
    }

    #[test]
    fn identity_composition() {
        let h = heisenberg();
        let i = int_interpretation_class2(&h, &h.generator(0), &h.generator(1)).unwrap();
        let id = identity_interpretation(&h);
        assert_eq!(compose(&i, &id).unwrap(), i);
        let q = crate::eqlang::center_quotient(&h).unwrap();
        assert!(!compose(&id, &q).unwrap_err().to_string().is_empty());
    }

    impl Equation {
        fn to_string_pair(&self) -> (String, String) {
            (self.lhs.to_string(), self.rhs.to_string())
        }
    }
}
