//! Backtracking search over assignments.
//!
//! Group search binds one variable at a time. A variable standing alone as
//! a factor of one side of an equation whose other variables are bound is
//! computed rather than enumerated. Otherwise the variable with the fewest
//! candidates consistent with the already bound variables is enumerated.
//! Every equation is checked as soon as all of its variables are bound.
//!
//! Two reductions shrink the candidate sets. A variable occurring only
//! inside commutators is enumerated modulo the central subgroup spanned by
//! the top-weight generators and expanded afterwards. In a torsion-free
//! class-2 box, a commutator equation `∏[v, t_i]^{k_i} = h` with everything
//! but `v` bound is linear in the weight-1 exponents of `v` and is solved
//! exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::carrier::{to_i64, GroupCarrier, RingCarrier, Value};
use super::{Limits, VerifyError};
use crate::eqlang::{Term};
use crate::intlinalg::{solve_linear, IntMatrix};
use crate::pcgroup::GroupElement;

#[derive(Clone, Debug, PartialEq, Eq)]
enum CTerm {
    One,
    Elem(GroupElement),
    Var(usize),
    Mul(Box<CTerm>, Box<CTerm>),
    Pow(Box<CTerm>, i64),
    Comm(Vec<CTerm>),
}

impl CTerm {
    fn compile(t: &Term, index: &BTreeMap<&str, usize>, c: &GroupCarrier) -> Result<CTerm, VerifyError> {
        let out = CTerm::compile_raw(t, index, c)?;
        let mut vars = Vec::new();
        out.vars(&mut vars);
        Ok(if vars.is_empty() && !matches!(out, CTerm::One | CTerm::Elem(_)) { CTerm::Elem(c.canon(out.eval(c, &[]))) } else { out })
    }

    fn compile_raw(t: &Term, index: &BTreeMap<&str, usize>, c: &GroupCarrier) -> Result<CTerm, VerifyError> {
        let rec = |t: &Term| CTerm::compile(t, index, c);
        Ok(match t {
            Term::Int(n) if *n == BigInt::from(1) => CTerm::One,
            Term::Var(v) => CTerm::Var(*index.get(v.as_str()).ok_or_else(|| VerifyError::Undeclared(v.clone()))?),
            Term::Const(name) => CTerm::Elem(c.constant(name).ok_or_else(|| VerifyError::UnknownConstant(name.clone()))?),
            Term::Mul(a, b) => CTerm::Mul(Box::new(rec(a)?), Box::new(rec(b)?)),
            Term::Pow(a, k) => CTerm::Pow(Box::new(rec(a)?), *k),
            Term::Comm(ts) => CTerm::Comm(ts.iter().map(rec).collect::<Result<_, _>>()?),
            other => return Err(VerifyError::BadTerm(format!("`{other}` in a group system"))),
        })
    }

    fn vars(&self, out: &mut Vec<usize>) {
        match self {
            CTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            CTerm::One | CTerm::Elem(_) => {}
            CTerm::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            CTerm::Pow(a, _) => a.vars(out),
            CTerm::Comm(ts) => ts.iter().for_each(|t| t.vars(out)),
        }
    }

    fn occurrences(&self, v: usize) -> usize {
        match self {
            CTerm::Var(w) => usize::from(*w == v),
            CTerm::One | CTerm::Elem(_) => 0,
            CTerm::Mul(a, b) => a.occurrences(v) + b.occurrences(v),
            CTerm::Pow(a, _) => a.occurrences(v),
            CTerm::Comm(ts) => ts.iter().map(|t| t.occurrences(v)).sum(),
        }
    }

    fn outside_comm(&self, v: usize) -> bool {
        match self {
            CTerm::Var(w) => *w == v,
            CTerm::One | CTerm::Elem(_) | CTerm::Comm(_) => false,
            CTerm::Mul(a, b) => a.outside_comm(v) || b.outside_comm(v),
            CTerm::Pow(a, _) => a.outside_comm(v),
        }
    }

    fn eval(&self, c: &GroupCarrier, env: &[Option<GroupElement>]) -> GroupElement {
        match self {
            CTerm::One => c.identity(),
            CTerm::Elem(x) => x.clone(),
            CTerm::Var(v) => env[*v].clone().expect("variable bound before evaluation"),
            CTerm::Mul(a, b) => c.mul(&a.eval(c, env), &b.eval(c, env)),
            CTerm::Pow(a, k) => c.pow(&a.eval(c, env), *k),
            CTerm::Comm(ts) => c.comm_many(&ts.iter().map(|t| t.eval(c, env)).collect::<Vec<_>>()),
        }
    }
}

#[derive(Clone, Debug)]
struct Factor {
    term: CTerm,
    inv: bool,
}

fn flatten(t: &CTerm, inv: bool, out: &mut Vec<Factor>) {
    match t {
        CTerm::One => {}
        CTerm::Mul(a, b) if inv => {
            flatten(b, true, out);
            flatten(a, true, out);
        }
        CTerm::Mul(a, b) => {
            flatten(a, false, out);
            flatten(b, false, out);
        }
        CTerm::Pow(a, 1) => flatten(a, inv, out),
        CTerm::Pow(a, -1) => flatten(a, !inv, out),
        _ => out.push(Factor { term: t.clone(), inv }),
    }
}

fn eval_factors(fs: &[Factor], c: &GroupCarrier, env: &[Option<GroupElement>]) -> GroupElement {
    fs.iter().fold(c.identity(), |acc, f| {
        let x = f.term.eval(c, env);
        c.mul(&acc, &if f.inv { c.inv(&x) } else { x })
    })
}

#[derive(Clone, Debug)]
struct Equation {
    lhs: CTerm,
    rhs: CTerm,
    vars: Vec<usize>,
}

/// `side = A·v^{±1}·C` with `v` nowhere else in the equation.
#[derive(Clone, Debug)]
struct Isolation {
    eq: usize,
    side: Vec<Factor>,
    pos: usize,
    other: CTerm,
}

#[derive(Clone, Debug)]
enum LinFactor {
    Fixed(Factor),
    Comm { other: CTerm, coef: i64 },
}

#[derive(Clone, Debug)]
struct LinearEq {
    lhs: Vec<LinFactor>,
    rhs: Vec<LinFactor>,
}

fn linear_side(fs: &[Factor], v: usize) -> Option<Vec<LinFactor>> {
    fs.iter()
        .map(|f| {
            if f.term.occurrences(v) == 0 {
                return Some(LinFactor::Fixed(f.clone()));
            }
            let (inner, k) = match &f.term {
                CTerm::Pow(a, k) => (a.as_ref(), *k),
                t => (t, 1),
            };
            let CTerm::Comm(ts) = inner else { return None };
            if ts.len() != 2 {
                return None;
            }
            let (sign, other) = match (&ts[0], &ts[1]) {
                (CTerm::Var(w), o) if *w == v && o.occurrences(v) == 0 => (1, o),
                (o, CTerm::Var(w)) if *w == v && o.occurrences(v) == 0 => (-1, o),
                _ => return None,
            };
            let coef = sign * k * if f.inv { -1 } else { 1 };
            Some(LinFactor::Comm { other: other.clone(), coef })
        })
        .collect()
}

/// Weight-1 and top-weight generator indices of a torsion-free class-2 box.
struct LinearCtx {
    low: Vec<usize>,
    top: Vec<usize>,
}

pub(crate) struct GroupSearch<'a> {
    carrier: &'a GroupCarrier,
    limits: &'a Limits,
    nfree: usize,
    eqs: Vec<Equation>,
    var_eqs: Vec<Vec<usize>>,
    reduced: Vec<bool>,
    bounds: Vec<Option<i64>>,
    isolations: Vec<Vec<Isolation>>,
    linear: Option<LinearCtx>,
    lin_forms: Vec<BTreeMap<usize, Option<LinearEq>>>,
    domains: Vec<Option<Vec<GroupElement>>>,
    env: Vec<Option<GroupElement>>,
    unbound: Vec<usize>,
    solutions: BTreeMap<Vec<GroupElement>, Vec<GroupElement>>,
    pub(crate) nodes: u64,
}

enum Step {
    Assign(usize, GroupElement),
    Try(usize, Vec<GroupElement>),
    Dead,
}

/// Result of a group search: representatives with a full witness
/// assignment each, and which free variables were searched modulo the top
/// weight.
pub(crate) struct GroupOutcome {
    pub solutions: Vec<(Vec<GroupElement>, Vec<GroupElement>)>,
    pub reduced: Vec<bool>,
    pub nodes: u64,
}

impl<'a> GroupSearch<'a> {
    pub(crate) fn new(
        carrier: &'a GroupCarrier,
        names: &[String],
        nfree: usize,
        equations: &[(Term, Term)],
        witness_bound: Option<i64>,
        limits: &'a Limits,
    ) -> Result<Self, VerifyError> {
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let n = names.len();
        let mut eqs = Vec::new();
        for (l, r) in equations {
            let lhs = CTerm::compile(l, &index, carrier)?;
            let rhs = CTerm::compile(r, &index, carrier)?;
            let mut vars = Vec::new();
            lhs.vars(&mut vars);
            rhs.vars(&mut vars);
            eqs.push(Equation { lhs, rhs, vars });
        }
        let mut var_eqs = vec![Vec::new(); n];
        for (i, e) in eqs.iter().enumerate() {
            for &v in &e.vars {
                var_eqs[v].push(i);
            }
        }
        let reduced: Vec<bool> = (0..n)
            .map(|v| carrier.supports_reduction() && eqs.iter().all(|e| !e.lhs.outside_comm(v) && !e.rhs.outside_comm(v)))
            .collect();
        let mut isolations = vec![Vec::new(); n];
        for (i, e) in eqs.iter().enumerate() {
            for &v in &e.vars {
                if e.lhs.occurrences(v) + e.rhs.occurrences(v) != 1 {
                    continue;
                }
                for (side, other) in [(&e.lhs, &e.rhs), (&e.rhs, &e.lhs)] {
                    let mut fs = Vec::new();
                    flatten(side, false, &mut fs);
                    if let Some(pos) = fs.iter().position(|f| f.term == CTerm::Var(v)) {
                        isolations[v].push(Isolation { eq: i, side: fs, pos, other: other.clone() });
                    }
                }
            }
        }
        let p = carrier.presentation();
        let linear = match carrier {
            GroupCarrier::Box { .. } if p.class() == 2 && p.is_torsion_free_presentation() => Some(LinearCtx {
                low: (0..p.ngens()).filter(|&g| p.weight(g) == 1).collect(),
                top: (0..p.ngens()).filter(|&g| p.weight(g) == 2).collect(),
            }),
            _ => None,
        };
        let mut lin_forms = vec![BTreeMap::new(); n];
        if linear.is_some() {
            for (v, forms) in lin_forms.iter_mut().enumerate() {
                if !reduced[v] {
                    continue;
                }
                for &i in &var_eqs[v] {
                    let e = &eqs[i];
                    let (mut l, mut r) = (Vec::new(), Vec::new());
                    flatten(&e.lhs, false, &mut l);
                    flatten(&e.rhs, false, &mut r);
                    let form = linear_side(&l, v).zip(linear_side(&r, v)).map(|(lhs, rhs)| LinearEq { lhs, rhs });
                    forms.insert(i, form);
                }
            }
        }
        let bounds = (0..n).map(|v| if v < nfree { None } else { witness_bound }).collect();
        let unbound = eqs.iter().map(|e| e.vars.len()).collect();
        Ok(GroupSearch {
            carrier,
            limits,
            nfree,
            eqs,
            var_eqs,
            reduced,
            bounds,
            isolations,
            linear,
            lin_forms,
            domains: vec![None; n],
            env: vec![None; n],
            unbound,
            solutions: BTreeMap::new(),
            nodes: 0,
        })
    }

    fn holds(&self, i: usize) -> bool {
        let e = &self.eqs[i];
        e.lhs.eval(self.carrier, &self.env) == e.rhs.eval(self.carrier, &self.env)
    }

    fn count(&self, v: usize) -> u128 {
        match &self.domains[v] {
            Some(d) => d.len() as u128,
            None => self.carrier.count(self.bounds[v], self.reduced[v]),
        }
    }

    fn box_bound(&self, v: usize) -> i64 {
        match (self.bounds[v], self.carrier) {
            (Some(b), _) => b,
            (None, GroupCarrier::Box { bound, .. }) => *bound,
            _ => 0,
        }
    }

    /// Candidates from the linear commutator equations in `eqs`, or `None`
    /// if one of them is not linear in `v`.
    fn linear_candidates(&self, v: usize, eqs: &[usize]) -> Result<Option<Vec<GroupElement>>, VerifyError> {
        let Some(ctx) = &self.linear else { return Ok(None) };
        let c = self.carrier;
        let p = c.presentation();
        let n1 = ctx.low.len();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut rhs: Vec<BigInt> = Vec::new();
        for &i in eqs {
            let Some(Some(form)) = self.lin_forms[v].get(&i) else { return Ok(None) };
            let fixed = |fs: &[LinFactor]| {
                let parts: Vec<Factor> =
                    fs.iter().filter_map(|f| if let LinFactor::Fixed(x) = f { Some(x.clone()) } else { None }).collect();
                eval_factors(&parts, c, &self.env)
            };
            let target = c.mul(&c.inv(&fixed(&form.lhs)), &fixed(&form.rhs));
            if ctx.low.iter().any(|&g| target.exps()[g] != 0) {
                return Ok(Some(Vec::new()));
            }
            let mut block = vec![vec![BigInt::from(0); n1]; ctx.top.len()];
            for (fs, sign) in [(&form.lhs, 1), (&form.rhs, -1)] {
                for f in fs {
                    if let LinFactor::Comm { other, coef } = f {
                        let o = other.eval(c, &self.env);
                        for (r, &g) in ctx.low.iter().enumerate() {
                            let cm = p.comm(&p.generator(g), &o);
                            for (s, &t) in ctx.top.iter().enumerate() {
                                block[s][r] += BigInt::from(sign * coef * cm.exps()[t]);
                            }
                        }
                    }
                }
            }
            rows.extend(block);
            rhs.extend(ctx.top.iter().map(|&t| BigInt::from(target.exps()[t])));
        }
        let rep = |u: &[i64]| {
            let mut exps = vec![0; p.ngens()];
            for (r, &g) in ctx.low.iter().enumerate() {
                exps[g] = u[r];
            }
            GroupElement(exps)
        };
        if rows.is_empty() {
            return Ok(None);
        }
        let sol = solve_linear(&IntMatrix::from_rows(n1, rows.clone()), &rhs).expect("dimensions agree");
        let Some(part) = sol.particular else { return Ok(Some(Vec::new())) };
        if sol.kernel.is_empty() {
            let u: Option<Vec<i64>> = part.iter().map(to_i64).collect();
            return Ok(Some(u.map(|u| vec![rep(&u)]).unwrap_or_default()));
        }
        let b = self.box_bound(v);
        let size = ((2 * b + 1) as u128).pow(n1 as u32);
        if size > self.limits.max_domain {
            return Err(VerifyError::TooLarge(format!("{size} candidates for one variable")));
        }
        let rows64: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| to_i64(x).expect("small")).collect()).collect();
        let rhs64: Vec<i64> = rhs.iter().map(|x| to_i64(x).expect("small")).collect();
        Ok(Some(
            super::carrier::box_points(&vec![(-b, b); n1])
                .into_iter()
                .filter(|u| rows64.iter().zip(&rhs64).all(|(row, t)| row.iter().zip(u).map(|(a, x)| a * x).sum::<i64>() == *t))
                .map(|u| rep(&u))
                .collect(),
        ))
    }

    /// Candidates for `v` ignoring other variables.
    fn static_domain(&mut self, v: usize) -> Result<&[GroupElement], VerifyError> {
        if self.domains[v].is_none() {
            let unary: Vec<usize> = self.var_eqs[v].iter().copied().filter(|&i| self.eqs[i].vars.len() == 1).collect();
            let mut dom = if self.reduced[v] && !unary.is_empty() { self.linear_candidates(v, &unary)? } else { None };
            if dom.is_none() {
                let size = self.carrier.count(self.bounds[v], self.reduced[v]);
                if size > self.limits.max_domain {
                    return Err(VerifyError::TooLarge(format!("{size} candidates for one variable")));
                }
                let all = self.carrier.elements(self.bounds[v], self.reduced[v]);
                let mut kept = Vec::new();
                for x in all {
                    self.env[v] = Some(x.clone());
                    if unary.iter().all(|&i| self.holds(i)) {
                        kept.push(x);
                    }
                }
                self.env[v] = None;
                dom = Some(kept);
            }
            self.domains[v] = dom;
        }
        Ok(self.domains[v].as_deref().expect("computed above"))
    }

    fn choose(&mut self) -> Result<Step, VerifyError> {
        let n = self.env.len();
        for v in (0..n).filter(|&v| self.env[v].is_none()) {
            for iso in &self.isolations[v] {
                if self.unbound[iso.eq] != 1 {
                    continue;
                }
                let c = self.carrier;
                let a = eval_factors(&iso.side[..iso.pos], c, &self.env);
                let rest = eval_factors(&iso.side[iso.pos + 1..], c, &self.env);
                let t = iso.other.eval(c, &self.env);
                let y = c.mul(&c.mul(&c.inv(&a), &t), &c.inv(&rest));
                let x = if iso.side[iso.pos].inv { c.inv(&y) } else { y };
                return Ok(Step::Assign(v, x));
            }
        }
        let mut best: Option<(usize, usize, Vec<GroupElement>)> = None;
        let open: Vec<usize> = (0..n).filter(|&v| self.env[v].is_none()).collect();
        for v in open {
            let ready: Vec<usize> =
                self.var_eqs[v].iter().copied().filter(|&i| self.unbound[i] == 1 && self.eqs[i].vars.len() > 1).collect();
            if ready.is_empty() {
                continue;
            }
            let mut cands = None;
            if self.reduced[v] && self.linear.is_some() {
                let all: Vec<usize> = self.var_eqs[v].iter().copied().filter(|&i| self.unbound[i] == 1).collect();
                cands = self.linear_candidates(v, &all)?;
            }
            let cands = match cands {
                Some(c) => c,
                None => {
                    if self.count(v) > self.limits.filter_limit {
                        continue;
                    }
                    let dom = self.static_domain(v)?.to_vec();
                    let mut kept = Vec::new();
                    for x in dom {
                        self.env[v] = Some(x.clone());
                        if ready.iter().all(|&i| self.holds(i)) {
                            kept.push(x);
                        }
                    }
                    self.env[v] = None;
                    kept
                }
            };
            if cands.len() <= 1 {
                return Ok(if cands.is_empty() { Step::Dead } else { Step::Try(v, cands) });
            }
            if best.as_ref().is_none_or(|b| cands.len() < b.0) {
                best = Some((cands.len(), v, cands));
            }
        }
        if let Some((_, v, cands)) = best {
            return Ok(Step::Try(v, cands));
        }
        let v = (0..n)
            .filter(|&v| self.env[v].is_none())
            .min_by_key(|&v| (self.count(v), v >= self.nfree, v))
            .expect("an unbound variable remains");
        let dom = self.static_domain(v)?.to_vec();
        Ok(Step::Try(v, dom))
    }

    fn assign(&mut self, v: usize, x: GroupElement) -> bool {
        let mut ok = v >= self.nfree || self.carrier.in_box(&x);
        self.env[v] = Some(x);
        for k in 0..self.var_eqs[v].len() {
            let i = self.var_eqs[v][k];
            self.unbound[i] -= 1;
            if ok && self.unbound[i] == 0 && !self.holds(i) {
                ok = false;
            }
        }
        ok
    }

    fn unassign(&mut self, v: usize) {
        self.env[v] = None;
        for &i in &self.var_eqs[v] {
            self.unbound[i] += 1;
        }
    }

    fn dfs(&mut self) -> Result<bool, VerifyError> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(VerifyError::TooLarge(format!("more than {} search nodes", self.limits.max_nodes)));
        }
        if self.env.iter().all(Option::is_some) {
            let all: Vec<GroupElement> = self.env.iter().map(|x| x.clone().expect("bound")).collect();
            self.solutions.entry(all[..self.nfree].to_vec()).or_insert(all);
            return Ok(true);
        }
        let free_done = self.env[..self.nfree].iter().all(Option::is_some);
        if free_done {
            let proj: Vec<GroupElement> = self.env[..self.nfree].iter().map(|x| x.clone().expect("bound")).collect();
            if self.solutions.contains_key(&proj) {
                return Ok(true);
            }
        }
        let (v, cands) = match self.choose()? {
            Step::Dead => return Ok(false),
            Step::Assign(v, x) => (v, vec![x]),
            Step::Try(v, c) => (v, c),
        };
        let mut found = false;
        for x in cands {
            let ok = self.assign(v, x);
            let sub = ok && self.dfs()?;
            self.unassign(v);
            if sub {
                found = true;
                if free_done {
                    break;
                }
            }
        }
        Ok(found)
    }

    pub(crate) fn run(mut self) -> Result<GroupOutcome, VerifyError> {
        let constant_ok = (0..self.eqs.len()).filter(|&i| self.eqs[i].vars.is_empty()).all(|i| self.holds(i));
        for v in 0..self.env.len() {
            let unary = self.var_eqs[v].iter().any(|&i| self.eqs[i].vars.len() == 1);
            if unary && (self.reduced[v] && self.linear.is_some() || self.count(v) <= self.limits.filter_limit) {
                self.static_domain(v)?;
            }
        }
        if constant_ok {
            if self.env.is_empty() {
                self.solutions.insert(Vec::new(), Vec::new());
            } else {
                self.dfs()?;
            }
        }
        Ok(GroupOutcome {
            solutions: self.solutions.into_iter().collect(),
            reduced: self.reduced[..self.nfree].to_vec(),
            nodes: self.nodes,
        })
    }
}

#[derive(Clone, Debug)]
enum RTerm {
    Int(BigInt),
    Var(usize),
    Add(Box<RTerm>, Box<RTerm>),
    Sub(Box<RTerm>, Box<RTerm>),
    Neg(Box<RTerm>),
    Mul(Box<RTerm>, Box<RTerm>),
    Pow(Box<RTerm>, u32),
}

impl RTerm {
    fn compile(t: &Term, index: &BTreeMap<&str, usize>) -> Result<RTerm, VerifyError> {
        let rec = |t: &Term| RTerm::compile(t, index).map(Box::new);
        Ok(match t {
            Term::Int(n) => RTerm::Int(n.clone()),
            Term::Var(v) => RTerm::Var(*index.get(v.as_str()).ok_or_else(|| VerifyError::Undeclared(v.clone()))?),
            Term::Add(a, b) => RTerm::Add(rec(a)?, rec(b)?),
            Term::Sub(a, b) => RTerm::Sub(rec(a)?, rec(b)?),
            Term::Neg(a) => RTerm::Neg(rec(a)?),
            Term::Mul(a, b) => RTerm::Mul(rec(a)?, rec(b)?),
            Term::Pow(a, k) if *k >= 0 => RTerm::Pow(rec(a)?, u32::try_from(*k).map_err(|_| VerifyError::BadTerm(t.to_string()))?),
            other => return Err(VerifyError::BadTerm(format!("`{other}` in a ring system"))),
        })
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            RTerm::Int(_) => None,
            RTerm::Var(v) => Some(*v),
            RTerm::Add(a, b) | RTerm::Sub(a, b) | RTerm::Mul(a, b) => a.max_var().max(b.max_var()),
            RTerm::Neg(a) | RTerm::Pow(a, _) => a.max_var(),
        }
    }
}

/// Ring elements: exact integers or indices into a finite ring.
#[derive(Clone, Debug, PartialEq, Eq)]
enum RVal {
    Z(BigInt),
    F(usize),
}

fn reval(t: &RTerm, r: &RingCarrier, env: &[RVal]) -> RVal {
    let ev = |t: &RTerm| reval(t, r, env);
    match (r, t) {
        (RingCarrier::Integers { .. }, _) => {
            let z = |v: RVal| if let RVal::Z(x) = v { x } else { unreachable!("integer carrier") };
            RVal::Z(match t {
                RTerm::Int(n) => n.clone(),
                RTerm::Var(v) => z(env[*v].clone()),
                RTerm::Add(a, b) => z(ev(a)) + z(ev(b)),
                RTerm::Sub(a, b) => z(ev(a)) - z(ev(b)),
                RTerm::Neg(a) => -z(ev(a)),
                RTerm::Mul(a, b) => z(ev(a)) * z(ev(b)),
                RTerm::Pow(a, k) => num_traits::pow(z(ev(a)), *k as usize),
            })
        }
        (RingCarrier::Finite(f), _) => {
            let i = |v: RVal| if let RVal::F(x) = v { x } else { unreachable!("finite carrier") };
            RVal::F(match t {
                RTerm::Int(n) => f.from_int(n),
                RTerm::Var(v) => i(env[*v].clone()),
                RTerm::Add(a, b) => f.add(i(ev(a)), i(ev(b))),
                RTerm::Sub(a, b) => f.add(i(ev(a)), f.neg(i(ev(b)))),
                RTerm::Neg(a) => f.neg(i(ev(a))),
                RTerm::Mul(a, b) => f.mul(i(ev(a)), i(ev(b))),
                RTerm::Pow(a, k) => {
                    let x = i(ev(a));
                    (0..*k).fold(f.one(), |acc, _| f.mul(acc, x))
                }
            })
        }
    }
}

pub(crate) struct RingOutcome {
    pub solutions: Vec<Vec<Value>>,
    pub nodes: u64,
}

/// Plain backtracking in declaration order; each equation is checked once
/// its last variable is bound.
pub(crate) fn ring_search(
    r: &RingCarrier,
    names: &[String],
    nfree: usize,
    equations: &[(Term, Term)],
    limits: &Limits,
) -> Result<RingOutcome, VerifyError> {
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut at_depth: Vec<Vec<(RTerm, RTerm)>> = vec![Vec::new(); names.len() + 1];
    for (l, rt) in equations {
        let (l, rt) = (RTerm::compile(l, &index)?, RTerm::compile(rt, &index)?);
        let d = l.max_var().max(rt.max_var()).map_or(0, |v| v + 1);
        at_depth[d].push((l, rt));
    }
    let values: Vec<RVal> = match r {
        RingCarrier::Integers { bound } => (-bound..=*bound).map(|t| RVal::Z(BigInt::from(t))).collect(),
        RingCarrier::Finite(f) => (0..f.len()).map(RVal::F).collect(),
    };
    struct St<'a> {
        r: &'a RingCarrier,
        values: Vec<RVal>,
        at_depth: Vec<Vec<(RTerm, RTerm)>>,
        env: Vec<RVal>,
        nfree: usize,
        n: usize,
        out: Vec<Vec<RVal>>,
        nodes: u64,
        max: u64,
    }
    fn go(s: &mut St<'_>, depth: usize) -> Result<bool, VerifyError> {
        s.nodes += 1;
        if s.nodes > s.max {
            return Err(VerifyError::TooLarge(format!("more than {} search nodes", s.max)));
        }
        if !s.at_depth[depth].iter().all(|(l, r)| reval(l, s.r, &s.env) == reval(r, s.r, &s.env)) {
            return Ok(false);
        }
        if depth == s.n {
            s.out.push(s.env[..s.nfree].to_vec());
            return Ok(true);
        }
        let mut found = false;
        for k in 0..s.values.len() {
            s.env.push(s.values[k].clone());
            let sub = go(s, depth + 1)?;
            s.env.pop();
            if sub {
                found = true;
                if depth >= s.nfree {
                    break;
                }
            }
        }
        Ok(found)
    }
    let mut st = St { r, values, at_depth, env: Vec::new(), nfree, n: names.len(), out: Vec::new(), nodes: 0, max: limits.max_nodes };
    go(&mut st, 0)?;
    let to_value = |v: &RVal| -> Value {
        match (v, r) {
            (RVal::Z(x), _) => vec![to_i64(x).expect("within the box")],
            (RVal::F(i), RingCarrier::Finite(f)) => f.label(*i).clone(),
            _ => unreachable!("value matches carrier"),
        }
    };
    let mut solutions: Vec<Vec<Value>> = st.out.iter().map(|s| s.iter().map(to_value).collect()).collect();
    solutions.sort();
    solutions.dedup();
    Ok(RingOutcome { solutions, nodes: st.nodes })
}
