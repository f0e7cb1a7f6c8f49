use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{center_edef, Equation, EquationSystem, Sort, Term};
use crate::intlinalg::{kernel, lattice_basis, IntMatrix};
use crate::pcgroup::{truncate_to_class, GroupElement, PcError, PcPresentation};
use crate::scalars::{is_c_small, CommutatorMap, RingPresentation, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("system sort {found} does not match the interpreted structure ({expected})")]
    SortMismatch { expected: String, found: String },
    #[error("constant `{0}` has no code in this interpretation")]
    UnknownConstant(String),
    #[error("term `{0}` is not supported for this source")]
    Unsupported(String),
    #[error(transparent)]
    Presentation(#[from] PcError),
    #[error(transparent)]
    Scalars(#[from] ScalarError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    Add,
    Mul,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::Add => "add",
            OpKind::Mul => "mul",
        }
    }
}

/// An e-definition of a relation on code tuples: `params` lists the tuples
/// (each of `code_dim` host variables), the system's witnesses are
/// existential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub params: Vec<Vec<String>>,
    pub system: EquationSystem,
}

impl Formula {
    fn new(name: &str, host: &PcPresentation, params: Vec<Vec<String>>, witnesses: Vec<String>, eqs: Vec<Equation>) -> Self {
        let mut system = EquationSystem::new(name, Sort::Group(host.name().into()));
        system.vars = params.iter().flatten().cloned().collect();
        system.witnesses = witnesses;
        system.equations = eqs;
        Formula { params, system }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceKind {
    /// The ring `ℤ`; systems of sort `ring Z` (or `ring mod m` at finite scale).
    Integers,
    /// A ring of scalars given by its presentation.
    Scalars(RingPresentation),
    /// A group; systems of sort `group <name>` with the listed constants.
    Group { name: String, model: Option<PcPresentation> },
}

impl SourceKind {
    pub fn is_ring(&self) -> bool {
        !matches!(self, SourceKind::Group { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            SourceKind::Integers => "ring Z".into(),
            SourceKind::Scalars(_) => "ring of scalars".into(),
            SourceKind::Group { name, .. } => format!("group {name}"),
        }
    }
}

/// What the code of a source element looks like, for decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientModel {
    /// `N = 1`.
    Trivial,
    /// `N = γ_{k+1}`; cosets are represented by the first `kept` exponents.
    Truncation { k: u32 },
    /// `N = Z(G)` in class 2; cosets are read off in `G/Z(G)`.
    CenterClass2,
    /// Cosets are only computable by enumeration.
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Codec {
    /// A group coded by itself.
    Identity,
    /// The integer `t` coded by `base^t`.
    IntPower { base: GroupElement },
    /// A coset `xN` coded by `x`.
    Quotient { model: QuotientModel, normal: EquationSystem },
    /// A scalar `α` coded by lifts of `α·ē_i`, where `ē_i` is the image of
    /// the `i`-th listed weight-1 generator.
    Scalar { lifts: Vec<usize> },
    /// `outer` interprets the source in the middle group, `inner` the middle
    /// group in the host.
    Composed { outer: Box<EInterpretation>, inner: Box<EInterpretation> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EInterpretation {
    pub id: String,
    pub source: SourceKind,
    pub host: PcPresentation,
    pub code_dim: usize,
    pub domain: Formula,
    pub equality: Formula,
    /// `(x, y, z)` tuples with `z = x op y`.
    pub ops: Vec<(OpKind, Formula)>,
    /// Code of `1` (ring sources) or of the identity (group sources).
    pub unit: Vec<GroupElement>,
    /// Codes of named group constants.
    pub constants: BTreeMap<String, Vec<GroupElement>>,
    pub codec: Codec,
    pub notes: Vec<String>,
}

impl EInterpretation {
    pub fn op(&self, kind: OpKind) -> Option<&Formula> {
        self.ops.iter().find(|(k, _)| *k == kind).map(|(_, f)| f)
    }

    /// Code of the integer `n` in a ring source: the unit code raised to
    /// `n` componentwise.
    pub fn int_code(&self, n: i64) -> Vec<GroupElement> {
        self.unit.iter().map(|u| self.host.pow(u, n)).collect()
    }

    /// Checks the shape required of an interpretation: every defining
    /// system is over the host sort and mentions only its parameters,
    /// witnesses and host constants.
    pub fn check_shape(&self) -> Result<(), String> {
        let mut all = vec![("domain", &self.domain, 1), ("equality", &self.equality, 2)];
        for (k, f) in &self.ops {
            all.push((k.name(), f, 3));
        }
        for (what, f, arity) in all {
            if f.system.sort != Sort::Group(self.host.name().into()) {
                return Err(format!("{what}: wrong sort"));
            }
            if f.params.len() != arity || f.params.iter().any(|t| t.len() != self.code_dim) {
                return Err(format!("{what}: parameter shape"));
            }
            let mut used = Vec::new();
            for e in &f.system.equations {
                e.vars(&mut used);
                for t in [&e.lhs, &e.rhs] {
                    check_constants(t, &self.host).map_err(|c| format!("{what}: unknown constant {c}"))?;
                }
            }
            if let Some(v) = used.iter().find(|v| !f.system.all_vars().any(|w| w == *v)) {
                return Err(format!("{what}: undeclared variable {v}"));
            }
        }
        Ok(())
    }
}

fn check_constants(t: &Term, p: &PcPresentation) -> Result<(), String> {
    match t {
        Term::Const(c) if p.index_of(c).is_none() => Err(c.clone()),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => check_constants(a, p).and(check_constants(b, p)),
        Term::Neg(a) | Term::Pow(a, _) => check_constants(a, p),
        Term::Comm(ts) => ts.iter().try_for_each(|t| check_constants(t, p)),
        _ => Ok(()),
    }
}

/// Parameter names: `x` for one coordinate, `x1 … xm` otherwise.
fn tuple(base: &str, m: usize) -> Vec<String> {
    if m == 1 {
        vec![base.to_string()]
    } else {
        (1..=m).map(|i| format!("{base}{i}")).collect()
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn gen_term(p: &PcPresentation, g: usize) -> Term {
    Term::Const(p.gens()[g].name.clone())
}

fn group_constants(p: &PcPresentation) -> BTreeMap<String, Vec<GroupElement>> {
    (0..p.ngens()).map(|g| (p.gens()[g].name.clone(), vec![p.generator(g)])).collect()
}

/// A group interpreted in itself.
pub fn identity_interpretation(p: &PcPresentation) -> EInterpretation {
    let x = tuple("x", 1);
    let y = tuple("y", 1);
    let z = tuple("z", 1);
    EInterpretation {
        id: format!("identity_{}", p.name()),
        source: SourceKind::Group { name: p.name().into(), model: Some(p.clone()) },
        host: p.clone(),
        code_dim: 1,
        domain: Formula::new("domain", p, vec![x.clone()], vec![], vec![]),
        equality: Formula::new("equality", p, vec![x.clone(), y.clone()], vec![], vec![Equation::new(v("x"), v("y"))]),
        ops: vec![(
            OpKind::Mul,
            Formula::new("mul", p, vec![x, y, z], vec![], vec![Equation::new(v("z"), Term::mul(v("x"), v("y")))]),
        )],
        unit: vec![p.identity()],
        constants: group_constants(p),
        codec: Codec::Identity,
        notes: vec![],
    }
}

/// Renames the witnesses of an e-definition to `w1, w2, …` and replaces its
/// distinguished variable by `replacement`.
fn instantiate_normal(n: &EquationSystem, replacement: Term) -> Result<(Vec<String>, Vec<Equation>), InterpError> {
    let [x] = &n.vars[..] else {
        return Err(InterpError::Precondition("the normal subgroup system needs exactly one free variable".into()));
    };
    let mut map = BTreeMap::from([(x.clone(), replacement)]);
    let mut witnesses = Vec::new();
    for (i, w) in n.witnesses.iter().enumerate() {
        let name = format!("w{}", i + 1);
        map.insert(w.clone(), Term::var(&name));
        witnesses.push(name);
    }
    Ok((witnesses, n.equations.iter().map(|e| e.substitute(&map)).collect()))
}

/// `G/N` in `G`: a coset is coded by any representative, equality is
/// `x·y⁻¹ ∈ N` and the product graph is `x·y·z⁻¹ ∈ N`.
pub fn quotient_interpretation(
    p: &PcPresentation,
    normal: &EquationSystem,
    model: QuotientModel,
) -> Result<EInterpretation, InterpError> {
    if normal.sort != Sort::Group(p.name().into()) {
        return Err(InterpError::SortMismatch { expected: format!("group {}", p.name()), found: normal.sort.to_string() });
    }
    let source_model = match &model {
        QuotientModel::Trivial => Some(p.clone()),
        QuotientModel::Truncation { k } => Some(truncate_to_class(p, *k)?.presentation),
        _ => None,
    };
    let name = match &source_model {
        Some(m) => m.name().to_string(),
        None => format!("{}_mod_{}", p.name(), normal.name),
    };
    let (x, y, z) = (tuple("x", 1), tuple("y", 1), tuple("z", 1));
    let (eq_w, eq_eqs) = instantiate_normal(normal, Term::mul(v("x"), Term::inv(v("y"))))?;
    let (mul_w, mul_eqs) = instantiate_normal(normal, Term::mul(Term::mul(v("x"), v("y")), Term::inv(v("z"))))?;
    let constants = match &source_model {
        Some(m) => (0..m.ngens()).map(|g| (m.gens()[g].name.clone(), vec![p.generator(g)])).collect(),
        None => group_constants(p),
    };
    Ok(EInterpretation {
        id: format!("quotient_{}_by_{}", p.name(), normal.name),
        source: SourceKind::Group { name, model: source_model },
        host: p.clone(),
        code_dim: 1,
        domain: Formula::new("domain", p, vec![x.clone()], vec![], vec![]),
        equality: Formula::new("equality", p, vec![x.clone(), y.clone()], eq_w, eq_eqs),
        ops: vec![(OpKind::Mul, Formula::new("mul", p, vec![x, y, z], mul_w, mul_eqs))],
        unit: vec![p.identity()],
        constants,
        codec: Codec::Quotient { model, normal: normal.clone() },
        notes: vec!["normality of the defining subgroup is assumed by the caller".into()],
    })
}

/// `ℤ` in a class-2 group through `c = [a, b]`: `t` is coded by `c^t`.
///
/// With `C(a) = ⟨a⟩·Z(G)` (c-smallness), `p ∈ C(a)` forces `p = a^s z` and
/// then `[p, b] = c^s`; the product graph reads off `[p, q] = c^{st}`.
pub fn int_interpretation_class2(p: &PcPresentation, a: &GroupElement, b: &GroupElement) -> Result<EInterpretation, InterpError> {
    if p.class() != 2 {
        return Err(InterpError::Precondition(format!("class must be 2, found {}", p.class())));
    }
    for (name, g) in [("a", a), ("b", b)] {
        if !is_c_small(p, g)? {
            return Err(InterpError::Precondition(format!("{name} = {} is not c-small", p.format(g))));
        }
    }
    let c = p.comm(a, b);
    if p.is_identity(&c) {
        return Err(InterpError::Precondition("[a, b] is trivial".into()));
    }
    let (ta, tb) = (Term::element(p, a), Term::element(p, b));
    let (x, y, z) = (tuple("x", 1), tuple("y", 1), tuple("z", 1));
    let domain = Formula::new(
        "domain",
        p,
        vec![x.clone()],
        vec!["p".into()],
        vec![
            Equation::new(Term::comm(v("p"), ta.clone()), Term::one()),
            Equation::new(Term::comm(v("p"), tb.clone()), v("x")),
        ],
    );
    let equality = Formula::new("equality", p, vec![x.clone(), y.clone()], vec![], vec![Equation::new(v("x"), v("y"))]);
    let add = Formula::new(
        "add",
        p,
        vec![x.clone(), y.clone(), z.clone()],
        vec![],
        vec![Equation::new(v("z"), Term::mul(v("x"), v("y")))],
    );
    let mul = Formula::new(
        "mul",
        p,
        vec![x, y, z],
        vec!["p".into(), "q".into()],
        vec![
            Equation::new(Term::comm(v("p"), ta.clone()), Term::one()),
            Equation::new(Term::comm(v("q"), tb.clone()), Term::one()),
            Equation::new(Term::comm(v("p"), tb), v("x")),
            Equation::new(Term::comm(ta, v("q")), v("y")),
            Equation::new(Term::comm(v("p"), v("q")), v("z")),
        ],
    );
    Ok(EInterpretation {
        id: format!("int_{}", p.name()),
        source: SourceKind::Integers,
        host: p.clone(),
        code_dim: 1,
        domain,
        equality,
        ops: vec![(OpKind::Add, add), (OpKind::Mul, mul)],
        unit: vec![c.clone()],
        constants: BTreeMap::new(),
        codec: Codec::IntPower { base: c.clone() },
        notes: vec![
            format!("t is coded by c^t with c = [a, b] = {}", p.format(&c)),
            "product graph orientation: [p, b] = x with p in C(a), [a, q] = y with q in C(b)".into(),
        ],
    })
}

/// Relations `λ` with `Σ λ_pq·f(e_p, e_q) = 0` in `B`, as a lattice basis in
/// `ℤ^{k×k}` (row-major).
fn tensor_relations(cm: &CommutatorMap) -> Vec<Vec<BigInt>> {
    let f = &cm.map;
    let k = f.domain().ngens();
    let nb = f.codomain().ngens();
    let rel = f.codomain().relation_basis();
    let nvars = k * k + rel.len();
    let rows: Vec<Vec<BigInt>> = (0..nb)
        .map(|c| {
            let mut row = vec![BigInt::zero(); nvars];
            for p in 0..k {
                for q in 0..k {
                    row[p * k + q] = f.tensor()[p][q][c].clone();
                }
            }
            for (l, r) in rel.iter().enumerate() {
                row[k * k + l] = -r[c].clone();
            }
            row
        })
        .collect();
    let ker = if rows.is_empty() { IntMatrix::identity(nvars).row_vecs() } else { kernel(&IntMatrix::from_rows(nvars, rows)) };
    let proj: Vec<Vec<BigInt>> = ker.iter().map(|v| v[..k * k].to_vec()).collect();
    lattice_basis(k * k, &proj)
}

fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("coefficient fits in i64")
}

/// The ring of scalars of the commutator map in its class-2 group.
///
/// A scalar `α` is coded by `(u₁, …, u_k)` with `u_i` a lift of `α·ē_i`.
/// The domain asks for the symmetry `[u_i, e_j] = [e_i, u_j]`, that `α`
/// respects the relations of `A = G/Z(G)` and that the induced action on
/// `γ₂` is well defined. Equality and addition are taken modulo the
/// centre; the product graph is `[w_i, e_j] = [v_i, u_j]`.
pub fn scalar_interpretation(p: &PcPresentation, cm: &CommutatorMap, ring: &RingPresentation) -> Result<EInterpretation, InterpError> {
    if p.class() != 2 {
        return Err(InterpError::Precondition(format!("class must be 2, found {}", p.class())));
    }
    let lifts = cm.abelian.gens.clone();
    let k = lifts.len();
    let e: Vec<Term> = lifts.iter().map(|&g| gen_term(p, g)).collect();
    let (x, y, z) = (tuple("x", k), tuple("y", k), tuple("z", k));
    let central = |t: Term| -> Vec<Equation> {
        e.iter().map(|a| Equation::new(Term::comm(t.clone(), a.clone()), Term::one())).collect()
    };
    let mut dom = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            dom.push(Equation::new(Term::comm(v(&x[i]), e[j].clone()), Term::comm(e[i].clone(), v(&x[j]))));
        }
    }
    for r in cm.map.domain().relation_basis() {
        let t = Term::product(
            r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| Term::pow(v(&x[i]), to_i64(c))),
        );
        dom.extend(central(t));
    }
    for lam in tensor_relations(cm) {
        let factors: Vec<Term> = lam
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| {
                let t = Term::comm(v(&x[idx / k]), e[idx % k].clone());
                if c == &BigInt::from(1) {
                    t
                } else {
                    Term::pow(t, to_i64(c))
                }
            })
            .collect();
        if !factors.is_empty() {
            dom.push(Equation::new(Term::product(factors), Term::one()));
        }
    }
    let mut eq = Vec::new();
    let mut add = Vec::new();
    let mut mul = Vec::new();
    for i in 0..k {
        eq.extend(central(Term::mul(v(&x[i]), Term::inv(v(&y[i])))));
        add.extend(central(Term::mul(Term::mul(v(&x[i]), v(&y[i])), Term::inv(v(&z[i])))));
        for j in 0..k {
            mul.push(Equation::new(Term::comm(v(&z[i]), e[j].clone()), Term::comm(v(&y[i]), v(&x[j]))));
        }
    }
    Ok(EInterpretation {
        id: format!("scalars_{}", p.name()),
        source: SourceKind::Scalars(ring.clone()),
        host: p.clone(),
        code_dim: k,
        domain: Formula::new("domain", p, vec![x.clone()], vec![], dom),
        equality: Formula::new("equality", p, vec![x.clone(), y.clone()], vec![], eq),
        ops: vec![
            (OpKind::Add, Formula::new("add", p, vec![x.clone(), y.clone(), z.clone()], vec![], add)),
            (OpKind::Mul, Formula::new("mul", p, vec![x, y, z], vec![], mul)),
        ],
        unit: lifts.iter().map(|&g| p.generator(g)).collect(),
        constants: BTreeMap::new(),
        codec: Codec::Scalar { lifts },
        notes: vec!["defining systems are a reconstruction validated by finite-scale enumeration".into()],
    })
}

/// `center_edef` packaged as the defining system of `Z(G)`.
pub fn center_quotient(p: &PcPresentation) -> Result<EInterpretation, InterpError> {
    quotient_interpretation(p, &center_edef(p), QuotientModel::CenterClass2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqlang::eval_group;
    use crate::pcgroup::catalog::*;
    use crate::scalars::{commutator_bilinear_map, largest_ring_of_scalars};

    fn holds(p: &PcPresentation, f: &Formula, env: &BTreeMap<String, GroupElement>) -> bool {
        let look = |n: &str| env.get(n).cloned();
        f.system.equations.iter().all(|e| eval_group(p, &e.lhs, &look).unwrap() == eval_group(p, &e.rhs, &look).unwrap())
    }

    #[test]
    fn int_interpretation_witnesses() {
        let h = heisenberg();
        let (a, b, c) = (h.generator(0), h.generator(1), h.generator(2));
        let i = int_interpretation_class2(&h, &a, &b).unwrap();
        assert_eq!(i.check_shape(), Ok(()));
        assert_eq!(i.codec, Codec::IntPower { base: c.clone() });
        let env: BTreeMap<String, GroupElement> = [
            ("x", h.pow(&c, 2)),
            ("y", h.pow(&c, 3)),
            ("z", h.pow(&c, 6)),
            ("p", h.pow(&a, 2)),
            ("q", h.pow(&b, 3)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        assert!(holds(&h, i.op(OpKind::Mul).unwrap(), &env));
        let h2 = generalized_heisenberg(2);
        let err = int_interpretation_class2(&h2, &h2.generator(0), &h2.generator(2)).unwrap_err();
        assert!(matches!(err, InterpError::Precondition(_)));
    }

    #[test]
    fn scalar_codes() {
        let h = heisenberg();
        let cm = commutator_bilinear_map(&h).unwrap();
        let r = largest_ring_of_scalars(&cm.map).unwrap();
        let i = scalar_interpretation(&h, &cm, &r).unwrap();
        assert_eq!(i.check_shape(), Ok(()));
        assert_eq!(i.code_dim, 2);
        let (a, b, c) = (h.generator(0), h.generator(1), h.generator(2));
        // the scalar 2 is coded by (a², b²) up to the centre
        let env: BTreeMap<String, GroupElement> =
            [("x1", h.mul(&h.pow(&a, 2), &c)), ("x2", h.pow(&b, 2))].into_iter().map(|(k, v)| (k.into(), v)).collect();
        assert!(holds(&h, &i.domain, &env));
        let bad: BTreeMap<String, GroupElement> =
            [("x1", h.pow(&a, 2)), ("x2", h.pow(&b, 3))].into_iter().map(|(k, v)| (k.into(), v)).collect();
        assert!(!holds(&h, &i.domain, &bad));
        let unit: BTreeMap<String, GroupElement> = [("x1", a), ("x2", b)].into_iter().map(|(k, v)| (k.into(), v)).collect();
        assert!(holds(&h, &i.domain, &unit));
    }

    #[test]
    fn quotient_shapes() {
        let h = heisenberg();
        let q = center_quotient(&h).unwrap();
        assert_eq!(q.check_shape(), Ok(()));
        assert_eq!(q.equality.system.equations.len(), 2);
        let f = free_class3_rank2();
        let w = Term::comm(Term::comm(Term::var("x1"), Term::var("x2")), Term::var("x3"));
        let vars: Vec<String> = ["x1", "x2", "x3"].map(String::from).to_vec();
        let n = crate::eqlang::verbal_edef(&w, &vars, 1, &f).unwrap();
        let t = quotient_interpretation(&f, &n, QuotientModel::Truncation { k: 2 }).unwrap();
        assert_eq!(t.check_shape(), Ok(()));
        assert!(matches!(&t.source, SourceKind::Group { model: Some(m), .. } if m.ngens() == 3));
    }
}
