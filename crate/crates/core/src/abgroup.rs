//! Finitely generated abelian groups given as cokernels `ℤ^n / Λ`, where the
//! rows of a relation matrix span `Λ`.
//!
//! Elements are stored reduced against the Hermite basis of `Λ`, so equality
//! of elements is equality of coordinate vectors.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::intlinalg::{kernel, lattice_basis, lattice_member, reduce_mod_hnf, snf, IntMatrix, SnfResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbError {
    #[error("elements belong to different groups")]
    OwnerMismatch,
    #[error("expected a vector of length {expected}, found {found}")]
    WrongLength { expected: usize, found: usize },
}

struct AbInner {
    ngens: usize,
    relations: IntMatrix,
    basis: Vec<Vec<BigInt>>,
    snf: SnfResult,
    invariants: Vec<BigInt>,
}

/// `ℤ^ngens` modulo the row lattice of `relations`. Cheap to clone.
#[derive(Clone)]
pub struct AbGroup(Arc<AbInner>);

impl PartialEq for AbGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.ngens == other.0.ngens && self.0.basis == other.0.basis)
    }
}

impl Eq for AbGroup {}

impl fmt::Debug for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbGroup({self})")
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion().iter().map(|t| format!("Z/{t}")).collect();
        match self.rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl AbGroup {
    /// The group `ℤ^n / rowspace(relations)`, with `n = relations.cols()`.
    pub fn from_relations(relations: IntMatrix) -> Self {
        let ngens = relations.cols();
        let rows = relations.row_vecs();
        let basis = lattice_basis(ngens, &rows);
        let s = snf(&relations);
        let invariants = s.invariant_factors();
        AbGroup(Arc::new(AbInner { ngens, relations, basis, snf: s, invariants }))
    }

    pub fn free(n: usize) -> Self {
        Self::from_relations(IntMatrix::zeros(0, n))
    }

    /// Direct sum of cyclic groups: order 0 stands for `ℤ`.
    pub fn cyclic_sum(orders: &[i64]) -> Self {
        let n = orders.len();
        let rows = orders
            .iter()
            .enumerate()
            .filter(|(_, &o)| o != 0)
            .map(|(i, &o)| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = BigInt::from(o);
                r
            })
            .collect();
        Self::from_relations(IntMatrix::from_rows(n, rows))
    }

    pub fn ngens(&self) -> usize {
        self.0.ngens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    /// Hermite basis of the relation lattice.
    pub fn relation_basis(&self) -> &[Vec<BigInt>] {
        &self.0.basis
    }

    /// Nonzero invariant factors of the relation matrix (ones included).
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.0.invariants
    }

    /// Torsion invariants `t₁ | … | t_k`, all greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.0.invariants.iter().filter(|t| !t.is_one()).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.0.ngens - self.0.invariants.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 0 && self.torsion().is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion().is_empty()
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.0.ngens, "coordinate length mismatch");
        reduce_mod_hnf(v, &self.0.basis)
    }

    pub fn element(&self, coords: &[BigInt]) -> Result<AbElement, AbError> {
        if coords.len() != self.0.ngens {
            return Err(AbError::WrongLength { expected: self.0.ngens, found: coords.len() });
        }
        Ok(AbElement { group: self.clone(), coords: self.reduce(coords) })
    }

    pub fn zero(&self) -> AbElement {
        AbElement { group: self.clone(), coords: vec![BigInt::zero(); self.0.ngens] }
    }

    pub fn generator(&self, i: usize) -> AbElement {
        let mut v = vec![BigInt::zero(); self.0.ngens];
        v[i] = BigInt::one();
        self.element(&v).expect("length matches")
    }

    /// True iff `v` lies in the relation lattice.
    pub fn is_relation(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Additive order of the class of `v`; `None` for infinite order.
    pub fn order_of(&self, v: &[BigInt]) -> Option<BigInt> {
        let y = self.0.snf.v.clone().transpose().mul_vec(v);
        let r = self.0.invariants.len();
        if y[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut order = BigInt::one();
        for (d, yi) in self.0.invariants.iter().zip(&y) {
            let o = d / d.gcd(yi);
            order = order.lcm(&o);
        }
        Some(order)
    }

    /// Image of `v` under the projection onto the free part `ℤ^rank`,
    /// taken from the Smith form. An isomorphism when the group is torsion
    /// free.
    pub fn free_part(&self, v: &[BigInt]) -> Vec<BigInt> {
        let y = self.0.snf.v.clone().transpose().mul_vec(v);
        y[self.0.invariants.len()..].to_vec()
    }

    /// Coordinates `c` with `v ≡ Σ c_i·gens_i` modulo the relations, if any.
    pub fn span_coords(&self, gens: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut basis = gens.to_vec();
        basis.extend(self.0.basis.iter().cloned());
        lattice_member(v, &basis, None).map(|c| c[..gens.len()].to_vec())
    }

    /// Enumerates every element when the group is finite.
    pub fn elements(&self) -> Option<Vec<AbElement>> {
        if self.rank() > 0 {
            return None;
        }
        // reduced representatives: pivot coordinates range over [0, pivot)
        let n = self.0.ngens;
        let mut ranges = vec![BigInt::one(); n];
        for row in &self.0.basis {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            ranges[p] = row[p].clone();
        }
        let mut out = vec![vec![BigInt::zero(); n]];
        for (i, r) in ranges.iter().enumerate() {
            let mut next = Vec::new();
            for v in &out {
                let mut k = BigInt::zero();
                while &k < r {
                    let mut w = v.clone();
                    w[i] = k.clone();
                    next.push(w);
                    k += 1;
                }
            }
            out = next;
        }
        let mut elems: Vec<AbElement> = out.iter().map(|v| self.element(v).expect("length")).collect();
        elems.sort_by(|a, b| a.coords.cmp(&b.coords));
        elems.dedup();
        Some(elems)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct AbElement {
    group: AbGroup,
    coords: Vec<BigInt>,
}

impl fmt::Debug for AbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
}

impl AbElement {
    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    fn check(&self, other: &AbElement) -> Result<(), AbError> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(AbError::OwnerMismatch)
        }
    }

    pub fn add(&self, other: &AbElement) -> Result<AbElement, AbError> {
        self.check(other)?;
        let v: Vec<BigInt> = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        self.group.element(&v)
    }

    pub fn sub(&self, other: &AbElement) -> Result<AbElement, AbError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AbElement {
        let v: Vec<BigInt> = self.coords.iter().map(|a| -a).collect();
        self.group.element(&v).expect("length preserved")
    }

    pub fn scale(&self, k: &BigInt) -> AbElement {
        let v: Vec<BigInt> = self.coords.iter().map(|a| a * k).collect();
        self.group.element(&v).expect("length preserved")
    }

    pub fn equals(&self, other: &AbElement) -> Result<bool, AbError> {
        self.check(other)?;
        Ok(self.coords == other.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn order(&self) -> Option<BigInt> {
        self.group.order_of(&self.coords)
    }
}

/// A homomorphism between cokernel presentations, acting on coordinate
/// columns: `x ↦ M·x`.
#[derive(Clone, Debug)]
pub struct AbHom {
    pub source: AbGroup,
    pub target: AbGroup,
    pub matrix: IntMatrix,
}

impl AbHom {
    pub fn apply(&self, x: &AbElement) -> Result<AbElement, AbError> {
        if x.group != self.source {
            return Err(AbError::OwnerMismatch);
        }
        self.target.element(&self.matrix.mul_vec(&x.coords))
    }
}

/// `A / ⟨gens⟩` together with the coordinate-wise projection.
pub fn ab_quotient(a: &AbGroup, gens: &[AbElement]) -> Result<(AbGroup, AbHom), AbError> {
    let mut rows = a.relations().row_vecs();
    for g in gens {
        if g.group != *a {
            return Err(AbError::OwnerMismatch);
        }
        rows.push(g.coords.clone());
    }
    let q = AbGroup::from_relations(IntMatrix::from_rows(a.ngens(), rows));
    let proj = AbHom { source: a.clone(), target: q.clone(), matrix: IntMatrix::identity(a.ngens()) };
    Ok((q, proj))
}

/// Generators of `End(A)` as integer matrices acting on coordinate columns,
/// with the additive group they generate.
#[derive(Clone, Debug)]
pub struct EndBasis {
    pub owner: AbGroup,
    /// Hermite basis of the lattice of matrices that descend to endomorphisms.
    pub basis: Vec<IntMatrix>,
    /// `End(A)` as `ℤ^basis` modulo the matrices inducing the zero map.
    pub additive: AbGroup,
}

fn flatten(m: &IntMatrix) -> Vec<BigInt> {
    m.entries().to_vec()
}

fn unflatten(n: usize, v: &[BigInt]) -> IntMatrix {
    IntMatrix::from_rows(n, v.chunks(n).map(|c| c.to_vec()).collect())
}

impl EndBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix(&self, coords: &[BigInt]) -> IntMatrix {
        let n = self.owner.ngens();
        let mut m = IntMatrix::zeros(n, n);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                m = IntMatrix::from_rows(
                    n,
                    (0..n).map(|i| (0..n).map(|j| m.get(i, j) + c * b.get(i, j)).collect()).collect(),
                );
            }
        }
        m
    }

    /// Canonical coordinates of `x` in `additive`, or `None` if `x` does not
    /// descend to an endomorphism.
    pub fn coords_of(&self, x: &IntMatrix) -> Option<Vec<BigInt>> {
        let flat: Vec<Vec<BigInt>> = self.basis.iter().map(flatten).collect();
        lattice_member(&flatten(x), &flat, None).map(|c| self.additive.reduce(&c))
    }

    pub fn identity_coords(&self) -> Vec<BigInt> {
        self.coords_of(&IntMatrix::identity(self.owner.ngens())).expect("identity is an endomorphism")
    }
}

/// True iff `x` sends every relation of `a` into the relation lattice.
pub fn is_endomorphism(a: &AbGroup, x: &IntMatrix) -> bool {
    a.relation_basis().iter().all(|r| a.is_relation(&x.mul_vec(r)))
}

/// True iff `x` induces the zero map on `a`.
pub fn is_zero_endomorphism(a: &AbGroup, x: &IntMatrix) -> bool {
    (0..x.cols()).all(|j| a.is_relation(&x.column(j)))
}

/// Matrices whose columns run over the relation basis: generators of the
/// matrices inducing the zero map.
pub fn zero_endomorphism_generators(a: &AbGroup) -> Vec<IntMatrix> {
    let n = a.ngens();
    let mut out = Vec::new();
    for j in 0..n {
        for r in a.relation_basis() {
            let mut m = IntMatrix::zeros(n, n);
            for (i, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
            out.push(m);
        }
    }
    out
}

pub fn endomorphism_basis(a: &AbGroup) -> EndBasis {
    let n = a.ngens();
    let rel = a.relation_basis();
    let k = rel.len();
    let nvars = n * n + k * k;
    // X·B_l = Σ_p t_lp B_p for every relation basis row B_l
    let mut rows = Vec::with_capacity(n * k);
    for l in 0..k {
        for i in 0..n {
            let mut row = vec![BigInt::zero(); nvars];
            for j in 0..n {
                row[i * n + j] = rel[l][j].clone();
            }
            for p in 0..k {
                row[n * n + l * k + p] = -rel[p][i].clone();
            }
            rows.push(row);
        }
    }
    let valid: Vec<Vec<BigInt>> = if k == 0 {
        (0..n * n)
            .map(|t| {
                let mut v = vec![BigInt::zero(); n * n];
                v[t] = BigInt::one();
                v
            })
            .collect()
    } else {
        let ker = kernel(&IntMatrix::from_rows(nvars, rows));
        let projected: Vec<Vec<BigInt>> = ker.iter().map(|v| v[..n * n].to_vec()).collect();
        lattice_basis(n * n, &projected)
    };
    let basis: Vec<IntMatrix> = valid.iter().map(|v| unflatten(n, v)).collect();
    let zero_rows: Vec<Vec<BigInt>> = zero_endomorphism_generators(a)
        .iter()
        .map(|z| lattice_member(&flatten(z), &valid, None).expect("zero maps are endomorphisms"))
        .collect();
    let additive = AbGroup::from_relations(IntMatrix::from_rows(valid.len(), zero_rows));
    EndBasis { owner: a.clone(), basis, additive }
}
