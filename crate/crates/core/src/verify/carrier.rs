//! The structures searched by the solvers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::pcgroup::{GroupElement, PcPresentation};

/// A decoded or searched value: exponent vector for groups, coordinates for
/// rings.
pub type Value = Vec<i64>;

/// Lexicographic odometer over inclusive ranges.
pub(crate) fn box_points(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        out.push(cur.clone());
        let mut i = ranges.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = ranges[i].0;
        }
    }
}

fn range_size(ranges: &[(i64, i64)]) -> u128 {
    ranges.iter().map(|(lo, hi)| (hi - lo + 1).max(0) as u128).product()
}

/// A group to search in.
#[derive(Clone, Debug)]
pub enum GroupCarrier {
    /// A finite presentation; every generator has finite order.
    Finite(PcPresentation),
    /// `base/N` for a finite `base`, with `N` listed. Cosets are represented
    /// by their least element in exponent order.
    Cosets { base: PcPresentation, normal: Vec<GroupElement>, label: String },
    /// Exponent vectors of a torsion-free presentation in `[-bound, bound]`.
    Box { group: PcPresentation, bound: i64 },
}

impl GroupCarrier {
    pub fn finite(p: PcPresentation) -> Option<Self> {
        p.finite_order().map(|_| GroupCarrier::Finite(p))
    }

    pub fn presentation(&self) -> &PcPresentation {
        match self {
            GroupCarrier::Finite(p) | GroupCarrier::Box { group: p, .. } => p,
            GroupCarrier::Cosets { base, .. } => base,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, GroupCarrier::Box { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            GroupCarrier::Finite(p) => format!("group {} of order {}", p.name(), p.finite_order().unwrap_or(0)),
            GroupCarrier::Cosets { base, label, normal } => {
                format!("group {}/{label} of order {}", base.name(), base.finite_order().unwrap_or(0) / normal.len() as u128)
            }
            GroupCarrier::Box { group, bound } => format!("group {} exponent box {bound}", group.name()),
        }
    }

    pub fn canon(&self, x: GroupElement) -> GroupElement {
        match self {
            GroupCarrier::Cosets { base, normal, .. } => {
                normal.iter().map(|n| base.mul(&x, n)).min_by(|a, b| a.exps().cmp(b.exps())).unwrap_or(x)
            }
            _ => x,
        }
    }

    pub fn identity(&self) -> GroupElement {
        self.presentation().identity()
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.canon(self.presentation().mul(x, y))
    }

    pub fn inv(&self, x: &GroupElement) -> GroupElement {
        self.canon(self.presentation().inv(x))
    }

    pub fn pow(&self, x: &GroupElement, k: i64) -> GroupElement {
        self.canon(self.presentation().pow(x, k))
    }

    pub fn comm_many(&self, xs: &[GroupElement]) -> GroupElement {
        self.canon(self.presentation().comm_many(xs))
    }

    pub fn constant(&self, name: &str) -> Option<GroupElement> {
        self.presentation().gen_named(name).ok().map(|g| self.canon(g))
    }

    /// Whether searches may work modulo the top-weight generators.
    pub(crate) fn supports_reduction(&self) -> bool {
        !matches!(self, GroupCarrier::Cosets { .. })
    }

    fn is_top(&self, g: usize) -> bool {
        let p = self.presentation();
        p.weight(g) == p.class()
    }

    fn ranges(&self, bound: i64, reduced: bool, top_only: bool) -> Vec<(i64, i64)> {
        let p = self.presentation();
        (0..p.ngens())
            .map(|g| {
                let top = self.is_top(g);
                if (reduced && top) || (top_only && !top) {
                    return (0, 0);
                }
                match p.order(g) {
                    Some(m) => (0, m - 1),
                    None => (-bound, bound),
                }
            })
            .collect()
    }

    fn bound_or(&self, bound: Option<i64>) -> i64 {
        match self {
            GroupCarrier::Box { bound: b, .. } => bound.unwrap_or(*b),
            _ => 0,
        }
    }

    /// Number of elements `elements` would list.
    pub(crate) fn count(&self, bound: Option<i64>, reduced: bool) -> u128 {
        match self {
            GroupCarrier::Cosets { base, normal, .. } => base.finite_order().unwrap_or(0) / normal.len() as u128,
            _ => range_size(&self.ranges(self.bound_or(bound), reduced, false)),
        }
    }

    /// Elements in exponent order; `reduced` lists representatives modulo the
    /// top-weight generators. `bound` overrides the box of a `Box` carrier.
    pub fn elements(&self, bound: Option<i64>, reduced: bool) -> Vec<GroupElement> {
        match self {
            GroupCarrier::Cosets { base, .. } => {
                let all = box_points(&GroupCarrier::Finite(base.clone()).ranges(0, false, false));
                let mut reps: Vec<GroupElement> = all.into_iter().map(|e| self.canon(GroupElement(e))).collect();
                reps.sort_by(|a, b| a.exps().cmp(b.exps()));
                reps.dedup();
                reps
            }
            _ => box_points(&self.ranges(self.bound_or(bound), reduced, false)).into_iter().map(GroupElement).collect(),
        }
    }

    /// Elements of the top-weight subgroup (within the box).
    pub(crate) fn top_elements(&self) -> Vec<GroupElement> {
        box_points(&self.ranges(self.bound_or(None), false, true)).into_iter().map(GroupElement).collect()
    }

    /// Zeroes the top-weight exponents.
    /// `rep·z` for `z` in the top-weight subgroup.
    pub(crate) fn shift(&self, rep: &GroupElement, z: &GroupElement) -> GroupElement {
        self.presentation().mul(rep, z)
    }

    pub(crate) fn in_box(&self, x: &GroupElement) -> bool {
        match self {
            GroupCarrier::Box { bound, .. } => x.exps().iter().all(|e| e.abs() <= *bound),
            _ => true,
        }
    }

    pub fn format(&self, x: &GroupElement) -> String {
        self.presentation().format(x)
    }
}

/// A finite commutative ring given by its tables; elements are labelled by
/// coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    pub name: String,
    labels: Vec<Value>,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
    modulus: Option<u64>,
}

impl FiniteRing {
    pub fn integers_mod(m: u64) -> Self {
        assert!(m > 0, "modulus must be positive");
        let n = m as usize;
        FiniteRing {
            name: format!("Z/{m}"),
            labels: (0..m as i64).map(|k| vec![k]).collect(),
            add: (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect(),
            mul: (0..n).map(|i| (0..n).map(|j| (i * j) % n).collect()).collect(),
            neg: (0..n).map(|i| (n - i) % n).collect(),
            zero: 0,
            one: 1 % n,
            modulus: Some(m),
        }
    }

    /// The ring on `(ℤ/m)^rank` with product `mul`, modulo the equivalence
    /// `key(x) = key(y)`; each class is labelled by its least member.
    /// `key` returns `None` for coordinates outside the ring.
    pub fn from_classes(
        name: &str,
        rank: usize,
        modulus: i64,
        one: &[i64],
        mul: impl Fn(&[i64], &[i64]) -> Vec<i64>,
        key: impl Fn(&[i64]) -> Option<Value>,
    ) -> Self {
        let reduce = |v: Vec<i64>| -> Vec<i64> { v.into_iter().map(|x| x.mod_floor(&modulus)).collect() };
        let mut labels: Vec<Value> = Vec::new();
        let mut keys: Vec<Value> = Vec::new();
        for pt in box_points(&vec![(0, modulus - 1); rank]) {
            if let Some(k) = key(&pt) {
                if !keys.contains(&k) {
                    keys.push(k);
                    labels.push(pt);
                }
            }
        }
        let class = |v: Vec<i64>| -> usize {
            let k = key(&reduce(v)).expect("ring operations stay in the ring");
            keys.iter().position(|x| *x == k).expect("class exists")
        };
        let n = labels.len();
        let add: Vec<Vec<usize>> =
            (0..n).map(|i| (0..n).map(|j| class(labels[i].iter().zip(&labels[j]).map(|(a, b)| a + b).collect())).collect()).collect();
        let mul: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| class(mul(&labels[i], &labels[j]))).collect()).collect();
        let zero = class(vec![0; rank]);
        let neg = (0..n).map(|i| (0..n).find(|&j| add[i][j] == zero).expect("additive inverse")).collect();
        let one = class(one.to_vec());
        FiniteRing { name: name.into(), labels, add, mul, neg, zero, one, modulus: None }
    }

    /// `Some(m)` for `ℤ/m`.
    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &Value {
        &self.labels[i]
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.labels.iter().position(|l| l == v)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        self.add[i][j]
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i][j]
    }

    pub fn neg(&self, i: usize) -> usize {
        self.neg[i]
    }

    /// `n·1`.
    pub fn from_int(&self, n: &BigInt) -> usize {
        let mut acc = self.zero;
        let mut base = if n.is_negative() { self.neg[self.one] } else { self.one };
        let mut k = n.abs();
        while !k.is_zero() {
            if k.is_odd() {
                acc = self.add[acc][base];
            }
            base = self.add[base][base];
            k >>= 1;
        }
        acc
    }
}

/// A ring to search in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingCarrier {
    /// Integers in `[-bound, bound]`; arithmetic is exact.
    Integers { bound: i64 },
    Finite(FiniteRing),
}

impl RingCarrier {
    pub fn integers_mod(m: u64) -> Self {
        RingCarrier::Finite(FiniteRing::integers_mod(m))
    }

    pub fn describe(&self) -> String {
        match self {
            RingCarrier::Integers { bound } => format!("ring Z box {bound}"),
            RingCarrier::Finite(r) => format!("ring {} of order {}", r.name, r.len()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RingCarrier::Finite(_))
    }

    /// All values, in order.
    pub fn values(&self) -> Vec<Value> {
        match self {
            RingCarrier::Integers { bound } => (-bound..=*bound).map(|t| vec![t]).collect(),
            RingCarrier::Finite(r) => r.labels.clone(),
        }
    }
}

pub(crate) fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::catalog::heisenberg;
    use crate::pcgroup::finite_quotient;

    #[test]
    fn odometer_and_counts() {
        assert_eq!(box_points(&[(0, 1), (-1, 0)]), vec![vec![0, -1], vec![0, 0], vec![1, -1], vec![1, 0]]);
        let q = GroupCarrier::finite(finite_quotient(&heisenberg(), 3).unwrap()).unwrap();
        assert_eq!(q.elements(None, false).len(), 27);
        assert_eq!(q.elements(None, true).len(), 9);
        assert_eq!(q.count(None, true), 9);
        assert_eq!(q.top_elements().len(), 3);
        let b = GroupCarrier::Box { group: heisenberg(), bound: 1 };
        assert_eq!(b.count(None, false), 27);
        assert_eq!(b.count(Some(2), true), 25);
    }

    #[test]
    fn rings() {
        let r = FiniteRing::integers_mod(6);
        assert_eq!(r.from_int(&BigInt::from(-1)), 5);
        assert_eq!(r.mul(4, 5), 2);
        // Z[i]/3 on coordinates (a, b) = a + b·i
        let gi = FiniteRing::from_classes("Z[i]/3", 2, 3, &[1, 0], |x, y| vec![x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]], |v| Some(v.to_vec()));
        assert_eq!(gi.len(), 9);
        let i = gi.index_of(&[0, 1]).unwrap();
        assert_eq!(gi.mul(i, i), gi.from_int(&BigInt::from(-1)));
    }
}
