use num_bigint::BigInt;
use num_traits::Zero;

use super::{check_consistency, GroupElement, PcError, PcPresentation, PowerRelation, PresentationData};
use crate::abgroup::AbGroup;
use crate::intlinalg::{kernel, lattice_basis, IntMatrix};

/// `γ_i / γ_{i+1}` on the generators of weight exactly `i`.
#[derive(Clone, Debug)]
pub struct LcsSection {
    pub index: u32,
    pub group: AbGroup,
    /// Presentation indices of the weight-`i` generators, in order.
    pub gens: Vec<usize>,
}

impl LcsSection {
    /// Coordinates of `x ∈ γ_i` in the section. Fails if `x` has a nonzero
    /// exponent on a generator of weight below `i`.
    pub fn log(&self, p: &PcPresentation, x: &GroupElement) -> Result<Vec<BigInt>, PcError> {
        let first = self.gens.first().copied().unwrap_or(p.ngens());
        if x.0[..first].iter().any(|&e| e != 0) {
            return Err(PcError::NotInSubgroup);
        }
        Ok(self.group.reduce(&self.gens.iter().map(|&g| BigInt::from(x.0[g])).collect::<Vec<_>>()))
    }

    /// Weight-`i` coordinates of any element, ignoring the other exponents.
    pub fn coords_of(&self, x: &GroupElement) -> Vec<BigInt> {
        self.group.reduce(&self.gens.iter().map(|&g| BigInt::from(x.0[g])).collect::<Vec<_>>())
    }

    /// The element `∏ a_g^{c_g}` over the weight-`i` generators.
    pub fn exp(&self, p: &PcPresentation, coords: &[i64]) -> GroupElement {
        let w: Vec<(usize, i64)> = self.gens.iter().zip(coords).map(|(&g, &c)| (g, c)).collect();
        p.from_word(&w)
    }
}

pub fn lcs_section(p: &PcPresentation, i: u32) -> Result<LcsSection, PcError> {
    if i == 0 || i > p.class() {
        return Err(PcError::SectionOutOfRange { index: i, class: p.class() });
    }
    let gens: Vec<usize> = (0..p.ngens()).filter(|&g| p.weight(g) == i).collect();
    let k = gens.len();
    let rows: Vec<Vec<BigInt>> = gens
        .iter()
        .enumerate()
        .filter_map(|(pos, &g)| {
            p.order(g).map(|m| {
                let mut r = vec![BigInt::zero(); k];
                r[pos] = BigInt::from(m);
                r
            })
        })
        .collect();
    Ok(LcsSection { index: i, group: AbGroup::from_relations(IntMatrix::from_rows(k, rows)), gens })
}

/// `G/γ_{k+1}(G)` with the coordinate projection.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub presentation: PcPresentation,
    /// Number of leading generators kept.
    pub kept: usize,
}

impl Truncation {
    pub fn project(&self, x: &GroupElement) -> GroupElement {
        GroupElement(x.0[..self.kept].to_vec())
    }
}

pub fn truncate_to_class(p: &PcPresentation, k: u32) -> Result<Truncation, PcError> {
    if k == 0 || k > p.class() {
        return Err(PcError::SectionOutOfRange { index: k, class: p.class() });
    }
    if k == p.class() {
        return Ok(Truncation { presentation: p.clone(), kept: p.ngens() });
    }
    let kept = (0..p.ngens()).take_while(|&g| p.weight(g) <= k).count();
    let src = p.data();
    let cut = |w: &[(usize, i64)]| -> Vec<(usize, i64)> { w.iter().copied().filter(|&(g, _)| g < kept).collect() };
    let mut d = PresentationData::new(&format!("{}_mod_gamma{}", src.name, k + 1), k);
    d.gens = src.gens[..kept].to_vec();
    d.powers = src.powers[..kept]
        .iter()
        .map(|p| p.as_ref().map(|p| PowerRelation { order: p.order, tail: cut(&p.tail) }))
        .collect();
    for (&(j, i), w) in &src.comms {
        if j < kept {
            let w = cut(w);
            if !w.is_empty() {
                d.comms.insert((j, i), w);
            }
        }
    }
    Ok(Truncation { presentation: PcPresentation::new(d)?, kept })
}

/// Generators of `Z(G)` for a presentation of class at most 2.
///
/// An element `a^u·z` with `z ∈ γ₂` is central iff
/// `Σ_j u_j·log[a_j, a_i] = 0` in `γ₂` for every weight-1 generator `a_i`;
/// the solutions `u` form a lattice found by one kernel computation.
pub fn center_class2(p: &PcPresentation) -> Result<Vec<GroupElement>, PcError> {
    if p.class() > 2 {
        return Err(PcError::ClassTooLarge { max: 2, class: p.class() });
    }
    if p.class() == 1 {
        return Ok((0..p.ngens()).map(|g| p.generator(g)).collect());
    }
    let s1 = lcs_section(p, 1)?;
    let s2 = lcs_section(p, 2)?;
    let n1 = s1.gens.len();
    let n2 = s2.gens.len();
    let rel = s2.group.relation_basis().to_vec();
    let r = rel.len();
    // unknowns: u (n1), then one multiplier per (i, relation row)
    let nvars = n1 + n1 * r;
    let mut rows = Vec::new();
    for (ii, &gi) in s1.gens.iter().enumerate() {
        let logs: Vec<Vec<BigInt>> =
            s1.gens.iter().map(|&gj| s2.coords_of(&p.comm(&p.generator(gj), &p.generator(gi)))).collect();
        for k in 0..n2 {
            let mut row = vec![BigInt::zero(); nvars];
            for j in 0..n1 {
                row[j] = logs[j][k].clone();
            }
            for (l, rr) in rel.iter().enumerate() {
                row[n1 + ii * r + l] = -rr[k].clone();
            }
            rows.push(row);
        }
    }
    let lattice = if rows.is_empty() {
        lattice_basis(n1, &IntMatrix::identity(n1).row_vecs())
    } else {
        let ker = kernel(&IntMatrix::from_rows(nvars, rows));
        let proj: Vec<Vec<BigInt>> = ker.iter().map(|v| v[..n1].to_vec()).collect();
        lattice_basis(n1, &proj)
    };
    let mut out = Vec::new();
    for u in lattice {
        let w: Vec<(usize, i64)> = s1
            .gens
            .iter()
            .zip(&u)
            .map(|(&g, c)| (g, i64::try_from(c).expect("center coordinate fits in i64")))
            .collect();
        let z = p.from_word(&w);
        if !p.is_identity(&z) {
            out.push(z);
        }
    }
    out.extend(s2.gens.iter().map(|&g| p.generator(g)));
    Ok(out)
}

/// Imposes `a_i^m = 1` on every generator of a torsion-free presentation.
pub fn finite_quotient(p: &PcPresentation, m: i64) -> Result<PcPresentation, PcError> {
    if m < 2 {
        return Err(PcError::BadModulus);
    }
    if !p.is_torsion_free_presentation() {
        return Err(PcError::NotTorsionFree);
    }
    let src = p.data();
    let mut d = src.clone();
    d.name = format!("{}_mod{}", src.name, m);
    d.powers = vec![Some(PowerRelation { order: m, tail: Vec::new() }); src.gens.len()];
    d.comms.clear();
    for (&key, w) in &src.comms {
        let w: Vec<(usize, i64)> = w.iter().map(|&(g, e)| (g, e.rem_euclid(m))).filter(|&(_, e)| e != 0).collect();
        if !w.is_empty() {
            d.comms.insert(key, w);
        }
    }
    check_consistency(&d)?;
    PcPresentation::new(d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateVerdict {
    /// `G'/γ₃(G)` is infinite, of the given free rank.
    Proceed { rank: usize },
    /// `G'/γ₃(G)` is finite, so `G'` is finite and `G` virtually abelian.
    Stop,
}

pub fn nva_gate(p: &PcPresentation) -> GateVerdict {
    if p.class() < 2 {
        return GateVerdict::Stop;
    }
    let t = truncate_to_class(p, 2).expect("class is at least 2");
    let rank = lcs_section(&t.presentation, 2).expect("class 2 section").group.rank();
    if rank >= 1 {
        GateVerdict::Proceed { rank }
    } else {
        GateVerdict::Stop
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::catalog::*;
    use std::collections::BTreeSet;

    fn all_elements(p: &PcPresentation) -> Vec<GroupElement> {
        let orders: Vec<i64> = (0..p.ngens()).map(|g| p.order(g).unwrap()).collect();
        let mut out = vec![Vec::new()];
        for &m in &orders {
            out = out.into_iter().flat_map(|v: Vec<i64>| (0..m).map(move |e| [v.clone(), vec![e]].concat())).collect();
        }
        out.into_iter().map(GroupElement).collect()
    }

    fn subgroup(p: &PcPresentation, gens: &[GroupElement]) -> BTreeSet<GroupElement> {
        let mut set = BTreeSet::from([p.identity()]);
        let mut frontier = vec![p.identity()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = p.mul(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    #[test]
    fn sections() {
        let h = heisenberg();
        assert_eq!(lcs_section(&h, 2).unwrap().group, AbGroup::free(1));
        assert_eq!(lcs_section(&h, 1).unwrap().group, AbGroup::free(2));
        assert_eq!(lcs_section(&free_class2(3), 2).unwrap().group, AbGroup::free(3));
        assert!(lcs_section(&h, 3).is_err());
        let h3 = finite_quotient(&h, 3).unwrap();
        let s = lcs_section(&h3, 2).unwrap();
        assert_eq!(s.group.torsion(), vec![BigInt::from(3)]);
    }

    #[test]
    fn truncation() {
        let t = truncate_to_class(&free_class3_rank2(), 2).unwrap();
        let f = free_class2(2);
        assert_eq!(t.presentation.ngens(), 3);
        assert_eq!(t.presentation.data().comms, f.data().comms);
        assert_eq!(t.presentation.data().powers, f.data().powers);
        let h = heisenberg();
        assert_eq!(truncate_to_class(&h, 2).unwrap().presentation, h);
        let ab = truncate_to_class(&h, 1).unwrap().presentation;
        assert_eq!(ab.ngens(), 2);
        assert!(ab.data().comms.is_empty());
    }

    #[test]
    fn centers() {
        let h = heisenberg();
        assert_eq!(center_class2(&h).unwrap(), vec![h.generator(2)]);
        let z2 = free_abelian(2);
        assert_eq!(center_class2(&z2).unwrap().len(), 2);
        let f3 = free_class2(3);
        let z = center_class2(&f3).unwrap();
        assert_eq!(z, (3..6).map(|g| f3.generator(g)).collect::<Vec<_>>());
        assert!(center_class2(&free_class3_rank2()).is_err());
    }

    #[test]
    fn center_agrees_with_enumeration_in_quotients() {
        for p in [heisenberg(), free_class2(3), generalized_heisenberg(2), ut3_quadratic(2)] {
            let q = finite_quotient(&p, 3).unwrap();
            let z = center_class2(&p).unwrap();
            for g in &z {
                for i in 0..p.ngens() {
                    assert!(p.is_identity(&p.comm(g, &p.generator(i))));
                }
            }
            let images: Vec<GroupElement> = z.iter().map(|g| q.from_exps(g.exps())).collect();
            let generated = subgroup(&q, &images);
            let solutions: BTreeSet<GroupElement> = all_elements(&q)
                .into_iter()
                .filter(|x| (0..q.ngens()).all(|i| q.is_identity(&q.comm(x, &q.generator(i)))))
                .collect();
            assert_eq!(generated, solutions, "{}", p.name());
        }
    }

    #[test]
    fn quotients() {
        let h = heisenberg();
        let h3 = finite_quotient(&h, 3).unwrap();
        assert_eq!(all_elements(&h3).len(), 27);
        assert_eq!(finite_quotient(&h, 2).unwrap().finite_order(), Some(8));
        let z = free_abelian(1);
        assert_eq!(finite_quotient(&z, 5).unwrap().finite_order(), Some(5));
        assert!(matches!(finite_quotient(&h3, 3), Err(PcError::NotTorsionFree)));
        assert!(matches!(finite_quotient(&free_class3_rank2(), 2), Err(PcError::Inconsistent(_))));
        // the quotient map is a homomorphism on sampled products
        let h5 = finite_quotient(&h, 5).unwrap();
        for x in [[1, 2, 3], [-3, 4, -1], [7, -2, 0]] {
            for y in [[0, 1, 0], [2, -2, 9], [-1, -1, -1]] {
                let prod = h.mul(&h.from_exps(&x), &h.from_exps(&y));
                let lhs = h5.from_exps(prod.exps());
                let rhs = h5.mul(&h5.from_exps(&x), &h5.from_exps(&y));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn gate() {
        assert_eq!(nva_gate(&heisenberg()), GateVerdict::Proceed { rank: 1 });
        assert_eq!(nva_gate(&free_abelian(2)), GateVerdict::Stop);
        assert_eq!(nva_gate(&ut3_quadratic(2)), GateVerdict::Proceed { rank: 2 });
        assert_eq!(nva_gate(&free_class3_rank2()), GateVerdict::Proceed { rank: 1 });
        assert_eq!(nva_gate(&finite_quotient(&heisenberg(), 3).unwrap()), GateVerdict::Stop);
    }
}
