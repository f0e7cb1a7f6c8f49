use thiserror::Error;

use super::{EquationSystem, Sort, Term};
use crate::pcgroup::{GroupElement, PcPresentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EdefError {
    #[error("width must be at least 1")]
    ZeroWidth,
    #[error("the default width is only known for commutators in class at most 2 (class is {0})")]
    NoDefaultWidth(u32),
    #[error("word variable `{0}` does not occur in the word")]
    UnusedWordVar(String),
}

fn group_sort(p: &PcPresentation) -> Sort {
    Sort::Group(p.name().into())
}

/// `{[x, a_i] = 1}` over the weight-1 generators, which generate the group.
pub fn center_edef(p: &PcPresentation) -> EquationSystem {
    let mut s = EquationSystem::new(&format!("center_{}", p.name()), group_sort(p));
    s.vars.push("x".into());
    for (i, g) in p.gens().iter().enumerate() {
        if p.weight(i) == 1 {
            s = s.equation(Term::comm(Term::var("x"), Term::Const(g.name.clone())), Term::one());
        }
    }
    s
}

/// Width of `[x₁, x₂]` in a class-2 presentation with `g` weight-1
/// generators: `g(g−1)/2`, from `G' = ∏_{i<j} [a_i, a_j^{k_ij}]`.
pub fn default_commutator_width(p: &PcPresentation) -> Result<usize, EdefError> {
    if p.class() > 2 {
        return Err(EdefError::NoDefaultWidth(p.class()));
    }
    let g = (0..p.ngens()).filter(|&i| p.weight(i) == 1).count();
    Ok((g * g.saturating_sub(1) / 2).max(1))
}

/// `x = ∏_{i=1..n} w(ȳ_i)·w(z̄_i)⁻¹`, where `word` is a group term in the
/// variables `word_vars`.
pub fn verbal_edef(word: &Term, word_vars: &[String], n: usize, p: &PcPresentation) -> Result<EquationSystem, EdefError> {
    if n == 0 {
        return Err(EdefError::ZeroWidth);
    }
    let mut used = Vec::new();
    word.vars(&mut used);
    if let Some(v) = word_vars.iter().find(|v| !used.contains(v)) {
        return Err(EdefError::UnusedWordVar(v.clone()));
    }
    let mut s = EquationSystem::new(&format!("verbal_{}_width{n}", p.name()), group_sort(p));
    s.vars.push("x".into());
    let mut factors = Vec::new();
    for i in 1..=n {
        for (prefix, inverse) in [("y", false), ("z", true)] {
            let map = word_vars
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let name = format!("{prefix}{i}_{}", k + 1);
                    s.witnesses.push(name.clone());
                    (v.clone(), Term::Var(name))
                })
                .collect();
            let w = word.substitute(&map);
            factors.push(if inverse { Term::inv(w) } else { w });
        }
    }
    Ok(s.equation(Term::var("x"), Term::product(factors)))
}

/// `[z₁, …, z_{c+1}] = 1` for every tuple over `{x, e₁, …, e_m}`, in
/// lexicographic order with `x` first.
pub fn maxnilp_edef(p: &PcPresentation, gens: &[GroupElement], c: u32) -> EquationSystem {
    let mut s = EquationSystem::new(&format!("maxnilp_{}_class{c}", p.name()), group_sort(p));
    s.vars.push("x".into());
    let mut letters = vec![Term::var("x")];
    letters.extend(gens.iter().map(|g| Term::element(p, g)));
    let len = c as usize + 1;
    let total = letters.len().pow(len as u32);
    for idx in 0..total {
        let mut digits = Vec::with_capacity(len);
        let mut r = idx;
        for _ in 0..len {
            digits.push(r % letters.len());
            r /= letters.len();
        }
        digits.reverse();
        s = s.equation(Term::Comm(digits.iter().map(|&d| letters[d].clone()).collect()), Term::one());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::catalog::*;

    #[test]
    fn counts() {
        assert_eq!(center_edef(&heisenberg()).equations.len(), 2);
        assert_eq!(center_edef(&free_class2(3)).equations.len(), 3);
        assert_eq!(center_edef(&free_abelian(1)).equations.len(), 1);
        let h = heisenberg();
        assert_eq!(maxnilp_edef(&h, &[h.generator(0), h.generator(1)], 2).equations.len(), 27);
        assert_eq!(maxnilp_edef(&h, &[h.generator(0)], 1).equations.len(), 4);
        assert_eq!(default_commutator_width(&free_class2(3)), Ok(3));
        let w = Term::comm(Term::var("x1"), Term::var("x2"));
        let vars = vec!["x1".to_string(), "x2".to_string()];
        assert_eq!(verbal_edef(&w, &vars, 0, &h), Err(EdefError::ZeroWidth));
        let s = verbal_edef(&w, &vars, 1, &h).unwrap();
        assert_eq!(s.witnesses.len(), 4);
        assert_eq!(s.to_string().lines().last().unwrap(), "eq x = [y1_1,y1_2]*[z1_1,z1_2]^-1");
    }
}
