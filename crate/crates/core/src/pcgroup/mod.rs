//! Weighted nilpotent polycyclic presentations and collection.
//!
//! A presentation lists generators `a₁, …, a_n` with nondecreasing weights,
//! optional power relations `a_i^m = tail` and commutator relations
//! `[a_j, a_i] = w` for `j > i`. Omitted pairs commute. Weight grading
//! (every letter of `w` has weight at least `weight(a_i) + weight(a_j)`)
//! guarantees that the generators of weight `≥ k` generate `γ_k(G)`.
//!
//! Elements are exponent vectors of the normal form `a₁^{e₁}⋯a_n^{e_n}`.
//! Products are computed by collection from the left: pushing `a_i^{±1}`
//! past the already-collected suffix conjugates that suffix by `a_i^{±1}`,
//! using `a_j^{a_i} = a_j·[a_j, a_i]` and a derived table for `a_i^{-1}`.

mod parse;
mod sections;

pub use parse::{parse_presentation, presentation_to_text, word_to_string, PresentationParseError};
pub use sections::{
    center_class2, finite_quotient, lcs_section, nva_gate, truncate_to_class, GateVerdict, LcsSection, Truncation,
};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Letters `(generator index, exponent)`.
pub type Word = Vec<(usize, i64)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerRelation {
    pub order: i64,
    pub tail: Word,
}

/// First failure found while validating a presentation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("generator {gen}: weight {weight} outside [1, {class}] or weights not in nondecreasing order")]
    WeightOrder { gen: String, weight: u32, class: u32 },
    #[error("relation [{j}, {i}] = ...: letter {letter} has weight {weight}, needs at least {needed} (class {class})")]
    CommutatorWeight { j: String, i: String, letter: String, weight: u32, needed: u32, class: u32 },
    #[error("power relation for {gen}: tail letter {letter} must have weight above {weight}")]
    PowerWeight { gen: String, letter: String, weight: u32 },
    #[error("power relation for {gen}: order {order} must be at least 2")]
    BadOrder { gen: String, order: i64 },
    #[error("relation word `{word}` is not in normal form")]
    NotNormalForm { word: String },
    #[error("relation refers to generator index {index} outside the presentation")]
    UnknownGenerator { index: usize },
    #[error("associativity fails on test {test}")]
    Associativity { test: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcError {
    #[error("inconsistent presentation: {0}")]
    Inconsistent(#[from] Violation),
    #[error("elements do not belong to this presentation")]
    OwnerMismatch,
    #[error("operation requires class at most {max}, presentation has class {class}")]
    ClassTooLarge { max: u32, class: u32 },
    #[error("requested section {index} exceeds the class {class}")]
    SectionOutOfRange { index: u32, class: u32 },
    #[error("finite quotients are only formed from torsion-free presentations")]
    NotTorsionFree,
    #[error("modulus must be at least 2")]
    BadModulus,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("element is not in the requested subgroup")]
    NotInSubgroup,
}

/// Raw presentation data, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationData {
    pub name: String,
    pub class: u32,
    pub gens: Vec<Generator>,
    pub powers: Vec<Option<PowerRelation>>,
    /// `(j, i)` with `j > i` maps to the word for `[a_j, a_i]`.
    pub comms: BTreeMap<(usize, usize), Word>,
}

impl PresentationData {
    pub fn new(name: &str, class: u32) -> Self {
        PresentationData { name: name.into(), class, gens: Vec::new(), powers: Vec::new(), comms: BTreeMap::new() }
    }

    pub fn gen(mut self, name: &str, weight: u32) -> Self {
        self.gens.push(Generator { name: name.into(), weight });
        self.powers.push(None);
        self
    }

    pub fn power(mut self, gen: usize, order: i64, tail: Word) -> Self {
        self.powers[gen] = Some(PowerRelation { order, tail });
        self
    }

    pub fn comm(mut self, j: usize, i: usize, word: Word) -> Self {
        if word.is_empty() {
            self.comms.remove(&(j, i));
        } else {
            self.comms.insert((j, i), word);
        }
        self
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    fn word_string(&self, w: &[(usize, i64)]) -> String {
        word_to_string(&self.gens, w)
    }

    /// Weight grading, ordering and normal-form checks.
    fn check_structure(&self) -> Result<(), Violation> {
        let n = self.gens.len();
        let mut prev = 1;
        for g in &self.gens {
            if g.weight < prev || g.weight > self.class || g.weight == 0 {
                return Err(Violation::WeightOrder { gen: g.name.clone(), weight: g.weight, class: self.class });
            }
            prev = g.weight;
        }
        let normal = |w: &[(usize, i64)], after: usize| -> Result<bool, Violation> {
            let mut last = after;
            for &(g, e) in w {
                if g >= n {
                    return Err(Violation::UnknownGenerator { index: g });
                }
                if g <= last || e == 0 {
                    return Ok(false);
                }
                if let Some(p) = &self.powers[g] {
                    if e < 0 || e >= p.order {
                        return Ok(false);
                    }
                }
                last = g;
            }
            Ok(true)
        };
        for (i, p) in self.powers.iter().enumerate() {
            let Some(p) = p else { continue };
            if p.order < 2 {
                return Err(Violation::BadOrder { gen: self.gens[i].name.clone(), order: p.order });
            }
            for &(g, _) in &p.tail {
                if g < n && self.gens[g].weight <= self.gens[i].weight {
                    return Err(Violation::PowerWeight {
                        gen: self.gens[i].name.clone(),
                        letter: self.gens[g].name.clone(),
                        weight: self.gens[i].weight,
                    });
                }
            }
            if !normal(&p.tail, i)? {
                return Err(Violation::NotNormalForm { word: self.word_string(&p.tail) });
            }
        }
        for (&(j, i), w) in &self.comms {
            if j >= n || i >= n || j <= i {
                return Err(Violation::UnknownGenerator { index: j.max(i) });
            }
            let needed = self.gens[i].weight + self.gens[j].weight;
            for &(g, _) in w {
                if g < n && self.gens[g].weight < needed {
                    return Err(Violation::CommutatorWeight {
                        j: self.gens[j].name.clone(),
                        i: self.gens[i].name.clone(),
                        letter: self.gens[g].name.clone(),
                        weight: self.gens[g].weight,
                        needed,
                        class: self.class,
                    });
                }
            }
            if !normal(w, j)? {
                return Err(Violation::NotNormalForm { word: self.word_string(w) });
            }
        }
        Ok(())
    }
}

/// Exponent vector of a normal form. Only meaningful together with the
/// presentation that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<i64>);

impl GroupElement {
    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    /// Nonzero letters of the normal form.
    pub fn word(&self) -> Word {
        self.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(g, &e)| (g, e)).collect()
    }
}

/// A validated, consistent presentation with its collection tables.
#[derive(Clone, Debug)]
pub struct PcPresentation {
    data: PresentationData,
    conj_pos: Vec<Option<Word>>,
    conj_neg: Vec<Option<Word>>,
}

impl PartialEq for PcPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl Eq for PcPresentation {}

/// Validates `data`: weight grading, normal-form relation words, and the
/// overlap tests `(a_k a_j) a_i = a_k (a_j a_i)` together with the
/// power-relation variants, all evaluated by collection.
pub fn check_consistency(data: &PresentationData) -> Result<(), Violation> {
    data.check_structure()?;
    let p = PcPresentation::build_unchecked(data.clone());
    p.overlap_tests()
}

impl PcPresentation {
    pub fn new(data: PresentationData) -> Result<Self, PcError> {
        data.check_structure()?;
        let p = Self::build_unchecked(data);
        p.overlap_tests()?;
        Ok(p)
    }

    /// Builds collection tables. Requires triangular relations (every
    /// relation letter has a larger index than the generators it involves);
    /// the weight checks guarantee this.
    pub(crate) fn build_unchecked(data: PresentationData) -> Self {
        let n = data.gens.len();
        let mut p = PcPresentation { data, conj_pos: vec![None; n * n], conj_neg: vec![None; n * n] };
        for (&(j, i), w) in &p.data.comms {
            let mut img = vec![(j, 1)];
            img.extend(w.iter().copied());
            p.conj_pos[j * n + i] = Some(img);
        }
        for i in (0..n).rev() {
            for j in (i + 1..n).rev() {
                let Some(c) = p.data.comms.get(&(j, i)).cloned() else { continue };
                // φ = conjugation by a_i; φ⁻¹(a_j) = a_j · φ⁻¹([a_j, a_i])⁻¹
                let mut y = p.identity();
                for &(k, e) in &c {
                    match p.conj_neg[k * n + i].clone() {
                        None => p.mul_gen_pow(&mut y.0, k, e),
                        Some(img) => p.mul_word_pow(&mut y.0, &img, e),
                    }
                }
                let mut z = p.identity();
                p.mul_gen_pow(&mut z.0, j, 1);
                p.mul_word_pow(&mut z.0, &y.word(), -1);
                p.conj_neg[j * n + i] = Some(z.word());
            }
        }
        p
    }

    fn overlap_tests(&self) -> Result<(), Violation> {
        let n = self.ngens();
        let g = |i: usize| self.generator(i);
        let name = |i: usize| self.data.gens[i].name.clone();
        let fail = |test: String| Err(Violation::Associativity { test });
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let left = self.mul(&self.mul(&g(k), &g(j)), &g(i));
                    let right = self.mul(&g(k), &self.mul(&g(j), &g(i)));
                    if left != right {
                        return fail(format!("({} {}) {}", name(k), name(j), name(i)));
                    }
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                if let Some(pj) = &self.data.powers[j] {
                    let m = pj.order;
                    let left = self.mul(&self.pow(&g(j), m), &g(i));
                    let right = self.mul(&self.pow(&g(j), m - 1), &self.mul(&g(j), &g(i)));
                    if left != right {
                        return fail(format!("{}^{} {}", name(j), m, name(i)));
                    }
                }
                match &self.data.powers[i] {
                    Some(pi) => {
                        let m = pi.order;
                        let left = self.mul(&self.mul(&g(j), &self.pow(&g(i), m - 1)), &g(i));
                        let right = self.mul(&g(j), &self.pow(&g(i), m));
                        if left != right {
                            return fail(format!("{} {}^{}", name(j), name(i), m));
                        }
                    }
                    None => {
                        let inv = self.inv(&g(i));
                        let left = self.mul(&self.mul(&g(j), &inv), &g(i));
                        if left != g(j) {
                            return fail(format!("{} {}^-1 {}", name(j), name(i), name(i)));
                        }
                    }
                }
            }
        }
        for i in 0..n {
            if let Some(pi) = &self.data.powers[i] {
                let m = pi.order;
                let left = self.mul(&self.pow(&g(i), m), &g(i));
                let right = self.mul(&g(i), &self.pow(&g(i), m));
                if left != right {
                    return fail(format!("{}^{} {}", name(i), m, name(i)));
                }
            }
        }
        Ok(())
    }

    pub fn data(&self) -> &PresentationData {
        &self.data
    }

    pub fn name(&self) -> &str {
        &self.data.name
    }

    pub fn class(&self) -> u32 {
        self.data.class
    }

    pub fn ngens(&self) -> usize {
        self.data.gens.len()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.data.gens
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.data.gens[i].weight
    }

    /// Relative order of generator `i` (`None` for infinite).
    pub fn order(&self, i: usize) -> Option<i64> {
        self.data.powers[i].as_ref().map(|p| p.order)
    }

    pub fn is_torsion_free_presentation(&self) -> bool {
        self.data.powers.iter().all(|p| p.is_none())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.data.index_of(name)
    }

    pub fn gen_named(&self, name: &str) -> Result<GroupElement, PcError> {
        self.index_of(name).map(|i| self.generator(i)).ok_or_else(|| PcError::UnknownGenerator(name.into()))
    }

    /// Number of elements when every generator has finite relative order.
    pub fn finite_order(&self) -> Option<u128> {
        self.data.powers.iter().try_fold(1u128, |acc, p| p.as_ref().map(|p| acc * p.order as u128))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.ngens()])
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut e = self.identity();
        self.mul_gen_pow(&mut e.0, i, 1);
        e
    }

    pub fn is_identity(&self, x: &GroupElement) -> bool {
        x.0.iter().all(|&e| e == 0)
    }

    /// Collects an arbitrary word into normal form.
    pub fn from_word(&self, w: &[(usize, i64)]) -> GroupElement {
        let mut x = self.identity();
        self.mul_word(&mut x.0, w);
        x
    }

    /// Normal form of `a₁^{e₁}⋯a_n^{e_n}` for exponents outside the normal
    /// ranges.
    pub fn from_exps(&self, exps: &[i64]) -> GroupElement {
        let w: Word = exps.iter().enumerate().map(|(g, &e)| (g, e)).collect();
        self.from_word(&w)
    }

    pub fn check_owner(&self, x: &GroupElement) -> Result<(), PcError> {
        if x.0.len() != self.ngens() {
            return Err(PcError::OwnerMismatch);
        }
        for (i, &e) in x.0.iter().enumerate() {
            if let Some(m) = self.order(i) {
                if e < 0 || e >= m {
                    return Err(PcError::OwnerMismatch);
                }
            }
        }
        Ok(())
    }

    pub fn try_mul(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, PcError> {
        self.check_owner(x)?;
        self.check_owner(y)?;
        Ok(self.mul(x, y))
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let mut out = x.clone();
        for (g, &e) in y.0.iter().enumerate() {
            if e != 0 {
                self.mul_gen_pow(&mut out.0, g, e);
            }
        }
        out
    }

    pub fn inv(&self, x: &GroupElement) -> GroupElement {
        let mut out = self.identity();
        for (g, &e) in x.0.iter().enumerate().rev() {
            if e != 0 {
                self.mul_gen_pow(&mut out.0, g, -e);
            }
        }
        out
    }

    pub fn pow(&self, x: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inv(x) } else { x.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn comm(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let xi = self.inv(x);
        let yi = self.inv(y);
        self.mul(&self.mul(&xi, &yi), &self.mul(x, y))
    }

    /// Left-normed commutator `[[x₁, x₂], …, x_k]`.
    pub fn comm_many(&self, xs: &[GroupElement]) -> GroupElement {
        let mut it = xs.iter();
        let mut acc = it.next().cloned().unwrap_or_else(|| self.identity());
        for x in it {
            acc = self.comm(&acc, x);
        }
        acc
    }

    pub fn format(&self, x: &GroupElement) -> String {
        word_to_string(&self.data.gens, &x.word())
    }

    fn mul_word(&self, x: &mut [i64], w: &[(usize, i64)]) {
        for &(g, e) in w {
            self.mul_gen_pow(x, g, e);
        }
    }

    /// Multiplies by `w^k`.
    fn mul_word_pow(&self, x: &mut [i64], w: &[(usize, i64)], k: i64) {
        if k >= 0 {
            for _ in 0..k {
                self.mul_word(x, w);
            }
        } else {
            for _ in 0..(-k) {
                for &(g, e) in w.iter().rev() {
                    self.mul_gen_pow(x, g, -e);
                }
            }
        }
    }

    /// `x[i] += e` when every later exponent is zero.
    fn add_at_end(&self, x: &mut [i64], i: usize, e: i64) {
        x[i] = x[i].checked_add(e).expect("exponent overflow");
        if let Some(p) = &self.data.powers[i] {
            let q = x[i].div_euclid(p.order);
            x[i] = x[i].rem_euclid(p.order);
            if q != 0 {
                let tail = p.tail.clone();
                self.mul_word_pow(x, &tail, q);
            }
        }
    }

    fn take_suffix(x: &mut [i64], i: usize) -> Word {
        let mut s = Vec::new();
        for (j, e) in x.iter_mut().enumerate().skip(i + 1) {
            if *e != 0 {
                s.push((j, *e));
                *e = 0;
            }
        }
        s
    }

    fn mul_gen_pow(&self, x: &mut [i64], i: usize, e: i64) {
        if e == 0 {
            return;
        }
        let n = x.len();
        let commutes = x[i + 1..].iter().enumerate().all(|(off, &v)| v == 0 || self.conj_pos[(i + 1 + off) * n + i].is_none());
        if commutes {
            let suffix = Self::take_suffix(x, i);
            self.add_at_end(x, i, e);
            self.mul_word(x, &suffix);
            return;
        }
        let s = e.signum();
        for _ in 0..e.unsigned_abs() {
            let suffix = Self::take_suffix(x, i);
            self.add_at_end(x, i, s);
            let table = if s > 0 { &self.conj_pos } else { &self.conj_neg };
            for (j, ej) in suffix {
                match &table[j * n + i] {
                    None => self.mul_gen_pow(x, j, ej),
                    Some(img) => self.mul_word_pow(x, img, ej),
                }
            }
        }
    }
}

impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::presentation_to_text(&self.data))
    }
}

/// Shipped example presentations.
pub mod catalog {
    use super::*;

    /// `[a, b] = c`, stored as `[b, a] = c⁻¹`.
    pub fn heisenberg() -> PcPresentation {
        let d = PresentationData::new("heisenberg", 2).gen("a", 1).gen("b", 1).gen("c", 2).comm(1, 0, vec![(2, -1)]);
        PcPresentation::new(d).expect("heisenberg is consistent")
    }

    /// Free nilpotent class 2 on `n` generators `a1..an`, with
    /// `c_ij = [a_j, a_i]` for `i < j`.
    pub fn free_class2(n: usize) -> PcPresentation {
        let mut d = PresentationData::new(&format!("free_class2_rank{n}"), 2);
        for i in 1..=n {
            d = d.gen(&format!("a{i}"), 1);
        }
        let mut idx = n;
        for i in 0..n {
            for j in i + 1..n {
                d = d.gen(&format!("c{}{}", i + 1, j + 1), 2);
                d = d.comm(j, i, vec![(idx, 1)]);
                idx += 1;
            }
        }
        PcPresentation::new(d).expect("free class 2 is consistent")
    }

    /// Free nilpotent class 3 on `a, b`: `c = [b,a]`, `d = [c,a]`, `e = [c,b]`.
    pub fn free_class3_rank2() -> PcPresentation {
        let d = PresentationData::new("free_class3_rank2", 3)
            .gen("a", 1)
            .gen("b", 1)
            .gen("c", 2)
            .gen("d", 3)
            .gen("e", 3)
            .comm(1, 0, vec![(2, 1)])
            .comm(2, 0, vec![(3, 1)])
            .comm(2, 1, vec![(4, 1)]);
        PcPresentation::new(d).expect("free class 3 is consistent")
    }

    /// Generalized Heisenberg group in the symplectic convention:
    /// `[a_i, b_i] = c`, every other pair commutes.
    pub fn generalized_heisenberg(n: usize) -> PcPresentation {
        let mut d = PresentationData::new(&format!("gen_heisenberg{n}"), 2);
        for i in 1..=n {
            d = d.gen(&format!("a{i}"), 1);
        }
        for i in 1..=n {
            d = d.gen(&format!("b{i}"), 1);
        }
        d = d.gen("c", 2);
        for i in 0..n {
            d = d.comm(n + i, i, vec![(2 * n, -1)]);
        }
        PcPresentation::new(d).expect("generalized heisenberg is consistent")
    }

    /// Unitriangular 3×3 matrices over `ℤ[τ]/(τ² − d)`, on the additive
    /// basis `{1, τ}` of each entry: `a0, a1, b0, b1, c0, c1`.
    pub fn ut3_quadratic(d: i64) -> PcPresentation {
        let name = if d < 0 { format!("ut3_quadratic_m{}", -d) } else { format!("ut3_quadratic_{d}") };
        let mut p = PresentationData::new(&name, 2)
            .gen("a0", 1)
            .gen("a1", 1)
            .gen("b0", 1)
            .gen("b1", 1)
            .gen("c0", 2)
            .gen("c1", 2);
        // [b_j, a_i] = [a_i, b_j]⁻¹ = c^{-(τ^i τ^j)}
        p = p.comm(2, 0, vec![(4, -1)]);
        p = p.comm(2, 1, vec![(5, -1)]);
        p = p.comm(3, 0, vec![(5, -1)]);
        p = p.comm(3, 1, if d == 0 { vec![] } else { vec![(4, -d)] });
        PcPresentation::new(p).expect("UT3 over a quadratic order is consistent")
    }

    /// Shipped presentation files, by file stem.
    pub const FILES: &[(&str, &str)] = &[
        ("heisenberg", include_str!("../../data/heisenberg.pc")),
        ("free_class2_rank2", include_str!("../../data/free_class2_rank2.pc")),
        ("free_class2_rank3", include_str!("../../data/free_class2_rank3.pc")),
        ("free_class2_rank4", include_str!("../../data/free_class2_rank4.pc")),
        ("free_class3_rank2", include_str!("../../data/free_class3_rank2.pc")),
        ("gen_heisenberg2", include_str!("../../data/gen_heisenberg2.pc")),
        ("gen_heisenberg3", include_str!("../../data/gen_heisenberg3.pc")),
        ("ut3_quadratic_m1", include_str!("../../data/ut3_quadratic_m1.pc")),
        ("ut3_quadratic_2", include_str!("../../data/ut3_quadratic_2.pc")),
        ("ut3_quadratic_3", include_str!("../../data/ut3_quadratic_3.pc")),
        ("free_abelian2", include_str!("../../data/free_abelian2.pc")),
    ];

    /// Parses and validates a shipped file.
    pub fn shipped(stem: &str) -> Option<PcPresentation> {
        let (_, text) = FILES.iter().find(|(s, _)| *s == stem)?;
        PcPresentation::new(super::parse_presentation(text).ok()?).ok()
    }

    /// The abelian group `ℤ^n`.
    pub fn free_abelian(n: usize) -> PcPresentation {
        let mut d = PresentationData::new(&format!("free_abelian{n}"), 1);
        for i in 1..=n {
            d = d.gen(&format!("x{i}"), 1);
        }
        PcPresentation::new(d).expect("abelian presentations are consistent")
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;
    use proptest::prelude::*;

    /// `(x, y, z)` stands for the matrix `[[1, x, z], [0, 1, y], [0, 0, 1]]`.
    type Ut = (i64, i64, i64);

    fn ut_mul(p: Ut, q: Ut) -> Ut {
        (p.0 + q.0, p.1 + q.1, p.2 + q.2 + p.0 * q.1)
    }

    fn ut_inv(p: Ut) -> Ut {
        (-p.0, -p.1, -p.2 + p.0 * p.1)
    }

    /// a^x b^y c^z as a matrix.
    fn ut_of(e: &[i64]) -> Ut {
        (e[0], e[1], e[0] * e[1] + e[2])
    }

    #[test]
    fn heisenberg_square_of_ab() {
        let h = heisenberg();
        let ab = h.mul(&h.generator(0), &h.generator(1));
        let sq = h.mul(&ab, &ab);
        assert_eq!(sq.exps(), &[2, 2, -1]);
        assert_eq!(ut_of(sq.exps()), ut_mul(ut_mul((1, 0, 0), (0, 1, 0)), ut_mul((1, 0, 0), (0, 1, 0))));
    }

    #[test]
    fn heisenberg_commutator_powers() {
        let h = heisenberg();
        let a2 = h.pow(&h.generator(0), 2);
        let b3 = h.pow(&h.generator(1), 3);
        assert_eq!(h.comm(&a2, &b3).exps(), &[0, 0, 6]);
        let x = h.from_exps(&[3, -2, 5]);
        assert_eq!(h.mul(&x, &h.identity()), x);
    }

    #[test]
    fn consistency_examples() {
        let good = PresentationData::new("h", 2).gen("a", 1).gen("b", 1).gen("c", 2).comm(1, 0, vec![(2, -1)]);
        assert_eq!(check_consistency(&good), Ok(()));
        let bad = good.clone().comm(2, 0, vec![(2, 1)]);
        assert!(matches!(check_consistency(&bad), Err(Violation::CommutatorWeight { .. })));
        assert!(matches!(PcPresentation::new(bad), Err(PcError::Inconsistent(_))));
        for n in 2..=4 {
            free_class2(n);
        }
        free_class3_rank2();
        generalized_heisenberg(2);
        generalized_heisenberg(3);
        for d in [-1, 2, 3] {
            ut3_quadratic(d);
        }
    }

    #[test]
    fn shipped_files_match_catalog() {
        let built = [
            heisenberg(),
            free_class2(2),
            free_class2(3),
            free_class2(4),
            free_class3_rank2(),
            generalized_heisenberg(2),
            generalized_heisenberg(3),
            ut3_quadratic(-1),
            ut3_quadratic(2),
            ut3_quadratic(3),
            free_abelian(2),
        ];
        for ((stem, _), p) in FILES.iter().zip(built) {
            assert_eq!(shipped(stem).as_ref(), Some(&p), "{stem}");
        }
    }

    #[test]
    fn associativity_failure_is_caught() {
        let d = PresentationData::new("broken", 2)
            .gen("a", 1)
            .gen("b", 1)
            .gen("c", 2)
            .power(0, 2, vec![])
            .comm(1, 0, vec![(2, 1)]);
        // a² = 1 forces c² = [b, a²] = 1, but c has infinite order
        assert!(matches!(check_consistency(&d), Err(Violation::Associativity { .. })));
    }

    #[test]
    fn free_class3_identities() {
        let g = free_class3_rank2();
        let (a, b) = (g.generator(0), g.generator(1));
        let c = g.comm(&b, &a);
        assert_eq!(c.exps(), &[0, 0, 1, 0, 0]);
        assert_eq!(g.comm(&c, &a).exps(), &[0, 0, 0, 1, 0]);
        assert_eq!(g.comm(&c, &b).exps(), &[0, 0, 0, 0, 1]);
        // Hall–Witt style check: [b, a²] = c² d
        let a2 = g.pow(&a, 2);
        assert_eq!(g.comm(&b, &a2).exps(), &[0, 0, 2, 1, 0]);
    }

    fn small_exps(n: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-5i64..=5, n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn heisenberg_matches_matrices(x in small_exps(3), y in small_exps(3)) {
            let h = heisenberg();
            let (gx, gy) = (h.from_exps(&x), h.from_exps(&y));
            prop_assert_eq!(ut_of(h.mul(&gx, &gy).exps()), ut_mul(ut_of(&x), ut_of(&y)));
            let (mx, my) = (ut_of(&x), ut_of(&y));
            let mc = ut_mul(ut_mul(ut_inv(mx), ut_inv(my)), ut_mul(mx, my));
            prop_assert_eq!(ut_of(h.comm(&gx, &gy).exps()), mc);
        }

        #[test]
        fn group_axioms_free3(x in small_exps(6), y in small_exps(6), z in small_exps(6)) {
            let g = free_class2(3);
            let (x, y, z) = (g.from_exps(&x), g.from_exps(&y), g.from_exps(&z));
            prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
            prop_assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
            prop_assert_eq!(g.mul(&g.identity(), &x), x.clone());
        }

        #[test]
        fn group_axioms_class3(x in small_exps(5), y in small_exps(5), z in small_exps(5)) {
            let g = free_class3_rank2();
            let (x, y, z) = (g.from_exps(&x), g.from_exps(&y), g.from_exps(&z));
            prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
            prop_assert_eq!(g.mul(&g.inv(&x), &x), g.identity());
        }

        #[test]
        fn class2_commutator_identities(x in small_exps(6), y in small_exps(6), k in -5i64..=5) {
            let g = free_class2(3);
            let (x, y) = (g.from_exps(&x), g.from_exps(&y));
            prop_assert_eq!(g.inv(&g.comm(&x, &y)), g.comm(&y, &x));
            prop_assert_eq!(g.pow(&g.comm(&x, &y), k), g.comm(&g.pow(&x, k), &y));
        }
    }
}
