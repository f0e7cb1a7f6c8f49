//! Reading source values off host codes, relative to a host carrier.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::carrier::{to_i64, FiniteRing, GroupCarrier, RingCarrier, Value};
use super::{solve_finite, Carrier, Limits, VerifyError};
use crate::eqlang::{Codec, EInterpretation, QuotientModel, SourceKind};
use crate::intlinalg::IntMatrix;
use crate::pcgroup::{truncate_to_class, GroupElement, Truncation};

#[derive(Clone, Debug)]
enum Kind {
    Identity,
    /// Finite carriers list every power; boxes divide one coordinate.
    IntPower { base: GroupElement, powers: Option<BTreeMap<Value, i64>> },
    Project(Truncation),
    Coset,
    /// Key of a code tuple: the exponents of `[u_i, e_l]`.
    Scalar { lifts: Vec<GroupElement>, classes: BTreeMap<Value, Value> },
    Composed { outer: Box<Decoder>, inner: Box<Decoder>, inner_dim: usize },
}

/// Decoding map of an interpretation in a fixed host carrier, with the
/// source structure it lands in.
#[derive(Clone, Debug)]
pub struct Decoder {
    pub source: Carrier,
    kind: Kind,
}

fn map_in(c: &GroupCarrier, x: &GroupElement) -> GroupElement {
    c.canon(c.presentation().from_word(&x.word()))
}

fn scalar_key(c: &GroupCarrier, lifts: &[GroupElement], code: &[GroupElement]) -> Value {
    code.iter().flat_map(|u| lifts.iter().flat_map(move |e| c.comm_many(&[u.clone(), e.clone()]).0)).collect()
}

impl Decoder {
    pub fn new(i: &EInterpretation, host: &GroupCarrier, limits: &Limits) -> Result<Self, VerifyError> {
        let finite_only = |what: &str| -> Result<(), VerifyError> {
            if host.is_finite() {
                Ok(())
            } else {
                Err(VerifyError::Unsupported(format!("{what} codes are only decoded in finite carriers")))
            }
        };
        match &i.codec {
            Codec::Identity | Codec::Quotient { model: QuotientModel::Trivial, .. } => {
                Ok(Decoder { source: Carrier::Group(host.clone()), kind: Kind::Identity })
            }
            Codec::IntPower { base } => {
                let base = map_in(host, base);
                if host.is_finite() {
                    let mut powers = BTreeMap::new();
                    let mut x = host.identity();
                    let mut t = 0;
                    loop {
                        powers.insert(x.0.clone(), t);
                        x = host.mul(&x, &base);
                        t += 1;
                        if powers.contains_key(&x.0) {
                            break;
                        }
                    }
                    let source = Carrier::Ring(RingCarrier::integers_mod(t as u64));
                    Ok(Decoder { source, kind: Kind::IntPower { base, powers: Some(powers) } })
                } else {
                    let GroupCarrier::Box { bound, .. } = host else { unreachable!("infinite carriers are boxes") };
                    if base.exps().iter().all(|&e| e == 0) {
                        return Err(VerifyError::Decode("the coding element is trivial".into()));
                    }
                    let source = Carrier::Ring(RingCarrier::Integers { bound: *bound });
                    Ok(Decoder { source, kind: Kind::IntPower { base, powers: None } })
                }
            }
            Codec::Quotient { model: QuotientModel::Truncation { k }, .. } => {
                let t = truncate_to_class(host.presentation(), *k)?;
                let target = match host {
                    GroupCarrier::Box { bound, .. } => GroupCarrier::Box { group: t.presentation.clone(), bound: *bound },
                    GroupCarrier::Finite(_) => GroupCarrier::Finite(t.presentation.clone()),
                    GroupCarrier::Cosets { .. } => return Err(VerifyError::Unsupported("truncation of a coset carrier".into())),
                };
                Ok(Decoder { source: Carrier::Group(target), kind: Kind::Project(t) })
            }
            Codec::Quotient { model, normal } => {
                finite_only("coset")?;
                let GroupCarrier::Finite(base) = host else {
                    return Err(VerifyError::Unsupported("quotients of coset carriers".into()));
                };
                let members: Vec<GroupElement> = match model {
                    QuotientModel::CenterClass2 => {
                        let gens: Vec<GroupElement> = (0..base.ngens()).map(|g| base.generator(g)).collect();
                        host.elements(None, false)
                            .into_iter()
                            .filter(|z| gens.iter().all(|g| base.mul(z, g) == base.mul(g, z)))
                            .collect()
                    }
                    _ => {
                        let mut single = normal.clone();
                        single.witnesses.extend(single.vars.drain(1..));
                        let r = solve_finite(&single, &Carrier::Group(host.clone()), limits)?;
                        r.solutions.into_iter().map(|s| GroupElement(s[0].clone())).collect()
                    }
                };
                let source = GroupCarrier::Cosets { base: base.clone(), normal: members, label: normal.name.clone() };
                Ok(Decoder { source: Carrier::Group(source), kind: Kind::Coset })
            }
            Codec::Scalar { lifts } => {
                finite_only("scalar")?;
                let SourceKind::Scalars(ring) = &i.source else {
                    return Err(VerifyError::Decode("scalar codec without a ring source".into()));
                };
                let Some(actions) = &ring.actions else {
                    return Err(VerifyError::Unsupported("ring without its action matrices".into()));
                };
                let lift_elems: Vec<GroupElement> = lifts.iter().map(|&g| host.presentation().generator(g)).collect();
                let m = host.presentation().order(lifts[0]).ok_or_else(|| VerifyError::NotFinite(host.describe()))?;
                let k = lifts.len();
                let code_of = |r: &[i64]| -> Vec<GroupElement> {
                    let mut x = IntMatrix::zeros(k, k);
                    for (coef, (a, _)) in r.iter().zip(actions) {
                        x = x.add(&a.scale(&BigInt::from(*coef)));
                    }
                    (0..k)
                        .map(|col| {
                            let word: Vec<(usize, i64)> =
                                (0..k).map(|row| (lifts[row], to_i64(x.get(row, col)).expect("small entry"))).collect();
                            host.canon(host.presentation().from_word(&word))
                        })
                        .collect()
                };
                let key = |r: &[i64]| Some(scalar_key(host, &lift_elems, &code_of(r)));
                let mul = |x: &[i64], y: &[i64]| -> Vec<i64> {
                    let bx: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
                    let by: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
                    ring.mul(&bx, &by).iter().map(|v| to_i64(v).expect("small coordinate")).collect()
                };
                let one: Vec<i64> = ring.unit.iter().map(|v| to_i64(v).expect("small coordinate")).collect();
                let fr = FiniteRing::from_classes(&format!("R/{m}"), ring.rank(), m, &one, mul, key);
                let classes = (0..fr.len()).map(|idx| (key(fr.label(idx)).expect("key"), fr.label(idx).clone())).collect();
                Ok(Decoder {
                    source: Carrier::Ring(RingCarrier::Finite(fr)),
                    kind: Kind::Scalar { lifts: lift_elems, classes },
                })
            }
            Codec::Composed { outer, inner } => {
                let inner_dec = Decoder::new(inner, host, limits)?;
                let Carrier::Group(middle) = &inner_dec.source else {
                    return Err(VerifyError::Decode("the middle structure must be a group".into()));
                };
                let outer_dec = Decoder::new(outer, middle, limits)?;
                Ok(Decoder {
                    source: outer_dec.source.clone(),
                    kind: Kind::Composed { outer: Box::new(outer_dec), inner: Box::new(inner_dec), inner_dim: inner.code_dim },
                })
            }
        }
    }

    /// The source value coded by `code`.
    pub fn decode(&self, host: &GroupCarrier, code: &[GroupElement]) -> Result<Value, VerifyError> {
        let fail = || VerifyError::Decode(format!("no source value for ({})", code.iter().map(|x| host.format(x)).collect::<Vec<_>>().join(", ")));
        match &self.kind {
            Kind::Identity => Ok(host.canon(code[0].clone()).0),
            Kind::IntPower { powers: Some(powers), .. } => powers.get(&host.canon(code[0].clone()).0).map(|t| vec![*t]).ok_or_else(fail),
            Kind::IntPower { base, powers: None } => {
                let k = base.exps().iter().position(|&e| e != 0).expect("nontrivial base");
                let (x, b) = (code[0].exps()[k], base.exps()[k]);
                if x % b != 0 {
                    return Err(fail());
                }
                let t = x / b;
                if host.pow(base, t) == code[0] {
                    Ok(vec![t])
                } else {
                    Err(fail())
                }
            }
            Kind::Project(t) => Ok(t.project(&code[0]).0),
            Kind::Coset => match &self.source {
                Carrier::Group(g) => Ok(g.canon(code[0].clone()).0),
                Carrier::Ring(_) => unreachable!("coset decoders land in groups"),
            },
            Kind::Scalar { lifts, classes } => classes.get(&scalar_key(host, lifts, code)).cloned().ok_or_else(fail),
            Kind::Composed { outer, inner, inner_dim } => {
                let Carrier::Group(middle) = &inner.source else { unreachable!("checked on construction") };
                let mids = code
                    .chunks(*inner_dim)
                    .map(|chunk| inner.decode(host, chunk).map(GroupElement))
                    .collect::<Result<Vec<_>, _>>()?;
                outer.decode(middle, &mids)
            }
        }
    }
}
