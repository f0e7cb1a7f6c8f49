//! Text serialization of interpretations.
//!
//! ```text
//! chain int_heisenberg
//! code_dim 1
//! source integers
//! begin host
//! group heisenberg
//! ...
//! end host
//! begin formula domain
//! params x
//! system domain
//! ...
//! end formula
//! unit (0,0,1)
//! codec int_power (0,0,1)
//! note t is coded by c^t
//! ```
//!
//! Group elements are exponent vectors. Presentations and systems are
//! embedded in their own file formats. A composed codec nests two complete
//! chains in `outer` and `inner` blocks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use super::{parse_system, Codec, EInterpretation, EquationSystem, Formula, OpKind, QuotientModel, SourceKind};
use crate::abgroup::AbGroup;
use crate::intlinalg::IntMatrix;
use crate::pcgroup::{parse_presentation, presentation_to_text, GroupElement, PcPresentation};
use crate::scalars::RingPresentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("chain line {line}: {message}")]
pub struct ChainError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ChainError {
    ChainError { line, message: message.into() }
}

fn elem(x: &GroupElement) -> String {
    format!("({})", x.exps().iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

fn elems(xs: &[GroupElement]) -> String {
    xs.iter().map(elem).collect::<Vec<_>>().join(" ")
}

fn ints(xs: &[BigInt]) -> String {
    xs.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")
}

fn matrix(m: &IntMatrix) -> String {
    let rows: Vec<String> = m.row_vecs().iter().map(|r| ints(r)).collect();
    format!("{} {} : {}", m.rows(), m.cols(), rows.join(" ; "))
}

fn block(out: &mut String, label: &str, arg: &str, body: &str) {
    if arg.is_empty() {
        out.push_str(&format!("begin {label}\n"));
    } else {
        out.push_str(&format!("begin {label} {arg}\n"));
    }
    out.push_str(body);
    if !body.ends_with('\n') {
        out.push('\n');
    }
    out.push_str(&format!("end {label}\n"));
}

fn formula_text(f: &Formula) -> String {
    let params: Vec<String> = f.params.iter().map(|t| t.join(" ")).collect();
    format!("params {}\n{}", params.join(" | "), f.system)
}

fn ring_text(r: &RingPresentation) -> String {
    let mut out = format!("additive {}\n", matrix(r.additive.relations()));
    out.push_str(&format!("unit {}\n", ints(&r.unit)));
    for (p, row) in r.structure.iter().enumerate() {
        for (q, v) in row.iter().enumerate() {
            out.push_str(&format!("product {p} {q} {}\n", ints(v)));
        }
    }
    if let Some(actions) = &r.actions {
        for (a, b) in actions {
            out.push_str(&format!("action {} | {}\n", matrix(a), matrix(b)));
        }
    }
    out
}

fn model_text(m: &QuotientModel) -> String {
    match m {
        QuotientModel::Trivial => "trivial".into(),
        QuotientModel::Truncation { k } => format!("truncation {k}"),
        QuotientModel::CenterClass2 => "center_class2".into(),
        QuotientModel::Generic => "generic".into(),
    }
}

/// Writes `i` as a chain document.
pub fn chain_to_text(i: &EInterpretation) -> String {
    let mut out = format!("chain {}\ncode_dim {}\n", i.id, i.code_dim);
    match &i.source {
        SourceKind::Integers => out.push_str("source integers\n"),
        SourceKind::Scalars(r) => {
            out.push_str("source scalars\n");
            block(&mut out, "ring", "", &ring_text(r));
        }
        SourceKind::Group { name, model } => {
            out.push_str(&format!("source group {name}\n"));
            if let Some(m) = model {
                block(&mut out, "model", "", &presentation_to_text(m.data()));
            }
        }
    }
    block(&mut out, "host", "", &presentation_to_text(i.host.data()));
    block(&mut out, "formula", "domain", &formula_text(&i.domain));
    block(&mut out, "formula", "equality", &formula_text(&i.equality));
    for (k, f) in &i.ops {
        block(&mut out, "formula", k.name(), &formula_text(f));
    }
    out.push_str(&format!("unit {}\n", elems(&i.unit)));
    for (name, code) in &i.constants {
        out.push_str(&format!("const {name} {}\n", elems(code)));
    }
    match &i.codec {
        Codec::Identity => out.push_str("codec identity\n"),
        Codec::IntPower { base } => out.push_str(&format!("codec int_power {}\n", elem(base))),
        Codec::Scalar { lifts } => {
            out.push_str(&format!("codec scalar {}\n", lifts.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")))
        }
        Codec::Quotient { model, normal } => {
            out.push_str(&format!("codec quotient {}\n", model_text(model)));
            block(&mut out, "normal", "", &normal.to_string());
        }
        Codec::Composed { outer, inner } => {
            out.push_str("codec composed\n");
            block(&mut out, "outer", "", &chain_to_text(outer));
            block(&mut out, "inner", "", &chain_to_text(inner));
        }
    }
    for n in &i.notes {
        out.push_str(&format!("note {n}\n"));
    }
    out
}

enum Item {
    Line { line: usize, key: String, rest: String },
    Block { line: usize, label: String, arg: String, body: String, body_start: usize },
}

fn items(text: &str, offset: usize) -> Result<Vec<Item>, ChainError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < lines.len() {
        let line = offset + k + 1;
        let content = lines[k].trim();
        k += 1;
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, rest) = content.split_once(' ').unwrap_or((content, ""));
        if key == "end" {
            return Err(err(line, format!("unmatched `end {rest}`")));
        }
        if key != "begin" {
            out.push(Item::Line { line, key: key.into(), rest: rest.trim().into() });
            continue;
        }
        let (label, arg) = rest.split_once(' ').unwrap_or((rest, ""));
        let body_start = k;
        let mut depth = 1;
        while k < lines.len() {
            let t = lines[k].trim();
            if t.starts_with("begin ") {
                depth += 1;
            } else if t.starts_with("end ") || t == "end" {
                depth -= 1;
                if depth == 0 {
                    if t != format!("end {label}") {
                        return Err(err(offset + k + 1, format!("expected `end {label}`")));
                    }
                    break;
                }
            }
            k += 1;
        }
        if depth != 0 {
            return Err(err(line, format!("block `{label}` is not closed")));
        }
        let body = lines[body_start..k].join("\n");
        k += 1;
        out.push(Item::Block { line, label: label.into(), arg: arg.trim().into(), body, body_start: offset + body_start });
    }
    Ok(out)
}

fn parse_elem(s: &str, n: usize, line: usize) -> Result<GroupElement, ChainError> {
    let inner = s.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| err(line, format!("bad element `{s}`")))?;
    let exps = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|e| e.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>().map_err(|_| err(line, format!("bad element `{s}`")))?
    };
    if exps.len() != n {
        return Err(err(line, format!("element `{s}` has {} exponents, expected {n}", exps.len())));
    }
    Ok(GroupElement(exps))
}

fn parse_elems(s: &str, n: usize, line: usize) -> Result<Vec<GroupElement>, ChainError> {
    s.split_whitespace().map(|e| parse_elem(e, n, line)).collect()
}

fn parse_ints(s: &str, line: usize) -> Result<Vec<BigInt>, ChainError> {
    s.split_whitespace().map(|t| t.parse::<BigInt>().map_err(|_| err(line, format!("bad integer `{t}`")))).collect()
}

fn parse_matrix(s: &str, line: usize) -> Result<IntMatrix, ChainError> {
    let (dims, body) = s.split_once(':').ok_or_else(|| err(line, "matrix needs `rows cols : entries`"))?;
    let d = parse_ints(dims, line)?;
    let [r, c] = &d[..] else { return Err(err(line, "matrix needs two dimensions")) };
    let (r, c) = (usize::try_from(r).map_err(|_| err(line, "bad row count"))?, usize::try_from(c).map_err(|_| err(line, "bad column count"))?);
    let rows: Vec<Vec<BigInt>> = if r == 0 {
        Vec::new()
    } else {
        body.split(';').map(|row| parse_ints(row, line)).collect::<Result<_, _>>()?
    };
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(err(line, format!("matrix entries do not match {r}x{c}")));
    }
    Ok(IntMatrix::from_rows(c, rows))
}

fn parse_pres(body: &str, line: usize) -> Result<PcPresentation, ChainError> {
    let data = parse_presentation(body).map_err(|e| err(line + e.line, e.message))?;
    PcPresentation::new(data).map_err(|e| err(line, e.to_string()))
}

fn parse_sys(body: &str, host: &PcPresentation, line: usize) -> Result<EquationSystem, ChainError> {
    parse_system(body, Some(host)).map_err(|e| err(line + e.line, format!("col {}: {}", e.col, e.message)))
}

fn parse_formula(body: &str, host: &PcPresentation, line: usize) -> Result<Formula, ChainError> {
    let (first, rest) = body.split_once('\n').unwrap_or((body, ""));
    let params = first.trim().strip_prefix("params").ok_or_else(|| err(line + 1, "formula must start with `params`"))?;
    let params: Vec<Vec<String>> = params.split('|').map(|t| t.split_whitespace().map(String::from).collect()).collect();
    let system = parse_sys(rest, host, line + 1)?;
    if system.vars != params.iter().flatten().cloned().collect::<Vec<_>>() {
        return Err(err(line + 1, "formula parameters differ from the system's variables"));
    }
    Ok(Formula { params, system })
}

fn parse_ring(body: &str, line: usize) -> Result<RingPresentation, ChainError> {
    let mut additive = None;
    let mut unit = None;
    let mut products = BTreeMap::new();
    let mut actions = Vec::new();
    for item in items(body, line)? {
        let Item::Line { line, key, rest } = item else { return Err(err(line, "unexpected block in ring")) };
        match key.as_str() {
            "additive" => additive = Some(AbGroup::from_relations(parse_matrix(&rest, line)?)),
            "unit" => unit = Some(parse_ints(&rest, line)?),
            "product" => {
                let v = parse_ints(&rest, line)?;
                let idx = |k: usize| v.get(k).and_then(|x| usize::try_from(x).ok());
                let (Some(p), Some(q)) = (idx(0), idx(1)) else { return Err(err(line, "product needs two indices")) };
                products.insert((p, q), (line, v[2..].to_vec()));
            }
            "action" => {
                let (a, b) = rest.split_once('|').ok_or_else(|| err(line, "action needs `alpha | beta`"))?;
                actions.push((parse_matrix(a, line)?, parse_matrix(b, line)?));
            }
            other => return Err(err(line, format!("unknown ring key `{other}`"))),
        }
    }
    let additive = additive.ok_or_else(|| err(line, "ring without `additive`"))?;
    let unit = unit.ok_or_else(|| err(line, "ring without `unit`"))?;
    let k = additive.ngens();
    let mut structure = vec![vec![Vec::new(); k]; k];
    for ((p, q), (l, v)) in products {
        if p >= k || q >= k || v.len() != k {
            return Err(err(l, "product outside the additive basis"));
        }
        structure[p][q] = v;
    }
    if structure.iter().flatten().any(Vec::is_empty) {
        return Err(err(line, "incomplete product table"));
    }
    Ok(RingPresentation { additive, unit, structure, actions: if actions.is_empty() { None } else { Some(actions) } })
}

fn parse_model(rest: &str, line: usize) -> Result<QuotientModel, ChainError> {
    let parts: Vec<&str> = rest.split_whitespace().collect();
    Ok(match parts[..] {
        ["quotient", "trivial"] => QuotientModel::Trivial,
        ["quotient", "truncation", k] => QuotientModel::Truncation { k: k.parse().map_err(|_| err(line, "bad class"))? },
        ["quotient", "center_class2"] => QuotientModel::CenterClass2,
        ["quotient", "generic"] => QuotientModel::Generic,
        _ => return Err(err(line, format!("unknown codec `{rest}`"))),
    })
}

fn parse_at(text: &str, offset: usize) -> Result<EInterpretation, ChainError> {
    let all = items(text, offset)?;
    let mut host = None;
    for it in &all {
        if let Item::Block { label, body, body_start, .. } = it {
            if label == "host" {
                host = Some(parse_pres(body, *body_start)?);
            }
        }
    }
    let host = host.ok_or_else(|| err(offset, "missing `host` block"))?;
    let n = host.ngens();
    let mut id = None;
    let mut code_dim = None;
    let mut source_line = None;
    let mut ring = None;
    let mut model = None;
    let mut formulas: Vec<(String, Formula)> = Vec::new();
    let mut unit = None;
    let mut constants = BTreeMap::new();
    let mut codec_line = None;
    let mut normal = None;
    let mut outer = None;
    let mut inner = None;
    let mut notes = Vec::new();
    for it in all {
        match it {
            Item::Line { line, key, rest } => match key.as_str() {
                "chain" => id = Some(rest),
                "code_dim" => code_dim = Some(rest.parse::<usize>().map_err(|_| err(line, "bad code_dim"))?),
                "source" => source_line = Some((line, rest)),
                "unit" => unit = Some(parse_elems(&rest, n, line)?),
                "const" => {
                    let (name, code) = rest.split_once(' ').ok_or_else(|| err(line, "const needs a name and a code"))?;
                    constants.insert(name.to_string(), parse_elems(code, n, line)?);
                }
                "codec" => codec_line = Some((line, rest)),
                "note" => notes.push(rest),
                other => return Err(err(line, format!("unknown key `{other}`"))),
            },
            Item::Block { line, label, arg, body, body_start } => match label.as_str() {
                "host" => {}
                "ring" => ring = Some(parse_ring(&body, body_start)?),
                "model" => model = Some(parse_pres(&body, body_start)?),
                "formula" => formulas.push((arg, parse_formula(&body, &host, body_start)?)),
                "normal" => normal = Some(parse_sys(&body, &host, body_start)?),
                "outer" => outer = Some(parse_at(&body, body_start)?),
                "inner" => inner = Some(parse_at(&body, body_start)?),
                other => return Err(err(line, format!("unknown block `{other}`"))),
            },
        }
    }
    let id = id.ok_or_else(|| err(offset + 1, "missing `chain` line"))?;
    let code_dim = code_dim.ok_or_else(|| err(offset + 1, "missing `code_dim`"))?;
    let (sline, src) = source_line.ok_or_else(|| err(offset + 1, "missing `source`"))?;
    let source = match src.split_whitespace().collect::<Vec<_>>()[..] {
        ["integers"] => SourceKind::Integers,
        ["scalars"] => SourceKind::Scalars(ring.ok_or_else(|| err(sline, "scalar source without a `ring` block"))?),
        ["group", name] => SourceKind::Group { name: name.into(), model },
        _ => return Err(err(sline, format!("unknown source `{src}`"))),
    };
    let mut domain = None;
    let mut equality = None;
    let mut ops = Vec::new();
    for (name, f) in formulas {
        match name.as_str() {
            "domain" => domain = Some(f),
            "equality" => equality = Some(f),
            "add" => ops.push((OpKind::Add, f)),
            "mul" => ops.push((OpKind::Mul, f)),
            other => return Err(err(offset, format!("unknown formula `{other}`"))),
        }
    }
    let (cline, codec_text) = codec_line.ok_or_else(|| err(offset + 1, "missing `codec`"))?;
    let codec = match codec_text.split_once(' ').unwrap_or((&codec_text, "")) {
        ("identity", "") => Codec::Identity,
        ("int_power", e) => Codec::IntPower { base: parse_elem(e.trim(), n, cline)? },
        ("scalar", ls) => Codec::Scalar {
            lifts: ls.split_whitespace().map(|g| g.parse().map_err(|_| err(cline, "bad lift index"))).collect::<Result<_, _>>()?,
        },
        ("quotient", _) => Codec::Quotient {
            model: parse_model(&codec_text, cline)?,
            normal: normal.ok_or_else(|| err(cline, "quotient codec without a `normal` block"))?,
        },
        ("composed", "") => Codec::Composed {
            outer: Box::new(outer.ok_or_else(|| err(cline, "composed codec without `outer`"))?),
            inner: Box::new(inner.ok_or_else(|| err(cline, "composed codec without `inner`"))?),
        },
        _ => return Err(err(cline, format!("unknown codec `{codec_text}`"))),
    };
    let i = EInterpretation {
        id,
        source,
        host,
        code_dim,
        domain: domain.ok_or_else(|| err(offset + 1, "missing domain formula"))?,
        equality: equality.ok_or_else(|| err(offset + 1, "missing equality formula"))?,
        ops,
        unit: unit.ok_or_else(|| err(offset + 1, "missing `unit`"))?,
        constants,
        codec,
        notes,
    };
    i.check_shape().map_err(|m| err(offset + 1, m))?;
    Ok(i)
}

/// Reads a chain document written by [`chain_to_text`].
pub fn parse_chain(text: &str) -> Result<EInterpretation, ChainError> {
    parse_at(text, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqlang::{center_quotient, compose, identity_interpretation, int_interpretation_class2, quotient_interpretation, scalar_interpretation};
    use crate::eqlang::center_edef;
    use crate::pcgroup::catalog::*;
    use crate::scalars::{commutator_bilinear_map, largest_ring_of_scalars};

    fn round_trip(i: &EInterpretation) {
        let text = chain_to_text(i);
        let back = parse_chain(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(&back, i);
        assert_eq!(chain_to_text(&back), text);
    }

    #[test]
    fn shipped_interpretations() {
        let h = heisenberg();
        round_trip(&identity_interpretation(&h));
        round_trip(&center_quotient(&h).unwrap());
        let (a, b) = (h.generator(0), h.generator(1));
        round_trip(&int_interpretation_class2(&h, &a, &b).unwrap());
        let u = ut3_quadratic(2);
        let cm = commutator_bilinear_map(&u).unwrap();
        let r = largest_ring_of_scalars(&cm.map).unwrap();
        round_trip(&scalar_interpretation(&u, &cm, &r).unwrap());
        let f = free_class3_rank2();
        let inner = quotient_interpretation(&f, &center_edef(&f), QuotientModel::Truncation { k: 2 }).unwrap();
        let SourceKind::Group { model: Some(m), .. } = &inner.source else { panic!() };
        let both = compose(&center_quotient(m).unwrap(), &inner).unwrap();
        round_trip(&both);
    }

    #[test]
    fn damage_is_reported() {
        let h = heisenberg();
        let text = chain_to_text(&center_quotient(&h).unwrap());
        let e = parse_chain(&text.replace("end normal\n", "")).unwrap_err();
        assert!(e.message.contains("not closed"), "{e}");
        let e = parse_chain(&text.replace("codec quotient center_class2", "codec rotation")).unwrap_err();
        assert!(e.message.contains("unknown codec"), "{e}");
    }
}
