//! Line-oriented presentation files.
//!
//! ```text
//! # the Heisenberg group
//! group heisenberg
//! class 2
//! gen a 1
//! gen b 1
//! gen c 2
//! comm b a = c^-1
//! ```

use thiserror::Error;

use super::{Generator, PowerRelation, PresentationData, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct PresentationParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> PresentationParseError {
    PresentationParseError { line, message: message.into() }
}

pub fn word_to_string(gens: &[Generator], w: &[(usize, i64)]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&(g, e)| {
            let name = gens.get(g).map(|g| g.name.as_str()).unwrap_or("?");
            if e == 1 {
                name.to_string()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn parse_word(gens: &[Generator], text: &str, line: usize) -> Result<Word, PresentationParseError> {
    let text = text.trim();
    if text == "1" {
        return Ok(Vec::new());
    }
    let mut w = Vec::new();
    for factor in text.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e.trim().parse().map_err(|_| err(line, format!("bad exponent in `{factor}`")))?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        if name.is_empty() {
            return Err(err(line, format!("empty factor in word `{text}`")));
        }
        let g = gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| err(line, format!("unknown generator `{name}`")))?;
        w.push((g, exp));
    }
    Ok(w)
}

pub fn parse_presentation(text: &str) -> Result<PresentationData, PresentationParseError> {
    let mut name = None;
    let mut class = None;
    let mut data = PresentationData::new("", 0);
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (head, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match head {
            "group" => {
                if rest.is_empty() {
                    return Err(err(line, "group needs a name"));
                }
                name = Some(rest.to_string());
            }
            "class" => {
                let c: u32 = rest.parse().map_err(|_| err(line, "class must be a positive integer"))?;
                if c == 0 {
                    return Err(err(line, "class must be a positive integer"));
                }
                class = Some(c);
            }
            "gen" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [g, w] = parts[..] else { return Err(err(line, "expected `gen <name> <weight>`")) };
                let weight: u32 = w.parse().map_err(|_| err(line, "weight must be a positive integer"))?;
                if data.index_of(g).is_some() {
                    return Err(err(line, format!("generator `{g}` declared twice")));
                }
                if !g.chars().all(|c| c.is_alphanumeric() || c == '_') || !g.starts_with(|c: char| c.is_alphabetic()) {
                    return Err(err(line, format!("bad generator name `{g}`")));
                }
                data.gens.push(Generator { name: g.into(), weight });
                data.powers.push(None);
            }
            "pow" => {
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err(line, "expected `pow <gen> <m> = <word>`"))?;
                let parts: Vec<&str> = lhs.split_whitespace().collect();
                let [g, m] = parts[..] else { return Err(err(line, "expected `pow <gen> <m> = <word>`")) };
                let gi = data.index_of(g).ok_or_else(|| err(line, format!("unknown generator `{g}`")))?;
                let order: i64 = m.parse().map_err(|_| err(line, "order must be an integer"))?;
                if data.powers[gi].is_some() {
                    return Err(err(line, format!("second power relation for `{g}`")));
                }
                let tail = parse_word(&data.gens, rhs, line)?;
                data.powers[gi] = Some(PowerRelation { order, tail });
            }
            "comm" => {
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err(line, "expected `comm <gen_j> <gen_i> = <word>`"))?;
                let parts: Vec<&str> = lhs.split_whitespace().collect();
                let [gj, gi] = parts[..] else { return Err(err(line, "expected `comm <gen_j> <gen_i> = <word>`")) };
                let j = data.index_of(gj).ok_or_else(|| err(line, format!("unknown generator `{gj}`")))?;
                let i = data.index_of(gi).ok_or_else(|| err(line, format!("unknown generator `{gi}`")))?;
                if j <= i {
                    return Err(err(line, format!("commutator [{gj}, {gi}] must list the later generator first")));
                }
                if data.comms.contains_key(&(j, i)) {
                    return Err(err(line, format!("second relation for [{gj}, {gi}]")));
                }
                let w = parse_word(&data.gens, rhs, line)?;
                if !w.is_empty() {
                    data.comms.insert((j, i), w);
                }
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    data.name = name.ok_or_else(|| err(0, "missing `group` line"))?;
    data.class = class.ok_or_else(|| err(0, "missing `class` line"))?;
    Ok(data)
}

pub fn presentation_to_text(d: &PresentationData) -> String {
    let mut out = format!("group {}\nclass {}\n", d.name, d.class);
    for g in &d.gens {
        out.push_str(&format!("gen {} {}\n", g.name, g.weight));
    }
    for (i, p) in d.powers.iter().enumerate() {
        if let Some(p) = p {
            out.push_str(&format!("pow {} {} = {}\n", d.gens[i].name, p.order, word_to_string(&d.gens, &p.tail)));
        }
    }
    for (&(j, i), w) in &d.comms {
        out.push_str(&format!("comm {} {} = {}\n", d.gens[j].name, d.gens[i].name, word_to_string(&d.gens, w)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::{catalog, PcPresentation};

    #[test]
    fn heisenberg_file() {
        let text = "# H\ngroup heisenberg\nclass 2\ngen a 1\ngen b 1\ngen c 2\ncomm b a = c^-1\n";
        let d = parse_presentation(text).unwrap();
        assert_eq!(PcPresentation::new(d).unwrap(), catalog::heisenberg());
    }

    #[test]
    fn round_trip_catalog() {
        for p in [catalog::heisenberg(), catalog::free_class2(4), catalog::free_class3_rank2(), catalog::ut3_quadratic(-1)] {
            let text = p.to_string();
            assert_eq!(&parse_presentation(&text).unwrap(), p.data());
        }
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_presentation("group g\nclass 2\ngen a 1\ncomm a b = 1\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_presentation("group g\nclass 1\ngen a 1\npow a 3 = a^*\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(parse_presentation("class 1\n").is_err());
    }
}
