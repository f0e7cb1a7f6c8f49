//! System files and the term printer.
//!
//! ```text
//! system commuting
//! sort group heisenberg
//! var x
//! eq [x,a] = 1
//! ```

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use super::{Equation, EquationSystem, Sort, Term};
use crate::pcgroup::PcPresentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str, line: usize, offset: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = offset + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Int(text.parse().expect("digits")), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*^()[],=".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(ParseError { line, col, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.line, col: self.col(), message: message.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    /// Column of the token just consumed.
    fn prev_col(&self) -> usize {
        self.toks[self.pos - 1].1
    }

    fn starts_term(&self) -> bool {
        match self.peek() {
            Some(Tok::Int(_) | Tok::Ident(_)) => true,
            Some(Tok::Sym(c)) => matches!(c, '(' | '[' | '-'),
            None => false,
        }
    }

    /// Fails at the operator when nothing follows it.
    fn operand(&mut self, next: fn(&mut Self) -> Result<Term, ParseError>) -> Result<Term, ParseError> {
        if !self.starts_term() {
            let c = self.prev_col();
            return Err(ParseError { line: self.line, col: c, message: "dangling operator".into() });
        }
        next(self)
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut t = self.prod()?;
        loop {
            if self.eat('+') {
                t = Term::Add(Box::new(t), Box::new(self.operand(Self::prod)?));
            } else if self.eat('-') {
                t = Term::Sub(Box::new(t), Box::new(self.operand(Self::prod)?));
            } else {
                return Ok(t);
            }
        }
    }

    fn prod(&mut self) -> Result<Term, ParseError> {
        let mut t = self.unary()?;
        while self.eat('*') {
            t = Term::Mul(Box::new(t), Box::new(self.operand(Self::unary)?));
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if self.eat('-') {
            if let Some(Tok::Int(n)) = self.peek().cloned() {
                if self.toks.get(self.pos + 1).map(|t| &t.0) != Some(&Tok::Sym('^')) {
                    self.pos += 1;
                    return Ok(Term::Int(-n));
                }
            }
            return Ok(Term::Neg(Box::new(self.unary()?)));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.primary()?;
        while self.eat('^') {
            let neg = self.eat('-');
            let Some(Tok::Int(n)) = self.peek().cloned() else { return self.err("expected an integer exponent") };
            self.pos += 1;
            let n = if neg { -n } else { n };
            let Ok(k) = i64::try_from(&n) else { return self.err("exponent out of range") };
            t = Term::Pow(Box::new(t), k);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Term::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(if self.vars.contains(&name) { Term::Var(name) } else { Term::Const(name) })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let t = self.sum()?;
                self.expect(')')?;
                Ok(t)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let mut ts = vec![self.sum()?];
                while self.eat(',') {
                    ts.push(self.sum()?);
                }
                if ts.len() < 2 {
                    return self.err("a commutator needs at least two entries");
                }
                self.expect(']')?;
                Ok(Term::Comm(ts))
            }
            Some(_) => self.err("expected a term"),
            None => self.err("unexpected end of line"),
        }
    }
}

fn check_sort(t: &Term, sort: &Sort, p: Option<&PcPresentation>) -> Result<(), String> {
    let rec = |t: &Term| check_sort(t, sort, p);
    match (t, sort) {
        (Term::Var(_), _) => Ok(()),
        (Term::Int(n), Sort::Group(_)) if n.is_one() => Ok(()),
        (Term::Int(n), Sort::Group(_)) => Err(format!("integer literal {n} in a group term (only 1 is allowed)")),
        (Term::Int(_), _) => Ok(()),
        (Term::Const(c), Sort::Group(_)) => match p {
            Some(p) if p.index_of(c).is_none() => Err(format!("unknown constant `{c}`")),
            _ => Ok(()),
        },
        (Term::Const(c), _) => Err(format!("unknown variable `{c}`")),
        (Term::Add(..) | Term::Sub(..) | Term::Neg(_), Sort::Group(_)) => Err("`+` or `-` in a group term".into()),
        (Term::Comm(_), Sort::RingZ | Sort::RingMod(_)) => Err("commutator in a ring term".into()),
        (Term::Pow(_, k), Sort::RingZ | Sort::RingMod(_)) if *k < 0 => Err("negative power in a ring term".into()),
        (Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b), _) => rec(a).and(rec(b)),
        (Term::Neg(a) | Term::Pow(a, _), _) => rec(a),
        (Term::Comm(ts), _) => ts.iter().try_for_each(rec),
    }
}

fn is_ident(s: &str) -> bool {
    s.starts_with(|c: char| c.is_alphabetic() || c == '_') && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses a system file. When `host` is given, group sorts must name it and
/// group constants must be its generators.
pub fn parse_system(text: &str, host: Option<&PcPresentation>) -> Result<EquationSystem, ParseError> {
    let mut sys: Option<EquationSystem> = None;
    let mut sort: Option<Sort> = None;
    let err = |line: usize, col: usize, message: String| ParseError { line, col, message };
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        let indent = content.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let (head, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest_col = indent + head.len() + 2;
        match head {
            "system" => {
                let name = rest.trim();
                if name.is_empty() {
                    return Err(err(line, rest_col, "system needs a name".into()));
                }
                if sys.is_some() {
                    return Err(err(line, 1, "second `system` line".into()));
                }
                sys = Some(EquationSystem::new(name, Sort::RingZ));
            }
            "sort" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let s = match parts[..] {
                    ["group", g] => {
                        if let Some(p) = host {
                            if p.name() != g {
                                return Err(err(line, rest_col, format!("unknown sort: group `{g}` (host is `{}`)", p.name())));
                            }
                        }
                        Sort::Group(g.into())
                    }
                    ["ring", "Z"] => Sort::RingZ,
                    ["ring", "mod", m] => match m.parse::<BigInt>() {
                        Ok(m) if m > BigInt::one() => Sort::RingMod(m),
                        _ => return Err(err(line, rest_col, format!("bad modulus `{m}`"))),
                    },
                    _ => return Err(err(line, rest_col, format!("unknown sort `{}`", rest.trim()))),
                };
                sort = Some(s);
            }
            "var" | "witness" => {
                let Some(s) = sys.as_mut() else { return Err(err(line, 1, "missing `system` line".into())) };
                for v in rest.split_whitespace() {
                    if !is_ident(v) {
                        return Err(err(line, rest_col, format!("bad variable name `{v}`")));
                    }
                    if s.all_vars().any(|w| w == v) {
                        return Err(err(line, rest_col, format!("variable `{v}` declared twice")));
                    }
                    if head == "var" {
                        s.vars.push(v.into());
                    } else {
                        s.witnesses.push(v.into());
                    }
                }
            }
            "eq" => {
                let Some(s) = sys.as_mut() else { return Err(err(line, 1, "missing `system` line".into())) };
                let Some(so) = sort.clone() else { return Err(err(line, 1, "`sort` must precede equations".into())) };
                let toks = tokenize(rest, line, rest_col - 1)?;
                let declared: Vec<String> = s.all_vars().cloned().collect();
                let mut p = Parser { toks, pos: 0, line, end_col: indent + trimmed.chars().count() + 1, vars: &declared };
                let lhs = p.sum()?;
                p.expect('=')?;
                let rhs_col = p.col();
                let rhs = p.sum()?;
                if p.pos < p.toks.len() {
                    return p.err("unexpected input after the equation");
                }
                check_sort(&lhs, &so, host).map_err(|m| err(line, rest_col, m))?;
                check_sort(&rhs, &so, host).map_err(|m| err(line, rhs_col, m))?;
                s.equations.push(Equation::new(lhs, rhs));
            }
            other => return Err(err(line, indent + 1, format!("unknown directive `{other}`"))),
        }
    }
    let mut s = sys.ok_or_else(|| err(1, 1, "missing `system` line".into()))?;
    s.sort = sort.ok_or_else(|| err(1, 1, "missing `sort` line".into()))?;
    Ok(s)
}

fn wrap(s: String, yes: bool) -> String {
    if yes {
        format!("({s})")
    } else {
        s
    }
}

/// Levels: 0 sum, 1 product, 2 unary, 3 power base.
fn print_at(t: &Term, level: u8) -> String {
    match t {
        Term::Int(n) => wrap(n.to_string(), level >= 3 && n.is_negative()),
        Term::Var(v) | Term::Const(v) => v.clone(),
        Term::Add(a, b) => wrap(format!("{} + {}", print_at(a, 0), print_at(b, 1)), level > 0),
        Term::Sub(a, b) => wrap(format!("{} - {}", print_at(a, 0), print_at(b, 1)), level > 0),
        Term::Mul(a, b) => wrap(format!("{}*{}", print_at(a, 1), print_at(b, 2)), level > 1),
        Term::Neg(a) => {
            let inner = match a.as_ref() {
                Term::Int(n) if !n.is_negative() => format!("({n})"),
                _ => print_at(a, 2),
            };
            wrap(format!("-{inner}"), level > 2)
        }
        Term::Pow(a, k) => format!("{}^{k}", print_at(a, 3)),
        Term::Comm(ts) => format!("[{}]", ts.iter().map(|t| print_at(t, 0)).collect::<Vec<_>>().join(",")),
    }
}

pub(crate) fn print_term(t: &Term) -> String {
    print_at(t, 0)
}

pub(crate) fn print_system(s: &EquationSystem) -> String {
    let mut out = format!("system {}\nsort {}\n", s.name, s.sort);
    if !s.vars.is_empty() {
        out.push_str(&format!("var {}\n", s.vars.join(" ")));
    }
    if !s.witnesses.is_empty() {
        out.push_str(&format!("witness {}\n", s.witnesses.join(" ")));
    }
    for e in &s.equations {
        out.push_str(&format!("eq {} = {}\n", print_term(&e.lhs), print_term(&e.rhs)));
    }
    out
}
