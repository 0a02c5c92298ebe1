//! `BASE[x(w1),y(w2)]/(rel1,rel2)` and polynomial expressions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{int, BaseRing, MultiPoly};

/// Pieces of an algebra description before any algebra is built.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct AlgebraSpec {
    pub base: BaseRing,
    pub generators: Vec<(String, u32)>,
    pub relations: Vec<String>,
}

pub(crate) fn parse_algebra(s: &str) -> Result<AlgebraSpec> {
    let s = s.trim();
    let Some(open) = s.find('[') else {
        return Ok(AlgebraSpec {
            base: s.parse()?,
            generators: Vec::new(),
            relations: Vec::new(),
        });
    };
    let base: BaseRing = s[..open].parse()?;
    let close = s[open..]
        .find(']')
        .map(|i| i + open)
        .ok_or_else(|| Error::Parse("missing ']'".into()))?;
    let mut generators = Vec::new();
    for g in split_top(&s[open + 1..close]) {
        let g = g.trim();
        if g.is_empty() {
            continue;
        }
        let (name, weight) = match g.find('(') {
            Some(i) => {
                let w = g[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("bad generator '{g}'")))?;
                let w: u32 = w
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad weight in '{g}'")))?;
                (g[..i].trim(), w)
            }
            None => (g, 1),
        };
        if weight == 0 {
            return Err(Error::Parse(format!("generator '{name}' needs a positive weight")));
        }
        if !is_ident(name) {
            return Err(Error::Parse(format!("bad generator name '{name}'")));
        }
        if generators.iter().any(|(n, _)| n == name) {
            return Err(Error::Parse(format!("duplicate generator '{name}'")));
        }
        generators.push((name.to_string(), weight));
    }
    let rest = s[close + 1..].trim();
    let relations = if rest.is_empty() {
        Vec::new()
    } else {
        let inner = rest
            .strip_prefix('/')
            .map(str::trim)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected '/(relations)', got '{rest}'")))?;
        split_top(inner)
            .into_iter()
            .map(|r| r.trim().to_string())
            .filter(|r| !r.is_empty())
            .collect()
    };
    Ok(AlgebraSpec {
        base,
        generators,
        relations,
    })
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic()) && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Splits on commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut last) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[last..i]);
                last = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[last..]);
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = chars[start..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(format!("number '{t}' too large")))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: BaseRing,
    vars: &'a Arc<[String]>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('('))) {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos) {
                Some(Tok::Num(e)) if *e >= 0 => {
                    let e = *e as u64;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("exponent must be a non-negative integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => Ok(MultiPoly::constant(self.ring, self.vars.clone(), int(n))),
            Some(Tok::Ident(name)) => {
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable '{name}'")))?;
                Ok(MultiPoly::var(self.ring, self.vars.clone(), i))
            }
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an integer-coefficient polynomial expression in `vars`.
pub(crate) fn parse_poly(s: &str, ring: BaseRing, vars: &Arc<[String]>) -> Result<MultiPoly> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
        ring,
        vars,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in '{s}'")));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_grammar() {
        let a = parse_algebra("Q[x(2), y(3)]/(y^2 - x^3)").unwrap();
        assert_eq!(a.base, BaseRing::Rationals);
        assert_eq!(a.generators, vec![("x".to_string(), 2), ("y".to_string(), 3)]);
        assert_eq!(a.relations, vec!["y^2 - x^3".to_string()]);
        let b = parse_algebra("F_3[x,y]").unwrap();
        assert_eq!(b.generators[1], ("y".to_string(), 1));
        assert!(b.relations.is_empty());
        assert!(parse_algebra("Z").unwrap().generators.is_empty());
        assert!(parse_algebra("Q[x(0)]").is_err());
        assert!(parse_algebra("Q[x,x]").is_err());
    }

    #[test]
    fn polynomial_expressions() {
        let vars: Arc<[String]> = vec!["x".to_string(), "y".to_string()].into();
        let p = parse_poly("(x+y)^2 - 2x*y", BaseRing::Integers, &vars).unwrap();
        let q = parse_poly("x^2 + y^2", BaseRing::Integers, &vars).unwrap();
        assert_eq!(p, q);
        assert_eq!(parse_poly("-x", BaseRing::Integers, &vars).unwrap().to_string(), "-x");
        assert!(parse_poly("z", BaseRing::Integers, &vars).is_err());
        assert!(parse_poly("x)", BaseRing::Integers, &vars).is_err());
    }
}
