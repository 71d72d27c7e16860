//! Parser for bigger-I insertion specifications.
//!
//! A spec is a `;`-separated list of `p=POLY`, `eta=a,b,...` and `order=N`
//! items, e.g. `p=x0; eta=1; order=1`. Polynomials use variables
//! `x0, x1, ...` (one per `eta`, in order), integer or `a/b` constants,
//! `+ - * ^` and parentheses.

use std::str::FromStr;

use ifunc_core::ifunction::{BigISpec, Insertion};
use ifunc_core::poly::{Poly, Q};

pub fn parse_spec(s: &str) -> Result<BigISpec, String> {
    let mut polys = Vec::new();
    let mut characters = Vec::new();
    let mut order = None;
    for item in s.split(';').map(str::trim).filter(|i| !i.is_empty()) {
        let (key, value) = item.split_once('=').ok_or_else(|| format!("expected key=value, got '{}'", item))?;
        match key.trim() {
            "p" => polys.push(value.trim().to_string()),
            "eta" => {
                let v: Result<Vec<i64>, _> = value.split(',').map(|x| x.trim().parse::<i64>()).collect();
                characters.push(v.map_err(|_| format!("cannot parse character '{}'", value.trim()))?);
            }
            "order" => order = Some(value.trim().parse::<u32>().map_err(|_| format!("bad order '{}'", value.trim()))?),
            other => return Err(format!("unknown key '{}' (expected p, eta, order)", other)),
        }
    }
    if characters.is_empty() {
        return Err("at least one eta is required".into());
    }
    let insertions = polys
        .iter()
        .map(|p| parse_polynomial(p, characters.len()).map(|polynomial| Insertion { polynomial }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BigISpec { insertions, characters, t_order: order.unwrap_or(1) })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Var(usize),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(Q::from_str(&text).map_err(|_| format!("bad number '{}'", text))?));
        } else if c == 'x' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Var(text.parse().map_err(|_| "variable x needs an index, e.g. x0".to_string())?));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character '{}' in polynomial", c));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, String> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, String> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly, String> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) if n.is_integer() && n >= Q::from_integer(0.into()) => {
                    self.pos += 1;
                    let k: u32 = n.to_integer().try_into().map_err(|_| "exponent too large".to_string())?;
                    Ok(base.pow(k))
                }
                _ => Err("exponent must be a nonnegative integer".into()),
            }
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<Poly, String> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn atom(&mut self) -> Result<Poly, String> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.nvars, n))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                if i >= self.nvars {
                    return Err(format!("variable x{} has no matching eta ({} given)", i, self.nvars));
                }
                Ok(Poly::var(self.nvars, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(e)
            }
            other => Err(format!("unexpected token {:?}", other)),
        }
    }
}

pub fn parse_polynomial(s: &str, nvars: usize) -> Result<Poly, String> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0, nvars };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input in polynomial '{}'", s));
    }
    Ok(e)
}
