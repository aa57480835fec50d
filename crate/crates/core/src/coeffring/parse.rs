//! Textual syntax for rational-function expressions and q-series.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' '-'? digits)?
//! atom   := digits | 't'digits | 'q' | '(' expr ')' | '-' factor
//! ```
//!
//! Variables are `t1..td` plus, where permitted, the series variable `q`.
//! Everything evaluates into a `RatFun`; division is exact. The printers
//! below emit strings this parser round-trips.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::laurent::{t_names, LaurentPoly};
use super::qseries::QSeries;
use super::ratfun::RatFun;
use super::Rat;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Q,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str, d: usize, allow_q: bool) -> Result<Vec<Tok>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &src[start..i];
                let v = lit
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad integer literal {lit:?}")))?;
                toks.push(Tok::Int(v));
            }
            'q' => {
                if !allow_q {
                    return Err(Error::Parse("variable q is not allowed here".into()));
                }
                toks.push(Tok::Q);
                i += 1;
            }
            't' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == start + 1 {
                    return Err(Error::Parse("expected digits after t".into()));
                }
                let idx: usize = src[start + 1..i]
                    .parse()
                    .map_err(|_| Error::Parse("bad variable index".into()))?;
                if idx == 0 || idx > d {
                    return Err(Error::Parse(format!(
                        "variable t{idx} out of range, have t1..t{d}"
                    )));
                }
                toks.push(Tok::Var(idx - 1));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    /// total variables of the produced RatFun values
    nvars: usize,
    /// index of q among the variables, if allowed
    q_index: Option<usize>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<RatFun> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFun> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let mut sign = 1i64;
            if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                sign = -1;
            }
            match self.next() {
                Some(Tok::Int(v)) => {
                    let e: i64 = v
                        .try_into()
                        .map_err(|_| Error::Parse("exponent out of range".into()))?;
                    base.pow(sign * e)
                }
                _ => Err(Error::Parse("expected integer exponent after ^".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatFun> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(RatFun::from_rat(self.nvars, Rat::from_integer(v))),
            Some(Tok::Var(i)) => Ok(RatFun::from_poly(LaurentPoly::var(self.nvars, i))),
            Some(Tok::Q) => {
                let qi = self.q_index.expect("q token implies q allowed");
                Ok(RatFun::from_poly(LaurentPoly::var(self.nvars, qi)))
            }
            Some(Tok::Minus) => Ok(self.factor()?.neg()),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse("missing closing parenthesis".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_with(src: &str, d: usize, allow_q: bool) -> Result<RatFun> {
    let toks = tokenize(src, d, allow_q)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let nvars = d + usize::from(allow_q);
    let mut p = Parser { toks, pos: 0, nvars, q_index: allow_q.then_some(d) };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input after expression at token {}",
            p.pos
        )));
    }
    Ok(out)
}

/// Parses an expression in `t1..td` into a `RatFun` with `d` variables.
pub fn parse_ratfun(src: &str, d: usize) -> Result<RatFun> {
    parse_with(src, d, false)
}

/// Parses an expression in `t1..td` and `q` into a `RatFun` with `d + 1`
/// variables, `q` being the last.
pub fn parse_q_expr(src: &str, d: usize) -> Result<RatFun> {
    parse_with(src, d, true)
}

/// Expands an expression in `t1..td, q` as a power series in `q` up to
/// `q^order`. Fails if the expression has a pole at `q = 0`.
pub fn qseries_from_expr(src: &str, d: usize, order: usize) -> Result<QSeries> {
    let f = parse_q_expr(src, d)?;
    expand_in_q(&f, d, order)
}

/// Splits a Laurent polynomial in `d + 1` variables into q-degree slices,
/// each a polynomial in the first `d` variables.
fn q_slices(p: &LaurentPoly, d: usize) -> BTreeMap<i32, LaurentPoly> {
    let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
    for (e, c) in p.terms() {
        let (ts, q) = (&e[..d], e[d]);
        out.entry(q)
            .or_insert_with(|| LaurentPoly::zero(d))
            .add_term(ts.to_vec(), c.clone());
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Series expansion of a rational function in the final variable `q`.
pub fn expand_in_q(f: &RatFun, d: usize, order: usize) -> Result<QSeries> {
    assert_eq!(f.vars(), d + 1, "expected t1..td plus q");
    if f.is_zero() {
        return Ok(QSeries::zero(d, order));
    }
    let num = q_slices(f.numer(), d);
    let den = q_slices(f.denom(), d);
    let e_n = *num.keys().next().expect("nonzero numerator");
    let e_d = *den.keys().next().expect("nonzero denominator");
    let shift = e_n - e_d;
    if shift < 0 {
        return Err(Error::PoleAtQZero);
    }
    let shift = shift as usize;
    let d0 = RatFun::from_poly(den[&e_d].clone());
    let zero = LaurentPoly::zero(d);
    let mut c: Vec<RatFun> = Vec::new(); // expansion of num/den shifted to start at q^0
    for k in 0..=order.saturating_sub(shift) {
        let nk = num.get(&(e_n + k as i32)).unwrap_or(&zero);
        let mut acc = RatFun::from_poly(nk.clone());
        for j in 1..=k {
            if let Some(dj) = den.get(&(e_d + j as i32)) {
                acc = acc.sub(&RatFun::from_poly(dj.clone()).mul(&c[k - j]));
            }
        }
        c.push(acc.div(&d0)?);
    }
    let mut out = QSeries::zero(d, order);
    for (k, v) in c.into_iter().enumerate() {
        if shift + k <= order {
            out.set_coeff(shift + k, v);
        }
    }
    Ok(out)
}

/// Prints a q-series in the syntax accepted by [`qseries_from_expr`].
pub fn format_qseries(s: &QSeries) -> String {
    let names = t_names(s.vars());
    let mut parts = Vec::new();
    for k in 0..=s.order() {
        let c = s.coeff(k);
        if c.is_zero() {
            continue;
        }
        let body = format!("({})", c.format_with(&names));
        let part = match k {
            0 => body,
            1 => format!("{body}*q"),
            _ => format!("{body}*q^{k}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_quotient_syntax() {
        let f = parse_ratfun("(1 - t1^2)/(1 - t1)", 2).unwrap();
        let g = parse_ratfun("1 + t1", 2).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn parses_negative_powers_and_unary_minus() {
        let f = parse_ratfun("t1^-2 * -t2", 2).unwrap();
        let g = parse_ratfun("-(t2/t1^2)", 2).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_ratfun("t3", 2).is_err());
        assert!(parse_ratfun("1 +", 2).is_err());
        assert!(parse_ratfun("q", 2).is_err());
        assert!(parse_ratfun("(1", 2).is_err());
        assert!(parse_ratfun("1/(t1 - t1)", 2).is_err());
    }

    #[test]
    fn expands_geometric_series_in_q() {
        let s = qseries_from_expr("q/(1 - t1*q)", 1, 5).unwrap();
        assert!(s.coeff(0).is_zero());
        for k in 1..=5 {
            let t = LaurentPoly::var(1, 0).pow(k as u32 - 1);
            assert_eq!(s.coeff(k), &RatFun::from_poly(t), "order {k}");
        }
    }

    #[test]
    fn pole_at_q_zero_is_rejected() {
        assert!(matches!(
            qseries_from_expr("1/q", 1, 3),
            Err(Error::PoleAtQZero)
        ));
    }

    #[test]
    fn print_parse_round_trip() {
        let s = qseries_from_expr("1 + q/(1 - t1) + 3*q^2*t1^-1", 1, 4).unwrap();
        let text = format_qseries(&s);
        // value-faithful: fractions are not reduced by polynomial gcd, so the
        // reparsed series may carry larger representatives of equal values
        let back = qseries_from_expr(&text, 1, 4).unwrap();
        assert_eq!(back, s);
        // parsing the same text twice is byte-deterministic
        let again = qseries_from_expr(&text, 1, 4).unwrap();
        assert_eq!(format_qseries(&back), format_qseries(&again));
    }
}
