//! Polynomial text parser.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! poly   ::= term (('+'|'-') term)*
//! term   ::= [sign] coeff? ('*'? factor)*
//! factor ::= var ('^' uint)?
//! coeff  ::= int | int '/' uint
//! ```
//!
//! Variables come from the supplied table; odd variables are accepted
//! anywhere in a term and normalized with Koszul signs by the polynomial
//! layer. The canonical printer in [`crate::poly`] round-trips with this
//! parser.

use crate::monomial::Vars;
use crate::poly::SuperPolynomial;
use crate::scalar::Scalar;
use num::{BigInt, One};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { offset: usize, name: String },
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn take_uint(&mut self) -> Option<(usize, BigInt)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).ok()?;
        Some((start, s.parse().ok()?))
    }

    /// Longest-match variable name: letters, digits, `_`, and an optional
    /// leading `-` after `eta` (for `eta-1`).
    fn take_name(&mut self, vars: &Vars) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        let mut end = self.pos;
        while end < self.text.len() {
            let c = self.text[end];
            let ok = c.is_ascii_alphanumeric()
                || c == b'_'
                || (c == b'-' && end == start + 3 && &self.text[start..end] == b"eta");
            if !ok {
                break;
            }
            end += 1;
        }
        if end == start {
            return None;
        }
        // longest prefix that is a declared variable
        let full = std::str::from_utf8(&self.text[start..end]).ok()?;
        let mut best: Option<&str> = None;
        for len in (1..=full.len()).rev() {
            let cand = &full[..len];
            if vars.even_index(cand).is_some() || vars.odd_index(cand).is_some() {
                best = Some(cand);
                break;
            }
        }
        match best {
            Some(name) => {
                self.pos = start + name.len();
                Some((start, name.to_string()))
            }
            None => {
                self.pos = end;
                Some((start, full.to_string()))
            }
        }
    }
}

/// Parses `text` against the variable table.
pub fn parse_polynomial(text: &str, vars: &Vars) -> Result<SuperPolynomial, ParseError> {
    let mut cur = Cursor { text: text.as_bytes(), pos: 0 };
    let mut result = SuperPolynomial::zero();
    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.pos >= cur.text.len() {
            if first {
                return Err(ParseError::Syntax { offset: 0, message: "empty input".into() });
            }
            break;
        }
        let mut sign = Scalar::one();
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
            }
            Some(b'-') => {
                cur.bump();
                sign = -sign;
            }
            _ if first => {}
            Some(c) => {
                return Err(ParseError::Syntax {
                    offset: cur.pos,
                    message: format!("expected `+` or `-`, found `{}`", c as char),
                });
            }
            None => break,
        }
        let term = parse_term(&mut cur, vars)?;
        result = &result + &term.scale(&sign);
        first = false;
    }
    Ok(result)
}

fn parse_term(cur: &mut Cursor, vars: &Vars) -> Result<SuperPolynomial, ParseError> {
    let n = vars.num_even();
    let mut acc = SuperPolynomial::one(n);
    let mut saw_factor = false;

    // optional leading rational coefficient
    if let Some(c) = cur.peek() {
        if c.is_ascii_digit() {
            let (_, numer) = cur.take_uint().unwrap();
            let coeff = if cur.peek() == Some(b'/') {
                cur.bump();
                let (off, denom) = cur.take_uint().ok_or_else(|| ParseError::Syntax {
                    offset: cur.pos,
                    message: "expected denominator".into(),
                })?;
                if denom == BigInt::from(0) {
                    return Err(ParseError::Syntax { offset: off, message: "zero denominator".into() });
                }
                Scalar::new(numer, denom)
            } else {
                Scalar::from_integer(numer)
            };
            acc = acc.scale(&coeff);
            saw_factor = true;
        }
    }

    loop {
        match cur.peek() {
            Some(b'*') => {
                cur.bump();
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {}
            _ => break,
        }
        cur.skip_ws();
        let Some((offset, name)) = cur.take_name(vars) else {
            return Err(ParseError::Syntax { offset: cur.pos, message: "expected variable".into() });
        };
        let base = if let Some(idx) = vars.even_index(&name) {
            SuperPolynomial::even_var(n, idx)
        } else if let Some(idx) = vars.odd_index(&name) {
            SuperPolynomial::odd_var(n, idx)
        } else {
            return Err(ParseError::UnknownVariable { offset, name });
        };
        let exp = if cur.peek() == Some(b'^') {
            cur.bump();
            let (_, e) = cur.take_uint().ok_or_else(|| ParseError::Syntax {
                offset: cur.pos,
                message: "expected exponent".into(),
            })?;
            u32::try_from(e).map_err(|_| ParseError::Syntax {
                offset: cur.pos,
                message: "exponent too large".into(),
            })?
        } else {
            1
        };
        acc = &acc * &base.pow(exp);
        saw_factor = true;
    }

    if !saw_factor {
        return Err(ParseError::Syntax { offset: cur.pos, message: "expected term".into() });
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn fermat_cubic() {
        let vars = Vars::hypersurface(2, 3);
        let p = parse_polynomial("x0^3+x1^3+x2^3", &vars).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.display(&vars), "x0^3 + x1^3 + x2^3");
    }

    #[test]
    fn rational_coefficient() {
        let vars = Vars::generic(&["x"]);
        let p = parse_polynomial("-1/2*x^2", &vars).unwrap();
        assert_eq!(p.display(&vars), "-1/2*x^2");
        let m = p.terms().next().unwrap();
        assert_eq!(m.1, &ratio(-1, 2));
    }

    #[test]
    fn even_odd_commute() {
        let vars = Vars::hypersurface(2, 3);
        let p = parse_polynomial("y*eta0 - eta0*y", &vars).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn eta_minus_one_name() {
        let vars = Vars::hypersurface(2, 3);
        let p = parse_polynomial("y*eta-1", &vars).unwrap();
        assert_eq!(p.display(&vars), "y*eta-1");
        // `-` only binds inside `eta-1`; elsewhere it separates terms
        let q = parse_polynomial("x0-1", &vars).unwrap();
        assert_eq!(q.display(&vars), "x0 - 1");
    }

    #[test]
    fn unknown_variable_reported() {
        let vars = Vars::generic(&["x"]);
        match parse_polynomial("x + zq", &vars) {
            Err(ParseError::UnknownVariable { name, .. }) => assert_eq!(name, "zq"),
            other => panic!("expected unknown variable, got {other:?}"),
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let vars = Vars::hypersurface(2, 4);
        for text in ["x0^3*x1 - 2*y*x2^2 + 1/3", "y^2*x0*eta-1*eta2 - eta0*eta1"] {
            let p = parse_polynomial(text, &vars).unwrap();
            let printed = p.display(&vars);
            let q = parse_polynomial(&printed, &vars).unwrap();
            assert_eq!(p, q, "round trip failed for {text} -> {printed}");
        }
    }
}
