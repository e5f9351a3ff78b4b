//! Recursive-descent parser for operator expressions.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := rat | var | '(' expr ')'
//! var    := ('x' | 'd') uint          (1-based, at most m)
//! rat    := ['-'] uint ['/' uint]
//! ```
//!
//! `*` is the noncommutative product, applied left to right; `^` binds
//! tighter than `*`. Operator `Display` output is re-parseable by this
//! grammar, so printing and parsing round-trip.

use std::fmt;

use num_bigint::BigInt;

use weylq_core::{FieldScalar, FieldTag, WeylOp};

/// A parse failure, carrying the byte offset where it was detected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    /// The input deviates from the grammar.
    Syntax { pos: usize, msg: String },
    /// A variable index outside `1..=m`.
    IndexOutOfRange { pos: usize, index: u64, m: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, msg } => {
                write!(f, "syntax error at position {pos}: {msg}")
            }
            ParseError::IndexOutOfRange { pos, index, m } => {
                write!(
                    f,
                    "index out of range at position {pos}: variable index {index} is not in 1..={m}"
                )
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// Parses one operator expression over `A_m` with coefficients in `field`.
pub fn parse_operator(src: &str, m: usize, field: FieldTag) -> Result<WeylOp, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        m,
        field,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    m: usize,
    field: FieldTag,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    /// Next non-whitespace byte without consuming it.
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<WeylOp, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylOp, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<WeylOp, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let digits = self.digits()?;
            let e: u32 = digits
                .parse()
                .map_err(|_| ParseError::Syntax {
                    pos: at,
                    msg: format!("exponent {digits} is too large"),
                })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<WeylOp, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') | Some(b'd') => self.var(),
            Some(c) if c == b'-' || c.is_ascii_digit() => self.rat(),
            _ => Err(self.err(
                "expected a rational, a variable like x1 or d1, or a parenthesized expression",
            )),
        }
    }

    fn var(&mut self) -> Result<WeylOp, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let kind = self.src[self.pos];
        self.pos += 1;
        let digits = self.digits()?;
        let index: u64 = digits.parse().unwrap_or(u64::MAX);
        if index == 0 || index > self.m as u64 {
            return Err(ParseError::IndexOutOfRange {
                pos: at,
                index,
                m: self.m,
            });
        }
        let i = index as usize;
        Ok(match kind {
            b'x' => WeylOp::var_x(i, self.m, self.field),
            _ => WeylOp::var_d(i, self.m, self.field),
        })
    }

    fn rat(&mut self) -> Result<WeylOp, ParseError> {
        self.skip_ws();
        let neg = self.src.get(self.pos) == Some(&b'-');
        if neg {
            self.pos += 1;
        }
        let mut num: BigInt = self.digits()?.parse().expect("digit run parses as integer");
        if neg {
            num = -num;
        }
        let scalar = if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let den: BigInt = self.digits()?.parse().expect("digit run parses as integer");
            FieldScalar::from_ratio(&num, &den, self.field).map_err(|e| ParseError::Syntax {
                pos: at,
                msg: format!("bad denominator: {e}"),
            })?
        } else {
            FieldScalar::from_bigint(&num, self.field)
        };
        Ok(WeylOp::constant(scalar, self.m))
    }

    /// One-or-more ASCII digits, consumed and returned as a slice.
    fn digits(&mut self) -> Result<&str, ParseError> {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("digits are ASCII"))
    }
}
