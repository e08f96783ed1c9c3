//! Parsing and canonical serialization of cubic forms.
//!
//! Two input formats are accepted:
//!
//! * a polynomial expression such as `x1^3 + 3*x1^2*x2 - 2*x3^3`, where each
//!   term is `[sign] [int '*'] x<idx> ('^' exp)?` factors joined by `*` and
//!   must have total degree exactly 3;
//! * a JSON document `{"n": 2, "monomials": [{"exps": [3,0], "coef": 1}, …]}`
//!   with explicit variable count and exponent vectors summing to 3.
//!
//! Variables are 1-based in the textual syntax (`x1`, `x2`, …). Repeated
//! monomials are summed. Canonical output sorts monomials by ascending index
//! triple, so serialization round-trips bit-exactly.

use serde::{Deserialize, Serialize};

use super::CubicForm;
use crate::error::{Error, Result};

/// Structured (JSON) representation: explicit `n` plus monomial list.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FormDocument {
    pub n: usize,
    pub monomials: Vec<MonomialEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonomialEntry {
    pub exps: Vec<u32>,
    pub coef: i64,
}

/// Parse either accepted format: a leading `{` selects the JSON document.
pub fn parse_form(input: &str) -> Result<CubicForm> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        let doc: FormDocument = serde_json::from_str(trimmed).map_err(|e| Error::Parse {
            pos: e.column().saturating_sub(1),
            msg: format!("document: {}", e),
        })?;
        CubicForm::from_document(&doc)
    } else {
        parse_expression(input)
    }
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(b) = self.peek() {
            if !b.is_ascii_digit() {
                break;
            }
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as u64))
                .ok_or_else(|| Error::Parse {
                    pos: start,
                    msg: "integer literal too large".into(),
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        Ok(v)
    }
}

/// Parse the textual grammar. The variable count is inferred from the
/// largest index used. The single token `0` denotes the zero form (n = 0).
pub fn parse_expression(src: &str) -> Result<CubicForm> {
    if src.trim() == "0" {
        return CubicForm::from_monomials(0, &[]);
    }
    let mut sc = Scanner::new(src);
    let mut monomials: Vec<([usize; 3], i64)> = Vec::new();
    let mut n = 0usize;
    sc.skip_ws();
    if sc.peek().is_none() {
        return Err(sc.err("empty input"));
    }
    let mut first = true;
    loop {
        sc.skip_ws();
        // Term separator / leading sign.
        let mut negative = false;
        match sc.peek() {
            Some(b'+') => {
                sc.bump();
            }
            Some(b'-') => {
                negative = true;
                sc.bump();
            }
            Some(_) if first => {}
            Some(_) => return Err(sc.err("expected '+' or '-' between terms")),
            None => break,
        }
        first = false;
        sc.skip_ws();
        let term_start = sc.pos;
        // Optional integer coefficient, which must be followed by '*'.
        let mut coef: i64 = 1;
        if matches!(sc.peek(), Some(b) if b.is_ascii_digit()) {
            let raw = sc.integer()?;
            if raw > i64::MAX as u64 {
                return Err(Error::Parse {
                    pos: term_start,
                    msg: "coefficient too large".into(),
                });
            }
            coef = raw as i64;
            sc.skip_ws();
            match sc.bump() {
                Some(b'*') => {}
                _ => {
                    return Err(Error::Parse {
                        pos: sc.pos.saturating_sub(1),
                        msg: "expected '*' between coefficient and variable".into(),
                    })
                }
            }
            sc.skip_ws();
        }
        if negative {
            coef = -coef;
        }
        // Variable factors.
        let mut exps: Vec<(usize, u32)> = Vec::new();
        let mut degree: u32 = 0;
        loop {
            match sc.bump() {
                Some(b'x') => {}
                _ => {
                    return Err(Error::Parse {
                        pos: sc.pos.saturating_sub(1),
                        msg: "expected a variable like x1".into(),
                    })
                }
            }
            let idx_pos = sc.pos;
            let idx = sc.integer()? as usize;
            if idx == 0 {
                return Err(Error::Parse {
                    pos: idx_pos,
                    msg: "variable indices start at x1".into(),
                });
            }
            let mut exp: u32 = 1;
            sc.skip_ws();
            if sc.peek() == Some(b'^') {
                sc.bump();
                sc.skip_ws();
                let exp_pos = sc.pos;
                let e = sc.integer()?;
                if !(1..=3).contains(&e) {
                    return Err(Error::Parse {
                        pos: exp_pos,
                        msg: "exponent must be between 1 and 3".into(),
                    });
                }
                exp = e as u32;
            }
            match exps.iter_mut().find(|(i, _)| *i == idx) {
                Some((_, e)) => *e += exp,
                None => exps.push((idx, exp)),
            }
            degree += exp;
            n = n.max(idx);
            sc.skip_ws();
            if sc.peek() == Some(b'*') {
                sc.bump();
                sc.skip_ws();
                continue;
            }
            break;
        }
        if degree != 3 {
            return Err(Error::Degree { pos: term_start, degree });
        }
        // Flatten the exps into a sorted index triple (0-based).
        let mut triple = Vec::with_capacity(3);
        for (idx, e) in exps {
            for _ in 0..e {
                triple.push(idx - 1);
            }
        }
        triple.sort_unstable();
        monomials.push(([triple[0], triple[1], triple[2]], coef));
        sc.skip_ws();
        if sc.peek().is_none() {
            break;
        }
    }
    CubicForm::from_monomials(n, &monomials)
}

/// Canonical text rendering: monomials in ascending index-triple order,
/// unit coefficients elided, exponents grouped (`x1^2*x2`).
pub fn to_text(form: &CubicForm) -> String {
    let mut out = String::new();
    for (triple, coef) in form.monomials() {
        let neg = coef < 0;
        let mag = coef.unsigned_abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if mag != 1 {
            out.push_str(&mag.to_string());
            out.push('*');
        }
        let mut i = 0;
        let mut first_factor = true;
        while i < 3 {
            let var = triple[i];
            let mut e = 1;
            while i + e < 3 && triple[i + e] == var {
                e += 1;
            }
            if !first_factor {
                out.push('*');
            }
            first_factor = false;
            out.push('x');
            out.push_str(&(var + 1).to_string());
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
            i += e;
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical document rendering (monomials in ascending index-triple order).
pub fn to_document(form: &CubicForm) -> FormDocument {
    let n = form.n();
    let monomials = form
        .monomials()
        .map(|(triple, coef)| {
            let mut exps = vec![0u32; n];
            for idx in triple {
                exps[idx] += 1;
            }
            MonomialEntry { exps, coef }
        })
        .collect();
    FormDocument { n, monomials }
}
