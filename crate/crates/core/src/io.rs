//! Textual front end: polynomial expression grammar, canonical printing, and
//! the matrix document format.
//!
//! Expression grammar:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*'? factor)*          (juxtaposition multiplies)
//! factor := base ('^' uint)?
//! base   := rational | identifier | '(' expr ')'
//! rational := uint ('/' uint)?
//! ```
//!
//! Matrix documents are JSON: `{"variables": [..], "rows": [[".."]],
//! "meta": {..}?}`. The order of `variables` is semantic: the first entry is
//! the distinguished variable of the quasi weakly linear shape.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::context::{ContextError, VariableContext};
use crate::matrix::{MatrixError, PolyMatrix};
use crate::monomial::MonomialOrder;
use crate::poly::Polynomial;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let pos = i;
        let tok = match c {
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '^' => {
                i += 1;
                Tok::Caret
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '{' => {
                i += 1;
                Tok::LBrace
            }
            '}' => {
                i += 1;
                Tok::RBrace
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                Tok::Int(src[start..i].to_string())
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(src[start..i].to_string())
            }
            other => return err(pos, format!("unexpected character `{other}`")),
        };
        out.push(Token { tok, pos });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    i: usize,
    ctx: &'a Arc<VariableContext>,
    len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.pos).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.i).cloned();
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.try_add(&t).expect("same context");
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.try_sub(&t).expect("same context");
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.try_mul(&f).expect("same context");
                }
                // juxtaposition: `x1 x2` or `2(x1+1)`
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = acc.try_mul(&f).expect("same context");
                }
                Some(Tok::Slash) => {
                    return err(
                        self.pos(),
                        "division is only allowed inside a rational literal `a/b`",
                    );
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.pos();
            match self.bump().map(|t| t.tok) {
                Some(Tok::Int(digits)) => {
                    let e: u32 = digits
                        .parse()
                        .map_err(|_| ParseError {
                            position: pos,
                            message: format!("exponent `{digits}` is out of range"),
                        })?;
                    Ok(base.pow(e))
                }
                _ => err(pos, "expected a non-negative integer exponent after `^`"),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        let pos = self.pos();
        match self.bump().map(|t| t.tok) {
            Some(Tok::Int(digits)) => {
                let numer: BigInt = digits.parse().expect("digits");
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump().map(|t| t.tok) {
                        Some(Tok::Int(den)) => {
                            let denom: BigInt = den.parse().expect("digits");
                            if denom.is_zero() {
                                return err(dpos, "zero denominator in rational literal");
                            }
                            Ok(Polynomial::constant(self.ctx, Rational::new(numer, denom)))
                        }
                        _ => err(dpos, "expected an integer denominator after `/`"),
                    }
                } else {
                    Ok(Polynomial::constant(self.ctx, Rational::from_integer(numer)))
                }
            }
            Some(Tok::Ident(name)) => match self.ctx.index_of(&name) {
                Some(i) => Ok(Polynomial::variable(self.ctx, i).expect("index in range")),
                None => err(pos, format!("unknown identifier `{name}`")),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump().map(|t| t.tok) {
                    Some(Tok::RParen) => Ok(inner),
                    _ => err(self.len, "unclosed parenthesis"),
                }
            }
            Some(other) => err(pos, format!("unexpected token {other:?}")),
            None => err(pos, "unexpected end of expression"),
        }
    }
}

/// Parses one polynomial expression against a fixed context.
pub fn parse_poly(src: &str, ctx: &Arc<VariableContext>) -> Result<Polynomial, ParseError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return err(0, "empty expression");
    }
    let mut p = Parser {
        toks,
        i: 0,
        ctx,
        len: src.len(),
    };
    let poly = p.expr()?;
    if p.i != p.toks.len() {
        return err(p.pos(), "trailing input after expression");
    }
    Ok(poly)
}

fn fmt_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_monomial(ctx: &VariableContext, exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        if e == 1 {
            parts.push(ctx.name(i).unwrap().to_string());
        } else if e > 1 {
            parts.push(format!("{}^{}", ctx.name(i).unwrap(), e));
        }
    }
    parts.join("*")
}

/// Deterministic printer: terms descending under `order`, canonical signs,
/// `^` exponents, `*` separators. `parse_poly(print_poly(f)) == f`.
pub fn print_poly(f: &Polynomial, order: MonomialOrder) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let ctx = f.context();
    let mut out = String::new();
    for (idx, (m, c)) in f.sorted_terms(order).into_iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mono = fmt_monomial(ctx, m.exponents());
        if mono.is_empty() {
            out.push_str(&fmt_rat(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&fmt_rat(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

/// JSON schema for matrices on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub variables: Vec<String>,
    pub rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Map<String, serde_json::Value>>,
}

#[derive(Debug)]
pub enum DocumentError {
    Json(serde_json::Error),
    Context(ContextError),
    EmptyMatrix,
    RaggedRow { row: usize, expected: usize, got: usize },
    Expr { row: usize, col: usize, source: ParseError },
    Matrix(MatrixError),
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocumentError::Json(e) => write!(f, "malformed matrix document: {e}"),
            DocumentError::Context(e) => write!(f, "bad variable list: {e}"),
            DocumentError::EmptyMatrix => write!(f, "matrix document has no rows or no columns"),
            DocumentError::RaggedRow { row, expected, got } => {
                write!(f, "row {row} has {got} entries, expected {expected}")
            }
            DocumentError::Expr { row, col, source } => {
                write!(f, "entry ({row},{col}): {source}")
            }
            DocumentError::Matrix(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DocumentError {}

/// Parses a matrix document (UTF-8 JSON bytes) into a matrix.
pub fn read_matrix(doc: &[u8]) -> Result<PolyMatrix, DocumentError> {
    let doc: MatrixDocument = serde_json::from_slice(doc).map_err(DocumentError::Json)?;
    let ctx = VariableContext::new(doc.variables.iter().cloned()).map_err(DocumentError::Context)?;
    if doc.rows.is_empty() || doc.rows[0].is_empty() {
        return Err(DocumentError::EmptyMatrix);
    }
    let cols = doc.rows[0].len();
    let mut entries = Vec::with_capacity(doc.rows.len() * cols);
    for (r, row) in doc.rows.iter().enumerate() {
        if row.len() != cols {
            return Err(DocumentError::RaggedRow {
                row: r,
                expected: cols,
                got: row.len(),
            });
        }
        for (c, src) in row.iter().enumerate() {
            let p = parse_poly(src, &ctx)
                .map_err(|source| DocumentError::Expr { row: r, col: c, source })?;
            entries.push(p);
        }
    }
    PolyMatrix::new(&ctx, doc.rows.len(), cols, entries).map_err(DocumentError::Matrix)
}

/// Canonical serialization: entries printed under grevlex, two-space JSON
/// indent. `write(read(write(read(doc))))` is byte-identical to
/// `write(read(doc))`.
pub fn write_matrix(m: &PolyMatrix) -> Vec<u8> {
    let doc = MatrixDocument {
        variables: m.context().names().to_vec(),
        rows: (0..m.rows())
            .map(|r| {
                (0..m.cols())
                    .map(|c| print_poly(m.entry(r, c), MonomialOrder::GrevLex))
                    .collect()
            })
            .collect(),
        meta: None,
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("document serializes");
    bytes.push(b'\n');
    bytes
}

/// Collects every identifier appearing in the sources and builds a context
/// with human-friendly ordering (`x1 < x2 < x10`). Used by the CLI commands
/// that take bare expressions instead of matrix documents.
pub fn infer_context(sources: &[&str]) -> Result<Arc<VariableContext>, ParseError> {
    let mut names: Vec<String> = Vec::new();
    for src in sources {
        for t in tokenize(src)? {
            if let Tok::Ident(name) = t.tok {
                if !names.contains(&name) {
                    names.push(name);
                }
            }
        }
    }
    names.sort_by(|a, b| split_numeric(a).cmp(&split_numeric(b)));
    VariableContext::new(names).map_err(|e| ParseError {
        position: 0,
        message: e.to_string(),
    })
}

fn split_numeric(s: &str) -> (String, Option<u64>, String) {
    let digits_at = s
        .rfind(|c: char| !c.is_ascii_digit())
        .map(|i| i + 1)
        .unwrap_or(0);
    let (prefix, digits) = s.split_at(digits_at);
    (prefix.to_string(), digits.parse().ok(), s.to_string())
}

/// Parses `{p1, p2, ...}` (or a single bare expression) against `ctx`.
pub fn parse_poly_set(src: &str, ctx: &Arc<VariableContext>) -> Result<Vec<Polynomial>, ParseError> {
    let trimmed = src.trim();
    let inner = match trimmed.strip_prefix('{') {
        Some(rest) => match rest.strip_suffix('}') {
            Some(inner) => inner,
            None => return err(src.len(), "unclosed `{` in polynomial set"),
        },
        None => trimmed,
    };
    inner
        .split(',')
        .map(|piece| parse_poly(piece, ctx))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn ctx() -> Arc<VariableContext> {
        VariableContext::new(["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn parses_example_entry() {
        // the a22 entry of the golden 3x3 fixture
        let c = ctx();
        let f = parse_poly("x1*x2 - x1 + x2 - x2^2 - 4*x1*x2^3", &c).unwrap();
        assert_eq!(f.term_count(), 5);
        assert_eq!(f.degree_in(1).unwrap(), 3);
        assert_eq!(
            f.evaluate(&[rat_int(1), rat_int(1), rat_int(0)]).unwrap(),
            rat_int(-4)
        );
    }

    #[test]
    fn parses_zero_and_juxtaposition() {
        let c = ctx();
        assert!(parse_poly("0", &c).unwrap().is_zero());
        let a = parse_poly("x1 x2", &c).unwrap();
        let b = parse_poly("x1*x2", &c).unwrap();
        assert_eq!(a, b);
        let d = parse_poly("2(x1 + 1)", &c).unwrap();
        let e = parse_poly("2*x1 + 2", &c).unwrap();
        assert_eq!(d, e);
    }

    #[test]
    fn parses_rationals_and_signs() {
        let c = ctx();
        let f = parse_poly("-4*x2^2", &c).unwrap();
        assert_eq!(f.leading_coefficient(MonomialOrder::GrevLex), Some(&rat_int(-4)));
        let g = parse_poly("1/2*x1 - 3/4", &c).unwrap();
        assert_eq!(g.term_count(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        let c = ctx();
        assert!(parse_poly("y1 + 1", &c).is_err());
        assert!(parse_poly("x1^x2", &c).is_err());
        assert!(parse_poly("x1/2", &c).is_err());
        assert!(parse_poly("1/0", &c).is_err());
        assert!(parse_poly("(x1", &c).is_err());
        assert!(parse_poly("", &c).is_err());
        let e = parse_poly("x1 + $", &c).unwrap_err();
        assert_eq!(e.position, 5);
    }

    #[test]
    fn print_matches_grammar() {
        let c = ctx();
        let f = parse_poly("(x1 - x2) * (x2 - 1)", &c).unwrap();
        assert_eq!(print_poly(&f, MonomialOrder::Lex), "x1*x2 - x1 - x2^2 + x2");
        assert_eq!(print_poly(&Polynomial::zero(&c), MonomialOrder::Lex), "0");
    }

    #[test]
    fn expansion_has_twelve_terms() {
        let c = ctx();
        let f = parse_poly("(x1 - x2)^2 * (x2 - 1)^3", &c).unwrap();
        assert_eq!(f.term_count(), 12);
        assert_eq!(f.total_degree(), 5);
        let roundtrip = parse_poly(&print_poly(&f, MonomialOrder::Lex), &c).unwrap();
        assert_eq!(roundtrip, f);
    }

    #[test]
    fn matrix_document_roundtrip() {
        let doc = br#"{"variables": ["x1", "x2"], "rows": [["x1", "0"], ["0", "x2"]]}"#;
        let m = read_matrix(doc).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        let once = write_matrix(&m);
        let twice = write_matrix(&read_matrix(&once).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn matrix_document_errors_carry_coordinates() {
        let ragged = br#"{"variables": ["x1"], "rows": [["x1"], ["x1", "x1"]]}"#;
        match read_matrix(ragged) {
            Err(DocumentError::RaggedRow { row: 1, .. }) => {}
            other => panic!("expected ragged-row error, got {other:?}"),
        }
        let badexpr = br#"{"variables": ["x1"], "rows": [["x1"], ["zz"]]}"#;
        match read_matrix(badexpr) {
            Err(DocumentError::Expr { row: 1, col: 0, .. }) => {}
            other => panic!("expected expression error, got {other:?}"),
        }
        let single = br#"{"variables": [], "rows": [["0"]]}"#;
        let m = read_matrix(single).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
    }

    #[test]
    fn inferred_context_orders_numerically() {
        let c = infer_context(&["x10 + x2", "x1"]).unwrap();
        assert_eq!(c.names(), ["x1", "x2", "x10"]);
    }

    #[test]
    fn poly_set_syntax() {
        let c = ctx();
        let set = parse_poly_set("{x1, 1 - x1}", &c).unwrap();
        assert_eq!(set.len(), 2);
        let single = parse_poly_set("x1 + x2", &c).unwrap();
        assert_eq!(single.len(), 1);
    }
}
