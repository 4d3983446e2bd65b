//! Pratt parser for the expression grammar shared by model and atlas files.
//!
//! ```text
//! expr  := expr ('+' | '-') expr | expr ('*' | '/') expr | expr '^' expr
//!        | '-' expr | '(' expr ')' | func '(' expr ')' | integer | ident
//! func  := sin | cos | exp
//! ```
//!
//! `^` is right associative and its exponent must reduce to an integer
//! constant. Rational literals are written `p/q`.

use num_bigint::BigInt;
use supermech_core::scalar::{ExprTree, Func};
use supermech_core::Rational;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

/// Parsed expression plus every identifier occurrence, for scope checks.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub tree: ExprTree,
    /// (name, line, column), in source order.
    pub idents: Vec<(String, usize, usize)>,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                return Err(ParseError::new(line, col0 + i, "decimal literals are not supported; write p/q"));
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<BigInt>().map_err(|_| ParseError::new(line, col, "bad integer"))?;
            out.push((Tok::Int(n), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else if c == '(' {
            out.push((Tok::LParen, col));
            i += 1;
        } else if c == ')' {
            out.push((Tok::RParen, col));
            i += 1;
        } else {
            return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
        }
    }
    out.push((Tok::End, col0 + chars.len()));
    Ok(out)
}

fn infix_power(op: char) -> (u8, u8) {
    match op {
        '+' | '-' => (10, 11),
        '*' | '/' => (20, 21),
        _ => (31, 30),
    }
}

const PREFIX_MINUS: u8 = 25;

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    fn expr(&mut self, min_bp: u8, idents: &mut Vec<(String, usize, usize)>) -> Result<ExprTree, ParseError> {
        let (tok, col) = self.next();
        let mut lhs = match tok {
            Tok::Int(n) => ExprTree::Num(Rational::from_integer(n)),
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    let f = Func::from_name(&name).ok_or_else(|| {
                        ParseError::new(self.line, col, format!("unknown function `{name}`"))
                    })?;
                    self.next();
                    let arg = self.expr(0, idents)?;
                    self.expect_rparen()?;
                    ExprTree::Call(f, Box::new(arg))
                } else {
                    if Func::from_name(&name).is_some() {
                        return Err(ParseError::new(self.line, col, format!("`{name}` needs an argument")));
                    }
                    idents.push((name.clone(), self.line, col));
                    ExprTree::Var(name)
                }
            }
            Tok::Op('-') => ExprTree::Neg(Box::new(self.expr(PREFIX_MINUS, idents)?)),
            Tok::LParen => {
                let e = self.expr(0, idents)?;
                self.expect_rparen()?;
                e
            }
            Tok::End => return Err(ParseError::new(self.line, col, "unexpected end of expression")),
            t => return Err(ParseError::new(self.line, col, format!("unexpected {}", describe(&t)))),
        };
        loop {
            let op = match self.peek() {
                Tok::Op(c) => *c,
                Tok::End | Tok::RParen => break,
                t => return Err(self.err(format!("expected an operator, found {}", describe(t)))),
            };
            let (l_bp, r_bp) = infix_power(op);
            if l_bp < min_bp {
                break;
            }
            let op_col = self.col();
            self.next();
            let rhs = self.expr(r_bp, idents)?;
            lhs = match op {
                '+' => match lhs {
                    ExprTree::Add(mut xs) => {
                        xs.push(rhs);
                        ExprTree::Add(xs)
                    }
                    l => ExprTree::Add(vec![l, rhs]),
                },
                '-' => ExprTree::Sub(Box::new(lhs), Box::new(rhs)),
                '*' => match lhs {
                    ExprTree::Mul(mut xs) => {
                        xs.push(rhs);
                        ExprTree::Mul(xs)
                    }
                    l => ExprTree::Mul(vec![l, rhs]),
                },
                '/' => ExprTree::Div(Box::new(lhs), Box::new(rhs)),
                _ => {
                    let e = integer_exponent(&rhs)
                        .ok_or_else(|| ParseError::new(self.line, op_col, "exponent must be an integer"))?;
                    ExprTree::Pow(Box::new(lhs), e)
                }
            };
        }
        Ok(lhs)
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::RParen => {
                self.next();
                Ok(())
            }
            t => Err(self.err(format!("expected `)`, found {}", describe(t)))),
        }
    }
}

fn integer_exponent(t: &ExprTree) -> Option<i64> {
    match t {
        ExprTree::Num(c) if c.is_integer() => i64::try_from(c.to_integer()).ok(),
        ExprTree::Neg(a) => integer_exponent(a).map(|e| -e),
        _ => {
            let c = t.normalize().ok()?.as_rational()?;
            if c.is_integer() {
                i64::try_from(c.to_integer()).ok()
            } else {
                None
            }
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses `src`, which sits on `line` starting at column `col0` (1-based),
/// so that errors point into the enclosing file.
pub fn parse_at(src: &str, line: usize, col0: usize) -> Result<Parsed, ParseError> {
    let mut lx = Lexer {
        toks: lex(src, line, col0)?,
        pos: 0,
        line,
    };
    let mut idents = Vec::new();
    let tree = lx.expr(0, &mut idents)?;
    if *lx.peek() != Tok::End {
        return Err(lx.err(format!("unexpected {}", describe(lx.peek()))));
    }
    Ok(Parsed { tree, idents })
}

pub fn parse(src: &str) -> Result<Parsed, ParseError> {
    parse_at(src, 1, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use supermech_core::scalar::rational;
    use supermech_core::ScalarExpr;

    fn norm(s: &str) -> ScalarExpr {
        parse(s).unwrap().tree.normalize().unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(norm("1 + 2 * 3"), ScalarExpr::from_int(7));
        assert_eq!(norm("2 ^ 3 ^ 2"), ScalarExpr::from_int(512));
        assert_eq!(norm("-2 ^ 2"), ScalarExpr::from_int(-4));
        assert_eq!(norm("8 / 4 / 2"), ScalarExpr::from_int(1));
        assert_eq!(norm("1 - 2 - 3"), ScalarExpr::from_int(-4));
        assert_eq!(norm("3/6 - 1/2"), ScalarExpr::zero());
        assert_eq!(norm("q^-1 * q"), ScalarExpr::one());
    }

    #[test]
    fn spec_examples() {
        assert_eq!(norm("q + q"), norm("2*q"));
        assert_eq!(norm("q*(q + 1) - q^2"), norm("q"));
        assert!(norm("sin(q)*0").is_zero());
        assert_eq!(norm("1/2"), ScalarExpr::from_rational(rational(1, 2)));
    }

    #[test]
    fn identifiers_are_recorded_with_columns() {
        let p = parse_at("v1*z1 + sin(q1)", 3, 12).unwrap();
        let names: Vec<_> = p.idents.iter().map(|(n, l, c)| (n.as_str(), *l, *c)).collect();
        assert_eq!(names, [("v1", 3, 12), ("z1", 3, 15), ("q1", 3, 24)]);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("1 + ").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse("q ^ q").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(parse("tan(q)").unwrap_err().message.contains("unknown function"));
        assert!(parse("(q").is_err());
        assert!(parse("q q").is_err());
        assert!(parse("1.5").is_err());
        assert!(parse("q $").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn printed_form_reparses() {
        for s in ["1/2*v1^2 + 1/2*z1*z2", "-(q + 1)^2", "exp(-q)/(1 + q^2)", "q^-2"] {
            let e = norm(s);
            assert_eq!(norm(&e.to_string()), e, "{s} printed as {e}");
        }
    }
}
