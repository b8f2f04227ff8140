//! Potential expressions in one variable `x`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    = term    { ("+" | "-") term }
//! term    = unary   { ("*" | "/") unary }
//! unary   = "-" unary | power
//! power   = primary [ "^" unary ]          (right-associative)
//! primary = number | "x" | func "(" expr ")" | "(" expr ")"
//! func    = exp | sin | cos | tanh | abs | sqrt
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown function '{name}' at offset {position}")]
    UnknownFunction { name: String, position: usize },
    #[error("unknown identifier '{name}' at offset {position}")]
    UnknownIdentifier { name: String, position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownFunction { position, .. }
            | ParseError::UnknownIdentifier { position, .. } => *position,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Tanh,
    Abs,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Exp, Func::Sin, Func::Cos, Func::Tanh, Func::Abs, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Exp => v.exp(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Tanh => v.tanh(),
            Func::Abs => v.abs(),
            Func::Sqrt => v.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialExpr {
    Num(f64),
    X,
    Neg(Box<PotentialExpr>),
    Binary(BinOp, Box<PotentialExpr>, Box<PotentialExpr>),
    Call(Func, Box<PotentialExpr>),
}

impl PotentialExpr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PotentialExpr::Num(v) => *v,
            PotentialExpr::X => x,
            PotentialExpr::Neg(e) => -e.eval(x),
            PotentialExpr::Call(f, e) => f.apply(e.eval(x)),
            PotentialExpr::Binary(op, l, r) => {
                let (a, b) = (l.eval(x), r.eval(x));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => power(a, b),
                }
            }
        }
    }
}

// Integer exponents go through powi so that (-x)^k and x^k agree bitwise.
fn power(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= f64::from(i32::MAX) {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

/// Fully parenthesized; re-parses to an expression with identical values.
impl fmt::Display for PotentialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialExpr::Num(v) if v.is_sign_negative() => write!(f, "(-{:?})", -v),
            PotentialExpr::Num(v) => write!(f, "{v:?}"),
            PotentialExpr::X => f.write_str("x"),
            PotentialExpr::Neg(e) => write!(f, "(-{e})"),
            PotentialExpr::Call(func, e) => write!(f, "{}({e})", func.name()),
            PotentialExpr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
        }
    }
}

impl FromStr for PotentialExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_potential(s)
    }
}

pub fn parse_potential(text: &str) -> Result<PotentialExpr, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    match parser.peek() {
        (Token::End, _) => Ok(expr),
        (tok, position) => Err(ParseError::Syntax {
            position,
            message: format!("unexpected {}", tok.describe()),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(v) => format!("number {v}"),
            Token::Ident(name) => format!("identifier '{name}'"),
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::Slash => "'/'".into(),
            Token::Caret => "'^'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let single = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            i += 1;
        } else if b.is_ascii_digit() || b == b'.' {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                } else {
                    return Err(ParseError::Syntax {
                        position: i,
                        message: "malformed exponent".into(),
                    });
                }
            }
            let literal = &text[start..i];
            let value = literal.parse::<f64>().map_err(|_| ParseError::Syntax {
                position: start,
                message: format!("malformed number '{literal}'"),
            })?;
            out.push((Token::Number(value), start));
        } else if b.is_ascii_alphabetic() || b == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Token::Ident(text[start..i].to_string()), start));
        } else {
            let ch = text[start..].chars().next().unwrap_or('?');
            return Err(ParseError::Syntax {
                position: start,
                message: format!("unexpected character '{ch}'"),
            });
        }
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> (Token, usize) {
        self.tokens[self.pos].clone()
    }

    fn bump(&mut self) -> (Token, usize) {
        let tok = self.peek();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        let (tok, position) = self.bump();
        if tok == want {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                position,
                message: format!("expected {}, found {}", want.describe(), tok.describe()),
            })
        }
    }

    fn expr(&mut self) -> Result<PotentialExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().0 {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = PotentialExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<PotentialExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().0 {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = PotentialExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<PotentialExpr, ParseError> {
        if self.peek().0 == Token::Minus {
            self.bump();
            return Ok(PotentialExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<PotentialExpr, ParseError> {
        let base = self.primary()?;
        if self.peek().0 == Token::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(PotentialExpr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<PotentialExpr, ParseError> {
        let (tok, position) = self.bump();
        match tok {
            Token::Number(v) => Ok(PotentialExpr::Num(v)),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Token::Ident(name) if name == "x" => Ok(PotentialExpr::X),
            Token::Ident(name) => {
                let called = self.peek().0 == Token::LParen;
                match (Func::from_name(&name), called) {
                    (Some(func), true) => {
                        self.bump();
                        let arg = self.expr()?;
                        self.expect(Token::RParen)?;
                        Ok(PotentialExpr::Call(func, Box::new(arg)))
                    }
                    (Some(_), false) => Err(ParseError::Syntax {
                        position: self.peek().1,
                        message: format!("expected '(' after function '{name}'"),
                    }),
                    (None, true) => Err(ParseError::UnknownFunction { name, position }),
                    (None, false) => Err(ParseError::UnknownIdentifier { name, position }),
                }
            }
            other => Err(ParseError::Syntax {
                position,
                message: format!("unexpected {}", other.describe()),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(text: &str, x: f64) -> f64 {
        parse_potential(text).unwrap().eval(x)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(eval("0.5*x^2", 2.0), 2.0);
        assert_eq!(eval("x^4 - 2*x^2 + 0.3*x", 0.0), 0.0);
        assert_eq!(
            parse_potential("2*+x"),
            Err(ParseError::Syntax {
                position: 2,
                message: "unexpected '+'".into()
            })
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("2^3^2", 0.0), 512.0);
        assert_eq!(eval("-x^2", 3.0), -9.0);
        assert_eq!(eval("(-x)^2", 3.0), 9.0);
        assert_eq!(eval("2^-1", 0.0), 0.5);
        assert_eq!(eval("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(eval("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(eval("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(eval("--x", 2.0), 2.0);
        assert_eq!(eval("2*-x", 2.0), -4.0);
        assert_eq!(eval("1.5e1 + .5", 0.0), 15.5);
        assert_eq!(eval("2.5E-1", 0.0), 0.25);
    }

    #[test]
    fn functions() {
        assert_eq!(eval("exp(0)", 0.0), 1.0);
        assert_eq!(eval("sqrt(x)", 9.0), 3.0);
        assert_eq!(eval("abs(x)", -2.5), 2.5);
        assert_eq!(eval("tanh(0) + sin(0) + cos(0)", 0.0), 1.0);
        assert_eq!(eval("-1/cos(x)^2", 0.0), -1.0);
    }

    #[test]
    fn error_kinds_and_positions() {
        assert_eq!(
            parse_potential("1 + foo(x)"),
            Err(ParseError::UnknownFunction {
                name: "foo".into(),
                position: 4
            })
        );
        assert_eq!(
            parse_potential("x*y"),
            Err(ParseError::UnknownIdentifier {
                name: "y".into(),
                position: 2
            })
        );
        assert_eq!(parse_potential("").unwrap_err().position(), 0);
        assert_eq!(parse_potential("(x + 1").unwrap_err().position(), 6);
        assert_eq!(parse_potential("x 2").unwrap_err().position(), 2);
        assert_eq!(parse_potential("sin x").unwrap_err().position(), 4);
        assert_eq!(parse_potential("3e+").unwrap_err().position(), 1);
        assert_eq!(parse_potential("x # 2").unwrap_err().position(), 2);
        assert_eq!(parse_potential("1..2").unwrap_err().position(), 2);
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "x^4 - 2*x^2 + 0.3*x",
            "-x^2",
            "exp(-x^2/2) * cos(3*x)",
            "2^3^2",
            "1e-7*abs(x)",
        ] {
            let e = parse_potential(text).unwrap();
            let again = parse_potential(&e.to_string()).unwrap();
            assert_eq!(e, again, "{text} -> {e}");
        }
    }
}
