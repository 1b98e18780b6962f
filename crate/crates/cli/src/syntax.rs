//! Lexer and precedence-climbing parser for calculator expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := integer | 'w' | 'eps0' | '(' expr ')' | cut | name '(' args ')'
//! cut     := '{' [expr (',' expr)*] '|' [expr (',' expr)*] '}'
//! ```

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    D,
    Root,
}

impl Func {
    fn arity(self) -> usize {
        match self {
            Func::Root => 2,
            _ => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::D => "d",
            Func::Root => "root",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Omega,
    Eps0,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
    Cut(Vec<Expr>, Vec<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[Expr]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Omega => write!(f, "w"),
            Expr::Eps0 => write!(f, "eps0"),
            Expr::Neg(x) => write!(f, "(-{x})"),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {s} {b})")
            }
            Expr::Call(func, args) => write!(f, "{}({})", func.name(), list(args)),
            Expr::Cut(l, r) => write!(f, "{{{} | {}}}", list(l), list(r)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let done = t.1 == Tok::End;
            out.push(t);
            if done {
                return Ok(out);
            }
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        self.take_while(char::is_whitespace);
        let start = self.pos;
        let Some(c) = self.src[self.pos..].chars().next() else {
            return Ok((start, Tok::End));
        };
        if c.is_ascii_digit() {
            let digits = self.take_while(|c| c.is_ascii_digit());
            return Ok((start, Tok::Int(digits.parse().unwrap())));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
            return Ok((start, Tok::Ident(word.to_string())));
        }
        if "+-*/^(){}|,".contains(c) {
            self.pos += 1;
            return Ok((start, Tok::Sym(c)));
        }
        Err(ParseError {
            offset: start,
            message: format!("unexpected character '{c}'"),
        })
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn offset(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected '{c}', found {}", describe(self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn list_until(&mut self, stops: &[char]) -> Result<Vec<Expr>, ParseError> {
        let mut out = Vec::new();
        if stops.iter().any(|c| *self.peek() == Tok::Sym(*c)) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('{') => {
                let left = self.list_until(&['|'])?;
                self.expect('|')?;
                let right = self.list_until(&['}'])?;
                self.expect('}')?;
                Ok(Expr::Cut(left, right))
            }
            Tok::Ident(name) => {
                let func = match name.as_str() {
                    "w" => return Ok(Expr::Omega),
                    "eps0" => return Ok(Expr::Eps0),
                    "exp" => Func::Exp,
                    "log" => Func::Log,
                    "d" => Func::D,
                    "root" => Func::Root,
                    _ => {
                        return Err(ParseError {
                            offset: at,
                            message: format!("unknown name '{name}'"),
                        })
                    }
                };
                self.expect('(')?;
                let args = self.list_until(&[')'])?;
                self.expect(')')?;
                if args.len() != func.arity() {
                    return Err(ParseError {
                        offset: at,
                        message: format!("{} takes {} argument(s), got {}", func.name(), func.arity(), args.len()),
                    });
                }
                Ok(Expr::Call(func, args))
            }
            t => Err(ParseError {
                offset: at,
                message: format!("expected an operand, found {}", describe(&t)),
            }),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("'{n}'"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::End => "end of input".to_string(),
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: Lexer::tokens(src)?,
        i: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(s: &str) -> String {
        parse(s).unwrap().to_string()
    }

    #[test]
    fn precedence() {
        assert_eq!(show("w * (1/w)"), "(w * (1 / w))");
        assert_eq!(show("1 + 2 * 3 - 4"), "((1 + (2 * 3)) - 4)");
        assert_eq!(show("-w^2"), "(-(w ^ 2))");
        assert_eq!(show("w^-1*7"), "((w ^ (-1)) * 7)");
        assert_eq!(show("w^w^2"), "(w ^ (w ^ 2))");
        assert_eq!(show("w^(1/2)*2"), "((w ^ (1 / 2)) * 2)");
    }

    #[test]
    fn calls_and_cuts() {
        assert_eq!(show("{0|1}"), "{0 | 1}");
        assert_eq!(show("{ | -1, 2}"), "{ | (-1), 2}");
        assert_eq!(show("{|}"), "{ | }");
        assert_eq!(show("d(exp(w))"), "d(exp(w))");
        assert_eq!(show("root(2, w)"), "root(2, w)");
        assert_eq!(show("eps0 + 1"), "(eps0 + 1)");
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse("w + ").unwrap_err();
        assert_eq!(e.offset, 4);
        assert_eq!(parse("w $ 1").unwrap_err().offset, 2);
        assert_eq!(parse("foo(1)").unwrap_err().offset, 0);
        assert_eq!(parse("(w").unwrap_err().offset, 2);
        assert_eq!(parse("root(w)").unwrap_err().offset, 0);
        assert_eq!(parse("w w").unwrap_err().offset, 2);
    }
}
