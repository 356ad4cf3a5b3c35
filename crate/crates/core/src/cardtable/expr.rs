use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cardinal term over the base symbol `m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CardinalExpr {
    M,
    Aleph0,
    Fin(Box<CardinalExpr>),
    /// One-to-one finite sequences.
    Seq(Box<CardinalExpr>),
    /// All finite sequences.
    SeqAll(Box<CardinalExpr>),
    Pow(Box<CardinalExpr>),
    /// Two-element subsets, `[e]^2`.
    Pair2(Box<CardinalExpr>),
    /// Ordered pairs, `e^2`.
    Sq(Box<CardinalExpr>),
    Part(Box<CardinalExpr>),
    /// `n` disjoint copies.
    Mul(u64, Box<CardinalExpr>),
}

use CardinalExpr as C;

impl CardinalExpr {
    pub fn m() -> Self {
        C::M
    }

    pub fn fin(e: Self) -> Self {
        C::Fin(Box::new(e))
    }

    /// `Fin` applied `n` times.
    pub fn fin_n(n: u32, e: Self) -> Self {
        (0..n).fold(e, |acc, _| Self::fin(acc))
    }

    pub fn seq(e: Self) -> Self {
        C::Seq(Box::new(e))
    }

    pub fn seq_all(e: Self) -> Self {
        C::SeqAll(Box::new(e))
    }

    pub fn pow(e: Self) -> Self {
        C::Pow(Box::new(e))
    }

    pub fn pair2(e: Self) -> Self {
        C::Pair2(Box::new(e))
    }

    pub fn sq(e: Self) -> Self {
        C::Sq(Box::new(e))
    }

    pub fn part(e: Self) -> Self {
        C::Part(Box::new(e))
    }

    pub fn mul(n: u64, e: Self) -> Self {
        C::Mul(n, Box::new(e))
    }

    pub fn inner(&self) -> Option<&CardinalExpr> {
        match self {
            C::M | C::Aleph0 => None,
            C::Fin(e) | C::Seq(e) | C::SeqAll(e) | C::Pow(e) | C::Pair2(e) | C::Sq(e) | C::Part(e) | C::Mul(_, e) => Some(e),
        }
    }

    /// Nesting depth; `m` and `aleph0` have depth 0.
    pub fn depth(&self) -> usize {
        self.inner().map_or(0, |e| e.depth() + 1)
    }

    /// The term and all its subterms, innermost last.
    pub fn subterms(&self) -> Vec<CardinalExpr> {
        let mut out = vec![self.clone()];
        let mut cur = self;
        while let Some(e) = cur.inner() {
            out.push(e.clone());
            cur = e;
        }
        out
    }

    fn fin_power(&self) -> (u32, &CardinalExpr) {
        match self {
            C::Fin(e) => {
                let (n, base) = e.fin_power();
                (n + 1, base)
            }
            _ => (0, self),
        }
    }
}

impl fmt::Display for CardinalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            C::M => write!(f, "m"),
            C::Aleph0 => write!(f, "aleph0"),
            C::Fin(_) => match self.fin_power() {
                (1, base) => write!(f, "Fin({base})"),
                (n, base) => write!(f, "Fin^{n}({base})"),
            },
            C::Seq(e) => write!(f, "Seq({e})"),
            C::SeqAll(e) => write!(f, "seq({e})"),
            C::Pow(e) => write!(f, "Pow({e})"),
            C::Pair2(e) => write!(f, "[{e}]^2"),
            C::Sq(e) => match **e {
                C::Mul(..) => write!(f, "({e})^2"),
                _ => write!(f, "{e}^2"),
            },
            C::Part(e) => write!(f, "Part({e})"),
            C::Mul(n, e) => write!(f, "{n}*{e}"),
        }
    }
}

/// Recursive descent over the grammar
///
/// ```text
/// expr    := INT '*' expr | postfix
/// postfix := primary ('^2')*
/// primary := 'm' | 'aleph0' | '2^' primary | '[' expr ']^2' | '(' expr ')'
///          | NAME ('^' INT)? '(' expr ')'        NAME in Fin Seq seq Pow Part
/// ```
struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::InvalidInput(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn int(&mut self) -> Option<u64> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return None;
        }
        let n = self.rest()[..len].parse().ok()?;
        self.pos += len;
        Some(n)
    }

    fn expr(&mut self) -> Result<CardinalExpr> {
        let save = self.pos;
        if let Some(n) = self.int() {
            if self.eat("*") {
                return Ok(C::mul(n, self.expr()?));
            }
        }
        self.pos = save;
        self.postfix()
    }

    fn postfix(&mut self) -> Result<CardinalExpr> {
        let mut e = self.primary()?;
        while self.eat("^2") {
            e = C::sq(e);
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<CardinalExpr> {
        if self.eat("2^") {
            return Ok(C::pow(self.primary()?));
        }
        if self.eat("[") {
            let e = self.expr()?;
            self.expect("]^2")?;
            return Ok(C::pair2(e));
        }
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.eat("aleph0") {
            return Ok(C::Aleph0);
        }
        let names: [(&str, fn(CardinalExpr) -> CardinalExpr); 5] =
            [("Fin", C::fin), ("Seq", C::seq), ("seq", C::seq_all), ("Pow", C::pow), ("Part", C::part)];
        for (name, make) in names {
            if self.eat(name) {
                let times = if self.eat("^") {
                    self.int().ok_or_else(|| self.error("expected an exponent"))?
                } else {
                    1
                };
                if times == 0 || (times != 1 && name != "Fin") {
                    return Err(self.error("only Fin takes an exponent, and it must be positive"));
                }
                self.expect("(")?;
                let inner = self.expr()?;
                self.expect(")")?;
                return Ok((0..times).fold(inner, |acc, _| make(acc)));
            }
        }
        if self.eat("m") {
            return Ok(C::M);
        }
        Err(self.error("unexpected input"))
    }
}

impl FromStr for CardinalExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}
