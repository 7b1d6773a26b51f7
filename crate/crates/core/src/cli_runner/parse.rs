//! Text form of coefficient modules.
//!
//! ```text
//! module  := "C" | [line "*"] term ("*" term)* | line
//! line    := "1(" int ")"
//! term    := ("sym^" | "alt^") uint factor | factor [power]
//! power   := "^⊗" uint | "^" uint
//! factor  := "T(" int "," int ")" | "Tx(" int ")" | "Q(" int "," int ")q"
//! ```
//!
//! A symmetric or alternating term must be the only tensor term.

use crate::error::{GfError, Result};
use crate::tensor_modules::{FactorSpec, ModuleSpec, Symmetry};

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Self { chars: src.chars().collect(), pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(GfError::Parse { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let want: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&want) {
            self.pos += want.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+') | Some('−')) {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().map(|&c| if c == '−' { '-' } else { c }).collect();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("expected an integer")
        })
    }

    fn uint(&mut self) -> Result<usize> {
        let start = self.pos;
        let v = self.int()?;
        usize::try_from(v).or_else(|_| {
            self.pos = start;
            self.err("expected a non-negative integer")
        })
    }
}

fn factor(c: &mut Cursor) -> Result<FactorSpec> {
    c.skip_ws();
    if c.eat("Tx(") {
        let nu = c.int()?;
        c.expect(")")?;
        Ok(FactorSpec::laurent(nu))
    } else if c.eat("T(") {
        let nu = c.int()?;
        c.expect(",")?;
        let lambda = c.int()?;
        c.expect(")")?;
        Ok(FactorSpec::density(nu, lambda))
    } else if c.eat("Q(") {
        let nu = c.int()?;
        c.expect(",")?;
        let lambda = c.int()?;
        c.expect(")")?;
        c.expect("q")?;
        Ok(FactorSpec::quotient(nu, lambda))
    } else {
        c.err("expected a factor T(ν,λ), Tx(ν) or Q(ν,λ)q")
    }
}

fn power(c: &mut Cursor) -> Result<usize> {
    if c.eat("^⊗") || c.eat("^") {
        let start = c.pos;
        let n = c.uint()?;
        if n == 0 {
            c.pos = start;
            return c.err("tensor power must be at least 1");
        }
        Ok(n)
    } else {
        Ok(1)
    }
}

pub fn parse_module(text: &str) -> Result<ModuleSpec> {
    let mut c = Cursor::new(text);
    if c.eat("C") {
        if !c.at_end() {
            return c.err("unexpected text after `C`");
        }
        return Ok(ModuleSpec::tensor(None, Vec::new()));
    }
    let mut line = None;
    if c.eat("1(") {
        line = Some(c.int()?);
        c.expect(")")?;
        if c.at_end() {
            return Ok(ModuleSpec::line_only(line.unwrap()));
        }
        c.expect("*")?;
    }
    let mut factors = Vec::new();
    let mut symmetry = Symmetry::None;
    loop {
        c.skip_ws();
        let term_start = c.pos;
        let sym = if c.eat("sym^") {
            Some(Symmetry::Sym)
        } else if c.eat("alt^") {
            Some(Symmetry::Alt)
        } else {
            None
        };
        match sym {
            Some(s) => {
                if !factors.is_empty() || symmetry != Symmetry::None {
                    c.pos = term_start;
                    return c.err("a sym/alt power must be the only tensor term");
                }
                let n = c.uint()?;
                let f = factor(&mut c)?;
                factors.extend(std::iter::repeat(f).take(n));
                symmetry = s;
            }
            None => {
                if symmetry != Symmetry::None {
                    c.pos = term_start;
                    return c.err("a sym/alt power must be the only tensor term");
                }
                let f = factor(&mut c)?;
                let n = power(&mut c)?;
                factors.extend(std::iter::repeat(f).take(n));
            }
        }
        if c.at_end() {
            break;
        }
        c.expect("*")?;
    }
    ModuleSpec::new(line, factors, symmetry)
}
