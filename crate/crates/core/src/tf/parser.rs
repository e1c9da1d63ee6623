//! Recursive-descent parser for transfer-function entries and matrix files.
//!
//! Entry grammar (whitespace-insensitive):
//!
//! ```text
//! entry   := product [ '/' product ]
//! product := factor ( ['*'] factor )*
//! factor  := '-' factor | atom [ '^' INT ]
//! atom    := NUMBER [ 's' ]          -- "16s" is the monomial 16*s
//!          | 's'
//!          | '(' sum ')'
//!          | 'exp' '(' sum ')'
//!          | 'e' '^' ( '{' sum '}' | '(' sum ')' )
//! sum     := product ( ('+' | '-') product )*
//! ```
//!
//! Bare numbers at the top level fold into the entry gain; everything else
//! multiplies into the numerator or denominator polynomial. An exponential
//! must have argument `-T*s` with `T >= 0` and contributes dead time `T`.

use super::poly::Polynomial;
use super::{TfEntry, TransferMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    S,
    Exp,
    E,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::S => "'s'".into(),
            Tok::Exp => "'exp'".into(),
            Tok::E => "'e'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::End => "end of entry".into(),
        }
    }
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Lexed> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let err = |at: usize, message: String| Error::Parse {
        line,
        column: col0 + at,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' | '\u{00b7}' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            _ => None,
        };
        if let Some(t) = simple {
            toks.push((t, start));
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // scientific exponent only when 'e' is followed by [sign] digit
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut k = i + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    i = k;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lit: String = chars[start..i].iter().collect();
            let v: f64 = lit
                .parse()
                .map_err(|_| err(start, format!("malformed number '{lit}'")))?;
            toks.push((Tok::Num(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            // split runs such as "se" or "sexp" written without a '*'
            let mut k = start;
            while k < i {
                let rest: String = chars[k..i].iter().collect();
                if rest.starts_with("exp") {
                    toks.push((Tok::Exp, k));
                    k += 3;
                } else if chars[k] == 's' {
                    toks.push((Tok::S, k));
                    k += 1;
                } else if chars[k] == 'e' {
                    toks.push((Tok::E, k));
                    k += 1;
                } else {
                    let word: String = chars[start..i].iter().collect();
                    return Err(err(
                        k,
                        format!("unexpected identifier '{word}'; expected 's', 'exp' or 'e'"),
                    ));
                }
            }
            continue;
        }
        return Err(err(start, format!("unexpected character '{c}'")));
    }
    toks.push((Tok::End, chars.len()));
    Ok(Lexed { toks })
}

/// Intermediate algebraic value: `gain * poly * exp(-delay*s)`.
#[derive(Clone, Debug)]
struct Value {
    gain: f64,
    poly: Polynomial,
    delay: f64,
}

impl Value {
    fn number(v: f64) -> Self {
        Value {
            gain: v,
            poly: Polynomial::one(),
            delay: 0.0,
        }
    }

    fn poly(p: Polynomial) -> Self {
        Value {
            gain: 1.0,
            poly: p,
            delay: 0.0,
        }
    }

    fn mul(self, other: Value) -> Value {
        Value {
            gain: self.gain * other.gain,
            poly: self.poly.mul(&other.poly),
            delay: self.delay + other.delay,
        }
    }

    /// Collapse into a single polynomial (inside parentheses).
    fn flatten(&self) -> Polynomial {
        self.poly.scale(self.gain)
    }
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    col0: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.col0 + self.toks[self.pos].1,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Num(_) | Tok::S | Tok::LParen | Tok::Exp | Tok::E
        )
    }

    fn entry(&mut self) -> Result<(Value, Option<Value>)> {
        let num = self.product(true)?;
        let den = if *self.peek() == Tok::Slash {
            self.bump();
            Some(self.product(true)?)
        } else {
            None
        };
        if *self.peek() != Tok::End {
            return Err(self.error(format!(
                "expected '*', '/', a factor or end of entry, found {}",
                self.peek().describe()
            )));
        }
        Ok((num, den))
    }

    fn product(&mut self, top_level: bool) -> Result<Value> {
        let mut acc = self.factor(top_level)?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
                let f = self.factor(top_level)?;
                acc = acc.mul(f);
            } else if self.starts_factor() {
                let f = self.factor(top_level)?;
                acc = acc.mul(f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self, top_level: bool) -> Result<Value> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let mut v = self.factor(top_level)?;
            v.gain = -v.gain;
            return Ok(v);
        }
        let atom = self.atom(top_level)?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.small_int()?;
            if atom.delay != 0.0 {
                return Err(self.error("powers of delay factors are not supported"));
            }
            return Ok(Value {
                gain: atom.gain.powi(exp as i32),
                poly: atom.poly.pow(exp),
                delay: 0.0,
            });
        }
        Ok(atom)
    }

    fn small_int(&mut self) -> Result<u32> {
        match self.peek().clone() {
            Tok::Num(v) if v.fract() == 0.0 && (0.0..=16.0).contains(&v) => {
                self.bump();
                Ok(v as u32)
            }
            other => Err(self.error(format!(
                "expected a small non-negative integer exponent, found {}",
                other.describe()
            ))),
        }
    }

    fn atom(&mut self, top_level: bool) -> Result<Value> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                if *self.peek() == Tok::S {
                    self.bump();
                    let degree = if *self.peek() == Tok::Caret {
                        self.bump();
                        self.small_int()? as usize
                    } else {
                        1
                    };
                    Ok(Value::poly(Polynomial::monomial(v, degree)))
                } else if top_level {
                    Ok(Value::number(v))
                } else {
                    Ok(Value::poly(Polynomial::constant(v)))
                }
            }
            Tok::S => {
                self.bump();
                Ok(Value::poly(Polynomial::monomial(1.0, 1)))
            }
            Tok::LParen => {
                self.bump();
                let p = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Exp => {
                self.bump();
                self.expect(Tok::LParen)?;
                let d = self.delay_arg()?;
                self.expect(Tok::RParen)?;
                Ok(d)
            }
            Tok::E => {
                self.bump();
                self.expect(Tok::Caret)?;
                let close = match self.peek() {
                    Tok::LBrace => Tok::RBrace,
                    Tok::LParen => Tok::RParen,
                    other => {
                        return Err(self.error(format!(
                            "expected '{{' or '(' after 'e^', found {}",
                            other.describe()
                        )))
                    }
                };
                self.bump();
                let d = self.delay_arg()?;
                self.expect(close)?;
                Ok(d)
            }
            other => Err(self.error(format!(
                "expected a number, 's', '(', 'exp' or 'e^', found {}",
                other.describe()
            ))),
        }
    }

    fn delay_arg(&mut self) -> Result<Value> {
        let arg = self.sum()?;
        if arg.delay != 0.0 {
            return Err(self.error("nested delay inside an exponential"));
        }
        let p = arg.flatten();
        let c = p.coeffs();
        let linear = c.len() <= 2 && c[0] == 0.0;
        let t = -c.get(1).copied().unwrap_or(0.0) + 0.0;
        if !linear || t < 0.0 {
            return Err(self.error("exponential argument must be -T*s with T >= 0"));
        }
        Ok(Value {
            gain: 1.0,
            poly: Polynomial::one(),
            delay: t,
        })
    }

    /// Parenthesized content: a sum of products, flattened to a polynomial.
    /// A lone product (no '+'/'-') may carry a delay.
    fn sum(&mut self) -> Result<Value> {
        let mut negate_first = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            negate_first = true;
        } else if *self.peek() == Tok::Plus {
            self.bump();
        }
        let mut first = self.product(false)?;
        if negate_first {
            first.gain = -first.gain;
        }
        if !matches!(self.peek(), Tok::Plus | Tok::Minus) {
            return Ok(Value {
                gain: 1.0,
                poly: first.flatten(),
                delay: first.delay,
            });
        }
        if first.delay != 0.0 {
            return Err(self.error("delay factors cannot appear inside a sum"));
        }
        let mut acc = first.flatten();
        while matches!(self.peek(), Tok::Plus | Tok::Minus) {
            let neg = self.bump() == Tok::Minus;
            let term = self.product(false)?;
            if term.delay != 0.0 {
                return Err(self.error("delay factors cannot appear inside a sum"));
            }
            let p = term.flatten();
            acc = acc.add(&if neg { p.scale(-1.0) } else { p });
        }
        Ok(Value::poly(acc))
    }
}

/// Parses one entry; `line`/`col0` position error messages in a larger file.
pub(crate) fn parse_entry_at(text: &str, line: usize, col0: usize) -> Result<TfEntry> {
    let lexed = lex(text, line, col0)?;
    let mut p = Parser {
        toks: &lexed.toks,
        pos: 0,
        line,
        col0,
    };
    if *p.peek() == Tok::End {
        return Err(p.error("empty entry"));
    }
    let (num, den) = p.entry()?;
    let mut gain = num.gain;
    let mut den_poly = Polynomial::one();
    if let Some(d) = den {
        if d.delay != 0.0 {
            return Err(Error::Parse {
                line,
                column: col0,
                message: "delay factors are only allowed in the numerator".into(),
            });
        }
        if d.gain == 0.0 {
            return Err(Error::Parse {
                line,
                column: col0,
                message: "division by zero".into(),
            });
        }
        gain /= d.gain;
        den_poly = d.poly;
    }
    if den_poly.constant_term() == 0.0 && !(gain == 0.0 || num.poly.is_zero()) {
        return Err(Error::Parse {
            line,
            column: col0,
            message: "denominator has a zero constant term, so the steady-state gain is undefined"
                .into(),
        });
    }
    Ok(TfEntry::new(gain, num.poly, den_poly, num.delay))
}

fn is_header(line: &str) -> Option<(&'static str, &str)> {
    let lower = line.trim_start().to_ascii_lowercase();
    for key in ["inputs", "outputs"] {
        if let Some(rest) = lower.strip_prefix(key) {
            if rest.trim_start().starts_with(':') {
                let idx = line.find(':').expect("colon present");
                return Some((key, &line[idx + 1..]));
            }
        }
    }
    None
}

/// `name[unit]` tokens separated by commas, '&' or whitespace.
fn parse_header(body: &str, line: usize) -> Result<Vec<(String, Option<String>)>> {
    let mut out = Vec::new();
    for tok in body
        .split(|c: char| c == ',' || c == '&' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        if let Some(open) = tok.find('[') {
            if !tok.ends_with(']') {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: format!("unterminated unit in '{tok}'"),
                });
            }
            let name = &tok[..open];
            let unit = &tok[open + 1..tok.len() - 1];
            out.push((name.to_string(), Some(unit.to_string())));
        } else {
            out.push((tok.to_string(), None));
        }
    }
    Ok(out)
}

pub(crate) fn parse_matrix(text: &str) -> Result<TransferMatrix> {
    let mut rows: Vec<Vec<TfEntry>> = Vec::new();
    let mut row_lines: Vec<usize> = Vec::new();
    let mut inputs = None;
    let mut outputs = None;

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if let Some((key, body)) = is_header(content) {
            let parsed = parse_header(body, line_no)?;
            if key == "inputs" {
                inputs = Some(parsed);
            } else {
                outputs = Some(parsed);
            }
            continue;
        }
        let mut offset = 0;
        for segment in content.split("\\\\") {
            let seg_start = offset;
            offset += segment.len() + 2;
            if segment.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            let mut cell_start = seg_start;
            for cell in segment.split(['&', ',']) {
                let col = content[..cell_start].chars().count() + 1;
                cell_start += cell.len() + 1;
                if cell.trim().is_empty() {
                    return Err(Error::Parse {
                        line: line_no,
                        column: col,
                        message: "empty entry".into(),
                    });
                }
                row.push(parse_entry_at(cell, line_no, col)?);
            }
            if let Some(first) = rows.first() {
                if row.len() != first.len() {
                    return Err(Error::Parse {
                        line: line_no,
                        column: 1,
                        message: format!(
                            "row has {} entries but row 1 (line {}) has {}",
                            row.len(),
                            row_lines[0],
                            first.len()
                        ),
                    });
                }
            }
            rows.push(row);
            row_lines.push(line_no);
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no matrix rows found".into(),
        });
    }

    let split = |v: Option<Vec<(String, Option<String>)>>| match v {
        None => (None, None),
        Some(v) => {
            let names = v.iter().map(|(n, _)| n.clone()).collect();
            let units = if v.iter().all(|(_, u)| u.is_some()) {
                Some(v.into_iter().map(|(_, u)| u.unwrap()).collect())
            } else {
                None
            };
            (Some(names), units)
        }
    };
    let (col_labels, col_units) = split(inputs);
    let (row_labels, row_units) = split(outputs);
    let tm = TransferMatrix {
        entries: rows,
        row_labels,
        col_labels,
        row_units,
        col_units,
    };
    tm.validate()?;
    Ok(tm)
}
