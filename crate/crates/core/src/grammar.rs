//! Textual grammar for configuration values.
//!
//! Every parser here accepts exactly the `Display` form of the corresponding
//! type, plus a few conveniences: `inf` wherever a number is expected, simple
//! fractions (`3/2`), and Lebesgue shorthands (`L1`, `Linf`) inside couples.
//! Errors are reported as [`Error::Config`] with 1-based line and column;
//! single-expression parsers report line 1 and leave multi-line bookkeeping
//! to the caller.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::interp::{CoupleSpec, InterpParams, OuterSpace};
use crate::orlicz::YoungFunction;
use crate::spaces::{SpaceFamily, SpaceSpec};
use crate::varying::{ParamFunction, SlowlyVarying};

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, line }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::config(self.line, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_alphanumeric() || *c == '_' || (*c == '.' && self.pos > start))
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a name"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    /// A float literal, `inf`, or a fraction of two such atoms.
    fn number(&mut self) -> Result<f64> {
        let num = self.number_atom()?;
        if self.eat('/') {
            let den = self.number_atom()?;
            if den == 0.0 {
                return Err(self.err("zero denominator"));
            }
            return Ok(num / den);
        }
        Ok(num)
    }

    fn number_atom(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let mut sign = 1.0;
        if matches!(self.chars.get(self.pos), Some('+' | '-')) {
            if self.chars[self.pos] == '-' {
                sign = -1.0;
            }
            self.pos += 1;
        }
        if matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_alphabetic()) {
            let word = self.ident()?;
            return match word.as_str() {
                "inf" | "infinity" => Ok(sign * f64::INFINITY),
                _ => {
                    self.pos = start;
                    Err(self.err(format!("expected a number, found '{word}'")))
                }
            };
        }
        let digits = |c: Option<&char>| matches!(c, Some(d) if d.is_ascii_digit());
        while digits(self.chars.get(self.pos)) || self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
        }
        if matches!(self.chars.get(self.pos), Some('e' | 'E'))
            && (digits(self.chars.get(self.pos + 1))
                || (matches!(self.chars.get(self.pos + 1), Some('+' | '-'))
                    && digits(self.chars.get(self.pos + 2))))
        {
            self.pos += 2;
            while digits(self.chars.get(self.pos)) {
                self.pos += 1;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>().map_err(|_| {
            self.pos = start;
            self.err("expected a number")
        })
    }

    /// A double-quoted string; returns the content and the column at which
    /// it starts, for error offsetting in nested parses.
    fn quoted(&mut self) -> Result<(String, usize)> {
        self.expect('"')?;
        let content_col = self.pos + 1;
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(c) if *c != '"') {
            self.pos += 1;
        }
        if self.chars.get(self.pos) != Some(&'"') {
            return Err(self.err("unterminated string"));
        }
        let content = self.chars[start..self.pos].iter().collect();
        self.pos += 1;
        Ok((content, content_col))
    }

    fn finish(&mut self) -> Result<()> {
        if let Some(c) = self.peek() {
            return Err(self.err(format!("unexpected trailing input starting at '{c}'")));
        }
        Ok(())
    }

    /// Run a nested single-line parse on quoted content, shifting error
    /// columns so they point inside the enclosing string.
    fn nested<T>(&self, content: &str, content_col: usize, f: impl Fn(&mut Cursor) -> Result<T>) -> Result<T> {
        let mut inner = Cursor::new(content, self.line);
        let out = f(&mut inner)?;
        inner.finish().map_err(|e| shift_col(e, content_col - 1))?;
        Ok(out)
    }
}

fn shift_col(e: Error, offset: usize) -> Error {
    match e {
        Error::Config { line, col, msg } => Error::Config { line, col: col + offset, msg },
        other => other,
    }
}

/// Validation failures become config errors anchored at the start of the
/// offending expression.
fn reanchor(cur: &Cursor, start_col: usize, e: Error) -> Error {
    match e {
        cfg @ Error::Config { .. } => cfg,
        other => Error::config(cur.line, start_col, other.to_string()),
    }
}

// --- slowly varying weights -------------------------------------------------

fn sv_expr(cur: &mut Cursor) -> Result<SlowlyVarying> {
    let mut alpha: Vec<f64> = Vec::new();
    let mut constant: Option<f64> = None;
    loop {
        cur.skip_ws();
        let col = cur.pos + 1;
        match cur.peek() {
            Some(c) if c == 'l' || c == 'L' => {
                let word = cur.ident()?;
                let idx: usize = word[1..]
                    .parse()
                    .map_err(|_| Error::config(cur.line, col, format!("bad log index '{word}'")))?;
                if idx == 0 || idx > 8 {
                    return Err(Error::config(cur.line, col, "log index must be in 1..=8"));
                }
                cur.expect('^')?;
                let a = cur.number()?;
                if alpha.len() < idx {
                    alpha.resize(idx, 0.0);
                }
                alpha[idx - 1] += a;
            }
            Some(c) if c.is_ascii_digit() || c == '.' || c == '+' || c == '-' => {
                let v = cur.number()?;
                if constant.is_some() {
                    return Err(Error::config(cur.line, col, "repeated constant factor"));
                }
                constant = Some(v);
            }
            _ => return Err(cur.err("expected a weight factor (number or lK^a)")),
        }
        if !cur.eat('*') {
            break;
        }
    }
    match (constant, alpha.is_empty()) {
        (Some(c), true) => {
            if c == 1.0 {
                Ok(SlowlyVarying::one())
            } else {
                Ok(SlowlyVarying::Constant(c))
            }
        }
        (None, true) => Err(cur.err("empty weight")),
        (Some(c), false) if c != 1.0 => {
            Err(cur.err("constant factors cannot be mixed with log powers"))
        }
        _ => Ok(SlowlyVarying::IterLogPow(alpha)),
    }
}

pub fn parse_slowly_varying(text: &str) -> Result<SlowlyVarying> {
    let mut cur = Cursor::new(text, 1);
    let sv = sv_expr(&mut cur)?;
    cur.finish()?;
    sv.validate().map_err(|e| reanchor(&cur, 1, e))?;
    Ok(sv)
}

// --- parameter functions ----------------------------------------------------

fn param_expr(cur: &mut Cursor) -> Result<ParamFunction> {
    cur.skip_ws();
    let save = cur.pos;
    if let Ok(word) = cur.ident() {
        match word.as_str() {
            "t" => {
                cur.expect('^')?;
                let p = cur.number()?;
                if cur.eat('*') {
                    let sv = sv_expr(cur)?;
                    return Ok(ParamFunction::PowerTimesSv { p, sv });
                }
                return Ok(ParamFunction::Power(p));
            }
            "s_phi" => {
                cur.expect('(')?;
                let inner = param_expr(cur)?;
                cur.expect(')')?;
                return Ok(ParamFunction::DilationMajorant(Box::new(inner)));
            }
            _ => cur.pos = save,
        }
    } else {
        cur.pos = save;
    }
    Ok(ParamFunction::from_sv(sv_expr(cur)?))
}

pub fn parse_param_function(text: &str) -> Result<ParamFunction> {
    let mut cur = Cursor::new(text, 1);
    let phi = param_expr(&mut cur)?;
    cur.finish()?;
    Ok(phi)
}

// --- Young functions ----------------------------------------------------------

fn young_expr(cur: &mut Cursor) -> Result<YoungFunction> {
    cur.skip_ws();
    let col = cur.pos + 1;
    if matches!(cur.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
        let coef = cur.number()?;
        cur.expect('*')?;
        let t = cur.ident()?;
        if t != "t" {
            return Err(cur.err("expected 't' after the coefficient"));
        }
        cur.expect('^')?;
        let p = cur.number()?;
        return Ok(YoungFunction::ScaledPower { coef, p });
    }
    let word = cur.ident()?;
    match word.as_str() {
        "t" => {
            cur.expect('^')?;
            Ok(YoungFunction::Power(cur.number()?))
        }
        "powerlog" => {
            cur.expect('(')?;
            let p = cur.number()?;
            cur.expect(',')?;
            let alpha = cur.number()?;
            cur.expect(')')?;
            Ok(YoungFunction::PowerLog { p, alpha })
        }
        "expm1" => Ok(YoungFunction::ExpMinusOne),
        "tlogt" => Ok(YoungFunction::TLogT),
        other => Err(Error::config(cur.line, col, format!("unknown Young function '{other}'"))),
    }
}

pub fn parse_young(text: &str) -> Result<YoungFunction> {
    let mut cur = Cursor::new(text, 1);
    let phi = young_expr(&mut cur)?;
    cur.finish()?;
    phi.validate().map_err(|e| reanchor(&cur, 1, e))?;
    Ok(phi)
}

// --- spaces -------------------------------------------------------------------

fn space_expr(cur: &mut Cursor, domain: Domain) -> Result<SpaceSpec> {
    cur.skip_ws();
    let col = cur.pos + 1;
    let word = cur.ident()?;
    let lower = word.to_ascii_lowercase();
    let family = match lower.as_str() {
        "lebesgue" => {
            cur.expect('(')?;
            let p = cur.number()?;
            cur.expect(')')?;
            SpaceFamily::Lebesgue(p)
        }
        "lorentz" => {
            cur.expect('(')?;
            let p = cur.number()?;
            cur.expect(',')?;
            let q = cur.number()?;
            cur.expect(')')?;
            SpaceFamily::Lorentz { p, q }
        }
        "zygmund" => {
            cur.expect('(')?;
            let p = cur.number()?;
            cur.expect(',')?;
            let q = cur.number()?;
            cur.expect(',')?;
            let alpha = cur.number()?;
            cur.expect(')')?;
            SpaceFamily::LorentzZygmund { p, q, alpha }
        }
        "karamata" => {
            cur.expect('(')?;
            key(cur, "p")?;
            let p = cur.number()?;
            cur.expect(',')?;
            key(cur, "b")?;
            let (content, content_col) = cur.quoted()?;
            let b = cur.nested(&content, content_col, sv_expr)?;
            cur.expect(',')?;
            key(cur, "E")?;
            let e = space_expr(cur, Domain::HalfLine)?;
            cur.expect(')')?;
            SpaceFamily::LorentzKaramata { p, b, e: Box::new(e) }
        }
        "orlicz" => {
            cur.expect('(')?;
            let gauge_col = cur.pos + 1;
            let gauge = cur.ident()?;
            cur.expect(',')?;
            let (content, content_col) = cur.quoted()?;
            let phi = cur.nested(&content, content_col, young_expr)?;
            cur.expect(')')?;
            match gauge.as_str() {
                "lux" => SpaceFamily::OrliczLux(phi),
                "amemiya" => SpaceFamily::OrliczAmemiya(phi),
                other => {
                    return Err(Error::config(
                        cur.line,
                        gauge_col,
                        format!("unknown gauge '{other}' (expected lux or amemiya)"),
                    ))
                }
            }
        }
        "llogl" => SpaceFamily::LlogL,
        "lexp" => SpaceFamily::Lexp,
        "grand" => {
            cur.expect('(')?;
            let p = cur.number()?;
            cur.expect(')')?;
            SpaceFamily::GrandLebesgue(p)
        }
        _ => {
            // Lebesgue shorthands: L1, L2, Linf, ...
            if let Some(rest) = lower.strip_prefix('l') {
                if rest == "inf" {
                    SpaceFamily::Lebesgue(f64::INFINITY)
                } else if let Ok(p) = rest.parse::<f64>() {
                    SpaceFamily::Lebesgue(p)
                } else {
                    return Err(Error::config(cur.line, col, format!("unknown space '{word}'")));
                }
            } else {
                return Err(Error::config(cur.line, col, format!("unknown space '{word}'")));
            }
        }
    };
    let spec = SpaceSpec { family, domain };
    spec.validate().map_err(|e| reanchor(cur, col, e))?;
    Ok(spec)
}

fn key(cur: &mut Cursor, name: &str) -> Result<()> {
    let col = cur.pos + 1;
    let word = cur.ident()?;
    if word != name {
        return Err(Error::config(cur.line, col, format!("expected '{name}=', found '{word}'")));
    }
    cur.expect('=')
}

pub fn parse_space(text: &str, domain: Domain) -> Result<SpaceSpec> {
    let mut cur = Cursor::new(text, 1);
    let spec = space_expr(&mut cur, domain)?;
    cur.finish()?;
    Ok(spec)
}

// --- couples and outer spaces ---------------------------------------------------

fn couple_expr(cur: &mut Cursor, domain: Domain) -> Result<CoupleSpec> {
    let col = cur.pos + 1;
    let word = cur.ident()?;
    if word != "couple" {
        return Err(Error::config(cur.line, col, format!("expected 'couple(...)', found '{word}'")));
    }
    cur.expect('(')?;
    let x0 = space_expr(cur, domain)?;
    cur.expect(',')?;
    let x1 = space_expr(cur, domain)?;
    cur.expect(')')?;
    CoupleSpec::new(x0, x1).map_err(|e| reanchor(cur, col, e))
}

pub fn parse_couple(text: &str, domain: Domain) -> Result<CoupleSpec> {
    let mut cur = Cursor::new(text, 1);
    let couple = couple_expr(&mut cur, domain)?;
    cur.finish()?;
    Ok(couple)
}

fn outer_expr(cur: &mut Cursor) -> Result<OuterSpace> {
    cur.skip_ws();
    let save = cur.pos;
    let col = cur.pos + 1;
    let word = cur.ident()?;
    match word.as_str() {
        "linf" | "Linf" => Ok(OuterSpace::Lebesgue(f64::INFINITY)),
        "lebesgue" => {
            cur.expect('(')?;
            let q = cur.number()?;
            cur.expect(')')?;
            Ok(OuterSpace::Lebesgue(q))
        }
        "kmethod" => {
            cur.expect('(')?;
            // the inner couple always lives on the real line
            let couple = couple_expr(cur, Domain::RealLine)?;
            cur.expect(',')?;
            key(cur, "theta")?;
            let theta = cur.number()?;
            cur.expect(')')?;
            Ok(OuterSpace::KMethodInstance { couple: Box::new(couple), theta })
        }
        _ => {
            cur.pos = save;
            Err(Error::config(cur.line, col, format!("unknown outer space '{word}'")))
        }
    }
}

pub fn parse_outer(text: &str) -> Result<OuterSpace> {
    let mut cur = Cursor::new(text, 1);
    let outer = outer_expr(&mut cur)?;
    cur.finish()?;
    Ok(outer)
}

// --- full parameter blocks ---------------------------------------------------------

/// `params(theta=..., b="...", E=..., T=..., h=...)`, keys after `theta`
/// optional and in any order. Defaults: b = 1, E = linf, T = 40, h = 0.01.
pub fn parse_params(text: &str) -> Result<InterpParams> {
    let mut cur = Cursor::new(text, 1);
    let head_col = cur.pos + 1;
    let word = cur.ident()?;
    if word != "params" {
        return Err(Error::config(cur.line, head_col, format!("expected 'params(...)', found '{word}'")));
    }
    cur.expect('(')?;
    let mut theta: Option<f64> = None;
    let mut b = SlowlyVarying::one();
    let mut outer = OuterSpace::Lebesgue(f64::INFINITY);
    let mut window = 40.0;
    let mut step = 0.01;
    let mut override_conditions = false;
    loop {
        cur.skip_ws();
        let col = cur.pos + 1;
        let k = cur.ident()?;
        cur.expect('=')?;
        match k.as_str() {
            "theta" => theta = Some(cur.number()?),
            "b" => {
                let (content, content_col) = cur.quoted()?;
                b = cur.nested(&content, content_col, sv_expr)?;
            }
            "E" => outer = outer_expr(&mut cur)?,
            "T" => window = cur.number()?,
            "h" => step = cur.number()?,
            "override" => {
                let v = cur.ident()?;
                override_conditions = match v.as_str() {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(cur.err(format!("expected true/false, found '{other}'")))
                    }
                };
            }
            other => {
                return Err(Error::config(cur.line, col, format!("unknown key '{other}'")))
            }
        }
        if !cur.eat(',') {
            break;
        }
    }
    cur.expect(')')?;
    cur.finish()?;
    let theta = theta.ok_or_else(|| Error::config(cur.line, head_col, "missing key 'theta'"))?;
    let mut params =
        InterpParams::new(theta, b, outer, window, step).map_err(|e| reanchor(&cur, head_col, e))?;
    params.override_conditions = override_conditions;
    Ok(params)
}

/// Domain tag (`real`, `half`, `torus`, `integers`).
pub fn parse_domain(text: &str) -> Result<Domain> {
    Domain::from_tag(text.trim())
        .ok_or_else(|| Error::config(1, 1, format!("unknown domain '{}'", text.trim())))
}

/// A bare number with the grammar's conveniences (`inf`, fractions).
pub fn parse_number(text: &str) -> Result<f64> {
    let mut cur = Cursor::new(text, 1);
    let v = cur.number()?;
    cur.finish()?;
    Ok(v)
}
