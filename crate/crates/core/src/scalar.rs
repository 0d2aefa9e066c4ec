//! Exact arithmetic over the rational function field Q(p1, ..., pk).
//!
//! A [`Scalar`] is a fraction of sparse multivariate polynomials with
//! arbitrary-precision rational coefficients.  Fractions are kept
//! unreduced (no multivariate gcd); equality is decided by
//! cross-multiplication.  The only cancellations performed are cheap
//! ones: pure powers of a single variable, constant denominators, and
//! syntactically equal numerator/denominator pairs.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse multivariate polynomial over Q.
///
/// Variables are kept sorted by name; exponent vectors are stored in a
/// `BTreeMap` so every iteration order (and hence every display and every
/// pivot choice downstream) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rat::one());
        MultiPoly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Some(c) when the polynomial is the constant c.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (exp, c) = self.terms.iter().next().unwrap();
            if exp.iter().all(|&e| e == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Drop variables that no longer occur; keeps env minimal and canonical.
    fn trim(mut self) -> Self {
        if self.terms.is_empty() {
            self.vars.clear();
            return self;
        }
        let n = self.vars.len();
        let mut used = vec![false; n];
        for exp in self.terms.keys() {
            for (i, &e) in exp.iter().enumerate() {
                if e != 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return self;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| used[i]).collect();
        let vars = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(exp, c)| (keep.iter().map(|&i| exp[i]).collect(), c))
            .collect();
        MultiPoly { vars, terms }
    }

    /// Remap both polynomials onto the sorted union of their variable sets.
    fn unify(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let mut vars: Vec<String> = a.vars.iter().chain(b.vars.iter()).cloned().collect();
        vars.sort();
        vars.dedup();
        (a.remap(&vars), b.remap(&vars))
    }

    fn remap(&self, vars: &[String]) -> MultiPoly {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("var in union"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(exp, c)| {
                let mut e = vec![0u32; vars.len()];
                for (i, &x) in exp.iter().enumerate() {
                    e[idx[i]] = x;
                }
                (e, c.clone())
            })
            .collect();
        MultiPoly {
            vars: vars.to_vec(),
            terms,
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let (a, b) = MultiPoly::unify(self, other);
        let mut terms = a.terms;
        for (exp, c) in b.terms {
            let entry = terms.entry(exp).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                // removed below
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly {
            vars: a.vars,
            terms,
        }
        .trim()
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let (a, b) = MultiPoly::unify(self, other);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(exp).or_insert_with(Rat::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly {
            vars: a.vars,
            terms,
        }
        .trim()
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    fn var_index(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    pub fn contains_var(&self, var: &str) -> bool {
        match self.var_index(var) {
            Some(i) => self.terms.keys().any(|e| e[i] != 0),
            None => false,
        }
    }

    /// Minimal exponent of `var` across all terms (None for the zero poly).
    pub fn min_exp(&self, var: &str) -> Option<u32> {
        if self.terms.is_empty() {
            return None;
        }
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|e| e[i]).min(),
            None => Some(0),
        }
    }

    /// Divide by var^k; every term must carry at least exponent k.
    pub fn div_var_power(&self, var: &str, k: u32) -> MultiPoly {
        if k == 0 {
            return self.clone();
        }
        let i = self.var_index(var).expect("var present");
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                assert!(e[i] >= k);
                e[i] -= k;
                (e, c.clone())
            })
            .collect();
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
        .trim()
    }

    /// Set `var` to zero: keep only the terms without it.
    pub fn eval_at_zero(&self, var: &str) -> MultiPoly {
        match self.var_index(var) {
            None => self.clone(),
            Some(i) => MultiPoly {
                vars: self.vars.clone(),
                terms: self
                    .terms
                    .iter()
                    .filter(|(e, _)| e[i] == 0)
                    .map(|(e, c)| (e.clone(), c.clone()))
                    .collect(),
            }
            .trim(),
        }
    }

    /// Substitute scalars for variables; unbound variables stay symbolic.
    pub fn substitute(&self, bindings: &BTreeMap<String, Scalar>) -> Scalar {
        let mut acc = Scalar::zero();
        for (exp, coeff) in &self.terms {
            let mut term = Scalar::from_rat(coeff.clone());
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = match bindings.get(&self.vars[i]) {
                    Some(s) => s.clone(),
                    None => Scalar::param(&self.vars[i]),
                };
                term = term.mul(&factor.pow_u32(e));
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Coefficient-wise view as (exponent vector over `self.vars`, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

fn fmt_monomial(vars: &[String], exp: &[u32]) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(exp) {
        if e == 1 {
            parts.push(v.clone());
        } else if e > 1 {
            parts.push(format!("{v}^{e}"));
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest monomial first reads more naturally
        for (exp, c) in self.terms.iter().rev() {
            let mono = fmt_monomial(&self.vars, exp);
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Element of the fraction field Q(params).
#[derive(Debug, Clone)]
pub struct Scalar {
    num: MultiPoly,
    den: MultiPoly,
}

impl Scalar {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar { num, den }.normalize())
    }

    pub fn zero() -> Self {
        Scalar {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            num: MultiPoly::one(),
            den: MultiPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rat(rat(n, 1))
    }

    pub fn from_rat(c: Rat) -> Self {
        Scalar {
            num: MultiPoly::constant(c),
            den: MultiPoly::one(),
        }
    }

    pub fn param(name: &str) -> Self {
        Scalar {
            num: MultiPoly::var(name),
            den: MultiPoly::one(),
        }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    /// Cheap normal form: zero numerator, constant denominators, identical
    /// num/den, and pure single-variable powers.  Everything heavier is
    /// deliberately left alone.
    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = self.den.as_constant() {
            let inv = Rat::one() / c;
            return Scalar {
                num: self.num.scale(&inv),
                den: MultiPoly::one(),
            };
        }
        // cancel common pure powers of each variable
        let vars: Vec<String> = self.den.vars().to_vec();
        for v in vars {
            let a = self.num.min_exp(&v).unwrap_or(0);
            let b = self.den.min_exp(&v).unwrap_or(0);
            let k = a.min(b);
            if k > 0 {
                self.num = self.num.div_var_power(&v, k);
                self.den = self.den.div_var_power(&v, k);
            }
        }
        if let Some(c) = self.den.as_constant() {
            let inv = Rat::one() / c;
            return Scalar {
                num: self.num.scale(&inv),
                den: MultiPoly::one(),
            };
        }
        if self.num == self.den {
            return Scalar::one();
        }
        if self.num == self.den.neg() {
            return Scalar::from_int(-1);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.eq_scalar(&Scalar::one())
    }

    /// Some(c) when the scalar is the rational constant c.
    pub fn as_rat(&self) -> Option<Rat> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    /// Equality by cross-multiplication; no gcd needed.
    pub fn eq_scalar(&self, other: &Scalar) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (num, den) = if self.den == other.den {
            (self.num.add(&other.num), self.den.clone())
        } else {
            (
                self.num.mul(&other.den).add(&other.num.mul(&self.den)),
                self.den.mul(&other.den),
            )
        };
        Scalar { num, den }.normalize()
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .normalize()
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        }
        .normalize())
    }

    pub fn inv(&self) -> Result<Scalar> {
        Scalar::one().div(self)
    }

    pub fn pow_u32(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Simultaneous exact substitution of parameters.
    pub fn substitute(&self, bindings: &BTreeMap<String, Scalar>) -> Result<Scalar> {
        let num = self.num.substitute(bindings);
        let den = self.den.substitute(bindings);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        num.div(&den)
    }

    /// Formal limit as `var` tends to zero.
    ///
    /// Writes num = var^a * n, den = var^b * d with n, d prime to var.
    /// The limit exists iff a >= b; it is then 0 (a > b) or n(0)/d(0).
    pub fn limit_at_zero(&self, var: &str) -> Option<Scalar> {
        if self.num.is_zero() {
            return Some(Scalar::zero());
        }
        let a = self.num.min_exp(var).unwrap_or(0);
        let b = self.den.min_exp(var).unwrap_or(0);
        if a < b {
            return None;
        }
        if a > b {
            return Some(Scalar::zero());
        }
        let n = self.num.div_var_power(var, a).eval_at_zero(var);
        let d = self.den.div_var_power(var, b).eval_at_zero(var);
        // d keeps its var-free part, which is nonzero by minimality of b
        Some(Scalar { num: n, den: d }.normalize())
    }

    /// Every parameter name occurring in numerator or denominator.
    pub fn vars(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .num
            .vars()
            .iter()
            .chain(self.den.vars().iter())
            .cloned()
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.eq_scalar(other)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().map(|c| c.is_one()) == Some(true) {
            if self.num.num_terms() > 1 {
                write!(f, "{}", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

// ---------------------------------------------------------------------------
// Expression parser
//
// Grammar: integers, rationals p/q, identifiers [a-z][a-z0-9_]*, + - * / ^
// (nonnegative integer exponents), parentheses.  Juxtaposition multiplies
// with the same precedence as `*`, so `2 t^2 alpha` parses as 2*t^2*alpha.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                out.push(Tok::Int(s.parse().map_err(|_| "bad integer")?));
            }
            'a'..='z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase()
                        || bytes[i].is_ascii_digit()
                        || bytes[i] == '_')
                {
                    i += 1;
                }
                out.push(Tok::Ident(bytes[start..i].iter().collect()));
            }
            _ => return Err(format!("unexpected character `{c}`")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    allowed: Option<&'a [String]>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> std::result::Result<Scalar, String> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> std::result::Result<Scalar, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs).map_err(|_| "division by zero".to_string())?;
                }
                // juxtaposition: `2 t`, `(1+alpha) t^2`
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> std::result::Result<Scalar, String> {
        if let Some(Tok::Minus) = self.peek() {
            self.next();
            return Ok(self.factor()?.neg());
        }
        let base = match self.next() {
            Some(Tok::Int(n)) => Scalar::from_rat(Rat::from_integer(n)),
            Some(Tok::Ident(name)) => {
                if let Some(allowed) = self.allowed {
                    if !allowed.iter().any(|a| a == &name) {
                        return Err(format!("undeclared parameter `{name}`"));
                    }
                }
                Scalar::param(&name)
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => e,
                    _ => return Err("missing `)`".to_string()),
                }
            }
            other => return Err(format!("unexpected token {other:?}")),
        };
        if let Some(Tok::Caret) = self.peek() {
            self.next();
            match self.next() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| "exponent must be a nonnegative integer".to_string())?;
                    Ok(base.pow_u32(e))
                }
                _ => Err("exponent must be a nonnegative integer".to_string()),
            }
        } else {
            Ok(base)
        }
    }
}

impl Scalar {
    /// Parse an expression; when `allowed` is given, identifiers outside the
    /// list are rejected (undeclared parameters).
    pub fn parse_with_vars(src: &str, allowed: Option<&[String]>) -> std::result::Result<Scalar, String> {
        let toks = tokenize(src)?;
        if toks.is_empty() {
            return Err("empty expression".to_string());
        }
        let mut p = Parser {
            toks,
            pos: 0,
            allowed,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(format!("trailing input at token {}", p.pos));
        }
        Ok(e)
    }

    pub fn parse(src: &str) -> std::result::Result<Scalar, String> {
        Scalar::parse_with_vars(src, None)
    }
}

/// Parse an expression that must be homogeneous of degree one in the given
/// marker symbols, returning the scalar coefficient of each marker.  Used
/// for basis combinations (`t e1 + e2 - (1/t) e3` over markers e1..en) and
/// for cocycle coordinates over markers d1_2, d1_3, ...  The special source
/// text `0` denotes the zero combination.
pub fn parse_linear(
    src: &str,
    markers: &[String],
    params: &[String],
) -> std::result::Result<Vec<Scalar>, String> {
    if src.trim() == "0" {
        return Ok(vec![Scalar::zero(); markers.len()]);
    }
    let mut allowed: Vec<String> = params.to_vec();
    allowed.extend(markers.iter().cloned());
    let s = Scalar::parse_with_vars(src, Some(&allowed))?;
    // denominator must not involve the marker symbols
    for m in markers {
        if s.den().contains_var(m) {
            return Err(format!("marker `{m}` appears in a denominator"));
        }
    }
    let num = s.num().clone();
    let mut coeffs = vec![MultiPoly::zero(); markers.len()];
    let vars = num.vars().to_vec();
    let mpos: Vec<Option<usize>> = markers
        .iter()
        .map(|m| vars.iter().position(|v| v == m))
        .collect();
    for (exp, c) in num.terms() {
        let mut which: Option<usize> = None;
        let mut mdeg = 0u32;
        for (k, pos) in mpos.iter().enumerate() {
            if let Some(i) = pos {
                if exp[*i] > 0 {
                    mdeg += exp[*i];
                    which = Some(k);
                }
            }
        }
        if mdeg != 1 {
            return Err("expression is not linear in the marker symbols".to_string());
        }
        let k = which.unwrap();
        // strip the marker variable from the monomial
        let mut e2 = exp.clone();
        e2[mpos[k].unwrap()] = 0;
        let mono = MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::from([(e2, c.clone())]),
        }
        .trim();
        coeffs[k] = coeffs[k].add(&mono);
    }
    let den = s.den().clone();
    coeffs
        .into_iter()
        .map(|n| Scalar::new(n, den.clone()).map_err(|e| e.to_string()))
        .collect()
}

/// Parse a linear combination of basis vectors `e1..e<dim>` with scalar
/// coefficients, e.g. `t e1 + e2 - (1/t) e3`.
pub fn parse_linear_combo(
    src: &str,
    dim: usize,
    params: &[String],
) -> std::result::Result<Vec<Scalar>, String> {
    let evars: Vec<String> = (1..=dim).map(|k| format!("e{k}")).collect();
    parse_linear(src, &evars, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(src: &str) -> Scalar {
        Scalar::parse(src).unwrap()
    }

    #[test]
    fn rational_arithmetic() {
        assert_eq!(sc("1/2").add(&sc("1/2")), Scalar::one());
        assert_eq!(sc("(1+alpha)*(1-alpha)"), sc("1-alpha^2"));
        // (t^2+t)/t / (t+1) = 1 by cross-multiplication
        let lhs = sc("(t^2+t)/t").div(&sc("t+1")).unwrap();
        assert_eq!(lhs, Scalar::one());
    }

    #[test]
    fn division_by_zero_scalar() {
        assert!(matches!(
            sc("1").div(&Scalar::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn substitution() {
        let b = BTreeMap::from([("alpha".to_string(), sc("1/t"))]);
        assert_eq!(sc("1+alpha").substitute(&b).unwrap(), sc("(t+1)/t"));
        let z = BTreeMap::from([("alpha".to_string(), Scalar::zero())]);
        assert!(sc("alpha^2").substitute(&z).unwrap().is_zero());
        let t0 = BTreeMap::from([("t".to_string(), Scalar::zero())]);
        assert_eq!(
            sc("(2 alpha - t)/(2 + 2 t)").substitute(&t0).unwrap(),
            sc("alpha")
        );
        // substitution emptying a denominator is an error
        assert!(sc("1/t").substitute(&t0).is_err());
    }

    #[test]
    fn limits() {
        assert!(sc("t^2/t").limit_at_zero("t").unwrap().is_zero());
        assert_eq!(
            sc("(t+1)/t").mul(&sc("t")).limit_at_zero("t").unwrap(),
            Scalar::one()
        );
        assert!(sc("1/t").limit_at_zero("t").is_none());
        // limit is symbolic in remaining parameters
        assert_eq!(
            sc("(2 alpha - t)/(2 + 2 t)").limit_at_zero("t").unwrap(),
            sc("alpha")
        );
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(Scalar::parse("e$").is_err());
        assert!(Scalar::parse("1 +").is_err());
        assert!(Scalar::parse("t^-1").is_err());
        assert!(Scalar::parse_with_vars("beta", Some(&["alpha".to_string()])).is_err());
    }

    #[test]
    fn linear_combo_parsing() {
        let params = vec!["t".to_string()];
        let v = parse_linear_combo("t e1 + e2 - e3", 3, &params).unwrap();
        assert_eq!(v[0], sc("t"));
        assert_eq!(v[1], Scalar::one());
        assert_eq!(v[2], sc("-1"));
        let w = parse_linear_combo("(1/t) e4", 4, &params).unwrap();
        assert_eq!(w[3], sc("1/t"));
        assert!(w[0].is_zero());
        assert!(parse_linear_combo("e1 e2", 3, &params).is_err());
        assert!(parse_linear_combo("e1 + t", 3, &params).is_err());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        // small rational-function scalars in alpha and t
        let coeff = (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::from_rat(rat(n, d)));
        let atom = prop_oneof![
            coeff,
            Just(Scalar::param("alpha")),
            Just(Scalar::param("t")),
            Just(Scalar::param("t").add(&Scalar::one())),
        ];
        proptest::collection::vec(atom, 1..4).prop_map(|v| {
            let mut acc = Scalar::one();
            for (i, s) in v.into_iter().enumerate() {
                if i % 2 == 0 {
                    acc = acc.mul(&s);
                } else {
                    acc = acc.add(&s);
                }
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert!(a.add(&b).eq_scalar(&b.add(&a)));
            prop_assert!(a.add(&b).add(&c).eq_scalar(&a.add(&b.add(&c))));
            prop_assert!(a.mul(&b).mul(&c).eq_scalar(&a.mul(&b.mul(&c))));
            prop_assert!(a.mul(&b.add(&c)).eq_scalar(&a.mul(&b).add(&a.mul(&c))));
        }

        #[test]
        fn substitute_is_homomorphism(a in arb_scalar(), b in arb_scalar()) {
            let bind = BTreeMap::from([("alpha".to_string(), Scalar::parse("1 + 2 t").unwrap())]);
            let (sa, sb) = (a.substitute(&bind), b.substitute(&bind));
            prop_assume!(sa.is_ok() && sb.is_ok());
            let (sa, sb) = (sa.unwrap(), sb.unwrap());
            if let Ok(ssum) = a.add(&b).substitute(&bind) {
                prop_assert!(ssum.eq_scalar(&sa.add(&sb)));
            }
            if let Ok(sprod) = a.mul(&b).substitute(&bind) {
                prop_assert!(sprod.eq_scalar(&sa.mul(&sb)));
            }
        }

        #[test]
        fn limit_is_formal_limit(a in arb_scalar()) {
            if let Some(l) = a.limit_at_zero("t") {
                // s - L again has limit 0 at t = 0
                let diff = a.sub(&l);
                let lim = diff.limit_at_zero("t");
                prop_assert!(lim.is_some());
                prop_assert!(lim.unwrap().is_zero());
            }
        }
    }
}
