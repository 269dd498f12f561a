//! Expression grammar for presentation and scenario files.
//!
//! ```text
//! expr    := ['+'|'-'] tensor (('+'|'-') tensor)*
//! tensor  := product ('|' product)*
//! product := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary   := '-' unary | power
//! power   := primary ['^' primary]
//! primary := INT | NAME ['[' expr ']'] | '(' expr ')'
//!          | 'sum' '(' NAME '=' expr '..' expr ')' '{' expr '}'
//!          | 'binom' '(' expr ',' expr ')'
//!          | 'gamma' '(' expr ',' NAME ')'
//! ```
//!
//! Integers are exact (i128) until they meet a generator, at which point they
//! are reduced mod p. `|` separates tensor slots; names resolve against the
//! algebra of the slot they land in.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::hopf_comod::{mul_even, Tensor, TensorCtx, Word};
use crate::graded_algebra::Monomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ExprError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(col: usize, msg: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError { line: 0, col, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i128),
    Ident(String),
    Sym(&'static str),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let b: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = b[st..i].iter().collect();
            out.push((Tok::Int(s.parse().map_err(|_| ExprError { line: 0, col, msg: "integer too large".into() })?), col));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_alphanumeric() || b[i] == '_' || b[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(b[st..i].iter().collect()), col));
        } else if c == '.' && i + 1 < b.len() && b[i + 1] == '.' {
            out.push((Tok::Sym(".."), col));
            i += 2;
        } else {
            let sym = match c {
                '+' => "+",
                '-' => "-",
                '*' => "*",
                '/' => "/",
                '^' => "^",
                '|' => "|",
                '(' => "(",
                ')' => ")",
                '[' => "[",
                ']' => "]",
                '{' => "{",
                '}' => "}",
                ',' => ",",
                '=' => "=",
                _ => return err(col, format!("unexpected character `{c}`")),
            };
            out.push((Tok::Sym(sym), col));
            i += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Int(i128),
    Name(String, usize),
    Indexed(String, Box<Ast>, usize),
    Neg(Box<Ast>),
    Add(Vec<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>),
    Tensor(Vec<Ast>),
    Sum { var: String, lo: Box<Ast>, hi: Box<Ast>, body: Box<Ast> },
    Binom(Box<Ast>, Box<Ast>),
    Gamma(Box<Ast>, String, usize),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }
    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, s: &str) -> Result<(), ExprError> {
        if self.eat(s) {
            Ok(())
        } else {
            err(self.col(), format!("expected `{s}`"))
        }
    }
    fn ident(&mut self) -> Result<String, ExprError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => err(self.col(), "expected a name"),
        }
    }

    fn expr(&mut self) -> Result<Ast, ExprError> {
        let mut terms = Vec::new();
        let mut neg = if self.eat("-") {
            true
        } else {
            self.eat("+");
            false
        };
        loop {
            let t = self.tensor()?;
            terms.push(if neg { Ast::Neg(Box::new(t)) } else { t });
            if self.eat("+") {
                neg = false;
            } else if self.eat("-") {
                neg = true;
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Ast::Add(terms) })
    }

    fn tensor(&mut self) -> Result<Ast, ExprError> {
        let mut parts = vec![self.product()?];
        while self.eat("|") {
            parts.push(self.product()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Ast::Tensor(parts) })
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym("(")))
    }

    fn product(&mut self) -> Result<Ast, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat("*") {
                acc = Ast::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat("/") {
                acc = Ast::Div(Box::new(acc), Box::new(self.unary()?));
            } else if self.starts_primary() {
                acc = Ast::Mul(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, ExprError> {
        if self.eat("-") {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat("^") {
            let e = self.primary()?;
            return Ok(Ast::Pow(Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Ast, ExprError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Ast::Int(n))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "sum" if self.eat("(") => {
                        let var = self.ident()?;
                        self.expect("=")?;
                        let lo = self.expr()?;
                        self.expect("..")?;
                        let hi = self.expr()?;
                        self.expect(")")?;
                        self.expect("{")?;
                        let body = self.expr()?;
                        self.expect("}")?;
                        Ok(Ast::Sum { var, lo: Box::new(lo), hi: Box::new(hi), body: Box::new(body) })
                    }
                    "binom" if self.eat("(") => {
                        let a = self.expr()?;
                        self.expect(",")?;
                        let b = self.expr()?;
                        self.expect(")")?;
                        Ok(Ast::Binom(Box::new(a), Box::new(b)))
                    }
                    "gamma" if self.eat("(") => {
                        let n = self.expr()?;
                        self.expect(",")?;
                        let fam = self.ident()?;
                        self.expect(")")?;
                        Ok(Ast::Gamma(Box::new(n), fam, col))
                    }
                    _ => {
                        if self.eat("[") {
                            let idx = self.expr()?;
                            self.expect("]")?;
                            Ok(Ast::Indexed(name, Box::new(idx), col))
                        } else {
                            Ok(Ast::Name(name, col))
                        }
                    }
                }
            }
            _ => err(col, "expected a term"),
        }
    }
}

pub fn parse(src: &str) -> Result<Ast, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return err(p.col(), "unexpected trailing input");
    }
    Ok(e)
}

/// Integer variables in scope (p, `let` constants, bound indices).
pub type IntEnv = HashMap<String, i128>;

pub fn binom(n: i128, k: i128) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Evaluate a purely integer expression.
pub fn eval_int(ast: &Ast, env: &IntEnv) -> Result<i128, ExprError> {
    match ast {
        Ast::Int(n) => Ok(*n),
        Ast::Name(n, col) => env.get(n).copied().map_or_else(|| err(*col, format!("unknown integer `{n}`")), Ok),
        Ast::Neg(a) => Ok(-eval_int(a, env)?),
        Ast::Add(v) => v.iter().try_fold(0i128, |s, a| Ok(s + eval_int(a, env)?)),
        Ast::Mul(a, b) => eval_int(a, env)?
            .checked_mul(eval_int(b, env)?)
            .map_or_else(|| err(0, "integer overflow"), Ok),
        Ast::Div(a, b) => {
            let (x, y) = (eval_int(a, env)?, eval_int(b, env)?);
            if y == 0 || x % y != 0 {
                return err(0, format!("inexact division {x}/{y}"));
            }
            Ok(x / y)
        }
        Ast::Pow(a, b) => {
            let (x, y) = (eval_int(a, env)?, eval_int(b, env)?);
            if y < 0 {
                return err(0, "negative exponent");
            }
            x.checked_pow(y as u32).map_or_else(|| err(0, "integer overflow"), Ok)
        }
        Ast::Binom(a, b) => Ok(binom(eval_int(a, env)?, eval_int(b, env)?)),
        Ast::Sum { var, lo, hi, body } => {
            let (lo, hi) = (eval_int(lo, env)?, eval_int(hi, env)?);
            let mut env2 = env.clone();
            let mut s = 0;
            for i in lo..=hi {
                env2.insert(var.clone(), i);
                s += eval_int(body, &env2)?;
            }
            Ok(s)
        }
        Ast::Indexed(_, _, col) | Ast::Gamma(_, _, col) => err(*col, "generator in integer context"),
        Ast::Tensor(_) => err(0, "tensor in integer context"),
    }
}

pub fn eval_int_str(src: &str, env: &IntEnv) -> Result<i128, ExprError> {
    eval_int(&parse(src)?, env)
}

/// Name handling shared by a presentation: aliases and families whose index
/// 0 member is the unit.
#[derive(Debug, Clone, Default)]
pub struct Names {
    pub aliases: HashMap<String, String>,
    pub unit0: HashSet<String>,
}

/// Structural number of tensor slots of an expression.
fn arity(ast: &Ast, bound: &mut Vec<String>, ints: &IntEnv) -> Result<usize, ExprError> {
    Ok(match ast {
        Ast::Int(_) | Ast::Binom(..) => 0,
        Ast::Name(n, _) => {
            if bound.contains(n) || ints.contains_key(n) {
                0
            } else {
                1
            }
        }
        Ast::Indexed(..) | Ast::Gamma(..) => 1,
        Ast::Neg(a) | Ast::Pow(a, _) => arity(a, bound, ints)?,
        Ast::Div(a, b) => {
            let (x, y) = (arity(a, bound, ints)?, arity(b, bound, ints)?);
            if y != 0 {
                return err(0, "division by a non-integer");
            }
            x
        }
        Ast::Mul(a, b) => join(arity(a, bound, ints)?, arity(b, bound, ints)?)?,
        Ast::Add(v) => {
            let mut k = 0;
            for a in v {
                k = join(k, arity(a, bound, ints)?)?;
            }
            k
        }
        Ast::Tensor(parts) => {
            let mut k = 0;
            for a in parts {
                k += arity(a, bound, ints)?.max(1);
            }
            k
        }
        Ast::Sum { var, body, .. } => {
            bound.push(var.clone());
            let k = arity(body, bound, ints)?;
            bound.pop();
            k
        }
    })
}

fn join(a: usize, b: usize) -> Result<usize, ExprError> {
    if a != 0 && b != 0 && a != b {
        return err(0, format!("mixing {a}-fold and {b}-fold tensors"));
    }
    Ok(a.max(b))
}

#[derive(Debug, Clone)]
enum Val {
    Int(i128),
    T(Tensor),
}

/// Evaluates expressions into tensors over a fixed list of slot algebras.
pub struct Evaluator<'a> {
    pub ctx: TensorCtx<'a>,
    pub names: &'a Names,
    pub ints: IntEnv,
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: TensorCtx<'a>, names: &'a Names, ints: IntEnv) -> Self {
        Evaluator { ctx, names, ints }
    }

    /// Evaluate to a tensor of the context's full arity.
    pub fn eval(&self, ast: &Ast) -> Result<Tensor, ExprError> {
        let n = self.ctx.arity();
        let k = arity(ast, &mut Vec::new(), &self.ints)?;
        if k != 0 && k != n {
            return err(0, format!("expression has {k} slots, expected {n}"));
        }
        match self.ev(ast, 0, n, &self.ints)? {
            Val::Int(c) => Ok(self.unit_scaled(n, c)),
            Val::T(t) => Ok(t),
        }
    }

    pub fn eval_str(&self, src: &str) -> Result<Tensor, ExprError> {
        self.eval(&parse(src)?)
    }

    fn unit_scaled(&self, n: usize, c: i128) -> Tensor {
        let f = self.ctx.field();
        let mut t = Tensor::default();
        t.add_term(f, Word { slots: vec![Monomial::one(); n], scalar: Monomial::one() }, reduce(f.p(), c));
        t
    }

    fn sub(&self, off: usize, k: usize) -> TensorCtx<'a> {
        TensorCtx { scalar: self.ctx.scalar, slots: &self.ctx.slots[off..off + k] }
    }

    fn ev(&self, ast: &Ast, off: usize, k: usize, env: &IntEnv) -> Result<Val, ExprError> {
        let f = self.ctx.field();
        let mut bound = env.keys().cloned().collect::<Vec<_>>();
        match ast {
            Ast::Int(_) | Ast::Binom(..) => Ok(Val::Int(eval_int(ast, env)?)),
            Ast::Name(n, col) => {
                if let Some(v) = env.get(n) {
                    return Ok(Val::Int(*v));
                }
                self.atom(n, off, *col).map(Val::T)
            }
            Ast::Indexed(n, idx, col) => {
                let i = eval_int(idx, env)?;
                if i == 0 && self.names.unit0.contains(n) {
                    return Ok(Val::T(self.unit_scaled(1, 1)));
                }
                self.atom(&format!("{n}[{i}]"), off, *col).map(Val::T)
            }
            Ast::Gamma(n, fam, col) => {
                let n = eval_int(n, env)?;
                if n < 0 {
                    return err(*col, "negative divided power");
                }
                let alg = self.ctx.slots[off];
                let e = alg.gamma(fam, n as u64).map_err(|e| ExprError { line: 0, col: *col, msg: e.to_string() })?;
                let mut t = Tensor::default();
                for (m, c) in e.terms() {
                    t.add_term(f, Word { slots: vec![m.clone()], scalar: Monomial::one() }, c);
                }
                Ok(Val::T(t))
            }
            Ast::Neg(a) => Ok(match self.ev(a, off, k, env)? {
                Val::Int(c) => Val::Int(-c),
                Val::T(t) => Val::T(self.sub(off, k.max(1)).scale(&t, f.p() - 1)),
            }),
            Ast::Add(v) => {
                let mut acc = Val::Int(0);
                for a in v {
                    let x = self.ev(a, off, k, env)?;
                    acc = match (acc, x) {
                        (Val::Int(a), Val::Int(b)) => Val::Int(a + b),
                        (Val::Int(a), Val::T(t)) | (Val::T(t), Val::Int(a)) => {
                            Val::T(self.sub(off, k).add(&t, &self.unit_scaled(k, a)))
                        }
                        (Val::T(a), Val::T(b)) => Val::T(self.sub(off, k).add(&a, &b)),
                    };
                }
                Ok(acc)
            }
            Ast::Mul(a, b) => {
                let x = self.ev(a, off, k, env)?;
                let y = self.ev(b, off, k, env)?;
                Ok(match (x, y) {
                    (Val::Int(a), Val::Int(b)) => Val::Int(a * b),
                    (Val::Int(a), Val::T(t)) | (Val::T(t), Val::Int(a)) => {
                        Val::T(self.sub(off, k.max(1)).scale(&t, reduce(f.p(), a)))
                    }
                    (Val::T(a), Val::T(b)) => Val::T(self.sub(off, k).mul(&a, &b)),
                })
            }
            Ast::Div(..) => Ok(Val::Int(eval_int(ast, env)?)),
            Ast::Pow(a, e) => {
                let n = eval_int(e, env)?;
                if n < 0 {
                    return err(0, "negative exponent");
                }
                match self.ev(a, off, k, env)? {
                    Val::Int(c) => Ok(Val::Int(c.pow(n as u32))),
                    Val::T(t) => {
                        let kk = arity(a, &mut bound, &self.ints)?.max(1);
                        let ctx = self.sub(off, kk);
                        let mut acc = self.unit_scaled(kk, 1);
                        for _ in 0..n {
                            acc = ctx.mul(&acc, &t);
                            if acc.is_zero() {
                                break;
                            }
                        }
                        Ok(Val::T(acc))
                    }
                }
            }
            Ast::Tensor(parts) => {
                let mut acc: Option<Tensor> = None;
                let mut o = off;
                for a in parts {
                    let w = arity(a, &mut bound, &self.ints)?.max(1);
                    let t = match self.ev(a, o, w, env)? {
                        Val::Int(c) => self.unit_scaled(w, c),
                        Val::T(t) => t,
                    };
                    acc = Some(match acc {
                        None => t,
                        Some(prev) => concat(f, &prev, &t),
                    });
                    o += w;
                }
                Ok(Val::T(acc.unwrap_or_default()))
            }
            Ast::Sum { var, lo, hi, body } => {
                let (lo, hi) = (eval_int(lo, env)?, eval_int(hi, env)?);
                let mut env2 = env.clone();
                let mut acc = Val::Int(0);
                for i in lo..=hi {
                    env2.insert(var.clone(), i);
                    let x = self.ev(body, off, k, &env2)?;
                    acc = match (acc, x) {
                        (Val::Int(a), Val::Int(b)) => Val::Int(a + b),
                        (Val::Int(a), Val::T(t)) | (Val::T(t), Val::Int(a)) => {
                            Val::T(self.sub(off, k).add(&t, &self.unit_scaled(k, a)))
                        }
                        (Val::T(a), Val::T(b)) => Val::T(self.sub(off, k).add(&a, &b)),
                    };
                }
                Ok(acc)
            }
        }
    }

    /// A single named generator placed in slot `off`.
    fn atom(&self, name: &str, off: usize, col: usize) -> Result<Tensor, ExprError> {
        let f = self.ctx.field();
        let name = self.names.aliases.get(name).map(String::as_str).unwrap_or(name);
        if off >= self.ctx.arity() {
            return err(col, format!("`{name}` falls outside the {} slots", self.ctx.arity()));
        }
        let alg = self.ctx.slots[off];
        let mut t = Tensor::default();
        if let Some(g) = alg.find(name) {
            let w = if alg.generator(g).central && alg.fingerprint() == self.ctx.scalar.fingerprint() {
                Word { slots: vec![Monomial::one()], scalar: Monomial::gen(g) }
            } else {
                Word { slots: vec![Monomial::gen(g)], scalar: Monomial::one() }
            };
            t.add_term(f, w, 1);
            return Ok(t);
        }
        if let Some(g) = self.ctx.scalar.find(name) {
            if self.ctx.scalar.generator(g).central {
                t.add_term(f, Word { slots: vec![Monomial::one()], scalar: Monomial::gen(g) }, 1);
                return Ok(t);
            }
        }
        err(col, format!("unknown generator `{name}` in slot {}", off + 1))
    }
}

fn reduce(p: u32, c: i128) -> u32 {
    c.rem_euclid(p as i128) as u32
}

/// a ⊗ b by concatenating slots.
fn concat(f: crate::fp_linear::Fp, a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::default();
    for (wa, &ca) in &a.terms {
        for (wb, &cb) in &b.terms {
            let mut slots = wa.slots.clone();
            slots.extend(wb.slots.iter().cloned());
            out.add_term(f, Word { slots, scalar: mul_even(&wa.scalar, &wb.scalar) }, f.mul(ca, cb));
        }
    }
    out
}

/// Group words of a tensor by their slot part (used when comparing displays).
pub fn by_slots(t: &Tensor) -> BTreeMap<Vec<Monomial>, Vec<(Monomial, u32)>> {
    let mut out: BTreeMap<Vec<Monomial>, Vec<(Monomial, u32)>> = BTreeMap::new();
    for (w, &c) in &t.terms {
        out.entry(w.slots.clone()).or_default().push((w.scalar.clone(), c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp_linear::Fp;
    use crate::graded_algebra::{Algebra, GenKind, Generator};

    #[test]
    fn integers() {
        let mut env = IntEnv::new();
        env.insert("p".into(), 5);
        assert_eq!(eval_int_str("2*(p^2-1)", &env).unwrap(), 48);
        assert_eq!(eval_int_str("binom(p,2)/p", &env).unwrap(), 2);
        assert_eq!(eval_int_str("sum(i=1..p-1){binom(p,i)}", &env).unwrap(), 30);
        assert!(eval_int_str("7/2", &env).is_err());
        let e = parse("a + (b").unwrap_err();
        assert_eq!(e.col, 7);
    }

    #[test]
    fn tensors() {
        let f = Fp::new(5).unwrap();
        let a = Algebra::new(
            f,
            vec![Generator::new("x", 1, GenKind::Exterior), Generator::new("y", 2, GenKind::Polynomial)],
        )
        .unwrap();
        let slots = [&a, &a];
        let ctx = TensorCtx { scalar: &a, slots: &slots };
        let names = Names::default();
        let mut ints = IntEnv::new();
        ints.insert("p".into(), 5);
        let ev = Evaluator::new(ctx, &names, ints);
        let t = ev.eval_str("x|y + 2 y|x - 1|x y").unwrap();
        assert_eq!(t.terms.len(), 3);
        // (x|1)(1|x) = x|x, (1|x)(x|1) = -x|x
        let u = ev.eval_str("(1|x)*(x|1) + (x|1)*(1|x)").unwrap();
        assert!(u.is_zero());
        let s = ev.eval_str("sum(i=0..2){ y^i | y^(2-i) }").unwrap();
        assert_eq!(s.terms.len(), 3);
        assert!(ev.eval_str("x|y|x").is_err());
        assert!(ev.eval_str("z|1").is_err());
    }
}
