//! Shipped presentations and the loader that turns presentation files into
//! Hopf algebroids, comodule algebras and differential algebras.

pub mod format;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::expr::{eval_int_str, parse, Evaluator, ExprError, IntEnv, Names};
use crate::fp_linear::{Fp, LinearError};
use crate::graded_algebra::{Algebra, AlgebraError, Element, GenId, GenKind, Generator, SigmaImage};
use crate::hopf_comod::{
    check_comodule_axioms, check_hopf_axioms, AlgComodule, AxiomReport, ComodError, Hopf, Tensor, TensorCtx,
};
use format::{parse_file, resolve_conditionals, Directive, FileKind, GenOpts, KindSpec, Lhs, Line};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresetError {
    #[error("{file}:{line}:{col}: {msg}")]
    Parse { file: String, line: usize, col: usize, msg: String },
    #[error("unknown preset `{0}`")]
    Unknown(String),
    #[error("preset `{name}` needs p >= {min}, got p = {p}")]
    PrimeTooSmall { name: String, min: u32, p: u32 },
    #[error("cap {cap} exceeds the largest supported cap {max} of `{name}`")]
    CapTooLarge { name: String, cap: i64, max: i64 },
    #[error("preset `{name}` is not a {expected}")]
    WrongKind { name: String, expected: &'static str },
    #[error("`{name}` fails {axiom} at {monomial}: {detail}")]
    Axiom { name: String, axiom: &'static str, monomial: String, detail: String },
    #[error("include cycle through `{0}`")]
    IncludeCycle(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Comod(#[from] ComodError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

const BUILTIN: &[(&str, &str)] = &[
    ("a-star", include_str!("../../data/presets/a-star.txt")),
    ("bp", include_str!("../../data/presets/bp.txt")),
    ("hk", include_str!("../../data/presets/hk.txt")),
    ("v1-hk", include_str!("../../data/presets/v1-hk.txt")),
    ("v1-hk-display", include_str!("../../data/presets/v1-hk-display.txt")),
    ("bpv1-thh", include_str!("../../data/presets/bpv1-thh.txt")),
    ("lemma34", include_str!("../../data/presets/lemma34.txt")),
    ("may", include_str!("../../data/presets/may.txt")),
];

/// Parameters fixed when a presentation is instantiated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildOpts {
    pub p: u32,
    /// Overrides the file's `cap`.
    pub cap: Option<i64>,
    /// Height of the column class (t^columns = 0); below 2 the class is omitted.
    pub columns: u32,
    pub flags: BTreeSet<String>,
}

impl Default for BuildOpts {
    fn default() -> Self {
        BuildOpts { p: 5, cap: None, columns: 0, flags: BTreeSet::new() }
    }
}

impl BuildOpts {
    pub fn p(p: u32) -> Self {
        BuildOpts { p, ..Default::default() }
    }
    pub fn cap(mut self, cap: i64) -> Self {
        self.cap = Some(cap);
        self
    }
    pub fn columns(mut self, k: u32) -> Self {
        self.columns = k;
        self
    }
    pub fn flag(mut self, f: &str) -> Self {
        self.flags.insert(f.to_string());
        self
    }
}

#[derive(Debug, Clone)]
pub struct HopfPreset {
    pub hopf: Arc<Hopf>,
    pub names: Names,
    pub note: String,
}

#[derive(Debug)]
pub struct ComodulePreset {
    pub comod: AlgComodule,
    /// The column class t, when built with at least two columns.
    pub column: Option<GenId>,
    pub names: Names,
    pub note: String,
}

impl ComodulePreset {
    pub fn hopf(&self) -> &Arc<Hopf> {
        &self.comod.hopf
    }
    pub fn alg(&self) -> &Algebra {
        &self.comod.alg
    }
    /// Evaluate a tensor expression over (hopf slots…, comodule).
    pub fn eval(&self, slots: &[&Algebra], src: &str) -> Result<Tensor, ExprError> {
        self.eval_with(slots, src, &IntEnv::new())
    }
    /// As `eval`, with extra integer bindings next to `p`.
    pub fn eval_with(&self, slots: &[&Algebra], src: &str, extra: &IntEnv) -> Result<Tensor, ExprError> {
        let ctx = TensorCtx { scalar: &self.comod.hopf.alg, slots };
        let mut ints = extra.clone();
        ints.insert("p".into(), self.comod.alg.p() as i128);
        Evaluator::new(ctx, &self.names, ints).eval_str(src)
    }
    /// Evaluate an element of the comodule algebra.
    pub fn element(&self, src: &str) -> Result<Element, PresetError> {
        let slots = [&self.comod.alg];
        let t = self.eval(&slots, src).map_err(|e| expr_err("<expr>", 1, 1, e))?;
        tensor_to_element(&self.comod.alg, &t)
    }
}

/// A differential graded algebra given by generator-level differentials per round.
#[derive(Debug, Clone)]
pub struct DiffAlgebra {
    pub name: String,
    pub alg: Algebra,
    pub rounds: Vec<(i64, Vec<(GenId, Element)>)>,
    pub cap: i64,
    pub note: String,
}

#[derive(Debug)]
pub enum Loaded {
    Hopf(HopfPreset),
    Comodule(ComodulePreset),
    Algebra(DiffAlgebra),
}

impl Loaded {
    pub fn note(&self) -> &str {
        match self {
            Loaded::Hopf(h) => &h.note,
            Loaded::Comodule(c) => &c.note,
            Loaded::Algebra(a) => &a.note,
        }
    }
}

fn expr_err(file: &str, line: usize, col: usize, e: ExprError) -> PresetError {
    let c = if e.col == 0 { col } else { col + e.col - 1 };
    PresetError::Parse { file: file.to_string(), line, col: c, msg: e.msg }
}

/// A one-slot tensor with trivial scalars, read as an algebra element.
pub fn tensor_to_element(alg: &Algebra, t: &Tensor) -> Result<Element, PresetError> {
    let mut e = alg.zero();
    for (w, &c) in &t.terms {
        if w.slots.len() != 1 || !w.scalar.is_one() {
            return Err(ComodError::Invalid("expected a single-slot expression".into()).into());
        }
        alg.add_term(&mut e, w.slots[0].clone(), c);
    }
    Ok(e)
}

struct Header {
    name: String,
    kind: Option<FileKind>,
    note: String,
    cap: Option<i64>,
    maxcap: Option<i64>,
    minprime: u32,
    ints: IntEnv,
}

/// Generators collected from `gen`, `family`, `divided` and `column` lines.
struct GenSet {
    gens: Vec<Generator>,
    /// (generator name, expression, bound variable, file, line)
    sigma: Vec<(String, String, Option<(String, i64)>, String, usize)>,
    names: Names,
    dropped: HashSet<String>,
    column: Option<String>,
}

fn ierr(l: &Line, e: ExprError) -> PresetError {
    expr_err(&l.file, l.line, 1, e)
}

fn kind_of(spec: &KindSpec, ints: &IntEnv, l: &Line) -> Result<GenKind, PresetError> {
    Ok(match spec {
        KindSpec::Poly => GenKind::Polynomial,
        KindSpec::Ext => GenKind::Exterior,
        KindSpec::Trunc(h) => {
            let h = eval_int_str(h, ints).map_err(|e| ierr(l, e))?;
            if !(2..=u32::MAX as i128).contains(&h) {
                return Err(PresetError::Parse { file: l.file.clone(), line: l.line, col: 1, msg: format!("bad height {h}") });
            }
            GenKind::Truncated(h as u32)
        }
    })
}

fn apply_opts(
    mut g: Generator,
    o: &GenOpts,
    ints: &IntEnv,
    l: &Line,
    var: Option<(&str, i64)>,
    set: &mut GenSet,
) -> Result<Generator, PresetError> {
    let mut env = ints.clone();
    if let Some((v, i)) = var {
        env.insert(v.to_string(), i as i128);
    }
    if let Some(w) = &o.weight {
        let w = eval_int_str(w, &env).map_err(|e| ierr(l, e))?;
        g = g.weight(w.max(0) as u64);
    }
    if let Some(c) = &o.cap {
        g.exp_cap = Some(eval_int_str(c, &env).map_err(|e| ierr(l, e))?.max(0) as u32);
    }
    if o.central {
        g = g.central();
    }
    if let Some(s) = &o.sigma {
        set.sigma.push((
            g.name.clone(),
            s.clone(),
            var.map(|(v, i)| (v.to_string(), i)),
            l.file.clone(),
            l.line,
        ));
    }
    Ok(g)
}

fn collect_gens(lines: &[Line], ints: &IntEnv, cap: i64, columns: u32, p: u32) -> Result<GenSet, PresetError> {
    let mut set = GenSet {
        gens: Vec::new(),
        sigma: Vec::new(),
        names: Names::default(),
        dropped: HashSet::new(),
        column: None,
    };
    for l in lines {
        match &l.directive {
            Directive::Alias(a, b) => {
                set.names.aliases.insert(a.clone(), b.clone());
            }
            Directive::Gen { name, degree, kind, opts } => {
                let d = eval_int_str(degree, ints).map_err(|e| ierr(l, e))? as i64;
                if d > cap {
                    set.dropped.insert(name.clone());
                    continue;
                }
                let g = Generator::new(name, d, kind_of(kind, ints, l)?);
                let g = apply_opts(g, opts, ints, l, None, &mut set)?;
                set.gens.push(g);
            }
            Directive::Family { name, kind, from, to, degree, unit0, opts } => {
                if *unit0 {
                    set.names.unit0.insert(name.clone());
                }
                let k = kind_of(kind, ints, l)?;
                let mut i = *from;
                loop {
                    if to.is_some_and(|t| i > t) || i > from + 64 {
                        break;
                    }
                    let mut env = ints.clone();
                    env.insert("i".into(), i as i128);
                    let d = eval_int_str(degree, &env).map_err(|e| ierr(l, e))?;
                    if d > cap as i128 {
                        break;
                    }
                    let g = Generator::member(name, i, d as i64, k.clone());
                    let g = apply_opts(g, opts, ints, l, Some(("i", i)), &mut set)?;
                    set.gens.push(g);
                    i += 1;
                }
            }
            Directive::Divided { name, degree, opts } => {
                let base = eval_int_str(degree, ints).map_err(|e| ierr(l, e))?;
                let mut k = 0i64;
                let mut d = base;
                while d <= cap as i128 && k < 40 {
                    let mut g = Generator::member(name, k, d as i64, GenKind::Truncated(p));
                    g.divided = Some(k as u32);
                    let g = apply_opts(g, opts, ints, l, Some(("k", k)), &mut set)?;
                    set.gens.push(g);
                    k += 1;
                    d *= p as i128;
                }
            }
            Directive::Column { name, degree } => {
                if columns < 2 {
                    set.dropped.insert(name.clone());
                    continue;
                }
                let d = eval_int_str(degree, ints).map_err(|e| ierr(l, e))? as i64;
                set.gens.push(Generator::new(name, d, GenKind::Truncated(columns)));
                set.sigma.push((name.clone(), "0".into(), None, l.file.clone(), l.line));
                set.column = Some(name.clone());
            }
            _ => {}
        }
    }
    Ok(set)
}

/// Generators (with index bindings) named by a left side.
fn targets(alg: &Algebra, lhs: &Lhs, names: &Names, dropped: &HashSet<String>, l: &Line) -> Result<Vec<(GenId, IntEnv)>, PresetError> {
    match &lhs.var {
        Some(v) => {
            let out: Vec<_> = alg
                .gens()
                .iter()
                .enumerate()
                .filter(|(_, g)| g.family == lhs.name && g.name != g.family)
                .map(|(id, g)| {
                    let mut env = IntEnv::new();
                    env.insert(v.clone(), g.index as i128);
                    (id, env)
                })
                .collect();
            if out.is_empty() {
                return Err(PresetError::Parse {
                    file: l.file.clone(),
                    line: l.line,
                    col: 1,
                    msg: format!("no family `{}`", lhs.name),
                });
            }
            Ok(out)
        }
        None => {
            let n = names.aliases.get(&lhs.name).unwrap_or(&lhs.name);
            if dropped.contains(n) {
                return Ok(vec![]);
            }
            match alg.find(n) {
                Some(id) => Ok(vec![(id, IntEnv::new())]),
                None => Err(PresetError::Parse {
                    file: l.file.clone(),
                    line: l.line,
                    col: 1,
                    msg: format!("unknown generator `{n}`"),
                }),
            }
        }
    }
}

/// Presentation sources by name: the shipped ones plus any added files.
#[derive(Debug, Clone)]
pub struct Library {
    files: BTreeMap<String, String>,
}

impl Default for Library {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Library {
    pub fn builtin() -> Self {
        Library { files: BUILTIN.iter().map(|(n, s)| (n.to_string(), s.to_string())).collect() }
    }

    pub fn names(&self) -> Vec<String> {
        self.files.keys().cloned().collect()
    }

    pub fn source(&self, name: &str) -> Option<&str> {
        self.files.get(name).map(String::as_str)
    }

    /// Register source text; its `name` directive (or `fallback`) becomes the key.
    pub fn add_source(&mut self, fallback: &str, src: &str) -> Result<String, PresetError> {
        let lines = parse_file(fallback, src)?;
        let name = lines
            .iter()
            .find_map(|l| match &l.directive {
                Directive::Name(n) => Some(n.clone()),
                _ => None,
            })
            .unwrap_or_else(|| fallback.to_string());
        self.files.insert(name.clone(), src.to_string());
        Ok(name)
    }

    pub fn add_path(&mut self, path: &Path) -> Result<String, PresetError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| PresetError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("preset");
        self.add_source(stem, &src)
    }

    /// Resolve a name, registering it as a file when it is a readable path.
    pub fn resolve(&mut self, name_or_path: &str) -> Result<String, PresetError> {
        if self.files.contains_key(name_or_path) {
            return Ok(name_or_path.to_string());
        }
        let p = Path::new(name_or_path);
        if p.is_file() {
            return self.add_path(p);
        }
        Err(PresetError::Unknown(name_or_path.to_string()))
    }

    fn lines(&self, name: &str, flags: &BTreeSet<String>, stack: &mut Vec<String>) -> Result<Vec<Line>, PresetError> {
        if stack.iter().any(|s| s == name) {
            return Err(PresetError::IncludeCycle(name.to_string()));
        }
        let src = self.files.get(name).ok_or_else(|| PresetError::Unknown(name.to_string()))?;
        let lines = resolve_conditionals(parse_file(name, src)?, flags)?;
        stack.push(name.to_string());
        let mut out = Vec::new();
        for l in lines {
            if let Directive::Include(inc) = &l.directive {
                for il in self.lines(inc, flags, stack)? {
                    match il.directive {
                        Directive::Name(_)
                        | Directive::Kind(_)
                        | Directive::Note(_)
                        | Directive::Cap(_)
                        | Directive::MaxCap(_)
                        | Directive::MinPrime(_) => {}
                        _ => out.push(il),
                    }
                }
            } else {
                out.push(l);
            }
        }
        stack.pop();
        Ok(out)
    }

    fn header(&self, name: &str, lines: &[Line], p: u32) -> Result<Header, PresetError> {
        let mut h = Header {
            name: name.to_string(),
            kind: None,
            note: String::new(),
            cap: None,
            maxcap: None,
            minprime: 2,
            ints: IntEnv::new(),
        };
        h.ints.insert("p".into(), p as i128);
        for l in lines {
            match &l.directive {
                Directive::Name(n) => h.name = n.clone(),
                Directive::Kind(k) => h.kind = Some(k.clone()),
                Directive::Note(n) => {
                    if !h.note.is_empty() {
                        h.note.push(' ');
                    }
                    h.note.push_str(n);
                }
                Directive::Let(n, e) => {
                    let v = eval_int_str(e, &h.ints).map_err(|e| ierr(l, e))?;
                    h.ints.insert(n.clone(), v);
                }
                Directive::Cap(e) => h.cap = Some(eval_int_str(e, &h.ints).map_err(|e| ierr(l, e))? as i64),
                Directive::MaxCap(e) => h.maxcap = Some(eval_int_str(e, &h.ints).map_err(|e| ierr(l, e))? as i64),
                Directive::MinPrime(e) => h.minprime = eval_int_str(e, &h.ints).map_err(|e| ierr(l, e))? as u32,
                _ => {}
            }
        }
        if p < h.minprime {
            return Err(PresetError::PrimeTooSmall { name: h.name, min: h.minprime, p });
        }
        Ok(h)
    }

    fn prepare(&self, name: &str, opts: &BuildOpts) -> Result<(Header, Vec<Line>, i64), PresetError> {
        Fp::new(opts.p)?;
        let lines = self.lines(name, &opts.flags, &mut Vec::new())?;
        let h = self.header(name, &lines, opts.p)?;
        let cap = opts.cap.or(h.cap).unwrap_or(60);
        if let Some(max) = h.maxcap {
            if cap > max {
                return Err(PresetError::CapTooLarge { name: h.name.clone(), cap, max });
            }
        }
        Ok((h, lines, cap))
    }

    pub fn kind(&self, name: &str) -> Result<FileKind, PresetError> {
        let lines = self.lines(name, &BTreeSet::new(), &mut Vec::new())?;
        lines
            .iter()
            .find_map(|l| match &l.directive {
                Directive::Kind(k) => Some(k.clone()),
                _ => None,
            })
            .ok_or_else(|| PresetError::WrongKind { name: name.to_string(), expected: "declared kind" })
    }

    pub fn hopf(&self, name: &str, opts: &BuildOpts) -> Result<HopfPreset, PresetError> {
        let (h, lines, cap) = self.prepare(name, opts)?;
        if h.kind != Some(FileKind::Hopf) {
            return Err(PresetError::WrongKind { name: name.into(), expected: "hopf" });
        }
        let field = Fp::new(opts.p)?;
        let set = collect_gens(&lines, &h.ints, cap, 0, opts.p)?;
        let alg = Algebra::new(field, set.gens)?;
        let names = set.names;
        let slots = [&alg, &alg];
        let ctx = TensorCtx { scalar: &alg, slots: &slots };
        let mut delta: Vec<(GenId, Tensor)> = Vec::new();
        let mut counit = Vec::new();
        for l in &lines {
            match &l.directive {
                Directive::Delta { lhs, expr, col } => {
                    let ast = parse(expr).map_err(|e| expr_err(&l.file, l.line, *col, e))?;
                    for (g, env) in targets(&alg, lhs, &names, &set.dropped, l)? {
                        let mut ints = h.ints.clone();
                        ints.extend(env);
                        let t = Evaluator::new(ctx, &names, ints)
                            .eval(&ast)
                            .map_err(|e| expr_err(&l.file, l.line, *col, e))?;
                        if delta.iter().any(|(x, _)| *x == g) {
                            return Err(PresetError::Parse {
                                file: l.file.clone(),
                                line: l.line,
                                col: 1,
                                msg: format!("second coproduct for `{}`", alg.generator(g).name),
                            });
                        }
                        delta.push((g, t));
                    }
                }
                Directive::Counit { name: n, expr } => {
                    let v = eval_int_str(expr, &h.ints).map_err(|e| ierr(l, e))?;
                    let g = alg.id(n)?;
                    counit.push((g, v.rem_euclid(opts.p as i128) as u32));
                }
                _ => {}
            }
        }
        let hopf = Hopf::new(&h.name, alg.clone(), delta, counit, cap)?;
        Ok(HopfPreset { hopf: Arc::new(hopf), names, note: h.note })
    }

    /// The algebra of a comodule or algebra preset, without coactions or the
    /// `maxcap` limit (used for degree and filtration counting).
    pub fn bare_algebra(&self, name: &str, opts: &BuildOpts) -> Result<Algebra, PresetError> {
        Fp::new(opts.p)?;
        let lines = self.lines(name, &opts.flags, &mut Vec::new())?;
        let h = self.header(name, &lines, opts.p)?;
        let cap = opts.cap.or(h.cap).unwrap_or(60);
        let set = collect_gens(&lines, &h.ints, cap, opts.columns, opts.p)?;
        Ok(Algebra::new(Fp::new(opts.p)?, set.gens)?)
    }

    fn with_sigma(&self, alg: &mut Algebra, set: &GenSet, ints: &IntEnv) -> Result<(), PresetError> {
        for (g, src, var, file, line) in &set.sigma {
            let id = alg.id(g)?;
            let img = if src == "0" {
                SigmaImage::Zero
            } else if set.dropped.contains(src.trim()) {
                return Err(PresetError::Parse {
                    file: file.clone(),
                    line: *line,
                    col: 1,
                    msg: format!("σ({g}) = {src} lies above the cap; raise the cap past |{src}|"),
                });
            } else {
                let slots = [&*alg];
                let ctx = TensorCtx { scalar: alg, slots: &slots };
                let mut env = ints.clone();
                if let Some((v, i)) = var {
                    env.insert(v.clone(), *i as i128);
                }
                let t = Evaluator::new(ctx, &set.names, env)
                    .eval_str(src)
                    .map_err(|e| expr_err(file, *line, 1, e))?;
                SigmaImage::Image(tensor_to_element(alg, &t)?)
            };
            alg.set_sigma(id, img)?;
        }
        Ok(())
    }

    pub fn comodule(&self, name: &str, opts: &BuildOpts) -> Result<ComodulePreset, PresetError> {
        let (h, lines, cap) = self.prepare(name, opts)?;
        let Some(FileKind::Comodule(hname)) = &h.kind else {
            return Err(PresetError::WrongKind { name: name.into(), expected: "comodule" });
        };
        let (hh, _, hcap) = self.prepare(hname, &BuildOpts { cap: None, ..opts.clone() })?;
        let hopt = BuildOpts { cap: Some(hcap.max(cap)), columns: 0, ..opts.clone() };
        if let Some(max) = hh.maxcap {
            if hcap.max(cap) > max {
                return Err(PresetError::CapTooLarge { name: h.name.clone(), cap, max });
            }
        }
        let hp = self.hopf(hname, &hopt)?;
        let field = Fp::new(opts.p)?;
        let set = collect_gens(&lines, &h.ints, cap, opts.columns, opts.p)?;
        let mut alg = Algebra::new(field, set.gens.clone())?;
        self.with_sigma(&mut alg, &set, &h.ints)?;
        let mut names = set.names.clone();
        names.unit0.extend(hp.names.unit0.iter().cloned());
        for (a, b) in &hp.names.aliases {
            names.aliases.entry(a.clone()).or_insert_with(|| b.clone());
        }
        let slots = [&hp.hopf.alg, &alg];
        let ctx = TensorCtx { scalar: &hp.hopf.alg, slots: &slots };
        let mut psi: Vec<(GenId, Tensor)> = Vec::new();
        for l in &lines {
            if let Directive::Psi { lhs, expr, col } = &l.directive {
                let ast = parse(expr).map_err(|e| expr_err(&l.file, l.line, *col, e))?;
                for (g, env) in targets(&alg, lhs, &names, &set.dropped, l)? {
                    let mut ints = h.ints.clone();
                    ints.extend(env);
                    let t = Evaluator::new(ctx, &names, ints)
                        .eval(&ast)
                        .map_err(|e| expr_err(&l.file, l.line, *col, e))?;
                    if psi.iter().any(|(x, _)| *x == g) {
                        return Err(PresetError::Parse {
                            file: l.file.clone(),
                            line: l.line,
                            col: 1,
                            msg: format!("second coaction for `{}`", alg.generator(g).name),
                        });
                    }
                    psi.push((g, t));
                }
            }
        }
        let column = set.column.as_ref().map(|c| alg.id(c)).transpose()?;
        let comod = AlgComodule::new(&h.name, hp.hopf.clone(), alg, psi, cap)?;
        Ok(ComodulePreset { comod, column, names, note: h.note })
    }

    pub fn algebra(&self, name: &str, opts: &BuildOpts) -> Result<DiffAlgebra, PresetError> {
        let (h, lines, cap) = self.prepare(name, opts)?;
        if h.kind != Some(FileKind::Algebra) {
            return Err(PresetError::WrongKind { name: name.into(), expected: "algebra" });
        }
        let field = Fp::new(opts.p)?;
        let set = collect_gens(&lines, &h.ints, cap, opts.columns, opts.p)?;
        let mut alg = Algebra::new(field, set.gens.clone())?;
        self.with_sigma(&mut alg, &set, &h.ints)?;
        let slots = [&alg];
        let ctx = TensorCtx { scalar: &alg, slots: &slots };
        let mut rounds: BTreeMap<i64, Vec<(GenId, Element)>> = BTreeMap::new();
        for l in &lines {
            if let Directive::Diff { round, lhs, expr, col } = &l.directive {
                let r = eval_int_str(round, &h.ints).map_err(|e| ierr(l, e))? as i64;
                let ast = parse(expr).map_err(|e| expr_err(&l.file, l.line, *col, e))?;
                for (g, env) in targets(&alg, lhs, &set.names, &set.dropped, l)? {
                    let mut ints = h.ints.clone();
                    ints.extend(env);
                    let t = Evaluator::new(ctx, &set.names, ints)
                        .eval(&ast)
                        .map_err(|e| expr_err(&l.file, l.line, *col, e))?;
                    rounds.entry(r).or_default().push((g, tensor_to_element(&alg, &t)?));
                }
            }
        }
        Ok(DiffAlgebra { name: h.name, alg, rounds: rounds.into_iter().collect(), cap, note: h.note })
    }

    /// Build whatever kind the file declares.
    pub fn build(&self, name: &str, opts: &BuildOpts) -> Result<Loaded, PresetError> {
        Ok(match self.kind(name)? {
            FileKind::Hopf => Loaded::Hopf(self.hopf(name, opts)?),
            FileKind::Comodule(_) => Loaded::Comodule(self.comodule(name, opts)?),
            FileKind::Algebra => Loaded::Algebra(self.algebra(name, opts)?),
        })
    }

    /// Build and run the axiom checks; the first failure becomes an error.
    pub fn load(&self, name: &str, opts: &BuildOpts) -> Result<Loaded, PresetError> {
        let l = self.build(name, opts)?;
        let rep = check_loaded(&l)?;
        if let Some(f) = rep.failures.first() {
            return Err(PresetError::Axiom {
                name: name.to_string(),
                axiom: f.axiom,
                monomial: f.monomial.clone(),
                detail: f.detail.clone(),
            });
        }
        Ok(l)
    }
}

/// Axiom report for a built preset (algebras only check d on generators is homogeneous).
pub fn check_loaded(l: &Loaded) -> Result<AxiomReport, PresetError> {
    Ok(match l {
        Loaded::Hopf(h) => check_hopf_axioms(&h.hopf)?,
        Loaded::Comodule(c) => check_comodule_axioms(&c.comod)?,
        Loaded::Algebra(a) => {
            let mut rep = AxiomReport::default();
            for (_, gens) in &a.rounds {
                for (g, e) in gens {
                    rep.checked += 1;
                    let want = a.alg.generator(*g).degree - 1;
                    if !e.is_zero() && a.alg.element_degree(e) != Some(want) {
                        rep.failures.push(crate::hopf_comod::AxiomFailure {
                            axiom: "homogeneity",
                            monomial: a.alg.generator(*g).name.clone(),
                            detail: format!("d has degree {:?}, expected {want}", a.alg.element_degree(e)),
                        });
                    }
                }
            }
            rep
        }
    })
}
