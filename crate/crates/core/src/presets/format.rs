//! Line-oriented presentation files.
//!
//! ```text
//! file      := line*
//! line      := directive ['#' comment]
//! directive := 'name' NAME
//!            | 'kind' ('hopf' | 'comodule' HOPF | 'algebra')
//!            | 'note' TEXT
//!            | 'cap' INTEXPR | 'maxcap' INTEXPR | 'minprime' INTEXPR
//!            | 'let' NAME '=' INTEXPR
//!            | 'include' PRESET
//!            | 'alias' NAME '=' GEN
//!            | 'gen' NAME INTEXPR KIND OPT*
//!            | 'family' NAME KIND 'from' INT ['to' INT] 'degree' INTEXPR(i) ['unit0'] OPT*
//!            | 'divided' NAME INTEXPR OPT*
//!            | 'column' NAME INTEXPR
//!            | ('delta' | 'psi') LHS '=' EXPR
//!            | 'counit' NAME '=' INTEXPR
//!            | 'diff' INTEXPR LHS '=' EXPR
//!            | 'if' ['!'] FLAG | 'else' | 'end'
//! KIND      := 'poly' | 'ext' | 'trunc' INTEXPR
//! OPT       := 'weight' INTEXPR | 'sigma' (EXPR | '0') | 'central' | 'cap' INTEXPR
//! LHS       := NAME | NAME '[' VAR ']'
//! ```
//!
//! Tokens of `gen`, `family` and `divided` lines are whitespace separated, so
//! their integer expressions must not contain spaces. `EXPR` is the grammar of
//! [`crate::expr`]. Family and divided-power members are named `NAME[i]` and
//! kept while their degree stays within the cap; a `divided` member `NAME[k]`
//! is γ_{p^k} with degree p^k times the base degree and weight expressions in `k`.

use crate::presets::PresetError;

#[derive(Debug, Clone, PartialEq)]
pub enum KindSpec {
    Poly,
    Ext,
    Trunc(String),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenOpts {
    pub weight: Option<String>,
    pub sigma: Option<String>,
    pub central: bool,
    pub cap: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lhs {
    pub name: String,
    pub var: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FileKind {
    Hopf,
    Comodule(String),
    Algebra,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    Name(String),
    Kind(FileKind),
    Note(String),
    Cap(String),
    MaxCap(String),
    MinPrime(String),
    Let(String, String),
    Alias(String, String),
    Gen { name: String, degree: String, kind: KindSpec, opts: GenOpts },
    Family { name: String, kind: KindSpec, from: i64, to: Option<i64>, degree: String, unit0: bool, opts: GenOpts },
    Divided { name: String, degree: String, opts: GenOpts },
    Column { name: String, degree: String },
    Delta { lhs: Lhs, expr: String, col: usize },
    Psi { lhs: Lhs, expr: String, col: usize },
    Counit { name: String, expr: String },
    Diff { round: String, lhs: Lhs, expr: String, col: usize },
    If { flag: String, negated: bool },
    Else,
    End,
    Include(String),
}

/// A directive with its source location.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub file: String,
    pub line: usize,
    pub directive: Directive,
}

fn perr(file: &str, line: usize, col: usize, msg: impl Into<String>) -> PresetError {
    PresetError::Parse { file: file.to_string(), line, col, msg: msg.into() }
}

/// Whitespace tokens with their 1-based columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out.into_iter().map(|(i, t)| (s[..i].chars().count() + 1, t)).collect()
}

fn parse_lhs(file: &str, line: usize, col: usize, s: &str) -> Result<Lhs, PresetError> {
    match s.find('[') {
        None => Ok(Lhs { name: s.to_string(), var: None }),
        Some(i) => {
            if !s.ends_with(']') || i == 0 {
                return Err(perr(file, line, col, format!("malformed left side `{s}`")));
            }
            Ok(Lhs { name: s[..i].to_string(), var: Some(s[i + 1..s.len() - 1].to_string()) })
        }
    }
}

/// Split `LHS = EXPR`, returning the left token and the expression with its column.
fn split_eq<'a>(file: &str, line: usize, raw: &'a str, after: usize) -> Result<(&'a str, usize, &'a str, usize), PresetError> {
    let rest = &raw[after..];
    let eq = rest.find('=').ok_or_else(|| perr(file, line, after + 1, "expected `=`"))?;
    let lhs = rest[..eq].trim();
    let lhs_col = raw[..after + rest[..eq].find(lhs).unwrap_or(0)].chars().count() + 1;
    let expr_start = after + eq + 1;
    let expr = raw[expr_start..].trim_start();
    let expr_col = raw[..raw.len() - expr.len()].chars().count() + 1;
    if lhs.is_empty() {
        return Err(perr(file, line, lhs_col, "missing left side"));
    }
    if expr.trim().is_empty() {
        return Err(perr(file, line, expr_col, "missing expression"));
    }
    Ok((lhs, lhs_col, expr.trim_end(), expr_col))
}

fn parse_kind(
    file: &str,
    line: usize,
    toks: &[(usize, &str)],
    i: &mut usize,
) -> Result<KindSpec, PresetError> {
    let (col, t) = *toks.get(*i).ok_or_else(|| perr(file, line, 0, "missing generator kind"))?;
    *i += 1;
    Ok(match t {
        "poly" => KindSpec::Poly,
        "ext" => KindSpec::Ext,
        "trunc" => {
            let (_, h) = *toks.get(*i).ok_or_else(|| perr(file, line, col, "trunc needs a height"))?;
            *i += 1;
            KindSpec::Trunc(h.to_string())
        }
        other => return Err(perr(file, line, col, format!("unknown kind `{other}`"))),
    })
}

fn parse_opts(file: &str, line: usize, toks: &[(usize, &str)], mut i: usize) -> Result<GenOpts, PresetError> {
    let mut o = GenOpts::default();
    while i < toks.len() {
        let (col, t) = toks[i];
        let arg = |i: usize| -> Result<String, PresetError> {
            toks.get(i + 1).map(|x| x.1.to_string()).ok_or_else(|| perr(file, line, col, format!("`{t}` needs a value")))
        };
        match t {
            "weight" => {
                o.weight = Some(arg(i)?);
                i += 2;
            }
            "sigma" => {
                o.sigma = Some(arg(i)?);
                i += 2;
            }
            "cap" => {
                o.cap = Some(arg(i)?);
                i += 2;
            }
            "central" => {
                o.central = true;
                i += 1;
            }
            other => return Err(perr(file, line, col, format!("unknown option `{other}`"))),
        }
    }
    Ok(o)
}

/// Parse one file into directives. `include` lines are kept unresolved.
pub fn parse_file(file: &str, src: &str) -> Result<Vec<Line>, PresetError> {
    let mut out = Vec::new();
    for (n, raw) in src.lines().enumerate() {
        let line = n + 1;
        let raw = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let toks = tokens(raw);
        let Some(&(kcol, key)) = toks.first() else { continue };
        let need = |k: usize| -> Result<&str, PresetError> {
            toks.get(k).map(|x| x.1).ok_or_else(|| perr(file, line, kcol, format!("`{key}` is missing an argument")))
        };
        let d = match key {
            "name" => Directive::Name(need(1)?.to_string()),
            "note" => Directive::Note(raw.trim_start()[4..].trim().to_string()),
            "kind" => match need(1)? {
                "hopf" => Directive::Kind(FileKind::Hopf),
                "algebra" => Directive::Kind(FileKind::Algebra),
                "comodule" => Directive::Kind(FileKind::Comodule(need(2)?.to_string())),
                other => return Err(perr(file, line, toks[1].0, format!("unknown kind `{other}`"))),
            },
            "cap" => Directive::Cap(need(1)?.to_string()),
            "maxcap" => Directive::MaxCap(need(1)?.to_string()),
            "minprime" => Directive::MinPrime(need(1)?.to_string()),
            "include" => Directive::Include(need(1)?.to_string()),
            "let" | "alias" => {
                let (lhs, _, expr, _) = split_eq(file, line, raw, kcol - 1 + key.len())?;
                if key == "let" {
                    Directive::Let(lhs.to_string(), expr.to_string())
                } else {
                    Directive::Alias(lhs.to_string(), expr.trim().to_string())
                }
            }
            "gen" => {
                let name = need(1)?.to_string();
                let degree = need(2)?.to_string();
                let mut i = 3;
                let kind = parse_kind(file, line, &toks, &mut i)?;
                let opts = parse_opts(file, line, &toks, i)?;
                Directive::Gen { name, degree, kind, opts }
            }
            "family" => {
                let name = need(1)?.to_string();
                let mut i = 2;
                let kind = parse_kind(file, line, &toks, &mut i)?;
                let (mut from, mut to, mut degree, mut unit0) = (None, None, None, false);
                let mut rest = Vec::new();
                while i < toks.len() {
                    let (col, t) = toks[i];
                    let int_arg = |i: usize| -> Result<i64, PresetError> {
                        let (c, v) = *toks.get(i + 1).ok_or_else(|| perr(file, line, col, format!("`{t}` needs a value")))?;
                        v.parse().map_err(|_| perr(file, line, c, format!("`{v}` is not an integer")))
                    };
                    match t {
                        "from" => {
                            from = Some(int_arg(i)?);
                            i += 2;
                        }
                        "to" => {
                            to = Some(int_arg(i)?);
                            i += 2;
                        }
                        "degree" => {
                            degree = Some(need(i + 1)?.to_string());
                            i += 2;
                        }
                        "unit0" => {
                            unit0 = true;
                            i += 1;
                        }
                        _ => {
                            rest.extend_from_slice(&toks[i..]);
                            break;
                        }
                    }
                }
                let opts = parse_opts(file, line, &rest, 0)?;
                Directive::Family {
                    name,
                    kind,
                    from: from.ok_or_else(|| perr(file, line, kcol, "family needs `from`"))?,
                    to,
                    degree: degree.ok_or_else(|| perr(file, line, kcol, "family needs `degree`"))?,
                    unit0,
                    opts,
                }
            }
            "divided" => {
                let name = need(1)?.to_string();
                let degree = need(2)?.to_string();
                Directive::Divided { name, degree, opts: parse_opts(file, line, &toks, 3)? }
            }
            "column" => Directive::Column { name: need(1)?.to_string(), degree: need(2)?.to_string() },
            "delta" | "psi" => {
                let (lhs, lcol, expr, col) = split_eq(file, line, raw, kcol - 1 + key.len())?;
                let lhs = parse_lhs(file, line, lcol, lhs)?;
                if key == "delta" {
                    Directive::Delta { lhs, expr: expr.to_string(), col }
                } else {
                    Directive::Psi { lhs, expr: expr.to_string(), col }
                }
            }
            "counit" => {
                let (lhs, _, expr, _) = split_eq(file, line, raw, kcol - 1 + key.len())?;
                Directive::Counit { name: lhs.to_string(), expr: expr.to_string() }
            }
            "diff" => {
                let round = need(1)?.to_string();
                let after = toks[1].0 - 1 + round.len();
                let (lhs, lcol, expr, col) = split_eq(file, line, raw, after)?;
                Directive::Diff { round, lhs: parse_lhs(file, line, lcol, lhs)?, expr: expr.to_string(), col }
            }
            "if" => {
                let f = need(1)?;
                match f.strip_prefix('!') {
                    Some(g) => Directive::If { flag: g.to_string(), negated: true },
                    None => Directive::If { flag: f.to_string(), negated: false },
                }
            }
            "else" => Directive::Else,
            "end" => Directive::End,
            other => return Err(perr(file, line, kcol, format!("unknown directive `{other}`"))),
        };
        out.push(Line { file: file.to_string(), line, directive: d });
    }
    Ok(out)
}

/// Keep the directives whose `if` conditions hold for `flags`.
pub fn resolve_conditionals(lines: Vec<Line>, flags: &std::collections::BTreeSet<String>) -> Result<Vec<Line>, PresetError> {
    // stack of (branch active, parent active, seen else)
    let mut stack: Vec<(bool, bool, bool)> = Vec::new();
    let mut out = Vec::new();
    let active = |s: &Vec<(bool, bool, bool)>| s.last().map(|x| x.0 && x.1).unwrap_or(true);
    for l in lines {
        match &l.directive {
            Directive::If { flag, negated } => {
                let parent = active(&stack);
                stack.push((flags.contains(flag) != *negated, parent, false));
            }
            Directive::Else => {
                let top = stack.last_mut().ok_or_else(|| perr(&l.file, l.line, 1, "`else` without `if`"))?;
                if top.2 {
                    return Err(perr(&l.file, l.line, 1, "second `else`"));
                }
                top.0 = !top.0;
                top.2 = true;
            }
            Directive::End => {
                stack.pop().ok_or_else(|| perr(&l.file, l.line, 1, "`end` without `if`"))?;
            }
            _ => {
                if active(&stack) {
                    out.push(l);
                }
            }
        }
    }
    if !stack.is_empty() {
        return Err(PresetError::Parse { file: String::new(), line: 0, col: 0, msg: "unterminated `if`".into() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_directives() {
        let src = "name x  # comment\nkind comodule a-star\ngen b 2*p^2-2*p-1 ext sigma gsb[0]\n\
                   family xi poly from 1 degree 2*(p^i-1) unit0\npsi b = 1 | b\ndiff 2*p-3 t1 = alpha1\n";
        let v = parse_file("x", src).unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(v[1].directive, Directive::Kind(FileKind::Comodule("a-star".into())));
        match &v[4].directive {
            Directive::Psi { lhs, expr, col } => {
                assert_eq!(lhs.name, "b");
                assert_eq!(expr, "1 | b");
                assert_eq!(*col, 9);
            }
            d => panic!("{d:?}"),
        }
        match &v[5].directive {
            Directive::Diff { round, lhs, .. } => {
                assert_eq!(round, "2*p-3");
                assert_eq!(lhs.name, "t1");
            }
            d => panic!("{d:?}"),
        }
    }

    #[test]
    fn located_errors() {
        let e = parse_file("f", "name a\n  gen x 3 weird\n").unwrap_err();
        match e {
            PresetError::Parse { line, col, .. } => assert_eq!((line, col), (2, 11)),
            e => panic!("{e:?}"),
        }
        assert!(parse_file("f", "psi x 1|x\n").is_err());
    }

    #[test]
    fn conditionals() {
        let src = "if a\nname x\nelse\nname y\nend\nif !a\nnote z\nend\n";
        let v = parse_file("f", src).unwrap();
        let mut flags = std::collections::BTreeSet::new();
        let r = resolve_conditionals(v.clone(), &flags).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].directive, Directive::Name("y".into()));
        flags.insert("a".to_string());
        let r = resolve_conditionals(v, &flags).unwrap();
        assert_eq!(r.len(), 1);
        assert!(resolve_conditionals(parse_file("f", "if a\n").unwrap(), &flags).is_err());
    }
}
