//! Thin command-line front end over the library: replay scenarios, inspect
//! presets, evaluate cobar differentials and dump spectral-sequence charts.
//!
//! Exit codes: 0 when everything checked passes, 1 on a verification
//! failure, 2 on a usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cobar_engine::arith_witness::{check_generator, image_of_j_report};
use cobar_engine::cobar::{element_from_tensor, Cobar, CobarConfig, CobarElement};
use cobar_engine::expr::{Evaluator, IntEnv, Names};
use cobar_engine::graded_algebra::{Algebra, Monomial};
use cobar_engine::hopf_comod::{AlgComodule, TensorCtx};
use cobar_engine::presets::{check_loaded, BuildOpts, Library, Loaded};
use cobar_engine::scenarios::{list_scenarios, run_scenario, RunOpts, Verdict};
use cobar_engine::ss_engine::PageSpec;

/// `println!` that ends the process quietly once stdout is closed (e.g. `| head`).
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(name = "cobar-verify", version, about = "Replay cobar and spectral-sequence verifications")]
struct Cli {
    /// `text` for people, `lines` for one record per line.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(clap::Args)]
struct PresetArgs {
    /// Shipped preset name or a path to a preset file.
    preset: String,
    #[arg(long, default_value_t = 5)]
    p: u32,
    /// Columns of the truncated spectral sequence (comodule presets with a column class).
    #[arg(long, default_value_t = 0)]
    columns: u32,
    /// Degree cap, overriding the preset's own.
    #[arg(long)]
    cap: Option<i64>,
    /// Conditional blocks to enable (repeatable).
    #[arg(long = "flag")]
    flags: Vec<String>,
}

impl PresetArgs {
    fn opts(&self) -> BuildOpts {
        let mut o = BuildOpts::p(self.p).columns(self.columns);
        if let Some(c) = self.cap {
            o = o.cap(c);
        }
        for f in &self.flags {
            o = o.flag(f);
        }
        o
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// List the shipped scenarios with their citation anchors.
    List,
    /// Run a scenario, or `all` of them.
    Verify {
        scenario: String,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        max_degree: Option<i64>,
        /// Append wall-clock times (reports are otherwise byte-identical across runs).
        #[arg(long)]
        timing: bool,
    },
    /// Monomial basis in one degree, or cobar words with `--filtration`.
    Basis {
        #[command(flatten)]
        preset: PresetArgs,
        #[arg(long)]
        degree: i64,
        #[arg(long)]
        filtration: Option<usize>,
        #[arg(long)]
        unnormalized: bool,
    },
    /// Cobar differential of an expression such as `xi[1] | tau[0] | e0`.
    CobarD {
        #[command(flatten)]
        preset: PresetArgs,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        unnormalized: bool,
        /// Central generators to set to zero (repeatable).
        #[arg(long)]
        kill: Vec<String>,
    },
    /// Run the homotopy fixed point spectral sequence and print the last page.
    Hfpss {
        #[command(flatten)]
        preset: PresetArgs,
        #[arg(long)]
        max_degree: i64,
        /// Also write the chart records to this file.
        #[arg(long)]
        dump_chart: Option<PathBuf>,
    },
    /// Exact arithmetic checks.
    Arith {
        #[command(subcommand)]
        cmd: ArithCmd,
    },
    /// Coassociativity, counit and homogeneity checks for a preset.
    CheckAxioms {
        #[command(flatten)]
        preset: PresetArgs,
    },
}

#[derive(Subcommand)]
enum ArithCmd {
    /// Compare ν_ℓ(q^s − 1), ν_ℓ(k) + 1 and ν_ℓ(den B_s/2s) for s = (ℓ−1)k.
    ImageOfJ {
        #[arg(long, default_value_t = 5)]
        l: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 50)]
        kmax: u32,
    },
    /// Whether q generates (Z/ℓ²)^×.
    Generator {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        q: u64,
    },
}

/// Failure modes: 1 for a negative verdict, 2 for bad input.
enum Exit {
    Failed,
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Exit {
    fn from(e: E) -> Self {
        Exit::Usage(e.to_string())
    }
}

type Res = Result<(), Exit>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit::Failed) => ExitCode::from(1),
        Err(Exit::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Res {
    let lines = cli.format == Format::Lines;
    match &cli.cmd {
        Cmd::List => {
            for (name, cite) in list_scenarios() {
                if lines {
                    out!("scenario {name} \"{cite}\"");
                } else {
                    out!("{name:28} \"{cite}\"");
                }
            }
            Ok(())
        }
        Cmd::Verify { scenario, p, max_degree, timing } => verify(scenario, RunOpts { p: *p, max_degree: *max_degree, timing: *timing }, lines),
        Cmd::Basis { preset, degree, filtration, unnormalized } => basis(preset, *degree, *filtration, *unnormalized, lines),
        Cmd::CobarD { preset, expr, unnormalized, kill } => cobar_d(preset, expr, *unnormalized, kill, lines),
        Cmd::Hfpss { preset, max_degree, dump_chart } => hfpss(preset, *max_degree, dump_chart.as_ref(), lines),
        Cmd::Arith { cmd } => arith(cmd, lines),
        Cmd::CheckAxioms { preset } => check_axioms(preset, lines),
    }
}

fn verify(which: &str, opts: RunOpts, lines: bool) -> Res {
    let names: Vec<String> = if which == "all" { list_scenarios().into_iter().map(|(n, _)| n).collect() } else { vec![which.to_string()] };
    let mut tally = [0usize; 3];
    for name in &names {
        let rep = run_scenario(name, &opts)?;
        tally[match rep.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }] += 1;
        if lines {
            rep.lines().iter().for_each(|l| out!("{l}"));
        } else {
            out!("{}", rep.text().trim_end());
            if names.len() > 1 {
                out!();
            }
        }
    }
    if names.len() > 1 {
        if lines {
            out!("summary {} {} {}", tally[0], tally[1], tally[2]);
        } else {
            out!("{} passed, {} failed, {} errors", tally[0], tally[1], tally[2]);
        }
    }
    if tally[1] + tally[2] > 0 {
        return Err(Exit::Failed);
    }
    Ok(())
}

fn load(args: &PresetArgs) -> Result<Loaded, Exit> {
    let mut lib = Library::builtin();
    let name = lib.resolve(&args.preset)?;
    Ok(lib.build(&name, &args.opts())?)
}

fn print_monomials(alg: &Algebra, degree: i64, lines: bool) -> Res {
    let b = alg.basis_in_degree(degree)?;
    for m in &b {
        if lines {
            out!("b {degree} {}", alg.fmt_monomial(m));
        } else {
            out!("  {}", alg.fmt_monomial(m));
        }
    }
    if !lines {
        out!("{} monomial(s) in degree {degree}", b.len());
    }
    Ok(())
}

fn print_words(cob: &Cobar<'_, AlgComodule>, s: usize, degree: i64, lines: bool) -> Res {
    let words = cob.basis(s, degree)?;
    for w in &words {
        if lines {
            out!("w {s} {degree} {}", cob.fmt_word(w));
        } else {
            out!("  {}", cob.fmt_word(w));
        }
    }
    if !lines {
        out!("{} word(s) in filtration {s}, degree {degree}", words.len());
    }
    Ok(())
}

fn config(unnormalized: bool, kill: Vec<usize>) -> CobarConfig {
    CobarConfig { normalized: !unnormalized, kill, ..Default::default() }
}

fn basis(args: &PresetArgs, degree: i64, filtration: Option<usize>, unnormalized: bool, lines: bool) -> Res {
    match (load(args)?, filtration) {
        (Loaded::Hopf(h), None) => print_monomials(&h.hopf.alg, degree, lines),
        (Loaded::Comodule(c), None) => print_monomials(c.alg(), degree, lines),
        (Loaded::Algebra(a), None) => print_monomials(&a.alg, degree, lines),
        (Loaded::Hopf(h), Some(s)) => {
            let cap = h.hopf.degree_cap;
            let c = AlgComodule::trivial(h.hopf.clone(), cap)?;
            print_words(&Cobar::new(&c, config(unnormalized, vec![]))?, s, degree, lines)
        }
        (Loaded::Comodule(c), Some(s)) => print_words(&Cobar::new(&c.comod, config(unnormalized, vec![]))?, s, degree, lines),
        (Loaded::Algebra(_), Some(_)) => Err(Exit::Usage("cobar words need a hopf or comodule preset".into())),
    }
}

/// Try each filtration until the expression has the matching number of slots.
/// Over the ground field the trailing `| 1` may be left out.
fn parse_element(comod: &AlgComodule, names: &Names, src: &str) -> Result<CobarElement<Monomial>, Exit> {
    match parse_slots(comod, names, src) {
        Err(e) if comod.alg.gens().is_empty() => parse_slots(comod, names, &format!("({src}) | 1")).map_err(|_| e),
        r => r,
    }
}

fn parse_slots(comod: &AlgComodule, names: &Names, src: &str) -> Result<CobarElement<Monomial>, Exit> {
    let ha = &comod.hopf.alg;
    let mut last = None;
    for s in 0..=6 {
        let mut slots = vec![ha; s];
        slots.push(&comod.alg);
        let ctx = TensorCtx { scalar: ha, slots: &slots };
        let mut ints = IntEnv::new();
        ints.insert("p".into(), comod.alg.p() as i128);
        match Evaluator::new(ctx, names, ints).eval_str(src) {
            Ok(t) => return Ok(element_from_tensor(&t, s + 1)?),
            // keep the most informative error: anything but a slot-count mismatch
            Err(e) if last.is_none() || !e.to_string().contains("slots, expected") => last = Some(e),
            Err(_) => {}
        }
    }
    Err(Exit::Usage(format!("cannot read `{src}` as a cobar element: {}", last.map(|e| e.to_string()).unwrap_or_default())))
}

fn cobar_d(args: &PresetArgs, src: &str, unnormalized: bool, kill: &[String], lines: bool) -> Res {
    let loaded = load(args)?;
    let (trivial, comod, names);
    match &loaded {
        Loaded::Comodule(c) => {
            comod = &c.comod;
            names = &c.names;
        }
        Loaded::Hopf(h) => {
            trivial = AlgComodule::trivial(h.hopf.clone(), h.hopf.degree_cap)?;
            comod = &trivial;
            names = &h.names;
        }
        Loaded::Algebra(_) => return Err(Exit::Usage("cobar-d needs a hopf or comodule preset".into())),
    }
    let kill = kill.iter().map(|g| comod.hopf.alg.id(g)).collect::<Result<Vec<_>, _>>()?;
    let cob = Cobar::new(comod, config(unnormalized, kill))?;
    let x = cob.reduce(&parse_element(comod, names, src)?);
    let dx = cob.d(&x)?;
    if lines {
        out!("source {} {}", x.s, cob.fmt(&x));
        for (w, &c) in &dx.terms {
            out!("term {} {}", cob.field().signed(c), cob.fmt_word(w));
        }
        out!("cocycle {}", dx.is_zero());
    } else {
        out!("d({}) =\n  {}", cob.fmt(&x), if dx.is_zero() { "0".to_string() } else { cob.fmt(&dx) });
    }
    Ok(())
}

fn hfpss(args: &PresetArgs, max: i64, dump: Option<&PathBuf>, lines: bool) -> Res {
    let (spec, alg) = match load(args)? {
        Loaded::Comodule(c) => (PageSpec::hfpss(&c.comod, c.column, max)?, c.comod.alg.clone()),
        Loaded::Algebra(a) => (PageSpec::from_rounds(&a.alg, &a.rounds, max), a.alg),
        Loaded::Hopf(_) => return Err(Exit::Usage("hfpss needs a comodule or algebra preset".into())),
    };
    let pages = spec.run()?;
    let last = pages.last().expect("at least the first page");
    let chart = last.chart_lines(&alg);
    if let Some(path) = dump {
        std::fs::write(path, chart.iter().map(|l| format!("{l}\n")).collect::<String>())?;
    }
    if lines {
        for pg in &pages {
            out!("page {} {}", pg.r, pg.dims().values().sum::<u64>());
        }
        chart.iter().for_each(|l| out!("{l}"));
    } else {
        for pg in &pages {
            out!("E_{}: {} classes in degrees {}..{}", pg.r, pg.dims().values().sum::<u64>(), pg.min, pg.max);
        }
        out!("E_{} by bidegree (column, degree): dim, representatives", last.r);
        for l in &chart {
            let mut t = l.splitn(5, ' ').skip(1);
            let (c, d, n, reps) = (t.next().unwrap_or(""), t.next().unwrap_or(""), t.next().unwrap_or(""), t.next().unwrap_or(""));
            out!("  ({c}, {d}): {n}  {reps}");
        }
    }
    Ok(())
}

fn arith(cmd: &ArithCmd, lines: bool) -> Res {
    match cmd {
        ArithCmd::ImageOfJ { l, q, kmax } => {
            let rep = image_of_j_report(*l, *q, *kmax)?;
            if lines {
                rep.lines().iter().for_each(|x| out!("{x}"));
            } else {
                out!("{}", rep.text().trim_end());
            }
            if !rep.all_agree() {
                return Err(Exit::Failed);
            }
            Ok(())
        }
        ArithCmd::Generator { l, q } => {
            let g = check_generator(*q, *l);
            if lines {
                out!("generator {q} {l} {g}");
            } else {
                out!("{q} {} (Z/{l}^2)^x", if g { "generates" } else { "does not generate" });
            }
            if !g {
                return Err(Exit::Failed);
            }
            Ok(())
        }
    }
}

fn check_axioms(args: &PresetArgs, lines: bool) -> Res {
    let loaded = load(args)?;
    let rep = check_loaded(&loaded)?;
    if lines {
        out!("axioms {} {} {}", args.preset, rep.checked, rep.failures.len());
        for f in &rep.failures {
            out!("failure {} {} {}", f.axiom, f.monomial, f.detail);
        }
    } else {
        out!("{}: {}", args.preset, loaded.note());
        out!("{} checks, {} failure(s)", rep.checked, rep.failures.len());
        for f in rep.failures.iter().take(20) {
            out!("  {} at {}: {}", f.axiom, f.monomial, f.detail);
        }
    }
    if !rep.passed() {
        return Err(Exit::Failed);
    }
    Ok(())
}
