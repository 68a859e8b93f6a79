//! `pillai`: command-line front end for pillai-core.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure, 3 numeric failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pillai_core::bounds::{self, case_bound};
use pillai_core::generators::{sweep, ParamRanges, FAMILY_IDS};
use pillai_core::search::{classify, run_search_with, Checkpoint, Shard};
use pillai_core::structure::check_structure;
use pillai_core::{
    enumerate_solutions, generate, lemma15_bound, reduce_to_basic_form, sigma, verify_catalog, Error, GcdFilter,
    GeneratorParams, Instance, SearchBox, SearchOptions, SolutionSet, DEFAULT_CAP,
};

#[derive(Parser)]
#[command(name = "pillai", version, about = "Solve, normalize, classify and search ±r·a^x ± s·b^y = c")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// All solutions within the caps, one `x y u v` line each.
    Solve {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        r: String,
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        xmax: u32,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        ymax: u32,
    },
    /// Basic form of a serialized set.
    Normalize {
        #[arg(long)]
        set: String,
    },
    /// Catalog match, generator family, or unexplained.
    Classify {
        #[arg(long)]
        set: String,
        /// Also print structure-rule violations.
        #[arg(long)]
        structure: bool,
    },
    /// Build a three-solution set from a generator family.
    Generate(GenerateArgs),
    /// Exhaustive box search.
    Search(SearchArgs),
    /// Evaluate a bound from linear forms in logarithms.
    Bound(BoundArgs),
    /// σ(a, b) with its per-prime breakdown.
    Sigma {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Re-verify every catalog entry.
    VerifyCatalog {
        /// Largest g for parametric entries.
        #[arg(long, default_value_t = 30)]
        g_max: u64,
    },
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long)]
    family: u32,
    /// Run the family over its default desk ranges instead of one tuple.
    #[arg(long)]
    sweep: bool,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    m1: Option<i32>,
    #[arg(long)]
    d: Option<u32>,
    /// Integer or half-integer such as `3/2`.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    x: Option<u32>,
    #[arg(long)]
    x2: Option<u32>,
    #[arg(long)]
    x3: Option<u32>,
    #[arg(long)]
    u: Option<u8>,
    #[arg(long)]
    v: Option<u8>,
    #[arg(long)]
    t: Option<u8>,
    #[arg(long)]
    w: Option<u8>,
    /// Sign pattern for family 88.
    #[arg(long, value_enum)]
    signs: Option<Signs88>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Signs88 {
    Upper,
    Lower,
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Range `lo..hi` (inclusive) or a single value.
    #[arg(long, value_parser = parse_range, default_value = "2..10")]
    a: (u64, u64),
    #[arg(long, value_parser = parse_range, default_value = "2..10")]
    b: (u64, u64),
    #[arg(long, value_parser = parse_range, default_value = "1..10")]
    r: (u64, u64),
    #[arg(long, value_parser = parse_range, default_value = "1..10")]
    s: (u64, u64),
    #[arg(long, value_parser = parse_range, default_value = "1..100")]
    c: (u64, u64),
    #[arg(long, default_value_t = 40)]
    exp_cap: u32,
    #[arg(long, default_value_t = 4)]
    min_n: usize,
    /// any, coprime (gcd(a,b) = 1) or common (gcd(a,b) > 1).
    #[arg(long, default_value = "any")]
    gcd: GcdFilter,
    /// Resume from and save progress to this file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    shard: Option<Shard>,
    /// Also write the finding lines to this file.
    #[arg(long)]
    findings: Option<PathBuf>,
    /// Stop after this many base pairs, leaving the checkpoint mid-run.
    #[arg(long)]
    stop_after: Option<usize>,
    /// Print the representative set under each finding.
    #[arg(long)]
    sets: bool,
}

#[derive(clap::Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long, default_value_t = bounds::PRECISION)]
    precision: usize,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
    /// Lower bound for min(r·a^x, s·b^y).
    #[arg(long)]
    d: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Lemma15,
    T2Case1,
    T2Case2,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once("..").unwrap_or((s, s));
    let lo: u64 = lo.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let hi: u64 = hi.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    Ok((lo, hi))
}

/// A failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotASolution { .. } | Error::ReductionFailed(_) | Error::InvalidCheckpoint(_) => 2,
            Error::Numeric(_) => 3,
            _ => 1,
        };
        Fail(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(1, msg.into())
}

fn int(name: &str, v: &str) -> Result<num_bigint::BigUint, Fail> {
    v.parse().map_err(|_| usage(format!("--{name}: {v:?} is not a non-negative integer")))
}

fn need<T>(name: &str, v: Option<T>) -> Result<T, Fail> {
    v.ok_or_else(|| usage(format!("--{name} is required here")))
}

fn parse_set(text: &str) -> Result<SolutionSet, Fail> {
    Ok(SolutionSet::parse(text)?)
}

fn solve(a: &str, b: &str, c: &str, r: &str, s: &str, xmax: u32, ymax: u32) -> Result<String, Fail> {
    let inst = Instance::new(int("a", a)?, int("b", b)?, int("c", c)?, int("r", r)?, int("s", s)?)?;
    let mut out = String::new();
    for sol in enumerate_solutions(&inst, xmax, ymax).solutions {
        writeln!(out, "{} {} {} {}", sol.x, sol.y, sol.u, sol.v).unwrap();
    }
    Ok(out)
}

fn classify_cmd(text: &str, structure: bool) -> Result<String, Fail> {
    let set = parse_set(text)?;
    let mut out = format!("{}\n", classify(&set)?);
    if structure && set.len() >= 3 {
        writeln!(out, "{}", check_structure(&set)?).unwrap();
    }
    Ok(out)
}

fn params(g: &GenerateArgs) -> Result<GeneratorParams, Fail> {
    let bit = |name: &str, v: Option<u8>| need(name, v);
    Ok(match g.family {
        57 => GeneratorParams::F57 { a: need("a", g.a)?, m: need("m", g.m)?, u: bit("u", g.u)?, v: bit("v", g.v)? },
        58 => GeneratorParams::F58 { m1: need("m1", g.m1)? },
        84 => {
            let k = need("k", g.k.clone())?;
            let k_twice = match k.split_once('/') {
                Some((n, "2")) => n.parse().map_err(|_| usage(format!("--k {k:?}")))?,
                Some(_) => return Err(usage("--k: only halves are allowed")),
                None => 2 * k.parse::<u32>().map_err(|_| usage(format!("--k {k:?}")))?,
            };
            GeneratorParams::F84 {
                a: need("a", g.a)?,
                d: need("d", g.d)?,
                k_twice,
                u: bit("u", g.u)?,
                v: bit("v", g.v)?,
            }
        }
        85 => GeneratorParams::F85 { a: need("a", g.a)?, d: need("d", g.d)?, v: bit("v", g.v)? },
        86 => GeneratorParams::F86 { g: need("g", g.g)?, v: bit("v", g.v)? },
        87 => GeneratorParams::F87 { g: need("g", g.g)?, v: bit("v", g.v)? },
        88 => GeneratorParams::F88 {
            a: need("a", g.a)?,
            x: need("x", g.x)?,
            upper: matches!(need("signs", g.signs)?, Signs88::Upper),
        },
        89 => GeneratorParams::F89 {
            a: need("a", g.a)?,
            x2: need("x2", g.x2)?,
            x3: need("x3", g.x3)?,
            t: bit("t", g.t)?,
            w: bit("w", g.w)?,
        },
        f => return Err(usage(format!("unknown family {f}; known: {FAMILY_IDS:?}"))),
    })
}

fn report_line(g: &pillai_core::GeneratedSet) -> String {
    let overlap = g.overlap.as_deref().unwrap_or("-");
    format!("{}\t{}\tN={}\tkey={}\toverlap={overlap}", g.set, g.params, g.verified_n, g.key.as_str())
}

fn generate_cmd(g: &GenerateArgs) -> Result<(String, bool), Fail> {
    if g.sweep {
        if !FAMILY_IDS.contains(&g.family) {
            return Err(usage(format!("unknown family {}", g.family)));
        }
        let rep = sweep(g.family, &ParamRanges::desk(g.family));
        let mut out = String::new();
        let mut ok = true;
        for s in &rep.sets {
            ok &= s.overlap.is_some() || s.verified_n == 3;
            writeln!(out, "{}", report_line(s)).unwrap();
        }
        for (why, n) in &rep.skipped {
            writeln!(out, "# skipped {n}: {why}").unwrap();
        }
        return Ok((out, ok));
    }
    let gen = generate(&params(g)?)?;
    let ok = gen.overlap.is_some() || gen.verified_n == 3;
    Ok((format!("{}\n", report_line(&gen)), ok))
}

fn search_cmd(args: &SearchArgs) -> Result<String, Fail> {
    let bx = SearchBox {
        a: args.a,
        b: args.b,
        r: args.r,
        s: args.s,
        c: args.c,
        exp_cap: args.exp_cap,
        min_n: args.min_n,
        gcd_filter: args.gcd,
    };
    let resume = match &args.checkpoint {
        Some(p) if p.exists() => Some(Checkpoint::load(p)?),
        _ => None,
    };
    let opts = SearchOptions { shard: args.shard, resume, stop_after_pairs: args.stop_after, batch: None };
    let out = run_search_with(&bx, &opts, |cp| match &args.checkpoint {
        Some(p) => cp.save(p),
        None => Ok(()),
    })?;
    let mut lines = String::new();
    for f in &out.findings {
        writeln!(lines, "{}", f.line()).unwrap();
        if args.sets {
            writeln!(lines, "\t{}", f.set).unwrap();
        }
    }
    if let Some(p) = &args.findings {
        std::fs::write(p, &lines).map_err(Error::from)?;
    }
    let st = &out.stats;
    writeln!(
        lines,
        "# {} findings; units {} instances {} prefiltered {} sets {}; {}; digest {}",
        out.findings.len(),
        st.units,
        st.instances,
        st.prefiltered,
        st.sets,
        if out.finished { "finished" } else { "partial" },
        out.digest()
    )
    .unwrap();
    Ok(lines)
}

fn bound_cmd(args: &BoundArgs) -> Result<String, Fail> {
    let mut out = String::new();
    match args.which {
        Which::Lemma15 => {
            let get = |name: &str, v: &Option<String>| -> Result<num_bigint::BigUint, Fail> {
                int(name, need(name, v.as_deref())?)
            };
            let rep = lemma15_bound(
                &get("r", &args.r)?,
                &get("s", &args.s)?,
                &get("a", &args.a)?,
                &get("b", &args.b)?,
                &get("c", &args.c)?,
                &get("d", &args.d)?,
            )?;
            writeln!(out, "{}\n", rep.three_logs).unwrap();
            writeln!(out, "{}\n", rep.two_logs).unwrap();
            if let Some(r) = &rep.rs_one {
                writeln!(out, "{r}\n").unwrap();
            }
            writeln!(out, "bound\t{:.6e}", rep.bound()).unwrap();
        }
        Which::T2Case1 | Which::T2Case2 => {
            let prefix = if matches!(args.which, Which::T2Case1) { "t2-case1" } else { "t2-case2" };
            let reps = bounds::theorem2_fixed_points_at(args.precision)?;
            for r in reps.iter().filter(|r| r.branch.starts_with(prefix)) {
                writeln!(out, "{r}\n").unwrap();
            }
            let b = case_bound(&reps, prefix).ok_or_else(|| Fail(3, format!("no {prefix} crossing")))?;
            writeln!(out, "bound\t{b:.6e}").unwrap();
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<String, Fail> {
    match cli.cmd {
        Cmd::Solve { a, b, c, r, s, xmax, ymax } => solve(&a, &b, &c, &r, &s, xmax, ymax),
        Cmd::Normalize { set } => {
            let basic = reduce_to_basic_form(&parse_set(&set)?)?;
            Ok(format!("{}\n", basic.set))
        }
        Cmd::Classify { set, structure } => classify_cmd(&set, structure),
        Cmd::Generate(g) => {
            let (out, ok) = generate_cmd(&g)?;
            if ok {
                Ok(out)
            } else {
                print!("{out}");
                Err(Fail(2, "a generated set has an unexpected solution count".into()))
            }
        }
        Cmd::Search(args) => search_cmd(&args),
        Cmd::Bound(args) => bound_cmd(&args),
        Cmd::Sigma { a, b } => Ok(format!("{}\n", sigma(&int("a", &a)?, &int("b", &b)?)?)),
        Cmd::VerifyCatalog { g_max } => {
            let rep = verify_catalog(g_max);
            let mut out = String::new();
            for f in &rep.failures {
                writeln!(out, "FAIL\t{f}").unwrap();
            }
            writeln!(
                out,
                "checked {} concrete entries, {} instantiations; {} failures",
                rep.concrete_checked,
                rep.instantiations_checked,
                rep.failures.len()
            )
            .unwrap();
            if rep.passed() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Fail(2, "catalog verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
