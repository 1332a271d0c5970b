//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a check fails or a runtime error
//! occurs, 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{bounds_table, ratio_series, ratios_to_csv, witness_a_for_s, RatioSource, Verdict};
use crate::census::{
    count_actual, count_for_s_vector_with, count_table, records_to_csv, CensusCache, CensusOptions, Engine, Mode,
};
use crate::closedform::{g2, g3_via_c, series, totient_sieve, SeriesLabel};
use crate::coords::{enumerate_a_tuples, enumerate_s_vectors, VirtualCoordinates};
use crate::diagram::{
    build_arc_graph, component_count, is_actual, render_svg, tightness_check, ActualityChecker, RenderOptions,
};
use crate::permcheck::{b3_actual, PermSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "braid-census", version, about = "Census of braids by curve-diagram norm")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count actual coordinates of one norm.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Count for k = 0..=kmax.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a consistency suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Draw the diagram of a coordinate tuple as SVG.
    Render {
        #[arg(long)]
        coords: String,
        /// Add the closing arc above the diagram.
        #[arg(long)]
        closed: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lower and upper bounds on g_{n,k}.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmax: u32,
        #[arg(long)]
        with_census: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Normalised ratio series.
    Ratios {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmax: u32,
        #[arg(long, value_enum, default_value_t = Source::Census)]
        source: Source,
        #[arg(long)]
        rho: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Inspect or merge a result cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
        #[arg(long)]
        path: PathBuf,
        /// Caches to merge into PATH.
        #[arg(long = "from")]
        from: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    prune: bool,
    #[arg(long)]
    cache: Option<PathBuf>,
}

impl RunArgs {
    fn options(&self, progress: bool) -> CensusOptions {
        CensusOptions {
            threads: self.threads,
            mode: if self.prune { Mode::Pruned } else { Mode::Plain },
            engine: Engine::Frontier,
            cache: self.cache.clone(),
            progress,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Census,
    Closedform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Show,
    Merge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    B2,
    B3ClosedForm,
    Cyclicity,
    Bounds,
    Witnesses,
    Tightness,
    Symmetry,
    PruneConsistency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checked: u64,
    pub counterexample: Option<String>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serialises") + "\n"
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn check_n(n: usize, min: usize) -> Result<(), Failure> {
    if n < min {
        return Err(usage(format!("--n must be at least {min}")));
    }
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut emit = |s: String| out.write_all(s.as_bytes()).map_err(runtime);
    match cmd {
        Command::Count { n, k, run } => {
            check_n(n, 1)?;
            let rec = count_actual(n, k, &run.options(false)).map_err(runtime)?;
            emit(to_json(&rec))?;
            Ok(EXIT_OK)
        }
        Command::Table { n, kmax, format, run } => {
            check_n(n, 1)?;
            let recs = count_table(n, kmax, &run.options(true)).map_err(runtime)?;
            emit(match format {
                Format::Json => to_json(&recs),
                Format::Csv => records_to_csv(&recs),
            })?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite, kmax, threads } => {
            let report = run_suite(suite, kmax, threads).map_err(runtime)?;
            emit(to_json(&report))?;
            Ok(if report.passed { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Render { coords, closed, out: path } => {
            let c: VirtualCoordinates = coords.parse().map_err(usage)?;
            let opts = RenderOptions { closed_by_above: closed, ..RenderOptions::default() };
            let svg = render_svg(&c, &opts).map_err(usage)?;
            std::fs::write(&path, &svg).map_err(runtime)?;
            #[derive(Serialize)]
            struct Rendered {
                coords: String,
                out: String,
                bytes: usize,
                actual: bool,
            }
            let r = Rendered { coords: c.to_string(), out: path.display().to_string(), bytes: svg.len(), actual: is_actual(&c) };
            emit(to_json(&r))?;
            Ok(EXIT_OK)
        }
        Command::Bounds { n, kmax, with_census, run } => {
            check_n(n, 2)?;
            let opts = run.options(true);
            let reports = bounds_table(n, kmax, with_census.then_some(&opts)).map_err(runtime)?;
            emit(to_json(&reports))?;
            let ok = reports.iter().all(|r| r.verdict != Verdict::Violated);
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Ratios { n, kmax, source, rho, format, run } => {
            check_n(n, 1)?;
            if rho == Some(0) {
                return Err(usage("--rho must be positive"));
            }
            let source = match source {
                Source::Census => RatioSource::Census,
                Source::Closedform => {
                    if !(2..=3).contains(&n) {
                        return Err(usage("--source closedform needs --n 2 or --n 3"));
                    }
                    RatioSource::ClosedForm
                }
            };
            let pts = ratio_series(n, kmax, source, rho, &run.options(true)).map_err(runtime)?;
            emit(match format {
                Format::Json => to_json(&pts),
                Format::Csv => ratios_to_csv(&pts),
            })?;
            Ok(EXIT_OK)
        }
        Command::Cache { action, path, from } => {
            let mut cache = CensusCache::open(&path).map_err(runtime)?;
            match action {
                CacheAction::Show => {
                    let recs: Vec<_> = cache.records().cloned().collect();
                    emit(to_json(&recs))?;
                }
                CacheAction::Merge => {
                    if from.is_empty() {
                        return Err(usage("cache merge needs at least one --from PATH"));
                    }
                    let mut added = 0;
                    for src in &from {
                        added += cache.merge_from(src).map_err(runtime)?;
                    }
                    #[derive(Serialize)]
                    struct Merged {
                        path: String,
                        added: usize,
                        total: usize,
                    }
                    emit(to_json(&Merged { path: path.display().to_string(), added, total: cache.len() }))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Tracks the first counterexample of a suite.
struct Tally {
    checked: u64,
    counterexample: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self { checked: 0, counterexample: None }
    }

    /// Records one check; returns `false` once a counterexample is known.
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(what());
        }
        self.counterexample.is_none()
    }

    fn report(self, suite: Suite) -> SuiteReport {
        let name = suite.to_possible_value().expect("named suite").get_name().to_string();
        SuiteReport { suite: name, passed: self.counterexample.is_none(), checked: self.checked, counterexample: self.counterexample }
    }
}

fn serial_options(threads: Option<usize>, mode: Mode, engine: Engine) -> CensusOptions {
    CensusOptions { threads, mode, engine, ..CensusOptions::default() }
}

/// Runs one verification suite; `kmax` scales its range.
pub fn run_suite(suite: Suite, kmax: Option<u32>, threads: Option<usize>) -> Result<SuiteReport, Box<dyn std::error::Error>> {
    let mut t = Tally::new();
    let plain = serial_options(threads, Mode::Plain, Engine::Frontier);
    match suite {
        Suite::B2 => {
            let kmax = kmax.unwrap_or(200);
            for rec in count_table(2, kmax, &plain)? {
                if !t.check(rec.g == g2(rec.k.into()), || format!("g(2,{}) = {}", rec.k, rec.g)) {
                    break;
                }
            }
        }
        Suite::B3ClosedForm => {
            let kmax = kmax.unwrap_or(30);
            let sieve = totient_sieve(kmax as usize + 3)?;
            let g3 = series(SeriesLabel::G3, kmax as usize)?;
            for rec in count_table(3, kmax, &plain)? {
                let k = u64::from(rec.k);
                let vals = [sieve.g3_totient(k), g3_via_c(k), sieve.g3_via_gamma(k), g3.coeff(rec.k as usize) as u64];
                let ok = vals.iter().all(|&v| v == rec.g);
                if !t.check(ok, || format!("k = {}: census {} vs totient, c-sum, gamma, series {:?}", rec.k, rec.g, vals)) {
                    break;
                }
            }
            let lmax = kmax.min(12);
            let mut checker = ActualityChecker::new();
            'outer: for k in 0..=lmax {
                for l in 0..=lmax {
                    let sv = crate::coords::SVector::new(vec![k, l]);
                    for c in enumerate_a_tuples(&sv) {
                        let a = c.a();
                        let closed = b3_actual(k, l, a[0], a[1], a[2])?;
                        if !t.check(closed == checker.is_actual(&c), || format!("{c}")) {
                            break 'outer;
                        }
                    }
                }
            }
        }
        Suite::Cyclicity => {
            let nmax = kmax.unwrap_or(40) as usize;
            'outer: for n in 1..=nmax {
                for a in 0..=n {
                    let p = PermSpec::translation(n, a)?;
                    if !t.check(p.is_cyclic() == (p.to_permutation().cycle_count() == 1), || format!("{p:?}")) {
                        break 'outer;
                    }
                    for b in 0..=n - a {
                        for c in 0..=n - a - b {
                            let p = PermSpec::translated_cut(n, a, b, c)?;
                            if !t.check(p.is_cyclic() == (p.to_permutation().cycle_count() == 1), || format!("{p:?}")) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        Suite::Bounds => {
            let kmax = kmax.unwrap_or(12);
            'outer: for n in 2..=5 {
                for r in bounds_table(n, kmax, Some(&plain))? {
                    if !t.check(r.verdict == Verdict::Holds, || format!("n = {}, k = {}, g = {:?}", r.n, r.k, r.g)) {
                        break 'outer;
                    }
                }
            }
        }
        Suite::Witnesses => {
            let kmax = kmax.unwrap_or(8);
            'outer: for n in 1..=6 {
                for k in 0..=kmax {
                    for sv in enumerate_s_vectors(n, k) {
                        let w = witness_a_for_s(&sv);
                        if !t.check(is_actual(&w), || w.to_string()) {
                            break 'outer;
                        }
                    }
                }
            }
        }
        Suite::Tightness => {
            let kmax = kmax.unwrap_or(5);
            'outer: for n in 1..=4 {
                for k in 0..=kmax {
                    for sv in enumerate_s_vectors(n, k) {
                        for c in enumerate_a_tuples(&sv) {
                            let open = build_arc_graph(&c, false);
                            let closed = build_arc_graph(&c, true);
                            let ok = open.degree_invariant_holds()
                                && closed.degree_invariant_holds()
                                && open.zones_non_interleaving()
                                && tightness_check(&open)
                                && tightness_check(&closed)
                                && component_count(&open) == component_count(&closed);
                            if !t.check(ok, || c.to_string()) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        Suite::Symmetry => {
            let kmax = kmax.unwrap_or(5);
            let mut checker = ActualityChecker::new();
            'outer: for n in 1..=4 {
                for k in 0..=kmax {
                    for sv in enumerate_s_vectors(n, k) {
                        for c in enumerate_a_tuples(&sv) {
                            let base = checker.is_actual(&c);
                            let ok = [c.sym_h(), c.sym_v(), c.sym_c()].iter().all(|d| checker.is_actual(d) == base);
                            if !t.check(ok, || c.to_string()) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        Suite::PruneConsistency => {
            let kmax = kmax.unwrap_or(8);
            let pruned = serial_options(threads, Mode::Pruned, Engine::Frontier);
            'outer: for n in 1..=5 {
                let a = count_table(n, kmax, &plain)?;
                let b = count_table(n, kmax, &pruned)?;
                for (x, y) in a.iter().zip(&b) {
                    if !t.check(x.g == y.g, || format!("n = {n}, k = {}: plain {} vs pruned {}", x.k, x.g, y.g)) {
                        break 'outer;
                    }
                }
                if n <= 4 {
                    for k in 0..=kmax.min(6) {
                        for sv in enumerate_s_vectors(n, k) {
                            let f = count_for_s_vector_with(&sv, Engine::Frontier, false);
                            let d = count_for_s_vector_with(&sv, Engine::Direct, false);
                            if !t.check(f == d, || format!("s = {:?}: frontier {f} vs direct {d}", sv.interior())) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(t.report(suite))
}
