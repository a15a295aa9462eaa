//! Argument parsing and dispatch.

use std::io::Read as _;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use akh_core::{AnnularDiagram, Gf2, Rational};
use clap::{Args, Parser, Subcommand};

use crate::adt::{parse_adt, serialize_adt};
use crate::cache::{cache_key, Cache, Entry};
use crate::commands::{self as cmd, FamilyRequest};
use crate::config::{FieldChoice, FileConfig, Format, Settings};
use crate::error::CliError;
use crate::output::{Record, Table};

const AFTER_HELP: &str = "\
Exit codes: 0 success; 1 a check failed (sweep row, rank inequality, page
comparison) or an IO error; 2 unreadable input or bad parameters; 3 the
diagram exceeds the state cap; 4 internal error; 5 unusable weights.

TSV output: `# key<TAB>value` summary lines, one header line, then rows;
`-` marks an absent value. Columns per command:
  validate, adequacy   key value
  resolve              circle essential edges
  complex              i j k generators (none with --stats)
  akh                  i j k dim
  bracket              a z coeff   (coefficient of A^a z^z)
  check-wrap           status bound bracket_degree akh_degree
                       minus_adequately_wrapped certificate bracket homology
  bs-ss                page l k g dim   (g = j - number of components)
  rank-check           l k margin
  sweep                family n m braids crossings wrap_bound bracket_max_z
                       akh_max_k adequate minus_adequately_wrapped status expected
JSON output is a single object with \"schema\": \"akh/1\".

Results of the expensive commands are cached in --cache-dir (or
AKH_CACHE_DIR) when one is set. A TOML config file may set field, format,
cap, workers, cache_dir and weights; flags win.";

#[derive(Parser, Debug)]
#[command(name = "akh", version, about = "Annular Khovanov homology, skein brackets and wrapping certificates", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Coefficient field [default: gf2, or rat for bs-ss and rank-check]
    #[arg(long, global = true, value_enum)]
    pub field: Option<FieldChoice>,
    /// Output format [default: tsv]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest crossing count to enumerate [default: 24]
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Worker threads for sweep [default: available parallelism]
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, env = "AKH_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Ignore the cache for this run
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// TOML file with default settings
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FamilyArgs {
    /// necklace, cable, whitehead, disjoint or consum
    #[arg(long)]
    pub family: Option<String>,
    /// Base link of a cable: necklace or whitehead
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Cable multiplicity
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Braid inserted in the cables, e.g. "s1 -s2"; once for all
    /// components or once per component
    #[arg(long = "braid", allow_hyphen_values = true)]
    pub braids: Vec<String>,
    /// Whitehead clasp sign
    #[arg(long, value_parser = parse_clasp, allow_hyphen_values = true)]
    pub clasp: Option<i8>,
}

fn parse_clasp(s: &str) -> Result<i8, String> {
    match s {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(format!("clasp must be + or -, not `{s}`")),
    }
}

impl FamilyArgs {
    fn request(&self) -> Option<FamilyRequest> {
        self.family.as_ref().map(|f| FamilyRequest {
            family: f.clone(),
            base: self.base.clone(),
            n: self.n,
            m: self.m,
            braids: self.braids.clone(),
            clasp: self.clasp,
        })
    }
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// ADT file, or - for standard input
    #[arg(long = "in", value_name = "FILE", conflicts_with = "family", required_unless_present = "family")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check a diagram and print its basic data
    Validate(InputArgs),
    /// Circles of one resolution
    Resolve {
        #[command(flatten)]
        input: InputArgs,
        /// Smoothing per crossing in canonical order, e.g. 0110
        #[arg(long)]
        state: String,
    },
    /// Census and adequacy of the all-1 resolution
    Adequacy(InputArgs),
    /// Generators of the chain complex by grading
    Complex {
        #[command(flatten)]
        input: InputArgs,
        /// Summary counts only
        #[arg(long)]
        stats: bool,
        /// Restrict to one annular grading
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i32>,
    },
    /// Annular Khovanov homology dimensions
    Akh {
        #[command(flatten)]
        input: InputArgs,
        /// Restrict to one annular grading
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i32>,
        /// Only find the largest nonzero annular grading
        #[arg(long, conflicts_with = "k")]
        top: bool,
    },
    /// Annular skein bracket by state sum
    Bracket(InputArgs),
    /// Wrapping-number certificates
    CheckWrap {
        #[command(flatten)]
        input: InputArgs,
        /// Also compare the top annular grading of homology
        #[arg(long)]
        homology: bool,
    },
    /// Pages of the link-splitting spectral sequence
    BsSs {
        #[command(flatten)]
        input: InputArgs,
        /// equal, distinct, or per-component rationals such as 0,1/2
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
        /// Compare E-infinity with this diagram instead of the split union
        #[arg(long, value_name = "FILE")]
        split: Option<PathBuf>,
    },
    /// Rank inequality between a link and its split union
    RankCheck(InputArgs),
    /// Build a family member and print or save its ADT text
    Family {
        #[command(flatten)]
        family: FamilyArgs,
        /// Write the ADT text here instead of standard output
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Wrapping certificates over a range of family parameters
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long)]
        base: Option<String>,
        /// e.g. 1..3 or 1,2
        #[arg(long, default_value = "1")]
        n: String,
        #[arg(long, default_value = "1")]
        m: String,
        #[arg(long = "braid", allow_hyphen_values = true)]
        braids: Vec<String>,
        #[arg(long, value_parser = parse_clasp, allow_hyphen_values = true)]
        clasp: Option<i8>,
        /// Skip the homology column
        #[arg(long)]
        no_homology: bool,
    },
}

/// What a command printed, before formatting.
pub struct Report {
    pub command: &'static str,
    pub diagram: Option<String>,
    pub field: Option<&'static str>,
    pub weights: Option<String>,
    pub entry: Entry,
    /// Raw text printed as-is in TSV mode.
    pub raw: Option<String>,
}

struct Ctx {
    settings: Settings,
    cache: Option<Cache>,
}

impl Ctx {
    fn cached(
        &self,
        d: &AnnularDiagram,
        command: &str,
        field: &str,
        weights: &str,
        f: impl FnOnce() -> Result<Entry, CliError>,
    ) -> Result<Entry, CliError> {
        let Some(cache) = &self.cache else { return f() };
        let key = cache_key(&serialize_adt(d), command, field, weights);
        if let Some(e) = cache.load(&key) {
            return Ok(e);
        }
        let e = f()?;
        if let Err(err) = cache.store(&key, &e) {
            eprintln!("warning: cache write failed: {err}");
        }
        Ok(e)
    }
}

fn read_diagram(path: &PathBuf) -> Result<AnnularDiagram, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
    };
    parse_adt(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load(input: &InputArgs) -> Result<AnnularDiagram, CliError> {
    match (&input.input, input.family.request()) {
        (Some(p), _) => read_diagram(p),
        (None, Some(req)) => req.build(),
        (None, None) => Err(CliError::Parse("give --in FILE or --family NAME".into())),
    }
}

macro_rules! by_field {
    ($field:expr, $f:ident ( $($arg:expr),* )) => {
        match $field {
            FieldChoice::Gf2 => cmd::$f::<Gf2>($($arg),*),
            FieldChoice::Rat => cmd::$f::<Rational>($($arg),*),
        }
    };
}

fn execute(ctx: &Ctx, command: &Command) -> Result<Report, CliError> {
    let s = &ctx.settings;
    let cap = s.cap;
    let report = |command, d: &AnnularDiagram, field: Option<FieldChoice>, weights: Option<String>, entry| Report {
        command,
        diagram: Some(cmd::diagram_hash(d)),
        field: field.map(|f| f.name()),
        weights,
        entry,
        raw: None,
    };
    Ok(match command {
        Command::Validate(i) => {
            let d = load(i)?;
            report("validate", &d, None, None, cmd::validate(&d))
        }
        Command::Resolve { input, state } => {
            let d = load(input)?;
            report("resolve", &d, None, None, cmd::resolve(&d, state)?)
        }
        Command::Adequacy(i) => {
            let d = load(i)?;
            report("adequacy", &d, None, None, cmd::adequacy(&d))
        }
        Command::Complex { input, stats, k } => {
            let d = load(input)?;
            let key = format!("complex stats={stats} k={k:?} cap={cap}");
            let e = ctx.cached(&d, &key, "", "", || cmd::complex(&d, cap, *k, *stats))?;
            report("complex", &d, None, None, e)
        }
        Command::Akh { input, k, top } => {
            let d = load(input)?;
            let f = s.field_or(FieldChoice::Gf2);
            let key = format!("akh k={k:?} top={top} cap={cap}");
            let e = ctx.cached(&d, &key, f.name(), "", || by_field!(f, akh_table(&d, cap, *k, *top)))?;
            report("akh", &d, Some(f), None, e)
        }
        Command::Bracket(i) => {
            let d = load(i)?;
            let e = ctx.cached(&d, &format!("bracket cap={cap}"), "", "", || cmd::bracket(&d, cap))?;
            report("bracket", &d, None, None, e)
        }
        Command::CheckWrap { input, homology } => {
            let d = load(input)?;
            let key = format!("check-wrap homology={homology} cap={cap}");
            let e = ctx.cached(&d, &key, "gf2", "", || cmd::check_wrap(&d, cap, *homology))?;
            report("check-wrap", &d, homology.then_some(FieldChoice::Gf2), None, e)
        }
        Command::BsSs { input, weights, split } => {
            let d = load(input)?;
            let f = s.field_or(FieldChoice::Rat);
            let spec = weights.clone().or_else(|| s.weights.clone()).unwrap_or_else(|| "distinct".into());
            let w = cmd::parse_weights(&spec, d.component_count())?;
            let wtext = w.0.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
            let target = split.as_ref().map(read_diagram).transpose()?;
            let key = format!(
                "bs-ss cap={cap} split={}",
                target.as_ref().map(serialize_adt).unwrap_or_default()
            );
            let e = ctx.cached(&d, &key, f.name(), &wtext, || by_field!(f, bs_ss(&d, cap, &w, target.as_ref())))?;
            report("bs-ss", &d, Some(f), Some(wtext), e)
        }
        Command::RankCheck(i) => {
            let d = load(i)?;
            let f = s.field_or(FieldChoice::Rat);
            let e = ctx.cached(&d, &format!("rank-check cap={cap}"), f.name(), "", || by_field!(f, rank_check(&d, cap)))?;
            report("rank-check", &d, Some(f), None, e)
        }
        Command::Family { family, emit } => {
            let req = family.request().ok_or_else(|| CliError::Parse("--family is required".into()))?;
            let d = req.build()?;
            let text = serialize_adt(&d);
            let result = cmd::family_summary(&req, &d);
            let mut t = Table::default();
            if let Some(path) = emit {
                std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                t.note("emitted", path.display())
                    .note("crossings", d.crossing_count())
                    .note("components", d.component_count())
                    .note("wrap_bound", d.wrap_upper_bound());
            }
            let mut r = report("family", &d, None, None, Entry { result, tsv: t.render(), ok: true });
            if emit.is_none() {
                r.raw = Some(text);
            }
            r
        }
        Command::Sweep { family, base, n, m, braids, clasp, no_homology } => {
            let ns = cmd::parse_range(n)?;
            let ms = cmd::parse_range(m)?;
            let jobs: Vec<FamilyRequest> = ns
                .iter()
                .flat_map(|&n| {
                    ms.iter().map(move |&m| FamilyRequest {
                        family: family.clone(),
                        base: base.clone(),
                        n,
                        m,
                        braids: braids.clone(),
                        clasp: *clasp,
                    })
                })
                .collect();
            let rows = run_sweep(ctx, &jobs, !*no_homology)?;
            let mut t = Table::new(&cmd::SWEEP_HEADER);
            let mut values = Vec::new();
            let mut all_ok = true;
            for (cells, value, ok) in rows {
                t.row(cells);
                values.push(value);
                all_ok &= ok;
            }
            t.summary.insert(0, ("rows".into(), values.len().to_string()));
            let entry = Entry { result: serde_json::json!({ "rows": values, "all_ok": all_ok }), tsv: t.render(), ok: all_ok };
            Report { command: "sweep", diagram: None, field: (!*no_homology).then_some("gf2"), weights: None, entry, raw: None }
        }
    })
}

type Row = (Vec<String>, serde_json::Value, bool);

/// Rows in job order; the first failing job, in order, aborts the sweep.
fn run_sweep(ctx: &Ctx, jobs: &[FamilyRequest], homology: bool) -> Result<Vec<Row>, CliError> {
    let cap = ctx.settings.cap;
    let one = |req: &FamilyRequest| -> Result<Row, CliError> {
        let Some(cache) = &ctx.cache else { return cmd::sweep_row(req, cap, homology) };
        let d = req.build()?;
        let key = cache_key(&serialize_adt(&d), &format!("sweep-row {req:?} homology={homology} cap={cap}"), "gf2", "");
        if let Some(e) = cache.load(&key) {
            let cells = e.tsv.trim_end().split('\t').map(String::from).collect();
            return Ok((cells, e.result, e.ok));
        }
        let (cells, value, ok) = cmd::sweep_row(req, cap, homology)?;
        let e = Entry { result: value.clone(), tsv: cells.join("\t"), ok };
        if let Err(err) = cache.store(&key, &e) {
            eprintln!("warning: cache write failed: {err}");
        }
        Ok((cells, value, ok))
    };
    let workers = ctx.settings.workers.min(jobs.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Row, CliError>>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let r = one(&jobs[i]);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.unwrap_or_else(|| Err(CliError::Internal("sweep job did not run".into()))))
        .collect()
}

/// Run with the given arguments, print the result, and return the exit code.
pub fn run(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_cli(&cli) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("akh: {e}");
            e.exit_code()
        }
    }
}

/// The formatted output and whether every check passed.
pub fn run_cli(cli: &Cli) -> Result<(String, bool), CliError> {
    let g = &cli.global;
    let file = g.config.as_deref().map(FileConfig::load).transpose()?;
    let flags = FileConfig {
        field: g.field,
        format: g.format,
        cap: g.cap,
        workers: g.workers,
        cache_dir: g.cache_dir.clone(),
        weights: None,
    };
    let settings = Settings::resolve(flags, file);
    let cache = if g.no_cache { None } else { settings.cache_dir.as_deref().map(Cache::new) };
    let format = settings.format;
    let ctx = Ctx { settings, cache };
    let start = Instant::now();
    let r = execute(&ctx, &cli.command)?;
    let ms = start.elapsed().as_secs_f64() * 1000.0;
    let ok = r.entry.ok;
    let text = match format {
        Format::Tsv => r.raw.clone().unwrap_or_else(|| r.entry.tsv.clone()),
        Format::Json => Record::new(r.command, r.diagram, r.field, r.weights, r.entry, ms).to_json(),
    };
    Ok((text, ok))
}
