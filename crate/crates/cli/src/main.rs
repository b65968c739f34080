use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use bulkca::diagram;
use bulkca::format::{parse_ca, parse_config, write_ca};
use bulkca::morphism::{self, MapCheck};
use bulkca::property::{self, Verdict};
use bulkca::simsearch::{self, Relation, SearchBounds};
use bulkca::transform::{apply_transform, normalize_composition, pack, Transform};
use bulkca::zoo::{self, ShiftProduct};
use bulkca::{Automaton, MapRole, State, StateMap, TuringMachine};

const EXIT_UNKNOWN: u8 = 2;
const EXIT_REFUTED: u8 = 3;

#[derive(Parser)]
#[command(name = "bulkca", version, about = "Rescaling, morphisms and simulation search for 1-D cellular automata")]
struct Cli {
    /// Emit `key=value` records instead of aligned text.
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named automaton and write it as a CA file.
    ///
    /// KIND is one of identity:N, shift:N:Z, additive:P, max:N, elementary:CODE,
    /// constant:N:Q, bottom, shiftprod:N:Z,N:Z,..., gadget:P, gadget-quotient,
    /// parity-big, parity-small, tm-incrementer, and the encodings two-state,
    /// captive, equipt, sensi (which need --from).
    Make {
        kind: String,
        /// Source automaton for the encodings.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Iterate a configuration and render the space-time diagram.
    Run {
        file: PathBuf,
        /// Configuration literal `<L> : s0 s1 ...`.
        #[arg(short, long)]
        config: String,
        #[arg(short, long, default_value_t = 16)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        replicate: usize,
        /// Write a binary PGM here instead of printing ASCII.
        #[arg(long)]
        pgm: Option<PathBuf>,
        /// Draw time upward.
        #[arg(long)]
        time_up: bool,
    },
    /// Run the property analyzers.
    Props {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_period: usize,
        #[arg(long, default_value_t = 16)]
        max_time: usize,
    },
    /// Check or find a sub-automaton, quotient or mixed witness between A and B.
    Check {
        #[arg(long)]
        rel: Relation,
        a: PathBuf,
        b: PathBuf,
        /// Explicit witness `map k: t0 t1 ...`; searched for when absent.
        #[arg(long)]
        map: Option<String>,
        /// Stable subset of B for mixed witnesses, comma separated.
        #[arg(long)]
        subset: Option<String>,
    },
    /// Bounded search for a simulation of A by B.
    Search {
        #[arg(long)]
        rel: Relation,
        #[arg(long)]
        strong: bool,
        #[arg(long, default_value_t = 2)]
        max_m: usize,
        #[arg(long = "max-T", default_value_t = 2)]
        max_time: usize,
        #[arg(long, default_value_t = 1)]
        max_shift: usize,
        #[arg(long, default_value_t = 2)]
        max_group: usize,
        #[arg(long)]
        mirror: bool,
        /// Rule evaluations allowed per searched cell.
        #[arg(long, default_value_t = 1 << 22)]
        budget: u64,
        /// Print every pruning event.
        #[arg(long)]
        log: bool,
        a: PathBuf,
        b: PathBuf,
    },
    /// Apply a transform `m:T:s` (prefix `~` to mirror) to an automaton or configuration.
    Transform {
        #[arg(long)]
        alpha: Transform,
        file: Option<PathBuf>,
        /// Pack this configuration literal with the `m` and mirror of alpha
        /// instead (needs FILE for the state count).
        #[arg(long)]
        config: Option<String>,
        /// Print the normal form `(beta, t)` of alpha.
        #[arg(long)]
        normalize: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// State count, radius, neighborhood and metadata.
    Info { file: PathBuf },
}

struct Out {
    porcelain: bool,
}

impl Out {
    fn kv(&self, key: &str, value: impl std::fmt::Display) {
        if self.porcelain {
            println!("{key}={value}");
        } else {
            println!("{key:<22} {value}");
        }
    }
}

fn load(path: &Path) -> anyhow::Result<Automaton> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_ca(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(text: &[u8], output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text).context("writing stdout")
        }
    }
}

fn numbers<T: std::str::FromStr>(parts: &[&str]) -> anyhow::Result<Vec<T>> {
    parts.iter().map(|p| p.parse::<T>().map_err(|_| anyhow::anyhow!("bad number {p:?}"))).collect()
}

fn make(kind: &str, from: Option<&Path>) -> anyhow::Result<Automaton> {
    let mut parts = kind.split(':');
    let name = parts.next().unwrap_or("");
    let args: Vec<&str> = parts.collect();
    let source = || -> anyhow::Result<Automaton> {
        load(from.ok_or_else(|| anyhow::anyhow!("{name} needs --from <file.ca>"))?)
    };
    Ok(match (name, args.len()) {
        ("identity", 1) => zoo::identity(numbers(&args)?[0]),
        ("shift", 2) => zoo::shift(args[0].parse()?, args[1].parse()?)?,
        ("additive", 1) => zoo::additive(args[0].parse()?)?,
        ("max", 1) => zoo::delta_max(args[0].parse()?)?,
        ("elementary", 1) => zoo::elementary(args[0].parse()?),
        ("constant", 2) => zoo::constant(args[0].parse()?, args[1].parse()?)?,
        ("bottom", 0) => zoo::bottom(),
        ("shiftprod", n) if n >= 2 => {
            let rest = kind.split_once(':').map(|x| x.1).unwrap_or("");
            let factors = rest
                .split(',')
                .map(|f| {
                    let (n, z) = f.split_once(':').ok_or_else(|| anyhow::anyhow!("factor {f:?} is not N:Z"))?;
                    Ok((n.parse()?, z.parse()?))
                })
                .collect::<anyhow::Result<Vec<(usize, i64)>>>()?;
            zoo::shift_product(&ShiftProduct::new(factors)?)?
        }
        ("gadget", 1) => zoo::nontransitivity_gadget(args[0].parse()?)?.0,
        ("gadget-quotient", 0) => zoo::nontransitivity_quotient(),
        ("parity-big", 0) => zoo::parity_range_pair().0,
        ("parity-small", 0) => zoo::parity_range_pair().1,
        ("tm-incrementer", 0) => zoo::tm_embed(&TuringMachine::unary_incrementer()),
        ("two-state", 0) => zoo::encode_two_state(&source()?)?,
        ("captive", 0) => zoo::encode_captive(&source()?)?,
        ("equipt", 0) => zoo::encode_equipt(&source()?)?,
        ("sensi", 0) => zoo::encode_sensi(&source()?)?,
        _ => bail!("unknown automaton kind {kind:?}; see `bulkca make --help`"),
    })
}

fn join<T: std::fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn props(out: &Out, a: &Automaton, max_period: usize, max_time: usize) -> anyhow::Result<()> {
    fn line<H, F: std::fmt::Display, U: std::fmt::Display>(out: &Out, name: &str, v: &Verdict<H, F, U>) {
        match v {
            Verdict::Holds(_) => out.kv(name, "holds"),
            Verdict::Fails(w) => out.kv(name, format!("fails {w}")),
            Verdict::Unknown(u) => out.kv(name, format!("unknown {u}")),
        }
    }
    struct Word(Vec<State>);
    impl std::fmt::Display for Word {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            write!(f, "{}", join(&self.0, " "))
        }
    }
    let flag = |b: bool| if b { "holds" } else { "fails" };
    match property::is_balanced(a) {
        Ok(b) => out.kv("balanced", flag(b)),
        Err(e) => out.kv("balanced", format!("unknown {e}")),
    }
    match property::is_surjective(a) {
        Ok(v) => line(out, "surjective", &map_fail(v, Word)),
        Err(e) => out.kv("surjective", format!("unknown {e}")),
    }
    match property::is_injective(a) {
        Ok(v) => line(out, "injective", &v),
        Err(e) => out.kv("injective", format!("unknown {e}")),
    }
    match property::is_lr_permutative(a) {
        Ok(b) => out.kv("lr_permutative", flag(b)),
        Err(e) => out.kv("lr_permutative", format!("unknown {e}")),
    }
    out.kv("quiescent", format!("{{{}}}", join(&property::quiescent_states(a), ",")));
    match property::spreading_states(a) {
        Ok(s) => out.kv("spreading", format!("{{{}}}", join(&s, ","))),
        Err(e) => out.kv("spreading", format!("unknown {e}")),
    }
    line(out, "captive", &map_fail(property::is_captive(a), Word));
    match property::nilpotent_over_periodic(a, max_period, max_time)? {
        Verdict::Fails(d) => out.kv("nilpotent_periodic", format!("fails {d}")),
        Verdict::Unknown(u) => out.kv("nilpotent_periodic", format!("unknown {u}")),
        Verdict::Holds(never) => match never {},
    }
    Ok(())
}

fn map_fail<H, F, G, U>(v: Verdict<H, F, U>, f: impl FnOnce(F) -> G) -> Verdict<H, G, U> {
    match v {
        Verdict::Holds(h) => Verdict::Holds(h),
        Verdict::Fails(x) => Verdict::Fails(f(x)),
        Verdict::Unknown(u) => Verdict::Unknown(u),
    }
}

fn report_check(out: &Out, check: &MapCheck) -> ExitCode {
    out.kv("holds", check.holds);
    out.kv("exhaustive", check.exhaustive);
    if let Some(v) = &check.counterexample {
        out.kv("counterexample", join(v, " "));
    }
    match (check.holds, check.exhaustive) {
        (true, true) => ExitCode::SUCCESS,
        (false, _) => ExitCode::from(EXIT_REFUTED),
        (true, false) => ExitCode::from(EXIT_UNKNOWN),
    }
}

fn check(out: &Out, rel: Relation, a: &Automaton, b: &Automaton, map: Option<&str>, subset: Option<&str>) -> anyhow::Result<ExitCode> {
    let subset: Option<Vec<State>> = subset.map(|s| numbers(&s.split(',').collect::<Vec<_>>())).transpose()?;
    if let Some(lit) = map {
        let m = match rel {
            Relation::Inj => StateMap::parse(lit, b.states(), MapRole::Injection)?,
            _ => StateMap::parse(lit, a.states(), MapRole::Surjection)?,
        };
        let check = match rel {
            Relation::Inj => morphism::check_subautomaton(a, b, &m)?,
            Relation::Surj => morphism::check_quotient(a, b, &m)?,
            Relation::Mixed => {
                let q = subset.ok_or_else(|| anyhow::anyhow!("mixed witnesses need --subset"))?;
                morphism::check_mixed(a, b, &q, &m)?
            }
        };
        return Ok(report_check(out, &check));
    }
    let found = match rel {
        Relation::Inj => morphism::find_subautomaton(a, b)?.map(|m| (None, m)),
        Relation::Surj => morphism::find_quotient(a, b)?.map(|m| (None, m)),
        Relation::Mixed => morphism::find_mixed(a, b)?.map(|w| (Some(w.subset), w.map)),
    };
    Ok(match found {
        Some((q, m)) => {
            out.kv("holds", true);
            if let Some(q) = q {
                out.kv("subset", join(&q, ","));
            }
            out.kv("witness", m);
            ExitCode::SUCCESS
        }
        None => {
            out.kv("holds", false);
            out.kv("exhaustive", true);
            ExitCode::from(EXIT_REFUTED)
        }
    })
}

fn info(out: &Out, a: &Automaton) {
    out.kv("label", if a.label().is_empty() { "-" } else { a.label() });
    out.kv("states", a.states());
    out.kv("radius", a.radius());
    out.kv("support", join(a.support(), ","));
    out.kv("materialized", a.is_materialized());
    match a.minimal_neighborhood() {
        Ok(nb) => out.kv("minimal_neighborhood", join(&nb.offsets, ",")),
        Err(_) => {
            let nb = a.minimal_neighborhood_sampled(1 << 16, 0);
            out.kv("minimal_neighborhood", format!("{} (sampled)", join(&nb.offsets, ",")));
        }
    }
    if let Some(sp) = a.shift_product() {
        out.kv("shift_product", sp);
        out.kv("level", zoo::shift_product_level(sp));
        if let Ok(cs) = zoo::characteristic_sequence(sp) {
            out.kv("characteristic", cs);
        }
    }
}

fn real_main(cli: Cli) -> anyhow::Result<ExitCode> {
    let out = Out { porcelain: cli.porcelain };
    match cli.command {
        Command::Make { kind, from, output } => {
            let a = make(&kind, from.as_deref())?;
            emit(write_ca(&a)?.as_bytes(), output.as_deref())?;
        }
        Command::Run { file, config, steps, replicate, pgm, time_up } => {
            let a = load(&file)?;
            let c = parse_config(&config, a.states())?;
            let d = diagram::run(&a, &c, steps, replicate)?;
            match pgm {
                Some(p) => emit(&d.render_pgm(time_up), Some(&p))?,
                None => emit(d.render_ascii(time_up)?.as_bytes(), None)?,
            }
        }
        Command::Props { file, max_period, max_time } => props(&out, &load(&file)?, max_period, max_time)?,
        Command::Check { rel, a, b, map, subset } => {
            return check(&out, rel, &load(&a)?, &load(&b)?, map.as_deref(), subset.as_deref());
        }
        Command::Search { rel, strong, max_m, max_time, max_shift, max_group, mirror, budget, log, a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let bounds = SearchBounds::new(max_m, max_time, max_shift, max_group, mirror)?.with_budget(budget);
            let outcome = if strong {
                simsearch::search_strong(rel, &a, &b, &bounds)
            } else {
                simsearch::search(rel, &a, &b, &bounds)
            };
            if log {
                for e in &outcome.report.events {
                    out.kv("prune", e);
                }
            }
            out.kv("cells", outcome.report.cells);
            out.kv("searched", outcome.report.searched);
            out.kv("open", outcome.report.open());
            return Ok(match outcome.verdict {
                Verdict::Holds(w) => {
                    out.kv("verdict", "holds");
                    out.kv("alpha", w.alpha);
                    out.kv("group_t", w.group_t);
                    if let Some(q) = &w.subset {
                        out.kv("subset", join(q, ","));
                    }
                    out.kv("witness", &w.map);
                    ExitCode::SUCCESS
                }
                Verdict::Unknown(note) => {
                    out.kv("verdict", "unknown");
                    out.kv("note", note);
                    ExitCode::from(EXIT_UNKNOWN)
                }
                Verdict::Fails(never) => match never {},
            });
        }
        Command::Transform { alpha, file, config, normalize, output } => {
            if normalize {
                let nf = normalize_composition(&alpha);
                out.kv("beta", nf.beta);
                out.kv("t", nf.t);
                out.kv("relabeled", !nf.is_plain());
                return Ok(ExitCode::SUCCESS);
            }
            let file = file.ok_or_else(|| anyhow::anyhow!("transform needs a CA file"))?;
            let a = load(&file)?;
            match config {
                Some(lit) => {
                    let c = parse_config(&lit, a.states())?;
                    let p = pack(&c, alpha.m, alpha.tau)?;
                    out.kv("config", p.config);
                    out.kv("replication", p.replication);
                }
                None => emit(write_ca(&apply_transform(&a, &alpha)?)?.as_bytes(), output.as_deref())?,
            }
        }
        Command::Info { file } => info(&out, &load(&file)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match real_main(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
