use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use surfkernel::area::AreaPrecomp;
use surfkernel::bigon::{smoothing_minimal, SearchConfig, SectorOrder};
use surfkernel::cover::has_simple_lift;
use surfkernel::curves::CurveSystem;
use surfkernel::generate::random_system;
use surfkernel::homotopy::{canonical_closed, canonical_rep, is_contractible, least_cyclic_rotation};
use surfkernel::medial::medial;
use surfkernel::minor::{format_ops, format_trace, minor_kernel, parse_ops, parse_walk};
use surfkernel::oracle::{oracle_contractible, oracle_signed_area, oracle_simple_lift, Presentation};
use surfkernel::quad::{check_walk, QuadSystem};
use surfkernel::spectrum::SpectrumContext;
use surfkernel::surface::{parse_srf, Surface};
use surfkernel::Error;

#[derive(Parser)]
#[command(name = "surfkernel", version, about = "Minor kernels of graphs embedded on surfaces")]
struct Cli {
    /// Seed for generation and for shuffling the sector order of the kernel search.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the sector search; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Recheck verdicts against the independent oracles.
    #[arg(long, global = true)]
    check: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a kernel of a graph, or tighten a curve system given with a pairing.
    Kernel {
        input: PathBuf,
        /// Directory for the output files; defaults to the input's directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Print a random filling curve system.
    Generate {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// Number of crossings.
        #[arg(long, default_value_t = 40)]
        crossings: usize,
    },
    /// Signed area of a contractible closed walk.
    Area { surface: PathBuf, walk: PathBuf },
    /// Whether a walk lifts to a simple path in the universal cover.
    SimpleLift { surface: PathBuf, walk: PathBuf },
    /// Whether a closed walk is contractible.
    Contractible { surface: PathBuf, walk: PathBuf },
    /// Whether two closed walks are freely homotopic.
    Homotopic {
        surface: PathBuf,
        first: PathBuf,
        second: PathBuf,
        /// Also accept when one walk is homotopic to the reverse of the other.
        #[arg(long)]
        unoriented: bool,
    },
    /// Whether two minors of a graph have the same μ-spectrum.
    SpectrumEq { surface: PathBuf, first: PathBuf, second: PathBuf },
    /// Print the medial curve system of a graph.
    Medial { surface: PathBuf },
    /// Print counts for a surface or curve system.
    Stats { surface: PathBuf },
}

/// Exit status carried through `anyhow` for verdicts that are not errors.
#[derive(Debug)]
struct Disagreement(String);

impl std::fmt::Display for Disagreement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "oracle disagreement: {}", self.0)
    }
}

impl std::error::Error for Disagreement {}

struct Out {
    format: Format,
    lines: Vec<String>,
}

impl Out {
    /// Text mode prints `text`; kv mode prints `kind=<kind>` followed by the fields.
    fn record(&mut self, kind: &str, text: String, fields: &[(&str, String)]) {
        self.lines.push(match self.format {
            Format::Text => text,
            Format::Kv => {
                let mut s = format!("kind={kind}");
                for (k, v) in fields {
                    s.push_str(&format!(" {k}={v}"));
                }
                s
            }
        });
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_surface(path: &Path) -> anyhow::Result<Surface> {
    Ok(parse_srf(&read(path)?).with_context(|| path.display().to_string())?.surface)
}

fn load_walk(path: &Path) -> anyhow::Result<Vec<usize>> {
    parse_walk(&read(path)?).with_context(|| path.display().to_string())
}

fn disagree(what: String) -> anyhow::Error {
    anyhow::Error::new(Disagreement(what))
}

impl Cli {
    fn search_config(&self) -> SearchConfig {
        SearchConfig {
            order: self.seed.map_or(SectorOrder::Natural, SectorOrder::Shuffled),
            parallel: cfg!(feature = "parallel") && self.jobs != Some(1),
        }
    }
}

/// Runs the command; `Ok(false)` is a negative verdict.
fn run(cli: &Cli, out: &mut Out) -> anyhow::Result<bool> {
    match &cli.cmd {
        Cmd::Kernel { input, out_dir } => kernel(cli, input, out_dir.as_deref(), out),
        Cmd::Generate { genus, crossings } => {
            if *genus < 2 {
                return Err(Error::LowGenus(*genus).into());
            }
            if *crossings == 0 {
                bail!("at least one crossing is required");
            }
            let cs = random_system(*genus, *crossings, cli.seed.unwrap_or(0))?;
            out.lines.push(cs.to_srf().trim_end().to_string());
            Ok(true)
        }
        Cmd::Area { surface, walk } => {
            let (g, w) = (load_surface(surface)?, load_walk(walk)?);
            let q = QuadSystem::build(&g)?;
            let area = match AreaPrecomp::new(&g)?.signed_area(&g, &q, &w) {
                Err(Error::NotContractible) => {
                    out.record("area", "not-contractible".into(), &[("verdict", "not-contractible".into())]);
                    return Ok(false);
                }
                r => r?,
            };
            if cli.check {
                let pres = Presentation::new(&g)?;
                // bounded regions hold at most (faces / (4g - 6)) faces per boundary edge
                let cap = g.num_faces() * w.len() + 64;
                match oracle_signed_area(&g, &pres, &w, cap)? {
                    Some(a) if a != area => return Err(disagree(format!("area {area} against oracle {a}"))),
                    Some(_) => {}
                    None => eprintln!("warning: the area oracle could not settle this walk"),
                }
            }
            out.record("area", format!("area {area}"), &[("area", area.to_string())]);
            Ok(true)
        }
        Cmd::SimpleLift { surface, walk } => {
            let (g, w) = (load_surface(surface)?, load_walk(walk)?);
            let q = QuadSystem::build(&g)?;
            let collision = has_simple_lift(&g, &q, &w)?.collision;
            if cli.check {
                let o = oracle_simple_lift(&g, &Presentation::new(&g)?, &w)?;
                if o != collision {
                    return Err(disagree(format!("collision {collision:?} against oracle {o:?}")));
                }
            }
            match collision {
                None => out.record("simple-lift", "simple".into(), &[("verdict", "simple".into())]),
                Some((k, k2)) => out.record(
                    "simple-lift",
                    format!("not-simple collision=({k},{k2})"),
                    &[("verdict", "not-simple".into()), ("k", k.to_string()), ("k2", k2.to_string())],
                ),
            }
            Ok(collision.is_none())
        }
        Cmd::Contractible { surface, walk } => {
            let (g, w) = (load_surface(surface)?, load_walk(walk)?);
            let q = QuadSystem::build(&g)?;
            let yes = is_contractible(&g, &q, &w)?;
            if cli.check && oracle_contractible(&g, &Presentation::new(&g)?, &w)? != yes {
                return Err(disagree(format!("contractible={yes} against the word problem")));
            }
            let v = if yes { "contractible" } else { "not-contractible" };
            out.record("contractible", v.into(), &[("verdict", v.into())]);
            Ok(yes)
        }
        Cmd::Homotopic { surface, first, second, unoriented } => {
            let g = load_surface(surface)?;
            let (a, b) = (load_walk(first)?, load_walk(second)?);
            let q = QuadSystem::build(&g)?;
            let same = if *unoriented {
                canonical_rep(&g, &q, &a)? == canonical_rep(&g, &q, &b)?
            } else {
                oriented_word(&g, &q, &a)? == oriented_word(&g, &q, &b)?
            };
            let v = if same { "homotopic" } else { "not-homotopic" };
            out.record("homotopic", v.into(), &[("verdict", v.into())]);
            Ok(same)
        }
        Cmd::SpectrumEq { surface, first, second } => {
            let g = load_surface(surface)?;
            let (a, b) = (parse_ops(&read(first)?)?, parse_ops(&read(second)?)?);
            let ctx = SpectrumContext::new(&g, cli.search_config())?;
            let equal = ctx.equal(&a, &b)?;
            let v = if equal { "equal" } else { "not-equal" };
            out.record("spectrum-eq", v.into(), &[("verdict", v.into())]);
            if !equal {
                for (side, ops) in [("first", &a), ("second", &b)] {
                    let words = ctx.classes(&ctx.kernel_curves(ops)?)?;
                    let joined: Vec<String> = words.iter().map(|w| w.to_string()).collect();
                    let joined = joined.join(" ");
                    out.record("classes", format!("{side}: {joined}"), &[("side", side.into()), ("words", joined.replace(' ', ","))]);
                }
            }
            Ok(equal)
        }
        Cmd::Medial { surface } => {
            let g = load_surface(surface)?;
            out.lines.push(medial(&g).to_srf().trim_end().to_string());
            Ok(true)
        }
        Cmd::Stats { surface } => {
            let text = read(surface)?;
            let parsed = parse_srf(&text)?;
            let s = &parsed.surface;
            let mut fields = vec![
                ("vertices", s.num_vertices().to_string()),
                ("edges", s.num_edges().to_string()),
                ("faces", s.num_faces().to_string()),
                ("genus", s.genus().to_string()),
            ];
            if parsed.pairing.is_some() {
                let cs = CurveSystem::from_srf(&text)?;
                fields.push(("curves", cs.curves().len().to_string()));
                fields.push(("filling", cs.is_filling(s.genus()).to_string()));
                fields.push(("empty_monogons", cs.find_empty_monogons().len().to_string()));
            }
            let text = fields.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
            out.record("stats", format!("stats {text}"), &fields);
            Ok(true)
        }
    }
}

fn oriented_word(g: &Surface, q: &QuadSystem, w: &[usize]) -> anyhow::Result<Vec<usize>> {
    check_walk(g, w, true)?;
    Ok(least_cyclic_rotation(&canonical_closed(q, &q.project(w))))
}

fn kernel(cli: &Cli, input: &Path, out_dir: Option<&Path>, out: &mut Out) -> anyhow::Result<bool> {
    let text = read(input)?;
    let parsed = parse_srf(&text)?;
    let cfg = cli.search_config();
    let started = Instant::now();
    let (kernel_srf, trace, mop, vertices) = if parsed.pairing.is_some() {
        let cs = CurveSystem::from_srf(&text)?;
        let run = smoothing_minimal(&cs, cfg)?;
        let mop = "# input is a curve system; its smoothings are not minor operations of a graph\n".to_string();
        (run.system.to_srf(), run.trace(), mop, run.system.num_vertices())
    } else {
        let k = minor_kernel(&parsed.surface, cfg)?;
        (k.kernel.to_srf(), k.run.trace(), format_ops(&k.ops), k.kernel.num_vertices())
    };
    let elapsed = started.elapsed().as_millis();
    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => input.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let stem = input.file_stem().context("input has no file name")?.to_string_lossy();
    for (ext, body) in [("kernel.srf", &kernel_srf), ("trace", &format_trace(&trace)), ("mop", &mop)] {
        let path = dir.join(format!("{stem}.{ext}"));
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    out.record(
        "kernel",
        format!("kernel vertices={vertices} smoothings={} elapsed_ms={elapsed}", trace.len()),
        &[("vertices", vertices.to_string()), ("smoothings", trace.len().to_string()), ("elapsed_ms", elapsed.to_string())],
    );
    Ok(true)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Disagreement>().is_some() {
        return 4;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::LowGenus(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs.filter(|&j| j > 1) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = Out { format: cli.format, lines: Vec::new() };
    let result = run(&cli, &mut out);
    for line in &out.lines {
        println!("{line}");
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
