//! The `mbc` command line.
//!
//! Exit codes: 0 success or property true, 1 property false, 2 bad input,
//! 3 internal error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::admissible::{QuotientWitness, SystemMap};
use crate::blift;
use crate::chartcalc::{compare_atlases, run_program};
use crate::dot;
use crate::error::{Error, Result};
use crate::io::{self, ProgramDoc, SystemDoc, WorkspaceDoc};
use crate::linsys::LinearSystem;
use crate::mbfaces;
use crate::scatprod::{self, ScatConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mbc", about = "Many-body compactifications of linear systems over Q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Graph {
    Poset,
    Incidence,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Close a family of subspaces under intersection.
    Close {
        #[arg(short, long)]
        input: String,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Check whether a workspace map is admissible, or an admissible quotient.
    CheckMap {
        #[arg(short, long)]
        input: String,
        #[arg(long)]
        map: String,
        #[arg(long)]
        quotient: bool,
    },
    /// Boundary hypersurfaces and faces of the compactification.
    Faces {
        #[arg(short, long)]
        input: String,
        /// System name when the input is a workspace.
        #[arg(long)]
        system: Option<String>,
        #[arg(long)]
        codim: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_enum, default_value = "poset")]
        graph: Graph,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Lift an admissible map to the compactifications.
    Lift {
        #[arg(short, long)]
        input: String,
        #[arg(long)]
        map: String,
        #[arg(long)]
        require_b_fibration: bool,
    },
    /// Blow-up chart calculus.
    Charts {
        #[command(subcommand)]
        action: ChartsCommand,
    },
    /// The axes-and-diagonals system on (Q^d)^n.
    Scatprod {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(short, long)]
        output: Option<String>,
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum ChartsCommand {
    /// Execute a blow-up program and print its atlas.
    Run {
        #[arg(short, long)]
        input: String,
        /// Program name when the input is a workspace.
        #[arg(long)]
        program: Option<String>,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Decide whether two programs give b-equivalent atlases.
    Compare {
        a: String,
        b: String,
        #[arg(long)]
        program: Option<String>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    let r = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    r.map_err(|e| Error::doc(path, e.to_string()))?;
    Ok(s)
}

fn has_key(text: &str, key: &str) -> Result<bool> {
    let v: serde_json::Value = io::parse_json(text)?;
    Ok(v.get(key).is_some())
}

fn load_system_input(path: &str, name: Option<&str>) -> Result<LinearSystem> {
    let text = read_input(path)?;
    if has_key(&text, "ambient")? {
        let doc: SystemDoc = io::parse_json(&text)?;
        return io::load_system(&doc, "$");
    }
    let ws = io::load_workspace(&io::parse_json::<WorkspaceDoc>(&text)?)?;
    match name {
        Some(n) => ws.system(n).cloned(),
        None if ws.systems.len() == 1 => Ok(ws.systems.into_values().next().expect("one system")),
        None => Err(Error::doc("$.systems", "workspace holds several systems; pass --system")),
    }
}

fn load_program_input(path: &str, name: Option<&str>) -> Result<io::Program> {
    let text = read_input(path)?;
    if has_key(&text, "corner")? {
        let doc: ProgramDoc = io::parse_json(&text)?;
        return io::load_program(&doc, "$");
    }
    let ws = io::load_workspace(&io::parse_json::<WorkspaceDoc>(&text)?)?;
    match name {
        Some(n) => ws.program(n).cloned(),
        None if ws.programs.len() == 1 => Ok(ws.programs.into_values().next().expect("one program")),
        None => Err(Error::doc("$.programs", "workspace holds several programs; pass --program")),
    }
}

fn load_map_input(path: &str, map: &str) -> Result<SystemMap> {
    let ws = io::load_workspace(&io::parse_json::<WorkspaceDoc>(&read_input(path)?)?)?;
    ws.map(map).cloned()
}

fn emit(out: &mut dyn Write, output: Option<&str>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::doc(p, e.to_string())),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::Internal(format!("write failed: {e}"))),
    }
}

#[derive(Serialize)]
struct WitnessDoc {
    kind: &'static str,
    member: String,
    description: String,
}

fn witness_doc(w: &QuotientWitness, f: &SystemMap) -> WitnessDoc {
    let (kind, member) = match w {
        QuotientWitness::PreimageNotMember { codomain_member } => {
            ("preimage_not_member", f.codomain().name(*codomain_member))
        }
        QuotientWitness::ImageNotMember { domain_member, .. } => ("image_not_member", f.domain().name(*domain_member)),
        QuotientWitness::CodomainMemberNotHit { codomain_member } => {
            ("codomain_member_not_hit", f.codomain().name(*codomain_member))
        }
    };
    WitnessDoc {
        kind,
        member: member.to_string(),
        description: blift::describe_witness(w, f),
    }
}

#[derive(Serialize)]
struct QuotientDoc {
    holds: bool,
    kernel_characterization: bool,
    witness: Option<WitnessDoc>,
}

#[derive(Serialize)]
struct CheckMapDoc {
    map: String,
    admissible: bool,
    /// Codomain member whose preimage is not a domain member.
    admissible_witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient: Option<QuotientDoc>,
}

fn check_map(out: &mut dyn Write, input: &str, map: &str, quotient: bool) -> Result<i32> {
    let f = load_map_input(input, map)?;
    let adm = f.is_admissible()?;
    let mut doc = CheckMapDoc {
        map: f.name.clone(),
        admissible: adm.holds,
        admissible_witness: adm.witness.map(|m| f.codomain().name(m).to_string()),
        quotient: None,
    };
    let mut holds = adm.holds;
    if quotient {
        let q = f.is_admissible_quotient()?;
        let kernel = f.is_quotient_of_kernel()?;
        if kernel != q.holds {
            return Err(Error::Internal(format!("characterizations disagree on {}", f.name)));
        }
        holds = q.holds;
        doc.quotient = Some(QuotientDoc {
            holds: q.holds,
            kernel_characterization: kernel,
            witness: q.witness.as_ref().map(|w| witness_doc(w, &f)),
        });
    }
    emit(out, None, &io::to_json(&doc))?;
    Ok(if holds { EXIT_OK } else { EXIT_FALSE })
}

#[derive(Serialize)]
struct HypersurfaceDoc {
    member: String,
    dim: usize,
    base: Vec<String>,
    fiber_members: usize,
}

#[derive(Serialize)]
struct FacesDoc {
    hypersurfaces: Vec<HypersurfaceDoc>,
    faces_by_codim: BTreeMap<usize, Vec<Vec<String>>>,
}

fn chain_names(s: &LinearSystem, chain: &[usize]) -> Vec<String> {
    chain.iter().map(|&i| s.name(i).to_string()).collect()
}

fn faces(
    out: &mut dyn Write,
    s: &LinearSystem,
    codim: Option<usize>,
    format: Format,
    graph: Graph,
    output: Option<&str>,
) -> Result<i32> {
    let text = match (format, codim) {
        (Format::Dot, _) => match graph {
            Graph::Poset => dot::poset_dot(s),
            Graph::Incidence => dot::incidence_dot(s),
        },
        (Format::Json, Some(k)) => {
            let chains: Vec<Vec<String>> = mbfaces::faces(s, k)?.iter().map(|f| chain_names(s, &f.chain)).collect();
            io::to_json(&chains)
        }
        (Format::Json, None) => {
            let hypersurfaces = mbfaces::hypersurfaces(s)?
                .iter()
                .map(|h| HypersurfaceDoc {
                    member: s.name(h.index).to_string(),
                    dim: s.member(h.index).map(|v| v.dim()).unwrap_or(0),
                    base: chain_names(s, &h.base_indices),
                    fiber_members: h.fiber_system.len(),
                })
                .collect();
            let faces_by_codim = mbfaces::all_faces(s)
                .iter()
                .enumerate()
                .map(|(k, fs)| (k + 1, fs.iter().map(|f| chain_names(s, &f.chain)).collect()))
                .collect();
            io::to_json(&FacesDoc {
                hypersurfaces,
                faces_by_codim,
            })
        }
    };
    emit(out, output, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct LiftDoc {
    map: String,
    quotient: bool,
    /// Domain hypersurface to codomain hypersurface, or to the zero member
    /// when it lands in the interior.
    hyp_image: BTreeMap<String, String>,
    exponent_rows: Vec<String>,
    exponent_cols: Vec<String>,
    exponents: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blowdown_cols: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blowdown: Option<Vec<Vec<u32>>>,
    b_fibration: bool,
}

fn lift(out: &mut dyn Write, input: &str, map: &str, require: bool) -> Result<i32> {
    let f = load_map_input(input, map)?;
    let names = |s: &LinearSystem, v: &[usize]| -> Vec<String> { v.iter().map(|&i| s.name(i).to_string()).collect() };
    let image =
        |pairs: &[(usize, usize)]| -> BTreeMap<String, String> {
            pairs
                .iter()
                .map(|&(l, m)| (f.domain().name(l).to_string(), f.codomain().name(m).to_string()))
                .collect()
        };
    let q = f.is_admissible_quotient()?;
    let doc = if q.holds {
        let l = blift::lift_quotient(&f)?;
        LiftDoc {
            map: f.name.clone(),
            quotient: true,
            hyp_image: image(&l.hyp_image),
            exponent_rows: names(f.domain(), &l.exponents.rows),
            exponent_cols: names(f.codomain(), &l.exponents.cols),
            exponents: l.exponents.entries.clone(),
            blowdown_cols: None,
            blowdown: None,
            b_fibration: l.b_fibration,
        }
    } else {
        let adm = f.is_admissible()?;
        if !adm.holds {
            let m = adm.witness.map(|m| f.codomain().name(m).to_string()).unwrap_or_default();
            return Err(Error::Precondition(format!(
                "{} is not admissible: the preimage of {m} is not a domain member",
                f.name
            )));
        }
        let g = blift::lift_admissible(&f)?;
        let refined = &g.quotient.underlying;
        LiftDoc {
            map: f.name.clone(),
            quotient: false,
            hyp_image: image(&g.hyp_image),
            exponent_rows: names(refined.domain(), &g.quotient.exponents.rows),
            exponent_cols: names(refined.codomain(), &g.quotient.exponents.cols),
            exponents: g.quotient.exponents.entries.clone(),
            blowdown_cols: Some(names(f.domain(), &g.blowdown.cols)),
            blowdown: Some(g.blowdown.entries.clone()),
            b_fibration: false,
        }
    };
    emit(out, None, &io::to_json(&doc))?;
    Ok(if require && !doc.b_fibration { EXIT_FALSE } else { EXIT_OK })
}

fn scatprod_cmd(out: &mut dyn Write, cfg: ScatConfig, verify: bool, format: Format, output: Option<&str>) -> Result<i32> {
    if verify {
        let r = scatprod::verify_standard_maps(cfg)?;
        emit(out, output, &io::to_json(&r))?;
        return Ok(if r.passed { EXIT_OK } else { EXIT_FALSE });
    }
    let s = scatprod::generate(cfg)?;
    let text = match format {
        Format::Json => io::to_json(&io::system_doc(&s)),
        Format::Dot => dot::poset_dot(&s),
    };
    emit(out, output, &text)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Close { input, output } => {
            let doc: SystemDoc = io::parse_json(&read_input(&input)?)?;
            let s = io::load_system(&doc, "$")?;
            emit(out, output.as_deref(), &io::to_json(&io::system_doc(&s)))?;
            Ok(EXIT_OK)
        }
        Command::CheckMap { input, map, quotient } => check_map(out, &input, &map, quotient),
        Command::Faces {
            input,
            system,
            codim,
            format,
            graph,
            output,
        } => {
            let s = load_system_input(&input, system.as_deref())?;
            faces(out, &s, codim, format, graph, output.as_deref())
        }
        Command::Lift {
            input,
            map,
            require_b_fibration,
        } => lift(out, &input, &map, require_b_fibration),
        Command::Charts {
            action: ChartsCommand::Run { input, program, output },
        } => {
            let p = load_program_input(&input, program.as_deref())?;
            let atlas = run_program(&p.corner, &p.centers)?;
            emit(out, output.as_deref(), &io::to_json(&atlas))?;
            Ok(EXIT_OK)
        }
        Command::Charts {
            action: ChartsCommand::Compare { a, b, program },
        } => {
            let pa = load_program_input(&a, program.as_deref())?;
            let pb = load_program_input(&b, program.as_deref())?;
            let cmp = compare_atlases(&run_program(&pa.corner, &pa.centers)?, &run_program(&pb.corner, &pb.centers)?)?;
            emit(out, None, &io::to_json(&cmp))?;
            Ok(if cmp.is_equivalent() { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Scatprod {
            n,
            d,
            output,
            verify,
            format,
        } => scatprod_cmd(out, ScatConfig::new(n, d)?, verify, format, output.as_deref()),
    }
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
