use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use welded::pd::{find_sites, pd_to_gauss, MoveDirection, PdMoveKind};
use welded::search::{enumerate_gauss, find_single_move_trivial_pair, is_trivial_bounded};
use welded::unknotting::{prop24_bound, unknot_descending, unknotting_upper, UnknottingError};
use welded::{canonical_code, parse_gauss_code, serialize, GaussDiagram, PlanarDiagram, SearchLimits, SearchVerdict};

#[derive(Parser)]
#[command(name = "welded", version, about = "Welded knot diagrams: rewriting, unknotting and bounded search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct LimitArgs {
    /// Largest chord count a visited state may have (default: input chords + 2).
    #[arg(long)]
    max_chords: Option<usize>,
    #[arg(long, default_value_t = SearchLimits::default().max_states)]
    max_states: usize,
    #[arg(long, default_value_t = SearchLimits::default().max_depth)]
    max_depth: usize,
}

impl LimitArgs {
    fn limits(self) -> SearchLimits {
        SearchLimits { max_chords: self.max_chords, max_states: self.max_states, max_depth: self.max_depth }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    Forward,
    Backward,
}

#[derive(Subcommand)]
enum Command {
    /// Greedy chord removal to a fixpoint.
    Reduce {
        code: String,
        #[arg(long)]
        emit_trace: bool,
    },
    /// Crossing changes making the diagram descending, then a trace to the empty diagram.
    Unknot { code: String },
    /// Best per-chord bound from the two opposite descending readings.
    Bound { code: String },
    /// Bounded search for a move sequence to the empty diagram.
    Trivial {
        code: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Upper bound on the unknotting number by searching chord subsets.
    U {
        code: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Lists the sites of a planar diagram move, or applies one.
    PdApply {
        file: PathBuf,
        #[arg(long = "move")]
        kind: String,
        #[arg(long, value_enum, default_value = "forward")]
        direction: Direction,
        /// Site as printed by the listing, e.g. "face 0:1,1:2,2:3".
        #[arg(long)]
        site: Option<String>,
        /// Variant as printed by the listing; defaults to the first at the site.
        #[arg(long)]
        variant: Option<String>,
    },
    /// Gauss code of a planar diagram.
    Pd2gauss { file: PathBuf },
    /// Searches for two trivial diagrams related by one Delta or sharp move.
    SearchPair {
        #[arg(long = "move")]
        kind: String,
        #[command(flatten)]
        limits: LimitArgs,
        /// Writes before.json and after.json here instead of printing them.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Every labelled Gauss diagram with the given chord count.
    Enumerate {
        #[arg(long)]
        chords: usize,
        #[arg(long)]
        dedup: bool,
    },
}

/// Failure with its exit status.
struct Fail(u8, String);

type Outcome = Result<(String, u8), Fail>;

fn input(msg: impl std::fmt::Display) -> Fail {
    Fail(2, msg.to_string())
}

fn parse(code: &str) -> Result<GaussDiagram, Fail> {
    parse_gauss_code(code).map_err(|e| input(format!("{e:?}: {e}")))
}

fn read_pd(path: &Path) -> Result<PlanarDiagram, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    PlanarDiagram::from_json(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn limits_line(l: &SearchLimits) -> String {
    format!("limits {l}\n")
}

fn run(cmd: Command) -> Outcome {
    let mut out = String::new();
    match cmd {
        Command::Reduce { code, emit_trace } => {
            let g = parse(&code)?;
            let (rest, trace) = welded::unknotting::reduce(&g);
            writeln!(out, "code {}", canonical_code(&rest)).unwrap();
            writeln!(out, "n={}", rest.n()).unwrap();
            if emit_trace {
                out.push_str(&trace.to_text());
            }
        }
        Command::Unknot { code } => {
            let g = parse(&code)?;
            let u = unknot_descending(&g);
            let set: Vec<String> = u.change_set.iter().map(|c| c.to_string()).collect();
            writeln!(out, "basepoint {} {}", u.slot, u.direction).unwrap();
            writeln!(out, "change_set {{{}}}", set.join(",")).unwrap();
            writeln!(out, "size {}", u.change_set.len()).unwrap();
            writeln!(out, "descending {}", serialize(&u.descending)).unwrap();
            out.push_str(&u.trace.to_text());
        }
        Command::Bound { code } => {
            let g = parse(&code)?;
            let cert = match prop24_bound(&g) {
                Ok(c) => c,
                Err(UnknottingError::EmptyDiagram) => return Err(Fail(3, "bound needs at least one chord".into())),
                Err(e) => return Err(input(e)),
            };
            let set = |s: &std::collections::BTreeSet<u32>| {
                format!("{{{}}}", s.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            };
            let limit = (g.n() - 1) / 2;
            writeln!(out, "chord {}", cert.chord).unwrap();
            writeln!(out, "p1 {} forward S1 {}", cert.p1, set(&cert.s1)).unwrap();
            writeln!(out, "p2 {} backward S2 {}", cert.p2, set(&cert.s2)).unwrap();
            writeln!(out, "bound {}", cert.bound).unwrap();
            let ok = cert.bound <= limit && cert.verify(&g).is_ok();
            writeln!(out, "check {} ≤ {}: {}", cert.bound, limit, if ok { "OK" } else { "FAIL" }).unwrap();
            if !ok {
                return Ok((out, 1));
            }
        }
        Command::Trivial { code, limits } => {
            let g = parse(&code)?;
            let l = limits.limits();
            let v = is_trivial_bounded(&g, &l);
            out.push_str(&v.to_text());
            if !v.is_certified() {
                out.push_str(&limits_line(&l));
                return Ok((out, 1));
            }
        }
        Command::U { code, limits } => {
            let g = parse(&code)?;
            let l = limits.limits();
            match unknotting_upper(&g, &l) {
                Ok(b) => {
                    let set: Vec<String> = b.witness.iter().map(|c| c.to_string()).collect();
                    writeln!(out, "u ≤ {}", b.value).unwrap();
                    writeln!(out, "witness {{{}}}", set.join(",")).unwrap();
                    writeln!(out, "exhaustive_below {}", b.exhaustive_below).unwrap();
                    out.push_str(&b.trace.to_text());
                }
                Err(UnknottingError::LimitsExceeded { fallback }) => {
                    let set: Vec<String> = fallback.witness.iter().map(|c| c.to_string()).collect();
                    writeln!(out, "UNKNOWN search limits exceeded").unwrap();
                    writeln!(out, "fallback u ≤ {} witness {{{}}}", fallback.value, set.join(",")).unwrap();
                    out.push_str(&limits_line(&l));
                    return Ok((out, 1));
                }
                Err(e) => return Err(input(e)),
            }
        }
        Command::PdApply { file, kind, direction, site, variant } => {
            let pd = read_pd(&file)?;
            let kind: PdMoveKind = kind.parse().map_err(input)?;
            let dir = match direction {
                Direction::Forward => MoveDirection::Forward,
                Direction::Backward => MoveDirection::Backward,
            };
            let sites = find_sites(&pd, kind, dir);
            let Some(site) = site else {
                for m in &sites {
                    writeln!(out, "{m}").unwrap();
                }
                return Ok((out, if sites.is_empty() { 1 } else { 0 }));
            };
            let norm = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
            let site = norm(&site);
            let mv = sites
                .iter()
                .find(|m| norm(&m.site.to_string()) == site && variant.as_deref().map_or(true, |v| m.variant.to_string() == v))
                .ok_or_else(|| Fail(3, format!("no {kind} {direction:?} move at site {site:?}").to_lowercase()))?;
            let after = welded::pd::apply_pd_move(&pd, mv).map_err(|e| Fail(3, e.to_string()))?;
            writeln!(out, "{}", after.to_json()).unwrap();
        }
        Command::Pd2gauss { file } => {
            let pd = read_pd(&file)?;
            let g = pd_to_gauss(&pd).map_err(input)?;
            writeln!(out, "{}", serialize(&g)).unwrap();
        }
        Command::SearchPair { kind, limits, out_dir } => {
            let kind: PdMoveKind = kind.parse().map_err(input)?;
            if !matches!(kind, PdMoveKind::Delta | PdMoveKind::Sharp) {
                return Err(input(format!("pair search supports delta and sharp, not {kind}")));
            }
            let l = limits.limits();
            let Some(pair) = find_single_move_trivial_pair(kind, &l) else {
                writeln!(out, "NOT FOUND").unwrap();
                out.push_str(&limits_line(&l));
                return Ok((out, 1));
            };
            writeln!(out, "move {}", pair.mv).unwrap();
            match &out_dir {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
                    for (name, pd) in [("before.json", &pair.before), ("after.json", &pair.after)] {
                        let path = dir.join(name);
                        std::fs::write(&path, pd.to_json() + "\n").map_err(|e| input(format!("{}: {e}", path.display())))?;
                        writeln!(out, "wrote {}", path.display()).unwrap();
                    }
                }
                None => {
                    writeln!(out, "before {}", pair.before.to_json()).unwrap();
                    writeln!(out, "after {}", pair.after.to_json()).unwrap();
                }
            }
            for (name, t) in [("before", &pair.before_trace), ("after", &pair.after_trace)] {
                writeln!(out, "{name} TRIVIAL code {} depth {}", serialize(t.start()), t.len()).unwrap();
                out.push_str(&SearchVerdict::Certified(t.clone()).to_text());
            }
        }
        Command::Enumerate { chords, dedup } => {
            if chords > 5 {
                return Err(Fail(3, "enumeration is limited to 5 chords".into()));
            }
            for g in enumerate_gauss(chords, dedup) {
                writeln!(out, "{}", serialize(&g)).unwrap();
            }
        }
    }
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
