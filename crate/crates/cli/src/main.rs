//! `stablegen` — check, solve, reduce, enumerate and generate matching
//! instances in the canonical text format.
//!
//! Exit codes: 0 solved/verified, 1 no solution (proved), 2 not found
//! (unproved), 3 input error, 4 enumeration budget exceeded.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use stablegen::cyclic3d::{compose, ThreeDMatching};
use stablegen::da::{self, Verdict};
use stablegen::gadget;
use stablegen::io::{
    self, InstanceData, InstanceFile, NameTable, ResultFile, ResultVerdict,
};
use stablegen::oracle::EnumerationBudget;
use stablegen::smg::{Matching, SmgInstance};
use stablegen::smti::{self, PartialMatching};
use stablegen::{gen, lp, oracle, Error, Man, Woman};

const EXIT_OK: i32 = 0;
const EXIT_NO_SOLUTION: i32 = 1;
const EXIT_NOT_FOUND: i32 = 2;
const EXIT_INPUT: i32 = 3;
const EXIT_BUDGET: i32 = 4;

#[derive(Parser)]
#[command(name = "stablegen", version, about = "stable matching toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Da,
    Lp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceTarget {
    /// ties/incomplete lists -> general relations
    SmtiSmg,
    /// fixed-matching extension -> general relations
    SeSmg,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetTarget {
    /// ties/incomplete lists -> fixed-matching extension instance
    SmtiSe,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Smg,
    Smti,
    Cyclic3d,
    Se,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a supplied matching against an instance
    Check {
        /// instance file, or `-` for stdin
        #[arg(default_value = "-")]
        instance: PathBuf,
        /// matching file (`man=woman` tokens; `dog=man=woman` for cyclic3d)
        #[arg(long, short)]
        matching: PathBuf,
    },
    /// Solve an smg instance
    Solve {
        #[arg(default_value = "-")]
        instance: PathBuf,
        #[arg(long, value_enum)]
        algo: Algo,
        /// stream the proposal round log to stderr
        #[arg(long)]
        trace: bool,
    },
    /// Rewrite an instance into an equivalent smg instance
    Reduce {
        #[arg(value_enum)]
        target: ReduceTarget,
        #[arg(default_value = "-")]
        instance: PathBuf,
    },
    /// Embed an smti instance into a fixed-matching extension instance
    Gadget {
        #[arg(value_enum)]
        target: GadgetTarget,
        #[arg(default_value = "-")]
        instance: PathBuf,
    },
    /// List every solution by exhaustive search (small n only)
    Enumerate {
        #[arg(default_value = "-")]
        instance: PathBuf,
        /// refuse instances larger than this
        #[arg(long)]
        max_n: Option<usize>,
        /// abort after this many candidates
        #[arg(long)]
        max_candidates: Option<u64>,
    },
    /// Emit a seeded random instance
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// smg only: at most one orientation per man-pair in each relation
        #[arg(long)]
        asymmetric: bool,
        /// smti only: probability of joining adjacent list entries into a tie
        #[arg(long, default_value_t = 0.3)]
        tie_density: f64,
        /// smti only: probability that a pair is mutually acceptable
        #[arg(long, default_value_t = 0.8)]
        list_density: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli.command));
}

fn input_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

fn read_text(path: &PathBuf) -> Result<String, i32> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| input_error(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| input_error(format!("reading {}: {e}", path.display())))
    }
}

fn load_instance(path: &PathBuf) -> Result<InstanceFile, i32> {
    io::parse_instance(&read_text(path)?).map_err(|e| input_error(e))
}

/// `man=woman` tokens (optionally behind a `matching:` key), resolved by name.
fn parse_pairs(
    text: &str,
    men: &NameTable,
    women: &NameTable,
) -> Result<Vec<(Man, Woman)>, i32> {
    let mut pairs = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let payload = match line.split_once(':') {
            Some(("matching", v)) => v,
            Some(_) => continue,
            None => line,
        };
        for tok in payload.split_whitespace() {
            let (b, c) = tok
                .split_once('=')
                .ok_or_else(|| input_error(format!("expected `man=woman`, got `{tok}`")))?;
            let b = men
                .lookup(b)
                .ok_or_else(|| input_error(format!("unknown man `{b}`")))?;
            let c = women
                .lookup(c)
                .ok_or_else(|| input_error(format!("unknown woman `{c}`")))?;
            pairs.push((Man(b), Woman(c)));
        }
    }
    Ok(pairs)
}

fn matching_names(m: &Matching, men: &NameTable, women: &NameTable) -> Vec<(String, String)> {
    m.pairs()
        .map(|(b, c)| (men.name(b.0).to_string(), women.name(c.0).to_string()))
        .collect()
}

fn run(command: Command) -> i32 {
    match try_run(command) {
        Ok(code) => code,
        Err(code) => code,
    }
}

fn try_run(command: Command) -> Result<i32, i32> {
    match command {
        Command::Check { instance, matching } => {
            let file = load_instance(&instance)?;
            let text = read_text(&matching)?;
            check(&file, &text)
        }
        Command::Solve {
            instance,
            algo,
            trace,
        } => {
            let file = load_instance(&instance)?;
            let InstanceData::Smg(inst) = &file.data else {
                return Err(input_error(format!(
                    "solve requires kind smg, got {} (use `reduce` first)",
                    file.data.kind()
                )));
            };
            match algo {
                Algo::Da => Ok(solve_da(&file, inst, trace)),
                Algo::Lp => solve_lp(&file, inst),
            }
        }
        Command::Reduce { target, instance } => {
            let file = load_instance(&instance)?;
            let out = match target {
                ReduceTarget::SmtiSmg => {
                    let InstanceData::Smti(inst) = &file.data else {
                        return Err(input_error(format!(
                            "reduce smti-smg requires kind smti, got {}",
                            file.data.kind()
                        )));
                    };
                    let smg = smti::reduce_smti_to_smg(inst);
                    let mut men = file.men.clone();
                    let mut women = file.women.clone();
                    men.push_fresh("bx");
                    women.push_fresh("cx");
                    InstanceFile {
                        men,
                        women,
                        dogs: None,
                        data: InstanceData::Smg(smg),
                    }
                }
                ReduceTarget::SeSmg => {
                    let InstanceData::Se(se) = &file.data else {
                        return Err(input_error(format!(
                            "reduce se-smg requires kind se, got {}",
                            file.data.kind()
                        )));
                    };
                    InstanceFile {
                        men: file.men.clone(),
                        women: file.women.clone(),
                        dogs: None,
                        data: InstanceData::Smg(se.to_smg()),
                    }
                }
            };
            print!("{}", io::emit_instance(&out));
            Ok(EXIT_OK)
        }
        Command::Gadget { target, instance } => {
            let GadgetTarget::SmtiSe = target;
            let file = load_instance(&instance)?;
            let InstanceData::Smti(inst) = &file.data else {
                return Err(input_error(format!(
                    "gadget smti-se requires kind smti, got {}",
                    file.data.kind()
                )));
            };
            let (se, layout) = gadget::build_se_gadget(inst);
            let mut men = file.men.clone();
            let mut women = file.women.clone();
            for i in 0..layout.n {
                for j in 0..layout.t[i] {
                    men.push_fresh(&format!("bx{}_{}", i + 1, j + 1));
                    women.push_fresh(&format!("cx{}_{}", i + 1, j + 1));
                }
            }
            for k in 1..=3 {
                men.push_fresh(&format!("bz{k}"));
                women.push_fresh(&format!("cz{k}"));
            }
            let out = InstanceFile {
                men,
                women,
                dogs: Some(NameTable::numbered("a", layout.side)),
                data: InstanceData::Se(se),
            };
            print!("{}", io::emit_instance(&out));
            Ok(EXIT_OK)
        }
        Command::Enumerate {
            instance,
            max_n,
            max_candidates,
        } => {
            let file = load_instance(&instance)?;
            let mut budget = EnumerationBudget::default();
            if let Some(m) = max_n {
                budget.max_n = m;
            }
            if let Some(m) = max_candidates {
                budget.max_candidates = m;
            }
            enumerate(&file, budget)
        }
        Command::Gen {
            kind,
            n,
            seed,
            asymmetric,
            tie_density,
            list_density,
        } => {
            let data = match kind {
                GenKind::Smg => InstanceData::Smg(gen::gen_smg(n, seed, asymmetric)),
                GenKind::Smti => {
                    InstanceData::Smti(gen::gen_smti(n, seed, tie_density, list_density))
                }
                GenKind::Cyclic3d => InstanceData::Cyclic(gen::gen_cyclic(n, seed)),
                GenKind::Se => InstanceData::Se(gen::gen_se(n, seed)),
            };
            print!(
                "{}",
                io::emit_instance(&InstanceFile::with_default_names(data))
            );
            Ok(EXIT_OK)
        }
    }
}

fn check(file: &InstanceFile, matching_text: &str) -> Result<i32, i32> {
    match &file.data {
        InstanceData::Smg(inst) => {
            let pairs = parse_pairs(matching_text, &file.men, &file.women)?;
            let m = Matching::from_pairs(inst.n(), pairs).map_err(|e| input_error(e))?;
            let (stable, blocking) = inst.is_stable(&m).map_err(|e| input_error(e))?;
            let mut res = if stable {
                ResultFile::new(ResultVerdict::StableMatchingFound)
            } else {
                ResultFile::new(ResultVerdict::NotFound)
            };
            res.matching = matching_names(&m, &file.men, &file.women);
            res.blocking_pairs = blocking
                .iter()
                .map(|&(b, c)| {
                    (
                        file.men.name(b.0).to_string(),
                        file.women.name(c.0).to_string(),
                    )
                })
                .collect();
            print!("{}", io::emit_result(&res));
            Ok(if stable { EXIT_OK } else { EXIT_NOT_FOUND })
        }
        InstanceData::Smti(inst) => {
            let pairs = parse_pairs(matching_text, &file.men, &file.women)?;
            let m = PartialMatching::new(inst, pairs).map_err(|e| input_error(e))?;
            let (stable, blocking) = inst.is_weakly_stable(&m).map_err(|e| input_error(e))?;
            let mut res = if stable {
                ResultFile::new(ResultVerdict::StableMatchingFound)
            } else {
                ResultFile::new(ResultVerdict::NotFound)
            };
            res.matching = m
                .pairs()
                .map(|(b, c)| {
                    (
                        file.men.name(b.0).to_string(),
                        file.women.name(c.0).to_string(),
                    )
                })
                .collect();
            res.blocking_pairs = blocking
                .iter()
                .map(|&(b, c)| {
                    (
                        file.men.name(b.0).to_string(),
                        file.women.name(c.0).to_string(),
                    )
                })
                .collect();
            print!("{}", io::emit_result(&res));
            Ok(if stable { EXIT_OK } else { EXIT_NOT_FOUND })
        }
        InstanceData::Se(se) => {
            let pairs = parse_pairs(matching_text, &file.men, &file.women)?;
            let m = Matching::from_pairs(se.n(), pairs).map_err(|e| input_error(e))?;
            let mm = compose(&se.fixed, &m).map_err(|e| input_error(e))?;
            report_3d(file, &se.cyclic, &mm)
        }
        InstanceData::Cyclic(inst) => {
            let dogs = file
                .dogs
                .as_ref()
                .expect("cyclic instances carry a dog table");
            let mut triples = Vec::new();
            for line in matching_text.lines() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let payload = match line.split_once(':') {
                    Some(("matching", v)) => v,
                    Some(_) => continue,
                    None => line,
                };
                for tok in payload.split_whitespace() {
                    let mut it = tok.split('=');
                    let (Some(a), Some(b), Some(c), None) =
                        (it.next(), it.next(), it.next(), it.next())
                    else {
                        return Err(input_error(format!(
                            "expected `dog=man=woman`, got `{tok}`"
                        )));
                    };
                    let a = dogs
                        .lookup(a)
                        .ok_or_else(|| input_error(format!("unknown dog `{a}`")))?;
                    let b = file
                        .men
                        .lookup(b)
                        .ok_or_else(|| input_error(format!("unknown man `{b}`")))?;
                    let c = file
                        .women
                        .lookup(c)
                        .ok_or_else(|| input_error(format!("unknown woman `{c}`")))?;
                    triples.push((stablegen::Dog(a), Man(b), Woman(c)));
                }
            }
            let mm =
                ThreeDMatching::from_triples(inst.n(), triples).map_err(|e| input_error(e))?;
            report_3d(file, inst, &mm)
        }
    }
}

fn report_3d(
    file: &InstanceFile,
    inst: &stablegen::cyclic3d::CyclicInstance,
    mm: &ThreeDMatching,
) -> Result<i32, i32> {
    let dogs = file.dogs.as_ref().expect("cyclic instances carry a dog table");
    let (stable, blocking) = inst.is_3d_stable(mm).map_err(|e| input_error(e))?;
    let mut res = if stable {
        ResultFile::new(ResultVerdict::StableMatchingFound)
    } else {
        ResultFile::new(ResultVerdict::NotFound)
    };
    res.matching = mm
        .triples()
        .map(|(_, b, c)| {
            (
                file.men.name(b.0).to_string(),
                file.women.name(c.0).to_string(),
            )
        })
        .collect();
    res.blocking_triples = blocking
        .iter()
        .map(|&(a, b, c)| {
            (
                dogs.name(a.0).to_string(),
                file.men.name(b.0).to_string(),
                file.women.name(c.0).to_string(),
            )
        })
        .collect();
    print!("{}", io::emit_result(&res));
    Ok(if stable { EXIT_OK } else { EXIT_NOT_FOUND })
}

fn solve_da(file: &InstanceFile, inst: &SmgInstance, trace: bool) -> i32 {
    let start = Instant::now();
    let res = da::solve_da(inst);
    let wall = start.elapsed().as_millis() as u64;
    if trace {
        for rec in &res.trace {
            let mut line = format!("round {}:", rec.round);
            for &(b, c) in &rec.proposals {
                write!(line, " {}->{}", file.men.name(b.0), file.women.name(c.0)).unwrap();
            }
            for &(b, c) in &rec.rejections {
                write!(line, " {}x{}", file.men.name(b.0), file.women.name(c.0)).unwrap();
            }
            eprintln!("{line}");
        }
    }
    let (verdict, matching, code) = match res.verdict {
        Verdict::Solution(m) => (ResultVerdict::StableMatchingFound, Some(m), EXIT_OK),
        Verdict::NoStableMatching => (ResultVerdict::NoStableMatching, None, EXIT_NO_SOLUTION),
        Verdict::NotFound => (ResultVerdict::NotFound, None, EXIT_NOT_FOUND),
    };
    let mut out = ResultFile::new(verdict);
    out.algorithm = Some("da".into());
    out.rounds = Some(res.trace.len() as u64);
    out.proposals = Some(res.proposal_count as u64);
    out.wall_ms = Some(wall);
    if let Some(m) = matching {
        out.matching = matching_names(&m, &file.men, &file.women);
    }
    print!("{}", io::emit_result(&out));
    code
}

fn solve_lp(file: &InstanceFile, inst: &SmgInstance) -> Result<i32, i32> {
    if !inst.is_asymmetric() {
        return Err(input_error(
            "solve --algo lp requires asymmetric relations (at most one \
             orientation per man-pair)",
        ));
    }
    let start = Instant::now();
    let decided = lp::decide_via_lp(inst).map_err(|e| input_error(e))?;
    let wall = start.elapsed().as_millis() as u64;
    let (verdict, matching, code) = match decided {
        Some(m) => (ResultVerdict::StableMatchingFound, Some(m), EXIT_OK),
        None => (ResultVerdict::InfeasibleLp, None, EXIT_NO_SOLUTION),
    };
    let mut out = ResultFile::new(verdict);
    out.algorithm = Some("lp".into());
    out.wall_ms = Some(wall);
    if let Some(m) = matching {
        out.matching = matching_names(&m, &file.men, &file.women);
    }
    print!("{}", io::emit_result(&out));
    Ok(code)
}

fn enumerate(file: &InstanceFile, budget: EnumerationBudget) -> Result<i32, i32> {
    let map_err = |e: Error| match e {
        Error::BudgetExceeded(msg) => {
            eprintln!("error: {msg}");
            EXIT_BUDGET
        }
        other => input_error(other),
    };
    let solutions: Vec<Vec<(String, String)>> = match &file.data {
        InstanceData::Smg(inst) => oracle::enumerate_stable_smg(inst, budget)
            .map_err(map_err)?
            .iter()
            .map(|m| matching_names(m, &file.men, &file.women))
            .collect(),
        InstanceData::Smti(inst) => {
            oracle::enumerate_perfect_weakly_stable_smti(inst, budget)
                .map_err(map_err)?
                .iter()
                .map(|m| {
                    m.pairs()
                        .map(|(b, c)| {
                            (
                                file.men.name(b.0).to_string(),
                                file.women.name(c.0).to_string(),
                            )
                        })
                        .collect()
                })
                .collect()
        }
        InstanceData::Se(se) => oracle::enumerate_stable_extensions(se, budget)
            .map_err(map_err)?
            .iter()
            .map(|m| matching_names(m, &file.men, &file.women))
            .collect(),
        InstanceData::Cyclic(_) => {
            return Err(input_error(
                "enumerate supports smg, smti and se (cyclic3d needs a fixed \
                 matching; see kind se)",
            ))
        }
    };
    println!("solutions: {}", solutions.len());
    for sol in &solutions {
        let pairs: Vec<String> = sol.iter().map(|(b, c)| format!("{b}={c}")).collect();
        println!("matching: {}", pairs.join(" "));
    }
    Ok(if solutions.is_empty() {
        EXIT_NO_SOLUTION
    } else {
        EXIT_OK
    })
}
