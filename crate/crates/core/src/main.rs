use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weaklam::chain::chain_from_superstep;
use weaklam::engine::Engine;
use weaklam::marked::marked_redexes;
use weaklam::harness::{run_suite, suites, GenConfig};
use weaklam::labeled::labeled_normalize_bounded;
use weaklam::lambda::Lambda;
use weaklam::{
    detect_creations, label_initial, mark_initial, parse, weak_normalize, AnyTerm, Barrier, Error, Grammar,
    LTerm, MTerm, Position, ReductionTrace, TraceStatus,
};

#[derive(Parser)]
#[command(name = "weaklam", version, about = "Weak lambda calculus and its superdevelopments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct Shared {
    /// Comma separated barrier variables
    #[arg(long, global = true, default_value = "")]
    barrier: String,
    #[arg(long, global = true, default_value_t = 0)]
    k: usize,
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    count: Option<usize>,
    #[arg(long = "max-size", global = true)]
    max_size: Option<usize>,
    #[arg(long, global = true, default_value_t = 1000)]
    fuel: usize,
    /// Grammar of the input term; guessed from its characters by default
    #[arg(long, global = true, value_enum)]
    grammar: Option<GrammarArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GrammarArg {
    Plain,
    Labeled,
    Marked,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and print it back
    Parse { term: String },
    /// Normalize with leftmost-outermost weak (or labeled) steps
    Reduce { term: String },
    /// Full superdevelopment A⇓{S,k}; plain input is labeled initially first
    Superdev {
        term: String,
        /// Also print the superstep derivation and chain witness
        #[arg(long)]
        witness: bool,
    },
    /// Superstep targets, or a derivation for a given target
    Superstep {
        term: String,
        #[arg(long)]
        target: Option<String>,
    },
    /// Initial labeling
    Label { term: String },
    /// Initial marking
    Mark { term: String },
    /// Redexes created by contracting a marked redex
    Creations {
        term: String,
        /// Position of the contracted redex; every marked redex by default
        #[arg(long)]
        at: Option<String>,
    },
    /// Run property suites
    Check {
        /// Suites to run; all by default
        suites: Vec<String>,
        #[arg(long)]
        list: bool,
        /// Include wall times in the report
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Usage(String),
    Property,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_term(text: &str, shared: &Shared) -> Result<AnyTerm, Failure> {
    let text = if text == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        buf
    } else {
        text.to_string()
    };
    let grammar = match shared.grammar {
        Some(GrammarArg::Plain) => Grammar::Plain,
        Some(GrammarArg::Labeled) => Grammar::Labeled,
        Some(GrammarArg::Marked) => Grammar::Marked,
        None => Grammar::detect(&text),
    };
    parse(&text, grammar).map_err(|e| Failure::Usage(e.to_string()))
}

/// Labeled view of the input: plain terms get their initial labeling.
fn as_labeled(t: AnyTerm) -> Result<LTerm, Failure> {
    match t {
        AnyTerm::Plain(m) => Ok(label_initial(&m)),
        AnyTerm::Labeled(a) => Ok(a),
        AnyTerm::Marked(_) => Err(Failure::Usage("expected a plain or labeled term".into())),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn print_trace<T: Lambda + std::fmt::Display>(t: &ReductionTrace<T>, status: TraceStatus, json: bool) {
    if json {
        print_json(&t.to_json(Some(status)));
        return;
    }
    println!("{}", t.start);
    for step in &t.steps {
        println!("  → {}    [{}]", step.after, step.redex);
    }
    println!("{} after {} steps", status.as_str(), t.len());
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let sh = &cli.shared;
    let s = Barrier::parse(&sh.barrier);
    let reserved = s.set();
    match &cli.command {
        Command::Parse { term } => {
            let t = read_term(term, sh)?;
            let (text, fv, size) = match &t {
                AnyTerm::Plain(m) => (m.to_string(), m.free_vars(), m.size()),
                AnyTerm::Labeled(a) => (a.to_string(), a.free_vars(), a.size()),
                AnyTerm::Marked(a) => (a.to_string(), a.free_vars(), a.size()),
            };
            if sh.json {
                print_json(&json!({ "term": text, "free_vars": fv.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "size": size }));
            } else {
                println!("{text}");
            }
        }
        Command::Reduce { term } => match read_term(term, sh)? {
            AnyTerm::Plain(m) => {
                let n = weak_normalize(&m, &s, sh.fuel);
                print_trace(&n.trace, n.status, sh.json);
            }
            AnyTerm::Labeled(a) => {
                let n = labeled_normalize_bounded(&a, &s, sh.fuel);
                print_trace(&n.trace, n.status, sh.json);
            }
            AnyTerm::Marked(_) => return Err(Failure::Usage("reduce expects a plain or labeled term".into())),
        },
        Command::Superdev { term, witness } => {
            let a = as_labeled(read_term(term, sh)?)?.normalized(&reserved);
            let mut eng = Engine::with_reserved(&a, &reserved);
            let result = eng.full(&s, sh.k);
            let proof = match (&result, witness) {
                (Some(r), true) => {
                    let d = eng.derive(r, &s, sh.k)?.ok_or_else(|| Error::Internal("⇓ result not derivable".into()))?;
                    let w = chain_from_superstep(&d)?;
                    Some((d.to_json(), w.to_json()))
                }
                _ => None,
            };
            if sh.json {
                let mut v = json!({
                    "source": a.to_string(),
                    "k": sh.k,
                    "barrier": s.vars().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "result": result.as_ref().map(|r| r.to_string()),
                    "erased": result.as_ref().map(|r| r.erase().to_string()),
                });
                if let Some((d, w)) = proof {
                    v["derivation"] = d;
                    v["chain"] = w;
                }
                print_json(&v);
            } else {
                match &result {
                    Some(r) => println!("{r}"),
                    None => println!("undefined"),
                }
                if let Some((d, w)) = proof {
                    print_json(&json!({ "derivation": d, "chain": w }));
                }
            }
        }
        Command::Superstep { term, target } => {
            let t = read_term(term, sh)?;
            match t {
                AnyTerm::Plain(m) => superstep(Engine::with_reserved(&m, &reserved), target.as_deref(), &s, sh, |t| match t {
                    AnyTerm::Plain(n) => Ok(n),
                    _ => Err(Failure::Usage("target must be a plain term".into())),
                })?,
                AnyTerm::Labeled(a) => superstep(Engine::with_reserved(&a, &reserved), target.as_deref(), &s, sh, as_labeled)?,
                AnyTerm::Marked(_) => return Err(Failure::Usage("superstep expects a plain or labeled term".into())),
            }
        }
        Command::Label { term } => {
            let a = as_labeled(read_term(term, sh)?)?;
            if sh.json {
                print_json(&json!({ "term": a.to_string() }));
            } else {
                println!("{a}");
            }
        }
        Command::Mark { term } => {
            let a = match read_term(term, sh)? {
                AnyTerm::Plain(m) => mark_initial(&m),
                AnyTerm::Marked(a) => a,
                AnyTerm::Labeled(_) => return Err(Failure::Usage("mark expects a plain term".into())),
            };
            if sh.json {
                print_json(&json!({ "term": a.to_string(), "redexes": marked_redexes(&a).iter().map(|p| p.dirs().to_vec()).collect::<Vec<_>>() }));
            } else {
                println!("{a}");
            }
        }
        Command::Creations { term, at } => {
            let a: MTerm = match read_term(term, sh)? {
                AnyTerm::Plain(m) => mark_initial(&m),
                AnyTerm::Marked(a) => a,
                AnyTerm::Labeled(_) => return Err(Failure::Usage("creations expects a marked or plain term".into())),
            };
            let ps = match at {
                Some(text) => vec![Position::parse(text).ok_or_else(|| Failure::Usage(format!("bad position {text}")))?],
                None => marked_redexes(&a),
            };
            let mut found = Vec::new();
            for p in ps {
                found.extend(detect_creations(&a, &p)?);
            }
            if sh.json {
                print_json(&Value::Array(found.iter().map(|c| c.to_json()).collect()));
            } else {
                for c in &found {
                    println!("case {} created at {} by contracting {}", c.case, c.created, c.contracted);
                }
                if found.is_empty() {
                    println!("no created redexes");
                }
            }
        }
        Command::Check { suites: names, list, timings } => {
            if *list {
                for s in suites() {
                    println!("{:<42} {}", s.name, s.description);
                }
                return Ok(());
            }
            let mut cfg = GenConfig::default();
            if let Some(seed) = sh.seed {
                cfg.seed = seed;
            }
            if let Some(count) = sh.count {
                cfg.count = count;
            }
            if let Some(m) = sh.max_size {
                cfg.max_size = m;
            }
            let names: Vec<String> = if names.is_empty() {
                suites().iter().map(|s| s.name.to_string()).collect()
            } else {
                names.clone()
            };
            let mut reports = Vec::new();
            for name in &names {
                reports.push(run_suite(name, &cfg)?);
            }
            let ok = reports.iter().all(|r| r.passed());
            if sh.json {
                print_json(&Value::Array(reports.iter().map(|r| r.to_json(*timings)).collect()));
            } else {
                for r in &reports {
                    println!("{}", r.to_text(*timings));
                }
            }
            if !ok {
                return Err(Failure::Property);
            }
        }
    }
    Ok(())
}

fn superstep<T: Lambda + std::fmt::Display>(
    mut eng: Engine<T>,
    target: Option<&str>,
    s: &Barrier,
    sh: &Shared,
    convert: impl Fn(AnyTerm) -> Result<T, Failure>,
) -> Result<(), Failure> {
    match target {
        None => {
            let targets = eng.enumerate(s, sh.k)?;
            if sh.json {
                print_json(&json!({ "targets": targets.iter().map(|t| t.to_string()).collect::<Vec<_>>() }));
            } else {
                for t in &targets {
                    println!("{t}");
                }
            }
        }
        Some(text) => {
            let n = convert(read_term(text, sh)?)?.normalized(&s.set());
            let d = eng.derive(&n, s, sh.k)?;
            if sh.json {
                print_json(&json!({ "derivable": d.is_some(), "derivation": d.as_ref().map(|d| d.to_json()) }));
            } else {
                match d {
                    Some(d) => println!("{d}"),
                    None => println!("not derivable"),
                }
            }
        }
    }
    Ok(())
}
