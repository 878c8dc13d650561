use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};

use clap::{Args, Parser, Subcommand};
use lexworld::entropy::{beta_of, entropy_of, greedy_expansion, quasi_greedy_one, QuasiGreedy};
use lexworld::renorm::{
    box_contains, boxes_disjoint, classify, hole_to_pair, AssocPair, ClassifyInput, Hole, RenormBox, Tag,
};
use lexworld::seq::expand;
use lexworld::sft::{build_automaton, components, parry_measure};
use lexworld::words::{enumerate_balanced, sturmian_pair, Ratio, Substitution};
use lexworld::{EPSeq, Error, Rat, Word};
use lexworld_cli::output::{self, num};
use lexworld_cli::scan::{run_scan, ScanSpec};
use serde_json::{json, Map, Value};

static STOP: AtomicBool = AtomicBool::new(false);

#[derive(Parser)]
#[command(name = "lexworld", version, about = "Lexicographic subshifts of the doubling map with a hole")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

fn parse_seq(s: &str) -> Result<EPSeq, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ratio(s: &str) -> Result<Ratio, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_subst(s: &str) -> Result<Substitution, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A kneading pair, given directly or as a hole `(a, b)`.
#[derive(Args, Clone)]
#[group(required = true, multiple = true)]
struct PairArgs {
    /// Upper sequence in `pre(per)` form.
    #[arg(long, value_parser = parse_seq, requires = "beta", conflicts_with_all = ["a", "b"])]
    alpha: Option<EPSeq>,
    /// Lower sequence in `pre(per)` form.
    #[arg(long, value_parser = parse_seq, requires = "alpha")]
    beta: Option<EPSeq>,
    /// Left hole endpoint.
    #[arg(long, value_parser = parse_rat, requires = "b")]
    a: Option<Rat>,
    /// Right hole endpoint.
    #[arg(long, value_parser = parse_rat, requires = "a")]
    b: Option<Rat>,
}

impl PairArgs {
    fn input(&self) -> Result<ClassifyInput, Error> {
        match (&self.alpha, &self.beta, &self.a, &self.b) {
            (Some(x), Some(y), _, _) => Ok(ClassifyInput::Pair(x.clone(), y.clone())),
            (_, _, Some(a), Some(b)) => Ok(ClassifyInput::Hole(Hole::new(a.clone(), b.clone())?)),
            _ => unreachable!("clap enforces a complete pair"),
        }
    }

    fn pair(&self) -> Result<(EPSeq, EPSeq), Error> {
        match self.input()? {
            ClassifyInput::Pair(x, y) => Ok((x, y)),
            ClassifyInput::Hole(h) => hole_to_pair(&h).map(|p| (p.alpha, p.beta)),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a pair or hole and report its ergodicity verdict.
    Classify(PairArgs),
    /// Kneading entropy and dimension.
    Entropy(PairArgs),
    /// Transitive components of the recognising automaton.
    Components {
        #[command(flatten)]
        pair: PairArgs,
        /// Write the transition list to this file.
        #[arg(long)]
        edges: Option<PathBuf>,
        /// Write a Graphviz rendering to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Maximal-entropy Markov measure on one component.
    Measure {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 0)]
        component: usize,
    },
    /// Extremal cyclically balanced words for a ratio.
    Balanced {
        #[arg(long, value_parser = parse_ratio)]
        r: Ratio,
        /// Also list every balanced word.
        #[arg(long)]
        words: bool,
    },
    /// Apply or invert a substitution.
    Subst {
        #[arg(long, value_parser = parse_ratio, required_unless_present = "images", conflicts_with = "images")]
        r: Option<Ratio>,
        /// Explicit images, e.g. `0->01,1->100`.
        #[arg(long, value_parser = parse_subst)]
        images: Option<Substitution>,
        /// A finite word, or a sequence in `pre(per)` form.
        #[arg(long)]
        seq: String,
        #[arg(long)]
        decode: bool,
    },
    /// Binary, greedy and quasi-greedy expansions.
    Expand {
        /// Rational to expand.
        #[arg(long, value_parser = parse_rat)]
        x: Option<Rat>,
        /// Base in (1, 2] for greedy and quasi-greedy digits.
        #[arg(long)]
        base: Option<f64>,
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Parry sequence whose base is wanted.
        #[arg(long, value_parser = parse_seq)]
        parry: Option<EPSeq>,
    },
    /// Renormalisation boxes: diameter, membership and disjointness.
    Boxes {
        #[arg(long, value_parser = parse_word)]
        omega: Word,
        #[arg(long, value_parser = parse_word)]
        nu: Word,
        /// Ratios applied to the box, first applied first.
        #[arg(long, value_parser = parse_ratio)]
        r: Vec<Ratio>,
        #[arg(long, value_parser = parse_seq, requires = "beta")]
        alpha: Option<EPSeq>,
        #[arg(long, value_parser = parse_seq, requires = "alpha")]
        beta: Option<EPSeq>,
        #[arg(long, value_parser = parse_word, requires = "other_nu")]
        other_omega: Option<Word>,
        #[arg(long, value_parser = parse_word, requires = "other_omega")]
        other_nu: Option<Word>,
        #[arg(long, value_parser = parse_ratio)]
        other_r: Vec<Ratio>,
    },
    /// Classify every grid point of a rectangle of centred holes.
    Scan {
        #[arg(long, value_parser = clap::value_parser!(u64).range(4..))]
        denominator: u64,
        #[arg(long, value_parser = parse_rat)]
        a_lo: Option<Rat>,
        #[arg(long, value_parser = parse_rat)]
        a_hi: Option<Rat>,
        #[arg(long, value_parser = parse_rat)]
        b_lo: Option<Rat>,
        #[arg(long, value_parser = parse_rat)]
        b_hi: Option<Rat>,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Print the summary as JSON (needs `--out`).
        #[arg(long, requires = "out")]
        json: bool,
    },
}

enum Failure {
    /// Printed as JSON on stdout.
    Math(Value),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Math(output::error_json(&e)),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// A closed stdout (e.g. piped into `head`) is not an error.
fn print(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("values serialise");
    let _ = writeln!(io::stdout().lock(), "{text}");
}

fn sequence_or_word(s: &str) -> Result<Result<EPSeq, Word>, Error> {
    if s.contains('(') {
        s.parse().map(Ok)
    } else {
        s.parse().map(Err)
    }
}

fn run(cmd: Cmd) -> Result<Option<ExitCode>, Failure> {
    match cmd {
        Cmd::Classify(p) => {
            let c = classify(&p.input()?)?;
            let v = output::classification_json(&c);
            print(&v);
            if let Tag::Extremal(_) = c.tag {
                return Ok(Some(ExitCode::from(1)));
            }
        }
        Cmd::Entropy(p) => {
            let (x, y) = p.pair()?;
            let e = entropy_of(&x, &y)?;
            print(&output::entropy_json(&x, &y, &e));
        }
        Cmd::Components { pair, edges, dot } => {
            let (x, y) = pair.pair()?;
            let a = build_automaton(&x, &y)?;
            let comps = components(&a);
            if let Some(path) = edges {
                let mut f = BufWriter::new(File::create(path)?);
                output::write_edges(&a, &mut f)?;
                f.flush()?;
            }
            if let Some(path) = dot {
                let mut f = BufWriter::new(File::create(path)?);
                output::write_dot(&a, &comps, &mut f)?;
                f.flush()?;
            }
            print(&output::components_json(&a, &comps));
        }
        Cmd::Measure { pair, component } => {
            let (x, y) = pair.pair()?;
            let a = build_automaton(&x, &y)?;
            let m = parry_measure(&a, component)?;
            print(&output::measure_json(&a, &m));
        }
        Cmd::Balanced { r, words } => {
            let (xi, zeta) = sturmian_pair(r);
            let all = enumerate_balanced(r);
            let mut v = json!({"xi": xi.to_string(), "zeta": zeta.to_string(), "count": all.len()});
            if words {
                v["words"] = json!(all.iter().map(Word::to_string).collect::<Vec<_>>());
            }
            let _ = writeln!(io::stdout().lock(), "{v}");
        }
        Cmd::Subst { r, images, seq, decode } => {
            let sub = match (r, images) {
                (Some(r), _) => Substitution::sturmian(r),
                (None, Some(s)) => s,
                (None, None) => unreachable!("clap requires one of --r and --images"),
            };
            let result = match sequence_or_word(&seq)? {
                Ok(x) if decode => sub.decode(&x)?.to_string(),
                Ok(x) => sub.apply(&x).to_string(),
                Err(_) if decode => return Err(Error::NotApplicable("decoding needs an infinite sequence").into()),
                Err(w) => sub.apply_word(&w).to_string(),
            };
            let key = if decode { "decoded" } else { "output" };
            let mut v = json!({"substitution": sub.to_string(), "input": seq});
            v[key] = json!(result);
            print(&v);
        }
        Cmd::Expand { x, base, n, parry } => {
            let mut m = Map::new();
            if let Some(x) = &x {
                m.insert("x".into(), json!(x.to_string()));
                if base.is_none() {
                    m.insert("expansion".into(), json!(expand(x).to_string()));
                }
            }
            if let Some(b) = base {
                m.insert("base".into(), num(b));
                let x = x.unwrap_or_else(Rat::one);
                m.insert("n".into(), json!(n));
                m.insert("greedy".into(), json!(greedy_expansion(&x, b, n).to_string()));
                let q = match quasi_greedy_one(b)? {
                    QuasiGreedy::Periodic(s) => json!({"sequence": s.to_string()}),
                    QuasiGreedy::Truncated(w) => json!({"prefix": w.to_string(), "truncated": true}),
                };
                m.insert("quasi_greedy".into(), q);
            }
            if let Some(p) = parry {
                m.insert("parry".into(), json!(p.to_string()));
                m.insert("beta".into(), num(beta_of(&p)?));
            }
            if m.is_empty() {
                return Err(Error::NotApplicable("give --x, --base or --parry").into());
            }
            print(&Value::Object(m));
        }
        Cmd::Boxes {
            omega,
            nu,
            r,
            alpha,
            beta,
            other_omega,
            other_nu,
            other_r,
        } => {
            let b = RenormBox::new(AssocPair::strict_or_sturmian(omega, nu)?, r);
            let mut v = json!({
                "omega": b.base.omega().to_string(),
                "nu": b.base.nu().to_string(),
                "ratios": b.ratios.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "level": b.level(),
                "diameter": num(b.diameter()),
                "diameter_squared": b.diameter_squared().to_string(),
            });
            if let (Some(x), Some(y)) = (alpha, beta) {
                v["contains"] = json!(box_contains(&b, &x, &y));
            }
            if let (Some(o), Some(n)) = (other_omega, other_nu) {
                let other = RenormBox::new(AssocPair::strict_or_sturmian(o, n)?, other_r);
                v["disjoint"] = json!(boxes_disjoint(&b, &other)?);
            }
            print(&v);
        }
        Cmd::Scan {
            denominator,
            a_lo,
            a_hi,
            b_lo,
            b_hi,
            out,
            jobs,
            json,
        } => {
            let mut spec = ScanSpec::new(denominator)?;
            spec.jobs = jobs;
            let (a0, a1) = spec.a_range.clone();
            let (b0, b1) = spec.b_range.clone();
            spec.a_range = (a_lo.unwrap_or(a0), a_hi.unwrap_or(a1));
            spec.b_range = (b_lo.unwrap_or(b0), b_hi.unwrap_or(b1));
            // A second interrupt falls through to the default behaviour.
            let _ = ctrlc::set_handler(|| {
                if STOP.swap(true, Ordering::SeqCst) {
                    std::process::exit(130);
                }
            });
            let summary = match &out {
                Some(path) => run_scan(&spec, BufWriter::new(File::create(path)?), &STOP)?,
                None => run_scan(&spec, io::stdout().lock(), &STOP)?,
            };
            if out.is_some() {
                if json {
                    let v = json!({
                        "rows": summary.rows,
                        "total": summary.total,
                        "counts": summary.counts,
                        "ie_fraction": summary.ie_fraction().map(num),
                        "truncated": summary.truncated,
                    });
                    print(&v);
                } else {
                    let _ = writeln!(io::stdout().lock(), "{}", summary.footer());
                }
            }
            if summary.truncated {
                return Ok(Some(ExitCode::from(130)));
            }
        }
    }
    Ok(None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code.unwrap_or(ExitCode::SUCCESS),
        Err(Failure::Math(v)) => {
            print(&v);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("lexworld: {e}");
            ExitCode::from(1)
        }
    }
}
