//! Subcommand implementations. Every verification run returns whether any
//! verdict was Violated so `main` can map it to exit code 2.

use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use ri_core::corpus;
use ri_core::grammar;
use ri_core::interp::{j_functional, k_functional};
use ri_core::report::{write_atomic, SuiteRun};
use ri_core::suites::{self, BilinearGrid, BilinearOpSpec, ThetaEdge};
use ri_core::trig::MultiplierSymbol;
use ri_core::varying::SlowlyVarying;
use ri_core::{conv, Domain, Error, Result, StepFunction};

use crate::config::{out_dir, Resolver};
use crate::{ConvArgs, KfunArgs, MultiplierArgs, NormArgs, RearrangeArgs, VerifyArgs};

fn read_step(path: &Path) -> Result<StepFunction> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path)?
    };
    StepFunction::from_text(&text)
}

fn emit_text(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run_norm(args: &NormArgs) -> Result<()> {
    let f = read_step(&args.input)?;
    let domain = match &args.domain {
        Some(tag) => grammar::parse_domain(tag)?,
        None => f.domain(),
    };
    let space = grammar::parse_space(&args.space, domain)?;
    println!("{}", space.norm(&f)?);
    Ok(())
}

pub fn run_rearrange(args: &RearrangeArgs) -> Result<()> {
    let f = read_step(&args.input)?;
    emit_text(args.out.as_ref(), &f.decreasing_rearrangement().to_text())
}

pub fn run_conv(args: &ConvArgs) -> Result<()> {
    let f = read_step(&args.f)?;
    let g = read_step(&args.g)?;
    let c = conv::convolve(&f, &g)?;
    for p_text in &args.norm {
        let p = grammar::parse_number(p_text)?;
        println!("{p_text} {}", c.norm_lp(p));
    }
    if args.out.is_some() || args.norm.is_empty() {
        emit_text(args.out.as_ref(), &c.to_step(args.refine)?.to_text())?;
    }
    Ok(())
}

pub fn run_kfun(args: &KfunArgs) -> Result<()> {
    let f = read_step(&args.input)?;
    let couple = grammar::parse_couple(&args.couple, f.domain())?;
    let ts: Vec<f64> = if args.t.is_empty() {
        vec![1.0]
    } else {
        args.t.iter().map(|s| grammar::parse_number(s)).collect::<Result<_>>()?
    };
    for t in ts {
        let value = if args.j { j_functional(&couple, t, &f)? } else { k_functional(&couple, t, &f)? };
        println!("{t} {value}");
    }
    Ok(())
}

pub fn run_list() {
    for info in &suites::CATALOGUE {
        println!("{:<18} {:<18} {}", info.id, info.anchor, info.summary);
    }
}

/// Writes the report pair, prints the summary, and returns true when the
/// verdict is Violated.
fn finish_run(
    mut run: SuiteRun,
    resolver: &Resolver,
    out: Option<&PathBuf>,
    csv: Option<&PathBuf>,
) -> Result<bool> {
    resolver.echo_into(&mut run);
    let dir = out_dir();
    fs::create_dir_all(&dir)?;
    let label = run.report.label.clone();
    let json_path = out.cloned().unwrap_or_else(|| dir.join(format!("{label}.json")));
    let csv_path = csv.cloned().unwrap_or_else(|| dir.join(format!("{label}.csv")));
    run.write_json(&json_path)?;
    run.write_csv(&csv_path)?;
    println!("{}", run.summary_line());
    println!("wrote {}", json_path.display());
    println!("wrote {}", csv_path.display());
    let violated = run.verdict() == ri_core::report::Verdict::Violated;
    if violated && run.report.argmax_first.is_some() {
        println!("witness pair embedded in the report (argmax inputs)");
    }
    Ok(violated)
}

fn bilinear_op(token: &str) -> Result<BilinearOpSpec> {
    match token {
        "conv-torus" => Ok(BilinearOpSpec::conv_torus_endpoints()),
        "product-sup" => Ok(BilinearOpSpec::product_sup()),
        other => Err(Error::config(1, 1, format!("unknown operator '{other}' (conv-torus, product-sup)"))),
    }
}

fn load_symbol(path: Option<&PathBuf>, degree: usize, seed: u64) -> Result<MultiplierSymbol> {
    match path {
        Some(p) => MultiplierSymbol::from_csv(&fs::read_to_string(p)?),
        None => Ok(suites::seeded_symbol(degree, seed)),
    }
}

fn multiplier_suite_run(
    suite: &str,
    m: &MultiplierSymbol,
    p: f64,
    degree: usize,
    pairs: usize,
    window: f64,
    step: f64,
    seed: u64,
) -> Result<SuiteRun> {
    let corpus = suites::seeded_poly_pairs(degree, pairs, seed);
    match suite {
        "blasco-endpoints" => suites::check_blasco_endpoints(m, p, &corpus, seed),
        "grand-chain" => suites::check_grand_chain(m, p, &corpus, window, step, seed),
        other => Err(Error::config(1, 1, format!("unknown multiplier suite '{other}'"))),
    }
}

pub fn run_multiplier(args: &MultiplierArgs) -> Result<bool> {
    let r = Resolver::new(args.config.as_ref())?;
    let suite = r.string(args.suite.as_ref(), "suite", "blasco-endpoints");
    let p = r.number(args.p.as_ref(), "p", 2.0)?;
    let degree = r.integer(args.degree.as_ref(), "N", 32)?;
    let pairs = r.integer(args.pairs.as_ref(), "pairs", 16)?;
    let seed = r.seed(args.seed.as_ref(), "seed", 7)?;
    let window = r.number(args.window.as_ref(), "T", 30.0)?;
    let step = r.number(args.h.as_ref(), "h", 0.05)?;
    let m = load_symbol(args.m.as_ref(), degree, seed)?;
    let run = multiplier_suite_run(&suite, &m, p, degree, pairs, window, step, seed)?;
    finish_run(run, &r, args.out.as_ref(), args.csv.as_ref())
}

pub fn run_verify(args: &VerifyArgs) -> Result<bool> {
    let r = Resolver::new(args.config.as_ref())?;
    let suite = r.required(args.suite.as_ref(), "suite")?;
    if suites::suite_info(&suite).is_none() {
        return Err(Error::config(1, 1, format!("unknown suite '{suite}' (see `ri list`)")));
    }
    let seed = r.seed(args.seed.as_ref(), "seed", 7)?;

    let domain_for = |default: Domain| -> Result<Domain> {
        match r.opt_string(args.domain.as_ref(), "domain") {
            Some(tag) => grammar::parse_domain(&tag),
            None => Ok(default),
        }
    };
    let corpus_for = |domain: Domain, default_pairs: usize| -> Result<Vec<(StepFunction, StepFunction)>> {
        let n = r.integer(args.pairs.as_ref(), "pairs", default_pairs)?;
        Ok(corpus::default_pair_corpus(domain, n, seed))
    };

    let run = match suite.as_str() {
        "conv-endpoints" => {
            let domain = domain_for(Domain::Torus)?;
            let space = r.parsed(args.space.as_ref(), "space", "lebesgue(2)", |s| {
                grammar::parse_space(s, domain)
            })?;
            let corpus = corpus_for(domain, 100)?;
            suites::verify_conv_endpoints(&space, &corpus, seed)?
        }
        "classical-young" => {
            let domain = domain_for(Domain::RealLine)?;
            let p = r.number(args.p.as_ref(), "p", 2.0)?;
            let q = r.number(args.q.as_ref(), "q", 2.0)?;
            let rr = r.number(args.r.as_ref(), "r", f64::INFINITY)?;
            let claimed = r.opt_number(args.claimed.as_ref(), "claimed")?;
            let corpus = corpus_for(domain, 500)?;
            suites::verify_classical_young(p, q, rr, &corpus, claimed, seed)?
        }
        "thm21" => {
            let domain = domain_for(Domain::Torus)?;
            let space = r.parsed(args.space.as_ref(), "space", "lebesgue(2)", |s| {
                grammar::parse_space(s, domain)
            })?;
            let params = match r.opt_string(args.params.as_ref(), "params") {
                Some(text) => grammar::parse_params(&text)?,
                None => {
                    let theta = r.number(args.theta.as_ref(), "theta", 0.5)?;
                    let b = r.parsed(args.b.as_ref(), "b", "1", grammar::parse_slowly_varying)?;
                    let outer =
                        r.parsed(args.e_space.as_ref(), "E", "lebesgue(2)", grammar::parse_outer)?;
                    let window = r.number(args.window.as_ref(), "T", 40.0)?;
                    let step = r.number(args.h.as_ref(), "h", 0.01)?;
                    ri_core::interp::InterpParams::new(theta, b, outer, window, step)?
                }
            };
            let corpus = corpus_for(domain, 50)?;
            suites::verify_thm21(&space, &params, &corpus, seed, r.flag(args.drift, "drift"))?
        }
        "cor22" => {
            let domain = domain_for(Domain::RealLine)?;
            let phi0 = r.parsed(args.phi0.as_ref(), "phi0", "t^2", grammar::parse_young)?;
            let theta = r.number(args.theta.as_ref(), "theta", 0.5)?;
            let corpus = corpus_for(domain, 100)?;
            suites::verify_orlicz_young(&phi0, theta, &corpus, seed)?
        }
        "cor23" => {
            let domain = domain_for(Domain::RealLine)?;
            let phi0 = r.parsed(args.phi0.as_ref(), "phi0", "t^2", grammar::parse_young)?;
            let rho = r.parsed(args.rho.as_ref(), "rho", "t^0.5", grammar::parse_param_function)?;
            let corpus = corpus_for(domain, 60)?;
            suites::verify_gustavsson_peetre(&phi0, &rho, &corpus, seed)?
        }
        "cor24" => {
            let theta = r.number(args.theta.as_ref(), "theta", 0.5)?;
            let window = r.number(args.window.as_ref(), "T", 30.0)?;
            let step = r.number(args.h.as_ref(), "h", 0.05)?;
            let corpus = corpus_for(Domain::Torus, 40)?;
            suites::verify_torus_zygmund(theta, &corpus, window, step, seed, r.flag(args.drift, "drift"))?
        }
        "cor27" => {
            let theta = r.number(args.theta.as_ref(), "theta", 0.5)?;
            let b = r.parsed(args.b.as_ref(), "b", "1", grammar::parse_slowly_varying)?;
            let q = r.number(args.q.as_ref(), "q", 2.0)?;
            let e_inner = r.parsed(args.e_space.as_ref(), "E", "lebesgue(2)", |s| {
                grammar::parse_space(s, Domain::HalfLine)
            })?;
            let f_outer = r.parsed(args.f_space.as_ref(), "F", "lebesgue(2)", |s| {
                grammar::parse_space(s, Domain::HalfLine)
            })?;
            let corpus = corpus_for(Domain::Torus, 40)?;
            suites::verify_karamata_young(theta, &b, q, &e_inner, &f_outer, &corpus, seed)?
        }
        "cor28" | "cor29" => {
            let edge = if suite == "cor28" { ThetaEdge::Zero } else { ThetaEdge::One };
            let b = r.parsed(args.b.as_ref(), "b", "1", grammar::parse_slowly_varying)?;
            let f_outer = r.parsed(args.f_space.as_ref(), "F", "lebesgue(inf)", |s| {
                grammar::parse_space(s, Domain::HalfLine)
            })?;
            let corpus = corpus_for(Domain::Torus, 40)?;
            suites::verify_theta_edge(edge, &b, &f_outer, &corpus, seed)?
        }
        "thm35" | "thm36" => {
            let op = bilinear_op(&r.string(args.op.as_ref(), "op", "conv-torus"))?;
            let theta = r.number(args.theta.as_ref(), "theta", 0.5)?;
            let phi: SlowlyVarying =
                r.parsed(args.phi.as_ref(), "phi", "1", grammar::parse_slowly_varying)?;
            let e_space = r.parsed(args.e_space.as_ref(), "E", "lebesgue(2)", |s| {
                grammar::parse_space(s, Domain::HalfLine)
            })?;
            let grid = BilinearGrid {
                window: r.number(args.window.as_ref(), "T", 40.0)?,
                step: r.number(args.h.as_ref(), "h", 0.05)?,
                n_terms: r.integer(args.terms.as_ref(), "terms", 4000)?,
                slack: r.number(args.slack.as_ref(), "slack", 0.10)?,
            };
            let corpus = corpus_for(op.domain(), 20)?;
            if suite == "thm35" {
                suites::verify_thm35(&op, theta, &phi, &e_space, &corpus, &grid, seed)?
            } else {
                suites::verify_thm36(&op, theta, &phi, &e_space, &corpus, &grid, seed)?
            }
        }
        "blasco-endpoints" | "grand-chain" => {
            let p = r.number(args.p.as_ref(), "p", 2.0)?;
            let degree = r.integer(args.degree.as_ref(), "N", 32)?;
            let pairs = r.integer(args.pairs.as_ref(), "pairs", 16)?;
            let window = r.number(args.window.as_ref(), "T", 30.0)?;
            let step = r.number(args.h.as_ref(), "h", 0.05)?;
            let m = load_symbol(args.m.as_ref(), degree, seed)?;
            multiplier_suite_run(&suite, &m, p, degree, pairs, window, step, seed)?
        }
        _ => unreachable!("catalogue check above"),
    };
    finish_run(run, &r, args.out.as_ref(), args.csv.as_ref())
}
