//! `amalgam`: batch front end for the core library. Every command writes a
//! JSON report (or, for `shelah build-r`, a relator dump).
//!
//! Exit codes: 0 when all checks pass, 1 when a check fails (the report
//! carries the counterexample), 2 on bad input or usage.

mod recheck;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::{json, Value};

use amalgam_core::amalgam::AmalgamContext;
use amalgam_core::fingroup::{SearchConfig, Separation};
use amalgam_core::shelah::{
    build_special_relators, verify_amalgamation, verify_amalgamation2, verify_cprime_lemma,
    verify_malnormal_preservation, CheckMode, Presentation, ShelahError, ShelahParams, VerificationReport,
};
use amalgam_core::smallcancel::{
    check_cprime, enumerate_pieces, fmt_ratio, hull_of_set, parse_ratio, CprimeVerdict, CprimeViolation, HullMode,
    PieceMode, Quotient, RelatorSet, Symmetrization,
};

use report::{input_err, Envelope, InputError, Inputs, Recheck, TOOL};

#[derive(Parser)]
#[command(name = "amalgam", version, about = "Exact computation in amalgamated free products of finite groups")]
struct Cli {
    /// Worker threads for the parallel checks (default: logical cores).
    #[arg(long, global = true, env = "AMALGAM_JOBS")]
    jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Re-verify any counterexample (and any Dehn trace) independently.
    #[arg(long, global = true)]
    recheck: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Finite group files.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Separated sequences.
    #[command(subcommand)]
    Fingroup(FingroupCmd),
    /// Normal forms in `L *_H G`.
    #[command(subcommand)]
    Amalgam(AmalgamCmd),
    /// Small cancellation over a relator file.
    #[command(subcommand)]
    Sc(ScCmd),
    /// The special relators and their verifiers.
    #[command(subcommand)]
    Shelah(ShelahCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Validate a group file.
    Check {
        #[arg(long)]
        group: PathBuf,
    },
    /// Exhaustive malnormality of a subgroup.
    Malnormal {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
    },
}

#[derive(Subcommand)]
enum FingroupCmd {
    /// Find an H±-separated (or, with --plain, H-separated) sequence.
    FindSeparated {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        plain: bool,
    },
}

#[derive(Args)]
struct AmalgamArg {
    /// Amalgam file.
    #[arg(long)]
    amalgam: PathBuf,
}

#[derive(Subcommand)]
enum AmalgamCmd {
    /// Normal form of a word such as "L:1 G:3".
    Nf {
        #[command(flatten)]
        a: AmalgamArg,
        word: String,
    },
    /// Product of two words.
    Mul {
        #[command(flatten)]
        a: AmalgamArg,
        left: String,
        right: String,
    },
    /// Length of a word.
    Len {
        #[command(flatten)]
        a: AmalgamArg,
        word: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        }
    }

    fn check(self) -> CheckMode {
        match self {
            Mode::Exhaustive => CheckMode::Exhaustive,
            Mode::Sampled => CheckMode::Sampled,
        }
    }
}

#[derive(Args)]
struct ScArgs {
    #[command(flatten)]
    a: AmalgamArg,
    /// Relator file, one JSON string literal per line.
    #[arg(long)]
    relators: PathBuf,
}

#[derive(Args)]
struct Sampling {
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, value_parser = parse_seed, default_value = "0x5EED")]
    seed: u64,
}

#[derive(Subcommand)]
enum ScCmd {
    /// Symmetrized hull of the relators.
    Hull {
        #[command(flatten)]
        s: ScArgs,
        /// Half-symmetrized hull (no inverses).
        #[arg(long)]
        half: bool,
        /// Also write the hull as a relator file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Longest pieces of the hull.
    Pieces {
        #[command(flatten)]
        s: ScArgs,
        #[command(flatten)]
        sampling: Sampling,
        /// Fail when a piece is longer than this.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Decide C'(λ) for the hull.
    Cprime {
        #[command(flatten)]
        s: ScArgs,
        #[arg(long, value_parser = parse_lambda)]
        lambda: Rational64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Dehn's algorithm on a word.
    Dehn {
        #[command(flatten)]
        s: ScArgs,
        #[arg(long, value_parser = parse_lambda)]
        lambda: Rational64,
        word: String,
    },
}

#[derive(Args)]
struct ShelahArgs {
    #[command(flatten)]
    a: AmalgamArg,
    /// Parameter file.
    #[arg(long)]
    params: PathBuf,
}

#[derive(Args)]
struct Budget {
    #[arg(long, value_enum, default_value = "sampled")]
    mode: Mode,
    /// Overrides the sample count of the parameter file.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_parser = parse_seed)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum ShelahCmd {
    /// Write the special relators as a relator file.
    BuildR {
        #[command(flatten)]
        s: ShelahArgs,
    },
    /// Hull decomposition, piece bound and C'(λ).
    VerifyCprime {
        #[command(flatten)]
        s: ShelahArgs,
    },
    /// Conclusions (1)-(6) for the quotient by the special relators.
    VerifyAmalgamation {
        #[command(flatten)]
        s: ShelahArgs,
        #[command(flatten)]
        b: Budget,
        /// Use only the family indexed by G∖H (no x-sequence relator).
        #[arg(long)]
        single: bool,
    },
    /// Malnormality of G modulo the relators (default: the special ones).
    VerifyMalnormal {
        #[command(flatten)]
        s: ShelahArgs,
        #[command(flatten)]
        b: Budget,
        #[arg(long)]
        relators: Option<PathBuf>,
        #[arg(long, value_parser = parse_lambda)]
        lambda: Option<Rational64>,
    },
}

fn parse_lambda(text: &str) -> Result<Rational64, String> {
    let r = parse_ratio(text).ok_or_else(|| format!("`{text}` is not an exact rational p/q"))?;
    if r <= Rational64::from_integer(0) || r >= Rational64::from_integer(1) {
        return Err(format!("λ must lie strictly between 0 and 1, got {}", fmt_ratio(r)));
    }
    Ok(r)
}

fn parse_seed(text: &str) -> Result<u64, String> {
    let parsed = match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => text.parse(),
    };
    parsed.map_err(|e| format!("bad seed `{text}`: {e}"))
}

enum Outcome {
    Report { command: &'static str, config: Value, passed: bool, result: Value, recheck: Option<Recheck> },
    Raw(String),
}

fn report(command: &'static str, config: Value, passed: bool, result: impl serde::Serialize) -> Outcome {
    Outcome::Report { command, config, passed, result: json!(result), recheck: None }
}

fn with_recheck(o: Outcome, r: Option<Result<(), String>>) -> Outcome {
    match (o, r) {
        (Outcome::Report { command, config, passed, result, .. }, Some(r)) => Outcome::Report {
            command,
            config,
            passed,
            result,
            recheck: Some(match r {
                Ok(()) => Recheck { confirmed: true, detail: "counterexample re-verified".into() },
                Err(e) => Recheck { confirmed: false, detail: e },
            }),
        },
        (o, _) => o,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(2);
        }
    }
    let mut inputs = Inputs::default();
    let outcome = run(&cli, &mut inputs);
    let written = outcome.and_then(|o| match o {
        Outcome::Raw(text) => report::emit(&text, cli.output.as_deref()).map(|_| true),
        Outcome::Report { command, config, passed, result, recheck } => {
            if let Some(r) = recheck.as_ref().filter(|r| !r.confirmed) {
                eprintln!("warning: recheck did not confirm the counterexample: {}", r.detail);
            }
            let env = Envelope {
                tool: TOOL,
                version: env!("CARGO_PKG_VERSION"),
                command: command.into(),
                inputs: inputs.digests.clone(),
                config,
                passed,
                result,
                recheck,
            };
            env.write(cli.output.as_deref()).map(|_| passed)
        }
    });
    match written {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            if e.downcast_ref::<InputError>().is_some() {
                eprintln!("input error: {e}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Result<Outcome> {
    let recheck = cli.recheck;
    match &cli.cmd {
        Cmd::Group(GroupCmd::Check { group }) => {
            let g = inputs.group(group)?;
            let result = json!({
                "name": g.name(),
                "order": g.order(),
                "identity": g.identity(),
                "exponent": g.exponent(),
            });
            Ok(report("group check", json!({}), true, result))
        }
        Cmd::Group(GroupCmd::Malnormal { group, subgroup }) => {
            let g = inputs.group(group)?;
            let emb = inputs.subgroup(subgroup, &g)?;
            let rep = emb.is_malnormal();
            let result = json!({
                "subgroup_order": emb.sub().order(),
                "malnormal": rep.verdict,
                "counterexample": rep.witness.map(|(x, h)| json!({ "x": x, "h": h })),
            });
            let out = report("group malnormal", json!({}), rep.verdict, result);
            Ok(with_recheck(out, rep.witness.filter(|_| recheck).map(|(x, h)| recheck::malnormal_witness(&emb, x, h))))
        }
        Cmd::Fingroup(FingroupCmd::FindSeparated { group, subgroup, n, plain }) => {
            let g = inputs.group(group)?;
            let emb = inputs.subgroup(subgroup, &g)?;
            let sep = if *plain { Separation::Plain } else { Separation::PlusMinus };
            let pool: Vec<usize> = g.elements().collect();
            let found = emb.find_separated(&pool, *n, sep, &SearchConfig::default());
            let reverified = match &found {
                Some(seq) => emb.check_sequence(seq, sep).map_err(|e| input_err(e.to_string()))?.verdict,
                None => false,
            };
            let config = json!({ "n": n, "separation": if *plain { "plain" } else { "plus_minus" } });
            let result = json!({ "sequence": found, "reverified": reverified });
            Ok(report("fingroup find-separated", config, found.is_some() && reverified, result))
        }
        Cmd::Amalgam(cmd) => amalgam_cmd(cmd, inputs),
        Cmd::Sc(cmd) => sc_cmd(cmd, inputs, recheck),
        Cmd::Shelah(cmd) => shelah_cmd(cmd, inputs, recheck),
    }
}

fn parse_word(ctx: &AmalgamContext, text: &str, arg: &str) -> Result<amalgam_core::amalgam::AmalgamWord> {
    ctx.parse_word(text).map_err(|e| input_err(format!("argument `{arg}`: {e}")))
}

fn describe(ctx: &AmalgamContext, w: &amalgam_core::amalgam::AmalgamWord) -> Value {
    json!({
        "normal_form": w,
        "pretty": ctx.pretty(w),
        "length": w.len(),
        "reduction_status": ctx.reduction_status(w),
    })
}

fn amalgam_cmd(cmd: &AmalgamCmd, inputs: &mut Inputs) -> Result<Outcome> {
    match cmd {
        AmalgamCmd::Nf { a, word } => {
            let ctx = inputs.amalgam(&a.amalgam)?;
            let w = parse_word(&ctx, word, "word")?;
            Ok(report("amalgam nf", json!({ "word": word }), true, describe(&ctx, &w)))
        }
        AmalgamCmd::Mul { a, left, right } => {
            let ctx = inputs.amalgam(&a.amalgam)?;
            let (x, y) = (parse_word(&ctx, left, "left")?, parse_word(&ctx, right, "right")?);
            let p = ctx.mul(&x, &y);
            Ok(report("amalgam mul", json!({ "left": left, "right": right }), true, describe(&ctx, &p)))
        }
        AmalgamCmd::Len { a, word } => {
            let ctx = inputs.amalgam(&a.amalgam)?;
            let w = parse_word(&ctx, word, "word")?;
            Ok(report("amalgam len", json!({ "word": word }), true, json!({ "length": w.len() })))
        }
    }
}

/// The relator file and its hull.
fn load_hull(inputs: &mut Inputs, s: &ScArgs, mode: HullMode) -> Result<(AmalgamContext, usize, RelatorSet)> {
    let ctx = inputs.amalgam(&s.a.amalgam)?;
    let text = inputs.read("relators", &s.relators)?;
    let seeds = RelatorSet::from_json_lines(&ctx, &text, Symmetrization::Raw)
        .map_err(|e| input_err(format!("{}: {e}", s.relators.display())))?;
    let hull =
        hull_of_set(&ctx, seeds.relators(), mode).map_err(|e| input_err(format!("{}: {e}", s.relators.display())))?;
    Ok((ctx, seeds.len(), hull))
}

fn sampling_config(s: &Sampling) -> Value {
    match s.mode {
        Mode::Exhaustive => json!({ "mode": "exhaustive" }),
        Mode::Sampled => json!({ "mode": "sampled", "samples": s.samples, "seed": s.seed }),
    }
}

fn piece_mode(s: &Sampling) -> PieceMode {
    match s.mode {
        Mode::Exhaustive => PieceMode::Exhaustive,
        Mode::Sampled => PieceMode::Sampled { samples: s.samples, seed: s.seed },
    }
}

fn sc_cmd(cmd: &ScCmd, inputs: &mut Inputs, recheck: bool) -> Result<Outcome> {
    match cmd {
        ScCmd::Hull { s, half, dump } => {
            let mode = if *half { HullMode::Half } else { HullMode::Full };
            let (_, seeds, hull) = load_hull(inputs, s, mode)?;
            if let Some(p) = dump {
                report::emit(&hull.to_json_lines(), Some(p))?;
            }
            let lens: Vec<usize> = hull.relators().iter().map(|r| r.len()).collect();
            let result = json!({
                "seeds": seeds,
                "size": hull.len(),
                "status": hull.status(),
                "min_length": lens.iter().min(),
                "max_length": lens.iter().max(),
            });
            Ok(report("sc hull", json!({ "half": half }), true, result))
        }
        ScCmd::Pieces { s, sampling, bound } => {
            let (ctx, _, hull) = load_hull(inputs, s, HullMode::Full)?;
            let rep = enumerate_pieces(&ctx, &hull, piece_mode(sampling));
            let mut config = sampling_config(sampling);
            config["bound"] = json!(bound);
            let passed = bound.is_none_or(|b| rep.max_piece_length <= b);
            let check = match (bound, &rep.witness) {
                (Some(b), Some(w)) if recheck && !passed => Some(recheck::piece_witness(&ctx, &hull, w, *b)),
                _ => None,
            };
            Ok(with_recheck(report("sc pieces", config, passed, &rep), check))
        }
        ScCmd::Cprime { s, lambda, sampling } => {
            let (ctx, _, hull) = load_hull(inputs, s, HullMode::Full)?;
            let mut config = sampling_config(sampling);
            config["lambda"] = json!(fmt_ratio(*lambda));
            let v = match sampling.mode {
                Mode::Exhaustive => check_cprime(&ctx, &hull, *lambda).map_err(|e| input_err(e.to_string()))?,
                Mode::Sampled => sampled_cprime(&ctx, &hull, *lambda, sampling),
            };
            let check =
                v.violation.as_ref().filter(|_| recheck).map(|x| recheck::cprime_violation(&ctx, &hull, *lambda, x));
            Ok(with_recheck(report("sc cprime", config, v.holds, &v), check))
        }
        ScCmd::Dehn { s, lambda, word } => {
            let (ctx, _, mut hull) = load_hull(inputs, s, HullMode::Full)?;
            let v = hull.certify(&ctx, *lambda).map_err(|e| input_err(e.to_string()))?;
            if !v.holds {
                return Err(input_err(format!(
                    "{}: relators are not C'({})",
                    s.relators.display(),
                    fmt_ratio(*lambda)
                )));
            }
            let q = Quotient::new(&ctx, &hull, *lambda).map_err(|e| input_err(e.to_string()))?;
            let w = parse_word(&ctx, word, "word")?;
            let t = q.dehn(&w);
            let result = json!({ "member": t.member, "trace": t, "stats": q.stats() });
            let out = report("sc dehn", json!({ "lambda": fmt_ratio(*lambda), "word": word }), true, result);
            Ok(with_recheck(out, recheck.then(|| t.verify(&ctx, &hull, *lambda))))
        }
    }
}

/// `C'(λ)` judged on sampled pairs: the length clause exactly, the piece
/// clause on the longest sampled piece.
fn sampled_cprime(ctx: &AmalgamContext, hull: &RelatorSet, lambda: Rational64, s: &Sampling) -> CprimeVerdict {
    let rep = enumerate_pieces(ctx, hull, piece_mode(s));
    let (num, den) = (*lambda.numer(), *lambda.denom());
    let min_length = hull.min_length();
    let mut violation = None;
    if let Some(m) = min_length.filter(|&m| den >= num * m as i64) {
        let r = hull.relators().iter().find(|r| r.len() == m).expect("min exists");
        violation = Some(CprimeViolation::TooShort { relator: r.clone(), length: m });
    } else if let Some(w) = rep.witness.as_ref() {
        let k = w.piece.len();
        if k as i64 * den >= num * w.relator.len() as i64 {
            violation = Some(CprimeViolation::LongPiece {
                relator: w.relator.clone(),
                other: w.other.clone(),
                piece: w.piece.clone(),
                length: k,
                relator_length: w.relator.len(),
            });
        }
    }
    CprimeVerdict {
        lambda,
        holds: violation.is_none(),
        relators: hull.len(),
        min_length,
        max_piece_length: rep.max_piece_length,
        violation,
    }
}

fn budget_params(mut p: ShelahParams, b: &Budget) -> ShelahParams {
    if let Some(n) = b.samples {
        p.budgets.samples = n;
    }
    if let Some(s) = b.seed {
        p.budgets.seed = s;
    }
    p
}

/// Runs a verifier: a failed lemma hypothesis becomes a failing report,
/// any other error is an input error.
fn verifier(
    command: &'static str,
    config: Value,
    res: Result<VerificationReport, ShelahError>,
    recheck: impl FnOnce(&VerificationReport) -> Option<Result<(), String>>,
) -> Result<Outcome> {
    match res {
        Ok(rep) => {
            let check = recheck(&rep);
            Ok(with_recheck(report(command, config, rep.passed(), &rep), check))
        }
        Err(ShelahError::HypothesisFailed { hypothesis, witness }) => {
            let result = json!({ "hypothesis_failed": { "hypothesis": hypothesis, "witness": witness } });
            Ok(report(command, config, false, result))
        }
        Err(e) => Err(input_err(e.to_string())),
    }
}

fn recheck_conclusions(q: &Quotient, a_seq: &[usize], rep: &VerificationReport) -> Option<Result<(), String>> {
    let failed: Vec<_> = rep.conclusions.iter().filter(|c| !c.passed).collect();
    if failed.is_empty() {
        return None;
    }
    Some(
        failed
            .iter()
            .try_for_each(|c| recheck::conclusion(q, a_seq, c).map_err(|e| format!("conclusion {}: {e}", c.id))),
    )
}

fn shelah_config(p: &ShelahParams, mode: Option<Mode>) -> Value {
    json!({
        "lambda": fmt_ratio(p.lambda),
        "n": p.n,
        "mode": mode.map(Mode::name),
        "budgets": p.budgets,
    })
}

fn shelah_cmd(cmd: &ShelahCmd, inputs: &mut Inputs, recheck: bool) -> Result<Outcome> {
    let load = |inputs: &mut Inputs, s: &ShelahArgs| -> Result<(AmalgamContext, ShelahParams)> {
        Ok((inputs.amalgam(&s.a.amalgam)?, inputs.params(&s.params)?))
    };
    match cmd {
        ShelahCmd::BuildR { s } => {
            let (ctx, p) = load(inputs, s)?;
            let rels =
                build_special_relators(&ctx, &p).map_err(|e| input_err(format!("{}: {e}", s.params.display())))?;
            Ok(Outcome::Raw(RelatorSet::new(&ctx, rels, Symmetrization::Raw).to_json_lines()))
        }
        ShelahCmd::VerifyCprime { s } => {
            let (ctx, p) = load(inputs, s)?;
            let config = shelah_config(&p, None);
            verifier("shelah verify-cprime", config, verify_cprime_lemma(&ctx, &p), |rep| {
                if !recheck || rep.passed() {
                    return None;
                }
                Some(recheck::cprime_lemma(&ctx, &p, rep))
            })
        }
        ShelahCmd::VerifyAmalgamation { s, b, single } => {
            let (ctx, p) = load(inputs, s)?;
            let p = budget_params(p, b);
            let mut config = shelah_config(&p, Some(b.mode));
            config["single"] = json!(single);
            let res = if *single {
                verify_amalgamation2(&ctx, &p.a_seq, p.lambda, &p.budgets, b.mode.check())
            } else {
                verify_amalgamation(&ctx, &p, b.mode.check())
            };
            let (pres, rep): (Option<Presentation>, _) = match res {
                Ok((pres, rep)) => (Some(pres), Ok(rep)),
                Err(e) => (None, Err(e)),
            };
            verifier("shelah verify-amalgamation", config, rep, |rep| {
                let pres = pres.as_ref().filter(|_| recheck)?;
                recheck_conclusions(&pres.quotient(&ctx), &p.a_seq, rep)
            })
        }
        ShelahCmd::VerifyMalnormal { s, b, relators, lambda } => {
            let (ctx, mut p) = load(inputs, s)?;
            if let Some(l) = lambda {
                p.lambda = *l;
            }
            let p = budget_params(p, b);
            let rels = match relators {
                Some(path) => {
                    let text = inputs.read("relators", path)?;
                    RelatorSet::from_json_lines(&ctx, &text, Symmetrization::Raw)
                        .map_err(|e| input_err(format!("{}: {e}", path.display())))?
                        .relators()
                        .to_vec()
                }
                None => {
                    build_special_relators(&ctx, &p).map_err(|e| input_err(format!("{}: {e}", s.params.display())))?
                }
            };
            let config = json!({ "lambda": fmt_ratio(p.lambda), "budgets": p.budgets });
            let res = verify_malnormal_preservation(&ctx, &rels, p.lambda, &p.budgets);
            verifier("shelah verify-malnormal", config, res, |rep| {
                if !recheck || rep.passed() {
                    return None;
                }
                let hull = match amalgam_core::shelah::certified_hull(&ctx, &rels, p.lambda) {
                    Ok(h) => h,
                    Err(e) => return Some(Err(e.to_string())),
                };
                let q = Quotient::new(&ctx, &hull, p.lambda).ok()?;
                recheck_conclusions(&q, &p.a_seq, rep)
            })
        }
    }
}
