//! `overconv`: batch front end. Every command prints one JSON object holding
//! its result fields and a `manifest` with the inputs needed to rerun it.
//!
//! Exit codes: 0 success, 1 malformed input or failed precondition, 2
//! precision exhausted.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use overconv::coeff_series::{EisensteinPrime, Laurent, RingConfig};
use overconv::components::{lift_idempotent, sample_elements, FamilySpec};
use overconv::grammar::{parse_laurent, parse_tate, render_laurent, render_tate};
use overconv::groebner::{divide, BasisSpec};
use overconv::newton::{newton_polygon, slope_factor};
use overconv::norms::{break_convergence_experiment, check_sdr, TowerRule, TowerSpec};
use overconv::ramify::{as_family_monogenic, compare_charp_fiber, fixture_set, AnyExtension, ExtSpec};
use overconv::rational::{fmt_q, parse_q};
use overconv::{Error, Result, Q};

#[derive(Parser)]
#[command(name = "overconv", version, about = "Valuations, division and ramification breaks over overconvergent rings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Ring configuration as JSON, e.g. {"p":3,"Np":64,"Ns":256} (file or inline).
    #[arg(long, global = true)]
    config: Option<String>,
    /// Target precision for iterative algorithms.
    #[arg(long, global = true)]
    prec: Option<i64>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polygon of a Laurent element on the window r.
    Newton {
        #[arg(long = "r")]
        r: String,
        #[arg(long)]
        elem: String,
    },
    /// Factor into pure factors of slopes in (0, r] and a unit.
    SlopeFactor {
        #[arg(long = "r")]
        r: String,
        #[arg(long)]
        elem: String,
    },
    /// Divide an element by a certified basis.
    Divide {
        #[arg(long)]
        gb: String,
        #[arg(long)]
        elem: String,
    },
    /// Check the concrete criterion on a basis.
    GroebnerCertify {
        #[arg(long)]
        gb: String,
    },
    /// Lift an idempotent of the fiber at a prime to the annulus ring.
    LiftIdempotent {
        #[arg(long)]
        family: String,
        /// Eisenstein polynomial in S, or `p` for the prime (p).
        #[arg(long)]
        prime: String,
        #[arg(long = "e")]
        e: String,
        #[arg(long = "c", default_value_t = 0)]
        c: u32,
        #[arg(long = "r")]
        r: String,
    },
    /// Ramification breaks from root clusters.
    Break {
        #[arg(long)]
        ext: String,
        /// Also run the Herbrand oracle and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Lower and upper numbering from explicit Galois data.
    Herbrand {
        #[arg(long)]
        ext: String,
    },
    /// The flat family of Abbes-Saito spaces of a char-p extension.
    AsFamily {
        #[arg(long)]
        ext: String,
        #[arg(long = "a")]
        a: String,
        /// Use the log exponents.
        #[arg(long)]
        log: bool,
    },
    /// Breaks of L_n/K_n along a tower, against the norm field.
    NormsExperiment {
        #[arg(long)]
        tower: String,
        #[arg(long)]
        ext: String,
        /// `a..b` (inclusive) or a comma-separated list.
        #[arg(long, default_value = "2..4")]
        levels: String,
    },
    /// Run the built-in invariant suites.
    Selftest,
}

/// File contents when `arg` names a file, `arg` itself otherwise.
fn load(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn load_json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let text = load(arg)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { pos: e.column(), msg: format!("{what}: {e}") })
}

fn ring_config(global: &Global) -> Result<RingConfig> {
    match &global.config {
        Some(c) => {
            let cfg: RingConfig = load_json(c, "config")?;
            cfg.validate()?;
            Ok(cfg)
        }
        None => RingConfig::new(3, 64, 256),
    }
}

fn parse_levels(s: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse { pos: 0, msg: format!("bad level list {s:?}") };
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
    }
}

fn laurent_input(text: &str, cfg: &RingConfig) -> Result<Laurent> {
    let f = parse_laurent(text.trim(), cfg.p)?;
    cfg.check_window(&f)?;
    Ok(f)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// Result fields plus the achieved precision, as a string.
struct Outcome {
    result: Value,
    achieved: String,
}

fn outcome(result: Value, achieved: impl ToString) -> Outcome {
    Outcome { result, achieved: achieved.to_string() }
}

fn run(cli: &Cli, inputs: &mut BTreeMap<&'static str, String>) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Newton { r, elem } => {
            let cfg = ring_config(g)?;
            let text = load(elem)?;
            inputs.insert("elem", text.clone());
            let np = newton_polygon(&laurent_input(&text, &cfg)?, cfg.p, &parse_q(r)?)?;
            Ok(outcome(to_value(&np), "exact"))
        }
        Command::SlopeFactor { r, elem } => {
            let cfg = ring_config(g)?;
            let text = load(elem)?;
            inputs.insert("elem", text.clone());
            let target = g.prec.unwrap_or(cfg.np);
            let sf = slope_factor(&laurent_input(&text, &cfg)?, cfg.p, &parse_q(r)?, target)?;
            let factors: Vec<Value> = sf
                .factors
                .iter()
                .map(|(f, s)| json!({ "factor": render_laurent(f), "slope": fmt_q(s) }))
                .collect();
            Ok(outcome(json!({ "factors": factors, "unit": render_laurent(&sf.unit) }), sf.precision))
        }
        Command::Divide { gb, elem } => {
            let spec: BasisSpec = load_json(gb, "basis")?;
            let basis = spec.build()?;
            let t = &basis.ring;
            let text = load(elem)?;
            inputs.insert("gb", serde_json::to_string(&spec).expect("basis serializes"));
            inputs.insert("elem", text.clone());
            let f = t.parse(text.trim(), spec.config.p)?;
            let se = divide(&f, &basis, g.prec)?;
            let val = |x| t.extended_valuation(x);
            Ok(outcome(
                json!({
                    "remainder": t.render(&se.remainder),
                    "quotients": se.quotients.iter().map(|q| t.render(q)).collect::<Vec<_>>(),
                    "residual": t.render(&se.residual),
                    "valuations": {
                        "remainder": val(&se.remainder),
                        "quotients": se.quotients.iter().map(val).collect::<Vec<_>>(),
                    },
                    "dominance": se.dominance.iter().all(|d| d.holds),
                    "remainder_irreducible": se.remainder_irreducible(&basis),
                }),
                g.prec.map_or("exact".to_string(), |p| p.to_string()),
            ))
        }
        Command::GroebnerCertify { gb } => {
            let spec: BasisSpec = load_json(gb, "basis")?;
            inputs.insert("gb", serde_json::to_string(&spec).expect("basis serializes"));
            let basis = spec.build()?;
            let lts: Vec<String> = basis.lt_table.iter().map(|lt| basis.ring.render_lt(lt)).collect();
            Ok(outcome(json!({ "certified": basis.certified, "leading_terms": lts, "order": spec.order }), "exact"))
        }
        Command::LiftIdempotent { family, prime, e, c, r } => {
            let spec: FamilySpec = load_json(family, "family")?;
            inputs.insert("family", serde_json::to_string(&spec).expect("family serializes"));
            let fam = spec.build()?;
            let p = fam.p();
            let prime_text = load(prime)?;
            inputs.insert("prime", prime_text.clone());
            let prime = match prime_text.trim() {
                "p" | "(p)" => EisensteinPrime::char_p(p),
                s => EisensteinPrime::from_laurent(p, &parse_laurent(s, p)?)?,
            };
            let e_text = load(e)?;
            inputs.insert("e", e_text.clone());
            let lt = fam.laurent_tate();
            let e = lt.from_map(parse_tate(e_text.trim(), p, &lt.ctx)?);
            let target = Q::from_integer(g.prec.unwrap_or(40).into());
            let rep = lift_idempotent(&fam, &prime, &e, *c, &parse_q(r)?, &target)?;
            Ok(outcome(
                json!({
                    "f": render_tate(&lt.ctx, rep.f.terms.iter()),
                    "iterations": rep.iterations,
                    "steps": to_value(&rep.steps),
                    "precision": fmt_q(&rep.precision),
                    "cutoff": fmt_q(&rep.cutoff),
                    "contraction_holds": rep.contraction_holds(),
                    "fiber_defect": rep.fiber_defect,
                    "congruence": rep.congruence,
                }),
                fmt_q(&rep.precision),
            ))
        }
        Command::Break { ext, oracle } => {
            let spec: ExtSpec = load_json(ext, "extension")?;
            inputs.insert("ext", serde_json::to_string(&spec).expect("extension serializes"));
            let x = spec.build()?;
            let (rd, br) = x.breaks()?;
            let mut out = to_value(&br);
            out["distances"] = to_value(&rd)["distances"].clone();
            out["different"] = to_value(&rd)["different"].clone();
            if *oracle {
                let hb = x.herbrand()?;
                out["agree"] = json!(hb.b == br.b && hb.b_log == br.b_log);
                out["oracle"] = to_value(&hb);
            }
            Ok(outcome(out, "exact"))
        }
        Command::Herbrand { ext } => {
            let spec: ExtSpec = load_json(ext, "extension")?;
            inputs.insert("ext", serde_json::to_string(&spec).expect("extension serializes"));
            Ok(outcome(to_value(&spec.build()?.herbrand()?), "exact"))
        }
        Command::AsFamily { ext, a, log } => {
            let spec: ExtSpec = load_json(ext, "extension")?;
            inputs.insert("ext", serde_json::to_string(&spec).expect("extension serializes"));
            let AnyExtension::Equal(x) = spec.build()? else {
                return Err(Error::domain("the family needs an extension of F_p((S))"));
            };
            let cfg = match &g.config {
                Some(_) => ring_config(g)?,
                None => RingConfig::new(spec.p(), 20, 40)?,
            };
            let asf = as_family_monogenic(&x.ext, &parse_q(a)?, *log, &cfg)?;
            let fiber = compare_charp_fiber(&asf, &x.ext)?;
            Ok(outcome(
                json!({
                    "basis": to_value(&asf.spec()),
                    "alpha": asf.alpha,
                    "beta": asf.beta,
                    "e": asf.e,
                    "fiber_p": to_value(&fiber),
                }),
                "exact",
            ))
        }
        Command::NormsExperiment { tower, ext, levels } => {
            let tw: TowerSpec = load_json(tower, "tower")?;
            let ext_text = load(ext)?;
            let minpoly = match serde_json::from_str::<ExtSpec>(&ext_text) {
                Ok(ExtSpec::Mixed { minpoly, base: None, .. }) => minpoly,
                Ok(_) => return Err(Error::domain("the extension must be given over Q_p")),
                Err(_) if ext_text.trim_start().starts_with('{') => {
                    return Err(Error::Parse { pos: 0, msg: "extension: not an extension file".into() })
                }
                Err(_) => ext_text.trim().to_string(),
            };
            inputs.insert("tower", serde_json::to_string(&tw).expect("tower serializes"));
            inputs.insert("minpoly", minpoly.clone());
            inputs.insert("levels", levels.clone());
            let table = break_convergence_experiment(&tw, &minpoly, &parse_levels(levels)?)?;
            Ok(outcome(to_value(&table), "exact"))
        }
        Command::Selftest => selftest(g.seed),
    }
}

#[derive(Serialize)]
struct Suite {
    name: &'static str,
    passed: usize,
    total: usize,
}

fn suite(name: &'static str, results: impl IntoIterator<Item = bool>) -> Suite {
    let (mut passed, mut total) = (0, 0);
    for ok in results {
        total += 1;
        passed += ok as usize;
    }
    Suite { name, passed, total }
}

fn selftest(seed: u64) -> Result<Outcome> {
    let mut suites = Vec::new();

    let corpus = ["p^2*S^-3 + 3 + S^5", "S^0", "1/3*S - 2/9", "-p^3*5*S^2", "0"];
    suites.push(suite(
        "grammar round trip",
        corpus.iter().map(|s| {
            parse_laurent(s, 3).is_ok_and(|f| parse_laurent(&render_laurent(&f), 3).is_ok_and(|g| g == f))
        }),
    ));

    let polys: Vec<Laurent> = ["3 + S + S^2", "9*S^-1 + 3 + S^3", "1/3*S^-2 + 27", "S - 3", "p^4 + p*S^2 + S^5"]
        .iter()
        .map(|s| parse_laurent(s, 3))
        .collect::<Result<_>>()?;
    let r = Q::from_integer(4.into());
    let mut mult = Vec::new();
    for f in &polys {
        for g in &polys {
            let (nf, ng, nfg) = (newton_polygon(f, 3, &r)?, newton_polygon(g, 3, &r)?, newton_polygon(&(f * g), 3, &r)?);
            mult.push(nfg.segments.iter().all(|s| nfg.mult(&s.slope) == nf.mult(&s.slope) + ng.mult(&s.slope)));
        }
    }
    suites.push(suite("newton multiplicativity", mult));

    let basis = BasisSpec {
        config: RingConfig::new(3, 20, 20)?,
        order: "lex:X>Y".into(),
        generators: vec!["X^2 - S*Y - 1".into(), "Y^3 - p*X".into()],
    };
    let fam = FamilySpec { label: "selftest".into(), basis }.build()?;
    let gb = &fam.gb;
    let t = &gb.ring;
    let mut division = Vec::new();
    for f in sample_elements(&fam, 20, seed) {
        let f = t.from_laurent_map(&f.terms)?;
        let se = divide(&f, gb, None)?;
        let shifted = t.add(&f, &t.add(&t.mul(&t.var(1), &gb.generators[0]), &gb.generators[1]));
        division.push(
            se.reconstruct(gb) == f
                && se.remainder_irreducible(gb)
                && se.dominance.iter().all(|d| d.holds)
                && divide(&shifted, gb, None)?.remainder == se.remainder,
        );
    }
    suites.push(suite("division contract", division));

    let mut fixtures = Vec::new();
    for (_, spec) in fixture_set() {
        let x = spec.build()?;
        let (_, br) = x.breaks()?;
        let hb = x.herbrand()?;
        fixtures.push(br.b == hb.b && br.b_log == hb.b_log && hb.integral);
    }
    suites.push(suite("ramification oracle", fixtures));

    let cyc = TowerSpec { p: 3, rule: TowerRule::Cyclotomic, xi: "zeta_p - 1".into(), n0: 1 };
    suites.push(suite("deeply ramified tower", [check_sdr(&cyc, 3)?.verdict]));

    let passed: usize = suites.iter().map(|s| s.passed).sum();
    let total: usize = suites.iter().map(|s| s.total).sum();
    if passed != total {
        return Err(Error::Convergence(format!("selftest: {passed}/{total} checks passed")));
    }
    Ok(outcome(json!({ "suites": to_value(&suites), "passed": passed, "total": total }), "exact"))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Newton { .. } => "newton",
        Command::SlopeFactor { .. } => "slope-factor",
        Command::Divide { .. } => "divide",
        Command::GroebnerCertify { .. } => "groebner-certify",
        Command::LiftIdempotent { .. } => "lift-idempotent",
        Command::Break { .. } => "break",
        Command::Herbrand { .. } => "herbrand",
        Command::AsFamily { .. } => "as-family",
        Command::NormsExperiment { .. } => "norms-experiment",
        Command::Selftest => "selftest",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut inputs = BTreeMap::new();
    let out = match run(&cli, &mut inputs) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("overconv {}: {e}", command_name(&cli.command));
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let config = cli.global.config.as_deref().map(|c| load_json::<Value>(c, "config")).transpose();
    let manifest = json!({
        "command": command_name(&cli.command),
        "version": env!("CARGO_PKG_VERSION"),
        "config": config.unwrap_or(None),
        "prec": cli.global.prec,
        "seed": cli.global.seed,
        "inputs": inputs,
        "achieved_precision": out.achieved,
    });
    let mut result = out.result;
    result["manifest"] = manifest;
    let text = serde_json::to_string_pretty(&result).expect("JSON values serialize") + "\n";
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("overconv: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
