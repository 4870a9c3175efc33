//! Command-line front end for the `cmeta` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::atkin::multiple_root_condition;
use crate::classpoly::{compute_class_polynomial_with, PrecisionPolicy};
use crate::cm::{construct_cm_curve, CmOptions};
use crate::error::{Error, Result};
use crate::ffield::{roots_mod_l, roots_with_multiplicity, FpElement, FpPolynomial};
use crate::modpoly::{
    compute_modular_polynomial_with, discriminant_in_j, embedded, evaluate_in_j_mod_l, zpoly_divides,
};
use crate::qforms::{b_candidates, build_nsystem, Discriminant};

/// Exit code for malformed command lines.
pub const EXIT_USAGE: i32 = 64;

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub precision_start: u32,
    pub precision_max: u32,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub verbosity: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_start: 256,
            precision_max: 65536,
            seed: 0,
            output_path: None,
            verbosity: 0,
        }
    }
}

impl RunConfig {
    pub fn policy(&self) -> PrecisionPolicy {
        PrecisionPolicy {
            start: self.precision_start,
            max: self.precision_max,
            ..PrecisionPolicy::default()
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cmeta", version, about = "CM curves from double eta-quotient class polynomials")]
struct Cli {
    /// Starting precision in bits
    #[arg(long, global = true, env = "CMETA_PRECISION", default_value_t = 256)]
    precision: u32,
    /// Precision ceiling in bits
    #[arg(long, global = true, default_value_t = 65536)]
    max_precision: u32,
    /// Seed for randomized root finding and point sampling
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output to FILE instead of standard output
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Level {
    #[arg(long, allow_hyphen_values = true)]
    disc: i64,
    #[arg(long)]
    p1: i64,
    #[arg(long)]
    p2: i64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class polynomial H_{B,N} as coefficients, highest degree first
    Classpoly {
        #[command(flatten)]
        level: Level,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i64>,
        /// One line per B up to sign, prefixed with B=<b>
        #[arg(long, conflicts_with = "b")]
        all_b: bool,
    },
    /// Modular polynomial in the MODPOLY v1 text format
    Modpoly {
        #[arg(long, required_unless_present = "verify_embedded")]
        p1: Option<i64>,
        #[arg(long, required_unless_present = "verify_embedded")]
        p2: Option<i64>,
        /// Recompute Phi_{3,13} and compare with the shipped copy
        #[arg(long)]
        verify_embedded: bool,
    },
    /// N-system forms as `A B C` lines
    Nsystem {
        #[command(flatten)]
        level: Level,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Multiple-root test per candidate B
    Multiplicity {
        #[command(flatten)]
        level: Level,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i64>,
    },
    /// CM curve over F_q: `q a4 a6 order trace shortcut=yes|no`
    CmCurve {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        prime: u64,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i64>,
    },
    /// Roots mod a prime as `value multiplicity` lines
    Roots {
        #[arg(long)]
        prime: u64,
        /// Coefficients, highest degree first
        #[arg(long, allow_hyphen_values = true, num_args = 1.., value_delimiter = ' ', conflicts_with = "disc")]
        coeffs: Option<Vec<i64>>,
        /// Take H_{B,N} for this discriminant instead of --coeffs
        #[arg(long, allow_hyphen_values = true, requires_all = ["p1", "p2"])]
        disc: Option<i64>,
        #[arg(long)]
        p1: Option<i64>,
        #[arg(long)]
        p2: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i64>,
    },
    /// Rerun the D = -56, N = 39, l = 3593 example and print PASS/FAIL per check
    ReproduceExample,
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let cfg = RunConfig {
        precision_start: cli.precision,
        precision_max: cli.max_precision,
        seed: cli.seed,
        output_path: cli.out.clone(),
        verbosity: cli.verbose,
    };
    if cfg.precision_start > cfg.precision_max || cfg.precision_start < 64 {
        let _ = writeln!(
            err,
            "error: need 64 <= --precision <= --max-precision, got {} and {}",
            cfg.precision_start, cfg.precision_max
        );
        return EXIT_USAGE;
    }
    let mut buf: Vec<u8> = Vec::new();
    let status = run(&cli.command, &cfg, &mut buf, err);
    let code = match status {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cfg.output_path {
        Some(path) => std::fs::write(path, &buf).map_err(Error::from),
        None => out.write_all(&buf).map_err(Error::from),
    };
    match written {
        Ok(()) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn first_candidate(d: i64, n: i64) -> Result<i64> {
    b_candidates(&Discriminant::new(d)?, n)?
        .first()
        .copied()
        .ok_or(Error::NoSolution { d, p: n })
}

fn run(cmd: &Command, cfg: &RunConfig, out: &mut Vec<u8>, err: &mut dyn Write) -> Result<i32> {
    let policy = cfg.policy();
    match cmd {
        Command::Classpoly { level, b, all_b } => {
            let Level { disc, p1, p2 } = *level;
            let n = p1 * p2;
            if *all_b {
                // validate before enumerating candidates
                compute_class_polynomial_with(disc, p1, p2, first_candidate(disc, n)?, &policy)?;
                for b in b_candidates(&Discriminant::new(disc)?, n)? {
                    if b <= 2 * n - b {
                        let h = compute_class_polynomial_with(disc, p1, p2, b, &policy)?;
                        writeln!(out, "B={b} {}", h.to_line())?;
                    }
                }
            } else {
                let b = match b {
                    Some(b) => *b,
                    None => {
                        crate::classpoly::check_integrality_conditions(disc, p1, p2)
                            .then_some(())
                            .ok_or_else(|| {
                                Error::ConditionsViolated(format!("D = {disc}, p1 = {p1}, p2 = {p2}"))
                            })?;
                        first_candidate(disc, n)?
                    }
                };
                let h = compute_class_polynomial_with(disc, p1, p2, b, &policy)?;
                if cfg.verbosity > 0 {
                    writeln!(err, "B = {}, H = {h}", h.b)?;
                }
                writeln!(out, "{}", h.to_line())?;
            }
            Ok(0)
        }
        Command::Modpoly {
            p1,
            p2,
            verify_embedded,
        } => {
            if *verify_embedded {
                let fresh = compute_modular_polynomial_with(3, 13, &policy)?;
                let shipped = embedded(3, 13).expect("shipped polynomial");
                let ok = fresh == shipped;
                writeln!(out, "{} embedded Phi_3_13", if ok { "PASS" } else { "FAIL" })?;
                return Ok(if ok { 0 } else { 1 });
            }
            let (p1, p2) = (p1.expect("required by clap"), p2.expect("required by clap"));
            let phi = compute_modular_polynomial_with(p1, p2, &policy)?;
            write!(out, "{}", phi.serialize())?;
            Ok(0)
        }
        Command::Nsystem { level, b } => {
            let Level { disc, p1, p2 } = *level;
            let ns = build_nsystem(&Discriminant::new(disc)?, p1 * p2, *b)?;
            for f in &ns.forms {
                writeln!(out, "{}", f.to_line())?;
            }
            Ok(0)
        }
        Command::Multiplicity { level, b } => {
            let Level { disc, p1, p2 } = *level;
            let n = p1 * p2;
            let bs = match b {
                Some(b) => vec![*b],
                None => b_candidates(&Discriminant::new(disc)?, n)?,
            };
            for b in bs {
                match crate::atkin::is_multiple_root_case(disc, p1, p2, b)? {
                    Some(w) => writeln!(out, "B={b} MULTIPLE u={} v={}", w.u, w.v)?,
                    None => writeln!(out, "B={b} SIMPLE")?,
                }
            }
            Ok(0)
        }
        Command::CmCurve { level, prime, b } => {
            let Level { disc, p1, p2 } = *level;
            let opts = CmOptions {
                b: *b,
                seed: cfg.seed,
                policy,
            };
            let res = construct_cm_curve(disc, p1, p2, *prime, &opts)?;
            if cfg.verbosity > 0 {
                writeln!(
                    err,
                    "B = {}, root {} of H, j = {}, ambiguous = {}",
                    res.b, res.wbar, res.jbar, res.certificate.ambiguous
                )?;
            }
            writeln!(out, "{}", res.to_line())?;
            Ok(0)
        }
        Command::Roots {
            prime,
            coeffs,
            disc,
            p1,
            p2,
            b,
        } => {
            if *prime < 3 || !crate::arith::is_prime(*prime) {
                return Err(Error::NotPrime(*prime));
            }
            let f = match (coeffs, disc) {
                (Some(c), _) => {
                    let low_first: Vec<i64> = c.iter().rev().copied().collect();
                    FpPolynomial::new(&low_first, *prime)?
                }
                (None, Some(d)) => {
                    let (p1, p2) = (p1.expect("required"), p2.expect("required"));
                    let b = match b {
                        Some(b) => *b,
                        None => first_candidate(*d, p1 * p2)?,
                    };
                    let h = compute_class_polynomial_with(*d, p1, p2, b, &policy)?;
                    FpPolynomial::from_bigints(&h.coeffs, *prime)
                }
                (None, None) => {
                    return Err(Error::ConditionsViolated(
                        "roots needs --coeffs or --disc/--p1/--p2".into(),
                    ))
                }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for r in roots_with_multiplicity(&f, &mut rng) {
                writeln!(out, "{} {}", r.value, r.multiplicity)?;
            }
            Ok(0)
        }
        Command::ReproduceExample => reproduce_example(cfg, out),
    }
}

/// One named check of the worked example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The five checks of the `D = -56`, `N = 39`, `l = 3593` example.
pub fn example_checks(cfg: &RunConfig) -> Result<Vec<ExampleCheck>> {
    const L: u64 = 3593;
    let policy = cfg.policy();
    let mut checks = Vec::new();
    let h = compute_class_polynomial_with(-56, 3, 13, 10, &policy)?;
    let expected: Vec<BigInt> = [1, -2, -1, 2, -1].iter().map(|&c| BigInt::from(c)).collect();
    checks.push(ExampleCheck {
        name: "class-polynomial",
        passed: h.coeffs_high_first() == expected,
        detail: h.to_string(),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let hq = FpPolynomial::from_bigints(&h.coeffs, L);
    let roots: Vec<u64> = roots_mod_l(&hq, &mut rng).iter().map(|r| r.value()).collect();
    checks.push(ExampleCheck {
        name: "roots-mod-3593",
        passed: roots == [166, 607, 2987, 3428],
        detail: format!("{roots:?}"),
    });

    let phi = embedded(3, 13).expect("shipped polynomial");
    let pairs = [(607, 229), (166, 2979), (3428, 2874), (2987, 2696)];
    let squares_ok = pairs.iter().all(|&(w, j)| {
        let f = evaluate_in_j_mod_l(&phi, FpElement::reduce(w, L));
        let lin = FpPolynomial::linear(FpElement::reduce(j, L));
        f.monic() == lin.mul(&lin)
    });
    checks.push(ExampleCheck {
        name: "perfect-square-quadratics",
        passed: squares_ok,
        detail: pairs
            .iter()
            .map(|(w, j)| format!("{w}->(J-{j})^2"))
            .collect::<Vec<_>>()
            .join(" "),
    });

    let disc = discriminant_in_j(&phi)?;
    checks.push(ExampleCheck {
        name: "discriminant-divisibility",
        passed: zpoly_divides(&h.coeffs, &disc),
        detail: format!("deg D(X) = {}", disc.len() - 1),
    });

    let con1 = multiple_root_condition(-56, 39, 10)?;
    let opts = CmOptions {
        b: Some(10),
        seed: cfg.seed,
        policy,
    };
    let res = construct_cm_curve(-56, 3, 13, L, &opts)?;
    checks.push(ExampleCheck {
        name: "curve-order",
        passed: [3588, 3600].contains(&res.certificate.order)
            && res.used_shortcut
            && con1.is_some_and(|w| (w.u, w.v) == (10, 1)),
        detail: res.to_line(),
    });
    Ok(checks)
}

fn reproduce_example(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<i32> {
    let checks = example_checks(cfg)?;
    for c in &checks {
        writeln!(
            out,
            "{:<4} {:<26} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        )?;
    }
    Ok(if checks.iter().all(|c| c.passed) { 0 } else { 1 })
}
