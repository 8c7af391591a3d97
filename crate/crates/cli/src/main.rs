//! `bgw`: build, certify and export weighing matrices, orthogonal arrays and
//! association schemes.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on usage,
//! I/O or precondition errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bgw_core::classical::{classical_bgw, projective_bgw, support_design};
use bgw_core::dmfile::MatrixFile;
use bgw_core::exactmat::{
    abs_entrywise, gram, matches_affine, product_matches_affine, SignedMatrix,
};
use bgw_core::family::{build_x, verify_lemma33, verify_theorem};
use bgw_core::groupmat::{group_from_signed, is_symmetric_design, verify_bgw, BgwCertificate};
use bgw_core::oa::{
    build_oa, constant_distance, krawtchouk, oa_layers, verify_strength2, OrthogonalArray,
};
use bgw_core::scheme::{
    class_identities, extract_bw, quotient_three_class, scheme_from_bw, spectrum_report,
    verify_axioms,
};
use bgw_core::seeds::{assemble_mathon, seed_matrices, verify_seed_identities, MathonVariant};
use bgw_core::{Error, Report};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bgw", version, about = "Balanced weighing matrices, exactly")]
struct Cli {
    /// Output format for certificates.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    U,
    V,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Bw,
    Bgw,
    Oa,
    Design,
}

#[derive(Subcommand)]
enum Command {
    /// Seed matrices U, V, Y.
    Seed {
        #[command(subcommand)]
        action: SeedAction,
    },
    /// Assemble and certify a BW(19,9,4).
    Mathon {
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// BGW((q^{m+1}-1)/(q-1), q^m, q^m - q^{m-1}; C_n) over GF(q).
    Classical {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u32,
        /// Order n of the cyclic group; must divide q - 1.
        #[arg(long)]
        order: u32,
        /// Use projective-point coordinates instead of the trace form.
        #[arg(long)]
        projective: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete strength-2 orthogonal array OA(q^n, (q^n-1)/(q-1), q, 2).
    Oa {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and certify BW(1+18(9^{m+1}-1)/8, 9^{m+1}, 4*9^m).
    Family {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the block identities and certify only the final matrix.
        #[arg(long)]
        skip_lemma33: bool,
    },
    /// Five-class scheme of a BW(v,k,λ) read from a file.
    Scheme {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        k: u64,
        /// Also certify the three-class quotient.
        #[arg(long)]
        quotient: bool,
        /// Recover a weighing matrix from the scheme and write it here.
        #[arg(long, value_name = "OUT")]
        extract: Option<PathBuf>,
    },
    /// Certify a matrix file.
    Verify {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long = "in")]
        input: PathBuf,
        /// `v,k,λ` for bw/bgw/design, `q,n` for oa (optional there).
        #[arg(long, value_delimiter = ',')]
        params: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum SeedAction {
    /// Check every product identity of the shipped seeds.
    Verify,
}

#[derive(Serialize)]
struct Outcome {
    passed: bool,
    reports: Vec<Report>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    written: Vec<PathBuf>,
}

impl Outcome {
    fn new(reports: Vec<Report>) -> Self {
        Outcome {
            passed: reports.iter().all(Report::passed),
            reports,
            written: Vec::new(),
        }
    }
}

/// Usage-level failures exit with 2; failed certificates with 1.
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn cert_report(cert: &BgwCertificate) -> Report {
    let mut r = Report::new(format!(
        "BGW({},{},{};C_{})",
        cert.v, cert.k, cert.lambda, cert.n
    ));
    r.push("balanced", cert.balanced);
    r.push("layer identities", cert.layer_identities_ok);
    r.push("support design", cert.support_design_ok);
    r.push("counting identity", cert.counting_identity());
    r
}

fn write(out: &Option<PathBuf>, file: &MatrixFile, outcome: &mut Outcome) -> Run<()> {
    if let Some(path) = out {
        file.write(path)?;
        outcome.written.push(path.clone());
    }
    Ok(())
}

fn read(path: &Path) -> Run<MatrixFile> {
    MatrixFile::read(path).map_err(|e| match e {
        Error::Io(e) => Failure::Usage(format!("{}: {e}", path.display())),
        e => Failure::Core(e),
    })
}

fn triple(params: &[u64]) -> Run<(usize, u64, u64)> {
    match params {
        [v, k, l] => Ok((*v as usize, *k, *l)),
        _ => Err(Failure::Usage(format!(
            "--params needs v,k,λ; got {params:?}"
        ))),
    }
}

/// `BW(v,k,λ)`: orthogonality, support design, and the full certificate over C_2.
fn bw_report(m: &SignedMatrix, v: usize, k: u64, lambda: u64) -> Run<Report> {
    let mut r = Report::new(format!("BW({v},{k},{lambda})"));
    r.push(format!("order {v}"), m.shape() == (v, v));
    if m.shape() != (v, v) {
        return Ok(r);
    }
    let (ki, li) = (k as i64, lambda as i64);
    r.push(format!("WW^T = {k}I"), product_matches_affine(m, m, ki, 0)?);
    let a = abs_entrywise(m)?;
    r.push(
        format!("|W||W|^T = {}I + {lambda}J", ki - li),
        product_matches_affine(&a, &a, ki - li, li)?,
    );
    let cert = verify_bgw(&group_from_signed(m)?, v, k, lambda)?;
    r.push_detail("BGW certificate over C_2", cert.passed(), cert.to_string());
    Ok(r)
}

fn oa_report(a: &OrthogonalArray) -> Run<Report> {
    let mut r = Report::new(format!(
        "OA({},{},{},2) index {}",
        a.runs(),
        a.factors(),
        a.q(),
        a.index()
    ));
    r.push("strength 2", verify_strength2(a));
    let (_, layers) = oa_layers(a)?;
    r.push("layers partition the array", layers.partition);
    r.push("same-symbol layer sum", layers.same_symbol);
    r.push("cross-symbol layer sum", layers.cross_symbol);
    match constant_distance(a) {
        Ok(d) => {
            let root = 1 + krawtchouk(a.factors() as u64, u64::from(a.q()), 1, d as i64) == 0;
            r.push_detail("constant row distance", true, format!("d = {d}"));
            r.push("1 + K_1(d) = 0", root);
        }
        Err(e) if e.is_check_failure() => {
            r.push_detail("constant row distance", false, e.to_string())
        }
        Err(e) => return Err(e.into()),
    }
    Ok(r)
}

fn run(command: Command) -> Run<Outcome> {
    match command {
        Command::Seed {
            action: SeedAction::Verify,
        } => Ok(Outcome::new(vec![
            verify_seed_identities(&seed_matrices())?,
        ])),
        Command::Mathon { variant, out } => {
            let which = match variant {
                Variant::U => MathonVariant::U,
                Variant::V => MathonVariant::V,
            };
            let m = assemble_mathon(&seed_matrices(), which)?;
            let mut outcome = Outcome::new(vec![bw_report(&m, 19, 9, 4)?]);
            write(&out, &MatrixFile::from_signed(m), &mut outcome)?;
            Ok(outcome)
        }
        Command::Classical {
            q,
            m,
            order,
            projective,
            out,
        } => {
            let w = if projective {
                projective_bgw(q, m, order)?
            } else {
                classical_bgw(q, m, order)?
            };
            let v = w.rows();
            let k = q.pow(m);
            let cert = verify_bgw(&w, v, k, k - k / q)?;
            let mut reports = vec![cert_report(&cert)];
            let design = support_design(&w)?;
            let mut d = Report::new(format!("support ({v},{k},{})", k - k / q));
            d.push("symmetric design", design.ok);
            reports.push(d);
            let mut outcome = Outcome::new(reports);
            write(&out, &MatrixFile::Group(w), &mut outcome)?;
            Ok(outcome)
        }
        Command::Oa { q, n, out } => {
            let a = build_oa(q, n)?;
            let mut outcome = Outcome::new(vec![oa_report(&a)?]);
            write(&out, &MatrixFile::from_oa(&a)?, &mut outcome)?;
            Ok(outcome)
        }
        Command::Family {
            m,
            out,
            skip_lemma33,
        } => {
            let inst = build_x(m)?;
            let mut reports = Vec::new();
            if !skip_lemma33 {
                reports.push(verify_lemma33(&inst)?);
            }
            reports.push(verify_theorem(&inst)?);
            let mut outcome = Outcome::new(reports);
            write(&out, &MatrixFile::from_signed(inst.x), &mut outcome)?;
            Ok(outcome)
        }
        Command::Scheme {
            input,
            v,
            k,
            quotient,
            extract,
        } => {
            let w = read(&input)?.to_signed()?;
            if v < 2 || k < 1 || (k * (k - 1)) % (v as u64 - 1) != 0 {
                return Err(Failure::Usage(format!(
                    "k(k-1)/(v-1) is not an integer for v={v}, k={k}"
                )));
            }
            let lambda = k * (k - 1) / (v as u64 - 1);
            let s = scheme_from_bw(&w, v, k, lambda)?;
            let mut reports = vec![verify_axioms(&s)?, class_identities(&s, v, k)?];
            let (_, spec) = spectrum_report(&s, v, k)?;
            reports.push(spec);
            if quotient {
                let q = quotient_three_class(&s)?;
                let mut r = verify_axioms(&q.scheme)?;
                r.title = format!(
                    "quotient on {} fibers, valencies {:?}",
                    q.scheme.order(),
                    q.scheme.valencies()
                );
                let kl = k as i64 - lambda as i64;
                r.push(
                    format!("NN^T = {kl}I + {lambda}J"),
                    matches_affine(&gram(&q.incidence)?, kl, lambda as i64),
                );
                reports.push(r);
            }
            let mut written = None;
            if let Some(path) = extract {
                let back = extract_bw(&s)?;
                let mut r = bw_report(&back, v, k, lambda)?;
                r.title = format!("extracted {}", r.title);
                reports.push(r);
                written = Some((path, back));
            }
            let mut outcome = Outcome::new(reports);
            if let Some((path, back)) = written {
                write(&Some(path), &MatrixFile::from_signed(back), &mut outcome)?;
            }
            Ok(outcome)
        }
        Command::Verify {
            kind,
            input,
            params,
        } => {
            let file = read(&input)?;
            let report = match kind {
                Kind::Bw => {
                    let (v, k, l) = triple(&params)?;
                    bw_report(&file.to_signed()?, v, k, l)?
                }
                Kind::Bgw => {
                    let (v, k, l) = triple(&params)?;
                    cert_report(&verify_bgw(&file.to_group()?, v, k, l)?)
                }
                Kind::Design => {
                    let (v, k, l) = triple(&params)?;
                    let n = file.to_signed()?;
                    let mut r = Report::new(format!("symmetric ({v},{k},{l}) design"));
                    r.push(format!("order {v}"), n.shape() == (v, v));
                    r.push(
                        "incidence",
                        n.shape() == (v, v) && n.is_binary() && is_symmetric_design(&n, k, l)?,
                    );
                    r
                }
                Kind::Oa => {
                    let a = file.to_oa()?;
                    let mut r = oa_report(&a)?;
                    match params[..] {
                        [] => {}
                        [q, n] => r.push(
                            format!("shape of OA over GF({q}) with n = {n}"),
                            u64::from(a.q()) == q && a.runs() as u64 == q.pow(n as u32),
                        ),
                        _ => {
                            return Err(Failure::Usage(format!(
                                "--params for oa is q,n; got {params:?}"
                            )))
                        }
                    }
                    r
                }
            };
            Ok(Outcome::new(vec![report]))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.format == Format::Json;
    match run(cli.command) {
        Ok(outcome) => {
            let mut text = String::new();
            if json {
                text = serde_json::to_string_pretty(&outcome).expect("serializable") + "\n";
            } else {
                for r in &outcome.reports {
                    text += &format!("{r}{}\n", r.verdict_line());
                }
                for p in &outcome.written {
                    text += &format!("wrote {}\n", p.display());
                }
            }
            // A closed pipe is not an error worth reporting.
            let _ = std::io::stdout().write_all(text.as_bytes());
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                for r in &outcome.reports {
                    for c in r.failures() {
                        eprintln!("failed: {}: {}", r.title, c.name);
                    }
                }
                ExitCode::from(1)
            }
        }
        Err(Failure::Core(e)) if e.is_check_failure() => {
            eprintln!("check failed: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
