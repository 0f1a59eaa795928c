use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use divcurve_core::algnum::{height_by_places, place_report, weil_height};
use divcurve_core::curves::{coset_membership, divisible_points, ParametricCurve};
use divcurve_core::edge_approx::{certify, certify_padic, LaurentPoly2};
use divcurve_core::poly::parse::{parse_int_poly, parse_rational};
use divcurve_core::survey::{run_survey, SurveyConfig};
use divcurve_core::torus::{torus_points, TorusOptions};
use divcurve_core::AlgebraicNumber;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "divcurve", version, about = "Divisible points, heights and torus intersections of curves in G_m^N")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weil height of a root of an irreducible integer polynomial.
    Heights {
        #[arg(long)]
        minpoly: String,
        #[arg(long, default_value_t = 0)]
        root_index: usize,
        /// Also print the decomposition over places.
        #[arg(long)]
        places: bool,
    },
    /// Approximation certificate for a point on a Laurent curve P(X, Y) = 0.
    Certify {
        #[arg(long)]
        poly: String,
        /// Rational `a/b` or `<minpoly>:<root index>`.
        #[arg(long, allow_hyphen_values = true)]
        x1: String,
        #[arg(long, allow_hyphen_values = true)]
        x2: String,
        /// Certify in the p-adic absolute value (rational points only).
        #[arg(long)]
        padic: Option<u64>,
    },
    /// Points x on the curve with x^n also on it.
    Divisible {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Whether the curve lies in a proper coset of the torus.
    Coset {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Intersection with the unit torus |x_i| = 1.
    Torus {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Subdivision depth of the numeric cross-check.
        #[arg(long, default_value_t = 10)]
        depth: u32,
    },
    /// Lattice and growth survey over a range of n.
    Survey {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        /// Comma-separated primes for the S-integral filter.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_value(s: &str) -> Result<AlgebraicNumber> {
    match s.rsplit_once(':') {
        Some((poly, idx)) => {
            let p = parse_int_poly(poly)?;
            let i: usize = idx.trim().parse().with_context(|| format!("bad root index '{}'", idx))?;
            Ok(AlgebraicNumber::new(&p, i)?)
        }
        None => Ok(AlgebraicNumber::rational(&parse_rational(s)?)),
    }
}

fn read_curve(path: &PathBuf) -> Result<ParametricCurve> {
    ParametricCurve::read_file(path).with_context(|| format!("reading curve {}", path.display()))
}

fn run(cmd: Command) -> Result<Option<Value>> {
    Ok(Some(match cmd {
        Command::Heights { minpoly, root_index, places } => {
            let x = AlgebraicNumber::new(&parse_int_poly(&minpoly)?, root_index)?;
            let h = weil_height(&x)?;
            let mut out = json!({
                "minpoly": x.minpoly().coeff_strings(),
                "root_index": x.index(),
                "approx": [x.approx().0, x.approx().1],
                "degree": x.degree(),
                "h": h,
                "H": h.exp(),
            });
            if places {
                out["height_by_places"] = json!(height_by_places(&x)?);
                out["places"] = serde_json::to_value(place_report(&x)?)?;
            }
            out
        }
        Command::Certify { poly, x1, x2, padic } => {
            let p: LaurentPoly2 = poly.parse()?;
            match padic {
                Some(prime) => {
                    let q1: BigRational = parse_rational(&x1).context("p-adic mode needs rational x1")?;
                    let q2: BigRational = parse_rational(&x2).context("p-adic mode needs rational x2")?;
                    certify_padic(&p, &q1, &q2, &BigInt::from(prime))?.to_json()
                }
                None => certify(&p, &parse_value(&x1)?, &parse_value(&x2)?)?.to_json(),
            }
        }
        Command::Divisible { curve, n } => {
            let c = read_curve(&curve)?;
            let recs = divisible_points(&c, n)?;
            json!({
                "curve": c.coords().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "n": n,
                "records": recs.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            })
        }
        Command::Coset { curve } => coset_membership(&read_curve(&curve)?).to_json(),
        Command::Torus { curve, tol, depth } => {
            let c = read_curve(&curve)?;
            serde_json::to_value(torus_points(&c, &TorusOptions { tol, depth, ..Default::default() })?)?
        }
        Command::Survey { curve, n_min, n_max, primes, out } => {
            let c = read_curve(&curve)?;
            let cfg = SurveyConfig { curve_label: curve.display().to_string(), n_min, n_max, primes };
            let report = run_survey(&c, &cfg)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, report.to_json_string() + "\n")
                        .with_context(|| format!("writing {}", path.display()))?;
                    return Ok(None);
                }
                None => report.to_json(),
            }
        }
    }))
}

fn main() -> ExitCode {
    match emit(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::FAILURE
        }
    }
}

fn emit(cmd: Command) -> Result<()> {
    if let Some(v) = run(cmd)? {
        let text = serde_json::to_string_pretty(&v).map_err(|e| anyhow!(e))?;
        let mut out = std::io::stdout().lock();
        match writeln!(out, "{}", text) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_forms() {
        assert!(parse_value("3/4").unwrap().as_rational().is_some());
        let x = parse_value("t^2 - t + 1:1").unwrap();
        assert_eq!(x.degree(), 2);
        assert!(parse_value("t^2 + 1:7").is_err());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse_value("abc").is_err());
        assert!(parse_value("1/0").is_err());
    }
}
