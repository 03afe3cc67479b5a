//! Thin command-line front end over the library: each subcommand reads and
//! writes the documented JSON formats and delegates to one library call.
//!
//! Exit codes: 0 success, 1 verification failure or internal error,
//! 2 theorem refusal, 3 search-backend exhaustion, 4 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use pencils::error::{Error, Result};
use pencils::io::{
    self, AnalyzeDto, CertificateDto, CheckDto, OracleMissingDto, OracleReportDto, PairDto,
    PencilDto, SpectrumEntryDto,
};
use pencils::oracle;
use pencils::place::{place, PlacementRequest, PlacementTarget};
use pencils::poly::Poly;
use pencils::reach::{applicability_of_structures, const_rank_bound, interlace, min_rank};
use pencils::smith::invariant_factors;
use pencils::synth::{synthesize, SynthOptions, SynthRequest, SynthTarget};
use pencils::weier::{weierstrass_structure, WeierstrassStructure};
use pencils::{Pencil, Scalar};

#[derive(Parser)]
#[command(
    name = "pencils",
    about = "Exact Weierstrass analysis and fixed-rank perturbation of regular matrix pencils",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure report of one pencil: rank, regularity, invariant factors,
    /// homogeneous invariant factors, spectrum in the base field.
    Analyze {
        #[arg(long)]
        input: PathBuf,
    },
    /// Interlacing and applicability report for a pair at a given rank.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rank: usize,
    },
    /// Smallest rank at which the interlacing conditions hold.
    MinRank {
        #[arg(long)]
        input: PathBuf,
    },
    /// Synthesize a perturbation of exact rank with a verified certificate.
    Synth {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Shuffle seed for the rational search backend order.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Place the determinant of `A + P` under a rank-`r` perturbation.
    Place {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rank: usize,
        /// Target determinant as a coefficient list, lowest degree first,
        /// e.g. "[0, -1, 1]" for s^2 - s.
        #[arg(long)]
        det: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-derive every claim of a certificate from scratch.
    Verify {
        #[arg(long)]
        pencil: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Exhaustive reachability sweep over a small prime field.
    Oracle {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        pencil: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
}

fn analyze_dto(a: &Pencil) -> Result<AnalyzeDto> {
    let regular = a.is_regular()?;
    let mut dto = AnalyzeDto {
        field: io::field_to_string(a.field()),
        m: a.rows(),
        n: a.cols(),
        regular,
        normal_rank: a.normal_rank(),
        invariant_factors: None,
        hfactors: None,
        deg_det: None,
        spectrum: None,
    };
    let factors = invariant_factors(&a.to_poly_matrix());
    dto.invariant_factors = Some(
        factors
            .iter()
            .map(|f| f.coeffs().iter().map(io::scalar_to_value).collect())
            .collect(),
    );
    if regular {
        let s = weierstrass_structure(a)?;
        dto.hfactors = Some(io::structure_to_dto(&s).hfactors);
        dto.deg_det = a.det_poly()?.degree();
        let mut spectrum = Vec::new();
        for pt in s.spectrum_in_field()? {
            spectrum.push(SpectrumEntryDto {
                point: io::point_to_value(&pt),
                mu_a: s.mu_a(&pt),
                multiplicities: s.mult_seq(&pt),
            });
        }
        dto.spectrum = Some(spectrum);
    }
    Ok(dto)
}

fn load_pair(path: &std::path::Path) -> Result<(Pencil, WeierstrassStructure, Option<Pencil>)> {
    let pair: PairDto = io::read_json(path)?;
    let a = io::pencil_from_dto(&pair.a)?;
    match (&pair.b, &pair.psi) {
        (Some(bdto), None) => {
            let b = io::pencil_from_dto(bdto)?;
            if b.field() != a.field() {
                return Err(Error::Parse("the two pencils use different fields".into()));
            }
            let psi = weierstrass_structure(&b)?;
            Ok((a, psi, Some(b)))
        }
        (None, Some(sdto)) => {
            let psi = io::structure_from_dto(a.field(), sdto)?;
            Ok((a, psi, None))
        }
        _ => Err(Error::Parse(
            "pair file needs exactly one of `b` or `psi`".into(),
        )),
    }
}

fn parse_det(a: &Pencil, text: &str) -> Result<Poly> {
    let values: Vec<Value> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("--det must be a JSON coefficient array: {e}")))?;
    let coeffs: Result<Vec<Scalar>> = values
        .iter()
        .map(|v| io::scalar_from_value(a.field(), v))
        .collect();
    Ok(Poly::new(a.field(), coeffs?))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { input } => {
            let a = io::pencil_from_dto(&io::read_json::<PencilDto>(&input)?)?;
            print!("{}", io::to_canonical_string(&analyze_dto(&a)?)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { input, rank } => {
            let (a, psi, b) = load_pair(&input)?;
            let phi = weierstrass_structure(&a)?;
            let il = interlace(&phi, &psi, rank)?;
            let app = applicability_of_structures(&phi, &psi)?;
            let bound = b
                .as_ref()
                .filter(|b| a.has_identity_leading() && b.has_identity_leading())
                .map(|b| const_rank_bound(&a, b))
                .transpose()?;
            let dto = CheckDto {
                interlace: io::interlace_to_dto(&il),
                applicability: io::applicability_to_dto(&app),
                const_rank_bound_informational: bound,
            };
            print!("{}", io::to_canonical_string(&dto)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::MinRank { input } => {
            let (a, psi, _) = load_pair(&input)?;
            let phi = weierstrass_structure(&a)?;
            let r0 = min_rank(&phi, &psi)?;
            println!("{}", serde_json::json!({ "min_rank": r0 }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth {
            input,
            rank,
            out,
            seed,
        } => {
            let (a, psi, b) = load_pair(&input)?;
            let target = match b {
                Some(b) => SynthTarget::Pencil(b),
                None => SynthTarget::Structure(psi.clone()),
            };
            let opts = SynthOptions {
                seed,
                ..SynthOptions::default()
            };
            let cert = synthesize(&SynthRequest { a, target, rank }, &opts)?;
            let dto = io::certificate_to_dto(&cert, &psi, None);
            let text = io::to_canonical_string(&dto)?;
            match out {
                Some(path) => std::fs::write(&path, &text)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Place {
            input,
            rank,
            det,
            out,
            seed,
        } => {
            let a = io::pencil_from_dto(&io::read_json::<PencilDto>(&input)?)?;
            let q = parse_det(&a, &det)?;
            let opts = SynthOptions {
                seed,
                ..SynthOptions::default()
            };
            let cert = place(
                &PlacementRequest {
                    a,
                    rank,
                    target: PlacementTarget::Determinant(q),
                },
                &opts,
            )?;
            let dto = io::certificate_to_dto(
                &cert.synth,
                &cert.synth.achieved.clone(),
                Some((&cert.k, &cert.psi)),
            );
            let text = io::to_canonical_string(&dto)?;
            match out {
                Some(path) => std::fs::write(&path, &text)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { pencil, cert } => {
            let a = io::pencil_from_dto(&io::read_json::<PencilDto>(&pencil)?)?;
            let dto: CertificateDto = io::read_json(&cert)?;
            match verify_cert(&a, &dto) {
                Ok(()) => {
                    println!("{}", serde_json::json!({ "verify": "pass" }));
                    Ok(ExitCode::SUCCESS)
                }
                Err(Error::InternalCheck(msg)) => {
                    println!("{}", serde_json::json!({ "verify": "fail", "reason": msg }));
                    Ok(ExitCode::from(1))
                }
                Err(other) => Err(other),
            }
        }
        Command::Oracle {
            field,
            n,
            rank,
            pencil,
            report,
        } => {
            let f = io::field_from_string(&field)?;
            let a = io::pencil_from_dto(&io::read_json::<PencilDto>(&pencil)?)?;
            if a.field() != f || a.rows() != n || a.cols() != n {
                return Err(Error::Parse(format!(
                    "--field/--n disagree with the pencil file ({} {}x{})",
                    a.field(),
                    a.rows(),
                    a.cols()
                )));
            }
            let rep = oracle::compare(&a, rank, 24)?;
            let dto = OracleReportDto {
                field: io::field_to_string(f),
                n,
                rank,
                reachable: rep.reachable.iter().map(io::structure_to_dto).collect(),
                predicate: rep.predicate.iter().map(io::structure_to_dto).collect(),
                missing: rep
                    .missing
                    .iter()
                    .map(|(s, app)| OracleMissingDto {
                        structure: io::structure_to_dto(s),
                        applicability: io::applicability_to_dto(app),
                    })
                    .collect(),
                extra: rep.extra.iter().map(io::structure_to_dto).collect(),
            };
            io::write_json(&report, &dto)?;
            println!(
                "{}",
                serde_json::json!({
                    "reachable": rep.reachable.len(),
                    "predicate": rep.predicate.len(),
                    "missing": rep.missing.len(),
                    "extra": rep.extra.len(),
                })
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Recomputes rank, structure, and (when claimed) the determinant of a
/// stored certificate.
fn verify_cert(a: &Pencil, dto: &CertificateDto) -> Result<()> {
    let p = io::pencil_from_dto(&dto.p)?;
    if p.field() != a.field() || p.rows() != a.rows() || p.cols() != a.cols() {
        return Err(Error::Parse(
            "certificate pencil shape differs from the base".into(),
        ));
    }
    let target = io::structure_from_dto(a.field(), &dto.target)?;
    let claimed = io::structure_from_dto(a.field(), &dto.achieved)?;
    let rank = p.normal_rank();
    if rank != dto.rank {
        return Err(Error::InternalCheck(format!(
            "claimed rank {}, recomputed {rank}",
            dto.rank
        )));
    }
    let sum = a.add(&p);
    if !sum.is_regular()? {
        return Err(Error::InternalCheck("perturbed pencil is singular".into()));
    }
    let achieved = weierstrass_structure(&sum)?;
    if achieved != claimed {
        return Err(Error::InternalCheck(format!(
            "claimed structure {claimed}, recomputed {achieved}"
        )));
    }
    if achieved != target {
        return Err(Error::InternalCheck(format!(
            "target {target} not achieved: got {achieved}"
        )));
    }
    if let Some(det_claim) = &dto.det {
        let k = io::scalar_from_value(a.field(), &det_claim.k)?;
        let coeffs: Result<Vec<Scalar>> = det_claim
            .psi
            .finite
            .iter()
            .map(|v| io::scalar_from_value(a.field(), v))
            .collect();
        let psi_fin = Poly::new(a.field(), coeffs?);
        let det = sum.det_poly()?;
        let n = a.rows();
        let (lead, hdet) = pencils::homog::homogenize(&det, n)?;
        let expect = pencils::homog::HomogPoly::from_parts(det_claim.psi.inf_mult, psi_fin).1;
        if hdet != expect || lead != k {
            return Err(Error::InternalCheck("determinant claim failed".into()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Refused(_) => ExitCode::from(2),
                Error::BackendExhausted => ExitCode::from(3),
                Error::Parse(_) | Error::NotPrime(_) | Error::InvalidArgument(_) => {
                    ExitCode::from(4)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}
