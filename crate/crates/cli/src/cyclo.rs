use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use cycloperfect::cyclotomic::{self, AbstractOddFactorization, CycElement};
use num_bigint::BigInt;
use serde::Serialize;

use crate::output::Rendered;
use crate::CliError;

#[derive(Debug, Args)]
pub struct CycloArgs {
    /// Odd prime index p of the field Q(ζ_p).
    #[arg(long)]
    p: u32,
    #[command(subcommand)]
    command: CycloCommand,
}

#[derive(Debug, Subcommand)]
enum CycloCommand {
    /// Norm of an element given as comma-separated coefficients of 1, ζ, ζ², ….
    Norm {
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Whether an element is divisible by 1 − ζ.
    Even {
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Field discriminant.
    Discriminant,
    /// Whether p is totally ramified, (p) = (1 − ζ)^{p−1}.
    RamifyCheck,
    /// Residue degree of a rational prime q.
    ResidueDegree {
        #[arg(long)]
        q: u64,
    },
    /// Norm of (1 − ζ)^k − 1.
    MersenneNorm {
        #[arg(long)]
        k: u64,
    },
    /// Mersenne norms for k ≡ ±1 (mod 4p) up to max-k, with primality.
    Conjecture {
        #[arg(long)]
        max_k: u64,
    },
    /// Check an odd exponent pattern read as JSON from a file or stdin.
    ValidateOddForm {
        /// Input file; stdin when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn element(p: u32, text: &str) -> Result<CycElement, CliError> {
    let coeffs = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<BigInt>()
                .map_err(|_| CliError::Usage(format!("bad coefficient {c:?} in {text:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CycElement::new(p, coeffs)?)
}

#[derive(Serialize)]
struct Value<T: Serialize> {
    p: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    element: Option<String>,
    value: T,
}

fn value<T: Serialize + ToString>(p: u32, element: Option<&CycElement>, v: T) -> Result<Rendered, CliError> {
    let pretty = v.to_string();
    Rendered::new(
        &Value {
            p,
            element: element.map(ToString::to_string),
            value: v,
        },
        pretty,
    )
}

#[derive(Serialize)]
struct OddFormVerdict {
    p: u32,
    conforms: bool,
    violated_condition: Option<String>,
}

pub fn run(args: &CycloArgs) -> Result<Rendered, CliError> {
    let p = args.p;
    match &args.command {
        CycloCommand::Norm { coeffs } => {
            let x = element(p, coeffs)?;
            value(p, Some(&x), cyclotomic::cyc_norm(&x).to_string())
        }
        CycloCommand::Even { coeffs } => {
            let x = element(p, coeffs)?;
            value(p, Some(&x), cyclotomic::cyc_is_even(&x))
        }
        CycloCommand::Discriminant => value(p, None, cyclotomic::discriminant(p)?.to_string()),
        CycloCommand::RamifyCheck => value(p, None, cyclotomic::ramification_check(p)?),
        CycloCommand::ResidueDegree { q } => value(p, None, cyclotomic::residue_degree(*q, p)?),
        CycloCommand::MersenneNorm { k } => value(p, None, cyclotomic::cyc_mersenne_norm(p, *k)?.to_string()),
        CycloCommand::Conjecture { max_k } => {
            let rows = cyclotomic::conjecture_harness(p, *max_k)?;
            let pretty = rows
                .iter()
                .map(|r| format!("k = {:>4}  prime {:<5}  {}", r.k, r.norm_is_prime, r.mersenne_norm))
                .collect::<Vec<_>>()
                .join("\n");
            let table = rows
                .iter()
                .map(|r| vec![r.p.to_string(), r.k.to_string(), r.mersenne_norm.to_string(), r.norm_is_prime.to_string()])
                .collect();
            Rendered::new(&rows, pretty)?.with_table(&["p", "k", "mersenne_norm", "norm_is_prime"], table)
        }
        CycloCommand::ValidateOddForm { input } => {
            let mut text = String::new();
            match input {
                Some(path) => text = std::fs::read_to_string(path)?,
                None => {
                    std::io::stdin().read_to_string(&mut text)?;
                }
            }
            let f: AbstractOddFactorization =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad odd-form JSON: {e}")))?;
            if f.p != p {
                return Err(CliError::Domain(format!("input is for p = {}, command for p = {p}", f.p)));
            }
            let (conforms, violated_condition) = cyclotomic::validate_general_odd_form(&f)?;
            let pretty = match &violated_condition {
                None => format!("conforms: {conforms}"),
                Some(why) => format!("conforms: {conforms} ({why})"),
            };
            Rendered::new(
                &OddFormVerdict {
                    p,
                    conforms,
                    violated_condition,
                },
                pretty,
            )
        }
    }
}
