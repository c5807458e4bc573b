use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serrin_core::radial::{verify, Construction};
use serrin_core::report::{fmt17, to_json};

use crate::config::{parse_dims, FileConfig};
use crate::output::OutDir;
use crate::{Outcome, Shared};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    shared: Shared,
    /// Check the interior construction (both are checked when neither flag is given).
    #[arg(long)]
    interior: bool,
    /// Check the exterior construction.
    #[arg(long)]
    exterior: bool,
    /// Dimensions: `4`, `2,3,5` or the inclusive range `2..8`.
    #[arg(long)]
    n: Option<String>,
}

pub fn run(args: VerifyArgs) -> Result<Outcome> {
    let file = FileConfig::load(args.shared.config.as_deref())?;
    let dims = parse_dims(args.n.as_deref().or(file.n.as_deref()).unwrap_or("2..8"))?;
    let seed = args.shared.seed.or(file.seed).unwrap_or(0);
    let out = args.shared.out.or(file.out).unwrap_or_else(|| PathBuf::from("out"));
    let constructions = match (args.interior, args.exterior) {
        (true, false) => vec![Construction::Interior],
        (false, true) => vec![Construction::Exterior],
        _ => vec![Construction::Interior, Construction::Exterior],
    };
    let dir = OutDir::create(&out)?;
    let mut all = true;
    for c in constructions {
        for &n in &dims {
            let rep = verify(c, n, seed)?;
            dir.write_text(&format!("verify_report_{}_n{n}.json", c.name()), &to_json(&rep))?;
            let f_note = if rep.f_properties_asserted { "" } else { " (informational)" };
            println!(
                "verify {} n={n}: {} max_pde_residual={} eikonal={} f_min_slope={}{f_note} f_positive={}{f_note}",
                c.name(),
                if rep.passed { "PASS" } else { "FAIL" },
                fmt17(rep.max_pde_residual),
                fmt17(rep.eikonal_max_error),
                fmt17(rep.f_min_slope),
                rep.f_positive,
            );
            for f in &rep.failures {
                eprintln!("  {} n={n}: {f}", c.name());
            }
            all &= rep.passed;
        }
    }
    Ok(if all { Outcome::Passed } else { Outcome::Failed })
}
