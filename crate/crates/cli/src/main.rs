use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use spinlab_cli::certificate::{canonical_json, golden_mismatch};
use spinlab_cli::commands::{self, CliError, Family, Output, Source};
use spinlab_cli::verify;

/// Homology-level workbench for Dehn twist factorizations and spin
/// Lefschetz fibrations.
///
/// Exit codes: 0 all verdicts pass, 2 parse error, 3 precondition failed,
/// 4 verdict or golden mismatch.
#[derive(Parser)]
#[command(name = "spinlab", version)]
struct Cli {
    /// Print canonical JSON certificates.
    #[arg(long, global = true)]
    json: bool,
    /// Print tab-separated rows where the command has them.
    #[arg(long, global = true)]
    tsv: bool,
    /// Compare the certificate output with a golden JSON file.
    #[arg(long, global = true, value_name = "FILE")]
    expect: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Factorization in canonical JSON.
    #[arg(conflicts_with = "family")]
    file: Option<String>,
    /// Built-in factorization: building-block, u, v or z.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    g: Option<usize>,
    #[arg(long, default_value_t = 0)]
    k: u32,
}

impl Input {
    fn source(&self) -> Result<Source, CliError> {
        match (&self.file, &self.family) {
            (Some(f), _) => Ok(Source::File(f.clone())),
            (None, Some(family)) => {
                let family = Family::parse(family)?;
                let g = self.g.ok_or_else(|| CliError::parse("--family needs --g"))?;
                Ok(Source::Family { family, g, k: self.k })
            }
            (None, None) => Err(CliError::parse("give a factorization FILE or --family")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Spin criterion: q = 1 on every vanishing cycle and an even boundary power.
    CheckSpin {
        #[command(flatten)]
        input: Input,
        /// `uniform`, `chain`, or values like `x*:1 y1:1 y3:1`.
        #[arg(long)]
        form: Option<String>,
    },
    /// Checks that the product of the twists is the identity on homology.
    CheckRelation {
        #[command(flatten)]
        input: Input,
    },
    /// Euler characteristic, signature, chi_h and c1^2.
    Invariants {
        #[command(flatten)]
        input: Input,
        /// meyer, endo or bred.
        #[arg(long)]
        signature: Option<String>,
    },
    /// First homology of the total space.
    H1 {
        #[command(flatten)]
        input: Input,
    },
    /// Lattice points of the realized region.
    Geography {
        #[arg(long, value_name = "N")]
        max_m: u64,
        /// Write points and bounding lines as JSON.
        #[arg(long, value_name = "FILE")]
        plot_data: Option<String>,
    },
    /// Spin fibration with prescribed fundamental group.
    ThmA {
        #[arg(long, value_name = "FILE")]
        presentation: String,
    },
    /// The bred factorization for genus g with k pencils.
    ThmB {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: u32,
    },
    /// Runs the reproduction suite against the built-in golden file.
    VerifyPaper,
    /// Runs a script; one certificate per query.
    Run { script: String },
}

fn dispatch(command: &Command) -> Result<(Output, Option<String>), CliError> {
    let out = match command {
        Command::CheckSpin { input, form } => commands::check_spin_cmd(&input.source()?, form.as_deref())?,
        Command::CheckRelation { input } => commands::check_relation_cmd(&input.source()?)?,
        Command::Invariants { input, signature } => {
            commands::invariants_cmd(&input.source()?, signature.as_deref())?
        }
        Command::H1 { input } => commands::h1_cmd(&input.source()?)?,
        Command::Geography { max_m, plot_data } => {
            if let Some(path) = plot_data {
                let data = commands::plot_data(*max_m)?;
                std::fs::write(path, canonical_json(&data))
                    .map_err(|e| CliError::precondition(format!("{path}: {e}")))?;
            }
            commands::geography_cmd(*max_m)?
        }
        Command::ThmA { presentation } => commands::thm_a_cmd(presentation)?,
        Command::ThmB { g, k } => commands::thm_b_cmd(*g, *k)?,
        Command::VerifyPaper => return verify::verify_paper_cmd(),
        Command::Run { script } => commands::run_cmd(&commands::read(script)?)?,
    };
    Ok((out, None))
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let (out, golden) = dispatch(&cli.command)?;
    if cli.json {
        print!("{}", canonical_json(&out.json()));
    } else if let (true, Some(tsv)) = (cli.tsv, &out.tsv) {
        print!("{tsv}");
    } else {
        for line in &out.text {
            println!("{line}");
        }
        println!("verdict: {}", if out.passes() { "pass" } else { "FAIL" });
    }
    let mut code = if out.passes() { 0 } else { 4 };
    if let Some(diff) = golden {
        eprintln!("golden mismatch: {diff}");
        code = 4;
    }
    if let Some(path) = &cli.expect {
        let text = commands::read(path)?;
        let expected: Value =
            serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{path}: {e}")))?;
        if let Some(diff) = golden_mismatch(&out.json(), &expected) {
            eprintln!("expectation mismatch: {diff}");
            code = 4;
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
