//! The `cyclekap` command line.
//!
//! Exit codes: 0 for success or a positive verdict, 1 for a negative
//! verdict, 2 for errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use cyclekap::admissible::is_admissible;
use cyclekap::cyclerep::fitting_split;
use cyclekap::filtration::kaplansky_invariants;
use cyclekap::poly::invariant_factors;
use cyclekap::{
    adapted_basis, decide_isomorphic, decompose, gen, realize_finite, selfcheck, AdmissibleFamily, AnyCycleRep,
    CycleRep, Error, Field, FieldSpec, MorphismFamily, PrimeField, Rationals, Verdict,
};

#[derive(Parser, Debug)]
#[command(name = "cyclekap", version, about = "Cyclic Kaplansky invariants of n-cycles of linear maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the invariant table of a cycle.
    Invariants { file: PathBuf },
    /// Decide whether two cycles are isomorphic.
    Iso {
        left: PathBuf,
        right: PathBuf,
        /// Write the isomorphism certificate here when one exists.
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Build an isomorphism certificate and re-verify it from the file.
    BuildIso {
        left: PathBuf,
        right: PathBuf,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Check a certificate against two cycle files.
    VerifyCert {
        left: PathBuf,
        right: PathBuf,
        certificate: PathBuf,
    },
    /// Decompose a locally nilpotent cycle into canonical cells.
    Decompose {
        file: PathBuf,
        /// Write the certificate from the input to its cell realization.
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Print an adapted basis of a locally nilpotent cycle.
    AdaptedBasis { file: PathBuf },
    /// Realize the finite table of a support file.
    Realize {
        support: PathBuf,
        #[arg(short = 'o')]
        output: PathBuf,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
    },
    /// Check a support file for admissibility.
    CheckAdmissible { support: PathBuf },
    /// Emit a random change of basis of a cell realization.
    Gen {
        #[arg(long)]
        n: usize,
        /// Cells as `base:size[xcount],...`.
        #[arg(long)]
        cells: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Run the randomized property suites.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        iters: u64,
    },
}

type Outcome = Result<i32, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_rep(path: &Path) -> Result<AnyCycleRep, String> {
    AnyCycleRep::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn lib(e: Error) -> String {
    e.to_string()
}

fn io(e: std::io::Error) -> String {
    e.to_string()
}

macro_rules! on_rep {
    ($rep:expr, |$u:ident| $body:expr) => {
        match $rep {
            AnyCycleRep::Rational($u) => $body,
            AnyCycleRep::Prime($u) => $body,
        }
    };
}

macro_rules! on_pair {
    ($a:expr, $b:expr, |$u:ident, $v:ident| $body:expr) => {
        match ($a, $b) {
            (AnyCycleRep::Rational($u), AnyCycleRep::Rational($v)) => $body,
            (AnyCycleRep::Prime($u), AnyCycleRep::Prime($v)) => $body,
            (x, y) => Err(lib(Error::FieldMismatch(x.field_spec().to_string(), y.field_spec().to_string()))),
        }
    };
}

macro_rules! on_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = Rationals;
                $body
            }
            FieldSpec::PrimeField(p) => {
                let $f = PrimeField::new(p).map_err(lib)?;
                $body
            }
        }
    };
}

fn invariants<F: Field>(u: &CycleRep<F>, out: &mut dyn Write) -> Outcome {
    if u.is_locally_nilpotent() {
        let t = kaplansky_invariants(u).map_err(lib)?;
        if t.is_empty() {
            writeln!(out, "# all invariants vanish").map_err(io)?;
        }
        write!(out, "{t}").map_err(io)?;
        return Ok(0);
    }
    let split = fitting_split(u).map_err(lib)?;
    let t = kaplansky_invariants(&split.nil).map_err(lib)?;
    writeln!(out, "# nilpotent part").map_err(io)?;
    write!(out, "{t}").map_err(io)?;
    writeln!(out, "# regular part, dims {:?}", split.reg.dims()).map_err(io)?;
    let factors = invariant_factors(&split.reg.compose_cycle(0)).map_err(lib)?;
    let parts: Vec<String> = factors.iter().map(|p| p.to_string()).collect();
    writeln!(out, "regular-factors {}", parts.join(", ")).map_err(io)?;
    Ok(0)
}

fn verify_from_file<F: Field>(u: &CycleRep<F>, v: &CycleRep<F>, path: &Path) -> Result<(), String> {
    let text = read(path)?;
    let phi = MorphismFamily::parse(u.field(), &text, u, v).map_err(|e| format!("{}: {e}", path.display()))?;
    phi.verify_iso(u, v).map_err(lib)
}

fn iso<F: Field>(u: &CycleRep<F>, v: &CycleRep<F>, output: Option<&Path>, verify: bool, out: &mut dyn Write) -> Outcome {
    match decide_isomorphic(u, v).map_err(lib)? {
        Verdict::NotIsomorphic(reason) => {
            writeln!(out, "not isomorphic: {reason}").map_err(io)?;
            Ok(1)
        }
        Verdict::Isomorphic(phi) => {
            writeln!(out, "isomorphic").map_err(io)?;
            if let Some(path) = output {
                write_file(path, &phi.to_text())?;
                writeln!(out, "certificate: {}", path.display()).map_err(io)?;
                if verify {
                    verify_from_file(u, v, path)?;
                    writeln!(out, "certificate verified").map_err(io)?;
                }
            }
            Ok(0)
        }
    }
}

fn verify_cert<F: Field>(u: &CycleRep<F>, v: &CycleRep<F>, path: &Path, out: &mut dyn Write) -> Outcome {
    let text = read(path)?;
    let phi = MorphismFamily::parse(u.field(), &text, u, v).map_err(|e| format!("{}: {e}", path.display()))?;
    match phi.verify_iso(u, v) {
        Ok(()) => {
            writeln!(out, "certificate valid").map_err(io)?;
            Ok(0)
        }
        Err(e) => {
            writeln!(out, "certificate invalid: {e}").map_err(io)?;
            Ok(1)
        }
    }
}

fn decompose_cmd<F: Field>(u: &CycleRep<F>, output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let d = decompose(u).map_err(lib)?;
    write!(out, "{}", d.cells).map_err(io)?;
    if let Some(path) = output {
        write_file(path, &d.morphism.to_text())?;
    }
    Ok(0)
}

fn adapted_cmd<F: Field>(u: &CycleRep<F>, out: &mut dyn Write) -> Outcome {
    let b = adapted_basis(u).map_err(lib)?;
    write!(out, "{}", b.to_text()).map_err(io)?;
    Ok(0)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Invariants { file } => on_rep!(read_rep(&file)?, |u| invariants(&u, out)),
        Command::Iso { left, right, output } => {
            on_pair!(read_rep(&left)?, read_rep(&right)?, |u, v| iso(&u, &v, output.as_deref(), false, out))
        }
        Command::BuildIso { left, right, output } => {
            on_pair!(read_rep(&left)?, read_rep(&right)?, |u, v| iso(&u, &v, Some(&output), true, out))
        }
        Command::VerifyCert { left, right, certificate } => {
            on_pair!(read_rep(&left)?, read_rep(&right)?, |u, v| verify_cert(&u, &v, &certificate, out))
        }
        Command::Decompose { file, output } => on_rep!(read_rep(&file)?, |u| decompose_cmd(&u, output.as_deref(), out)),
        Command::AdaptedBasis { file } => on_rep!(read_rep(&file)?, |u| adapted_cmd(&u, out)),
        Command::Realize { support, output, field } => {
            let fam = AdmissibleFamily::parse(&read(&support)?).map_err(|e| format!("{}: {e}", support.display()))?;
            if let Err(c) = is_admissible(fam.support()) {
                return Err(format!("support is not admissible: counterexample {c}"));
            }
            let table = fam.to_table().map_err(lib)?;
            let n = fam.support().n();
            let text = on_field!(field, |f| realize_finite(&f, n, &table).map_err(lib)?.to_text());
            write_file(&output, &text)?;
            writeln!(out, "wrote {}", output.display()).map_err(io)?;
            Ok(0)
        }
        Command::CheckAdmissible { support } => {
            let fam = AdmissibleFamily::parse(&read(&support)?).map_err(|e| format!("{}: {e}", support.display()))?;
            match is_admissible(fam.support()) {
                Ok(()) => {
                    writeln!(out, "admissible").map_err(io)?;
                    Ok(0)
                }
                Err(c) => {
                    writeln!(out, "not admissible: counterexample {c}").map_err(io)?;
                    Ok(1)
                }
            }
        }
        Command::Gen { n, cells, seed, field, output } => {
            if n == 0 {
                return Err("--n must be at least 1".into());
            }
            let cells = gen::parse_cells_spec(n, &cells).map_err(lib)?;
            let text = on_field!(field, |f| gen::generate(&f, &cells, seed).map_err(lib)?.to_text());
            write_file(&output, &text)?;
            writeln!(out, "wrote {}", output.display()).map_err(io)?;
            Ok(0)
        }
        Command::Selfcheck { seed, iters } => {
            let report = selfcheck::run(seed, iters);
            write!(out, "{report}").map_err(io)?;
            Ok(if report.failed() == 0 { 0 } else { 1 })
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
